//! Contractions of boundary subgraphs and expansion of paths back through
//! them.
//!
//! A 2-contraction replaces the part of the graph hanging behind a 2-cut
//! {x, y} by parallel x-y arcs carrying the attainable path labels; a
//! 3-contraction replaces a balanced part behind a 3-cut by a balanced
//! triangle. Both preserve the s-t label set. Each added arc remembers a
//! witness path inside the removed part so contracted paths can be
//! expanded to original paths of the same label.

use std::collections::BTreeSet;

use crate::group::GroupElement;
use crate::lgraph::{arcs_between, ArcId, LabeledGraph, Path};
use crate::normalize::is_balanced;

/// One arc introduced (or reused) by a contraction.
#[derive(Debug, Clone)]
pub struct AddedArc {
    pub arc: ArcId,
    /// Traversal label of the arc read into `to`.
    pub label: GroupElement,
    pub from: String,
    pub to: String,
    /// A path from `from` to `to` inside the removed boundary subgraph
    /// realizing `label`. None when an equivalent arc of the host graph was
    /// reused, in which case no expansion is needed.
    pub witness: Option<Path>,
}

/// What a contraction removed and added; enough to expand paths back.
#[derive(Debug, Clone)]
pub struct ContractionRecord {
    pub kind: ContractionKind,
    pub removed: BTreeSet<String>,
    pub boundary: BTreeSet<String>,
    pub arcs: Vec<AddedArc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionKind {
    Two,
    Three,
}

/// The boundary subgraph: the induced subgraph on `X` and its neighborhood
/// with the arcs between neighborhood vertices removed; equivalently, all
/// arcs with at least one endpoint in `X`.
pub fn boundary_subgraph(g: &LabeledGraph, xs: &BTreeSet<String>) -> LabeledGraph {
    let mut keep: BTreeSet<String> = xs.clone();
    keep.extend(g.neighborhood(xs));
    let mut sub = g.induced(&keep);
    let drop: BTreeSet<ArcId> = sub
        .arcs()
        .iter()
        .filter(|a| !xs.contains(&a.tail) && !xs.contains(&a.head))
        .map(|a| a.id)
        .collect();
    sub = sub.without_arcs(&drop);
    sub
}

/// 2-contraction of `X`: removes `X` and adds an x-y arc for each supplied
/// label (skipping labels an equivalent arc already realizes). The labels
/// and witnesses normally come from a recursive solve of the boundary
/// subgraph; see [`two_contract_with_oracle`] for a self-contained variant.
///
/// Panics if `X` is not 2-contractible between exactly two boundary
/// vertices.
pub fn two_contract(
    g: &LabeledGraph,
    s: &str,
    t: &str,
    xs: &BTreeSet<String>,
    labels: &[(GroupElement, Path)],
) -> (LabeledGraph, ContractionRecord) {
    assert!(!xs.contains(s) && !xs.contains(t), "X must avoid the terminals");
    let boundary = g.neighborhood(xs);
    assert_eq!(boundary.len(), 2, "2-contraction needs |N(X)| = 2");
    let h = boundary_subgraph(g, xs);
    assert!(h.is_connected(), "boundary subgraph must be connected");
    assert_ne!(&h, g, "2-contraction must remove something");
    let mut it = boundary.iter();
    let x = it.next().unwrap().clone();
    let y = it.next().unwrap().clone();

    let keep: BTreeSet<String> = g
        .vertices()
        .iter()
        .filter(|v| !xs.contains(*v))
        .cloned()
        .collect();
    let mut out = g.induced(&keep);
    let mut record = ContractionRecord {
        kind: ContractionKind::Two,
        removed: xs.clone(),
        boundary: boundary.clone(),
        arcs: Vec::new(),
    };
    for (label, witness) in labels {
        debug_assert!(
            crate::lgraph::validate_path(&h, witness, &x, &y),
            "witness must join the boundary inside the removed part"
        );
        debug_assert_eq!(&witness.label(&h), label);
        push_labeled_arc(&mut out, &mut record, &x, &y, label, Some(witness.clone()));
    }
    (out, record)
}

/// 2-contraction that computes the boundary label set (capped at three)
/// and witnesses by brute force. Test and experimentation convenience; the
/// solver always passes results of its own recursion instead.
pub fn two_contract_with_oracle(
    g: &LabeledGraph,
    s: &str,
    t: &str,
    xs: &BTreeSet<String>,
) -> (LabeledGraph, ContractionRecord) {
    let boundary = g.neighborhood(xs);
    assert_eq!(boundary.len(), 2);
    let mut it = boundary.iter();
    let x = it.next().unwrap().clone();
    let y = it.next().unwrap().clone();
    let h = boundary_subgraph(g, xs);
    let labels = crate::oracle::labels_with_witnesses(&h, &x, &y, 3);
    two_contract(g, s, t, xs, &labels)
}

/// 3-contraction of `X`: removes `X` and completes its three boundary
/// vertices into a balanced triangle carrying the (unique) boundary path
/// labels. Witness paths avoid the opposite boundary vertex.
///
/// Panics if `X` is not 3-contractible.
pub fn three_contract(
    g: &LabeledGraph,
    s: &str,
    t: &str,
    xs: &BTreeSet<String>,
) -> (LabeledGraph, ContractionRecord) {
    assert!(!xs.contains(s) && !xs.contains(t), "X must avoid the terminals");
    let boundary = g.neighborhood(xs);
    assert_eq!(boundary.len(), 3, "3-contraction needs |N(X)| = 3");
    assert!(g.induced(xs).is_connected(), "G[X] must be connected");
    let h = boundary_subgraph(g, xs);
    assert!(is_balanced(&h).0, "boundary subgraph must be balanced");

    let b: Vec<String> = boundary.iter().cloned().collect();
    let keep: BTreeSet<String> = g
        .vertices()
        .iter()
        .filter(|v| !xs.contains(*v))
        .cloned()
        .collect();
    let mut out = g.induced(&keep);
    let mut record = ContractionRecord {
        kind: ContractionKind::Three,
        removed: xs.clone(),
        boundary: boundary.clone(),
        arcs: Vec::new(),
    };
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (x, y) = (&b[i], &b[j]);
        let third = &b[3 - i - j];
        // Balanced boundary subgraph: every x-y path has the same label,
        // and one avoiding the third boundary vertex exists because G[X]
        // is connected.
        let avoid = h.without_vertex(third);
        let witness = avoid
            .bfs_path(x, y)
            .expect("boundary vertices connect through the removed part");
        let witness = witness.rebase(&h).expect("arc ids are stable");
        let label = witness.label(&h);
        push_labeled_arc(&mut out, &mut record, x, y, &label, Some(witness));
    }
    debug_assert!(triangle_is_balanced(&out, &record));
    (out, record)
}

fn push_labeled_arc(
    out: &mut LabeledGraph,
    record: &mut ContractionRecord,
    x: &str,
    y: &str,
    label: &GroupElement,
    witness: Option<Path>,
) {
    // Reuse an equivalent arc if the host graph already has one.
    let existing = arcs_between(out, x, y)
        .into_iter()
        .find(|a| &crate::lgraph::arc_traverse_label(out, a.id, y) == label)
        .map(|a| a.id);
    match existing {
        Some(id) => record.arcs.push(AddedArc {
            arc: id,
            label: label.clone(),
            from: x.to_string(),
            to: y.to_string(),
            witness: None,
        }),
        None => {
            let id = out.add_arc(x, y, label.clone()).expect("contraction arc");
            record.arcs.push(AddedArc {
                arc: id,
                label: label.clone(),
                from: x.to_string(),
                to: y.to_string(),
                witness,
            });
        }
    }
}

fn triangle_is_balanced(g: &LabeledGraph, record: &ContractionRecord) -> bool {
    // Walk the triangle once; the product must be the identity.
    let ids: Vec<ArcId> = record.arcs.iter().map(|a| a.arc).collect();
    let start = record.arcs[0].from.clone();
    let walk = crate::lgraph::Walk::from_arc_ids(g, &start, &[ids[0], ids[2], ids[1]]);
    match walk {
        Ok(w) => g.spec().is_identity(&crate::lgraph::walk_label(g, &w)),
        Err(_) => false,
    }
}

/// Searches for a 3-contractible vertex set: a set avoiding the terminals
/// whose neighborhood is exactly a 3-cut, inducing a connected subgraph,
/// with a balanced boundary subgraph. Deterministic: 3-cuts ascending,
/// then components by smallest contained vertex.
pub fn find_3contractible(g: &LabeledGraph, s: &str, t: &str) -> Option<BTreeSet<String>> {
    for cut in crate::connectivity::enumerate_3cuts(g) {
        let keep: BTreeSet<String> = g
            .vertices()
            .iter()
            .filter(|v| !cut.contains(v))
            .cloned()
            .collect();
        for comp in g.induced(&keep).components() {
            if comp.contains(s) || comp.contains(t) {
                continue;
            }
            if g.neighborhood(&comp).len() != 3 {
                continue;
            }
            // G[comp] is connected by construction.
            if is_balanced(&boundary_subgraph(g, &comp)).0 {
                return Some(comp);
            }
        }
    }
    None
}

/// Expands a path of the most-contracted graph back through a stack of
/// contraction records (applied in the order given, expanded in reverse),
/// producing a path of the original graph with the same label.
///
/// Panics if the witnesses cannot be spliced into a simple path; that
/// signals corrupted records.
pub fn expand_path(
    original: &LabeledGraph,
    records: &[(LabeledGraph, ContractionRecord)],
    p: &Path,
) -> Path {
    // records[i].0 is the graph BEFORE record i was applied. The start
    // vertex is a terminal, so no removed set ever contains it.
    let mut ids: Vec<ArcId> = p.arc_ids();
    let start = p.start().to_string();
    for (before, record) in records.iter().rev() {
        ids = expand_once(before, record, &start, &ids);
    }
    Path::new(original, &start, &ids).expect("expansion yields a simple path")
}

fn expand_once(
    before: &LabeledGraph,
    record: &ContractionRecord,
    start: &str,
    ids: &[ArcId],
) -> Vec<ArcId> {
    let added_needing_witness: Vec<&AddedArc> =
        record.arcs.iter().filter(|a| a.witness.is_some()).collect();
    let is_expandable = |id: ArcId| added_needing_witness.iter().any(|a| a.arc == id);

    // Triangle rule: two consecutive triangle arcs would both route
    // through the removed set, so replace them by the third triangle arc
    // first; the balanced triangle keeps the label intact.
    let mut ids: Vec<ArcId> = ids.to_vec();
    if record.kind == ContractionKind::Three {
        let triangle: Vec<ArcId> = record.arcs.iter().map(|a| a.arc).collect();
        loop {
            let pos = (0..ids.len().saturating_sub(1)).find(|&i| {
                triangle.contains(&ids[i])
                    && triangle.contains(&ids[i + 1])
                    && (is_expandable(ids[i]) || is_expandable(ids[i + 1]))
            });
            match pos {
                None => break,
                Some(i) => {
                    let third = *triangle
                        .iter()
                        .find(|id| **id != ids[i] && **id != ids[i + 1])
                        .expect("triangle has three arcs");
                    ids.splice(i..i + 2, [third]);
                }
            }
        }
    }

    let mut out = Vec::new();
    let mut at = start.to_string();
    for id in ids {
        let added = record.arcs.iter().find(|a| a.arc == id && a.witness.is_some());
        match added {
            None => {
                let arc = before
                    .arc(id)
                    .expect("non-contraction arcs exist in the earlier graph");
                at = arc.other_end(&at).to_string();
                out.push(id);
            }
            Some(a) => {
                let w = a.witness.as_ref().unwrap();
                let forward = at == a.from;
                let wids = w.arc_ids();
                if forward {
                    out.extend(wids);
                    at = a.to.clone();
                } else {
                    out.extend(wids.into_iter().rev());
                    at = a.from.clone();
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::oracle;

    fn z3(r: u64) -> GroupElement {
        GroupElement::Residue(r)
    }

    fn f1() -> LabeledGraph {
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        g.add_arc("s", "t", z3(0)).unwrap();
        g.add_arc("s", "u", z3(0)).unwrap();
        g.add_arc("u", "t", z3(1)).unwrap();
        g
    }

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn boundary_subgraph_drops_neighbor_arcs() {
        let g = f1();
        let h = boundary_subgraph(&g, &set(&["u"]));
        assert_eq!(h.arc_count(), 2); // s-u and u-t stay, s-t goes
        assert_eq!(h.vertex_count(), 3);
        let empty = boundary_subgraph(&g, &set(&[]));
        assert_eq!(empty.vertex_count(), 0);
        let all = boundary_subgraph(&g, &set(&["s", "t", "u"]));
        assert_eq!(all.arc_count(), 3);
    }

    #[test]
    fn two_contract_chain() {
        // s-a-b-t path with labels 1,1,1: contracting {a,b} leaves one
        // s-t arc labeled the path product 0... the unique s-t path in the
        // boundary subgraph is s-a-b-t? No: X={a,b}, N(X)={s,t}, boundary
        // subgraph holds s-a, a-b, b-t; its s-t label is 1+1+1 = 0.
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        g.add_arc("s", "a", z3(1)).unwrap();
        g.add_arc("a", "b", z3(1)).unwrap();
        g.add_arc("b", "t", z3(1)).unwrap();
        // Extra arc so the contraction is proper (boundary subgraph != G).
        g.add_arc("s", "t", z3(2)).unwrap();
        let (out, record) = two_contract_with_oracle(&g, "s", "t", &set(&["a", "b"]));
        assert_eq!(out.vertex_count(), 2);
        // The path label 0 is new; the existing arc labeled 2 is reused
        // only if equivalent, and 0 != 2.
        assert_eq!(record.arcs.len(), 1);
        assert_eq!(record.arcs[0].label, z3(0));
        assert_eq!(out.arc_count(), 2);
        // Oracle label sets agree before and after.
        assert_eq!(
            oracle::exact_label_set(&g, "s", "t"),
            oracle::exact_label_set(&out, "s", "t")
        );
    }

    #[test]
    fn two_contract_reuses_equivalent_arc() {
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        g.add_arc("s", "a", z3(1)).unwrap();
        g.add_arc("a", "t", z3(2)).unwrap();
        g.add_arc("s", "t", z3(0)).unwrap(); // equivalent to the path product
        let before = g.arc_count();
        let (out, record) = two_contract_with_oracle(&g, "s", "t", &set(&["a"]));
        assert_eq!(out.arc_count(), before - 2);
        assert!(record.arcs[0].witness.is_none(), "existing arc reused");
    }

    #[test]
    fn three_contract_star() {
        // Star center c with all-identity arcs to x,y,z inside a larger
        // graph keeping (s,t) out of the way.
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        g.add_arc("c", "x", z3(0)).unwrap();
        g.add_arc("c", "y", z3(0)).unwrap();
        g.add_arc("c", "z", z3(0)).unwrap();
        g.add_arc("s", "x", z3(0)).unwrap();
        g.add_arc("s", "y", z3(0)).unwrap();
        g.add_arc("z", "t", z3(0)).unwrap();
        g.add_arc("y", "t", z3(0)).unwrap();
        let (out, record) = three_contract(&g, "s", "t", &set(&["c"]));
        assert!(!out.has_vertex("c"));
        assert_eq!(record.arcs.len(), 3);
        for a in &record.arcs {
            assert_eq!(a.label, z3(0));
        }
        assert_eq!(
            oracle::exact_label_set(&g, "s", "t"),
            oracle::exact_label_set(&out, "s", "t")
        );
    }

    #[test]
    fn three_contract_mixed_labels() {
        // Center labels c->x:1, c->y:0, c->z:0; the x-y arc gets the
        // product along x-c-y: 0 * inv(1) = 2.
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        g.add_arc("c", "x", z3(1)).unwrap();
        g.add_arc("c", "y", z3(0)).unwrap();
        g.add_arc("c", "z", z3(0)).unwrap();
        g.add_arc("s", "x", z3(0)).unwrap();
        g.add_arc("s", "y", z3(0)).unwrap();
        g.add_arc("z", "t", z3(0)).unwrap();
        g.add_arc("x", "t", z3(0)).unwrap();
        let (_, record) = three_contract(&g, "s", "t", &set(&["c"]));
        let xy = record
            .arcs
            .iter()
            .find(|a| (a.from.as_str(), a.to.as_str()) == ("x", "y"))
            .unwrap();
        assert_eq!(xy.label, z3(2));
    }

    #[test]
    #[should_panic(expected = "balanced")]
    fn three_contract_rejects_unbalanced() {
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        // Unbalanced digon inside X.
        g.add_arc("c", "d", z3(0)).unwrap();
        g.add_arc("c", "d", z3(1)).unwrap();
        g.add_arc("c", "x", z3(0)).unwrap();
        g.add_arc("d", "y", z3(0)).unwrap();
        g.add_arc("c", "z", z3(0)).unwrap();
        g.add_arc("s", "x", z3(0)).unwrap();
        g.add_arc("y", "t", z3(0)).unwrap();
        g.add_arc("z", "t", z3(0)).unwrap();
        three_contract(&g, "s", "t", &set(&["c", "d"]));
    }

    #[test]
    fn find_3contractible_star() {
        // Star center c behind the boundary a1,a2,a3; the chain a1-a2-a3
        // inflates every other candidate's neighborhood past three, so the
        // first (deterministic) answer is {c}.
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        for b in ["a1", "a2", "a3"] {
            g.add_arc("c", b, z3(0)).unwrap();
            g.add_arc("s", b, z3(0)).unwrap();
            g.add_arc(b, "t", z3(0)).unwrap();
        }
        g.add_arc("a1", "a2", z3(0)).unwrap();
        g.add_arc("a2", "a3", z3(0)).unwrap();
        assert_eq!(find_3contractible(&g, "s", "t"), Some(set(&["c"])));

        // K4 with terminals on it: nothing to contract.
        let mut k4 = LabeledGraph::new(GroupSpec::Cyclic(3));
        for (u, v) in [("s", "t"), ("s", "a"), ("s", "b"), ("t", "a"), ("t", "b"), ("a", "b")] {
            k4.add_arc(u, v, z3(0)).unwrap();
        }
        assert_eq!(find_3contractible(&k4, "s", "t"), None);
    }

    #[test]
    fn find_3contractible_requires_balance() {
        // Same shape but the center is an unbalanced digon {c, d}; every
        // candidate set either has the wrong neighborhood size or an
        // unbalanced boundary subgraph.
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        g.add_arc("c", "d", z3(0)).unwrap();
        g.add_arc("c", "d", z3(1)).unwrap();
        g.add_arc("c", "a1", z3(0)).unwrap();
        g.add_arc("d", "a2", z3(0)).unwrap();
        g.add_arc("c", "a3", z3(0)).unwrap();
        for b in ["a1", "a2", "a3"] {
            g.add_arc("s", b, z3(0)).unwrap();
            g.add_arc(b, "t", z3(0)).unwrap();
        }
        g.add_arc("a1", "a2", z3(0)).unwrap();
        g.add_arc("a2", "a3", z3(0)).unwrap();
        assert_eq!(find_3contractible(&g, "s", "t"), None);
    }

    #[test]
    fn expand_through_two_contraction() {
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        g.add_arc("s", "a", z3(1)).unwrap();
        g.add_arc("a", "b", z3(1)).unwrap();
        g.add_arc("b", "t", z3(1)).unwrap();
        g.add_arc("s", "t", z3(2)).unwrap();
        let (out, record) = two_contract_with_oracle(&g, "s", "t", &set(&["a", "b"]));
        let records = vec![(g.clone(), record)];
        for p in out.all_st_paths("s", "t") {
            let expanded = expand_path(&g, &records, &p);
            assert_eq!(expanded.label(&g), p.label(&out));
            assert!(crate::lgraph::validate_path(&g, &expanded, "s", "t"));
        }
    }

    #[test]
    fn expand_rewrites_consecutive_triangle_arcs() {
        // Star contraction, then a path forced through two triangle arcs.
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        g.add_arc("c", "x", z3(1)).unwrap();
        g.add_arc("c", "y", z3(0)).unwrap();
        g.add_arc("c", "z", z3(0)).unwrap();
        g.add_arc("s", "x", z3(0)).unwrap();
        g.add_arc("z", "t", z3(0)).unwrap();
        // Keep y on an s-t path some other way.
        g.add_arc("s", "y", z3(2)).unwrap();
        let (out, record) = three_contract(&g, "s", "t", &set(&["c"]));
        let records = vec![(g.clone(), record)];
        for p in out.all_st_paths("s", "t") {
            let expanded = expand_path(&g, &records, &p);
            assert_eq!(expanded.label(&g), p.label(&out));
            assert!(crate::lgraph::validate_path(&g, &expanded, "s", "t"));
        }
    }

    #[test]
    fn expand_is_identity_without_contracted_arcs() {
        let g = f1();
        let p = g.all_st_paths("s", "t")[0].clone();
        let expanded = expand_path(&g, &[], &p);
        assert_eq!(expanded, p);
    }
}
