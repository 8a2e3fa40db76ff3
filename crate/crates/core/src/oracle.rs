//! Brute-force reference implementations used for differential testing.
//!
//! Everything here enumerates exhaustively and shares no traversal or label
//! accumulation code with the algorithm modules; only the group primitives
//! and the plain graph data are reused. Intended for graphs of at most
//! around ten vertices.

use std::collections::{BTreeMap, BTreeSet};

use crate::group::GroupElement;
use crate::lgraph::{ArcId, LabeledGraph, Path};

/// Result of a label-set search capped at `cap` distinct labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelSet {
    /// The exact label set; at most `cap` elements.
    Exact(BTreeSet<GroupElement>),
    /// More than `cap` labels exist; carries some (cap+1)-subset.
    MoreThan(BTreeSet<GroupElement>),
}

impl LabelSet {
    pub fn size_capped(&self, cap: usize) -> usize {
        match self {
            LabelSet::Exact(s) => s.len(),
            LabelSet::MoreThan(_) => cap + 1,
        }
    }

    pub fn exact(&self) -> Option<&BTreeSet<GroupElement>> {
        match self {
            LabelSet::Exact(s) => Some(s),
            LabelSet::MoreThan(_) => None,
        }
    }
}

/// Multiplies up the label of a sequence of (arc, entered vertex) hops,
/// later hops on the left. Kept separate from the walk code on purpose.
fn hops_label(g: &LabeledGraph, hops: &[(ArcId, String)]) -> GroupElement {
    let mut acc = g.spec().identity();
    for (id, entered) in hops {
        let arc = g.arc(*id).expect("oracle arc lookup");
        let contribution = if &arc.head == entered {
            arc.label.clone()
        } else {
            g.spec().inv(&arc.label)
        };
        acc = g.spec().mul(&contribution, &acc);
    }
    acc
}

/// Visits every simple s-t path exactly once (each parallel arc counted
/// separately), in DFS order with lexicographic branching. The visitor
/// returns false to stop.
pub fn enumerate_st_paths(
    g: &LabeledGraph,
    s: &str,
    t: &str,
    visitor: &mut dyn FnMut(&Path) -> bool,
) {
    assert_ne!(s, t, "terminals must be distinct");
    if !g.has_vertex(s) || !g.has_vertex(t) {
        return;
    }
    fn recurse(
        g: &LabeledGraph,
        s: &str,
        cur: &str,
        t: &str,
        on_path: &mut BTreeSet<String>,
        hops: &mut Vec<(ArcId, String)>,
        visitor: &mut dyn FnMut(&Path) -> bool,
    ) -> bool {
        let mut options: Vec<(String, ArcId)> = g
            .arcs()
            .iter()
            .filter(|a| a.touches(cur))
            .map(|a| (a.other_end(cur).to_string(), a.id))
            .collect();
        options.sort();
        for (next, id) in options {
            if next == t {
                hops.push((id, next.clone()));
                let ids: Vec<ArcId> = hops.iter().map(|(i, _)| *i).collect();
                let path = Path::new(g, s, &ids).expect("oracle paths are simple by construction");
                let keep = visitor(&path);
                hops.pop();
                if !keep {
                    return false;
                }
            } else if !on_path.contains(&next) {
                on_path.insert(next.clone());
                hops.push((id, next.clone()));
                let keep = recurse(g, s, &next, t, on_path, hops, visitor);
                hops.pop();
                on_path.remove(&next);
                if !keep {
                    return false;
                }
            }
        }
        true
    }
    let mut on_path = BTreeSet::new();
    on_path.insert(s.to_string());
    let mut hops = Vec::new();
    recurse(g, s, s, t, &mut on_path, &mut hops, visitor);
}

/// Collects every simple s-t path.
pub fn all_st_paths(g: &LabeledGraph, s: &str, t: &str) -> Vec<Path> {
    let mut out = Vec::new();
    enumerate_st_paths(g, s, t, &mut |p| {
        out.push(p.clone());
        true
    });
    out
}

/// The set of labels of simple s-t paths, stopping once more than `cap`
/// distinct labels have been seen.
pub fn label_set_bruteforce(g: &LabeledGraph, s: &str, t: &str, cap: usize) -> LabelSet {
    assert!(cap >= 1);
    let mut labels: BTreeSet<GroupElement> = BTreeSet::new();
    let mut overflow = false;
    enumerate_st_paths(g, s, t, &mut |p| {
        let hops: Vec<(ArcId, String)> = {
            let seq = p.vertex_sequence(g);
            p.arc_ids().iter().zip(seq.iter().skip(1)).map(|(i, v)| (*i, v.clone())).collect()
        };
        labels.insert(hops_label(g, &hops));
        if labels.len() > cap {
            overflow = true;
            return false;
        }
        true
    });
    if overflow {
        LabelSet::MoreThan(labels)
    } else {
        LabelSet::Exact(labels)
    }
}

/// Labels with one witness path each, capped; witnesses are the first path
/// found per label in enumeration order.
pub fn labels_with_witnesses(
    g: &LabeledGraph,
    s: &str,
    t: &str,
    cap: usize,
) -> Vec<(GroupElement, Path)> {
    let mut found: BTreeMap<GroupElement, Path> = BTreeMap::new();
    enumerate_st_paths(g, s, t, &mut |p| {
        let hops: Vec<(ArcId, String)> = {
            let seq = p.vertex_sequence(g);
            p.arc_ids().iter().zip(seq.iter().skip(1)).map(|(i, v)| (*i, v.clone())).collect()
        };
        let label = hops_label(g, &hops);
        found.entry(label).or_insert_with(|| p.clone());
        found.len() <= cap
    });
    found.into_iter().collect()
}

/// Every simple cycle of the underlying multigraph, once up to rotation and
/// reflection, as (start vertex, arc id sequence). Cycles are rooted at
/// their smallest vertex; a cycle is identified by its arc set.
pub fn all_simple_cycles(g: &LabeledGraph) -> Vec<(String, Vec<ArcId>)> {
    let mut seen: BTreeSet<BTreeSet<ArcId>> = BTreeSet::new();
    let mut out = Vec::new();
    for root in g.vertices() {
        // Simple paths from root using only vertices >= root, closing back.
        fn recurse(
            g: &LabeledGraph,
            root: &str,
            cur: &str,
            on_path: &mut BTreeSet<String>,
            arcs: &mut Vec<ArcId>,
            seen: &mut BTreeSet<BTreeSet<ArcId>>,
            out: &mut Vec<(String, Vec<ArcId>)>,
        ) {
            let mut options: Vec<(String, ArcId)> = g
                .arcs()
                .iter()
                .filter(|a| a.touches(cur))
                .map(|a| (a.other_end(cur).to_string(), a.id))
                .collect();
            options.sort();
            for (next, id) in options {
                if next == root {
                    if arcs.is_empty() || *arcs.last().unwrap() == id {
                        continue; // refuse to reuse the arc we just came by
                    }
                    let mut cycle = arcs.clone();
                    cycle.push(id);
                    let key: BTreeSet<ArcId> = cycle.iter().copied().collect();
                    if key.len() == cycle.len() && seen.insert(key) {
                        out.push((root.to_string(), cycle));
                    }
                } else if next.as_str() > root && !on_path.contains(&next) {
                    on_path.insert(next.clone());
                    arcs.push(id);
                    recurse(g, root, &next, on_path, arcs, seen, out);
                    arcs.pop();
                    on_path.remove(&next);
                }
            }
        }
        let mut on_path = BTreeSet::new();
        on_path.insert(root.clone());
        let mut arcs = Vec::new();
        recurse(g, root, root, &mut on_path, &mut arcs, &mut seen, &mut out);
    }
    out
}

/// The label of a cycle produced by `all_simple_cycles`, read from its
/// canonical start.
pub fn cycle_label(g: &LabeledGraph, start: &str, arcs: &[ArcId]) -> GroupElement {
    let mut hops = Vec::new();
    let mut at = start.to_string();
    for &id in arcs {
        let arc = g.arc(id).expect("cycle arc");
        at = arc.other_end(&at).to_string();
        hops.push((id, at.clone()));
    }
    assert_eq!(at, start, "cycle must close");
    hops_label(g, &hops)
}

/// True iff every simple cycle has the identity label.
pub fn all_cycles_balanced(g: &LabeledGraph) -> bool {
    all_simple_cycles(g)
        .iter()
        .all(|(start, arcs)| g.spec().is_identity(&cycle_label(g, start, arcs)))
}

/// True iff some simple cycle has a non-identity label that squares to the
/// identity. Whether a cycle has this property does not depend on the
/// start or direction it is read in.
pub fn self_inverse_unbalanced_cycle_exists(g: &LabeledGraph) -> bool {
    all_simple_cycles(g).iter().any(|(start, arcs)| {
        let label = cycle_label(g, start, arcs);
        !g.spec().is_identity(&label)
            && g.spec().is_identity(&g.spec().mul(&label, &label))
    })
}

/// Exhaustive search for pairwise vertex-disjoint paths joining each
/// terminal pair. Returns vertex sequences.
pub fn disjoint_paths_bruteforce(
    g: &LabeledGraph,
    pairs: &[(String, String)],
) -> Option<Vec<Vec<String>>> {
    match pairs {
        [] => Some(Vec::new()),
        [(s, t), rest @ ..] => {
            let mut answer = None;
            enumerate_st_paths(g, s, t, &mut |p| {
                let used: BTreeSet<String> = p.vertex_sequence(g).into_iter().collect();
                let remaining: BTreeSet<String> = g
                    .vertices()
                    .iter()
                    .filter(|v| !used.contains(*v))
                    .cloned()
                    .collect();
                let sub = g.induced(&remaining);
                if rest.iter().all(|(a, b)| sub.has_vertex(a) && sub.has_vertex(b)) {
                    if let Some(mut tail) = disjoint_paths_bruteforce(&sub, rest) {
                        let mut all = vec![p.vertex_sequence(g)];
                        all.append(&mut tail);
                        answer = Some(all);
                        return false;
                    }
                }
                true
            });
            answer
        }
    }
}

/// Convenience wrapper over [`label_set_bruteforce`] fixing its cap high
/// enough to be exact at oracle scale.
pub fn exact_label_set(g: &LabeledGraph, s: &str, t: &str) -> BTreeSet<GroupElement> {
    match label_set_bruteforce(g, s, t, 1 << 16) {
        LabelSet::Exact(set) => set,
        LabelSet::MoreThan(_) => unreachable!("cap large enough at oracle scale"),
    }
}
