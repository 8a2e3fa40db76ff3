//! Reductions from disjoint-paths problems to labeled path problems.
//!
//! Two disjoint paths s1-t1 and s2-t2 exist in an undirected graph iff the
//! Z3-labeled graph obtained by zero-labeling every edge and adding one
//! arc t1 -> s2 with label 1 has an s1-t2 path of label 1: such a path
//! must cross the special arc exactly once and splits there into the two
//! disjoint paths. The k-pair version builds the analogous instance over
//! the alternating group inside symmetric(2k-1); it is constructed here
//! but only the k = 2 case is solved.

use std::collections::BTreeSet;

use crate::group::{GroupElement, GroupSpec};
use crate::lgraph::{ArcId, LabelSummary, LabeledGraph};
use crate::solve::z3_labels;

/// A plain undirected simple-ish graph (parallel edges tolerated, loops
/// rejected), as read from unlabeled instance files.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UnGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl UnGraph {
    pub fn add_vertex(&mut self, v: &str) {
        if !self.vertices.iter().any(|x| x == v) {
            self.vertices.push(v.to_string());
        }
    }

    pub fn add_edge(&mut self, u: &str, v: &str) -> Result<(), String> {
        if u == v {
            return Err(format!("edge {u} {v} is a loop"));
        }
        self.add_vertex(u);
        self.add_vertex(v);
        self.edges.push((u.to_string(), v.to_string()));
        Ok(())
    }
}

/// The reduced two-pair instance: a cyclic(3) graph, terminals, the target
/// label, and the id of the special arc.
#[derive(Debug, Clone)]
pub struct Reduced2Disjoint {
    pub graph: LabeledGraph,
    pub source: String,
    pub sink: String,
    pub target: GroupElement,
    pub special_arc: ArcId,
}

/// Builds the Z3 instance for the 2-disjoint paths problem: every edge
/// becomes a zero arc (in its given direction) and one extra arc t1 -> s2
/// carries the label 1.
pub fn reduce_2disjoint(
    g: &UnGraph,
    s1: &str,
    t1: &str,
    s2: &str,
    t2: &str,
) -> Result<Reduced2Disjoint, String> {
    let terminals = [s1, t1, s2, t2];
    for (i, a) in terminals.iter().enumerate() {
        for b in &terminals[i + 1..] {
            if a == b {
                return Err(format!("terminals must be distinct, got {a} twice"));
            }
        }
    }
    let mut out = LabeledGraph::new(GroupSpec::Cyclic(3));
    for v in &g.vertices {
        out.add_vertex(v);
    }
    for t in terminals {
        out.add_vertex(t);
    }
    for (u, v) in &g.edges {
        out.add_arc(u, v, GroupElement::Residue(0)).map_err(|e| e.to_string())?;
    }
    let special_arc = out
        .add_arc(t1, s2, GroupElement::Residue(1))
        .map_err(|e| e.to_string())?;
    Ok(Reduced2Disjoint {
        graph: out,
        source: s1.to_string(),
        sink: t2.to_string(),
        target: GroupElement::Residue(1),
        special_arc,
    })
}

/// Two vertex-disjoint paths joining the pairs, as vertex sequences, or
/// None when they do not exist.
pub fn solve_2disjoint(
    g: &UnGraph,
    s1: &str,
    t1: &str,
    s2: &str,
    t2: &str,
) -> Result<Option<(Vec<String>, Vec<String>)>, String> {
    let reduced = reduce_2disjoint(g, s1, t1, s2, t2)?;
    let summary = z3_labels(&reduced.graph, &reduced.source, &reduced.sink);
    let witness = match &summary {
        LabelSummary::Empty => None,
        LabelSummary::One { label, witness } => (label == &reduced.target).then_some(witness),
        LabelSummary::Two { labels, witnesses } => labels
            .iter()
            .position(|l| l == &reduced.target)
            .map(|i| &witnesses[i]),
        LabelSummary::ThreeOrMore { labels, witnesses } => labels
            .iter()
            .position(|l| l == &reduced.target)
            .map(|i| &witnesses[i]),
    };
    let Some(path) = witness else {
        return Ok(None);
    };

    // A label-1 path crosses the special arc exactly once and forward:
    // every other arc is zero and a backward crossing would contribute 2.
    let ids = path.arc_ids();
    let crossings: Vec<usize> = ids
        .iter()
        .enumerate()
        .filter(|(_, id)| **id == reduced.special_arc)
        .map(|(i, _)| i)
        .collect();
    assert_eq!(crossings.len(), 1, "label-1 witness must use the special arc once");
    let seq = path.vertex_sequence(&reduced.graph);
    let cut = crossings[0];
    assert_eq!(seq[cut], t1, "special arc leaves the first pair's sink");
    assert_eq!(seq[cut + 1], s2, "special arc enters the second pair's source");
    let first: Vec<String> = seq[..=cut].to_vec();
    let second: Vec<String> = seq[cut + 1..].to_vec();
    debug_assert!(first.iter().all(|v| !second.contains(v)));
    Ok(Some((first, second)))
}

/// The reduced k-pair instance over symmetric(2k-1), restricted to even
/// permutations by construction.
#[derive(Debug, Clone)]
pub struct ReducedKDisjoint {
    pub graph: LabeledGraph,
    pub source: String,
    pub sink: String,
    pub target: GroupElement,
}

/// Builds the alternating-group instance for the k-disjoint paths problem:
/// edges carry the identity, and each junction arc t_i -> s_{i+1} carries
/// the 3-cycle sending 2i-1 to 2i+1 to 2i. The target is the product of
/// those 3-cycles, the unique constructible permutation taking 1 to 2k-1.
/// Construction only: solving needs more than two forbidden labels for
/// k >= 3.
pub fn reduce_kdisjoint(
    g: &UnGraph,
    pairs: &[(String, String)],
) -> Result<ReducedKDisjoint, String> {
    let k = pairs.len();
    if k < 2 {
        return Err("need at least two terminal pairs".into());
    }
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for (s, t) in pairs {
        if !seen.insert(s) || !seen.insert(t) {
            return Err("terminals must be distinct".into());
        }
    }
    let n = 2 * k - 1;
    let spec = GroupSpec::Symmetric(n);
    let mut out = LabeledGraph::new(spec.clone());
    for v in &g.vertices {
        out.add_vertex(v);
    }
    for (s, t) in pairs {
        out.add_vertex(s);
        out.add_vertex(t);
    }
    let id = spec.identity();
    for (u, v) in &g.edges {
        out.add_arc(u, v, id.clone()).map_err(|e| e.to_string())?;
    }
    let mut target = spec.identity();
    for i in 1..k {
        let cycle = three_cycle(n, 2 * i - 1, 2 * i + 1, 2 * i);
        out.add_arc(&pairs[i - 1].1, &pairs[i].0, cycle.clone())
            .map_err(|e| e.to_string())?;
        // The displayed product has the largest cycle leftmost, i.e. each
        // new cycle multiplies on the left.
        target = spec.mul(&cycle, &target);
    }
    Ok(ReducedKDisjoint {
        graph: out,
        source: pairs[0].0.clone(),
        sink: pairs[k - 1].1.clone(),
        target,
    })
}

/// The permutation of {1..n} fixing everything except a -> b -> c -> a
/// (1-based labels).
fn three_cycle(n: usize, a: usize, b: usize, c: usize) -> GroupElement {
    let mut image: Vec<usize> = (0..n).collect();
    image[a - 1] = b - 1;
    image[b - 1] = c - 1;
    image[c - 1] = a - 1;
    GroupElement::Perm(image)
}
