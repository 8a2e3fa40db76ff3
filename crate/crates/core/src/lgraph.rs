//! The group-labeled multigraph data model: arcs with stable ids, walks and
//! their labels, and the normalization that strips everything not on any
//! s-t path.
//!
//! Arc labels compose right-to-left: the label of a walk is
//! `label(step_k) * ... * label(step_1)`, where each step contributes the
//! arc label when traversed with the arc and its inverse against it. The
//! order matters for symmetric and free groups and is fixed library-wide.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupElement, GroupSpec};

/// Stable identifier of an arc. Ids survive subgraph operations, vertex
/// deletion, and re-orientation; fresh arcs (virtual terminals edges,
/// contraction arcs) always get ids never used before in that graph's
/// lineage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcId(pub u32);

/// A labeled arc from `tail` to `head`. Loops are rejected at insertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub id: ArcId,
    pub tail: String,
    pub head: String,
    pub label: GroupElement,
}

impl Arc {
    pub fn other_end(&self, v: &str) -> &str {
        if self.tail == v {
            &self.head
        } else {
            &self.tail
        }
    }

    pub fn touches(&self, v: &str) -> bool {
        self.tail == v || self.head == v
    }
}

/// Direction of one traversal step relative to the arc's orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    Forward,
    Backward,
}

/// One step of a walk: an arc plus the direction it is traversed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub arc: ArcId,
    pub dir: Dir,
}

/// A walk: a start vertex and a chained sequence of steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub start: String,
    pub steps: Vec<Step>,
}

/// A walk whose visited vertices are all distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    walk: Walk,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("arc {0} -> {1} is a loop")]
    LoopArc(String, String),
    #[error("label {0:?} does not belong to the declared group")]
    ForeignLabel(String),
    #[error("vertex {0:?} not in graph")]
    MissingVertex(String),
    #[error("terminals must be distinct")]
    SameTerminals,
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid walk: {0}")]
    BadWalk(String),
}

/// Classification of the set of s-t path labels, capped at three, with one
/// witness path per reported label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelSummary {
    Empty,
    One {
        label: GroupElement,
        witness: Path,
    },
    Two {
        labels: [GroupElement; 2],
        witnesses: [Path; 2],
    },
    ThreeOrMore {
        labels: [GroupElement; 3],
        witnesses: [Path; 3],
    },
}

impl LabelSummary {
    pub fn labels(&self) -> Vec<&GroupElement> {
        match self {
            LabelSummary::Empty => vec![],
            LabelSummary::One { label, .. } => vec![label],
            LabelSummary::Two { labels, .. } => labels.iter().collect(),
            LabelSummary::ThreeOrMore { labels, .. } => labels.iter().collect(),
        }
    }

    pub fn witnesses(&self) -> Vec<&Path> {
        match self {
            LabelSummary::Empty => vec![],
            LabelSummary::One { witness, .. } => vec![witness],
            LabelSummary::Two { witnesses, .. } => witnesses.iter().collect(),
            LabelSummary::ThreeOrMore { witnesses, .. } => witnesses.iter().collect(),
        }
    }
}

/// A loopless multigraph over a fixed group, with stable arc ids.
///
/// Graphs are immutable values as far as the algorithms are concerned:
/// every operation returns a new graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    spec: GroupSpec,
    vertices: Vec<String>,
    arcs: Vec<Arc>,
    next_arc_id: u32,
}

impl LabeledGraph {
    pub fn new(spec: GroupSpec) -> Self {
        spec.validate().expect("invalid group spec");
        LabeledGraph {
            spec,
            vertices: Vec::new(),
            arcs: Vec::new(),
            next_arc_id: 0,
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Vertex names in sorted order.
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.binary_search_by(|x| x.as_str().cmp(v)).is_ok()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc(&self, id: ArcId) -> Option<&Arc> {
        self.arcs.iter().find(|a| a.id == id)
    }

    pub fn add_vertex(&mut self, name: &str) {
        if let Err(pos) = self.vertices.binary_search_by(|x| x.as_str().cmp(name)) {
            self.vertices.insert(pos, name.to_string());
        }
    }

    /// Adds an arc with a fresh id, creating endpoints as needed.
    pub fn add_arc(
        &mut self,
        tail: &str,
        head: &str,
        label: GroupElement,
    ) -> Result<ArcId, GraphError> {
        if tail == head {
            return Err(GraphError::LoopArc(tail.into(), head.into()));
        }
        if !self.spec.contains(&label) {
            return Err(GraphError::ForeignLabel(format!("{label:?}")));
        }
        self.add_vertex(tail);
        self.add_vertex(head);
        let id = ArcId(self.next_arc_id);
        self.next_arc_id += 1;
        self.arcs.push(Arc {
            id,
            tail: tail.into(),
            head: head.into(),
            label,
        });
        Ok(id)
    }

    /// Arcs incident to `v`, in id order.
    pub fn incident<'a, 'b: 'a>(&'a self, v: &'b str) -> impl Iterator<Item = &'a Arc> + 'a {
        self.arcs.iter().filter(move |a| a.touches(v))
    }

    /// Distinct neighbors of `v`, sorted.
    pub fn neighbors(&self, v: &str) -> Vec<String> {
        let mut out: BTreeSet<String> = BTreeSet::new();
        for a in self.incident(v) {
            out.insert(a.other_end(v).to_string());
        }
        out.into_iter().collect()
    }

    /// N(X): vertices outside `X` adjacent to some vertex of `X`.
    pub fn neighborhood(&self, xs: &BTreeSet<String>) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in &self.arcs {
            let tin = xs.contains(&a.tail);
            let hin = xs.contains(&a.head);
            if tin && !hin {
                out.insert(a.head.clone());
            } else if hin && !tin {
                out.insert(a.tail.clone());
            }
        }
        out
    }

    /// The subgraph induced on `keep`, preserving arc ids.
    pub fn induced(&self, keep: &BTreeSet<String>) -> LabeledGraph {
        LabeledGraph {
            spec: self.spec.clone(),
            vertices: self.vertices.iter().filter(|v| keep.contains(*v)).cloned().collect(),
            arcs: self
                .arcs
                .iter()
                .filter(|a| keep.contains(&a.tail) && keep.contains(&a.head))
                .cloned()
                .collect(),
            next_arc_id: self.next_arc_id,
        }
    }

    /// The graph with one vertex removed.
    pub fn without_vertex(&self, v: &str) -> LabeledGraph {
        let keep: BTreeSet<String> =
            self.vertices.iter().filter(|x| x.as_str() != v).cloned().collect();
        self.induced(&keep)
    }

    /// The graph with the listed arcs removed.
    pub fn without_arcs(&self, drop: &BTreeSet<ArcId>) -> LabeledGraph {
        LabeledGraph {
            spec: self.spec.clone(),
            vertices: self.vertices.clone(),
            arcs: self.arcs.iter().filter(|a| !drop.contains(&a.id)).cloned().collect(),
            next_arc_id: self.next_arc_id,
        }
    }

    /// True iff `a` and `b` are connected in the underlying graph.
    pub fn connected(&self, a: &str, b: &str) -> bool {
        if !self.has_vertex(a) || !self.has_vertex(b) {
            return false;
        }
        let mut seen: HashSet<&str> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(a);
        queue.push_back(a);
        while let Some(cur) = queue.pop_front() {
            if cur == b {
                return true;
            }
            for arc in self.incident(cur) {
                let other = arc.other_end(cur);
                if seen.insert(other) {
                    queue.push_back(other);
                }
            }
        }
        false
    }

    /// True iff the whole underlying graph is connected (vacuously for <= 1
    /// vertex).
    pub fn is_connected(&self) -> bool {
        match self.vertices.first() {
            None => true,
            Some(v0) => {
                let comp = self.component_of(v0);
                comp.len() == self.vertices.len()
            }
        }
    }

    /// The vertex set of the connected component containing `v`.
    pub fn component_of(&self, v: &str) -> BTreeSet<String> {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(v.to_string());
        queue.push_back(v.to_string());
        while let Some(cur) = queue.pop_front() {
            for arc in self.incident(&cur) {
                let other = arc.other_end(&cur).to_string();
                if seen.insert(other.clone()) {
                    queue.push_back(other);
                }
            }
        }
        seen
    }

    /// Connected components as sorted vertex sets, ordered by smallest
    /// contained vertex.
    pub fn components(&self) -> Vec<BTreeSet<String>> {
        let mut out = Vec::new();
        let mut assigned: BTreeSet<String> = BTreeSet::new();
        for v in &self.vertices {
            if !assigned.contains(v) {
                let comp = self.component_of(v);
                assigned.extend(comp.iter().cloned());
                out.push(comp);
            }
        }
        out
    }

    /// Allots a fresh arc id without inserting an arc; used when building
    /// derived graphs that must not collide with existing ids.
    pub fn reserve_arc_id(&mut self) -> ArcId {
        let id = ArcId(self.next_arc_id);
        self.next_arc_id += 1;
        id
    }

    /// Swaps in a relabeled arc list; ids and endpoints must be preserved
    /// by the caller (shifting and re-orientation do).
    pub(crate) fn replace_arcs(&mut self, arcs: Vec<Arc>) {
        debug_assert_eq!(arcs.len(), self.arcs.len());
        self.arcs = arcs;
    }

    /// A shortest path between two vertices by BFS with sorted neighbor
    /// order and ascending arc ids, or None if disconnected.
    pub fn bfs_path(&self, from: &str, to: &str) -> Option<Path> {
        if !self.has_vertex(from) || !self.has_vertex(to) {
            return None;
        }
        if from == to {
            return Some(Path::trivial(from));
        }
        let mut prev: HashMap<String, (String, ArcId)> = HashMap::new();
        let mut seen: HashSet<String> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(from.to_string());
        queue.push_back(from.to_string());
        'outer: while let Some(cur) = queue.pop_front() {
            let mut nexts: Vec<(&String, ArcId)> = Vec::new();
            for arc in self.incident(&cur) {
                let other = if arc.tail == cur { &arc.head } else { &arc.tail };
                nexts.push((other, arc.id));
            }
            nexts.sort();
            for (other, id) in nexts {
                if seen.insert(other.clone()) {
                    prev.insert(other.clone(), (cur.clone(), id));
                    if other == to {
                        break 'outer;
                    }
                    queue.push_back(other.clone());
                }
            }
        }
        if !prev.contains_key(to) {
            return None;
        }
        let mut ids = Vec::new();
        let mut cur = to.to_string();
        while cur != from {
            let (p, id) = prev[&cur].clone();
            ids.push(id);
            cur = p;
        }
        ids.reverse();
        Some(Path::new(self, from, &ids).expect("BFS yields a valid path"))
    }

    /// Every simple s-t path, in DFS order with lexicographic branching;
    /// parallel arcs give distinct paths. The visitor returns false to stop
    /// early.
    pub fn for_each_st_path(&self, s: &str, t: &str, visitor: &mut dyn FnMut(&Path) -> bool) {
        assert_ne!(s, t, "terminals must be distinct");
        if !self.has_vertex(s) || !self.has_vertex(t) {
            return;
        }
        let mut visited: BTreeSet<String> = BTreeSet::new();
        visited.insert(s.to_string());
        let mut steps: Vec<ArcId> = Vec::new();
        self.dfs_paths(s, s, t, &mut visited, &mut steps, visitor);
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs_paths(
        &self,
        root: &str,
        cur: &str,
        t: &str,
        visited: &mut BTreeSet<String>,
        steps: &mut Vec<ArcId>,
        visitor: &mut dyn FnMut(&Path) -> bool,
    ) -> bool {
        let mut nexts: Vec<(String, ArcId)> = self
            .incident(cur)
            .map(|a| (a.other_end(cur).to_string(), a.id))
            .collect();
        nexts.sort();
        for (other, id) in nexts {
            if other == t {
                steps.push(id);
                let path = Path::new(self, root, steps).expect("DFS yields valid paths");
                let keep_going = visitor(&path);
                steps.pop();
                if !keep_going {
                    return false;
                }
                continue;
            }
            if visited.contains(&other) {
                continue;
            }
            visited.insert(other.clone());
            steps.push(id);
            let keep_going = self.dfs_paths(root, &other, t, visited, steps, visitor);
            steps.pop();
            visited.remove(&other);
            if !keep_going {
                return false;
            }
        }
        true
    }

    /// Collects all simple s-t paths. Intended for graphs small enough that
    /// Step 5's enumeration applies.
    pub fn all_st_paths(&self, s: &str, t: &str) -> Vec<Path> {
        let mut out = Vec::new();
        self.for_each_st_path(s, t, &mut |p| {
            out.push(p.clone());
            true
        });
        out
    }
}

/// The label contribution of traversing `arc` so that `entered` is the
/// vertex arrived at: the arc label itself when the arc enters that vertex,
/// its inverse when the arc leaves it.
pub fn arc_traverse_label(g: &LabeledGraph, arc: ArcId, entered: &str) -> GroupElement {
    let a = g.arc(arc).expect("arc not in graph");
    if a.head == entered {
        a.label.clone()
    } else if a.tail == entered {
        g.spec().inv(&a.label)
    } else {
        panic!("vertex {entered:?} is not an endpoint of arc {arc:?}")
    }
}

/// The label of a walk: the right-to-left product of per-step traversal
/// labels. The reversed walk has the inverse label.
pub fn walk_label(g: &LabeledGraph, w: &Walk) -> GroupElement {
    let mut acc = g.spec().identity();
    let mut at = w.start.clone();
    for step in &w.steps {
        let a = g.arc(step.arc).expect("walk references a missing arc");
        let next = match step.dir {
            Dir::Forward => {
                assert_eq!(a.tail, at, "walk does not chain");
                a.head.clone()
            }
            Dir::Backward => {
                assert_eq!(a.head, at, "walk does not chain");
                a.tail.clone()
            }
        };
        acc = g.spec().mul(&arc_traverse_label(g, step.arc, &next), &acc);
        at = next;
    }
    acc
}

impl Walk {
    pub fn new(start: &str) -> Self {
        Walk {
            start: start.to_string(),
            steps: Vec::new(),
        }
    }

    /// Builds a walk from a start vertex and arc ids, deriving directions
    /// from the chain. Fails if some arc cannot continue the walk.
    pub fn from_arc_ids(g: &LabeledGraph, start: &str, ids: &[ArcId]) -> Result<Walk, GraphError> {
        if !g.has_vertex(start) {
            return Err(GraphError::MissingVertex(start.into()));
        }
        let mut steps = Vec::new();
        let mut at = start.to_string();
        for &id in ids {
            let a = g
                .arc(id)
                .ok_or_else(|| GraphError::BadWalk(format!("arc {id:?} not in graph")))?;
            let dir = if a.tail == at {
                Dir::Forward
            } else if a.head == at {
                Dir::Backward
            } else {
                return Err(GraphError::BadWalk(format!(
                    "arc {id:?} does not continue the walk at {at:?}"
                )));
            };
            at = a.other_end(&at).to_string();
            steps.push(Step { arc: id, dir });
        }
        Ok(Walk {
            start: start.to_string(),
            steps,
        })
    }

    /// The visited vertex sequence, start included.
    pub fn vertex_sequence(&self, g: &LabeledGraph) -> Vec<String> {
        let mut out = vec![self.start.clone()];
        let mut at = self.start.clone();
        for step in &self.steps {
            let a = g.arc(step.arc).expect("walk references a missing arc");
            at = a.other_end(&at).to_string();
            out.push(at.clone());
        }
        out
    }

    pub fn end(&self, g: &LabeledGraph) -> String {
        self.vertex_sequence(g).last().unwrap().clone()
    }

    pub fn reversed(&self, g: &LabeledGraph) -> Walk {
        let end = self.end(g);
        let ids: Vec<ArcId> = self.steps.iter().rev().map(|s| s.arc).collect();
        Walk::from_arc_ids(g, &end, &ids).expect("reversing a walk keeps it chained")
    }

    pub fn arc_ids(&self) -> Vec<ArcId> {
        self.steps.iter().map(|s| s.arc).collect()
    }
}

impl Path {
    /// Validates a vertex-simple path from a start vertex and arc ids.
    pub fn new(g: &LabeledGraph, start: &str, ids: &[ArcId]) -> Result<Path, GraphError> {
        let walk = Walk::from_arc_ids(g, start, ids)?;
        let seq = walk.vertex_sequence(g);
        let distinct: HashSet<&String> = seq.iter().collect();
        if distinct.len() != seq.len() {
            return Err(GraphError::BadWalk("path revisits a vertex".into()));
        }
        Ok(Path { walk })
    }

    pub fn trivial(at: &str) -> Path {
        Path {
            walk: Walk::new(at),
        }
    }

    pub fn walk(&self) -> &Walk {
        &self.walk
    }

    pub fn start(&self) -> &str {
        &self.walk.start
    }

    pub fn arc_ids(&self) -> Vec<ArcId> {
        self.walk.arc_ids()
    }

    pub fn len(&self) -> usize {
        self.walk.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.steps.is_empty()
    }

    pub fn label(&self, g: &LabeledGraph) -> GroupElement {
        walk_label(g, &self.walk)
    }

    pub fn vertex_sequence(&self, g: &LabeledGraph) -> Vec<String> {
        self.walk.vertex_sequence(g)
    }

    /// Re-validates this path against another graph carrying the same arc
    /// ids (directions are re-derived, so re-oriented arcs are fine).
    pub fn rebase(&self, g: &LabeledGraph) -> Result<Path, GraphError> {
        Path::new(g, &self.walk.start, &self.arc_ids())
    }
}

/// True iff `p` is a valid s-t path in `g`: starts at `s`, ends at `t`,
/// chains correctly over existing arcs, and repeats no vertex.
pub fn validate_path(g: &LabeledGraph, p: &Path, s: &str, t: &str) -> bool {
    let Ok(rebased) = p.rebase(g) else {
        return false;
    };
    rebased.start() == s && rebased.walk().end(g) == t
}

/// The traversal label of an arc read at the given endpoint; two arcs are
/// equivalent iff their traversal labels agree there (parallel with equal
/// labels, or anti-parallel with mutually inverse labels).
fn traversal_into(g: &LabeledGraph, a: &Arc, v: &str) -> GroupElement {
    if a.head == v {
        a.label.clone()
    } else {
        g.spec().inv(&a.label)
    }
}

/// Removes equivalent arcs: for every unordered vertex pair and label
/// class, only the arc with the smallest id survives.
pub fn dedupe_equivalent_arcs(g: &LabeledGraph) -> LabeledGraph {
    let mut seen: HashSet<(String, String, GroupElement)> = HashSet::new();
    let mut keep: Vec<Arc> = Vec::new();
    for a in g.arcs() {
        let (lo, hi) = if a.tail <= a.head {
            (a.tail.clone(), a.head.clone())
        } else {
            (a.head.clone(), a.tail.clone())
        };
        let key = (lo.clone(), hi, traversal_into(g, a, &lo));
        if seen.insert(key) {
            keep.push(a.clone());
        }
    }
    LabeledGraph {
        spec: g.spec.clone(),
        vertices: g.vertices.clone(),
        arcs: keep,
        next_arc_id: g.next_arc_id,
    }
}

/// Replaces arcs by equivalent ones so that every arc at `s` leaves `s` and
/// every arc at `t` enters `t`; an arc joining the two terminals is oriented
/// from `s` to `t` (the s-rule wins). Walk labels are unchanged.
pub fn orient_around_terminals(g: &LabeledGraph, s: &str, t: &str) -> LabeledGraph {
    let mut arcs = g.arcs.clone();
    for a in &mut arcs {
        let flip = a.head == s || (a.tail == t && a.head != s);
        if flip {
            std::mem::swap(&mut a.tail, &mut a.head);
            a.label = g.spec.inv(&a.label);
        }
    }
    LabeledGraph {
        spec: g.spec.clone(),
        vertices: g.vertices.clone(),
        arcs,
        next_arc_id: g.next_arc_id,
    }
}

/// Computes the unique maximal subgraph whose triplet with (s, t) lies in
/// the class D: no equivalent arcs and every vertex on some s-t path;
/// equivalently, adding a virtual s-t edge makes it 2-connected. Returns
/// the two-terminal graph with no arcs when s and t are disconnected.
/// The s-t label set is preserved exactly.
pub fn normalize_to_d(g: &LabeledGraph, s: &str, t: &str) -> Result<LabeledGraph, GraphError> {
    if s == t {
        return Err(GraphError::SameTerminals);
    }
    for v in [s, t] {
        if !g.has_vertex(v) {
            return Err(GraphError::MissingVertex(v.into()));
        }
    }
    let deduped = dedupe_equivalent_arcs(g);
    if !deduped.connected(s, t) {
        let mut empty = LabeledGraph::new(deduped.spec.clone());
        empty.add_vertex(s);
        empty.add_vertex(t);
        empty.next_arc_id = deduped.next_arc_id;
        return Ok(empty);
    }
    // Restrict to the component of the terminals before block analysis.
    let comp = deduped.component_of(s);
    let gc = deduped.induced(&comp);

    if gc.vertex_count() == 2 {
        return Ok(gc);
    }

    // Block decomposition of G + e_st; the block containing the virtual
    // edge is the answer.
    let verts: Vec<&String> = gc.vertices.iter().collect();
    let index: HashMap<&str, usize> = verts.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut edges: Vec<(usize, usize)> = gc
        .arcs
        .iter()
        .map(|a| (index[a.tail.as_str()], index[a.head.as_str()]))
        .collect();
    let si = index[s];
    let ti = index[t];
    edges.push((si, ti)); // the virtual edge, at position gc.arcs.len()
    let virt_pos = edges.len() - 1;

    let blocks = edge_blocks(verts.len(), &edges);
    let target = blocks
        .iter()
        .find(|b| b.contains(&virt_pos))
        .expect("virtual edge belongs to some block");
    let keep_edges: HashSet<usize> = target.iter().copied().filter(|&e| e != virt_pos).collect();
    let mut keep_vertices: BTreeSet<String> = BTreeSet::new();
    keep_vertices.insert(s.to_string());
    keep_vertices.insert(t.to_string());
    let mut arcs = Vec::new();
    for (ei, a) in gc.arcs.iter().enumerate() {
        if keep_edges.contains(&ei) {
            keep_vertices.insert(a.tail.clone());
            keep_vertices.insert(a.head.clone());
            arcs.push(a.clone());
        }
    }
    Ok(LabeledGraph {
        spec: gc.spec.clone(),
        vertices: keep_vertices.into_iter().collect(),
        arcs,
        next_arc_id: gc.next_arc_id,
    })
}

/// Blocks (2-connected components) of a multigraph given as an edge list
/// over vertex indices, by the standard lowpoint algorithm with an edge
/// stack. Each edge index lands in exactly one block; isolated vertices
/// contribute nothing. Iterative so deep graphs cannot overflow the stack.
pub(crate) fn edge_blocks(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (edge idx, other endpoint)
    for (ei, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((ei, v));
        adj[v].push((ei, u));
    }

    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut stack: Vec<usize> = Vec::new(); // edge indices
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut timer = 0usize;

    struct Frame {
        v: usize,
        parent_edge: usize,
        next: usize,
    }
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut frames = vec![Frame {
            v: root,
            parent_edge: usize::MAX,
            next: 0,
        }];
        while let Some(frame) = frames.last_mut() {
            let v = frame.v;
            if frame.next < adj[v].len() {
                let (ei, w) = adj[v][frame.next];
                frame.next += 1;
                if ei == frame.parent_edge {
                    continue;
                }
                if disc[w] == usize::MAX {
                    stack.push(ei);
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    frames.push(Frame {
                        v: w,
                        parent_edge: ei,
                        next: 0,
                    });
                } else if disc[w] < disc[v] {
                    stack.push(ei);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                let parent_edge = frame.parent_edge;
                frames.pop();
                if let Some(pframe) = frames.last() {
                    let p = pframe.v;
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        // v's subtree plus the tree edge forms a block.
                        let mut block = Vec::new();
                        while let Some(&top) = stack.last() {
                            if top == parent_edge {
                                break;
                            }
                            block.push(stack.pop().unwrap());
                        }
                        debug_assert_eq!(stack.last(), Some(&parent_edge));
                        block.push(stack.pop().unwrap());
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// Counts parallel arcs per unordered vertex pair; the largest class size.
/// In a graph with no equivalent arcs, three parallels certify three
/// distinct s-t path labels once the pair is linked to the terminals.
pub fn max_parallel_class(g: &LabeledGraph) -> usize {
    let mut counts: BTreeMap<(String, String), usize> = BTreeMap::new();
    for a in g.arcs() {
        let key = if a.tail <= a.head {
            (a.tail.clone(), a.head.clone())
        } else {
            (a.head.clone(), a.tail.clone())
        };
        *counts.entry(key).or_insert(0) += 1;
    }
    counts.values().copied().max().unwrap_or(0)
}

/// The arcs joining an unordered vertex pair, in id order.
pub fn arcs_between<'a>(g: &'a LabeledGraph, u: &str, v: &str) -> Vec<&'a Arc> {
    g.arcs()
        .iter()
        .filter(|a| (a.tail == u && a.head == v) || (a.tail == v && a.head == u))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fixture F1: cyclic(3) with arcs s->t:0, s->u:0, u->t:1.
    pub fn f1() -> LabeledGraph {
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        g.add_arc("s", "t", GroupElement::Residue(0)).unwrap();
        g.add_arc("s", "u", GroupElement::Residue(0)).unwrap();
        g.add_arc("u", "t", GroupElement::Residue(1)).unwrap();
        g
    }

    /// Fixture F3: two parallel arcs x->y with labels 0 and 1 in cyclic(3).
    pub fn f3() -> LabeledGraph {
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        g.add_arc("x", "y", GroupElement::Residue(0)).unwrap();
        g.add_arc("x", "y", GroupElement::Residue(1)).unwrap();
        g
    }

    #[test]
    fn traversal_labels() {
        let g = f1();
        let su = g.arcs()[1].id;
        assert_eq!(arc_traverse_label(&g, su, "u"), GroupElement::Residue(0));
        assert_eq!(arc_traverse_label(&g, su, "s"), GroupElement::Residue(0));
        let ut = g.arcs()[2].id;
        assert_eq!(arc_traverse_label(&g, ut, "t"), GroupElement::Residue(1));
        assert_eq!(arc_traverse_label(&g, ut, "u"), GroupElement::Residue(2));
    }

    #[test]
    #[should_panic(expected = "not an endpoint")]
    fn traversal_rejects_non_endpoint() {
        let g = f1();
        let st = g.arcs()[0].id;
        arc_traverse_label(&g, st, "u");
    }

    #[test]
    fn walk_labels_f1() {
        let g = f1();
        let su = g.arcs()[1].id;
        let ut = g.arcs()[2].id;
        let st = g.arcs()[0].id;
        let sut = Path::new(&g, "s", &[su, ut]).unwrap();
        assert_eq!(sut.label(&g), GroupElement::Residue(1));
        let direct = Path::new(&g, "s", &[st]).unwrap();
        assert_eq!(direct.label(&g), GroupElement::Residue(0));
        let empty = Walk::new("s");
        assert_eq!(walk_label(&g, &empty), GroupElement::Residue(0));
    }

    #[test]
    fn reversed_walk_has_inverse_label() {
        let g = f1();
        let su = g.arcs()[1].id;
        let ut = g.arcs()[2].id;
        let w = Walk::from_arc_ids(&g, "s", &[su, ut]).unwrap();
        let r = w.reversed(&g);
        assert_eq!(walk_label(&g, &r), g.spec().inv(&walk_label(&g, &w)));
    }

    #[test]
    fn endpoint_traversals_cancel() {
        let g = f1();
        for a in g.arcs() {
            let fwd = arc_traverse_label(&g, a.id, &a.head);
            let bwd = arc_traverse_label(&g, a.id, &a.tail);
            assert!(g.spec().is_identity(&g.spec().mul(&fwd, &bwd)));
        }
    }

    #[test]
    fn path_validation() {
        let g = f1();
        let su = g.arcs()[1].id;
        let ut = g.arcs()[2].id;
        let p = Path::new(&g, "s", &[su, ut]).unwrap();
        assert!(validate_path(&g, &p, "s", "t"));
        assert!(!validate_path(&g, &p, "s", "u"));
        // s,u,s revisits s.
        assert!(Path::new(&g, "s", &[su, su]).is_err());
    }

    #[test]
    fn loops_rejected() {
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        assert_eq!(
            g.add_arc("u", "u", GroupElement::Residue(1)),
            Err(GraphError::LoopArc("u".into(), "u".into()))
        );
    }

    #[test]
    fn dedupe_keeps_one_per_class() {
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        let first = g.add_arc("u", "v", GroupElement::Residue(1)).unwrap();
        // Anti-parallel with the inverse label: equivalent.
        g.add_arc("v", "u", GroupElement::Residue(2)).unwrap();
        // Parallel duplicate: equivalent.
        g.add_arc("u", "v", GroupElement::Residue(1)).unwrap();
        // Distinct label: kept.
        let other = g.add_arc("u", "v", GroupElement::Residue(0)).unwrap();
        let d = dedupe_equivalent_arcs(&g);
        let ids: Vec<ArcId> = d.arcs().iter().map(|a| a.id).collect();
        assert_eq!(ids, vec![first, other]);
    }

    #[test]
    fn orientation_rules() {
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        g.add_arc("v", "s", GroupElement::Residue(1)).unwrap();
        g.add_arc("t", "v", GroupElement::Residue(1)).unwrap();
        g.add_arc("t", "s", GroupElement::Residue(1)).unwrap();
        let o = orient_around_terminals(&g, "s", "t");
        let a0 = &o.arcs()[0];
        assert_eq!((a0.tail.as_str(), a0.head.as_str()), ("s", "v"));
        assert_eq!(a0.label, GroupElement::Residue(2));
        let a1 = &o.arcs()[1];
        assert_eq!((a1.tail.as_str(), a1.head.as_str()), ("v", "t"));
        assert_eq!(a1.label, GroupElement::Residue(2));
        // t->s flips under the s-rule.
        let a2 = &o.arcs()[2];
        assert_eq!((a2.tail.as_str(), a2.head.as_str()), ("s", "t"));
        assert_eq!(a2.label, GroupElement::Residue(2));
    }

    #[test]
    fn normalize_keeps_f1() {
        let g = f1();
        let n = normalize_to_d(&g, "s", "t").unwrap();
        assert_eq!(n.arc_count(), 3);
        assert_eq!(n.vertex_count(), 3);
    }

    #[test]
    fn normalize_drops_pendant() {
        let mut g = f1();
        g.add_arc("u", "w", GroupElement::Residue(2)).unwrap();
        let n = normalize_to_d(&g, "s", "t").unwrap();
        assert!(!n.has_vertex("w"));
        assert_eq!(n.arc_count(), 3);
    }

    #[test]
    fn normalize_disconnected_terminals() {
        let mut g = LabeledGraph::new(GroupSpec::Cyclic(3));
        g.add_arc("s", "a", GroupElement::Residue(1)).unwrap();
        g.add_arc("t", "b", GroupElement::Residue(1)).unwrap();
        let n = normalize_to_d(&g, "s", "t").unwrap();
        assert_eq!(n.arc_count(), 0);
        assert_eq!(n.vertices(), &["s".to_string(), "t".to_string()]);
    }

    #[test]
    fn normalize_rejects_bad_terminals() {
        let g = f1();
        assert_eq!(normalize_to_d(&g, "s", "s"), Err(GraphError::SameTerminals));
        assert!(matches!(
            normalize_to_d(&g, "s", "zz"),
            Err(GraphError::MissingVertex(_))
        ));
    }

    #[test]
    fn normalize_two_vertex_graph() {
        let g = f3();
        let n = normalize_to_d(&g, "x", "y").unwrap();
        assert_eq!(n.arc_count(), 2);
    }

    #[test]
    fn path_enumeration_f1() {
        let g = f1();
        assert_eq!(g.all_st_paths("s", "t").len(), 2);
        assert_eq!(g.all_st_paths("u", "s").len(), 2);
    }

    #[test]
    fn induced_subgraph_keeps_ids() {
        let g = f1();
        let keep: BTreeSet<String> = ["s", "u"].iter().map(|s| s.to_string()).collect();
        let h = g.induced(&keep);
        assert_eq!(h.arc_count(), 1);
        assert_eq!(h.arcs()[0].id, g.arcs()[1].id);
    }

    #[test]
    fn parallel_class_counting() {
        let mut g = f3();
        assert_eq!(max_parallel_class(&g), 2);
        g.add_arc("y", "x", GroupElement::Residue(1)).unwrap();
        assert_eq!(max_parallel_class(&g), 3);
        assert_eq!(arcs_between(&g, "y", "x").len(), 3);
    }
}
