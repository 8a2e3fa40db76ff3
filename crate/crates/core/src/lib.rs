//! Analysis of path labels in group-labeled graphs.
//!
//! A group-labeled graph is a directed multigraph whose arcs carry elements
//! of a group; traversing an arc against its direction contributes the
//! inverse label. For two terminals `s` and `t`, the set of labels attained
//! by simple s-t paths is written `l(G; s, t)`. This crate decides whether
//! that set has size 0, 1, 2, or at least 3 (with witness paths), finds an
//! s-t path avoiding two forbidden labels, computes the full label set over
//! Z3, and solves the 2-disjoint paths problem by reduction.
//!
//! The group is pluggable: cyclic groups, the integers, symmetric groups,
//! and free groups are supported, all with canonical normal forms so that
//! equality is structural.

pub mod cli;
pub mod connectivity;
pub mod contraction;
pub mod format;
pub mod gen;
pub mod group;
pub mod lgraph;
pub mod normalize;
pub mod oracle;
pub mod planar;
pub mod reduce;
pub mod solve;

pub use group::{GroupElement, GroupSpec};
pub use lgraph::{Arc, ArcId, Dir, LabelSummary, LabeledGraph, Path, Step, Walk};
