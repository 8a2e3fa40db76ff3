//! Pluggable group arithmetic with a decidable identity test.
//!
//! Elements are always kept in a canonical normal form, so structural
//! equality coincides with group equality and `is_identity` is a constant
//! time check. The supported families (cyclic, integers, symmetric, free)
//! all have trivially decidable word problems; arbitrary finite
//! presentations are rejected at parse time.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which group the labels of a graph live in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    /// Z/qZ under addition, q >= 1.
    Cyclic(u64),
    /// Z under addition.
    Integer,
    /// Permutations of {1..n} under composition, n >= 1.
    Symmetric(usize),
    /// The free group on a list of distinct, non-empty generator names.
    Free(Vec<String>),
}

/// An element of the active group, stored in normal form.
///
/// Normal forms: residue reduced into `[0, q)`; plain signed integer;
/// permutation as a 0-based image array that is a bijection; freely reduced
/// word of `(generator index, +/-1)` letters with no adjacent cancelling
/// pair. Two elements are equal iff their normal forms are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupElement {
    Residue(u64),
    Int(i64),
    Perm(Vec<usize>),
    Word(Vec<(u32, i8)>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid group spec: {0}")]
    BadSpec(String),
    #[error("cannot parse {0:?} as an element of {1}")]
    BadElement(String, String),
}

impl GroupSpec {
    /// Validates the spec parameters (modulus, degree, generator names).
    pub fn validate(&self) -> Result<(), GroupError> {
        match self {
            GroupSpec::Cyclic(q) => {
                if *q == 0 {
                    return Err(GroupError::BadSpec("cyclic modulus must be >= 1".into()));
                }
            }
            GroupSpec::Integer => {}
            GroupSpec::Symmetric(n) => {
                if *n == 0 {
                    return Err(GroupError::BadSpec("symmetric degree must be >= 1".into()));
                }
            }
            GroupSpec::Free(gens) => {
                if gens.is_empty() {
                    return Err(GroupError::BadSpec("free group needs generators".into()));
                }
                for (i, g) in gens.iter().enumerate() {
                    if g.is_empty() {
                        return Err(GroupError::BadSpec("empty generator name".into()));
                    }
                    if gens[..i].contains(g) {
                        return Err(GroupError::BadSpec(format!("duplicate generator {g:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The neutral element, in normal form.
    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::Cyclic(_) => GroupElement::Residue(0),
            GroupSpec::Integer => GroupElement::Int(0),
            GroupSpec::Symmetric(n) => GroupElement::Perm((0..*n).collect()),
            GroupSpec::Free(_) => GroupElement::Word(Vec::new()),
        }
    }

    /// True iff `a` is a well-formed normal-form element of this group.
    pub fn contains(&self, a: &GroupElement) -> bool {
        match (self, a) {
            (GroupSpec::Cyclic(q), GroupElement::Residue(r)) => r < q,
            (GroupSpec::Integer, GroupElement::Int(_)) => true,
            (GroupSpec::Symmetric(n), GroupElement::Perm(p)) => {
                p.len() == *n && {
                    let mut seen = vec![false; *n];
                    p.iter().all(|&i| i < *n && !std::mem::replace(&mut seen[i], true))
                }
            }
            (GroupSpec::Free(gens), GroupElement::Word(w)) => {
                w.iter().all(|&(g, e)| (g as usize) < gens.len() && (e == 1 || e == -1))
                    && w.windows(2).all(|p| !(p[0].0 == p[1].0 && p[0].1 == -p[1].1))
            }
            _ => false,
        }
    }

    fn expect_member(&self, a: &GroupElement) {
        assert!(self.contains(a), "element {a:?} does not belong to group {self}");
    }

    /// The product `a * b` in normal form. Panics if either element does
    /// not belong to this group (that is a caller bug; labels are checked
    /// when a graph is built).
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.expect_member(a);
        self.expect_member(b);
        match (self, a, b) {
            (GroupSpec::Cyclic(q), GroupElement::Residue(x), GroupElement::Residue(y)) => {
                GroupElement::Residue((x + y) % q)
            }
            (GroupSpec::Integer, GroupElement::Int(x), GroupElement::Int(y)) => {
                GroupElement::Int(x + y)
            }
            (GroupSpec::Symmetric(_), GroupElement::Perm(p), GroupElement::Perm(r)) => {
                // a*b applies b first, then a, matching the right-to-left
                // composition used for walk labels.
                GroupElement::Perm(r.iter().map(|&i| p[i]).collect())
            }
            (GroupSpec::Free(_), GroupElement::Word(u), GroupElement::Word(v)) => {
                let mut out = u.clone();
                for &letter in v {
                    push_reduced(&mut out, letter);
                }
                GroupElement::Word(out)
            }
            _ => unreachable!(),
        }
    }

    /// The inverse of `a` in normal form.
    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        self.expect_member(a);
        match (self, a) {
            (GroupSpec::Cyclic(q), GroupElement::Residue(x)) => {
                GroupElement::Residue(if *x == 0 { 0 } else { q - x })
            }
            (GroupSpec::Integer, GroupElement::Int(x)) => GroupElement::Int(-x),
            (GroupSpec::Symmetric(n), GroupElement::Perm(p)) => {
                let mut out = vec![0; *n];
                for (i, &img) in p.iter().enumerate() {
                    out[img] = i;
                }
                GroupElement::Perm(out)
            }
            (GroupSpec::Free(_), GroupElement::Word(w)) => {
                GroupElement::Word(w.iter().rev().map(|&(g, e)| (g, -e)).collect())
            }
            _ => unreachable!(),
        }
    }

    /// True iff `a` is the neutral element.
    pub fn is_identity(&self, a: &GroupElement) -> bool {
        self.expect_member(a);
        match a {
            GroupElement::Residue(r) => *r == 0,
            GroupElement::Int(x) => *x == 0,
            GroupElement::Perm(p) => p.iter().enumerate().all(|(i, &img)| i == img),
            GroupElement::Word(w) => w.is_empty(),
        }
    }

    /// Parses the textual element syntax used by the instance file format:
    /// a decimal integer for cyclic/integer groups, cycle notation such as
    /// `(1,2)(3,4)` or `id` for symmetric groups, and a `.`-separated word
    /// with `'` marking inversion (e.g. `a.b'.a`, identity `e`) for free
    /// groups.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement, GroupError> {
        let bad = || GroupError::BadElement(text.to_string(), self.to_string());
        match self {
            GroupSpec::Cyclic(q) => {
                let v: i64 = text.parse().map_err(|_| bad())?;
                Ok(GroupElement::Residue(v.rem_euclid(*q as i64) as u64))
            }
            GroupSpec::Integer => Ok(GroupElement::Int(text.parse().map_err(|_| bad())?)),
            GroupSpec::Symmetric(n) => {
                if text == "id" {
                    return Ok(self.identity());
                }
                let mut image: Vec<usize> = (0..*n).collect();
                let mut rest = text;
                while !rest.is_empty() {
                    if !rest.starts_with('(') {
                        return Err(bad());
                    }
                    let close = rest.find(')').ok_or_else(bad)?;
                    let mut cycle = Vec::new();
                    for part in rest[1..close].split(',') {
                        let v: usize = part.trim().parse().map_err(|_| bad())?;
                        if v == 0 || v > *n || cycle.contains(&(v - 1)) {
                            return Err(bad());
                        }
                        cycle.push(v - 1);
                    }
                    if cycle.len() < 2 {
                        return Err(bad());
                    }
                    // Compose the cycle on the left of what we have so far,
                    // so `(1,2)(3,4)` means: apply (3,4) first, then (1,2).
                    let mut cycled: Vec<usize> = (0..*n).collect();
                    for w in cycle.windows(2) {
                        cycled[w[0]] = w[1];
                    }
                    cycled[*cycle.last().unwrap()] = cycle[0];
                    image = image.iter().map(|&i| cycled[i]).collect();
                    rest = &rest[close + 1..];
                }
                let elem = GroupElement::Perm(image);
                if !self.contains(&elem) {
                    return Err(bad());
                }
                Ok(elem)
            }
            GroupSpec::Free(gens) => {
                if text == "e" {
                    return Ok(self.identity());
                }
                let mut word = Vec::new();
                for raw in text.split('.') {
                    let (name, exp) = match raw.strip_suffix('\'') {
                        Some(base) => (base, -1),
                        None => (raw, 1),
                    };
                    let idx = gens.iter().position(|g| g == name).ok_or_else(bad)?;
                    push_reduced(&mut word, (idx as u32, exp));
                }
                Ok(GroupElement::Word(word))
            }
        }
    }

    /// Renders an element in the same syntax accepted by `parse_element`.
    pub fn format_element(&self, a: &GroupElement) -> String {
        match a {
            GroupElement::Residue(r) => r.to_string(),
            GroupElement::Int(x) => x.to_string(),
            GroupElement::Perm(p) => {
                let cycles = cycle_decomposition(p);
                if cycles.is_empty() {
                    "id".to_string()
                } else {
                    cycles
                        .iter()
                        .map(|c| {
                            let inner: Vec<String> =
                                c.iter().map(|v| (v + 1).to_string()).collect();
                            format!("({})", inner.join(","))
                        })
                        .collect()
                }
            }
            GroupElement::Word(w) => {
                if w.is_empty() {
                    return "e".to_string();
                }
                let GroupSpec::Free(gens) = self else {
                    unreachable!("word element in non-free group")
                };
                w.iter()
                    .map(|&(g, e)| {
                        let name = &gens[g as usize];
                        if e == 1 {
                            name.clone()
                        } else {
                            format!("{name}'")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(".")
            }
        }
    }

    /// Draws a uniformly-ish random element, used by the instance generator.
    pub fn random_element(&self, rng: &mut impl rand::Rng) -> GroupElement {
        match self {
            GroupSpec::Cyclic(q) => GroupElement::Residue(rng.gen_range(0..*q)),
            GroupSpec::Integer => GroupElement::Int(rng.gen_range(-3..=3)),
            GroupSpec::Symmetric(n) => {
                let mut image: Vec<usize> = (0..*n).collect();
                // Fisher-Yates
                for i in (1..*n).rev() {
                    image.swap(i, rng.gen_range(0..=i));
                }
                GroupElement::Perm(image)
            }
            GroupSpec::Free(gens) => {
                let len = rng.gen_range(0..=3);
                let mut word = Vec::new();
                for _ in 0..len {
                    let g = rng.gen_range(0..gens.len()) as u32;
                    let e = if rng.gen_bool(0.5) { 1 } else { -1 };
                    push_reduced(&mut word, (g, e));
                }
                GroupElement::Word(word)
            }
        }
    }
}

/// True iff the permutation is even. Only meaningful for `Perm` elements;
/// used by the k-disjoint-paths reduction which works inside an alternating
/// group.
pub fn is_even_permutation(a: &GroupElement) -> bool {
    let GroupElement::Perm(p) = a else {
        panic!("parity is defined for permutation elements only")
    };
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = p[cur];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

fn push_reduced(word: &mut Vec<(u32, i8)>, letter: (u32, i8)) {
    match word.last() {
        Some(&(g, e)) if g == letter.0 && e == -letter.1 => {
            word.pop();
        }
        _ => word.push(letter),
    }
}

fn cycle_decomposition(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut cycles = Vec::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cycle.push(cur);
            cur = p[cur];
        }
        cycles.push(cycle);
    }
    cycles
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(q) => write!(f, "cyclic {q}"),
            GroupSpec::Integer => write!(f, "integer"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric {n}"),
            GroupSpec::Free(gens) => write!(f, "free {}", gens.join(" ")),
        }
    }
}
