//! The instance file format: UTF-8, line oriented, diff friendly.
//!
//! ```text
//! # labeled instance
//! group cyclic 3
//! vertex s
//! arc s u 1
//! arc u t 2
//! ```
//!
//! Unlabeled inputs for the disjoint-paths reductions omit the `group`
//! line and use `edge U V` lines instead of arcs. Vertex names match
//! `[A-Za-z0-9_]+`. Element syntax per group: decimal integers for cyclic
//! and integer groups, cycle notation like `(1,2)(3,4)` or `id` for
//! symmetric groups, and `.`-separated letters with `'` for inversion in
//! free groups (identity `e`).

use std::fmt;

use crate::group::GroupSpec;
use crate::lgraph::LabeledGraph;
use crate::reduce::UnGraph;

/// A parse failure with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone)]
pub enum ParsedInstance {
    Labeled(LabeledGraph),
    Unlabeled(UnGraph),
}

/// Non-fatal observations made while parsing (duplicate vertex lines and
/// the like).
pub type Diagnostics = Vec<String>;

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a group description like `cyclic 3`, `integer`, `symmetric 4`,
/// or `free a b`.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec, String> {
    let mut parts = text.split_whitespace();
    let kind = parts.next().ok_or("missing group kind")?;
    let spec = match kind {
        "cyclic" => {
            let q: u64 = parts
                .next()
                .ok_or("cyclic needs a modulus")?
                .parse()
                .map_err(|_| "cyclic modulus must be a positive integer")?;
            GroupSpec::Cyclic(q)
        }
        "integer" => GroupSpec::Integer,
        "symmetric" => {
            let n: usize = parts
                .next()
                .ok_or("symmetric needs a degree")?
                .parse()
                .map_err(|_| "symmetric degree must be a positive integer")?;
            GroupSpec::Symmetric(n)
        }
        "free" => {
            let gens: Vec<String> = parts.by_ref().map(str::to_string).collect();
            for g in &gens {
                if !valid_name(g) {
                    return Err(format!("bad generator name {g:?}"));
                }
            }
            GroupSpec::Free(gens)
        }
        other => {
            return Err(format!(
                "unknown group kind {other:?} (supported: cyclic, integer, symmetric, free)"
            ))
        }
    };
    if parts.next().is_some() {
        return Err("trailing tokens after group spec".into());
    }
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

/// Parses an instance file into a labeled or unlabeled graph.
pub fn parse_instance(text: &str) -> Result<(ParsedInstance, Diagnostics), ParseError> {
    let mut spec: Option<GroupSpec> = None;
    let mut labeled = None::<LabeledGraph>;
    let mut unlabeled = UnGraph::default();
    let mut saw_edge = false;
    let mut saw_arc = false;
    let mut diagnostics = Vec::new();
    let mut declared: Vec<String> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let err = |message: String| ParseError {
            line: lineno,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let keyword = parts.next().unwrap();
        match keyword {
            "group" => {
                if spec.is_some() {
                    return Err(err("duplicate group line".into()));
                }
                if saw_arc || saw_edge {
                    return Err(err("group line must precede arcs".into()));
                }
                let rest = line["group".len()..].trim();
                let parsed = parse_group_spec(rest).map_err(|m| err(m))?;
                labeled = Some(LabeledGraph::new(parsed.clone()));
                spec = Some(parsed);
            }
            "vertex" => {
                let name = parts.next().ok_or_else(|| err("vertex needs a name".into()))?;
                if !valid_name(name) {
                    return Err(err(format!("bad vertex name {name:?}")));
                }
                if parts.next().is_some() {
                    return Err(err("trailing tokens after vertex".into()));
                }
                if declared.iter().any(|v| v == name) {
                    diagnostics.push(format!("line {lineno}: vertex {name} declared twice"));
                }
                declared.push(name.to_string());
                match &mut labeled {
                    Some(g) => g.add_vertex(name),
                    None => unlabeled.add_vertex(name),
                }
            }
            "arc" => {
                let (Some(tail), Some(head), Some(label)) =
                    (parts.next(), parts.next(), parts.next())
                else {
                    return Err(err("arc needs TAIL HEAD LABEL".into()));
                };
                if parts.next().is_some() {
                    return Err(err("trailing tokens after arc".into()));
                }
                if !valid_name(tail) || !valid_name(head) {
                    return Err(err("bad vertex name in arc".into()));
                }
                let Some(g) = &mut labeled else {
                    return Err(err("arc line requires a group declaration".into()));
                };
                if saw_edge {
                    return Err(err("cannot mix arc and edge lines".into()));
                }
                saw_arc = true;
                let spec = spec.as_ref().unwrap();
                let element = spec
                    .parse_element(label)
                    .map_err(|e| err(e.to_string()))?;
                g.add_arc(tail, head, element).map_err(|e| err(e.to_string()))?;
            }
            "edge" => {
                let (Some(u), Some(v)) = (parts.next(), parts.next()) else {
                    return Err(err("edge needs U V".into()));
                };
                if parts.next().is_some() {
                    return Err(err("trailing tokens after edge".into()));
                }
                if !valid_name(u) || !valid_name(v) {
                    return Err(err("bad vertex name in edge".into()));
                }
                if labeled.is_some() {
                    return Err(err(
                        "edge lines are for unlabeled instances; use arc with a group".into(),
                    ));
                }
                saw_edge = true;
                unlabeled.add_edge(u, v).map_err(|m| err(m))?;
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }

    match labeled {
        Some(g) => Ok((ParsedInstance::Labeled(g), diagnostics)),
        None => Ok((ParsedInstance::Unlabeled(unlabeled), diagnostics)),
    }
}

/// Renders a labeled graph in the instance format; parsing the output
/// reproduces the graph when its arc ids are consecutive from zero.
pub fn serialize_labeled(g: &LabeledGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("group {}\n", g.spec()));
    for v in g.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for a in g.arcs() {
        out.push_str(&format!(
            "arc {} {} {}\n",
            a.tail,
            a.head,
            g.spec().format_element(&a.label)
        ));
    }
    out
}

/// Renders an unlabeled graph in the instance format.
pub fn serialize_unlabeled(g: &UnGraph) -> String {
    let mut out = String::new();
    for v in &g.vertices {
        out.push_str(&format!("vertex {v}\n"));
    }
    for (u, v) in &g.edges {
        out.push_str(&format!("edge {u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;

    #[test]
    fn parses_basic_instance() {
        let text = "# comment\ngroup cyclic 3\narc s u 1\narc u t 2\n";
        let (inst, diags) = parse_instance(text).unwrap();
        assert!(diags.is_empty());
        match inst {
            ParsedInstance::Labeled(g) => {
                assert_eq!(g.vertex_count(), 3);
                assert_eq!(g.arc_count(), 2);
                assert_eq!(g.arcs()[0].label, GroupElement::Residue(1));
            }
            _ => panic!("labeled instance expected"),
        }
    }

    #[test]
    fn rejects_loops_with_line_number() {
        let text = "group cyclic 3\narc u u 1\n";
        let e = parse_instance(text).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("loop"));
    }

    #[test]
    fn parses_free_labels() {
        let text = "group free a b\narc u v a.b'\n";
        let (inst, _) = parse_instance(text).unwrap();
        match inst {
            ParsedInstance::Labeled(g) => match &g.arcs()[0].label {
                GroupElement::Word(w) => assert_eq!(w.len(), 2),
                other => panic!("expected a word, got {other:?}"),
            },
            _ => panic!("labeled instance expected"),
        }
    }

    #[test]
    fn rejects_unknown_group_and_bad_labels() {
        assert_eq!(parse_instance("group frobnicate 3\n").unwrap_err().line, 1);
        assert_eq!(
            parse_instance("group cyclic 3\narc u v xyz\n").unwrap_err().line,
            2
        );
        assert_eq!(
            parse_instance("group cyclic 3\nedge u v\n").unwrap_err().line,
            2
        );
        assert_eq!(parse_instance("arc u v 1\n").unwrap_err().line, 1);
    }

    #[test]
    fn parses_unlabeled() {
        let (inst, _) = parse_instance("vertex a\nedge a b\nedge b c\n").unwrap();
        match inst {
            ParsedInstance::Unlabeled(g) => {
                assert_eq!(g.vertices.len(), 3);
                assert_eq!(g.edges.len(), 2);
            }
            _ => panic!("unlabeled instance expected"),
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let text = "group symmetric 4\nvertex a\nvertex b\nvertex c\narc a b (1,2)(3,4)\narc b c (1,3,2)\narc a c id\n";
        let (inst, _) = parse_instance(text).unwrap();
        let ParsedInstance::Labeled(g) = inst else {
            panic!("labeled expected")
        };
        let rendered = serialize_labeled(&g);
        let (again, _) = parse_instance(&rendered).unwrap();
        let ParsedInstance::Labeled(h) = again else {
            panic!("labeled expected")
        };
        assert_eq!(g, h);
    }

    #[test]
    fn duplicate_vertex_is_diagnosed_not_fatal() {
        let (_, diags) = parse_instance("group cyclic 2\nvertex a\nvertex a\n").unwrap();
        assert_eq!(diags.len(), 1);
    }
}
