//! Command dispatch and output formatting for the `glpath` binary.
//!
//! Exit codes: 0 when the question was answered, 1 for negative verdicts
//! (no paths, label set contained in the forbidden set, disjoint paths
//! infeasible), 2 for usage and parse errors.

use std::collections::BTreeSet;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use serde::Serialize;

use crate::format::{parse_group_spec, parse_instance, serialize_labeled, ParsedInstance};
use crate::group::GroupElement;
use crate::lgraph::{LabelSummary, LabeledGraph, Path};
use crate::normalize::AvoidOutcome;
use crate::oracle;
use crate::reduce::{reduce_kdisjoint, solve_2disjoint, UnGraph};
use crate::solve::{find_three_paths, forbidden_two_path, test_two_labels, z3_labels};

pub const EXIT_ANSWERED: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "glpath",
    about = "Path-label analysis in group-labeled graphs",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Instance file.
    file: String,
    /// Emit structured JSON instead of text.
    #[arg(long, global = false)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the set of s-t path labels (full set over cyclic 3).
    Labels {
        file: String,
        s: String,
        t: String,
        #[arg(long)]
        json: bool,
    },
    /// Find an s-t path avoiding two forbidden labels.
    Avoid {
        file: String,
        s: String,
        t: String,
        /// The two forbidden labels, comma separated (commas inside
        /// parentheses belong to cycle notation).
        #[arg(long)]
        forbid: String,
        #[arg(long)]
        json: bool,
    },
    /// Find three s-t paths with pairwise distinct labels.
    Three {
        file: String,
        s: String,
        t: String,
        #[arg(long)]
        json: bool,
    },
    /// Test whether every cycle has the identity label.
    Balanced {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Solve the 2-disjoint paths problem on an unlabeled instance.
    Disjoint2 {
        file: String,
        s1: String,
        t1: String,
        s2: String,
        t2: String,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force the label set (debugging aid).
    OracleLabels {
        file: String,
        s: String,
        t: String,
        #[arg(long, default_value_t = 3)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force two disjoint paths (debugging aid).
    OracleDisjoint {
        file: String,
        s1: String,
        t1: String,
        s2: String,
        t2: String,
        #[arg(long)]
        json: bool,
    },
    /// Build the k-disjoint-paths reduction instance (construction only;
    /// printed, not solved).
    ReduceK {
        file: String,
        /// Terminals as s1 t1 s2 t2 [s3 t3 ...].
        terminals: Vec<String>,
    },
    /// Emit a reproducible random instance.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: usize,
        /// Group description, e.g. "cyclic 3", "symmetric 4", "free a b".
        #[arg(long)]
        group: String,
    },
}

#[derive(Serialize)]
struct PathJson {
    vertices: Vec<String>,
    arc_ids: Vec<u32>,
    label: String,
}

fn path_json(g: &LabeledGraph, p: &Path) -> PathJson {
    PathJson {
        vertices: p.vertex_sequence(g),
        arc_ids: p.arc_ids().iter().map(|a| a.0).collect(),
        label: g.spec().format_element(&p.label(g)),
    }
}

#[derive(Serialize)]
struct LabelsJson {
    classification: &'static str,
    labels: Vec<String>,
    witnesses: Vec<PathJson>,
}

fn labels_json(g: &LabeledGraph, summary: &LabelSummary) -> LabelsJson {
    let classification = match summary {
        LabelSummary::Empty => "empty",
        LabelSummary::One { .. } => "one",
        LabelSummary::Two { .. } => "two",
        LabelSummary::ThreeOrMore { .. } => "three_or_more",
    };
    LabelsJson {
        classification,
        labels: summary
            .labels()
            .iter()
            .map(|l| g.spec().format_element(l))
            .collect(),
        witnesses: summary.witnesses().iter().map(|p| path_json(g, p)).collect(),
    }
}

/// Runs a command line (without the binary name) and writes its report;
/// returns the exit code.
pub fn run(argv: &[String], out: &mut dyn Write) -> i32 {
    let mut full = vec!["glpath".to_string()];
    full.extend(argv.iter().cloned());
    let cli = match Cli::try_parse_from(&full) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(out, "error: {message}");
            EXIT_USAGE
        }
    }
}

fn load_labeled(path: &str) -> Result<LabeledGraph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    match parse_instance(&text).map_err(|e| format!("{path}: {e}"))? {
        (ParsedInstance::Labeled(g), _) => Ok(g),
        (ParsedInstance::Unlabeled(_), _) => {
            Err(format!("{path}: expected a labeled instance (group + arc lines)"))
        }
    }
}

fn load_unlabeled(path: &str) -> Result<UnGraph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    match parse_instance(&text).map_err(|e| format!("{path}: {e}"))? {
        (ParsedInstance::Unlabeled(g), _) => Ok(g),
        (ParsedInstance::Labeled(_), _) => {
            Err(format!("{path}: expected an unlabeled instance (edge lines, no group)"))
        }
    }
}

fn require_terminal(g: &LabeledGraph, v: &str) -> Result<(), String> {
    if g.has_vertex(v) {
        Ok(())
    } else {
        Err(format!("vertex {v:?} not in the instance"))
    }
}

/// Splits a forbidden-label list on commas at parenthesis depth zero, so
/// symmetric-group cycle notation survives.
fn split_labels(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(c),
        }
    }
    out.push(cur);
    out
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, String> {
    let w = |out: &mut dyn Write, line: String| {
        let _ = writeln!(out, "{line}");
    };
    match command {
        Command::Labels { file, s, t, json } => {
            let g = load_labeled(&file)?;
            require_terminal(&g, &s)?;
            require_terminal(&g, &t)?;
            if s == t {
                return Err("terminals must be distinct".into());
            }
            let summary = if g.spec() == &crate::group::GroupSpec::Cyclic(3) {
                z3_labels(&g, &s, &t)
            } else {
                test_two_labels(&g, &s, &t)
            };
            if json {
                w(out, serde_json::to_string_pretty(&labels_json(&g, &summary)).unwrap());
            } else {
                match &summary {
                    LabelSummary::Empty => w(out, "no s-t path".into()),
                    LabelSummary::One { label, witness } => {
                        w(out, format!("one label: {}", g.spec().format_element(label)));
                        w(out, format!("  path: {}", witness.vertex_sequence(&g).join(",")));
                    }
                    LabelSummary::Two { labels, witnesses } => {
                        w(
                            out,
                            format!(
                                "two labels: {}, {}",
                                g.spec().format_element(&labels[0]),
                                g.spec().format_element(&labels[1])
                            ),
                        );
                        for (l, p) in labels.iter().zip(witnesses.iter()) {
                            w(
                                out,
                                format!(
                                    "  label {}: {}",
                                    g.spec().format_element(l),
                                    p.vertex_sequence(&g).join(",")
                                ),
                            );
                        }
                    }
                    LabelSummary::ThreeOrMore { labels, witnesses } => {
                        let all: Vec<String> =
                            labels.iter().map(|l| g.spec().format_element(l)).collect();
                        if g.spec() == &crate::group::GroupSpec::Cyclic(3) {
                            w(out, format!("full label set: {}", all.join(", ")));
                        } else {
                            w(out, format!("three or more labels, e.g.: {}", all.join(", ")));
                        }
                        for (l, p) in labels.iter().zip(witnesses.iter()) {
                            w(
                                out,
                                format!(
                                    "  label {}: {}",
                                    g.spec().format_element(l),
                                    p.vertex_sequence(&g).join(",")
                                ),
                            );
                        }
                    }
                }
            }
            Ok(match summary {
                LabelSummary::Empty => EXIT_NEGATIVE,
                _ => EXIT_ANSWERED,
            })
        }
        Command::Avoid {
            file,
            s,
            t,
            forbid,
            json,
        } => {
            let g = load_labeled(&file)?;
            require_terminal(&g, &s)?;
            require_terminal(&g, &t)?;
            let parts = split_labels(&forbid);
            if parts.len() != 2 {
                return Err(format!("--forbid needs exactly two labels, got {}", parts.len()));
            }
            let alpha = g.spec().parse_element(parts[0].trim()).map_err(|e| e.to_string())?;
            let beta = g.spec().parse_element(parts[1].trim()).map_err(|e| e.to_string())?;
            if alpha == beta {
                return Err("forbidden labels must be distinct".into());
            }
            match forbidden_two_path(&g, &s, &t, &alpha, &beta) {
                AvoidOutcome::Found(p) => {
                    if json {
                        #[derive(Serialize)]
                        struct AvoidJson {
                            outcome: &'static str,
                            path: PathJson,
                        }
                        w(
                            out,
                            serde_json::to_string_pretty(&AvoidJson {
                                outcome: "found",
                                path: path_json(&g, &p),
                            })
                            .unwrap(),
                        );
                    } else {
                        w(
                            out,
                            format!(
                                "path with label {}: {}",
                                g.spec().format_element(&p.label(&g)),
                                p.vertex_sequence(&g).join(",")
                            ),
                        );
                    }
                    Ok(EXIT_ANSWERED)
                }
                AvoidOutcome::Contained => {
                    if json {
                        w(out, "{\n  \"outcome\": \"contained\"\n}".into());
                    } else {
                        w(out, "contained".into());
                    }
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Three { file, s, t, json } => {
            let g = load_labeled(&file)?;
            require_terminal(&g, &s)?;
            require_terminal(&g, &t)?;
            match test_two_labels(&g, &s, &t) {
                LabelSummary::ThreeOrMore { labels, witnesses } => {
                    if json {
                        #[derive(Serialize)]
                        struct ThreeJson {
                            paths: Vec<PathJson>,
                        }
                        w(
                            out,
                            serde_json::to_string_pretty(&ThreeJson {
                                paths: witnesses.iter().map(|p| path_json(&g, p)).collect(),
                            })
                            .unwrap(),
                        );
                    } else {
                        for (l, p) in labels.iter().zip(witnesses.iter()) {
                            w(
                                out,
                                format!(
                                    "label {}: {}",
                                    g.spec().format_element(l),
                                    p.vertex_sequence(&g).join(",")
                                ),
                            );
                        }
                    }
                    Ok(EXIT_ANSWERED)
                }
                other => {
                    let n = other.labels().len();
                    w(out, format!("only {n} label(s) exist"));
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Balanced { file, json } => {
            let g = load_labeled(&file)?;
            let (balanced, witness) = crate::normalize::is_balanced(&g);
            if json {
                #[derive(Serialize)]
                struct BalancedJson {
                    balanced: bool,
                    witness_cycle: Option<Vec<String>>,
                }
                let cycle = witness.as_ref().map(|c| c.vertex_sequence(&g));
                w(
                    out,
                    serde_json::to_string_pretty(&BalancedJson {
                        balanced,
                        witness_cycle: cycle,
                    })
                    .unwrap(),
                );
            } else if balanced {
                w(out, "balanced".into());
            } else {
                let cycle = witness.unwrap().vertex_sequence(&g).join(",");
                w(out, format!("unbalanced; witness cycle: {cycle}"));
            }
            Ok(EXIT_ANSWERED)
        }
        Command::Disjoint2 {
            file,
            s1,
            t1,
            s2,
            t2,
            json,
        } => {
            let g = load_unlabeled(&file)?;
            match solve_2disjoint(&g, &s1, &t1, &s2, &t2)? {
                Some((p1, p2)) => {
                    if json {
                        #[derive(Serialize)]
                        struct DisjointJson {
                            feasible: bool,
                            paths: Vec<Vec<String>>,
                        }
                        w(
                            out,
                            serde_json::to_string_pretty(&DisjointJson {
                                feasible: true,
                                paths: vec![p1, p2],
                            })
                            .unwrap(),
                        );
                    } else {
                        w(out, format!("path 1: {}", p1.join(",")));
                        w(out, format!("path 2: {}", p2.join(",")));
                    }
                    Ok(EXIT_ANSWERED)
                }
                None => {
                    if json {
                        w(out, "{\n  \"feasible\": false\n}".into());
                    } else {
                        w(out, "infeasible".into());
                    }
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::OracleLabels { file, s, t, cap, json } => {
            let g = load_labeled(&file)?;
            require_terminal(&g, &s)?;
            require_terminal(&g, &t)?;
            if cap == 0 {
                return Err("--cap must be at least 1".into());
            }
            let result = oracle::label_set_bruteforce(&g, &s, &t, cap);
            let (exact, labels): (bool, &BTreeSet<GroupElement>) = match &result {
                oracle::LabelSet::Exact(set) => (true, set),
                oracle::LabelSet::MoreThan(set) => (false, set),
            };
            let rendered: Vec<String> =
                labels.iter().map(|l| g.spec().format_element(l)).collect();
            if json {
                #[derive(Serialize)]
                struct OracleJson {
                    exact: bool,
                    labels: Vec<String>,
                }
                w(
                    out,
                    serde_json::to_string_pretty(&OracleJson {
                        exact,
                        labels: rendered,
                    })
                    .unwrap(),
                );
            } else if exact {
                w(out, format!("labels: {{{}}}", rendered.join(", ")));
            } else {
                w(out, format!("more than {cap} labels; sample: {{{}}}", rendered.join(", ")));
            }
            Ok(EXIT_ANSWERED)
        }
        Command::OracleDisjoint {
            file,
            s1,
            t1,
            s2,
            t2,
            json,
        } => {
            let g = load_unlabeled(&file)?;
            let mut lg = LabeledGraph::new(crate::group::GroupSpec::Cyclic(3));
            for v in &g.vertices {
                lg.add_vertex(v);
            }
            for (u, v) in &g.edges {
                lg.add_arc(u, v, GroupElement::Residue(0)).map_err(|e| e.to_string())?;
            }
            for v in [&s1, &t1, &s2, &t2] {
                require_terminal(&lg, v)?;
            }
            let pairs = vec![(s1, t1), (s2, t2)];
            match oracle::disjoint_paths_bruteforce(&lg, &pairs) {
                Some(paths) => {
                    if json {
                        #[derive(Serialize)]
                        struct DisjointJson {
                            feasible: bool,
                            paths: Vec<Vec<String>>,
                        }
                        w(
                            out,
                            serde_json::to_string_pretty(&DisjointJson {
                                feasible: true,
                                paths,
                            })
                            .unwrap(),
                        );
                    } else {
                        for (i, p) in paths.iter().enumerate() {
                            w(out, format!("path {}: {}", i + 1, p.join(",")));
                        }
                    }
                    Ok(EXIT_ANSWERED)
                }
                None => {
                    if json {
                        w(out, "{\n  \"feasible\": false\n}".into());
                    } else {
                        w(out, "infeasible".into());
                    }
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::ReduceK { file, terminals } => {
            if terminals.len() < 4 || terminals.len() % 2 != 0 {
                return Err("terminals must be s1 t1 s2 t2 [s3 t3 ...]".into());
            }
            let g = load_unlabeled(&file)?;
            let pairs: Vec<(String, String)> = terminals
                .chunks(2)
                .map(|c| (c[0].clone(), c[1].clone()))
                .collect();
            let reduced = reduce_kdisjoint(&g, &pairs)?;
            let _ = writeln!(
                out,
                "# instance construction only; target label {} from {} to {}",
                reduced.graph.spec().format_element(&reduced.target),
                reduced.source,
                reduced.sink
            );
            let _ = write!(out, "{}", serialize_labeled(&reduced.graph));
            Ok(EXIT_ANSWERED)
        }
        Command::Gen {
            seed,
            vertices,
            edges,
            group,
        } => {
            if vertices < 2 {
                return Err("--vertices must be at least 2".into());
            }
            let spec = parse_group_spec(&group)?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = crate::gen::random_graph_exact(&mut rng, vertices, edges, &spec);
            let _ = write!(out, "{}", serialize_labeled(&g));
            Ok(EXIT_ANSWERED)
        }
    }
}
