//! Instance and solution file formats.
//!
//! Instances are DIMACS-like text: `c` comment lines, one `p fc <n> <m>` or
//! `p bfc <n> <m>` header, then `e <u> <v> <w>` lines with 1-indexed
//! vertices (ids are 0-indexed in memory). Emission is canonical — header
//! first, edges in id order, shortest round-trip float formatting — so
//! `emit ∘ parse ∘ emit` is byte-identical and `parse(emit(g)) == g`.
//!
//! Solution files carry a `s fc <k>` / `s bfc <k>` header and one
//! `t <vertices> ; <edge ids>` line per tree, 1-indexed like instances.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::graph::{Graph, Tree, WeightMode};
use crate::{Error, Result};

fn kind_name(mode: WeightMode) -> &'static str {
    match mode {
        WeightMode::FcNormalized => "fc",
        WeightMode::BfcRaw => "bfc",
    }
}

fn kind_from(token: &str, line: usize) -> Result<WeightMode> {
    match token {
        "fc" => Ok(WeightMode::FcNormalized),
        "bfc" => Ok(WeightMode::BfcRaw),
        other => Err(Error::Parse {
            line,
            message: format!("unknown problem kind {other:?} (expected fc or bfc)"),
        }),
    }
}

pub fn parse_instance(text: &str) -> Result<Graph> {
    let mut header: Option<(WeightMode, usize, usize)> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "p" => {
                if header.is_some() {
                    return Err(Error::Parse {
                        line,
                        message: "duplicate problem line".into(),
                    });
                }
                if tokens.len() != 4 {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected `p <kind> <n> <m>`, got {trimmed:?}"),
                    });
                }
                let kind = kind_from(tokens[1], line)?;
                let n = parse_num::<usize>(tokens[2], line, "vertex count")?;
                let m = parse_num::<usize>(tokens[3], line, "edge count")?;
                header = Some((kind, n, m));
            }
            "e" => {
                let Some((kind, n, _)) = header else {
                    return Err(Error::Parse {
                        line,
                        message: "edge line before the problem line".into(),
                    });
                };
                if tokens.len() != 4 {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected `e <u> <v> <w>`, got {trimmed:?}"),
                    });
                }
                let u = parse_num::<usize>(tokens[1], line, "endpoint")?;
                let v = parse_num::<usize>(tokens[2], line, "endpoint")?;
                let w = parse_num::<f64>(tokens[3], line, "weight")?;
                if u == 0 || u > n || v == 0 || v > n {
                    return Err(Error::Parse {
                        line,
                        message: format!("endpoint out of range 1..={n}"),
                    });
                }
                if u == v {
                    return Err(Error::Parse {
                        line,
                        message: format!("self-loop at vertex {u}"),
                    });
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(Error::Parse {
                        line,
                        message: format!("duplicate edge {u} {v}"),
                    });
                }
                let ok = match kind {
                    WeightMode::FcNormalized => w.is_finite() && (0.0..=1.0).contains(&w),
                    WeightMode::BfcRaw => w.is_finite() && w > 0.0,
                };
                if !ok {
                    return Err(Error::Parse {
                        line,
                        message: format!(
                            "weight {w} out of range for {} instances",
                            kind_name(kind)
                        ),
                    });
                }
                edges.push((u - 1, v - 1, w));
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown line type {other:?}"),
                });
            }
        }
    }
    let Some((kind, n, m)) = header else {
        return Err(Error::Parse {
            line: last_line,
            message: "missing problem line".into(),
        });
    };
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header promises {m} edges, file has {}", edges.len()),
        });
    }
    Graph::new(n, kind, &edges)
}

/// Canonical text form of an instance.
pub fn emit_instance(graph: &Graph) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "p {} {} {}",
        kind_name(graph.mode()),
        graph.vertex_count(),
        graph.edge_count()
    )
    .unwrap();
    for e in graph.edges() {
        writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.w).unwrap();
    }
    out
}

/// Canonical text form of a solution (a list of trees).
pub fn emit_solution(mode: WeightMode, trees: &[Tree]) -> String {
    let mut out = String::new();
    writeln!(out, "s {} {}", kind_name(mode), trees.len()).unwrap();
    for t in trees {
        let vs: Vec<String> = t.vertices.iter().map(|v| (v + 1).to_string()).collect();
        let es: Vec<String> = t.edges.iter().map(|e| (e + 1).to_string()).collect();
        writeln!(out, "t {} ; {}", vs.join(" "), es.join(" "))
            .unwrap();
    }
    out
}

pub fn parse_solution(text: &str) -> Result<(WeightMode, Vec<Tree>)> {
    let mut header: Option<(WeightMode, usize)> = None;
    let mut trees = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "s" => {
                if header.is_some() {
                    return Err(Error::Parse {
                        line,
                        message: "duplicate solution header".into(),
                    });
                }
                if tokens.len() != 3 {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected `s <kind> <count>`, got {trimmed:?}"),
                    });
                }
                let kind = kind_from(tokens[1], line)?;
                let k = parse_num::<usize>(tokens[2], line, "tree count")?;
                header = Some((kind, k));
            }
            "t" => {
                if header.is_none() {
                    return Err(Error::Parse {
                        line,
                        message: "tree line before the solution header".into(),
                    });
                }
                let Some(sep) = tokens.iter().position(|&t| t == ";") else {
                    return Err(Error::Parse {
                        line,
                        message: "tree line is missing the `;` separator".into(),
                    });
                };
                let mut vertices = BTreeSet::new();
                for tok in &tokens[1..sep] {
                    let v = parse_num::<usize>(tok, line, "vertex")?;
                    if v == 0 {
                        return Err(Error::Parse {
                            line,
                            message: "vertex ids are 1-indexed".into(),
                        });
                    }
                    vertices.insert(v - 1);
                }
                let mut edges = BTreeSet::new();
                for tok in &tokens[sep + 1..] {
                    let e = parse_num::<usize>(tok, line, "edge id")?;
                    if e == 0 {
                        return Err(Error::Parse {
                            line,
                            message: "edge ids are 1-indexed".into(),
                        });
                    }
                    edges.insert(e - 1);
                }
                if vertices.is_empty() {
                    return Err(Error::Parse {
                        line,
                        message: "tree with no vertices".into(),
                    });
                }
                trees.push(Tree { vertices, edges });
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown line type {other:?}"),
                });
            }
        }
    }
    let Some((kind, k)) = header else {
        return Err(Error::Parse {
            line: last_line,
            message: "missing solution header".into(),
        });
    };
    if trees.len() != k {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header promises {k} trees, file has {}", trees.len()),
        });
    }
    Ok((kind, trees))
}

fn parse_num<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T> {
    token.parse::<T>().map_err(|_| Error::Parse {
        line,
        message: format!("bad {what} {token:?}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_format_example() {
        let g = parse_instance("p fc 2 1\ne 1 2 0.5\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge(0).u, 0);
        assert_eq!(g.edge(0).v, 1);
        assert_eq!(g.weight(0), 0.5);
        assert_eq!(g.mode(), WeightMode::FcNormalized);
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let g = parse_instance("c an instance\n\np fc 3 2\nc interior\ne 1 2 0\ne 2 3 1\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn duplicate_edge_reports_its_line() {
        let err = parse_instance("p fc 2 2\ne 1 2 0.5\ne 2 1 0.25\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("duplicate"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bfc_kind_gets_raw_mode() {
        let g = parse_instance("p bfc 2 1\ne 1 2 3.0\n").unwrap();
        assert_eq!(g.mode(), WeightMode::BfcRaw);
        assert_eq!(g.weight(0), 3.0);
    }

    #[test]
    fn weight_range_is_checked_per_kind() {
        let err = parse_instance("p fc 2 1\ne 1 2 1.5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_instance("p bfc 2 1\ne 1 2 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn malformed_lines_report_numbers() {
        let err = parse_instance("p fc 2 1\ne 1 два 0.5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_instance("p fc 2 1\nq 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_instance("p fc 2 2\ne 1 2 0.5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn round_trip_is_identity() {
        let g = Graph::fc(
            4,
            &[(0, 1, 0.123456789), (1, 2, 1.0), (2, 3, 0.0), (0, 3, 1.0 / 3.0)],
        )
        .unwrap();
        let text = emit_instance(&g);
        let parsed = parse_instance(&text).unwrap();
        assert_eq!(parsed, g);
        assert_eq!(emit_instance(&parsed), text);
    }

    #[test]
    fn solution_round_trip() {
        let trees = vec![
            Tree {
                vertices: BTreeSet::from([0, 1]),
                edges: BTreeSet::from([0]),
            },
            Tree {
                vertices: BTreeSet::from([3]),
                edges: BTreeSet::new(),
            },
        ];
        let text = emit_solution(WeightMode::FcNormalized, &trees);
        let (kind, parsed) = parse_solution(&text).unwrap();
        assert_eq!(kind, WeightMode::FcNormalized);
        assert_eq!(parsed, trees);
    }

    #[test]
    fn solution_header_must_match_tree_count() {
        let err = parse_solution("s fc 2\nt 1 ;\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }
}
