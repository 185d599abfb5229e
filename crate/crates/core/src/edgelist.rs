//! Plain-text edge lists.
//!
//! ```text
//! c optional comment
//! p bip <size1> <size2> <edges>
//! e <i> <j>
//! ```
//!
//! `i` indexes part 1 and `j` part 2, both 0-based. The canonical form lists
//! edges in lexicographic order.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::bigraph::{BipartiteGraph, VertexRef};
use crate::error::{Error, Result};

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<BipartiteGraph> {
    let mut graph: Option<(BipartiteGraph, usize)> = None;
    let mut last_line = 0;
    for (n, line) in reader.lines().enumerate() {
        let lineno = n + 1;
        last_line = lineno;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: &str| Error::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err("expected a non-negative integer"))
        };
        match toks[0] {
            "p" => {
                if graph.is_some() {
                    return Err(err("duplicate header"));
                }
                if toks.len() != 5 || toks[1] != "bip" {
                    return Err(err("header must be `p bip <size1> <size2> <edges>`"));
                }
                graph = Some((
                    BipartiteGraph::new(num(toks[2])?, num(toks[3])?),
                    num(toks[4])?,
                ));
            }
            "e" => {
                let (g, _) = graph.as_mut().ok_or_else(|| err("edge before header"))?;
                if toks.len() != 3 {
                    return Err(err("edge line must be `e <i> <j>`"));
                }
                g.add_edge(VertexRef::one(num(toks[1])?), VertexRef::two(num(toks[2])?))
                    .map_err(|e| match e {
                        Error::DuplicateEdge { .. }
                        | Error::InvalidVertex(_)
                        | Error::SamePart { .. } => Error::Parse {
                            line: lineno,
                            msg: e.to_string(),
                        },
                        other => other,
                    })?;
            }
            _ => return Err(err("unknown line type")),
        }
    }
    let (g, declared) = graph.ok_or(Error::Parse {
        line: last_line,
        msg: "missing header".into(),
    })?;
    if g.edge_count() != declared {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("header declares {declared} edges, found {}", g.edge_count()),
        });
    }
    Ok(g)
}

/// Writes the canonical form.
pub fn write_edge_list<W: Write>(g: &BipartiteGraph, mut w: W) -> Result<()> {
    writeln!(w, "p bip {} {} {}", g.size1(), g.size2(), g.edge_count())?;
    for (i, j) in g.edges() {
        writeln!(w, "e {i} {j}")?;
    }
    Ok(())
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<BipartiteGraph> {
    let f = fs::File::open(path)?;
    parse_edge_list(std::io::BufReader::new(f))
}

pub fn save_edge_list(g: &BipartiteGraph, path: impl AsRef<Path>) -> Result<()> {
    let f = fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_edge_list(g, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn to_edge_list_string(g: &BipartiteGraph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("edge lists are ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_edge() {
        let g = parse_edge_list("c hello\np bip 2 2 1\ne 0 0\n".as_bytes()).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(VertexRef::one(0), VertexRef::two(0)));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_edge_list("p bip 2 2 1\ne 0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse_edge_list("p bip 2 2 2\ne 0 0\ne 0 0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = parse_edge_list("p bip 2 2 1\ne 0 7\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        assert!(parse_edge_list("e 0 0\n".as_bytes()).is_err());
        assert!(parse_edge_list("p bip 2 2 3\ne 0 0\n".as_bytes()).is_err());
    }

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let text = "p bip 3 2 4\ne 0 1\ne 1 0\ne 2 0\ne 2 1\n";
        let g = parse_edge_list(text.as_bytes()).unwrap();
        assert_eq!(to_edge_list_string(&g), text);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        save_edge_list(&g, &path).unwrap();
        assert_eq!(load_edge_list(&path).unwrap(), g);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    }
}
