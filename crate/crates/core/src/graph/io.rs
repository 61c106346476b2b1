//! Whitespace-separated edge lists, one edge per line, `#` comments.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

/// What loading did to the raw file beyond parsing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
    /// `original_ids[i]` is the id node `i` carried in the file.
    pub original_ids: Vec<u64>,
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<(Graph, LoadReport)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, path)
}

/// Parses edge-list text. Ids are compacted to `0..N` in ascending order of
/// the original ids. Nodes are the ids that appear on some line, plus
/// `0..n` when a `# nodes=n` comment is present (so isolated nodes survive
/// a save/load cycle).
pub fn parse_edge_list(text: &str, origin: &Path) -> Result<(Graph, LoadReport)> {
    let mut raw = Vec::new();
    let mut ids = BTreeSet::new();
    let mut report = LoadReport::default();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix(NODES_DIRECTIVE) {
                let n: u64 = n.trim().parse().map_err(|_| Error::Parse {
                    path: origin.to_path_buf(),
                    line: lineno + 1,
                    content: trimmed.to_string(),
                })?;
                ids.extend(0..n);
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split_whitespace().map(str::parse::<u64>);
        let pair = match (fields.next(), fields.next(), fields.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => (u, v),
            _ => {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    line: lineno + 1,
                    content: trimmed.to_string(),
                })
            }
        };
        ids.insert(pair.0);
        ids.insert(pair.1);
        if pair.0 == pair.1 {
            report.self_loops_dropped += 1;
        } else {
            raw.push(pair);
        }
    }
    report.original_ids = ids.into_iter().collect();
    let compact = |id: u64| report.original_ids.binary_search(&id).unwrap() as u32;
    let mut edges: Vec<(u32, u32)> = raw
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (compact(u), compact(v));
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    edges.sort_unstable();
    let before = edges.len();
    edges.dedup();
    report.duplicates_collapsed = before - edges.len();
    if report.self_loops_dropped > 0 {
        log::warn!(
            "{}: dropped {} self-loop(s)",
            origin.display(),
            report.self_loops_dropped
        );
    }
    let graph = Graph::from_canonical(report.original_ids.len(), edges);
    Ok((graph, report))
}

const NODES_DIRECTIVE: &str = "nodes=";

/// Writes the canonical edge list, preceded by `header` lines (each written
/// as a `#` comment) and the node count.
pub fn write_edge_list<W: Write>(graph: &Graph, header: &[String], mut out: W) -> std::io::Result<()> {
    for h in header {
        writeln!(out, "# {h}")?;
    }
    writeln!(out, "# {NODES_DIRECTIVE}{}", graph.n_nodes())?;
    for &(u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

pub fn save_edge_list(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_edge_list(graph, &[], std::io::BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_erdos_renyi;
    use crate::rng::RngSeed;
    use proptest::prelude::*;

    fn parse(s: &str) -> (Graph, LoadReport) {
        parse_edge_list(s, Path::new("<mem>")).unwrap()
    }

    #[test]
    fn symmetrizes_duplicates() {
        let (g, r) = parse("0 1\n1 0\n");
        assert_eq!((g.n_nodes(), g.n_edges()), (2, 1));
        assert_eq!(r.duplicates_collapsed, 1);
    }

    #[test]
    fn drops_self_loops() {
        let (g, r) = parse("0 0\n0 1\n");
        assert_eq!(g.n_edges(), 1);
        assert_eq!(r.self_loops_dropped, 1);
    }

    #[test]
    fn compacts_ids() {
        let (g, r) = parse("# comment\n5 9\n\n9 7\n");
        assert_eq!(g.n_nodes(), 3);
        assert_eq!(g.edges(), &[(0, 2), (1, 2)]);
        assert_eq!(r.original_ids, vec![5, 7, 9]);
    }

    #[test]
    fn node_count_directive() {
        let (g, r) = parse("# nodes=4\n0 1\n");
        assert_eq!((g.n_nodes(), g.n_edges()), (4, 1));
        assert_eq!(r.original_ids, vec![0, 1, 2, 3]);
        let (g, _) = parse("# nodes=10\n");
        assert_eq!((g.n_nodes(), g.n_edges()), (10, 0));
        assert!(parse_edge_list("# nodes=x\n", Path::new("f")).is_err());
    }

    #[test]
    fn empty_input_is_empty_graph() {
        let (g, _) = parse("");
        assert_eq!(g.n_nodes(), 0);
    }

    #[test]
    fn reports_bad_line_number() {
        let err = parse_edge_list("0 1\n1 x\n", Path::new("f.txt")).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_edge_list("0 1 2\n", Path::new("f")).is_err());
        assert!(parse_edge_list("3\n", Path::new("f")).is_err());
    }

    #[test]
    fn file_round_trip() {
        let g = gen_erdos_renyi(40, 0.05, RngSeed(1)).unwrap();
        assert!((0..40).any(|v| g.degree(v) == 0));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.txt");
        save_edge_list(&g, &p).unwrap();
        let (back, _) = load_edge_list(&p).unwrap();
        assert_eq!(back, g);
    }

    proptest! {
        #[test]
        fn text_round_trip(pairs in proptest::collection::vec((0u64..30, 0u64..30), 0..60)) {
            let text: String = pairs.iter().map(|(u, v)| format!("{u} {v}\n")).collect();
            let (g, _) = parse(&text);
            let mut buf = Vec::new();
            write_edge_list(&g, &[], &mut buf).unwrap();
            let (again, _) = parse(std::str::from_utf8(&buf).unwrap());
            prop_assert_eq!(again, g);
        }
    }
}
