//! Edge-list import and export.
//!
//! Input: one edge per line, two labels separated by whitespace or a comma;
//! blank lines and lines starting with `#` are skipped. Labels are mapped to
//! dense ids: in ascending numeric order when every label is a non-negative
//! integer, otherwise in order of first appearance.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeFormat {
    /// Whitespace or comma, decided per line.
    #[default]
    Auto,
    Whitespace,
    Csv,
}

impl std::str::FromStr for EdgeFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "auto" => Ok(EdgeFormat::Auto),
            "whitespace" | "whitespace-pairs" => Ok(EdgeFormat::Whitespace),
            "csv" | "csv-pairs" => Ok(EdgeFormat::Csv),
            other => Err(format!("unknown edge format `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: DirectedGraph,
    /// External label of each dense id.
    pub labels: Vec<String>,
    pub duplicates: usize,
    pub self_loops: usize,
    pub warnings: Vec<String>,
}

fn split_line(line: &str, format: EdgeFormat) -> Vec<&str> {
    let comma = match format {
        EdgeFormat::Csv => true,
        EdgeFormat::Whitespace => false,
        EdgeFormat::Auto => line.contains(','),
    };
    if comma {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

fn intern<'a>(map: &mut FxHashMap<&'a str, u32>, labels: &mut Vec<String>, s: &'a str) -> u32 {
    let next = map.len() as u32;
    *map.entry(s).or_insert_with(|| {
        labels.push(s.to_string());
        next
    })
}

pub fn load_edge_list(path: impl AsRef<Path>, format: EdgeFormat) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::MissingInput {
        path: path.to_path_buf(),
        source,
    })?;
    read_edge_list(BufReader::new(file), format, path)
}

pub fn read_edge_list<R: BufRead>(reader: R, format: EdgeFormat, path: &Path) -> Result<LoadedGraph> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::Malformed {
                path: path.to_path_buf(),
                line: line_no,
                reason: "not valid UTF-8".into(),
            },
            _ => Error::io(path, e),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields = split_line(trimmed, format);
        if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
            return Err(Error::Malformed {
                path: path.to_path_buf(),
                line: line_no,
                reason: format!("expected 2 labels, found {:?}", fields),
            });
        }
        pairs.push((fields[0].to_string(), fields[1].to_string()));
    }

    let mut warnings = Vec::new();
    if pairs.is_empty() {
        warnings.push(format!("{}: no edges found", path.display()));
    }

    let numeric: Option<Vec<(u64, u64)>> = pairs
        .iter()
        .map(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
        .collect();
    let (labels, ids): (Vec<String>, Vec<(u32, u32)>) = match numeric {
        Some(nums) => {
            let mut all: Vec<u64> = nums.iter().flat_map(|&(a, b)| [a, b]).collect();
            all.sort_unstable();
            all.dedup();
            let index = |x: u64| all.binary_search(&x).unwrap() as u32;
            let ids = nums.iter().map(|&(a, b)| (index(a), index(b))).collect();
            (all.iter().map(u64::to_string).collect(), ids)
        }
        None => {
            let mut map: FxHashMap<&str, u32> = FxHashMap::default();
            let mut labels = Vec::new();
            let ids = pairs
                .iter()
                .map(|(a, b)| (intern(&mut map, &mut labels, a), intern(&mut map, &mut labels, b)))
                .collect();
            (labels, ids)
        }
    };

    let mut graph = DirectedGraph::with_nodes(labels.len());
    let (mut duplicates, mut self_loops) = (0, 0);
    for (a, b) in ids {
        if a == b {
            self_loops += 1;
        } else if !graph.insert_edge(NodeId(a), NodeId(b)) {
            duplicates += 1;
        }
    }
    if duplicates > 0 || self_loops > 0 {
        log::info!(
            "{}: dropped {duplicates} duplicate edges and {self_loops} self-loops",
            path.display()
        );
    }
    Ok(LoadedGraph {
        graph,
        labels,
        duplicates,
        self_loops,
        warnings,
    })
}

/// One `src dst` line per edge, sorted by `(src, dst)`.
pub fn write_edge_list_to<W: Write>(graph: &DirectedGraph, out: W) -> std::io::Result<()> {
    let mut out = BufWriter::new(out);
    for (s, d) in graph.sorted_edges() {
        writeln!(out, "{s} {d}")?;
    }
    out.flush()
}

pub fn write_edge_list(graph: &DirectedGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_edge_list_to(graph, file).map_err(|e| Error::io(path, e))
}

/// `id,label` rows.
pub fn write_label_table<W: Write>(labels: &[String], out: W) -> std::io::Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "id,label")?;
    for (i, l) in labels.iter().enumerate() {
        writeln!(out, "{i},{l}")?;
    }
    out.flush()
}
