//! Whitespace-separated edge lists in the SNAP layout.

use std::collections::{BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SimpleGraph;

/// Handling of lines that are neither comments nor `u v` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ParseMode {
    #[default]
    Strict,
    Lenient,
}

/// Line accounting for one parsed file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Provenance {
    pub path: PathBuf,
    pub lines: u64,
    /// Lines that yielded a kept edge.
    pub parsed: u64,
    pub comments: u64,
    pub blank: u64,
    pub self_loops: u64,
    /// Repeats of an already seen edge, in either orientation.
    pub duplicates: u64,
    /// Malformed lines skipped in lenient mode.
    pub malformed: u64,
}

/// An undirected simple graph read from an edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeListGraph {
    pub graph: SimpleGraph,
    /// Original id of each dense vertex, increasing.
    pub vertex_ids: Vec<u64>,
    pub provenance: Provenance,
}

pub fn ingest_edge_list(path: &Path, mode: ParseMode) -> Result<EdgeListGraph> {
    let file = File::open(path)?;
    ingest_reader(BufReader::new(file), path, mode)
}

/// Parses from any reader; `path` is only used for messages and provenance.
///
/// Vertices that appear only on dropped lines (self-loops, malformed lines)
/// are not part of the graph. Dense ids follow the order of original ids.
pub fn ingest_reader<R: BufRead>(reader: R, path: &Path, mode: ParseMode) -> Result<EdgeListGraph> {
    let mut prov = Provenance {
        path: path.to_path_buf(),
        ..Provenance::default()
    };
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    let mut pairs: Vec<(u64, u64)> = Vec::new();

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        prov.lines += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            prov.blank += 1;
            continue;
        }
        if trimmed.starts_with('#') {
            prov.comments += 1;
            continue;
        }
        let (u, v) = match parse_pair(trimmed) {
            Ok(p) => p,
            Err(reason) => match mode {
                ParseMode::Strict => {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        line: i + 1,
                        reason,
                    })
                }
                ParseMode::Lenient => {
                    prov.malformed += 1;
                    continue;
                }
            },
        };
        if u == v {
            prov.self_loops += 1;
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            prov.duplicates += 1;
            continue;
        }
        prov.parsed += 1;
        pairs.push(key);
    }

    let ids: BTreeSet<u64> = pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
    let vertex_ids: Vec<u64> = ids.into_iter().collect();
    if vertex_ids.len() > u32::MAX as usize {
        return Err(Error::invalid("input", "more than 2^32 vertices"));
    }
    let dense = |id: u64| vertex_ids.binary_search(&id).expect("id collected above") as u32;
    let edges: Vec<(u32, u32)> = pairs.iter().map(|&(u, v)| (dense(u), dense(v))).collect();
    let graph = SimpleGraph::from_edges(vertex_ids.len(), edges)?;
    Ok(EdgeListGraph {
        graph,
        vertex_ids,
        provenance: prov,
    })
}

fn parse_pair(line: &str) -> std::result::Result<(u64, u64), String> {
    let mut tokens = line.split_whitespace();
    let mut next = |what: &str| -> std::result::Result<u64, String> {
        let tok = tokens.next().ok_or_else(|| format!("missing {what} vertex"))?;
        tok.parse::<u64>()
            .map_err(|_| format!("`{tok}` is not a non-negative integer vertex id"))
    };
    let u = next("first")?;
    let v = next("second")?;
    if let Some(extra) = tokens.next() {
        return Err(format!("unexpected third column `{extra}`"));
    }
    Ok((u, v))
}
