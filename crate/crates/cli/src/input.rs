//! Reading graphs and embeddings from the command line and from files.
//! Malformed input is reported with the byte offset of the problem.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use surface_minors::embedding::Embedding;
use surface_minors::graph::{Graph, VertexId};

/// Byte offset of a 1-based (line, column) position in `text`.
pub fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

fn json_error(what: &str, text: &str, e: serde_json::Error) -> anyhow::Error {
    let at = byte_offset(text, e.line(), e.column());
    anyhow!("malformed {what} JSON at byte {at}: {e}")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    n: usize,
    #[serde(default)]
    vertices: Option<Vec<VertexId>>,
    edges: Vec<[VertexId; 2]>,
}

/// A graph in the `{"n", "vertices"?, "edges"}` schema.
pub fn graph_from_json_text(text: &str) -> Result<Graph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| json_error("graph", text, e))?;
    let vs = match doc.vertices {
        Some(vs) if vs.len() != doc.n => bail!("graph JSON: n = {} but {} vertex ids", doc.n, vs.len()),
        Some(vs) => vs,
        None => (0..doc.n as VertexId).collect(),
    };
    Ok(Graph::new(vs, doc.edges.iter().map(|e| (e[0], e[1])))?)
}

pub fn graph_from_graph6(s: &str) -> Result<Graph> {
    Ok(Graph::from_graph6(s.trim())?)
}

pub fn embedding_from_json_text(text: &str) -> Result<Embedding> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| json_error("embedding", text, e))?;
    Ok(Embedding::from_json_value(&v)?)
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Comma- or space-separated vertex ids.
pub fn parse_vertices(s: &str) -> Result<Vec<VertexId>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| anyhow!("bad vertex id {t:?}")))
        .collect()
}
