//! File formats: JSON graphs and certificates, CSV/JSON label matrices, DOT
//! and graph6 exports.
//!
//! Every writer iterates in structural-id order, so equal inputs give
//! byte-identical output.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{FamilyParams, LabelMatrix};
use crate::graph::{
    ChiBracket, Color, ColorReport, GraphError, GraphStats, Label, LabeledGraph, PartClass,
    VertexId, Violation,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("malformed graph6: {0}")]
    Graph6(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexRecord {
    id: VertexId,
    part: PartClass,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRecord {
    a: VertexId,
    b: VertexId,
    label: Option<Label>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDocument {
    format_version: u32,
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
}

pub fn graph_to_json(g: &LabeledGraph) -> String {
    let doc = GraphDocument {
        format_version: FORMAT_VERSION,
        vertices: g.vertices().map(|(id, part)| VertexRecord { id, part }).collect(),
        edges: g
            .edges()
            .map(|(e, label)| {
                let (a, b) = e.endpoints();
                EdgeRecord { a, b, label }
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("graph document serializes");
    s.push('\n');
    s
}

pub fn graph_from_json(text: &str) -> Result<LabeledGraph, FormatError> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    if doc.format_version != FORMAT_VERSION {
        return Err(FormatError::Version(doc.format_version));
    }
    let mut g = LabeledGraph::new();
    for v in doc.vertices {
        g.add_vertex(v.id, v.part)?;
    }
    for e in doc.edges {
        g.add_edge(e.a, e.b, e.label)?;
    }
    Ok(g)
}

/// Graphviz rendering with edge labels; each node carries its part class.
pub fn graph_to_dot(g: &LabeledGraph) -> String {
    let mut s = String::from("graph G {\n");
    for (v, part) in g.vertices() {
        let _ = writeln!(s, "  \"{v}\" [part={part}];");
    }
    for (e, label) in g.edges() {
        let (a, b) = e.endpoints();
        match label {
            Some(l) => {
                let _ = writeln!(s, "  \"{a}\" -- \"{b}\" [label=\"{l}\"];");
            }
            None => {
                let _ = writeln!(s, "  \"{a}\" -- \"{b}\";");
            }
        }
    }
    s.push_str("}\n");
    s
}

fn graph6_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

/// graph6 encoding of an `n`-vertex simple graph given by index pairs.
pub fn encode_graph6(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![false; n * n];
    for &(a, b) in edges {
        adj[a * n + b] = true;
        adj[b * n + a] = true;
    }
    let mut out = Vec::new();
    graph6_size(n, &mut out);
    let (mut acc, mut nbits) = (0u8, 0);
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | adj[i * n + j] as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

/// Inverse of [`encode_graph6`]: vertex count and edges with `a < b`.
pub fn decode_graph6(text: &str) -> Result<(usize, Vec<(usize, usize)>), FormatError> {
    let bytes = text.trim_end().as_bytes();
    let bad = |m: &str| FormatError::Graph6(m.to_string());
    if bytes.iter().any(|&c| !(63..=126).contains(&c)) {
        return Err(bad("character outside 63..=126"));
    }
    let six = |c: u8| (c - 63) as usize;
    let (n, rest) = match bytes {
        [] => return Err(bad("empty input")),
        [126, 126, tail @ ..] if tail.len() >= 6 => {
            (tail[..6].iter().fold(0, |acc, &c| (acc << 6) | six(c)), &tail[6..])
        }
        [126, tail @ ..] if tail.len() >= 3 => {
            (tail[..3].iter().fold(0, |acc, &c| (acc << 6) | six(c)), &tail[3..])
        }
        [126, ..] => return Err(bad("truncated size")),
        [c, tail @ ..] => (six(*c), tail),
    };
    let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if rest.len() != needed {
        return Err(bad(&format!("expected {needed} data bytes, got {}", rest.len())));
    }
    let mut edges = Vec::new();
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = six(rest[bit / 6]);
            if byte >> (5 - bit % 6) & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Ok((n, edges))
}

/// graph6 of the unlabeled graph (vertices in id order) and the sidecar
/// text that keeps vertex names, parts and edge labels.
pub fn graph_to_graph6(g: &LabeledGraph) -> (String, String) {
    let ids: Vec<(VertexId, PartClass)> = g.vertices().collect();
    let index = |v: VertexId| ids.binary_search_by(|(w, _)| w.cmp(&v)).expect("vertex present");
    let mut pairs = Vec::with_capacity(g.size());
    let mut sidecar = String::from("# graph6 vertex order: v <index> <id> <part>; labels: e <a> <b> <label>\n");
    for (i, (v, part)) in ids.iter().enumerate() {
        let _ = writeln!(sidecar, "v {i} {v} {part}");
    }
    for (e, label) in g.edges() {
        let (a, b) = e.endpoints();
        let (ia, ib) = (index(a), index(b));
        pairs.push((ia, ib));
        match label {
            Some(l) => {
                let _ = writeln!(sidecar, "e {ia} {ib} {l}");
            }
            None => {
                let _ = writeln!(sidecar, "e {ia} {ib} -");
            }
        }
    }
    let mut g6 = encode_graph6(ids.len(), &pairs);
    g6.push('\n');
    (g6, sidecar)
}

/// Matrix rows as CSV, columns `1..=2k+1`, no header.
pub fn matrix_to_csv(mat: &LabelMatrix) -> String {
    let mut s = String::new();
    for r in 0..mat.rows().len() {
        let line: Vec<String> = mat.row(r).iter().map(Label::to_string).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixRow {
    row: String,
    cells: Vec<Label>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixDocument {
    format_version: u32,
    params: FamilyParams,
    rows: Vec<MatrixRow>,
}

pub fn matrix_to_json(mat: &LabelMatrix) -> String {
    let doc = MatrixDocument {
        format_version: FORMAT_VERSION,
        params: mat.params(),
        rows: mat
            .rows()
            .iter()
            .enumerate()
            .map(|(i, role)| MatrixRow { row: role.to_string(), cells: mat.row(i).to_vec() })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("matrix serializes");
    s.push('\n');
    s
}

/// Verification certificate written by the `verify` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub format_version: u32,
    pub is_local_antimagic: bool,
    pub bijection_ok: bool,
    pub adjacency_ok: bool,
    pub colors: Vec<Color>,
    pub c_f: usize,
    pub chi_la_bracket: ChiBracket,
    /// `Some(c)` when the bracket collapses to one value.
    pub chi_la: Option<usize>,
    pub violations: Vec<Violation>,
    pub stats: GraphStats,
    pub color_of: std::collections::BTreeMap<VertexId, Color>,
}

impl Certificate {
    pub fn new(report: ColorReport, stats: GraphStats) -> Self {
        let adjacency_ok =
            !report.violations.iter().any(|v| matches!(v, Violation::AdjacentCollision { .. }));
        Certificate {
            format_version: FORMAT_VERSION,
            is_local_antimagic: report.is_local_antimagic,
            bijection_ok: report.is_bijection,
            adjacency_ok,
            colors: report.distinct_colors,
            c_f: report.c_f,
            chi_la: report.chi_la_bracket.exact(),
            chi_la_bracket: report.chi_la_bracket,
            violations: report.violations,
            stats,
            color_of: report.color_of,
        }
    }
}
