//! File formats: dense matrix CSV, edge lists, blockmodel specs, ROC curves.
//!
//! Matrices are written with a leading `# n=<n>` comment and shortest
//! round-trip float formatting, so read-after-write reproduces every entry
//! exactly. Readers skip blank lines and `#` comments and report 1-based
//! line numbers on failure.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;
use netsmooth::graphons::make_blockmodel_spec;
use netsmooth::linkpred::RocCurve;
use netsmooth::{AdjacencyMatrix, GraphonSpec};

use crate::CliError;

/// Node id base used by an edge-list file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Indexing {
    Zero,
    One,
}

/// Largest node count accepted when materializing an edge list as a dense
/// matrix. Beyond this the quadratic memory cost points at a mis-indexed or
/// corrupt file rather than a real network.
pub const MAX_EDGE_LIST_NODES: usize = 100_000;

fn write_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("cannot write {}: {e}", path.display()))
}

fn read_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("cannot read {}: {e}", path.display()))
}

/// Writes a matrix as comma-separated rows under a `# n=<rows>` comment.
pub fn write_matrix_csv(path: &Path, m: &Array2<f64>) -> Result<(), CliError> {
    let mut out = String::with_capacity(m.len() * 8 + 16);
    let _ = writeln!(out, "# n={}", m.nrows());
    for row in m.rows() {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            let _ = write!(out, "{v}");
            first = false;
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| write_err(path, e))
}

/// Writes a vector as one value per line under a `# n=<len>` comment.
pub fn write_vector_csv(path: &Path, v: &[f64]) -> Result<(), CliError> {
    let mut out = String::with_capacity(v.len() * 8 + 16);
    let _ = writeln!(out, "# n={}", v.len());
    for x in v {
        let _ = writeln!(out, "{x}");
    }
    fs::write(path, out).map_err(|e| write_err(path, e))
}

/// Reads a rectangular numeric CSV, skipping comments and blank lines.
pub fn read_matrix_csv(path: &Path) -> Result<Array2<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| read_err(path, e))?;
    parse_matrix_csv(&text).map_err(|msg| CliError::Data(format!("{}: {msg}", path.display())))
}

fn parse_matrix_csv(text: &str) -> Result<Array2<f64>, String> {
    let mut values = Vec::new();
    let mut width: Option<usize> = None;
    let mut rows = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = 0usize;
        for tok in line.split(',') {
            let tok = tok.trim();
            let v: f64 = tok
                .parse()
                .map_err(|_| format!("line {}: '{}' is not a number", idx + 1, tok))?;
            values.push(v);
            cols += 1;
        }
        match width {
            None => width = Some(cols),
            Some(w) if w != cols => {
                return Err(format!(
                    "line {}: ragged row ({} columns, expected {})",
                    idx + 1,
                    cols,
                    w
                ));
            }
            Some(_) => {}
        }
        rows += 1;
    }
    let Some(width) = width else {
        return Err("no data rows".into());
    };
    Array2::from_shape_vec((rows, width), values).map_err(|e| e.to_string())
}

/// Parses an edge-list text into a dense symmetric 0/1 matrix.
///
/// Lines hold two integer node ids separated by whitespace or a comma.
/// Duplicate and reversed pairs collapse; self-loops are dropped and
/// counted. The node range is `declared_nodes` when given, otherwise
/// max id + 1. Returns the matrix and the self-loop count.
pub fn parse_edge_list(
    text: &str,
    indexing: Indexing,
    declared_nodes: Option<usize>,
) -> Result<(AdjacencyMatrix, usize), CliError> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut self_loops = 0usize;
    let mut max_id = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|t| !t.is_empty());
        let (Some(a), Some(b), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(CliError::Data(format!(
                "line {}: expected two node ids, got '{}'",
                idx + 1,
                line
            )));
        };
        let u = parse_node_id(a, indexing, idx + 1)?;
        let v = parse_node_id(b, indexing, idx + 1)?;
        if u == v {
            self_loops += 1;
            continue;
        }
        max_id = max_id.max(u).max(v);
        edges.push((u, v));
    }
    let n = match declared_nodes {
        Some(n) => {
            if n == 0 {
                return Err(CliError::Usage("node count must be >= 1".into()));
            }
            if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
                return Err(CliError::Data(format!(
                    "edge ({u}, {v}) exceeds the declared node count {n}"
                )));
            }
            n
        }
        None => {
            if edges.is_empty() {
                return Err(CliError::Data(
                    "no edges and no declared node count; cannot infer the graph size".into(),
                ));
            }
            max_id + 1
        }
    };
    if n > MAX_EDGE_LIST_NODES {
        return Err(CliError::Data(format!(
            "node range {n} is too large for a dense matrix (limit {MAX_EDGE_LIST_NODES}); \
             check the file and the --indexing setting"
        )));
    }
    let mut m = Array2::<f64>::zeros((n, n));
    for (u, v) in edges {
        m[[u, v]] = 1.0;
        m[[v, u]] = 1.0;
    }
    let a = AdjacencyMatrix::new(m).map_err(|e| CliError::Data(e.to_string()))?;
    Ok((a, self_loops))
}

fn parse_node_id(tok: &str, indexing: Indexing, lineno: usize) -> Result<usize, CliError> {
    let raw: i64 = tok
        .parse()
        .map_err(|_| CliError::Data(format!("line {lineno}: '{tok}' is not an integer node id")))?;
    if raw < 0 {
        return Err(CliError::Data(format!(
            "line {lineno}: negative node id {raw}"
        )));
    }
    match indexing {
        Indexing::Zero => Ok(raw as usize),
        Indexing::One => {
            if raw == 0 {
                return Err(CliError::Data(format!(
                    "line {lineno}: node id 0 is invalid with one-based indexing"
                )));
            }
            Ok(raw as usize - 1)
        }
    }
}

/// Reads an edge-list file; see [`parse_edge_list`].
pub fn read_edge_list(
    path: &Path,
    indexing: Indexing,
    declared_nodes: Option<usize>,
) -> Result<(AdjacencyMatrix, usize), CliError> {
    let text = fs::read_to_string(path).map_err(|e| read_err(path, e))?;
    parse_edge_list(&text, indexing, declared_nodes)
        .map_err(|e| e.with_context(&path.display().to_string()))
}

/// Writes the canonical zero-indexed edge list: one `u v` line per edge
/// with u < v, in row-major order.
pub fn write_edge_list(path: &Path, a: &AdjacencyMatrix) -> Result<(), CliError> {
    let n = a.n();
    let values = a.values();
    let mut out = String::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if values[[i, j]] == 1.0 {
                let _ = writeln!(out, "{i} {j}");
            }
        }
    }
    fs::write(path, out).map_err(|e| write_err(path, e))
}

#[derive(serde::Deserialize)]
struct BlockmodelFile {
    #[serde(rename = "B")]
    b: Vec<Vec<f64>>,
    boundaries: Option<Vec<f64>>,
}

/// Reads a blockmodel graphon from JSON: `{"B": [[..], ..]}` with an
/// optional `"boundaries"` array of K+1 cut points. Missing boundaries
/// default to equal-width blocks.
pub fn read_blockmodel_spec(path: &Path) -> Result<GraphonSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| read_err(path, e))?;
    let raw: BlockmodelFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let k = raw.b.len();
    if k == 0 {
        return Err(CliError::Data(format!(
            "{}: blockmodel needs at least one block",
            path.display()
        )));
    }
    let mut flat = Vec::with_capacity(k * k);
    for row in &raw.b {
        if row.len() != k {
            return Err(CliError::Data(format!(
                "{}: B must be square ({} rows, found a row of length {})",
                path.display(),
                k,
                row.len()
            )));
        }
        flat.extend_from_slice(row);
    }
    let b = Array2::from_shape_vec((k, k), flat).expect("shape checked above");
    let boundaries = raw
        .boundaries
        .unwrap_or_else(|| (0..=k).map(|i| i as f64 / k as f64).collect());
    make_blockmodel_spec(b, boundaries)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Writes a ROC curve as `t,fpr,tpr` rows followed by an `# auc=` summary.
pub fn write_roc_csv(path: &Path, curve: &RocCurve) -> Result<(), CliError> {
    let mut out = String::from("t,fpr,tpr\n");
    for p in &curve.points {
        let _ = writeln!(out, "{},{},{}", p.t, p.fpr, p.tpr);
    }
    let _ = writeln!(out, "# auc={}", curve.auc);
    fs::write(path, out).map_err(|e| write_err(path, e))
}
