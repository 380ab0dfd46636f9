//! File formats: complex and cochain JSON, Matrix Market export of operator
//! matrices, and spectrum CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cochains::{Cochain, CochainError};
use crate::complex::{ComplexError, Triangulation, VertexId};
use crate::operators::OperatorMatrix;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error("Matrix Market line {line}: {message}")]
    MatrixMarket { line: usize, message: String },
    #[error("schema error: {0}")]
    Schema(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexRecord {
    id: i64,
    c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    tail: i64,
    head: i64,
    r: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FaceRecord {
    v: [i64; 3],
    s: f64,
}

/// Optional layout block; absent in hand-written files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    origin: Option<i64>,
    /// Layer of each vertex, in the order of `vertices`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layer: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    boundary: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexFile {
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
    faces: Vec<FaceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<MetaRecord>,
}

fn complex_file(tri: &Triangulation) -> ComplexFile {
    let vid = |i: usize| tri.vertex_id(i).0;
    let layout = tri.layout();
    let boundary: Vec<i64> = (0..tri.num_vertices()).filter(|&v| tri.is_boundary_vertex(v)).map(vid).collect();
    let meta = (layout.origin.is_some() || layout.layer.is_some() || !boundary.is_empty()).then(|| MetaRecord {
        origin: layout.origin.map(vid),
        layer: layout.layer.clone(),
        boundary,
    });
    ComplexFile {
        vertices: (0..tri.num_vertices()).map(|i| VertexRecord { id: vid(i), c: tri.vertex_weights()[i] }).collect(),
        edges: tri
            .edges()
            .iter()
            .zip(tri.edge_weights())
            .map(|(&[a, b], &r)| EdgeRecord { tail: vid(a), head: vid(b), r })
            .collect(),
        faces: tri
            .faces()
            .iter()
            .zip(tri.face_weights())
            .map(|(&[a, b, c], &s)| FaceRecord { v: [vid(a), vid(b), vid(c)], s })
            .collect(),
        meta,
    }
}

/// Serializes a complex; each edge and face appears once, in canonical orientation.
pub fn complex_to_json(tri: &Triangulation) -> String {
    let mut out = serde_json::to_string_pretty(&complex_file(tri)).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn complex_from_json(text: &str) -> Result<Triangulation, IoError> {
    let file: ComplexFile = serde_json::from_str(text)?;
    let mut b = Triangulation::builder();
    for v in &file.vertices {
        b.vertex(VertexId(v.id), v.c);
    }
    for e in &file.edges {
        b.edge(VertexId(e.tail), VertexId(e.head), e.r);
    }
    for f in &file.faces {
        b.face(f.v.map(VertexId), f.s);
    }
    if let Some(meta) = &file.meta {
        if let Some(o) = meta.origin {
            b.origin(VertexId(o));
        }
        if let Some(layer) = &meta.layer {
            if layer.len() != file.vertices.len() {
                return Err(IoError::Schema(format!(
                    "meta.layer has {} entries for {} vertices",
                    layer.len(),
                    file.vertices.len()
                )));
            }
            b.layers(file.vertices.iter().zip(layer).map(|(v, &l)| (VertexId(v.id), l)).collect());
        }
        b.boundary(meta.boundary.iter().map(|&v| VertexId(v)));
    }
    Ok(b.build()?)
}

pub fn save_complex(tri: &Triangulation, path: &Path) -> Result<(), IoError> {
    fs::write(path, complex_to_json(tri))?;
    Ok(())
}

pub fn load_complex(path: &Path) -> Result<Triangulation, IoError> {
    complex_from_json(&fs::read_to_string(path)?)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CochainFile {
    degree: usize,
    /// `[re, im]` per canonical simplex.
    values: Vec<Complex64>,
}

pub fn cochain_to_json<const K: usize>(c: &Cochain<K>) -> String {
    let file = CochainFile { degree: K, values: c.values().to_vec() };
    let mut out = serde_json::to_string(&file).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn cochain_from_json<const K: usize>(tri: &Triangulation, text: &str) -> Result<Cochain<K>, IoError> {
    let file: CochainFile = serde_json::from_str(text)?;
    if file.degree != K {
        return Err(IoError::Schema(format!("expected a {K}-cochain, file holds degree {}", file.degree)));
    }
    Ok(Cochain::from_values(tri, file.values)?)
}

/// Pretty JSON with a trailing newline, for reports.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types serialize");
    out.push('\n');
    out
}

/// Matrix Market `coordinate complex general`, 1-based, 17 significant digits.
pub fn matrix_market(m: &OperatorMatrix, comment: &str) -> String {
    let entries = m.entries();
    let mut out = String::from("%%MatrixMarket matrix coordinate complex general\n");
    for line in comment.lines() {
        let _ = writeln!(out, "% {line}");
    }
    let _ = writeln!(out, "{} {} {}", m.rows(), m.cols(), entries.len());
    for (r, c, v) in entries {
        let _ = writeln!(out, "{} {} {:.16e} {:.16e}", r + 1, c + 1, v.re, v.im);
    }
    out
}

/// Parsed coordinate matrix: shape and 0-based entries.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, Complex64)>,
}

/// Reads `coordinate` Matrix Market files with `real` or `complex` fields and
/// `general` symmetry.
pub fn read_matrix_market(text: &str) -> Result<CoordinateMatrix, IoError> {
    let err = |line: usize, message: &str| IoError::MatrixMarket { line, message: message.to_string() };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(err(1, "expected `%%MatrixMarket matrix coordinate <field> general`"));
    }
    let complex = match tokens[3].as_str() {
        "complex" => true,
        "real" => false,
        _ => return Err(err(1, "field must be real or complex")),
    };
    if tokens[4] != "general" {
        return Err(err(1, "only general symmetry is supported"));
    }
    let mut data = lines.filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('%'));
    let (i, size) = data.next().ok_or_else(|| err(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<Result<_, _>>()
        .map_err(|_| err(i + 1, "bad size line"))?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(err(i + 1, "size line needs rows cols nnz"));
    };
    let mut entries = Vec::with_capacity(nnz);
    for (i, line) in data {
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != if complex { 4 } else { 3 } {
            return Err(err(i + 1, "wrong number of fields"));
        }
        let idx = |s: &str| s.parse::<usize>().ok().filter(|&v| v >= 1).ok_or_else(|| err(i + 1, "bad index"));
        let num = |s: &str| s.parse::<f64>().map_err(|_| err(i + 1, "bad value"));
        let (r, c) = (idx(t[0])? - 1, idx(t[1])? - 1);
        if r >= rows || c >= cols {
            return Err(err(i + 1, "index out of range"));
        }
        let v = Complex64::new(num(t[2])?, if complex { num(t[3])? } else { 0.0 });
        entries.push((r, c, v));
    }
    if entries.len() != nnz {
        return Err(err(0, &format!("header promises {nnz} entries, found {}", entries.len())));
    }
    Ok(CoordinateMatrix { rows, cols, entries })
}

/// `index,eigenvalue` rows with 17 significant digits.
pub fn spectrum_csv(values: &[f64]) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{i},{v:.16e}");
    }
    out
}

pub fn read_spectrum_csv(text: &str) -> Result<Vec<f64>, IoError> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("index,eigenvalue") {
        return Err(IoError::Schema("missing `index,eigenvalue` header".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split_once(',')
                .and_then(|(_, v)| v.trim().parse().ok())
                .ok_or_else(|| IoError::Schema(format!("bad spectrum row {l:?}")))
        })
        .collect()
}
