use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sprs::{CsMat, TriMat};

use super::face_sign;
use crate::complex::Triangulation;

/// Which cochain space a matrix reads from or writes to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Vertices,
    Edges,
    Faces,
    /// `ℓ²(V) ⊕ ℓ²(E) ⊕ ℓ²(F)` in that order.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorId {
    D0,
    Delta0,
    D1,
    Delta1,
    T,
    L0,
    L1Minus,
    L1Plus,
    L1,
    L2,
    L,
}

impl OperatorId {
    pub const ALL: [OperatorId; 11] = [
        OperatorId::D0,
        OperatorId::Delta0,
        OperatorId::D1,
        OperatorId::Delta1,
        OperatorId::T,
        OperatorId::L0,
        OperatorId::L1Minus,
        OperatorId::L1Plus,
        OperatorId::L1,
        OperatorId::L2,
        OperatorId::L,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorId::D0 => "d0",
            OperatorId::Delta0 => "delta0",
            OperatorId::D1 => "d1",
            OperatorId::Delta1 => "delta1",
            OperatorId::T => "T",
            OperatorId::L0 => "L0",
            OperatorId::L1Minus => "L1-",
            OperatorId::L1Plus => "L1+",
            OperatorId::L1 => "L1",
            OperatorId::L2 => "L2",
            OperatorId::L => "L",
        }
    }

    /// `(source, target)` spaces.
    pub fn spaces(self) -> (Space, Space) {
        use OperatorId::*;
        match self {
            D0 => (Space::Vertices, Space::Edges),
            Delta0 => (Space::Edges, Space::Vertices),
            D1 => (Space::Edges, Space::Faces),
            Delta1 => (Space::Faces, Space::Edges),
            L0 => (Space::Vertices, Space::Vertices),
            L1Minus | L1Plus | L1 => (Space::Edges, Space::Edges),
            L2 => (Space::Faces, Space::Faces),
            T | L => (Space::Full, Space::Full),
        }
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown operator `{0}` (expected one of d0, delta0, d1, delta1, T, L0, L1-, L1+, L1, L2, L)")]
pub struct UnknownOperator(pub String);

impl FromStr for OperatorId {
    type Err = UnknownOperator;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let id = match s {
            "d0" => OperatorId::D0,
            "delta0" => OperatorId::Delta0,
            "d1" => OperatorId::D1,
            "delta1" => OperatorId::Delta1,
            "T" => OperatorId::T,
            "L0" => OperatorId::L0,
            "L1-" | "L1minus" | "L1m" => OperatorId::L1Minus,
            "L1+" | "L1plus" | "L1p" => OperatorId::L1Plus,
            "L1" => OperatorId::L1,
            "L2" => OperatorId::L2,
            "L" => OperatorId::L,
            other => return Err(UnknownOperator(other.to_string())),
        };
        Ok(id)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("weight vector of length {got} does not match dimension {expected}")]
    WeightMismatch { expected: usize, got: usize },
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    EntryOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("weights must be finite and positive")]
    BadWeight,
}

/// Sparse matrix of a linear map between cochain spaces, acting on
/// coefficient vectors indexed by canonical simplices.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    matrix: CsMat<Complex64>,
    source: Space,
    target: Space,
    source_weights: Vec<f64>,
    target_weights: Vec<f64>,
}

impl OperatorMatrix {
    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        source: Space,
        target: Space,
        source_weights: Vec<f64>,
        target_weights: Vec<f64>,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Result<Self, MatrixError> {
        let (rows, cols) = (target_weights.len(), source_weights.len());
        if source_weights.iter().chain(&target_weights).any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(MatrixError::BadWeight);
        }
        let mut tri = TriMat::new((rows, cols));
        for (row, col, v) in entries {
            if row >= rows || col >= cols {
                return Err(MatrixError::EntryOutOfRange { row, col, rows, cols });
            }
            tri.add_triplet(row, col, v);
        }
        Ok(OperatorMatrix {
            matrix: tri.to_csr(),
            source,
            target,
            source_weights,
            target_weights,
        })
    }

    fn with_matrix(&self, matrix: CsMat<Complex64>, source: &OperatorMatrix) -> Self {
        OperatorMatrix {
            matrix,
            source: source.source,
            target: self.target,
            source_weights: source.source_weights.clone(),
            target_weights: self.target_weights.clone(),
        }
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    pub fn source(&self) -> Space {
        self.source
    }

    pub fn target(&self) -> Space {
        self.target
    }

    pub fn source_weights(&self) -> &[f64] {
        &self.source_weights
    }

    pub fn target_weights(&self) -> &[f64] {
        &self.target_weights
    }

    pub fn csr(&self) -> &CsMat<Complex64> {
        &self.matrix
    }

    /// Stored entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, Complex64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (row, vec) in self.matrix.outer_iterator().enumerate() {
            for (col, &v) in vec.iter() {
                out.push((row, col, v));
            }
        }
        out
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>, MatrixError> {
        if x.len() != self.cols() {
            return Err(MatrixError::DimensionMismatch { expected: self.cols(), got: x.len() });
        }
        Ok(self
            .matrix
            .outer_iterator()
            .map(|row| row.iter().map(|(col, &v)| v * x[col]).sum())
            .collect())
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.rows(), self.cols());
        for (r, c, v) in self.entries() {
            m[(r, c)] += v;
        }
        m
    }

    /// `A* = W_src⁻¹ Āᵀ W_tgt`, the adjoint for the weighted inner products.
    pub fn weighted_adjoint(&self) -> OperatorMatrix {
        let entries = self
            .entries()
            .into_iter()
            .map(|(r, c, v)| (c, r, v.conj() * (self.target_weights[r] / self.source_weights[c])));
        OperatorMatrix::from_triplets(
            self.target,
            self.source,
            self.target_weights.clone(),
            self.source_weights.clone(),
            entries,
        )
        .expect("transposed entries stay in range")
    }

    /// The product `self ∘ inner`.
    pub fn compose(&self, inner: &OperatorMatrix) -> Result<OperatorMatrix, MatrixError> {
        if inner.rows() != self.cols() {
            return Err(MatrixError::DimensionMismatch { expected: self.cols(), got: inner.rows() });
        }
        Ok(self.with_matrix(&self.matrix * &inner.matrix, inner))
    }

    pub fn scale(&self, k: Complex64) -> OperatorMatrix {
        let mut out = self.clone();
        out.matrix = self.matrix.map(|&v| v * k);
        out
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, MatrixError> {
        if self.matrix.shape() != other.matrix.shape() {
            return Err(MatrixError::DimensionMismatch { expected: self.rows(), got: other.rows() });
        }
        Ok(self.with_matrix(&self.matrix + &other.matrix, self))
    }

    /// Largest `|entry|`.
    pub fn max_abs(&self) -> f64 {
        self.matrix.data().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Entrywise `max |A - B|`, or infinity when the shapes differ.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        if self.matrix.shape() != other.matrix.shape() {
            return f64::INFINITY;
        }
        (&self.matrix - &other.matrix).data().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn weights(tri: &Triangulation, space: Space) -> Vec<f64> {
    match space {
        Space::Vertices => tri.vertex_weights().to_vec(),
        Space::Edges => tri.edge_weights().to_vec(),
        Space::Faces => tri.face_weights().to_vec(),
        Space::Full => [tri.vertex_weights(), tri.edge_weights(), tri.face_weights()].concat(),
    }
}

fn build(
    tri: &Triangulation,
    source: Space,
    target: Space,
    entries: impl IntoIterator<Item = (usize, usize, f64)>,
) -> OperatorMatrix {
    OperatorMatrix::from_triplets(
        source,
        target,
        weights(tri, source),
        weights(tri, target),
        entries.into_iter().map(|(r, c, v)| (r, c, Complex64::new(v, 0.0))),
    )
    .expect("assembled from a validated complex")
}

fn d0_matrix(tri: &Triangulation) -> OperatorMatrix {
    let entries = tri.edges().iter().enumerate().flat_map(|(e, &[a, b])| [(e, b, 1.0), (e, a, -1.0)]);
    build(tri, Space::Vertices, Space::Edges, entries)
}

fn delta0_matrix(tri: &Triangulation) -> OperatorMatrix {
    let (c, r) = (tri.vertex_weights(), tri.edge_weights());
    let entries = tri
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(e, &[a, b])| [(b, e, r[e] / c[b]), (a, e, -r[e] / c[a])]);
    build(tri, Space::Edges, Space::Vertices, entries)
}

fn d1_matrix(tri: &Triangulation) -> OperatorMatrix {
    let entries = tri.faces().iter().enumerate().flat_map(|(f, &[a, b, c])| {
        [(a, b), (b, c), (c, a)].map(|(x, y)| {
            let (e, sign) = tri.find_edge(x, y).expect("faces carry their edges");
            (f, e, sign)
        })
    });
    build(tri, Space::Edges, Space::Faces, entries)
}

fn delta1_matrix(tri: &Triangulation) -> OperatorMatrix {
    let (r, s) = (tri.edge_weights(), tri.face_weights());
    let entries = tri.edges().iter().enumerate().flat_map(|(e, &[a, b])| {
        tri.edge_ring(e)
            .iter()
            .map(move |&(f, x)| (e, f, s[f] * face_sign(a, b, x) / r[e]))
    });
    build(tri, Space::Faces, Space::Edges, entries)
}

/// Places blocks `(row offset, col offset, matrix)` into a full-space matrix.
fn full_from_blocks(tri: &Triangulation, blocks: &[(usize, usize, &OperatorMatrix)]) -> OperatorMatrix {
    let w = weights(tri, Space::Full);
    let entries = blocks
        .iter()
        .flat_map(|&(ro, co, m)| m.entries().into_iter().map(move |(r, c, v)| (r + ro, c + co, v)));
    OperatorMatrix::from_triplets(Space::Full, Space::Full, w.clone(), w, entries).expect("blocks fit")
}

/// Sparse matrix of the named operator on `tri`.
///
/// The four first-order operators are built independently from their
/// defining formulas, so compositions of them are genuine checks.
pub fn assemble(tri: &Triangulation, id: OperatorId) -> OperatorMatrix {
    let compose = |a: OperatorMatrix, b: OperatorMatrix| a.compose(&b).expect("compatible shapes");
    match id {
        OperatorId::D0 => d0_matrix(tri),
        OperatorId::Delta0 => delta0_matrix(tri),
        OperatorId::D1 => d1_matrix(tri),
        OperatorId::Delta1 => delta1_matrix(tri),
        OperatorId::L0 => compose(delta0_matrix(tri), d0_matrix(tri)),
        OperatorId::L1Minus => compose(d0_matrix(tri), delta0_matrix(tri)),
        OperatorId::L1Plus => compose(delta1_matrix(tri), d1_matrix(tri)),
        OperatorId::L1 => assemble(tri, OperatorId::L1Minus)
            .add(&assemble(tri, OperatorId::L1Plus))
            .expect("same shape"),
        OperatorId::L2 => compose(d1_matrix(tri), delta1_matrix(tri)),
        OperatorId::T => {
            let (nv, ne) = (tri.num_vertices(), tri.num_edges());
            full_from_blocks(
                tri,
                &[
                    (0, nv, &delta0_matrix(tri)),
                    (nv, 0, &d0_matrix(tri)),
                    (nv, nv + ne, &delta1_matrix(tri)),
                    (nv + ne, nv, &d1_matrix(tri)),
                ],
            )
        }
        OperatorId::L => {
            let (nv, ne) = (tri.num_vertices(), tri.num_edges());
            full_from_blocks(
                tri,
                &[
                    (0, 0, &assemble(tri, OperatorId::L0)),
                    (nv, nv, &assemble(tri, OperatorId::L1)),
                    (nv + ne, nv + ne, &assemble(tri, OperatorId::L2)),
                ],
            )
        }
    }
}
