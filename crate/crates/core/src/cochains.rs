//! Complex-valued cochains on vertices, oriented edges and oriented faces.
//!
//! Values are stored on canonical simplices only. A 1-cochain evaluated on the
//! reversed edge, or a 2-cochain evaluated on an odd permutation of its face,
//! picks up a minus sign, so antisymmetry holds by construction.
//!
//! The inner products are plain weighted sums over canonical simplices. They
//! equal the fully oriented sums with factors `1/2` (edges) and `1/6` (faces),
//! since every oriented representative contributes the same product.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::{ComplexError, Triangulation, VertexId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CochainError {
    #[error("cochain belongs to a different complex")]
    ComplexMismatch,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unknown simplex {0}")]
    UnknownSimplex(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A `K`-cochain on a fixed triangulation.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<const K: usize> {
    complex: u64,
    values: Vec<Complex64>,
}

pub type Cochain0 = Cochain<0>;
pub type Cochain1 = Cochain<1>;
pub type Cochain2 = Cochain<2>;

impl<const K: usize> Cochain<K> {
    pub fn zeros(tri: &Triangulation) -> Self {
        Cochain { complex: tri.id(), values: vec![Complex64::new(0.0, 0.0); tri.num_simplices(K)] }
    }

    /// Wraps values indexed by canonical `K`-simplices.
    pub fn from_values(tri: &Triangulation, values: Vec<Complex64>) -> Result<Self, CochainError> {
        let expected = tri.num_simplices(K);
        if values.len() != expected {
            return Err(CochainError::LengthMismatch { expected, got: values.len() });
        }
        Ok(Cochain { complex: tri.id(), values })
    }

    pub fn from_fn(tri: &Triangulation, f: impl FnMut(usize) -> Complex64) -> Self {
        Cochain { complex: tri.id(), values: (0..tri.num_simplices(K)).map(f).collect() }
    }

    pub fn from_real(tri: &Triangulation, mut f: impl FnMut(usize) -> f64) -> Self {
        Self::from_fn(tri, |i| Complex64::new(f(i), 0.0))
    }

    pub fn degree(&self) -> usize {
        K
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Value on the canonical simplex with index `i`.
    pub fn get(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    pub fn complex_id(&self) -> u64 {
        self.complex
    }

    pub fn check(&self, tri: &Triangulation) -> Result<(), CochainError> {
        if self.complex == tri.id() {
            Ok(())
        } else {
            Err(CochainError::ComplexMismatch)
        }
    }

    pub fn support_len(&self) -> usize {
        self.values.iter().filter(|v| v.norm_sqr() != 0.0).count()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self, tri: &Triangulation) -> Result<f64, CochainError> {
        Ok(inner(tri, self, self)?.re.max(0.0).sqrt())
    }

    /// Pointwise product with a scalar field on the same canonical simplices.
    pub fn pointwise(&self, field: &[Complex64]) -> Self {
        assert_eq!(field.len(), self.values.len());
        Cochain { complex: self.complex, values: self.values.iter().zip(field).map(|(a, b)| a * b).collect() }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.complex, other.complex, "cochains live on different complexes");
        Cochain { complex: self.complex, values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect() }
    }
}

impl<const K: usize> Add for &Cochain<K> {
    type Output = Cochain<K>;
    fn add(self, rhs: Self) -> Cochain<K> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<const K: usize> Sub for &Cochain<K> {
    type Output = Cochain<K>;
    fn sub(self, rhs: Self) -> Cochain<K> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<const K: usize> Neg for &Cochain<K> {
    type Output = Cochain<K>;
    fn neg(self) -> Cochain<K> {
        Cochain { complex: self.complex, values: self.values.iter().map(|v| -v).collect() }
    }
}

impl<const K: usize> Mul<Complex64> for &Cochain<K> {
    type Output = Cochain<K>;
    fn mul(self, rhs: Complex64) -> Cochain<K> {
        Cochain { complex: self.complex, values: self.values.iter().map(|v| v * rhs).collect() }
    }
}

impl Cochain0 {
    pub fn at(&self, tri: &Triangulation, x: VertexId) -> Result<Complex64, CochainError> {
        self.check(tri)?;
        Ok(self.values[tri.vertex_index(x)?])
    }
}

impl Cochain1 {
    /// Value on the oriented edge `a -> b` given by vertex indices; zero if absent.
    pub fn oriented(&self, tri: &Triangulation, a: usize, b: usize) -> Complex64 {
        match tri.find_edge(a, b) {
            Some((e, sign)) => self.values[e] * sign,
            None => Complex64::new(0.0, 0.0),
        }
    }
}

impl Cochain2 {
    /// Value on the oriented face `(a, b, c)` given by vertex indices; zero if absent.
    pub fn oriented(&self, tri: &Triangulation, a: usize, b: usize, c: usize) -> Complex64 {
        match tri.find_face(a, b, c) {
            Some((f, sign)) => self.values[f] * sign,
            None => Complex64::new(0.0, 0.0),
        }
    }
}

/// `φ(tail, head)`, with `φ(head, tail) = -φ(tail, head)`.
pub fn eval1(tri: &Triangulation, phi: &Cochain1, tail: VertexId, head: VertexId) -> Result<Complex64, CochainError> {
    phi.check(tri)?;
    let (a, b) = (tri.vertex_index(tail)?, tri.vertex_index(head)?);
    let (e, sign) = tri
        .find_edge(a, b)
        .ok_or_else(|| CochainError::UnknownSimplex(format!("edge ({tail},{head})")))?;
    Ok(phi.values[e] * sign)
}

/// `ψ(x, y, z)`, alternating under permutations of the vertices.
pub fn eval2(tri: &Triangulation, psi: &Cochain2, x: VertexId, y: VertexId, z: VertexId) -> Result<Complex64, CochainError> {
    psi.check(tri)?;
    let (a, b, c) = (tri.vertex_index(x)?, tri.vertex_index(y)?, tri.vertex_index(z)?);
    let (f, sign) = tri
        .find_face(a, b, c)
        .ok_or_else(|| CochainError::UnknownSimplex(format!("face [{x},{y},{z}]")))?;
    Ok(psi.values[f] * sign)
}

/// Weighted inner product `Σ w(σ) a(σ) conj(b(σ))` over canonical `K`-simplices.
pub fn inner<const K: usize>(tri: &Triangulation, a: &Cochain<K>, b: &Cochain<K>) -> Result<Complex64, CochainError> {
    a.check(tri)?;
    b.check(tri)?;
    Ok(tri
        .weights(K)
        .iter()
        .zip(a.values.iter().zip(&b.values))
        .map(|(&w, (x, y))| x * y.conj() * w)
        .sum())
}

pub fn inner0(tri: &Triangulation, f: &Cochain0, g: &Cochain0) -> Result<Complex64, CochainError> {
    inner(tri, f, g)
}

pub fn inner1(tri: &Triangulation, phi: &Cochain1, psi: &Cochain1) -> Result<Complex64, CochainError> {
    inner(tri, phi, psi)
}

pub fn inner2(tri: &Triangulation, a: &Cochain2, b: &Cochain2) -> Result<Complex64, CochainError> {
    inner(tri, a, b)
}

/// An element `(f, φ, ψ)` of `ℓ²(V) ⊕ ℓ²(E) ⊕ ℓ²(F)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleField {
    pub f: Cochain0,
    pub phi: Cochain1,
    pub psi: Cochain2,
}

impl TripleField {
    pub fn zeros(tri: &Triangulation) -> Self {
        TripleField { f: Cochain::zeros(tri), phi: Cochain::zeros(tri), psi: Cochain::zeros(tri) }
    }

    pub fn random(tri: &Triangulation, seed: u64) -> Self {
        TripleField {
            f: random_full(tri, seed),
            phi: random_full(tri, seed.wrapping_add(1)),
            psi: random_full(tri, seed.wrapping_add(2)),
        }
    }

    /// Stacked coefficient vector `[f; φ; ψ]`.
    pub fn to_vec(&self) -> Vec<Complex64> {
        let mut out = self.f.values().to_vec();
        out.extend_from_slice(self.phi.values());
        out.extend_from_slice(self.psi.values());
        out
    }

    pub fn from_vec(tri: &Triangulation, v: &[Complex64]) -> Result<Self, CochainError> {
        let (n0, n1) = (tri.num_vertices(), tri.num_edges());
        let expected = n0 + n1 + tri.num_faces();
        if v.len() != expected {
            return Err(CochainError::LengthMismatch { expected, got: v.len() });
        }
        Ok(TripleField {
            f: Cochain::from_values(tri, v[..n0].to_vec())?,
            phi: Cochain::from_values(tri, v[n0..n0 + n1].to_vec())?,
            psi: Cochain::from_values(tri, v[n0 + n1..].to_vec())?,
        })
    }
}

/// Inner product on the direct sum.
pub fn h_inner(tri: &Triangulation, a: &TripleField, b: &TripleField) -> Result<Complex64, CochainError> {
    Ok(inner(tri, &a.f, &b.f)? + inner(tri, &a.phi, &b.phi)? + inner(tri, &a.psi, &b.psi)?)
}

pub fn h_norm(tri: &Triangulation, field: &TripleField) -> Result<f64, CochainError> {
    Ok(h_inner(tri, field, field)?.re.max(0.0).sqrt())
}

/// Deterministic pseudo-random values in `[-1, 1) + i[-1, 1)` on the given
/// canonical simplex indices, zero elsewhere. Repeated indices are ignored.
pub fn random_cochain<const K: usize>(tri: &Triangulation, support: &[usize], seed: u64) -> Cochain<K> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Cochain::<K>::zeros(tri);
    for &i in support {
        let v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if out.values[i].norm_sqr() == 0.0 {
            out.values[i] = v;
        }
    }
    out
}

/// [`random_cochain`] supported on every `K`-simplex.
pub fn random_full<const K: usize>(tri: &Triangulation, seed: u64) -> Cochain<K> {
    let all: Vec<usize> = (0..tri.num_simplices(K)).collect();
    random_cochain(tri, &all, seed)
}
