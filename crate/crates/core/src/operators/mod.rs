//! Difference operators, their weighted adjoints, the Gauß-Bonnet operator
//! and the Laplacians it squares to.
//!
//! With `d⁰f(e) = f(e⁺) - f(e⁻)` and `d¹φ(x,y,z) = φ(x,y) + φ(y,z) + φ(z,x)`,
//! the adjoints with respect to the weighted inner products are
//!
//! ```text
//! δ⁰φ(x) = 1/c(x) Σ_{e⁺ = x} r(e) φ(e)
//! δ¹ψ(e) = 1/r(e) Σ_{x ∈ F_e} s(e,x) ψ(e⁻,e⁺,x)
//! ```
//!
//! and `T(f,φ,ψ) = (δ⁰φ, d⁰f + δ¹ψ, d¹φ)`, `L = T² = L₀ ⊕ L₁ ⊕ L₂`.

mod identities;
pub mod matrix;
pub mod spectrum;

pub use identities::{derivation_identity_checks, DerivationResiduals};
pub use matrix::{assemble, OperatorId, OperatorMatrix, Space};
pub use spectrum::{lanczos_extremes, spectrum, LanczosReport, SpectrumError, Which, DENSE_LIMIT};

use num_complex::Complex64;

use crate::cochains::{Cochain0, Cochain1, Cochain2, TripleField};
use crate::complex::{canonical3, Triangulation};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Orientation sign of the face `(a, b, x)` relative to its canonical triple.
pub fn face_sign(a: usize, b: usize, x: usize) -> f64 {
    f64::from(canonical3([a, b, x]).1)
}

pub fn d0(tri: &Triangulation, f: &Cochain0) -> Cochain1 {
    let v = f.values();
    Cochain1::from_fn(tri, |e| {
        let [a, b] = tri.edges()[e];
        v[b] - v[a]
    })
}

pub fn delta0(tri: &Triangulation, phi: &Cochain1) -> Cochain0 {
    let mut out = vec![ZERO; tri.num_vertices()];
    for (e, &[a, b]) in tri.edges().iter().enumerate() {
        let flow = phi.get(e) * tri.edge_weights()[e];
        out[b] += flow;
        out[a] -= flow;
    }
    let c = tri.vertex_weights();
    for (x, v) in out.iter_mut().enumerate() {
        *v /= c[x];
    }
    Cochain0::from_values(tri, out).expect("length matches")
}

pub fn d1(tri: &Triangulation, phi: &Cochain1) -> Cochain2 {
    Cochain2::from_fn(tri, |f| {
        let [a, b, c] = tri.faces()[f];
        phi.oriented(tri, a, b) + phi.oriented(tri, b, c) + phi.oriented(tri, c, a)
    })
}

pub fn delta1(tri: &Triangulation, psi: &Cochain2) -> Cochain1 {
    let s = tri.face_weights();
    Cochain1::from_fn(tri, |e| {
        let [a, b] = tri.edges()[e];
        let sum: Complex64 = tri
            .edge_ring(e)
            .iter()
            .map(|&(f, x)| psi.get(f) * (s[f] * face_sign(a, b, x)))
            .sum();
        sum / tri.edge_weights()[e]
    })
}

pub fn gauss_bonnet(tri: &Triangulation, field: &TripleField) -> TripleField {
    TripleField {
        f: delta0(tri, &field.phi),
        phi: &d0(tri, &field.f) + &delta1(tri, &field.psi),
        psi: d1(tri, &field.phi),
    }
}

pub fn laplacian0(tri: &Triangulation, f: &Cochain0) -> Cochain0 {
    delta0(tri, &d0(tri, f))
}

/// Lower part `d⁰δ⁰` of the 1-form Laplacian.
pub fn laplacian1_minus(tri: &Triangulation, phi: &Cochain1) -> Cochain1 {
    d0(tri, &delta0(tri, phi))
}

/// Upper part `δ¹d¹` of the 1-form Laplacian.
pub fn laplacian1_plus(tri: &Triangulation, phi: &Cochain1) -> Cochain1 {
    delta1(tri, &d1(tri, phi))
}

pub fn laplacian1(tri: &Triangulation, phi: &Cochain1) -> Cochain1 {
    &laplacian1_minus(tri, phi) + &laplacian1_plus(tri, phi)
}

pub fn laplacian2(tri: &Triangulation, psi: &Cochain2) -> Cochain2 {
    d1(tri, &delta1(tri, psi))
}

pub fn laplacian(tri: &Triangulation, field: &TripleField) -> TripleField {
    TripleField {
        f: laplacian0(tri, &field.f),
        phi: laplacian1(tri, &field.phi),
        psi: laplacian2(tri, &field.psi),
    }
}

/// Orientation-independent scalar per canonical edge.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeField(pub Vec<Complex64>);

/// Orientation-independent scalar per canonical face.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceField(pub Vec<Complex64>);

impl EdgeField {
    /// Value on the edge joining `a` and `b`, whichever way round.
    pub fn at(&self, tri: &Triangulation, a: usize, b: usize) -> Option<Complex64> {
        tri.find_edge(a, b).map(|(e, _)| self.0[e])
    }
}

impl FaceField {
    pub fn at(&self, tri: &Triangulation, a: usize, b: usize, c: usize) -> Option<Complex64> {
        tri.find_face(a, b, c).map(|(f, _)| self.0[f])
    }
}

/// Edge average `f̃(e) = ½(f(e⁺) + f(e⁻))`.
pub fn tilde(tri: &Triangulation, f: &Cochain0) -> EdgeField {
    let v = f.values();
    EdgeField(tri.edges().iter().map(|&[a, b]| (v[a] + v[b]) * 0.5).collect())
}

/// Face average `f̃̃(x,y,z) = ⅓(f(x) + f(y) + f(z))`.
pub fn double_tilde(tri: &Triangulation, f: &Cochain0) -> FaceField {
    let v = f.values();
    FaceField(tri.faces().iter().map(|&[a, b, c]| (v[a] + v[b] + v[c]) / 3.0).collect())
}

/// Discrete exterior product of two 1-forms:
///
/// ```text
/// (ψ ∧ φ)(x,y,z) = [ψ(z,x) + ψ(z,y)] φ(x,y)
///                + [ψ(x,y) + ψ(x,z)] φ(y,z)
///                + [ψ(y,z) + ψ(y,x)] φ(z,x)
/// ```
pub fn wedge_disc(tri: &Triangulation, psi: &Cochain1, phi: &Cochain1) -> Cochain2 {
    Cochain2::from_fn(tri, |f| {
        let [x, y, z] = tri.faces()[f];
        let p = |a, b| psi.oriented(tri, a, b);
        let q = |a, b| phi.oriented(tri, a, b);
        (p(z, x) + p(z, y)) * q(x, y) + (p(x, y) + p(x, z)) * q(y, z) + (p(y, z) + p(y, x)) * q(z, x)
    })
}
