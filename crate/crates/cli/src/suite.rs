//! The identity suite behind `trihodge identities`: each check is a named
//! residual compared against a tolerance scaled to the data.

use serde::Serialize;
use trihodge::cochains::{inner, random_full, Cochain0, Cochain1, Cochain2};
use trihodge::operators::{
    assemble, d0, d1, delta0, delta1, derivation_identity_checks, laplacian1, laplacian2, OperatorId,
};
use trihodge::{CochainError, Triangulation};

/// Absolute tolerance on exactly-vanishing matrix products.
pub const COMPLEX_TOL: f64 = 1e-14;
/// Relative tolerance on inner-product identities.
pub const ADJOINT_TOL: f64 = 1e-10;
/// Entrywise tolerance on `T² = L`.
pub const SQUARE_TOL: f64 = 1e-12;
/// Absolute tolerance on the pointwise product rules.
pub const DERIVATION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Assertion {
    fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Assertion { name: name.into(), value, tolerance, pass: value <= tolerance }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub seed: u64,
    pub trials: usize,
    pub assertions: Vec<Assertion>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn first_failure(&self) -> Option<&Assertion> {
        self.assertions.iter().find(|a| !a.pass)
    }
}

/// Worst relative defect of `⟨d⁰f,φ⟩ = ⟨f,δ⁰φ⟩` and `⟨d¹φ,ψ⟩ = ⟨φ,δ¹ψ⟩` over
/// `trials` seeded random triples.
pub fn adjointness_defects(tri: &Triangulation, seed: u64, trials: usize) -> Result<(f64, f64), CochainError> {
    let (mut worst0, mut worst1) = (0.0f64, 0.0f64);
    for t in 0..trials as u64 {
        let base = seed.wrapping_add(3 * t);
        let f: Cochain0 = random_full(tri, base);
        let phi: Cochain1 = random_full(tri, base + 1);
        let psi: Cochain2 = random_full(tri, base + 2);

        let (df, dphi) = (d0(tri, &f), delta0(tri, &phi));
        let gap = (inner(tri, &df, &phi)? - inner(tri, &f, &dphi)?).norm();
        let scale = 1.0 + df.norm(tri)? * phi.norm(tri)? + f.norm(tri)? * dphi.norm(tri)?;
        worst0 = worst0.max(gap / scale);

        let (d1phi, dpsi) = (d1(tri, &phi), delta1(tri, &psi));
        let gap = (inner(tri, &d1phi, &psi)? - inner(tri, &phi, &dpsi)?).norm();
        let scale = 1.0 + d1phi.norm(tri)? * psi.norm(tri)? + phi.norm(tri)? * dpsi.norm(tri)?;
        worst1 = worst1.max(gap / scale);
    }
    Ok((worst0, worst1))
}

/// Relative defects of `⟨L₁φ,φ⟩ = ‖δ⁰φ‖² + ‖d¹φ‖²` and `⟨L₂ψ,ψ⟩ = ‖δ¹ψ‖²`.
pub fn energy_defects(tri: &Triangulation, seed: u64, trials: usize) -> Result<(f64, f64), CochainError> {
    let (mut worst1, mut worst2) = (0.0f64, 0.0f64);
    for t in 0..trials as u64 {
        let phi: Cochain1 = random_full(tri, seed.wrapping_add(2 * t));
        let psi: Cochain2 = random_full(tri, seed.wrapping_add(2 * t + 1));
        let lhs = inner(tri, &laplacian1(tri, &phi), &phi)?;
        let rhs = delta0(tri, &phi).norm(tri)?.powi(2) + d1(tri, &phi).norm(tri)?.powi(2);
        worst1 = worst1.max((lhs - rhs).norm() / rhs.max(f64::MIN_POSITIVE).max(lhs.norm()));
        let lhs = inner(tri, &laplacian2(tri, &psi), &psi)?;
        let rhs = delta1(tri, &psi).norm(tri)?.powi(2);
        worst2 = worst2.max((lhs - rhs).norm() / rhs.max(f64::MIN_POSITIVE).max(lhs.norm()));
    }
    Ok((worst1, worst2))
}

/// `max |AB|` of a product that must vanish, and the scale `max(1, |A||B|)`
/// its rounding error is measured against.
pub fn product_defect(tri: &Triangulation, outer: OperatorId, inner: OperatorId) -> (f64, f64) {
    let (a, b) = (assemble(tri, outer), assemble(tri, inner));
    let defect = a.compose(&b).expect("chain maps compose").max_abs();
    (defect, 1.0f64.max(a.max_abs() * b.max_abs()))
}

/// Runs every identity check on `tri`.
pub fn run_identity_suite(tri: &Triangulation, seed: u64, trials: usize) -> Result<SuiteReport, CochainError> {
    let mut assertions = Vec::new();
    for (name, outer, inner) in [
        ("d1*d0 = 0", OperatorId::D1, OperatorId::D0),
        ("delta0*delta1 = 0", OperatorId::Delta0, OperatorId::Delta1),
    ] {
        let (defect, scale) = product_defect(tri, outer, inner);
        assertions.push(Assertion::new(name, defect, COMPLEX_TOL * scale));
    }
    let (a0, a1) = adjointness_defects(tri, seed, trials)?;
    assertions.push(Assertion::new("<d0 f, phi> = <f, delta0 phi>", a0, ADJOINT_TOL));
    assertions.push(Assertion::new("<d1 phi, psi> = <phi, delta1 psi>", a1, ADJOINT_TOL));

    let t = assemble(tri, OperatorId::T);
    let l = assemble(tri, OperatorId::L);
    let t2 = t.compose(&t).expect("T is an endomorphism");
    let scale = 1.0f64.max(l.max_abs());
    assertions.push(Assertion::new("T^2 = L", t2.max_abs_diff(&l), SQUARE_TOL * scale));
    assertions.push(Assertion::new("L self-adjoint", l.weighted_adjoint().max_abs_diff(&l), SQUARE_TOL * scale));

    let (e1, e2) = energy_defects(tri, seed, trials)?;
    assertions.push(Assertion::new("<L1 phi, phi> = |delta0 phi|^2 + |d1 phi|^2", e1, ADJOINT_TOL));
    assertions.push(Assertion::new("<L2 psi, psi> = |delta1 psi|^2", e2, ADJOINT_TOL));

    let f: Cochain0 = random_full(tri, seed);
    let g: Cochain0 = random_full(tri, seed + 1);
    let phi: Cochain1 = random_full(tri, seed + 2);
    let psi: Cochain2 = random_full(tri, seed + 3);
    let r = derivation_identity_checks(tri, &f, &g, &phi, &psi);
    assertions.push(Assertion::new("d1 product rule", r.exterior_product_rule, DERIVATION_TOL));
    assertions.push(Assertion::new("delta1 product rule", r.coexterior_product_rule, DERIVATION_TOL));
    assertions.push(Assertion::new("d0 product rule", r.gradient_product_rule, DERIVATION_TOL));
    assertions.push(Assertion::new("delta0 product rule", r.divergence_product_rule, DERIVATION_TOL));

    let pass = assertions.iter().all(|a| a.pass);
    Ok(SuiteReport {
        vertices: tri.num_vertices(),
        edges: tri.num_edges(),
        faces: tri.num_faces(),
        seed,
        trials,
        assertions,
        pass,
    })
}
