use num_complex::Complex64;
use serde::Serialize;

use super::{d0, d1, delta0, delta1, double_tilde, face_sign, tilde, wedge_disc};
use crate::cochains::{Cochain0, Cochain1, Cochain2};
use crate::complex::Triangulation;

/// Largest absolute residual of each product rule, over interior simplices.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DerivationResiduals {
    /// `d¹(f̃φ) = f̃̃ d¹φ + ⅙ (d⁰f ∧ φ)` on faces.
    pub exterior_product_rule: f64,
    /// `δ¹(f̃̃ψ)(e) = f̃(e) δ¹ψ(e) + 1/(6r(e)) Σ s(e,x)[d⁰f(e⁻,x) + d⁰f(e⁺,x)] ψ(e,x)` on edges.
    pub coexterior_product_rule: f64,
    /// `d⁰(fg)(e) = f(e⁺) d⁰g(e) + d⁰f(e) g(e⁻)` on edges.
    pub gradient_product_rule: f64,
    /// `δ⁰(f̃φ)(x) = f(x) δ⁰φ(x) - 1/(2c(x)) Σ_{e⁺=x} r(e) d⁰f(e) φ(e)` on vertices.
    pub divergence_product_rule: f64,
    pub interior_vertices: usize,
    pub interior_edges: usize,
    pub interior_faces: usize,
}

impl DerivationResiduals {
    pub fn max(&self) -> f64 {
        [
            self.exterior_product_rule,
            self.coexterior_product_rule,
            self.gradient_product_rule,
            self.divergence_product_rule,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn max_over(indices: impl Iterator<Item = usize>, residual: impl Fn(usize) -> Complex64) -> (f64, usize) {
    indices.fold((0.0, 0), |(m, n), i| (m.max(residual(i).norm()), n + 1))
}

/// Evaluates both sides of the four product rules and reports the residuals.
/// Only simplices whose stencil avoids the truncation boundary are scanned.
pub fn derivation_identity_checks(
    tri: &Triangulation,
    f: &Cochain0,
    g: &Cochain0,
    phi: &Cochain1,
    psi: &Cochain2,
) -> DerivationResiduals {
    let fv = f.values();
    let gv = g.values();
    let ft = tilde(tri, f);
    let ftt = double_tilde(tri, f);
    let df = d0(tri, f);
    let dg = d0(tri, g);

    let lhs41 = d1(tri, &phi.pointwise(&ft.0));
    let dphi = d1(tri, phi);
    let wedge = wedge_disc(tri, &df, phi);
    let (r41, nf) = max_over((0..tri.num_faces()).filter(|&i| tri.is_interior_face(i)), |i| {
        lhs41.get(i) - (ftt.0[i] * dphi.get(i) + wedge.get(i) / 6.0)
    });

    let lhs42 = delta1(tri, &psi.pointwise(&ftt.0));
    let dpsi = delta1(tri, psi);
    let s = tri.face_weights();
    let (r42, ne) = max_over((0..tri.num_edges()).filter(|&e| tri.is_interior_edge(e)), |e| {
        let [a, b] = tri.edges()[e];
        let correction: Complex64 = tri
            .edge_ring(e)
            .iter()
            .map(|&(face, x)| (df.oriented(tri, a, x) + df.oriented(tri, b, x)) * psi.get(face) * (s[face] * face_sign(a, b, x)))
            .sum();
        lhs42.get(e) - (ft.0[e] * dpsi.get(e) + correction / (6.0 * tri.edge_weights()[e]))
    });

    let fg = Cochain0::from_fn(tri, |x| fv[x] * gv[x]);
    let dfg = d0(tri, &fg);
    let (rd0, _) = max_over((0..tri.num_edges()).filter(|&e| tri.is_interior_edge(e)), |e| {
        let [tail, head] = tri.edges()[e];
        dfg.get(e) - (fv[head] * dg.get(e) + df.get(e) * gv[tail])
    });

    let lhs_div = delta0(tri, &phi.pointwise(&ft.0));
    let dphi0 = delta0(tri, phi);
    let (rdiv, nv) = max_over((0..tri.num_vertices()).filter(|&x| !tri.is_boundary_vertex(x)), |x| {
        // every oriented edge ending at x is (y -> x) for a neighbour y
        let inflow: Complex64 = tri
            .star(x)
            .iter()
            .map(|&(y, _)| df.oriented(tri, y, x) * phi.oriented(tri, y, x))
            .zip(tri.star(x).iter().map(|&(_, e)| tri.edge_weights()[e]))
            .map(|(v, r)| v * r)
            .sum();
        lhs_div.get(x) - (fv[x] * dphi0.get(x) - inflow / (2.0 * tri.vertex_weights()[x]))
    });

    DerivationResiduals {
        exterior_product_rule: r41,
        coexterior_product_rule: r42,
        gradient_product_rule: rd0,
        divergence_product_rule: rdiv,
        interior_vertices: nv,
        interior_edges: ne,
        interior_faces: nf,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochains::random_full;
    use crate::generators::{regular_patch, triangular_tree, OffspringSpec};

    #[test]
    fn constant_f_reduces_to_scaling() {
        let t = regular_patch(2).unwrap();
        let f = Cochain0::from_real(&t, |_| 3.0);
        let (phi, psi) = (random_full(&t, 1), random_full(&t, 2));
        let r = derivation_identity_checks(&t, &f, &f, &phi, &psi);
        assert!(r.exterior_product_rule < 1e-14);
        assert!(r.max() < 1e-13);
    }

    #[test]
    fn random_data_on_weighted_complexes() {
        let patch = regular_patch(3).unwrap();
        let tree = triangular_tree(&OffspringSpec::Constant { k: 3 }, 3)
            .unwrap()
            .reweighted(|v| 1.0 + 0.5 * (v.0 % 3) as f64, |e| 2.0 + 0.1 * e.tail.0 as f64, |f| 0.5 + 0.2 * (f[1].0 % 4) as f64)
            .unwrap();
        for t in [patch, tree] {
            for seed in 0..5 {
                let r = derivation_identity_checks(
                    &t,
                    &random_full(&t, seed),
                    &random_full(&t, seed + 1),
                    &random_full(&t, seed + 2),
                    &random_full(&t, seed + 3),
                );
                assert!(r.exterior_product_rule <= 1e-10, "{r:?}");
                assert!(r.coexterior_product_rule <= 1e-10, "{r:?}");
                assert!(r.gradient_product_rule <= 1e-12, "{r:?}");
                assert!(r.divergence_product_rule <= 1e-10, "{r:?}");
                assert!(r.interior_edges > 0 && r.interior_faces > 0);
            }
        }
    }
}
