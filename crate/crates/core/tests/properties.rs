//! Invariants checked on randomly weighted complexes and random data.

use num_complex::Complex64;
use proptest::prelude::*;
use trihodge::cochains::{eval1, eval2, inner, random_full, Cochain0, Cochain1, Cochain2};
use trihodge::completeness::{bounded_degree_cutoff, graph_constant, offspring_verdict, Status};
use trihodge::deficiency::l1_coefficients;
use trihodge::generators::{regular_patch, triangular_tree};
use trihodge::io::{complex_from_json, complex_to_json, matrix_market, read_matrix_market};
use trihodge::operators::{assemble, d0, d1, delta0, delta1, spectrum};
use trihodge::{OffspringSpec, OperatorId, Triangulation};

/// Weight `0.1 .. 5.1` looked up from a proptest-supplied table.
fn pick(table: &[f64], key: i64) -> f64 {
    0.1 + 5.0 * table[key.unsigned_abs() as usize % table.len()]
}

fn weighted(base: Triangulation, w: &[f64]) -> Triangulation {
    base.reweighted(
        |v| pick(w, v.0),
        |e| pick(w, 3 * e.tail.0 + 7 * e.head.0 + 1),
        |f| pick(w, f[0].0 + 5 * f[1].0 + 11 * f[2].0 + 2),
    )
    .unwrap()
}

fn complex_strategy() -> impl Strategy<Value = Triangulation> {
    let weights = prop::collection::vec(0.0f64..1.0, 1..16);
    let shape = prop_oneof![
        (1usize..=3).prop_map(|r| regular_patch(r).unwrap()),
        (1u64..=3, 1usize..=3).prop_map(|(k, d)| triangular_tree(&OffspringSpec::Constant { k }, d).unwrap()),
    ];
    (shape, weights).prop_map(|(t, w)| weighted(t, &w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_round_trip_is_byte_identical(t in complex_strategy()) {
        let text = complex_to_json(&t);
        let back = complex_from_json(&text).unwrap();
        prop_assert_eq!(complex_to_json(&back), text);
    }

    #[test]
    fn chain_complex_identities(t in complex_strategy()) {
        let d1d0 = assemble(&t, OperatorId::D1).compose(&assemble(&t, OperatorId::D0)).unwrap();
        prop_assert_eq!(d1d0.max_abs(), 0.0);
        let (a, b) = (assemble(&t, OperatorId::Delta0), assemble(&t, OperatorId::Delta1));
        prop_assert!(a.compose(&b).unwrap().max_abs() <= 1e-14 * (1.0 + a.max_abs() * b.max_abs()));
    }

    #[test]
    fn difference_operators_are_adjoint(t in complex_strategy(), seed in any::<u64>()) {
        let s = seed >> 2;
        let f: Cochain0 = random_full(&t, s);
        let phi: Cochain1 = random_full(&t, s + 1);
        let psi: Cochain2 = random_full(&t, s + 2);
        let lhs = inner(&t, &d0(&t, &f), &phi).unwrap();
        let rhs = inner(&t, &f, &delta0(&t, &phi)).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
        let lhs = inner(&t, &d1(&t, &phi), &psi).unwrap();
        let rhs = inner(&t, &phi, &delta1(&t, &psi)).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn gauss_bonnet_squares_to_the_laplacian(t in complex_strategy()) {
        let tm = assemble(&t, OperatorId::T);
        let l = assemble(&t, OperatorId::L);
        let scale = 1.0 + l.max_abs();
        prop_assert!(tm.compose(&tm).unwrap().max_abs_diff(&l) <= 1e-12 * scale);
        prop_assert!(tm.weighted_adjoint().max_abs_diff(&tm) <= 1e-12 * scale);
    }

    #[test]
    fn laplacian_spectra_are_nonnegative(t in complex_strategy()) {
        for id in [OperatorId::L0, OperatorId::L1, OperatorId::L2] {
            let m = assemble(&t, id);
            if m.rows() == 0 { continue; }
            let s = spectrum(&m).unwrap();
            prop_assert!(s[0] >= -1e-9 * (1.0 + s[s.len() - 1].abs()), "{}: {}", id, s[0]);
        }
    }

    #[test]
    fn cochains_alternate_under_reordering(t in complex_strategy(), seed in 0u64..1000) {
        let phi: Cochain1 = random_full(&t, seed);
        let psi: Cochain2 = random_full(&t, seed + 1);
        for e in 0..t.num_edges() {
            let k = t.edge_key(e);
            prop_assert_eq!(eval1(&t, &phi, k.head, k.tail).unwrap(), -eval1(&t, &phi, k.tail, k.head).unwrap());
        }
        for f in 0..t.num_faces() {
            let [a, b, c] = t.faces()[f].map(|i| t.vertex_id(i));
            let v = eval2(&t, &psi, a, b, c).unwrap();
            prop_assert_eq!(eval2(&t, &psi, b, c, a).unwrap(), v);
            prop_assert_eq!(eval2(&t, &psi, b, a, c).unwrap(), -v);
        }
    }

    #[test]
    fn matrix_market_round_trip(t in complex_strategy(), pick_op in 0usize..11) {
        let m = assemble(&t, OperatorId::ALL[pick_op]);
        let parsed = read_matrix_market(&matrix_market(&m, "")).unwrap();
        prop_assert_eq!(parsed.entries, m.entries());
    }

    #[test]
    fn polynomial_offspring_threshold(alpha in 0.0f64..6.0) {
        let v = offspring_verdict(&OffspringSpec::PolynomialFloor { alpha });
        prop_assert_eq!(v.status, if alpha <= 2.0 { Status::Complete } else { Status::Incomplete });
    }

    #[test]
    fn l1_coefficients_solve_the_recurrence(off in prop::collection::vec(1u32..1000, 6)) {
        let off: Vec<f64> = off.into_iter().map(f64::from).collect();
        let c = l1_coefficients(&off, 5);
        let i = Complex64::i();
        prop_assert!(((off[0] + 1.0 + i) * c[0] - off[1] * c[1]).norm() <= 1e-12 * c[0].norm() * (off[0] + 2.0));
        for n in 1..4 {
            let lhs = (off[n] + 1.0 + i) * c[n];
            let rhs = off[n + 1] * c[n + 1] + c[n - 1];
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(rhs.norm()));
        }
    }

    #[test]
    fn bounded_degree_cutoffs_obey_the_lambda_bound(n in 1usize..=5) {
        let t = regular_patch(2 * n + 1).unwrap();
        let chi = bounded_degree_cutoff(&t, 0, n).unwrap();
        let d = t.distances_from(0);
        for (x, v) in chi.values().iter().enumerate() {
            prop_assert!(v.im == 0.0 && (0.0..=1.0).contains(&v.re));
            if d[x] <= n { prop_assert_eq!(v.re, 1.0); }
        }
        prop_assert!(graph_constant(&t, &chi) <= 6.0 / (n * n) as f64 + 1e-12);
    }
}
