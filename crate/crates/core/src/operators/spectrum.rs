use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::matrix::OperatorMatrix;

/// Largest dimension handled by the dense eigensolver.
pub const DENSE_LIMIT: usize = 2000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectrumError {
    #[error("matrix is {rows}x{cols} between different spaces, spectra need an endomorphism")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {dim} exceeds the dense limit {limit}; use the iterative solver")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("operator is not self-adjoint for its weights (asymmetry {asymmetry:e})")]
    NotSelfAdjoint { asymmetry: f64 },
}

/// Which end of the spectrum the iterative solver reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Smallest,
    Largest,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LanczosReport {
    /// Ritz values, sorted ascending.
    pub eigenvalues: Vec<f64>,
    /// `‖S v - λ v‖` for each Ritz pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub tolerance: f64,
}

fn check_square(m: &OperatorMatrix) -> Result<usize, SpectrumError> {
    if m.rows() != m.cols() || m.source() != m.target() || m.source_weights() != m.target_weights() {
        return Err(SpectrumError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    Ok(m.rows())
}

/// `W^{1/2} A W^{-1/2}`, Hermitian whenever `A` is self-adjoint for `W`.
fn symmetrized_entries(m: &OperatorMatrix) -> Vec<(usize, usize, Complex64)> {
    let w = m.source_weights();
    m.entries()
        .into_iter()
        .map(|(r, c, v)| (r, c, v * (w[r] / w[c]).sqrt()))
        .collect()
}

/// Sorted real eigenvalues of a weighted self-adjoint operator, computed densely.
pub fn spectrum(m: &OperatorMatrix) -> Result<Vec<f64>, SpectrumError> {
    let n = check_square(m)?;
    if n > DENSE_LIMIT {
        return Err(SpectrumError::DimensionTooLarge { dim: n, limit: DENSE_LIMIT });
    }
    let mut s = DMatrix::<Complex64>::zeros(n, n);
    for (r, c, v) in symmetrized_entries(m) {
        s[(r, c)] += v;
    }
    let scale = s.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let asymmetry = (&s - s.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max);
    if asymmetry > 1e-10 * (1.0 + scale) {
        return Err(SpectrumError::NotSelfAdjoint { asymmetry });
    }
    // average out rounding-level asymmetry before the Hermitian solver
    let s = (&s + s.adjoint()) * Complex64::new(0.5, 0.0);
    let mut values: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `k` extreme eigenvalues by Lanczos with full reorthogonalization on the
/// symmetrized operator. Works at any dimension; each Ritz pair carries its
/// residual so callers can judge convergence.
pub fn lanczos_extremes(
    m: &OperatorMatrix,
    k: usize,
    which: Which,
    max_iter: usize,
    tol: f64,
    seed: u64,
) -> Result<LanczosReport, SpectrumError> {
    let n = check_square(m)?;
    let k = k.min(n);
    let sym = symmetrized_entries(m);
    let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
    for (r, c, v) in sym {
        rows[r].push((c, v));
    }
    let apply = |x: &[Complex64]| -> Vec<Complex64> {
        rows.iter().map(|row| row.iter().map(|&(c, v)| v * x[c]).sum()).collect()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0)).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let steps = max_iter.clamp(1, n.max(1));
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(steps);
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut report = LanczosReport { eigenvalues: vec![], residuals: vec![], iterations: 0, converged: false, tolerance: tol };

    for j in 0..steps {
        basis.push(v.clone());
        let mut w = apply(&v);
        let a = dot(&v, &w).re;
        alpha.push(a);
        // two passes of Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for q in &basis {
                let h = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= h * y);
            }
        }
        let b = norm(&w);
        report.iterations = j + 1;

        let m_dim = alpha.len();
        if m_dim >= k && (m_dim.is_multiple_of(5) || b < 1e-12 || m_dim == steps) {
            let (values, residuals) = ritz(&alpha, &beta, b, k, which);
            let scale = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
            let done = residuals.iter().all(|r| *r <= tol * scale);
            report.eigenvalues = values;
            report.residuals = residuals;
            report.converged = done || b < 1e-12;
            if report.converged {
                break;
            }
        }
        if b < 1e-12 {
            break;
        }
        beta.push(b);
        v = w.into_iter().map(|x| x / b).collect();
    }
    Ok(report)
}

/// Ritz values from the tridiagonal matrix and their residual bounds `|β_m s_m|`.
fn ritz(alpha: &[f64], beta: &[f64], next_beta: f64, k: usize, which: Which) -> (Vec<f64>, Vec<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let s: DVector<f64> = eig.eigenvectors.column(i).into();
            (eig.eigenvalues[i], (next_beta * s[m - 1]).abs())
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let chosen: Vec<(f64, f64)> = match which {
        Which::Smallest => pairs.into_iter().take(k).collect(),
        Which::Largest => {
            let skip = m.saturating_sub(k);
            pairs.into_iter().skip(skip).collect()
        }
    };
    chosen.into_iter().unzip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{regular_patch, GeneratorDescriptor};
    use crate::operators::{assemble, OperatorId};

    #[test]
    fn triangle_l0_spectrum() {
        let t = GeneratorDescriptor::Triangle.generate().unwrap();
        let s = spectrum(&assemble(&t, OperatorId::L0)).unwrap();
        for (got, want) in s.iter().zip([0.0, 3.0, 3.0]) {
            assert!((got - want).abs() < 1e-10, "{s:?}");
        }
        assert!(matches!(spectrum(&assemble(&t, OperatorId::D0)), Err(SpectrumError::NotSquare { .. })));
    }

    #[test]
    fn weighted_laplacian_spectrum_is_real_and_nonnegative() {
        let t = regular_patch(2)
            .unwrap()
            .reweighted(|v| 1.0 + (v.0 % 4) as f64, |_| 1.5, |f| 0.5 + (f[0].0 % 2) as f64)
            .unwrap();
        for id in [OperatorId::L0, OperatorId::L1, OperatorId::L2, OperatorId::L] {
            let s = spectrum(&assemble(&t, id)).unwrap();
            assert!(s[0] > -1e-10, "{id}: {}", s[0]);
        }
        let mut squares: Vec<f64> = spectrum(&assemble(&t, OperatorId::T)).unwrap().iter().map(|x| x * x).collect();
        squares.sort_by(f64::total_cmp);
        let l = spectrum(&assemble(&t, OperatorId::L)).unwrap();
        assert!(squares.iter().zip(&l).all(|(a, b)| (a - b).abs() < 1e-8));
    }

    #[test]
    fn non_self_adjoint_is_rejected() {
        let t = regular_patch(1).unwrap();
        let l0 = assemble(&t, OperatorId::L0);
        let skew = OperatorMatrix::from_triplets(
            l0.source(),
            l0.target(),
            l0.source_weights().to_vec(),
            l0.target_weights().to_vec(),
            [(0, 1, Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        assert!(matches!(spectrum(&skew), Err(SpectrumError::NotSelfAdjoint { .. })));
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let t = regular_patch(4).unwrap();
        let l1 = assemble(&t, OperatorId::L1);
        let dense = spectrum(&l1).unwrap();
        let top = lanczos_extremes(&l1, 3, Which::Largest, 300, 1e-9, 7).unwrap();
        assert!(top.converged, "{top:?}");
        for (got, want) in top.eigenvalues.iter().zip(&dense[dense.len() - 3..]) {
            assert!((got - want).abs() < 1e-7, "{got} vs {want}");
        }
        let bottom = lanczos_extremes(&l1, 2, Which::Smallest, 300, 1e-9, 7).unwrap();
        assert!((bottom.eigenvalues[0] - dense[0]).abs() < 1e-7);
    }
}
