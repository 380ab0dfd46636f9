//! χ-completeness: cut-off functions, the constants `C` (graph part) and `M`
//! (face part) measured on finite truncations, and the series criteria for
//! triangular trees and layered complexes.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cochains::Cochain0;
use crate::complex::Triangulation;
use crate::generators::OffspringSpec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompletenessError {
    #[error("cut-off index must be at least 1")]
    ZeroIndex,
    #[error("vertex index {0} is out of range")]
    UnknownVertex(usize),
    #[error("cut-off χ_{n} does not reach 0 within the available radius {available}")]
    SupportNotFinite { n: usize, available: usize },
    #[error("sphere S_{requested} is beyond the truncation depth {depth}")]
    DepthExceeded { requested: usize, depth: usize },
    #[error("edge {tail}-{head} joins layers {from} and {to}, which are not adjacent")]
    PartitionViolation { tail: usize, head: usize, from: usize, to: usize },
    #[error("cut-off sequence violates {0}")]
    ConditionViolated(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutoffKind {
    BoundedDegree,
    OffspringSeries,
    XiSeries,
    User,
}

/// `χ_n(x) = ((2n - d(o,x))/n ∨ 0) ∧ 1`.
pub fn bounded_degree_cutoff(tri: &Triangulation, o: usize, n: usize) -> Result<Cochain0, CompletenessError> {
    if n == 0 {
        return Err(CompletenessError::ZeroIndex);
    }
    if o >= tri.num_vertices() {
        return Err(CompletenessError::UnknownVertex(o));
    }
    let d = tri.distances_from(o);
    let n_f = n as f64;
    Ok(Cochain0::from_real(tri, |x| ((2.0 * n_f - d[x] as f64) / n_f).clamp(0.0, 1.0)))
}

/// Radial profile of the series cut-off: `profile[m]` is the value on `S_m`.
/// The profile ends at the first sphere where it vanishes; `None` when the
/// partial sums of `1/√denom(k)` from `n` do not reach 1 before `max_radius`.
pub fn series_profile(n: usize, denom: impl Fn(usize) -> f64, max_radius: usize) -> Option<Vec<f64>> {
    let mut profile = vec![1.0; n + 1];
    let mut sum = 0.0;
    for m in n + 1..=max_radius {
        sum += 1.0 / denom(m - 1).sqrt();
        let value = (1.0 - sum).max(0.0);
        profile.push(value);
        if value == 0.0 {
            return Some(profile);
        }
    }
    None
}

/// `χ_n(x) = 1` for `d(o,x) ≤ n`, otherwise `max(0, 1 - Σ_{k=n}^{d-1} 1/√denom(k))`.
///
/// Fails with `SupportNotFinite` when the ramp does not reach zero inside the
/// truncation, since the cut-off would then be cut off by the rim rather than
/// by the series.
pub fn series_cutoff(
    tri: &Triangulation,
    o: usize,
    n: usize,
    denom: impl Fn(usize) -> f64,
) -> Result<Cochain0, CompletenessError> {
    if o >= tri.num_vertices() {
        return Err(CompletenessError::UnknownVertex(o));
    }
    let d = tri.distances_from(o);
    let available = d.iter().copied().filter(|&v| v != usize::MAX).max().unwrap_or(0);
    let profile = series_profile(n, denom, available).ok_or(CompletenessError::SupportNotFinite { n, available })?;
    Ok(Cochain0::from_real(tri, |x| profile.get(d[x]).copied().unwrap_or(0.0)))
}

fn real(chi: &Cochain0) -> Vec<f64> {
    chi.values().iter().map(|v| v.re).collect()
}

/// `C = max_x (1/c(x)) Σ_{y ~ x} r(x,y) |χ(x) - χ(y)|²`, each neighbour once.
pub fn graph_constant(tri: &Triangulation, chi: &Cochain0) -> f64 {
    let v = real(chi);
    let (c, r) = (tri.vertex_weights(), tri.edge_weights());
    (0..tri.num_vertices())
        .map(|x| tri.star(x).iter().map(|&(y, e)| r[e] * (v[x] - v[y]).powi(2)).sum::<f64>() / c[x])
        .fold(0.0, f64::max)
}

/// `M = max_e (1/r(e)) Σ_{x ∈ F_e} s(e,x) |2χ(x) - χ(e⁻) - χ(e⁺)|²`.
pub fn face_constant(tri: &Triangulation, chi: &Cochain0) -> f64 {
    let v = real(chi);
    let (r, s) = (tri.edge_weights(), tri.face_weights());
    tri.edges()
        .iter()
        .enumerate()
        .map(|(e, &[a, b])| {
            tri.edge_ring(e)
                .iter()
                .map(|&(f, x)| s[f] * (2.0 * v[x] - v[a] - v[b]).powi(2))
                .sum::<f64>()
                / r[e]
        })
        .fold(0.0, f64::max)
}

/// Exhaustion `B_n` with its cut-offs and their measured constants.
#[derive(Clone, Debug, PartialEq)]
pub struct CutoffSequence {
    pub kind: CutoffKind,
    pub origin: usize,
    pub indices: Vec<usize>,
    /// `B_n` as sorted vertex indices.
    pub exhaustion: Vec<Vec<usize>>,
    pub chi: Vec<Cochain0>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffMeasurement {
    pub n: usize,
    #[serde(rename = "C")]
    pub graph_constant: f64,
    #[serde(rename = "M")]
    pub face_constant: f64,
    /// Largest distance from the origin where `χ_n ≠ 0`.
    pub support_radius: usize,
    /// Whether `χ_n` vanishes on the truncation rim.
    pub inside_truncation: bool,
}

impl CutoffSequence {
    fn build(
        tri: &Triangulation,
        kind: CutoffKind,
        o: usize,
        ns: &[usize],
        mut make: impl FnMut(usize) -> Result<Cochain0, CompletenessError>,
    ) -> Result<Self, CompletenessError> {
        if o >= tri.num_vertices() {
            return Err(CompletenessError::UnknownVertex(o));
        }
        let d = tri.distances_from(o);
        let mut seq = CutoffSequence { kind, origin: o, indices: ns.to_vec(), exhaustion: vec![], chi: vec![] };
        for &n in ns {
            seq.exhaustion.push((0..tri.num_vertices()).filter(|&x| d[x] <= n).collect());
            seq.chi.push(make(n)?);
        }
        seq.check(tri)?;
        Ok(seq)
    }

    pub fn bounded_degree(tri: &Triangulation, o: usize, ns: &[usize]) -> Result<Self, CompletenessError> {
        Self::build(tri, CutoffKind::BoundedDegree, o, ns, |n| bounded_degree_cutoff(tri, o, n))
    }

    /// Tree cut-offs with increments `1/√off(k)` around the tree's origin.
    pub fn offspring_series(tri: &Triangulation, off: &OffspringSpec, ns: &[usize]) -> Result<Self, CompletenessError> {
        let o = tri.origin();
        let denom = |k: usize| off.off(k).map_or(f64::INFINITY, |v| v as f64);
        Self::build(tri, CutoffKind::OffspringSeries, o, ns, |n| series_cutoff(tri, o, n, denom))
    }

    /// Cut-offs with increments `1/√ξ(k,k+1)`; `xi[k]` must cover the ramp.
    pub fn xi_series(tri: &Triangulation, xi: &[f64], ns: &[usize]) -> Result<Self, CompletenessError> {
        let o = tri.origin();
        let denom = |k: usize| xi.get(k).copied().unwrap_or(f64::INFINITY);
        Self::build(tri, CutoffKind::XiSeries, o, ns, |n| series_cutoff(tri, o, n, denom))
    }

    /// Validates user-supplied cut-offs against balls around `o`.
    pub fn user(tri: &Triangulation, o: usize, ns: &[usize], chi: Vec<Cochain0>) -> Result<Self, CompletenessError> {
        if chi.len() != ns.len() {
            return Err(CompletenessError::ConditionViolated("one cut-off per index".into()));
        }
        let mut it = chi.into_iter();
        Self::build(tri, CutoffKind::User, o, ns, |_| Ok(it.next().expect("lengths checked")))
    }

    /// Conditions i) and ii): `0 ≤ χ_n ≤ 1`, real, and `χ_n = 1` on `B_n`.
    pub fn check(&self, tri: &Triangulation) -> Result<(), CompletenessError> {
        for ((n, ball), chi) in self.indices.iter().zip(&self.exhaustion).zip(&self.chi) {
            if chi.check(tri).is_err() {
                return Err(CompletenessError::ConditionViolated(format!("χ_{n} belongs to another complex")));
            }
            if chi.values().iter().any(|v| v.im != 0.0 || !(0.0..=1.0).contains(&v.re)) {
                return Err(CompletenessError::ConditionViolated(format!("0 ≤ χ_{n} ≤ 1")));
            }
            if ball.iter().any(|&x| chi.values()[x].re != 1.0) {
                return Err(CompletenessError::ConditionViolated(format!("χ_{n} = 1 on B_{n}")));
            }
        }
        Ok(())
    }

    pub fn measure(&self, tri: &Triangulation) -> Vec<CutoffMeasurement> {
        let d = tri.distances_from(self.origin);
        self.indices
            .iter()
            .zip(&self.chi)
            .map(|(&n, chi)| {
                let nonzero = (0..tri.num_vertices()).filter(|&x| chi.values()[x].re != 0.0);
                CutoffMeasurement {
                    n,
                    graph_constant: graph_constant(tri, chi),
                    face_constant: face_constant(tri, chi),
                    support_radius: nonzero.clone().map(|x| d[x]).max().unwrap_or(0),
                    inside_truncation: nonzero.clone().all(|x| !tri.is_boundary_vertex(x)),
                }
            })
            .collect()
    }
}

/// `off(n) = #S_{n+1} / #S_n`, exactly.
pub fn offspring(tri: &Triangulation, n: usize) -> Result<Ratio<u128>, CompletenessError> {
    let spheres = tri.spheres();
    let depth = spheres.len() - 1;
    if n + 1 > depth {
        return Err(CompletenessError::DepthExceeded { requested: n + 1, depth });
    }
    Ok(Ratio::new(spheres[n + 1].len() as u128, spheres[n].len() as u128))
}

/// Result of the check `sup_n sup_{x ∈ S_n} #(V(x) ∩ S_{n+1}) / off(n) < ∞`
/// on a finite tree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeHypothesis {
    /// The measured double supremum.
    pub sup_ratio: f64,
    /// Every vertex of `S_n` has exactly `off(n)` children.
    pub uniform: bool,
}

pub fn tree_hypothesis(tri: &Triangulation) -> TreeHypothesis {
    let layers = tri.layers();
    let spheres = tri.spheres();
    let mut sup_ratio: f64 = 0.0;
    let mut uniform = true;
    for n in 0..spheres.len().saturating_sub(1) {
        let off = spheres[n + 1].len() as f64 / spheres[n].len() as f64;
        for &x in &spheres[n] {
            let children = tri.star(x).iter().filter(|&&(y, _)| layers[y] == n + 1).count() as f64;
            sup_ratio = sup_ratio.max(children / off);
            uniform &= children == off;
        }
    }
    TreeHypothesis { sup_ratio, uniform }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Complete,
    Incomplete,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constants {
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "M")]
    pub m: f64,
}

/// Three-valued verdict with the evidence behind it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompletenessVerdict {
    pub status: Status,
    /// The closed-form rule applied, or why none applied.
    pub rule: String,
    pub constants: Option<Constants>,
    pub partial_sums: Vec<f64>,
    pub notes: Vec<String>,
}

/// Terms used for reported partial sums of closed-form families.
pub const SERIES_TERMS: usize = 64;

fn partial_sums(terms: impl Iterator<Item = f64>) -> Vec<f64> {
    terms
        .scan(0.0, |acc, t| {
            *acc += t;
            Some(*acc)
        })
        .collect()
}

/// Least-squares slope of `ln t_n` against `ln n` over the tail of the terms.
fn decay_exponent(terms: &[(usize, f64)]) -> Option<f64> {
    let tail: Vec<(f64, f64)> = terms[terms.len() / 2..]
        .iter()
        .filter(|(n, t)| *n > 0 && *t > 0.0)
        .map(|&(n, t)| ((n as f64).ln(), t.ln()))
        .collect();
    if tail.len() < 3 {
        return None;
    }
    let k = tail.len() as f64;
    let (mx, my) = (tail.iter().map(|p| p.0).sum::<f64>() / k, tail.iter().map(|p| p.1).sum::<f64>() / k);
    let sxx: f64 = tail.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| -sxy / sxx)
}

fn comparison_hint(terms: &[(usize, f64)]) -> String {
    match decay_exponent(terms) {
        Some(p) if p <= 1.0 => format!("tail terms decay like n^-{p:.3}; comparison with Σ 1/n suggests divergence"),
        Some(p) => format!("tail terms decay like n^-{p:.3}; comparison with Σ n^-p (p>1) suggests convergence"),
        None => "too few terms for a comparison estimate".into(),
    }
}

/// Decides χ-completeness of the triangular tree generated by `off` through
/// the criterion `Σ_{n≥1} 1/√off(n) = ∞`.
pub fn offspring_verdict(off: &OffspringSpec) -> CompletenessVerdict {
    let terms: Vec<(usize, f64)> = (1..=SERIES_TERMS)
        .map_while(|n| off.off(n).map(|v| (n, 1.0 / (v as f64).sqrt())))
        .collect();
    let sums = partial_sums(terms.iter().map(|t| t.1));
    let mut notes = vec!["hypothesis sup #(V(x)∩S_{n+1})/off(n) < ∞ holds by construction (uniform offspring)".to_string()];
    let (status, rule) = match off {
        OffspringSpec::PolynomialFloor { alpha } if *alpha <= 2.0 => (Status::Complete, "alpha<=2".to_string()),
        OffspringSpec::PolynomialFloor { .. } => (Status::Incomplete, "alpha>2".to_string()),
        OffspringSpec::Geometric { q } if *q > 1.0 => (Status::Incomplete, "geometric q>1".to_string()),
        OffspringSpec::Geometric { .. } => (Status::Complete, "geometric q<=1".to_string()),
        OffspringSpec::Constant { .. } => (Status::Complete, "constant".to_string()),
        OffspringSpec::Explicit { .. } | OffspringSpec::Custom(_) => {
            notes.push(comparison_hint(&terms));
            (Status::Unknown, "no closed form; partial sums only".to_string())
        }
    };
    CompletenessVerdict { status, rule, constants: None, partial_sums: sums, notes }
}

/// The per-simplex degrees of a 1-dimensional decomposition and their
/// per-layer suprema.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeQuantities {
    pub layers: Vec<usize>,
    /// `deg⁺(x)`, `deg⁻(x)`, `deg⁰(x)` per vertex.
    pub deg_plus: Vec<f64>,
    pub deg_minus: Vec<f64>,
    pub deg_zero: Vec<f64>,
    /// Per edge of `S_n × S_{n+1}`: apexes in `S_n ∪ S_{n+1}`; `None` elsewhere.
    pub deg_cross: Vec<Option<f64>>,
    /// Tree variant: apexes in `S_{n+1}` only.
    pub deg_cross_tree: Vec<Option<f64>>,
    /// Per edge of `S_n²`: apexes in `S_n`, `S_{n+1}`, `S_{n-1}`.
    pub deg_intra: Vec<Option<[f64; 3]>>,
    pub eta_plus: Vec<f64>,
    pub eta_minus: Vec<f64>,
    pub beta: Vec<f64>,
    pub beta_tree: Vec<f64>,
    pub gamma_zero: Vec<f64>,
    pub gamma_plus: Vec<f64>,
    pub gamma_minus: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum XiVariant {
    /// `ξ = η⁺_n + η⁻_{n+1} + β_n + γ⁺_n + γ⁻_{n+1}`
    General,
    /// `ξ = η⁺_n + η⁻_{n+1} + β_n + γ⁻_{n+1}` with the tree `β`.
    Tree,
}

impl DegreeQuantities {
    /// `ξ(n, n+1)` for `n = 0 .. depth-1`.
    pub fn xi(&self, variant: XiVariant) -> Vec<f64> {
        let depth = self.eta_plus.len().saturating_sub(1);
        (0..depth)
            .map(|n| match variant {
                XiVariant::General => {
                    self.eta_plus[n] + self.eta_minus[n + 1] + self.beta[n] + self.gamma_plus[n] + self.gamma_minus[n + 1]
                }
                XiVariant::Tree => self.eta_plus[n] + self.eta_minus[n + 1] + self.beta_tree[n] + self.gamma_minus[n + 1],
            })
            .collect()
    }
}

/// Computes the degree quantities of the complex's layer partition (the
/// generator's decomposition, or BFS spheres when none is recorded).
pub fn degree_quantities(tri: &Triangulation) -> Result<DegreeQuantities, CompletenessError> {
    let layers = tri.layers();
    let depth = layers.iter().copied().max().unwrap_or(0);
    for &[a, b] in tri.edges() {
        if layers[a].abs_diff(layers[b]) > 1 {
            return Err(CompletenessError::PartitionViolation { tail: a, head: b, from: layers[a], to: layers[b] });
        }
    }
    let (c, r, s) = (tri.vertex_weights(), tri.edge_weights(), tri.face_weights());
    let nv = tri.num_vertices();
    let (mut deg_plus, mut deg_minus, mut deg_zero) = (vec![0.0; nv], vec![0.0; nv], vec![0.0; nv]);
    for x in 0..nv {
        for &(y, e) in tri.star(x) {
            let slot = match layers[y] as isize - layers[x] as isize {
                1 => &mut deg_plus,
                -1 => &mut deg_minus,
                _ => &mut deg_zero,
            };
            slot[x] += r[e] / c[x];
        }
    }

    let ne = tri.num_edges();
    let (mut deg_cross, mut deg_cross_tree, mut deg_intra) = (vec![None; ne], vec![None; ne], vec![None; ne]);
    let mut q = QuantitySups::new(depth);
    for x in 0..nv {
        let n = layers[x];
        q.eta_plus[n] = q.eta_plus[n].max(deg_plus[x]);
        q.eta_minus[n] = q.eta_minus[n].max(deg_minus[x]);
    }
    for (e, &[a, b]) in tri.edges().iter().enumerate() {
        let (la, lb) = (layers[a], layers[b]);
        let n = la.min(lb);
        let ring = tri.edge_ring(e);
        let weight_where = |pred: &dyn Fn(usize) -> bool| -> f64 {
            ring.iter().filter(|&&(_, x)| pred(layers[x])).map(|&(f, _)| s[f]).sum::<f64>() / r[e]
        };
        if la != lb {
            let general = weight_where(&|l| l == n || l == n + 1);
            let tree = weight_where(&|l| l == n + 1);
            deg_cross[e] = Some(general);
            deg_cross_tree[e] = Some(tree);
            q.beta[n] = q.beta[n].max(general);
            q.beta_tree[n] = q.beta_tree[n].max(tree);
        } else {
            let zero = weight_where(&|l| l == n);
            let plus = weight_where(&|l| l == n + 1);
            let minus = weight_where(&|l| l + 1 == n);
            deg_intra[e] = Some([zero, plus, minus]);
            q.gamma_zero[n] = q.gamma_zero[n].max(zero);
            q.gamma_plus[n] = q.gamma_plus[n].max(plus);
            q.gamma_minus[n] = q.gamma_minus[n].max(minus);
        }
    }
    Ok(DegreeQuantities {
        layers,
        deg_plus,
        deg_minus,
        deg_zero,
        deg_cross,
        deg_cross_tree,
        deg_intra,
        eta_plus: q.eta_plus,
        eta_minus: q.eta_minus,
        beta: q.beta,
        beta_tree: q.beta_tree,
        gamma_zero: q.gamma_zero,
        gamma_plus: q.gamma_plus,
        gamma_minus: q.gamma_minus,
    })
}

struct QuantitySups {
    eta_plus: Vec<f64>,
    eta_minus: Vec<f64>,
    beta: Vec<f64>,
    beta_tree: Vec<f64>,
    gamma_zero: Vec<f64>,
    gamma_plus: Vec<f64>,
    gamma_minus: Vec<f64>,
}

impl QuantitySups {
    fn new(depth: usize) -> Self {
        let z = vec![0.0; depth + 1];
        QuantitySups {
            eta_plus: z.clone(),
            eta_minus: z.clone(),
            beta: z.clone(),
            beta_tree: z.clone(),
            gamma_zero: z.clone(),
            gamma_plus: z.clone(),
            gamma_minus: z,
        }
    }
}

/// What is known about the growth of `ξ(n, n+1)`.
#[derive(Clone, Debug, PartialEq)]
pub enum XiGrowth {
    /// `ξ ≤ bound` for all `n`.
    Bounded { bound: f64 },
    /// `ξ(n) = O(n^p)`.
    Polynomial { exponent: f64 },
    /// Values measured on a finite truncation; no growth class is implied.
    Measured(Vec<f64>),
}

impl XiGrowth {
    /// Growth class of the tree-variant `ξ` for a uniform simple tree:
    /// `ξ(n) = off(n) + O(1)`.
    pub fn from_offspring(off: &OffspringSpec) -> Self {
        match off {
            OffspringSpec::Constant { k } => XiGrowth::Bounded { bound: *k as f64 + 4.0 },
            OffspringSpec::Geometric { q } if *q <= 1.0 => XiGrowth::Bounded { bound: 5.0 },
            OffspringSpec::PolynomialFloor { alpha } => XiGrowth::Polynomial { exponent: alpha.max(0.0) },
            other => XiGrowth::Measured(
                (0..SERIES_TERMS).map_while(|n| other.off(n)).map(|v| v as f64 + 4.0).collect(),
            ),
        }
    }
}

/// Applies the sufficient criterion `Σ 1/√ξ(n,n+1) = ∞ ⇒ χ-complete`.
/// It never certifies incompleteness.
pub fn xi_verdict(growth: &XiGrowth) -> CompletenessVerdict {
    let notes = vec!["the ξ criterion is sufficient only; Incomplete is never concluded from it".to_string()];
    match growth {
        XiGrowth::Bounded { bound } => CompletenessVerdict {
            status: Status::Complete,
            rule: "xi bounded".into(),
            constants: None,
            partial_sums: partial_sums((0..SERIES_TERMS).map(|_| 1.0 / bound.sqrt())),
            notes,
        },
        XiGrowth::Polynomial { exponent } => {
            let terms = (1..=SERIES_TERMS).map(|n| (n as f64).powf(-exponent / 2.0));
            let (status, rule) = if *exponent <= 2.0 {
                (Status::Complete, format!("xi ~ n^{exponent}, exponent<=2"))
            } else {
                (Status::Unknown, format!("xi ~ n^{exponent}, exponent>2: criterion inconclusive"))
            };
            CompletenessVerdict { status, rule, constants: None, partial_sums: partial_sums(terms), notes }
        }
        XiGrowth::Measured(xi) => {
            let terms: Vec<(usize, f64)> = xi.iter().enumerate().map(|(n, v)| (n + 1, 1.0 / v.sqrt())).collect();
            let mut notes = notes;
            notes.push(comparison_hint(&terms));
            CompletenessVerdict {
                status: Status::Unknown,
                rule: "measured xi on a truncation; partial sums only".into(),
                constants: None,
                partial_sums: partial_sums(terms.iter().map(|t| t.1)),
                notes,
            }
        }
    }
}

/// The finite support sets attached to a cut-off `χ_n` and exhaustion set `B_n`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SupportSets {
    /// `E_n`: edges with an endpoint in `B_n`.
    pub e_n: Vec<usize>,
    /// `F_n`: faces with a vertex in `B_n`.
    pub f_n: Vec<usize>,
    /// `E*(n)`: edges `e` with some `x ∈ F_e` such that `(e⁻,x)` or `(e⁺,x)` lies in `supp d⁰χ_n`.
    pub e_star: Vec<usize>,
    /// `F*_e(n)` for the edges where it is nonempty: `(edge, apexes)`.
    pub f_star: Vec<(usize, Vec<usize>)>,
}

pub fn support_sets(tri: &Triangulation, ball: &[usize], chi: &Cochain0) -> SupportSets {
    let inside: BTreeSet<usize> = ball.iter().copied().collect();
    let v = real(chi);
    let jumps = |a: usize, b: usize| v[a] != v[b];
    let e_n = (0..tri.num_edges()).filter(|&e| tri.edges()[e].iter().any(|x| inside.contains(x))).collect();
    let f_n = (0..tri.num_faces()).filter(|&f| tri.faces()[f].iter().any(|x| inside.contains(x))).collect();
    let mut e_star = Vec::new();
    let mut f_star = Vec::new();
    for (e, &[a, b]) in tri.edges().iter().enumerate() {
        let apexes: Vec<usize> = tri.edge_ring(e).iter().map(|&(_, x)| x).filter(|&x| jumps(a, x) || jumps(b, x)).collect();
        if !apexes.is_empty() {
            e_star.push(e);
            f_star.push((e, apexes));
        }
    }
    SupportSets { e_n, f_n, e_star, f_star }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        bipartite_layer_family, layered_triangulation, regular_patch, triangular_tree, GeneratorDescriptor, LayerSpec,
        Wiring,
    };
    use crate::operators::d0;

    fn triangle() -> Triangulation {
        GeneratorDescriptor::Triangle.generate().unwrap()
    }

    #[test]
    fn bounded_degree_ramp_endpoints_and_slope() {
        let t = regular_patch(8).unwrap();
        for n in 1..=4 {
            let chi = bounded_degree_cutoff(&t, 0, n).unwrap();
            let d = t.distances_from(0);
            for (x, &dx) in d.iter().enumerate() {
                let v = chi.values()[x].re;
                if dx <= n {
                    assert_eq!(v, 1.0);
                }
                if dx >= 2 * n {
                    assert_eq!(v, 0.0);
                }
            }
            let grad = d0(&t, &chi);
            assert!(grad.values().iter().all(|g| g.norm() <= 1.0 / n as f64 + 1e-15));
        }
        assert_eq!(bounded_degree_cutoff(&t, 0, 0), Err(CompletenessError::ZeroIndex));
    }

    #[test]
    fn constants_on_regular_patch_respect_bounds() {
        let t = regular_patch(8).unwrap();
        for n in 2..=4 {
            let chi = bounded_degree_cutoff(&t, 0, n).unwrap();
            let n2 = (n * n) as f64;
            assert!(graph_constant(&t, &chi) <= 6.0 / n2);
            assert!(face_constant(&t, &chi) <= 12.0 / n2);
        }
    }

    #[test]
    fn constants_trivial_cases() {
        let t = triangle();
        let one = Cochain0::from_real(&t, |_| 1.0);
        assert_eq!(graph_constant(&t, &one), 0.0);
        assert_eq!(face_constant(&t, &one), 0.0);
        let ind = Cochain0::from_real(&t, |x| if x == 0 { 1.0 } else { 0.0 });
        assert_eq!(graph_constant(&t, &ind), 2.0);
    }

    #[test]
    fn gradient_vanishes_near_origin() {
        let t = regular_patch(7).unwrap();
        let d = t.distances_from(0);
        for n in 2..=3 {
            let grad = d0(&t, &bounded_degree_cutoff(&t, 0, n).unwrap());
            for (e, &[a, b]) in t.edges().iter().enumerate() {
                if d[a] < n || d[b] < n {
                    assert_eq!(grad.get(e).norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn series_profile_unit_denominator_is_linear() {
        let p = series_profile(2, |_| 1.0, 10).unwrap();
        assert_eq!(p, vec![1.0, 1.0, 1.0, 0.0]);
        let p = series_profile(1, |_| 4.0, 10).unwrap();
        assert_eq!(p, vec![1.0, 1.0, 0.5, 0.0]);
    }

    #[test]
    fn series_cutoff_support_radius_matches_partial_sums() {
        let off = OffspringSpec::PolynomialFloor { alpha: 2.0 };
        let t = triangular_tree(&off, 5).unwrap();
        let denom = |k: usize| off.off(k).unwrap() as f64;
        // smallest m with Σ_{k=2}^{m-1} 1/√(k²+1) ≥ 1
        let mut sum = 0.0;
        let mut m = 2;
        while sum < 1.0 {
            sum += 1.0 / denom(m).sqrt();
            m += 1;
        }
        assert_eq!(m, 5);
        let chi = series_cutoff(&t, 0, 2, denom).unwrap();
        let d = t.distances_from(0);
        let radius = (0..t.num_vertices()).filter(|&x| chi.values()[x].re > 0.0).map(|x| d[x]).max().unwrap();
        assert_eq!(radius + 1, m);
        // constant on each sphere
        for sphere in t.spheres() {
            assert!(sphere.iter().all(|&x| chi.values()[x] == chi.values()[sphere[0]]));
        }
        let shallow = triangular_tree(&off, 3).unwrap();
        assert!(matches!(series_cutoff(&shallow, 0, 2, denom), Err(CompletenessError::SupportNotFinite { .. })));
    }

    #[test]
    fn tree_face_bounds_from_the_series_proof() {
        let off = OffspringSpec::Constant { k: 4 };
        let t = triangular_tree(&off, 6).unwrap();
        let chi = series_cutoff(&t, 0, 1, |_| 4.0).unwrap();
        let v = real(&chi);
        let layers = t.layers();
        for (e, &[a, b]) in t.edges().iter().enumerate() {
            let m = layers[a].min(layers[b]);
            if m <= 1 {
                continue;
            }
            let sum: f64 = t.edge_ring(e).iter().map(|&(_, x)| (2.0 * v[x] - v[a] - v[b]).powi(2)).sum();
            if layers[a] == layers[b] {
                assert!(sum <= 4.0 / 4.0 + 1e-15);
            } else {
                let up = if layers[a] < layers[b] { a } else { b };
                let children = t.star(up).iter().filter(|&&(y, _)| layers[y] == m + 1).count() as f64;
                assert!(sum <= children / 4.0 + 1e-15);
            }
        }
    }

    #[test]
    fn cutoff_sequences_pass_conditions() {
        let t = regular_patch(6).unwrap();
        let seq = CutoffSequence::bounded_degree(&t, 0, &[1, 2, 3]).unwrap();
        let m = seq.measure(&t);
        assert_eq!(m.len(), 3);
        assert!(m.iter().all(|x| x.graph_constant.is_finite() && x.face_constant.is_finite()));
        assert!(m[2].inside_truncation);
        assert_eq!(m[2].support_radius, 5);

        let off = OffspringSpec::Constant { k: 2 };
        let tree = triangular_tree(&off, 6).unwrap();
        let seq = CutoffSequence::offspring_series(&tree, &off, &[1, 2]).unwrap();
        assert!(seq.measure(&tree).iter().all(|x| x.inside_truncation));

        let bad = vec![Cochain0::from_real(&t, |_| 0.5)];
        assert!(matches!(CutoffSequence::user(&t, 0, &[1], bad), Err(CompletenessError::ConditionViolated(_))));
    }

    #[test]
    fn offspring_ratios() {
        let t = triangular_tree(&OffspringSpec::Constant { k: 2 }, 4).unwrap();
        for n in 0..4 {
            assert_eq!(offspring(&t, n).unwrap(), Ratio::from_integer(2));
        }
        assert_eq!(offspring(&t, 4), Err(CompletenessError::DepthExceeded { requested: 5, depth: 4 }));
        let p = triangular_tree(&OffspringSpec::PolynomialFloor { alpha: 2.0 }, 4).unwrap();
        assert_eq!(offspring(&p, 3).unwrap(), Ratio::from_integer(10));
        let h = tree_hypothesis(&p);
        assert!(h.uniform);
        assert_eq!(h.sup_ratio, 1.0);
    }

    #[test]
    fn offspring_verdicts() {
        for (alpha, want) in [(0.5, Status::Complete), (1.0, Status::Complete), (2.0, Status::Complete), (2.01, Status::Incomplete), (3.0, Status::Incomplete)] {
            let v = offspring_verdict(&OffspringSpec::PolynomialFloor { alpha });
            assert_eq!(v.status, want, "alpha = {alpha}");
        }
        assert_eq!(offspring_verdict(&OffspringSpec::PolynomialFloor { alpha: 3.0 }).rule, "alpha>2");
        assert_eq!(offspring_verdict(&OffspringSpec::Constant { k: 4 }).status, Status::Complete);
        assert_eq!(offspring_verdict(&OffspringSpec::Geometric { q: 1.5 }).status, Status::Incomplete);
        let v = offspring_verdict(&OffspringSpec::Explicit { values: vec![1, 2, 3, 4, 5, 6, 7, 8] });
        assert_eq!(v.status, Status::Unknown);
        assert_eq!(v.partial_sums.len(), 7);
        let k4 = offspring_verdict(&OffspringSpec::Constant { k: 4 });
        assert!((k4.partial_sums[9] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn degree_quantities_on_binary_tree() {
        let t = triangular_tree(&OffspringSpec::Constant { k: 2 }, 3).unwrap();
        let q = degree_quantities(&t).unwrap();
        let s1 = &t.spheres()[1];
        for &x in s1 {
            assert_eq!(q.deg_plus[x], 2.0);
            assert_eq!(q.deg_minus[x], 1.0);
            assert_eq!(q.deg_zero[x], 1.0);
        }
        assert_eq!(q.eta_plus[..3], [2.0, 2.0, 2.0]);
        assert_eq!(q.eta_minus[1..], [1.0, 1.0, 1.0]);
        // each parent-child edge sees exactly one sibling apex
        assert_eq!(q.beta_tree[..3], [1.0, 1.0, 1.0]);
        assert_eq!(q.beta[..3], [1.0, 1.0, 1.0]);
        assert_eq!(q.gamma_minus[1..], [1.0, 1.0, 1.0]);
        assert_eq!(q.xi(XiVariant::Tree), vec![5.0, 5.0, 5.0]);
    }

    #[test]
    fn degree_quantities_on_constant_strip() {
        let t = layered_triangulation(&LayerSpec { sizes: vec![2; 4], wiring: Wiring::Strip }, 3).unwrap();
        let q = degree_quantities(&t).unwrap();
        // brute-force oracle for β_n and γ⁺_n straight from the face list
        let layers = t.layers();
        for n in 0..3 {
            let mut beta: f64 = 0.0;
            let mut gamma_plus: f64 = 0.0;
            for (e, &[a, b]) in t.edges().iter().enumerate() {
                let faces_with = |want: &dyn Fn(usize) -> bool| {
                    t.faces()
                        .iter()
                        .filter(|f| f.contains(&a) && f.contains(&b))
                        .filter(|f| f.iter().any(|&x| x != a && x != b && want(layers[x])))
                        .count() as f64
                };
                let (la, lb) = (layers[a], layers[b]);
                if la.min(lb) == n && la != lb {
                    beta = beta.max(faces_with(&|l| l == n || l == n + 1));
                }
                if la == n && lb == n {
                    gamma_plus = gamma_plus.max(faces_with(&|l| l == n + 1));
                }
                let _ = e;
            }
            assert_eq!(q.beta[n], beta);
            assert_eq!(q.gamma_plus[n], gamma_plus);
        }
        assert!(q.gamma_zero.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn bipartite_family_even_layers_have_no_intra_faces() {
        let t = bipartite_layer_family(&[1, 4, 16], 4).unwrap();
        let q = degree_quantities(&t).unwrap();
        for n in (0..=4).step_by(2) {
            assert_eq!(q.gamma_zero[n], 0.0);
            assert_eq!(q.gamma_plus[n], 0.0);
        }
    }

    #[test]
    fn partition_violation_detected() {
        // the patch's BFS layers are a valid decomposition; a custom layer map that skips one is not
        let t = triangle();
        let bad = Triangulation::builder()
            .vertex(crate::VertexId(0), 1.0)
            .vertex(crate::VertexId(1), 1.0)
            .vertex(crate::VertexId(2), 1.0)
            .edge(crate::VertexId(0), crate::VertexId(1), 1.0)
            .edge(crate::VertexId(1), crate::VertexId(2), 1.0)
            .edge(crate::VertexId(0), crate::VertexId(2), 1.0)
            .layers(vec![(crate::VertexId(0), 0), (crate::VertexId(1), 1), (crate::VertexId(2), 2)])
            .build()
            .unwrap();
        assert!(matches!(degree_quantities(&bad), Err(CompletenessError::PartitionViolation { .. })));
        assert!(degree_quantities(&t).is_ok());
    }

    #[test]
    fn xi_verdicts() {
        assert_eq!(xi_verdict(&XiGrowth::Bounded { bound: 7.0 }).status, Status::Complete);
        assert_eq!(xi_verdict(&XiGrowth::Polynomial { exponent: 2.0 }).status, Status::Complete);
        assert_eq!(xi_verdict(&XiGrowth::Polynomial { exponent: 3.0 }).status, Status::Unknown);
        assert_eq!(xi_verdict(&XiGrowth::Measured(vec![5.0; 10])).status, Status::Unknown);
        for g in [XiGrowth::Polynomial { exponent: 9.0 }, XiGrowth::Measured(vec![1e9; 4])] {
            assert_ne!(xi_verdict(&g).status, Status::Incomplete);
        }
    }

    #[test]
    fn support_sets_cases() {
        let t = regular_patch(7).unwrap();
        let one = Cochain0::from_real(&t, |_| 1.0);
        let s = support_sets(&t, &[0], &one);
        assert!(s.e_star.is_empty() && s.f_star.is_empty());

        let d = t.distances_from(0);
        let mut previous = 0;
        for n in 1..=3 {
            let chi = bounded_degree_cutoff(&t, 0, n).unwrap();
            let ball: Vec<usize> = (0..t.num_vertices()).filter(|&x| d[x] <= n).collect();
            let s = support_sets(&t, &ball, &chi);
            for &e in &s.e_star {
                let [a, b] = t.edges()[e];
                assert!(d[a].min(d[b]) + 1 >= n && d[a].max(d[b]) <= 2 * n + 1);
            }
            assert!(s.e_n.len() > previous);
            previous = s.e_n.len();
        }
    }
}
