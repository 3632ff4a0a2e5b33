//! Structural frame conditions for diagonal systems.
//!
//! With `g^i_j = d_j α^i_j sqrt(Re λ_j)`, `C^{-1} <= d_j <= C` and unit
//! columns `α_j`, the system `{e^{tA} g^i}` is a semi-continuous frame if and
//! only if `Σ_j (1 - |η_j|^2) δ_{η_j}` is a Carleson measure for
//! `η_j = h(λ_j)`, at most `m` points (with repetition) fall in any
//! pseudo-hyperbolic disc of radius `β`, and the `α`-columns of every
//! `γ`-cluster are uniformly independent.
//!
//! The discrete orbit vectors carry the same factorization up to complex
//! conjugation of `α`. Conjugation leaves every condition unchanged; this
//! module always reports the unconjugated `α` of the continuous form.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::frame::{frame_bounds, quadform_continuous, FrameBounds, VectorKind, VectorSet};
use crate::hardy::{gram_halfplane, pseudo_hyperbolic, DiscPoint, HalfPlanePoint};
use crate::linalg::{hermitian_eigenvalues, min_singular_value_sq, CMatrix};
use crate::operators::Spectrum;
use crate::C64;

/// `g^i_j = d_j α^i_j sqrt(Re λ_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationResult {
    pub d: Vec<f64>,
    /// `m x N`, unit columns.
    pub alpha: CMatrix,
    /// `max(sup d_j, sup 1/d_j)`.
    pub c_bound: f64,
}

pub fn factorize_vectors(spec: &Spectrum, g: &VectorSet) -> Result<FactorizationResult> {
    if g.kind() != VectorKind::ContinuousG {
        return Err(Error::InvalidParameter(
            "factorization needs continuous_g vectors".into(),
        ));
    }
    if g.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: g.dim(),
        });
    }
    let gm = g.coeffs();
    let mut d = Vec::with_capacity(g.dim());
    let mut column_norms = Vec::with_capacity(g.dim());
    for j in 0..g.dim() {
        let norm = (0..g.count()).map(|i| gm[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::DeadCoordinate(j));
        }
        d.push(norm / spec.lambda(j).re.sqrt());
        column_norms.push(norm);
    }
    let alpha = CMatrix::from_fn(g.count(), g.dim(), |i, j| gm[(i, j)] / column_norms[j]);
    let c_bound = d.iter().fold(1.0f64, |acc, &x| acc.max(x).max(1.0 / x));
    Ok(FactorizationResult { d, alpha, c_bound })
}

/// Default threshold on the Carleson constant.
pub const DEFAULT_CARLESON_THRESHOLD: f64 = 50.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CarlesonReport {
    pub is_carleson: bool,
    /// `sup_j Σ_k (1 - |η_j|^2)(1 - |η_k|^2) / |1 - conj(η_j) η_k|^2`.
    pub constant_estimate: f64,
    /// Row attaining the supremum.
    pub witness: usize,
    pub threshold: f64,
    /// Largest `μ(Q) / ℓ(Q)` over dyadic Carleson boxes; diagnostic only.
    pub box_estimate: f64,
}

/// Dyadic levels inspected by the box diagnostic.
pub const BOX_LEVELS: u32 = 30;

/// Carleson test of `μ = Σ_j (1 - |η_j|^2) δ_{η_j}` by the row sums of its
/// normalized kernel Gram matrix.
pub fn carleson_test(etas: &[DiscPoint], threshold: f64) -> Result<CarlesonReport> {
    if etas.is_empty() {
        return Err(Error::InvalidParameter("Carleson test needs at least one point".into()));
    }
    if let Some(index) = etas.iter().position(|e| !(e.boundary_distance() > 0.0)) {
        return Err(Error::DomainViolation {
            index,
            invariant: "|η| < 1",
        });
    }
    let w: Vec<f64> = etas.iter().map(|e| e.boundary_distance()).collect();
    let mut constant_estimate = 0.0;
    let mut witness = 0;
    for (j, ej) in etas.iter().enumerate() {
        let row: f64 = etas
            .iter()
            .zip(&w)
            .map(|(ek, wk)| w[j] * wk / ek.one_minus_times_conj(ej).norm_sqr())
            .sum();
        if row > constant_estimate {
            constant_estimate = row;
            witness = j;
        }
    }
    Ok(CarlesonReport {
        is_carleson: constant_estimate <= threshold,
        constant_estimate,
        witness,
        threshold,
        box_estimate: carleson_box_estimate(etas),
    })
}

/// `sup μ(Q)/ℓ(Q)` over the dyadic boxes
/// `Q = {r e^{iθ} : 1 - 2^{-n} <= r < 1, θ ∈ [2π k 2^{-n}, 2π (k+1) 2^{-n})}`
/// with `ℓ(Q) = 2^{-n}`, for `n < BOX_LEVELS`.
pub fn carleson_box_estimate(etas: &[DiscPoint]) -> f64 {
    let mut best = 0.0f64;
    for n in 0..BOX_LEVELS {
        let side = 0.5f64.powi(n as i32);
        let cells = 1u64 << n;
        let mut mass: BTreeMap<u64, f64> = BTreeMap::new();
        for e in etas {
            let z = e.value();
            if 1.0 - z.norm() > side {
                continue;
            }
            let mut theta = z.im.atan2(z.re);
            if theta < 0.0 {
                theta += 2.0 * PI;
            }
            let k = ((theta / (2.0 * PI) * cells as f64) as u64).min(cells - 1);
            *mass.entry(k).or_insert(0.0) += e.boundary_distance();
        }
        best = mass.values().fold(best, |acc, &m| acc.max(m / side));
    }
    best
}

/// `count` log-spaced values in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return alloc::vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// 16 log-spaced values in `[0.05, 0.95]`.
pub fn default_radius_grid() -> Vec<f64> {
    log_grid(0.05, 0.95, 16)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    /// Largest grid radius with `max_count <= m`.
    pub beta: Option<f64>,
    /// Largest disc population at `beta`, or at the smallest radius when no
    /// radius qualifies.
    pub max_count: usize,
    pub satisfied: bool,
    pub m: usize,
    /// `(β, max_j |{k : ρ(η_j, η_k) < β}|)` for every grid radius.
    pub counts: Vec<(f64, usize)>,
}

fn pairwise_rho(etas: &[DiscPoint]) -> Vec<Vec<f64>> {
    let n = etas.len();
    let mut rho = alloc::vec![alloc::vec![0.0; n]; n];
    for j in 0..n {
        for k in (j + 1)..n {
            let r = pseudo_hyperbolic(etas[j], etas[k]);
            rho[j][k] = r;
            rho[k][j] = r;
        }
    }
    rho
}

/// Multiset counts of pseudo-hyperbolic discs; repeated points count
/// separately.
pub fn separation_test(etas: &[DiscPoint], m: usize, beta_grid: &[f64]) -> Result<SeparationReport> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    if beta_grid.is_empty() || beta_grid.iter().any(|b| !(*b > 0.0 && *b < 1.0)) {
        return Err(Error::InvalidParameter("separation radii must lie in (0, 1)".into()));
    }
    let rho = pairwise_rho(etas);
    let mut grid = beta_grid.to_vec();
    grid.sort_by(|a, b| a.total_cmp(b));
    let counts: Vec<(f64, usize)> = grid
        .iter()
        .map(|&beta| {
            let worst = rho
                .iter()
                .map(|row| row.iter().filter(|&&r| r < beta).count())
                .max()
                .unwrap_or(0);
            (beta, worst)
        })
        .collect();
    let best = counts.iter().rev().find(|(_, count)| *count <= m).copied();
    let (beta, max_count) = match best {
        Some((b, c)) => (Some(b), c),
        None => (None, counts[0].1),
    };
    Ok(SeparationReport {
        beta,
        max_count,
        satisfied: beta.is_some(),
        m,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterMatrixReport {
    /// Radius giving the largest `min_sigma_sq`.
    pub gamma: f64,
    /// Smallest squared singular value over all cluster matrices at `gamma`.
    pub min_sigma_sq: f64,
    pub d_estimate: f64,
    /// Anchor of the worst cluster.
    pub worst_anchor: usize,
    /// `(γ, min_sigma_sq)` for every radius tried.
    pub per_gamma: Vec<(f64, f64)>,
}

/// For every anchor `j`, the `m x p` matrix of `α`-columns of the points in
/// `Δ(η_j, γ)`, and its smallest squared singular value. Radii at or above
/// `beta` are skipped; `beta / 2` is used when none remain.
pub fn cluster_matrix_test(
    etas: &[DiscPoint],
    alpha: &CMatrix,
    beta: f64,
    gamma_grid: &[f64],
) -> Result<ClusterMatrixReport> {
    let n = etas.len();
    if alpha.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: alpha.cols(),
        });
    }
    let m = alpha.rows();
    let mut gammas: Vec<f64> = gamma_grid.iter().copied().filter(|&g| g > 0.0 && g < beta).collect();
    if gammas.is_empty() {
        gammas.push(0.5 * beta);
    }
    let rho = pairwise_rho(etas);
    let mut per_gamma = Vec::with_capacity(gammas.len());
    let mut best: Option<(f64, f64, usize)> = None;
    for &gamma in &gammas {
        let mut worst = f64::INFINITY;
        let mut worst_anchor = 0;
        for (anchor, row) in rho.iter().enumerate() {
            let cluster: Vec<usize> = (0..n).filter(|&k| row[k] < gamma).collect();
            if cluster.len() > m {
                return Err(Error::ClusterTooLarge {
                    anchor,
                    size: cluster.len(),
                    m,
                });
            }
            let b = CMatrix::from_fn(m, cluster.len(), |i, l| alpha[(i, cluster[l])]);
            let s = min_singular_value_sq(&b)?;
            if s < worst {
                worst = s;
                worst_anchor = anchor;
            }
        }
        per_gamma.push((gamma, worst));
        if best.is_none_or(|(_, s, _)| worst > s) {
            best = Some((gamma, worst, worst_anchor));
        }
    }
    let (gamma, min_sigma_sq, worst_anchor) = best.unwrap_or((gammas[0], 0.0, 0));
    Ok(ClusterMatrixReport {
        gamma,
        min_sigma_sq,
        d_estimate: min_sigma_sq,
        worst_anchor,
        per_gamma,
    })
}

/// Default floor for the smallest eigenvalue of the normalized kernel Gram.
pub const DEFAULT_INTERPOLATING_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct InterpolatingReport {
    /// `(N, smallest, largest)` eigenvalue of the normalized kernel Gram of
    /// the first `N` points.
    pub curve: Vec<(usize, f64, f64)>,
    pub floor: f64,
    /// Smallest eigenvalue at the largest `N` is at least `floor`.
    pub interpolating: bool,
    /// Ratio of the last two smallest eigenvalues (1 means flat).
    pub plateau_ratio: Option<f64>,
    pub carleson: CarlesonReport,
    /// Separation of `h(λ_j)` with `m = 1`.
    pub separation: SeparationReport,
}

/// Normalized kernel Gram `G̃_jk = k(λ_k, λ_j) / sqrt(k(λ_j, λ_j) k(λ_k, λ_k))`
/// in `H²(ℂ₊)`.
pub fn normalized_kernel_gram(lambdas: &[HalfPlanePoint]) -> Result<CMatrix> {
    let gram = gram_halfplane(lambdas)?.entries;
    let n = lambdas.len();
    let diag: Vec<f64> = (0..n).map(|j| gram[(j, j)].re.sqrt()).collect();
    Ok(CMatrix::from_fn(n, n, |j, k| {
        if j == k {
            C64::new(1.0, 0.0)
        } else {
            gram[(j, k)] / (diag[j] * diag[k])
        }
    }))
}

/// For `m = 1` the frame property is equivalent to `{λ_j}` being an
/// interpolating sequence. Reports the normalized-kernel eigenvalue curve
/// over the truncations `ns` plus the Carleson and separation surrogates.
pub fn interpolating_test_m1(
    lambdas: &[HalfPlanePoint],
    ns: &[usize],
    floor: f64,
    carleson_threshold: f64,
) -> Result<InterpolatingReport> {
    for j in 0..lambdas.len() {
        for k in (j + 1)..lambdas.len() {
            if lambdas[j].value() == lambdas[k].value() {
                return Err(Error::DuplicatePoint { first: j, second: k });
            }
        }
    }
    let full = normalized_kernel_gram(lambdas)?;
    let mut sizes: Vec<usize> = ns.iter().copied().filter(|&n| n >= 1 && n <= lambdas.len()).collect();
    if sizes.is_empty() {
        sizes.push(lambdas.len());
    }
    let mut curve = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let values = hermitian_eigenvalues(&full.principal_submatrix(n))?;
        curve.push((n, values[0], values[n - 1]));
    }
    let last = curve[curve.len() - 1];
    let plateau_ratio = if curve.len() >= 2 && curve[curve.len() - 2].1 != 0.0 {
        Some(last.1 / curve[curve.len() - 2].1)
    } else {
        None
    };
    let etas: Vec<DiscPoint> = lambdas.iter().map(|&l| DiscPoint::from_half_plane(l)).collect();
    Ok(InterpolatingReport {
        interpolating: last.1 >= floor,
        curve,
        floor,
        plateau_ratio,
        carleson: carleson_test(&etas, carleson_threshold)?,
        separation: separation_test(&etas, 1, &default_radius_grid())?,
    })
}

/// Thresholds for [`full_theorem_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionConfig {
    pub carleson_threshold: f64,
    pub beta_grid: Vec<f64>,
    pub gamma_grid: Vec<f64>,
    /// Largest acceptable `C` in `C^{-1} <= d_j <= C`.
    pub c_bound_threshold: f64,
    /// Cluster matrices with a smaller squared singular value count as
    /// rank deficient.
    pub cluster_floor: f64,
}

impl Default for ConditionConfig {
    fn default() -> Self {
        ConditionConfig {
            carleson_threshold: DEFAULT_CARLESON_THRESHOLD,
            beta_grid: default_radius_grid(),
            gamma_grid: default_radius_grid(),
            c_bound_threshold: 10.0,
            cluster_floor: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub factorization: FactorizationResult,
    pub c_bound_ok: bool,
    pub carleson: CarlesonReport,
    /// Condition (1).
    pub separation: SeparationReport,
    /// Condition (2); absent when separation fails.
    pub cluster: Option<ClusterMatrixReport>,
    pub cluster_ok: bool,
    pub structural_verdict: bool,
    pub frame_bounds: FrameBounds,
    pub numerical_frame: bool,
    /// `structural_verdict == numerical_frame`.
    pub agreement: bool,
}

/// All structural conditions plus the truncated frame bounds, and whether
/// the two verdicts agree.
pub fn full_theorem_check(spec: &Spectrum, g: &VectorSet, config: &ConditionConfig) -> Result<ConditionReport> {
    let factorization = factorize_vectors(spec, g)?;
    let etas = spec.etas();
    let carleson = carleson_test(&etas, config.carleson_threshold)?;
    let separation = separation_test(&etas, g.count(), &config.beta_grid)?;
    let cluster = match separation.beta {
        Some(beta) => Some(cluster_matrix_test(
            &etas,
            &factorization.alpha,
            beta,
            &config.gamma_grid,
        )?),
        None => None,
    };
    let cluster_ok = cluster.as_ref().is_some_and(|c| c.min_sigma_sq > config.cluster_floor);
    let c_bound_ok = factorization.c_bound <= config.c_bound_threshold;
    let structural_verdict = c_bound_ok && carleson.is_carleson && separation.satisfied && cluster_ok;
    let frame_bounds = frame_bounds(&quadform_continuous(spec, g)?)?;
    let numerical_frame = frame_bounds.is_frame();
    Ok(ConditionReport {
        factorization,
        c_bound_ok,
        carleson,
        separation,
        cluster,
        cluster_ok,
        structural_verdict,
        frame_bounds,
        numerical_frame,
        agreement: structural_verdict == numerical_frame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }
    fn disc(x: f64) -> DiscPoint {
        DiscPoint::new(c(x, 0.0)).unwrap()
    }
    fn geometric(n: usize) -> Spectrum {
        Spectrum::generate(&|j: usize| c(0.5f64.powi(j as i32), 0.0), n).unwrap()
    }

    #[test]
    fn factorization_examples() {
        let spec = geometric(6);
        let f = factorize_vectors(&spec, &VectorSet::canonical(&spec)).unwrap();
        assert!(f.d.iter().all(|&d| (d - 1.0).abs() < 1e-15));
        assert!(f.alpha.as_slice().iter().all(|a| (a - c(1.0, 0.0)).norm() < 1e-15));
        assert_relative_eq!(f.c_bound, 1.0, epsilon = 1e-15);

        let row: Vec<C64> = spec.values().iter().map(|l| c(l.re.sqrt(), 0.0)).collect();
        let g2 = VectorSet::from_rows(&[row.clone(), row], VectorKind::ContinuousG).unwrap();
        let f = factorize_vectors(&spec, &g2).unwrap();
        assert!(f.d.iter().all(|&d| (d - 2.0f64.sqrt()).abs() < 1e-15));
        assert!(f.alpha.as_slice().iter().all(|a| (a.re - 0.5f64.sqrt()).abs() < 1e-15));

        let dead = VectorSet::from_rows(&[alloc::vec![c(1.0, 0.0), c(0.0, 0.0)]], VectorKind::ContinuousG).unwrap();
        assert_eq!(factorize_vectors(&geometric(2), &dead), Err(Error::DeadCoordinate(1)));
    }

    #[test]
    fn factorization_round_trip() {
        let spec = Spectrum::new(&[c(0.3, 1.0), c(2.0, -4.0), c(1e-3, 0.0)]).unwrap();
        let g = VectorSet::from_rows(
            &[
                alloc::vec![c(1.0, 2.0), c(0.0, 0.0), c(-3.0, 0.5)],
                alloc::vec![c(0.0, -1.0), c(4.0, 0.0), c(0.1, 0.1)],
            ],
            VectorKind::ContinuousG,
        )
        .unwrap();
        let f = factorize_vectors(&spec, &g).unwrap();
        for j in 0..3 {
            let col: f64 = (0..2).map(|i| f.alpha[(i, j)].norm_sqr()).sum();
            assert!((col - 1.0).abs() <= 1e-12);
            for i in 0..2 {
                let back = f.alpha[(i, j)] * f.d[j] * spec.lambda(j).re.sqrt();
                assert!((back - g.coeffs()[(i, j)]).norm() <= 1e-12 * g.coeffs()[(i, j)].norm().max(1.0));
            }
        }
    }

    #[test]
    fn carleson_single_point() {
        let r = carleson_test(&[disc(0.0)], DEFAULT_CARLESON_THRESHOLD).unwrap();
        assert_eq!(r.constant_estimate, 1.0);
        assert!(r.is_carleson);
    }

    fn boundary_approach(n: usize) -> Vec<DiscPoint> {
        (1..=n).map(|j| disc(1.0 - 0.5f64.powi(j as i32))).collect()
    }

    #[test]
    fn carleson_exponential_approach_plateaus() {
        let consts: Vec<f64> = [4usize, 8, 12, 16]
            .iter()
            .map(|&n| carleson_test(&boundary_approach(n), 50.0).unwrap().constant_estimate)
            .collect();
        // 40-digit reference values
        let frozen = [3.30887662828, 4.95179959211, 5.52866221815, 5.70207055157];
        for (got, want) in consts.iter().zip(frozen) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        assert!((consts[3] - consts[2]).abs() / consts[2] <= 0.05);
    }

    #[test]
    fn carleson_harmonic_approach_grows() {
        let consts: Vec<f64> = [8usize, 16, 32]
            .iter()
            .map(|&n| {
                let etas: Vec<DiscPoint> = (1..=n).map(|j| disc(1.0 - 1.0 / j as f64)).collect();
                carleson_test(&etas, 50.0).unwrap().constant_estimate
            })
            .collect();
        let ns = [8.0f64, 16.0, 32.0];
        let per_log: Vec<f64> = consts.iter().zip(ns).map(|(c, n)| c / n.ln()).collect();
        assert!(per_log.windows(2).all(|w| w[1] > w[0]), "{consts:?}");
    }

    #[test]
    fn separation_examples() {
        let etas = [disc(-0.5), disc(0.0), disc(0.5)];
        let min_rho = pseudo_hyperbolic(etas[0], etas[1]).min(pseudo_hyperbolic(etas[1], etas[2]));
        let r = separation_test(&etas, 1, &default_radius_grid()).unwrap();
        assert!(r.satisfied);
        let beta = r.beta.unwrap();
        assert!(beta <= min_rho && beta >= min_rho / 2.0);

        let dup = [disc(0.2), disc(0.2), disc(-0.6)];
        let r = separation_test(&dup, 1, &default_radius_grid()).unwrap();
        assert!(!r.satisfied && r.max_count >= 2);
        let r = separation_test(&dup, 2, &default_radius_grid()).unwrap();
        assert!(r.satisfied);
    }

    #[test]
    fn cluster_examples() {
        let etas = [disc(-0.5), disc(0.0), disc(0.5)];
        let alpha = CMatrix::from_rows(&[alloc::vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]]).unwrap();
        let r = cluster_matrix_test(&etas, &alpha, 0.4, &default_radius_grid()).unwrap();
        assert_relative_eq!(r.min_sigma_sq, 1.0, epsilon = 1e-15);

        let dup = [disc(0.2), disc(0.2)];
        let eye = CMatrix::identity(2);
        let r = cluster_matrix_test(&dup, &eye, 0.5, &default_radius_grid()).unwrap();
        assert_relative_eq!(r.min_sigma_sq, 1.0, epsilon = 1e-15);

        let rank1 = CMatrix::from_rows(&[alloc::vec![c(1.0, 0.0), c(1.0, 0.0)], alloc::vec![c(0.0, 0.0); 2]]).unwrap();
        let r = cluster_matrix_test(&dup, &rank1, 0.5, &default_radius_grid()).unwrap();
        assert!(r.min_sigma_sq <= 1e-15);

        let three = [disc(0.2), disc(0.2), disc(0.2)];
        let alpha3 = CMatrix::from_fn(2, 3, |i, j| if i == j % 2 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(matches!(
            cluster_matrix_test(&three, &alpha3, 0.5, &default_radius_grid()),
            Err(Error::ClusterTooLarge { size: 3, m: 2, .. })
        ));
    }

    #[test]
    fn interpolating_examples() {
        let one = [HalfPlanePoint::new(c(1.0, 0.0)).unwrap()];
        let r = interpolating_test_m1(&one, &[1], DEFAULT_INTERPOLATING_FLOOR, 50.0).unwrap();
        assert_eq!(r.curve, alloc::vec![(1, 1.0, 1.0)]);

        let geo: Vec<HalfPlanePoint> = geometric(12).points().to_vec();
        let r = interpolating_test_m1(&geo, &[4, 8, 12], DEFAULT_INTERPOLATING_FLOOR, 50.0).unwrap();
        assert!(r.interpolating);
        assert!(r.curve.windows(2).all(|w| w[1].1 <= w[0].1 && w[1].1 > 0.0));
        assert!(r.carleson.is_carleson && r.separation.satisfied);

        let near: Vec<HalfPlanePoint> = (1..=8)
            .map(|j| HalfPlanePoint::new(c(1.0 + j as f64 * 1e-6, 0.0)).unwrap())
            .collect();
        let r = interpolating_test_m1(&near, &[8], DEFAULT_INTERPOLATING_FLOOR, 50.0).unwrap();
        assert!(r.curve[0].1 < 1e-6 && !r.interpolating);

        let dup = [one[0], one[0]];
        assert_eq!(
            interpolating_test_m1(&dup, &[2], 1e-6, 50.0),
            Err(Error::DuplicatePoint { first: 0, second: 1 })
        );
    }

    #[test]
    fn theorem_check_geometric_passes() {
        let spec = geometric(8);
        let r = full_theorem_check(&spec, &VectorSet::canonical(&spec), &ConditionConfig::default()).unwrap();
        assert!(r.structural_verdict && r.numerical_frame && r.agreement);
        assert!(r.frame_bounds.lower > 0.0);
    }

    #[test]
    fn theorem_check_duplicate_fails_and_agrees() {
        let spec = Spectrum::new(&[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]).unwrap();
        let r = full_theorem_check(&spec, &VectorSet::canonical(&spec), &ConditionConfig::default()).unwrap();
        assert!(!r.separation.satisfied && !r.structural_verdict);
        assert!(r.frame_bounds.lower <= 1e-12 * r.frame_bounds.upper);
        assert!(r.agreement);
    }

    #[test]
    fn theorem_check_unbounded_d() {
        let bounds: Vec<f64> = [4usize, 8, 16]
            .iter()
            .map(|&n| {
                let spec = geometric(n);
                let row: Vec<C64> = (0..n)
                    .map(|j| c((j + 1) as f64 * spec.lambda(j).re.sqrt(), 0.0))
                    .collect();
                let g = VectorSet::from_rows(&[row], VectorKind::ContinuousG).unwrap();
                let r = full_theorem_check(&spec, &g, &ConditionConfig::default()).unwrap();
                if n == 16 {
                    assert!(!r.structural_verdict && !r.c_bound_ok);
                }
                r.factorization.c_bound
            })
            .collect();
        assert_eq!(bounds, alloc::vec![4.0, 8.0, 16.0]);
    }
}
