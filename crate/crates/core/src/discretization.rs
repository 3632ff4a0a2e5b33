//! Time grids and their frame properties.
//!
//! Discrete grids use plain counting measure. Comparisons with the
//! continuous (Lebesgue) energy multiply the discrete bounds by the step
//! explicitly.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;
#[allow(unused_imports)]
use num_traits::Float;

use crate::compensated::expm1;
use crate::error::{Error, Result};
use crate::frame::{
    frame_bounds, hermitian_from_upper, quadform_continuous, FrameBounds, QuadForm, QuadSource, VectorKind, VectorSet,
};
use crate::operators::{stability, Spectrum, SpectrumGenerator, StabilityReport};
use crate::C64;

/// Sampling instants.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeGrid {
    /// `0 = t_1 < t_2 < ... < t_n`.
    Finite { points: Vec<f64> },
    /// `{0, m, 2m, ...}`; `cap` is the number of instants used whenever a
    /// finite realization is needed (sample synthesis, direct sums).
    Uniform { step: f64, cap: Option<usize> },
}

impl TimeGrid {
    pub fn finite(points: Vec<f64>) -> Result<Self> {
        match points.first() {
            None => return Err(Error::InvalidParameter("time grid needs at least one point".into())),
            Some(&t0) if t0 != 0.0 => {
                return Err(Error::DomainViolation {
                    index: 0,
                    invariant: "grid starts at t = 0",
                });
            }
            _ => {}
        }
        for (i, w) in points.windows(2).enumerate() {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(Error::DomainViolation {
                    index: i + 1,
                    invariant: "grid strictly increasing",
                });
            }
        }
        Ok(TimeGrid::Finite { points })
    }

    pub fn uniform(step: f64, cap: Option<usize>) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidParameter(
                "uniform grid step must be finite and > 0".into(),
            ));
        }
        if cap == Some(0) {
            return Err(Error::InvalidParameter("uniform grid cap must be >= 1".into()));
        }
        Ok(TimeGrid::Uniform { step, cap })
    }

    /// Smallest gap; infinite for a one-point grid.
    pub fn delta0(&self) -> f64 {
        match self {
            TimeGrid::Finite { points } => points.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min),
            TimeGrid::Uniform { step, .. } => *step,
        }
    }

    /// Largest gap; zero for a one-point grid.
    pub fn mesh(&self) -> f64 {
        match self {
            TimeGrid::Finite { points } => points.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max),
            TimeGrid::Uniform { step, .. } => *step,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, TimeGrid::Uniform { .. })
    }

    /// Number of instants, `None` for an infinite grid.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        match self {
            TimeGrid::Finite { points } => Some(points.len()),
            TimeGrid::Uniform { .. } => None,
        }
    }

    /// Explicit instants: all points of a finite grid or the first `cap`
    /// points of a uniform one.
    pub fn realize(&self) -> Result<Vec<f64>> {
        match self {
            TimeGrid::Finite { points } => Ok(points.clone()),
            TimeGrid::Uniform { step, cap: Some(n) } => Ok((0..*n).map(|k| k as f64 * step).collect()),
            TimeGrid::Uniform { cap: None, .. } => Err(Error::InvalidParameter(
                "uniform grid needs a cap to be realized".into(),
            )),
        }
    }
}

fn check_g(spec: &Spectrum, g: &VectorSet) -> Result<()> {
    if g.kind() != VectorKind::ContinuousG {
        return Err(Error::InvalidParameter("sampling needs continuous_g vectors".into()));
    }
    if g.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: g.dim(),
        });
    }
    Ok(())
}

/// `M_jk = Σ_i g^i_j conj(g^i_k) w(λ_j + conj(λ_k))` for a scalar weight `w`.
fn weighted_form(spec: &Spectrum, g: &VectorSet, source: QuadSource, w: impl Fn(C64) -> C64) -> QuadForm {
    let lam = spec.values();
    let gm = g.coeffs();
    let matrix = hermitian_from_upper(spec.dim(), |j, k| {
        let num: C64 = (0..g.count()).map(|i| gm[(i, j)] * gm[(i, k)].conj()).sum();
        num * w(lam[j] + lam[k].conj())
    });
    QuadForm { matrix, source }
}

/// Quadratic form of `Σ_i Σ_{t∈T} |<e^{tA} g^i, c>|^2`.
///
/// A uniform grid is summed to infinity in closed form,
/// `Σ_n e^{-n m s} = 1 / (1 - e^{-m s})`.
pub fn sampled_quadform(spec: &Spectrum, g: &VectorSet, grid: &TimeGrid) -> Result<QuadForm> {
    check_g(spec, g)?;
    match grid {
        TimeGrid::Finite { points } => Ok(weighted_form(spec, g, QuadSource::Sampled, |s| {
            points.iter().map(|&t| (-s * t).exp()).sum()
        })),
        TimeGrid::Uniform { step, .. } => {
            let margin = spec.margin();
            if !(margin > 0.0) {
                return Err(Error::TailNotBounded { margin });
            }
            let m = *step;
            Ok(weighted_form(spec, g, QuadSource::Sampled, |s| {
                -C64::new(1.0, 0.0) / expm1(-s * m)
            }))
        }
    }
}

/// Tail tolerance for direct summation over uniform grids.
pub const UNIFORM_TAIL_TOL: f64 = 1e-12;

/// Number of instants of the uniform grid with step `step` after which every
/// entry's omitted tail is at most `tol`: each term is bounded by
/// `B q^n` with `q = e^{-2 m μ}` and `B = max_j Σ_i |g^i_j|^2`.
pub fn uniform_cap(spec: &Spectrum, g: &VectorSet, step: f64, tol: f64) -> Result<usize> {
    check_g(spec, g)?;
    let margin = spec.margin();
    if !(margin > 0.0) {
        return Err(Error::TailNotBounded { margin });
    }
    if !(step > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidParameter("step and tolerance must be > 0".into()));
    }
    let gm = g.coeffs();
    let b = (0..g.dim())
        .map(|j| (0..g.count()).map(|i| gm[(i, j)].norm_sqr()).sum::<f64>())
        .fold(0.0, f64::max);
    if b == 0.0 {
        return Ok(1);
    }
    let log_q = -2.0 * step * margin;
    let one_minus_q = -log_q.exp_m1();
    let n = ((tol * one_minus_q / b).ln() / log_q).ceil().max(1.0);
    if n > 1e8 {
        return Err(Error::InvalidParameter(
            "direct summation would need more than 1e8 instants".into(),
        ));
    }
    Ok(n as usize)
}

/// Direct summation of a uniform grid up to [`uniform_cap`]; a cross-check
/// for the closed form. Returns the form and the number of instants used.
pub fn sampled_quadform_direct(spec: &Spectrum, g: &VectorSet, step: f64, tol: f64) -> Result<(QuadForm, usize)> {
    let n = uniform_cap(spec, g, step, tol)?;
    let points: Vec<f64> = (0..n).map(|k| k as f64 * step).collect();
    let mut q = sampled_quadform(spec, g, &TimeGrid::Finite { points })?;
    q.source = QuadSource::Sampled;
    Ok((q, n))
}

/// Quadratic form of `Σ_i ∫_0^L |<e^{tA} g^i, c>|^2 dt`, exactly:
/// `∫_0^L e^{-t s} dt = (1 - e^{-L s}) / s`. `L = ∞` gives the full form.
pub fn finite_horizon_quadform(spec: &Spectrum, g: &VectorSet, horizon: f64) -> Result<QuadForm> {
    check_g(spec, g)?;
    if !(horizon > 0.0) {
        return Err(Error::InvalidParameter("horizon must be > 0".into()));
    }
    if horizon == f64::INFINITY {
        return quadform_continuous(spec, g);
    }
    Ok(weighted_form(spec, g, QuadSource::FiniteHorizon, |s| {
        -expm1(-s * horizon) / s
    }))
}

/// Constants behind a discretization certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateConstants {
    /// Bessel constant of the sampling vectors.
    pub k: f64,
    pub m: f64,
    pub omega: f64,
    /// Continuous lower and upper frame bounds.
    pub c: f64,
    pub upper: f64,
    /// `max_j |λ_j|`, the generator norm.
    pub lambda_max: f64,
}

/// Any grid `0 = t_1 < t_2 < ...` whose gaps lie in `[delta0, delta)` is a
/// frame with lower bound at least `guaranteed_lower`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretizationCertificate {
    pub delta: f64,
    pub delta0: f64,
    /// Bound on `||e^{sA} - I||` for `s <= delta`.
    pub epsilon: f64,
    /// Horizon of the certified grids; infinite for unbounded grids.
    pub horizon: f64,
    pub constants: CertificateConstants,
    /// `c / (2 delta)`.
    pub guaranteed_lower: f64,
}

fn certificate_lhs(k: f64, m: f64, omega: f64, delta: f64, delta0: f64, epsilon: f64) -> f64 {
    SQRT_2 * k * m * m * delta * epsilon / (-(omega * delta0).exp_m1())
}

fn envelope(lambda_max: f64, delta: f64) -> f64 {
    delta * lambda_max * (delta * lambda_max).exp()
}

impl DiscretizationCertificate {
    /// `√2 K M^2 δ ε / (1 - e^{ω δ0})`.
    pub fn lhs(&self) -> f64 {
        let c = &self.constants;
        certificate_lhs(c.k, c.m, c.omega, self.delta, self.delta0, self.epsilon)
    }

    /// Re-evaluates `lhs < c/2` and that `epsilon` dominates the gap-norm
    /// envelope at `delta`.
    pub fn holds(&self) -> bool {
        let c = &self.constants;
        self.delta > 0.0
            && self.delta0 > 0.0
            && self.delta0 <= self.delta
            && self.epsilon >= envelope(c.lambda_max, self.delta)
            && self.lhs() < c.c / 2.0
    }

    /// Whether a grid satisfies the certified gap constraints.
    pub fn admits(&self, grid: &TimeGrid) -> bool {
        match grid {
            TimeGrid::Finite { points } => {
                points.windows(2).all(|w| {
                    let gap = w[1] - w[0];
                    gap >= self.delta0 && gap < self.delta
                }) && points.last().is_some_and(|&t| t <= self.horizon)
            }
            TimeGrid::Uniform { step, .. } => *step >= self.delta0 && *step < self.delta,
        }
    }
}

const BISECTION_STEPS: usize = 200;

/// Largest step `δ` (up to bisection resolution) with
/// `√2 K M^2 δ ε(δ) / (1 - e^{ω δ/2}) < c/2`, where `ε(δ) = δ Λ e^{δ Λ}`
/// bounds `||e^{sA} - I||` on `[0, δ]` and `δ0 = δ/2`. The left side is
/// increasing in `δ`. The certificate is conservative.
pub fn search_delta(
    spec: &Spectrum,
    g: &VectorSet,
    bounds: &FrameBounds,
    bessel_k: f64,
) -> Result<DiscretizationCertificate> {
    check_g(spec, g)?;
    let c = bounds.lower;
    if !(c > 0.0) {
        return Err(Error::NoFeasibleDelta { lower: c });
    }
    let StabilityReport { omega, stable, .. } = stability(spec);
    if !stable {
        return Err(Error::InfeasibleStability { omega });
    }
    if !(bessel_k > 0.0) {
        return Err(Error::InvalidParameter("Bessel constant must be > 0".into()));
    }
    let m = StabilityReport::M;
    let lambda_max = spec.max_modulus();
    let lhs = |d: f64| certificate_lhs(bessel_k, m, omega, d, 0.5 * d, envelope(lambda_max, d));
    let target = 0.5 * c;

    let mut hi = 1.0;
    while lhs(hi) < target {
        hi *= 2.0;
        if hi > 1e6 {
            break;
        }
    }
    let mut lo = hi;
    while !(lhs(lo) < target) {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::NoFeasibleDelta { lower: c });
        }
    }
    if lo < hi {
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if lhs(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let delta = lo;
    let cert = DiscretizationCertificate {
        delta,
        delta0: 0.5 * delta,
        epsilon: envelope(lambda_max, delta),
        horizon: f64::INFINITY,
        constants: CertificateConstants {
            k: bessel_k,
            m,
            omega,
            c,
            upper: bounds.upper,
            lambda_max,
        },
        guaranteed_lower: c / (2.0 * delta),
    };
    debug_assert!(cert.holds());
    Ok(cert)
}

/// Default resolution of the horizon search.
pub const DEFAULT_HORIZON_STEP: f64 = 0.01;

/// Smallest horizon on the search grid with `c - C M e^{2 ω L} > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteHorizon {
    pub horizon: f64,
    /// `c - C M e^{2 ω L}`.
    pub guaranteed_lower: f64,
    pub step: f64,
}

pub fn finite_horizon(bounds: &FrameBounds, m: f64, omega: f64, step: f64) -> Result<FiniteHorizon> {
    if !(omega < 0.0) {
        return Err(Error::InfeasibleStability { omega });
    }
    let (c, upper) = (bounds.lower, bounds.upper);
    if !(c > 0.0) {
        return Err(Error::NoFeasibleDelta { lower: c });
    }
    if !(step > 0.0) || !(m > 0.0) {
        return Err(Error::InvalidParameter("horizon step and M must be > 0".into()));
    }
    let guarantee = |l: f64| c - upper * m * (2.0 * omega * l).exp();
    let ratio = upper * m / c;
    let mut k = if ratio <= 1.0 {
        1.0
    } else {
        ((ratio.ln() / (-2.0 * omega)) / step).floor().max(0.0) + 1.0
    };
    while !(guarantee(k * step) > 0.0) {
        k += 1.0;
    }
    let horizon = k * step;
    Ok(FiniteHorizon {
        horizon,
        guaranteed_lower: guarantee(horizon),
        step,
    })
}

/// Default relative band for Riemann comparisons.
pub const DEFAULT_RIEMANN_BAND: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct GridFrameReport {
    pub bounds: FrameBounds,
    /// Step of a uniform grid, used to scale the counting-measure bounds.
    pub step: Option<f64>,
    /// `(step * lower, step * upper)` for uniform grids.
    pub scaled: Option<(f64, f64)>,
    /// Relative deviations of the scaled bounds from the continuous ones.
    pub lower_deviation: Option<f64>,
    pub upper_deviation: Option<f64>,
    pub band: f64,
    /// Both scaled bounds within `band` of the continuous ones.
    pub riemann_consistent: Option<bool>,
    pub is_frame: bool,
}

/// Frame bounds of a grid-sampled system against the continuous bounds.
pub fn verify_grid_frame(
    spec: &Spectrum,
    g: &VectorSet,
    grid: &TimeGrid,
    continuous: &FrameBounds,
    band: f64,
) -> Result<GridFrameReport> {
    let bounds = frame_bounds(&sampled_quadform(spec, g, grid)?)?;
    let rel = |x: f64, reference: f64| {
        if reference == 0.0 {
            x.abs()
        } else {
            (x - reference).abs() / reference.abs()
        }
    };
    let (step, scaled, lower_deviation, upper_deviation, riemann_consistent) = match grid {
        TimeGrid::Uniform { step, .. } => {
            let sl = step * bounds.lower;
            let su = step * bounds.upper;
            let dl = rel(sl, continuous.lower);
            let du = rel(su, continuous.upper);
            (
                Some(*step),
                Some((sl, su)),
                Some(dl),
                Some(du),
                Some(dl <= band && du <= band),
            )
        }
        TimeGrid::Finite { .. } => (None, None, None, None, None),
    };
    Ok(GridFrameReport {
        is_frame: bounds.lower > 0.0,
        bounds,
        step,
        scaled,
        lower_deviation,
        upper_deviation,
        band,
        riemann_consistent,
    })
}

/// Which legs of "finite-horizon frame ⟺ finite-grid frame ⟺ exponential
/// stability" hold at this truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyVerdict {
    pub margin: f64,
    pub stable: bool,
    /// Horizon from [`finite_horizon`] when it exists.
    pub horizon: Option<f64>,
    /// Exact `[0, L]` lower bound.
    pub horizon_lower: Option<f64>,
    pub finite_horizon_frame: bool,
    /// Size of the uniform grid on `[0, L]` that was tested.
    pub grid_points: Option<usize>,
    pub grid_lower: Option<f64>,
    pub finite_grid_frame: bool,
    /// All three legs agree.
    pub consistent: bool,
    /// `(N, margin(N))` when a generator was supplied.
    pub margin_trend: Vec<(usize, f64)>,
}

const MAX_DICHOTOMY_POINTS: usize = 100_000;

/// Evaluates the three legs numerically. The finite-grid leg samples `[0, L]`
/// evenly with at least `max(4N, 16)` instants and a step of at most
/// `1 / max|λ_j|`, so every mode is resolved.
pub fn stability_dichotomy(
    spec: &Spectrum,
    g: &VectorSet,
    continuous: &FrameBounds,
    trend: Option<(&dyn SpectrumGenerator, &[usize])>,
) -> Result<DichotomyVerdict> {
    check_g(spec, g)?;
    let st = stability(spec);
    let mut verdict = DichotomyVerdict {
        margin: st.margin,
        stable: st.stable,
        horizon: None,
        horizon_lower: None,
        finite_horizon_frame: false,
        grid_points: None,
        grid_lower: None,
        finite_grid_frame: false,
        consistent: false,
        margin_trend: Vec::new(),
    };
    if st.stable && continuous.lower > 0.0 {
        let fh = finite_horizon(continuous, StabilityReport::M, st.omega, DEFAULT_HORIZON_STEP)?;
        let l = fh.horizon;
        let lower = frame_bounds(&finite_horizon_quadform(spec, g, l)?)?.lower;
        verdict.horizon = Some(l);
        verdict.horizon_lower = Some(lower);
        verdict.finite_horizon_frame = lower > 0.0;

        let min_points = (4 * spec.dim()).max(16);
        let step = (l / (min_points - 1) as f64).min(1.0 / spec.max_modulus());
        let n = ((l / step).ceil() as usize + 1).min(MAX_DICHOTOMY_POINTS);
        let points: Vec<f64> = (0..n).map(|k| l * k as f64 / (n - 1) as f64).collect();
        let grid_lower = frame_bounds(&sampled_quadform(spec, g, &TimeGrid::finite(points)?)?)?.lower;
        verdict.grid_points = Some(n);
        verdict.grid_lower = Some(grid_lower);
        verdict.finite_grid_frame = grid_lower > 0.0;
    }
    verdict.consistent =
        verdict.finite_horizon_frame == verdict.finite_grid_frame && verdict.finite_grid_frame == verdict.stable;
    if let Some((generator, ns)) = trend {
        for &n in ns {
            verdict
                .margin_trend
                .push((n, Spectrum::generate(generator, n)?.margin()));
        }
    }
    Ok(verdict)
}
