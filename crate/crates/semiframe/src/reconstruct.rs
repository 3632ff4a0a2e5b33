//! Signal recovery from noisy space-time samples.
//!
//! Samples are `y_{i,t} = <e^{tA} f, g^i> + e_{i,t}` in eigen-coordinates,
//! i.e. `y = S f + e` with `S_{(i,t),j} = e^{-t λ_j} conj(g^i_j)`. The
//! least-squares estimate satisfies `||f̂ - f|| <= ||e|| / sqrt(c)` where `c`
//! is the smallest eigenvalue of `S^* S`.

use rand::Rng;
use rand_distr::StandardNormal;

use semiframe_core::discretization::{uniform_cap, TimeGrid, UNIFORM_TAIL_TOL};
use semiframe_core::frame::NUMERICAL_ZERO_RATIO;
use semiframe_core::linalg::{hermitian_eigenvalues, least_squares, vec_norm, CMatrix, LeastSquaresMethod};
use semiframe_core::{Error as CoreError, Spectrum, VectorSet, C64};

use crate::error::RunResult;
use crate::report::ReconstructionRow;

/// Sampled analysis operator, one row per `(vector i, instant t)` with the
/// instants varying fastest.
pub fn analysis_matrix(spec: &Spectrum, g: &VectorSet, times: &[f64]) -> CMatrix {
    let lam = spec.values();
    let gm = g.coeffs();
    let nt = times.len();
    CMatrix::from_fn(g.count() * nt, spec.dim(), |row, j| {
        let (i, t) = (row / nt, times[row % nt]);
        (-lam[j] * t).exp() * gm[(i, j)].conj()
    })
}

/// Instants used for synthesis: a finite grid as given, a capped uniform grid
/// up to its cap, an uncapped uniform grid up to where its tail drops below
/// `1e-12`.
pub fn sample_times(spec: &Spectrum, g: &VectorSet, grid: &TimeGrid) -> RunResult<Vec<f64>> {
    match grid {
        TimeGrid::Uniform { step, cap: None } => {
            let n = uniform_cap(spec, g, *step, UNIFORM_TAIL_TOL)?;
            Ok((0..n).map(|k| k as f64 * step).collect())
        }
        other => Ok(other.realize()?),
    }
}

/// Circular complex Gaussian with `E|z|^2 = variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(s * re, s * im)
}

/// Runs the noise-free recovery and `trials` noisy recoveries of `f`.
pub fn reconstruct_trials<R: Rng + ?Sized>(
    spec: &Spectrum,
    g: &VectorSet,
    grid: &TimeGrid,
    f_true: &[C64],
    sigma: f64,
    trials: usize,
    rng: &mut R,
) -> RunResult<ReconstructionRow> {
    let times = sample_times(spec, g, grid)?;
    let s = analysis_matrix(spec, g, &times);
    let values = hermitian_eigenvalues(&s.gram())?;
    let c_est = values[0].max(0.0);
    let upper_est = values[values.len() - 1].max(0.0);
    if c_est <= NUMERICAL_ZERO_RATIO * upper_est {
        return Err(CoreError::NotAFrame {
            lower: c_est,
            upper: upper_est,
        }
        .into());
    }

    let clean = s.mul_vec(f_true)?;
    let fit = least_squares(&s, &clean)?;
    let f_norm = vec_norm(f_true);
    let rel = |x: &[C64]| {
        let diff: Vec<C64> = x.iter().zip(f_true).map(|(a, b)| a - b).collect();
        vec_norm(&diff) / f_norm
    };
    let noise_free_relative_error = rel(&fit.solution);
    let method = match fit.method {
        LeastSquaresMethod::NormalEquations => "normal_equations",
        LeastSquaresMethod::PseudoInverse => "pseudo_inverse",
    };

    let trials = if sigma > 0.0 { trials } else { 0 };
    let mut violations = 0;
    let mut max_bound_ratio = 0.0f64;
    let mut rel_sum = 0.0;
    let (mut last_error, mut last_bound) = (0.0, 0.0);
    for _ in 0..trials {
        let noise: Vec<C64> = (0..clean.len()).map(|_| complex_gaussian(rng, sigma * sigma)).collect();
        let y: Vec<C64> = clean.iter().zip(&noise).map(|(a, b)| a + b).collect();
        let est = least_squares(&s, &y)?;
        let diff: Vec<C64> = est.solution.iter().zip(f_true).map(|(a, b)| a - b).collect();
        let error = vec_norm(&diff);
        let bound = vec_norm(&noise) / c_est.sqrt();
        if error > bound {
            violations += 1;
        }
        max_bound_ratio = max_bound_ratio.max(if bound > 0.0 { error / bound } else { 0.0 });
        rel_sum += error / f_norm;
        last_error = error;
        last_bound = bound;
    }
    Ok(ReconstructionRow {
        n: spec.dim(),
        samples: times.len(),
        c_est,
        upper_est,
        method: method.to_string(),
        noise_free_relative_error,
        trials,
        violations,
        max_bound_ratio,
        mean_relative_error: if trials > 0 { rel_sum / trials as f64 } else { 0.0 },
        last_error,
        last_bound,
    })
}
