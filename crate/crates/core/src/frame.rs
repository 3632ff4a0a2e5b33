//! Closed-form sampling energies and frame bounds.
//!
//! For a test vector `c` (eigen-coordinates) the continuous energy
//! `Σ_i ∫_0^∞ |<e^{tA} g^i, c>|^2 dt` equals `c^* M c` with
//!
//! ```text
//! M_jk = Σ_i g^i_j conj(g^i_k) / (λ_j + conj(λ_k))
//! ```
//!
//! and the discrete energy `Σ_i Σ_{n>=0} |<B^n a^i, c>|^2` of a diagonal `B`
//! with eigenvalues `η_j` equals `c^* D c` with
//!
//! ```text
//! D_jk = Σ_i a^i_j conj(a^i_k) / (1 - η_j conj(η_k)).
//! ```
//!
//! Under `η_j = h(λ_j)` and `a^i_j = √2 g^i_j / (1 + λ_j)` the two matrices
//! coincide entry by entry, which [`cayley_residual`] measures.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hardy::DiscPoint;
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::operators::{BasisChange, Spectrum};
use crate::quadrature::adaptive_integrate;
use crate::C64;

/// Whether a vector table holds continuous-time generators `g^i` or discrete
/// orbit generators `a^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorKind {
    ContinuousG,
    DiscreteA,
}

/// `m x N` coefficient table, row `i` is vector `i` in eigen-coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSet {
    coeffs: CMatrix,
    kind: VectorKind,
}

impl VectorSet {
    pub fn new(coeffs: CMatrix, kind: VectorKind) -> Result<Self> {
        if coeffs.rows() == 0 || coeffs.cols() == 0 {
            return Err(Error::InvalidParameter("vector set needs m >= 1 and N >= 1".into()));
        }
        if let Some(pos) = coeffs
            .as_slice()
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::DomainViolation {
                index: pos,
                invariant: "finite vector coefficients",
            });
        }
        Ok(VectorSet { coeffs, kind })
    }

    pub fn from_rows(rows: &[Vec<C64>], kind: VectorKind) -> Result<Self> {
        Self::new(CMatrix::from_rows(rows)?, kind)
    }

    /// The single vector `g_j = sqrt(Re λ_j)`, for which the continuous
    /// energy is the normalized-kernel Gram form of `{λ_j}`.
    pub fn canonical(spec: &Spectrum) -> Self {
        let coeffs = CMatrix::from_fn(1, spec.dim(), |_, j| C64::new(spec.lambda(j).re.sqrt(), 0.0));
        VectorSet {
            coeffs,
            kind: VectorKind::ContinuousG,
        }
    }

    pub fn coeffs(&self) -> &CMatrix {
        &self.coeffs
    }

    pub fn kind(&self) -> VectorKind {
        self.kind
    }

    /// Number of vectors `m`.
    pub fn count(&self) -> usize {
        self.coeffs.rows()
    }

    /// Truncation dimension `N`.
    pub fn dim(&self) -> usize {
        self.coeffs.cols()
    }

    /// Keep the first `n` coordinates of every vector.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        let coeffs = CMatrix::from_fn(self.count(), n, |i, j| self.coeffs[(i, j)]);
        Ok(VectorSet {
            coeffs,
            kind: self.kind,
        })
    }

    /// Bessel constant `K` of the finite family: `Σ_i |<f, g^i>|^2 <= K ||f||^2`.
    pub fn bessel_constant(&self) -> Result<f64> {
        let outer = self.coeffs.mul(&self.coeffs.adjoint())?;
        Ok(hermitian_eigenvalues(&outer)?.last().copied().unwrap_or(0.0).max(0.0))
    }
}

/// Where a quadratic form came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadSource {
    Continuous,
    Discrete,
    /// Counting measure over an explicit time grid.
    Sampled,
    /// Lebesgue measure on a bounded window `[0, L]`.
    FiniteHorizon,
    /// Conjugated into ambient (non-eigen) coordinates.
    Ambient,
}

/// Hermitian positive semidefinite matrix `M` with energy `c^* M c`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadForm {
    pub matrix: CMatrix,
    pub source: QuadSource,
}

impl QuadForm {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Energy `c^* M c` of a test vector.
    pub fn value(&self, c: &[C64]) -> Result<f64> {
        self.matrix.quadratic_value(c)
    }
}

/// Builds a Hermitian matrix from its upper triangle.
pub(crate) fn hermitian_from_upper(n: usize, mut entry: impl FnMut(usize, usize) -> C64) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        let d = entry(j, j);
        m[(j, j)] = C64::new(d.re, 0.0);
        for k in (j + 1)..n {
            let v = entry(j, k);
            m[(j, k)] = v;
            m[(k, j)] = v.conj();
        }
    }
    m
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Quadratic form of `Σ_i ∫_0^∞ |<e^{tA} g^i, c>|^2 dt`.
pub fn quadform_continuous(spec: &Spectrum, g: &VectorSet) -> Result<QuadForm> {
    if g.kind() != VectorKind::ContinuousG {
        return Err(Error::InvalidParameter(
            "continuous quadratic form needs continuous_g vectors".into(),
        ));
    }
    check_dims(spec.dim(), g.dim())?;
    if let Some(index) = spec.points().iter().position(|l| !(l.value().re > 0.0)) {
        return Err(Error::BoundaryEigenvalue { index });
    }
    let lam = spec.values();
    let gm = g.coeffs();
    let matrix = hermitian_from_upper(spec.dim(), |j, k| {
        let num: C64 = (0..g.count()).map(|i| gm[(i, j)] * gm[(i, k)].conj()).sum();
        num / (lam[j] + lam[k].conj())
    });
    Ok(QuadForm {
        matrix,
        source: QuadSource::Continuous,
    })
}

/// Quadratic form of `Σ_i Σ_{n>=0} |<B^n a^i, c>|^2` for diagonal `B` with
/// eigenvalues `etas`.
pub fn quadform_discrete(etas: &[DiscPoint], a: &VectorSet) -> Result<QuadForm> {
    if a.kind() != VectorKind::DiscreteA {
        return Err(Error::InvalidParameter(
            "discrete quadratic form needs discrete_a vectors".into(),
        ));
    }
    check_dims(etas.len(), a.dim())?;
    if let Some(index) = etas.iter().position(|e| !(e.boundary_distance() > 0.0)) {
        return Err(Error::BoundaryEigenvalue { index });
    }
    let am = a.coeffs();
    let matrix = hermitian_from_upper(etas.len(), |j, k| {
        let num: C64 = (0..a.count()).map(|i| am[(i, j)] * am[(i, k)].conj()).sum();
        num / etas[j].one_minus_times_conj(&etas[k])
    });
    Ok(QuadForm {
        matrix,
        source: QuadSource::Discrete,
    })
}

/// Transports a continuous system to its discrete counterpart:
/// `η_j = h(λ_j)` and `a^i_j = √2 g^i_j / (1 + λ_j)`.
pub fn cayley_transform_vectors(spec: &Spectrum, g: &VectorSet) -> Result<(Vec<DiscPoint>, VectorSet)> {
    if g.kind() != VectorKind::ContinuousG {
        return Err(Error::InvalidParameter(
            "Cayley transform needs continuous_g vectors".into(),
        ));
    }
    check_dims(spec.dim(), g.dim())?;
    let lam = spec.values();
    let gm = g.coeffs();
    let coeffs = CMatrix::from_fn(g.count(), g.dim(), |i, j| {
        gm[(i, j)] * SQRT_2 / (C64::new(1.0, 0.0) + lam[j])
    });
    Ok((
        spec.etas(),
        VectorSet {
            coeffs,
            kind: VectorKind::DiscreteA,
        },
    ))
}

/// Largest entrywise relative difference `|x - y| / max(|x|, |y|)`.
pub fn cayley_residual(lhs: &QuadForm, rhs: &QuadForm) -> Result<f64> {
    check_dims(lhs.dim(), rhs.dim())?;
    Ok(lhs
        .matrix
        .as_slice()
        .iter()
        .zip(rhs.matrix.as_slice())
        .map(|(x, y)| {
            let scale = x.norm().max(y.norm());
            if scale == 0.0 {
                0.0
            } else {
                (x - y).norm() / scale
            }
        })
        .fold(0.0, f64::max))
}

/// Lower bounds below this fraction of the upper bound are flagged as
/// numerically zero.
pub const NUMERICAL_ZERO_RATIO: f64 = 1e-10;

/// Optimal frame constants of a truncated system: the extreme eigenvalues of
/// its quadratic form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    /// `max(smallest eigenvalue, 0)`.
    pub lower: f64,
    pub upper: f64,
    pub dimension: usize,
    /// Raw smallest eigenvalue, may be slightly negative from rounding.
    pub min_eigenvalue: f64,
    /// `lower < NUMERICAL_ZERO_RATIO * upper`.
    pub numerically_zero: bool,
}

impl FrameBounds {
    /// `lower > 0` and not numerically zero.
    pub fn is_frame(&self) -> bool {
        self.lower > 0.0 && !self.numerically_zero
    }

    pub fn condition(&self) -> f64 {
        if self.lower > 0.0 {
            self.upper / self.lower
        } else {
            f64::INFINITY
        }
    }
}

pub fn frame_bounds(q: &QuadForm) -> Result<FrameBounds> {
    let values = hermitian_eigenvalues(&q.matrix)?;
    let min_eigenvalue = values.first().copied().unwrap_or(0.0);
    let upper = values.last().copied().unwrap_or(0.0).max(0.0);
    let lower = min_eigenvalue.max(0.0);
    Ok(FrameBounds {
        lower,
        upper,
        dimension: q.dim(),
        min_eigenvalue,
        numerically_zero: lower <= NUMERICAL_ZERO_RATIO * upper,
    })
}

/// `B^{-*} q B^{-1}`: the form expressed in ambient coordinates when `q` is
/// written in the eigen-coordinates of the basis `B`. Frame bounds move by at
/// most a factor `cond(B)^2`.
pub fn riesz_basis_conjugate(q: &QuadForm, basis: &BasisChange) -> Result<QuadForm> {
    check_dims(q.dim(), basis.dim())?;
    let inv = basis.inverse()?;
    let m = inv.adjoint().mul(&q.matrix)?.mul(&inv)?;
    let matrix = hermitian_from_upper(m.rows(), |j, k| {
        if j == k {
            m[(j, j)]
        } else {
            0.5 * (m[(j, k)] + m[(k, j)].conj())
        }
    });
    Ok(QuadForm {
        matrix,
        source: QuadSource::Ambient,
    })
}

/// Options for [`oracle_continuous`].
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Integration horizon; derived from the tail bound when `None`.
    pub t_max: Option<f64>,
    pub tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            t_max: None,
            tol: 1e-10,
        }
    }
}

/// Quadrature evaluation of `Σ_i ∫_0^∞ |<e^{tA} g^i, c>|^2 dt`, independent of
/// the closed form. The integral is taken over `[0, T]` with panel tolerance
/// `tol`, and `T` is chosen so the analytic tail bound
/// `Σ_i ||g^i||^2 ||c||^2 e^{-2 μ T} / (2 μ)` (μ the spectral margin) is at most
/// `tol`; the result is within `2 tol` of the true value.
pub fn oracle_continuous(spec: &Spectrum, g: &VectorSet, c: &[C64], opts: OracleOptions) -> Result<f64> {
    check_dims(spec.dim(), g.dim())?;
    check_dims(spec.dim(), c.len())?;
    let margin = spec.margin();
    if !(margin > 0.0) {
        return Err(Error::TailNotBounded { margin });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter("oracle tolerance must be > 0".into()));
    }
    let c_norm2: f64 = c.iter().map(|x| x.norm_sqr()).sum();
    let g_norm2: f64 = g.coeffs().as_slice().iter().map(|x| x.norm_sqr()).sum();
    let bound = g_norm2 * c_norm2;
    if bound == 0.0 {
        return Ok(0.0);
    }
    let needed = (bound / (opts.tol * 2.0 * margin)).ln().max(0.0) / (2.0 * margin);
    let horizon = match opts.t_max {
        None => needed.max(1.0 / margin),
        Some(t) if t >= needed && t > 0.0 => t,
        Some(_) => {
            return Err(Error::InvalidParameter(
                "t_max too short for the requested tail tolerance".into(),
            ));
        }
    };

    let lam = spec.values();
    let gm = g.coeffs();
    // weights w_ij = g^i_j conj(c_j); <e^{tA} g^i, c> = Σ_j e^{-t λ_j} w_ij
    let weights: Vec<Vec<C64>> = (0..g.count())
        .map(|i| (0..spec.dim()).map(|j| gm[(i, j)] * c[j].conj()).collect())
        .collect();
    let integrand = |t: f64| {
        let decay: Vec<C64> = lam.iter().map(|l| (-l * t).exp()).collect();
        weights
            .iter()
            .map(|w| w.iter().zip(&decay).map(|(a, b)| a * b).sum::<C64>().norm_sqr())
            .sum::<f64>()
    };
    Ok(adaptive_integrate(integrand, 0.0, horizon, opts.tol)?.value)
}

const MAX_POWER_TERMS: f64 = 5e7;

/// Truncated power sum `Σ_i Σ_{n<n*} |<B^n a^i, c>|^2` with
/// `n* = ceil(log(tol (1 - r^2) / B) / log(r^2))`, `r = max |η_j|`,
/// `B = Σ_i (Σ_j |a^i_j| |c_j|)^2`; the omitted tail is at most `tol`.
pub fn oracle_discrete(etas: &[DiscPoint], a: &VectorSet, c: &[C64], tol: f64) -> Result<f64> {
    check_dims(etas.len(), a.dim())?;
    check_dims(etas.len(), c.len())?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("oracle tolerance must be > 0".into()));
    }
    let am = a.coeffs();
    let bound: f64 = (0..a.count())
        .map(|i| {
            let s: f64 = (0..a.dim()).map(|j| am[(i, j)].norm() * c[j].norm()).sum();
            s * s
        })
        .sum();
    if bound == 0.0 {
        return Ok(0.0);
    }
    let r = etas.iter().map(|e| e.value().norm()).fold(0.0, f64::max);
    if r >= 1.0 {
        let index = etas.iter().position(|e| e.value().norm() >= 1.0).unwrap_or(0);
        return Err(Error::BoundaryEigenvalue { index });
    }
    let terms = if r == 0.0 {
        1.0
    } else {
        let r2 = r * r;
        ((tol * (1.0 - r2) / bound).ln() / r2.ln()).ceil().max(1.0)
    };
    if terms > MAX_POWER_TERMS {
        return Err(Error::InvalidParameter("power-sum oracle needs too many terms".into()));
    }
    let terms = terms as usize;

    let mut state: Vec<Vec<C64>> = (0..a.count())
        .map(|i| (0..a.dim()).map(|j| am[(i, j)] * c[j].conj()).collect())
        .collect();
    let mut total = 0.0;
    for _ in 0..terms {
        for w in state.iter_mut() {
            total += w.iter().sum::<C64>().norm_sqr();
            for (x, e) in w.iter_mut().zip(etas) {
                *x *= e.value();
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }
    fn real_spec(v: &[f64]) -> Spectrum {
        Spectrum::new(&v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>()).unwrap()
    }
    fn gset(rows: &[&[f64]]) -> VectorSet {
        let r: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        VectorSet::from_rows(&r, VectorKind::ContinuousG).unwrap()
    }
    fn aset(rows: &[&[f64]]) -> VectorSet {
        let r: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        VectorSet::from_rows(&r, VectorKind::DiscreteA).unwrap()
    }
    fn etas(v: &[f64]) -> Vec<DiscPoint> {
        v.iter().map(|&x| DiscPoint::new(c(x, 0.0)).unwrap()).collect()
    }
    fn assert_matrix(m: &CMatrix, want: &[&[f64]], tol: f64) {
        for (j, row) in want.iter().enumerate() {
            for (k, &w) in row.iter().enumerate() {
                assert!(
                    (m[(j, k)] - c(w, 0.0)).norm() <= tol,
                    "entry ({j},{k}) = {:?}, want {w}",
                    m[(j, k)]
                );
            }
        }
    }

    #[test]
    fn continuous_examples() {
        let q = quadform_continuous(&real_spec(&[1.0]), &gset(&[&[1.0]])).unwrap();
        assert_matrix(&q.matrix, &[&[0.5]], 0.0);
        let q = quadform_continuous(&real_spec(&[1.0, 2.0]), &gset(&[&[1.0, 1.0]])).unwrap();
        assert_matrix(&q.matrix, &[&[0.5, 1.0 / 3.0], &[1.0 / 3.0, 0.25]], 1e-16);
        let q = quadform_continuous(&real_spec(&[1.0]), &gset(&[&[0.0]])).unwrap();
        assert_matrix(&q.matrix, &[&[0.0]], 0.0);
    }

    #[test]
    fn continuous_rejects_wrong_kind_and_dims() {
        assert!(quadform_continuous(&real_spec(&[1.0]), &aset(&[&[1.0]])).is_err());
        assert!(matches!(
            quadform_continuous(&real_spec(&[1.0, 2.0]), &gset(&[&[1.0]])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn discrete_examples() {
        let q = quadform_discrete(&etas(&[0.0]), &aset(&[&[1.0]])).unwrap();
        assert_matrix(&q.matrix, &[&[1.0]], 0.0);
        let q = quadform_discrete(&etas(&[0.5]), &aset(&[&[1.0]])).unwrap();
        assert_matrix(&q.matrix, &[&[4.0 / 3.0]], 1e-15);
        let q = quadform_discrete(&etas(&[0.5, -0.5]), &aset(&[&[1.0, 1.0]])).unwrap();
        assert_matrix(&q.matrix, &[&[4.0 / 3.0, 0.8], &[0.8, 4.0 / 3.0]], 1e-15);
    }

    #[test]
    fn cayley_examples() {
        let (e, a) = cayley_transform_vectors(&real_spec(&[1.0]), &gset(&[&[1.0]])).unwrap();
        assert_eq!(e[0].value(), c(0.0, 0.0));
        assert_relative_eq!(a.coeffs()[(0, 0)].re, SQRT_2 / 2.0, epsilon = 1e-16);
        assert_eq!(a.kind(), VectorKind::DiscreteA);
        let qd = quadform_discrete(&e, &a).unwrap();
        assert_relative_eq!(qd.matrix[(0, 0)].re, 0.5, epsilon = 1e-16);

        let (e, a) = cayley_transform_vectors(&real_spec(&[3.0]), &gset(&[&[1.0]])).unwrap();
        assert_relative_eq!(e[0].value().re, -0.5, epsilon = 1e-16);
        assert_relative_eq!(a.coeffs()[(0, 0)].re, SQRT_2 / 4.0, epsilon = 1e-16);
    }

    #[test]
    fn cayley_identity_on_small_complex_case() {
        let spec = Spectrum::new(&[c(0.001, 9.5), c(0.002, -9.9), c(5.0, 0.1)]).unwrap();
        let g = VectorSet::from_rows(
            &[
                vec![c(1.0, -2.0), c(0.3, 0.0), c(-1.0, 1.0)],
                vec![c(0.0, 1.0), c(2.0, 2.0), c(0.5, 0.0)],
            ],
            VectorKind::ContinuousG,
        )
        .unwrap();
        let qc = quadform_continuous(&spec, &g).unwrap();
        let (e, a) = cayley_transform_vectors(&spec, &g).unwrap();
        let qd = quadform_discrete(&e, &a).unwrap();
        assert!(cayley_residual(&qc, &qd).unwrap() < 1e-14);
    }

    #[test]
    fn frame_bounds_examples() {
        let q = |rows: &[&[f64]]| QuadForm {
            matrix: CMatrix::from_rows(
                &rows
                    .iter()
                    .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
                    .collect::<Vec<_>>(),
            )
            .unwrap(),
            source: QuadSource::Continuous,
        };
        let b = frame_bounds(&q(&[&[0.5]])).unwrap();
        assert_eq!((b.lower, b.upper), (0.5, 0.5));
        let b = frame_bounds(&q(&[&[4.0 / 3.0, 0.8], &[0.8, 4.0 / 3.0]])).unwrap();
        assert_relative_eq!(b.lower, 8.0 / 15.0, epsilon = 1e-15);
        assert_relative_eq!(b.upper, 32.0 / 15.0, epsilon = 1e-15);
        let b = frame_bounds(&q(&[&[0.0, 0.0], &[0.0, 0.0]])).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        assert!(b.numerically_zero && !b.is_frame());
    }

    #[test]
    fn duplicated_eigenvalue_single_vector_is_rank_deficient() {
        let q = quadform_continuous(&real_spec(&[1.0, 2.0, 2.0]), &gset(&[&[1.0, 0.7, 1.3]])).unwrap();
        let b = frame_bounds(&q).unwrap();
        assert!(b.lower <= 1e-12 * b.upper);
        assert!(b.numerically_zero);
    }

    #[test]
    fn continuous_oracle_examples() {
        let opts = OracleOptions {
            t_max: None,
            tol: 1e-10,
        };
        let v = oracle_continuous(&real_spec(&[1.0]), &gset(&[&[1.0]]), &[c(1.0, 0.0)], opts).unwrap();
        assert!((v - 0.5).abs() <= 1e-8);
        let v = oracle_continuous(&real_spec(&[1.0, 2.0]), &gset(&[&[1.0, 1.0]]), &[c(1.0, 0.0); 2], opts).unwrap();
        assert!((v - 17.0 / 12.0).abs() <= 2e-10);
        let v = oracle_continuous(&real_spec(&[1.0, 2.0]), &gset(&[&[1.0, 1.0]]), &[c(0.0, 0.0); 2], opts).unwrap();
        assert_eq!(v, 0.0);
        let short = OracleOptions {
            t_max: Some(1.0),
            tol: 1e-10,
        };
        assert!(oracle_continuous(&real_spec(&[1.0]), &gset(&[&[1.0]]), &[c(1.0, 0.0)], short).is_err());
    }

    #[test]
    fn discrete_oracle_examples() {
        let tol = 1e-12;
        let v = oracle_discrete(&etas(&[0.0]), &aset(&[&[1.0]]), &[c(1.0, 0.0)], tol).unwrap();
        assert_eq!(v, 1.0);
        let v = oracle_discrete(&etas(&[0.5]), &aset(&[&[1.0]]), &[c(1.0, 0.0)], tol).unwrap();
        assert!((v - 4.0 / 3.0).abs() <= tol);
        let v = oracle_discrete(&etas(&[0.5, -0.5]), &aset(&[&[1.0, 1.0]]), &[c(1.0, 0.0); 2], tol).unwrap();
        assert!((v - 64.0 / 15.0).abs() <= tol);
    }

    #[test]
    fn riesz_conjugate_examples() {
        let q = QuadForm {
            matrix: CMatrix::from_diagonal(&[c(1.0, 0.0)]),
            source: QuadSource::Continuous,
        };
        let id = BasisChange::new(CMatrix::identity(1)).unwrap();
        assert_eq!(riesz_basis_conjugate(&q, &id).unwrap().matrix, q.matrix);
        let d = BasisChange::new(CMatrix::from_diagonal(&[c(2.0, 0.0)])).unwrap();
        assert_relative_eq!(riesz_basis_conjugate(&q, &d).unwrap().matrix[(0, 0)].re, 0.25);

        // unitary basis (rotation with a phase) keeps the spectrum
        let s = 0.6;
        let co = 0.8;
        let u = CMatrix::from_rows(&[vec![c(co, 0.0), c(-s, 0.0)], vec![c(0.0, s), c(0.0, co)]]).unwrap();
        let ub = BasisChange::new(u).unwrap();
        let q = quadform_continuous(&real_spec(&[1.0, 2.0]), &gset(&[&[1.0, 0.5]])).unwrap();
        let before = frame_bounds(&q).unwrap();
        let after = frame_bounds(&riesz_basis_conjugate(&q, &ub).unwrap()).unwrap();
        assert!((before.lower - after.lower).abs() < 1e-12 && (before.upper - after.upper).abs() < 1e-12);
    }

    #[test]
    fn bessel_constant_is_top_eigenvalue() {
        let g = gset(&[&[1.0, 0.0], &[0.0, 2.0]]);
        assert_relative_eq!(g.bessel_constant().unwrap(), 4.0, epsilon = 1e-15);
        let g = gset(&[&[1.0, 1.0]]);
        assert_relative_eq!(g.bessel_constant().unwrap(), 2.0, epsilon = 1e-15);
    }
}
