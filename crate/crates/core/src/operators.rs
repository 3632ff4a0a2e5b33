//! The evolution model: a diagonal operator `A e_j = -λ_j e_j` with every
//! `λ_j` in the open right half plane, its semigroup and discrete powers, and
//! the change of coordinates for Riesz-basis (non-orthogonal) eigenvectors.
//!
//! Sign convention used throughout the crate: [`Spectrum`] stores `λ_j`
//! (not the eigenvalues `-λ_j` of `A`) and `e^{tA}` multiplies coordinate `j`
//! by `e^{-t λ_j}`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::compensated::expm1;
use crate::error::{Error, Result};
use crate::hardy::{DiscPoint, HalfPlanePoint};
use crate::linalg::{hermitian_eigenvalues, CMatrix, Lu};
use crate::C64;

/// Produces `λ_j` for any 1-based index `j`, so truncations of one infinite
/// sequence can be taken at several `N`.
pub trait SpectrumGenerator {
    fn eigenvalue(&self, j: usize) -> C64;
}

impl<F: Fn(usize) -> C64> SpectrumGenerator for F {
    fn eigenvalue(&self, j: usize) -> C64 {
        self(j)
    }
}

/// Truncated spectrum `{λ_1, ..., λ_N}`; repeated values are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    lambdas: Vec<HalfPlanePoint>,
}

impl Spectrum {
    pub fn new(values: &[C64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("spectrum needs N >= 1".into()));
        }
        let lambdas = values
            .iter()
            .enumerate()
            .map(|(index, &z)| {
                HalfPlanePoint::new(z).map_err(|_| Error::DomainViolation {
                    index,
                    invariant: "Re(λ) > 0",
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Spectrum { lambdas })
    }

    /// `λ_1, ..., λ_n` from a generator.
    pub fn generate<G: SpectrumGenerator + ?Sized>(generator: &G, n: usize) -> Result<Self> {
        let values: Vec<C64> = (1..=n).map(|j| generator.eigenvalue(j)).collect();
        Self::new(&values)
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn points(&self) -> &[HalfPlanePoint] {
        &self.lambdas
    }

    pub fn values(&self) -> Vec<C64> {
        self.lambdas.iter().map(HalfPlanePoint::value).collect()
    }

    pub fn lambda(&self, j: usize) -> C64 {
        self.lambdas[j].value()
    }

    /// `η_j = h(λ_j)`, the eigenvalues of `h(A)` inside the unit disc.
    pub fn etas(&self) -> Vec<DiscPoint> {
        self.lambdas.iter().map(|&l| DiscPoint::from_half_plane(l)).collect()
    }

    /// `min_j Re λ_j`.
    pub fn margin(&self) -> f64 {
        self.lambdas.iter().map(|l| l.value().re).fold(f64::INFINITY, f64::min)
    }

    /// `max_j |λ_j|`, the operator norm of `A`.
    pub fn max_modulus(&self) -> f64 {
        self.lambdas.iter().map(|l| l.value().norm()).fold(0.0, f64::max)
    }

    /// The first `n` eigenvalues.
    pub fn truncate(&self, n: usize) -> Result<Spectrum> {
        if n == 0 || n > self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        Ok(Spectrum {
            lambdas: self.lambdas[..n].to_vec(),
        })
    }

    fn check_len(&self, v: &[C64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter("time must be finite and >= 0".into()));
    }
    Ok(())
}

/// `e^{tA} v = (e^{-t λ_j} v_j)_j`.
pub fn semigroup_apply(spec: &Spectrum, t: f64, v: &[C64]) -> Result<Vec<C64>> {
    spec.check_len(v)?;
    check_time(t)?;
    Ok(spec
        .points()
        .iter()
        .zip(v)
        .map(|(l, x)| (-l.value() * t).exp() * x)
        .collect())
}

/// `A^n v = (η_j^n v_j)_j` for a diagonal operator with eigenvalues `η_j`.
pub fn power_apply(etas: &[DiscPoint], n: u32, v: &[C64]) -> Result<Vec<C64>> {
    if v.len() != etas.len() {
        return Err(Error::DimensionMismatch {
            expected: etas.len(),
            found: v.len(),
        });
    }
    Ok(etas.iter().zip(v).map(|(e, x)| e.value().powu(n) * x).collect())
}

/// Exponential-stability data: `||e^{tA}|| <= M e^{ω t}` with `M = 1` for
/// diagonal `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    /// Growth bound `ω = -margin`.
    pub omega: f64,
    pub stable: bool,
    /// `inf_j Re λ_j`.
    pub margin: f64,
}

impl StabilityReport {
    /// Constant `M` in the growth bound; 1 for normal operators.
    pub const M: f64 = 1.0;
}

pub fn stability(spec: &Spectrum) -> StabilityReport {
    let margin = spec.margin();
    StabilityReport {
        omega: -margin,
        stable: margin > 0.0,
        margin,
    }
}

/// `||e^{tA} - I|| = max_j |e^{-t λ_j} - 1|`.
pub fn semigroup_gap_norm(spec: &Spectrum, t: f64) -> f64 {
    spec.points()
        .iter()
        .map(|l| expm1(-l.value() * t).norm())
        .fold(0.0, f64::max)
}

/// Monotone upper envelope `t ||A|| e^{t ||A||}` of [`semigroup_gap_norm`]
/// on `[0, t]`.
pub fn gap_norm_envelope(spec: &Spectrum, t: f64) -> f64 {
    let a = spec.max_modulus();
    t * a * (t * a).exp()
}

/// Condition-number ceiling for accepting a matrix as a Riesz basis.
pub const RIESZ_CONDITION_LIMIT: f64 = 1e8;

/// Invertible change of basis whose columns are the eigenvectors in ambient
/// coordinates.
#[derive(Debug, Clone)]
pub struct BasisChange {
    matrix: CMatrix,
    lu: Lu,
    condition_number: f64,
}

impl BasisChange {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let lu = Lu::new(&matrix)?;
        let sv2 = hermitian_eigenvalues(&matrix.gram())?;
        let lo = sv2.first().copied().unwrap_or(0.0);
        let hi = sv2.last().copied().unwrap_or(0.0);
        if lo <= 0.0 {
            return Err(Error::SingularBasis);
        }
        let condition_number = (hi / lo).sqrt();
        if !(condition_number < RIESZ_CONDITION_LIMIT) {
            return Err(Error::IllConditionedBasis {
                condition: condition_number,
                limit: RIESZ_CONDITION_LIMIT,
            });
        }
        Ok(BasisChange {
            matrix,
            lu,
            condition_number,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Ratio of extreme singular values.
    pub fn condition_number(&self) -> f64 {
        self.condition_number
    }

    /// Solves `B x = ambient`.
    pub fn to_eigen_coords(&self, ambient: &[C64]) -> Result<Vec<C64>> {
        self.lu.solve(ambient)
    }

    /// `B coords`.
    pub fn from_eigen_coords(&self, coords: &[C64]) -> Result<Vec<C64>> {
        self.matrix.mul_vec(coords)
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        self.lu.inverse()
    }
}
