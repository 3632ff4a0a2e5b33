//! Hardy-space kernels on the disc and the right half plane, the self-inverse
//! Cayley map between them, and pseudo-hyperbolic geometry.
//!
//! Kernels follow the usual normalizations:
//!
//! * disc: `k_s(z) = 1 / (1 - z conj(s))`, `||k_s||^2 = 1 / (1 - |s|^2)`;
//! * half plane: `k_s(z) = 1 / (2π (z + conj(s)))`, `||k_s||^2 = 1 / (4π Re s)`.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::compensated::{mobius_extended, one_minus_conj_product};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `h(z) = (1 - z) / (1 + z)`. Maps the disc onto the right half plane and is
/// its own inverse.
pub fn mobius_h(z: C64) -> Result<C64> {
    if !is_finite(z) {
        return Err(Error::DomainViolation {
            index: 0,
            invariant: "finite complex point",
        });
    }
    if z == C64::new(-1.0, 0.0) {
        return Err(Error::PoleAtMinusOne);
    }
    Ok((C64::new(1.0, 0.0) - z) / (C64::new(1.0, 0.0) + z))
}

/// A point of the open unit disc.
///
/// Points produced by the Cayley map carry a second, tiny component holding
/// the rounding error of the leading one; expressions such as
/// `1 - z conj(w)` use it so they stay accurate near the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint {
    value: C64,
    low: C64,
}

impl DiscPoint {
    /// Strict membership `|z| < 1`, no tolerance.
    pub fn new(z: C64) -> Result<Self> {
        if !is_finite(z) || z.norm_sqr() >= 1.0 {
            return Err(Error::DomainViolation {
                index: 0,
                invariant: "|z| < 1",
            });
        }
        Ok(DiscPoint { value: z, low: ZERO })
    }

    /// `h(λ)` for a half-plane point, computed in extended precision.
    pub fn from_half_plane(lambda: HalfPlanePoint) -> Self {
        let (hi, lo) = mobius_extended(lambda.value());
        DiscPoint { value: hi, low: lo }
    }

    pub fn value(&self) -> C64 {
        self.value
    }

    /// `1 - |z|^2`, accurate near the boundary.
    pub fn boundary_distance(&self) -> f64 {
        one_minus_conj_product(self.value, self.low, self.value, self.low).re
    }

    /// `1 - self * conj(other)`.
    pub(crate) fn one_minus_times_conj(&self, other: &DiscPoint) -> C64 {
        one_minus_conj_product(self.value, self.low, other.value, other.low)
    }

    pub(crate) fn difference(&self, other: &DiscPoint) -> C64 {
        (self.value - other.value) + (self.low - other.low)
    }
}

/// A point of the open right half plane `Re z > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint(C64);

impl HalfPlanePoint {
    /// Strict membership `Re z > 0`, no tolerance.
    pub fn new(z: C64) -> Result<Self> {
        if !is_finite(z) || z.re <= 0.0 {
            return Err(Error::DomainViolation {
                index: 0,
                invariant: "Re(λ) > 0",
            });
        }
        Ok(HalfPlanePoint(z))
    }

    /// `h(η)` for a disc point.
    pub fn from_disc(eta: DiscPoint) -> Result<Self> {
        // 1 + η cannot vanish inside the disc
        let z = mobius_h(eta.value())?;
        HalfPlanePoint::new(z)
    }

    pub fn value(&self) -> C64 {
        self.0
    }
}

/// Reproducing kernel of H²(𝔻): `k_s(z) = 1 / (1 - z conj(s))`.
pub fn kernel_disc(s: DiscPoint, z: DiscPoint) -> C64 {
    C64::new(1.0, 0.0) / z.one_minus_times_conj(&s)
}

/// Reproducing kernel of H²(ℂ₊): `k_s(z) = 1 / (2π (z + conj(s)))`.
pub fn kernel_halfplane(s: HalfPlanePoint, z: HalfPlanePoint) -> C64 {
    C64::new(1.0, 0.0) / ((z.value() + s.value().conj()) * (2.0 * PI))
}

/// Coefficient `1 / (√π (1 + conj(s)))` relating the half-plane kernel at `s`
/// to the disc kernel at `h(s)` under the unitary pull-back to the disc.
pub fn kernel_transfer_coeff(s: HalfPlanePoint) -> C64 {
    C64::new(1.0, 0.0) / ((C64::new(1.0, 0.0) + s.value().conj()) * PI.sqrt())
}

/// Pseudo-hyperbolic distance `|z - w| / |1 - conj(z) w|`.
pub fn pseudo_hyperbolic(z: DiscPoint, w: DiscPoint) -> f64 {
    let num = z.difference(&w).norm();
    if num == 0.0 {
        return 0.0;
    }
    // |1 - conj(z) w| = |1 - w conj(z)|
    (num / w.one_minus_times_conj(&z).norm()).min(1.0)
}

/// Which Hardy space a Gram matrix lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardySpace {
    Disc,
    HalfPlane,
}

/// Gram matrix of reproducing kernels, `entries[j][k] = <k_{p_k}, k_{p_j}>`.
#[derive(Debug, Clone)]
pub struct KernelGram {
    pub entries: CMatrix,
    pub space: HardySpace,
}

pub fn gram_disc(points: &[DiscPoint]) -> Result<KernelGram> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("gram needs at least one point".into()));
    }
    let entries = CMatrix::from_fn(points.len(), points.len(), |j, k| kernel_disc(points[k], points[j]));
    Ok(KernelGram {
        entries,
        space: HardySpace::Disc,
    })
}

pub fn gram_halfplane(points: &[HalfPlanePoint]) -> Result<KernelGram> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("gram needs at least one point".into()));
    }
    let entries = CMatrix::from_fn(points.len(), points.len(), |j, k| {
        kernel_halfplane(points[k], points[j])
    });
    Ok(KernelGram {
        entries,
        space: HardySpace::HalfPlane,
    })
}

/// Gram matrix from raw complex points, validating domain membership.
pub fn gram(space: HardySpace, points: &[C64]) -> Result<KernelGram> {
    let tag = |index: usize, e: Error| match e {
        Error::DomainViolation { invariant, .. } => Error::DomainViolation { index, invariant },
        other => other,
    };
    match space {
        HardySpace::Disc => {
            let pts = points
                .iter()
                .enumerate()
                .map(|(i, &z)| DiscPoint::new(z).map_err(|e| tag(i, e)))
                .collect::<Result<Vec<_>>>()?;
            gram_disc(&pts)
        }
        HardySpace::HalfPlane => {
            let pts = points
                .iter()
                .enumerate()
                .map(|(i, &z)| HalfPlanePoint::new(z).map_err(|e| tag(i, e)))
                .collect::<Result<Vec<_>>>()?;
            gram_halfplane(&pts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }
    fn disc(re: f64, im: f64) -> DiscPoint {
        DiscPoint::new(c(re, im)).unwrap()
    }
    fn half(re: f64, im: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(c(re, im)).unwrap()
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius_h(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(mobius_h(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        let hi = mobius_h(c(0.0, 1.0)).unwrap();
        assert!((hi - c(0.0, -1.0)).norm() < 1e-16);
        assert_eq!(mobius_h(c(-1.0, 0.0)), Err(Error::PoleAtMinusOne));
    }

    #[test]
    fn disc_kernel_examples() {
        assert_eq!(kernel_disc(disc(0.0, 0.0), disc(0.5, 0.0)), c(1.0, 0.0));
        assert_relative_eq!(
            kernel_disc(disc(0.5, 0.0), disc(0.5, 0.0)).re,
            4.0 / 3.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            kernel_disc(disc(0.9, 0.0), disc(0.9, 0.0)).re,
            5.263_157_894_736_842,
            epsilon = 1e-14
        );
    }

    #[test]
    fn halfplane_kernel_examples() {
        assert_relative_eq!(
            kernel_halfplane(half(1.0, 0.0), half(1.0, 0.0)).re,
            1.0 / (4.0 * PI),
            epsilon = 1e-17
        );
        assert_relative_eq!(
            kernel_halfplane(half(1.0, 0.0), half(3.0, 0.0)).re,
            1.0 / (8.0 * PI),
            epsilon = 1e-17
        );
        let k = kernel_halfplane(half(1.0, 1.0), half(2.0, -1.0));
        let want = c(1.0, 0.0) / (c(3.0, -2.0) * (2.0 * PI));
        assert!((k - want).norm() < 1e-17);
    }

    #[test]
    fn transfer_coeff_examples() {
        let k = kernel_transfer_coeff(half(1.0, 0.0));
        assert_relative_eq!(k.re, 1.0 / (2.0 * PI.sqrt()), epsilon = 1e-16);
        assert_eq!(k.im, 0.0);
        let k = kernel_transfer_coeff(half(1.0, 0.5));
        let want = c(1.0, 0.0) / (c(2.0, -0.5) * PI.sqrt());
        assert!((k - want).norm() < 1e-16);
    }

    #[test]
    fn pseudo_hyperbolic_examples() {
        assert_eq!(pseudo_hyperbolic(disc(0.3, 0.2), disc(0.3, 0.2)), 0.0);
        assert_relative_eq!(pseudo_hyperbolic(disc(0.0, 0.0), disc(0.5, 0.0)), 0.5, epsilon = 1e-16);
        assert_relative_eq!(pseudo_hyperbolic(disc(0.5, 0.0), disc(-0.5, 0.0)), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn gram_examples() {
        let g = gram(HardySpace::Disc, &[c(0.0, 0.0)]).unwrap();
        assert_eq!(g.entries[(0, 0)], c(1.0, 0.0));
        let g = gram(HardySpace::HalfPlane, &[c(1.0, 0.0)]).unwrap();
        assert_relative_eq!(g.entries[(0, 0)].re, 1.0 / (4.0 * PI), epsilon = 1e-17);
        let g = gram(HardySpace::Disc, &[c(0.5, 0.0), c(-0.5, 0.0)]).unwrap();
        let want = [[4.0 / 3.0, 4.0 / 5.0], [4.0 / 5.0, 4.0 / 3.0]];
        for (j, row) in want.iter().enumerate() {
            for (k, &w) in row.iter().enumerate() {
                assert_relative_eq!(g.entries[(j, k)].re, w, epsilon = 1e-15);
            }
        }
        assert_eq!(
            gram(HardySpace::Disc, &[c(0.1, 0.0), c(1.0, 0.0)]).unwrap_err(),
            Error::DomainViolation {
                index: 1,
                invariant: "|z| < 1"
            }
        );
        assert!(gram(HardySpace::HalfPlane, &[c(0.0, 1.0)]).is_err());
    }

    #[test]
    fn domain_is_strict() {
        assert!(DiscPoint::new(c(1.0, 0.0)).is_err());
        assert!(DiscPoint::new(c(0.0, -1.0)).is_err());
        assert!(HalfPlanePoint::new(c(0.0, 3.0)).is_err());
        assert!(HalfPlanePoint::new(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn boundary_distance_close_to_circle() {
        // λ = 1e-9: 1 - |h(λ)|^2 = 4 Re λ / |1 + λ|^2
        let lam = half(1e-9, 0.0);
        let eta = DiscPoint::from_half_plane(lam);
        let want = 4e-9 / (1.0 + 1e-9f64).powi(2);
        assert_relative_eq!(eta.boundary_distance(), want, max_relative = 1e-14);
    }
}
