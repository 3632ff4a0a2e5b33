//! Error-free transformations for the few expressions that cancel badly near
//! the unit circle, chiefly `1 - z * conj(w)` for `z, w` close to the boundary.

use crate::C64;
#[allow(unused_imports)]
use num_traits::Float;

#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Running sum that keeps the rounding error of every addition.
#[derive(Default, Clone, Copy)]
pub(crate) struct CompSum {
    hi: f64,
    lo: f64,
}

impl CompSum {
    pub(crate) fn new(x: f64) -> Self {
        CompSum { hi: x, lo: 0.0 }
    }

    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        self.hi = s;
        self.lo += e;
    }

    #[inline]
    pub(crate) fn add_prod(&mut self, a: f64, b: f64) {
        let (p, e) = two_prod(a, b);
        self.add(p);
        self.lo += e;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.hi + self.lo
    }

    #[cfg(test)]
    pub(crate) fn parts(&self) -> (f64, f64) {
        two_sum(self.hi, self.lo)
    }
}

/// `1 - z * conj(w)` where `z = z_hi + z_lo` and `w = w_hi + w_lo` are
/// unevaluated sums. Accurate to a few ulps of the result.
pub(crate) fn one_minus_conj_product(z_hi: C64, z_lo: C64, w_hi: C64, w_lo: C64) -> C64 {
    // z * conj(w) = (a + ib)(c - id) = (ac + bd) + i(bc - ad)
    let (a, b, c, d) = (z_hi.re, z_hi.im, w_hi.re, w_hi.im);
    let cross_re = a * w_lo.re + z_lo.re * c + b * w_lo.im + z_lo.im * d;
    let cross_im = b * w_lo.re + z_lo.im * c - a * w_lo.im - z_lo.re * d;

    let mut re = CompSum::new(1.0);
    re.add_prod(-a, c);
    re.add_prod(-b, d);
    re.add(-cross_re);

    let mut im = CompSum::new(0.0);
    im.add_prod(-b, c);
    im.add_prod(a, d);
    im.add(-cross_im);

    C64::new(re.value(), im.value())
}

/// `(1 - z) / (1 + z)` returned as `hi + lo` with `lo` carrying the rounding
/// error of `hi`.
pub(crate) fn mobius_extended(z: C64) -> (C64, C64) {
    let (num_re, num_re_lo) = two_sum(1.0, -z.re);
    let (den_re, den_re_lo) = two_sum(1.0, z.re);
    let num = C64::new(num_re, -z.im);
    let den = C64::new(den_re, z.im);
    let hi = num / den;

    // residual r = (num + num_lo) - hi * (den + den_lo), evaluated exactly
    // up to second-order terms
    let mut r_re = CompSum::new(num_re);
    r_re.add(num_re_lo);
    r_re.add_prod(-hi.re, den.re);
    r_re.add_prod(hi.im, den.im);
    r_re.add(-hi.re * den_re_lo);

    let mut r_im = CompSum::new(-z.im);
    r_im.add_prod(-hi.re, den.im);
    r_im.add_prod(-hi.im, den.re);
    r_im.add(-hi.im * den_re_lo);

    let residual = C64::new(r_re.value(), r_im.value());
    (hi, residual / den)
}

/// `exp(z) - 1` without cancellation for small `|z|`.
pub(crate) fn expm1(z: C64) -> C64 {
    let em1 = z.re.exp_m1();
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    let cos_m1 = -2.0 * half * half;
    C64::new(em1 * c + cos_m1, (em1 + 1.0) * s)
}
