//! Adaptive Gauss–Legendre quadrature on finite intervals.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of accepted per-panel error estimates.
    pub error_estimate: f64,
    pub panels: usize,
}

const RULE_POINTS: usize = 16;
const MAX_DEPTH: u32 = 48;
const MAX_PANELS: usize = 1 << 20;

/// Integrates `f` over `[a, b]` by recursive bisection. A panel is accepted
/// when the one-panel and two-half-panel estimates differ by at most its
/// share `tol * width / (b - a)` of the tolerance.
pub fn adaptive_integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Integral> {
    if !(b > a) || !(tol > 0.0) {
        return Err(Error::InvalidParameter("quadrature needs b > a and tol > 0".into()));
    }
    let rule = GaussLegendre::new(RULE_POINTS);
    let total = b - a;
    let mut out = Integral {
        value: 0.0,
        error_estimate: 0.0,
        panels: 0,
    };
    let whole = rule.integrate(&mut f, a, b);
    let mut stack: Vec<(f64, f64, f64, u32)> = Vec::new();
    stack.push((a, b, whole, 0));
    while let Some((lo, hi, coarse, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(&mut f, lo, mid);
        let right = rule.integrate(&mut f, mid, hi);
        let fine = left + right;
        let err = (fine - coarse).abs();
        let share = tol * (hi - lo) / total;
        if err <= share || depth >= MAX_DEPTH {
            if err > share {
                return Err(Error::InvalidParameter("quadrature did not reach tolerance".into()));
            }
            out.value += fine;
            out.error_estimate += err;
            out.panels += 1;
        } else {
            if stack.len() > MAX_PANELS {
                return Err(Error::InvalidParameter("quadrature panel budget exhausted".into()));
            }
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    Ok(out)
}
