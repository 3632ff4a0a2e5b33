//! Dense complex matrices and the handful of factorizations the library needs.
//!
//! The Hermitian eigen-solver is a cyclic Jacobi method with the
//! Demmel–Veselić relative threshold: an off-diagonal entry is annihilated
//! only while `|a_pq| > eps * sqrt(|a_pp a_qq|)`. For positive definite input
//! this yields eigenvalues with small *relative* error, which matters for the
//! badly graded Cauchy-type matrices produced by clustered spectra.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows; all rows must share one length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(CMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = out.row_mut(i);
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `A^* A`, always Hermitian positive semidefinite.
    pub fn gram(&self) -> CMatrix {
        let n = self.cols;
        let mut g = Self::zeros(n, n);
        for r in 0..self.rows {
            let row = self.row(r);
            for j in 0..n {
                let cj = row[j].conj();
                if cj == ZERO {
                    continue;
                }
                for k in j..n {
                    g[(j, k)] += cj * row[k];
                }
            }
        }
        for j in 0..n {
            g[(j, j)].im = 0.0;
            for k in (j + 1)..n {
                g[(k, j)] = g[(j, k)].conj();
            }
        }
        g
    }

    pub fn scale(&mut self, s: C64) {
        for x in &mut self.data {
            *x *= s;
        }
    }

    pub fn add_assign(&mut self, rhs: &CMatrix) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.data.len(),
                found: rhs.data.len(),
            });
        }
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        Ok(())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.norm()))
    }

    /// Largest `|a_jk - conj(a_kj)|`, or infinity for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for j in 0..self.rows {
            for k in j..self.cols {
                dev = dev.max((self[(j, k)] - self[(k, j)].conj()).norm());
            }
        }
        dev
    }

    /// `c^* A c` for Hermitian `A`; the (rounding-level) imaginary part is dropped.
    pub fn quadratic_value(&self, c: &[C64]) -> Result<f64> {
        let ac = self.mul_vec(c)?;
        Ok(c.iter().zip(&ac).map(|(x, y)| (x.conj() * y).re).sum())
    }

    pub fn principal_submatrix(&self, n: usize) -> CMatrix {
        Self::from_fn(n, n, |i, j| self[(i, j)])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

const MAX_SWEEPS: usize = 80;

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    jacobi(a, true)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    jacobi(a, false).map(|e| e.values)
}

fn jacobi(input: &CMatrix, want_vectors: bool) -> Result<HermitianEigen> {
    let n = input.rows;
    if !input.is_square() {
        return Err(Error::DimensionMismatch {
            expected: input.rows,
            found: input.cols,
        });
    }
    let scale = input.frobenius_norm();
    if !scale.is_finite() {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    let deviation = input.hermitian_deviation();
    if deviation > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian { deviation });
    }

    let mut a = input.clone();
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = if want_vectors {
        CMatrix::identity(n)
    } else {
        CMatrix::zeros(0, 0)
    };
    let abs_floor = f64::MIN_POSITIVE.max(1e-300 * scale);

    let mut converged = n <= 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::EigenSolveFailure { sweeps: sweep });
        }
        sweep += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let b = apq.norm();
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if b <= abs_floor || b <= f64::EPSILON * (app.abs() * aqq.abs()).sqrt() {
                    continue;
                }
                rotated = true;
                // phase so that the (p, q) entry becomes real and positive
                let phase = apq / b;
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ph_conj = phase.conj();

                // columns: A <- A U with U = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)] * ph_conj;
                    a[(k, p)] = akp * c - akq * s;
                    a[(k, q)] = akp * s + akq * c;
                }
                // rows: A <- U^* A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)] * phase;
                    a[(p, k)] = apk * c - aqk * s;
                    a[(q, k)] = apk * s + aqk * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;

                if want_vectors {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)] * ph_conj;
                        v[(k, p)] = vkp * c - vkq * s;
                        v[(k, q)] = vkp * s + vkq * c;
                    }
                }
            }
        }
        converged = !rotated;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = if want_vectors {
        CMatrix::from_fn(n, n, |r, c| v[(r, order[c])])
    } else {
        v
    };
    Ok(HermitianEigen { values, vectors })
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: a.rows,
                found: a.cols,
            });
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let tiny = f64::EPSILON * a.max_abs() * n as f64;
        for k in 0..n {
            let (piv, pmax) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].norm()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= tiny || pmax == 0.0 {
                return Err(Error::SingularBasis);
            }
            if piv != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = tmp;
                }
                perm.swap(k, piv);
            }
            let d = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let n = self.lu.rows;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        let n = self.lu.rows;
        let mut inv = CMatrix::zeros(n, n);
        let mut e = vec![ZERO; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = ZERO);
            e[j] = ONE;
            let col = self.solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}

/// Cholesky factor `L` with `A = L L^*`; `None` if `A` is not numerically
/// positive definite.
pub fn cholesky(a: &CMatrix) -> Option<CMatrix> {
    let n = a.rows;
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l[(j, j)] = C64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Some(l)
}

fn cholesky_solve(l: &CMatrix, b: &[C64]) -> Vec<C64> {
    let n = l.rows;
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let t = l[(i, k)] * y[k];
            y[i] -= t;
        }
        y[i] /= l[(i, i)];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let t = l[(k, i)].conj() * y[k];
            y[i] -= t;
        }
        y[i] /= l[(i, i)];
    }
    y
}

/// Which route a least-squares solve took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeastSquaresMethod {
    NormalEquations,
    PseudoInverse,
}

#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub solution: Vec<C64>,
    pub method: LeastSquaresMethod,
    /// Eigenvalues of the normal matrix `S^* S`, ascending.
    pub normal_eigenvalues: Vec<f64>,
}

impl LeastSquares {
    pub fn normal_condition(&self) -> f64 {
        condition_from_eigenvalues(&self.normal_eigenvalues)
    }
}

pub(crate) fn condition_from_eigenvalues(values: &[f64]) -> f64 {
    match (values.first(), values.last()) {
        (Some(&lo), Some(&hi)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Condition limit of the normal matrix above which the pseudo-inverse route is used.
pub const NORMAL_CONDITION_LIMIT: f64 = 1e10;

/// Minimizes `||S x - y||` via the normal equations, falling back to an
/// eigen-based pseudo-inverse when the normal matrix is badly conditioned.
pub fn least_squares(s: &CMatrix, y: &[C64]) -> Result<LeastSquares> {
    if y.len() != s.rows {
        return Err(Error::DimensionMismatch {
            expected: s.rows,
            found: y.len(),
        });
    }
    let normal = s.gram();
    let rhs: Vec<C64> = (0..s.cols)
        .map(|j| (0..s.rows).map(|i| s[(i, j)].conj() * y[i]).sum())
        .collect();
    let eig = hermitian_eigen(&normal)?;
    let cond = condition_from_eigenvalues(&eig.values);

    if cond <= NORMAL_CONDITION_LIMIT {
        if let Some(l) = cholesky(&normal) {
            return Ok(LeastSquares {
                solution: cholesky_solve(&l, &rhs),
                method: LeastSquaresMethod::NormalEquations,
                normal_eigenvalues: eig.values,
            });
        }
    }

    // x = V diag(1/mu) V^* S^* y over eigenvalues above the rank cutoff
    let top = eig.values.last().copied().unwrap_or(0.0);
    let cutoff = top * f64::EPSILON * s.cols.max(s.rows) as f64;
    let n = s.cols;
    let mut x = vec![ZERO; n];
    for (k, &mu) in eig.values.iter().enumerate() {
        if mu <= cutoff {
            continue;
        }
        let coef: C64 = (0..n).map(|i| eig.vectors[(i, k)].conj() * rhs[i]).sum::<C64>() / mu;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += eig.vectors[(i, k)] * coef;
        }
    }
    Ok(LeastSquares {
        solution: x,
        method: LeastSquaresMethod::PseudoInverse,
        normal_eigenvalues: eig.values,
    })
}

/// Smallest squared singular value of an `m x p` matrix with `p <= m`.
pub fn min_singular_value_sq(b: &CMatrix) -> Result<f64> {
    if b.cols > b.rows {
        return Ok(0.0);
    }
    let values = hermitian_eigenvalues(&b.gram())?;
    Ok(values.first().copied().unwrap_or(0.0).max(0.0))
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
