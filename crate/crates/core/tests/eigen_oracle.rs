//! Cross-checks of the Jacobi eigen-solver and least squares against nalgebra.

use nalgebra::{Complex, DMatrix, DVector};
use proptest::prelude::*;

use semiframe_core::linalg::{hermitian_eigen, least_squares, CMatrix};
use semiframe_core::C64;

fn to_na(m: &CMatrix) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn random_hermitian(n: usize, raw: &[(f64, f64)]) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |i, j| C64::new(raw[n * i + j].0, raw[n * i + j].1));
    let mut h = a.clone();
    let ad = a.adjoint();
    h.add_assign(&ad).unwrap();
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_match_nalgebra(n in 1usize..12, raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 144)) {
        let h = random_hermitian(n, &raw);
        let ours = hermitian_eigen(&h).unwrap();
        let mut theirs: Vec<f64> = to_na(&h).symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        let scale = h.frobenius_norm().max(1.0);
        for (a, b) in ours.values.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-12 * scale, "{} vs {}", a, b);
        }
        // A V = V diag(values)
        let v = &ours.vectors;
        let av = h.mul(v).unwrap();
        for k in 0..n {
            for i in 0..n {
                prop_assert!((av[(i, k)] - v[(i, k)] * ours.values[k]).norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn least_squares_matches_nalgebra_svd(
        rows in 4usize..10,
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 40),
        rhs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 10),
    ) {
        let cols = 3;
        let s = CMatrix::from_fn(rows, cols, |i, j| C64::new(raw[cols * i + j].0, raw[cols * i + j].1));
        let y: Vec<C64> = rhs[..rows].iter().map(|&(a, b)| C64::new(a, b)).collect();
        let ours = least_squares(&s, &y).unwrap();
        let svd = to_na(&s).svd(true, true);
        prop_assume!(svd.singular_values.min() > 1e-3);
        let theirs = svd.solve(&DVector::from_vec(y.clone()), 1e-14).unwrap();
        for (a, b) in ours.solution.iter().zip(theirs.iter()) {
            prop_assert!((a - b).norm() <= 1e-9 * b.norm().max(1.0));
        }
    }
}

#[test]
fn graded_cauchy_matrix_relative_accuracy() {
    // canonical form for λ_j = 2^{-j}: M_jk = sqrt(λ_j λ_k) / (λ_j + λ_k)
    let n: usize = 16;
    let lam: Vec<f64> = (1..=n).map(|j| 0.5f64.powi(j as i32)).collect();
    let m = CMatrix::from_fn(n, n, |j, k| C64::new((lam[j] * lam[k]).sqrt() / (lam[j] + lam[k]), 0.0));
    let ours = hermitian_eigen(&m).unwrap().values;
    let na = DMatrix::from_fn(n, n, |j, k| m[(j, k)].re);
    let mut theirs: Vec<f64> = na.symmetric_eigenvalues().iter().copied().collect();
    theirs.sort_by(f64::total_cmp);
    // smallest eigenvalue (40-digit reference); both solvers must agree
    assert!((ours[0] - theirs[0]).abs() <= 1e-12);
    assert!(
        (ours[0] - 1.916770864675194e-5).abs() <= 1e-9 * 1.916770864675194e-5,
        "{}",
        ours[0]
    );
}
