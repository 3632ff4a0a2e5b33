use proptest::prelude::*;

use semiframe_core::conditions::{carleson_test, default_radius_grid, factorize_vectors, separation_test};
use semiframe_core::discretization::{
    finite_horizon, finite_horizon_quadform, sampled_quadform, sampled_quadform_direct, search_delta, TimeGrid,
    DEFAULT_HORIZON_STEP, UNIFORM_TAIL_TOL,
};
use semiframe_core::frame::{
    cayley_residual, cayley_transform_vectors, frame_bounds, quadform_continuous, quadform_discrete, VectorKind,
};
use semiframe_core::hardy::{
    gram_disc, gram_halfplane, kernel_disc, kernel_halfplane, kernel_transfer_coeff, mobius_h,
};
use semiframe_core::linalg::{hermitian_eigenvalues, CMatrix};
use semiframe_core::operators::{
    gap_norm_envelope, power_apply, semigroup_apply, semigroup_gap_norm, stability, BasisChange,
};
use semiframe_core::{DiscPoint, HalfPlanePoint, Spectrum, VectorSet, C64};

fn lambda() -> impl Strategy<Value = C64> {
    (1e-3f64..10.0, -10.0f64..10.0).prop_map(|(re, im)| C64::new(re, im))
}

fn coeff() -> impl Strategy<Value = C64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| C64::new(re, im))
}

fn disc_point() -> impl Strategy<Value = C64> {
    (0.0f64..0.999, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

/// (spectrum, m x N coefficient rows)
fn system(max_n: usize, max_m: usize) -> impl Strategy<Value = (Vec<C64>, Vec<Vec<C64>>)> {
    (1..=max_n, 1..=max_m).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(lambda(), n),
            prop::collection::vec(prop::collection::vec(coeff(), n), m),
        )
    })
}

fn vector_set(rows: &[Vec<C64>]) -> VectorSet {
    VectorSet::from_rows(rows, VectorKind::ContinuousG).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mobius_is_an_involution(z in coeff()) {
        prop_assume!((z + 1.0).norm() > 1e-3);
        let back = mobius_h(mobius_h(z).unwrap()).unwrap();
        prop_assert!((back - z).norm() <= 1e-12 * z.norm().max(1.0) / (z + 1.0).norm().min(1.0));
    }

    #[test]
    fn mobius_swaps_disc_and_half_plane(l in lambda()) {
        let eta = DiscPoint::from_half_plane(HalfPlanePoint::new(l).unwrap());
        prop_assert!(eta.value().norm() < 1.0);
        let back = HalfPlanePoint::from_disc(eta).unwrap();
        prop_assert!((back.value() - l).norm() <= 1e-9 * l.norm().max(1.0));
    }

    #[test]
    fn disc_gram_is_hermitian_psd(points in prop::collection::vec(disc_point(), 1..8)) {
        let pts: Vec<DiscPoint> = points.iter().map(|&z| DiscPoint::new(z).unwrap()).collect();
        let g = gram_disc(&pts).unwrap().entries;
        prop_assert_eq!(g.hermitian_deviation(), 0.0);
        for j in 0..pts.len() {
            prop_assert!(g[(j, j)].re > 0.0);
        }
        let top = hermitian_eigenvalues(&g).unwrap();
        prop_assert!(top[0] >= -1e-10 * top[top.len() - 1]);
    }

    #[test]
    fn half_plane_gram_is_hermitian_psd(points in prop::collection::vec(lambda(), 1..8)) {
        let pts: Vec<HalfPlanePoint> = points.iter().map(|&z| HalfPlanePoint::new(z).unwrap()).collect();
        let g = gram_halfplane(&pts).unwrap().entries;
        prop_assert_eq!(g.hermitian_deviation(), 0.0);
        let top = hermitian_eigenvalues(&g).unwrap();
        prop_assert!(top[0] >= -1e-10 * top[top.len() - 1]);
    }

    #[test]
    fn kernel_transfer_identity(s in lambda(), z in lambda()) {
        let (s, z) = (HalfPlanePoint::new(s).unwrap(), HalfPlanePoint::new(z).unwrap());
        let lhs = kernel_halfplane(s, z);
        let rhs = kernel_transfer_coeff(s)
            * kernel_transfer_coeff(z).conj()
            * kernel_disc(DiscPoint::from_half_plane(s), DiscPoint::from_half_plane(z));
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
    }

    #[test]
    fn semigroup_law_and_decay(
        lams in prop::collection::vec(lambda(), 1..10),
        t in 0.0f64..3.0,
        s in 0.0f64..3.0,
    ) {
        let spec = Spectrum::new(&lams).unwrap();
        let v: Vec<C64> = (0..lams.len()).map(|k| C64::new(1.0 + k as f64, -0.5)).collect();
        let once = semigroup_apply(&spec, t + s, &v).unwrap();
        let twice = semigroup_apply(&spec, t, &semigroup_apply(&spec, s, &v).unwrap()).unwrap();
        for (a, b) in once.iter().zip(&twice) {
            prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1e-300) + 1e-300);
        }
        let norm = |x: &[C64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let margin = stability(&spec).margin;
        prop_assert!(norm(&once) <= (-(t + s) * margin).exp() * norm(&v) * (1.0 + 1e-14));
        prop_assert!(semigroup_gap_norm(&spec, t) <= gap_norm_envelope(&spec, t) * (1.0 + 1e-14));
    }

    #[test]
    fn cayley_eigenvalues_stay_in_disc(lams in prop::collection::vec(lambda(), 1..10)) {
        let spec = Spectrum::new(&lams).unwrap();
        let etas = spec.etas();
        prop_assert!(etas.iter().all(|e| e.value().norm() < 1.0));
        let v = vec![C64::new(1.0, 0.0); lams.len()];
        let p = power_apply(&etas, 50, &v).unwrap();
        prop_assert!(p.iter().all(|z| z.norm() < 1.0));
    }

    #[test]
    fn cayley_equivalence((lams, rows) in system(16, 3)) {
        let spec = Spectrum::new(&lams).unwrap();
        let g = vector_set(&rows);
        let qc = quadform_continuous(&spec, &g).unwrap();
        let (etas, a) = cayley_transform_vectors(&spec, &g).unwrap();
        let qd = quadform_discrete(&etas, &a).unwrap();
        prop_assert!(cayley_residual(&qc, &qd).unwrap() <= 1e-12);
    }

    #[test]
    fn quadforms_are_hermitian_psd((lams, rows) in system(10, 3)) {
        let spec = Spectrum::new(&lams).unwrap();
        let q = quadform_continuous(&spec, &vector_set(&rows)).unwrap();
        prop_assert_eq!(q.matrix.hermitian_deviation(), 0.0);
        let b = frame_bounds(&q).unwrap();
        prop_assert!(b.min_eigenvalue >= -1e-12 * b.upper);
    }

    #[test]
    fn uniform_closed_form_matches_direct_sum((lams, rows) in system(5, 2), step in 0.2f64..2.0) {
        let lams: Vec<C64> = lams.iter().map(|l| C64::new(l.re.max(0.2), l.im)).collect();
        let spec = Spectrum::new(&lams).unwrap();
        let g = vector_set(&rows);
        let closed = sampled_quadform(&spec, &g, &TimeGrid::uniform(step, None).unwrap()).unwrap();
        let (direct, _) = sampled_quadform_direct(&spec, &g, step, UNIFORM_TAIL_TOL).unwrap();
        for (x, y) in closed.matrix.as_slice().iter().zip(direct.matrix.as_slice()) {
            prop_assert!((x - y).norm() <= 1e-10 * x.norm().max(1.0));
        }
    }

    #[test]
    fn rank_obstruction(lams in prop::collection::vec(lambda(), 4..10), points in 1usize..3) {
        let spec = Spectrum::new(&lams).unwrap();
        let g = VectorSet::canonical(&spec);
        prop_assume!(points < spec.dim());
        let grid = TimeGrid::finite((0..points).map(|k| 0.3 * k as f64).collect()).unwrap();
        let b = frame_bounds(&sampled_quadform(&spec, &g, &grid).unwrap()).unwrap();
        prop_assert!(b.lower <= 1e-12 * b.upper);
    }

    #[test]
    fn finite_horizon_guarantee(n in 1usize..6) {
        let spec = Spectrum::generate(&|j: usize| C64::new(j as f64, 0.3 * j as f64), n).unwrap();
        let g = VectorSet::canonical(&spec);
        let bounds = frame_bounds(&quadform_continuous(&spec, &g).unwrap()).unwrap();
        let st = stability(&spec);
        let fh = finite_horizon(&bounds, 1.0, st.omega, DEFAULT_HORIZON_STEP).unwrap();
        let restricted = frame_bounds(&finite_horizon_quadform(&spec, &g, fh.horizon).unwrap()).unwrap();
        prop_assert!(restricted.lower >= fh.guaranteed_lower - 1e-10);
    }

    #[test]
    fn certificates_revalidate((lams, rows) in system(4, 2)) {
        let spec = Spectrum::new(&lams).unwrap();
        let g = vector_set(&rows);
        let bounds = frame_bounds(&quadform_continuous(&spec, &g).unwrap()).unwrap();
        prop_assume!(bounds.lower > 0.0);
        let cert = search_delta(&spec, &g, &bounds, g.bessel_constant().unwrap()).unwrap();
        prop_assert!(cert.holds());
    }

    #[test]
    fn factorization_round_trip((lams, rows) in system(8, 3)) {
        let spec = Spectrum::new(&lams).unwrap();
        let g = vector_set(&rows);
        let f = factorize_vectors(&spec, &g).unwrap();
        for j in 0..spec.dim() {
            let col: f64 = (0..g.count()).map(|i| f.alpha[(i, j)].norm_sqr()).sum();
            prop_assert!((col - 1.0).abs() <= 1e-12);
            for i in 0..g.count() {
                let back = f.alpha[(i, j)] * f.d[j] * spec.lambda(j).re.sqrt();
                prop_assert!((back - g.coeffs()[(i, j)]).norm() <= 1e-12 * g.coeffs()[(i, j)].norm().max(1.0));
            }
        }
    }

    #[test]
    fn conditions_invariant_under_double_mobius(points in prop::collection::vec(disc_point(), 1..10)) {
        let pts: Vec<DiscPoint> = points.iter().map(|&z| DiscPoint::new(z).unwrap()).collect();
        let round: Option<Vec<DiscPoint>> = points
            .iter()
            .map(|&z| DiscPoint::new(mobius_h(mobius_h(z).ok()?).ok()?).ok())
            .collect();
        let round = round.unwrap();
        let a = carleson_test(&pts, 50.0).unwrap();
        let b = carleson_test(&round, 50.0).unwrap();
        prop_assert!((a.constant_estimate - b.constant_estimate).abs() <= 1e-6 * a.constant_estimate);
        let grid = default_radius_grid();
        let sa = separation_test(&pts, 1, &grid).unwrap();
        let sb = separation_test(&round, 1, &grid).unwrap();
        // counts can only differ for a radius within rounding of some pairwise distance
        prop_assert!(sa.counts.iter().zip(&sb.counts).filter(|(x, y)| x.1 != y.1).count() <= 1);
    }

    #[test]
    fn basis_round_trip(entries in prop::collection::vec(coeff(), 16), v in prop::collection::vec(coeff(), 4)) {
        let m = CMatrix::from_fn(4, 4, |i, j| entries[4 * i + j] * 0.2 + if i == j { C64::new(2.0, 0.0) } else { C64::new(0.0, 0.0) });
        let basis = BasisChange::new(m).unwrap();
        let coords = basis.to_eigen_coords(&v).unwrap();
        let back = basis.from_eigen_coords(&coords).unwrap();
        for (a, b) in back.iter().zip(&v) {
            prop_assert!((a - b).norm() <= 1e-10);
        }
    }
}
