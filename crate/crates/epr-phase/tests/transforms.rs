use epr_phase::grid::{Axes, ComplexGrid, GridFunction};
use epr_phase::weyl::{entangled_to_mode_coords, mode_to_entangled_coords, transform_kernel};
use epr_phase::xform::{
    complex_forward, complex_inverse, complex_kernel, complex_transform_at, parseval_gap, real_forward, real_inverse,
};
use epr_phase::{PhasePoint, C64};
use proptest::prelude::*;

fn cplx() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn gaussian4(grid: ComplexGrid, nu0: C64, mu0: C64, width: f64) -> GridFunction {
    GridFunction::from_planes_fn(grid, |nu, mu| {
        C64::new((-((nu - nu0).norm_sqr() + (mu - mu0).norm_sqr()) / width).exp(), 0.0)
    })
    .unwrap()
}

fn gaussian2(grid: ComplexGrid, z0: C64, width: f64) -> GridFunction {
    GridFunction::from_plane_fn(grid, |z| C64::new((-(z - z0).norm_sqr() / width).exp(), 0.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mode_coordinates_round_trip(a1 in cplx(), a2 in cplx()) {
        let (b1, b2) = entangled_to_mode_coords(mode_to_entangled_coords(a1, a2));
        prop_assert!((b1 - a1).norm() < 1e-14 && (b2 - a2).norm() < 1e-14);
    }

    #[test]
    fn transform_kernels_are_conjugate(eta in cplx(), xi in cplx(), nu in cplx(), mu in cplx()) {
        let a = transform_kernel(PhasePoint::new(mu, nu), eta, xi);
        let b = complex_kernel(eta, xi, nu, mu);
        prop_assert!((a - b.conj()).norm() < 1e-12);
        prop_assert!((a.norm() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn complex_forward_is_linear(c1 in cplx(), c2 in cplx(), s1 in cplx(), s2 in cplx()) {
        let grid = ComplexGrid::new(Axes::Four, 7, 2.5).unwrap();
        let u = gaussian4(grid, s1 * 0.5, s2 * 0.5, 1.0);
        let v = GridFunction::from_planes_fn(grid, |nu, mu| (nu * mu.conj() - s1).exp() * (-nu.norm_sqr() - mu.norm_sqr()).exp()).unwrap();
        let mix = u.scale(c1).add(&v.scale(c2)).unwrap();
        let lhs = complex_forward(&mix).unwrap();
        let rhs = complex_forward(&u).unwrap().scale(c1).add(&complex_forward(&v).unwrap().scale(c2)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn separable_forward_matches_direct_sum(nu0 in cplx(), mu0 in cplx(), node in 0usize..2401, sign in prop::bool::ANY) {
        let grid = ComplexGrid::new(Axes::Four, 7, 3.0).unwrap();
        let d = GridFunction::from_planes_fn(grid, |nu, mu| {
            (-(nu - nu0 * 0.5).norm_sqr() - 0.5 * (mu - mu0 * 0.5).norm_sqr() + C64::new(0.0, 0.3) * nu.re * mu.im).exp()
        }).unwrap();
        let (out, s) = if sign { (complex_forward(&d).unwrap(), 1.0) } else { (complex_inverse(&d).unwrap(), -1.0) };
        let p = grid.plane_points();
        let plane = p.len();
        let direct = complex_transform_at(&d, p[node / plane], p[node % plane], s).unwrap();
        prop_assert!((out.samples()[node] - direct).norm() < 1e-10);
    }
}

#[test]
fn product_inputs_factor_into_plane_transforms() {
    let g4 = ComplexGrid::new(Axes::Four, 9, 3.0).unwrap();
    let g2 = g4.plane_grid();
    let d1 = gaussian2(g2, C64::new(0.3, -0.2), 1.3);
    let d2 = GridFunction::from_plane_fn(g2, |z| (-(z.norm_sqr()) + C64::new(0.0, 0.4) * z.re).exp()).unwrap();
    let g = g2.points();
    let at = |f: &GridFunction, x: usize, y: usize| f.samples()[x * g + y];
    // D(nu, mu) = d1(mu1, nu2) d2(mu2, nu1)
    let d = GridFunction::new(g4, (0..g4.len()).map(|k| {
        let [n1, n2, m1, m2] = g4.unflatten(k);
        at(&d1, m1, n2) * at(&d2, m2, n1)
    }).collect()).unwrap();
    let f = complex_forward(&d).unwrap();
    let (f1, f2) = (real_forward(&d1).unwrap(), real_inverse(&d2).unwrap());
    for k in 0..g4.len() {
        let [e1, e2, x1, x2] = g4.unflatten(k);
        let want = at(&f1, x1, e2) * at(&f2, x2, e1);
        assert!((f.samples()[k] - want).norm() < 1e-12, "{k}");
    }
}

#[test]
fn real_round_trip_improves_under_refinement() {
    let mut last = f64::INFINITY;
    for (g, l) in [(31, 3.0), (61, 4.5), (121, 6.0)] {
        let grid = ComplexGrid::plane(g, l).unwrap();
        let h = gaussian2(grid, C64::new(0.2, -0.3), 1.0);
        let back = real_inverse(&real_forward(&h).unwrap()).unwrap();
        let err = back.interior_max_abs_diff(&h).unwrap();
        assert!(err < last, "{g}: {err} after {last}");
        last = err;
    }
    assert!(last < 1e-4);
}

#[test]
fn complex_round_trip_improves_under_refinement() {
    let mut last = f64::INFINITY;
    for (g, l) in [(13, 2.5), (21, 3.2), (33, 4.0)] {
        let grid = ComplexGrid::new(Axes::Four, g, l).unwrap();
        let d = gaussian4(grid, C64::new(0.2, 0.1), C64::new(-0.1, 0.2), 1.0);
        let back = complex_inverse(&complex_forward(&d).unwrap()).unwrap();
        let err = back.interior_max_abs_diff(&d).unwrap();
        assert!(err < last, "{g}: {err} after {last}");
        last = err;
    }
    assert!(last < 1e-4);
}

#[test]
fn parseval_gap_vanishes_under_refinement() {
    let mut last = f64::INFINITY;
    for (g, l) in [(31, 3.5), (61, 5.0), (121, 6.0)] {
        let grid = ComplexGrid::plane(g, l).unwrap();
        let h = GridFunction::from_plane_fn(grid, |z| z * z.conj().powu(2) * (-z.norm_sqr() / 1.5).exp()).unwrap();
        let gap = parseval_gap(&h).unwrap();
        assert!(gap < last.max(1e-12), "{g}: {gap} after {last}");
        last = gap;
    }
    assert!(last < 1e-6);
}
