use std::f64::consts::PI;

use carnot47::optimality::{collinearity_minor, heisenberg_geodesic, TauGrid};
use carnot47::symmetry::representative_components;
use carnot47::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn determinant_formulas_agree(c1 in -1.0f64..1.0, c2 in -1.0f64..1.0, c3 in 0.0f64..2.0, tau in 0.0f64..40.0) {
        let cp = CanonicalParams::unit(c1, c2, c3);
        let a = collinearity_det(tau, &cp);
        let b = collinearity_minor(tau, &cp);
        prop_assert!((a - 2.0 * b).abs() <= 1e-9 * (1.0 + tau).powi(3));
    }

    #[test]
    fn discriminant_of_the_quadratic_form(tau in 1e-3f64..100.0) {
        let (d11, d12, d22) = det_coeffs(tau);
        let d = discriminant(tau);
        prop_assert!((4.0 * (d12 * d12 - d11 * d22) - d).abs() <= 1e-9 * tau.powi(4).max(1.0));
        prop_assert!(d < 0.0);
        prop_assert!(d11 < 0.0 && d22 < 0.0);
    }

    #[test]
    fn off_cn_geodesics_never_meet_cn(c1 in -1.0f64..1.0, c2 in -1.0f64..1.0, c3 in 0.05f64..2.0, tau in 0.01f64..50.0) {
        prop_assume!(c1.hypot(c2) > 0.05);
        let cp = CanonicalParams::unit(c1, c2, c3);
        prop_assert!(collinearity_det(tau, &cp) < 0.0);
        prop_assert!(!in_cn(&representative_point(tau, &cp), 1e-9));
    }

    #[test]
    fn in_cn_representatives_are_planar(c1 in -1.0f64..1.0, c2 in -1.0f64..1.0, tau in 0.0f64..50.0) {
        let [_, _, l2, _, y2] = representative_components(tau, c1, c2, 0.0);
        prop_assert_eq!(l2, 0.0);
        prop_assert_eq!(y2, 0.0);
        let q = representative_point(tau, &CanonicalParams::unit(c1, c2, 0.0));
        prop_assert_eq!(q.ell[2], 0.0);
        prop_assert_eq!(q.y[2], 0.0);
    }

    #[test]
    fn maxwell_endpoints_share_the_vertical_point(angle in 0.0f64..(2.0 * PI), rho in 0.1f64..3.0) {
        let r = rho.sqrt();
        let a = CanonicalParams::unit(r, 0.0, 0.0);
        let b = CanonicalParams::unit(r * angle.cos(), r * angle.sin(), 0.0);
        let ta = cut_time(&a).unwrap();
        let tb = cut_time(&b).unwrap();
        prop_assert!((ta - tb).abs() <= 1e-12);
        let pa = representative_point(a.k * ta, &a);
        let pb = representative_point(b.k * tb, &b);
        prop_assert!(pa.max_abs_diff(&pb) <= 1e-9);
        prop_assert!(pa.x.abs() <= 1e-12 && pa.ell.iter().all(|v| v.abs() <= 1e-12));
        prop_assert!((pa.y[0] - PI * rho).abs() <= 1e-9);
    }

    #[test]
    fn heisenberg_projection_of_rotated_points(l in 0.1f64..3.0, lambda in -3.0f64..3.0, x in -2.0f64..2.0, axis in prop::array::uniform3(-1.0f64..1.0)) {
        let n = carnot47::linalg::norm(&axis);
        prop_assume!(n > 0.1);
        let u = axis.map(|v| v / n);
        let q = GroupPoint::new(x, u.map(|v| l * v), u.map(|v| lambda * l * v));
        let h = heisenberg_project(&q, 1e-9).unwrap();
        prop_assert!((h.x - x).abs() <= 1e-15);
        prop_assert!((h.l - l).abs() <= 1e-12);
        prop_assert!((h.y - lambda * l).abs() <= 1e-12);
    }
}

#[test]
fn coefficient_examples() {
    let (d11, d12, d22) = det_coeffs(PI);
    assert!((d11 + PI * PI).abs() < 1e-12);
    assert!(d12.abs() < 1e-12);
    assert!(d22 < 0.0);
    assert_eq!(det_coeffs(0.0), (0.0, 0.0, 0.0));
    assert_eq!(discriminant(0.0), 0.0);
    assert!((discriminant(PI) + 4.0 * PI * PI * (PI * PI - 8.0)).abs() < 1e-10);
}

#[test]
fn f_examples() {
    let (f, _, _) = f_and_bounds(PI);
    assert!((f - (PI * PI - 8.0)).abs() < 1e-12);
    let (f, _, _) = f_and_bounds(2.0 * PI);
    assert!((f - 4.0 * PI * PI).abs() < 1e-10);
    let (_, local, _) = f_and_bounds(1.0f64);
    assert!((local - 13.0 / 5040.0).abs() < 1e-15);
}

#[test]
fn bounds_hold_on_their_intervals() {
    let grid = TauGrid::with_points(20_000, 100.0);
    for tau in grid.points::<f64>() {
        let (f, local, global) = f_and_bounds(tau);
        assert!(f > 0.0, "tau = {tau}");
        if tau < 14f64.sqrt() {
            assert!(f > local, "tau = {tau}");
        }
        assert!(f > global, "tau = {tau}");
    }
}

#[test]
fn determinant_example() {
    let cp = CanonicalParams::unit(1.0, 0.0, 1.0);
    assert!((collinearity_det(PI, &cp) + PI * PI).abs() < 1e-12);
    assert!((collinearity_minor(PI, &cp) + PI * PI / 2.0).abs() < 1e-12);
    let flat = CanonicalParams::unit(0.6, 0.8, 0.0);
    for tau in [0.5, 3.0, 17.0] {
        assert_eq!(collinearity_det(tau, &flat), 0.0);
    }
}

#[test]
fn classification_examples() {
    let in_cn = GeodesicParams::new([1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0]);
    match classify(&in_cn, 1e-10).unwrap() {
        GeodesicClass::InCn { cut_time } => assert!((cut_time - 2.0 * PI).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
    let off = normalize(&GeodesicParams::new([1.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0])).unwrap();
    assert_eq!(classify(&off, 1e-10).unwrap(), GeodesicClass::OffCn);
    let line = GeodesicParams::new([1.0, 0.0, 0.0, 0.0], [0.0; 3]);
    let class = classify(&line, 1e-10).unwrap();
    assert_eq!(class, GeodesicClass::Line);
    assert_eq!(class.cut_time(), Some(f64::INFINITY));
    let constant = normalize(&GeodesicParams::new([0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 1.0])).unwrap();
    assert_eq!(classify(&constant, 1e-10), Err(Error::DegenerateControls));
    let off_level = GeodesicParams::new([2.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0]);
    assert!(matches!(classify(&off_level, 1e-10), Err(Error::OffLevelSet { .. })));
}

#[test]
fn cut_time_examples() {
    let a = CanonicalParams::unit(1.0, 0.0, 0.0);
    assert!((cut_time(&a).unwrap() - 2.0 * PI).abs() < 1e-15);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let b = CanonicalParams::unit(h, h, 0.0);
    assert!((cut_time(&b).unwrap() - 2.0 * PI).abs() < 1e-12);
    let c = CanonicalParams::unit(2.0, 0.0, 0.0);
    assert!((cut_time(&c).unwrap() - 4.0 * PI).abs() < 1e-12);
    assert!(matches!(cut_time(&CanonicalParams::unit(1.0, 0.0, 0.5)), Err(Error::NotInCnFamily(_))));
}

#[test]
fn heisenberg_projection_examples() {
    let h = heisenberg_project(&GroupPoint::new(1.0, [2.0, 0.0, 0.0], [4.0, 0.0, 0.0]), 1e-9).unwrap();
    assert_eq!(h.to_array(), [1.0, 2.0, 4.0]);
    let h = heisenberg_project(&GroupPoint::new(0.0, [0.0; 3], [0.0, 0.0, 5.0]), 1e-9).unwrap();
    assert_eq!(h.to_array(), [0.0, 0.0, 5.0]);
    let off = GroupPoint::new(0.0, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
    assert_eq!(heisenberg_project(&off, 1e-9), Err(Error::NotInCn));
}

#[test]
fn heisenberg_geodesic_closed_form() {
    let (c1, c2) = (0.6, -0.3);
    let rho: f64 = c1 * c1 + c2 * c2;
    for tau in [0.2f64, 1.7, 4.0, 6.0] {
        let h = heisenberg_geodesic(tau, c1, c2);
        let expected = [
            c1 * (tau.cos() - 1.0) + c2 * tau.sin(),
            c1 * tau.sin() + c2 * (1.0 - tau.cos()),
            0.5 * rho * (tau - tau.sin()),
        ];
        assert!(carnot47::linalg::max_abs_diff(&h.to_array(), &expected) < 1e-14);
    }
}
