use carnot47::linalg::{cross, dot, max_abs_diff, norm};
use carnot47::symmetry::rotate_params;
use carnot47::*;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = GroupPoint<f64>> {
    prop::array::uniform7(-2.0f64..2.0).prop_map(GroupPoint::from_array)
}

fn rotation() -> impl Strategy<Value = Rotation<f64>> {
    (prop::array::uniform3(-1.0f64..1.0), -3.1f64..3.1)
        .prop_filter("axis", |(a, _)| norm(a) > 0.1)
        .prop_map(|(a, angle)| {
            let n = norm(&a);
            Rotation::from_axis_angle(&a.map(|v| v / n), angle)
        })
}

fn params() -> impl Strategy<Value = GeodesicParams<f64>> {
    prop::array::uniform7(-1.0f64..1.0)
        .prop_filter("nondegenerate", |a| a[0].hypot(a[1]) > 0.05 && norm(&[a[4], a[5], a[6]]) > 0.05)
        .prop_map(|a| normalize(&GeodesicParams::from_array(a)).unwrap())
}

type Field = dyn Fn(&[f64; 7]) -> [f64; 7];

/// Coordinate commutator `XY − YX` by central differences.
fn commutator(x: &Field, y: &Field, q: &[f64; 7]) -> [f64; 7] {
    let h = 1e-5;
    let shift = |v: &[f64; 7], s: f64| -> [f64; 7] { std::array::from_fn(|i| q[i] + s * v[i]) };
    let (fx, fy) = (x(q), y(q));
    let dy_along_x: [f64; 7] = {
        let (a, b) = (y(&shift(&fx, h)), y(&shift(&fx, -h)));
        std::array::from_fn(|i| (a[i] - b[i]) / (2.0 * h))
    };
    let dx_along_y: [f64; 7] = {
        let (a, b) = (x(&shift(&fy, h)), x(&shift(&fy, -h)));
        std::array::from_fn(|i| (a[i] - b[i]) / (2.0 * h))
    };
    std::array::from_fn(|i| dy_along_x[i] - dx_along_y[i])
}

fn isotropy(axis: [f64; 3]) -> Box<Field> {
    Box::new(move |q| symmetry_field(&SymmetryGenerator::isotropy(axis), &GroupPoint::from_array(*q)))
}

fn left(j: usize) -> Box<Field> {
    Box::new(move |q| frame_left(&GroupPoint::from_array(*q))[j])
}

fn right(j: usize) -> Box<Field> {
    Box::new(move |q| frame_right(&GroupPoint::from_array(*q))[j])
}

proptest! {
    #[test]
    fn action_is_an_automorphism(r in rotation(), a in point(), b in point()) {
        let lhs = act(&r, &a.multiply(&b));
        let rhs = act(&r, &a).multiply(&act(&r, &b));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn invariants_are_rotation_invariant(r in rotation(), q in point()) {
        let a = invariants_of_point(&q);
        let b = invariants_of_point(&act(&r, &q));
        prop_assert!(a.max_abs_diff(&b) <= 1e-12);
    }

    #[test]
    fn cn_is_preserved_by_rotations(r in rotation(), x in -2.0f64..2.0, k in -2.0f64..2.0, l in -2.0f64..2.0, axis in prop::array::uniform3(-1.0f64..1.0)) {
        let q = GroupPoint::new(x, axis.map(|a| k * a), axis.map(|a| l * a));
        prop_assert!(in_cn(&q, 1e-9));
        prop_assert!(in_cn(&act(&r, &q), 1e-9));
    }

    #[test]
    fn cn_is_closed_under_products_on_a_common_axis(
        axis in prop::array::uniform3(-1.0f64..1.0),
        a in prop::array::uniform3(-2.0f64..2.0),
        b in prop::array::uniform3(-2.0f64..2.0),
    ) {
        let p = GroupPoint::new(a[0], axis.map(|v| a[1] * v), axis.map(|v| a[2] * v));
        let q = GroupPoint::new(b[0], axis.map(|v| b[1] * v), axis.map(|v| b[2] * v));
        prop_assert!(in_cn(&p.multiply(&q), 1e-9));
    }

    #[test]
    fn rotated_geodesics_are_geodesics(r in rotation(), p in params(), t in 0.0f64..8.0) {
        let rp = rotate_params(&r, &p).unwrap();
        prop_assert!(level_residual(&rp).unwrap().abs() <= 1e-10);
        let a = act(&r, &geodesic_point(t, &p));
        prop_assert!(geodesic_point(t, &rp).max_abs_diff(&a) <= 1e-9);
    }

    #[test]
    fn canonicalization_aligns_z1_and_z2(p in params()) {
        let (z1, z2) = (p.z1(), p.z2());
        prop_assert!(dot(&z1, &z2).abs() <= 1e-12);
        let cp = canonicalize(&p).unwrap();
        prop_assert!(cp.level_residual().abs() <= 1e-10);
        let rt = cp.rotation.transpose();
        prop_assert!(max_abs_diff(&rt.apply(&z1), &[cp.k, 0.0, 0.0]) <= 1e-12);
        prop_assert!(max_abs_diff(&rt.apply(&z2), &[0.0, cp.c3bar * cp.k, 0.0]) <= 1e-12);
        prop_assert!(cp.c3bar >= 0.0);
    }

    #[test]
    fn representative_curve_reproduces_geodesic(p in params(), t in 0.0f64..10.0) {
        let cp = canonicalize(&p).unwrap();
        let a = act(&cp.rotation, &representative_point(cp.k * t, &cp));
        prop_assert!(a.max_abs_diff(&geodesic_point(t, &p)) <= 1e-9);
    }

    #[test]
    fn invariant_curve_matches_point_invariants(c1 in -1.0f64..1.0, c2 in -1.0f64..1.0, c3 in 0.0f64..2.0, tau in 0.0f64..20.0) {
        let cp = CanonicalParams::unit(c1, c2, c3);
        let a = invariants_curve(tau, &cp);
        let b = invariants_of_point(&representative_point(tau, &cp));
        prop_assert!(a.max_abs_diff(&b) <= 1e-12 * (1.0 + tau).powi(4));
    }

    #[test]
    fn isotropy_fields_vanish_at_origin(axis in prop::array::uniform3(-3.0f64..3.0)) {
        let v = symmetry_field(&SymmetryGenerator::isotropy(axis), &GroupPoint::identity());
        prop_assert!(v.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn fixed_point_sets_lie_in_cn(x in -2.0f64..2.0, k in -2.0f64..2.0, l in -2.0f64..2.0, a in prop::array::uniform3(-1.0f64..1.0)) {
        prop_assert!(in_cn(&GroupPoint::new(x, a.map(|v| k * v), a.map(|v| l * v)), 1e-9));
    }
}

#[test]
fn isotropy_fields_span_so3() {
    let q = [0.3, 0.7, -0.4, 1.1, -0.2, 0.5, 0.9];
    let e = |i: usize| {
        let mut a = [0.0; 3];
        a[i] = 1.0;
        a
    };
    // with v_a(ℓ, y) = (ℓ × a, y × a) the commutator XY − YX is v_{a × b}
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let c = commutator(&*isotropy(e(i)), &*isotropy(e(j)), &q);
        let expected = isotropy(e(k))(&q);
        assert!(max_abs_diff(&c, &expected) < 1e-8, "[v{i}, v{j}]");
    }
    let a = [0.3, -1.2, 0.8];
    let b = [1.1, 0.4, -0.6];
    let c = commutator(&*isotropy(a), &*isotropy(b), &q);
    assert!(max_abs_diff(&c, &isotropy(cross(&a, &b))(&q)) < 1e-8);
}

#[test]
fn right_invariant_fields_commute_with_left_frame() {
    let q = [0.3, 0.7, -0.4, 1.1, -0.2, 0.5, 0.9];
    for i in 0..7 {
        for j in 0..7 {
            let c = commutator(&*right(i), &*left(j), &q);
            assert!(c.iter().all(|v| v.abs() < 1e-8), "R{i}, N{j}");
        }
    }
}

#[test]
fn isotropy_fields_rotate_the_horizontal_frame() {
    let q = [0.3, 0.7, -0.4, 1.1, -0.2, 0.5, 0.9];
    let p = GroupPoint::from_array(q);
    let frame = frame_left(&p);
    for axis in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        let mut coeffs = [[0.0; 4]; 4];
        for (j, row) in coeffs.iter_mut().enumerate() {
            let c = commutator(&*isotropy(axis), &*left(j), &q);
            let tv = TangentVector::from_coordinates(&c, &p);
            assert!(tv.coefficients[4..].iter().all(|v| v.abs() < 1e-8), "bracket leaves the distribution");
            row.copy_from_slice(&tv.coefficients[..4]);
            let back = tv.to_coordinates(&p);
            let recon: [f64; 7] = std::array::from_fn(|k| (0..4).map(|m| row[m] * frame[m][k]).sum());
            assert!(max_abs_diff(&back, &recon) < 1e-8);
        }
        for a in 0..4 {
            for b in 0..4 {
                assert!((coeffs[a][b] + coeffs[b][a]).abs() < 1e-8, "metric not preserved");
            }
        }
    }
}
