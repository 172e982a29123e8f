use approx::assert_abs_diff_eq;
use carnot47::group::bracket;
use carnot47::*;
use num_rational::Rational64;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = GroupPoint<f64>> {
    prop::array::uniform7(-3.0f64..3.0).prop_map(GroupPoint::from_array)
}

fn rational_point() -> impl Strategy<Value = GroupPoint<Rational64>> {
    prop::array::uniform7((-20i64..20, 1i64..9)).prop_map(|a| GroupPoint::from_array(a.map(|(n, d)| Rational64::new(n, d))))
}

fn scale(a: &GroupPoint<f64>) -> f64 {
    a.to_array().iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in point(), b in point(), c in point()) {
        let lhs = a.multiply(&b).multiply(&c);
        let rhs = a.multiply(&b.multiply(&c));
        let s = scale(&a) * scale(&b) * scale(&c);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * s);
    }

    #[test]
    fn rational_multiplication_is_exactly_associative(a in rational_point(), b in rational_point(), c in rational_point()) {
        prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
    }

    #[test]
    fn inverse_is_two_sided_and_involutive(a in rational_point()) {
        let e = GroupPoint::identity();
        prop_assert_eq!(a.multiply(&a.inverse()), e);
        prop_assert_eq!(a.inverse().multiply(&a), e);
        prop_assert_eq!(a.inverse().inverse(), a);
    }

    #[test]
    fn left_translation_preserves_left_frame(g in point(), q in point()) {
        let h = 1e-6;
        let gq = g.multiply(&q);
        let target = frame_left(&gq);
        for (j, field) in frame_left(&q).iter().enumerate() {
            let plus = GroupPoint::from_array(std::array::from_fn(|i| q.to_array()[i] + h * field[i]));
            let minus = GroupPoint::from_array(std::array::from_fn(|i| q.to_array()[i] - h * field[i]));
            let a = g.multiply(&plus).to_array();
            let b = g.multiply(&minus).to_array();
            for c in 0..7 {
                let push = (a[c] - b[c]) / (2.0 * h);
                prop_assert!((push - target[j][c]).abs() <= 1e-6, "field {j}, component {c}");
            }
        }
    }

    #[test]
    fn right_translation_preserves_right_frame(g in point(), q in point()) {
        let h = 1e-6;
        let qg = q.multiply(&g);
        let target = frame_right(&qg);
        for (j, field) in frame_right(&q).iter().enumerate() {
            let plus = GroupPoint::from_array(std::array::from_fn(|i| q.to_array()[i] + h * field[i]));
            let minus = GroupPoint::from_array(std::array::from_fn(|i| q.to_array()[i] - h * field[i]));
            let a = plus.multiply(&g).to_array();
            let b = minus.multiply(&g).to_array();
            for c in 0..7 {
                let push = (a[c] - b[c]) / (2.0 * h);
                prop_assert!((push - target[j][c]).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn frame_round_trips_through_coordinates(q in point(), v in prop::array::uniform7(-1.0f64..1.0)) {
        let t = TangentVector::new(v);
        let back = TangentVector::from_coordinates(&t.to_coordinates(&q), &q);
        for i in 0..7 {
            prop_assert!((back.coefficients[i] - v[i]).abs() <= 1e-12);
        }
    }
}

#[test]
fn product_example() {
    let a = GroupPoint::new(1.0, [1.0, 0.0, 0.0], [0.0; 3]);
    let b = GroupPoint::new(1.0, [0.0; 3], [0.0; 3]);
    assert_eq!(a * b, GroupPoint::new(2.0, [1.0, 0.0, 0.0], [-0.5, 0.0, 0.0]));
}

#[test]
fn inverse_example() {
    let a = GroupPoint::new(1.0, [1.0, 0.0, 0.0], [0.0; 3]);
    assert_eq!(a.inverse(), GroupPoint::new(-1.0, [-1.0, 0.0, 0.0], [0.0; 3]));
}

#[test]
fn frames_at_sample_points() {
    let o = GroupPoint::<f64>::identity();
    assert_eq!(frame_left(&o), frame_right(&o));
    let q = GroupPoint::new(2.0, [0.0; 3], [0.0; 3]);
    let left = frame_left(&q);
    let right = frame_right(&q);
    assert_eq!(left[1], [0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
    assert_eq!(right[1], [0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0]);
    let q = GroupPoint::new(0.7, [0.3, -1.2, 2.0], [4.0, 5.0, 6.0]);
    for i in 0..3 {
        let mut e = [0.0; 7];
        e[4 + i] = 1.0;
        assert_eq!(frame_left(&q)[4 + i], e);
    }
}

fn rk4_flow(start: &GroupPoint<f64>, field: impl Fn(&GroupPoint<f64>) -> [f64; 7], s: f64) -> GroupPoint<f64> {
    let n = 1000;
    let dt = s / n as f64;
    let f = |q: &[f64; 7]| field(&GroupPoint::from_array(*q));
    let mut q = start.to_array();
    for _ in 0..n {
        let k1 = f(&q);
        let k2 = f(&std::array::from_fn(|i| q[i] + 0.5 * dt * k1[i]));
        let k3 = f(&std::array::from_fn(|i| q[i] + 0.5 * dt * k2[i]));
        let k4 = f(&std::array::from_fn(|i| q[i] + dt * k3[i]));
        q = std::array::from_fn(|i| q[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    GroupPoint::from_array(q)
}

#[test]
fn invariant_flows_are_translations() {
    let g = GroupPoint::new(0.4, [-0.3, 0.8, 0.1], [0.2, -0.5, 0.9]);
    let s = 1.3;
    for j in 0..7 {
        let mut a = [0.0; 7];
        a[j] = s;
        let exp = GroupPoint::from_array(a);
        let right = rk4_flow(&g, |q| frame_right(q)[j], s);
        assert!(right.max_abs_diff(&exp.multiply(&g)) < 1e-10, "right field {j}");
        let left = rk4_flow(&g, |q| frame_left(q)[j], s);
        assert!(left.max_abs_diff(&g.multiply(&exp)) < 1e-10, "left field {j}");
    }
}

#[test]
fn bracket_table() {
    let b = |u: Generator, v: Generator| bracket::<i64>(&TangentVector::basis(u), &TangentVector::basis(v));
    assert_eq!(b(Generator::N0, Generator::N1), TangentVector::basis(Generator::N01));
    assert_eq!(b(Generator::N0, Generator::N2), TangentVector::basis(Generator::N02));
    assert_eq!(b(Generator::N0, Generator::N3), TangentVector::basis(Generator::N03));
    assert_eq!(b(Generator::N1, Generator::N2), TangentVector::zero());
    for g in Generator::ALL {
        assert_eq!(b(Generator::N01, g), TangentVector::zero());
    }
}

#[test]
fn bracket_is_antisymmetric_and_satisfies_jacobi() {
    let alg = LieAlgebra;
    for a in Generator::ALL {
        for b in Generator::ALL {
            let ab = alg.bracket::<i64>(&TangentVector::basis(a), &TangentVector::basis(b));
            let ba = alg.bracket::<i64>(&TangentVector::basis(b), &TangentVector::basis(a));
            assert_eq!(ab, ba.scaled(-1));
            for c in Generator::ALL {
                let (ea, eb, ec) = (TangentVector::basis(a), TangentVector::basis(b), TangentVector::basis(c));
                let j = alg
                    .bracket(&ea, &alg.bracket(&eb, &ec))
                    .plus(&alg.bracket(&eb, &alg.bracket(&ec, &ea)))
                    .plus(&alg.bracket(&ec, &alg.bracket(&ea, &eb)));
                assert_eq!(j, TangentVector::<i64>::zero());
                assert_eq!(alg.bracket(&ea, &alg.bracket(&eb, &ec)), TangentVector::zero());
            }
        }
    }
}

#[test]
fn structure_constants_match_coordinate_commutators() {
    let q = GroupPoint::new(0.3, [0.5, -0.2, 0.9], [0.1, 0.4, -0.6]);
    let h = 1e-5;
    let field = |j: usize, p: &[f64; 7]| frame_left(&GroupPoint::from_array(*p))[j];
    for a in Generator::ALL {
        for b in Generator::ALL {
            let expected = LieAlgebra.bracket::<f64>(&TangentVector::basis(a), &TangentVector::basis(b)).to_coordinates(&q);
            let x = q.to_array();
            let (fa, fb) = (field(a.index(), &x), field(b.index(), &x));
            let commutator: [f64; 7] = std::array::from_fn(|c| {
                let shift = |v: &[f64; 7], s: f64| std::array::from_fn::<f64, 7, _>(|i| x[i] + s * v[i]);
                let dfb = (field(b.index(), &shift(&fa, h))[c] - field(b.index(), &shift(&fa, -h))[c]) / (2.0 * h);
                let dfa = (field(a.index(), &shift(&fb, h))[c] - field(a.index(), &shift(&fb, -h))[c]) / (2.0 * h);
                dfb - dfa
            });
            for c in 0..7 {
                assert_abs_diff_eq!(commutator[c], expected[c], epsilon = 1e-8);
            }
        }
    }
}
