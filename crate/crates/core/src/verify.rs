//! Numerical verification suite.
//!
//! Every check reports the smallest value of a margin that must stay
//! positive (or, for exact checks, zero) over its grid or sample set.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    controls, fiber_solution, geodesic_point, hamiltonian, initial_state, integrate_numeric,
    CotangentState, GeodesicParams,
};
use crate::expmap::{connect, exp_factored, exp_jacobian, first_critical_time, ConnectOptions, ExpParams, CRITICAL_SCAN_STEP};
use crate::group::{frame_left, frame_right, GroupPoint, LieAlgebra};
use crate::optimality::{f_and_bounds, heisenberg_frame, heisenberg_geodesic, TauGrid};
use crate::sphere::{self, SphereFamily};
use crate::symmetry::{
    act, canonicalize, in_cn, invariants_of_point, representative_components, representative_point,
    rotate_params, symmetry_field, CanonicalParams, Rotation, SymmetryGenerator,
};
use crate::trig;

/// A deliberate defect injected into the suite to confirm it can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Flips the sign of `d₁₁` in the collinearity form.
    FlipD11,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Points of the dense `τ` grid on `(0, tau_max]`.
    pub grid_points: usize,
    pub tau_max: f64,
    /// `τ` grid of the off-C_n determinant check.
    pub det_grid: TauGrid,
    /// Random draws per sampled check.
    pub draws: usize,
    /// Endpoints in the connect round trip.
    pub round_trips: usize,
    pub rk4_step: f64,
    pub oracle_t_max: f64,
    pub oracle_tol: f64,
    pub mutation: Option<Mutation>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 2024,
            grid_points: 100_000,
            tau_max: 100.0,
            det_grid: TauGrid::default(),
            draws: 100,
            round_trips: 200,
            rk4_step: 1e-3,
            oracle_t_max: 10.0,
            oracle_tol: 1e-8,
            mutation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub grid: String,
    pub min_value: f64,
    pub pass: bool,
}

impl CheckReport {
    fn margin(check: &str, grid: String, min_value: f64) -> Self {
        Self { check: check.into(), grid, min_value, pass: min_value > 0.0 }
    }

    fn exact(check: &str, grid: String, min_value: f64) -> Self {
        Self { check: check.into(), grid, min_value, pass: min_value == 0.0 }
    }
}

fn coeffs(tau: f64, mutation: Option<Mutation>) -> (f64, f64, f64) {
    let d11 = trig::d11(tau);
    let d11 = if mutation == Some(Mutation::FlipD11) { -d11 } else { d11 };
    (d11, trig::d12(tau), trig::d22(tau))
}

fn form(tau: f64, cp: &CanonicalParams<f64>, mutation: Option<Mutation>) -> f64 {
    let (d11, d12, d22) = coeffs(tau, mutation);
    cp.c3bar * (d11 * cp.c1 * cp.c1 + 2.0 * d12 * cp.c1 * cp.c2 + d22 * cp.c2 * cp.c2)
}

/// Draws unit-level parameters of the given family.
pub fn random_params(family: SphereFamily, rng: &mut ChaCha8Rng) -> GeodesicParams<f64> {
    sphere::draw(family, rng)
}

/// Draws an element of SO(3) from a random axis and angle.
pub fn random_rotation(rng: &mut ChaCha8Rng) -> Rotation<f64> {
    let axis: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let n = crate::linalg::norm(&axis).max(1e-3);
    Rotation::from_axis_angle(&crate::linalg::scale(1.0 / n, &axis), rng.random_range(-PI..PI))
}

pub fn random_point(rng: &mut ChaCha8Rng) -> GroupPoint<f64> {
    GroupPoint::from_array(std::array::from_fn(|_| rng.random_range(-2.0..2.0)))
}

/// A forward endpoint off C_n: unit-level parameters and a time whose `τ`
/// is uniform on `(0, min(τ_crit, tau_ceiling))`, `τ_crit` being the first
/// critical time of the factorized exp along the parameters.
pub fn forward_endpoint(rng: &mut ChaCha8Rng, tau_ceiling: f64) -> (GeodesicParams<f64>, f64, GroupPoint<f64>) {
    let p = random_params(SphereFamily::OffCn, rng);
    let cp = canonicalize(&p).expect("off-C_n draw");
    let cap = 6.0 * PI;
    let crit = first_critical_time(cp.c1, cp.c2, cp.c3bar, cap, CRITICAL_SCAN_STEP).unwrap_or(cap);
    let tau = rng.random_range(0.0..crit.min(tau_ceiling));
    let t = tau / cp.k;
    (p, t, geodesic_point(t, &p))
}

fn mixed_family(i: usize) -> SphereFamily {
    [SphereFamily::Line, SphereFamily::InCn, SphereFamily::OffCn, SphereFamily::OffCn][i % 4]
}

/// Runs the suite.
pub fn run(cfg: &VerifyConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let dense = TauGrid::with_points(cfg.grid_points, cfg.tau_max);
    let dense_desc = format!("tau in (0,{}], n={}", cfg.tau_max, dense.len());
    let m = cfg.mutation;

    let mut disc = f64::INFINITY;
    let mut f_pos = f64::INFINITY;
    let mut local = f64::INFINITY;
    let mut global = f64::INFINITY;
    let mut identity = f64::INFINITY;
    let (sqrt14, root) = (14f64.sqrt(), (1.0 + 33f64.sqrt()) / 2.0);
    for tau in dense.points::<f64>() {
        let (d11, d12, d22) = coeffs(tau, m);
        let d = 4.0 * (d12 * d12 - d11 * d22);
        disc = disc.min(-d);
        let closed = -4.0 * tau * trig::tau_minus_sin(tau) * trig::f_function(tau);
        identity = identity.min(1e-8 * closed.abs() + 1e-300 - (d - closed).abs());
        let (f, lb, gb) = f_and_bounds(tau);
        f_pos = f_pos.min(f);
        if tau < sqrt14 {
            local = local.min(f - lb);
        }
        if tau > root {
            global = global.min(f - gb);
        }
    }
    out.push(CheckReport::margin("discriminant_negative", dense_desc.clone(), disc));
    out.push(CheckReport::margin("discriminant_identity", dense_desc.clone(), identity));
    out.push(CheckReport::margin("f_positive", dense_desc.clone(), f_pos));
    out.push(CheckReport::margin("f_local_bound", format!("tau in (0,sqrt(14)), n={}", dense.len()), local));
    out.push(CheckReport::margin("f_global_bound", format!("tau in ((1+sqrt(33))/2,{}]", cfg.tau_max), global));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let offcn: Vec<CanonicalParams<f64>> = (0..cfg.draws)
        .map(|_| canonicalize(&random_params(SphereFamily::OffCn, &mut rng)).expect("off-C_n draw"))
        .collect();
    let det_desc = format!("{} geodesics x tau in (0,{}] step {}", cfg.draws, cfg.det_grid.tau_max, cfg.det_grid.step);
    let mut det_min = f64::INFINITY;
    let mut cross = f64::INFINITY;
    for cp in &offcn {
        let mut sign = None;
        for (i, tau) in cfg.det_grid.points::<f64>().enumerate() {
            let d = form(tau, cp, m);
            let s = d > 0.0;
            let same = *sign.get_or_insert(s) == s;
            det_min = det_min.min(if same { d.abs() } else { -d.abs() });
            if i % 50 == 0 {
                let minor = crate::optimality::collinearity_minor(tau, cp);
                let scale = d.abs().max((2.0 * minor).abs()).max(1e-300);
                cross = cross.min(1e-9 - (d - 2.0 * minor).abs() / scale);
            }
        }
    }
    out.push(CheckReport::margin("offcn_collinearity_det_nonzero", det_desc.clone(), det_min));
    out.push(CheckReport::margin("collinearity_det_cross_check", det_desc, cross));

    let mut oracle = f64::INFINITY;
    let mut w_drift = 0.0f64;
    let mut ham = f64::INFINITY;
    let mut controls_fd = f64::INFINITY;
    for i in 0..cfg.draws {
        let p = random_params(mixed_family(i), &mut rng);
        let traj = integrate_numeric(&initial_state(&p), cfg.oracle_t_max, cfg.rk4_step).expect("finite input");
        let mut dev = 0.0f64;
        for (j, (t, s)) in traj.iter().enumerate() {
            if j % 10 != 0 && j + 1 != traj.len() {
                continue;
            }
            let q = geodesic_point(t, &p);
            dev = dev.max(q.max_abs_diff(&s.q));
            if !p.is_line() {
                let h = fiber_solution(t, &p).expect("K > 0");
                dev = dev.max(crate::linalg::max_abs_diff(&h, &s.lambda.h));
            }
            w_drift = w_drift.max(crate::linalg::max_abs_diff(&s.lambda.w, &p.kvec));
        }
        oracle = oracle.min(cfg.oracle_tol - dev);
        for k in 0..100 {
            let t = cfg.oracle_t_max * (k as f64 + 0.5) / 100.0;
            let state = CotangentState { h: controls(t, &p), w: p.kvec };
            ham = ham.min(1e-10 - (hamiltonian(&state) - 0.5).abs());
        }
        for &t in &[0.37, 1.9, 4.2] {
            let h = 1e-5;
            let a = geodesic_point(t + h, &p).to_array();
            let b = geodesic_point(t - h, &p).to_array();
            let q = geodesic_point(t, &p);
            let u = controls(t, &p);
            let frame = frame_left(&q);
            for c in 0..7 {
                let fd = (a[c] - b[c]) / (2.0 * h);
                let field: f64 = (0..4).map(|j| u[j] * frame[j][c]).sum();
                controls_fd = controls_fd.min(1e-6 - (fd - field).abs());
            }
        }
    }
    let oracle_desc = format!("{} draws, t in [0,{}], step {}", cfg.draws, cfg.oracle_t_max, cfg.rk4_step);
    out.push(CheckReport::margin("oracle_equivalence", oracle_desc.clone(), oracle));
    out.push(CheckReport::exact("w_constancy", oracle_desc, -w_drift));
    out.push(CheckReport::margin("hamiltonian_conservation", format!("{} draws x 100 times", cfg.draws), ham));
    out.push(CheckReport::margin("controls_identity", format!("{} draws x 3 times, fd h=1e-5", cfg.draws), controls_fd));

    let la = LieAlgebra;
    let mut jacobi = 0.0f64;
    for i in 0..7 {
        for j in 0..7 {
            for k in 0..7 {
                let e = |n| crate::group::TangentVector::<f64>::basis(crate::group::Generator::from_index(n).unwrap());
                let (a, b, c) = (e(i), e(j), e(k));
                let s = la
                    .bracket(&a, &la.bracket(&b, &c))
                    .plus(&la.bracket(&b, &la.bracket(&c, &a)))
                    .plus(&la.bracket(&c, &la.bracket(&a, &b)));
                let anti = la.bracket(&a, &b).plus(&la.bracket(&b, &a));
                for v in s.coefficients.iter().chain(anti.coefficients.iter()) {
                    jacobi = jacobi.max(v.abs());
                }
            }
        }
    }
    out.push(CheckReport::exact("jacobi_antisymmetry", "7x7x7 basis triples".into(), -jacobi));

    let mut assoc = f64::INFINITY;
    let mut left_inv = f64::INFINITY;
    for _ in 0..cfg.draws {
        let (a, b, c) = (random_point(&mut rng), random_point(&mut rng), random_point(&mut rng));
        let lhs = (a * b) * c;
        let rhs = a * (b * c);
        let scale = lhs.to_array().iter().fold(1.0f64, |m, v| m.max(v.abs()));
        assoc = assoc.min(1e-12 - lhs.max_abs_diff(&rhs) / scale);
        let fq = frame_left(&b);
        let fgq = frame_left(&(a * b));
        for j in 0..7 {
            let h = 1e-6;
            let plus = a * GroupPoint::from_array(std::array::from_fn(|c| b.to_array()[c] + h * fq[j][c]));
            let minus = a * GroupPoint::from_array(std::array::from_fn(|c| b.to_array()[c] - h * fq[j][c]));
            let (pa, ma) = (plus.to_array(), minus.to_array());
            for c in 0..7 {
                left_inv = left_inv.min(1e-6 - ((pa[c] - ma[c]) / (2.0 * h) - fgq[j][c]).abs());
            }
        }
    }
    out.push(CheckReport::margin("associativity", format!("{} random triples", cfg.draws), assoc));
    out.push(CheckReport::margin("left_invariance", format!("{} random pairs, fd h=1e-6", cfg.draws), left_inv));
    let o = GroupPoint::<f64>::identity();
    let origin_diff = frame_left(&o)
        .iter()
        .zip(frame_right(&o).iter())
        .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
        .fold(0.0f64, f64::max);
    out.push(CheckReport::exact("frames_agree_at_origin", "origin".into(), -origin_diff));

    let mut equiv = f64::INFINITY;
    let mut stab = 0.0f64;
    let mut fixed = true;
    for _ in 0..cfg.draws {
        let r = random_rotation(&mut rng);
        let p = random_params(SphereFamily::All, &mut rng);
        if let Ok(pr) = rotate_params(&r, &p) {
            for k in 0..10 {
                let t = 0.7 * k as f64;
                let a = act(&r, &geodesic_point(t, &p));
                equiv = equiv.min(1e-9 - a.max_abs_diff(&geodesic_point(t, &pr)));
            }
        }
        let axis: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let v = symmetry_field(&SymmetryGenerator::isotropy(axis), &o);
        stab = stab.max(v.iter().fold(0.0f64, |m, a| m.max(a.abs())));
        let (kk, ll) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let x = rng.random_range(-2.0..2.0);
        let q = GroupPoint::new(x, crate::linalg::scale(kk, &axis), crate::linalg::scale(ll, &axis));
        fixed &= in_cn(&q, 1e-9) && in_cn(&act(&r, &q), 1e-9);
    }
    out.push(CheckReport::margin("geodesic_equivariance", format!("{} rotations x 10 times", cfg.draws), equiv));
    out.push(CheckReport::exact("isotropy_vanishes_at_origin", format!("{} axes", cfg.draws), -stab));
    out.push(CheckReport::exact("fixed_points_in_cn", format!("{} points", cfg.draws), if fixed { 0.0 } else { -1.0 }));

    let mut planar = 0.0f64;
    let mut maxwell = f64::INFINITY;
    let mut hframe = f64::INFINITY;
    for _ in 0..cfg.draws {
        let rho: f64 = rng.random_range(0.2..2.0);
        let (a1, a2) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
        let (c1, c2) = (rho.sqrt() * a1.cos(), rho.sqrt() * a1.sin());
        for k in 1..=20 {
            let tau = 0.4 * k as f64;
            let [_, _, l2, _, y2] = representative_components(tau, c1, c2, 0.0);
            planar = planar.max(l2.abs()).max(y2.abs());
            let h = 1e-5;
            let p = heisenberg_geodesic(tau, c1, c2);
            let pa = heisenberg_geodesic(tau + h, c1, c2).to_array();
            let pb = heisenberg_geodesic(tau - h, c1, c2).to_array();
            let d: [f64; 3] = std::array::from_fn(|i| (pa[i] - pb[i]) / (2.0 * h));
            let [n0, n1] = heisenberg_frame(&p);
            let field: [f64; 3] = std::array::from_fn(|i| d[0] * n0[i] + d[1] * n1[i]);
            hframe = hframe.min(1e-6 - (d[2] - field[2]).abs());
        }
        let e1 = representative_point(2.0 * PI, &CanonicalParams::unit(c1, c2, 0.0));
        let e2 = representative_point(2.0 * PI, &CanonicalParams::unit(rho.sqrt() * a2.cos(), rho.sqrt() * a2.sin(), 0.0));
        maxwell = maxwell.min(1e-9 - e1.max_abs_diff(&e2));
    }
    out.push(CheckReport::exact("incn_representative_planar", format!("{} draws x 20 tau", cfg.draws), -planar));
    out.push(CheckReport::margin("heisenberg_frame", format!("{} draws x 20 tau, fd h=1e-5", cfg.draws), hframe));
    out.push(CheckReport::margin("maxwell_endpoint", format!("{} circle pairs at tau=2pi", cfg.draws), maxwell));

    let mut jac = f64::INFINITY;
    for _ in 0..cfg.draws {
        let p = ExpParams::<f64>::new(
            rng.random_range(-1.5..1.5),
            rng.random_range(-1.5..1.5),
            rng.random_range(0.0..2.0),
            rng.random_range(0.1..8.0),
        );
        let j = exp_jacobian(&p);
        for c in 0..4 {
            let h = 1e-6 * p.to_array()[c].abs().max(1.0);
            let mut a = p.to_array();
            let mut b = p.to_array();
            a[c] += h;
            b[c] -= h;
            let fa = exp_factored(&ExpParams::from_array(a)).to_array();
            let fb = exp_factored(&ExpParams::from_array(b)).to_array();
            for r in 0..4 {
                let fd = (fa[r] - fb[r]) / (2.0 * h);
                jac = jac.min(1e-6 - (fd - j[r][c]).abs() / j[r][c].abs().max(1.0));
            }
        }
    }
    out.push(CheckReport::margin("jacobian_fd", format!("{} random points", cfg.draws), jac));

    let opts = ConnectOptions::default();
    let mut trip = f64::INFINITY;
    let mut length = f64::INFINITY;
    let mut failures = 0usize;
    for _ in 0..cfg.round_trips {
        let (_, t, q) = forward_endpoint(&mut rng, 2.0 * PI);
        match connect(&q, &opts) {
            Ok(ans) => {
                trip = trip.min(1e-7 - ans.endpoint().max_abs_diff(&q));
                length = length.min(1e-7 - (ans.length - t).abs());
            }
            Err(_) => failures += 1,
        }
    }
    let trip_desc = format!("{} forward endpoints, tau below min(first criticality, 2pi)", cfg.round_trips);
    out.push(CheckReport::margin("connect_round_trip", trip_desc.clone(), if failures > 0 { -(failures as f64) } else { trip }));
    out.push(CheckReport::margin("connect_length", trip_desc, if failures > 0 { -(failures as f64) } else { length }));

    let mut conn_equiv = f64::INFINITY;
    for _ in 0..(cfg.draws / 2).max(1) {
        let (_, _, q) = forward_endpoint(&mut rng, 2.0 * PI);
        let r = random_rotation(&mut rng);
        let rq = act(&r, &q);
        let inv = invariants_of_point(&q).max_abs_diff(&invariants_of_point(&rq));
        let value = match (connect(&q, &opts), connect(&rq, &opts)) {
            (Ok(a), Ok(b)) => {
                let pa = a.params.map(|p| p.to_array()).unwrap_or_default();
                let pb = b.params.map(|p| p.to_array()).unwrap_or_default();
                let rot = b.rotation.max_abs_diff(&r.compose(&a.rotation));
                1e-9 - crate::linalg::max_abs_diff(&pa, &pb).max(rot).max(inv * 1e3)
            }
            _ => -1.0,
        };
        conn_equiv = conn_equiv.min(value);
    }
    out.push(CheckReport::margin("connect_equivariance", format!("{} rotated endpoints", (cfg.draws / 2).max(1)), conn_equiv));

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyConfig {
        VerifyConfig {
            grid_points: 2000,
            det_grid: TauGrid { step: 0.05, tau_max: 50.0 },
            draws: 8,
            round_trips: 4,
            oracle_t_max: 2.0,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn quick_suite_passes() {
        for r in run(&quick()) {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn mutation_breaks_cross_check_only_where_expected() {
        let cfg = VerifyConfig { mutation: Some(Mutation::FlipD11), ..quick() };
        let report = run(&cfg);
        let get = |name: &str| report.iter().find(|r| r.check == name).unwrap().pass;
        assert!(get("f_positive"));
        assert!(!get("collinearity_det_cross_check"));
    }
}
