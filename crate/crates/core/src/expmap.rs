//! The factorized exponential map and the connection problem.
//!
//! Modulo SO(3), the endpoint of the geodesic with canonical parameters
//! `(C₁, C₂, C̄₃)` at `τ = Kt` is determined by its invariants
//! `(x, (ℓ,ℓ), (ℓ,y), (y,y))`. Inverting this 4×4 map recovers the
//! parameters; the rotation is then read off from orthonormal frames built
//! from `ℓ` and `y`.
//!
//! The map is homogeneous: scaling `C` by `s` scales `x` by `s`, `(ℓ,ℓ)` by
//! `s²`, `(ℓ,y)` by `s³` and `(y,y)` by `s⁴` at fixed `τ`. Inversion is done
//! on the normalized target and rescaled.

use serde::{Deserialize, Serialize};

use crate::dynamics::GeodesicParams;
use crate::error::{Error, Result};
use crate::group::GroupPoint;
use crate::linalg::{self, Lu, Vec3};
use crate::newton::{self, NewtonFailure, NewtonOptions};
use crate::optimality::{heisenberg_project, HeisenbergPoint};
use crate::scalar::Real;
use crate::symmetry::{
    act, in_cn, invariants_from_components, invariants_of_point, representative_components,
    representative_point, CanonicalParams, InvariantTuple, Rotation, DEFAULT_COLLINEARITY_TOL,
};
use crate::trig;

/// Canonical parameters together with the reduced time `τ = Kt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpParams<T> {
    pub c1: T,
    pub c2: T,
    pub c3bar: T,
    pub tau: T,
}

impl<T: Real> ExpParams<T> {
    pub fn new(c1: T, c2: T, c3bar: T, tau: T) -> Self {
        Self { c1, c2, c3bar, tau }
    }

    pub fn to_array(&self) -> [T; 4] {
        [self.c1, self.c2, self.c3bar, self.tau]
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    /// `K = 1/√(C₁² + C₂² + C̄₃²)`.
    pub fn k(&self) -> T {
        T::one() / self.radius()
    }

    /// Arc length `T = τ/K`.
    pub fn length(&self) -> T {
        self.tau * self.radius()
    }

    fn radius(&self) -> T {
        (self.c1 * self.c1 + self.c2 * self.c2 + self.c3bar * self.c3bar).sqrt()
    }

    pub fn canonical(&self) -> CanonicalParams<T> {
        CanonicalParams::unit(self.c1, self.c2, self.c3bar)
    }

    /// Representative endpoint (`ℓ₃ = y₃ = 0`).
    pub fn endpoint(&self) -> GroupPoint<T> {
        representative_point(self.tau, &self.canonical())
    }
}

/// Invariants of the representative endpoint.
pub fn exp_factored<T: Real>(p: &ExpParams<T>) -> InvariantTuple<T> {
    invariants_from_components(p.tau, p.c1, p.c2, p.c3bar)
}

/// Jacobian of [`exp_factored`]; row `i` is the gradient of the `i`-th
/// invariant with respect to `(C₁, C₂, C̄₃, τ)`.
pub fn exp_jacobian<T: Real>(p: &ExpParams<T>) -> [[T; 4]; 4] {
    let ExpParams { c1, c2, c3bar: c3, tau } = *p;
    let h = T::half();
    let (s, c) = tau.sin_cos();
    let o = trig::one_minus_cos(tau);
    let m = trig::tau_minus_sin(tau);
    let (b1, b2) = (trig::b1(tau), trig::b2(tau));
    let rho = c1 * c1 + c2 * c2;
    let [_, l1, l2, y1, y2] = representative_components(tau, c1, c2, c3);

    let dx = [-o, s, T::zero(), -c1 * s + c2 * c];
    let dl1 = [s, o, T::zero(), c1 * c + c2 * s];
    let dl2 = [T::zero(), T::zero(), tau, c3];
    let dy1 = [c1 * m, c2 * m, T::zero(), h * rho * o];
    let db1 = tau * s - o;
    let db2 = s - tau * c;
    let dy2 = [h * c3 * b1, h * c3 * b2, h * (c1 * b1 + c2 * b2), h * c3 * (c1 * db1 + c2 * db2)];

    let two = T::two();
    [
        dx,
        std::array::from_fn(|j| two * (l1 * dl1[j] + l2 * dl2[j])),
        std::array::from_fn(|j| dl1[j] * y1 + l1 * dy1[j] + dl2[j] * y2 + l2 * dy2[j]),
        std::array::from_fn(|j| two * (y1 * dy1[j] + y2 * dy2[j])),
    ]
}

/// Step of the sign scan in [`first_critical_time`].
pub const CRITICAL_SCAN_STEP: f64 = 1e-2;

/// First `τ ∈ (0, tau_max]` at which `det J` changes sign along the ray
/// `(C₁, C₂, C̄₃)` fixed, located by a scan with `step` and refined by
/// bisection. `None` if the sign is constant.
pub fn first_critical_time<T: Real>(c1: T, c2: T, c3bar: T, tau_max: T, step: T) -> Option<T> {
    let det = |tau: T| Lu::new(exp_jacobian(&ExpParams::new(c1, c2, c3bar, tau))).determinant();
    let mut prev_tau = step.min(tau_max);
    let sign = det(prev_tau) > T::zero();
    let mut tau = prev_tau;
    while tau < tau_max {
        tau = (tau + step).min(tau_max);
        let d = det(tau);
        if (d > T::zero()) != sign || d == T::zero() {
            let (mut lo, mut hi) = (prev_tau, tau);
            for _ in 0..60 {
                let mid = T::half() * (lo + hi);
                if (det(mid) > T::zero()) == sign && det(mid) != T::zero() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(hi);
        }
        prev_tau = tau;
    }
    None
}

/// Seeding scan for [`invert_exp`].
///
/// Write `ℓ̄ = √(ℓ,ℓ)(cos θ, sin θ)` with `θ ∈ [0, π]`. The invariants then
/// fix `ȳ = ((ℓ,y)ℓ̄ − √G ℓ̄⊥)/(ℓ,ℓ)` with `G = (ℓ,ℓ)(y,y) − (ℓ,y)²`, the
/// sign of the area coming from the definite collinearity form. The `x` and
/// `ℓ̄₁` equations are linear in `(C₁, C₂)`, and the `ȳ₁` equation reads
/// `(τ − sin τ)/(4(1 − cos τ)) = ȳ₁/(x² + ℓ̄₁²)`, which has one root per
/// monotone branch in `τ`. Along each branch the `ȳ₂` equation is a scalar
/// function of `θ`, scanned on `thetas` points and bisected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedGrid {
    /// Points in `θ ∈ [0, π]`.
    pub thetas: usize,
    /// Periods `(2πk, 2π(k+1))` of `τ` searched.
    pub periods: usize,
}

impl Default for SeedGrid {
    fn default() -> Self {
        Self { thetas: 400, periods: 2 }
    }
}

/// `(τ − sin τ)/(4(1 − cos τ))`.
fn ratio<T: Real>(tau: T) -> T {
    trig::tau_minus_sin(tau) / (T::lit(4.0) * trig::one_minus_cos(tau))
}

fn bisect<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T) -> T {
    let flo = f(lo) <= T::zero();
    for _ in 0..200 {
        let mid = T::half() * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) <= T::zero()) == flo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    T::half() * (lo + hi)
}

impl SeedGrid {
    /// Branch endpoints `(lo, hi)` on which [`ratio`] is monotone: `(0, 2π)`
    /// and then both sides of the minimum in each later period.
    fn branches<T: Real>(&self) -> Vec<(T, T, T)> {
        let two_pi = T::lit(2.0 * std::f64::consts::PI);
        let eps = T::lit(1e-9);
        let mut out = vec![(eps, two_pi - eps, T::zero())];
        for k in 1..self.periods {
            let (a, b) = (two_pi * T::from_usize_lossy(k) + eps, two_pi * T::from_usize_lossy(k + 1) - eps);
            // golden section for the minimum
            let g = T::lit(0.618_033_988_749_894_9);
            let (mut lo, mut hi) = (a, b);
            for _ in 0..100 {
                let m1 = hi - g * (hi - lo);
                let m2 = lo + g * (hi - lo);
                if ratio(m1) < ratio(m2) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let m = T::half() * (lo + hi);
            out.push((a, m, ratio(m)));
            out.push((m, b, ratio(m)));
        }
        out
    }

    fn solve_tau<T: Real>(branch: (T, T, T), value: T) -> Option<T> {
        let (lo, hi, floor) = branch;
        if !(value > floor) {
            return None;
        }
        let f = |t: T| ratio(t) - value;
        if (f(lo) <= T::zero()) == (f(hi) <= T::zero()) {
            return None;
        }
        Some(bisect(f, lo, hi))
    }

    /// Parameters at `θ` on `branch` and the `ȳ₂` residual there.
    fn at<T: Real>(target: &[T; 4], branch: (T, T, T), theta: T) -> Option<([T; 4], T)> {
        let [x, ll, ly, yy] = *target;
        let r = ll.sqrt();
        let g = (ll * yy - ly * ly).max(T::zero()).sqrt();
        let (l1, l2) = (r * theta.cos(), r * theta.sin());
        let y1 = (ly * l1 + g * l2) / ll;
        let y2 = (ly * l2 - g * l1) / ll;
        let tau = Self::solve_tau(branch, y1 / (x * x + l1 * l1))?;
        let (s, o) = (tau.sin(), trig::one_minus_cos(tau));
        // [−O S; S O]⁻¹ = [−O S; S O] / (2O)
        let d = T::two() * o;
        let p = [(-o * x + s * l1) / d, (s * x + o * l1) / d, l2 / tau, tau];
        let [_, _, _, _, y2_curve] = representative_components(tau, p[0], p[1], p[2]);
        let res = y2_curve - y2;
        (res.is_finite() && p.iter().all(|v| v.is_finite())).then_some((p, res))
    }

    fn starts<T: Real>(&self, target: &[T; 4]) -> Vec<[T; 4]> {
        let n = self.thetas.max(2);
        let pi = T::PI();
        let mut starts = Vec::new();
        for branch in self.branches::<T>() {
            let mut prev: Option<(T, T)> = None;
            for j in 0..n {
                let theta = pi * T::from_usize_lossy(j) / T::from_usize_lossy(n - 1);
                let Some((p, res)) = Self::at(target, branch, theta) else {
                    prev = None;
                    continue;
                };
                if res == T::zero() {
                    starts.push(p);
                } else if let Some((t0, r0)) = prev {
                    if (r0 < T::zero()) != (res < T::zero()) {
                        let f = |t: T| Self::at(target, branch, t).map_or(T::nan(), |(_, r)| r);
                        let root = bisect(|t| if (f(t) < T::zero()) == (r0 < T::zero()) { -T::one() } else { T::one() }, t0, theta);
                        if let Some((p, _)) = Self::at(target, branch, root) {
                            starts.push(p);
                        }
                    }
                }
                prev = Some((theta, res));
            }
        }
        starts
    }
}

/// Result of [`invert_exp`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvertOutcome<T> {
    /// The root of least arc length.
    pub params: ExpParams<T>,
    /// `‖F(p) − target‖∞` in normalized units.
    pub residual: T,
    /// Every distinct root below its first critical time, sorted by length.
    pub roots: Vec<ExpParams<T>>,
}

/// Largest `τ` explored by Newton.
const TAU_CAP: f64 = 4.0 * std::f64::consts::PI;

/// Inverts the factorized exponential map on an off-C_n target.
///
/// Starts from the scan in `seeds` are polished by damped Newton; converged roots with
/// `τ` below the first critical time are kept and the shortest one is
/// returned (ties broken lexicographically on `(C₁, C₂, C̄₃, τ)`). Since the
/// invariants are even in `C̄₃`, roots are reported with `C̄₃ ≥ 0`.
pub fn invert_exp<T: Real>(target: &InvariantTuple<T>, tol: T, seeds: &SeedGrid) -> Result<InvertOutcome<T>> {
    let t = target.to_array();
    if !t.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("invariant tuple"));
    }
    if t.iter().all(|v| *v == T::zero()) {
        return Err(Error::Origin);
    }
    let scale = target.ll.abs() * target.yy.abs();
    let gram = target.gram_determinant();
    if target.ll < T::zero() || target.yy < T::zero() || gram < -T::lit(1e-12) * scale {
        return Err(Error::CauchySchwarz);
    }
    let col = T::lit(DEFAULT_COLLINEARITY_TOL);
    if gram <= col * col * scale {
        return Err(Error::CollinearTarget);
    }

    let rho = (target.x * target.x + target.ll + target.yy.sqrt()).sqrt();
    let normalized = [t[0] / rho, t[1] / rho.powi(2), t[2] / rho.powi(3), t[3] / rho.powi(4)];
    let eval = |p: &[T; 4]| {
        if !(p[3] > T::zero() && p[3] <= T::lit(TAU_CAP)) || !p.iter().all(|v| v.is_finite()) {
            return None;
        }
        let ep = ExpParams::from_array(*p);
        let f = exp_factored(&ep).to_array();
        Some((std::array::from_fn(|i| f[i] - normalized[i]), exp_jacobian(&ep)))
    };
    let opts = NewtonOptions { tol: tol * T::lit(1e-3), ..NewtonOptions::default() };

    let mut converged: Vec<([T; 4], T)> = Vec::new();
    let mut best_residual = T::infinity();
    let mut singular = None;
    let mut any_regular = false;
    for seed in seeds.starts(&normalized) {
        match newton::solve(eval, seed, &opts) {
            Ok(sol) => {
                any_regular = true;
                best_residual = best_residual.min(sol.residual);
                if sol.residual <= tol {
                    let mut x = sol.x;
                    x[2] = x[2].abs();
                    converged.push((x, sol.residual));
                }
            }
            Err(NewtonFailure::Singular(det)) => singular = Some(det),
            Err(NewtonFailure::Stalled(r)) => {
                any_regular = true;
                best_residual = best_residual.min(r);
            }
        }
    }
    if converged.is_empty() {
        return Err(match (any_regular, singular) {
            (false, Some(det)) => Error::SingularJacobian(det.to_f64().unwrap_or(f64::NAN)),
            _ => Error::NoConvergence { best_residual: best_residual.to_f64().unwrap_or(f64::NAN) },
        });
    }

    let mut distinct: Vec<([T; 4], T)> = Vec::new();
    for (x, r) in converged {
        if !distinct.iter().any(|(d, _)| linalg::max_abs_diff(d, &x) <= T::lit(1e-6)) {
            distinct.push((x, r));
        }
    }
    let step = T::lit(CRITICAL_SCAN_STEP);
    distinct.retain(|(x, _)| first_critical_time(x[0], x[1], x[2], x[3], step).is_none());
    if distinct.is_empty() {
        return Err(Error::OutOfValidatedRange);
    }
    let length = |x: &[T; 4]| ExpParams::from_array(*x).length();
    distinct.sort_by(|(a, _), (b, _)| {
        let (la, lb) = (length(a), length(b));
        if (la - lb).abs() <= T::lit(1e-9) * la.max(lb) {
            a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal)
        } else {
            la.partial_cmp(&lb).unwrap_or(std::cmp::Ordering::Equal)
        }
    });
    let unscale = |x: &[T; 4]| ExpParams::new(x[0] * rho, x[1] * rho, x[2] * rho, x[3]);
    Ok(InvertOutcome {
        params: unscale(&distinct[0].0),
        residual: distinct[0].1,
        roots: distinct.iter().map(|(x, _)| unscale(x)).collect(),
    })
}

fn frame<T: Real>(q: &GroupPoint<T>) -> Result<[Vec3<T>; 3]> {
    let nl = linalg::norm(&q.ell);
    let ny = linalg::norm(&q.y);
    if nl == T::zero() || ny == T::zero() {
        return Err(Error::CollinearFrame);
    }
    let e1 = linalg::scale(T::one() / nl, &q.ell);
    let yp = linalg::sub(&q.y, &linalg::scale(linalg::dot(&q.y, &e1), &e1));
    let np = linalg::norm(&yp);
    if np <= T::lit(1e-12) * ny {
        return Err(Error::CollinearFrame);
    }
    let e2 = linalg::scale(T::one() / np, &yp);
    Ok([e1, e2, linalg::cross(&e1, &e2)])
}

/// The rotation `R` with `act(R, q̄) = q`, for points with equal
/// invariants and non-collinear `ℓ`, `y`.
pub fn recover_rotation<T: Real>(q: &GroupPoint<T>, qbar: &GroupPoint<T>) -> Result<Rotation<T>> {
    let a = invariants_of_point(q);
    let b = invariants_of_point(qbar);
    let scale = a.to_array().iter().fold(T::one(), |m, v| m.max(v.abs()));
    if a.max_abs_diff(&b) > T::lit(1e-6) * scale {
        return Err(Error::InvalidArgument("points have different invariants".into()));
    }
    let f = frame(q)?;
    let g = frame(qbar)?;
    let m = std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(T::zero(), |acc, k| acc + f[k][i] * g[k][j]))
    });
    Rotation::new(m)
}

/// Which construction produced a [`GeodesicAnswer`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Line,
    InCn,
    OffCn,
}

/// A unit-speed geodesic from the origin to a requested endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicAnswer<T> {
    pub branch: Branch,
    /// Canonical parameters and `τ`; `None` for straight lines.
    pub params: Option<ExpParams<T>>,
    /// Unit direction of `(x, ℓ)` for straight lines.
    pub direction: Option<[T; 4]>,
    pub k: T,
    pub rotation: Rotation<T>,
    pub length: T,
    /// `‖endpoint − target‖∞`.
    pub residual: T,
    /// The endpoint lies on the vertical set `(0, 0, y)` reached at the cut time.
    pub maxwell: bool,
    /// All roots found by the inversion (off C_n only).
    pub roots: Vec<ExpParams<T>>,
}

impl<T: Real> GeodesicAnswer<T> {
    /// Point of the geodesic at arc length `t`.
    pub fn point_at(&self, t: T) -> GroupPoint<T> {
        match (self.params, self.direction) {
            (Some(p), _) => act(&self.rotation, &representative_point(self.k * t, &p.canonical())),
            (None, Some(d)) => GroupPoint::new(d[0] * t, [d[1] * t, d[2] * t, d[3] * t], [T::zero(); 3]),
            (None, None) => GroupPoint::identity(),
        }
    }

    pub fn endpoint(&self) -> GroupPoint<T> {
        self.point_at(self.length)
    }

    /// Full parameters `(C, K⃗)` of the geodesic.
    pub fn geodesic_params(&self) -> Result<GeodesicParams<T>> {
        match (self.params, self.direction) {
            (Some(p), _) => CanonicalParams { rotation: self.rotation, ..p.canonical() }.to_geodesic_params(),
            (None, Some(d)) => Ok(GeodesicParams::new(d, [T::zero(); 3])),
            (None, None) => Err(Error::Origin),
        }
    }
}

/// Options for [`connect`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectOptions<T> {
    /// Residual tolerance in normalized units.
    pub tol: T,
    pub collinearity_tol: T,
    pub seeds: SeedGrid,
}

impl<T: Real> Default for ConnectOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-10), collinearity_tol: T::lit(DEFAULT_COLLINEARITY_TOL), seeds: SeedGrid::default() }
    }
}

/// Finds a unit-speed geodesic from the origin to `q`.
///
/// Points with `y = 0` are reached by straight lines. Points of C_n are
/// handled in the Heisenberg quotient, where the answer is exact up to the
/// cut time `2π√ρ`; vertical points `(0, 0, y)` are Maxwell points reached
/// exactly at the cut time. Everything else goes through [`invert_exp`] and
/// [`recover_rotation`].
pub fn connect<T: Real>(q: &GroupPoint<T>, opts: &ConnectOptions<T>) -> Result<GeodesicAnswer<T>> {
    if !q.is_finite() {
        return Err(Error::NonFinite("endpoint"));
    }
    let horizontal = [q.x, q.ell[0], q.ell[1], q.ell[2]];
    let r = horizontal.iter().fold(T::zero(), |acc, v| acc.hypot(*v));
    let ny = linalg::norm(&q.y);
    if r == T::zero() && ny == T::zero() {
        return Err(Error::Origin);
    }
    // branch tests run on the dilated point with ρ = 1, so they are scale free
    let rho2 = r * r + ny;
    if ny <= opts.tol * rho2 && r > T::zero() {
        return Ok(GeodesicAnswer {
            branch: Branch::Line,
            params: None,
            direction: Some(horizontal.map(|v| v / r)),
            k: T::zero(),
            rotation: Rotation::identity(),
            length: r,
            residual: ny,
            maxwell: false,
            roots: Vec::new(),
        });
    }
    let rho = rho2.sqrt();
    let dilated = GroupPoint::new(q.x / rho, linalg::scale(T::one() / rho, &q.ell), linalg::scale(T::one() / rho2, &q.y));
    if in_cn(&dilated, opts.collinearity_tol) {
        return connect_in_cn(q, &dilated, rho, opts);
    }
    let outcome = invert_exp(&invariants_of_point(q), opts.tol, &opts.seeds)?;
    let p = outcome.params;
    let cp = p.canonical();
    let qbar = representative_point(p.tau, &cp);
    let rotation = recover_rotation(q, &qbar)?;
    let residual = act(&rotation, &qbar).max_abs_diff(q);
    Ok(GeodesicAnswer {
        branch: Branch::OffCn,
        params: Some(p),
        direction: None,
        k: cp.k,
        rotation,
        length: p.length(),
        residual,
        maxwell: false,
        roots: outcome.roots,
    })
}

fn connect_in_cn<T: Real>(q: &GroupPoint<T>, dilated: &GroupPoint<T>, rho: T, opts: &ConnectOptions<T>) -> Result<GeodesicAnswer<T>> {
    let h = heisenberg_project(dilated, opts.collinearity_tol)?;
    let h = HeisenbergPoint { x: h.x * rho, l: h.l * rho, y: h.y * rho * rho };
    let nl = linalg::norm(&q.ell);
    let mut u = if nl > T::zero() { linalg::scale(T::one() / nl, &q.ell) } else { linalg::scale(T::one() / linalg::norm(&q.y), &q.y) };
    let (x, mut a, mut b) = (h.x, h.l, h.y);
    if b < T::zero() {
        a = -a;
        b = -b;
        u = linalg::scale(-T::one(), &u);
    }
    let r2 = x * x + a * a;
    let two_pi = T::lit(2.0 * std::f64::consts::PI);
    let (p, maxwell) = if r2 <= opts.tol * b {
        let rho = b / T::PI();
        (ExpParams::new(rho.sqrt(), T::zero(), T::zero(), two_pi), true)
    } else {
        (solve_heisenberg(x, a, b, opts.tol)?, false)
    };
    let cp = p.canonical();
    let rotation = Rotation::minimal_from_e1(&u);
    let residual = act(&rotation, &representative_point(p.tau, &cp)).max_abs_diff(q);
    Ok(GeodesicAnswer {
        branch: Branch::InCn,
        params: Some(p),
        direction: None,
        k: cp.k,
        rotation,
        length: p.length(),
        residual,
        maxwell,
        roots: vec![p],
    })
}

/// Solves `(x, l, y) = (C₁(cos τ − 1) + C₂ sin τ, C₁ sin τ + C₂(1 − cos τ),
/// ½ρ(τ − sin τ))` for `τ ∈ (0, 2π)`, `y > 0`.
///
/// `y/(x² + l²) = (τ − sin τ)/(4(1 − cos τ))` is increasing in `τ`, which
/// gives the seed; Newton in `(C₁, C₂, τ)` polishes it.
fn solve_heisenberg<T: Real>(x: T, l: T, y: T, tol: T) -> Result<ExpParams<T>> {
    let r2 = x * x + l * l;
    let ratio = y / r2;
    let g = |tau: T| trig::tau_minus_sin(tau) / (T::lit(4.0) * trig::one_minus_cos(tau));
    let (mut lo, mut hi) = (T::zero(), T::lit(2.0 * std::f64::consts::PI));
    for _ in 0..200 {
        let mid = T::half() * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid) < ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = T::half() * (lo + hi);
    let (s, o) = (tau.sin(), trig::one_minus_cos(tau));
    let seed = [(o * x - s * l) / (-T::two() * o), (s * x + o * l) / (T::two() * o), tau];

    let scale = r2.sqrt().max(y.abs().sqrt());
    let target = [x / scale, l / scale, y / (scale * scale)];
    let seed = [seed[0] / scale, seed[1] / scale, seed[2]];
    let eval = |p: &[T; 3]| {
        let [c1, c2, tau] = *p;
        if !(tau > T::zero() && tau <= T::lit(2.0 * std::f64::consts::PI)) {
            return None;
        }
        let [fx, fl, _, fy, _] = representative_components(tau, c1, c2, T::zero());
        let (s, c) = tau.sin_cos();
        let o = trig::one_minus_cos(tau);
        let m = trig::tau_minus_sin(tau);
        let rho = c1 * c1 + c2 * c2;
        let jac = [
            [-o, s, -c1 * s + c2 * c],
            [s, o, c1 * c + c2 * s],
            [c1 * m, c2 * m, T::half() * rho * o],
        ];
        Some(([fx - target[0], fl - target[1], fy - target[2]], jac))
    };
    let opts = NewtonOptions { tol: tol * T::lit(1e-3), ..NewtonOptions::default() };
    let sol = match newton::solve(eval, seed, &opts) {
        Ok(sol) => sol,
        Err(NewtonFailure::Singular(det)) => return Err(Error::SingularJacobian(det.to_f64().unwrap_or(f64::NAN))),
        Err(NewtonFailure::Stalled(r)) => return Err(Error::NoConvergence { best_residual: r.to_f64().unwrap_or(f64::NAN) }),
    };
    if sol.residual > tol {
        return Err(Error::NoConvergence { best_residual: sol.residual.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(ExpParams::new(sol.x[0] * scale, sol.x[1] * scale, T::zero(), sol.x[2]))
}
