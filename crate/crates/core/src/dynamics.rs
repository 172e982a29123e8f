//! Normal Pontryagin extremals of the left-invariant problem.
//!
//! On `T*N` we use the left-invariant fiber coordinates `hⱼ = λ(Nⱼ)`,
//! `wᵢ = λ(N₀ᵢ)`. The Hamiltonian is `H = ½|h|²`, the controls are `uⱼ = hⱼ`,
//! `w` is constant and the horizontal part of the covector rotates as
//! `ḣ = −Ω_w h` with
//!
//! ```text
//!        ⎛  0   K₁  K₂  K₃ ⎞
//! Ω_w =  ⎜ −K₁  0   0   0  ⎟ ,   (K₁, K₂, K₃) = w.
//!        ⎜ −K₂  0   0   0  ⎟
//!        ⎝ −K₃  0   0   0  ⎠
//! ```
//!
//! Closed-form solutions are parameterized by [`GeodesicParams`]; the RK4
//! integrator in [`integrate_numeric`] is kept independent of them and is
//! used as their oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupPoint, LieAlgebra, Generator};
use crate::linalg::{self, Vec3};
use crate::scalar::Real;
use crate::trig;

/// Below this norm of `(K₁, K₂, K₃)` a geodesic is treated as a straight line.
pub const LINE_THRESHOLD: f64 = 1e-12;

/// Default fixed RK4 step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Fiber coordinates `(h₀, h₁, h₂, h₃, w₁, w₂, w₃)` of a covector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CotangentState<T> {
    pub h: [T; 4],
    pub w: Vec3<T>,
}

/// A point of `T*N`: base point plus fiber coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullState<T> {
    pub q: GroupPoint<T>,
    pub lambda: CotangentState<T>,
}

impl<T: Real> FullState<T> {
    /// `(x, ℓ, y, h, w)` flattened in CSV column order.
    pub fn to_array(&self) -> [T; 14] {
        let q = self.q.to_array();
        let mut out = [T::zero(); 14];
        out[..7].copy_from_slice(&q);
        out[7..11].copy_from_slice(&self.lambda.h);
        out[11..].copy_from_slice(&self.lambda.w);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// The constants `(C₁, C₂, C₃, C₄)` and `(K₁, K₂, K₃)` of a geodesic from
/// the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicParams<T> {
    pub c: [T; 4],
    pub kvec: Vec3<T>,
}

impl<T: Real> GeodesicParams<T> {
    pub fn new(c: [T; 4], kvec: Vec3<T>) -> Self {
        Self { c, kvec }
    }

    /// Parses the order `C1, C2, C3, C4, K1, K2, K3`.
    pub fn from_array(a: [T; 7]) -> Self {
        Self::new([a[0], a[1], a[2], a[3]], [a[4], a[5], a[6]])
    }

    pub fn to_array(&self) -> [T; 7] {
        let (c, k) = (self.c, self.kvec);
        [c[0], c[1], c[2], c[3], k[0], k[1], k[2]]
    }

    /// `K = |(K₁, K₂, K₃)|`.
    pub fn k(&self) -> T {
        linalg::norm(&self.kvec)
    }

    pub fn is_line(&self) -> bool {
        self.k() < T::lit(LINE_THRESHOLD)
    }

    /// `C₁ = C₂ = 0` with `K > 0`: constant controls, flagged but evaluable.
    pub fn is_constant_control(&self) -> bool {
        !self.is_line() && self.c[0] == T::zero() && self.c[1] == T::zero()
    }

    /// `z₁ = (K₁, K₂, K₃)`.
    pub fn z1(&self) -> Vec3<T> {
        self.kvec
    }

    /// `z₂ = (−C₃K₃ − C₄K₂, C₄K₁, C₃K₁)`, orthogonal to `z₁`.
    pub fn z2(&self) -> Vec3<T> {
        let [_, _, c3, c4] = self.c;
        let [k1, k2, k3] = self.kvec;
        [-c3 * k3 - c4 * k2, c4 * k1, c3 * k1]
    }

    /// Left-hand side of the unit level-set equation, i.e. `2H`.
    pub fn level_lhs(&self) -> T {
        if self.is_line() {
            self.c.iter().fold(T::zero(), |acc, c| acc + *c * *c)
        } else {
            let k2 = linalg::dot(&self.kvec, &self.kvec);
            let z2 = self.z2();
            k2 * (self.c[0] * self.c[0] + self.c[1] * self.c[1]) + linalg::dot(&z2, &z2)
        }
    }

    fn check_finite(&self) -> Result<()> {
        if self.to_array().iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("geodesic parameters"))
        }
    }
}

/// `H = ½(h₀² + h₁² + h₂² + h₃²)`.
pub fn hamiltonian<T: Real>(s: &CotangentState<T>) -> T {
    T::half() * s.h.iter().fold(T::zero(), |acc, h| acc + *h * *h)
}

/// `Ω_w h` for the skew matrix built from `w`.
pub fn omega_times<T: Real>(w: &Vec3<T>, h: &[T; 4]) -> [T; 4] {
    [
        w[0] * h[1] + w[1] * h[2] + w[2] * h[3],
        -w[0] * h[0],
        -w[1] * h[0],
        -w[2] * h[0],
    ]
}

/// Fiber velocity `ḣⱼ = −Σ c_{jl}^k h_l w_k` assembled from the structure
/// constants of the Lie algebra. Agrees with `−Ω_w h`.
pub fn fiber_rhs_from_structure<T: Real>(s: &CotangentState<T>) -> [T; 4] {
    let alg = LieAlgebra;
    let mut out = [T::zero(); 4];
    for (j, o) in out.iter_mut().enumerate() {
        let gj = Generator::from_index(j).unwrap();
        for l in 0..4 {
            let gl = Generator::from_index(l).unwrap();
            for k in 0..3 {
                let gk = Generator::from_index(4 + k).unwrap();
                let c: T = alg.structure_constant(gj, gl, gk);
                *o = *o - c * s.h[l] * s.w[k];
            }
        }
    }
    out
}

/// Right-hand side of the normal Hamiltonian system. The returned state
/// holds time derivatives; its `w` part is identically zero.
pub fn ode_rhs<T: Real>(s: &FullState<T>) -> FullState<T> {
    let h = s.lambda.h;
    let q = &s.q;
    let mut dy = [T::zero(); 3];
    for (i, d) in dy.iter_mut().enumerate() {
        *d = T::half() * (q.x * h[1 + i] - h[0] * q.ell[i]);
    }
    let om = omega_times(&s.lambda.w, &h);
    FullState {
        q: GroupPoint::new(h[0], [h[1], h[2], h[3]], dy),
        lambda: CotangentState { h: om.map(|v| -v), w: [T::zero(); 3] },
    }
}

/// A sampled trajectory of the Hamiltonian system.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<FullState<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(T, &FullState<T>)> {
        self.times.last().copied().zip(self.states.last())
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, &FullState<T>)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

/// CSV header of exported trajectories.
pub const TRAJECTORY_HEADER: [&str; 15] = [
    "t", "x", "l1", "l2", "l3", "y1", "y2", "y3", "h0", "h1", "h2", "h3", "w1", "w2", "w3",
];

type Dyn<T> = [T; 11];

fn pack<T: Real>(s: &FullState<T>) -> Dyn<T> {
    let mut out = [T::zero(); 11];
    out[..7].copy_from_slice(&s.q.to_array());
    out[7..].copy_from_slice(&s.lambda.h);
    out
}

fn unpack<T: Real>(v: &Dyn<T>, w: Vec3<T>) -> FullState<T> {
    let mut q = [T::zero(); 7];
    q.copy_from_slice(&v[..7]);
    FullState {
        q: GroupPoint::from_array(q),
        lambda: CotangentState { h: [v[7], v[8], v[9], v[10]], w },
    }
}

fn axpy<T: Real>(a: T, x: &Dyn<T>, y: &Dyn<T>) -> Dyn<T> {
    let mut out = *y;
    for (o, xi) in out.iter_mut().zip(x) {
        *o = *o + a * *xi;
    }
    out
}

/// One classical RK4 step. `w` is a constant of motion and is carried over
/// untouched rather than integrated.
pub fn rk4_step<T: Real>(s: &FullState<T>, dt: T) -> FullState<T> {
    let w = s.lambda.w;
    let f = |v: &Dyn<T>| pack(&ode_rhs(&unpack(v, w)));
    let y0 = pack(s);
    let half = T::half() * dt;
    let k1 = f(&y0);
    let k2 = f(&axpy(half, &k1, &y0));
    let k3 = f(&axpy(half, &k2, &y0));
    let k4 = f(&axpy(dt, &k3, &y0));
    let sixth = dt / T::lit(6.0);
    let mut y = y0;
    for i in 0..11 {
        y[i] = y[i] + sixth * (k1[i] + T::two() * (k2[i] + k3[i]) + k4[i]);
    }
    unpack(&y, w)
}

/// Fixed-step RK4 integration of [`ode_rhs`] on `[0, t_end]`.
///
/// The step is shrunk so that an integer number of steps lands exactly on
/// `t_end`; every step is sampled.
pub fn integrate_numeric<T: Real>(initial: &FullState<T>, t_end: T, step: T) -> Result<Trajectory<T>> {
    if !initial.is_finite() {
        return Err(Error::NonFinite("initial state"));
    }
    if !t_end.is_finite() || !step.is_finite() {
        return Err(Error::NonFinite("time span"));
    }
    if step <= T::zero() || t_end <= T::zero() {
        return Err(Error::InvalidArgument("step and T must be positive".into()));
    }
    let n = (t_end / step).ceil().to_usize().unwrap_or(1).max(1);
    let dt = t_end / T::from_usize_lossy(n);
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut s = *initial;
    times.push(T::zero());
    states.push(s);
    for i in 1..=n {
        s = rk4_step(&s, dt);
        times.push(if i == n { t_end } else { dt * T::from_usize_lossy(i) });
        states.push(s);
    }
    Ok(Trajectory { times, states })
}

/// Closed-form fiber solution `h(t)` for `K > 0`:
///
/// ```text
/// h₀ = K(−C₁ sin Kt + C₂ cos Kt)
/// (h₁, h₂, h₃) = (C₁ cos Kt + C₂ sin Kt)·z₁ + z₂
/// ```
///
/// Returns [`Error::ZeroK`] on the line branch, where `h` is constant.
pub fn fiber_solution<T: Real>(t: T, p: &GeodesicParams<T>) -> Result<[T; 4]> {
    p.check_finite()?;
    if p.is_line() {
        return Err(Error::ZeroK);
    }
    let k = p.k();
    let (s, c) = (k * t).sin_cos();
    let [c1, c2, _, _] = p.c;
    let a = c1 * c + c2 * s;
    let z1 = p.z1();
    let z2 = p.z2();
    Ok([
        k * (-c1 * s + c2 * c),
        a * z1[0] + z2[0],
        a * z1[1] + z2[1],
        a * z1[2] + z2[2],
    ])
}

/// Controls `h(t)` on either branch (constant `C` for lines).
pub fn controls<T: Real>(t: T, p: &GeodesicParams<T>) -> [T; 4] {
    fiber_solution(t, p).unwrap_or(p.c)
}

/// Closed-form geodesic from the origin.
///
/// Lines (`K = 0`) are `(C₁t, C₂t, C₃t, C₄t, 0, 0, 0)`. Otherwise, with
/// `τ = Kt`,
///
/// ```text
/// x = C₁(cos τ − 1) + C₂ sin τ
/// ℓ = (C₁ sin τ + C₂(1 − cos τ))/K · z₁ + t z₂
/// y = (C₁² + C₂²)(τ − sin τ)/(2K) · z₁
///   + [C₁(2 sin τ − τ cos τ − τ) + C₂(2 − 2cos τ − τ sin τ)]/(2K) · z₂
/// ```
pub fn geodesic_point<T: Real>(t: T, p: &GeodesicParams<T>) -> GroupPoint<T> {
    let [c1, c2, c3, c4] = p.c;
    if p.is_line() {
        return GroupPoint::new(c1 * t, [c2 * t, c3 * t, c4 * t], [T::zero(); 3]);
    }
    let k = p.k();
    let tau = k * t;
    let s = tau.sin();
    let omc = trig::one_minus_cos(tau);
    let x = -c1 * omc + c2 * s;
    let a = (c1 * s + c2 * omc) / k;
    let z1 = p.z1();
    let z2 = p.z2();
    let ell = linalg::add(&linalg::scale(a, &z1), &linalg::scale(t, &z2));
    let inv2k = T::one() / (T::two() * k);
    let b = (c1 * c1 + c2 * c2) * trig::tau_minus_sin(tau) * inv2k;
    let d = (c1 * trig::b1(tau) + c2 * trig::b2(tau)) * inv2k;
    let y = linalg::add(&linalg::scale(b, &z1), &linalg::scale(d, &z2));
    GroupPoint::new(x, ell, y)
}

/// The full closed-form extremal `(q(t), h(t), w)`.
pub fn closed_form_state<T: Real>(t: T, p: &GeodesicParams<T>) -> FullState<T> {
    FullState {
        q: geodesic_point(t, p),
        lambda: CotangentState { h: controls(t, p), w: p.kvec },
    }
}

/// Initial state at the origin of the extremal with parameters `p`.
pub fn initial_state<T: Real>(p: &GeodesicParams<T>) -> FullState<T> {
    closed_form_state(T::zero(), p)
}

/// Level-set residual `LHS − 1`.
pub fn level_residual<T: Real>(p: &GeodesicParams<T>) -> Result<T> {
    p.check_finite()?;
    if p.to_array().iter().all(|v| *v == T::zero()) {
        return Err(Error::ZeroParams);
    }
    Ok(p.level_lhs() - T::one())
}

/// Rescales `C` (not `K`) so that the parameters lie on the unit level set.
pub fn normalize<T: Real>(p: &GeodesicParams<T>) -> Result<GeodesicParams<T>> {
    level_residual(p)?;
    let lhs = p.level_lhs();
    if lhs <= T::zero() {
        return Err(Error::ZeroParams);
    }
    let s = lhs.sqrt();
    Ok(GeodesicParams::new(p.c.map(|c| c / s), p.kvec))
}
