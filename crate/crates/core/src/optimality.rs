//! Optimality of geodesics relative to C_n.
//!
//! In canonical form the collinearity of `ℓ̄` and `ȳ` is governed by
//!
//! ```text
//! C̄₃ (d₁₁ C₁² + 2 d₁₂ C₁C₂ + d₂₂ C₂²)
//! ```
//!
//! whose quadratic part has discriminant `d = −4τ(τ − sin τ) f(τ)` with
//! `f(τ) = τ² + τ sin τ + 4cos τ − 4 > 0` for `τ > 0`. Hence a geodesic
//! either stays in C_n (`C̄₃ = 0`) or never meets it after the origin.
//! Inside C_n geodesics project onto Heisenberg geodesics and lose
//! optimality at `t_cut = 2π√(C₁² + C₂²)`, on the vertical set `(0, 0, y)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::GeodesicParams;
use crate::error::{Error, Result};
use crate::group::GroupPoint;
use crate::linalg;
use crate::scalar::Real;
use crate::symmetry::{canonicalize, in_cn, representative_components, CanonicalParams};
use crate::trig;

/// Coefficient functions `(d₁₁, d₁₂, d₂₂)` of the collinearity form.
///
/// `d₁₂` is half the `C₁C₂` coefficient, so that the discriminant of the
/// form is `4(d₁₂² − d₁₁d₂₂)`.
pub fn det_coeffs<T: Real>(tau: T) -> (T, T, T) {
    (trig::d11(tau), trig::d12(tau), trig::d22(tau))
}

/// `C̄₃(d₁₁C₁² + 2d₁₂C₁C₂ + d₂₂C₂²)`.
///
/// With the representative geodesic normalized as in
/// [`crate::symmetry::representative_point`] this equals
/// `2(ℓ̄₁ȳ₂ − ℓ̄₂ȳ₁)`; see [`collinearity_minor`].
pub fn collinearity_det<T: Real>(tau: T, cp: &CanonicalParams<T>) -> T {
    let (d11, d12, d22) = det_coeffs(tau);
    cp.c3bar * (d11 * cp.c1 * cp.c1 + T::two() * d12 * cp.c1 * cp.c2 + d22 * cp.c2 * cp.c2)
}

/// `ℓ̄₁ȳ₂ − ℓ̄₂ȳ₁` evaluated on the representative geodesic.
pub fn collinearity_minor<T: Real>(tau: T, cp: &CanonicalParams<T>) -> T {
    let [_, l1, l2, y1, y2] = representative_components(tau, cp.c1, cp.c2, cp.c3bar);
    l1 * y2 - l2 * y1
}

/// `d = −4τ(τ − sin τ)(τ² + τ sin τ + 4cos τ − 4)`.
pub fn discriminant<T: Real>(tau: T) -> T {
    -T::lit(4.0) * tau * trig::tau_minus_sin(tau) * trig::f_function(tau)
}

/// `f(τ)` with its Taylor lower bound `−τ⁶(τ² − 14)/5040` (positive on
/// `(0, √14)`) and the crude bound `τ² − τ − 8` (positive beyond
/// `(1 + √33)/2`).
pub fn f_and_bounds<T: Real>(tau: T) -> (T, T, T) {
    let f = trig::f_function(tau);
    let local = -tau.powi(6) * (tau * tau - T::lit(14.0)) / T::lit(5040.0);
    let global = tau * tau - tau - T::lit(8.0);
    (f, local, global)
}

/// Sampling grid in `τ`, open at 0: `step, 2·step, …, ≤ tau_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauGrid {
    pub step: f64,
    pub tau_max: f64,
}

impl Default for TauGrid {
    fn default() -> Self {
        Self { step: 1e-3, tau_max: 50.0 }
    }
}

impl TauGrid {
    /// Grid of `n` equally spaced points in `(0, tau_max]`.
    pub fn with_points(n: usize, tau_max: f64) -> Self {
        Self { step: tau_max / n as f64, tau_max }
    }

    pub fn len(&self) -> usize {
        (self.tau_max / self.step + 1e-9).floor() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points<T: Real>(&self) -> impl Iterator<Item = T> + '_ {
        (1..=self.len()).map(move |i| T::lit(self.step * i as f64))
    }
}

/// Classification of a unit-speed geodesic from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum GeodesicClass<T> {
    /// `K = 0`; the straight line has `y ≡ 0`.
    Line,
    /// Contained in C_n for all times.
    InCn { cut_time: T },
    /// Never meets C_n for `t > 0`.
    OffCn,
}

impl<T: Real> GeodesicClass<T> {
    /// Cut time: `+∞` for lines by convention, unknown (`None`) off C_n.
    pub fn cut_time(&self) -> Option<T> {
        match self {
            Self::Line => Some(T::infinity()),
            Self::InCn { cut_time } => Some(*cut_time),
            Self::OffCn => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Line => "line",
            Self::InCn { .. } => "incn",
            Self::OffCn => "offcn",
        }
    }
}

/// Classifies `p` using the default `τ` grid for the off-C_n check.
pub fn classify<T: Real>(p: &GeodesicParams<T>, tol: T) -> Result<GeodesicClass<T>> {
    classify_with_grid(p, tol, &TauGrid::default())
}

/// Classifies `p`. For off-C_n geodesics the collinearity determinant is
/// evaluated on `grid` and must keep a strict sign; a vanishing value is
/// reported as [`Error::CollinearityCheck`].
pub fn classify_with_grid<T: Real>(p: &GeodesicParams<T>, tol: T, grid: &TauGrid) -> Result<GeodesicClass<T>> {
    let residual = crate::dynamics::level_residual(p)?;
    if residual.abs() > tol {
        return Err(Error::OffLevelSet {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    if p.is_line() {
        return Ok(GeodesicClass::Line);
    }
    if p.c[0].hypot(p.c[1]) <= tol {
        return Err(Error::DegenerateControls);
    }
    let cp = canonicalize(p)?;
    if cp.c3bar <= tol {
        let cp = CanonicalParams { c3bar: T::zero(), ..cp };
        return Ok(GeodesicClass::InCn { cut_time: cut_time(&cp)? });
    }
    if let Some(tau) = first_collinear_time(&cp, grid) {
        return Err(Error::CollinearityCheck(tau.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(GeodesicClass::OffCn)
}

/// First grid point where the collinearity determinant vanishes or changes
/// sign, if any.
pub fn first_collinear_time<T: Real>(cp: &CanonicalParams<T>, grid: &TauGrid) -> Option<T> {
    let mut sign = None;
    for tau in grid.points::<T>() {
        let d = collinearity_det(tau, cp);
        if d == T::zero() || !d.is_finite() {
            return Some(tau);
        }
        let s = d > T::zero();
        match sign {
            None => sign = Some(s),
            Some(prev) if prev != s => return Some(tau),
            _ => {}
        }
    }
    None
}

/// `t_cut = 2π√(C₁² + C₂²)` for geodesics inside C_n.
pub fn cut_time<T: Real>(cp: &CanonicalParams<T>) -> Result<T> {
    if cp.c3bar.abs() > T::lit(1e-12) {
        return Err(Error::NotInCnFamily(cp.c3bar.to_f64().unwrap_or(f64::NAN)));
    }
    let r = cp.c1.hypot(cp.c2);
    if r == T::zero() {
        return Err(Error::DegenerateControls);
    }
    Ok(T::lit(2.0 * PI) * r)
}

/// A point `(x, l, y)` of the Heisenberg group ℍ₃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergPoint<T> {
    pub x: T,
    pub l: T,
    pub y: T,
}

impl<T: Real> HeisenbergPoint<T> {
    pub fn to_array(&self) -> [T; 3] {
        [self.x, self.l, self.y]
    }
}

/// Projects a point of C_n to ℍ₃: `(x, |ℓ|, λ|ℓ|)` where `y = λℓ`, and
/// `(x, 0, |y|)` when `ℓ = 0`. `λ` is the least-squares ratio `(ℓ,y)/(ℓ,ℓ)`.
pub fn heisenberg_project<T: Real>(q: &GroupPoint<T>, tol: T) -> Result<HeisenbergPoint<T>> {
    if !in_cn(q, tol) {
        return Err(Error::NotInCn);
    }
    let ll = linalg::dot(&q.ell, &q.ell);
    if ll == T::zero() {
        return Ok(HeisenbergPoint { x: q.x, l: T::zero(), y: linalg::norm(&q.y) });
    }
    let lambda = linalg::dot(&q.ell, &q.y) / ll;
    let l = ll.sqrt();
    Ok(HeisenbergPoint { x: q.x, l, y: lambda * l })
}

/// Coordinate components of the Heisenberg frame
/// `N̄₀ = ∂x − ½l∂y`, `N̄₁ = ∂l + ½x∂y` at `p`.
pub fn heisenberg_frame<T: Real>(p: &HeisenbergPoint<T>) -> [[T; 3]; 2] {
    [
        [T::one(), T::zero(), -T::half() * p.l],
        [T::zero(), T::one(), T::half() * p.x],
    ]
}

/// The planar part `(x, ℓ̄₁, ȳ₁)` of an in-C_n representative geodesic at `τ`.
pub fn heisenberg_geodesic<T: Real>(tau: T, c1: T, c2: T) -> HeisenbergPoint<T> {
    let [x, l, _, y, _] = representative_components(tau, c1, c2, T::zero());
    HeisenbergPoint { x, l, y }
}
