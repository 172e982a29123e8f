//! Symmetries of the structure and the SO(3) reduction of geodesics.
//!
//! The infinitesimal symmetries are the seven right-invariant fields
//! (transvections) together with the isotropy algebra 𝔰𝔬(3) at the origin,
//! generated by
//!
//! ```text
//! v₁ = ℓ₃∂ℓ₂ − ℓ₂∂ℓ₃ + y₃∂y₂ − y₂∂y₃
//! v₂ = ℓ₁∂ℓ₃ − ℓ₃∂ℓ₁ + y₁∂y₃ − y₃∂y₁
//! v₃ = ℓ₂∂ℓ₁ − ℓ₁∂ℓ₂ + y₂∂y₁ − y₁∂y₂
//! ```
//!
//! The integrated action is `(x, ℓ, y) ↦ (x, Rℓ, Ry)`, `R ∈ SO(3)`. Points
//! with a nontrivial stabilizer are those with `ℓ ∥ y` (the subgroup C_n).
//!
//! Every geodesic with `K > 0` is rotated by some `R` into a representative
//! with `ℓ̄₃ = ȳ₃ = 0`, which depends only on `(C₁, C₂, C̄₃)` and `τ = Kt`.
//! The representative carries the same `½` in the y-components as the
//! closed-form geodesic (see [`representative_point`]).

use serde::{Deserialize, Serialize};

use crate::dynamics::{GeodesicParams, LINE_THRESHOLD};
use crate::error::{Error, Result};
use crate::group::{frame_right, GroupPoint};
use crate::linalg::{self, Mat3, Vec3};
use crate::scalar::Real;
use crate::trig;

/// Default relative collinearity tolerance for [`in_cn`].
pub const DEFAULT_COLLINEARITY_TOL: f64 = 1e-9;

/// An element of SO(3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rotation<T> {
    m: Mat3<T>,
}

impl<T: Real> Rotation<T> {
    /// Validates `RᵀR = I` and `det R = 1`.
    pub fn new(m: Mat3<T>) -> Result<Self> {
        if !m.iter().flatten().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("rotation matrix"));
        }
        let defect = orthogonality_defect(&m);
        if defect > T::rotation_tol() {
            return Err(Error::NotARotation { defect: defect.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(Self { m })
    }

    pub(crate) fn new_unchecked(m: Mat3<T>) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self { m: linalg::identity3() }
    }

    /// Rotation by `angle` about `axis` (right-hand rule).
    pub fn from_axis_angle(axis: &Vec3<T>, angle: T) -> Self {
        let n = linalg::norm(axis);
        if n == T::zero() {
            return Self::identity();
        }
        let k = linalg::scale(T::one() / n, axis);
        let (s, c) = angle.sin_cos();
        let omc = trig::one_minus_cos(angle);
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = omc * k[i] * k[j] + if i == j { c } else { T::zero() };
            }
        }
        m[0][1] = m[0][1] - s * k[2];
        m[1][0] = m[1][0] + s * k[2];
        m[0][2] = m[0][2] + s * k[1];
        m[2][0] = m[2][0] - s * k[1];
        m[1][2] = m[1][2] - s * k[0];
        m[2][1] = m[2][1] + s * k[0];
        Self { m }
    }

    /// The rotation of least angle taking `e₁` to the unit vector `u`.
    ///
    /// For `u = −e₁` the axis is not unique; the rotation by π about `e₃`
    /// is returned.
    pub fn minimal_from_e1(u: &Vec3<T>) -> Self {
        let c = u[0];
        if T::one() + c <= T::lit(1e-12) {
            let (o, z) = (T::one(), T::zero());
            return Self { m: [[-o, z, z], [z, -o, z], [z, z, o]] };
        }
        // R = I + [v]ₓ + [v]ₓ² / (1 + c) with v = e₁ × u
        let v = [T::zero(), -u[2], u[1]];
        let vx = [
            [T::zero(), -v[2], v[1]],
            [v[2], T::zero(), -v[0]],
            [-v[1], v[0], T::zero()],
        ];
        let vx2 = linalg::mat_mul(&vx, &vx);
        let f = T::one() / (T::one() + c);
        let mut m = linalg::identity3();
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = m[i][j] + vx[i][j] + f * vx2[i][j];
            }
        }
        Self { m }
    }

    pub fn matrix(&self) -> &Mat3<T> {
        &self.m
    }

    pub fn apply(&self, v: &Vec3<T>) -> Vec3<T> {
        linalg::mat_vec(&self.m, v)
    }

    pub fn transpose(&self) -> Self {
        Self { m: linalg::transpose(&self.m) }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { m: linalg::mat_mul(&self.m, &other.m) }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let a: Vec<T> = self.m.iter().flatten().copied().collect();
        let b: Vec<T> = other.m.iter().flatten().copied().collect();
        a.iter().zip(&b).fold(T::zero(), |acc, (x, y)| acc.max((*x - *y).abs()))
    }
}

fn orthogonality_defect<T: Real>(m: &Mat3<T>) -> T {
    let mtm = linalg::mat_mul(&linalg::transpose(m), m);
    let mut defect = (linalg::det3(m) - T::one()).abs();
    for (i, row) in mtm.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { T::one() } else { T::zero() };
            defect = defect.max((*v - target).abs());
        }
    }
    defect
}

/// The SO(3) action `(x, ℓ, y) ↦ (x, Rℓ, Ry)`.
pub fn act<T: Real>(r: &Rotation<T>, q: &GroupPoint<T>) -> GroupPoint<T> {
    GroupPoint::new(q.x, r.apply(&q.ell), r.apply(&q.y))
}

/// A symmetry `a₁v₁ + a₂v₂ + a₃v₃ + Σ cⱼ Rⱼ` where `Rⱼ` are the
/// right-invariant fields in frame order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryGenerator<T> {
    pub axis: Vec3<T>,
    pub translation: [T; 7],
}

impl<T: Real> SymmetryGenerator<T> {
    pub fn isotropy(axis: Vec3<T>) -> Self {
        Self { axis, translation: [T::zero(); 7] }
    }

    pub fn transvection(translation: [T; 7]) -> Self {
        Self { axis: [T::zero(); 3], translation }
    }
}

/// Coordinate components of the symmetry field at `q`.
pub fn symmetry_field<T: Real>(g: &SymmetryGenerator<T>, q: &GroupPoint<T>) -> [T; 7] {
    // Σ aᵢvᵢ rotates both blocks: ℓ̇ = ℓ × a, ẏ = y × a
    let dl = linalg::cross(&q.ell, &g.axis);
    let dy = linalg::cross(&q.y, &g.axis);
    let mut out = [T::zero(), dl[0], dl[1], dl[2], dy[0], dy[1], dy[2]];
    let right = frame_right(q);
    for (c, field) in g.translation.iter().zip(right.iter()) {
        for (o, f) in out.iter_mut().zip(field) {
            *o = *o + *c * *f;
        }
    }
    out
}

/// Membership in C_n: `|ℓ × y| ≤ tol·max(1, |ℓ||y|)`. Points with `ℓ = 0`
/// or `y = 0` belong to C_n.
pub fn in_cn<T: Real>(q: &GroupPoint<T>, tol: T) -> bool {
    let c = linalg::norm(&linalg::cross(&q.ell, &q.y));
    let scale = (linalg::norm(&q.ell) * linalg::norm(&q.y)).max(T::one());
    c <= tol * scale
}

/// Reduced parameters of a geodesic class together with the aligning
/// rotation `R`: `z₁ = R(K, 0, 0)`, `z₂ = R(0, C, 0)`, `C̄₃ = C/K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalParams<T> {
    pub c1: T,
    pub c2: T,
    pub c3bar: T,
    pub k: T,
    pub rotation: Rotation<T>,
}

impl<T: Real> CanonicalParams<T> {
    /// Canonical parameters on the unit level set, `K = 1/√(C₁² + C₂² + C̄₃²)`.
    pub fn unit(c1: T, c2: T, c3bar: T) -> Self {
        let k = T::one() / (c1 * c1 + c2 * c2 + c3bar * c3bar).sqrt();
        Self { c1, c2, c3bar, k, rotation: Rotation::identity() }
    }

    /// `K²(C₁² + C₂² + C̄₃²) − 1`.
    pub fn level_residual(&self) -> T {
        self.k * self.k * (self.c1 * self.c1 + self.c2 * self.c2 + self.c3bar * self.c3bar) - T::one()
    }

    /// Full parameters of the geodesic `t ↦ act(R, representative(Kt))`.
    pub fn to_geodesic_params(&self) -> Result<GeodesicParams<T>> {
        let kvec = self.rotation.apply(&[self.k, T::zero(), T::zero()]);
        let z2 = self.rotation.apply(&[T::zero(), self.c3bar * self.k, T::zero()]);
        params_from_z(self.c1, self.c2, kvec, z2)
    }
}

/// Solves `z₂ = (−C₃K₃ − C₄K₂, C₄K₁, C₃K₁)` for `(C₃, C₄)`; requires
/// `K₁ ≠ 0` unless `z₂` is a multiple of `e₁`.
fn params_from_z<T: Real>(c1: T, c2: T, kvec: Vec3<T>, z2: Vec3<T>) -> Result<GeodesicParams<T>> {
    let k = linalg::norm(&kvec);
    let zn = linalg::norm(&z2);
    let eps = T::lit(1e-12);
    let (c3, c4) = if kvec[0].abs() > eps * k {
        (z2[2] / kvec[0], z2[1] / kvec[0])
    } else if zn <= eps * k.max(T::one()) {
        (T::zero(), T::zero())
    } else if z2[1].abs().max(z2[2].abs()) <= eps * zn {
        // K₁ = 0: only z₂ ∥ e₁ is reachable, −C₃K₃ − C₄K₂ = z₂₁
        let d = kvec[1] * kvec[1] + kvec[2] * kvec[2];
        (-z2[0] * kvec[2] / d, -z2[0] * kvec[1] / d)
    } else {
        return Err(Error::Unrepresentable);
    };
    Ok(GeodesicParams::new([c1, c2, c3, c4], kvec))
}

/// Parameters of the rotated geodesic `t ↦ act(R, geodesic_point(t, p))`.
pub fn rotate_params<T: Real>(r: &Rotation<T>, p: &GeodesicParams<T>) -> Result<GeodesicParams<T>> {
    if p.is_line() {
        let l = r.apply(&[p.c[1], p.c[2], p.c[3]]);
        return Ok(GeodesicParams::new([p.c[0], l[0], l[1], l[2]], [T::zero(); 3]));
    }
    params_from_z(p.c[0], p.c[1], r.apply(&p.z1()), r.apply(&p.z2()))
}

/// Rotates `z₁` onto `(K, 0, 0)` and `z₂` onto `(0, C, 0)`.
///
/// The rotation has columns `(z₁/K, ẑ₂, z₁/K × ẑ₂)`; when `z₂ = 0` it is
/// the least-angle rotation taking `e₁` to `z₁/K`.
pub fn canonicalize<T: Real>(p: &GeodesicParams<T>) -> Result<CanonicalParams<T>> {
    if !p.to_array().iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("geodesic parameters"));
    }
    let k = p.k();
    if k < T::lit(LINE_THRESHOLD) {
        return Err(Error::ZeroK);
    }
    let e1 = linalg::scale(T::one() / k, &p.z1());
    let z2 = p.z2();
    // project out the rounding-level component along z₁
    let z2p = linalg::sub(&z2, &linalg::scale(linalg::dot(&z2, &e1), &e1));
    let c = linalg::norm(&z2p);
    let rotation = if c <= T::lit(1e-14) * k.max(T::one()) {
        Rotation::minimal_from_e1(&e1)
    } else {
        let e2 = linalg::scale(T::one() / c, &z2p);
        let e3 = linalg::cross(&e1, &e2);
        Rotation::new_unchecked(linalg::from_columns(&e1, &e2, &e3))
    };
    let c = if c <= T::lit(1e-14) * k.max(T::one()) { T::zero() } else { c };
    Ok(CanonicalParams { c1: p.c[0], c2: p.c[1], c3bar: c / k, k, rotation })
}

/// Components of the representative geodesic at `τ = Kt`:
///
/// ```text
/// x  = C₁(cos τ − 1) + C₂ sin τ
/// ℓ̄₁ = C₁ sin τ + C₂(1 − cos τ)
/// ℓ̄₂ = C̄₃ τ
/// ȳ₁ = ½(C₁² + C₂²)(τ − sin τ)
/// ȳ₂ = ½C̄₃[C₁(2 sin τ − τ cos τ − τ) + C₂(2 − 2cos τ − τ sin τ)]
/// ℓ̄₃ = ȳ₃ = 0
/// ```
pub fn representative_components<T: Real>(tau: T, c1: T, c2: T, c3bar: T) -> [T; 5] {
    let s = tau.sin();
    let omc = trig::one_minus_cos(tau);
    let x = -c1 * omc + c2 * s;
    let l1 = c1 * s + c2 * omc;
    let l2 = c3bar * tau;
    let y1 = T::half() * (c1 * c1 + c2 * c2) * trig::tau_minus_sin(tau);
    let y2 = T::half() * c3bar * (c1 * trig::b1(tau) + c2 * trig::b2(tau));
    [x, l1, l2, y1, y2]
}

/// The representative geodesic point; `act(R, representative_point(Kt, cp))`
/// is the geodesic the parameters were canonicalized from.
pub fn representative_point<T: Real>(tau: T, cp: &CanonicalParams<T>) -> GroupPoint<T> {
    let [x, l1, l2, y1, y2] = representative_components(tau, cp.c1, cp.c2, cp.c3bar);
    GroupPoint::new(x, [l1, l2, T::zero()], [y1, y2, T::zero()])
}

/// The SO(3)-invariants `(x, (ℓ,ℓ), (ℓ,y), (y,y))` of a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantTuple<T> {
    pub x: T,
    pub ll: T,
    pub ly: T,
    pub yy: T,
}

impl<T: Real> InvariantTuple<T> {
    pub fn to_array(&self) -> [T; 4] {
        [self.x, self.ll, self.ly, self.yy]
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self { x: a[0], ll: a[1], ly: a[2], yy: a[3] }
    }

    /// `(ℓ,ℓ)(y,y) − (ℓ,y)²`, the squared area spanned by `ℓ` and `y`.
    pub fn gram_determinant(&self) -> T {
        self.ll * self.yy - self.ly * self.ly
    }

    pub fn satisfies_cauchy_schwarz(&self, tol: T) -> bool {
        self.ll >= -tol && self.yy >= -tol && self.ly * self.ly <= self.ll * self.yy + tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        linalg::max_abs_diff(&self.to_array(), &other.to_array())
    }
}

pub fn invariants_of_point<T: Real>(q: &GroupPoint<T>) -> InvariantTuple<T> {
    InvariantTuple {
        x: q.x,
        ll: linalg::dot(&q.ell, &q.ell),
        ly: linalg::dot(&q.ell, &q.y),
        yy: linalg::dot(&q.y, &q.y),
    }
}

/// Invariants of the representative geodesic at `τ`.
///
/// The `(τ − sin τ)` factor and the `½` on the y-components follow from
/// integrating the base system; the curve therefore agrees with
/// `invariants_of_point ∘ representative_point`.
pub fn invariants_curve<T: Real>(tau: T, cp: &CanonicalParams<T>) -> InvariantTuple<T> {
    invariants_from_components(tau, cp.c1, cp.c2, cp.c3bar)
}

pub(crate) fn invariants_from_components<T: Real>(tau: T, c1: T, c2: T, c3bar: T) -> InvariantTuple<T> {
    let [x, l1, l2, y1, y2] = representative_components(tau, c1, c2, c3bar);
    InvariantTuple { x, ll: l1 * l1 + l2 * l2, ly: l1 * y1 + l2 * y2, yy: y1 * y1 + y2 * y2 }
}
