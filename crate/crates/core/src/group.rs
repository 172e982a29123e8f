//! The Carnot group N ≅ ℝ⁷ with growth vector (4,7), its Lie algebra and
//! its left- and right-invariant frames.
//!
//! Points are written `(x, ℓ, y)` with `ℓ, y ∈ ℝ³` in global exponential
//! coordinates. The product is
//!
//! ```text
//! (x, ℓ, y)·(x̃, ℓ̃, ỹ) = (x + x̃, ℓ + ℓ̃, y + ỹ + ½(x ℓ̃ − x̃ ℓ))
//! ```
//!
//! and the left-invariant frame is
//!
//! ```text
//! N₀ = ∂x − ½ Σ ℓᵢ ∂yᵢ,   Nᵢ = ∂ℓᵢ + ½ x ∂yᵢ,   N₀ᵢ = [N₀, Nᵢ] = ∂yᵢ.
//! ```

use serde::{Deserialize, Serialize};

use crate::linalg::{self, Vec3};
use crate::scalar::{Real, Ring};

/// A point `(x, ℓ, y)` of the group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint<T> {
    pub x: T,
    pub ell: Vec3<T>,
    pub y: Vec3<T>,
}

impl<T: Ring> GroupPoint<T> {
    pub fn new(x: T, ell: Vec3<T>, y: Vec3<T>) -> Self {
        Self { x, ell, y }
    }

    pub fn identity() -> Self {
        let z = T::zero();
        Self::new(z, [z; 3], [z; 3])
    }

    /// Coordinates in the order `(x, ℓ₁, ℓ₂, ℓ₃, y₁, y₂, y₃)`.
    pub fn to_array(&self) -> [T; 7] {
        let (l, y) = (self.ell, self.y);
        [self.x, l[0], l[1], l[2], y[0], y[1], y[2]]
    }

    pub fn from_array(a: [T; 7]) -> Self {
        Self::new(a[0], [a[1], a[2], a[3]], [a[4], a[5], a[6]])
    }

    /// The group product `self · other`.
    pub fn multiply(&self, other: &Self) -> Self {
        let h = T::half();
        let mut y = [T::zero(); 3];
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.y[i] + other.y[i] + h * (self.x * other.ell[i] - other.x * self.ell[i]);
        }
        Self::new(self.x + other.x, linalg::add(&self.ell, &other.ell), y)
    }

    /// Componentwise negation; the ½-terms of `a · (−a)` cancel.
    pub fn inverse(&self) -> Self {
        Self::new(-self.x, linalg::scale(-T::one(), &self.ell), linalg::scale(-T::one(), &self.y))
    }
}

impl<T: Real> GroupPoint<T> {
    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub fn is_identity(&self) -> bool {
        self.to_array().iter().all(|v| *v == T::zero())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        linalg::max_abs_diff(&self.to_array(), &other.to_array())
    }
}

impl<T: Ring> std::ops::Mul for GroupPoint<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.multiply(&rhs)
    }
}

/// The ordered frame `(N₀, N₁, N₂, N₃, N₀₁, N₀₂, N₀₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    N0,
    N1,
    N2,
    N3,
    N01,
    N02,
    N03,
}

impl Generator {
    pub const ALL: [Generator; 7] = [
        Generator::N0,
        Generator::N1,
        Generator::N2,
        Generator::N3,
        Generator::N01,
        Generator::N02,
        Generator::N03,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// True for the horizontal generators N₀..N₃.
    pub fn is_horizontal(self) -> bool {
        self.index() < 4
    }
}

/// A tangent vector stored by its coefficients in the left-invariant frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentVector<T> {
    pub coefficients: [T; 7],
}

impl<T: Ring> TangentVector<T> {
    pub fn new(coefficients: [T; 7]) -> Self {
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self::new([T::zero(); 7])
    }

    pub fn basis(g: Generator) -> Self {
        let mut c = [T::zero(); 7];
        c[g.index()] = T::one();
        Self::new(c)
    }

    pub fn scaled(&self, s: T) -> Self {
        Self::new(self.coefficients.map(|c| c * s))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut c = self.coefficients;
        for (a, b) in c.iter_mut().zip(other.coefficients) {
            *a = *a + b;
        }
        Self::new(c)
    }

    /// Coordinate components `(ẋ, ℓ̇, ẏ)` of this vector attached at `q`.
    pub fn to_coordinates(&self, q: &GroupPoint<T>) -> [T; 7] {
        let frame = frame_left(q);
        let mut out = [T::zero(); 7];
        for (coef, field) in self.coefficients.iter().zip(frame.iter()) {
            for (o, f) in out.iter_mut().zip(field) {
                *o = *o + *coef * *f;
            }
        }
        out
    }

    /// Inverse of [`TangentVector::to_coordinates`].
    pub fn from_coordinates(v: &[T; 7], q: &GroupPoint<T>) -> Self {
        let h = T::half();
        let mut c = [T::zero(); 7];
        c[0] = v[0];
        for i in 0..3 {
            c[1 + i] = v[1 + i];
            // ẏᵢ = −½ℓᵢ·c₀ + ½x·cᵢ + c₀ᵢ
            c[4 + i] = v[4 + i] + h * q.ell[i] * v[0] - h * q.x * v[1 + i];
        }
        Self::new(c)
    }
}

/// Coordinate components of the left-invariant fields
/// `N₀, N₁, N₂, N₃, N₀₁, N₀₂, N₀₃` at `q`, one row per field.
pub fn frame_left<T: Ring>(q: &GroupPoint<T>) -> [[T; 7]; 7] {
    frame_with_sign(q, T::one())
}

/// Coordinate components of the right-invariant fields
/// `∂x + ½Σℓᵢ∂yᵢ, ∂ℓᵢ − ½x∂yᵢ, ∂yᵢ` at `q`.
pub fn frame_right<T: Ring>(q: &GroupPoint<T>) -> [[T; 7]; 7] {
    frame_with_sign(q, -T::one())
}

fn frame_with_sign<T: Ring>(q: &GroupPoint<T>, sign: T) -> [[T; 7]; 7] {
    let h = T::half() * sign;
    let (z, o) = (T::zero(), T::one());
    let mut f = [[z; 7]; 7];
    f[0][0] = o;
    for i in 0..3 {
        f[0][4 + i] = -h * q.ell[i];
        f[1 + i][1 + i] = o;
        f[1 + i][4 + i] = h * q.x;
        f[4 + i][4 + i] = o;
    }
    f
}

/// The 2-step nilpotent Lie algebra 𝔫 spanned by the frame.
///
/// The only nonzero brackets are `[N₀, Nᵢ] = N₀ᵢ`, `i = 1, 2, 3`, and their
/// antisymmetric counterparts.
#[derive(Debug, Clone, Copy, Default)]
pub struct LieAlgebra;

impl LieAlgebra {
    /// Structure constant `c_{jl}^k` with `[E_j, E_l] = Σ_k c_{jl}^k E_k`.
    pub fn structure_constant<T: Ring>(&self, j: Generator, l: Generator, k: Generator) -> T {
        use Generator::*;
        let target = |g: Generator| match g {
            N1 => Some(N01),
            N2 => Some(N02),
            N3 => Some(N03),
            _ => None,
        };
        if j == N0 && target(l) == Some(k) {
            T::one()
        } else if l == N0 && target(j) == Some(k) {
            -T::one()
        } else {
            T::zero()
        }
    }

    /// Nonzero structure constants as `(j, l, k, c_{jl}^k)`.
    pub fn nonzero_constants<T: Ring>(&self) -> Vec<(Generator, Generator, Generator, T)> {
        let mut out = Vec::new();
        for j in Generator::ALL {
            for l in Generator::ALL {
                for k in Generator::ALL {
                    let c: T = self.structure_constant(j, l, k);
                    if c != T::zero() {
                        out.push((j, l, k, c));
                    }
                }
            }
        }
        out
    }

    /// Bilinear extension of the bracket table.
    pub fn bracket<T: Ring>(&self, u: &TangentVector<T>, v: &TangentVector<T>) -> TangentVector<T> {
        let (a, b) = (&u.coefficients, &v.coefficients);
        let mut out = [T::zero(); 7];
        // [a₀N₀ + aᵢNᵢ, b₀N₀ + bᵢNᵢ] = Σᵢ (a₀bᵢ − aᵢb₀) N₀ᵢ
        for i in 0..3 {
            out[4 + i] = a[0] * b[1 + i] - a[1 + i] * b[0];
        }
        TangentVector::new(out)
    }
}

/// Shorthand for [`LieAlgebra::bracket`].
pub fn bracket<T: Ring>(u: &TangentVector<T>, v: &TangentVector<T>) -> TangentVector<T> {
    LieAlgebra.bracket(u, v)
}
