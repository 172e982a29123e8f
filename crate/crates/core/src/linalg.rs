//! Small fixed-size vector and matrix helpers on plain arrays.

use crate::scalar::{Real, Ring};

pub type Vec3<T> = [T; 3];
pub type Mat3<T> = [[T; 3]; 3];

pub fn dot<T: Ring>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross<T: Ring>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn add<T: Ring>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub<T: Ring>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale<T: Ring>(s: T, a: &Vec3<T>) -> Vec3<T> {
    [s * a[0], s * a[1], s * a[2]]
}

pub fn norm<T: Real>(a: &Vec3<T>) -> T {
    a[0].hypot(a[1]).hypot(a[2])
}

pub fn mat_vec<T: Ring>(m: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub fn mat_mul<T: Ring>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    let mut out = [[T::zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    out
}

pub fn transpose<T: Copy>(m: &Mat3<T>) -> Mat3<T> {
    [
        [m[0][0], m[1][0], m[2][0]],
        [m[0][1], m[1][1], m[2][1]],
        [m[0][2], m[1][2], m[2][2]],
    ]
}

pub fn det3<T: Ring>(m: &Mat3<T>) -> T {
    dot(&m[0], &cross(&m[1], &m[2]))
}

pub fn identity3<T: Ring>() -> Mat3<T> {
    let (o, z) = (T::one(), T::zero());
    [[o, z, z], [z, o, z], [z, z, o]]
}

/// Matrix with the given columns.
pub fn from_columns<T: Copy>(c0: &Vec3<T>, c1: &Vec3<T>, c2: &Vec3<T>) -> Mat3<T> {
    [[c0[0], c1[0], c2[0]], [c0[1], c1[1], c2[1]], [c0[2], c1[2], c2[2]]]
}

pub fn max_abs_diff<T: Real, const N: usize>(a: &[T; N], b: &[T; N]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc.max((*x - *y).abs()))
}

/// LU factorization with partial pivoting of a small dense matrix.
#[derive(Debug, Clone, Copy)]
pub struct Lu<T, const N: usize> {
    lu: [[T; N]; N],
    perm: [usize; N],
    sign: T,
}

impl<T: Real, const N: usize> Lu<T, N> {
    pub fn new(mut a: [[T; N]; N]) -> Self {
        let mut perm = [0usize; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        let mut sign = T::one();
        for k in 0..N {
            let pivot = (k..N)
                .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())
                .unwrap_or(k);
            if pivot != k {
                a.swap(pivot, k);
                perm.swap(pivot, k);
                sign = -sign;
            }
            let d = a[k][k];
            if d == T::zero() {
                continue;
            }
            for i in k + 1..N {
                let factor = a[i][k] / d;
                a[i][k] = factor;
                for j in k + 1..N {
                    a[i][j] = a[i][j] - factor * a[k][j];
                }
            }
        }
        Self { lu: a, perm, sign }
    }

    pub fn determinant(&self) -> T {
        (0..N).fold(self.sign, |acc, i| acc * self.lu[i][i])
    }

    /// Solves `A x = b`; `None` when a pivot is exactly zero.
    pub fn solve(&self, b: &[T; N]) -> Option<[T; N]> {
        let mut x = [T::zero(); N];
        for i in 0..N {
            let mut acc = b[self.perm[i]];
            for j in 0..i {
                acc = acc - self.lu[i][j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..N).rev() {
            let mut acc = x[i];
            for j in i + 1..N {
                acc = acc - self.lu[i][j] * x[j];
            }
            let d = self.lu[i][i];
            if d == T::zero() {
                return None;
            }
            x[i] = acc / d;
        }
        Some(x)
    }
}
