//! Trigonometric combinations that cancel to high order at τ = 0.
//!
//! Every function here is evaluated by its Maclaurin series for |τ| < 1 and
//! by the direct formula elsewhere. Direct evaluation near the origin loses
//! all significant digits (e.g. `f(τ) ~ τ⁶/360` is computed as a difference
//! of terms of size 4).

use crate::scalar::Real;

const SERIES_RADIUS: f64 = 1.0;
const MAX_TERMS: usize = 40;

/// Sums `Σ_{m ≥ m0} coeff(m) · τ^(2m + parity)` where `coeff` receives the
/// index `m` and the factorial `(2m + parity)!`.
fn series<T: Real>(tau: T, m0: usize, parity: usize, coeff: impl Fn(usize, T) -> T) -> T {
    let tau2 = tau * tau;
    let mut power = tau.powi((2 * m0 + parity) as i32);
    let mut fact = T::one();
    for k in 2..=(2 * m0 + parity) {
        fact = fact * T::from_usize_lossy(k);
    }
    let mut sum = T::zero();
    for m in m0..m0 + MAX_TERMS {
        let term = coeff(m, fact) * power;
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() * T::lit(1e-3) && m > m0 + 2 {
            break;
        }
        power = power * tau2;
        let n = 2 * m + parity;
        fact = fact * T::from_usize_lossy(n + 1) * T::from_usize_lossy(n + 2);
    }
    sum
}

fn sign<T: Real>(m: usize) -> T {
    if m % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

fn pow4<T: Real>(m: usize) -> T {
    T::lit(4.0).powi(m as i32)
}

fn small<T: Real>(tau: T) -> bool {
    tau.abs() < T::lit(SERIES_RADIUS)
}

/// `1 − cos τ`.
pub fn one_minus_cos<T: Real>(tau: T) -> T {
    let s = (tau * T::half()).sin();
    T::two() * s * s
}

/// `τ − sin τ`.
pub fn tau_minus_sin<T: Real>(tau: T) -> T {
    if small(tau) {
        // τ³/3! − τ⁵/5! + …
        series(tau, 1, 1, |m, fact| -sign::<T>(m) / fact)
    } else {
        tau - tau.sin()
    }
}

/// `2 sin τ − τ cos τ − τ`, the C₁ factor of the second y-component.
pub fn b1<T: Real>(tau: T) -> T {
    if small(tau) {
        series(tau, 1, 1, |m, fact| {
            sign::<T>(m) * (T::one() - T::from_usize_lossy(2 * m)) / fact
        })
    } else {
        T::two() * tau.sin() - tau * tau.cos() - tau
    }
}

/// `2 − 2 cos τ − τ sin τ`, the C₂ factor of the second y-component.
pub fn b2<T: Real>(tau: T) -> T {
    if small(tau) {
        series(tau, 2, 0, |m, fact| {
            sign::<T>(m) * (T::from_usize_lossy(2 * m) - T::two()) / fact
        })
    } else {
        T::two() - T::two() * tau.cos() - tau * tau.sin()
    }
}

/// `τ² + τ sin τ + 4 cos τ − 4`.
pub fn f_function<T: Real>(tau: T) -> T {
    if small(tau) {
        series(tau, 3, 0, |m, fact| {
            -sign::<T>(m) * (T::from_usize_lossy(2 * m) - T::lit(4.0)) / fact
        })
    } else {
        let (s, c) = tau.sin_cos();
        tau * tau + tau * s + T::lit(4.0) * c - T::lit(4.0)
    }
}

/// `−τ² − τ sin τ cos τ − 2 cos² τ + 2`.
pub fn d11<T: Real>(tau: T) -> T {
    if small(tau) {
        series(tau, 3, 0, |m, fact| {
            sign::<T>(m) * pow4::<T>(m - 1) * (T::from_usize_lossy(2 * m) - T::lit(4.0)) / fact
        })
    } else {
        let (s, c) = tau.sin_cos();
        -tau * tau - tau * s * c - T::two() * c * c + T::two()
    }
}

/// `−sin τ (2 cos τ − 2 + τ sin τ)`, half the C₁C₂ coefficient of the
/// collinearity quadratic form.
pub fn d12<T: Real>(tau: T) -> T {
    if small(tau) {
        series(tau, 2, 1, |m, fact| {
            // (2 − 2^(2m+1))/(2m+1)! + 4^m / (2·(2m)!)
            let n = T::from_usize_lossy(2 * m + 1);
            let even_fact = fact / n;
            sign::<T>(m)
                * ((T::two() - T::two() * pow4::<T>(m)) / fact + pow4::<T>(m) / (T::two() * even_fact))
        })
    } else {
        let (s, c) = tau.sin_cos();
        -s * (T::two() * c - T::two() + tau * s)
    }
}

/// `2 cos² τ + τ cos τ sin τ − 4 cos τ − τ² + 2`.
pub fn d22<T: Real>(tau: T) -> T {
    if small(tau) {
        series(tau, 2, 0, |m, fact| {
            let m_t = T::from_usize_lossy(2 * m);
            sign::<T>(m) * (pow4::<T>(m) - T::lit(4.0) - pow4::<T>(m - 1) * m_t) / fact
        })
    } else {
        let (s, c) = tau.sin_cos();
        T::two() * c * c + tau * c * s - T::lit(4.0) * c - tau * tau + T::two()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(tau: f64) -> [f64; 7] {
        let (s, c) = tau.sin_cos();
        [
            tau - s,
            2.0 * s - tau * c - tau,
            2.0 - 2.0 * c - tau * s,
            tau * tau + tau * s + 4.0 * c - 4.0,
            -tau * tau - tau * s * c - 2.0 * c * c + 2.0,
            -s * (2.0 * c - 2.0 + tau * s),
            2.0 * c * c + tau * c * s - 4.0 * c - tau * tau + 2.0,
        ]
    }

    fn stable(tau: f64) -> [f64; 7] {
        [
            tau_minus_sin(tau),
            b1(tau),
            b2(tau),
            f_function(tau),
            d11(tau),
            d12(tau),
            d22(tau),
        ]
    }

    #[test]
    fn series_matches_direct_inside_radius() {
        // at moderate τ the direct formulas still carry ~12 good digits
        for &tau in &[0.5, 0.7, 0.9, 0.999, -0.8] {
            let a = stable(tau);
            let b = direct(tau);
            for k in 0..7 {
                let scale = b[k].abs().max(1e-3);
                assert!(
                    (a[k] - b[k]).abs() <= 1e-10 * scale,
                    "component {k} at {tau}: {} vs {}",
                    a[k],
                    b[k]
                );
            }
        }
    }

    #[test]
    fn leading_orders() {
        let t = 1e-3_f64;
        assert!((tau_minus_sin(t) / t.powi(3) - 1.0 / 6.0).abs() < 1e-6);
        assert!((b1(t) / t.powi(3) - 1.0 / 6.0).abs() < 1e-6);
        assert!((b2(t) / t.powi(4) - 1.0 / 12.0).abs() < 1e-6);
        assert!((f_function(t) / t.powi(6) - 1.0 / 360.0).abs() < 1e-8);
        assert!((d11(t) / t.powi(6) + 2.0 / 45.0).abs() < 1e-6);
        assert!((d12(t) / t.powi(5) - 1.0 / 12.0).abs() < 1e-6);
        assert!((d22(t) / t.powi(4) + 1.0 / 6.0).abs() < 1e-6);
    }

    #[test]
    fn one_minus_cos_is_accurate_near_zero() {
        let t = 1e-9_f64;
        assert!((one_minus_cos(t) / (t * t) - 0.5).abs() < 1e-12);
    }
}
