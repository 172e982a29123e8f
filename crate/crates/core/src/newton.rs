//! Damped Newton iteration on small square systems.

use crate::linalg::Lu;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub(crate) struct NewtonOptions<T> {
    pub tol: T,
    pub max_iter: usize,
    pub max_halvings: usize,
    pub singular_det: T,
}

impl<T: Real> Default for NewtonOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-13), max_iter: 50, max_halvings: 20, singular_det: T::lit(1e-14) }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum NewtonFailure<T> {
    Singular(T),
    Stalled(T),
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct NewtonSolution<T, const N: usize> {
    pub x: [T; N],
    pub residual: T,
}

fn inf_norm<T: Real, const N: usize>(v: &[T; N]) -> T {
    v.iter().fold(T::zero(), |m, a| m.max(a.abs()))
}

/// Minimizes `‖F(x)‖∞` by Newton steps with step halving.
///
/// `eval` returns the residual and its Jacobian, or `None` outside the
/// admissible domain (treated like a failed decrease).
pub(crate) fn solve<T, const N: usize, F>(
    eval: F,
    x0: [T; N],
    opts: &NewtonOptions<T>,
) -> Result<NewtonSolution<T, N>, NewtonFailure<T>>
where
    T: Real,
    F: Fn(&[T; N]) -> Option<([T; N], [[T; N]; N])>,
{
    let Some((mut r, mut jac)) = eval(&x0) else {
        return Err(NewtonFailure::Stalled(T::infinity()));
    };
    let mut x = x0;
    let mut norm = inf_norm(&r);
    for _ in 0..opts.max_iter {
        if norm <= opts.tol {
            break;
        }
        let lu = Lu::new(jac);
        let det = lu.determinant();
        if !(det.abs() >= opts.singular_det) {
            return Err(NewtonFailure::Singular(det));
        }
        let neg: [T; N] = std::array::from_fn(|i| -r[i]);
        let Some(dx) = lu.solve(&neg) else {
            return Err(NewtonFailure::Singular(det));
        };
        let mut alpha = T::one();
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial: [T; N] = std::array::from_fn(|i| x[i] + alpha * dx[i]);
            if let Some((tr, tj)) = eval(&trial) {
                let tn = inf_norm(&tr);
                if tn < norm {
                    x = trial;
                    r = tr;
                    jac = tj;
                    norm = tn;
                    accepted = true;
                    break;
                }
            }
            alpha = alpha * T::half();
        }
        if !accepted {
            break;
        }
    }
    if norm.is_finite() {
        Ok(NewtonSolution { x, residual: norm })
    } else {
        Err(NewtonFailure::Stalled(norm))
    }
}
