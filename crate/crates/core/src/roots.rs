//! Safeguarded Newton iteration on a sign-changing bracket.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Absolute step floor, for roots near zero.
    pub abs_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_iter: 200, abs_tol: 0.0 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Root<T> {
    pub x: T,
    pub iterations: usize,
}

/// Root of `f` in `[lo, hi]`; `f` returns `(value, derivative)`.
///
/// A Newton step that would leave the bracket, or that fails to shrink faster
/// than bisection, is replaced by bisection. Converges whenever the endpoints
/// bracket a sign change.
pub fn newton_bisect<T: Real>(
    mut f: impl FnMut(T) -> (T, T),
    lo: T,
    hi: T,
    x0: Option<T>,
    opts: RootOptions,
) -> Result<Root<T>> {
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    newton_bisect_known(f, (lo, flo), (hi, fhi), x0, opts)
}

/// As [`newton_bisect`] with the endpoint values already evaluated.
pub fn newton_bisect_known<T: Real>(
    mut f: impl FnMut(T) -> (T, T),
    (mut lo, flo): (T, T),
    (mut hi, fhi): (T, T),
    x0: Option<T>,
    opts: RootOptions,
) -> Result<Root<T>> {
    let diag = |it: usize, lo: T, hi: T, flo: T, fhi: T| Error::NoConvergence {
        iterations: it,
        lo: lo.to_f64_lossy(),
        hi: hi.to_f64_lossy(),
        flo: flo.to_f64_lossy(),
        fhi: fhi.to_f64_lossy(),
    };
    if flo == T::zero() {
        return Ok(Root { x: lo, iterations: 0 });
    }
    if fhi == T::zero() {
        return Ok(Root { x: hi, iterations: 0 });
    }
    if (flo > T::zero()) == (fhi > T::zero()) || flo.is_nan() || fhi.is_nan() {
        return Err(diag(0, lo, hi, flo, fhi));
    }
    // Orient so that f(lo) < 0 < f(hi).
    if flo > T::zero() {
        std::mem::swap(&mut lo, &mut hi);
    }
    let tol = T::tol(opts.rel_tol);
    let abs_tol = T::lit(opts.abs_tol);
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut x = match x0 {
        Some(x) if x > lo.min(hi) && x < lo.max(hi) => x,
        _ => half * (lo + hi),
    };
    let mut dx_old = (hi - lo).abs();
    let mut dx = dx_old;
    let (mut fx, mut dfx) = f(x);
    for it in 1..=opts.max_iter {
        if fx == T::zero() {
            return Ok(Root { x, iterations: it });
        }
        let newton_out = ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) > T::zero();
        let slow = (two * fx).abs() > (dx_old * dfx).abs();
        if newton_out || slow || !dfx.is_finite() || dfx == T::zero() {
            dx_old = dx;
            dx = half * (hi - lo);
            x = lo + dx;
        } else {
            dx_old = dx;
            dx = fx / dfx;
            x = x - dx;
        }
        if dx.abs() <= tol * x.abs() + abs_tol {
            return Ok(Root { x, iterations: it });
        }
        let (a, b) = f(x);
        if a.is_nan() {
            let (flo, _) = f(lo);
            let (fhi, _) = f(hi);
            return Err(diag(it, lo, hi, flo, fhi));
        }
        fx = a;
        dfx = b;
        if fx < T::zero() {
            lo = x;
        } else {
            hi = x;
        }
    }
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    Err(diag(opts.max_iter, lo, hi, flo, fhi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = newton_bisect(|x: f64| (x * x - 2.0, 2.0 * x), 0.0, 10.0, None, RootOptions::default())
            .unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-14);
        assert!(r.iterations < 20);
    }

    #[test]
    fn survives_bad_derivative() {
        // cbrt has infinite derivative at 0 and Newton diverges from any start.
        let r = newton_bisect(
            |x: f64| (x.cbrt(), 1.0 / (3.0 * x.abs().cbrt().powi(2)).max(1e-300)),
            -1.0,
            2.0,
            Some(0.5),
            RootOptions { abs_tol: 1e-14, ..Default::default() },
        )
        .unwrap();
        assert!(r.x.abs() < 1e-10);
    }

    #[test]
    fn rejects_unbracketed() {
        let e = newton_bisect(|x: f64| (x * x + 1.0, 2.0 * x), -1.0, 1.0, None, RootOptions::default());
        assert!(matches!(e, Err(Error::NoConvergence { iterations: 0, .. })));
    }

    #[test]
    fn works_in_f32() {
        let r = newton_bisect(|x: f32| (x * x - 2.0, 2.0 * x), 0.0, 4.0, None, RootOptions::default())
            .unwrap();
        assert!((r.x - 2f32.sqrt()).abs() < 1e-6);
    }
}
