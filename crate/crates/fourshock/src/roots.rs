//! Bracketed scalar root finding.
//!
//! Every equation solved in this crate has a proven strictly monotone (or
//! single sign change) residual, so we always work from a sign-changing
//! bracket and never rely on derivatives. The solver is Brent-style:
//! bisection safeguarded with inverse-quadratic/secant steps.

use crate::error::{Error, Result};

/// Absolute bracket tolerance used by default throughout the crate.
pub const BRACKET_TOL: f64 = 1e-14;

/// Default iteration cap. Bisection alone reaches 1e-14 from any
/// double-precision bracket in under 200 steps.
pub const MAX_ITER: usize = 200;

/// Find a root of `f` inside the sign-changing bracket `[a, b]`.
///
/// Converges when the bracket width falls below `tol + 4*eps*|x|`.
/// Returns an error if `f(a)` and `f(b)` do not differ in sign or if the
/// iteration cap is exceeded.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut xa, mut xb) = (a, b);
    let mut fa = f(xa);
    let mut fb = f(xb);
    if fa == 0.0 {
        return Ok(xa);
    }
    if fb == 0.0 {
        return Ok(xb);
    }
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::RootFind(format!(
            "bracket endpoints not finite: f({xa:e}) = {fa:e}, f({xb:e}) = {fb:e}"
        )));
    }
    if (fa > 0.0) == (fb > 0.0) {
        return Err(Error::RootFind(format!(
            "no sign change on [{xa:e}, {xb:e}]: f = {fa:e}, {fb:e}"
        )));
    }

    // xb is the best iterate, xc the previous bracket endpoint.
    let (mut xc, mut fc) = (xa, fa);
    let mut d = xb - xa;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if fb.abs() > fc.abs() {
            // b must be the best approximation; c brackets it.
            xa = xb;
            fa = fb;
            xb = xc;
            fb = fc;
            xc = xa;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * xb.abs() + 0.5 * tol;
        let xm = 0.5 * (xc - xb);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(xb);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Attempt inverse quadratic interpolation / secant.
            let s = fb / fa;
            let (mut p, mut q) = if xa == xc {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (xb - xa) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        xa = xb;
        fa = fb;
        xb += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(xb);
        if (fb > 0.0) == (fc > 0.0) {
            xc = xa;
            fc = fa;
            d = xb - xa;
            e = d;
        }
    }
    Err(Error::RootFind(format!(
        "no convergence after {MAX_ITER} iterations near x = {xb:e}"
    )))
}

/// Brent with the crate-default tolerance.
pub fn brent_default<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    brent(f, a, b, BRACKET_TOL)
}
