//! Bracketed bisection. Every root problem in this crate has a proven or
//! observed monotone target, so bisection's guaranteed convergence is
//! preferred over derivative-based methods.

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Clone, Copy, Debug)]
pub struct BisectOptions<R: Real> {
    /// Stop once the bracket width is at or below this.
    pub x_abs: R,
    /// If set, additionally require |f(mid)| at or below this.
    pub f_abs: Option<R>,
    pub max_iter: usize,
}

impl<R: Real> BisectOptions<R> {
    pub fn width(x_abs: R) -> Self {
        BisectOptions {
            x_abs,
            f_abs: None,
            max_iter: 200,
        }
    }

    pub fn width_and_residual(x_abs: R, f_abs: R) -> Self {
        BisectOptions {
            x_abs,
            f_abs: Some(f_abs),
            max_iter: 200,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Root<R: Real> {
    pub x: R,
    pub fx: R,
    pub bracket: (R, R),
    pub iterations: usize,
}

/// Bisect `f` on `[a, b]`. The endpoints must straddle a sign change.
pub fn bisect<R: Real, F>(mut f: F, a: R, b: R, opts: BisectOptions<R>) -> Result<Root<R>>
where
    F: FnMut(R) -> Result<R>,
{
    let mut lo = a;
    let mut hi = b;
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == R::zero() {
        return Ok(Root {
            x: lo,
            fx: flo,
            bracket: (lo, lo),
            iterations: 0,
        });
    }
    if fhi == R::zero() {
        return Ok(Root {
            x: hi,
            fx: fhi,
            bracket: (hi, hi),
            iterations: 0,
        });
    }
    if (flo > R::zero()) == (fhi > R::zero()) {
        return Err(Error::NoSignChange {
            lo: lo.to_f64(),
            hi: hi.to_f64(),
        });
    }
    let mut mid = R::half() * (lo + hi);
    let mut fmid = f(mid)?;
    for iter in 1..=opts.max_iter {
        if (fmid > R::zero()) == (flo > R::zero()) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        let width_ok = hi - lo <= opts.x_abs;
        let f_ok = opts.f_abs.map_or(true, |t| fmid.abs() <= t);
        if width_ok && f_ok {
            return Ok(Root {
                x: mid,
                fx: fmid,
                bracket: (lo, hi),
                iterations: iter,
            });
        }
        let next = R::half() * (lo + hi);
        if next <= lo || next >= hi {
            // bracket has collapsed to adjacent floats
            if f_ok {
                return Ok(Root {
                    x: mid,
                    fx: fmid,
                    bracket: (lo, hi),
                    iterations: iter,
                });
            }
            return Err(Error::NonConvergence {
                iterations: iter,
                context: format!("bisection stalled at x = {mid}, |f| = {}", fmid.abs()),
            });
        }
        mid = next;
        fmid = f(mid)?;
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        context: "bisection iteration budget exhausted".into(),
    })
}
