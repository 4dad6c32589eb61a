use crate::error::{Error, Result};
use crate::scalar::Real;

/// Bisection on a sign-changing bracket, run to the floating-point limit.
pub fn bisect<T: Real, F: FnMut(T) -> T>(mut f: F, mut a: T, mut b: T) -> Result<T> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa * fb > T::zero() {
        return Err(Error::NoConvergence(format!(
            "no sign change on [{}, {}]",
            a.as_f64(),
            b.as_f64()
        )));
    }
    let two = T::lit(2.0);
    for _ in 0..400 {
        let m = (a + b) / two;
        if m <= a.min(b) || m >= a.max(b) {
            return Ok(m);
        }
        let fm = f(m);
        if fm == T::zero() {
            return Ok(m);
        }
        if fa * fm < T::zero() {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    Err(Error::NoConvergence("bisection iteration limit".into()))
}

/// Expands a bracket geometrically upward from `a` until `f` changes sign.
pub fn bracket_upward<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    factor: T,
    max_steps: usize,
) -> Result<(T, T)> {
    let mut lo = a;
    let f_lo = f(lo);
    for _ in 0..max_steps {
        let hi = lo * factor;
        if f_lo * f(hi) <= T::zero() {
            return Ok((lo, hi));
        }
        lo = hi;
    }
    Err(Error::NoConvergence("no sign change found while expanding".into()))
}
