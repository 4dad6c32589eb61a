use crate::error::{Error, Result};
use crate::numerics::roots::bisect;
use crate::scalar::Real;

/// Spherical Bessel function of the first kind `j_l(x)` for `x >= 0`.
///
/// Upward recurrence is stable for `x > l`; below that Miller's downward
/// recurrence is normalised against `j_0` or `j_1`, whichever is larger.
pub fn spherical_jn<T: Real>(l: u32, x: T) -> T {
    if x == T::zero() {
        return if l == 0 { T::one() } else { T::zero() };
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if l == 0 {
        return j0;
    }
    let j1 = s / (x * x) - c / x;
    if l == 1 {
        return j1;
    }
    if x > T::int(l as i64) {
        let (mut prev, mut cur) = (j0, j1);
        for n in 1..l {
            let next = T::int(2 * n as i64 + 1) / x * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    downward(l, x, j0, j1)
}

fn downward<T: Real>(l: u32, x: T, j0: T, j1: T) -> T {
    let big = T::lit(1e10);
    let top = l.max(x.as_f64().ceil() as u32);
    let start = top + 16 + (40.0 * f64::from(top.max(1))).sqrt() as u32;
    let mut upper = T::zero();
    let mut cur = T::lit(1e-10);
    let mut at_l = T::zero();
    let mut at_1 = T::zero();
    let mut n = start;
    while n > 0 {
        let lower = T::int(2 * n as i64 + 1) / x * cur - upper;
        upper = cur;
        cur = lower;
        n -= 1;
        if n == l {
            at_l = cur;
        }
        if n == 1 {
            at_1 = cur;
        }
        if cur.abs() > big {
            cur /= big;
            upper /= big;
            at_l /= big;
            at_1 /= big;
        }
    }
    // `cur` now holds the unnormalised j_0
    if j0.abs() >= j1.abs() {
        at_l * j0 / cur
    } else {
        at_l * j1 / at_1
    }
}

/// The `n`-th positive zero of `j_l` (n starts at 1).
pub fn spherical_jn_zero<T: Real>(l: u32, n: u32) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidInput("zero index starts at 1".into()));
    }
    if l == 0 {
        return Ok(T::int(n as i64) * T::PI());
    }
    // j_l keeps one sign on (0, l]; zeros are spaced by roughly π
    let step = T::lit(0.25);
    let mut a = T::int(l as i64).max(T::lit(0.5));
    let mut fa = spherical_jn(l, a);
    let mut found = 0;
    let limit = T::int(l as i64 + 8 * (n as i64 + 4));
    while a < limit {
        let b = a + step;
        let fb = spherical_jn(l, b);
        if fa == T::zero() || fa * fb < T::zero() {
            found += 1;
            if found == n {
                if fa == T::zero() {
                    return Ok(a);
                }
                return bisect(|x| spherical_jn(l, x), a, b);
            }
        }
        a = b;
        fa = fb;
    }
    Err(Error::NoConvergence(format!("zero {n} of j_{l} not bracketed")))
}
