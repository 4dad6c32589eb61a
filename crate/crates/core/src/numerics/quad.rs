use crate::error::{Error, Result};
use crate::scalar::Real;

/// Adaptive Simpson quadrature with absolute/relative tolerance.
pub fn adaptive_simpson<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, tol: T) -> Result<T> {
    let two = T::lit(2.0);
    let six = T::lit(6.0);
    let fa = f(a);
    let fb = f(b);
    let m = (a + b) / two;
    let fm = f(m);
    let whole = (b - a) / six * (fa + T::lit(4.0) * fm + fb);
    let mut evals = 3usize;
    let v = recurse(&f, a, b, fa, fm, fb, whole, tol, 50, &mut evals)?;
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn recurse<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
    evals: &mut usize,
) -> Result<T> {
    let two = T::lit(2.0);
    let six = T::lit(6.0);
    let four = T::lit(4.0);
    let m = (a + b) / two;
    let lm = (a + m) / two;
    let rm = (m + b) / two;
    let flm = f(lm);
    let frm = f(rm);
    *evals += 2;
    if *evals > 2_000_000 {
        return Err(Error::NoConvergence("quadrature evaluation budget exhausted".into()));
    }
    let left = (m - a) / six * (fa + four * flm + fm);
    let right = (b - m) / six * (fm + four * frm + fb);
    let delta = left + right - whole;
    let scale = tol.max(tol * (left + right).abs());
    if depth == 0 || delta.abs() <= T::lit(15.0) * scale {
        return Ok(left + right + delta / T::lit(15.0));
    }
    let half = tol / two;
    Ok(recurse(f, a, m, fa, flm, fm, left, half, depth - 1, evals)?
        + recurse(f, m, b, fm, frm, fb, right, half, depth - 1, evals)?)
}
