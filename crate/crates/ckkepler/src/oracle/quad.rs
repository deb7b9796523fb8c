//! Adaptive Simpson quadrature with a pole guard.

use crate::{Error, Real, Result};

/// Adaptive Simpson on `[a, b]` to relative tolerance `rel` (with absolute
/// floor `abs`). Non-finite integrand values are reported as poles.
pub(crate) fn adaptive_simpson<R: Real>(
    f: impl Fn(R) -> R,
    a: R,
    b: R,
    rel: R,
    abs: R,
) -> Result<R> {
    if a == b {
        return Ok(R::zero());
    }
    let fa = f(a);
    let fb = f(b);
    let m = mid(a, b);
    let fm = f(m);
    for v in [fa, fm, fb] {
        if !v.is_finite() {
            return Err(Error::QuadraturePole);
        }
    }
    let whole = simpson(a, b, fa, fm, fb);
    let scale = whole.abs().max(abs / rel.max(R::epsilon()));
    recurse(&f, a, b, fa, fm, fb, whole, rel * scale + abs, 0)
}

fn mid<R: Real>(a: R, b: R) -> R {
    a + (b - a) / R::of(2.0)
}

fn simpson<R: Real>(a: R, b: R, fa: R, fm: R, fb: R) -> R {
    (b - a) / R::of(6.0) * (fa + R::of(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<R: Real>(
    f: &impl Fn(R) -> R,
    a: R,
    b: R,
    fa: R,
    fm: R,
    fb: R,
    whole: R,
    tol: R,
    depth: u32,
) -> Result<R> {
    let m = mid(a, b);
    let lm = mid(a, m);
    let rm = mid(m, b);
    let flm = f(lm);
    let frm = f(rm);
    if !flm.is_finite() || !frm.is_finite() {
        return Err(Error::QuadraturePole);
    }
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth > 60 {
        return Err(Error::QuadraturePole);
    }
    if delta.abs() <= R::of(15.0) * tol || (b - a).abs() < R::of(1e3) * R::epsilon() * b.abs().max(R::one()) {
        return Ok(left + right + delta / R::of(15.0));
    }
    let half = tol / R::of(2.0);
    Ok(recurse(f, a, m, fa, flm, fm, left, half, depth + 1)?
        + recurse(f, m, b, fm, frm, fb, right, half, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_functions() {
        let v = adaptive_simpson(|x: f64| x.cos(), 0.0, 1.0, 1e-12, 1e-14).unwrap();
        assert!((v - 1.0_f64.sin()).abs() < 1e-12);
        let v = adaptive_simpson(|x: f64| (-x * x).exp(), -2.0, 2.0, 1e-11, 1e-14).unwrap();
        assert!((v - 1.764162781524843).abs() < 1e-10);
    }

    #[test]
    fn reports_poles() {
        let r = adaptive_simpson(|x: f64| 1.0 / x, -1.0, 1.0, 1e-10, 1e-14);
        assert!(r.is_err());
    }
}
