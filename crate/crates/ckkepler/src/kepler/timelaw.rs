//! The time law `t(s)` of the regularized evolution, and its inversion.
//!
//! Starting from `dt/ds = S_{k1}(r) C_{k1}(r) = k g / (1 + k1 k^2 g^2)` with
//! `k g(s) = T_{k1}(r(s))`, the integral splits over the roots of the
//! denominator, `1 + k1 k^2 g^2 = (1 - w g)(1 + w g)` with
//! `w = k sqrt(-k1)`:
//!
//! ```text
//! t(s) = (k/2w) [ sigma I(sigma - w, w e, s) - sigma I(sigma + w, -w e, s) ]
//! I(a, b, s) = integral_0^s ds' / (a + b C_sigma(s'))
//! ```
//!
//! Each `I` reduces to the labeled primitive
//!
//! ```text
//! integral ds/(1 - alpha C_sigma(s))
//!     = -(2/sqrt(alpha^2-1)) ArcT_{-sigma}( (alpha+1)/sqrt(alpha^2-1) T_sigma(s/2) )
//! ```
//!
//! continued to complex `alpha` whenever `k1 > 0` makes `w` imaginary. The
//! principal values of the inverse tangents jump at every half `s`-period;
//! continuity and monotonicity are restored by counting the winding of
//! `C_sigma(s/2)` sign changes, i.e. adding the closed period integral
//! `2 pi / (sqrt(sigma) sqrt(1-alpha^2))` per full turn. Divergences of the
//! primitives are not defects: they sit exactly where the orbit leaves the
//! tangent chart (`T_{k1}(r) -> 1/sqrt(-k1)`, escape to infinity).
//!
//! Three evaluation paths, stitched by the size of `k1 (k/sigma)^2`:
//! flat (plus a first-order curvature correction), the closed form above
//! (real or complex arithmetic as `k1` dictates), and an adaptive-quadrature
//! fallback used when the complex route reports an imaginary residue above
//! `1e-9 (1 + |t|)` or lands too close to a branch cut.

use num_complex::Complex;

use crate::cktrig::raw;
use crate::oracle::quad;
use crate::{Error, Real, Result};

use super::OrbitParams;

/// Which evaluation route produced a `t(s)` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimePath {
    /// Flat formula `k (s - e S_sigma(s))/sigma`, with the `O(k1)` correction.
    Flat,
    /// Closed form over real arithmetic (`k1 < 0`).
    ClosedReal,
    /// Closed form with complex intermediates (`k1 > 0`).
    ClosedComplex,
    /// Adaptive quadrature of the `dt/ds` integrand.
    Quadrature,
}

enum PrimErr {
    /// The integrand has a pole inside the range: time genuinely diverges.
    Diverges,
    /// Too close to a branch cut for the complex route to be trusted.
    Fallback,
}

/// Physical time at regularization parameter `s`, `t(0) = 0`.
pub fn t_of_s<R: Real>(orbit: &OrbitParams<R>, s: R) -> Result<R> {
    t_of_s_with_path(orbit, s).map(|(t, _)| t)
}

/// Same as [`t_of_s`], also reporting the evaluation route (the quadrature
/// route flags an analytic-continuation fallback).
pub fn t_of_s_with_path<R: Real>(orbit: &OrbitParams<R>, s: R) -> Result<(R, TimePath)> {
    if !s.is_finite() {
        return Err(Error::NonFinite("t_of_s parameter"));
    }
    if s == R::zero() {
        return Ok((R::zero(), TimePath::Flat));
    }
    let k1 = orbit.space().kappa1;
    let sigma = orbit.sigma();
    let flat = k1 == R::zero()
        || (sigma != R::zero()
            && (k1.abs() * (orbit.coupling() / sigma).powi(2)) < R::of(1e-6));
    if flat {
        return Ok((t_flat_corrected(orbit, s), TimePath::Flat));
    }
    if sigma == R::zero() {
        // The expansion parameter here is k1 T(r)^2 at the evaluation point;
        // the rational closed form cancels badly when it is tiny.
        let tr = orbit.coupling() * orbit.radial_g(s);
        if k1.abs() * tr * tr < R::of(1e-6) {
            return Ok((t_flat_corrected(orbit, s), TimePath::Flat));
        }
        return t_sigma_zero(orbit, s);
    }
    if k1 < R::zero() {
        match t_closed_real(orbit, s) {
            Ok(t) => Ok((t, TimePath::ClosedReal)),
            Err(PrimErr::Diverges) => Err(Error::TimeDiverges),
            Err(PrimErr::Fallback) => quad_fallback(orbit, s),
        }
    } else {
        match t_closed_complex(orbit, s) {
            Ok(t) => Ok((t, TimePath::ClosedComplex)),
            Err(PrimErr::Diverges) => Err(Error::TimeDiverges),
            Err(PrimErr::Fallback) => quad_fallback(orbit, s),
        }
    }
}

fn quad_fallback<R: Real>(orbit: &OrbitParams<R>, s: R) -> Result<(R, TimePath)> {
    let t = quad::adaptive_simpson(|x| orbit.dt_ds(x), R::zero(), s, R::of(1e-12), R::of(1e-14))?;
    Ok((t, TimePath::Quadrature))
}

// ---------------------------------------------------------------------------
// Flat path with first-order curvature correction.
// ---------------------------------------------------------------------------

/// `t = k [ vq s + e (s - S_sigma(s))/sigma ] - k1 k^3 int g^3 + O(k1^2)`.
fn t_flat_corrected<R: Real>(orbit: &OrbitParams<R>, s: R) -> R {
    let k = orbit.coupling();
    let e = orbit.eccentricity();
    let vq = orbit.vq();
    let sigma = orbit.sigma();
    let i1 = int_versin(sigma, s);
    let t0 = k * (vq * s + e * i1);
    let k1 = orbit.space().kappa1;
    if k1 == R::zero() {
        return t0;
    }
    let i2 = int_versin2(sigma, s);
    let i3 = int_versin3(sigma, s);
    let three = R::of(3.0);
    let cube = vq * vq * vq * s
        + three * vq * vq * e * i1
        + three * vq * e * e * i2
        + e * e * e * i3;
    t0 - k1 * k * k * k * cube
}

/// `int_0^s V_sigma = (s - S_sigma(s))/sigma`, series-protected near 0.
fn int_versin<R: Real>(sigma: R, s: R) -> R {
    let x = sigma * s * s;
    if x.abs() < R::of(1e-2) {
        let c = R::one() - x * (R::of(1.0 / 20.0)
            - x * (R::of(1.0 / 840.0) - x * (R::of(1.0 / 60480.0) - x * R::of(1.0 / 6652800.0))));
        return s * s * s / R::of(6.0) * c;
    }
    (s - raw::sin(sigma, s)) / sigma
}

/// `int_0^s V_sigma^2 = (3s/2 - 2 S + C S / 2)/sigma^2`.
fn int_versin2<R: Real>(sigma: R, s: R) -> R {
    let x = sigma * s * s;
    if x.abs() < R::of(1e-2) {
        let c = R::of(0.2) - x * (R::of(1.0 / 42.0) - x * (R::of(1.0 / 720.0) - x * R::of(17.0 / 332640.0)));
        return s.powi(5) / R::of(4.0) * c;
    }
    let sn = raw::sin(sigma, s);
    let cn = raw::cos(sigma, s);
    (R::of(1.5) * s - R::of(2.0) * sn + cn * sn / R::of(2.0)) / (sigma * sigma)
}

/// `int_0^s V_sigma^3 = (5s/2 - 4 S + 3 C S / 2 + sigma S^3/3)/sigma^3`.
fn int_versin3<R: Real>(sigma: R, s: R) -> R {
    let x = sigma * s * s;
    if x.abs() < R::of(1e-2) {
        let c = R::of(1.0 / 7.0) - x * (R::of(1.0 / 36.0) - x * R::of(7.0 / 2640.0));
        return s.powi(7) / R::of(8.0) * c;
    }
    let sn = raw::sin(sigma, s);
    let cn = raw::cos(sigma, s);
    (R::of(2.5) * s - R::of(4.0) * sn + R::of(1.5) * cn * sn + sigma * sn * sn * sn / R::of(3.0))
        / (sigma * sigma * sigma)
}

// ---------------------------------------------------------------------------
// The labeled primitive, real arithmetic.
// ---------------------------------------------------------------------------

/// Continuous antiderivative `P(e, s) = int_0^s ds'/(1 - e C_sigma(s'))`,
/// `P(e, 0) = 0`, branch-unwound across `s`-periods.
///
/// Errors with [`Error::TimeDiverges`] when the integrand has a pole inside
/// the range (`|e| > 1` oscillatory, or `0 < e < 1` hyperbolic).
pub fn closed_primitive<R: Real>(sigma: R, e: R, s: R) -> Result<R> {
    for (v, what) in [(sigma, "primitive label"), (e, "primitive modulus"), (s, "primitive argument")] {
        if !v.is_finite() {
            return Err(Error::NonFinite(what));
        }
    }
    p_real(R::one() - e, R::one() + e, sigma, s).map_err(|_| Error::TimeDiverges)
}

/// Window index and principal tangent `tan(sqrt(sigma) sh/2)` for the
/// oscillatory branches. Exactly at a half-period boundary the rounded
/// window index and the side of the pole the tangent lands on can disagree;
/// the tangent is pi-periodic so the index is simply slid to match its sign.
pub(crate) fn principal_window<R: Real>(rs: R, s: R) -> (R, R) {
    let ps = R::of(2.0) * R::PI() / rs;
    let mut n = (s / ps).round();
    let sh = s - n * ps;
    let th = (rs * sh / R::of(2.0)).tan();
    if sh > R::zero() && th < R::zero() {
        n = n + R::one();
    } else if sh < R::zero() && th > R::zero() {
        n = n - R::one();
    }
    (n, th)
}

/// Core real-branch dispatch of the primitive. `one_m = 1 - alpha` and
/// `one_p = 1 + alpha` arrive precomputed so callers can form them without
/// cancellation.
fn p_real<R: Real>(one_m: R, one_p: R, sigma: R, s: R) -> std::result::Result<R, PrimErr> {
    let om2 = one_m * one_p; // = 1 - alpha^2
    if sigma > R::zero() {
        let rs = sigma.sqrt();
        let (n, th) = principal_window(rs, s);
        if om2 > R::zero() {
            let r1 = (one_p / one_m).sqrt();
            Ok(R::of(2.0) / (rs * om2.sqrt()) * ((r1 * th).atan() + n * R::PI()))
        } else if om2 < R::zero() {
            if n != R::zero() {
                return Err(PrimErr::Diverges);
            }
            let c = one_p / (-om2).sqrt();
            let a = c * th;
            if !(a.abs() < R::one()) {
                return Err(PrimErr::Diverges);
            }
            Ok(-R::of(2.0) / (rs * (-om2).sqrt()) * a.atanh())
        } else if one_m == R::zero() {
            Err(PrimErr::Diverges)
        } else {
            // alpha = -1: integral of 1/(1 + C_sigma) = T_sigma(s/2).
            if n != R::zero() {
                return Err(PrimErr::Diverges);
            }
            Ok(th / rs)
        }
    } else if sigma == R::zero() {
        if one_m == R::zero() {
            return Err(PrimErr::Diverges);
        }
        Ok(s / one_m)
    } else {
        let q = (-sigma).sqrt();
        let th = (q * s / R::of(2.0)).tanh();
        if om2 > R::zero() {
            let r1 = (one_p / one_m).sqrt();
            let a = r1 * th;
            if !(a.abs() < R::one()) {
                return Err(PrimErr::Diverges);
            }
            Ok(R::of(2.0) / (q * om2.sqrt()) * a.atanh())
        } else if om2 < R::zero() {
            let c = one_p / (-om2).sqrt();
            Ok(-R::of(2.0) / (q * (-om2).sqrt()) * (c * th).atan())
        } else if one_m == R::zero() {
            Err(PrimErr::Diverges)
        } else {
            Ok(th / q)
        }
    }
}

/// `int_0^s ds'/C_sigma(s')` (inverse-Gudermannian family), for the
/// resonant decomposition `sigma = +-w`.
fn inv_gd<R: Real>(sigma: R, s: R) -> std::result::Result<R, PrimErr> {
    if sigma > R::zero() {
        let rs = sigma.sqrt();
        let a = (rs * s / R::of(2.0)).tan();
        if !(a.abs() < R::one()) {
            return Err(PrimErr::Diverges);
        }
        Ok(R::of(2.0) / rs * a.atanh())
    } else if sigma == R::zero() {
        Ok(s)
    } else {
        let q = (-sigma).sqrt();
        Ok(R::of(2.0) / q * (q * s / R::of(2.0)).tanh().atan())
    }
}

fn t_closed_real<R: Real>(orbit: &OrbitParams<R>, s: R) -> std::result::Result<R, PrimErr> {
    let k1 = orbit.space().kappa1;
    let k = orbit.coupling();
    let e = orbit.eccentricity();
    let vq = orbit.vq();
    let sigma = orbit.sigma();
    let w = k * (-k1).sqrt();
    let a1 = sigma - w;
    let a2 = sigma + w;

    let term1 = if a1 == R::zero() {
        sigma / (w * e) * inv_gd(sigma, s)?
    } else {
        let one_m = sigma * (R::one() - w * vq) / a1;
        let one_p = (sigma - w * (R::one() + e)) / a1;
        sigma / a1 * p_real(one_m, one_p, sigma, s)?
    };
    let term2 = if a2 == R::zero() {
        -(sigma / (w * e)) * inv_gd(sigma, s)?
    } else {
        let one_m = sigma * (R::one() + w * vq) / a2;
        let one_p = (sigma + w * (R::one() + e)) / a2;
        sigma / a2 * p_real(one_m, one_p, sigma, s)?
    };
    Ok(k / (R::of(2.0) * w) * (term1 - term2))
}

// ---------------------------------------------------------------------------
// The labeled primitive, complex arithmetic (k1 > 0).
// ---------------------------------------------------------------------------

fn p_complex<R: Real>(
    one_m: Complex<R>,
    one_p: Complex<R>,
    sigma: R,
    s: R,
) -> std::result::Result<Complex<R>, PrimErr> {
    let om2 = one_m * one_p;
    let su = (-om2).sqrt(); // sqrt(alpha^2 - 1)
    if su.norm() == R::zero() {
        return Err(PrimErr::Fallback);
    }
    let c = one_p / su;
    let mu = Complex::new(-sigma, R::zero());
    let sqmu = mu.sqrt();
    let dir = sqmu * c;
    if dir.re.abs() < R::of(1e-12) * dir.norm() {
        // Argument sweeps a branch cut of the complex arctangent.
        return Err(PrimErr::Fallback);
    }
    let two = R::of(2.0);
    if sigma > R::zero() {
        let rs = sigma.sqrt();
        let (n, tan_half) = principal_window(rs, s);
        let th = tan_half / rs; // T_sigma(sh/2)
        let mut val = -(Complex::new(two, R::zero()) / su) * raw::atan_complex(mu, c * Complex::new(th, R::zero()));
        if n != R::zero() {
            let period = -(Complex::new(two, R::zero()) / su) * (Complex::new(R::PI(), R::zero()) / sqmu)
                * Complex::new(dir.re.signum(), R::zero());
            val = val + period * Complex::new(n, R::zero());
        }
        Ok(val)
    } else {
        let q = (-sigma).sqrt();
        let th = (q * s / two).tanh() / q;
        Ok(-(Complex::new(two, R::zero()) / su) * raw::atan_complex(mu, c * Complex::new(th, R::zero())))
    }
}

fn t_closed_complex<R: Real>(orbit: &OrbitParams<R>, s: R) -> std::result::Result<R, PrimErr> {
    let k1 = orbit.space().kappa1;
    let k = orbit.coupling();
    let e = orbit.eccentricity();
    let vq = orbit.vq();
    let sigma = orbit.sigma();
    let one = Complex::new(R::one(), R::zero());
    let w = Complex::new(R::zero(), k * k1.sqrt());
    let sg = Complex::new(sigma, R::zero());
    let a1 = sg - w;
    let a2 = sg + w;

    let one_m1 = sg * (one - w * Complex::new(vq, R::zero())) / a1;
    let one_p1 = (sg - w * Complex::new(R::one() + e, R::zero())) / a1;
    let one_m2 = sg * (one + w * Complex::new(vq, R::zero())) / a2;
    let one_p2 = (sg + w * Complex::new(R::one() + e, R::zero())) / a2;

    let p1 = p_complex(one_m1, one_p1, sigma, s)?;
    let p2 = p_complex(one_m2, one_p2, sigma, s)?;
    let t = Complex::new(k, R::zero()) / (w * Complex::new(R::of(2.0), R::zero()))
        * sg
        * (p1 / a1 - p2 / a2);
    if t.im.abs() > R::of(1e-9) * (R::one() + t.re.abs()) {
        return Err(PrimErr::Fallback);
    }
    Ok(t.re)
}

// ---------------------------------------------------------------------------
// sigma = 0 closed form: the integrand is rational in s.
// ---------------------------------------------------------------------------

/// `int_0^s ds'/(a + b s'^2)` over the complex plane.
fn quad_rational<R: Real>(
    a: Complex<R>,
    b: Complex<R>,
    s: R,
) -> std::result::Result<Complex<R>, PrimErr> {
    if a.norm() == R::zero() {
        return Err(PrimErr::Diverges);
    }
    if b.norm() == R::zero() {
        return Ok(Complex::new(s, R::zero()) / a);
    }
    let zeta = (b / a).sqrt();
    if zeta.re.abs() < R::of(1e-12) * zeta.norm() {
        // Real negative b/a: pole on the path at |s| = 1/|zeta|.
        let pole = R::one() / zeta.norm();
        if s.abs() >= pole {
            return Err(PrimErr::Diverges);
        }
    }
    let zs = zeta * Complex::new(s, R::zero());
    Ok(zs.atan() / (a * zeta))
}

fn t_sigma_zero<R: Real>(orbit: &OrbitParams<R>, s: R) -> Result<(R, TimePath)> {
    let k1 = orbit.space().kappa1;
    let k = orbit.coupling();
    let e = orbit.eccentricity();
    let vq = orbit.vq();
    let w = if k1 < R::zero() {
        Complex::new(k * (-k1).sqrt(), R::zero())
    } else {
        Complex::new(R::zero(), k * k1.sqrt())
    };
    let one = Complex::new(R::one(), R::zero());
    let half_e = Complex::new(e / R::of(2.0), R::zero());
    let wvq = w * Complex::new(vq, R::zero());
    // 1 -+ w g = (1 -+ w vq) -+ (w e/2) s^2
    let j1 = quad_rational(one - wvq, -(w * half_e), s);
    let j2 = quad_rational(one + wvq, w * half_e, s);
    match (j1, j2) {
        (Ok(j1), Ok(j2)) => {
            let t = Complex::new(k, R::zero()) / (w * Complex::new(R::of(2.0), R::zero())) * (j1 - j2);
            if t.im.abs() > R::of(1e-9) * (R::one() + t.re.abs()) {
                return quad_fallback(orbit, s);
            }
            let path = if k1 < R::zero() {
                TimePath::ClosedReal
            } else {
                TimePath::ClosedComplex
            };
            Ok((t.re, path))
        }
        _ => Err(Error::TimeDiverges),
    }
}

// ---------------------------------------------------------------------------
// Inversion s(t').
// ---------------------------------------------------------------------------

/// Parameter value of the escape pole `T_{k1}(r) -> 1/sqrt(-k1)`, if the
/// orbit reaches it (`k1 < 0` only).
pub(crate) fn escape_s<R: Real>(orbit: &OrbitParams<R>) -> Option<R> {
    let k1 = orbit.space().kappa1;
    if k1 >= R::zero() || orbit.eccentricity() == R::zero() {
        return None;
    }
    let w = orbit.coupling() * (-k1).sqrt();
    let c = (R::one() / w - orbit.vq()) / orbit.eccentricity();
    if c <= R::zero() {
        return None;
    }
    let sigma = orbit.sigma();
    if sigma > R::zero() {
        let arg = R::one() - sigma * c;
        if arg < -R::one() {
            return None;
        }
        Some(arg.max(-R::one()).acos() / sigma.sqrt())
    } else if sigma == R::zero() {
        Some((R::of(2.0) * c).sqrt())
    } else {
        Some((R::one() - sigma * c).acosh() / (-sigma).sqrt())
    }
}

/// Inverse of the time law: the `s` with `t_of_s(s) = t`.
///
/// Safeguarded Newton (derivative `ds/dt = 1/(S_{k1}(r) C_{k1}(r))`) inside a
/// bisection bracket; 100-iteration cap, `1e-12` convergence on `s`. Defined
/// for signatures where `t(s)` is monotone (`k2 >= 0`).
pub fn s_of_t<R: Real>(orbit: &OrbitParams<R>, t: R) -> Result<R> {
    if !t.is_finite() {
        return Err(Error::NonFinite("s_of_t target"));
    }
    if orbit.space().kappa2 < R::zero() {
        return Err(Error::UnsupportedSpace);
    }
    if t == R::zero() {
        return Ok(R::zero());
    }
    if t < R::zero() {
        return s_of_t(orbit, -t).map(|s| -s);
    }

    let cap = escape_s(orbit);
    if cap.is_none() {
        if let Some(ps) = orbit.s_period() {
            let t_full = t_of_s(orbit, ps)?;
            if !(t_full > R::zero()) {
                return Err(Error::OutOfRange);
            }
            let n = (t / t_full).floor();
            let t_hat = t - n * t_full;
            let s_hat = invert_monotone(orbit, t_hat, R::zero(), ps)?;
            return Ok(n * ps + s_hat);
        }
    }

    // Open evolution: expand a bracket, capped at the escape pole if any.
    let mut lo = R::zero();
    let mut hi = match cap {
        Some(sp) => sp / R::of(2.0),
        None => R::one() / (R::one() + orbit.sigma().abs().sqrt()),
    };
    let mut t_prev = R::zero();
    let mut found = false;
    for _ in 0..200 {
        match t_of_s(orbit, hi) {
            Ok(th) if th >= t => {
                found = true;
                break;
            }
            Ok(th) => {
                if cap.is_none() && th <= t_prev * (R::one() + R::of(1e-15)) && t_prev > R::zero() {
                    // t(s) saturates below the target.
                    return Err(Error::OutOfRange);
                }
                t_prev = th;
                lo = hi;
                hi = match cap {
                    Some(sp) => hi + (sp - hi) / R::of(2.0),
                    None => hi * R::of(2.0),
                };
            }
            Err(_) => return Err(Error::OutOfRange),
        }
    }
    if !found {
        return Err(Error::OutOfRange);
    }
    invert_monotone(orbit, t, lo, hi)
}

fn invert_monotone<R: Real>(orbit: &OrbitParams<R>, target: R, mut lo: R, mut hi: R) -> Result<R> {
    let mut s = lo + (hi - lo) / R::of(2.0);
    let tol = R::of(1e-12);
    for _ in 0..100 {
        let f = t_of_s(orbit, s)? - target;
        if f > R::zero() {
            hi = s;
        } else {
            lo = s;
        }
        let d = orbit.dt_ds(s);
        let mut step = if d != R::zero() { f / d } else { R::zero() };
        let mut next = s - step;
        if step == R::zero() || next <= lo || next >= hi {
            next = lo + (hi - lo) / R::of(2.0);
            step = s - next;
        }
        s = next;
        if step.abs() <= tol * s.abs().max(R::one()) {
            return Ok(s);
        }
    }
    Err(Error::NoConvergence)
}
