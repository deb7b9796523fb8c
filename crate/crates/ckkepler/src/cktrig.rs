//! Label-parametrized trigonometric kernel.
//!
//! The labeled Cosine and Sine are the solutions of `F'' = -kappa F` with
//! `C(0)=1, C'(0)=0` and `S(0)=0, S'(0)=1`:
//!
//! ```text
//! C_k(x) = cos(sqrt(k) x)            S_k(x) = sin(sqrt(k) x)/sqrt(k)     k > 0
//!        = 1                                = x                          k = 0
//!        = cosh(sqrt(-k) x)                 = sinh(sqrt(-k) x)/sqrt(-k)  k < 0
//! ```
//!
//! together with the Versine `V_k(x) = (1 - C_k(x))/k` (with `V_0 = x^2/2`)
//! and the Tangent `T_k = S_k/C_k`. They satisfy `C^2 + k S^2 = 1` and
//! interpolate circular, parabolic and hyperbolic trigonometry smoothly in
//! the label `k`. A label is any finite real; the users of this module attach
//! the dimensional discipline (curvature, signature type, energy combination).
//!
//! Near `k x^2 = 0` the closed forms lose precision (catastrophically for the
//! versine), so everything switches to degree-4 Taylor polynomials in
//! `z = k x^2` below [`SERIES_THRESHOLD`]. The direct versine uses the
//! half-angle form `2 sin^2/k`, which is cancellation-free on its own.

use num_complex::Complex;

use crate::{Error, Real, Result};

/// Label size below which the series branch evaluates C, S and V:
/// `|kappa| x^2 < 1e-4`.
pub const SERIES_THRESHOLD: f64 = 1e-4;

#[inline]
fn check_finite<R: Real>(x: R, what: &'static str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Labeled cosine `C_kappa(x)`.
pub fn ck_cos<R: Real>(kappa: R, x: R) -> Result<R> {
    check_finite(kappa, "ck_cos label")?;
    check_finite(x, "ck_cos argument")?;
    Ok(raw::cos(kappa, x))
}

/// Labeled sine `S_kappa(x)`.
pub fn ck_sin<R: Real>(kappa: R, x: R) -> Result<R> {
    check_finite(kappa, "ck_sin label")?;
    check_finite(x, "ck_sin argument")?;
    Ok(raw::sin(kappa, x))
}

/// Labeled versed sine `V_kappa(x) = (1 - C_kappa(x))/kappa`, `V_0 = x^2/2`.
pub fn ck_versin<R: Real>(kappa: R, x: R) -> Result<R> {
    check_finite(kappa, "ck_versin label")?;
    check_finite(x, "ck_versin argument")?;
    Ok(raw::versin(kappa, x))
}

/// Labeled tangent `T_kappa(x) = S_kappa(x)/C_kappa(x)`.
///
/// At zeros of the cosine the result is the signed infinity carried by the
/// sine, not a NaN; downstream quadrant evaluations rely on that.
pub fn ck_tan<R: Real>(kappa: R, x: R) -> Result<R> {
    check_finite(kappa, "ck_tan label")?;
    check_finite(x, "ck_tan argument")?;
    Ok(raw::tan(kappa, x))
}

/// Principal (and shifted-branch) inverse of the labeled tangent.
///
/// For `kappa > 0` the principal range is `(-q, q)` with
/// `q = pi/(2 sqrt(kappa))`, and branch `n` shifts the result by
/// `n pi/sqrt(kappa)` (the period of `T_kappa`). Infinite `y` maps to the
/// quadrant `q`. For `kappa <= 0` the function is injective, so only
/// branch 0 is accepted; for `kappa < 0` the argument must satisfy
/// `|y| < 1/sqrt(-kappa)`.
pub fn ck_atan<R: Real>(kappa: R, y: R, branch: i32) -> Result<R> {
    check_finite(kappa, "ck_atan label")?;
    if y.is_nan() {
        return Err(Error::NonFinite("ck_atan argument"));
    }
    if kappa > R::zero() {
        let rk = kappa.sqrt();
        let principal = (rk * y).atan() / rk;
        let shift = R::from_i32(branch).expect("branch index") * R::PI() / rk;
        Ok(principal + shift)
    } else if branch != 0 {
        Err(Error::AtanBranch)
    } else if kappa == R::zero() {
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::AtanDomain)
        }
    } else {
        let rk = (-kappa).sqrt();
        let a = rk * y;
        if a.abs() >= R::one() {
            return Err(Error::AtanDomain);
        }
        Ok(a.atanh() / rk)
    }
}

/// Unchecked kernel used throughout the crate; callers guarantee finiteness.
pub(crate) mod raw {
    use super::*;

    #[inline]
    pub fn cos<R: Real>(kappa: R, x: R) -> R {
        let z = kappa * x * x;
        if z.abs() < R::of(SERIES_THRESHOLD) {
            // 1 - z/2! + z^2/4! - z^3/6! + z^4/8!
            let c4 = R::of(1.0 / 40320.0);
            let c3 = R::of(1.0 / 720.0);
            let c2 = R::of(1.0 / 24.0);
            let c1 = R::of(0.5);
            return R::one() - z * (c1 - z * (c2 - z * (c3 - z * c4)));
        }
        if kappa > R::zero() {
            (kappa.sqrt() * x).cos()
        } else {
            ((-kappa).sqrt() * x).cosh()
        }
    }

    #[inline]
    pub fn sin<R: Real>(kappa: R, x: R) -> R {
        let z = kappa * x * x;
        if z.abs() < R::of(SERIES_THRESHOLD) {
            // x (1 - z/3! + z^2/5! - z^3/7! + z^4/9!)
            let c4 = R::of(1.0 / 362880.0);
            let c3 = R::of(1.0 / 5040.0);
            let c2 = R::of(1.0 / 120.0);
            let c1 = R::of(1.0 / 6.0);
            return x * (R::one() - z * (c1 - z * (c2 - z * (c3 - z * c4))));
        }
        if kappa > R::zero() {
            let rk = kappa.sqrt();
            (rk * x).sin() / rk
        } else {
            let rk = (-kappa).sqrt();
            (rk * x).sinh() / rk
        }
    }

    #[inline]
    pub fn versin<R: Real>(kappa: R, x: R) -> R {
        let z = kappa * x * x;
        if z.abs() < R::of(SERIES_THRESHOLD) {
            // x^2 (1/2! - z/4! + z^2/6! - z^3/8! + z^4/10!)
            let c4 = R::of(1.0 / 3628800.0);
            let c3 = R::of(1.0 / 40320.0);
            let c2 = R::of(1.0 / 720.0);
            let c1 = R::of(1.0 / 24.0);
            return x * x * (R::of(0.5) - z * (c1 - z * (c2 - z * (c3 - z * c4))));
        }
        // 1 - C = 2 sin^2(half) in both regimes; avoids the 1 - cos cancellation.
        if kappa > R::zero() {
            let h = (kappa.sqrt() * x * R::of(0.5)).sin();
            R::of(2.0) * h * h / kappa
        } else {
            let h = ((-kappa).sqrt() * x * R::of(0.5)).sinh();
            -(R::of(2.0) * h * h / kappa)
        }
    }

    #[inline]
    pub fn tan<R: Real>(kappa: R, x: R) -> R {
        let c = cos(kappa, x);
        let s = sin(kappa, x);
        // A cosine this small is indistinguishable from its zero at the
        // rounding of the argument: report the pole explicitly.
        let at_pole = if kappa > R::zero() {
            c.abs() < R::of(4.0) * R::epsilon() * (kappa.sqrt() * x.abs()).max(R::one())
        } else {
            c == R::zero()
        };
        if at_pole {
            if s >= R::zero() {
                R::infinity()
            } else {
                R::neg_infinity()
            }
        } else {
            s / c
        }
    }

    /// Principal inverse tangent without input validation, branch 0.
    #[inline]
    pub fn atan<R: Real>(kappa: R, y: R) -> Result<R> {
        if kappa > R::zero() {
            let rk = kappa.sqrt();
            Ok((rk * y).atan() / rk)
        } else if kappa == R::zero() {
            Ok(y)
        } else {
            let a = (-kappa).sqrt() * y;
            if a.abs() >= R::one() {
                return Err(Error::AtanDomain);
            }
            Ok(a.atanh() / (-kappa).sqrt())
        }
    }

    /// Inverse sine for chart conversions: `ArcS_kappa`.
    #[inline]
    pub fn asin<R: Real>(kappa: R, y: R) -> Result<R> {
        if kappa > R::zero() {
            let a = kappa.sqrt() * y;
            if a.abs() > R::one() + R::of(1e-12) {
                return Err(Error::ChartOverflow);
            }
            Ok(a.min(R::one()).max(-R::one()).asin() / kappa.sqrt())
        } else if kappa == R::zero() {
            Ok(y)
        } else {
            let rk = (-kappa).sqrt();
            Ok((rk * y).asinh() / rk)
        }
    }

    /// Complex labeled inverse tangent `ArcT_mu(z) = atan(sqrt(mu) z)/sqrt(mu)`,
    /// analytic in the label; series branch keeps it smooth through `mu = 0`.
    pub fn atan_complex<R: Real>(mu: Complex<R>, z: Complex<R>) -> Complex<R> {
        let u = mu * z * z;
        if u.norm() < R::of(1e-3) {
            // z (1 - u/3 + u^2/5 - u^3/7 + u^4/9 - u^5/11 + u^6/13)
            let mut acc = Complex::new(R::of(1.0 / 13.0), R::zero());
            for d in [11.0, 9.0, 7.0, 5.0, 3.0] {
                acc = Complex::new(R::one() / R::of(d), R::zero()) - u * acc;
            }
            return z * (Complex::new(R::one(), R::zero()) - u * acc);
        }
        let rmu = mu.sqrt();
        (rmu * z).atan() / rmu
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn cos_matches_piecewise_definition() {
        assert!((ck_cos(1.0, std::f64::consts::PI).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(ck_cos(0.0, 17.3).unwrap(), 1.0);
        assert!((ck_cos(-1.0, 1.0).unwrap() - 1.0_f64.cosh()).abs() < 1e-15);
        assert!((ck_cos(-1.0, 1.0).unwrap() - 1.5430806348152437_f64).abs() < 1e-12);
    }

    #[test]
    fn sin_matches_piecewise_definition() {
        assert_eq!(ck_sin(0.0, 2.5).unwrap(), 2.5);
        let q = std::f64::consts::FRAC_PI_2;
        assert!(ck_sin(4.0, q).unwrap().abs() < 1e-15);
        assert!((ck_sin(-1.0, 1.0).unwrap() - 1.1752011936438014_f64).abs() < 1e-12);
    }

    #[test]
    fn versin_small_label() {
        assert!((ck_versin(0.0, 2.0).unwrap() - 2.0_f64).abs() < 1e-15);
        assert!((ck_versin(1.0, std::f64::consts::PI).unwrap() - 2.0).abs() < 1e-14);
        // Taylor oracle x^2/2 (1 - k x^2/12 + ...) at k = 1e-8, x = 2.
        let v = ck_versin(1e-8, 2.0).unwrap();
        let oracle = 2.0 * (1.0 - 1e-8 * 4.0 / 12.0 + (1e-8 * 4.0_f64).powi(2) / 360.0);
        assert!((v - oracle).abs() < 1e-15);
    }

    #[test]
    fn tangent_poles_are_signed_infinities() {
        assert!((ck_tan(1.0, std::f64::consts::FRAC_PI_4).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(ck_tan(0.0, 3.0).unwrap(), 3.0);
        let pole = ck_tan(1.0, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(pole.is_infinite() && pole > 0.0);
        let pole = ck_tan(1.0, -std::f64::consts::FRAC_PI_2).unwrap();
        assert!(pole.is_infinite() && pole < 0.0);
    }

    #[test]
    fn atan_branches_and_domains() {
        let q = std::f64::consts::FRAC_PI_4;
        assert!((ck_atan(1.0, 1.0, 0).unwrap() - q).abs() < 1e-15);
        assert_eq!(ck_atan(0.0, -7.0, 0).unwrap(), -7.0);
        assert!((ck_atan(1.0, 1.0, 1).unwrap() - (q + std::f64::consts::PI)).abs() < 1e-15);
        assert_eq!(ck_atan(-1.0, 1.5, 0), Err(Error::AtanDomain));
        assert_eq!(ck_atan(-1.0, 0.5, 1), Err(Error::AtanBranch));
        assert_eq!(ck_atan(0.0, 0.5, -2), Err(Error::AtanBranch));
        // Quadrant from an infinite tangent.
        let v = ck_atan(1.0, f64::INFINITY, 0).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn nan_inputs_error() {
        assert!(ck_cos(f64::NAN, 1.0).is_err());
        assert!(ck_sin(1.0, f64::NAN).is_err());
        assert!(ck_versin(1.0, f64::INFINITY).is_err());
        assert!(ck_tan(f64::INFINITY, 1.0).is_err());
        assert!(ck_atan(1.0, f64::NAN, 0).is_err());
    }

    #[test]
    fn seam_consistency_around_threshold() {
        // |direct - series| < 1e-13 for |k| x^2 in [0.5, 2] x threshold.
        for &x in &[0.3_f64, 1.0, 2.0, 5.0] {
            for &f in &[0.5_f64, 0.8, 1.0, 1.3, 2.0] {
                for sign in [1.0, -1.0] {
                    let kappa = sign * f * SERIES_THRESHOLD / (x * x);
                    let z = kappa * x * x;
                    let direct = (
                        if kappa > 0.0 { (kappa.sqrt() * x).cos() } else { ((-kappa).sqrt() * x).cosh() },
                        if kappa > 0.0 {
                            (kappa.sqrt() * x).sin() / kappa.sqrt()
                        } else {
                            ((-kappa).sqrt() * x).sinh() / (-kappa).sqrt()
                        },
                        if kappa > 0.0 {
                            2.0 * (kappa.sqrt() * x / 2.0).sin().powi(2) / kappa
                        } else {
                            -2.0 * ((-kappa).sqrt() * x / 2.0).sinh().powi(2) / kappa
                        },
                    );
                    let series = (
                        1.0 - z * (0.5 - z * (1.0 / 24.0 - z * (1.0 / 720.0 - z / 40320.0))),
                        x * (1.0 - z * (1.0 / 6.0 - z * (1.0 / 120.0 - z * (1.0 / 5040.0 - z / 362880.0)))),
                        x * x * (0.5 - z * (1.0 / 24.0 - z * (1.0 / 720.0 - z * (1.0 / 40320.0 - z / 3628800.0)))),
                    );
                    assert!((direct.0 - series.0).abs() < 1e-13, "C seam at k={kappa} x={x}");
                    assert!((direct.1 - series.1).abs() < 1e-13, "S seam at k={kappa} x={x}");
                    assert!((direct.2 - series.2).abs() < 1e-13, "V seam at k={kappa} x={x}");
                }
            }
        }
    }

    #[test]
    fn complex_atan_series_matches_direct() {
        let mu = Complex::new(2.0e-4_f64, 1.0e-4);
        let z = Complex::new(0.7, -0.2);
        let series = raw::atan_complex(mu, z);
        let direct = (mu.sqrt() * z).atan() / mu.sqrt();
        assert!((series - direct).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn basic_identity(kappa in -10.0..10.0f64, x in -5.0..5.0f64) {
            let c = ck_cos(kappa, x).unwrap();
            let s = ck_sin(kappa, x).unwrap();
            let v = ck_versin(kappa, x).unwrap();
            let lhs = c * c + kappa * s * s;
            let scale = (c * c).abs().max((kappa * s * s).abs()).max(1.0);
            prop_assert!((lhs - 1.0).abs() <= 1e-12 * scale);
            let scale_v = c.abs().max((kappa * v).abs()).max(1.0);
            prop_assert!((c - (1.0 - kappa * v)).abs() <= 1e-12 * scale_v);
        }

        #[test]
        fn derivative_relations(kappa in -4.0..4.0f64, x in -3.0..3.0f64) {
            let h = 1e-5;
            let ds = (ck_sin(kappa, x + h).unwrap() - ck_sin(kappa, x - h).unwrap()) / (2.0 * h);
            let dc = (ck_cos(kappa, x + h).unwrap() - ck_cos(kappa, x - h).unwrap()) / (2.0 * h);
            let c = ck_cos(kappa, x).unwrap();
            let s = ck_sin(kappa, x).unwrap();
            prop_assert!(close(ds, c, 1e-6));
            prop_assert!(close(dc, -kappa * s, 1e-6));
        }

        #[test]
        fn tangent_addition(kappa in -3.0..3.0f64, a in -1.0..1.0f64, b in -1.0..1.0f64) {
            let ta = ck_tan(kappa, a).unwrap();
            let tb = ck_tan(kappa, b).unwrap();
            let denom = 1.0 - kappa * ta * tb;
            prop_assume!(ta.is_finite() && tb.is_finite());
            prop_assume!(denom.abs() > 0.05 && ta.abs() < 20.0 && tb.abs() < 20.0);
            let lhs = ck_tan(kappa, a + b).unwrap();
            prop_assume!(lhs.is_finite() && lhs.abs() < 100.0);
            let rhs = (ta + tb) / denom;
            prop_assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1.0));
        }

        #[test]
        fn atan_inverts_tan(kappa in -3.0..3.0f64, x in -1.2..1.2f64) {
            // Stay inside the principal range for positive labels.
            prop_assume!(kappa <= 0.0 || x.abs() < 0.95 * std::f64::consts::FRAC_PI_2 / kappa.sqrt());
            let t = ck_tan(kappa, x).unwrap();
            prop_assume!(t.is_finite());
            let back = ck_atan(kappa, t, 0).unwrap();
            prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }
}
