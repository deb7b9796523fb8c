//! Geometry of the configuration space `S2_{k1[k2]}`.
//!
//! The metric in the three intrinsic chart families is
//!
//! ```text
//! dl^2 = dr^2 + k2 S_{k1}^2(r) dphi^2
//!      = dx^2 + k2 C_{k1}^2(x) dv^2
//!      = C_{k1 k2}^2(y) du^2 + k2 dy^2
//! ```
//!
//! and the chart relations are the orthogonal-triangle formulas
//!
//! ```text
//! T_{k1}(u) = T_{k1}(r) C_{k2}(phi)      T_{k1 k2}(v) = T_{k1}(r) S_{k2}(phi)
//! S_{k1}(x) = S_{k1}(r) C_{k2}(phi)      S_{k1 k2}(y) = S_{k1}(r) S_{k2}(phi)
//! ```
//!
//! For `k1 = 0` both parallel systems collapse to Cartesian coordinates and
//! `u = x`, `v = y`. Chart validity is enforced, not wrapped: for `k1 > 0`
//! the radius must stay below the antipode, while the angle of a `k2 > 0`
//! space is reduced to the canonical representative in
//! `(-pi/sqrt(k2), pi/sqrt(k2)]`. For `k2 = 0` the angle is an unbounded
//! parabolic rotation, and for `k2 < 0` the orientation convention is that
//! positive angular momentum drives `phi` upward; the tests pin it.

use crate::cktrig::raw;
use crate::{Error, Real, Result};

/// A Cayley-Klein space: curvature label `kappa1`, signature label `kappa2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CKSpace<R> {
    pub kappa1: R,
    pub kappa2: R,
}

impl<R: Real> CKSpace<R> {
    pub fn new(kappa1: R, kappa2: R) -> Result<Self> {
        if !kappa1.is_finite() {
            return Err(Error::NonFinite("CKSpace kappa1"));
        }
        if !kappa2.is_finite() {
            return Err(Error::NonFinite("CKSpace kappa2"));
        }
        Ok(Self { kappa1, kappa2 })
    }

    /// One of the nine standard spaces by its conventional name.
    ///
    /// `S2`, `E2`, `H2` (Riemannian row), `ANH11`, `G11`, `NH11`
    /// (degenerate row), `AdS11`, `M11`, `dS11` (Lorentzian row).
    pub fn from_name(name: &str) -> Option<Self> {
        let (k1, k2) = match name {
            "S2" => (1.0, 1.0),
            "E2" => (0.0, 1.0),
            "H2" => (-1.0, 1.0),
            "ANH11" => (1.0, 0.0),
            "G11" => (0.0, 0.0),
            "NH11" => (-1.0, 0.0),
            "AdS11" | "ADS11" => (1.0, -1.0),
            "M11" => (0.0, -1.0),
            "dS11" | "DS11" => (-1.0, -1.0),
            _ => return None,
        };
        Some(Self {
            kappa1: R::of(k1),
            kappa2: R::of(k2),
        })
    }

    /// Label of the `v`/`y` coordinates and of the impact parameter family.
    #[inline]
    pub fn kappa12(&self) -> R {
        self.kappa1 * self.kappa2
    }

    /// Canonical angle representative: reduced mod `2 pi / sqrt(k2)` into
    /// `(-pi/sqrt(k2), pi/sqrt(k2)]` when `k2 > 0`, untouched otherwise.
    pub fn canonical_phi(&self, phi: R) -> R {
        if self.kappa2 <= R::zero() {
            return phi;
        }
        let period = R::of(2.0) * R::PI() / self.kappa2.sqrt();
        let mut p = phi - (phi / period).round() * period;
        if p <= -period / R::of(2.0) {
            p = p + period;
        }
        p
    }

    /// Radial chart check: `r >= 0`, and `r < pi/sqrt(k1)` for `k1 > 0`.
    pub fn validate_polar(&self, p: &PolarPoint<R>) -> Result<()> {
        if !p.r.is_finite() || !p.phi.is_finite() {
            return Err(Error::NonFinite("polar point"));
        }
        if p.r < R::zero() {
            return Err(Error::ChartOverflow);
        }
        if self.kappa1 > R::zero() && p.r >= R::PI() / self.kappa1.sqrt() {
            return Err(Error::ChartOverflow);
        }
        Ok(())
    }
}

/// Geodesic polar coordinates `(r, phi)` around the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint<R> {
    pub r: R,
    pub phi: R,
}

impl<R> PolarPoint<R> {
    pub fn new(r: R, phi: R) -> Self {
        Self { r, phi }
    }
}

/// Parallel-1 (sine-chart) pair: `S_{k1}(x) = S_{k1}(r) C_{k2}(phi)`,
/// `S_{k1 k2}(y) = S_{k1}(r) S_{k2}(phi)`. `(x, v)` is an orthogonal system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelPoint1<R> {
    pub x: R,
    pub y: R,
}

/// Parallel-2 (tangent-chart) pair: `T_{k1}(u) = T_{k1}(r) C_{k2}(phi)`,
/// `T_{k1 k2}(v) = T_{k1}(r) S_{k2}(phi)`. `(u, y)` is an orthogonal system.
/// This is the pair whose evolution the regularized Kepler flow linearizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelPoint2<R> {
    pub u: R,
    pub v: R,
}

/// Point of the ambient quadric `(s0)^2 + k1 (s1)^2 + k1 k2 (s2)^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientPoint<R> {
    pub s0: R,
    pub s1: R,
    pub s2: R,
}

/// Image of the general stereographic projection; the south pole maps to the
/// single added point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StereoPoint<R> {
    Finite(R, R),
    Infinity,
}

/// Tangent-chart coordinates of a polar point. The tangent chart covers the
/// open hemisphere `r < pi/(2 sqrt(k1))` when `k1 > 0`.
pub fn polar_to_parallel2<R: Real>(space: &CKSpace<R>, p: &PolarPoint<R>) -> Result<ParallelPoint2<R>> {
    space.validate_polar(p)?;
    if space.kappa1 > R::zero() && p.r >= R::PI() / (R::of(2.0) * space.kappa1.sqrt()) {
        return Err(Error::ChartPole);
    }
    let tr = raw::tan(space.kappa1, p.r);
    if tr.is_infinite() {
        return Err(Error::ChartPole);
    }
    let tu = tr * raw::cos(space.kappa2, p.phi);
    let tv = tr * raw::sin(space.kappa2, p.phi);
    let u = raw::atan(space.kappa1, tu).map_err(|_| Error::ChartOverflow)?;
    let v = raw::atan(space.kappa12(), tv).map_err(|_| Error::ChartOverflow)?;
    Ok(ParallelPoint2 { u, v })
}

/// Sine-chart coordinates of a polar point. For `k1 > 0` the chart closes at
/// the equator `r = pi/(2 sqrt(k1))` (inclusive).
pub fn polar_to_parallel1<R: Real>(space: &CKSpace<R>, p: &PolarPoint<R>) -> Result<ParallelPoint1<R>> {
    space.validate_polar(p)?;
    if space.kappa1 > R::zero() {
        let q = R::PI() / (R::of(2.0) * space.kappa1.sqrt());
        if p.r > q * (R::one() + R::of(1e-12)) {
            return Err(Error::ChartOverflow);
        }
    }
    let sr = raw::sin(space.kappa1, p.r);
    let sx = sr * raw::cos(space.kappa2, p.phi);
    let sy = sr * raw::sin(space.kappa2, p.phi);
    let x = raw::asin(space.kappa1, sx)?;
    let y = raw::asin(space.kappa12(), sy)?;
    Ok(ParallelPoint1 { x, y })
}

/// Inverse of [`polar_to_parallel2`] on the principal chart.
pub fn parallel2_to_polar<R: Real>(space: &CKSpace<R>, p: &ParallelPoint2<R>) -> Result<PolarPoint<R>> {
    let tu = raw::tan(space.kappa1, p.u);
    let tv = raw::tan(space.kappa12(), p.v);
    if tu.is_infinite() || tv.is_infinite() {
        return Err(Error::ChartPole);
    }
    let tr2 = tu * tu + space.kappa2 * tv * tv;
    if tr2 < R::zero() {
        return Err(Error::ChartOverflow);
    }
    let tr = tr2.sqrt();
    let phi = angle_from_pair(space.kappa2, tu, tv, tr)?;
    let r = raw::atan(space.kappa1, tr).map_err(|_| Error::ChartOverflow)?;
    Ok(PolarPoint { r, phi })
}

/// Inverse of [`polar_to_parallel1`] on the principal chart.
pub fn parallel1_to_polar<R: Real>(space: &CKSpace<R>, p: &ParallelPoint1<R>) -> Result<PolarPoint<R>> {
    let sx = raw::sin(space.kappa1, p.x);
    let sy = raw::sin(space.kappa12(), p.y);
    let sr2 = sx * sx + space.kappa2 * sy * sy;
    if sr2 < R::zero() {
        return Err(Error::ChartOverflow);
    }
    let sr = sr2.sqrt();
    let phi = angle_from_pair(space.kappa2, sx, sy, sr)?;
    let r = raw::asin(space.kappa1, sr)?;
    Ok(PolarPoint { r, phi })
}

/// Recover `phi` from `(F C_{k2}(phi), F S_{k2}(phi))` with `F >= 0`.
fn angle_from_pair<R: Real>(kappa2: R, fc: R, fs: R, f: R) -> Result<R> {
    if f == R::zero() {
        return Ok(R::zero());
    }
    if kappa2 > R::zero() {
        let rk = kappa2.sqrt();
        Ok((rk * fs).atan2(fc) / rk)
    } else if kappa2 == R::zero() {
        // C = 1, so F = fc and the angle is the bare sine component.
        Ok(fs / f)
    } else {
        let rk = (-kappa2).sqrt();
        Ok((rk * fs / f).asinh() / rk)
    }
}

/// Squared speed of the metric in polar coordinates:
/// `rdot^2 + k2 S_{k1}^2(r) phidot^2`. Negative values are meaningful for
/// Lorentzian signature.
pub fn metric_speed2<R: Real>(space: &CKSpace<R>, p: &PolarPoint<R>, rdot: R, phidot: R) -> R {
    let sr = raw::sin(space.kappa1, p.r);
    rdot * rdot + space.kappa2 * sr * sr * phidot * phidot
}

/// The three Noether momenta `(P1, P2, J)` of a kinematic state.
///
/// ```text
/// P1 = C_{k2}(phi) rdot - k2 C_{k1}(r) S_{k1}(r) S_{k2}(phi) phidot
/// P2 = S_{k2}(phi) rdot +    C_{k1}(r) S_{k1}(r) C_{k2}(phi) phidot
/// J  = S_{k1}^2(r) phidot
/// ```
pub fn noether_momenta<R: Real>(space: &CKSpace<R>, p: &PolarPoint<R>, rdot: R, phidot: R) -> (R, R, R) {
    let cr = raw::cos(space.kappa1, p.r);
    let sr = raw::sin(space.kappa1, p.r);
    let cphi = raw::cos(space.kappa2, p.phi);
    let sphi = raw::sin(space.kappa2, p.phi);
    let p1 = cphi * rdot - space.kappa2 * cr * sr * sphi * phidot;
    let p2 = sphi * rdot + cr * sr * cphi * phidot;
    let j = sr * sr * phidot;
    (p1, p2, j)
}

/// Ambient realization `(C_{k1}(r), S_{k1}(r) C_{k2}(phi), S_{k1}(r) S_{k2}(phi))`.
pub fn embed_ambient<R: Real>(space: &CKSpace<R>, p: &PolarPoint<R>) -> AmbientPoint<R> {
    let cr = raw::cos(space.kappa1, p.r);
    let sr = raw::sin(space.kappa1, p.r);
    AmbientPoint {
        s0: cr,
        s1: sr * raw::cos(space.kappa2, p.phi),
        s2: sr * raw::sin(space.kappa2, p.phi),
    }
}

/// Stereographic projection from the south pole `(-1, 0, 0)` onto the plane
/// `s0 = 1`: `w_i = s_i / (1 + s0)`.
pub fn stereographic_project<R: Real>(p: &AmbientPoint<R>) -> StereoPoint<R> {
    let denom = R::one() + p.s0;
    if denom == R::zero() {
        return StereoPoint::Infinity;
    }
    StereoPoint::Finite(p.s1 / denom, p.s2 / denom)
}
