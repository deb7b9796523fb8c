//! Closed-form Kepler solver on any CK space.
//!
//! The potential is `V = -k/T_{k1}(r)`; energy and angular momentum
//!
//! ```text
//! E = (P1^2 + k2 P2^2 + k1 k2 J^2)/2 - k/T_{k1}(r)      J = S_{k1}^2(r) phidot
//! ```
//!
//! determine a conic orbit `T_{k1}(r) = sqrt(k2) T_{k1 k2}(p) / (1 + e C_{k2}(phi))`
//! with
//!
//! ```text
//! sqrt(k2) T_{k1 k2}(p) = k2 J^2 / k        e^2 = 1 - sigma k2 J^2 / k^2
//! sigma = -(2E - k1 k2 J^2)
//! ```
//!
//! The fictitious time `s` with `ds/dt = 1/(S_{k1}(r) C_{k1}(r))` linearizes
//! the evolution of the tangent-chart pair, and every coordinate becomes an
//! elementary function of `s`. The single code path used here is the
//! versed-sine form, finite for every `sigma` and every signature:
//!
//! ```text
//! T_{k1}(u) = k (k2 V_{sk2}(eps) - V_s(s))        T_{k1 k2}(v) = k S_{sk2}(eps) S_s(s)
//! T_{k1}(r) = k (k2 V_{sk2}(eps) + C_{sk2}(eps) V_s(s))
//! ```
//!
//! where the impact parameter `eps` of the associated geodesic satisfies
//! `C_{sk2}(eps) = e`, `S_{sk2}(eps) = J/k`. The `sigma != 0` cosine forms
//! serve as test oracles only.
//!
//! Key robust combinations stored on [`OrbitParams`] (both exact rational
//! expressions in the inputs, no `sigma` division):
//!
//! ```text
//! vq    = (1 - e)/sigma = k2 J^2 / (k^2 (1 + e))      (T_{k1}(r_per) = k vq)
//! q_tan = k2 J^2 / k    = sqrt(k2) T_{k1 k2}(p)
//! ```
//!
//! Spaces with degenerate metric (`k2 = 0`) keep every orbit at `e = 1` for
//! finite `J`; the alternative constructor takes the finite combination
//! `k2 J^2` instead of `J`, in which case only the `u`, `r`, `t` evolution is
//! exposed (`v` and `phi` genuinely diverge in that scaling).

mod timelaw;

pub use timelaw::{closed_primitive, s_of_t, t_of_s, t_of_s_with_path, TimePath};

use crate::ckspace::{CKSpace, ParallelPoint2};
use crate::cktrig::raw;
use crate::{Error, Real, Result};

/// Coupling plus the full constant set of one Kepler motion.
///
/// Built by [`OrbitParams::from_dynamical`] (from `E`, `J`) or
/// [`OrbitParams::from_geometric`] (from `e`, `p`); immutable afterwards.
/// Negative `J` selects retrograde motion (the `B = -J` sign choice).
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitParams<R> {
    space: CKSpace<R>,
    k: R,
    energy: R,
    /// Angular momentum; `None` in the degenerate-combination input mode.
    j: Option<R>,
    /// The finite combination `k2 J^2`.
    k2j2: R,
    sigma: R,
    ecc: R,
    /// Semilatus rectum, when it exists as a real length of the space.
    semilatus: Option<R>,
    phi0: R,
    /// Impact parameter of the associated geodesic (signed like `J`).
    epsilon: Option<R>,
    /// `(1 - e)/sigma`, evaluated without cancellation.
    vq: R,
    /// `k2 J^2 / k`.
    q_tan: R,
}

impl<R: Real> OrbitParams<R> {
    /// Orbit constants from coupling, energy and angular momentum.
    pub fn from_dynamical(space: CKSpace<R>, k: R, energy: R, j: R) -> Result<Self> {
        for (v, what) in [(k, "coupling"), (energy, "energy"), (j, "angular momentum")] {
            if !v.is_finite() {
                return Err(Error::NonFinite(what));
            }
        }
        if k <= R::zero() {
            return Err(Error::InfeasibleOrbit);
        }
        let k2j2 = space.kappa2 * j * j;
        let orbit = Self::assemble(space, k, energy, Some(j), k2j2)?;
        Ok(orbit)
    }

    /// Degenerate-signature input mode: `k2 = 0` spaces with the finite
    /// combination `k2 J^2` supplied in place of `J`.
    pub fn from_dynamical_degenerate(space: CKSpace<R>, k: R, energy: R, k2j2: R) -> Result<Self> {
        if space.kappa2 != R::zero() {
            return Err(Error::UnsupportedSpace);
        }
        if !k2j2.is_finite() {
            return Err(Error::NonFinite("k2 J^2 combination"));
        }
        if k <= R::zero() || !k.is_finite() || !energy.is_finite() {
            return Err(Error::InfeasibleOrbit);
        }
        Self::assemble(space, k, energy, None, k2j2)
    }

    /// Orbit constants from the conic shape `(e, p)`; Riemannian signature
    /// only, `p > 0`.
    pub fn from_geometric(space: CKSpace<R>, k: R, ecc: R, p: R) -> Result<Self> {
        if space.kappa2 <= R::zero() {
            return Err(Error::UnsupportedSpace);
        }
        if !(ecc >= R::zero()) || !p.is_finite() || p <= R::zero() {
            return Err(Error::InfeasibleOrbit);
        }
        let q_tan = space.kappa2.sqrt() * raw::tan(space.kappa12(), p);
        if !q_tan.is_finite() || q_tan <= R::zero() {
            return Err(Error::ChartPole);
        }
        // k2 J^2 = k q_tan, sigma = k (1 - e^2)/q_tan, E from the sigma definition.
        let j = (k * q_tan / space.kappa2).sqrt();
        let sigma = k * (R::one() - ecc * ecc) / q_tan;
        let energy = (space.kappa1 * k * q_tan - sigma) / R::of(2.0);
        Self::from_dynamical(space, k, energy, j)
    }

    fn assemble(space: CKSpace<R>, k: R, energy: R, j: Option<R>, k2j2: R) -> Result<Self> {
        let sigma = -(R::of(2.0) * energy - space.kappa1 * k2j2);
        let e2 = R::one() - sigma * k2j2 / (k * k);
        if e2 < -R::of(1e-12) {
            return Err(Error::InfeasibleOrbit);
        }
        let ecc = e2.max(R::zero()).sqrt();
        let vq = k2j2 / (k * k * (R::one() + ecc));
        let q_tan = k2j2 / k;

        // Periastron must live inside the tangent chart.
        if space.kappa2 > R::zero() && space.kappa1 < R::zero() {
            let limit = R::one() / (-space.kappa1).sqrt();
            if k * vq >= limit {
                return Err(Error::InfeasibleOrbit);
            }
        }

        let epsilon = j.map(|j| impact_parameter(sigma * space.kappa2, ecc, j / k));

        let semilatus = if space.kappa2 > R::zero() {
            raw::atan(space.kappa12(), q_tan / space.kappa2.sqrt()).ok()
        } else {
            None
        };

        Ok(Self {
            space,
            k,
            energy,
            j,
            k2j2,
            sigma,
            ecc,
            semilatus,
            phi0: R::zero(),
            epsilon,
            vq,
            q_tan,
        })
    }

    /// Same orbit rotated so the periastron sits at angle `phi0`.
    pub fn with_phi0(mut self, phi0: R) -> Self {
        self.phi0 = phi0;
        self
    }

    pub fn space(&self) -> &CKSpace<R> {
        &self.space
    }
    pub fn coupling(&self) -> R {
        self.k
    }
    pub fn energy(&self) -> R {
        self.energy
    }
    /// Angular momentum; `None` for the degenerate input mode.
    pub fn angular_momentum(&self) -> Option<R> {
        self.j
    }
    /// The finite combination `k2 J^2`.
    pub fn kappa2_j_squared(&self) -> R {
        self.k2j2
    }
    pub fn sigma(&self) -> R {
        self.sigma
    }
    pub fn eccentricity(&self) -> R {
        self.ecc
    }
    pub fn semilatus(&self) -> Option<R> {
        self.semilatus
    }
    pub fn phi0(&self) -> R {
        self.phi0
    }
    /// Impact parameter of the associated geodesic on `S2_{sigma[k2]}`.
    pub fn epsilon(&self) -> Option<R> {
        self.epsilon
    }
    /// `(1 - e)/sigma` in its cancellation-free form.
    pub fn vq(&self) -> R {
        self.vq
    }
    /// `k2 J^2/k = sqrt(k2) T_{k1 k2}(p)`.
    pub fn q_tan(&self) -> R {
        self.q_tan
    }

    /// `s`-period `2 pi / sqrt(sigma)` of the regularized evolution, when the
    /// evolution is oscillatory.
    pub fn s_period(&self) -> Option<R> {
        if self.sigma > R::zero() {
            Some(R::of(2.0) * R::PI() / self.sigma.sqrt())
        } else {
            None
        }
    }

    /// `T_{k1}(r(s))/k = vq + e V_sigma(s)`; every radial formula reduces to this.
    pub(crate) fn radial_g(&self, s: R) -> R {
        self.vq + self.ecc * raw::versin(self.sigma, s)
    }

    /// `dt/ds = S_{k1}(r) C_{k1}(r) = k g / (1 + k1 k^2 g^2)`.
    pub(crate) fn dt_ds(&self, s: R) -> R {
        let g = self.radial_g(s);
        let kg = self.k * g;
        kg / (R::one() + self.space.kappa1 * kg * kg)
    }

    /// Periastron radius (signed tangent-chart value for exotic signatures).
    pub fn periastron_radius(&self) -> Result<R> {
        raw::atan(self.space.kappa1, self.k * self.vq).map_err(|_| Error::ChartOverflow)
    }

    /// `s` at which the orbit leaves the tangent chart (`k1 < 0` escape),
    /// where the time law diverges; `None` when it never does.
    pub fn escape_parameter(&self) -> Option<R> {
        timelaw::escape_s(self)
    }

    /// Full regularized state at parameter `s`. Fields that genuinely
    /// degenerate for the signature are `None`.
    pub fn state_at(&self, s: R) -> Result<RegularizedState<R>> {
        let r = r_of_s(self, s)?;
        let t = t_of_s(self, s)?;
        Ok(RegularizedState {
            s,
            t,
            r,
            phi: phi_of_s(self, s).ok(),
            uv: uv_of_s(self, s).ok(),
        })
    }
}

/// Solve `C_{lab}(eps) = e`, `S_{lab}(eps) = sj` for the principal impact
/// parameter, `lab = sigma k2`. The two conditions are consistent exactly
/// when `e^2 + lab sj^2 = 1`, which is the e-p relation in disguise.
fn impact_parameter<R: Real>(lab: R, e: R, sj: R) -> R {
    if lab > R::zero() {
        let rl = lab.sqrt();
        (rl * sj).atan2(e) / rl
    } else if lab < R::zero() {
        let rl = (-lab).sqrt();
        (rl * sj).asinh() / rl
    } else {
        sj
    }
}

/// The state of the regularized evolution at parameter `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedState<R> {
    pub s: R,
    pub t: R,
    pub r: R,
    /// Polar angle; `None` where the signature degenerates the angle.
    pub phi: Option<R>,
    /// Tangent-chart pair; `None` in the degenerate input mode.
    pub uv: Option<ParallelPoint2<R>>,
}

/// Conic orbit equation: radius at angle `phi`.
pub fn r_of_phi<R: Real>(orbit: &OrbitParams<R>, phi: R) -> Result<R> {
    let space = orbit.space;
    if space.kappa2 == R::zero() {
        return Err(Error::DegenerateAngle);
    }
    let den = R::one() + orbit.ecc * raw::cos(space.kappa2, phi - orbit.phi0);
    if den <= R::zero() {
        return Err(Error::BeyondAsymptote);
    }
    raw::atan(space.kappa1, orbit.q_tan / den).map_err(|_| Error::ChartOverflow)
}

/// Tangent-chart pair along the orbit,
/// `T_{k1}(u) = k (vq - V_sigma(s))`, `T_{k1 k2}(v) = J S_sigma(s)`.
pub fn uv_of_s<R: Real>(orbit: &OrbitParams<R>, s: R) -> Result<ParallelPoint2<R>> {
    let j = orbit.j.ok_or(Error::DegenerateAngle)?;
    let space = orbit.space;
    let tu = orbit.k * (orbit.vq - raw::versin(orbit.sigma, s));
    let tv = j * raw::sin(orbit.sigma, s);
    let u = raw::atan(space.kappa1, tu).map_err(|_| Error::ChartOverflow)?;
    let v = raw::atan(space.kappa12(), tv).map_err(|_| Error::ChartOverflow)?;
    Ok(ParallelPoint2 { u, v })
}

/// Radius along the orbit, `T_{k1}(r) = k (vq + e V_sigma(s))`.
///
/// For Lorentzian signature the standard-position formula is formal near
/// `s = 0` and the returned tangent-chart value may be negative (a signed
/// radius); the physical arc is the `r > 0` window around the apoastron.
pub fn r_of_s<R: Real>(orbit: &OrbitParams<R>, s: R) -> Result<R> {
    let tr = orbit.k * orbit.radial_g(s);
    raw::atan(orbit.space.kappa1, tr).map_err(|_| Error::ChartOverflow)
}

/// Continuous, branch-unwound polar angle along the orbit, `phi(0) = phi0`.
///
/// Built from the half-angle law `T_{k2}(phi/2) = (J/(k vq)) T_sigma(s/2)`,
/// with the winding tracked through the sign changes of `C_sigma(s/2)` so a
/// prograde orbit advances by `2 pi / sqrt(k2)` per `s`-period.
pub fn phi_of_s<R: Real>(orbit: &OrbitParams<R>, s: R) -> Result<R> {
    let space = orbit.space;
    if space.kappa2 == R::zero() {
        return Err(Error::DegenerateAngle);
    }
    let j = orbit.j.ok_or(Error::DegenerateAngle)?;
    if j == R::zero() {
        // Collision segment: the orbit is the ray opposite the periastron
        // direction, reachable as an angle only in Riemannian signature.
        if space.kappa2 > R::zero() {
            return Ok(orbit.phi0 + R::PI() / space.kappa2.sqrt());
        }
        return Err(Error::DegenerateAngle);
    }
    let m = j / (orbit.k * orbit.vq);
    let (th, winding) = if orbit.sigma > R::zero() {
        let rs = orbit.sigma.sqrt();
        let (n, tan_half) = timelaw::principal_window(rs, s);
        (tan_half / rs, n)
    } else {
        (raw::tan(orbit.sigma, s / R::of(2.0)), R::zero())
    };

    if space.kappa2 > R::zero() {
        let rk = space.kappa2.sqrt();
        let principal = R::of(2.0) * (rk * m * th).atan() / rk;
        let turn = R::of(2.0) * R::PI() / rk * m.signum();
        Ok(orbit.phi0 + principal + winding * turn)
    } else {
        // Lorentzian angle: bounded wedge, no winding to track.
        if winding != R::zero() {
            return Err(Error::BeyondAsymptote);
        }
        let rk = (-space.kappa2).sqrt();
        let a = rk * m * th;
        if !(a.abs() < R::one()) {
            return Err(Error::BeyondAsymptote);
        }
        Ok(orbit.phi0 + R::of(2.0) * a.atanh() / rk)
    }
}

/// Energy of the closed orbit with major semiaxis `a`: `E = -k/T_{k1}(2a)`.
pub fn energy_of_semimajor<R: Real>(space: &CKSpace<R>, k: R, a: R) -> Result<R> {
    validate_semimajor(space, k, a)?;
    let t2a = raw::tan(space.kappa1, R::of(2.0) * a);
    if t2a.is_infinite() {
        return Ok(R::zero());
    }
    Ok(-k / t2a)
}

/// Major semiaxis of the closed orbit with energy `E`; inverse of
/// [`energy_of_semimajor`] on the closed-orbit regime.
pub fn semimajor_of_energy<R: Real>(space: &CKSpace<R>, k: R, energy: R) -> Result<R> {
    if space.kappa2 <= R::zero() || k <= R::zero() {
        return Err(Error::OutOfRange);
    }
    if space.kappa1 > R::zero() {
        if energy == R::zero() {
            return Ok(R::PI() / (R::of(4.0) * space.kappa1.sqrt()));
        }
        let rk = space.kappa1.sqrt();
        let mut two_a = (rk * k / (-energy)).atan() / rk;
        if two_a <= R::zero() {
            two_a = two_a + R::PI() / rk;
        }
        Ok(two_a / R::of(2.0))
    } else if space.kappa1 == R::zero() {
        if energy >= R::zero() {
            return Err(Error::OutOfRange);
        }
        Ok(k / (-energy) / R::of(2.0))
    } else {
        let rk = (-space.kappa1).sqrt();
        // Bound motion needs E below the escape value -k sqrt(-k1).
        if energy >= -k * rk {
            return Err(Error::OutOfRange);
        }
        Ok((rk * k / (-energy)).atanh() / rk / R::of(2.0))
    }
}

fn validate_semimajor<R: Real>(space: &CKSpace<R>, k: R, a: R) -> Result<()> {
    if space.kappa2 <= R::zero() || k <= R::zero() || !(a > R::zero()) {
        return Err(Error::OutOfRange);
    }
    if space.kappa1 > R::zero() && R::of(2.0) * a >= R::PI() / space.kappa1.sqrt() {
        return Err(Error::OutOfRange);
    }
    Ok(())
}

/// Period of the closed orbit with major semiaxis `a`.
///
/// Evaluates `T^2 = (pi^2/k) S_{k1}(2a) V_{k1}(2a)` and cross-checks the
/// energy form `T^2 = pi^2 (sqrt(1+x)-1) / (-E (1+x) k1)`, `x = k1 k^2/E^2`,
/// to one part in `1e10`.
pub fn period_from_semimajor<R: Real>(space: &CKSpace<R>, k: R, a: R) -> Result<R> {
    validate_semimajor(space, k, a)?;
    let two_a = R::of(2.0) * a;
    let t2 = R::PI() * R::PI() / k * raw::sin(space.kappa1, two_a) * raw::versin(space.kappa1, two_a);
    if !(t2 > R::zero()) {
        return Err(Error::OutOfRange);
    }

    let energy = energy_of_semimajor(space, k, a)?;
    let t2_energy = if energy == R::zero() {
        // k1 > 0 zero-energy orbit: limit of the energy form.
        R::PI() * R::PI() / (k * space.kappa1.powf(R::of(1.5)))
    } else {
        let x = space.kappa1 * k * k / (energy * energy);
        let sq = (R::one() + x).sqrt();
        // (sqrt(1+x)-1)/k1 = (k^2/E^2) / (sqrt(1+x)+1), cancellation-free.
        R::PI() * R::PI() / (-energy * (R::one() + x)) * (k * k / (energy * energy))
            / (sq + R::one())
    };
    if (t2 - t2_energy).abs() > R::of(1e-10) * t2.abs() {
        return Err(Error::Inconsistent);
    }
    Ok(t2.sqrt())
}

/// Period of the closed orbit with energy `E`.
pub fn period_from_energy<R: Real>(space: &CKSpace<R>, k: R, energy: R) -> Result<R> {
    let a = semimajor_of_energy(space, k, energy)?;
    period_from_semimajor(space, k, a)
}

/// Residual of the curved 1-2-3 law, `k - C_{k1}(a) omega^2 S_{k1}^3(a)`.
pub fn one_two_three_residual<R: Real>(space: &CKSpace<R>, k: R, a: R, period: R) -> R {
    let omega = R::of(2.0) * R::PI() / period;
    let sa = raw::sin(space.kappa1, a);
    k - raw::cos(space.kappa1, a) * omega * omega * sa * sa * sa
}

/// Eccentric anomaly from the regularization parameter; Euclidean plane only.
///
/// `xi = sqrt(sigma) s` for `E < 0`, `sqrt(k) s` for `E = 0`,
/// `sqrt(-sigma) s` for `E > 0`.
pub fn eccentric_anomaly<R: Real>(orbit: &OrbitParams<R>, s: R) -> Result<R> {
    let space = orbit.space;
    if space.kappa1 != R::zero() || space.kappa2 != R::one() {
        return Err(Error::UnsupportedSpace);
    }
    if orbit.sigma > R::zero() {
        Ok(orbit.sigma.sqrt() * s)
    } else if orbit.sigma == R::zero() {
        Ok(orbit.k.sqrt() * s)
    } else {
        Ok((-orbit.sigma).sqrt() * s)
    }
}
