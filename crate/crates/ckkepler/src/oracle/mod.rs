//! Independent verification engine.
//!
//! Direct numerical integration of the curved Kepler equations of motion
//!
//! ```text
//! rddot   = k2 S_{k1}(r) C_{k1}(r) phidot^2 - k / S_{k1}^2(r)
//! (S_{k1}^2(r) phidot)'  = 0
//! ```
//!
//! plus adaptive quadrature of the time integral, with no shared code on the
//! closed-form evaluation path. Radial (`J = 0`) motion is integrated in the
//! regularization parameter with the square-root substitution
//! `T_{k1}(r) = xi^2`, which turns the collision into a regular point:
//!
//! ```text
//! xi'' = (E/2) xi         t' = xi^2 / (1 + k1 xi^4)
//! ```
//!
//! (energy enters as a coefficient, the classical Levi-Civita reduction; the
//! curvature survives only in the time equation). `J = 0` drops pass smoothly
//! through `r = 0` and re-emerge on the same ray, the regularized reflection.

mod rk;
pub(crate) mod quad;


use crate::ckspace::{metric_speed2, CKSpace, PolarPoint};
use crate::cktrig::raw;
use crate::kepler::OrbitParams;
use crate::{Error, Real, Result};

/// Polar phase point with its physical time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState<R> {
    pub r: R,
    pub phi: R,
    pub rdot: R,
    pub phidot: R,
    pub t: R,
}

/// Output of one oracle integration: time-ordered samples plus the context
/// needed to recompute conserved quantities.
#[derive(Debug, Clone)]
pub struct Trajectory<R> {
    pub samples: Vec<PhaseState<R>>,
    pub space: CKSpace<R>,
    pub k: R,
    pub tol: R,
}

/// Integrate the equations of motion from `init` to `t_end`, sampling
/// `n_samples` states uniformly in `t` (endpoints included) through the
/// integrator's dense output.
pub fn integrate<R: Real>(
    space: &CKSpace<R>,
    k: R,
    init: &PhaseState<R>,
    t_end: R,
    tol: R,
    n_samples: usize,
) -> Result<Trajectory<R>> {
    if n_samples < 2 || t_end <= R::zero() {
        return Err(Error::OutOfRange);
    }
    space.validate_polar(&PolarPoint::new(init.r, init.phi))?;
    let j = raw::sin(space.kappa1, init.r).powi(2) * init.phidot;
    if j == R::zero() && init.phidot == R::zero() {
        integrate_radial(space, k, init, t_end, tol, n_samples)
    } else {
        if init.r <= R::zero() {
            return Err(Error::ChartOverflow);
        }
        integrate_polar(space, k, init, t_end, tol, n_samples)
    }
}

fn integrate_polar<R: Real>(
    space: &CKSpace<R>,
    k: R,
    init: &PhaseState<R>,
    t_end: R,
    tol: R,
    n_samples: usize,
) -> Result<Trajectory<R>> {
    let k1 = space.kappa1;
    let k2 = space.kappa2;
    let pole = if k1 > R::zero() {
        Some(R::PI() / (R::of(2.0) * k1.sqrt()))
    } else {
        None
    };
    let f = move |_t: R, y: &[R; 4]| -> [R; 4] {
        let (r, _phi, rdot, phidot) = (y[0], y[1], y[2], y[3]);
        let s = raw::sin(k1, r);
        let c = raw::cos(k1, r);
        [
            rdot,
            phidot,
            k2 * s * c * phidot * phidot - k / (s * s),
            -R::of(2.0) * c / s * rdot * phidot,
        ]
    };
    let y0 = [init.r, init.phi, init.rdot, init.phidot];
    let mut solver = rk::Dopri5::new(&f, init.t, y0, tol, tol, t_end - init.t);
    let mut steps = Vec::new();
    while solver.t < t_end {
        let step = solver.step(t_end)?;
        let r = step.y1[0];
        if r <= R::zero() {
            return Err(Error::ChartOverflow);
        }
        if let Some(p) = pole {
            if r >= p {
                return Err(Error::ChartPole);
            }
        }
        steps.push(step);
    }

    let mut samples = Vec::with_capacity(n_samples);
    let span = t_end - init.t;
    let mut cursor = 0usize;
    for i in 0..n_samples {
        let t = init.t + span * R::of(i as f64) / R::of((n_samples - 1) as f64);
        while cursor + 1 < steps.len() && steps[cursor].t1() < t {
            cursor += 1;
        }
        let st = &steps[cursor];
        let theta = ((t - st.t0) / st.h).max(R::zero()).min(R::one());
        let y = st.eval(theta);
        samples.push(PhaseState {
            r: y[0],
            phi: y[1],
            rdot: y[2],
            phidot: y[3],
            t,
        });
    }
    Ok(Trajectory {
        samples,
        space: *space,
        k,
        tol,
    })
}

fn integrate_radial<R: Real>(
    space: &CKSpace<R>,
    k: R,
    init: &PhaseState<R>,
    t_end: R,
    tol: R,
    n_samples: usize,
) -> Result<Trajectory<R>> {
    let k1 = space.kappa1;
    let tr0 = raw::tan(k1, init.r);
    if !tr0.is_finite() || tr0 < R::zero() {
        return Err(Error::ChartPole);
    }
    let energy = init.rdot * init.rdot / R::of(2.0)
        - if init.r > R::zero() {
            k / tr0
        } else {
            R::infinity()
        };
    if !energy.is_finite() {
        return Err(Error::ChartOverflow);
    }
    let xi0 = tr0.sqrt();
    let eta0 = xi0 * init.rdot / R::of(2.0);

    let f = move |_s: R, y: &[R; 3]| -> [R; 3] {
        let xi = y[0];
        let xi2 = xi * xi;
        [
            y[1],
            energy * xi / R::of(2.0),
            xi2 / (R::one() + k1 * xi2 * xi2),
        ]
    };

    // The s-span is unknown a priori; march until the time component covers
    // t_end, guarding the hyperbolic chart.
    let y0 = [xi0, eta0, init.t];
    let s_scale = if energy < R::zero() {
        R::PI() / (-R::of(2.0) * energy).sqrt()
    } else {
        R::one()
    };
    let mut solver = rk::Dopri5::new(&f, R::zero(), y0, tol, tol, s_scale);
    let mut steps = Vec::new();
    let chart = if k1 < R::zero() {
        Some((R::one() / (-k1).sqrt()).sqrt())
    } else {
        None
    };
    let mut guard = 0usize;
    while solver.y[2] < t_end {
        let limit = solver.t + s_scale;
        let step = solver.step(limit)?;
        if let Some(lim) = chart {
            if step.y1[0].abs() >= lim {
                return Err(Error::ChartOverflow);
            }
        }
        steps.push(step);
        guard += 1;
        if guard > 2_000_000 {
            return Err(Error::Stiffness);
        }
    }

    // Sample uniformly in t; within each step t(theta) is monotone. The
    // square-root variable crossing zero is the regularized reflection at the
    // center: the motion re-emerges on the same ray.
    let mut samples = Vec::with_capacity(n_samples);
    let span = t_end - init.t;
    let mut cursor = 0usize;
    for i in 0..n_samples {
        let t = init.t + span * R::of(i as f64) / R::of((n_samples - 1) as f64);
        while cursor + 1 < steps.len() && steps[cursor].y1[2] < t {
            cursor += 1;
        }
        let st = &steps[cursor];
        let mut lo = R::zero();
        let mut hi = R::one();
        for _ in 0..70 {
            let mid = (lo + hi) / R::of(2.0);
            if st.eval(mid)[2] < t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let y = st.eval((lo + hi) / R::of(2.0));
        let xi = y[0];
        let r = raw::atan(k1, xi * xi).map_err(|_| Error::ChartOverflow)?;
        // rdot = 2 eta/xi; the signed xi flips it correctly at the reflection.
        let rdot = radial_speed(xi, y[1]);
        samples.push(PhaseState {
            r,
            phi: init.phi,
            rdot,
            phidot: R::zero(),
            t,
        });
    }
    Ok(Trajectory {
        samples,
        space: *space,
        k,
        tol,
    })
}

/// `rdot = 2 eta / xi`; infinite at the collision itself.
fn radial_speed<R: Real>(xi: R, eta: R) -> R {
    if xi == R::zero() {
        if eta >= R::zero() {
            R::infinity()
        } else {
            R::neg_infinity()
        }
    } else {
        R::of(2.0) * eta / xi
    }
}

/// Adaptive quadrature of the time integrand
/// `dt/ds = k g/(1 + k1 k^2 g^2)`, `k g = T_{k1}(r(s))`, from 0 to `s`.
///
/// This is the pre-decomposition integral, evaluated with no reference to
/// the closed-form antiderivatives it validates.
pub fn quadrature_t_of_s<R: Real>(orbit: &OrbitParams<R>, s: R, tol: R) -> Result<R> {
    if !s.is_finite() {
        return Err(Error::NonFinite("quadrature span"));
    }
    if let Some(pole) = orbit.escape_parameter() {
        if s.abs() >= pole {
            return Err(Error::QuadraturePole);
        }
    }
    let rel = tol.max(R::of(1e-13));
    quad::adaptive_simpson(|x| orbit.dt_ds(x), R::zero(), s, rel, R::of(1e-15))
}

/// Quadrature check of the labeled primitive integrand
/// `1/(1 - e C_sigma(s))`, used against the closed antiderivative.
pub fn quad_check_primitive<R: Real>(sigma: R, e: R, s: R) -> Result<R> {
    quad::adaptive_simpson(
        |x| R::one() / (R::one() - e * raw::cos(sigma, x)),
        R::zero(),
        s,
        R::of(1e-11),
        R::of(1e-14),
    )
}

/// Maximum drift of `(E, J, E01, E02)` over the trajectory samples.
pub fn conserved_drift<R: Real>(traj: &Trajectory<R>) -> (R, R, R, R) {
    let mut first = None;
    let mut drift = (R::zero(), R::zero(), R::zero(), R::zero());
    for st in &traj.samples {
        if !st.rdot.is_finite() {
            continue;
        }
        let vals = conserved_at(traj, st);
        match first {
            None => first = Some(vals),
            Some(f0) => {
                drift.0 = drift.0.max((vals.0 - f0.0).abs());
                drift.1 = drift.1.max((vals.1 - f0.1).abs());
                drift.2 = drift.2.max((vals.2 - f0.2).abs());
                drift.3 = drift.3.max((vals.3 - f0.3).abs());
            }
        }
    }
    drift
}

fn conserved_at<R: Real>(traj: &Trajectory<R>, st: &PhaseState<R>) -> (R, R, R, R) {
    let p = PolarPoint::new(st.r, st.phi);
    let kinetic = metric_speed2(&traj.space, &p, st.rdot, st.phidot) / R::of(2.0);
    let tr = raw::tan(traj.space.kappa1, st.r);
    let energy = kinetic - traj.k / tr;
    let j = raw::sin(traj.space.kappa1, st.r).powi(2) * st.phidot;
    let (e01, e02) = crate::geoflow::eccentricity_vector(&traj.space, traj.k, st);
    (energy, j, e01, e02)
}
