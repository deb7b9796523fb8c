//! Kepler motion on two-dimensional constant-curvature spaces of any metric
//! signature, solved in closed form through the curved Levi-Civita parameter.
//!
//! The configuration space is the Cayley-Klein family `S2_{k1[k2]}`: constant
//! curvature `kappa1`, metric signature type `kappa2`. The nine sign
//! combinations give the nine standard CK spaces (sphere, Euclidean plane,
//! hyperbolic plane, the three non-relativistic and the three relativistic
//! space-times). All formulas are written once, for generic labels, through
//! the label-parametrized trigonometric kernel in [`cktrig`].
//!
//! Module map:
//! - [`cktrig`] — labeled Cosine/Sine/Versine/Tangent kernel, smooth in the label.
//! - [`ckspace`] — charts, metric, ambient embedding, stereographic projection,
//!   Noether momenta.
//! - [`kepler`] — orbit constants from `(E, J)`, conic orbit equation, full
//!   `s`-evolution `(u, v, r, phi, t)`, time inversion, periods and the three
//!   Kepler laws, Euclidean eccentric-anomaly bridge.
//! - [`geoflow`] — momentum hodographs, eccentricity vector, slowmentum,
//!   Levi-Civita metric and its curvature, geodesic identification.
//! - [`oracle`] — independent adaptive Runge-Kutta integration of the
//!   equations of motion and adaptive quadrature of the time integral, used to
//!   cross-check every closed form.
//!
//! Everything is generic over the scalar type via [`Real`]; `f64` aliases for
//! the main types live at the crate root.

// Negated float comparisons below are NaN-rejecting guards, not style slips.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive};

pub mod cktrig;
pub mod ckspace;
pub mod geoflow;
pub mod kepler;
pub mod oracle;

/// Scalar type the whole crate is generic over: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` literal; panics only for values no float can hold.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal conversion")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("non-finite input to {0}")]
    NonFinite(&'static str),
    #[error("argument outside the inverse-tangent domain for a negative label")]
    AtanDomain,
    #[error("nonzero branch requires a positive label")]
    AtanBranch,
    #[error("radial coordinate sits at a tangent pole of the chart")]
    ChartPole,
    #[error("point leaves the parallel chart of the space")]
    ChartOverflow,
    #[error("no orbit exists for these constants")]
    InfeasibleOrbit,
    #[error("angle beyond the open-orbit asymptote")]
    BeyondAsymptote,
    #[error("angular sector degenerates for this signature")]
    DegenerateAngle,
    #[error("time law diverges inside the requested span")]
    TimeDiverges,
    #[error("target value unreachable for this orbit")]
    OutOfRange,
    #[error("operation defined only on the Euclidean plane")]
    UnsupportedSpace,
    #[error("null momentum cannot be inverted")]
    NullInversion,
    #[error("conformal factor is singular at this point")]
    SingularFactor,
    #[error("finite-difference stencil crosses the singular set")]
    SingularStencil,
    #[error("projection pole: the image is the point at infinity")]
    PointAtInfinity,
    #[error("step size underflow away from a collision")]
    Stiffness,
    #[error("iteration failed to converge")]
    NoConvergence,
    #[error("integrand has a pole inside the integration range")]
    QuadraturePole,
    #[error("orbit constants are mutually inconsistent")]
    Inconsistent,
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub use ckspace::{
    AmbientPoint, CKSpace, ParallelPoint1, ParallelPoint2, PolarPoint, StereoPoint,
};
pub use geoflow::{MomentumPoint, SlowmentumPoint};
pub use kepler::{OrbitParams, RegularizedState};
pub use oracle::{PhaseState, Trajectory};

/// `f64` concrete aliases for the main domain types; the documented
/// tolerances are calibrated for these.
pub type CKSpace64 = CKSpace<f64>;
pub type PolarPoint64 = PolarPoint<f64>;
pub type OrbitParams64 = OrbitParams<f64>;
pub type RegularizedState64 = RegularizedState<f64>;
pub type PhaseState64 = PhaseState<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type MomentumPoint64 = MomentumPoint<f64>;
pub type SlowmentumPoint64 = SlowmentumPoint<f64>;

/// Single-precision aliases; everything compiles for `f32`, but expect only
/// about six significant digits from the closed forms.
pub type CKSpace32 = CKSpace<f32>;
pub type PolarPoint32 = PolarPoint<f32>;
pub type OrbitParams32 = OrbitParams<f32>;
pub type RegularizedState32 = RegularizedState<f32>;
pub type PhaseState32 = PhaseState<f32>;
pub type Trajectory32 = Trajectory<f32>;
pub type MomentumPoint32 = MomentumPoint<f32>;
pub type SlowmentumPoint32 = SlowmentumPoint<f32>;
