//! Embedded Dormand-Prince 5(4) pair with dense output and PI step control.
//!
//! Coefficients and the quartic interpolant follow Hairer, Norsett & Wanner,
//! Solving Ordinary Differential Equations I (DOPRI5).

#![allow(clippy::needless_range_loop)]

use crate::{Error, Real, Result};

const A21: f64 = 0.2;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const C2: f64 = 0.2;
const C3: f64 = 0.3;
const C4: f64 = 0.8;
const C5: f64 = 8.0 / 9.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step with its dense-output interpolant.
#[derive(Debug, Clone)]
pub(crate) struct Step<R, const N: usize> {
    pub t0: R,
    pub h: R,
    pub y1: [R; N],
    cont: [[R; N]; 5],
}

impl<R: Real, const N: usize> Step<R, N> {
    /// Interpolated state at `t0 + theta h`, `theta` in `[0, 1]`.
    pub fn eval(&self, theta: R) -> [R; N] {
        let th1 = R::one() - theta;
        let mut y = [R::zero(); N];
        for i in 0..N {
            y[i] = self.cont[0][i]
                + theta
                    * (self.cont[1][i]
                        + th1 * (self.cont[2][i] + theta * (self.cont[3][i] + th1 * self.cont[4][i])));
        }
        y
    }

    pub fn t1(&self) -> R {
        self.t0 + self.h
    }
}

struct Stages<R, const N: usize> {
    y1: [R; N],
    k3: [R; N],
    k4: [R; N],
    k5: [R; N],
    k6: [R; N],
    k7: [R; N],
    err: R,
}

pub(crate) struct Dopri5<'a, R, const N: usize> {
    f: &'a dyn Fn(R, &[R; N]) -> [R; N],
    rtol: R,
    atol: R,
    pub t: R,
    pub y: [R; N],
    k1: [R; N],
    h: R,
    facold: R,
}

impl<'a, R: Real, const N: usize> Dopri5<'a, R, N> {
    pub fn new(
        f: &'a dyn Fn(R, &[R; N]) -> [R; N],
        t0: R,
        y0: [R; N],
        rtol: R,
        atol: R,
        span: R,
    ) -> Self {
        let k1 = f(t0, &y0);
        // Crude but safe first step; the controller fixes it within a step or two.
        let mut d0 = R::zero();
        let mut d1 = R::zero();
        for i in 0..N {
            let sc = atol + rtol * y0[i].abs();
            d0 = d0 + (y0[i] / sc).powi(2);
            d1 = d1 + (k1[i] / sc).powi(2);
        }
        let mut h = if d1 > R::zero() {
            R::of(0.01) * (d0.max(R::of(1e-10)) / d1).sqrt()
        } else {
            R::of(1e-6) * span.abs().max(R::one())
        };
        h = h
            .min(span.abs() / R::of(10.0))
            .max(R::of(1e-10) * span.abs().max(R::one()));
        Dopri5 {
            f,
            rtol,
            atol,
            t: t0,
            y: y0,
            k1,
            h,
            facold: R::of(1e-4),
        }
    }

    /// Advance one accepted step, clamped so `t` never passes `t_limit`.
    pub fn step(&mut self, t_limit: R) -> Result<Step<R, N>> {
        let dir = (t_limit - self.t).signum();
        let hmin = R::of(1e3) * R::epsilon() * self.t.abs().max(t_limit.abs()).max(R::one());
        let mut rejected = false;
        for _ in 0..100 {
            let mut h = self.h.abs().max(hmin * R::of(2.0)) * dir;
            if (self.t + h - t_limit) * dir > R::zero() {
                h = t_limit - self.t;
            }
            let st = self.try_step(h);
            if !st.err.is_finite() {
                rejected = true;
                self.h = h.abs() / R::of(10.0);
                if self.h < hmin {
                    return Err(Error::Stiffness);
                }
                continue;
            }
            if st.err <= R::one() {
                return Ok(self.accept(h, st, rejected));
            }
            rejected = true;
            let fac11 = st.err.powf(R::of(0.17));
            let shrink = (fac11 / R::of(0.9)).min(R::of(10.0)).max(R::of(1.1));
            self.h = h.abs() / shrink;
            if self.h < hmin {
                return Err(Error::Stiffness);
            }
        }
        Err(Error::Stiffness)
    }

    fn try_step(&self, h: R) -> Stages<R, N> {
        let f = self.f;
        let t = self.t;
        let y = &self.y;
        let k1 = &self.k1;
        let lift = |c: f64| R::of(c);

        let mut ys = [R::zero(); N];
        for i in 0..N {
            ys[i] = y[i] + h * lift(A21) * k1[i];
        }
        let k2 = f(t + lift(C2) * h, &ys);
        for i in 0..N {
            ys[i] = y[i] + h * (lift(A31) * k1[i] + lift(A32) * k2[i]);
        }
        let k3 = f(t + lift(C3) * h, &ys);
        for i in 0..N {
            ys[i] = y[i] + h * (lift(A41) * k1[i] + lift(A42) * k2[i] + lift(A43) * k3[i]);
        }
        let k4 = f(t + lift(C4) * h, &ys);
        for i in 0..N {
            ys[i] = y[i]
                + h * (lift(A51) * k1[i] + lift(A52) * k2[i] + lift(A53) * k3[i] + lift(A54) * k4[i]);
        }
        let k5 = f(t + lift(C5) * h, &ys);
        for i in 0..N {
            ys[i] = y[i]
                + h * (lift(A61) * k1[i]
                    + lift(A62) * k2[i]
                    + lift(A63) * k3[i]
                    + lift(A64) * k4[i]
                    + lift(A65) * k5[i]);
        }
        let k6 = f(t + h, &ys);
        let mut y1 = [R::zero(); N];
        for i in 0..N {
            y1[i] = y[i]
                + h * (lift(A71) * k1[i]
                    + lift(A73) * k3[i]
                    + lift(A74) * k4[i]
                    + lift(A75) * k5[i]
                    + lift(A76) * k6[i]);
        }
        let k7 = f(t + h, &y1);

        let mut err = R::zero();
        for i in 0..N {
            let e = h
                * (lift(E1) * k1[i]
                    + lift(E3) * k3[i]
                    + lift(E4) * k4[i]
                    + lift(E5) * k5[i]
                    + lift(E6) * k6[i]
                    + lift(E7) * k7[i]);
            let sc = self.atol + self.rtol * y[i].abs().max(y1[i].abs());
            err = err + (e / sc).powi(2);
        }
        err = (err / R::of(N as f64)).sqrt();

        Stages {
            y1,
            k3,
            k4,
            k5,
            k6,
            k7,
            err,
        }
    }

    fn accept(&mut self, h: R, st: Stages<R, N>, was_rejected: bool) -> Step<R, N> {
        let lift = |c: f64| R::of(c);
        let mut cont = [[R::zero(); N]; 5];
        for i in 0..N {
            let ydiff = st.y1[i] - self.y[i];
            let bspl = h * self.k1[i] - ydiff;
            cont[0][i] = self.y[i];
            cont[1][i] = ydiff;
            cont[2][i] = bspl;
            cont[3][i] = ydiff - h * st.k7[i] - bspl;
            cont[4][i] = h
                * (lift(D1) * self.k1[i]
                    + lift(D3) * st.k3[i]
                    + lift(D4) * st.k4[i]
                    + lift(D5) * st.k5[i]
                    + lift(D6) * st.k6[i]
                    + lift(D7) * st.k7[i]);
        }
        let step = Step {
            t0: self.t,
            h,
            y1: st.y1,
            cont,
        };

        // PI controller (Lund stabilization, beta = 0.04).
        let err = st.err.max(R::of(1e-16));
        let fac11 = err.powf(R::of(0.17));
        let fac = fac11 / self.facold.powf(R::of(0.04));
        let mut scale = (R::of(0.9) / fac).max(R::of(0.2)).min(R::of(5.0));
        if was_rejected {
            scale = scale.min(R::one());
        }
        self.facold = err.max(R::of(1e-4));
        self.t = self.t + h;
        self.y = st.y1;
        self.k1 = st.k7; // FSAL
        self.h = (h * scale).abs();
        step
    }
}
