//! Built-in verification suites: the library's invariants re-run as a
//! machine-readable report, one JSON line per check.

use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use ckkepler::cktrig::{ck_atan, ck_cos, ck_sin, ck_tan, ck_versin};
use ckkepler::geoflow::{
    epsilon_of_orbit, geodesic_slowmentum, hodograph_of_phi, hodograph_of_s, lc_curvature_numeric,
    momentum_norm2, slowmentum, MomentumPoint,
};
use ckkepler::kepler::{
    closed_primitive, phi_of_s, r_of_phi, r_of_s, t_of_s, uv_of_s, OrbitParams,
};
use ckkepler::oracle::{
    conserved_drift, integrate, quad_check_primitive, quadrature_t_of_s, PhaseState,
};
use ckkepler::{ckspace, CKSpace, PolarPoint};

use crate::CliError;

#[derive(Serialize)]
struct CheckLine<'a> {
    suite: &'a str,
    check: &'a str,
    pass: bool,
    max_err: f64,
    tol: f64,
}

struct Report {
    all_pass: bool,
    scale: f64,
}

impl Report {
    fn new(scale: f64) -> Self {
        Report { all_pass: true, scale }
    }

    fn check(&mut self, suite: &str, check: &str, max_err: f64, tol: f64) {
        let tol = tol * self.scale;
        let pass = max_err.is_finite() && max_err < tol;
        self.all_pass &= pass;
        let line = CheckLine { suite, check, pass, max_err, tol };
        println!("{}", serde_json::to_string(&line).expect("check line"));
    }
}

pub fn cmd_verify(suite: &str, tol: f64) -> Result<ExitCode, CliError> {
    let mut report = Report::new(tol);
    match suite {
        "trig" => suite_trig(&mut report),
        "ckspace" => suite_ckspace(&mut report),
        "kepler" => suite_kepler(&mut report),
        "geoflow" => suite_geoflow(&mut report),
        "oracle" => suite_oracle(&mut report),
        "all" => {
            suite_trig(&mut report);
            suite_ckspace(&mut report);
            suite_kepler(&mut report);
            suite_geoflow(&mut report);
            suite_oracle(&mut report);
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown suite `{other}` (expected trig, ckspace, kepler, geoflow, oracle, all)"
            )))
        }
    }
    Ok(if report.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn test_orbits() -> Vec<OrbitParams<f64>> {
    let mk = |k1: f64, k2: f64, e: f64, j: f64| {
        OrbitParams::from_dynamical(CKSpace { kappa1: k1, kappa2: k2 }, 1.0, e, j).unwrap()
    };
    vec![
        mk(1.0, 1.0, -1.0, 0.5),
        mk(0.0, 1.0, -0.5, 0.8),
        mk(-1.0, 1.0, -1.3, 0.5),
    ]
}

fn suite_trig(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut basic = 0.0f64;
    let mut versine = 0.0f64;
    let mut addition = 0.0f64;
    let mut inverse = 0.0f64;
    let mut derivative = 0.0f64;
    for _ in 0..4000 {
        let kappa: f64 = rng.gen_range(-10.0..10.0);
        let x = rng.gen_range(-5.0..5.0);
        let c = ck_cos(kappa, x).unwrap();
        let s = ck_sin(kappa, x).unwrap();
        let v = ck_versin(kappa, x).unwrap();
        let scale = (c * c).abs().max((kappa * s * s).abs()).max(1.0);
        basic = basic.max((c * c + kappa * s * s - 1.0).abs() / scale);
        let scale = c.abs().max((kappa * v).abs()).max(1.0);
        versine = versine.max((c - (1.0 - kappa * v)).abs() / scale);

        let kappa: f64 = rng.gen_range(-3.0..3.0);
        let (a, b) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (ta, tb) = (ck_tan(kappa, a).unwrap(), ck_tan(kappa, b).unwrap());
        let denom = 1.0 - kappa * ta * tb;
        let lhs = ck_tan(kappa, a + b).unwrap();
        if denom.abs() > 0.05 && lhs.is_finite() && lhs.abs() < 50.0 {
            addition = addition.max((lhs - (ta + tb) / denom).abs() / lhs.abs().max(1.0));
        }
        let x: f64 = rng.gen_range(-1.0..1.0);
        if kappa <= 0.0 || x.abs() < 0.9 * std::f64::consts::FRAC_PI_2 / kappa.sqrt() {
            let t = ck_tan(kappa, x).unwrap();
            if t.is_finite() {
                inverse = inverse.max((ck_atan(kappa, t, 0).unwrap() - x).abs());
            }
        }
        let h = 1e-5;
        let ds = (ck_sin(kappa, x + h).unwrap() - ck_sin(kappa, x - h).unwrap()) / (2.0 * h);
        let dc = (ck_cos(kappa, x + h).unwrap() - ck_cos(kappa, x - h).unwrap()) / (2.0 * h);
        derivative = derivative
            .max((ds - ck_cos(kappa, x).unwrap()).abs())
            .max((dc + kappa * ck_sin(kappa, x).unwrap()).abs());
    }
    report.check("trig", "basic-identity", basic, 1e-12);
    report.check("trig", "versine-identity", versine, 1e-12);
    report.check("trig", "tangent-addition", addition, 1e-11);
    report.check("trig", "atan-roundtrip", inverse, 1e-12);
    report.check("trig", "derivatives-fd", derivative, 1e-6);
}

fn suite_ckspace(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut roundtrip = 0.0f64;
    let mut flat = 0.0f64;
    let mut momenta = 0.0f64;
    let mut ambient = 0.0f64;
    let mut equator = 0.0f64;
    for _ in 0..2000 {
        let space: CKSpace<f64> =
            CKSpace { kappa1: rng.gen_range(-2.0..2.0), kappa2: rng.gen_range(-2.0..2.0) };
        let p = PolarPoint::new(rng.gen_range(0.01..1.2), space.canonical_phi(rng.gen_range(-1.4..1.4)));
        if space.validate_polar(&p).is_err() {
            continue;
        }
        if let Ok(p2) = ckspace::polar_to_parallel2(&space, &p) {
            if let Ok(back) = ckspace::parallel2_to_polar(&space, &p2) {
                roundtrip = roundtrip.max((back.r - p.r).abs()).max((back.phi - p.phi).abs());
            }
        }
        if let Ok(p1) = ckspace::polar_to_parallel1(&space, &p) {
            if let Ok(back) = ckspace::parallel1_to_polar(&space, &p1) {
                roundtrip = roundtrip.max((back.r - p.r).abs()).max((back.phi - p.phi).abs());
            }
        }
        let flat_space = CKSpace { kappa1: 0.0, kappa2: space.kappa2 };
        let a = ckspace::polar_to_parallel1(&flat_space, &p).unwrap();
        let b = ckspace::polar_to_parallel2(&flat_space, &p).unwrap();
        flat = flat.max((a.x - b.u).abs()).max((a.y - b.v).abs());

        let (rdot, phidot) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (m1, m2, j) = ckspace::noether_momenta(&space, &p, rdot, phidot);
        let lhs = ckspace::metric_speed2(&space, &p, rdot, phidot);
        let rhs = m1 * m1 + space.kappa2 * m2 * m2 + space.kappa1 * space.kappa2 * j * j;
        momenta = momenta.max((lhs - rhs).abs() / lhs.abs().max(1.0));

        let amb = ckspace::embed_ambient(&space, &p);
        ambient = ambient.max(
            (amb.s0 * amb.s0
                + space.kappa1 * amb.s1 * amb.s1
                + space.kappa1 * space.kappa2 * amb.s2 * amb.s2
                - 1.0)
                .abs(),
        );
    }
    let s2 = CKSpace { kappa1: 1.0f64, kappa2: 1.0 };
    for i in 0..100 {
        let phi = -3.0 + 6.0 * i as f64 / 100.0;
        let amb = ckspace::embed_ambient(&s2, &PolarPoint::new(std::f64::consts::FRAC_PI_2, phi));
        if let ckkepler::StereoPoint::Finite(w1, w2) = ckspace::stereographic_project(&amb) {
            equator = equator.max((w1 * w1 + w2 * w2 - 1.0).abs());
        }
    }
    report.check("ckspace", "chart-roundtrips", roundtrip, 1e-10);
    report.check("ckspace", "flat-degeneracy", flat, 1e-12);
    report.check("ckspace", "momenta-kinetic-form", momenta, 1e-10);
    report.check("ckspace", "ambient-constraint", ambient, 1e-12);
    report.check("ckspace", "equator-projection", equator, 1e-12);
}

fn suite_kepler(report: &mut Report) {
    let orbits = test_orbits();
    let mut conic = 0.0f64;
    let mut charts = 0.0f64;
    let mut linear = 0.0f64;
    let mut dtds = 0.0f64;
    let mut symmetry = 0.0f64;
    let mut timelaw = 0.0f64;
    for orbit in &orbits {
        let space = *orbit.space();
        let j = orbit.angular_momentum().unwrap();
        let e = orbit.eccentricity();
        let ps = orbit.s_period().unwrap();
        for i in 0..32 {
            let s = 0.01 + ps * i as f64 / 32.0;
            let r = r_of_s(orbit, s).unwrap();
            let phi = phi_of_s(orbit, s).unwrap();
            conic = conic.max((r - r_of_phi(orbit, space.canonical_phi(phi)).unwrap()).abs());

            let uv = uv_of_s(orbit, s).unwrap();
            let p = ckspace::polar_to_parallel2(&space, &PolarPoint::new(r, space.canonical_phi(phi))).unwrap();
            charts = charts.max((uv.u - p.u).abs()).max((uv.v - p.v).abs());

            let h = 1e-5;
            let tu = |s: f64| ck_tan(space.kappa1, uv_of_s(orbit, s).unwrap().u).unwrap();
            let tv = |s: f64| ck_tan(space.kappa12(), uv_of_s(orbit, s).unwrap().v).unwrap();
            let du = (tu(s + h) - tu(s - h)) / (2.0 * h);
            let dv = (tv(s + h) - tv(s - h)) / (2.0 * h);
            linear = linear
                .max((du + tv(s) / j).abs())
                .max((dv - (e * j + (1.0 - e * e) / (space.kappa2 * j) * tu(s))).abs());

            let fd = (t_of_s(orbit, s + h).unwrap() - t_of_s(orbit, s - h).unwrap()) / (2.0 * h);
            let sc = ck_sin(space.kappa1, r).unwrap() * ck_cos(space.kappa1, r).unwrap();
            dtds = dtds.max((fd - sc).abs());

            let lhs = (1.0 - e * ck_cos(orbit.sigma(), s).unwrap()) / orbit.sigma()
                * (1.0 + e * ck_cos(space.kappa2, phi).unwrap())
                / space.kappa2;
            symmetry = symmetry.max((lhs - j * j).abs());

            let t = t_of_s(orbit, s).unwrap();
            let q = quadrature_t_of_s(orbit, s, 1e-12).unwrap();
            timelaw = timelaw.max((t - q).abs() / q.abs().max(1.0));
        }
    }
    let mut primitive = 0.0f64;
    for (sigma, e) in [(1.7f64, 0.45), (-0.8, 0.3), (2.25, 1.3), (1e-7, 0.4)] {
        for s in [0.4, 1.3] {
            if let Ok(closed) = closed_primitive(sigma, e, s) {
                let q = quad_check_primitive(sigma, e, s).unwrap();
                primitive = primitive.max((closed - q).abs() / closed.abs().max(1.0));
            }
        }
    }
    // Euclidean reduction: the flat Kepler equation.
    let e2 = CKSpace { kappa1: 0.0f64, kappa2: 1.0 };
    let o = OrbitParams::from_dynamical(e2, 1.0, -0.5, 0.75f64.sqrt()).unwrap();
    let mut euclid = 0.0f64;
    for i in 1..20 {
        let s = 0.4 * i as f64;
        euclid = euclid.max((t_of_s(&o, s).unwrap() - (s - 0.5 * s.sin())).abs());
    }
    report.check("kepler", "orbit-equation-consistency", conic, 1e-9);
    report.check("kepler", "chart-consistency", charts, 1e-9);
    report.check("kepler", "linear-system-fd", linear, 1e-6);
    report.check("kepler", "dt-ds-fd", dtds, 1e-6);
    report.check("kepler", "sigma-phi-symmetry", symmetry, 1e-9);
    report.check("kepler", "primitive-identity", primitive, 1e-8);
    report.check("kepler", "time-law-vs-quadrature", timelaw, 1e-8);
    report.check("kepler", "euclidean-reduction", euclid, 1e-11);
}

fn suite_geoflow(report: &mut Report) {
    let orbits = test_orbits();
    let mut cycle = 0.0f64;
    let mut newton = 0.0f64;
    let mut norms = 0.0f64;
    let mut energy_id = 0.0f64;
    let mut ident = 0.0f64;
    for orbit in &orbits {
        let space = *orbit.space();
        let (k2, j, e, sigma) = (
            space.kappa2,
            orbit.angular_momentum().unwrap(),
            orbit.eccentricity(),
            orbit.sigma(),
        );
        let center = e / (k2 * j);
        let radius2 = 1.0 / (k2 * j * j);
        let eps = epsilon_of_orbit(orbit).unwrap();
        let ps = orbit.s_period().unwrap();
        for i in 0..64 {
            let phi = -3.0 + 6.0 * i as f64 / 64.0;
            let p = hodograph_of_phi(orbit, phi).unwrap();
            cycle = cycle
                .max((p.p1 * p.p1 + k2 * (p.p2 - center) * (p.p2 - center) - radius2).abs());
            let h = 1e-5;
            let a = hodograph_of_phi(orbit, phi - h).unwrap();
            let b = hodograph_of_phi(orbit, phi + h).unwrap();
            newton = newton
                .max(((b.p1 - a.p1) / (2.0 * h) + ck_cos(k2, phi).unwrap() / j).abs())
                .max(((b.p2 - a.p2) / (2.0 * h) + ck_sin(k2, phi).unwrap() / j).abs());

            let s = 0.02 + ps * i as f64 / 64.0;
            let p = hodograph_of_s(orbit, s).unwrap();
            let pn = momentum_norm2(&p, k2);
            let cs = ck_cos(sigma, s).unwrap();
            norms = norms.max((pn - sigma * (1.0 + e * cs) / (1.0 - e * cs)).abs() / pn.abs().max(1.0));
            let r = r_of_s(orbit, s).unwrap();
            energy_id = energy_id
                .max((1.0 / ck_tan(space.kappa1, r).unwrap() - (pn + sigma) / 2.0).abs());
            let w = slowmentum(&p, k2).unwrap();
            let g = geodesic_slowmentum(sigma, k2, eps, s).unwrap();
            ident = ident.max((w.w1 - g.w1).abs()).max((w.w2 - g.w2).abs());
        }
    }
    let mut curvature = 0.0f64;
    for sigma in [-1.0f64, 0.0, 2.25] {
        for p in [MomentumPoint { p1: 0.5, p2: 0.2 }, MomentumPoint { p1: -0.4, p2: 1.3 }] {
            if let Ok(kk) = lc_curvature_numeric(sigma, 1.0, &p, 1e-3) {
                curvature = curvature.max((kk - sigma).abs());
            }
        }
    }
    report.check("geoflow", "hodograph-cycle", cycle, 1e-10);
    report.check("geoflow", "newton-momentum-fd", newton, 1e-6);
    report.check("geoflow", "momentum-norm-identity", norms, 1e-10);
    report.check("geoflow", "energy-identity", energy_id, 1e-9);
    report.check("geoflow", "geodesic-identification", ident, 1e-9);
    report.check("geoflow", "lc-curvature", curvature, 1e-3);
}

fn suite_oracle(report: &mut Report) {
    // Circular Euclidean orbit stays at r = 1.
    let e2 = CKSpace { kappa1: 0.0f64, kappa2: 1.0 };
    let init = PhaseState { r: 1.0, phi: 0.0, rdot: 0.0, phidot: 1.0, t: 0.0 };
    let traj = integrate(&e2, 1.0, &init, 12.0, 1e-11, 200).unwrap();
    let circular = traj
        .samples
        .iter()
        .map(|s| (s.r - 1.0).abs())
        .fold(0.0, f64::max);
    report.check("oracle", "circular-orbit", circular, 1e-9);

    // Bound sphere orbit returns to its initial state after one period.
    let s2 = CKSpace { kappa1: 1.0f64, kappa2: 1.0 };
    let orbit = OrbitParams::from_dynamical(s2, 1.0, -1.0, 0.5).unwrap();
    let ps = orbit.s_period().unwrap();
    let period = 2.0 * t_of_s(&orbit, ps / 2.0).unwrap();
    let r0 = r_of_s(&orbit, 0.0).unwrap();
    let sr = ck_sin(1.0, r0).unwrap();
    let init = PhaseState { r: r0, phi: 0.0, rdot: 0.0, phidot: 0.5 / (sr * sr), t: 0.0 };
    let traj = integrate(&s2, 1.0, &init, period, 1e-12, 50).unwrap();
    let last = traj.samples.last().unwrap();
    let closure = (last.r - r0)
        .abs()
        .max(last.rdot.abs())
        .max((last.phi - 2.0 * std::f64::consts::PI).abs());
    report.check("oracle", "bound-orbit-closure", closure, 1e-7);

    // Conserved quantities drift within tolerance, and drop by at least 10x
    // when the tolerance tightens by 10x.
    let loose = integrate(&s2, 1.0, &init, period, 1e-5, 50).unwrap();
    let tight = integrate(&s2, 1.0, &init, period, 1e-7, 50).unwrap();
    let d_loose = conserved_drift(&loose);
    let d_tight = conserved_drift(&tight);
    report.check("oracle", "conserved-drift", {
        let d = conserved_drift(&traj);
        d.0.max(d.1).max(d.2).max(d.3)
    }, 1e-8);
    let order = (d_tight.0.max(1e-300)) / (d_loose.0.max(1e-300));
    report.check("oracle", "tolerance-order-sanity", order, 0.1);

    // Radial drop regularized through the collision.
    let energy = -1.0 / ck_tan(1.0, 0.5).unwrap();
    let radial = OrbitParams::from_dynamical(s2, 1.0, energy, 0.0).unwrap();
    let rps = radial.s_period().unwrap();
    let t_end = t_of_s(&radial, 1.75 * rps).unwrap() - t_of_s(&radial, 0.5 * rps).unwrap();
    let init = PhaseState { r: 0.5, phi: 0.0, rdot: 0.0, phidot: 0.0, t: 0.0 };
    let traj = integrate(&s2, 1.0, &init, t_end, 1e-12, 801).unwrap();
    let filtered = ckkepler::Trajectory {
        samples: traj.samples.iter().copied().filter(|s| s.r > 1e-3).collect(),
        ..traj
    };
    let d = conserved_drift(&filtered);
    report.check("oracle", "collision-regularization", d.0.max(d.1).max(d.2).max(d.3), 1e-7);
}
