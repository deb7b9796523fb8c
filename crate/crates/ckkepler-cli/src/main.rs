//! Command-line front end: solve curved Kepler orbits on any CK space, print
//! the period laws, and run the verification suites.
//!
//! Exit codes: 0 ok, 2 domain/infeasible, 3 I/O failure, 64 usage.

mod verify;

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ckkepler::kepler::{
    energy_of_semimajor, one_two_three_residual, period_from_semimajor, phi_of_s, r_of_s, s_of_t,
    semimajor_of_energy, t_of_s, uv_of_s, OrbitParams,
};
use ckkepler::{geoflow, CKSpace};

const EXIT_DOMAIN: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "ckkepler",
    about = "Kepler problem on the nine 2-D Cayley-Klein spaces",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one orbit and write sampled trajectory records.
    Solve(SolveArgs),
    /// Print semiaxis, energy, period, pulsation and the 1-2-3 residual.
    Period(PeriodArgs),
    /// Run a named verification suite and report machine-readable results.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SpaceArgs {
    /// Named space: S2, E2, H2, ANH11, G11, NH11, AdS11, M11, dS11.
    #[arg(long, conflicts_with_all = ["k1", "k2"])]
    space: Option<String>,
    /// Curvature label kappa1 (with --k2).
    #[arg(long, requires = "k2", allow_hyphen_values = true)]
    k1: Option<f64>,
    /// Signature label kappa2 (with --k1).
    #[arg(long, requires = "k1", allow_hyphen_values = true)]
    k2: Option<f64>,
}

impl SpaceArgs {
    fn resolve(&self) -> Result<CKSpace<f64>, CliError> {
        match (&self.space, self.k1, self.k2) {
            (Some(name), None, None) => CKSpace::from_name(name)
                .ok_or_else(|| CliError::usage(format!("unknown space name `{name}`"))),
            (None, Some(k1), Some(k2)) => {
                CKSpace::new(k1, k2).map_err(|e| CliError::domain(e.to_string()))
            }
            _ => Err(CliError::usage(
                "specify either --space NAME or both --k1 and --k2".into(),
            )),
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Param {
    S,
    T,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Coupling constant of the potential -k/T(r).
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Orbit energy (with --J).
    #[arg(long = "E", allow_hyphen_values = true)]
    energy: Option<f64>,
    /// Angular momentum (with --E); negative selects retrograde motion.
    #[arg(long = "J", allow_hyphen_values = true)]
    j: Option<f64>,
    /// Eccentricity (with --p; Riemannian signature).
    #[arg(long = "e")]
    ecc: Option<f64>,
    /// Semilatus rectum (with --e).
    #[arg(long = "p")]
    semilatus: Option<f64>,
    /// Number of records (endpoints included).
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Sample uniformly in the regularization parameter or in time.
    #[arg(long, value_enum, default_value_t = Param::S)]
    param: Param,
    /// Sampled span; defaults to one period for closed orbits.
    #[arg(long)]
    span: Option<f64>,
    /// Output path (stdout if omitted).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Unused by the closed forms; recorded in the header for provenance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct PeriodArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Major semiaxis of the closed orbit.
    #[arg(long)]
    a: Option<f64>,
    /// Energy of the closed orbit (alternative to --a).
    #[arg(long = "E", allow_hyphen_values = true)]
    energy: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: trig, ckspace, kepler, geoflow, oracle, all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Base tolerance scale for the suite checks.
    #[arg(long, default_value_t = 1.0)]
    tol: f64,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: String) -> Self {
        Self { code: EXIT_USAGE, message }
    }
    fn domain(message: String) -> Self {
        Self { code: EXIT_DOMAIN, message }
    }
    fn io(err: std::io::Error) -> Self {
        Self { code: EXIT_IO, message: err.to_string() }
    }
}

impl From<ckkepler::Error> for CliError {
    fn from(e: ckkepler::Error) -> Self {
        CliError::domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not usage errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Period(args) => cmd_period(&args),
        Command::Verify(args) => verify::cmd_verify(&args.suite, args.tol),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ckkepler: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn build_orbit(args: &SolveArgs) -> Result<OrbitParams<f64>, CliError> {
    let space = args.space.resolve()?;
    match (args.energy, args.j, args.ecc, args.semilatus) {
        (Some(energy), Some(j), None, None) => {
            OrbitParams::from_dynamical(space, args.k, energy, j).map_err(Into::into)
        }
        (None, None, Some(e), Some(p)) => {
            OrbitParams::from_geometric(space, args.k, e, p).map_err(Into::into)
        }
        _ => Err(CliError::usage(
            "specify either --E with --J, or --e with --p".into(),
        )),
    }
}

/// One trajectory record; fields the signature degenerates are null/nan.
#[derive(Serialize)]
struct Record {
    s: f64,
    t: f64,
    r: f64,
    phi: Option<f64>,
    u: Option<f64>,
    v: Option<f64>,
    #[serde(rename = "P1")]
    p1: Option<f64>,
    #[serde(rename = "P2")]
    p2: Option<f64>,
    #[serde(rename = "W1")]
    w1: Option<f64>,
    #[serde(rename = "W2")]
    w2: Option<f64>,
}

fn record_at(orbit: &OrbitParams<f64>, s: f64) -> Result<Record, CliError> {
    let t = t_of_s(orbit, s)?;
    let r = r_of_s(orbit, s)?;
    let uv = uv_of_s(orbit, s).ok();
    let hodo = geoflow::hodograph_of_s(orbit, s).ok();
    let slow = hodo
        .as_ref()
        .and_then(|p| geoflow::slowmentum(p, orbit.space().kappa2).ok());
    Ok(Record {
        s,
        t,
        r,
        phi: phi_of_s(orbit, s).ok(),
        u: uv.map(|p| p.u),
        v: uv.map(|p| p.v),
        p1: hodo.as_ref().map(|p| p.p1),
        p2: hodo.as_ref().map(|p| p.p2),
        w1: slow.as_ref().map(|w| w.w1),
        w2: slow.as_ref().map(|w| w.w2),
    })
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt17_opt(v: Option<f64>) -> String {
    match v {
        Some(v) => fmt17(v),
        None => "nan".into(),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<ExitCode, CliError> {
    if args.samples == 0 {
        return Err(CliError::usage("--samples must be at least 1".into()));
    }
    let orbit = build_orbit(args)?;

    let span = match (args.span, args.param) {
        (Some(span), _) => span,
        (None, Param::S) => match default_s_span(&orbit) {
            Some(ps) => ps,
            None => {
                return Err(CliError::usage(
                    "orbit is not periodic: give --span explicitly".into(),
                ))
            }
        },
        (None, Param::T) => match default_s_span(&orbit) {
            Some(ps) => t_of_s(&orbit, ps)?,
            None => {
                return Err(CliError::usage(
                    "orbit is not periodic: give --span explicitly".into(),
                ))
            }
        },
    };

    let mut records = Vec::with_capacity(args.samples);
    for i in 0..args.samples {
        let frac = if args.samples == 1 {
            0.0
        } else {
            i as f64 / (args.samples - 1) as f64
        };
        let s = match args.param {
            Param::S => span * frac,
            Param::T => s_of_t(&orbit, span * frac)?,
        };
        records.push(record_at(&orbit, s)?);
    }

    let mut body = String::new();
    match args.format {
        Format::Csv => {
            render_csv_header(&mut body, args, &orbit);
            body.push_str("s,t,r,phi,u,v,P1,P2,W1,W2\n");
            for r in &records {
                let cols = [
                    fmt17(r.s),
                    fmt17(r.t),
                    fmt17(r.r),
                    fmt17_opt(r.phi),
                    fmt17_opt(r.u),
                    fmt17_opt(r.v),
                    fmt17_opt(r.p1),
                    fmt17_opt(r.p2),
                    fmt17_opt(r.w1),
                    fmt17_opt(r.w2),
                ];
                body.push_str(&cols.join(","));
                body.push('\n');
            }
        }
        Format::Json => {
            let header = config_json(args, &orbit);
            body.push_str(&serde_json::to_string(&header).expect("header json"));
            body.push('\n');
            for r in &records {
                body.push_str(&serde_json::to_string(r).expect("record json"));
                body.push('\n');
            }
        }
    }

    match &args.out {
        Some(path) => {
            let mut f = std::fs::File::create(path).map_err(CliError::io)?;
            f.write_all(body.as_bytes()).map_err(CliError::io)?;
        }
        None => {
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(CliError::io)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// One s-period when the evolution is oscillatory and stays on the chart.
fn default_s_span(orbit: &OrbitParams<f64>) -> Option<f64> {
    if orbit.escape_parameter().is_some() {
        return None;
    }
    orbit.s_period()
}

fn render_csv_header(out: &mut String, args: &SolveArgs, orbit: &OrbitParams<f64>) {
    let space = orbit.space();
    let _ = writeln!(out, "# ckkepler solve");
    let _ = writeln!(out, "# kappa1 = {}", fmt17(space.kappa1));
    let _ = writeln!(out, "# kappa2 = {}", fmt17(space.kappa2));
    let _ = writeln!(out, "# k = {}", fmt17(orbit.coupling()));
    let _ = writeln!(out, "# E = {}", fmt17(orbit.energy()));
    let _ = writeln!(out, "# J = {}", fmt17_opt(orbit.angular_momentum()));
    let _ = writeln!(out, "# sigma = {}", fmt17(orbit.sigma()));
    let _ = writeln!(out, "# e = {}", fmt17(orbit.eccentricity()));
    let _ = writeln!(out, "# p = {}", fmt17_opt(orbit.semilatus()));
    let _ = writeln!(out, "# epsilon = {}", fmt17_opt(orbit.epsilon()));
    let _ = writeln!(out, "# phi0 = {}", fmt17(orbit.phi0()));
    let _ = writeln!(out, "# samples = {}", args.samples);
    let _ = writeln!(
        out,
        "# param = {}",
        match args.param {
            Param::S => "s",
            Param::T => "t",
        }
    );
    let _ = writeln!(out, "# tol = {}", fmt17(args.tol));
}

#[derive(Serialize)]
struct ConfigHeader {
    kappa1: f64,
    kappa2: f64,
    k: f64,
    #[serde(rename = "E")]
    energy: f64,
    #[serde(rename = "J")]
    j: Option<f64>,
    sigma: f64,
    e: f64,
    p: Option<f64>,
    epsilon: Option<f64>,
    phi0: f64,
    samples: usize,
    param: &'static str,
    tol: f64,
}

fn config_json(args: &SolveArgs, orbit: &OrbitParams<f64>) -> ConfigHeader {
    ConfigHeader {
        kappa1: orbit.space().kappa1,
        kappa2: orbit.space().kappa2,
        k: orbit.coupling(),
        energy: orbit.energy(),
        j: orbit.angular_momentum(),
        sigma: orbit.sigma(),
        e: orbit.eccentricity(),
        p: orbit.semilatus(),
        epsilon: orbit.epsilon(),
        phi0: orbit.phi0(),
        samples: args.samples,
        param: match args.param {
            Param::S => "s",
            Param::T => "t",
        },
        tol: args.tol,
    }
}

fn cmd_period(args: &PeriodArgs) -> Result<ExitCode, CliError> {
    let space = args.space.resolve()?;
    let a = match (args.a, args.energy) {
        (Some(a), None) => a,
        (None, Some(energy)) => semimajor_of_energy(&space, args.k, energy)?,
        _ => {
            return Err(CliError::usage(
                "specify exactly one of --a or --E".into(),
            ))
        }
    };
    let energy = energy_of_semimajor(&space, args.k, a)?;
    let period = period_from_semimajor(&space, args.k, a)?;
    let omega = 2.0 * std::f64::consts::PI / period;
    let residual = one_two_three_residual(&space, args.k, a, period);
    println!("a        = {}", fmt17(a));
    println!("E        = {}", fmt17(energy));
    println!("T        = {}", fmt17(period));
    println!("omega    = {}", fmt17(omega));
    println!("residual = {}", fmt17(residual));
    Ok(ExitCode::SUCCESS)
}
