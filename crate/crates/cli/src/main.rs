//! `gabor-frame`: frame criteria, explicit bounds and spectral checks for
//! Gaussian Gabor systems over lattices, with JSON and CSV reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use gaussian_gabor::bounds1d::{explicit_frame_bounds, robin_constant};
use gaussian_gabor::criteria::{full_report, TranscendenceAssertion, TranscendenceStatus, Verdict};
use gaussian_gabor::envelope::{eval_psi, EnvelopeSpec};
use gaussian_gabor::gram::{verify_frame_verdict_with, EmpiricalVerdict, VerifyConfig};
use gaussian_gabor::short_vectors::{buser_sarnak, sup_m_beta, BetaWeights};
use gaussian_gabor::special::{dedekind_eta, gauss_theta_sum, jacobi_theta, Tau};
use gaussian_gabor::{fixture, fixtures, gamma_of_dual, Lattice2n, LatticeFile, OmegaFile, SiegelMatrix};

#[derive(Parser, Debug)]
#[command(name = "gabor-frame", version, about = "Frame criteria and bounds for Gaussian Gabor systems")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Print the bundled fixtures and exit.
    #[arg(long, global = true)]
    list_fixtures: bool,

    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "GABOR_LATTICE_THREADS")]
    threads: Option<usize>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Exit with status 2 when the verdict is inconclusive or undecided.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Transcendence {
    True,
    False,
    Unknown,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice data, criteria, interpolation invariants and (for n = 1) explicit bounds.
    Analyze(LatticeArgs),
    /// Symplectic dual and the interpolation lattice.
    Dual(LatticeArgs),
    /// Rigorous frame verdict from the implemented criteria.
    FrameCheck(LatticeArgs),
    /// Explicit frame bounds for a lattice in R^2.
    Bounds1d(LatticeArgs),
    /// Empirical frame check from truncated Gram matrices.
    Verify(VerifyArgs),
    /// Evaluate the envelope psi on a grid (CSV by default).
    Envelope(EnvelopeArgs),
    /// Theta, eta and Robin constant values with error bounds.
    Special(SpecialArgs),
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// Lattice JSON file, or `fixture:NAME`.
    #[arg(long)]
    lattice: String,

    /// Siegel matrix JSON file; defaults to the fixture's matrix or iI.
    #[arg(long)]
    omega: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "unknown")]
    transcendental: Transcendence,

    /// Assert that the system is known not to be a frame.
    #[arg(long)]
    known_nonframe: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    input: LatticeArgs,

    /// Comma-separated increasing truncation radii.
    #[arg(long, default_value = "4,6,8")]
    radius_ladder: String,

    /// Relative change of lambda_min that counts as a plateau.
    #[arg(long, default_value_t = gaussian_gabor::gram::PLATEAU_TOL)]
    tolerance: f64,

    /// Largest truncation size.
    #[arg(long, default_value_t = gaussian_gabor::gram::DEFAULT_POINT_CAP)]
    point_cap: usize,
}

#[derive(Args, Debug)]
struct EnvelopeArgs {
    /// Comma-separated weights on the simplex.
    #[arg(long, default_value = "1")]
    beta: String,

    #[arg(long, default_value_t = 1.0)]
    r: f64,

    /// Grid points per axis.
    #[arg(long, default_value_t = 41)]
    grid: usize,

    /// Half-width of the grid.
    #[arg(long, default_value_t = 2.0)]
    extent: f64,
}

#[derive(Args, Debug)]
struct SpecialArgs {
    /// Dedekind eta at this point of the upper half-plane, e.g. `0+2i`.
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,

    /// Jacobi theta at this argument; needs --tau.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,

    /// sum_n exp(-pi n^2 t).
    #[arg(long)]
    gauss_theta: Option<f64>,

    /// Robin constant for tau = i * epsilon.
    #[arg(long)]
    robin: Option<f64>,
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also with `j`).
fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('j', "i");
    if t.is_empty() {
        bail!("empty complex number");
    }
    if !t.ends_with('i') {
        return Ok(Complex64::new(t.parse().with_context(|| format!("bad complex number `{s}`"))?, 0.0));
    }
    let body = &t[..t.len() - 1];
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(k, c)| (*c == '+' || *c == '-') && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k)
        .last();
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        v => v,
    };
    Ok(Complex64::new(
        re.parse().with_context(|| format!("bad real part in `{s}`"))?,
        im.parse().with_context(|| format!("bad imaginary part in `{s}`"))?,
    ))
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad number `{v}` in `{s}`")))
        .collect()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
}

struct Input {
    name: String,
    lattice: Lattice2n,
    omega: SiegelMatrix,
    known_nonframe: bool,
    transcendence: TranscendenceAssertion,
}

fn load(args: &LatticeArgs) -> Result<Input> {
    let (name, file, fixture_omega, fixture_nonframe) = match args.lattice.strip_prefix("fixture:") {
        Some(name) => {
            let f = fixture(name).ok_or_else(|| anyhow!("unknown fixture `{name}` (see --list-fixtures)"))?;
            let l = f.lattice.clone().ok_or_else(|| anyhow!("fixture `{name}` has no lattice"))?;
            (name.to_string(), l, f.omega.clone(), f.known_nonframe)
        }
        None => (args.lattice.clone(), read_json::<LatticeFile>(Path::new(&args.lattice))?, None, false),
    };
    let lattice = file.to_lattice().with_context(|| format!("{name}: lattice violates the schema"))?;
    let omega_file = match &args.omega {
        Some(p) => read_json::<OmegaFile>(p)?,
        None => fixture_omega.unwrap_or_else(|| OmegaFile::identity(lattice.n())),
    };
    let omega = omega_file.to_siegel().context("omega violates the schema")?;
    if omega.n() != lattice.n() {
        bail!("omega is {}x{} but the lattice lives in R^{}", omega.n(), omega.n(), 2 * lattice.n());
    }
    let transcendence = match args.transcendental {
        Transcendence::True => TranscendenceAssertion::user(TranscendenceStatus::True),
        Transcendence::False => TranscendenceAssertion::user(TranscendenceStatus::False),
        Transcendence::Unknown => TranscendenceAssertion::unknown(),
    };
    Ok(Input { name, lattice, omega, known_nonframe: args.known_nonframe || fixture_nonframe, transcendence })
}

fn input_json(i: &Input) -> Value {
    json!({
        "source": i.name,
        "lattice": LatticeFile::from_lattice(&i.lattice),
        "omega": OmegaFile::from_siegel(&i.omega),
        "covolume": i.lattice.covolume(),
    })
}

/// A finished report and whether its verdict counts as undecided.
struct Outcome {
    body: Output,
    undecided: bool,
}

enum Output {
    Json(Value),
    Csv(String),
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn analyze(args: &LatticeArgs) -> Result<Outcome> {
    let i = load(args)?;
    let report = full_report(&i.lattice, &i.omega, i.transcendence, i.known_nonframe.then_some(true))?;
    let g = gamma_of_dual(&i.omega, &i.lattice)?;
    let sup = sup_m_beta(&g)?;
    let mut out = json!({
        "command": "analyze",
        "input": input_json(&i),
        "dual": LatticeFile::from_lattice(&i.lattice.symplectic_dual()?),
        "interpolation_lattice": {
            "covolume": g.covolume(),
            "m_gamma": buser_sarnak(&g)?,
            "sup_m_beta": to_value(&sup)?,
        },
        "report": to_value(&report)?,
    });
    if i.lattice.n() == 1 {
        let reduced = gaussian_gabor::gamma_of_primal(&i.omega, &i.lattice)?.as_lattice_2n();
        out["explicit_bounds"] = match explicit_frame_bounds(&reduced) {
            Ok(s) => to_value(&s)?,
            Err(e) => json!({"unavailable": e.to_string()}),
        };
    }
    Ok(Outcome { body: Output::Json(out), undecided: report.verdict == Verdict::Inconclusive })
}

fn dual(args: &LatticeArgs) -> Result<Outcome> {
    let i = load(args)?;
    let d = i.lattice.symplectic_dual()?;
    let back = d.symplectic_dual()?;
    let g = gamma_of_dual(&i.omega, &i.lattice)?;
    let gens: Vec<Vec<[f64; 2]>> = g.gens().iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect()).collect();
    let out = json!({
        "command": "dual",
        "input": input_json(&i),
        "dual": LatticeFile::from_lattice(&d),
        "dual_covolume": d.covolume(),
        "covolume_product": i.lattice.covolume() * d.covolume(),
        "involution_holds": back.same_point_set(&i.lattice, 1e-9),
        "pairing_defect": i.lattice.pairing_defect(&d),
        "interpolation_lattice_generators": gens,
    });
    Ok(Outcome { body: Output::Json(out), undecided: false })
}

fn frame_check(args: &LatticeArgs) -> Result<Outcome> {
    let i = load(args)?;
    let report = full_report(&i.lattice, &i.omega, i.transcendence, i.known_nonframe.then_some(true))?;
    let out = json!({"command": "frame-check", "input": input_json(&i), "report": to_value(&report)?});
    Ok(Outcome { body: Output::Json(out), undecided: report.verdict == Verdict::Inconclusive })
}

fn bounds1d(args: &LatticeArgs) -> Result<Outcome> {
    let i = load(args)?;
    if i.lattice.n() != 1 {
        bail!("bounds1d needs a lattice in R^2");
    }
    let reduced = gaussian_gabor::gamma_of_primal(&i.omega, &i.lattice)?.as_lattice_2n();
    let s = explicit_frame_bounds(&reduced)?;
    let out = json!({"command": "bounds1d", "input": input_json(&i), "sandwich": to_value(&s)?});
    Ok(Outcome { body: Output::Json(out), undecided: false })
}

fn verify(args: &VerifyArgs, format: Format) -> Result<Outcome> {
    let i = load(&args.input)?;
    let cfg = VerifyConfig {
        ladder: parse_list(&args.radius_ladder)?,
        point_cap: args.point_cap,
        plateau_tol: args.tolerance,
        ..VerifyConfig::default()
    };
    let rec = verify_frame_verdict_with(&i.lattice, &i.omega, &cfg)?;
    let undecided = rec.verdict == EmpiricalVerdict::Undecided;
    let body = match format {
        Format::Json => Output::Json(json!({
            "command": "verify",
            "input": input_json(&i),
            "config": to_value(&cfg)?,
            "record": to_value(&rec)?,
        })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "radius", "points", "lambda_min", "lambda_max", "schur_upper", "full_row_sum", "residual", "noise_floor",
            ])?;
            for e in &rec.ladder {
                w.serialize((
                    e.radius,
                    e.points,
                    e.lambda_min_trunc,
                    e.lambda_max_trunc,
                    e.schur_upper,
                    e.full_row_sum,
                    e.residual,
                    e.noise_floor,
                ))?;
            }
            Output::Csv(String::from_utf8(w.into_inner()?)?)
        }
    };
    Ok(Outcome { body, undecided })
}

fn envelope(args: &EnvelopeArgs, format: Format) -> Result<Outcome> {
    let beta = BetaWeights::new(parse_list(&args.beta)?)?;
    let n = beta.n();
    let spec = EnvelopeSpec::new(beta, args.r)?;
    if args.grid < 2 {
        bail!("grid needs at least two points per axis");
    }
    if !(args.extent > 0.0) {
        bail!("extent must be positive");
    }
    // n = 1: the plane of z_1; n >= 2: real z_1, z_2 with the other coordinates zero
    let step = 2.0 * args.extent / (args.grid - 1) as f64;
    let mut rows = Vec::with_capacity(args.grid * args.grid);
    for a in 0..args.grid {
        for b in 0..args.grid {
            let (u, v) = (-args.extent + a as f64 * step, -args.extent + b as f64 * step);
            let mut z = vec![Complex64::new(0.0, 0.0); n];
            if n == 1 {
                z[0] = Complex64::new(u, v);
            } else {
                z[0] = Complex64::new(u, 0.0);
                z[1] = Complex64::new(v, 0.0);
            }
            let psi = eval_psi(&spec, &z);
            let full = std::f64::consts::PI * z.iter().map(|c| c.norm_sqr()).sum::<f64>();
            rows.push((u, v, psi, full, spec.in_ball(&z)));
        }
    }
    let body = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["u", "v", "psi", "pi_abs_z_sq", "in_ball"])?;
            for r in &rows {
                w.serialize(r)?;
            }
            Output::Csv(String::from_utf8(w.into_inner()?)?)
        }
        Format::Json => Output::Json(json!({
            "command": "envelope",
            "spec": to_value(&spec)?,
            "axes": if n == 1 { "Re z_1, Im z_1" } else { "z_1, z_2 real" },
            "grid": rows.iter().map(|r| json!({"u": r.0, "v": r.1, "psi": finite_or_null(r.2), "pi_abs_z_sq": r.3, "in_ball": r.4})).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome { body, undecided: false })
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn series_json(r: gaussian_gabor::special::SeriesResult) -> Value {
    json!({"re": r.value.re, "im": r.value.im, "abs": r.value.norm(), "error_bound": r.error_bound, "terms": r.truncation_n})
}

fn special(args: &SpecialArgs) -> Result<Outcome> {
    let mut out = serde_json::Map::new();
    out.insert("command".into(), json!("special"));
    if let Some(t) = &args.eta {
        let tau = Tau::new(parse_complex(t)?)?;
        out.insert("eta".into(), json!({"tau": [tau.value().re, tau.value().im], "value": series_json(dedekind_eta(tau))}));
    }
    if let Some(z) = &args.theta {
        let tau = Tau::new(parse_complex(args.tau.as_deref().ok_or_else(|| anyhow!("--theta needs --tau"))?)?)?;
        let z = parse_complex(z)?;
        out.insert(
            "theta".into(),
            json!({"z": [z.re, z.im], "tau": [tau.value().re, tau.value().im], "value": series_json(jacobi_theta(z, tau))}),
        );
    }
    if let Some(t) = args.gauss_theta {
        out.insert("gauss_theta".into(), json!({"t": t, "value": gauss_theta_sum(t)?}));
    }
    if let Some(eps) = args.robin {
        out.insert("robin".into(), to_value(&robin_constant(Tau::imaginary(eps)?)?)?);
    }
    if out.len() == 1 {
        bail!("special needs at least one of --eta, --theta, --gauss-theta, --robin");
    }
    Ok(Outcome { body: Output::Json(Value::Object(out)), undecided: false })
}

fn list_fixtures() -> Result<Outcome> {
    let all: Vec<Value> = fixtures()
        .iter()
        .map(|f| {
            json!({
                "name": f.name,
                "anchor": f.anchor,
                "lattice": f.lattice,
                "omega": f.omega,
                "known_nonframe": f.known_nonframe,
                "parameters": f.parameters,
                "expected": f.expected,
            })
        })
        .collect();
    Ok(Outcome { body: Output::Json(json!({"fixtures": all})), undecided: false })
}

fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!("thread count must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("cannot configure threads")?;
    }
    let format = cli.format;
    let json_only = |name: &str| -> Result<()> {
        if format == Some(Format::Csv) {
            bail!("{name} writes JSON only; CSV is available for verify and envelope");
        }
        Ok(())
    };
    if cli.list_fixtures {
        json_only("--list-fixtures")?;
        return list_fixtures();
    }
    match cli.command.as_ref().ok_or_else(|| anyhow!("no command given (try --help)"))? {
        Command::Analyze(a) => json_only("analyze").and_then(|_| analyze(a)),
        Command::Dual(a) => json_only("dual").and_then(|_| dual(a)),
        Command::FrameCheck(a) => json_only("frame-check").and_then(|_| frame_check(a)),
        Command::Bounds1d(a) => json_only("bounds1d").and_then(|_| bounds1d(a)),
        Command::Verify(a) => verify(a, format.unwrap_or(Format::Json)),
        Command::Envelope(a) => envelope(a, format.unwrap_or(Format::Csv)),
        Command::Special(a) => json_only("special").and_then(|_| special(a)),
    }
}

fn write_output(out: &Option<PathBuf>, body: &Output) -> Result<()> {
    let text = match body {
        Output::Json(v) => serde_json::to_string_pretty(v)? + "\n",
        Output::Csv(s) => s.clone(),
    };
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|o| write_output(&cli.out, &o.body).map(|_| o.undecided)) {
        Ok(true) if cli.strict => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
