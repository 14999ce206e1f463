//! Command-line front end.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 method
//! disagreement, 4 verification failure.

mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::coins::{
    coin_from_rational, coin_from_theta, coin_from_turns, decompose_linear_sum, grover_type,
    perm_matrix, Basis, ClassReport, Coin3, CoinDocument, CoinFamily, PermIndex, Scalar, Sign,
};
use crate::error::Error;
use crate::exactnum::{ComplexF, Rational};
use crate::period::{cross_validate, Method, PeriodReport, DEFAULT_QMAX, DEFAULT_TMAX, IDENTITY_TOL};
use crate::walk::{write_distribution_csv, StateVector, WalkSpec};

pub use verify::{run_suite, SuiteOutcome, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "permwalk", version, about = "Permutative coins and lively quantum walk periods")]
struct Cli {
    /// Identity tolerance for brute-force powering.
    #[arg(long, global = true, default_value_t = IDENTITY_TOL)]
    tol: f64,
    /// Largest power tried by brute force; final time for `simulate`.
    #[arg(long, global = true, default_value_t = DEFAULT_TMAX)]
    tmax: u64,
    /// Largest eigenvalue-order denominator accepted as rational.
    #[arg(long, global = true, default_value_t = DEFAULT_QMAX)]
    qmax: u64,
    /// Seed for sampled verification suites.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a coin and print it with its classification and decomposition.
    Coin(CoinArgs),
    /// Period of the walk by the selected methods.
    Period {
        #[command(flatten)]
        coin: CoinArgs,
        #[command(flatten)]
        walk: WalkArgs,
        /// Comma-separated subset of analytic,spectral,bruteforce.
        #[arg(long, default_value = "analytic,spectral,bruteforce")]
        methods: String,
    },
    /// Position distribution over time as CSV.
    Simulate {
        #[command(flatten)]
        coin: CoinArgs,
        #[command(flatten)]
        walk: WalkArgs,
        /// Start vertex for a localized initial state.
        #[arg(long)]
        start: Option<usize>,
        /// Coin state (0, 1 or 2) for a localized initial state.
        #[arg(long)]
        coinstate: Option<usize>,
        /// JSON file `{"amplitudes": [[re, im], ...]}` with the initial state.
        #[arg(long, conflicts_with_all = ["start", "coinstate"])]
        amplitudes: Option<PathBuf>,
    },
    /// Period reports over a grid of angles, cycle lengths and liveliness values.
    Table(TableArgs),
    /// Run sampled invariant suites.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Samples per suite.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct CoinArgs {
    /// A permutation matrix, P1..P6.
    #[arg(long)]
    perm: Option<PermIndex>,
    /// The Grover-type matrix (2/3)J − P.
    #[arg(long)]
    grover: Option<PermIndex>,
    /// With --grover: use P − (2/3)J.
    #[arg(long)]
    negate: bool,
    /// Coin family X, Y, Z or W (with --theta, --theta-frac or --rational).
    #[arg(long)]
    family: Option<CoinFamily>,
    /// Angle in radians.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Angle as a fraction m/q of a full turn, θ = 2πm/q.
    #[arg(long, allow_hyphen_values = true)]
    theta_frac: Option<Rational>,
    /// Parameter r of the exact rational family.
    #[arg(long, allow_hyphen_values = true)]
    rational: Option<Rational>,
    /// Sign choices for --rational, e.g. `+-`.
    #[arg(long, default_value = "++")]
    signs: String,
    /// Coin JSON file.
    #[arg(long)]
    matrix_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct WalkArgs {
    /// Cycle length.
    #[arg(long)]
    n: usize,
    /// Liveliness (jump length of coin state 2).
    #[arg(long, default_value_t = 0)]
    a: usize,
}

#[derive(Args, Debug, Clone)]
struct TableArgs {
    #[arg(long)]
    family: CoinFamily,
    /// Comma-separated angles in radians.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Comma-separated fractions of a full turn, e.g. `1/3,1/4,1/5`.
    #[arg(long)]
    theta_fracs: Option<String>,
    /// Evenly spaced radians `start,stop,count` (stop included).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Every m/q in [0, 1) with gcd(m, q) = 1 and q up to this bound.
    #[arg(long)]
    rational_grid: Option<u32>,
    /// Comma-separated cycle lengths.
    #[arg(long, default_value = "3")]
    n: String,
    /// Comma-separated liveliness values.
    #[arg(long, default_value = "0")]
    a: String,
    #[arg(long, default_value = "analytic,spectral,bruteforce")]
    methods: String,
}

/// Failure of a command, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            // (n, a) come straight from the command line
            Error::InvalidWalk(msg) => Failure::Usage(msg),
            e => Failure::Domain(e),
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

struct Sink {
    path: Option<PathBuf>,
}

impl Sink {
    fn open(&self) -> std::result::Result<Box<dyn Write>, Failure> {
        match &self.path {
            Some(p) => fs::File::create(p)
                .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn Write>)
                .map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
            None => Ok(Box::new(io::BufWriter::new(io::stdout().lock()))),
        }
    }

    fn json<T: Serialize>(&self, value: &T) -> std::result::Result<(), Failure> {
        let mut w = self.open()?;
        let text = serde_json::to_string_pretty(value).expect("documents serialize");
        writeln!(w, "{text}").and_then(|_| w.flush()).map_err(|e| Failure::Io(e.to_string()))
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            EXIT_DOMAIN
        }
    }
}

fn dispatch(cli: Cli) -> CmdResult {
    let sink = Sink { path: cli.output.clone() };
    match &cli.command {
        Command::Coin(args) => cmd_coin(&sink, args),
        Command::Period { coin, walk, methods } => {
            let methods = parse_methods(methods)?;
            let spec = WalkSpec::new(walk.n, walk.a, build_coin(coin)?)?;
            let report = cross_validate(&spec, cli.tmax, cli.qmax, &methods, cli.tol)?;
            sink.json(&PeriodReport::new(&spec, &report))?;
            Ok(if report.agreement { EXIT_OK } else { EXIT_DISAGREEMENT })
        }
        Command::Simulate {
            coin,
            walk,
            start,
            coinstate,
            amplitudes,
        } => {
            let spec = WalkSpec::new(walk.n, walk.a, build_coin(coin)?)?;
            let psi0 = match (amplitudes, start, coinstate) {
                (Some(path), _, _) => read_amplitudes(path, walk.n)?,
                (None, Some(v), Some(c)) => StateVector::localized(walk.n, *c, *v)
                    .map_err(|e| Failure::Usage(e.to_string()))?,
                _ => {
                    return Err(Failure::Usage(
                        "simulate needs --start and --coinstate, or --amplitudes".into(),
                    ))
                }
            };
            let mut w = sink.open()?;
            write_distribution_csv(&mut w, &spec, &psi0, cli.tmax)?;
            w.flush().map_err(|e| Failure::Io(e.to_string()))?;
            Ok(EXIT_OK)
        }
        Command::Table(args) => cmd_table(&sink, args, &cli),
        Command::Verify { suite, samples } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(Failure::Usage(format!(
                    "unknown suite `{suite}` (expected one of {} or all)",
                    SUITES.join(", ")
                )));
            };
            let mut w = sink.open()?;
            let mut ok = true;
            for name in names {
                let out = run_suite(name, cli.seed, *samples, cli.tmax, cli.qmax)?;
                ok &= out.passed == out.total;
                writeln!(
                    w,
                    "{name}: {}/{} passed{}",
                    out.passed,
                    out.total,
                    out.first_failure.as_deref().map_or(String::new(), |f| format!(" (first failure: {f})"))
                )
                .map_err(|e| Failure::Io(e.to_string()))?;
            }
            writeln!(w, "{}", if ok { "PASS" } else { "FAIL" }).map_err(|e| Failure::Io(e.to_string()))?;
            w.flush().map_err(|e| Failure::Io(e.to_string()))?;
            Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}

fn parse_methods(s: &str) -> std::result::Result<Vec<Method>, Failure> {
    s.split(',')
        .map(|m| match m.trim() {
            "analytic" => Ok(Method::Analytic),
            "spectral" => Ok(Method::Spectral),
            "bruteforce" => Ok(Method::BruteForce),
            other => Err(Failure::Usage(format!("unknown method `{other}`"))),
        })
        .collect()
}

fn build_coin(args: &CoinArgs) -> std::result::Result<Coin3, Failure> {
    let selections = [
        args.perm.is_some(),
        args.grover.is_some(),
        args.family.is_some(),
        args.matrix_file.is_some(),
    ];
    if selections.iter().filter(|&&s| s).count() != 1 {
        return Err(Failure::Usage(
            "choose exactly one of --perm, --grover, --family, --matrix-file".into(),
        ));
    }
    if args.negate && args.grover.is_none() {
        return Err(Failure::Usage("--negate only applies to --grover".into()));
    }
    let angle_args = [args.theta.is_some(), args.theta_frac.is_some(), args.rational.is_some()];
    let angle_count = angle_args.iter().filter(|&&s| s).count();
    if args.family.is_none() && angle_count > 0 {
        return Err(Failure::Usage("--theta, --theta-frac and --rational need --family".into()));
    }
    if let Some(p) = args.perm {
        return Ok(perm_matrix(p));
    }
    if let Some(p) = args.grover {
        return Ok(grover_type(p, args.negate));
    }
    if let Some(path) = &args.matrix_file {
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        return Ok(CoinDocument::parse(&text)?.to_coin()?);
    }
    let family = args.family.expect("one selection");
    if angle_count != 1 {
        return Err(Failure::Usage(
            "--family needs exactly one of --theta, --theta-frac, --rational".into(),
        ));
    }
    if let Some(theta) = args.theta {
        if !theta.is_finite() {
            return Err(Failure::Usage("--theta must be finite".into()));
        }
        return Ok(coin_from_theta(family, theta));
    }
    if let Some(t) = args.theta_frac {
        return Ok(coin_from_turns(family, t));
    }
    let r = args.rational.expect("one angle argument");
    let (s1, s2) = Sign::parse_pair(&args.signs).map_err(Failure::Usage)?;
    Ok(coin_from_rational(family, r, s1, s2)?)
}

fn scalar_json(s: Scalar) -> Value {
    match s {
        Scalar::Exact(r) => json!(r.to_string()),
        Scalar::Float(c) if c.im == 0.0 => json!(c.re),
        Scalar::Float(c) => json!([c.re, c.im]),
    }
}

fn class_json(r: &ClassReport) -> Value {
    json!({
        "family": r.family.to_string(),
        "params": {"x": scalar_json(r.params[0]), "y": scalar_json(r.params[1]), "z": scalar_json(r.params[2])},
        "is_permutation": r.is_permutation,
        "is_grover_type": r.is_grover_type,
        "is_negated_permutation": r.is_negated_permutation,
        "is_negated_grover_type": r.is_negated_grover_type,
        "is_rational": r.is_rational,
        "det": r.det,
    })
}

fn cmd_coin(sink: &Sink, args: &CoinArgs) -> CmdResult {
    let coin = build_coin(args)?;
    let report = coin.classify()?;
    let dec = decompose_linear_sum(coin.matrix())?;
    let basis = match dec.basis {
        Basis::Cyclic => "cyclic",
        Basis::Transposition => "transposition",
    };
    let doc = json!({
        "coin": CoinDocument::from_coin(&coin),
        "classification": class_json(&report),
        "decomposition": {
            "basis": basis,
            "x": scalar_json(dec.x),
            "y": scalar_json(dec.y),
            "z": scalar_json(dec.z),
        },
    });
    sink.json(&doc)?;
    Ok(EXIT_OK)
}

fn read_amplitudes(path: &Path, n: usize) -> std::result::Result<StateVector, Failure> {
    #[derive(serde::Deserialize)]
    struct AmplitudeFile {
        amplitudes: Vec<[f64; 2]>,
    }
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let file: AmplitudeFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let amps = file.amplitudes.iter().map(|[re, im]| ComplexF::new(*re, *im)).collect();
    Ok(StateVector::new(n, amps)?)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> std::result::Result<Vec<T>, Failure> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("bad {what} `{}`", p.trim())))
        })
        .collect()
}

/// One grid angle: exact turns, or radians.
#[derive(Clone, Copy, Debug)]
enum GridAngle {
    Turns(Rational),
    Radians(f64),
}

fn table_angles(args: &TableArgs) -> std::result::Result<Vec<GridAngle>, Failure> {
    let mut out = Vec::new();
    if let Some(list) = &args.theta {
        out.extend(parse_list::<f64>(list, "angle")?.into_iter().map(GridAngle::Radians));
    }
    if let Some(list) = &args.theta_fracs {
        out.extend(parse_list::<Rational>(list, "fraction")?.into_iter().map(GridAngle::Turns));
    }
    if let Some(grid) = &args.grid {
        let parts: Vec<f64> = parse_list(grid, "grid value")?;
        let [start, stop, count] = parts[..] else {
            return Err(Failure::Usage("--grid needs start,stop,count".into()));
        };
        if count < 1.0 || count.fract() != 0.0 {
            return Err(Failure::Usage("--grid count must be a positive integer".into()));
        }
        let count = count as usize;
        for i in 0..count {
            let t = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
            out.push(GridAngle::Radians(start + (stop - start) * t));
        }
    }
    if let Some(qmax) = args.rational_grid {
        use num_integer::Integer;
        for q in 1..=qmax as i128 {
            for m in 0..q {
                if m.gcd(&q) == 1 {
                    out.push(GridAngle::Turns(Rational::new(m, q).expect("q > 0")));
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage(
            "table needs --theta, --theta-fracs, --grid or --rational-grid".into(),
        ));
    }
    Ok(out)
}

fn cmd_table(sink: &Sink, args: &TableArgs, cli: &Cli) -> CmdResult {
    let methods = parse_methods(&args.methods)?;
    let angles = table_angles(args)?;
    let ns: Vec<usize> = parse_list(&args.n, "n")?;
    let as_: Vec<usize> = parse_list(&args.a, "a")?;
    let mut points = Vec::new();
    for &angle in &angles {
        for &n in &ns {
            for &a in &as_ {
                if n < 2 || a > n / 2 {
                    return Err(Failure::Usage(format!("need n >= 2 and a <= n/2, got n = {n}, a = {a}")));
                }
                points.push((angle, n, a));
            }
        }
    }
    let family = args.family;
    let reports = points
        .par_iter()
        .map(|&(angle, n, a)| {
            let coin = match angle {
                GridAngle::Turns(t) => coin_from_turns(family, t),
                GridAngle::Radians(theta) => coin_from_theta(family, theta),
            };
            let spec = WalkSpec::new(n, a, coin)?;
            let report = cross_validate(&spec, cli.tmax, cli.qmax, &methods, cli.tol)?;
            Ok(PeriodReport::new(&spec, &report))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    sink.json(&reports)?;
    Ok(if reports.iter().all(|r| r.agreement) {
        EXIT_OK
    } else {
        EXIT_DISAGREEMENT
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin_args(extra: &[&str]) -> std::result::Result<Coin3, Failure> {
        let mut argv = vec!["permwalk", "coin"];
        argv.extend_from_slice(extra);
        let cli = Cli::try_parse_from(argv).unwrap();
        match cli.command {
            Command::Coin(a) => build_coin(&a),
            _ => unreachable!(),
        }
    }

    #[test]
    fn coin_selection_is_exclusive() {
        assert!(matches!(coin_args(&["--perm", "P1", "--grover", "P2"]), Err(Failure::Usage(_))));
        assert!(matches!(coin_args(&[]), Err(Failure::Usage(_))));
        assert!(matches!(coin_args(&["--family", "X"]), Err(Failure::Usage(_))));
        assert!(matches!(coin_args(&["--theta", "1"]), Err(Failure::Usage(_))));
        assert!(coin_args(&["--family", "X", "--theta", "-0.5"]).is_ok());
    }

    #[test]
    fn theta_frac_keeps_exact_turns() {
        let c = coin_args(&["--family", "Y", "--theta-frac", "7/5"]).unwrap();
        assert_eq!(c.turns(), Some(Rational::new(2, 5).unwrap()));
    }

    #[test]
    fn rational_grid_enumerates_reduced_fractions() {
        let cli = Cli::try_parse_from(["permwalk", "table", "--family", "X", "--rational-grid", "4"]).unwrap();
        let Command::Table(args) = cli.command else { unreachable!() };
        // 0/1, 1/2, 1/3, 2/3, 1/4, 3/4
        assert_eq!(table_angles(&args).unwrap().len(), 6);
    }

    #[test]
    fn unknown_methods_are_usage_errors() {
        assert!(matches!(parse_methods("analytic,guess"), Err(Failure::Usage(_))));
    }
}
