//! `swkb`: spectra and self-checks for shape-invariant potentials.
//!
//! Exit status: 0 when everything is within tolerance, 1 on usage or
//! parameter errors, 2 when a report row or a check is flagged.

mod render;

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use render::{CheckLine, Format};
use swkb::exec::Exec;
use swkb::quantization::{action, Method, Rule};
use swkb::solver::{spectrum_report, ReportOptions};
use swkb::tolerance::Tolerances;
use swkb::verification::{self as checks, energy_grid, CheckResult};
use swkb::{Family, PotentialId, PotentialSpec};

#[derive(Parser)]
#[command(name = "swkb", version, about = "SWKB and proper quantization of shape-invariant potentials (hbar = 2m = 1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the catalog potentials.
    List {
        #[arg(long, value_enum)]
        category: Option<Category>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Evaluate y(x), V, W and the Riccati residual at points.
    Eval {
        #[command(flatten)]
        target: Target,
        /// Comma-separated points.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Energy levels from both quantization rules, the closed forms and the oracle.
    Spectrum {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Skip the Numerov oracle column.
        #[arg(long)]
        no_oracle: bool,
        /// Run rows one after another.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run the verification checks.
    Verify {
        /// Check every catalog potential at its reference parameters.
        #[arg(long, conflicts_with_all = ["potential", "params"])]
        all: bool,
        #[arg(long)]
        potential: Option<String>,
        #[arg(long)]
        params: Option<String>,
        #[arg(long, value_enum, default_value = "all")]
        check: CheckKind,
        /// Skip the oracle checks.
        #[arg(long)]
        no_oracle: bool,
        /// Seed for the random moment-formula pairs.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Compare closed-form and quadrature actions on an energy grid.
    Quadcheck {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 20)]
        energies: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Target {
    /// Potential id, e.g. rosen-morse-2.
    #[arg(long)]
    potential: String,
    /// Parameters as NAME=VALUE pairs, e.g. A=2,B=0.5,alpha=1. Defaults to
    /// the reference set.
    #[arg(long)]
    params: Option<String>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance override NAME=VALUE, e.g. oracle_rel=1e-4 (repeatable).
    #[arg(long = "tol")]
    tolerances: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Category {
    First,
    Second,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    All,
    Riccati,
    Spectrum,
    Equivalence,
    ActionMethods,
    Gamma,
    SwkbQuantization,
    Oracle,
    MomentIntegrals,
}

/// Pairs drawn per moment formula.
const MOMENT_PAIRS: usize = 100;

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Outcome = Result<(String, bool), UsageError>;

fn parse_params(text: &str) -> Result<BTreeMap<String, f64>, UsageError> {
    let mut map = BTreeMap::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| UsageError(format!("expected NAME=VALUE, got '{pair}'")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("'{value}' is not a number")))?;
        map.insert(name.trim().to_string(), value);
    }
    Ok(map)
}

fn build_spec(potential: &str, params: Option<&str>) -> Result<PotentialSpec, UsageError> {
    let id: PotentialId = potential.parse()?;
    match params {
        None => Ok(PotentialSpec::reference(id)),
        Some(text) => Ok(PotentialSpec::from_params(id, &parse_params(text)?)?),
    }
}

/// Defaults, then `SWKB_TOL_*` variables, then `--tol` flags.
fn tolerances(flags: &[String]) -> Result<Tolerances, UsageError> {
    let mut given = HashMap::new();
    for flag in flags {
        let (name, value) = flag
            .split_once('=')
            .ok_or_else(|| UsageError(format!("expected NAME=VALUE, got '{flag}'")))?;
        let key = format!("SWKB_TOL_{}", name.trim().to_ascii_uppercase());
        // a name is known if an odd sentinel value changes something
        let probe = Tolerances::default().with_overrides(|k| (k == key).then(|| "0.123456789".into()));
        let valid = value.trim().parse::<f64>().is_ok_and(|v| v.is_finite() && v > 0.0);
        if probe == Tolerances::default() || !valid {
            return Err(UsageError(format!("invalid tolerance '{flag}'")));
        }
        given.insert(key, value.to_string());
    }
    Ok(Tolerances::from_env().with_overrides(|key| given.get(key).cloned()))
}

fn list(category: Option<Category>, format: Format) -> String {
    let ids: Vec<PotentialId> = PotentialId::CATALOG
        .into_iter()
        .filter(|id| match category {
            None => true,
            Some(Category::First) => id.family() == Family::First,
            Some(Category::Second) => id.family() == Family::Second,
        })
        .collect();
    render::catalog(&ids, format)
}

fn eval(target: &Target, xs: &[f64], format: Format) -> Outcome {
    let spec = build_spec(&target.potential, target.params.as_deref())?;
    let mut rows = Vec::with_capacity(xs.len());
    for &x in xs {
        let (y, dy) = spec.variable_map(x)?;
        rows.push(vec![x, y, dy, spec.potential(x)?, spec.superpotential(x)?, spec.riccati_residual(x)?]);
    }
    let header = ["x", "y", "dy_dx", "v", "w", "riccati_residual"];
    let caption = format!("{} at {} points", spec.id().display_name(), xs.len());
    Ok((render::numeric(&caption, &header, &rows, format, &spec), true))
}

fn spectrum(target: &Target, n_max: usize, oracle: bool, exec: Exec, output: &Output) -> Outcome {
    let spec = build_spec(&target.potential, target.params.as_deref())?;
    let opts = ReportOptions { exec, tolerances: tolerances(&output.tolerances)?, oracle };
    let rows = spectrum_report(&spec, n_max, &opts)?;
    let ok = rows.iter().all(|r| !r.flagged);
    Ok((render::spectrum(&spec, &rows, output.format), ok))
}

fn run_check(kind: CheckKind, spec: &PotentialSpec, tol: &Tolerances, oracle: bool) -> Vec<CheckResult> {
    match kind {
        CheckKind::All => checks::verify_potential(spec, tol, oracle),
        CheckKind::Riccati => vec![checks::check_riccati(spec, tol)],
        CheckKind::Spectrum => vec![checks::check_spectrum(spec, tol)],
        CheckKind::Equivalence => vec![checks::check_equivalence(spec, tol)],
        CheckKind::ActionMethods => vec![checks::check_action_methods(spec, tol)],
        CheckKind::Gamma => vec![checks::check_gamma(spec, tol)],
        CheckKind::SwkbQuantization => vec![checks::check_swkb_quantization(spec, tol)],
        CheckKind::Oracle => vec![checks::check_oracle(spec, tol), checks::check_oracle_refinement(spec, tol)],
        CheckKind::MomentIntegrals => Vec::new(),
    }
}

struct VerifyArgs<'a> {
    all: bool,
    potential: Option<&'a str>,
    params: Option<&'a str>,
    check: CheckKind,
    oracle: bool,
    seed: u64,
}

fn verify(args: VerifyArgs<'_>, output: &Output) -> Outcome {
    let tol = tolerances(&output.tolerances)?;
    let specs: Vec<PotentialSpec> = match (args.all, args.potential) {
        (true, _) => PotentialId::CATALOG.iter().map(|&id| PotentialSpec::reference(id)).collect(),
        (false, Some(p)) => vec![build_spec(p, args.params)?],
        (false, None) if args.check == CheckKind::MomentIntegrals => Vec::new(),
        (false, None) => return Err(UsageError("give --all or --potential".into())),
    };
    if args.params.is_some() && args.potential.is_none() {
        return Err(UsageError("--params needs --potential".into()));
    }
    let per_spec = Exec::default().map(&specs, |spec| run_check(args.check, spec, &tol, args.oracle));
    let mut lines: Vec<CheckLine> = specs
        .iter()
        .zip(per_spec)
        .flat_map(|(spec, results)| {
            results.into_iter().map(move |check| CheckLine { potential: Some(spec.id()), check })
        })
        .collect();
    if matches!(args.check, CheckKind::All | CheckKind::MomentIntegrals)
        && (args.all || args.potential.is_none())
    {
        for check in checks::check_moments(MOMENT_PAIRS, args.seed, &tol) {
            lines.push(CheckLine { potential: None, check });
        }
    }
    let ok = lines.iter().all(|l| l.check.passed);
    Ok((render::checks(&lines, output.format), ok))
}

fn quadcheck(target: &Target, energies: usize, output: &Output) -> Outcome {
    let spec = build_spec(&target.potential, target.params.as_deref())?;
    let tol = tolerances(&output.tolerances)?;
    if energies == 0 {
        return Err(UsageError("--energies must be positive".into()));
    }
    let mut rows = Vec::new();
    let mut ok = true;
    for e in energy_grid(&spec, energies)? {
        for (code, rule) in [(0.0, Rule::Swkb), (1.0, Rule::Proper)] {
            let closed = action(&spec, e, rule, Method::ClosedForm)?.value;
            let raw = action(&spec, e, rule, Method::RawQuadrature)?.value;
            let canonical = action(&spec, e, rule, Method::CanonicalQuadrature).map_or(f64::NAN, |a| a.value);
            let diff = (closed - raw).abs().max(if canonical.is_nan() { 0.0 } else { (closed - canonical).abs() });
            ok &= diff <= tol.action_agreement;
            rows.push(vec![e, code, closed, canonical, raw, diff, closed / PI]);
        }
    }
    let header = ["energy", "rule", "closed", "canonical", "raw", "max_diff", "closed_over_pi"];
    let caption = format!("{}: rule 0 = swkb, 1 = proper", spec.id().display_name());
    Ok((render::numeric(&caption, &header, &rows, output.format, &spec), ok))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), UsageError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| UsageError(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, UsageError> {
    let (text, ok, out) = match &cli.command {
        Command::List { category, format } => (list(*category, *format), true, None),
        Command::Eval { target, x, output } => {
            let (text, ok) = eval(target, x, output.format)?;
            (text, ok, output.out.as_ref())
        }
        Command::Spectrum { target, n_max, no_oracle, sequential, output } => {
            let exec = if *sequential { Exec::Sequential } else { Exec::default() };
            let (text, ok) = spectrum(target, *n_max, !no_oracle, exec, output)?;
            (text, ok, output.out.as_ref())
        }
        Command::Verify { all, potential, params, check, no_oracle, seed, output } => {
            let args = VerifyArgs {
                all: *all,
                potential: potential.as_deref(),
                params: params.as_deref(),
                check: *check,
                oracle: !no_oracle,
                seed: *seed,
            };
            let (text, ok) = verify(args, output)?;
            (text, ok, output.out.as_ref())
        }
        Command::Quadcheck { target, energies, output } => {
            let (text, ok) = quadcheck(target, *energies, output)?;
            (text, ok, output.out.as_ref())
        }
    };
    emit(&text, out)?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
