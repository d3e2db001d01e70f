//! Subcommands of the `halfcycle` binary. Each one renders its report to a
//! string so that identical inputs and seeds give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use halfcycle_core::complexity::{check_lower_bound, mean_abs_phase, time_grid, zero_count};
use halfcycle_core::cycle::LabeledCycle;
use halfcycle_core::ensemble::{continuous_experiment, moment_experiment, Density};
use halfcycle_core::packing::{default_exponents, pack_spectrum, IntervalPolicy};
use halfcycle_core::runner::{
    halting_demo, run_error_bounded, run_error_free, Readout, RunOptions, RunReport,
};
use halfcycle_core::schrodinger::{
    chirped_gaussian_pair, identical_gaussian_pair, obstruction_certificate, GridFunctionSet,
};
use halfcycle_core::{
    build_alpha_cycle, halfstep_profile_aperiodic, halfstep_profile_periodic, minimal_periodic_spectrum, nu_of, run,
    verify_cycle, Alpha, CycleSource, OrbitSpectrum, Profile, TmSpec,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "halfcycle", version, about = "Half-cycle simulation of periodic Turing-machine implementations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Root seed; drawn from system entropy and printed when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Half-cycle amplitude table of a minimal implementation.
    Profile(ProfileArgs),
    /// Build and verify an α-waiting cycle.
    Cycle(CycleArgs),
    /// Run the instant-computation procedures.
    Instant(InstantArgs),
    /// Success-probability statistics of random implementations.
    Stats(StatsArgs),
    /// Pack instance spectra into disjoint eigenphase sets.
    Pack(PackArgs),
    /// Look for an orbit obstruction among grid states.
    Schrodinger(SchrodingerArgs),
    /// Check the physical-complexity lower bound and count overlap zeros.
    Complexity(ComplexityArgs),
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[arg(long, conflicts_with = "aperiodic")]
    pub period: Option<usize>,
    #[arg(long)]
    pub aperiodic: bool,
    /// Truncation of the aperiodic profile.
    #[arg(long = "K", default_value_t = 1000)]
    pub k: usize,
}

#[derive(Args, Debug)]
pub struct CycleArgs {
    /// Machine file in the JSON machine format.
    #[arg(long, conflicts_with = "period")]
    pub machine: Option<PathBuf>,
    #[arg(long, default_value = "")]
    pub input: String,
    /// Window fraction, as `a/b` or a decimal.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Synthetic cycle of this period, centred window.
    #[arg(long)]
    pub period: Option<usize>,
    /// Step budget for the classical run.
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProcedureArg {
    Halting,
    ErrorFree,
    ErrorBounded,
}

#[derive(Args, Debug)]
pub struct InstantArgs {
    #[arg(long)]
    pub machine: PathBuf,
    #[arg(long, default_value = "")]
    pub input: String,
    #[arg(long, default_value = "1/2")]
    pub alpha: String,
    #[arg(long, value_enum, default_value_t = ProcedureArg::Halting)]
    pub procedure: ProcedureArg,
    /// Independent runs of the procedure.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 15)]
    pub majority: usize,
    /// Step budget for the classical run.
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    /// Truncation of the aperiodic profile used when the budget runs out.
    #[arg(long = "K", default_value_t = 1000)]
    pub k: usize,
    /// Per-draw validity assumed for the majority bound.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_trials: u64,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long = "p", value_delimiter = ',', default_value = "64,256,1024")]
    pub p: Vec<usize>,
    #[arg(long, default_value = "uniform")]
    pub density: String,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Chebyshev multiplier, greater than 1.
    #[arg(long, default_value_t = 2.0)]
    pub delta: f64,
    /// Sample the continuous spectrum on this many cells instead.
    #[arg(long)]
    pub cells: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Signed,
    NonNegative,
}

#[derive(Args, Debug)]
pub struct PackArgs {
    /// Largest input size.
    #[arg(long = "n", default_value_t = 4)]
    pub n: u32,
    /// Exponents `ν_0, ..., ν_n`; defaults to `ν_n = n`.
    #[arg(long, value_delimiter = ',')]
    pub nu: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value_t = PolicyArg::Signed)]
    pub policy: PolicyArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PairArg {
    Chirped,
    Identical,
}

#[derive(Args, Debug)]
pub struct SchrodingerArgs {
    /// CSV with columns `x, re_0, im_0, re_1, im_1, ...`.
    #[arg(long, conflicts_with = "pair")]
    pub input: Option<PathBuf>,
    /// Built-in Gaussian pair.
    #[arg(long, value_enum)]
    pub pair: Option<PairArg>,
    /// Half-width of the built-in grid.
    #[arg(long = "L", default_value_t = 8.0)]
    pub l: f64,
    /// Points of the built-in grid.
    #[arg(long, default_value_t = 1025)]
    pub grid: usize,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Write the states as CSV instead of testing them.
    #[arg(long)]
    pub emit: bool,
}

#[derive(Args, Debug)]
pub struct ComplexityArgs {
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["aperiodic", "pack"])]
    pub period: Option<Vec<usize>>,
    #[arg(long)]
    pub aperiodic: bool,
    /// Every instance spectrum packed up to this size.
    #[arg(long)]
    pub pack: Option<u32>,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 10_000)]
    pub points: usize,
    /// Samples per cycle for the zero count.
    #[arg(long, default_value_t = 1024)]
    pub resolution: usize,
}

/// A rendered report and the invariant violations it records.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: String,
    pub violations: Vec<String>,
}

impl Output {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn resolve_seed(seed: Option<u64>) -> (u64, bool) {
    match seed {
        Some(s) => (s, false),
        None => (rand::random(), true),
    }
}

pub fn execute(cli: &Cli, seed: u64) -> Result<Output> {
    let f = cli.format;
    match &cli.command {
        Command::Profile(a) => profile(a, f, seed),
        Command::Cycle(a) => cycle(a, f, seed),
        Command::Instant(a) => instant(a, f, seed),
        Command::Stats(a) => stats(a, f, seed),
        Command::Pack(a) => pack(a, f, seed),
        Command::Schrodinger(a) => schrodinger(a, f, seed),
        Command::Complexity(a) => complexity(a, f, seed),
    }
}

/// Seventeen significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn json_body<S: Serialize>(value: &S) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_alpha(text: &str) -> Result<Alpha> {
    let text = text.trim();
    let alpha = if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            bail!("cannot read alpha {text:?}");
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().with_context(|| format!("cannot read alpha {text:?}"))? };
        Alpha::new(int * den + frac.parse::<u64>()?, den)
    } else {
        text.parse::<Alpha>().map_err(|e| anyhow::anyhow!("cannot read alpha {text:?}: {e}"))?
    };
    if *alpha.numer() == 0 || alpha >= Alpha::from_integer(1) {
        bail!("alpha must lie strictly between 0 and 1, got {alpha}");
    }
    Ok(alpha)
}

pub fn load_machine(path: &Path) -> Result<TmSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    TmSpec::from_json(&text).with_context(|| format!("in machine file {}", path.display()))
}

fn profile(a: &ProfileArgs, format: Format, seed: u64) -> Result<Output> {
    let (kind, prof): (&str, Profile) = match (a.period, a.aperiodic) {
        (Some(p), false) => {
            if p % 2 != 0 || p == 0 {
                bail!("period must be even: a minimal periodic implementation alternates mod-4π branches, got {p}");
            }
            ("periodic", halfstep_profile_periodic(p)?)
        }
        (None, true) => ("aperiodic", halfstep_profile_aperiodic(a.k)?),
        _ => bail!("give either --period or --aperiodic"),
    };
    let probs = prof.probabilities();
    let peak = prof.peak().map(|(i, m)| (prof.label(i), m));
    let body = match format {
        Format::Csv => csv_table(
            &["j", "re", "im", "abs", "prob"],
            prof.amplitudes().iter().zip(&probs).enumerate().map(|(i, (z, pr))| {
                vec![prof.label(i).to_string(), num(z.re), num(z.im), num(z.norm()), num(*pr)]
            }),
        )?,
        Format::Json => {
            let rows: Vec<Value> = prof
                .amplitudes()
                .iter()
                .zip(&probs)
                .enumerate()
                .map(|(i, (z, pr))| json!({"j": prof.label(i), "re": z.re, "im": z.im, "abs": z.norm(), "prob": pr}))
                .collect();
            json_body(&json!({
                "seed": seed,
                "kind": kind,
                "period": a.period,
                "K": a.aperiodic.then_some(a.k),
                "tau": prof.tau(),
                "captured": prof.captured(),
                "uncaptured": 1.0 - prof.captured(),
                "peak": peak.map(|(j, m)| json!({"j": j, "abs": m})),
                "rows": rows,
            }))?
        }
    };
    Ok(Output { body, violations: Vec::new() })
}

fn cycle(a: &CycleArgs, format: Format, seed: u64) -> Result<Output> {
    let alpha = a.alpha.as_deref().map(parse_alpha).transpose()?;
    let (cyc, spec) = match (&a.machine, a.period) {
        (Some(path), None) => {
            let spec = load_machine(path)?;
            let trace = run(&spec, &spec.load(&a.input)?, a.budget)?;
            if !trace.halted {
                bail!("machine {} did not halt on {:?} within {} steps", spec.name(), a.input, a.budget);
            }
            let source = CycleSource::Machine { machine: spec.name().to_string(), input: a.input.clone() };
            let alpha = alpha.unwrap_or_else(|| Alpha::new(1, 2));
            (build_alpha_cycle(&trace, alpha, source)?, Some(spec))
        }
        (None, Some(p)) => match alpha {
            Some(alpha) => (LabeledCycle::centered(p, alpha)?, None),
            None => (LabeledCycle::centered_for_period(p)?, None),
        },
        _ => bail!("give either --machine or --period"),
    };
    let report = verify_cycle(&cyc, spec.as_ref());
    let nu = nu_of(&halfstep_profile_periodic::<f64>(cyc.period())?, &cyc.window_indices())?;
    let body = match format {
        Format::Csv => {
            let readout = cyc.readout();
            csv_table(
                &["i", "in_window", "readout"],
                cyc.labels()
                    .iter()
                    .zip(&readout)
                    .enumerate()
                    .map(|(i, (l, r))| vec![i.to_string(), l.to_string(), r.to_string()]),
            )?
        }
        Format::Json => json_body(&json!({
            "seed": seed,
            "cycle": cyc.to_doc(),
            "nu": nu,
            "verification": report,
        }))?,
    };
    Ok(Output { body, violations: report.violations })
}

fn run_summary_csv(seed: u64, r: &RunReport, verdict: &str) -> Result<String> {
    csv_table(
        &[
            "seed", "procedure", "verdict", "runs", "nu", "captured", "error_bound", "successes", "inconclusive",
            "wrong_results", "error_rate", "mean_trials", "result",
        ],
        [vec![
            seed.to_string(),
            serde_json::to_value(r.procedure)?["kind"].as_str().unwrap_or_default().to_string(),
            verdict.to_string(),
            r.runs.to_string(),
            num(r.nu),
            num(r.captured),
            opt_num(r.error_bound),
            r.successes.to_string(),
            r.inconclusive.to_string(),
            r.wrong_results.to_string(),
            opt_num(r.error_rate),
            num(r.mean_trials),
            r.result.as_ref().map(|v| v.to_string()).unwrap_or_default(),
        ]],
    )
}

fn instant(a: &InstantArgs, format: Format, seed: u64) -> Result<Output> {
    let spec = load_machine(&a.machine)?;
    let alpha = parse_alpha(&a.alpha)?;
    let mut opts = RunOptions::new(a.trials, seed);
    opts.max_trials = a.max_trials;
    if a.procedure == ProcedureArg::Halting {
        let demo = halting_demo(&spec, &a.input, a.budget, a.k, alpha, a.majority, opts)?;
        let verdict = match &demo.verdict {
            halfcycle_core::runner::Verdict::Halts { value } => format!("halts:{value}"),
            halfcycle_core::runner::Verdict::DoesNotHalt => "does-not-halt".to_string(),
        };
        let body = match format {
            Format::Csv => run_summary_csv(seed, &demo.report, &verdict)?,
            Format::Json => json_body(&json!({"seed": seed, "machine": spec.name(), "input": a.input, "demo": demo}))?,
        };
        return Ok(Output { body, violations: demo.report.violations.clone() });
    }
    let trace = run(&spec, &spec.load(&a.input)?, a.budget)?;
    if !trace.halted {
        bail!("machine {} did not halt on {:?} within {} steps", spec.name(), a.input, a.budget);
    }
    let source = CycleSource::Machine { machine: spec.name().to_string(), input: a.input.clone() };
    let cyc = build_alpha_cycle(&trace, alpha, source)?;
    let profile = halfstep_profile_periodic::<f64>(cyc.period())?;
    let readout = Readout::new(cyc.readout(), cyc.result().clone());
    let report = match a.procedure {
        ProcedureArg::ErrorFree => run_error_free(&profile, &readout, &|r| r.is_result(), opts)?,
        _ => run_error_bounded(&profile, &readout, a.majority, a.epsilon, opts)?,
    };
    let body = match format {
        Format::Csv => run_summary_csv(seed, &report, "")?,
        Format::Json => json_body(&json!({
            "seed": seed,
            "machine": spec.name(),
            "input": a.input,
            "cycle": cyc.to_doc(),
            "report": report,
        }))?,
    };
    Ok(Output { body, violations: report.violations })
}

fn stats(a: &StatsArgs, format: Format, seed: u64) -> Result<Output> {
    let density: Density = a.density.parse()?;
    if let Some(cells) = a.cells {
        let rep = continuous_experiment::<f64>(cells, density, a.trials, seed)?;
        let body = match format {
            Format::Csv => csv_table(
                &["seed", "density", "cells", "trials", "m2", "expected_direct", "direct_mean", "direct_stderr", "closed_form_mean", "closed_form_stderr"],
                [vec![
                    seed.to_string(),
                    density.to_string(),
                    cells.to_string(),
                    a.trials.to_string(),
                    num(rep.m2),
                    num(rep.expected_direct),
                    num(rep.direct.mean),
                    opt_num(rep.direct.stderr),
                    num(rep.closed_form.mean),
                    opt_num(rep.closed_form.stderr),
                ]],
            )?,
            Format::Json => json_body(&rep)?,
        };
        return Ok(Output { body, violations: Vec::new() });
    }
    let rep = moment_experiment::<f64>(&a.p, density, a.trials, a.delta, seed)?;
    let body = match format {
        Format::Csv => csv_table(
            &[
                "seed", "p", "density", "trials", "window_len", "alpha", "expected_mean", "mean", "stderr", "var",
                "var_p", "mean_within_3se", "chebyshev_fraction",
            ],
            rep.rows.iter().map(|r| {
                vec![
                    seed.to_string(),
                    r.p.to_string(),
                    r.density.to_string(),
                    r.trials.to_string(),
                    r.window_len.to_string(),
                    num(r.alpha),
                    num(r.expected_mean),
                    num(r.mean),
                    opt_num(r.stderr),
                    opt_num(r.var),
                    opt_num(r.var_p),
                    r.mean_within_3se.map(|b| b.to_string()).unwrap_or_default(),
                    opt_num(r.chebyshev_fraction),
                ]
            }),
        )?,
        Format::Json => json_body(&rep)?,
    };
    Ok(Output { body, violations: rep.violations })
}

fn pack(a: &PackArgs, format: Format, seed: u64) -> Result<Output> {
    let nu = a.nu.clone().unwrap_or_else(|| default_exponents(a.n));
    let policy = match a.policy {
        PolicyArg::Signed => IntervalPolicy::Signed,
        PolicyArg::NonNegative => IntervalPolicy::NonNegative,
    };
    let rep = pack_spectrum(a.n, &nu, policy)?;
    let body = match format {
        Format::Csv => csv_table(
            &["size", "instance", "period", "energy", "energy_over_pi"],
            rep.instances.iter().map(|s| {
                vec![
                    s.size.to_string(),
                    s.instance.to_string(),
                    s.period().to_string(),
                    num(s.energy),
                    num(s.energy / std::f64::consts::PI),
                ]
            }),
        )?,
        Format::Json => json_body(&json!({"seed": seed, "report": rep}))?,
    };
    Ok(Output { body, violations: rep.violations })
}

fn schrodinger(a: &SchrodingerArgs, format: Format, seed: u64) -> Result<Output> {
    let set = match (&a.input, a.pair) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            GridFunctionSet::from_csv(&text).with_context(|| format!("in grid file {}", path.display()))?
        }
        (None, Some(PairArg::Chirped)) => chirped_gaussian_pair(a.l, a.grid)?,
        (None, Some(PairArg::Identical)) => identical_gaussian_pair(a.l, a.grid)?,
        _ => bail!("give either --input or --pair"),
    };
    if a.emit {
        return Ok(Output { body: set.to_csv(), violations: Vec::new() });
    }
    let cert = obstruction_certificate(&set, a.tolerance)?;
    let coarse = if set.grid().cells % 2 == 1 && set.grid().cells / 2 + 1 >= halfcycle_core::schrodinger::MIN_GRID {
        Some(obstruction_certificate(&set.coarsened()?, a.tolerance)?)
    } else {
        None
    };
    let kinetic: Vec<f64> = (0..set.functions().len()).map(|k| set.kinetic(k)).collect();
    let body = match format {
        Format::Csv => {
            let row = |grid: usize, c: &halfcycle_core::schrodinger::Certificate| {
                let (outcome, coeffs, tol, nullity) = match c {
                    halfcycle_core::schrodinger::Certificate::Obstruction { coefficients, tolerance, nullity, .. } => {
                        ("obstruction", coefficients.iter().map(|x| num(*x)).collect::<Vec<_>>().join(";"), Some(*tolerance), *nullity)
                    }
                    halfcycle_core::schrodinger::Certificate::Absence { tolerance, nullity, .. } => {
                        ("absence", String::new(), *tolerance, *nullity)
                    }
                };
                vec![
                    seed.to_string(),
                    grid.to_string(),
                    outcome.to_string(),
                    opt_num(c.kinetic_mismatch()),
                    opt_num(tol),
                    nullity.to_string(),
                    coeffs,
                ]
            };
            let mut rows = vec![row(set.grid().cells, &cert)];
            if let Some(c) = &coarse {
                rows.push(row(set.grid().cells / 2 + 1, c));
            }
            csv_table(&["seed", "grid", "outcome", "kinetic_mismatch", "tolerance", "nullity", "coefficients"], rows)?
        }
        Format::Json => json_body(&json!({
            "seed": seed,
            "grid": set.grid(),
            "kinetic": kinetic,
            "certificate": cert,
            "coarse_certificate": coarse,
        }))?,
    };
    Ok(Output { body, violations: Vec::new() })
}

fn complexity(a: &ComplexityArgs, format: Format, seed: u64) -> Result<Output> {
    let mut spectra: Vec<(String, OrbitSpectrum<f64>)> = Vec::new();
    if let Some(ps) = &a.period {
        for &p in ps {
            spectra.push((format!("minimal-{p}"), minimal_periodic_spectrum(p)?));
        }
    }
    if a.aperiodic {
        spectra.push(("aperiodic".into(), OrbitSpectrum::aperiodic()));
    }
    if let Some(n) = a.pack {
        let rep = pack_spectrum(n, &default_exponents(n), IntervalPolicy::Signed)?;
        for inst in &rep.instances {
            spectra.push((format!("packed-{}-{}", inst.size, inst.instance), inst.spectrum()?));
        }
    }
    if spectra.is_empty() {
        bail!("give --period, --aperiodic or --pack");
    }
    let grid = time_grid(a.t_max, a.points);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for (label, spec) in &spectra {
        let rep = check_lower_bound(spec, &grid);
        let zeros = zero_count(spec, a.resolution)?;
        for v in &rep.violations {
            violations.push(format!(
                "{label}: distance² {} exceeds 2C = {} at t = {}",
                v.distance_sq, v.twice_complexity, v.t
            ));
        }
        rows.push((label.clone(), mean_abs_phase(spec), rep.points, rep.max_ratio, rep.violations.len(), zeros));
    }
    let body = match format {
        Format::Csv => csv_table(
            &["spectrum", "mean_abs_phase", "points", "max_ratio", "violations", "zero_count"],
            rows.iter().map(|(l, m, n, r, v, z)| vec![l.clone(), num(*m), n.to_string(), num(*r), v.to_string(), z.to_string()]),
        )?,
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|(l, m, n, r, v, z)| {
                    json!({"spectrum": l, "mean_abs_phase": m, "points": n, "max_ratio": r, "violations": v, "zero_count": z})
                })
                .collect();
            json_body(&json!({"seed": seed, "t_max": a.t_max, "spectra": list, "violations": violations}))?
        }
    };
    Ok(Output { body, violations })
}

/// Writes `body` to `out`, or to stdout.
pub fn emit(body: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body).with_context(|| format!("cannot write {}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

/// One line per violation, for stderr.
pub fn describe_violations(v: &[String]) -> String {
    let mut s = String::new();
    for line in v {
        let _ = writeln!(s, "violation: {line}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_forms() {
        assert_eq!(parse_alpha("3/4").unwrap(), Alpha::new(3, 4));
        assert_eq!(parse_alpha("0.75").unwrap(), Alpha::new(3, 4));
        assert_eq!(parse_alpha(".5").unwrap(), Alpha::new(1, 2));
        for bad in ["0", "1", "5/4", "0.", "x", "1.5", "-0.5"] {
            assert!(parse_alpha(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(num(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn given_seed_is_kept() {
        assert_eq!(resolve_seed(Some(9)), (9, false));
        assert!(resolve_seed(None).1);
    }
}
