//! Monte-Carlo enactment of the instant-computation procedures.
//!
//! The observable `O` is the projector onto the span of the computational
//! states, so `O = 1` occurs with probability `captured` and then collapses the
//! state onto position `j` with probability `|a_j|² / captured`.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF};

use crate::cycle::{build_alpha_cycle, CycleDoc, CycleSource};
use crate::error::{Error, Result};
use crate::machine::{run, ResultValue, TmSpec};
use crate::rng::stream;
use crate::scalar::Scalar;
use crate::spectral::{halfstep_profile_aperiodic, halfstep_profile_periodic, AmplitudeProfile};
use crate::Alpha;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MeasurementOutcome {
    pub o_value: u8,
    pub index: Option<usize>,
    pub result_valid: bool,
}

impl MeasurementOutcome {
    fn miss() -> Self {
        MeasurementOutcome { o_value: 0, index: None, result_valid: false }
    }
}

/// Inverse-CDF sampler over profile positions.
#[derive(Clone, Debug)]
pub struct OutcomeSampler {
    cumulative: Vec<f64>,
    in_window: Vec<bool>,
}

impl OutcomeSampler {
    pub fn new<T: Scalar>(profile: &AmplitudeProfile<T>, window: &[usize]) -> Result<Self> {
        let mut in_window = vec![false; profile.len()];
        for &j in window {
            *in_window.get_mut(j).ok_or_else(|| {
                Error::Precondition(format!("window index {j} outside profile of length {}", profile.len()))
            })? = true;
        }
        let mut acc = 0.0;
        let cumulative = profile
            .amplitudes()
            .iter()
            .map(|a| {
                acc += a.norm_sqr().to_f64_lossy();
                acc
            })
            .collect();
        Ok(OutcomeSampler { cumulative, in_window })
    }

    pub fn captured(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> MeasurementOutcome {
        let u: f64 = rng.random();
        let j = self.cumulative.partition_point(|c| *c <= u);
        if j == self.cumulative.len() {
            return MeasurementOutcome::miss();
        }
        MeasurementOutcome { o_value: 1, index: Some(j), result_valid: self.in_window[j] }
    }
}

pub fn sample_outcome<T: Scalar, R: Rng + ?Sized>(
    profile: &AmplitudeProfile<T>,
    window: &[usize],
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    Ok(OutcomeSampler::new(profile, window)?.sample(rng))
}

/// What measuring `r` at each profile position yields, and the true result.
#[derive(Clone, Debug, PartialEq)]
pub struct Readout {
    pub values: Vec<ResultValue>,
    pub truth: ResultValue,
}

impl Readout {
    pub fn new(values: Vec<ResultValue>, truth: ResultValue) -> Self {
        Readout { values, truth }
    }

    /// Positions whose readout equals the true result.
    pub fn window(&self) -> Vec<usize> {
        self.values.iter().enumerate().filter(|(_, v)| **v == self.truth).map(|(i, _)| i).collect()
    }
}

/// Stand-ins for the preparation, evolution, measurement and validation times.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EventCounts {
    pub prepare: u64,
    pub evolve: u64,
    pub measure_o: u64,
    pub measure_r: u64,
    pub validate: u64,
}

impl EventCounts {
    fn add(&mut self, o: &EventCounts) {
        self.prepare += o.prepare;
        self.evolve += o.evolve;
        self.measure_o += o.measure_o;
        self.measure_r += o.measure_r;
        self.validate += o.validate;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub run: u64,
    /// Prepare-evolve-measure loops executed.
    pub trials: u64,
    pub o_zero: u64,
    /// Draws with `O = 1` whose readout was not the true result.
    pub invalid_draws: u64,
    pub result: Option<ResultValue>,
    pub valid: Option<bool>,
    pub events: EventCounts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Procedure {
    ErrorFree,
    ErrorBounded { majority: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometricFit {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub procedure: Procedure,
    pub seed: u64,
    pub runs: u64,
    pub max_trials: u64,
    /// `P(O = 1)`.
    pub captured: f64,
    /// Per-trial probability of a valid draw, `ν`.
    pub nu: f64,
    /// `P(valid | O = 1)`.
    pub pi_qc: f64,
    /// Per-draw validity assumed for the error bound.
    pub epsilon: Option<f64>,
    pub error_bound: Option<f64>,
    pub successes: u64,
    pub inconclusive: u64,
    /// Returned results that differ from the true result.
    pub wrong_results: u64,
    pub error_rate: Option<f64>,
    /// Most frequent returned result, smallest value first on ties.
    pub result: Option<ResultValue>,
    pub returned: BTreeMap<String, u64>,
    pub mean_trials: f64,
    pub nu_hat: f64,
    pub pi_hat: Option<f64>,
    pub nu_qc_hat: Option<f64>,
    /// `ν̂ <= π̂ <= ν̂_qc <= 1` on the estimates.
    pub chain_ok: bool,
    pub events: EventCounts,
    pub geometric_fit: Option<GeometricFit>,
    pub trial_histogram: BTreeMap<u64, u64>,
    pub records: Vec<TrialRecord>,
    pub violations: Vec<String>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub runs: u64,
    pub max_trials: u64,
    pub seed: u64,
    /// Keep at most this many per-run records in the report.
    pub keep_records: usize,
}

impl RunOptions {
    pub fn new(runs: u64, seed: u64) -> Self {
        RunOptions { runs, max_trials: 1_000_000, seed, keep_records: 0 }
    }
}

fn validate_options(opts: &RunOptions, sampler: &OutcomeSampler, readout: &Readout) -> Result<()> {
    if opts.runs == 0 || opts.max_trials == 0 {
        return Err(Error::Precondition("runs and max-trials must be at least 1".into()));
    }
    if sampler.len() != readout.values.len() {
        return Err(Error::Precondition(format!(
            "profile has {} positions but readout has {}",
            sampler.len(),
            readout.values.len()
        )));
    }
    Ok(())
}

fn valid_mass(sampler: &OutcomeSampler, readout: &Readout) -> f64 {
    let mut prev = 0.0;
    let mut mass = 0.0;
    for (c, v) in sampler.cumulative.iter().zip(&readout.values) {
        if *v == readout.truth {
            mass += c - prev;
        }
        prev = *c;
    }
    mass
}

fn error_free_run<R: Rng>(
    run_index: u64,
    sampler: &OutcomeSampler,
    readout: &Readout,
    oracle: &(dyn Fn(&ResultValue) -> bool + Sync),
    max_trials: u64,
    rng: &mut R,
) -> TrialRecord {
    let mut rec = TrialRecord {
        run: run_index,
        trials: 0,
        o_zero: 0,
        invalid_draws: 0,
        result: None,
        valid: None,
        events: EventCounts::default(),
    };
    while rec.trials < max_trials {
        rec.trials += 1;
        rec.events.prepare += 1;
        rec.events.evolve += 1;
        rec.events.measure_o += 1;
        let out = sampler.sample(rng);
        let Some(j) = out.index else {
            rec.o_zero += 1;
            continue;
        };
        rec.events.measure_r += 1;
        let r = &readout.values[j];
        rec.events.validate += 1;
        if !oracle(r) {
            rec.invalid_draws += 1;
            continue;
        }
        rec.valid = Some(*r == readout.truth);
        rec.result = Some(r.clone());
        break;
    }
    rec
}

/// Repeats prepare, evolve, measure `O`, measure `r`, validate until the oracle
/// accepts `r` or `max_trials` loops have run.
pub fn run_error_free<T: Scalar>(
    profile: &AmplitudeProfile<T>,
    readout: &Readout,
    oracle: &(dyn Fn(&ResultValue) -> bool + Sync),
    opts: RunOptions,
) -> Result<RunReport> {
    let sampler = OutcomeSampler::new(profile, &readout.window())?;
    validate_options(&opts, &sampler, readout)?;
    let records: Vec<TrialRecord> = (0..opts.runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(opts.seed, "instant/error-free", i);
            error_free_run(i, &sampler, readout, oracle, opts.max_trials, &mut rng)
        })
        .collect();
    let nu = valid_mass(&sampler, readout);
    Ok(summarize(Procedure::ErrorFree, &sampler, nu, None, records, opts))
}

fn plurality(votes: &[ResultValue]) -> ResultValue {
    let mut tally: BTreeMap<&ResultValue, usize> = BTreeMap::new();
    for v in votes {
        *tally.entry(v).or_default() += 1;
    }
    let best = tally.values().copied().max().unwrap_or(0);
    tally.into_iter().find(|(_, n)| *n == best).map(|(v, _)| v.clone()).expect("at least one vote")
}

fn error_bounded_run<R: Rng>(
    run_index: u64,
    sampler: &OutcomeSampler,
    readout: &Readout,
    majority: usize,
    max_trials: u64,
    rng: &mut R,
) -> TrialRecord {
    let mut rec = TrialRecord {
        run: run_index,
        trials: 0,
        o_zero: 0,
        invalid_draws: 0,
        result: None,
        valid: None,
        events: EventCounts::default(),
    };
    let mut votes = Vec::with_capacity(majority);
    while votes.len() < majority && rec.trials < max_trials {
        rec.trials += 1;
        rec.events.prepare += 1;
        rec.events.evolve += 1;
        rec.events.measure_o += 1;
        let Some(j) = sampler.sample(rng).index else {
            rec.o_zero += 1;
            continue;
        };
        rec.events.measure_r += 1;
        let r = &readout.values[j];
        if *r != readout.truth {
            rec.invalid_draws += 1;
        }
        votes.push(r.clone());
    }
    if votes.len() == majority {
        let r = plurality(&votes);
        rec.valid = Some(r == readout.truth);
        rec.result = Some(r);
    }
    rec
}

/// `P(at least ⌈m/2⌉ of m draws invalid)` for per-draw validity `epsilon`.
pub fn majority_error_bound(majority: usize, epsilon: f64) -> Result<f64> {
    if majority.is_multiple_of(2) {
        return Err(Error::Precondition(format!("majority must be odd, got {majority}")));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Precondition(format!("epsilon must lie in [0, 1], got {epsilon}")));
    }
    let valid = Binomial::new(epsilon, majority as u64).map_err(|e| Error::Precondition(e.to_string()))?;
    Ok(valid.cdf((majority / 2) as u64))
}

/// Collects `m` readouts with `O = 1` and returns their plurality value.
/// `epsilon` overrides the per-draw validity used for the error bound.
pub fn run_error_bounded<T: Scalar>(
    profile: &AmplitudeProfile<T>,
    readout: &Readout,
    majority: usize,
    epsilon: Option<f64>,
    opts: RunOptions,
) -> Result<RunReport> {
    if majority.is_multiple_of(2) {
        return Err(Error::Precondition(format!("majority must be odd, got {majority}")));
    }
    let sampler = OutcomeSampler::new(profile, &readout.window())?;
    validate_options(&opts, &sampler, readout)?;
    let records: Vec<TrialRecord> = (0..opts.runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(opts.seed, "instant/error-bounded", i);
            error_bounded_run(i, &sampler, readout, majority, opts.max_trials, &mut rng)
        })
        .collect();
    let nu = valid_mass(&sampler, readout);
    let captured = sampler.captured();
    let eps = epsilon.unwrap_or(if captured > 0.0 { nu / captured } else { 0.0 });
    let bound = majority_error_bound(majority, eps)?;
    Ok(summarize(
        Procedure::ErrorBounded { majority },
        &sampler,
        nu,
        Some((eps, bound)),
        records,
        opts,
    ))
}

fn summarize(
    procedure: Procedure,
    sampler: &OutcomeSampler,
    nu: f64,
    bound: Option<(f64, f64)>,
    records: Vec<TrialRecord>,
    opts: RunOptions,
) -> RunReport {
    let captured = sampler.captured();
    let mut events = EventCounts::default();
    let mut returned: BTreeMap<String, u64> = BTreeMap::new();
    let mut by_value: BTreeMap<ResultValue, u64> = BTreeMap::new();
    let mut trial_histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let (mut successes, mut wrong, mut trials, mut o_zero, mut invalid) = (0u64, 0u64, 0u64, 0u64, 0u64);
    for rec in &records {
        events.add(&rec.events);
        trials += rec.trials;
        o_zero += rec.o_zero;
        invalid += rec.invalid_draws;
        if let Some(r) = &rec.result {
            successes += 1;
            *trial_histogram.entry(rec.trials).or_default() += 1;
            *returned.entry(r.to_string()).or_default() += 1;
            *by_value.entry(r.clone()).or_default() += 1;
            if rec.valid == Some(false) {
                wrong += 1;
            }
        }
    }
    let inconclusive = opts.runs - successes;
    let best = by_value.values().copied().max();
    let result = best.and_then(|b| by_value.iter().find(|(_, n)| **n == b).map(|(v, _)| v.clone()));
    let draws = trials - o_zero;
    let valid_draws = draws - invalid;
    let nu_hat = valid_draws as f64 / trials as f64;
    let pi_hat = (draws > 0).then(|| valid_draws as f64 / draws as f64);
    // every O = 1 outcome is a computational state when Ω = Θ
    let nu_qc_hat = (draws > 0).then_some(1.0);
    let chain_ok = match (pi_hat, nu_qc_hat) {
        (Some(pi), Some(nqc)) => nu_hat <= pi && pi <= nqc && nqc <= 1.0,
        _ => true,
    };

    let mut violations = Vec::new();
    if procedure == Procedure::ErrorFree && wrong > 0 {
        violations.push(format!("{wrong} runs returned a result that is not the true result"));
    }
    if !chain_ok {
        violations.push("estimated ν <= π_qc <= ν_qc <= 1 chain is broken".into());
    }
    let geometric_fit = (procedure == Procedure::ErrorFree && inconclusive == 0)
        .then(|| geometric_fit(&trial_histogram, successes, nu))
        .flatten();
    if let Some(fit) = &geometric_fit {
        if fit.p_value < 0.01 {
            violations.push(format!(
                "trial counts reject the geometric law at the 1% level (p = {:.3e})",
                fit.p_value
            ));
        }
    }
    RunReport {
        procedure,
        seed: opts.seed,
        runs: opts.runs,
        max_trials: opts.max_trials,
        captured,
        nu,
        pi_qc: if captured > 0.0 { nu / captured } else { 0.0 },
        epsilon: bound.map(|b| b.0),
        error_bound: bound.map(|b| b.1),
        successes,
        inconclusive,
        wrong_results: wrong,
        error_rate: (successes > 0).then(|| wrong as f64 / successes as f64),
        result,
        returned,
        mean_trials: if successes > 0 {
            records.iter().filter(|r| r.result.is_some()).map(|r| r.trials).sum::<u64>() as f64 / successes as f64
        } else {
            f64::NAN
        },
        nu_hat,
        pi_hat,
        nu_qc_hat,
        chain_ok,
        events,
        geometric_fit,
        trial_histogram,
        records: records.into_iter().take(opts.keep_records).collect(),
        violations,
    }
}

/// Pearson chi-square of observed trial counts against `Geometric(nu)` on
/// `{1, 2, ...}`, with bins merged from the right until each expects at least 5.
pub fn geometric_fit(histogram: &BTreeMap<u64, u64>, n: u64, nu: f64) -> Option<GeometricFit> {
    if n == 0 || !(nu > 0.0 && nu <= 1.0) {
        return None;
    }
    let nf = n as f64;
    let mut edges = Vec::new();
    let mut k = 1u64;
    loop {
        let tail_from_next = (1.0 - nu).powf(k as f64);
        if nf * tail_from_next < 5.0 || nu == 1.0 {
            break;
        }
        edges.push(k);
        k += 1;
    }
    // bins: {1}, {2}, ..., {K}, {K+1, ...}
    let bins = edges.len() + 1;
    if bins < 2 {
        return None;
    }
    let last = *edges.last().unwrap();
    let mut statistic = 0.0;
    for &k in &edges {
        let expected = nf * nu * (1.0 - nu).powf((k - 1) as f64);
        let observed = histogram.get(&k).copied().unwrap_or(0) as f64;
        statistic += (observed - expected).powi(2) / expected;
    }
    let expected_tail = nf * (1.0 - nu).powf(last as f64);
    let observed_tail = histogram.range(last + 1..).map(|(_, c)| *c).sum::<u64>() as f64;
    statistic += (observed_tail - expected_tail).powi(2) / expected_tail;
    let dof = bins - 1;
    let chi = ChiSquared::new(dof as f64).ok()?;
    Some(GeometricFit { statistic, dof, p_value: 1.0 - chi.cdf(statistic), bins })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Halts { value: String },
    DoesNotHalt,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HaltingDemo {
    pub verdict: Verdict,
    pub budget: usize,
    pub steps: usize,
    pub classically_halted: bool,
    pub cycle: Option<CycleDoc>,
    /// Truncation of the aperiodic profile, when that branch was taken.
    pub truncation: Option<usize>,
    pub report: RunReport,
}

/// Runs the machine classically within `budget`. A halting run is made
/// α-waiting and measured through its minimal periodic profile; otherwise the
/// truncated aperiodic profile is measured, where no position holds a result.
#[allow(clippy::too_many_arguments)]
pub fn halting_demo(
    spec: &TmSpec,
    input: &str,
    budget: usize,
    k_max: usize,
    alpha: Alpha,
    majority: usize,
    opts: RunOptions,
) -> Result<HaltingDemo> {
    let start = spec.load(input)?;
    let trace = run(spec, &start, budget)?;
    let steps = trace.step_count();
    if trace.halted {
        let source = CycleSource::Machine { machine: spec.name().to_string(), input: input.to_string() };
        let cycle = build_alpha_cycle(&trace, alpha, source)?;
        let profile = halfstep_profile_periodic::<f64>(cycle.period())?;
        let readout = Readout::new(cycle.readout(), cycle.result().clone());
        let report = run_error_bounded(&profile, &readout, majority, None, opts)?;
        let verdict = verdict_of(report.result.as_ref());
        Ok(HaltingDemo {
            verdict,
            budget,
            steps,
            classically_halted: true,
            cycle: Some(cycle.to_doc()),
            truncation: None,
            report,
        })
    } else {
        let profile = halfstep_profile_aperiodic::<f64>(k_max)?;
        let readout = Readout::new(vec![ResultValue::pending(); profile.len()], ResultValue::pending());
        let report = run_error_bounded(&profile, &readout, majority, None, opts)?;
        let verdict = verdict_of(report.result.as_ref());
        Ok(HaltingDemo {
            verdict,
            budget,
            steps,
            classically_halted: false,
            cycle: None,
            truncation: Some(k_max),
            report,
        })
    }
}

fn verdict_of(r: Option<&ResultValue>) -> Verdict {
    match r {
        Some(r) if r.is_result() => Verdict::Halts { value: r.v.clone() },
        _ => Verdict::DoesNotHalt,
    }
}

/// Profile of length `p` with probability `pi` spread evenly over `window`
/// and `1 - pi` over the remaining positions.
pub fn synthetic_profile(p: usize, window: &[usize], pi: f64) -> Result<AmplitudeProfile<f64>> {
    if !(0.0..=1.0).contains(&pi) {
        return Err(Error::Precondition(format!("pi must lie in [0, 1], got {pi}")));
    }
    let mut mask = vec![false; p];
    for &j in window {
        *mask.get_mut(j).ok_or_else(|| Error::Precondition(format!("window index {j} outside period {p}")))? = true;
    }
    let inside = window.len();
    let outside = p - inside;
    if (inside == 0 && pi > 0.0) || (outside == 0 && pi < 1.0) {
        return Err(Error::Precondition("window cannot carry the requested probability".into()));
    }
    let amps = mask
        .iter()
        .map(|m| {
            let prob = if *m { pi / inside as f64 } else { (1.0 - pi) / outside as f64 };
            num_complex::Complex::new(prob.sqrt(), 0.0)
        })
        .collect();
    AmplitudeProfile::new(amps, 0)
}
