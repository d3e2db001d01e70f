//! α-waiting cycles built from halting traces.
//!
//! A halting trace `c_0 .. c_s` is turned into a closed walk of period
//! `p = 2s + 2w`: the forward run, `w` waiting steps that count a register up,
//! `w` unwinding steps that count it back down, and the reversed run back to
//! `c_0`. The `2w` waiting and unwinding positions hold the result on the tape
//! and form the result window `[s, s + 2w)`, which always contains `p / 2`.

use std::ops::Range;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::{step, Configuration, ResultValue, TmSpec, Trace};
use crate::scalar::Scalar;

/// Upper bound on the period a cycle may be built with.
pub const DEFAULT_PERIOD_CAP: usize = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CycleSource {
    Machine { machine: String, input: String },
    /// Period and window chosen directly, without an underlying machine run.
    Synthetic,
    Aperiodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Forward,
    Wait,
    Unwind,
    Reverse,
}

/// One position of the cycle: where the machine is and what the step counter holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleState<'a> {
    pub phase: Phase,
    pub config: &'a Configuration,
    pub counter: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledCycle {
    p: usize,
    labels: Vec<bool>,
    alpha: Ratio<u64>,
    source: CycleSource,
    forward_steps: Option<usize>,
    waiting_steps: Option<usize>,
    result: ResultValue,
    /// `c_0 ..= c_s` of the underlying run, when the cycle came from a trace.
    history: Option<Vec<Configuration>>,
}

fn check_alpha(alpha: Ratio<u64>) -> Result<()> {
    if *alpha.numer() == 0 || alpha >= Ratio::from_integer(1) {
        return Err(Error::Precondition(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

impl LabeledCycle {
    /// Builds a cycle from explicit labels. No invariant is enforced; use
    /// [`verify_cycle`] to inspect the result.
    pub fn from_labels(labels: Vec<bool>, alpha: Ratio<u64>, source: CycleSource, result: ResultValue) -> Self {
        LabeledCycle {
            p: labels.len(),
            labels,
            alpha,
            source,
            forward_steps: None,
            waiting_steps: None,
            result,
            history: None,
        }
    }

    /// Synthetic cycle of period `p` whose window is the shortest even-length
    /// block of at least `alpha * p` indices centred on `p / 2`.
    pub fn centered(p: usize, alpha: Ratio<u64>) -> Result<Self> {
        check_alpha(alpha)?;
        let needed = (Ratio::from_integer(p as u64) * alpha).ceil().to_integer() as usize;
        Self::centered_with_len(p, needed, alpha)
    }

    /// Centred synthetic cycle for `alpha = 1 - p^{-1/2}`, computed without rounding error.
    pub fn centered_for_period(p: usize) -> Result<Self> {
        if p < 4 {
            return Err(Error::Precondition(format!("period must be at least 4, got {p}")));
        }
        let root = p.isqrt();
        let needed = p - root;
        // exact when p is a perfect square, a rational under-approximation otherwise
        let alpha = Ratio::new((p - root) as u64, p as u64);
        Self::centered_with_len(p, needed, alpha)
    }

    fn centered_with_len(p: usize, needed: usize, alpha: Ratio<u64>) -> Result<Self> {
        if p < 2 || !p.is_multiple_of(2) {
            return Err(Error::Precondition(format!("period must be even and positive, got {p}")));
        }
        let len = (needed + needed % 2).clamp(2, p);
        let start = p / 2 - len / 2;
        let labels = (0..p).map(|i| i >= start && i < start + len).collect();
        Ok(Self::from_labels(labels, alpha, CycleSource::Synthetic, ResultValue::result("1")))
    }

    pub fn period(&self) -> usize {
        self.p
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn alpha_requested(&self) -> Ratio<u64> {
        self.alpha
    }

    pub fn source(&self) -> &CycleSource {
        &self.source
    }

    pub fn forward_steps(&self) -> Option<usize> {
        self.forward_steps
    }

    pub fn waiting_steps(&self) -> Option<usize> {
        self.waiting_steps
    }

    /// The value every window state carries.
    pub fn result(&self) -> &ResultValue {
        &self.result
    }

    pub fn window_len(&self) -> usize {
        self.labels.iter().filter(|l| **l).count()
    }

    /// The block of true labels, or `None` when the labels are empty or not contiguous.
    pub fn window(&self) -> Option<Range<usize>> {
        let start = self.labels.iter().position(|l| *l)?;
        let end = self.labels.iter().rposition(|l| *l)? + 1;
        self.labels[start..end].iter().all(|l| *l).then_some(start..end)
    }

    pub fn window_indices(&self) -> Vec<usize> {
        self.labels.iter().enumerate().filter(|(_, l)| **l).map(|(i, _)| i).collect()
    }

    pub fn alpha_actual(&self) -> Ratio<u64> {
        if self.p == 0 {
            return Ratio::from_integer(0);
        }
        Ratio::new(self.window_len() as u64, self.p as u64)
    }

    /// The result variable held at every cycle position: the valid result inside
    /// the window, a non-result value elsewhere.
    pub fn readout(&self) -> Vec<ResultValue> {
        self.labels
            .iter()
            .map(|l| if *l { self.result.clone() } else { ResultValue::pending() })
            .collect()
    }

    /// Machine state at cycle position `i`, when the cycle retains its run.
    pub fn state_at(&self, i: usize) -> Option<CycleState<'_>> {
        let history = self.history.as_ref()?;
        let s = self.forward_steps?;
        let w = self.waiting_steps?;
        if i >= self.p {
            return None;
        }
        let state = if i < s {
            CycleState { phase: Phase::Forward, config: &history[i], counter: 0 }
        } else if i < s + w {
            CycleState { phase: Phase::Wait, config: &history[s], counter: i - s }
        } else if i < s + 2 * w {
            CycleState { phase: Phase::Unwind, config: &history[s], counter: s + 2 * w - i }
        } else {
            CycleState { phase: Phase::Reverse, config: &history[self.p - 1 - i], counter: 0 }
        };
        Some(state)
    }

    pub fn to_doc(&self) -> CycleDoc {
        CycleDoc {
            p: self.p,
            window: self.window().map(|r| [r.start, r.end]),
            source: self.source.clone(),
            forward_steps: self.forward_steps,
            waiting_steps: self.waiting_steps,
            alpha_requested: self.alpha.to_string(),
            alpha_actual: self.alpha_actual().to_string(),
            result: self.result.clone(),
        }
    }
}

/// Serialized form of a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleDoc {
    pub p: usize,
    /// Half-open `[start, end)`; absent when the labels are not contiguous.
    pub window: Option<[usize; 2]>,
    pub source: CycleSource,
    pub forward_steps: Option<usize>,
    pub waiting_steps: Option<usize>,
    pub alpha_requested: String,
    pub alpha_actual: String,
    pub result: ResultValue,
}

pub fn build_alpha_cycle(trace: &Trace, alpha: Ratio<u64>, source: CycleSource) -> Result<LabeledCycle> {
    build_alpha_cycle_capped(trace, alpha, source, DEFAULT_PERIOD_CAP)
}

pub fn build_alpha_cycle_capped(
    trace: &Trace,
    alpha: Ratio<u64>,
    source: CycleSource,
    period_cap: usize,
) -> Result<LabeledCycle> {
    if !trace.halted {
        return Err(Error::Precondition("cannot build a cycle from a non-halting trace".into()));
    }
    check_alpha(alpha)?;
    let s = trace.step_count();
    let (a, b) = (*alpha.numer() as u128, *alpha.denom() as u128);
    // w = ceil(alpha / (1 - alpha) * s), and at least one waiting step
    let w = (a * s as u128).div_ceil(b - a).max(1);
    let p = 2 * (s as u128) + 2 * w;
    if p > period_cap as u128 {
        return Err(Error::Capacity(format!("period {p} exceeds the cap of {period_cap}")));
    }
    let (p, w) = (p as usize, w as usize);
    let labels = (0..p).map(|i| i >= s && i < s + 2 * w).collect();
    Ok(LabeledCycle {
        p,
        labels,
        alpha,
        source,
        forward_steps: Some(s),
        waiting_steps: Some(w),
        result: trace.result.clone().expect("halted traces carry a result"),
        history: Some(trace.steps.clone()),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub even: bool,
    pub contiguous: bool,
    pub coverage: bool,
    pub centered: bool,
    /// Replay result; `None` when the cycle does not retain its run.
    pub closed_walk: Option<bool>,
    pub violations: Vec<String>,
}

impl CycleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks evenness, contiguity, coverage and centring, plus the closed-walk
/// replay when the cycle retains its run. Passing `spec` additionally checks
/// that every forward link is one application of the transition map.
pub fn verify_cycle(cycle: &LabeledCycle, spec: Option<&TmSpec>) -> CycleReport {
    let mut report = CycleReport::default();
    let p = cycle.period();

    report.even = p > 0 && p.is_multiple_of(2);
    if !report.even {
        report.violations.push(format!("period {p} is not even"));
    }

    let window = cycle.window();
    report.contiguous = window.is_some();
    if !report.contiguous {
        report.violations.push("result labels are empty or not one contiguous block".into());
    }

    let needed = (Ratio::from_integer(p as u64) * cycle.alpha_requested()).ceil().to_integer() as usize;
    report.coverage = cycle.window_len() >= needed;
    if !report.coverage {
        report.violations.push(format!(
            "window covers {} of {p} indices, fewer than alpha * p = {needed}",
            cycle.window_len()
        ));
    }

    report.centered = match &window {
        Some(r) => cycle.alpha_actual() < Ratio::new(1, 2) || r.contains(&(p / 2)),
        None => false,
    };
    if window.is_some() && !report.centered {
        report.violations.push(format!("index p/2 = {} lies outside the window", p / 2));
    }

    if cycle.history.is_some() {
        let ok = replay(cycle, spec, &mut report.violations);
        report.closed_walk = Some(ok);
    }
    report
}

fn replay(cycle: &LabeledCycle, spec: Option<&TmSpec>, violations: &mut Vec<String>) -> bool {
    let p = cycle.period();
    let states: Vec<_> = (0..p).filter_map(|i| cycle.state_at(i)).collect();
    if states.len() != p {
        violations.push("cycle history is inconsistent with its period".into());
        return false;
    }
    let before = violations.len();

    // `a -> b` must be a forward machine step
    let linked = |a: &Configuration, b: &Configuration| match spec {
        Some(spec) => step(spec, a).map(|n| &n == b).unwrap_or(false),
        None => a != b,
    };

    for i in 0..p {
        let (cur, next) = (&states[i], &states[(i + 1) % p]);
        let ok = match (cur.phase, next.phase) {
            (Phase::Forward, Phase::Forward) | (Phase::Forward, Phase::Wait) => {
                linked(cur.config, next.config) && next.counter == 0
            }
            (Phase::Wait, Phase::Wait) | (Phase::Wait, Phase::Unwind) => {
                cur.config == next.config && next.counter == cur.counter + 1
            }
            (Phase::Unwind, Phase::Unwind) => cur.config == next.config && next.counter + 1 == cur.counter,
            (Phase::Unwind, Phase::Reverse) => cur.counter == 1 && linked(next.config, cur.config),
            (Phase::Reverse, Phase::Reverse) => linked(next.config, cur.config),
            // the walk closes: reverse run ends on c_0 where the forward run begins
            (Phase::Reverse, Phase::Forward) => cur.config == next.config,
            // no forward steps: the counter wraps straight back to zero
            (Phase::Unwind, Phase::Wait) => cur.counter == 1 && next.counter == 0 && cur.config == next.config,
            _ => false,
        };
        if !ok {
            violations.push(format!("broken link between cycle positions {i} and {}", (i + 1) % p));
        }
    }

    // c_0..c_{s-1}, c_s repeated 2w times, c_{s-1}..c_0
    let palindrome = (0..p).all(|i| states[i].config == states[p - 1 - i].config);
    if !palindrome {
        violations.push("base configurations do not form a palindromic closed walk".into());
    }
    violations.len() == before
}

/// Target waiting fraction `1 - p^{-1/2}` for a period `p`.
pub fn alpha_for_period<T: Scalar>(p: usize) -> Result<T> {
    if p < 4 {
        return Err(Error::Precondition(format!("period must be at least 4, got {p}")));
    }
    Ok(T::one() - T::one() / T::of_usize(p).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::machine::run;

    fn trace_with_steps(s: usize) -> Trace {
        // unary successor on 1^(s-1) halts after exactly s transitions
        let tm = library::unary_successor();
        let word = "1".repeat(s - 1);
        let trace = run(&tm, &tm.load(&word).unwrap(), 1000).unwrap();
        assert_eq!(trace.step_count(), s);
        trace
    }

    #[test]
    fn two_steps_half_waiting() {
        let cycle = build_alpha_cycle(&trace_with_steps(2), Ratio::new(1, 2), CycleSource::Synthetic).unwrap();
        assert_eq!(cycle.period(), 8);
        assert_eq!(cycle.waiting_steps(), Some(2));
        assert_eq!(cycle.window(), Some(2..6));
        assert_eq!(cycle.alpha_actual(), Ratio::new(1, 2));
        let report = verify_cycle(&cycle, Some(&library::unary_successor()));
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.closed_walk, Some(true));
    }

    #[test]
    fn degenerate_alpha_keeps_one_waiting_step() {
        let cycle = build_alpha_cycle(&trace_with_steps(2), Ratio::new(1, 1000), CycleSource::Synthetic).unwrap();
        assert_eq!(cycle.waiting_steps(), Some(1));
        assert_eq!(cycle.period(), 6);
        assert_eq!(cycle.window(), Some(2..4));
    }

    #[test]
    fn three_steps_three_quarters() {
        let cycle = build_alpha_cycle(&trace_with_steps(3), Ratio::new(3, 4), CycleSource::Synthetic).unwrap();
        assert_eq!(cycle.waiting_steps(), Some(9));
        assert_eq!(cycle.period(), 24);
        assert_eq!(cycle.window_len(), 18);
        assert_eq!(cycle.alpha_actual(), Ratio::new(3, 4));
        assert!(verify_cycle(&cycle, Some(&library::unary_successor())).passed());
    }

    #[test]
    fn zero_step_trace_waits_in_place() {
        let tm = library::unary_successor();
        let mut c = tm.load("1").unwrap();
        c.state = tm.state("done").unwrap();
        let trace = run(&tm, &c, 5).unwrap();
        assert_eq!(trace.step_count(), 0);
        let cycle = build_alpha_cycle(&trace, Ratio::new(1, 2), CycleSource::Synthetic).unwrap();
        assert_eq!(cycle.period(), 2);
        assert_eq!(cycle.window(), Some(0..2));
        assert!(verify_cycle(&cycle, Some(&tm)).passed());
    }

    #[test]
    fn rejects_non_halting_and_bad_alpha() {
        let looper = library::infinite_loop();
        let trace = run(&looper, &looper.load("").unwrap(), 10).unwrap();
        assert!(matches!(
            build_alpha_cycle(&trace, Ratio::new(1, 2), CycleSource::Aperiodic),
            Err(Error::Precondition(_))
        ));
        let t = trace_with_steps(2);
        for bad in [Ratio::new(0, 1), Ratio::new(1, 1), Ratio::new(3, 2)] {
            assert!(matches!(build_alpha_cycle(&t, bad, CycleSource::Synthetic), Err(Error::Precondition(_))));
        }
    }

    #[test]
    fn capacity_error_near_one() {
        let t = trace_with_steps(3);
        let alpha = Ratio::new(999_999_999, 1_000_000_000);
        assert!(matches!(build_alpha_cycle(&t, alpha, CycleSource::Synthetic), Err(Error::Capacity(_))));
    }

    #[test]
    fn forced_violations_are_flagged() {
        let odd = LabeledCycle::from_labels(
            vec![false, true, true, true, false],
            Ratio::new(1, 2),
            CycleSource::Synthetic,
            ResultValue::result("1"),
        );
        let report = verify_cycle(&odd, None);
        assert!(!report.even && report.contiguous);

        let thin = LabeledCycle::from_labels(
            vec![false, false, false, true, true, false, false, false],
            Ratio::new(1, 2),
            CycleSource::Synthetic,
            ResultValue::result("1"),
        );
        let report = verify_cycle(&thin, None);
        assert!(report.even && !report.coverage);

        let split = LabeledCycle::from_labels(
            vec![true, false, true, false],
            Ratio::new(1, 4),
            CycleSource::Synthetic,
            ResultValue::result("1"),
        );
        assert!(!verify_cycle(&split, None).contiguous);
    }

    #[test]
    fn tampered_history_breaks_the_walk() {
        let mut cycle = build_alpha_cycle(&trace_with_steps(3), Ratio::new(1, 2), CycleSource::Synthetic).unwrap();
        let history = cycle.history.as_mut().unwrap();
        history.swap(0, 1);
        let report = verify_cycle(&cycle, Some(&library::unary_successor()));
        assert_eq!(report.closed_walk, Some(false));
    }

    #[test]
    fn alpha_for_period_values() {
        assert_eq!(alpha_for_period::<f64>(256).unwrap(), 0.9375);
        assert_eq!(alpha_for_period::<f64>(4).unwrap(), 0.5);
        assert!((alpha_for_period::<f64>(10_000).unwrap() - 0.99).abs() < 1e-15);
        assert!((alpha_for_period::<f32>(256).unwrap() - 0.9375).abs() < 1e-6);
        assert!(alpha_for_period::<f64>(2).is_err());
    }

    #[test]
    fn centered_windows() {
        let c = LabeledCycle::centered_for_period(256).unwrap();
        assert_eq!(c.window(), Some(8..248));
        assert_eq!(c.alpha_actual(), Ratio::new(15, 16));
        assert_eq!(c.alpha_requested(), Ratio::new(15, 16));
        let c = LabeledCycle::centered(8, Ratio::new(1, 2)).unwrap();
        assert_eq!(c.window(), Some(2..6));
        // non-square period: rounded up to an even length
        let c = LabeledCycle::centered_for_period(10).unwrap();
        assert_eq!(c.window_len(), 8);
        assert!(verify_cycle(&c, None).passed());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn arithmetic_and_centering(s in 1usize..40, num in 1u64..99, den in 2u64..100) {
                prop_assume!(num < den);
                let alpha = Ratio::new(num, den);
                let cycle = build_alpha_cycle(&trace_with_steps(s), alpha, CycleSource::Synthetic).unwrap();
                let w = cycle.waiting_steps().unwrap();
                prop_assert_eq!(cycle.period(), 2 * s + 2 * w);
                prop_assert!(cycle.alpha_actual() >= alpha);
                let window = cycle.window().unwrap();
                prop_assert_eq!(window.clone(), s..s + 2 * w);
                if w >= s {
                    prop_assert!(window.contains(&(cycle.period() / 2)));
                }
                let report = verify_cycle(&cycle, Some(&library::unary_successor()));
                prop_assert!(report.passed(), "{:?}", report.violations);
            }
        }
    }
}
