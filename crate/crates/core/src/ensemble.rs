//! Randomly sampled efficient implementations and their success statistics.
//!
//! An efficient implementation of a period-`p` orbit is described by the
//! branch imbalances `y_k ∈ [-1/p, 1/p]`, drawn i.i.d. from `p f(p y)` for an
//! even density `f` on `[-1, 1]`. The half-cycle amplitude at position `j` is
//! `Σ_k y_k exp(-2πi k (j - 1/2) / p)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::cycle::LabeledCycle;
use crate::error::{Error, Result};
use crate::rng::stream;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Density {
    Uniform,
    /// `±1` with probability one half each.
    TwoPoint,
    /// `(1 + cos πz) / 2` on `[-1, 1]`.
    RaisedCosine,
}

impl Density {
    pub const ALL: [Density; 3] = [Density::Uniform, Density::TwoPoint, Density::RaisedCosine];

    pub fn name(self) -> &'static str {
        match self {
            Density::Uniform => "uniform",
            Density::TwoPoint => "two-point",
            Density::RaisedCosine => "raised-cosine",
        }
    }

    pub fn m2(self) -> f64 {
        let pi2 = std::f64::consts::PI.powi(2);
        match self {
            Density::Uniform => 1.0 / 3.0,
            Density::TwoPoint => 1.0,
            Density::RaisedCosine => 1.0 / 3.0 - 2.0 / pi2,
        }
    }

    pub fn m4(self) -> f64 {
        let pi2 = std::f64::consts::PI.powi(2);
        match self {
            Density::Uniform => 0.2,
            Density::TwoPoint => 1.0,
            Density::RaisedCosine => 0.2 - 4.0 / pi2 + 24.0 / (pi2 * pi2),
        }
    }

    /// One draw from `f` on `[-1, 1]`.
    pub fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            Density::Uniform => rng.random_range(-1.0..=1.0),
            Density::TwoPoint => {
                if rng.random_bool(0.5) {
                    1.0
                } else {
                    -1.0
                }
            }
            Density::RaisedCosine => loop {
                let z: f64 = rng.random_range(-1.0..=1.0);
                let u: f64 = rng.random();
                if 2.0 * u <= 1.0 + (std::f64::consts::PI * z).cos() {
                    break z;
                }
            },
        }
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Density {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Density::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown density {s:?}; expected uniform, two-point or raised-cosine")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct YSample<T> {
    y: Vec<T>,
}

impl<T: Scalar> YSample<T> {
    pub fn new(y: Vec<T>) -> Result<Self> {
        if y.len() < 2 {
            return Err(Error::Precondition(format!("period must be at least 2, got {}", y.len())));
        }
        let bound = T::one() / T::of_usize(y.len()) * (T::one() + T::epsilon() * T::of(4.0));
        if let Some((j, v)) = y.iter().enumerate().find(|(_, v)| !(v.abs() <= bound)) {
            return Err(Error::Precondition(format!("|y_{j}| = {} exceeds 1/p", v.abs())));
        }
        Ok(YSample { y })
    }

    /// `y_k = (-1)^k / p`, the allocation of the minimal implementation.
    pub fn alternating(p: usize) -> Result<Self> {
        let v = T::one() / T::of_usize(p);
        YSample::new((0..p).map(|k| if k % 2 == 0 { v } else { -v }).collect())
    }

    pub fn period(&self) -> usize {
        self.y.len()
    }

    pub fn values(&self) -> &[T] {
        &self.y
    }
}

pub fn sample_y<T: Scalar, R: Rng + ?Sized>(p: usize, density: Density, rng: &mut R) -> Result<YSample<T>> {
    if p < 2 {
        return Err(Error::Precondition(format!("period must be at least 2, got {p}")));
    }
    let scale = 1.0 / p as f64;
    Ok(YSample { y: (0..p).map(|_| T::of(density.draw(rng) * scale)).collect() })
}

fn check_window(p: usize, window: &[usize]) -> Result<()> {
    match window.iter().find(|j| **j >= p) {
        Some(j) => Err(Error::Precondition(format!("window index {j} outside period {p}"))),
        None => Ok(()),
    }
}

/// `Σ_{j ∈ window} |Σ_k y_k exp(-2πi k (j - 1/2) / p)|²` by direct summation.
pub fn nu_from_y<T: Scalar>(sample: &YSample<T>, window: &[usize]) -> Result<T> {
    let p = sample.period();
    check_window(p, window)?;
    let pt = T::of_usize(p);
    let mut total = T::zero();
    for &j in window {
        let mut a = Complex::new(T::zero(), T::zero());
        for (k, y) in sample.y.iter().enumerate() {
            // reduce k(j - 1/2) modulo p to keep the angle small
            let turns = (T::of_usize((k * j) % p) - T::of(0.5) * T::of_usize(k)) / pt;
            a += Complex::from_polar(*y, -T::TAU() * turns);
        }
        total += a.norm_sqr();
    }
    Ok(total)
}

/// All `p` half-cycle amplitudes through one FFT:
/// `a_j = DFT(y_k e^{iπk/p})_j`.
pub struct FftNu<T: Scalar> {
    p: usize,
    fft: Arc<dyn Fft<T>>,
    twiddle: Vec<Complex<T>>,
}

impl<T: Scalar> FftNu<T> {
    pub fn new(p: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::Precondition(format!("period must be at least 2, got {p}")));
        }
        let fft = FftPlanner::new().plan_fft_forward(p);
        let twiddle = (0..p)
            .map(|k| Complex::from_polar(T::one(), T::PI() * T::of_usize(k) / T::of_usize(p)))
            .collect();
        Ok(FftNu { p, fft, twiddle })
    }

    pub fn amplitudes_into(&self, sample: &YSample<T>, buf: &mut Vec<Complex<T>>) -> Result<()> {
        if sample.period() != self.p {
            return Err(Error::Precondition(format!(
                "sample period {} does not match plan period {}",
                sample.period(),
                self.p
            )));
        }
        buf.clear();
        buf.extend(sample.y.iter().zip(&self.twiddle).map(|(y, w)| *w * *y));
        self.fft.process(buf);
        Ok(())
    }

    pub fn nu(&self, sample: &YSample<T>, window: &[usize], buf: &mut Vec<Complex<T>>) -> Result<T> {
        check_window(self.p, window)?;
        self.amplitudes_into(sample, buf)?;
        Ok(window.iter().map(|&j| buf[j].norm_sqr()).sum())
    }
}

/// Summary of `n` values; variance and standard error are undefined for `n < 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub n: usize,
    pub mean: f64,
    pub var: Option<f64>,
    pub stderr: Option<f64>,
}

impl Moments {
    /// Two-pass mean and unbiased variance, accumulated in input order.
    pub fn of(xs: &[f64]) -> Moments {
        let n = xs.len();
        if n == 0 {
            return Moments { n, mean: f64::NAN, var: None, stderr: None };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        if n < 2 {
            return Moments { n, mean, var: None, stderr: None };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Moments { n, mean, var: Some(var), stderr: Some((var / n as f64).sqrt()) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsRow {
    pub p: usize,
    pub density: Density,
    pub trials: usize,
    pub window_len: usize,
    pub alpha: f64,
    pub expected_mean: f64,
    pub mean: f64,
    pub stderr: Option<f64>,
    pub var: Option<f64>,
    pub var_p: Option<f64>,
    pub mean_within_3se: Option<bool>,
    /// Fraction of samples with `ν < m₂ - Δ/(c√p)`.
    pub chebyshev_fraction: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsReport {
    pub seed: u64,
    pub density: Density,
    pub m2: f64,
    pub m4: f64,
    pub trials: usize,
    pub delta: f64,
    /// `c = 1 / (m₂/Δ + max_p sd_p √p)`, so that `m₂ - Δ/(c√p)` lies `Δ` standard
    /// deviations below the mean for every `p` in the list.
    pub c: Option<f64>,
    pub rows: Vec<StatsRow>,
    /// `max var·p / min var·p` across the list.
    pub var_p_spread: Option<f64>,
    pub undefined_variance: bool,
    pub violations: Vec<String>,
}

impl StatsReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const VAR_P_SPREAD_LIMIT: f64 = 4.0;

/// Success probabilities of `trials` sampled implementations of period `p`,
/// measured on the centred window of length `p - ⌊√p⌋` (rounded up to even).
pub fn sample_nus<T: Scalar>(p: usize, density: Density, trials: usize, seed: u64) -> Result<(usize, Vec<f64>)> {
    let cycle = LabeledCycle::centered_for_period(p)?;
    let window = cycle.window_indices();
    let plan = FftNu::<T>::new(p)?;
    let name = format!("stats/{density}/{p}");
    let nus = (0..trials as u64)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(p),
            |buf, trial| -> Result<f64> {
                let mut rng = stream(seed, &name, trial);
                let y = sample_y::<T, _>(p, density, &mut rng)?;
                Ok(plan.nu(&y, &window, buf)?.to_f64_lossy())
            },
        )
        .collect::<Result<Vec<f64>>>()?;
    Ok((window.len(), nus))
}

pub fn moment_experiment<T: Scalar>(
    p_list: &[usize],
    density: Density,
    trials: usize,
    delta: f64,
    seed: u64,
) -> Result<StatsReport> {
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    if p_list.is_empty() {
        return Err(Error::Precondition("empty period list".into()));
    }
    if let Some(p) = p_list.iter().find(|p| **p % 2 != 0 || **p < 4) {
        return Err(Error::Precondition(format!("periods must be even and at least 4, got {p}")));
    }
    if !(delta > 1.0) {
        return Err(Error::Precondition(format!("Chebyshev Δ must exceed 1, got {delta}")));
    }
    let m2 = density.m2();
    let mut samples = Vec::with_capacity(p_list.len());
    for &p in p_list {
        samples.push(sample_nus::<T>(p, density, trials, seed)?);
    }
    let moments: Vec<Moments> = samples.iter().map(|(_, xs)| Moments::of(xs)).collect();
    let undefined_variance = moments.iter().any(|m| m.var.is_none());
    let c = (!undefined_variance).then(|| {
        let worst = p_list
            .iter()
            .zip(&moments)
            .map(|(p, m)| (m.var.unwrap() * *p as f64).sqrt())
            .fold(0.0, f64::max);
        1.0 / (m2 / delta + worst)
    });

    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for ((&p, (window_len, xs)), m) in p_list.iter().zip(&samples).zip(&moments) {
        let alpha = *window_len as f64 / p as f64;
        let expected_mean = alpha * m2;
        let within = m.stderr.map(|se| (m.mean - expected_mean).abs() <= 3.0 * se);
        if within == Some(false) {
            violations.push(format!(
                "p = {p}: mean {} is more than 3 standard errors from {expected_mean}",
                m.mean
            ));
        }
        let chebyshev_fraction = c.map(|c| {
            let threshold = m2 - delta / (c * (p as f64).sqrt());
            xs.iter().filter(|x| **x < threshold).count() as f64 / xs.len() as f64
        });
        if let Some(f) = chebyshev_fraction {
            if f > 1.0 / (delta * delta) {
                violations.push(format!("p = {p}: Chebyshev fraction {f} exceeds 1/Δ²"));
            }
        }
        rows.push(StatsRow {
            p,
            density,
            trials,
            window_len: *window_len,
            alpha,
            expected_mean,
            mean: m.mean,
            stderr: m.stderr,
            var: m.var,
            var_p: m.var.map(|v| v * p as f64),
            mean_within_3se: within,
            chebyshev_fraction,
        });
    }
    let var_p: Vec<f64> = rows.iter().filter_map(|r| r.var_p).collect();
    let var_p_spread = (!undefined_variance).then(|| {
        let hi = var_p.iter().cloned().fold(f64::MIN, f64::max);
        let lo = var_p.iter().cloned().fold(f64::MAX, f64::min);
        hi / lo
    });
    if let Some(spread) = var_p_spread {
        if !(spread <= VAR_P_SPREAD_LIMIT) {
            violations.push(format!("var·p varies by a factor {spread} across the period list"));
        }
    }
    Ok(StatsReport {
        seed,
        density,
        m2,
        m4: density.m4(),
        trials,
        delta,
        c,
        rows,
        var_p_spread,
        undefined_variance,
        violations,
    })
}

/// Mean of `|a_j|²` at every position `j` over `trials` samples.
pub fn per_index_second_moment<T: Scalar>(p: usize, density: Density, trials: usize, seed: u64) -> Result<Vec<f64>> {
    let plan = FftNu::<T>::new(p)?;
    let mut acc = vec![0.0; p];
    let mut buf = Vec::with_capacity(p);
    let mut rng = stream(seed, "second-moment", p as u64);
    for _ in 0..trials {
        let y = sample_y::<T, _>(p, density, &mut rng)?;
        plan.amplitudes_into(&y, &mut buf)?;
        for (s, a) in acc.iter_mut().zip(&buf) {
            *s += a.norm_sqr().to_f64_lossy();
        }
    }
    Ok(acc.into_iter().map(|s| s / trials as f64).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContinuousNu {
    /// `Σ_{|j| <= N} |a_j|²` with exact per-cell integrals.
    pub direct: f64,
    /// `(1/N) Σ_c (y_c² + y_c y_{c+N/2})`.
    pub closed_form: f64,
}

/// Success probability for a piecewise constant imbalance `y` on `N` equal cells of `[0, 2π)`.
pub fn continuous_nu_of_cells<T: Scalar>(cells: &[T]) -> Result<ContinuousNu> {
    let n = cells.len();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("cell count must be even and at least 2, got {n}")));
    }
    let y: Vec<f64> = cells.iter().map(|v| v.to_f64_lossy()).collect();
    let h = std::f64::consts::TAU / n as f64;
    let mut direct = 0.0;
    for j in -(n as i64)..=(n as i64) {
        let u = j as f64 - 0.5;
        // ∫_{ch}^{(c+1)h} e^{-iuλ} dλ = e^{-iuch} (1 - e^{-iuh}) / (iu)
        let cell = (Complex::new(1.0, 0.0) - Complex::from_polar(1.0, -u * h)) / Complex::new(0.0, u);
        let step = Complex::from_polar(1.0, -u * h);
        let mut phase = Complex::new(1.0, 0.0);
        let mut sum = Complex::new(0.0, 0.0);
        for v in &y {
            sum += phase * *v;
            phase *= step;
        }
        direct += (sum * cell / std::f64::consts::TAU).norm_sqr();
    }
    let half = n / 2;
    let closed_form = (0..n).map(|c| y[c] * y[c] + y[c] * y[(c + half) % n]).sum::<f64>() / n as f64;
    Ok(ContinuousNu { direct, closed_form })
}

pub fn continuous_nu<T: Scalar, R: Rng + ?Sized>(cells: usize, density: Density, rng: &mut R) -> Result<ContinuousNu> {
    let y: Vec<T> = (0..cells).map(|_| T::of(density.draw(rng))).collect();
    continuous_nu_of_cells(&y)
}

/// `E(direct) / m₂` for i.i.d. zero-mean cells: the share of `Σ_j` that the
/// cut `|j| <= N` keeps, `Σ_{|j| <= N} N sin²(uh/2) / (π² u²)`.
pub fn continuous_truncation_factor(cells: usize) -> f64 {
    let n = cells as f64;
    let h = std::f64::consts::TAU / n;
    (-(cells as i64)..=cells as i64)
        .map(|j| {
            let u = j as f64 - 0.5;
            n * (u * h / 2.0).sin().powi(2) / (std::f64::consts::PI * u).powi(2)
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuousReport {
    pub seed: u64,
    pub cells: usize,
    pub density: Density,
    pub m2: f64,
    /// Expected direct value `m₂ · continuous_truncation_factor(cells)`.
    pub expected_direct: f64,
    pub direct: Moments,
    pub closed_form: Moments,
}

pub fn continuous_experiment<T: Scalar>(cells: usize, density: Density, trials: usize, seed: u64) -> Result<ContinuousReport> {
    let name = format!("continuous/{density}/{cells}");
    let values = (0..trials as u64)
        .into_par_iter()
        .map(|t| continuous_nu::<T, _>(cells, density, &mut stream(seed, &name, t)))
        .collect::<Result<Vec<_>>>()?;
    let direct: Vec<f64> = values.iter().map(|v| v.direct).collect();
    let closed: Vec<f64> = values.iter().map(|v| v.closed_form).collect();
    Ok(ContinuousReport {
        seed,
        cells,
        density,
        m2: density.m2(),
        expected_direct: density.m2() * continuous_truncation_factor(cells),
        direct: Moments::of(&direct),
        closed_form: Moments::of(&closed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{halfstep_profile_aperiodic, halfstep_profile_periodic, nu_of};

    #[test]
    fn density_names_round_trip() {
        for d in Density::ALL {
            assert_eq!(d.name().parse::<Density>().unwrap(), d);
        }
        assert!(matches!("gaussian".parse::<Density>(), Err(Error::Parse(_))));
    }

    #[test]
    fn moments_match_quadrature() {
        // composite Simpson on the raised-cosine density, 20000 panels
        let n = 20_000;
        let f = |z: f64| 0.5 * (1.0 + (std::f64::consts::PI * z).cos());
        let simpson = |g: &dyn Fn(f64) -> f64| {
            let h = 2.0 / n as f64;
            let mut s = g(-1.0) + g(1.0);
            for i in 1..n {
                let z = -1.0 + i as f64 * h;
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(z);
            }
            s * h / 3.0
        };
        assert!((simpson(&f) - 1.0).abs() < 1e-12);
        assert!((simpson(&|z| z * z * f(z)) - Density::RaisedCosine.m2()).abs() < 1e-12);
        assert!((simpson(&|z| z.powi(4) * f(z)) - Density::RaisedCosine.m4()).abs() < 1e-12);
    }

    #[test]
    fn two_point_support() {
        let mut rng = stream(3, "t", 0);
        let y = sample_y::<f64, _>(16, Density::TwoPoint, &mut rng).unwrap();
        assert!(y.values().iter().all(|v| (v.abs() - 1.0 / 16.0).abs() < 1e-18));
    }

    #[test]
    fn sample_moments() {
        for d in Density::ALL {
            let mut rng = stream(11, "moments", 0);
            let xs: Vec<f64> = (0..200_000).map(|_| d.draw(&mut rng)).collect();
            let m = Moments::of(&xs);
            assert!(m.mean.abs() < 3.0 * m.stderr.unwrap(), "{d}: {}", m.mean);
            let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
            let m2 = Moments::of(&sq);
            assert!((m2.mean - d.m2()).abs() < 4.0 * m2.stderr.unwrap().max(1e-15), "{d}");
        }
    }

    #[test]
    fn y_sample_bounds() {
        assert!(YSample::new(vec![0.5, -0.5]).is_ok());
        assert!(YSample::new(vec![0.6, 0.0]).is_err());
        assert!(YSample::<f64>::new(vec![0.1]).is_err());
    }

    #[test]
    fn alternating_allocation_is_minimal() {
        for p in [8usize, 64, 256] {
            let cycle = LabeledCycle::centered_for_period(p).unwrap();
            let window = cycle.window_indices();
            let y = YSample::<f64>::alternating(p).unwrap();
            let direct = nu_from_y(&y, &window).unwrap();
            let minimal = nu_of(&halfstep_profile_periodic::<f64>(p).unwrap(), &window).unwrap();
            assert!((direct - minimal).abs() < 1e-10, "p = {p}");
        }
        let zero = YSample::new(vec![0.0; 8]).unwrap();
        assert_eq!(nu_from_y(&zero, &[0, 3, 7]).unwrap(), 0.0);
        assert!(nu_from_y(&zero, &[8]).is_err());
    }

    #[test]
    fn fft_route_matches_direct() {
        let mut rng = stream(5, "fft", 0);
        for p in [4usize, 12, 64, 250] {
            let plan = FftNu::<f64>::new(p).unwrap();
            let window: Vec<usize> = (0..p).step_by(3).collect();
            let y = sample_y::<f64, _>(p, Density::Uniform, &mut rng).unwrap();
            let mut buf = Vec::new();
            let a = plan.nu(&y, &window, &mut buf).unwrap();
            let b = nu_from_y(&y, &window).unwrap();
            assert!((a - b).abs() < 1e-13 * p as f64, "p = {p}: {a} vs {b}");
        }
    }

    #[test]
    fn mean_at_256() {
        let rep = moment_experiment::<f64>(&[256], Density::Uniform, 20_000, 2.0, 17).unwrap();
        let row = &rep.rows[0];
        assert_eq!(row.window_len, 240);
        assert!((row.expected_mean - 0.3125).abs() < 1e-15);
        assert_eq!(row.mean_within_3se, Some(true));
    }

    #[test]
    fn single_trial_flags_variance() {
        let rep = moment_experiment::<f64>(&[64], Density::Uniform, 1, 2.0, 1).unwrap();
        assert!(rep.undefined_variance);
        assert_eq!(rep.rows[0].var, None);
        assert_eq!(rep.c, None);
        assert!(moment_experiment::<f64>(&[63], Density::Uniform, 10, 2.0, 1).is_err());
        assert!(moment_experiment::<f64>(&[64], Density::Uniform, 0, 2.0, 1).is_err());
    }

    #[test]
    fn experiment_is_reproducible() {
        let a = moment_experiment::<f64>(&[64, 128], Density::RaisedCosine, 500, 2.0, 99).unwrap();
        let b = moment_experiment::<f64>(&[64, 128], Density::RaisedCosine, 500, 2.0, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn every_density_is_unbiased() {
        for d in Density::ALL {
            let rep = moment_experiment::<f64>(&[64, 256], d, 20_000, 2.0, 23).unwrap();
            for row in &rep.rows {
                assert_eq!(row.mean_within_3se, Some(true), "{d} p = {}", row.p);
            }
        }
    }

    #[test]
    fn second_moment_is_flat_in_j() {
        let p = 32;
        let trials = 40_000;
        let m = per_index_second_moment::<f64>(p, Density::Uniform, trials, 8).unwrap();
        let target = Density::Uniform.m2() / p as f64;
        // |a_j|² has standard deviation of order its mean; allow 5 standard errors
        let tol = 5.0 * target * 1.5 / (trials as f64).sqrt();
        assert!(m.iter().all(|v| (v - target).abs() < tol), "{m:?}");
    }

    #[test]
    fn two_point_variance_leading_term_vanishes() {
        let two = moment_experiment::<f64>(&[64, 256, 1024], Density::TwoPoint, 4_000, 2.0, 31).unwrap();
        let uni = moment_experiment::<f64>(&[1024], Density::Uniform, 4_000, 2.0, 31).unwrap();
        let vp: Vec<f64> = two.rows.iter().map(|r| r.var_p.unwrap()).collect();
        assert!(vp[0] > vp[1] && vp[1] > vp[2], "{vp:?}");
        assert!(two.rows[2].var.unwrap() < uni.rows[0].var.unwrap());
    }

    #[test]
    fn continuous_cases() {
        let zero = continuous_nu_of_cells(&[0.0f64; 16]).unwrap();
        assert_eq!((zero.direct, zero.closed_form), (0.0, 0.0));
        let mut prev = 0.0;
        for n in [16usize, 64, 256] {
            let one = continuous_nu_of_cells(&vec![1.0f64; n]).unwrap();
            let aperiodic = halfstep_profile_aperiodic::<f64>(n).unwrap().captured();
            // |j| <= N covers k = j in (-N, N] plus j = -N
            let extra = 1.0 / (std::f64::consts::PI * (n as f64 + 0.5)).powi(2);
            assert!((one.direct - aperiodic - extra).abs() < 1e-12, "n = {n}");
            assert!(one.direct > prev && one.direct < 1.0);
            assert!((one.closed_form - 2.0).abs() < 1e-15);
            prev = one.direct;
        }
        assert!(continuous_nu_of_cells(&[1.0f64; 7]).is_err());
    }

    #[test]
    fn continuous_uniform_mean() {
        let rep = continuous_experiment::<f64>(64, Density::Uniform, 2_000, 4).unwrap();
        let kappa = continuous_truncation_factor(64);
        // Parseval: the untruncated sum would keep everything
        assert!(kappa > 0.89 && kappa < 0.91, "{kappa}");
        assert!((rep.expected_direct - kappa / 3.0).abs() < 1e-15);
        assert!((rep.direct.mean - rep.expected_direct).abs() < 4.0 * rep.direct.stderr.unwrap());
        assert!((rep.closed_form.mean - 1.0 / 3.0).abs() < 5.0 * rep.closed_form.stderr.unwrap());
    }
}
