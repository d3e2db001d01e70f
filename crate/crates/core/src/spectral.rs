//! Orbit spectra, the overlap function and half-cycle amplitude profiles.
//!
//! Units are fixed at `T = ħ = 1`: an eigenphase is measured in radians per
//! machine cycle, and the overlap of the initial state with its evolute at time
//! `u` (in machine cycles) is `Σ_k w_k exp(-i φ_k u)`.

use ndarray::Array2;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Period {
    Finite(usize),
    /// Absolutely continuous spectrum `dλ / 2π` on `[0, 2π)`.
    Aperiodic,
}

/// The spectral measure of one orbit: point masses `weights[k]` at `phases[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSpectrum<T> {
    phases: Vec<T>,
    weights: Vec<T>,
    period: Period,
}

fn weight_tolerance<T: Scalar>(n: usize) -> T {
    T::of(1e-12).max(T::epsilon() * T::of_usize(4 * n.max(1)))
}

impl<T: Scalar> OrbitSpectrum<T> {
    /// A point spectrum. Weights must be non-negative and sum to one.
    pub fn new(phases: Vec<T>, weights: Vec<T>, period: Period) -> Result<Self> {
        if phases.len() != weights.len() || phases.is_empty() {
            return Err(Error::Precondition(format!(
                "need matching, non-empty phases and weights (got {} and {})",
                phases.len(),
                weights.len()
            )));
        }
        if period == Period::Aperiodic {
            return Err(Error::Precondition("an aperiodic spectrum has no point masses".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= T::zero())) {
            return Err(Error::Precondition(format!("negative or NaN weight {w}")));
        }
        let total: T = weights.iter().copied().sum();
        if (total - T::one()).abs() > weight_tolerance(weights.len()) {
            return Err(Error::Precondition(format!("weights sum to {total}, not 1")));
        }
        Ok(OrbitSpectrum { phases, weights, period })
    }

    /// The uniform spectrum of an aperiodic orbit.
    pub fn aperiodic() -> Self {
        OrbitSpectrum { phases: Vec::new(), weights: Vec::new(), period: Period::Aperiodic }
    }

    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn period(&self) -> Period {
        self.period
    }

    pub fn is_point(&self) -> bool {
        !matches!(self.period, Period::Aperiodic)
    }
}

/// Eigenphases `2π (k/p + (k mod 2))`, `k = 0..p`, each with weight `1/p`.
///
/// Alternating the mod-4π branch makes every overlap at half-integer times a
/// geometric series that collapses to a single closed form.
pub fn minimal_periodic_spectrum<T: Scalar>(p: usize) -> Result<OrbitSpectrum<T>> {
    if p < 2 || !p.is_multiple_of(2) {
        return Err(Error::Precondition(format!("minimal spectra need an even period >= 2, got {p}")));
    }
    let two_pi = T::TAU();
    let pt = T::of_usize(p);
    let phases = (0..p)
        .map(|k| two_pi * (T::of_usize(k) / pt + T::of_usize(k % 2)))
        .collect();
    let weights = vec![T::one() / pt; p];
    OrbitSpectrum::new(phases, weights, Period::Finite(p))
}

/// `Σ_k w_k exp(-i φ_k u)`, summed in index order.
pub fn overlap_at<T: Scalar>(spec: &OrbitSpectrum<T>, u: T) -> Result<Complex<T>> {
    if !spec.is_point() {
        return Err(Error::Unsupported(
            "overlap of an aperiodic spectrum; use halfstep_profile_aperiodic".into(),
        ));
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for (phi, w) in spec.phases.iter().zip(&spec.weights) {
        acc += Complex::from_polar(*w, -*phi * u);
    }
    Ok(acc)
}

/// Overlaps `a_j` of the state at half a machine cycle with the computational states.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeProfile<T> {
    amplitudes: Vec<Complex<T>>,
    /// Label of `amplitudes[0]`: 0 for periodic profiles, `1 - K` for aperiodic truncations.
    first_index: i64,
    captured: T,
}

impl<T: Scalar> AmplitudeProfile<T> {
    pub fn new(amplitudes: Vec<Complex<T>>, first_index: i64) -> Result<Self> {
        let captured: T = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let slack = T::of(1e-12).max(T::epsilon() * T::of_usize(8 * amplitudes.len().max(1)));
        if !(captured <= T::one() + slack) {
            return Err(Error::Precondition(format!("profile captures probability {captured} > 1")));
        }
        Ok(AmplitudeProfile { amplitudes, first_index, captured })
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// `Σ |a_j|²` over the whole profile.
    pub fn captured(&self) -> T {
        self.captured
    }

    /// Evolution time of the profile in machine cycles.
    pub fn tau(&self) -> T {
        T::of(0.5)
    }

    pub fn first_index(&self) -> i64 {
        self.first_index
    }

    /// Label (cycle position or `k`) of the amplitude stored at `position`.
    pub fn label(&self, position: usize) -> i64 {
        self.first_index + position as i64
    }

    pub fn position_of(&self, label: i64) -> Option<usize> {
        let pos = label - self.first_index;
        (pos >= 0 && (pos as usize) < self.amplitudes.len()).then_some(pos as usize)
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Position and magnitude of the largest amplitude. Magnitudes equal up to
    /// rounding count as ties and the first one wins.
    pub fn peak(&self) -> Option<(usize, T)> {
        let slack = T::one() + T::epsilon() * T::of(64.0);
        self.amplitudes
            .iter()
            .map(|a| a.norm())
            .enumerate()
            .fold(None, |best, (i, m)| match best {
                Some((_, b)) if b * slack >= m => best,
                _ => Some((i, m)),
            })
    }
}

fn consistency_tolerance<T: Scalar>(p: usize) -> T {
    T::of(1e-10).max(T::epsilon() * T::of_usize(64 * p))
}

/// Closed form `a_j = exp(iπ(j-1/2)/p) / (p cos(π(j-1/2)/p))` for one position.
pub fn halfstep_amplitude<T: Scalar>(p: usize, j: usize) -> Complex<T> {
    let theta = T::PI() * (T::of_usize(j) - T::of(0.5)) / T::of_usize(p);
    Complex::from_polar(T::one(), theta) / (T::of_usize(p) * theta.cos())
}

/// Half-cycle profile of the minimal periodic implementation, checked
/// position by position against the direct spectral sum.
pub fn halfstep_profile_periodic<T: Scalar>(p: usize) -> Result<AmplitudeProfile<T>> {
    let spec = minimal_periodic_spectrum::<T>(p)?;
    let tol = consistency_tolerance::<T>(p);
    let mut amplitudes = Vec::with_capacity(p);
    for j in 0..p {
        let closed = halfstep_amplitude::<T>(p, j);
        let direct = overlap_at(&spec, T::of_usize(j) - T::of(0.5))?;
        let gap = (closed - direct).norm();
        if !(gap < tol) {
            return Err(Error::Consistency(format!(
                "closed form and spectral sum differ by {gap} at j = {j}, p = {p}"
            )));
        }
        amplitudes.push(closed);
    }
    AmplitudeProfile::new(amplitudes, 0)
}

/// Truncated half-cycle profile of the minimal aperiodic implementation:
/// `a_k = -1 / (π i (k - 1/2))` for `-K < k <= K`.
pub fn halfstep_profile_aperiodic<T: Scalar>(k_max: usize) -> Result<AmplitudeProfile<T>> {
    if k_max == 0 {
        return Err(Error::Precondition("truncation K must be at least 1".into()));
    }
    let first = 1 - k_max as i64;
    let amplitudes = (first..=k_max as i64)
        .map(|k| {
            let shifted = T::of(k as f64 - 0.5);
            // -1/(πi x) = i/(π x)
            Complex::new(T::zero(), T::one() / (T::PI() * shifted))
        })
        .collect();
    AmplitudeProfile::new(amplitudes, first)
}

/// `Σ_{j ∈ window} |a_j|²`, with `window` given as storage positions.
pub fn nu_of<T: Scalar>(profile: &AmplitudeProfile<T>, window: &[usize]) -> Result<T> {
    let mut acc = T::zero();
    for &j in window {
        let a = profile.amplitudes.get(j).ok_or_else(|| {
            Error::Precondition(format!("window index {j} outside profile of length {}", profile.len()))
        })?;
        acc += a.norm_sqr();
    }
    Ok(acc)
}

/// The discrete Fourier eigenbasis of a period-`p` orbit: entry `(j, k)` is
/// `p^{-1/2} exp(2πi jk/p)`.
pub fn eigenbasis<T: Scalar>(p: usize) -> Result<Array2<Complex<T>>> {
    if p == 0 {
        return Err(Error::Precondition("eigenbasis dimension must be positive".into()));
    }
    let scale = T::one() / T::of_usize(p).sqrt();
    let pt = T::of_usize(p);
    Ok(Array2::from_shape_fn((p, p), |(j, k)| {
        // reduce jk mod p before scaling so large indices keep full precision
        let angle = T::TAU() * T::of_usize((j * k) % p) / pt;
        Complex::from_polar(scale, angle)
    }))
}

/// `max |(M M^H - I)_{ij}|`.
pub fn unitarity_residual<T: Scalar>(m: &Array2<Complex<T>>) -> T {
    let (rows, cols) = m.dim();
    let mut worst = T::zero();
    for i in 0..rows {
        for j in 0..rows {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..cols {
                acc += m[(i, k)] * m[(j, k)].conj();
            }
            if i == j {
                acc -= Complex::new(T::one(), T::zero());
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}
