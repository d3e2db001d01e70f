//! Physical complexity `C(t) = t · Σ w_k |λ_k|` and the diagnostics built on it.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{overlap_at, OrbitSpectrum};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexityReading<T> {
    pub t: T,
    pub value: T,
    pub mean_abs_phase: T,
}

/// `Σ w_k |λ_k|`; the uniform density on `[0, 2π)` gives `π`.
pub fn mean_abs_phase<T: Scalar>(spec: &OrbitSpectrum<T>) -> T {
    if !spec.is_point() {
        return T::PI();
    }
    spec.phases().iter().zip(spec.weights()).map(|(l, w)| *w * l.abs()).sum()
}

pub fn complexity<T: Scalar>(spec: &OrbitSpectrum<T>, t: T) -> Result<ComplexityReading<T>> {
    if !(t >= T::zero()) {
        return Err(Error::Precondition(format!("evolution time must be non-negative, got {t}")));
    }
    let mean = mean_abs_phase(spec);
    Ok(ComplexityReading { t, value: t * mean, mean_abs_phase: mean })
}

/// Overlap at time `t` for point spectra, or `(1 - e^{-2πit}) / (2πit)` for the
/// uniform density.
pub fn overlap_any<T: Scalar>(spec: &OrbitSpectrum<T>, t: T) -> Complex<T> {
    if spec.is_point() {
        return overlap_at(spec, t).expect("point spectrum");
    }
    let x = T::TAU() * t;
    if x.abs() < T::epsilon() {
        return Complex::new(T::one(), T::zero());
    }
    let num = Complex::new(T::one(), T::zero()) - Complex::from_polar(T::one(), -x);
    num / Complex::new(T::zero(), x)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundViolation<T> {
    pub t: T,
    pub distance_sq: T,
    pub twice_complexity: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBoundReport<T> {
    pub points: usize,
    /// Largest `‖q_t - q_0‖² / (2 C(t))` seen where `C(t) > 0`.
    pub max_ratio: T,
    pub violations: Vec<BoundViolation<T>>,
}

impl<T> LowerBoundReport<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `2 - 2 Re ⟨q_0, q_t⟩ <= 2 C(t)` on every grid point.
pub fn check_lower_bound<T: Scalar>(spec: &OrbitSpectrum<T>, grid: &[T]) -> LowerBoundReport<T> {
    let mean = mean_abs_phase(spec);
    let slack = T::epsilon() * T::of(64.0);
    let two = T::of(2.0);
    let mut max_ratio = T::zero();
    let mut violations = Vec::new();
    for &t in grid {
        let distance_sq = two - two * overlap_any(spec, t).re;
        let twice_complexity = two * t.abs() * mean;
        if twice_complexity > T::zero() {
            max_ratio = max_ratio.max(distance_sq / twice_complexity);
        }
        if distance_sq > twice_complexity + slack {
            violations.push(BoundViolation { t, distance_sq, twice_complexity });
        }
    }
    LowerBoundReport { points: grid.len(), max_ratio, violations }
}

/// `n` evenly spaced times from `0` to `t_max` inclusive.
pub fn time_grid<T: Scalar>(t_max: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![T::zero()],
        _ => (0..n).map(|i| t_max * T::of_usize(i) / T::of_usize(n - 1)).collect(),
    }
}

pub const MIN_ZERO_RESOLUTION: usize = 256;

/// Sign changes of the real part plus those of the imaginary part of the
/// overlap, sampled at `resolution + 1` points of `[0, 1]`. Samples within
/// `1e-12` of zero are skipped, so tangential zeros are not counted.
pub fn zero_count<T: Scalar>(spec: &OrbitSpectrum<T>, resolution: usize) -> Result<usize> {
    if resolution < MIN_ZERO_RESOLUTION {
        return Err(Error::Precondition(format!(
            "resolution must be at least {MIN_ZERO_RESOLUTION} samples per cycle, got {resolution}"
        )));
    }
    let tol = T::of(1e-12).max(T::epsilon() * T::of(64.0));
    let mut prev = [0i8; 2];
    let mut count = 0;
    for i in 0..=resolution {
        let v = overlap_any(spec, T::of_usize(i) / T::of_usize(resolution));
        for (slot, x) in prev.iter_mut().zip([v.re, v.im]) {
            if x.abs() < tol {
                continue;
            }
            let s = if x > T::zero() { 1 } else { -1 };
            if *slot != 0 && *slot != s {
                count += 1;
            }
            *slot = s;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{minimal_periodic_spectrum, Period};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn point(phase: f64) -> OrbitSpectrum<f64> {
        OrbitSpectrum::new(vec![phase], vec![1.0], Period::Finite(1)).unwrap()
    }

    #[test]
    fn readings() {
        let zero = point(0.0);
        for t in [0.0, 0.5, 3.0] {
            assert_eq!(complexity(&zero, t).unwrap().value, 0.0);
        }
        let s2 = minimal_periodic_spectrum::<f64>(2).unwrap();
        let r = complexity(&s2, 0.5).unwrap();
        assert_abs_diff_eq!(r.mean_abs_phase, 1.5 * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(r.value, 0.75 * PI, epsilon = 1e-14);
        let s4 = minimal_periodic_spectrum::<f64>(4).unwrap();
        assert_abs_diff_eq!(complexity(&s4, 1.0).unwrap().mean_abs_phase, 1.75 * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(complexity(&OrbitSpectrum::<f64>::aperiodic(), 2.0).unwrap().value, 2.0 * PI);
        assert!(complexity(&s2, -1.0).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let s2 = minimal_periodic_spectrum::<f64>(2).unwrap();
        let rep = check_lower_bound(&s2, &[0.0, 0.5, 1.0]);
        assert!(rep.passed());
        assert_abs_diff_eq!(2.0 - 2.0 * overlap_any(&s2, 0.5).re, 1.0, epsilon = 1e-15);
        for p in [2, 4, 8, 64] {
            let s = minimal_periodic_spectrum::<f64>(p).unwrap();
            assert_abs_diff_eq!(2.0 - 2.0 * overlap_any(&s, 1.0).re, 2.0, epsilon = 1e-12);
            assert!(complexity(&s, 1.0).unwrap().value >= 1.0);
        }
    }

    #[test]
    fn lower_bound_on_continuous_density() {
        let rep = check_lower_bound(&OrbitSpectrum::<f64>::aperiodic(), &time_grid(10.0, 1001));
        assert!(rep.passed());
    }

    #[test]
    fn zero_counts() {
        assert_eq!(zero_count(&point(0.0), 256).unwrap(), 0);
        assert_eq!(zero_count(&point(1.0), 1024).unwrap(), 0);
        let counts: Vec<usize> = [2, 4, 8]
            .iter()
            .map(|p| zero_count(&minimal_periodic_spectrum::<f64>(*p).unwrap(), 1024).unwrap())
            .collect();
        // dense-sampling oracle, independent of this implementation
        assert_eq!(counts, vec![2, 5, 5]);
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        assert!(zero_count(&point(0.0), 100).is_err());
    }

    #[test]
    fn grid_shape() {
        assert_eq!(time_grid(1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(time_grid::<f64>(1.0, 1), vec![0.0]);
        assert!(time_grid::<f64>(1.0, 0).is_empty());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn bound_holds_for_any_spectrum(
                pts in proptest::collection::vec((-30.0f64..30.0, 0.01f64..1.0), 1..10),
                t in 0.0f64..20.0,
            ) {
                let total: f64 = pts.iter().map(|(_, w)| w).sum();
                let spec = OrbitSpectrum::new(
                    pts.iter().map(|(x, _)| *x).collect(),
                    pts.iter().map(|(_, w)| w / total).collect(),
                    Period::Finite(pts.len()),
                ).unwrap();
                prop_assert!(check_lower_bound(&spec, &[t]).passed());
            }

            #[test]
            fn complexity_linear_in_t(half_p in 1usize..40, t in 0.0f64..10.0) {
                let s = minimal_periodic_spectrum::<f64>(2 * half_p).unwrap();
                let c1 = complexity(&s, t).unwrap();
                let c2 = complexity(&s, 2.0 * t).unwrap();
                prop_assert!((c2.value - 2.0 * c1.value).abs() <= 1e-12 * (1.0 + c2.value));
                prop_assert!(c1.value >= 0.0);
            }
        }
    }
}
