//! Disjoint spectra for all problem instances up to a size bound.
//!
//! Instance `m` of size `n` receives `2^ν_n` eigenphases with
//! `λ_k / 2π ≡ (m + k 2^n) / 2^{n+ν_n} (mod 1)`; the integer part `I` of
//! `λ_k / 2π` must have the parity of `k`, which keeps every half-cycle
//! amplitude equal to the minimal one. Points are placed greedily, size by
//! size, in the free interval `[2πI, 2π(I+1))` closest to zero.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::{PI, TAU};

use num_complex::Complex;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{OrbitSpectrum, Period};

/// Upper limit on the number of assigned eigenphases.
pub const DEFAULT_POINT_CAP: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalPolicy {
    /// Any integer interval of the right parity; energy grows with `|λ|`.
    Signed,
    /// Only intervals `I >= 0`.
    NonNegative,
}

/// One assigned eigenphase, `λ = 2π · numer / 2^log2_den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PackedPoint {
    pub k: u64,
    pub interval: i64,
    pub numer: i64,
    pub log2_den: u32,
}

impl PackedPoint {
    pub fn phase(&self) -> f64 {
        TAU * self.numer as f64 / (1u64 << self.log2_den) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceSpectrum {
    pub size: u32,
    pub instance: u64,
    pub points: Vec<PackedPoint>,
    /// `Σ_k |λ_k| / 2^ν_n`.
    pub energy: f64,
}

impl InstanceSpectrum {
    pub fn period(&self) -> usize {
        self.points.len()
    }

    pub fn spectrum<T: Scalar>(&self) -> Result<OrbitSpectrum<T>> {
        let w = T::one() / T::of_usize(self.points.len());
        OrbitSpectrum::new(
            self.points.iter().map(|pt| T::of(pt.phase())).collect(),
            vec![w; self.points.len()],
            Period::Finite(self.points.len()),
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PackingReport {
    pub n_max: u32,
    pub nu: Vec<u32>,
    pub policy: IntervalPolicy,
    pub instances: Vec<InstanceSpectrum>,
    /// No eigenphase is shared, within or across instances.
    pub disjoint: bool,
    pub parity_ok: bool,
    /// The size-`n` fractions cover the `2^{-(n+ν_n)}` lattice exactly once.
    pub lattice_ok: bool,
    /// After size `n`, exactly `Σ_{n' <= n} 2^{n'+ν_{n'}}` points are placed.
    pub cumulative_ok: bool,
    pub max_energy: f64,
    pub energy_bound: f64,
    /// Interval occupancy after each size pass.
    pub occupancy: Vec<BTreeMap<i64, u64>>,
    /// The counts `2^{n-k+ν_n}`, `0 <= k < n`, predicted for interval `k` after size `n`.
    pub predicted_occupancy: Vec<Vec<u64>>,
    /// Total of the prescribed fill counts for size `n`, against `2^{n+ν_n}` assigned.
    pub prescribed_fill: Vec<(u64, u64)>,
    pub violations: Vec<String>,
}

impl PackingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn instance(&self, size: u32, m: u64) -> Option<&InstanceSpectrum> {
        self.instances.iter().find(|s| s.size == size && s.instance == m)
    }
}

/// `ν_n = n`.
pub fn default_exponents(n_max: u32) -> Vec<u32> {
    (0..=n_max).collect()
}

fn candidates(parity: i64, policy: IntervalPolicy) -> impl Iterator<Item = i64> {
    (0i64..).flat_map(move |t| {
        let (a, b) = match policy {
            IntervalPolicy::NonNegative => (parity + 2 * t, None),
            // ordered by |I + f| for f in [0, 1); ties at f = 0 go to the negative side
            IntervalPolicy::Signed if parity == 0 => {
                if t == 0 {
                    (0, None)
                } else {
                    (-2 * t, Some(2 * t))
                }
            }
            IntervalPolicy::Signed => (-(2 * t + 1), Some(2 * t + 1)),
        };
        std::iter::once(a).chain(b)
    })
}

pub fn pack_spectrum(n_max: u32, nu: &[u32], policy: IntervalPolicy) -> Result<PackingReport> {
    pack_spectrum_capped(n_max, nu, policy, DEFAULT_POINT_CAP)
}

pub fn pack_spectrum_capped(n_max: u32, nu: &[u32], policy: IntervalPolicy, cap: u64) -> Result<PackingReport> {
    if nu.len() != n_max as usize + 1 {
        return Err(Error::Precondition(format!(
            "need {} exponents for sizes 0..={n_max}, got {}",
            n_max + 1,
            nu.len()
        )));
    }
    if nu.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition(format!("exponents must increase strictly: {nu:?}")));
    }
    let r_max = n_max + nu[n_max as usize];
    if r_max > 40 {
        return Err(Error::Capacity(format!("2^{r_max} lattice points per instance set")));
    }
    let total: u64 = (0..=n_max).map(|n| 1u64 << (n + nu[n as usize])).sum();
    if total > cap {
        return Err(Error::Capacity(format!("{total} eigenphases requested, limit {cap}")));
    }

    let mut used: HashSet<(i64, u64)> = HashSet::new();
    let mut instances = Vec::new();
    let mut occupancy = Vec::new();
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    let mut predicted_occupancy = Vec::new();
    let mut prescribed_fill = Vec::new();
    let mut violations = Vec::new();
    let mut disjoint = true;
    let mut parity_ok = true;
    let mut lattice_ok = true;
    let mut cumulative_ok = true;
    let mut placed = 0u64;
    let mut expected = 0u64;

    for n in 0..=n_max {
        let v = nu[n as usize];
        let r = n + v;
        let mut lattice = vec![false; 1usize << r];
        for m in 0..(1u64 << n) {
            let mut points = Vec::with_capacity(1usize << v);
            let mut numer_sum = 0u128;
            for k in 0..(1u64 << v) {
                let j = m + (k << n);
                let key_frac = j << (r_max - r);
                let parity = (k % 2) as i64;
                let interval = candidates(parity, policy)
                    .find(|i| !used.contains(&(*i, key_frac)))
                    .expect("candidate intervals are unbounded");
                used.insert((interval, key_frac));
                let numer = (interval << r) + j as i64;
                numer_sum += numer.unsigned_abs() as u128;
                if interval.rem_euclid(2) != parity {
                    parity_ok = false;
                }
                let slot = &mut lattice[j as usize];
                if *slot {
                    lattice_ok = false;
                }
                *slot = true;
                *counts.entry(interval).or_default() += 1;
                points.push(PackedPoint { k, interval, numer, log2_den: r });
            }
            let energy = TAU * numer_sum as f64 / (1u128 << (r + v)) as f64;
            instances.push(InstanceSpectrum { size: n, instance: m, points, energy });
            placed += 1 << v;
        }
        lattice_ok &= lattice.iter().all(|x| *x);
        expected += 1u64 << r;
        if placed != expected || used.len() as u64 != expected {
            cumulative_ok = false;
        }
        occupancy.push(counts.clone());
        predicted_occupancy.push((0..n).map(|k| 1u64 << (n - k + v)).collect::<Vec<_>>());
        let fill = if n == 0 {
            1
        } else {
            let prev = nu[n as usize - 1];
            (0..n).map(|k| (1u64 << (n - k + v)) - (1u64 << (n - k - 1 + prev))).sum::<u64>() + (1u64 << v)
        };
        prescribed_fill.push((fill, 1u64 << r));
    }

    // exhaustive pairwise scan on sorted exact keys
    let keys: Vec<Vec<i64>> = instances
        .iter()
        .map(|s| {
            let mut ks: Vec<i64> = s.points.iter().map(|p| p.numer << (r_max - p.log2_den)).collect();
            ks.sort_unstable();
            ks
        })
        .collect();
    for (a, ka) in keys.iter().enumerate() {
        if ka.windows(2).any(|w| w[0] == w[1]) {
            disjoint = false;
            violations.push(format!(
                "instance ({}, {}) has a degenerate eigenphase",
                instances[a].size, instances[a].instance
            ));
        }
        for (b, kb) in keys.iter().enumerate().skip(a + 1) {
            if sorted_intersect(ka, kb) {
                disjoint = false;
                violations.push(format!(
                    "instances ({}, {}) and ({}, {}) share an eigenphase",
                    instances[a].size, instances[a].instance, instances[b].size, instances[b].instance
                ));
            }
        }
    }

    let energy_bound = 4.0 * PI;
    let max_energy = instances.iter().map(|s| s.energy).fold(0.0, f64::max);
    for s in &instances {
        if s.energy > energy_bound {
            violations.push(format!(
                "instance ({}, {}) has energy {:.6}π above 4π",
                s.size,
                s.instance,
                s.energy / PI
            ));
        }
    }
    if !parity_ok {
        violations.push("an eigenphase sits in an interval of the wrong parity".into());
    }
    if !lattice_ok {
        violations.push("a size pass does not cover its fraction lattice exactly once".into());
    }
    if !cumulative_ok {
        violations.push("cumulative point count differs from the sum of 2^{n+ν_n}".into());
    }

    Ok(PackingReport {
        n_max,
        nu: nu.to_vec(),
        policy,
        instances,
        disjoint,
        parity_ok,
        lattice_ok,
        cumulative_ok,
        max_energy,
        energy_bound,
        occupancy,
        predicted_occupancy,
        prescribed_fill,
        violations,
    })
}

fn sorted_intersect<K: Ord>(a: &[K], b: &[K]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

fn windowed_nu(phases: &[f64], window: &[usize]) -> f64 {
    let w = 1.0 / phases.len() as f64;
    window
        .iter()
        .map(|&j| {
            let u = j as f64 - 0.5;
            phases
                .iter()
                .map(|lam| Complex::from_polar(w, -lam * u))
                .sum::<Complex<f64>>()
                .norm_sqr()
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZetaEstimate {
    pub unshifted: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub draws: usize,
}

/// Monte-Carlo estimate of the windowed success probability when every
/// eigenphase is raised by `4π ζ_k` with `ζ_k` uniform on `0..=zeta_max`.
pub fn zeta_nu_estimate<R: Rng + ?Sized>(
    inst: &InstanceSpectrum,
    window: &[usize],
    draws: usize,
    zeta_max: u32,
    rng: &mut R,
) -> Result<ZetaEstimate> {
    let p = inst.period();
    if let Some(j) = window.iter().find(|j| **j >= p) {
        return Err(Error::Precondition(format!("window index {j} outside period {p}")));
    }
    if draws == 0 {
        return Err(Error::Precondition("need at least one draw".into()));
    }
    let base: Vec<f64> = inst.points.iter().map(PackedPoint::phase).collect();
    let unshifted = windowed_nu(&base, window);
    let (mut sum, mut min, mut max) = (0.0, f64::INFINITY, f64::NEG_INFINITY);
    let mut shifted = base.clone();
    for _ in 0..draws {
        for (s, b) in shifted.iter_mut().zip(&base) {
            *s = b + 2.0 * TAU * rng.random_range(0..=zeta_max) as f64;
        }
        let nu = windowed_nu(&shifted, window);
        sum += nu;
        min = min.min(nu);
        max = max.max(nu);
    }
    Ok(ZetaEstimate { unshifted, mean: sum / draws as f64, min, max, draws })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::spectral::{halfstep_profile_periodic, nu_of, overlap_at};

    #[test]
    fn size_zero_is_the_origin() {
        let rep = pack_spectrum(0, &[0], IntervalPolicy::Signed).unwrap();
        assert_eq!(rep.instances.len(), 1);
        let pt = rep.instances[0].points[0];
        assert_eq!(pt.phase(), 0.0);
        assert_eq!(rep.instances[0].energy, 0.0);
        assert!(rep.passed());
    }

    #[test]
    fn four_sizes_disjoint_and_bounded() {
        let rep = pack_spectrum(4, &default_exponents(4), IntervalPolicy::Signed).unwrap();
        assert_eq!(rep.instances.len(), 31);
        assert!(rep.disjoint && rep.parity_ok && rep.lattice_ok && rep.cumulative_ok);
        assert!(rep.passed(), "{:?}", rep.violations);
        // greedy worst case, recomputed independently: 53/16 π
        assert!((rep.max_energy / PI - 3.3125).abs() < 1e-12);
    }

    #[test]
    fn greedy_energy_growth() {
        // worst instance energy / π for ν_n = n, from an independent script
        for (n_max, want) in [(1u32, 2.5), (2, 2.5), (3, 3.125), (4, 3.3125)] {
            let rep = pack_spectrum(n_max, &default_exponents(n_max), IntervalPolicy::Signed).unwrap();
            assert!((rep.max_energy / PI - want).abs() < 1e-12, "n_max {n_max}: {}", rep.max_energy / PI);
        }
    }

    #[test]
    fn nonnegative_policy_is_disjoint_but_exceeds_bound() {
        let rep = pack_spectrum(4, &default_exponents(4), IntervalPolicy::NonNegative).unwrap();
        assert!(rep.disjoint && rep.parity_ok && rep.lattice_ok);
        assert!(rep.instances.iter().flat_map(|s| &s.points).all(|p| p.interval >= 0));
        assert!(rep.max_energy > 4.0 * PI);
        assert!(!rep.passed());
    }

    #[test]
    fn prescribed_fill_does_not_telescope() {
        let rep = pack_spectrum(2, &default_exponents(2), IntervalPolicy::Signed).unwrap();
        assert_eq!(rep.prescribed_fill[0], (1, 1));
        assert_eq!(rep.prescribed_fill[1], (5, 4));
        assert_eq!(rep.predicted_occupancy[1], vec![4]);
    }

    #[test]
    fn packed_instance_matches_minimal_profile() {
        let rep = pack_spectrum(3, &default_exponents(3), IntervalPolicy::Signed).unwrap();
        let inst = rep.instance(3, 5).unwrap();
        let spec = inst.spectrum::<f64>().unwrap();
        let minimal = halfstep_profile_periodic::<f64>(8).unwrap();
        for j in 0..8 {
            let a = overlap_at(&spec, j as f64 - 0.5).unwrap();
            assert!((a.norm() - minimal.amplitudes()[j].norm()).abs() < 1e-12);
        }
        let window: Vec<usize> = (2..6).collect();
        let est = zeta_nu_estimate(inst, &window, 200, 3, &mut stream(1, "zeta", 0)).unwrap();
        let nu = nu_of(&minimal, &window).unwrap();
        assert!((est.unshifted - nu).abs() < 1e-12);
        assert!((est.min - nu).abs() < 1e-9 && (est.max - nu).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(pack_spectrum(2, &[0, 1], IntervalPolicy::Signed).is_err());
        assert!(pack_spectrum(2, &[0, 1, 1], IntervalPolicy::Signed).is_err());
        assert!(matches!(
            pack_spectrum_capped(4, &default_exponents(4), IntervalPolicy::Signed, 100),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn candidate_order() {
        let even: Vec<i64> = candidates(0, IntervalPolicy::Signed).take(5).collect();
        assert_eq!(even, vec![0, -2, 2, -4, 4]);
        let odd: Vec<i64> = candidates(1, IntervalPolicy::Signed).take(4).collect();
        assert_eq!(odd, vec![-1, 1, -3, 3]);
        let nn: Vec<i64> = candidates(1, IntervalPolicy::NonNegative).take(3).collect();
        assert_eq!(nn, vec![1, 3, 5]);
    }
}
