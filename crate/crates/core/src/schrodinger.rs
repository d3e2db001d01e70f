//! Certificates that a tuple of states cannot share one orbit of `-Δ + V`.
//!
//! If `Σ a_k = 0` and `Σ a_k |h_k|² = 0` pointwise, every potential term
//! `Σ a_k ⟨h_k, V h_k⟩` cancels, while energy conservation along an orbit
//! forces `Σ a_k ⟨h_k, H h_k⟩ = 0`. A nonzero kinetic mismatch
//! `K = Σ a_k ⟨h_k, -Δ h_k⟩` therefore rules out every such Hamiltonian.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_GRID: usize = 8;

/// Uniform grid `x_i = x_0 + i h`, `i = 0..G`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub x0: f64,
    pub h: f64,
    pub cells: usize,
}

impl Grid {
    /// `cells` points spanning `[-l, l]` inclusive.
    pub fn symmetric(l: f64, cells: usize) -> Result<Self> {
        if cells < MIN_GRID {
            return Err(Error::Precondition(format!("grid needs at least {MIN_GRID} points, got {cells}")));
        }
        if !(l > 0.0) {
            return Err(Error::Precondition(format!("half-width must be positive, got {l}")));
        }
        Ok(Grid { x0: -l, h: 2.0 * l / (cells - 1) as f64, cells })
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.cells).map(|i| self.x(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunctionSet {
    grid: Grid,
    functions: Vec<Vec<Complex<f64>>>,
}

pub const NORM_TOLERANCE: f64 = 1e-10;

fn norm_sq(f: &[Complex<f64>], h: f64) -> f64 {
    f.iter().map(|z| z.norm_sqr()).sum::<f64>() * h
}

impl GridFunctionSet {
    pub fn new(grid: Grid, functions: Vec<Vec<Complex<f64>>>) -> Result<Self> {
        if grid.cells < MIN_GRID {
            return Err(Error::Precondition(format!("grid needs at least {MIN_GRID} points, got {}", grid.cells)));
        }
        for (k, f) in functions.iter().enumerate() {
            if f.len() != grid.cells {
                return Err(Error::Precondition(format!(
                    "function {k} has {} samples on a {}-point grid",
                    f.len(),
                    grid.cells
                )));
            }
            let n = norm_sq(f, grid.h);
            if (n - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::Precondition(format!("function {k} has discrete norm² {n}, not 1")));
            }
        }
        Ok(GridFunctionSet { grid, functions })
    }

    /// Rescales each function to unit discrete norm first.
    pub fn normalized(grid: Grid, mut functions: Vec<Vec<Complex<f64>>>) -> Result<Self> {
        for (k, f) in functions.iter_mut().enumerate() {
            let n = norm_sq(f, grid.h);
            if !(n > 0.0) {
                return Err(Error::Precondition(format!("function {k} vanishes on the grid")));
            }
            let s = n.sqrt();
            f.iter_mut().for_each(|z| *z /= s);
        }
        Self::new(grid, functions)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn functions(&self) -> &[Vec<Complex<f64>>] {
        &self.functions
    }

    /// Every other grid point, keeping both ends; needs an odd point count.
    pub fn coarsened(&self) -> Result<Self> {
        if self.grid.cells.is_multiple_of(2) {
            return Err(Error::Precondition("coarsening needs an odd number of grid points".into()));
        }
        let grid = Grid { x0: self.grid.x0, h: 2.0 * self.grid.h, cells: self.grid.cells / 2 + 1 };
        let functions = self.functions.iter().map(|f| f.iter().step_by(2).copied().collect()).collect();
        Self::normalized(grid, functions)
    }

    /// Columns `x, re_0, im_0, re_1, im_1, ...`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        if headers.len() < 3 || headers.len() % 2 == 0 {
            return Err(Error::Parse(format!(
                "expected columns x, re, im (repeated re, im per function), got {} columns",
                headers.len()
            )));
        }
        let n = (headers.len() - 1) / 2;
        let mut xs = Vec::new();
        let mut functions = vec![Vec::new(); n];
        for (row, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(format!("row {}: {e}", row + 2)))?;
            let num = |c: usize| -> Result<f64> {
                rec[c].parse::<f64>().map_err(|e| {
                    Error::Parse(format!("row {}, column {:?}: {e}", row + 2, &headers[c]))
                })
            };
            xs.push(num(0)?);
            for (k, f) in functions.iter_mut().enumerate() {
                f.push(Complex::new(num(1 + 2 * k)?, num(2 + 2 * k)?));
            }
        }
        if xs.len() < MIN_GRID {
            return Err(Error::Precondition(format!("grid needs at least {MIN_GRID} points, got {}", xs.len())));
        }
        let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        if !(h > 0.0) {
            return Err(Error::Parse("x column must increase".into()));
        }
        for (i, x) in xs.iter().enumerate() {
            if (x - (xs[0] + i as f64 * h)).abs() > 1e-9 * h.max(1.0) {
                return Err(Error::Parse(format!("x column is not uniform at row {}", i + 2)));
            }
        }
        Self::new(Grid { x0: xs[0], h, cells: xs.len() }, functions)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x");
        for k in 0..self.functions.len() {
            out.push_str(&format!(",re_{k},im_{k}"));
        }
        out.push('\n');
        for i in 0..self.grid.cells {
            out.push_str(&format!("{:.16e}", self.grid.x(i)));
            for f in &self.functions {
                out.push_str(&format!(",{:.16e},{:.16e}", f[i].re, f[i].im));
            }
            out.push('\n');
        }
        out
    }

    /// `⟨h_k, -Δ h_k⟩` with the three-point Laplacian and zero boundary values.
    pub fn kinetic(&self, k: usize) -> f64 {
        let f = &self.functions[k];
        let h = self.grid.h;
        let mut edges = f[0].norm_sqr() + f[f.len() - 1].norm_sqr();
        for w in f.windows(2) {
            edges += (w[1] - w[0]).norm_sqr();
        }
        edges / h
    }

    /// `Σ_k a_k ⟨h_k, V h_k⟩` for a potential sampled on the grid.
    pub fn potential_mismatch(&self, a: &[f64], v: &[f64]) -> f64 {
        a.iter()
            .zip(&self.functions)
            .map(|(ak, f)| ak * f.iter().zip(v).map(|(z, vi)| vi * z.norm_sqr()).sum::<f64>() * self.grid.h)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Certificate {
    /// No Hamiltonian `-Δ + V` has an orbit through all the states.
    Obstruction { coefficients: Vec<f64>, kinetic_mismatch: f64, tolerance: f64, nullity: usize },
    /// The test is inconclusive.
    Absence { reason: String, nullity: usize, kinetic_mismatch: Option<f64>, tolerance: Option<f64> },
}

impl Certificate {
    pub fn is_obstruction(&self) -> bool {
        matches!(self, Certificate::Obstruction { .. })
    }

    pub fn kinetic_mismatch(&self) -> Option<f64> {
        match self {
            Certificate::Obstruction { kinetic_mismatch, .. } => Some(*kinetic_mismatch),
            Certificate::Absence { kinetic_mismatch, .. } => *kinetic_mismatch,
        }
    }
}

pub const NULLSPACE_THRESHOLD: f64 = 1e-10;

/// Basis of `{a : Σ a_k = 0, Σ a_k |h_k(x_i)|² = 0 for all i}`, each vector
/// scaled to unit max-norm with a positive first nonzero entry.
pub fn moduli_nullspace(set: &GridFunctionSet) -> Vec<Vec<f64>> {
    let n = set.functions.len();
    let g = set.grid.cells;
    let scale = set
        .functions
        .iter()
        .flat_map(|f| f.iter().map(|z| z.norm_sqr()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let m = DMatrix::from_fn(g + 1, n, |i, k| if i == 0 { scale } else { set.functions[k][i - 1].norm_sqr() });
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut basis = Vec::new();
    // singular values beyond the row count of a wide system are implicitly zero
    let ranked = svd.singular_values.len();
    for r in 0..n {
        let null = r >= ranked || svd.singular_values[r] <= NULLSPACE_THRESHOLD * sigma_max;
        if null && r < v_t.nrows() {
            basis.push(v_t.row(r).iter().copied().collect::<Vec<f64>>());
        }
    }
    for v in &mut basis {
        let big = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let lead = v.iter().find(|x| x.abs() > 1e-12 * big).copied().unwrap_or(1.0);
        let s = lead.signum() * big;
        v.iter_mut().for_each(|x| *x /= s);
    }
    basis
}

/// Default tolerance: `10³ · ε · Σ |a_k| |⟨h_k, -Δ h_k⟩|`.
pub fn default_tolerance(set: &GridFunctionSet, a: &[f64]) -> f64 {
    1e3 * f64::EPSILON * a.iter().enumerate().map(|(k, ak)| ak.abs() * set.kinetic(k).abs()).sum::<f64>()
}

pub fn obstruction_certificate(set: &GridFunctionSet, tolerance: Option<f64>) -> Result<Certificate> {
    if set.functions.len() < 2 {
        return Err(Error::Precondition(format!("need at least two states, got {}", set.functions.len())));
    }
    if set.grid.cells < MIN_GRID {
        return Err(Error::Precondition(format!("grid needs at least {MIN_GRID} points")));
    }
    let basis = moduli_nullspace(set);
    let nullity = basis.len();
    if nullity == 0 {
        return Ok(Certificate::Absence {
            reason: "the moduli constraints admit only a = 0".into(),
            nullity,
            kinetic_mismatch: None,
            tolerance: None,
        });
    }
    let kinetic: Vec<f64> = (0..set.functions.len()).map(|k| set.kinetic(k)).collect();
    let (a, k_val) = basis
        .into_iter()
        .map(|a| {
            let k = a.iter().zip(&kinetic).map(|(ak, t)| ak * t).sum::<f64>();
            (a, k)
        })
        .fold(None::<(Vec<f64>, f64)>, |best, cur| match best {
            Some(b) if b.1.abs() >= cur.1.abs() => Some(b),
            _ => Some(cur),
        })
        .expect("non-empty basis");
    let tol = tolerance.unwrap_or_else(|| default_tolerance(set, &a));
    if k_val.abs() > tol {
        Ok(Certificate::Obstruction { coefficients: a, kinetic_mismatch: k_val, tolerance: tol, nullity })
    } else {
        Ok(Certificate::Absence {
            reason: "kinetic mismatch within tolerance".into(),
            nullity,
            kinetic_mismatch: Some(k_val),
            tolerance: Some(tol),
        })
    }
}

/// `π^{-1/4} σ^{-1/2} exp(-x² / 2σ²)`.
pub fn gaussian(x: f64, sigma: f64) -> Complex<f64> {
    let norm = std::f64::consts::PI.powf(-0.25) / sigma.sqrt();
    Complex::new(norm * (-x * x / (2.0 * sigma * sigma)).exp(), 0.0)
}

/// A unit Gaussian and the same Gaussian times `exp(i x²)`.
pub fn chirped_gaussian_pair(l: f64, cells: usize) -> Result<GridFunctionSet> {
    let grid = Grid::symmetric(l, cells)?;
    let h1: Vec<_> = grid.points().iter().map(|x| gaussian(*x, 1.0)).collect();
    let h2 = grid.points().iter().zip(&h1).map(|(x, g)| g * Complex::from_polar(1.0, x * x)).collect();
    GridFunctionSet::normalized(grid, vec![h1, h2])
}

pub fn identical_gaussian_pair(l: f64, cells: usize) -> Result<GridFunctionSet> {
    let grid = Grid::symmetric(l, cells)?;
    let h: Vec<_> = grid.points().iter().map(|x| gaussian(*x, 1.0)).collect();
    GridFunctionSet::normalized(grid, vec![h.clone(), h])
}

pub fn two_width_gaussians(l: f64, cells: usize, s1: f64, s2: f64) -> Result<GridFunctionSet> {
    let grid = Grid::symmetric(l, cells)?;
    let f = |s: f64| grid.points().iter().map(|x| gaussian(*x, s)).collect::<Vec<_>>();
    GridFunctionSet::normalized(grid, vec![f(s1), f(s2)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    #[test]
    fn chirp_yields_certificate() {
        let set = chirped_gaussian_pair(8.0, 1025).unwrap();
        let cert = obstruction_certificate(&set, None).unwrap();
        let Certificate::Obstruction { coefficients, kinetic_mismatch, nullity, .. } = &cert else {
            panic!("expected an obstruction, got {cert:?}");
        };
        assert_eq!(*nullity, 1);
        assert!((coefficients[0] - 1.0).abs() < 1e-9 && (coefficients[1] + 1.0).abs() < 1e-9);
        // continuum value: 1/2 - (1/2 + 4⟨x²⟩) = -2
        assert!((kinetic_mismatch + 2.0).abs() < 1e-2, "{kinetic_mismatch}");
    }

    #[test]
    fn mismatch_converges_quadratically() {
        let fine = chirped_gaussian_pair(8.0, 2049).unwrap();
        let mid = fine.coarsened().unwrap();
        let coarse = mid.coarsened().unwrap();
        let k = |s: &GridFunctionSet| obstruction_certificate(s, None).unwrap().kinetic_mismatch().unwrap();
        let (kf, km, kc) = (k(&fine), k(&mid), k(&coarse));
        let ratio = (kc - km) / (km - kf);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
        let h = fine.grid().h;
        assert!((km - kf).abs() < 10.0 * h * h);
    }

    #[test]
    fn identical_pair_is_absent() {
        let set = identical_gaussian_pair(8.0, 513).unwrap();
        let cert = obstruction_certificate(&set, None).unwrap();
        assert!(!cert.is_obstruction());
        assert!(cert.kinetic_mismatch().unwrap().abs() < 1e-12);
    }

    #[test]
    fn different_widths_admit_only_zero() {
        let set = two_width_gaussians(8.0, 513, 1.0, 1.5).unwrap();
        assert!(moduli_nullspace(&set).is_empty());
        assert!(!obstruction_certificate(&set, None).unwrap().is_obstruction());
    }

    #[test]
    fn potential_terms_cancel() {
        let set = chirped_gaussian_pair(8.0, 513).unwrap();
        let a = &moduli_nullspace(&set)[0];
        let mut rng = stream(5, "potential", 0);
        for _ in 0..20 {
            let v: Vec<f64> = (0..set.grid().cells).map(|_| rng.random_range(-50.0..50.0)).collect();
            assert!(set.potential_mismatch(a, &v).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_round_trip() {
        let set = chirped_gaussian_pair(8.0, 65).unwrap();
        let back = GridFunctionSet::from_csv(&set.to_csv()).unwrap();
        assert_eq!(back.grid().cells, 65);
        for (f, g) in set.functions().iter().zip(back.functions()) {
            for (a, b) in f.iter().zip(g) {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Grid::symmetric(8.0, 7).is_err());
        assert!(matches!(GridFunctionSet::from_csv("x,re\n0,1\n"), Err(Error::Parse(_))));
        let grid = Grid::symmetric(1.0, 9).unwrap();
        assert!(GridFunctionSet::new(grid, vec![vec![Complex::new(1.0, 0.0); 9]]).is_err());
        let single = GridFunctionSet::normalized(grid, vec![vec![Complex::new(1.0, 0.0); 9]]).unwrap();
        assert!(obstruction_certificate(&single, None).is_err());
        let bad = "x,re_0,im_0\n0,1,0\n1,1,0\n5,1,0\n6,1,0\n7,1,0\n8,1,0\n9,1,0\n10,1,0\n";
        assert!(GridFunctionSet::from_csv(bad).is_err());
    }
}
