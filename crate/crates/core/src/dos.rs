//! Integrated density of states from Brillouin-zone sampling.
//!
//! The Γ-centred `N³` grid is exactly the character group of `L / N·L`, so the
//! weighted samples here are the same finite multiset as the normalized
//! spectrum of the `N`-periodic supercell.

use crate::bloch::{self, map_maybe_parallel, BlochError};
use crate::lattice::CrystalSpec;
use crate::numerics::torus_grid;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DosError {
    #[error(transparent)]
    Bloch(#[from] BlochError),
    #[error("grid size must be at least 1")]
    EmptyGrid,
    #[error("fit window ({lo}, {hi}) holds {found} samples; at least {needed} required")]
    InsufficientSamples { lo: f64, hi: f64, found: usize, needed: usize },
    #[error("thresholds must be ascending")]
    UnsortedThresholds,
}

pub type Result<T> = std::result::Result<T, DosError>;

/// Minimum number of sample eigenvalues inside a `fit_c0` window.
pub const MIN_FIT_SAMPLES: usize = 20;

/// Weighted eigenvalues `(λ, w)` sorted by `λ`; the empirical measure `dφ`.
#[derive(Debug, Clone)]
pub struct SpectralSamples {
    pub entries: Vec<(f64, f64)>,
    pub total_weight: f64,
    pub grid_n: usize,
    /// `3n`
    pub branches: usize,
}

impl SpectralSamples {
    /// Builds a sample set from explicit `(λ, w)` pairs, e.g. an Einstein
    /// spectrum.
    pub fn from_entries(mut entries: Vec<(f64, f64)>, branches: usize) -> Self {
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total_weight = entries.iter().map(|e| e.1).sum();
        SpectralSamples { entries, total_weight, grid_n: 0, branches }
    }

    pub fn max_lambda(&self) -> f64 {
        self.entries.last().map_or(0.0, |e| e.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same weights, every eigenvalue multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        SpectralSamples { entries: self.entries.iter().map(|&(l, w)| (l * s, w)).collect(), ..self.clone() }
    }
}

/// Dispersion over the Γ-centred grid `k = (j₁, j₂, j₃)/N`, weight `1/N³` per
/// eigenvalue.
pub fn sample_spectrum(crystal: &CrystalSpec, n: usize) -> Result<SpectralSamples> {
    if n == 0 {
        return Err(DosError::EmptyGrid);
    }
    let grid = torus_grid(n);
    let rows = map_maybe_parallel(&grid.nodes, |k| bloch::dispersion_at(crystal, *k))?;
    let mut entries: Vec<(f64, f64)> = rows
        .into_iter()
        .zip(&grid.weights)
        .flat_map(|(row, &w)| row.into_iter().map(move |l| (l.max(0.0), w)))
        .collect();
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Sum per character, then over characters: exactly 3n·N³·(1/N³).
    let total_weight = crystal.dof() as f64 * grid.weights.iter().sum::<f64>();
    Ok(SpectralSamples { entries, total_weight, grid_n: n, branches: crystal.dof() })
}

/// `φ(λ)`: total weight of samples with eigenvalue `≤ λ`.
pub fn ids(samples: &SpectralSamples, lambda: f64) -> f64 {
    let cut = samples.entries.partition_point(|e| e.0 <= lambda);
    samples.entries[..cut].iter().map(|e| e.1).sum()
}

/// `∫ f dφ = Σ wᵢ f(λᵢ)`.
pub fn spectral_average(samples: &SpectralSamples, f: impl Fn(f64) -> f64) -> f64 {
    samples.entries.iter().map(|&(l, w)| w * f(l)).sum()
}

#[derive(Debug, Clone)]
pub struct IdsCurve {
    pub thresholds: Vec<f64>,
    pub values: Vec<f64>,
}

impl IdsCurve {
    /// CSV with columns `lambda, phi`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "lambda,phi")?;
        for (l, p) in self.thresholds.iter().zip(&self.values) {
            writeln!(out, "{},{}", bloch::fmt_f64(*l), bloch::fmt_f64(*p))?;
        }
        Ok(())
    }
}

/// `φ` at each threshold from a single sorted sweep.
pub fn ids_curve_from_samples(samples: &SpectralSamples, thresholds: &[f64]) -> Result<IdsCurve> {
    if thresholds.windows(2).any(|w| w[1] < w[0]) {
        return Err(DosError::UnsortedThresholds);
    }
    let mut values = Vec::with_capacity(thresholds.len());
    let mut acc = 0.0;
    let mut idx = 0;
    for &t in thresholds {
        while idx < samples.entries.len() && samples.entries[idx].0 <= t {
            acc += samples.entries[idx].1;
            idx += 1;
        }
        values.push(acc);
    }
    Ok(IdsCurve { thresholds: thresholds.to_vec(), values })
}

pub fn ids_curve(crystal: &CrystalSpec, n: usize, thresholds: &[f64]) -> Result<IdsCurve> {
    let samples = sample_spectrum(crystal, n)?;
    ids_curve_from_samples(&samples, thresholds)
}

/// Distinct eigenvalue levels, merging values closer than `rel·λ_max`.
pub fn distinct_levels(samples: &SpectralSamples, rel: f64) -> Vec<f64> {
    let tol = rel * samples.max_lambda().max(f64::MIN_POSITIVE);
    let mut levels: Vec<f64> = Vec::new();
    for &(l, _) in &samples.entries {
        match levels.last() {
            Some(&prev) if l - prev <= tol => {}
            _ => levels.push(l),
        }
    }
    levels
}

/// `(λ_max·10⁻³, λ_max·0.03)`.
pub fn default_fit_window(samples: &SpectralSamples) -> (f64, f64) {
    let m = samples.max_lambda();
    (m * 1e-3, m * 0.03)
}

/// Regression of `φ(λ)` on `λ^{3/2}` through the origin over the window.
///
/// `φ` is a step function, so it is read at the centre of each plateau: the
/// thresholds are midpoints between consecutive distinct sample levels that
/// fall inside the window.
pub fn fit_c0_samples(samples: &SpectralSamples, window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    let found = samples.entries.iter().filter(|e| e.0 >= lo && e.0 <= hi).count();
    let levels = distinct_levels(samples, 1e-9);
    let thresholds: Vec<f64> =
        levels.windows(2).map(|w| 0.5 * (w[0] + w[1])).filter(|t| *t >= lo && *t <= hi).collect();
    if found < MIN_FIT_SAMPLES || thresholds.is_empty() {
        return Err(DosError::InsufficientSamples { lo, hi, found, needed: MIN_FIT_SAMPLES });
    }
    let curve = ids_curve_from_samples(samples, &thresholds)?;
    let (num, den) = curve
        .thresholds
        .iter()
        .zip(&curve.values)
        .fold((0.0, 0.0), |(num, den), (&l, &phi)| (num + phi * l.powf(1.5), den + l.powi(3)));
    Ok(num / den)
}

/// Estimate of `c₀` in `φ(λ) ~ c₀ λ^{3/2}` from an `N³` grid.
pub fn fit_c0(crystal: &CrystalSpec, n: usize, window: Option<(f64, f64)>) -> Result<f64> {
    let samples = sample_spectrum(crystal, n)?;
    let window = window.unwrap_or_else(|| default_fit_window(&samples));
    fit_c0_samples(&samples, window)
}
