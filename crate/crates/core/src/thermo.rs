//! Zero-point energy, internal energy and specific heat per unit cell, with
//! the Debye and Einstein reference models.
//!
//! Integrals against `dφ` are weighted sums over [`SpectralSamples`]. At
//! `λ = 0` the integrands take their continuity limits: `KT` for the energy
//! and `K` for the specific heat.

use crate::dos::{spectral_average, SpectralSamples};
use crate::numerics::integrate_interval;
use std::f64::consts::PI;
use std::io::Write;
use thiserror::Error;

/// Past this `ℏω/KT` the Bose factor is taken as zero.
const BOSE_CUTOFF: f64 = 700.0;
/// Upper limit for the Debye integral; the integrand is below `e^{-190}` there.
const DEBYE_X_MAX: f64 = 200.0;

#[derive(Debug, Error, PartialEq)]
pub enum ThermoError {
    #[error("temperature must be positive, got {0}")]
    NonpositiveTemperature(f64),
    #[error("{name} must be positive, got {value}")]
    Nonpositive { name: &'static str, value: f64 },
    #[error("temperature range needs 0 < tmin <= tmax and at least one step")]
    BadRange,
}

pub type Result<T> = std::result::Result<T, ThermoError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub boltzmann: f64,
}

impl PhysicalConstants {
    pub const NATURAL: PhysicalConstants = PhysicalConstants { hbar: 1.0, boltzmann: 1.0 };
    /// CODATA 2018 exact values, J·s and J/K.
    pub const SI: PhysicalConstants = PhysicalConstants { hbar: 1.054_571_817e-34, boltzmann: 1.380_649e-23 };

    pub fn new(hbar: f64, boltzmann: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        positive("boltzmann", boltzmann)?;
        Ok(PhysicalConstants { hbar, boltzmann })
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::NATURAL
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ThermoError::Nonpositive { name, value })
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(ThermoError::NonpositiveTemperature(t))
    }
}

/// `ℏω / (e^{ℏω/KT} − 1)` for `ω = √λ`.
fn energy_integrand(lambda: f64, t: f64, c: &PhysicalConstants) -> f64 {
    let kt = c.boltzmann * t;
    let e = c.hbar * lambda.max(0.0).sqrt();
    if e == 0.0 {
        return kt;
    }
    let x = e / kt;
    if x > BOSE_CUTOFF {
        0.0
    } else {
        e / x.exp_m1()
    }
}

/// `K x² eˣ/(eˣ − 1)²`, written with `e^{−x}` to stay finite.
fn heat_kernel(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else if x > BOSE_CUTOFF {
        0.0
    } else {
        let d = (-x).exp_m1();
        x * x * (-x).exp() / (d * d)
    }
}

fn heat_integrand(lambda: f64, t: f64, c: &PhysicalConstants) -> f64 {
    let x = c.hbar * lambda.max(0.0).sqrt() / (c.boltzmann * t);
    c.boltzmann * heat_kernel(x)
}

/// `U₀ = (ℏ/2) ∫ √λ dφ`.
pub fn zero_point_energy(samples: &SpectralSamples, consts: &PhysicalConstants) -> f64 {
    0.5 * consts.hbar * spectral_average(samples, |l| l.max(0.0).sqrt())
}

pub fn internal_energy(samples: &SpectralSamples, t: f64, consts: &PhysicalConstants) -> Result<f64> {
    check_temperature(t)?;
    Ok(spectral_average(samples, |l| energy_integrand(l, t, consts)))
}

pub fn specific_heat(samples: &SpectralSamples, t: f64, consts: &PhysicalConstants) -> Result<f64> {
    check_temperature(t)?;
    Ok(spectral_average(samples, |l| heat_integrand(l, t, consts)))
}

/// `λ_D = (3n/c₀)^{2/3}`.
pub fn debye_lambda(c0: f64, n: usize) -> Result<f64> {
    positive("c0", c0)?;
    if n == 0 {
        return Err(ThermoError::Nonpositive { name: "n", value: 0.0 });
    }
    Ok((3.0 * n as f64 / c0).powf(2.0 / 3.0))
}

/// `Θ_D = (ℏ/K) √λ_D`.
pub fn debye_temperature(lambda_d: f64, consts: &PhysicalConstants) -> Result<f64> {
    positive("lambda_D", lambda_d)?;
    Ok(consts.hbar / consts.boltzmann * lambda_d.sqrt())
}

/// `9nK (T/Θ)³ ∫₀^{Θ/T} x⁴eˣ/(eˣ−1)² dx`.
pub fn debye_specific_heat(theta: f64, n: usize, t: f64, consts: &PhysicalConstants) -> Result<f64> {
    check_temperature(t)?;
    positive("theta", theta)?;
    let upper = (theta / t).min(DEBYE_X_MAX);
    let panels = upper.ceil().max(1.0) as usize;
    let integral = integrate_interval(|x| x * x * heat_kernel(x), 0.0, upper, panels, 16);
    Ok(9.0 * n as f64 * consts.boltzmann * (t / theta).powi(3) * integral)
}

/// `3nK x² eˣ/(eˣ−1)²` with `x = ℏ√λ₀/KT`.
pub fn einstein_specific_heat(lambda0: f64, n: usize, t: f64, consts: &PhysicalConstants) -> Result<f64> {
    check_temperature(t)?;
    positive("lambda0", lambda0)?;
    Ok(3.0 * n as f64 * heat_integrand(lambda0, t, consts))
}

/// Low-temperature laws `U₁ ~ u·T⁴` and `C ~ c·T³`; returns `(u, c)`.
pub fn t3_coefficients(c0: f64, consts: &PhysicalConstants) -> Result<(f64, f64)> {
    positive("c0", c0)?;
    let base = PI.powi(4) * c0 * consts.boltzmann.powi(4) / consts.hbar.powi(3);
    Ok((0.2 * base, 0.8 * base))
}

/// `count` temperatures from `tmin` to `tmax`, evenly spaced in `log T`.
pub fn log_spaced(tmin: f64, tmax: f64, count: usize) -> Result<Vec<f64>> {
    if !(tmin > 0.0 && tmax >= tmin && tmax.is_finite()) || count == 0 {
        return Err(ThermoError::BadRange);
    }
    if count == 1 {
        return Ok(vec![tmin]);
    }
    let (a, b) = (tmin.ln(), tmax.ln());
    let mut out: Vec<f64> = (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect();
    out[0] = tmin;
    out[count - 1] = tmax;
    Ok(out)
}

/// Sample-based curves with the two reference models alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoCurve {
    pub temperatures: Vec<f64>,
    pub u1: Vec<f64>,
    pub c: Vec<f64>,
    pub c_debye: Vec<f64>,
    pub c_einstein: Vec<f64>,
}

/// Reference-model inputs for [`thermo_curve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceModels {
    pub theta_debye: f64,
    pub lambda0: f64,
    /// Vertices per unit cell.
    pub n: usize,
}

#[cfg(feature = "parallel")]
fn map_temps<U: Send>(temps: &[f64], f: impl Fn(f64) -> Result<U> + Sync + Send) -> Result<Vec<U>> {
    use rayon::prelude::*;
    temps.par_iter().map(|&t| f(t)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_temps<U: Send>(temps: &[f64], f: impl Fn(f64) -> Result<U> + Sync + Send) -> Result<Vec<U>> {
    temps.iter().map(|&t| f(t)).collect()
}

pub fn thermo_curve(
    samples: &SpectralSamples,
    temperatures: &[f64],
    models: &ReferenceModels,
    consts: &PhysicalConstants,
) -> Result<ThermoCurve> {
    if temperatures.windows(2).any(|w| w[1] < w[0]) {
        return Err(ThermoError::BadRange);
    }
    let rows = map_temps(temperatures, |t| {
        Ok([
            internal_energy(samples, t, consts)?,
            specific_heat(samples, t, consts)?,
            debye_specific_heat(models.theta_debye, models.n, t, consts)?,
            einstein_specific_heat(models.lambda0, models.n, t, consts)?,
        ])
    })?;
    Ok(ThermoCurve {
        temperatures: temperatures.to_vec(),
        u1: rows.iter().map(|r| r[0]).collect(),
        c: rows.iter().map(|r| r[1]).collect(),
        c_debye: rows.iter().map(|r| r[2]).collect(),
        c_einstein: rows.iter().map(|r| r[3]).collect(),
    })
}

impl ThermoCurve {
    /// CSV with columns `T, U1, C, C_debye, C_einstein`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        use crate::bloch::fmt_f64;
        writeln!(out, "T,U1,C,C_debye,C_einstein")?;
        for i in 0..self.temperatures.len() {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(self.temperatures[i]),
                fmt_f64(self.u1[i]),
                fmt_f64(self.c[i]),
                fmt_f64(self.c_debye[i]),
                fmt_f64(self.c_einstein[i])
            )?;
        }
        Ok(())
    }
}
