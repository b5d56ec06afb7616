//! Acoustic branches near the trivial character and their continuum limit.
//!
//! For an admissible crystal the three acoustic eigenvalues behave like
//! `λ_α(tχ) = t² s_α(χ)² + o(t²)`, where `s_α(χ)²` are the eigenvalues of
//!
//! ```text
//! A_χ = (2π² / m(V₀)) Σ_{e ∈ E₀} (χ·v(e))² A(e).
//! ```
//!
//! Everything downstream (the Debye constant `c₀`, the continuum heat trace,
//! the isotropic Lamé fit) is computed from `A_χ`; the finite-`t` limit is
//! only a cross-check.

use crate::bloch::{self, BlochError, Character};
use crate::geom::{self, Mat3, Vec3};
use crate::lattice::CrystalSpec;
use crate::numerics::{self, eigvalsh_symmetric, NumericsError, SymmetricMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use thiserror::Error;

/// Seed for the random half of the isotropy direction sample.
pub const ISOTROPY_SEED: u64 = 0x1507_7e5c;

#[derive(Debug, Error)]
pub enum AcousticError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Bloch(#[from] BlochError),
    #[error("direction {0:?} is not a unit vector")]
    NonUnitDirection(Vec3),
    #[error("nonpositive sound speed {speed:e} in direction {direction:?}; is the crystal admissible?")]
    NonpositiveSpeed { direction: Vec3, speed: f64 },
    #[error("sphere rule order {0} is below the minimum of 4")]
    OrderTooLow(usize),
    #[error("{0} must be positive")]
    Nonpositive(&'static str),
    #[error("step t = {0} outside (0, 0.1]")]
    StepOutOfRange(f64),
    #[error("heat trace quadrature {quadrature:e} disagrees with closed form {closed_form:e}")]
    ClosedFormMismatch { quadrature: f64, closed_form: f64 },
}

pub type Result<T> = std::result::Result<T, AcousticError>;

#[derive(Debug, Clone)]
pub struct AcousticTensor {
    pub direction: Vec3,
    pub matrix: SymmetricMatrix,
}

impl AcousticTensor {
    /// Ascending eigenvalues `s₁² ≤ s₂² ≤ s₃²`.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eigvalsh_symmetric(&self.matrix)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoundSpeeds {
    pub direction: Vec3,
    pub speeds: [f64; 3],
}

pub fn acoustic_matrix(crystal: &CrystalSpec, chi: &Vec3) -> AcousticTensor {
    let pref = 2.0 * PI * PI / crystal.total_mass();
    let mut m = [[0.0; 3]; 3];
    for e in &crystal.edges {
        let proj = geom::dot(chi, &e.bond_vector);
        let w = pref * proj * proj;
        for (row, arow) in m.iter_mut().zip(&e.force_matrix) {
            for (x, a) in row.iter_mut().zip(arow) {
                *x += w * a;
            }
        }
    }
    AcousticTensor { direction: *chi, matrix: SymmetricMatrix::from_fn(3, |i, j| m[i][j]) }
}

/// `(2π²/m(V₀)) Σ (χ·v(e))² tr A(e)`, the edge-sum form of `s₁² + s₂² + s₃²`.
pub fn acoustic_trace_sum(crystal: &CrystalSpec, chi: &Vec3) -> f64 {
    let pref = 2.0 * PI * PI / crystal.total_mass();
    crystal
        .edges
        .iter()
        .map(|e| {
            let proj = geom::dot(chi, &e.bond_vector);
            pref * proj * proj * geom::mat_trace(&e.force_matrix)
        })
        .sum()
}

fn speeds_unchecked(crystal: &CrystalSpec, omega: &Vec3) -> Result<[f64; 3]> {
    let ev = acoustic_matrix(crystal, omega).eigenvalues()?;
    Ok([ev[0].max(0.0).sqrt(), ev[1].max(0.0).sqrt(), ev[2].max(0.0).sqrt()])
}

pub fn sound_speeds(crystal: &CrystalSpec, omega: &Vec3) -> Result<SoundSpeeds> {
    if (geom::norm(omega) - 1.0).abs() > 1e-12 {
        return Err(AcousticError::NonUnitDirection(*omega));
    }
    Ok(SoundSpeeds { direction: *omega, speeds: speeds_unchecked(crystal, omega)? })
}

/// `λ_α(tχ) / t²` for the three lowest branches at the Cartesian character `tχ`.
pub fn linear_dispersion_limit(crystal: &CrystalSpec, chi: &Vec3, t: f64) -> Result<[f64; 3]> {
    if !(t > 0.0 && t <= 0.1) {
        return Err(AcousticError::StepOutOfRange(t));
    }
    let lam = bloch::dispersion(crystal, &Character::from_cartesian(crystal, geom::scale(chi, t)))?;
    Ok([lam[0] / (t * t), lam[1] / (t * t), lam[2] / (t * t)])
}

fn check_order(order: usize) -> Result<()> {
    if order < 4 {
        return Err(AcousticError::OrderTooLow(order));
    }
    Ok(())
}

/// `∫_{S²} Σ_α s_α(Ω)⁻³ dΩ` by the product sphere rule.
pub fn inverse_cube_speed_integral(crystal: &CrystalSpec, order: usize) -> Result<f64> {
    check_order(order)?;
    let rule = numerics::sphere_rule(order);
    let mut total = 0.0;
    for (omega, w) in rule.nodes.iter().zip(&rule.weights) {
        let s = speeds_unchecked(crystal, omega)?;
        if s[0] <= 0.0 {
            return Err(AcousticError::NonpositiveSpeed { direction: *omega, speed: s[0] });
        }
        total += w * s.iter().map(|x| x.powi(-3)).sum::<f64>();
    }
    Ok(total)
}

/// `c₀ = (V/3) ∫_{S²} Σ_α s_α(Ω)⁻³ dΩ`.
pub fn c0_quadrature(crystal: &CrystalSpec, order: usize) -> Result<f64> {
    Ok(crystal.basis.volume / 3.0 * inverse_cube_speed_integral(crystal, order)?)
}

/// Symmetrized elastic constant tensor `A_ij = (1/2V) Σ_e v(e)ᵢ v(e)ⱼ A(e)`
/// with density `ρ = m(V₀)/V`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElasticTensor {
    pub blocks: [[Mat3; 3]; 3],
    pub density: f64,
}

impl ElasticTensor {
    /// Isotropic tensor with Lamé constants `(a, b)`:
    /// `(A_ij)_{αβ} = ½(a+b)(δ_iα δ_jβ + δ_iβ δ_jα) + b δ_ij δ_αβ`.
    pub fn from_lame(a: f64, b: f64, density: f64) -> Self {
        let d = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
        let mut blocks = [[[[0.0; 3]; 3]; 3]; 3];
        for (i, row) in blocks.iter_mut().enumerate() {
            for (j, block) in row.iter_mut().enumerate() {
                for (al, brow) in block.iter_mut().enumerate() {
                    for (be, x) in brow.iter_mut().enumerate() {
                        *x = 0.5 * (a + b) * (d(i, al) * d(j, be) + d(i, be) * d(j, al)) + b * d(i, j) * d(al, be);
                    }
                }
            }
        }
        ElasticTensor { blocks, density }
    }

    /// `Σᵢⱼ (A_ij) χᵢ χⱼ`.
    pub fn quadratic_form(&self, chi: &Vec3) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let w = chi[i] * chi[j];
                for (row, brow) in m.iter_mut().zip(&self.blocks[i][j]) {
                    for (x, b) in row.iter_mut().zip(brow) {
                        *x += w * b;
                    }
                }
            }
        }
        m
    }

    /// `A_χ = (4π²/ρ) Σᵢⱼ χᵢ χⱼ A_ij`.
    pub fn acoustic_matrix(&self, chi: &Vec3) -> Mat3 {
        geom::mat_scale(&self.quadratic_form(chi), 4.0 * PI * PI / self.density)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().flatten().map(geom::mat_max_abs).fold(0.0, f64::max)
    }
}

pub fn elastic_tensor(crystal: &CrystalSpec) -> ElasticTensor {
    let pref = 1.0 / (2.0 * crystal.basis.volume);
    let mut blocks = [[[[0.0; 3]; 3]; 3]; 3];
    for e in &crystal.edges {
        let v = e.bond_vector;
        for i in 0..3 {
            for j in 0..3 {
                let w = pref * v[i] * v[j];
                for (row, arow) in blocks[i][j].iter_mut().zip(&e.force_matrix) {
                    for (x, a) in row.iter_mut().zip(arow) {
                        *x += w * a;
                    }
                }
            }
        }
    }
    ElasticTensor { blocks, density: crystal.density() }
}

/// Max-abs deviation between `A_χ` from edges and from the elastic tensor over
/// the given directions.
pub fn elastic_consistency(crystal: &CrystalSpec, directions: &[Vec3]) -> f64 {
    let el = elastic_tensor(crystal);
    directions
        .iter()
        .map(|chi| {
            let direct = acoustic_matrix(crystal, chi).matrix;
            let via = el.acoustic_matrix(chi);
            let mut dev: f64 = 0.0;
            for (i, row) in via.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    dev = dev.max((direct.get(i, j) - x).abs());
                }
            }
            dev
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LameFit {
    pub a: f64,
    pub b: f64,
    pub density: f64,
    /// `√((a + 2b)/ρ)`
    pub c_l: f64,
    /// `√(b/ρ)`
    pub c_t: f64,
    pub residual: f64,
    /// Set when `a ≤ 0`; the fit is still reported.
    pub nonpositive_a: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsotropyOutcome {
    Isotropic(LameFit),
    Anisotropic { residual: f64 },
}

/// The 26 normalized nonzero points of `{−1, 0, 1}³` followed by 24 seeded
/// random unit vectors.
pub fn isotropy_directions() -> Vec<Vec3> {
    let mut dirs = Vec::with_capacity(50);
    for x in -1..=1 {
        for y in -1..=1 {
            for z in -1..=1 {
                if (x, y, z) != (0, 0, 0) {
                    let v = [x as f64, y as f64, z as f64];
                    dirs.push(geom::scale(&v, 1.0 / geom::norm(&v)));
                }
            }
        }
    }
    dirs.extend(random_unit_vectors(ISOTROPY_SEED, 24));
    dirs
}

/// Uniform unit vectors by rejection from the cube.
pub fn random_unit_vectors(seed: u64, count: usize) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec3 = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let r = geom::norm(&v);
        if r > 1e-3 && r <= 1.0 {
            out.push(geom::scale(&v, 1.0 / r));
        }
    }
    out
}

/// Least-squares fit of `Σᵢⱼ (A_ij)_{αβ} χᵢχⱼ ≈ (a+b) χ_α χ_β + b δ_{αβ} ‖χ‖²`
/// over [`isotropy_directions`]. Isotropic when the max misfit is at most
/// `tol` times the largest entry of the form.
pub fn fit_lame(tensor: &ElasticTensor, tol: f64) -> IsotropyOutcome {
    let dirs = isotropy_directions();
    let (mut saa, mut sab, mut sbb, mut sya, mut syb) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let forms: Vec<Mat3> = dirs.iter().map(|c| tensor.quadratic_form(c)).collect();
    for (chi, form) in dirs.iter().zip(&forms) {
        let n2 = geom::dot(chi, chi);
        for al in 0..3 {
            for be in 0..3 {
                let xa = chi[al] * chi[be];
                let xb = xa + if al == be { n2 } else { 0.0 };
                let y = form[al][be];
                saa += xa * xa;
                sab += xa * xb;
                sbb += xb * xb;
                sya += y * xa;
                syb += y * xb;
            }
        }
    }
    let det = saa * sbb - sab * sab;
    let a = (sya * sbb - syb * sab) / det;
    let b = (saa * syb - sab * sya) / det;

    let mut residual: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (chi, form) in dirs.iter().zip(&forms) {
        let n2 = geom::dot(chi, chi);
        for al in 0..3 {
            for be in 0..3 {
                let model = (a + b) * chi[al] * chi[be] + if al == be { b * n2 } else { 0.0 };
                residual = residual.max((form[al][be] - model).abs());
                scale = scale.max(form[al][be].abs());
            }
        }
    }
    let rho = tensor.density;
    if residual > tol * scale || b <= 0.0 || a + 2.0 * b <= 0.0 {
        return IsotropyOutcome::Anisotropic { residual };
    }
    IsotropyOutcome::Isotropic(LameFit {
        a,
        b,
        density: rho,
        c_l: ((a + 2.0 * b) / rho).sqrt(),
        c_t: (b / rho).sqrt(),
        residual,
        nonpositive_a: a <= 0.0,
    })
}

pub fn isotropy_fit(crystal: &CrystalSpec, tol: f64) -> IsotropyOutcome {
    fit_lame(&elastic_tensor(crystal), tol)
}

/// Debye's isotropic constant `c₀ = (V/6π²)(1/c_l³ + 2/c_t³)`.
pub fn c0_isotropic(c_l: f64, c_t: f64, volume: f64) -> Result<f64> {
    if !(c_l > 0.0) {
        return Err(AcousticError::Nonpositive("c_l"));
    }
    if !(c_t > 0.0) {
        return Err(AcousticError::Nonpositive("c_t"));
    }
    if !(volume > 0.0) {
        return Err(AcousticError::Nonpositive("volume"));
    }
    Ok(volume / (6.0 * PI * PI) * (c_l.powi(-3) + 2.0 * c_t.powi(-3)))
}

/// Integrated density of states of the continuum elastic body, `c₀ λ^{3/2}`.
pub fn continuum_ids(c0: f64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        0.0
    } else {
        c0 * lambda.powf(1.5)
    }
}

/// `(3/4)√π c₀ t^{−3/2}`.
pub fn heat_trace_closed_form(c0: f64, t: f64) -> f64 {
    0.75 * PI.sqrt() * c0 * t.powf(-1.5)
}

/// `tr_L e^{t𝒟} = (√π/4) V t^{−3/2} ∫_{S²} Σ_α s_α(Ω)⁻³ dΩ`, checked against
/// the closed form in `c₀` to 1e-10 relative.
pub fn continuum_heat_trace(crystal: &CrystalSpec, t: f64, order: usize) -> Result<f64> {
    if !(t > 0.0) {
        return Err(AcousticError::Nonpositive("t"));
    }
    let integral = inverse_cube_speed_integral(crystal, order)?;
    let quadrature = 0.25 * PI.sqrt() * crystal.basis.volume * t.powf(-1.5) * integral;
    let c0 = crystal.basis.volume / 3.0 * integral;
    let closed_form = heat_trace_closed_form(c0, t);
    if (quadrature - closed_form).abs() > 1e-10 * closed_form.abs() {
        return Err(AcousticError::ClosedFormMismatch { quadrature, closed_form });
    }
    Ok(quadrature)
}

/// `∫₀^∞ e^{−λt} dφ₀(λ) = ∫₀^∞ e^{−λt} (3/2) c₀ λ^{1/2} dλ`, by quadrature.
pub fn continuum_laplace(c0: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(AcousticError::Nonpositive("t"));
    }
    // λ = s² removes the square-root endpoint singularity
    Ok(numerics::integrate_half_line(|s| (-s * s * t).exp() * 3.0 * c0 * s * s, 1e-12)?)
}
