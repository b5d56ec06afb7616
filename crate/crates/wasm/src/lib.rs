//! Browser bindings for the demo page in `www/`.
//!
//! Every function takes the lattice spec as TOML text and returns a flat
//! `Float64Array` in row-major order; the row layout is given per function.

use latvib::lattice::{self, CrystalSpec};
use latvib::thermo::{self, PhysicalConstants, ReferenceModels};
use latvib::{acoustic, bloch, dos};
use wasm_bindgen::prelude::*;

const CUBIC: &str = include_str!("../../../lattices/cubic.spec");
const DIAMOND: &str = include_str!("../../../lattices/diamond.spec");
const MAX_GRID: usize = 48;

/// Spec text for a shipped lattice, `cubic` or `diamond`.
#[wasm_bindgen]
pub fn builtin_lattice(name: &str) -> Option<String> {
    match name {
        "cubic" => Some(CUBIC.to_string()),
        "diamond" => Some(DIAMOND.to_string()),
        _ => None,
    }
}

/// Number of dispersion branches, `3n`.
#[wasm_bindgen]
pub fn branch_count(spec: &str) -> Result<u32, JsError> {
    Ok(parse(spec).map_err(js)?.dof() as u32)
}

/// Rows `[x, λ₁, …, λ₃ₙ]` along the path, `x` counting segments.
#[wasm_bindgen]
pub fn bands(spec: &str, path: &str, steps: u32) -> Result<Vec<f64>, JsError> {
    bands_rows(spec, path, steps as usize).map_err(js)
}

/// Rows `[λ, φ(λ), c₀λ^{3/2}]` on an evenly spaced threshold grid.
#[wasm_bindgen]
pub fn ids(spec: &str, grid: u32, points: u32) -> Result<Vec<f64>, JsError> {
    ids_rows(spec, grid as usize, points as usize).map_err(js)
}

/// Rows `[T, C, C_debye, C_einstein]` over log-spaced temperatures in natural
/// units, with the Einstein level at the Debye `λ_D`.
#[wasm_bindgen]
pub fn heat(spec: &str, grid: u32, tmin: f64, tmax: f64, steps: u32) -> Result<Vec<f64>, JsError> {
    heat_rows(spec, grid as usize, tmin, tmax, steps as usize).map_err(js)
}

fn js(msg: String) -> JsError {
    JsError::new(&msg)
}

fn parse(spec: &str) -> Result<CrystalSpec, String> {
    lattice::parse_crystal(spec).map_err(|e| e.to_string())
}

fn check_grid(grid: usize) -> Result<(), String> {
    if grid == 0 || grid > MAX_GRID {
        return Err(format!("grid must be between 1 and {MAX_GRID}"));
    }
    Ok(())
}

fn admissible(spec: &str) -> Result<CrystalSpec, String> {
    let crystal = parse(spec)?;
    let r = lattice::validate_rotation_invariance(&crystal);
    if r > lattice::ADMISSIBILITY_TOL {
        return Err(format!("inadmissible crystal: rotation-invariance residual {r:.3e}"));
    }
    Ok(crystal)
}

fn parse_path(path: &str) -> Result<Vec<[f64; 3]>, String> {
    path.split(';')
        .map(|p| {
            let xs: Vec<f64> = p
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("bad waypoint {p:?}"))?;
            match xs.as_slice() {
                [a, b, c] => Ok([*a, *b, *c]),
                _ => Err(format!("waypoint {p:?} needs three coordinates")),
            }
        })
        .collect()
}

pub fn bands_rows(spec: &str, path: &str, steps: usize) -> Result<Vec<f64>, String> {
    let crystal = parse(spec)?;
    let table = bloch::band_path(&crystal, &parse_path(path)?, steps).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(table.branches.len() * (crystal.dof() + 1));
    for ((seg, t), row) in table.positions.iter().zip(&table.branches) {
        out.push(*seg as f64 + t);
        out.extend_from_slice(row);
    }
    Ok(out)
}

pub fn ids_rows(spec: &str, grid: usize, points: usize) -> Result<Vec<f64>, String> {
    check_grid(grid)?;
    if points < 2 {
        return Err("need at least two points".into());
    }
    let crystal = admissible(spec)?;
    let c0 = acoustic::c0_quadrature(&crystal, 16).map_err(|e| e.to_string())?;
    let samples = dos::sample_spectrum(&crystal, grid).map_err(|e| e.to_string())?;
    let top = samples.max_lambda();
    let thresholds: Vec<f64> = (0..points).map(|i| top * i as f64 / (points - 1) as f64).collect();
    let curve = dos::ids_curve_from_samples(&samples, &thresholds).map_err(|e| e.to_string())?;
    Ok(curve
        .thresholds
        .iter()
        .zip(&curve.values)
        .flat_map(|(&l, &phi)| [l, phi, acoustic::continuum_ids(c0, l)])
        .collect())
}

pub fn heat_rows(spec: &str, grid: usize, tmin: f64, tmax: f64, steps: usize) -> Result<Vec<f64>, String> {
    check_grid(grid)?;
    let crystal = admissible(spec)?;
    let consts = PhysicalConstants::NATURAL;
    let n = crystal.vertex_count();
    let c0 = acoustic::c0_quadrature(&crystal, 16).map_err(|e| e.to_string())?;
    let lambda_d = thermo::debye_lambda(c0, n).map_err(|e| e.to_string())?;
    let theta = thermo::debye_temperature(lambda_d, &consts).map_err(|e| e.to_string())?;
    let temps = thermo::log_spaced(tmin, tmax, steps).map_err(|e| e.to_string())?;
    let samples = dos::sample_spectrum(&crystal, grid).map_err(|e| e.to_string())?;
    let models = ReferenceModels { theta_debye: theta, lambda0: lambda_d, n };
    let curve = thermo::thermo_curve(&samples, &temps, &models, &consts).map_err(|e| e.to_string())?;
    Ok((0..temps.len())
        .flat_map(|i| [curve.temperatures[i], curve.c[i], curve.c_debye[i], curve.c_einstein[i]])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_band_rows() {
        let rows = bands_rows(CUBIC, "0,0,0;0.5,0,0", 2).unwrap();
        assert_eq!(rows.len(), 3 * 4);
        assert_eq!(&rows[8..], &[1.0, 4.0, 4.0, 4.0]);
        assert!(bands_rows(CUBIC, "0,0,0", 2).is_err());
    }

    #[test]
    fn ids_ends_at_branch_count() {
        let rows = ids_rows(DIAMOND, 4, 5).unwrap();
        assert_eq!(rows.len(), 15);
        assert_eq!(rows[13], 6.0);
        assert!(ids_rows(DIAMOND, 0, 5).is_err());
        assert!(ids_rows(DIAMOND, 100, 5).is_err());
    }

    #[test]
    fn heat_saturates() {
        let rows = heat_rows(CUBIC, 6, 0.1, 500.0, 4).unwrap();
        assert_eq!(rows.len(), 16);
        assert!((rows[13] - 3.0).abs() < 0.01);
        assert!(heat_rows(CUBIC, 6, 1.0, 0.5, 4).is_err());
    }

    #[test]
    fn builtins_parse() {
        for name in ["cubic", "diamond"] {
            assert!(parse(&builtin_lattice(name).unwrap()).is_ok());
        }
        assert!(builtin_lattice("graphite").is_none());
    }
}
