//! Bloch operators, dispersion branches and the periodic supercell operator.
//!
//! All operators here store `−D` (nonnegative spectrum), conjugated by
//! `diag(√m)` so that self-adjointness in the mass inner product becomes
//! ordinary Hermiticity.

use crate::geom::{self, Vec3};
use crate::lattice::CrystalSpec;
use crate::numerics::{self, eigvalsh_hermitian, eigvalsh_symmetric, HermitianMatrix, NumericsError, SymmetricMatrix};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::Write;
use thiserror::Error;

/// Largest supercell dimension `3n·N³` built by default.
pub const DEFAULT_SUPERCELL_CAP: usize = 1000;

#[derive(Debug, Error)]
pub enum BlochError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("supercell dimension {dim} exceeds cap {cap}")]
    SupercellTooLarge { dim: usize, cap: usize },
    #[error("supercell size must be at least 1")]
    EmptySupercell,
    #[error("band path needs at least two waypoints and one step")]
    EmptyPath,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, BlochError>;

/// Unitary character of `L`, stored by its fractional coordinates in the dual
/// basis; the Cartesian vector `χ = Σ kⱼ b*ⱼ` is kept alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Character {
    pub fractional: Vec3,
    pub cartesian: Vec3,
}

impl Character {
    pub fn from_fractional(crystal: &CrystalSpec, fractional: Vec3) -> Self {
        Character { fractional, cartesian: crystal.basis.cartesian_character(&fractional) }
    }

    pub fn from_cartesian(crystal: &CrystalSpec, cartesian: Vec3) -> Self {
        Character { fractional: crystal.basis.fractional_character(&cartesian), cartesian }
    }

    pub fn trivial() -> Self {
        Character { fractional: [0.0; 3], cartesian: [0.0; 3] }
    }

    /// True when every fractional coordinate is an integer.
    pub fn is_trivial(&self) -> bool {
        self.fractional.iter().all(|k| (k - k.round()).abs() < 1e-12)
    }
}

/// Mass-symmetrized `−D⁰_χ` at one character.
#[derive(Debug, Clone)]
pub struct BlochMatrix {
    pub character: Character,
    pub matrix: HermitianMatrix,
}

/// Assembles `H_χ = M^{1/2} (−D⁰_χ) M^{−1/2}`, where
/// `(−D⁰_χ f)(x) = m(x)⁻¹ Σ_{e ∈ E₀ₓ} A(e) (f(x) − e^{2πi χ·v(e)} f(te))`.
pub fn assemble_bloch(crystal: &CrystalSpec, chi: &Character) -> BlochMatrix {
    let dim = crystal.dof();
    let mut buf = vec![Complex64::new(0.0, 0.0); dim * dim];
    for e in &crystal.edges {
        let (o, t) = (e.origin, e.terminus);
        let mo = crystal.vertices[o].mass;
        let mt = crystal.vertices[t].mass;
        let phase = Complex64::from_polar(1.0, 2.0 * PI * geom::dot(&chi.cartesian, &e.bond_vector));
        let off = phase / (mo * mt).sqrt();
        for i in 0..3 {
            for j in 0..3 {
                let a = e.force_matrix[i][j];
                buf[(3 * o + i) * dim + 3 * o + j] += a / mo;
                buf[(3 * o + i) * dim + 3 * t + j] -= a * off;
            }
        }
    }
    BlochMatrix { character: *chi, matrix: HermitianMatrix::from_fn(dim, |i, j| buf[i * dim + j]) }
}

/// Clamps round-off negatives in `[-1e-10·bound, 0)` to zero.
fn clamp_small_negatives(values: &mut [f64], bound: f64) {
    let floor = -1e-10 * bound.max(f64::MIN_POSITIVE);
    for v in values.iter_mut() {
        if *v < 0.0 && *v >= floor {
            *v = 0.0;
        }
    }
}

/// Ascending eigenvalues `λ₁(χ) ≤ … ≤ λ₃ₙ(χ)` of `−D_χ`.
pub fn dispersion(crystal: &CrystalSpec, chi: &Character) -> Result<Vec<f64>> {
    let h = assemble_bloch(crystal, chi);
    let mut values = eigvalsh_hermitian(&h.matrix)?;
    clamp_small_negatives(&mut values, h.matrix.norm_inf());
    Ok(values)
}

/// Convenience wrapper over fractional coordinates.
pub fn dispersion_at(crystal: &CrystalSpec, fractional: Vec3) -> Result<Vec<f64>> {
    dispersion(crystal, &Character::from_fractional(crystal, fractional))
}

/// Dispersion sampled along a piecewise-linear path of fractional points.
#[derive(Debug, Clone)]
pub struct DispersionTable {
    pub path: Vec<Character>,
    /// `(segment, t)` for each row; `t ∈ [0, 1]` within the segment.
    pub positions: Vec<(usize, f64)>,
    pub branches: Vec<Vec<f64>>,
}

impl DispersionTable {
    /// CSV with columns `segment, t, k1, k2, k3, lambda_1..lambda_3n`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        let nb = self.branches.first().map_or(0, Vec::len);
        write!(out, "segment,t,k1,k2,k3")?;
        for b in 1..=nb {
            write!(out, ",lambda_{b}")?;
        }
        writeln!(out)?;
        for ((chi, (seg, t)), row) in self.path.iter().zip(&self.positions).zip(&self.branches) {
            write!(out, "{seg},{}", fmt_f64(*t))?;
            for k in chi.fractional {
                write!(out, ",{}", fmt_f64(k))?;
            }
            for l in row {
                write!(out, ",{}", fmt_f64(*l))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rows at `steps + 1` evenly spaced points per segment; shared endpoints
/// between segments appear once.
pub fn band_path(crystal: &CrystalSpec, waypoints: &[Vec3], steps: usize) -> Result<DispersionTable> {
    if waypoints.len() < 2 || steps == 0 {
        return Err(BlochError::EmptyPath);
    }
    let mut path = Vec::new();
    let mut positions = Vec::new();
    for (seg, w) in waypoints.windows(2).enumerate() {
        let first = if seg == 0 { 0 } else { 1 };
        for s in first..=steps {
            let t = s as f64 / steps as f64;
            let k = geom::add(&w[0], &geom::scale(&geom::sub(&w[1], &w[0]), t));
            path.push(Character::from_fractional(crystal, k));
            positions.push((seg, t));
        }
    }
    let branches = map_maybe_parallel(&path, |chi| dispersion(crystal, chi))?;
    Ok(DispersionTable { path, positions, branches })
}

#[cfg(feature = "parallel")]
pub(crate) fn map_maybe_parallel<T: Sync, U: Send>(
    items: &[T],
    f: impl Fn(&T) -> Result<U> + Sync + Send,
) -> Result<Vec<U>> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_maybe_parallel<T: Sync, U: Send>(
    items: &[T],
    f: impl Fn(&T) -> Result<U> + Sync + Send,
) -> Result<Vec<U>> {
    items.iter().map(f).collect()
}

/// Mass-symmetrized `−D` on `N·L`-periodic displacements, of dimension
/// `3n·N³`, with the default size cap.
pub fn supercell_operator(crystal: &CrystalSpec, n: usize) -> Result<SymmetricMatrix> {
    supercell_operator_capped(crystal, n, DEFAULT_SUPERCELL_CAP)
}

pub fn supercell_operator_capped(crystal: &CrystalSpec, n: usize, cap: usize) -> Result<SymmetricMatrix> {
    if n == 0 {
        return Err(BlochError::EmptySupercell);
    }
    let nv = crystal.vertex_count();
    let cells = n * n * n;
    let dim = 3 * nv * cells;
    if dim > cap {
        return Err(BlochError::SupercellTooLarge { dim, cap });
    }
    let ni = n as i64;
    let cell_index = |c: [i64; 3]| -> usize {
        let w = c.map(|x| x.rem_euclid(ni) as usize);
        (w[0] * n + w[1]) * n + w[2]
    };
    let site = |cell: usize, v: usize| 3 * (cell * nv + v);
    let mut buf = vec![0.0; dim * dim];
    for c0 in 0..ni {
        for c1 in 0..ni {
            for c2 in 0..ni {
                let here = cell_index([c0, c1, c2]);
                for e in &crystal.edges {
                    let there = cell_index([c0 + e.shift[0] as i64, c1 + e.shift[1] as i64, c2 + e.shift[2] as i64]);
                    let mo = crystal.vertices[e.origin].mass;
                    let mt = crystal.vertices[e.terminus].mass;
                    let (r0, q0) = (site(here, e.origin), site(there, e.terminus));
                    for i in 0..3 {
                        for j in 0..3 {
                            let a = e.force_matrix[i][j];
                            buf[(r0 + i) * dim + r0 + j] += a / mo;
                            buf[(r0 + i) * dim + q0 + j] -= a / (mo * mt).sqrt();
                        }
                    }
                }
            }
        }
    }
    SymmetricMatrix::from_row_major(dim, &buf).map_err(Into::into)
}

/// Ascending spectrum of the supercell operator.
pub fn supercell_spectrum(crystal: &CrystalSpec, n: usize) -> Result<Vec<f64>> {
    let h = supercell_operator(crystal, n)?;
    let mut values = eigvalsh_symmetric(&h)?;
    clamp_small_negatives(&mut values, h.norm_inf());
    Ok(values)
}

/// Sorted union of the dispersion over the Γ-centred `N³` grid of fractional
/// characters `(j₁, j₂, j₃)/N`.
pub fn grid_union(crystal: &CrystalSpec, n: usize) -> Result<Vec<f64>> {
    let grid = numerics::torus_grid(n);
    let rows = map_maybe_parallel(&grid.nodes, |k| dispersion_at(crystal, *k))?;
    let mut all: Vec<f64> = rows.into_iter().flatten().collect();
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// Multiplicity of the zero eigenvalue of the `N = 3` supercell, expected to
/// be exactly 3 for a connected covering graph.
pub fn zero_multiplicity(crystal: &CrystalSpec, n: usize) -> Result<usize> {
    let spec = supercell_spectrum(crystal, n)?;
    let top = spec.last().copied().unwrap_or(0.0).abs().max(f64::MIN_POSITIVE);
    Ok(spec.iter().filter(|l| l.abs() <= 1e-9 * top).count())
}

pub fn connectivity_certificate(crystal: &CrystalSpec) -> Result<bool> {
    Ok(zero_multiplicity(crystal, 3)? == 3)
}

/// Largest relative discrepancy between two equally long sorted multisets,
/// measured against the largest magnitude present.
pub fn multiset_discrepancy(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let scale = a.iter().chain(b).fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / scale).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_cubic, build_diamond};

    fn cubic() -> CrystalSpec {
        build_cubic(1.0, 1.0).unwrap()
    }

    fn diamond() -> CrystalSpec {
        build_diamond([1.0, 1.0], 1.0).unwrap()
    }

    /// Closed form for the cubic scalar model: `2 Σ (1 − cos 2πkᵢ)`, triple.
    fn cubic_oracle(k: Vec3) -> f64 {
        k.iter().map(|x| 2.0 * (1.0 - (2.0 * PI * x).cos())).sum()
    }

    /// Diamond scalar model with unit parameters: `4 ± |Σⱼ e^{2πiχ·dⱼ}|`, each triple.
    fn diamond_oracle(chi: Vec3) -> [f64; 2] {
        let ds = [[0.5, 0.5, 0.5], [0.5, -0.5, -0.5], [-0.5, 0.5, -0.5], [-0.5, -0.5, 0.5]];
        let c: Complex64 = ds.iter().map(|d| Complex64::from_polar(1.0, 2.0 * PI * geom::dot(&chi, d))).sum();
        [4.0 - c.norm(), 4.0 + c.norm()]
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn cubic_half_x() {
        let v = dispersion_at(&cubic(), [0.5, 0.0, 0.0]).unwrap();
        assert!(close(&v, &[4.0; 3], 1e-12), "{v:?}");
        let heavy = build_cubic(2.0, 3.0).unwrap();
        let v = dispersion_at(&heavy, [0.5, 0.0, 0.0]).unwrap();
        assert!(close(&v, &[6.0; 3], 1e-12), "{v:?}");
    }

    #[test]
    fn cubic_corner_and_gamma() {
        assert!(close(&dispersion_at(&cubic(), [0.5; 3]).unwrap(), &[12.0; 3], 1e-12));
        assert_eq!(dispersion_at(&cubic(), [0.0; 3]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn diamond_gamma() {
        let v = dispersion_at(&diamond(), [0.0; 3]).unwrap();
        assert!(close(&v, &[0.0, 0.0, 0.0, 8.0, 8.0, 8.0], 1e-12), "{v:?}");
    }

    #[test]
    fn diamond_half_first_dual() {
        let d = diamond();
        let chi = Character::from_fractional(&d, [0.5, 0.0, 0.0]);
        let [lo, hi] = diamond_oracle(chi.cartesian);
        assert!((lo - 2.0).abs() < 1e-12 && (hi - 6.0).abs() < 1e-12);
        let v = dispersion(&d, &chi).unwrap();
        assert!(close(&v, &[lo, lo, lo, hi, hi, hi], 1e-12), "{v:?}");
    }

    #[test]
    fn diamond_cartesian_half_x_is_flat() {
        let d = diamond();
        let chi = Character::from_cartesian(&d, [0.5, 0.0, 0.0]);
        assert!(close(&chi.fractional, &[0.5, 0.0, 0.5], 1e-15));
        let v = dispersion(&d, &chi).unwrap();
        assert!(close(&v, &[4.0; 6], 1e-12), "{v:?}");
    }

    #[test]
    fn trivial_character_has_triple_zero() {
        for c in [cubic(), diamond(), build_diamond([1.0, 3.0], 2.0).unwrap()] {
            let v = dispersion(&c, &Character::trivial()).unwrap();
            let zeros = v.iter().filter(|x| x.abs() < 1e-12).count();
            assert_eq!(zeros, 3);
        }
    }

    #[test]
    fn bloch_is_hermitian_and_conjugates() {
        let d = build_diamond([1.0, 2.5], 1.5).unwrap();
        let k = [0.13, -0.27, 0.41];
        let h = assemble_bloch(&d, &Character::from_fractional(&d, k)).matrix;
        for i in 0..h.dim() {
            for j in 0..h.dim() {
                assert_eq!(h.get(i, j), h.get(j, i).conj());
            }
        }
        let hm = assemble_bloch(&d, &Character::from_fractional(&d, k.map(|x| -x))).matrix;
        assert_eq!(hm, h.conjugate());
        let a = dispersion_at(&d, k).unwrap();
        let b = dispersion_at(&d, k.map(|x| -x)).unwrap();
        assert!(close(&a, &b, 1e-12));
    }

    #[test]
    fn dispersion_is_periodic_and_positive() {
        let d = build_diamond([1.0, 2.5], 1.5).unwrap();
        for k in [[0.1, 0.2, 0.3], [0.45, -0.05, 0.7], [0.0, 0.0, 0.25]] {
            let a = dispersion_at(&d, k).unwrap();
            for axis in 0..3 {
                let mut kk = k;
                kk[axis] += 1.0;
                assert!(close(&a, &dispersion_at(&d, kk).unwrap(), 1e-10));
            }
            assert!(a[0] > 0.0);
        }
    }

    #[test]
    fn band_path_cubic() {
        let t = band_path(&cubic(), &[[0.0; 3], [0.5, 0.0, 0.0]], 2).unwrap();
        assert_eq!(t.branches.len(), 3);
        let expect = [0.0, 2.0, 4.0];
        for (row, e) in t.branches.iter().zip(expect) {
            assert!(close(row, &[e; 3], 1e-12), "{row:?} vs {e}");
        }
        let one = band_path(&cubic(), &[[0.0; 3], [0.5, 0.0, 0.0]], 1).unwrap();
        assert_eq!(one.branches.len(), 2);
        let flat = band_path(&cubic(), &[[0.0; 3], [0.0; 3]], 4).unwrap();
        assert!(flat.branches.iter().all(|r| r == &flat.branches[0]));
        assert!(matches!(band_path(&cubic(), &[], 2), Err(BlochError::EmptyPath)));
    }

    #[test]
    fn band_csv_header() {
        let t = band_path(&diamond(), &[[0.0; 3], [0.5, 0.0, 0.0]], 1).unwrap();
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "segment,t,k1,k2,k3,lambda_1,lambda_2,lambda_3,lambda_4,lambda_5,lambda_6");
        assert_eq!(lines.count(), 2);
    }

    #[test]
    fn supercell_small_cases() {
        let h = supercell_operator(&cubic(), 1).unwrap();
        assert_eq!(h.dim(), 3);
        assert_eq!(h.max_abs(), 0.0);
        assert_eq!(supercell_spectrum(&cubic(), 1).unwrap(), vec![0.0; 3]);

        let s = supercell_spectrum(&cubic(), 2).unwrap();
        assert_eq!(s.len(), 24);
        let mut oracle: Vec<f64> = numerics::torus_grid(2).nodes.iter().flat_map(|k| [cubic_oracle(*k); 3]).collect();
        oracle.sort_by(f64::total_cmp);
        assert!(multiset_discrepancy(&s, &oracle) < 1e-12);

        let d = supercell_operator(&diamond(), 2).unwrap();
        assert_eq!(d.dim(), 48);
        assert_eq!(zero_multiplicity(&diamond(), 2).unwrap(), 3);
        let ds = supercell_spectrum(&diamond(), 2).unwrap();
        let sum: f64 = ds.iter().sum();
        assert!((sum - d.trace()).abs() < 1e-9 * d.norm_inf());
    }

    #[test]
    fn supercell_matches_grid_union() {
        for n in 1..=3 {
            for c in [cubic(), build_diamond([1.0, 2.0], 1.3).unwrap()] {
                let a = supercell_spectrum(&c, n).unwrap();
                let b = grid_union(&c, n).unwrap();
                assert!(multiset_discrepancy(&a, &b) < 1e-9, "n={n}");
            }
        }
    }

    #[test]
    fn supercell_cap() {
        assert!(matches!(supercell_operator(&cubic(), 7), Err(BlochError::SupercellTooLarge { dim: 1029, cap: 1000 })));
        assert!(matches!(supercell_operator(&cubic(), 0), Err(BlochError::EmptySupercell)));
    }

    #[test]
    fn connectivity() {
        assert!(connectivity_certificate(&cubic()).unwrap());
        assert!(connectivity_certificate(&diamond()).unwrap());
    }

    #[test]
    fn diamond_grid_points_match_oracle() {
        let d = diamond();
        for k in numerics::torus_grid(3).nodes {
            let chi = Character::from_fractional(&d, k);
            let [lo, hi] = diamond_oracle(chi.cartesian);
            let v = dispersion(&d, &chi).unwrap();
            assert!(close(&v, &[lo, lo, lo, hi, hi, hi], 1e-12));
        }
    }
}
