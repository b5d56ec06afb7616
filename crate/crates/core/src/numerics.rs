//! Dense eigensolvers and quadrature rules.
//!
//! Everything here is small and dense: the largest matrices are the periodic
//! supercell operators (a few hundred rows), so a cyclic Jacobi solver is
//! accurate and fast enough, and Hermitian problems go through the same code
//! path via their real embedding.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("embedded eigenvalues failed to pair: {first} vs {second} (tolerance {tol:e})")]
    PairingFailure { first: f64, second: f64, tol: f64 },
    #[error("unsupported Bose integral power {0}; expected 3 or 4")]
    UnsupportedPower(i32),
    #[error("quadrature did not reach relative tolerance {tol:e}")]
    QuadratureStalled { tol: f64 },
    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, NumericsError>;

/// Real symmetric matrix, stored densely in row-major order.
///
/// Constructors symmetrize their input, so `get(i, j) == get(j, i)` holds
/// bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymmetricMatrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { 0.0 })
    }

    /// Builds the matrix from `f(i, j)`, averaging `f(i, j)` and `f(j, i)`.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let v = if i == j { f(i, i) } else { 0.5 * (f(i, j) + f(j, i)) };
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        SymmetricMatrix { dim, data }
    }

    /// Symmetrizes a row-major dense buffer.
    pub fn from_row_major(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(NumericsError::Dimension { expected: dim * dim, got: entries.len() });
        }
        Ok(Self::from_fn(dim, |i, j| entries[i * dim + j]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Maximum absolute row sum, an upper bound on the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        self.data.chunks(self.dim.max(1)).map(|row| row.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data.chunks(self.dim).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Complex Hermitian matrix, stored densely in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds the matrix from `f(i, j)`, averaging with the conjugate of `f(j, i)`
    /// so that Hermitian symmetry is exact.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(f(i, i).re, 0.0);
            for j in 0..i {
                let v = 0.5 * (f(i, j) + f(j, i).conj());
                data[i * dim + j] = v;
                data[j * dim + i] = v.conj();
            }
        }
        HermitianMatrix { dim, data }
    }

    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(NumericsError::Dimension { expected: dim * dim, got: entries.len() });
        }
        Ok(Self::from_fn(dim, |i, j| entries[i * dim + j]))
    }

    pub fn from_real(m: &SymmetricMatrix) -> Self {
        Self::from_fn(m.dim(), |i, j| Complex64::new(m.get(i, j), 0.0))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.chunks(self.dim.max(1)).map(|row| row.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn conjugate(&self) -> Self {
        HermitianMatrix { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.data.chunks(self.dim).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// `[[X, -Y], [Y, X]]` for `H = X + iY`.
    pub fn real_embedding(&self) -> SymmetricMatrix {
        let d = self.dim;
        SymmetricMatrix::from_fn(2 * d, |i, j| {
            let z = self.get(i % d, j % d);
            match (i < d, j < d) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        })
    }
}

/// Eigen-decomposition of a real symmetric matrix. `vectors[k]` is the unit
/// eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

/// Cyclic Jacobi with threshold sweeps. Returns the diagonal after convergence
/// and, when requested, the accumulated rotation matrix (columns are vectors).
fn jacobi(m: &SymmetricMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let n = m.dim();
    let mut a = m.as_row_major().to_vec();
    let mut v = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    });
    if n <= 1 {
        return Ok((a, v));
    }
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].abs();
            }
        }
        if off == 0.0 {
            return Ok((d, v));
        }
        let tresh = if sweep < 3 { 0.2 * off / (n * n) as f64 } else { 0.0 };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = 100.0 * apq.abs();
                if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                if apq.abs() <= tresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let g = a[r * n + p];
                    let h = a[r * n + q];
                    let gp = g - s * (h + g * tau);
                    let hq = h + s * (g - h * tau);
                    a[r * n + p] = gp;
                    a[p * n + r] = gp;
                    a[r * n + q] = hq;
                    a[q * n + r] = hq;
                }
                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let g = v[r * n + p];
                        let h = v[r * n + q];
                        v[r * n + p] = g - s * (h + g * tau);
                        v[r * n + q] = h + s * (g - h * tau);
                    }
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    let mut off = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            off += a[p * n + q].abs();
        }
    }
    Err(NumericsError::NoConvergence { sweeps: MAX_SWEEPS, off })
}

fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    idx
}

/// Ascending eigenvalues and orthonormal eigenvectors of a symmetric matrix.
pub fn eigh_symmetric(m: &SymmetricMatrix) -> Result<SymmetricEigen> {
    let n = m.dim();
    let (d, v) = jacobi(m, true)?;
    let v = v.expect("vectors requested");
    let order = ascending_order(&d);
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order.iter().map(|&k| (0..n).map(|r| v[r * n + k]).collect()).collect();
    Ok(SymmetricEigen { values, vectors })
}

/// Ascending eigenvalues only; skips the rotation accumulation.
pub fn eigvalsh_symmetric(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    let (mut d, _) = jacobi(m, false)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Collapses the doubled spectrum of the real embedding into one value per pair.
fn unpair(doubled: &[f64], norm: f64) -> Result<Vec<f64>> {
    let tol = 1e-9 * norm.max(f64::MIN_POSITIVE);
    doubled
        .chunks(2)
        .map(|pair| {
            let (first, second) = (pair[0], pair[1]);
            if (first - second).abs() > tol {
                Err(NumericsError::PairingFailure { first, second, tol })
            } else {
                Ok(0.5 * (first + second))
            }
        })
        .collect()
}

/// Ascending eigenvalues of a Hermitian matrix, via its real embedding.
pub fn eigvalsh_hermitian(m: &HermitianMatrix) -> Result<Vec<f64>> {
    let doubled = eigvalsh_symmetric(&m.real_embedding())?;
    unpair(&doubled, m.norm_inf())
}

/// Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix.
///
/// Each complex eigenvalue appears twice in the embedding, with real vectors
/// `(u; w)` and `(-w; u)` mapping to `u + iw` and `i(u + iw)`. Within every
/// degenerate cluster the complex images are Gram-Schmidt reduced to an
/// orthonormal basis of the right size.
pub fn eigh_hermitian(m: &HermitianMatrix) -> Result<HermitianEigen> {
    let d = m.dim();
    let norm = m.norm_inf();
    let emb = eigh_symmetric(&m.real_embedding())?;
    let values = unpair(&emb.values, norm)?;
    let cluster_tol = 1e-9 * norm.max(f64::MIN_POSITIVE);

    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    let mut start = 0;
    while start < 2 * d {
        let mut end = start + 2;
        while end < 2 * d && (emb.values[end] - emb.values[start]).abs() <= cluster_tol {
            end += 2;
        }
        let want = (end - start) / 2;
        let mut accepted: Vec<Vec<Complex64>> = Vec::with_capacity(want);
        // Largest residual norm first keeps the Gram-Schmidt well conditioned.
        let mut candidates: Vec<Vec<Complex64>> =
            emb.vectors[start..end].iter().map(|x| (0..d).map(|i| Complex64::new(x[i], x[i + d])).collect()).collect();
        while accepted.len() < want && !candidates.is_empty() {
            let residuals: Vec<Vec<Complex64>> = candidates
                .iter()
                .map(|c| {
                    let mut r = c.clone();
                    for q in &accepted {
                        let proj: Complex64 = q.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
                        for (ri, qi) in r.iter_mut().zip(q) {
                            *ri -= proj * qi;
                        }
                    }
                    r
                })
                .collect();
            let (best, best_norm) = residuals
                .iter()
                .enumerate()
                .map(|(k, r)| (k, r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty candidates");
            let r = &residuals[best];
            accepted.push(r.iter().map(|z| z / best_norm).collect());
            candidates.swap_remove(best);
        }
        vectors.extend(accepted);
        start = end;
    }
    Ok(HermitianEigen { values, vectors })
}

/// Nodes and positive weights on a domain.
#[derive(Debug, Clone)]
pub struct QuadratureRule<P> {
    pub nodes: Vec<P>,
    pub weights: Vec<f64>,
}

impl<P> QuadratureRule<P> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(&P) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

/// Legendre `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Gauss–Legendre nodes and weights on [-1, 1], ascending nodes.
pub fn gauss_legendre(n: usize) -> QuadratureRule<f64> {
    assert!(n >= 1, "Gauss-Legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule { nodes, weights }
}

/// Composite Gauss–Legendre over `[a, b]` split into `panels` equal pieces.
pub fn integrate_interval(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, nodes: usize) -> f64 {
    let rule = gauss_legendre(nodes);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * h;
            let mid = lo + 0.5 * h;
            0.5 * h * rule.integrate(|&x| f(mid + 0.5 * h * x))
        })
        .sum()
}

/// Product rule on the unit sphere: `order` Gauss–Legendre nodes in cos θ
/// times `2 * order` equispaced azimuths. Exact for spherical polynomials of
/// degree below `2 * order`.
pub fn sphere_rule(order: usize) -> QuadratureRule<[f64; 3]> {
    let order = order.max(2);
    let gl = gauss_legendre(order);
    let n_phi = 2 * order;
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(order * n_phi);
    let mut weights = Vec::with_capacity(order * n_phi);
    for (&mu, &w) in gl.nodes.iter().zip(&gl.weights) {
        let sin_theta = (1.0 - mu * mu).max(0.0).sqrt();
        for j in 0..n_phi {
            let phi = (j as f64 + 0.5) * dphi;
            nodes.push([sin_theta * phi.cos(), sin_theta * phi.sin(), mu]);
            weights.push(w * dphi);
        }
    }
    QuadratureRule { nodes, weights }
}

/// Γ-centred `n³` grid on the unit torus of fractional coordinates,
/// weight `1/n³` per point.
pub fn torus_grid(n: usize) -> QuadratureRule<[f64; 3]> {
    let n = n.max(1);
    let w = 1.0 / (n * n * n) as f64;
    let mut nodes = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                nodes.push([i as f64 / n as f64, j as f64 / n as f64, k as f64 / n as f64]);
            }
        }
    }
    let weights = vec![w; nodes.len()];
    QuadratureRule { nodes, weights }
}

/// `∫₀^∞ f(x) dx` with `x = -ln u` and Gauss–Legendre on the dyadic panels
/// `[2^-(k+1), 2^-k]` of `u ∈ (0, 1]`, `nodes` points per panel.
pub fn half_line_gauss(f: impl Fn(f64) -> f64, nodes: usize) -> f64 {
    let rule = gauss_legendre(nodes);
    let mut total = 0.0;
    let mut quiet = 0;
    for k in 0..1070 {
        let hi = 0.5f64.powi(k);
        let lo = 0.5 * hi;
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let panel = half
            * rule.integrate(|&t| {
                let u = mid + half * t;
                f(-u.ln()) / u
            });
        total += panel;
        if k > 8 && panel.abs() <= 1e-18 * total.abs() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    total
}

/// Half-line integral with node doubling until successive estimates agree to
/// `rel_tol`.
pub fn integrate_half_line(f: impl Fn(f64) -> f64, rel_tol: f64) -> Result<f64> {
    let mut nodes = 8;
    let mut prev = half_line_gauss(&f, nodes);
    while nodes < 512 {
        nodes *= 2;
        let next = half_line_gauss(&f, nodes);
        if (next - prev).abs() <= rel_tol * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    Err(NumericsError::QuadratureStalled { tol: rel_tol })
}

/// Which Bose–Einstein moment to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoseKind {
    /// `xᵖ / (eˣ − 1)`
    Plain,
    /// `xᵖ eˣ / (eˣ − 1)²`
    Squared,
}

/// `x^p / (e^x - 1)` written with `expm1` so small and large `x` are both safe.
pub fn bose_plain(x: f64, p: i32) -> f64 {
    if x <= 0.0 {
        return if p == 1 { 1.0 } else { 0.0 };
    }
    x.powi(p) * (-x).exp() / -(-x).exp_m1()
}

/// `x^p e^x / (e^x - 1)^2`.
pub fn bose_squared(x: f64, p: i32) -> f64 {
    if x <= 0.0 {
        return if p == 2 { 1.0 } else { 0.0 };
    }
    let em1 = (-x).exp_m1();
    x.powi(p) * (-x).exp() / (em1 * em1)
}

pub fn bose_integral(p: i32, kind: BoseKind) -> Result<f64> {
    if !(3..=4).contains(&p) {
        return Err(NumericsError::UnsupportedPower(p));
    }
    match kind {
        BoseKind::Plain => integrate_half_line(|x| bose_plain(x, p), 1e-10),
        BoseKind::Squared => integrate_half_line(|x| bose_squared(x, p), 1e-10),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn residual_ok(m: &SymmetricMatrix, eig: &SymmetricEigen) {
        let norm = m.norm_inf().max(1.0);
        for (lam, v) in eig.values.iter().zip(&eig.vectors) {
            let mv = m.mul_vec(v);
            let r: f64 = mv.iter().zip(v).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt();
            assert!(r <= 1e-10 * norm, "residual {r}");
        }
        for (i, a) in eig.vectors.iter().enumerate() {
            for (j, b) in eig.vectors.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn identity_eigenvalues() {
        let e = eigh_symmetric(&SymmetricMatrix::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_sorted() {
        let e = eigh_symmetric(&SymmetricMatrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two() {
        let m = SymmetricMatrix::from_row_major(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let e = eigh_symmetric(&m).unwrap();
        assert_relative_eq!(e.values[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(e.values[1], 3.0, epsilon = 1e-14);
        residual_ok(&m, &e);
    }

    #[test]
    fn pauli_y() {
        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        let h = HermitianMatrix::from_row_major(2, &[z, i, -i, z]).unwrap();
        let e = eigh_hermitian(&h).unwrap();
        assert_relative_eq!(e.values[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(e.values[1], 1.0, epsilon = 1e-14);
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            let hv = h.mul_vec(v);
            for (a, b) in hv.iter().zip(v) {
                assert!((a - lam * b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn hermitian_of_real_matches_symmetric() {
        let m = SymmetricMatrix::from_row_major(3, &[4.0, 1.0, 0.5, 1.0, 3.0, -1.0, 0.5, -1.0, 2.0]).unwrap();
        let a = eigvalsh_symmetric(&m).unwrap();
        let b = eigvalsh_hermitian(&HermitianMatrix::from_real(&m)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_relative_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn one_by_one() {
        let h = HermitianMatrix::from_fn(1, |_, _| Complex64::new(5.0, 0.0));
        assert_eq!(eigvalsh_hermitian(&h).unwrap(), vec![5.0]);
    }

    #[test]
    fn degenerate_hermitian_vectors_are_orthonormal() {
        // 2 (x) I_3 plus a rank-one complex perturbation keeps a 2-fold cluster.
        let u = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(1.0, 1.0)];
        let h = HermitianMatrix::from_fn(3, |i, j| {
            let d = if i == j { 2.0 } else { 0.0 };
            Complex64::new(d, 0.0) + u[i] * u[j].conj()
        });
        let e = eigh_hermitian(&h).unwrap();
        assert_relative_eq!(e.values[0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(e.values[1], 2.0, epsilon = 1e-12);
        assert_relative_eq!(e.values[2], 6.0, epsilon = 1e-12);
        for (a, va) in e.vectors.iter().enumerate() {
            for (b, vb) in e.vectors.iter().enumerate() {
                let dot: Complex64 = va.iter().zip(vb).map(|(x, y)| x.conj() * y).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn gauss_legendre_moments() {
        for n in 1..12 {
            let r = gauss_legendre(n);
            assert_relative_eq!(r.total_weight(), 2.0, epsilon = 1e-13);
            for p in 0..(2 * n) {
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert!((r.integrate(|&x| x.powi(p as i32)) - exact).abs() < 1e-13, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn sphere_rule_moments() {
        let r = sphere_rule(8);
        assert!((r.total_weight() - 4.0 * PI).abs() < 1e-13);
        assert!((r.integrate(|p| p[2] * p[2]) - 4.0 * PI / 3.0).abs() < 1e-12);
        let r = sphere_rule(16);
        assert!((r.integrate(|p| p[0].powi(4)) - 4.0 * PI / 5.0).abs() < 1e-12);
        // mixed degree-4 monomial: ∫ x²y² = 4π/15
        assert!((r.integrate(|p| p[0] * p[0] * p[1] * p[1]) - 4.0 * PI / 15.0).abs() < 1e-12);
        assert!(r.integrate(|p| p[0] * p[1] * p[2]).abs() < 1e-13);
    }

    #[test]
    fn torus_grid_weights() {
        let g = torus_grid(3);
        assert_eq!(g.len(), 27);
        assert!((g.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bose_identities() {
        let pi4 = PI.powi(4);
        assert!((bose_integral(3, BoseKind::Plain).unwrap() - pi4 / 15.0).abs() < 1e-8);
        assert!((bose_integral(4, BoseKind::Squared).unwrap() - 4.0 * pi4 / 15.0).abs() < 1e-8);
        assert_eq!(bose_integral(2, BoseKind::Plain), Err(NumericsError::UnsupportedPower(2)));
    }

    #[test]
    fn bose_node_doubling_is_stable() {
        let a = half_line_gauss(|x| bose_plain(x, 3), 20);
        let b = half_line_gauss(|x| bose_plain(x, 3), 40);
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn interval_rule_polynomial() {
        let v = integrate_interval(|x| x * x * x, 0.0, 2.0, 3, 4);
        assert_relative_eq!(v, 4.0, epsilon = 1e-13);
    }

    fn arb_symmetric() -> impl Strategy<Value = SymmetricMatrix> {
        (1usize..9).prop_flat_map(|n| {
            proptest::collection::vec(-10.0f64..10.0, n * n)
                .prop_map(move |v| SymmetricMatrix::from_row_major(n, &v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn eigen_residual_and_trace(m in arb_symmetric()) {
            let e = eigh_symmetric(&m).unwrap();
            residual_ok(&m, &e);
            let sum: f64 = e.values.iter().sum();
            prop_assert!((sum - m.trace()).abs() <= 1e-9 * m.norm_inf().max(1.0));
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn permutation_invariant_spectrum(m in arb_symmetric(), seed in any::<u64>()) {
            let n = m.dim();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let pm = SymmetricMatrix::from_fn(n, |i, j| m.get(perm[i], perm[j]));
            let a = eigvalsh_symmetric(&m).unwrap();
            let b = eigvalsh_symmetric(&pm).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-10 * m.norm_inf().max(1.0));
            }
        }
    }
}
