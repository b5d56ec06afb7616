//! Crystal lattices as periodic graphs.
//!
//! A [`CrystalSpec`] is the finite quotient graph `X₀ = (V₀, E₀)` of a crystal
//! lattice together with the translation lattice `L`, atom positions, masses
//! and per-edge force-constant matrices. Edge classes are closed under
//! reversal: every declared bond is stored as two oriented edges, the reverse
//! carrying the negated shift and the transposed matrix.
//!
//! The on-disk form is a small TOML document:
//!
//! ```toml
//! name = "cubic"
//! basis = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
//!
//! [[vertices]]
//! id = "A"
//! position = [0.0, 0.0, 0.0]
//! mass = 1.0
//!
//! [[bonds]]
//! from = "A"
//! to = "A"
//! shift = [1, 0, 0]
//! matrix = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
//! ```
//!
//! `basis` rows are the lattice vectors, positions are Cartesian, and `shift`
//! counts lattice vectors added to the terminus. Each undirected bond is
//! declared once; unknown keys are rejected.

use crate::geom::{self, Mat3, Vec3};
use crate::numerics::{eigvalsh_symmetric, SymmetricMatrix};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

/// Residual at or below which the rotation-invariance tensor condition holds.
pub const ADMISSIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("malformed lattice document: {0}")]
    Malformed(String),
    #[error("singular basis (determinant {0:e})")]
    SingularBasis(f64),
    #[error("nonpositive mass {mass} for vertex {id:?}")]
    NonpositiveMass { id: String, mass: f64 },
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("vertices {0:?} and {1:?} sit at the same position modulo the lattice")]
    CoincidentVertices(String, String),
    #[error("bond {bond} references unknown vertex {id:?}")]
    DanglingEndpoint { bond: usize, id: String },
    #[error("bond {0} is a self-loop with zero shift")]
    DegenerateBond(usize),
    #[error("bond {bond} duplicates an existing oriented edge")]
    DuplicateEdge { bond: usize },
    #[error("force matrix of bond {bond} is not symmetric (asymmetry {asym:e})")]
    NonSymmetric { bond: usize, asym: f64 },
    #[error("force matrix of bond {bond} is not positive definite (min eigenvalue {min_eig:e})")]
    NotPositiveDefinite { bond: usize, min_eig: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("quotient graph is disconnected; vertex {0:?} is unreachable")]
    Disconnected(String),
    #[error("{0} must be positive")]
    NonpositiveParameter(&'static str),
    #[error("crystal has no vertices")]
    Empty,
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// Translation lattice `L` with its dual `L*`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBasis {
    /// Rows are the lattice vectors `b₁, b₂, b₃`.
    pub vectors: Mat3,
    pub volume: f64,
    /// Rows are `b*₁, b*₂, b*₃` with `bᵢ · b*ⱼ = δᵢⱼ`.
    pub dual_vectors: Mat3,
}

impl LatticeBasis {
    pub fn new(vectors: Mat3) -> Result<Self> {
        if vectors.iter().flatten().any(|x| !x.is_finite()) {
            return Err(LatticeError::NonFinite("basis"));
        }
        let det = geom::det(&vectors);
        let scale = vectors.iter().map(geom::norm).product::<f64>();
        if det.abs() <= 1e-12 * scale || scale == 0.0 {
            return Err(LatticeError::SingularBasis(det));
        }
        let inv = geom::inverse(&vectors).ok_or(LatticeError::SingularBasis(det))?;
        // B·Dᵀ = I  ⇒  D = (B⁻¹)ᵀ
        let dual_vectors = geom::transpose(&inv);
        Ok(LatticeBasis { vectors, volume: det.abs(), dual_vectors })
    }

    /// `B·n = Σ nᵢ bᵢ`.
    pub fn lattice_point(&self, shift: [i32; 3]) -> Vec3 {
        let mut p = [0.0; 3];
        for (b, &n) in self.vectors.iter().zip(&shift) {
            p = geom::add(&p, &geom::scale(b, n as f64));
        }
        p
    }

    /// Cartesian character `χ = Σ kⱼ b*ⱼ` from fractional coordinates.
    pub fn cartesian_character(&self, fractional: &Vec3) -> Vec3 {
        let mut p = [0.0; 3];
        for (b, &k) in self.dual_vectors.iter().zip(fractional) {
            p = geom::add(&p, &geom::scale(b, k));
        }
        p
    }

    /// Fractional coordinates `kⱼ = χ · bⱼ`.
    pub fn fractional_character(&self, cartesian: &Vec3) -> Vec3 {
        [
            geom::dot(cartesian, &self.vectors[0]),
            geom::dot(cartesian, &self.vectors[1]),
            geom::dot(cartesian, &self.vectors[2]),
        ]
    }

    /// Fractional coordinates of a Cartesian position in the lattice basis.
    pub fn fractional_position(&self, position: &Vec3) -> Vec3 {
        [
            geom::dot(position, &self.dual_vectors[0]),
            geom::dot(position, &self.dual_vectors[1]),
            geom::dot(position, &self.dual_vectors[2]),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexClass {
    pub id: String,
    pub position: Vec3,
    pub mass: f64,
}

/// An oriented edge class of the quotient graph.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeClass {
    pub origin: usize,
    pub terminus: usize,
    pub shift: [i32; 3],
    pub force_matrix: Mat3,
    /// `Φ(te) + B·shift − Φ(oe)`
    pub bond_vector: Vec3,
}

/// Undirected bond as declared by a caller, before reversal closure.
#[derive(Debug, Clone, PartialEq)]
pub struct Bond {
    pub from: String,
    pub to: String,
    pub shift: [i32; 3],
    pub matrix: Mat3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrystalSpec {
    pub name: String,
    pub basis: LatticeBasis,
    pub vertices: Vec<VertexClass>,
    /// Oriented edges; `edges[2i]` is the declared orientation of bond `i` and
    /// `edges[2i + 1]` its reverse.
    pub edges: Vec<EdgeClass>,
}

impl CrystalSpec {
    /// Validates and assembles a crystal from declared bonds.
    pub fn new(name: impl Into<String>, basis: Mat3, vertices: Vec<VertexClass>, bonds: Vec<Bond>) -> Result<Self> {
        let basis = LatticeBasis::new(basis)?;
        if vertices.is_empty() {
            return Err(LatticeError::Empty);
        }
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.position.iter().any(|x| !x.is_finite()) || !v.mass.is_finite() {
                return Err(LatticeError::NonFinite("vertex"));
            }
            if v.mass <= 0.0 {
                return Err(LatticeError::NonpositiveMass { id: v.id.clone(), mass: v.mass });
            }
            if index.insert(v.id.clone(), i).is_some() {
                return Err(LatticeError::DuplicateVertex(v.id.clone()));
            }
        }
        for (i, a) in vertices.iter().enumerate() {
            for b in &vertices[..i] {
                let d = basis.fractional_position(&geom::sub(&a.position, &b.position));
                if d.iter().all(|x| (x - x.round()).abs() < 1e-9) {
                    return Err(LatticeError::CoincidentVertices(b.id.clone(), a.id.clone()));
                }
            }
        }

        let mut edges = Vec::with_capacity(2 * bonds.len());
        let mut seen = HashSet::new();
        for (k, bond) in bonds.iter().enumerate() {
            let origin = *index
                .get(&bond.from)
                .ok_or_else(|| LatticeError::DanglingEndpoint { bond: k, id: bond.from.clone() })?;
            let terminus =
                *index.get(&bond.to).ok_or_else(|| LatticeError::DanglingEndpoint { bond: k, id: bond.to.clone() })?;
            if origin == terminus && bond.shift == [0, 0, 0] {
                return Err(LatticeError::DegenerateBond(k));
            }
            let matrix = checked_force_matrix(k, &bond.matrix)?;
            let reverse_shift = bond.shift.map(|s| -s);
            if !seen.insert((origin, terminus, bond.shift)) || !seen.insert((terminus, origin, reverse_shift)) {
                return Err(LatticeError::DuplicateEdge { bond: k });
            }
            let lattice_shift = basis.lattice_point(bond.shift);
            let bond_vector =
                geom::sub(&geom::add(&vertices[terminus].position, &lattice_shift), &vertices[origin].position);
            edges.push(EdgeClass { origin, terminus, shift: bond.shift, force_matrix: matrix, bond_vector });
            edges.push(EdgeClass {
                origin: terminus,
                terminus: origin,
                shift: reverse_shift,
                force_matrix: geom::transpose(&matrix),
                bond_vector: geom::scale(&bond_vector, -1.0),
            });
        }

        let crystal = CrystalSpec { name: name.into(), basis, vertices, edges };
        crystal.check_quotient_connected()?;
        Ok(crystal)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// `3n`, the number of branches.
    pub fn dof(&self) -> usize {
        3 * self.vertices.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.vertices.iter().map(|v| v.mass).sum()
    }

    /// `ρ = m(V₀) / V`
    pub fn density(&self) -> f64 {
        self.total_mass() / self.basis.volume
    }

    pub fn reverse_edge(&self, e: usize) -> usize {
        e ^ 1
    }

    /// Declared orientation of every bond, in declaration order.
    pub fn bonds(&self) -> Vec<Bond> {
        self.edges
            .iter()
            .step_by(2)
            .map(|e| Bond {
                from: self.vertices[e.origin].id.clone(),
                to: self.vertices[e.terminus].id.clone(),
                shift: e.shift,
                matrix: e.force_matrix,
            })
            .collect()
    }

    /// Same crystal with every force matrix multiplied by `s`.
    pub fn with_scaled_forces(&self, s: f64) -> Result<Self> {
        let bonds = self.bonds().into_iter().map(|b| Bond { matrix: geom::mat_scale(&b.matrix, s), ..b }).collect();
        CrystalSpec::new(self.name.clone(), self.basis.vectors, self.vertices.clone(), bonds)
    }

    /// Same crystal with every mass multiplied by `s`.
    pub fn with_scaled_masses(&self, s: f64) -> Result<Self> {
        let vertices = self.vertices.iter().map(|v| VertexClass { mass: v.mass * s, ..v.clone() }).collect();
        CrystalSpec::new(self.name.clone(), self.basis.vectors, vertices, self.bonds())
    }

    fn check_quotient_connected(&self) -> Result<()> {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.origin].push(e.terminus);
        }
        let mut reached = vec![false; n];
        let mut queue = VecDeque::from([0]);
        reached[0] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !reached[y] {
                    reached[y] = true;
                    queue.push_back(y);
                }
            }
        }
        match reached.iter().position(|r| !r) {
            Some(i) => Err(LatticeError::Disconnected(self.vertices[i].id.clone())),
            None => Ok(()),
        }
    }
}

fn checked_force_matrix(bond: usize, m: &Mat3) -> Result<Mat3> {
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(LatticeError::NonFinite("force matrix"));
    }
    let max_abs = geom::mat_max_abs(m);
    let mut asym: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            asym = asym.max((m[i][j] - m[j][i]).abs());
        }
    }
    if asym > 1e-12 * max_abs.max(1.0) {
        return Err(LatticeError::NonSymmetric { bond, asym });
    }
    let sym = SymmetricMatrix::from_fn(3, |i, j| m[i][j]);
    let min_eig = eigvalsh_symmetric(&sym).map_err(|e| LatticeError::Malformed(e.to_string()))?[0];
    if max_abs == 0.0 || min_eig <= 1e-12 * max_abs {
        return Err(LatticeError::NotPositiveDefinite { bond, min_eig });
    }
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = sym.get(i, j);
        }
    }
    Ok(out)
}

/// Per-vertex max-abs entry of the tensor `Σ_{e ∈ E₀ₓ} A(e)ᵢⱼ v(e)ₖ`.
pub fn rotation_residuals(crystal: &CrystalSpec) -> Vec<f64> {
    let mut tensors = vec![[[[0.0f64; 3]; 3]; 3]; crystal.vertex_count()];
    for e in &crystal.edges {
        let t = &mut tensors[e.origin];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    t[i][j][k] += e.force_matrix[i][j] * e.bond_vector[k];
                }
            }
        }
    }
    tensors.iter().map(|t| t.iter().flatten().flatten().fold(0.0, |m: f64, x| m.max(x.abs()))).collect()
}

/// Largest rotation-invariance residual over all vertices.
pub fn validate_rotation_invariance(crystal: &CrystalSpec) -> f64 {
    rotation_residuals(crystal).into_iter().fold(0.0, f64::max)
}

pub fn is_admissible(crystal: &CrystalSpec) -> bool {
    validate_rotation_invariance(crystal) <= ADMISSIBILITY_TOL
}

fn scalar(s: f64) -> Mat3 {
    [[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, s]]
}

/// Simple cubic lattice `Z³` with nearest-neighbour scalar springs. The
/// quotient is the 3-bouquet graph.
pub fn build_cubic(mass: f64, stiffness: f64) -> Result<CrystalSpec> {
    if !(mass > 0.0) {
        return Err(LatticeError::NonpositiveParameter("mass"));
    }
    if !(stiffness > 0.0) {
        return Err(LatticeError::NonpositiveParameter("stiffness"));
    }
    let vertices = vec![VertexClass { id: "A".into(), position: [0.0; 3], mass }];
    let bonds = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        .into_iter()
        .map(|shift| Bond { from: "A".into(), to: "A".into(), shift, matrix: scalar(stiffness) })
        .collect();
    CrystalSpec::new("cubic", geom::transpose(&scalar(1.0)), vertices, bonds)
}

/// Diamond lattice: `L` spanned by `e₁+e₂, e₂+e₃, e₃+e₁`, atoms at the origin
/// and at `(½,½,½)`, each joined to its four tetrahedral neighbours.
pub fn build_diamond(masses: [f64; 2], stiffness: f64) -> Result<CrystalSpec> {
    if masses.iter().any(|m| !(*m > 0.0)) {
        return Err(LatticeError::NonpositiveParameter("mass"));
    }
    if !(stiffness > 0.0) {
        return Err(LatticeError::NonpositiveParameter("stiffness"));
    }
    let basis = [[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]];
    let vertices = vec![
        VertexClass { id: "A".into(), position: [0.0; 3], mass: masses[0] },
        VertexClass { id: "B".into(), position: [0.5; 3], mass: masses[1] },
    ];
    // B at (n₂+n₃+½, n₃+n₁+½, n₁+n₂+½) with n = m, m − e₁, m − e₂, m − e₃.
    let bonds = [[0, 0, 0], [-1, 0, 0], [0, -1, 0], [0, 0, -1]]
        .into_iter()
        .map(|shift| Bond {
            from: "A".into(),
            to: "B".into(),
            shift: lattice_shift_of(shift),
            matrix: scalar(stiffness),
        })
        .collect();
    CrystalSpec::new("diamond", basis, vertices, bonds)
}

// `n` enumerates sites as (n₂+n₃, n₃+n₁, n₁+n₂) = n₁(e₂+e₃)+n₂(e₃+e₁)+n₃(e₁+e₂),
// i.e. coefficients (n₃, n₁, n₂) on the basis rows (e₁+e₂, e₂+e₃, e₃+e₁).
fn lattice_shift_of(n: [i32; 3]) -> [i32; 3] {
    [n[2], n[0], n[1]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub position: Vec3,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BondDoc {
    pub from: String,
    pub to: String,
    pub shift: [i32; 3],
    pub matrix: Mat3,
}

/// Serialized lattice-spec document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub name: String,
    pub basis: Mat3,
    pub vertices: Vec<VertexDoc>,
    pub bonds: Vec<BondDoc>,
}

impl LatticeDocument {
    pub fn into_crystal(self) -> Result<CrystalSpec> {
        let vertices =
            self.vertices.into_iter().map(|v| VertexClass { id: v.id, position: v.position, mass: v.mass }).collect();
        let bonds =
            self.bonds.into_iter().map(|b| Bond { from: b.from, to: b.to, shift: b.shift, matrix: b.matrix }).collect();
        CrystalSpec::new(self.name, self.basis, vertices, bonds)
    }

    pub fn from_crystal(crystal: &CrystalSpec) -> Self {
        LatticeDocument {
            name: crystal.name.clone(),
            basis: crystal.basis.vectors,
            vertices: crystal
                .vertices
                .iter()
                .map(|v| VertexDoc { id: v.id.clone(), position: v.position, mass: v.mass })
                .collect(),
            bonds: crystal
                .bonds()
                .into_iter()
                .map(|b| BondDoc { from: b.from, to: b.to, shift: b.shift, matrix: b.matrix })
                .collect(),
        }
    }
}

pub fn parse_crystal(document: &str) -> Result<CrystalSpec> {
    let doc: LatticeDocument =
        toml::from_str(document).map_err(|e| LatticeError::Malformed(e.message().to_string()))?;
    doc.into_crystal()
}

pub fn serialize_crystal(crystal: &CrystalSpec) -> String {
    toml::to_string(&LatticeDocument::from_crystal(crystal)).expect("lattice documents always serialize")
}
