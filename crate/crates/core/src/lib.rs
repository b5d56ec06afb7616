//! Harmonic lattice vibrations on crystal lattices modelled as periodic
//! graphs.
//!
//! A crystal is a finite quotient graph with masses on vertices, symmetric
//! positive-definite force matrices on edges and integer lattice shifts.
//! From it this crate computes the Bloch dispersion, the integrated density of
//! states, the acoustic (long-wavelength) limit and thermal quantities.
//!
//! ```
//! use latvib::{bloch, lattice};
//!
//! let cubic = lattice::build_cubic(1.0, 1.0).unwrap();
//! let lam = bloch::dispersion_at(&cubic, [0.5, 0.0, 0.0]).unwrap();
//! assert!(lam.iter().all(|l| (l - 4.0).abs() < 1e-12));
//! ```

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod acoustic;
pub mod bloch;
pub mod dos;
pub mod geom;
pub mod lattice;
pub mod numerics;
pub mod thermo;

pub use lattice::{parse_crystal, serialize_crystal, CrystalSpec};
pub use thermo::PhysicalConstants;
