//! Spectral graph and ideal Bose gas numerics for the Pure Hopping model
//! `H = ‖A‖ I − A` on lattices, the half line and comb graphs.
//!
//! Modules follow the computation pipeline: graph construction, generic
//! spectral kernels, lattice Green functions, the comb secular equation,
//! Perron–Frobenius weights, integrated density of states, thermodynamics
//! and finally the study runner used by the command line tool.

pub mod error;
pub mod graph;
pub mod green;
pub mod ids;
pub mod linalg;
pub mod perron;
pub mod quad;
pub mod report;
pub mod secular;
pub mod spectral;
pub mod thermo;

pub use error::{Error, Extended, Result};
pub use graph::{Exhaustion, GraphModel, Site, SparseOperator};
