//! Spectral kernels: Lanczos and conjugate gradients on sparse operators,
//! Chebyshev functional calculus, rank-one secular problems and structured
//! spectra of the catalog's finite volumes.

mod chebyshev;
mod krylov;
mod structured;
pub mod torus;

pub use chebyshev::{chebyshev_apply, default_interval, ChebSeries};
pub use krylov::{extremal_eig, shifted_solve, shifted_solve_above, EigPair, Solve};
pub use structured::{
    comb_spectrum_structured, dense_spectrum, model_spectrum, model_top, path_eigenvalue, path_eigenvalues,
    path_eigenvector, SpectrumStructured,
};
pub(crate) use structured::comb_modes;
pub use torus::{cycle_green, rank_one_secular, torus_eigenvalues, FiberMode, TorusFiber};
