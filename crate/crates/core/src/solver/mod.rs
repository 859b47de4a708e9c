//! Real-wavenumber spectra of closed Neumann metric graphs.

mod bond;
mod oracle;
mod secular;
mod spectrum;

pub use bond::{bond_matrix, secular_residual, BondSystem, DirectedBond};
pub use oracle::{fd_error_estimate, fd_oracle_spectrum};
pub use secular::{solve_spectrum, spectrum_under_phase_reversal, SolverConfig};
pub use spectrum::{Diagnostics, Level, Spectrum, DEFAULT_WEYL_BOUND};
