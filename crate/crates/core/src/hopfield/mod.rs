//! Multimode Hopfield Hamiltonian and its bosonic Bogoliubov diagonalization.
//!
//! The Hamiltonian is quadratic in the photon operators `a_p` and the CR
//! operators `b_G`. It is stored as the Hermitian matrix
//! `M = [[A, B], [B*, A*]]` acting on `Ψ = (a, b, a†, b†)`, so that
//! `H = ½ Ψ† M Ψ + const`. Polariton modes are the eigenvectors of the
//! dynamical matrix `ηM` with `η = diag(1, -1)` and positive symplectic norm.

mod bogoliubov;
mod correlations;
mod hamiltonian;
mod sweep;

pub use bogoliubov::{diagonalize, diagonalize_with, Method, PolaritonSolution, Stability};
pub use correlations::{
    ground_state_correlations, mp_branches, mp_crossing, mp_weights, vacuum_correlations,
    write_correlation_csv, MpCrossing,
};
pub use hamiltonian::{
    build_hamiltonian, HamiltonianFlags, HopfieldMatrix, MatterMode, PhotonMode, TermSelection,
};
pub use sweep::{dispersion_sweep, dispersion_sweep_with, DispersionSweep, SweepOptions};
