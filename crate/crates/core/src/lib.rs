//! Numerical engine for multimode ultrastrong light-matter coupling between
//! photonic-crystal cavity modes and the cyclotron resonance of a
//! two-dimensional electron gas.
//!
//! The crate is organized bottom-up:
//!
//! * [`params`]: physical constants, material parameters, cyclotron frequency.
//! * [`profile`]: in-plane (and optionally z-resolved) cavity mode profiles,
//!   analytic toy profiles and Fourier decomposition.
//! * [`profile_io`]: versioned manifest + payload file format for profiles.
//! * [`coupling`]: coupling fields, effective couplings, overlaps and the
//!   figures of merit built on them.
//! * [`vacuum`]: vacuum-fluctuation maps and z-localization of a mode.
//! * [`hopfield`]: quadratic multimode Hamiltonian, Bogoliubov diagonalization,
//!   dispersions, ground-state correlations and middle-polariton weights.
//! * [`inout`]: input-output transmission spectra of the dissipative system.
//! * [`magnetofilm`]: gyrotropic sheet permittivity and thin-film transmission.
//! * [`spectro`]: time-window FFT, composite peak fitting, peak tracking and
//!   the RMS deviation metric.
//! * [`toy`]: the two-mode toy model with tunable spatial overlap.
//!
//! Units are SI internally (rad/s for angular frequencies, Hz only where a
//! field name says so).

pub mod coupling;
pub mod error;
pub mod hopfield;
pub mod inout;
pub mod magnetofilm;
pub mod params;
pub mod profile;
pub mod profile_io;
pub mod spectro;
pub mod toy;
pub mod vacuum;

mod linalg;

pub use coupling::{CouplingSet, FigureOfMerit, ModeCoupling};
pub use error::{Error, Result};
pub use hopfield::{
    DispersionSweep, HamiltonianFlags, HopfieldMatrix, PolaritonSolution, Stability, TermSelection,
};
pub use inout::{DissipationSpec, SpectrumSeries};
pub use params::{cyclotron_frequency, PhysParams};
pub use profile::{FourierField, GridField, InPlaneField, ModeLabel, ModeProfile, Polarization};
pub use vacuum::VacuumMaps;

pub use num_complex::Complex64 as C64;
