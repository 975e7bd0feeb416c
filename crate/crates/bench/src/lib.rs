//! Benchmark fixtures shared by the criterion targets.

use usc_core::hopfield::{build_hamiltonian, HopfieldMatrix};
use usc_core::spectro::FitModel;
use usc_core::toy::ToyModel;
use usc_core::{CouplingSet, HamiltonianFlags, PhysParams};

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Toy couplings at full overlap and B = 1 T.
pub fn toy_couplings() -> CouplingSet {
    ToyModel::new(1.0).coupling_set(&PhysParams::default(), 1.0).unwrap()
}

pub fn toy_hamiltonian() -> HopfieldMatrix {
    build_hamiltonian(&toy_couplings(), HamiltonianFlags::default()).unwrap()
}

/// Peak with two shallow dips, as in a measured transmission spectrum.
pub fn composite_model() -> FitModel {
    FitModel::peak(400e9, 6e9, 0.4)
        .with_dip(392e9, 2e9, 0.15)
        .with_dip(409e9, 3e9, 0.1)
}
