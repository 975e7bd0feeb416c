use std::io::Write;

use rayon::prelude::*;

use super::bogoliubov::{diagonalize, PolaritonSolution, Stability};
use super::correlations::mp_weights;
use super::hamiltonian::{build_hamiltonian, HamiltonianFlags};
use crate::coupling::CouplingSet;
use crate::error::{invalid, Error, Result};
use crate::params::PhysParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub flags: HamiltonianFlags,
    /// Largest allowed jump of a branch between adjacent fields [rad/s].
    /// `None` uses twice the CR step plus 2π·1 GHz.
    pub jump_threshold: Option<f64>,
    /// Keep unstable points instead of failing on the first one.
    pub allow_unstable: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            flags: HamiltonianFlags::default(),
            jump_threshold: None,
            allow_unstable: false,
        }
    }
}

impl SweepOptions {
    pub fn with_flags(flags: HamiltonianFlags) -> Self {
        Self {
            flags,
            ..Self::default()
        }
    }
}

/// Polariton spectra over a magnetic-field grid. Branches are labelled by
/// their sorted index at each field.
#[derive(Debug, Clone)]
pub struct DispersionSweep {
    b: Vec<f64>,
    solutions: Vec<PolaritonSolution>,
    jumps: Vec<(usize, usize)>,
}

/// Sweep of the modes in `base` (their fields are rebuilt at every `B`).
pub fn dispersion_sweep(
    base: &CouplingSet,
    params: &PhysParams,
    b_grid: &[f64],
    options: SweepOptions,
) -> Result<DispersionSweep> {
    dispersion_sweep_with(|b| base.at_field(b, params), b_grid, options)
}

/// Sweep with a caller-supplied coupling generator. Points are solved in
/// parallel.
pub fn dispersion_sweep_with<F>(
    couplings: F,
    b_grid: &[f64],
    options: SweepOptions,
) -> Result<DispersionSweep>
where
    F: Fn(f64) -> Result<CouplingSet> + Sync,
{
    if b_grid.is_empty() {
        return Err(Error::Empty("B grid"));
    }
    if b_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("b_grid", "must be strictly increasing"));
    }
    let solutions = b_grid
        .par_iter()
        .map(|&b| {
            let cs = couplings(b)?;
            let h = build_hamiltonian(&cs, options.flags)?.with_b_field(b);
            let sol = diagonalize(&h)?;
            if !options.allow_unstable {
                sol.check_stable()?;
            }
            Ok(sol)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = solutions[0].n_modes();
    if let Some(s) = solutions.iter().find(|s| s.n_modes() != n) {
        return Err(Error::ShapeMismatch(format!(
            "branch count changed from {n} to {} at B = {:?}",
            s.n_modes(),
            s.b_field()
        )));
    }
    let mut jumps = Vec::new();
    for i in 1..solutions.len() {
        let (a, b) = (&solutions[i - 1], &solutions[i]);
        let threshold = options
            .jump_threshold
            .unwrap_or(2.0 * (b.omega_c() - a.omega_c()).abs() + std::f64::consts::TAU * 1e9);
        let (wa, wb) = (a.omegas(), b.omegas());
        for k in 0..n {
            if (wb[k] - wa[k]).abs() > threshold {
                jumps.push((i, k));
            }
        }
    }
    Ok(DispersionSweep {
        b: b_grid.to_vec(),
        solutions,
        jumps,
    })
}

impl DispersionSweep {
    pub fn b_grid(&self) -> &[f64] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn solutions(&self) -> &[PolaritonSolution] {
        &self.solutions
    }

    pub fn branch_count(&self) -> usize {
        self.solutions[0].n_modes()
    }

    /// Cyclotron frequencies along the grid [rad/s].
    pub fn omega_c(&self) -> Vec<f64> {
        self.solutions.iter().map(|s| s.omega_c()).collect()
    }

    /// Sorted branch frequencies `ω_λ/2π` at grid point `i` [Hz].
    pub fn frequencies_hz(&self, i: usize) -> Vec<f64> {
        self.solutions[i]
            .omegas()
            .into_iter()
            .map(crate::params::units::rad_to_hz)
            .collect()
    }

    /// Branch `k` across the grid [Hz].
    pub fn branch_hz(&self, k: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.frequencies_hz(i)[k]).collect()
    }

    /// `(grid index, branch)` pairs whose step from the previous field
    /// exceeded the jump threshold.
    pub fn discontinuities(&self) -> &[(usize, usize)] {
        &self.jumps
    }

    /// Fields at which at least one mode is unstable.
    pub fn unstable_points(&self) -> Vec<f64> {
        self.b
            .iter()
            .zip(&self.solutions)
            .filter(|(_, s)| !s.is_stable())
            .map(|(b, _)| *b)
            .collect()
    }

    pub fn ensure_stable(&self) -> Result<()> {
        self.solutions.iter().try_for_each(|s| s.check_stable())
    }

    /// MP weights per photon mode at every field.
    pub fn mp_weights(&self) -> Result<Vec<Vec<f64>>> {
        self.solutions.iter().map(mp_weights).collect()
    }

    /// CSV with columns `B_T, branch_index, freq_GHz, stability_flag`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["B_T", "branch_index", "freq_GHz", "stability_flag"])?;
        for (b, sol) in self.b.iter().zip(&self.solutions) {
            for (k, (om, st)) in sol.omegas().iter().zip(sol.stability()).enumerate() {
                w.write_record([
                    format!("{b:.6}"),
                    k.to_string(),
                    format!("{:.9}", crate::params::units::rad_to_ghz(*om)),
                    st.as_str().to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn stability(&self, i: usize) -> &[Stability] {
        self.solutions[i].stability()
    }
}
