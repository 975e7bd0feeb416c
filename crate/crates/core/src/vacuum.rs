//! Vacuum-fluctuation maps of a single cavity mode and its localization
//! along z.

use crate::error::{Error, Result};
use crate::params::PhysParams;
use crate::profile::{GridField, InPlaneField, ModeProfile, VolumeField};

/// Allowed deviation of `∫dρ/a² ∫dz/a ε Σ E²` from 1.
pub const NORM_TOL: f64 = 1e-3;

/// Vacuum-state quantities of one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct VacuumMaps {
    /// z samples [m].
    pub z: Vec<f64>,
    /// `⟨I_{p,σ}(z)⟩` [J/m].
    pub i_z: Vec<f64>,
    pub nx: usize,
    pub ny: usize,
    /// `√⟨E²_{p,σ}(ρ)⟩` at the electron gas, row-major `iy * nx + ix` [V/m].
    pub e_std: Vec<f64>,
    /// Mean position of the electric energy density [m].
    pub zbar: f64,
    /// Standard deviation of the electric energy density along z [m].
    pub sigma_z: f64,
    /// Measured normalization integral.
    pub norm: f64,
}

/// In-plane average `∫dρ/a² ε Σ_j E_j²` at every z sample (dimensionless).
pub fn energy_profile(vol: &VolumeField) -> Result<Vec<f64>> {
    vol.validate()?;
    let cell = vol.nx * vol.ny;
    Ok((0..vol.nz())
        .map(|iz| {
            let s: f64 = (iz * cell..(iz + 1) * cell)
                .map(|k| vol.eps[k] * (vol.ex[k].powi(2) + vol.ey[k].powi(2) + vol.ez[k].powi(2)))
                .sum();
            s / cell as f64
        })
        .collect())
}

fn trapezoid(z: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    z.windows(2)
        .enumerate()
        .map(|(i, w)| 0.5 * (w[1] - w[0]) * (f(i) + f(i + 1)))
        .sum()
}

/// `∫dρ/a² ∫dz/a ε Σ E²` of a volume field for lattice constant `a` [m].
pub fn normalization(vol: &VolumeField, a: f64) -> Result<f64> {
    let u = energy_profile(vol)?;
    Ok(trapezoid(&vol.z, |i| u[i]) / a)
}

/// Vacuum maps of `profile`, which must carry z-resolved data.
///
/// z integrals use the trapezoid rule on the given samples, in-plane
/// averages the midpoint rule.
pub fn vacuum_maps(profile: &ModeProfile, params: &PhysParams) -> Result<VacuumMaps> {
    let vol = profile
        .volume
        .as_ref()
        .ok_or_else(|| Error::ShapeMismatch(format!("mode {} has no z-resolved data", profile.label)))?;
    if vol.nz() < 2 {
        return Err(Error::ShapeMismatch("need at least two z samples".into()));
    }
    params.validate()?;
    let a = params.a;
    let u = energy_profile(vol)?;
    let norm = trapezoid(&vol.z, |i| u[i]) / a;
    if !((norm - 1.0).abs() <= NORM_TOL) {
        return Err(Error::NotNormalized {
            measured: norm,
            tolerance: NORM_TOL,
        });
    }
    let zbar = trapezoid(&vol.z, |i| vol.z[i] * u[i]) / a;
    let var = trapezoid(&vol.z, |i| (vol.z[i] - zbar).powi(2) * u[i]) / a;
    let hw = params.hbar * profile.omega;
    let i_z = u.iter().map(|x| hw / (4.0 * a) * x).collect();

    let plane: GridField = match &profile.field {
        InPlaneField::Grid(g) => g.clone(),
        InPlaneField::Fourier(f) => f.reconstruct(vol.nx, vol.ny),
    };
    let pref = hw / (2.0 * params.eps0 * a.powi(3));
    let e_std = plane
        .ex
        .iter()
        .zip(&plane.ey)
        .map(|(x, y)| (pref * (x * x + y * y)).sqrt())
        .collect();
    Ok(VacuumMaps {
        z: vol.z.clone(),
        i_z,
        nx: plane.nx,
        ny: plane.ny,
        e_std,
        zbar,
        sigma_z: var.max(0.0).sqrt(),
        norm,
    })
}
