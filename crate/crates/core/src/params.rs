//! Physical constants and the material/cavity parameter set.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Elementary charge [C] (exact, SI 2019).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity [F/m].
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Electron rest mass [kg].
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// Speed of light [m/s].
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// GaAs conduction-band effective mass in units of the electron mass.
pub const GAAS_MASS_RATIO: f64 = 0.067;

/// Material and cavity parameters shared by every calculation.
///
/// Defaults describe a GaAs multi-quantum-well 2DEG (total areal density
/// 3.08×10¹⁶ m⁻²) in a woodpile cavity with lattice constant 333 µm and an
/// intrinsic CR linewidth Γ_c/2π = 5.7 GHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysParams {
    /// Areal electron density [m⁻²].
    pub n_e: f64,
    /// Effective mass [kg].
    pub m_eff: f64,
    /// Lattice constant of the photonic crystal [m].
    pub a: f64,
    pub eps0: f64,
    pub e_charge: f64,
    pub hbar: f64,
    /// CR decay rate [rad/s].
    pub gamma_c: f64,
    /// Thickness of the heterostructure [m].
    pub d_qw: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        Self {
            n_e: 3.08e16,
            m_eff: GAAS_MASS_RATIO * ELECTRON_MASS,
            a: 333e-6,
            eps0: VACUUM_PERMITTIVITY,
            e_charge: ELEMENTARY_CHARGE,
            hbar: HBAR,
            gamma_c: TAU * 5.7e9,
            d_qw: 2e-6,
        }
    }
}

impl PhysParams {
    /// Checks that every field is finite and strictly positive.
    ///
    /// `n_e = 0` is accepted: it switches the light-matter coupling off.
    pub fn validate(&self) -> Result<()> {
        let fields: [(&'static str, f64); 8] = [
            ("n_e", self.n_e),
            ("m_eff", self.m_eff),
            ("a", self.a),
            ("eps0", self.eps0),
            ("e_charge", self.e_charge),
            ("hbar", self.hbar),
            ("gamma_c", self.gamma_c),
            ("d_qw", self.d_qw),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(invalid(name, format!("{v} is not finite")));
            }
            let ok = if name == "n_e" { v >= 0.0 } else { v > 0.0 };
            if !ok {
                return Err(invalid(name, format!("{v} must be positive")));
            }
        }
        Ok(())
    }

    /// Squared prefactor of the coupling field divided by ω_c:
    /// `e² n_e / (4 ε₀ m_eff ω_p a)` [rad/s].
    ///
    /// The full coupling is `g = E √(ω_c · reduced_coupling_sq(ω_p))`.
    pub fn reduced_coupling_sq(&self, omega_p: f64) -> f64 {
        self.e_charge * self.e_charge * self.n_e
            / (4.0 * self.eps0 * self.m_eff * omega_p * self.a)
    }

    /// Plasma frequency squared of the sheet, `n_e e² / (ε₀ m_eff)` [rad²/s² · m].
    pub fn plasma_frequency_sq(&self) -> f64 {
        self.n_e * self.e_charge * self.e_charge / (self.eps0 * self.m_eff)
    }

    /// Magnetic length `√(ħ / eB)` [m]. Used only by the microscopic picture.
    pub fn magnetic_length(&self, b: f64) -> Result<f64> {
        if !(b > 0.0) {
            return Err(invalid("B", "magnetic length requires B > 0"));
        }
        Ok((self.hbar / (self.e_charge * b)).sqrt())
    }

    /// Landau-level filling factor `ν = 2π n_e l_c²`.
    pub fn filling_factor(&self, b: f64) -> Result<f64> {
        let lc = self.magnetic_length(b)?;
        Ok(TAU * self.n_e * lc * lc)
    }
}

/// Cyclotron angular frequency `ω_c = eB / m_eff` [rad/s].
pub fn cyclotron_frequency(b: f64, params: &PhysParams) -> Result<f64> {
    if b < 0.0 || b.is_nan() {
        return Err(Error::NegativeField(b));
    }
    Ok(params.e_charge * b / params.m_eff)
}

/// Unit conversions used at the boundaries (configs, CSV).
pub mod units {
    use std::f64::consts::TAU;

    pub fn ghz_to_rad(f_ghz: f64) -> f64 {
        TAU * f_ghz * 1e9
    }

    pub fn rad_to_ghz(omega: f64) -> f64 {
        omega / TAU * 1e-9
    }

    pub fn rad_to_hz(omega: f64) -> f64 {
        omega / TAU
    }

    pub fn hz_to_rad(f: f64) -> f64 {
        TAU * f
    }

    pub fn um_to_m(x: f64) -> f64 {
        x * 1e-6
    }
}
