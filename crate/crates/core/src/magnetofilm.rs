//! Gyrotropic permittivity of the electron gas and normal-incidence
//! transmission of a layer stack containing one magnetized sheet.
//!
//! Time dependence is `e^{-iωt}`, so absorbing media have `Im ε ≥ 0`.
//! In this convention
//! `ε_xx = ε_bg - ω_pl² (ω + iγ) / (ω d [(ω + iγ)² - ω_c²])` and
//! `ε_xy = i ω_pl² ω_c / (ω d [(ω + iγ)² - ω_c²])`, with `ω_c` signed by the
//! field direction. The circular components `ε_± = ε_xx ∓ i ε_xy` belong to
//! the eigenvectors `e_± = (1, ∓i)/√2`; `ε_-` carries the CR pole.

use std::io::Write;

use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::params::{PhysParams, SPEED_OF_LIGHT};
use crate::C64;

/// Relative permittivity of GaAs.
pub const GAAS_PERMITTIVITY: f64 = 12.96;

/// Drude-gyrotropic parameters of the sheet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GyroParams {
    pub eps_bg: f64,
    /// Plasma frequency `√(n_e e² / (ε₀ m_eff))` [rad/s · √m].
    pub omega_pl: f64,
    /// Scattering rate [rad/s].
    pub gamma: f64,
    /// Effective sheet thickness [m].
    pub d: f64,
    /// Signed magnetic field [T].
    pub b: f64,
    /// Effective mass [kg].
    pub m_eff: f64,
    pub e_charge: f64,
}

impl GyroParams {
    /// Sheet of the electron gas in `params` at field `b`. The scattering
    /// rate is `Γ_c/2`, which gives a CR absorption line of FWHM `Γ_c`.
    pub fn from_params(params: &PhysParams, b: f64) -> Self {
        Self {
            eps_bg: GAAS_PERMITTIVITY,
            omega_pl: params.plasma_frequency_sq().sqrt(),
            gamma: 0.5 * params.gamma_c,
            d: params.d_qw,
            b,
            m_eff: params.m_eff,
            e_charge: params.e_charge,
        }
    }

    pub fn with_field(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_bg > 1.0) {
            return Err(invalid("eps_bg", format!("{} must exceed 1", self.eps_bg)));
        }
        if !(self.d > 0.0) {
            return Err(invalid("d", format!("{} must be positive", self.d)));
        }
        if !(self.gamma >= 0.0) {
            return Err(invalid("gamma", format!("{} must be >= 0", self.gamma)));
        }
        if !(self.omega_pl >= 0.0) || !self.b.is_finite() || !(self.m_eff > 0.0) {
            return Err(invalid("gyro", "omega_pl, b and m_eff must be finite, m_eff > 0"));
        }
        Ok(())
    }

    /// Signed cyclotron frequency [rad/s].
    pub fn omega_c(&self) -> f64 {
        self.e_charge * self.b / self.m_eff
    }
}

/// Permittivity tensor of the sheet at angular frequency `omega`.
pub fn permittivity_tensor(omega: f64, gp: &GyroParams) -> Result<Matrix3<C64>> {
    gp.validate()?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(invalid("omega", format!("{omega} must be positive")));
    }
    let wc = gp.omega_c();
    let w = C64::new(omega, gp.gamma);
    let den = (w * w - wc * wc) * (omega * gp.d);
    if den.norm() == 0.0 {
        return Err(invalid("omega", "undamped cyclotron pole"));
    }
    let wp2 = gp.omega_pl * gp.omega_pl;
    let xx = C64::new(gp.eps_bg, 0.0) - w * wp2 / den;
    let xy = C64::new(0.0, wp2 * wc) / den;
    let z = C64::new(0.0, 0.0);
    let bg = C64::new(gp.eps_bg, 0.0);
    Ok(Matrix3::new(xx, xy, z, -xy, xx, z, z, z, bg))
}

/// `(ε_+, ε_-) = (ε_xx - i ε_xy, ε_xx + i ε_xy)`.
pub fn circular_eigenpermittivities(tensor: &Matrix3<C64>) -> Result<(C64, C64)> {
    let (xx, xy) = (tensor[(0, 0)], tensor[(0, 1)]);
    let tol = 1e-12 * (xx.norm() + xy.norm()).max(1.0);
    if (tensor[(1, 1)] - xx).norm() > tol
        || (tensor[(1, 0)] + xy).norm() > tol
        || tensor[(0, 2)].norm() > tol
        || tensor[(1, 2)].norm() > tol
        || tensor[(2, 0)].norm() > tol
        || tensor[(2, 1)].norm() > tol
    {
        return Err(invalid("tensor", "not of gyrotropic form"));
    }
    let i = C64::new(0.0, 1.0);
    Ok((xx - i * xy, xx + i * xy))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    /// Thickness [m].
    pub thickness: f64,
    /// Scalar relative permittivity (real part, imaginary part).
    pub eps: (f64, f64),
}

/// Layers between two semi-infinite media, with an optional gyrotropic
/// sheet inserted before layer `sheet_position` (or after the last layer
/// when equal to the layer count).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerStack {
    pub layers: Vec<Layer>,
    pub sheet_position: Option<usize>,
    #[serde(default = "unit")]
    pub eps_in: f64,
    #[serde(default = "unit")]
    pub eps_out: f64,
}

fn unit() -> f64 {
    1.0
}

impl LayerStack {
    /// Vacuum on both sides, no layers.
    pub fn empty() -> Self {
        Self {
            layers: Vec::new(),
            sheet_position: None,
            eps_in: 1.0,
            eps_out: 1.0,
        }
    }

    /// Sheet on top of a substrate slab of thickness `t` [m] and permittivity
    /// `eps`, in vacuum.
    pub fn sheet_on_substrate(t: f64, eps: f64) -> Self {
        Self {
            layers: vec![Layer {
                thickness: t,
                eps: (eps, 0.0),
            }],
            sheet_position: Some(0),
            eps_in: 1.0,
            eps_out: 1.0,
        }
    }

    /// Same stack with the sheet replaced by a plain layer of `eps_bg`.
    pub fn without_gyrotropy(&self, gp: &GyroParams) -> Self {
        let mut out = self.clone();
        if let Some(k) = out.sheet_position.take() {
            out.layers.insert(
                k,
                Layer {
                    thickness: gp.d,
                    eps: (gp.eps_bg, 0.0),
                },
            );
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        for (i, l) in self.layers.iter().enumerate() {
            if !(l.thickness > 0.0) || !l.thickness.is_finite() {
                return Err(Error::InvalidStack(format!("layer {i} has thickness {}", l.thickness)));
            }
            if !l.eps.0.is_finite() || !(l.eps.1 >= 0.0) {
                return Err(Error::InvalidStack(format!(
                    "layer {i}: permittivity must be finite with Im ε >= 0"
                )));
            }
        }
        if let Some(k) = self.sheet_position {
            if k > self.layers.len() {
                return Err(Error::InvalidStack(format!(
                    "sheet position {k} beyond {} layers",
                    self.layers.len()
                )));
            }
        }
        if !(self.eps_in > 0.0) || !(self.eps_out > 0.0) {
            return Err(Error::InvalidStack("ambient permittivities must be positive".into()));
        }
        Ok(())
    }

    /// Amplitude and power transmission for a scalar sheet permittivity.
    fn transmit(&self, k0: f64, sheet: Option<(C64, f64)>) -> Result<(C64, f64)> {
        let mut seq: Vec<(C64, f64)> = self
            .layers
            .iter()
            .map(|l| (C64::new(l.eps.0, l.eps.1), l.thickness))
            .collect();
        if let (Some(k), Some(s)) = (self.sheet_position, sheet) {
            seq.insert(k, s);
        }
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let mut m = [[one, zero], [zero, one]];
        for (eps, t) in seq {
            let n = eps.sqrt();
            let delta = n * (k0 * t);
            let (c, s) = (delta.cos(), delta.sin());
            let layer = [[c, -i * s / n], [-i * n * s, c]];
            m = [
                [
                    m[0][0] * layer[0][0] + m[0][1] * layer[1][0],
                    m[0][0] * layer[0][1] + m[0][1] * layer[1][1],
                ],
                [
                    m[1][0] * layer[0][0] + m[1][1] * layer[1][0],
                    m[1][0] * layer[0][1] + m[1][1] * layer[1][1],
                ],
            ];
        }
        let p1 = self.eps_in.sqrt();
        let pl = self.eps_out.sqrt();
        let t = 2.0 * p1 / ((m[0][0] + m[0][1] * pl) * p1 + (m[1][0] + m[1][1] * pl));
        if !t.re.is_finite() || !t.im.is_finite() {
            return Err(Error::InvalidStack("transfer matrix overflow (evanescent layer too thick)".into()));
        }
        Ok((t, pl / p1 * t.norm_sqr()))
    }
}

/// Power transmission of the circular and linear channels.
#[derive(Debug, Clone, PartialEq)]
pub struct FilmSpectrum {
    pub freq_hz: Vec<f64>,
    pub t_plus: Vec<f64>,
    pub t_minus: Vec<f64>,
    pub t_xx: Vec<f64>,
    pub t_xy: Vec<f64>,
    pub b: f64,
}

impl FilmSpectrum {
    /// CSV with columns `freq_GHz, T_plus, T_minus, T_xx, T_xy`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["freq_GHz", "T_plus", "T_minus", "T_xx", "T_xy"])?;
        for k in 0..self.freq_hz.len() {
            w.write_record([
                format!("{:.9}", self.freq_hz[k] * 1e-9),
                format!("{:.12e}", self.t_plus[k]),
                format!("{:.12e}", self.t_minus[k]),
                format!("{:.12e}", self.t_xx[k]),
                format!("{:.12e}", self.t_xy[k]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Normal-incidence transmission of `stack` with the sheet described by
/// `gp`. Linear amplitudes follow from the circular ones as
/// `t_xx = (t_+ + t_-)/2` and `t_xy = i (t_- - t_+)/2`.
pub fn film_transmission(stack: &LayerStack, gp: &GyroParams, freq_hz: &[f64]) -> Result<FilmSpectrum> {
    stack.validate()?;
    gp.validate()?;
    if freq_hz.is_empty() {
        return Err(Error::Empty("frequency grid"));
    }
    let rows = freq_hz
        .par_iter()
        .map(|&f| {
            let omega = std::f64::consts::TAU * f;
            let k0 = omega / SPEED_OF_LIGHT;
            let (tp, tm) = if stack.sheet_position.is_some() {
                let (ep, em) = circular_eigenpermittivities(&permittivity_tensor(omega, gp)?)?;
                (stack.transmit(k0, Some((ep, gp.d)))?, stack.transmit(k0, Some((em, gp.d)))?)
            } else {
                let t = stack.transmit(k0, None)?;
                (t, t)
            };
            let ratio = (stack.eps_out / stack.eps_in).sqrt();
            let i = C64::new(0.0, 1.0);
            let txx = (tp.0 + tm.0) * 0.5;
            let txy = i * (tm.0 - tp.0) * 0.5;
            Ok([tp.1, tm.1, ratio * txx.norm_sqr(), ratio * txy.norm_sqr()])
        })
        .collect::<Result<Vec<[f64; 4]>>>()?;
    Ok(FilmSpectrum {
        freq_hz: freq_hz.to_vec(),
        t_plus: rows.iter().map(|r| r[0]).collect(),
        t_minus: rows.iter().map(|r| r[1]).collect(),
        t_xx: rows.iter().map(|r| r[2]).collect(),
        t_xy: rows.iter().map(|r| r[3]).collect(),
        b: gp.b,
    })
}
