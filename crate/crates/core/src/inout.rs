//! Input-output transmission spectra of the dissipative multimode system.
//!
//! Every photon mode couples to two identical Markovian reservoirs (top and
//! bottom port), each with rate `Γ_p/2`; every CR mode decays at `Γ_c`. The
//! linear Langevin equations for `Ψ = (a, b, a†, b†)` are solved in the
//! frequency domain, `(iηM + Γ/2 - iω) Ψ(ω) = -√κ Ψ_in(ω)`, keeping the
//! counter-rotating terms of the system Hamiltonian. Inputs of different
//! photon modes come from independent reservoirs and add incoherently.

use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::coupling::CouplingSet;
use crate::error::{invalid, Error, Result};
use crate::hopfield::{build_hamiltonian, HamiltonianFlags, HopfieldMatrix};
use crate::params::units::hz_to_rad;
use crate::profile::Polarization;
use crate::C64;

/// Decay rates of the open system [rad/s].
#[derive(Debug, Clone, PartialEq)]
pub struct DissipationSpec {
    /// Total decay rate `Γ_p = ω_p/Q_p` of every photon mode.
    pub gamma_p: Vec<f64>,
    /// CR decay rate, applied to every matter mode.
    pub gamma_c: f64,
}

impl DissipationSpec {
    pub fn new(gamma_p: Vec<f64>, gamma_c: f64) -> Result<Self> {
        let s = Self { gamma_p, gamma_c };
        s.validate()?;
        Ok(s)
    }

    /// `Γ_p = ω_p / Q_p` from the photon modes of `h`.
    pub fn from_quality(h: &HopfieldMatrix, gamma_c: f64) -> Result<Self> {
        Self::new(
            h.photons().iter().map(|p| p.omega / p.quality).collect(),
            gamma_c,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(g) = self
            .gamma_p
            .iter()
            .chain(std::iter::once(&self.gamma_c))
            .find(|g| !(**g > 0.0) || !g.is_finite())
        {
            return Err(invalid("decay rate", format!("{g} must be finite and > 0")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMeta {
    /// Magnetic field [T], when known.
    pub b: Option<f64>,
    pub sigma_in: Polarization,
    pub sigma_out: Polarization,
    pub flags: HamiltonianFlags,
}

/// Normalized transmission `T(f)` on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSeries {
    /// Frequencies [Hz].
    pub freq_hz: Vec<f64>,
    pub t: Vec<f64>,
    pub meta: SpectrumMeta,
}

impl SpectrumSeries {
    /// Local maxima of `T` above `rel_floor · max T`, refined by a parabola
    /// through the three samples around each maximum [Hz].
    pub fn peaks(&self, rel_floor: f64) -> Vec<f64> {
        let t = &self.t;
        let f = &self.freq_hz;
        let top = t.iter().cloned().fold(0.0, f64::max);
        let mut out = Vec::new();
        for i in 1..t.len().saturating_sub(1) {
            if t[i] > t[i - 1] && t[i] >= t[i + 1] && t[i] > rel_floor * top {
                let denom = t[i - 1] - 2.0 * t[i] + t[i + 1];
                let shift = if denom < 0.0 {
                    0.5 * (t[i - 1] - t[i + 1]) / denom
                } else {
                    0.0
                };
                out.push(f[i] + shift * 0.5 * (f[i + 1] - f[i - 1]));
            }
        }
        out
    }

    /// CSV with columns `freq_GHz, T`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["freq_GHz", "T"])?;
        for (f, t) in self.freq_hz.iter().zip(&self.t) {
            w.write_record([format!("{:.9}", f * 1e-9), format!("{t:.12e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_grid(freq_hz: &[f64]) -> Result<()> {
    if freq_hz.is_empty() {
        return Err(Error::Empty("frequency grid"));
    }
    if freq_hz.iter().any(|f| !f.is_finite() || *f < 0.0) {
        return Err(invalid("freq_grid", "frequencies must be finite and >= 0"));
    }
    Ok(())
}

/// Transmission from the top ports of all `sigma_in` photon modes to the
/// bottom ports of all `sigma_out` modes,
/// `T = Σ_{p'∈σ_out, p∈σ_in} κ_{p'} κ_p |χ_{p'p}|² / N_in`.
pub fn transmission_spectrum(
    h: &HopfieldMatrix,
    diss: &DissipationSpec,
    freq_hz: &[f64],
    sigma_in: Polarization,
    sigma_out: Polarization,
) -> Result<SpectrumSeries> {
    diss.validate()?;
    check_grid(freq_hz)?;
    let np = h.n_photon();
    if diss.gamma_p.len() != np {
        return Err(invalid(
            "gamma_p",
            format!("expected {np} photon rates, got {}", diss.gamma_p.len()),
        ));
    }
    let inputs: Vec<usize> = (0..np).filter(|&p| h.photons()[p].label.sigma == sigma_in).collect();
    let outputs: Vec<usize> = (0..np).filter(|&p| h.photons()[p].label.sigma == sigma_out).collect();
    if inputs.is_empty() {
        return Err(invalid("sigma_in", format!("no photon mode with polarization {sigma_in}")));
    }
    let n = h.n_modes();
    let mut base = h.dynamical() * C64::new(0.0, 1.0);
    for k in 0..n {
        let g = if k < np { diss.gamma_p[k] } else { diss.gamma_c };
        base[(k, k)] += 0.5 * g;
        base[(n + k, n + k)] += 0.5 * g;
    }
    let port = |p: usize| 0.5 * diss.gamma_p[p];
    let mut rhs = DMatrix::<C64>::zeros(2 * n, inputs.len());
    for (c, &p) in inputs.iter().enumerate() {
        rhs[(p, c)] = C64::new(1.0, 0.0);
    }
    let t = freq_hz
        .par_iter()
        .map(|&f| {
            let w = hz_to_rad(f);
            let mut m = base.clone();
            for k in 0..2 * n {
                m[(k, k)] -= C64::new(0.0, w);
            }
            let chi = m.lu().solve(&rhs).ok_or(Error::SingularResponse { freq_hz: f })?;
            let mut s = 0.0;
            for (c, &p) in inputs.iter().enumerate() {
                for &q in &outputs {
                    s += port(q) * port(p) * chi[(q, c)].norm_sqr();
                }
            }
            let v = s / inputs.len() as f64;
            if !v.is_finite() {
                return Err(Error::SingularResponse { freq_hz: f });
            }
            Ok(v)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SpectrumSeries {
        freq_hz: freq_hz.to_vec(),
        t,
        meta: SpectrumMeta {
            b: h.b_field(),
            sigma_in,
            sigma_out,
            flags: h.flags(),
        },
    })
}

/// Spectra over a magnetic-field grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionMap {
    pub b: Vec<f64>,
    pub freq_hz: Vec<f64>,
    pub spectra: Vec<SpectrumSeries>,
}

/// Transmission at every field of `b_grid`; photon rates come from the mode
/// quality factors, the CR rate is `gamma_c`.
pub fn transmission_map<F>(
    couplings: F,
    b_grid: &[f64],
    freq_hz: &[f64],
    flags: HamiltonianFlags,
    gamma_c: f64,
    sigma_in: Polarization,
    sigma_out: Polarization,
) -> Result<TransmissionMap>
where
    F: Fn(f64) -> Result<CouplingSet> + Sync,
{
    if b_grid.is_empty() {
        return Err(Error::Empty("B grid"));
    }
    check_grid(freq_hz)?;
    let spectra = b_grid
        .par_iter()
        .map(|&b| {
            let h = build_hamiltonian(&couplings(b)?, flags)?.with_b_field(b);
            let diss = DissipationSpec::from_quality(&h, gamma_c)?;
            transmission_spectrum(&h, &diss, freq_hz, sigma_in, sigma_out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransmissionMap {
        b: b_grid.to_vec(),
        freq_hz: freq_hz.to_vec(),
        spectra,
    })
}

impl TransmissionMap {
    /// Long format: `B_T, freq_GHz, T`.
    pub fn write_long_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["B_T", "freq_GHz", "T"])?;
        for (b, s) in self.b.iter().zip(&self.spectra) {
            for (f, t) in s.freq_hz.iter().zip(&s.t) {
                w.write_record([format!("{b:.6}"), format!("{:.9}", f * 1e-9), format!("{t:.12e}")])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Rectangular matrix: header row of frequencies [GHz], then one row per
    /// field starting with `B` [T].
    pub fn write_matrix_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["B_T\\freq_GHz".to_string()];
        header.extend(self.freq_hz.iter().map(|f| format!("{:.9}", f * 1e-9)));
        w.write_record(&header)?;
        for (b, s) in self.b.iter().zip(&self.spectra) {
            let mut row = vec![format!("{b:.6}")];
            row.extend(s.t.iter().map(|t| format!("{t:.12e}")));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Largest T of the whole map.
    pub fn max(&self) -> f64 {
        self.spectra
            .iter()
            .flat_map(|s| s.t.iter())
            .cloned()
            .fold(0.0, f64::max)
    }
}

/// Closed-form two-port transmission of an isolated mode:
/// `(Γ/2)² / ((ω - ω_p)² + (Γ/2)²)`.
pub fn single_mode_transmission(omega: f64, omega_p: f64, gamma_p: f64) -> f64 {
    let k = 0.5 * gamma_p;
    k * k / ((omega - omega_p).powi(2) + k * k)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;
    use crate::params::PhysParams;
    use crate::profile::toy_mode_fourier;
    use crate::toy::ToyModel;

    fn uncoupled_single() -> HopfieldMatrix {
        let params = PhysParams {
            n_e: 0.0,
            ..PhysParams::default()
        };
        let prof = toy_mode_fourier(1, 1.0).unwrap();
        let cs = CouplingSet::from_profiles(&[prof], &params, 1.0).unwrap();
        build_hamiltonian(&cs, HamiltonianFlags::default()).unwrap()
    }

    #[test]
    fn isolated_mode_is_a_unit_lorentzian() {
        let h = uncoupled_single();
        let wp = h.photons()[0].omega;
        let diss = DissipationSpec::from_quality(&h, TAU * 5.7e9).unwrap();
        let g = diss.gamma_p[0];
        let f: Vec<f64> = (0..401)
            .map(|i| (wp + (i as f64 - 200.0) / 50.0 * g) / TAU)
            .collect();
        let s = transmission_spectrum(&h, &diss, &f, Polarization::Y, Polarization::Y).unwrap();
        for (fi, ti) in f.iter().zip(&s.t) {
            let want = single_mode_transmission(TAU * fi, wp, g);
            assert!((ti - want).abs() < 1e-12, "{ti} vs {want}");
        }
        let peak = s.t.iter().cloned().fold(0.0, f64::max);
        assert!((peak - 1.0).abs() < 1e-6);
    }

    #[test]
    fn orthogonal_output_is_dark_without_coupling() {
        let h = uncoupled_single();
        let diss = DissipationSpec::from_quality(&h, 1e9).unwrap();
        let s = transmission_spectrum(&h, &diss, &[300e9, 339e9], Polarization::Y, Polarization::X).unwrap();
        assert!(s.t.iter().all(|t| *t == 0.0));
    }

    #[test]
    fn input_scaling_cancels() {
        let toy = ToyModel::new(1.0);
        let params = PhysParams::default();
        let h = build_hamiltonian(&toy.coupling_set(&params, 0.81).unwrap(), HamiltonianFlags::default())
            .unwrap();
        let diss = DissipationSpec::from_quality(&h, params.gamma_c).unwrap();
        let f: Vec<f64> = (0..50).map(|i| 250e9 + 4e9 * i as f64).collect();
        let s = transmission_spectrum(&h, &diss, &f, Polarization::Y, Polarization::Y).unwrap();
        assert!(s.t.iter().all(|t| *t >= 0.0 && t.is_finite()));
        // the same drive doubled on every input: responses are linear in the
        // input, so the flux ratio is unchanged
        let n = h.n_modes();
        let mut m = h.dynamical() * C64::new(0.0, 1.0);
        for k in 0..n {
            let g = if k < 2 { diss.gamma_p[k] } else { diss.gamma_c };
            m[(k, k)] += 0.5 * g;
            m[(n + k, n + k)] += 0.5 * g;
        }
        let w = TAU * f[10];
        for k in 0..2 * n {
            m[(k, k)] -= C64::new(0.0, w);
        }
        let mut rhs = DMatrix::zeros(2 * n, 2);
        rhs[(0, 0)] = C64::new(1.0, 0.0);
        rhs[(1, 1)] = C64::new(1.0, 0.0);
        let a = m.clone().lu().solve(&rhs).unwrap();
        let b = m.lu().solve(&(rhs * C64::new(3.0, 0.0))).unwrap();
        let flux = |x: &DMatrix<C64>, scale: f64| {
            let mut s = 0.0;
            for c in 0..2 {
                for q in 0..2 {
                    s += 0.25 * diss.gamma_p[q] * diss.gamma_p[c] * x[(q, c)].norm_sqr();
                }
            }
            s / (2.0 * scale * scale)
        };
        assert!((flux(&a, 1.0) - s.t[10]).abs() < 1e-12);
        assert!((flux(&b, 3.0) - s.t[10]).abs() < 1e-12);
    }

    #[test]
    fn rates_validated() {
        assert!(DissipationSpec::new(vec![1.0, 0.0], 1.0).is_err());
        assert!(DissipationSpec::new(vec![1.0], -1.0).is_err());
        let h = uncoupled_single();
        let diss = DissipationSpec::new(vec![1.0, 2.0], 1.0).unwrap();
        assert!(transmission_spectrum(&h, &diss, &[1e9], Polarization::Y, Polarization::Y).is_err());
    }

    #[test]
    fn peaks_are_interpolated() {
        let f: Vec<f64> = (0..101).map(|i| i as f64).collect();
        let t: Vec<f64> = f.iter().map(|x| (-(x - 40.3f64).powi(2) / 50.0).exp()).collect();
        let s = SpectrumSeries {
            freq_hz: f,
            t,
            meta: SpectrumMeta {
                b: None,
                sigma_in: Polarization::Y,
                sigma_out: Polarization::Y,
                flags: HamiltonianFlags::default(),
            },
        };
        let p = s.peaks(0.1);
        assert_eq!(p.len(), 1);
        assert!((p[0] - 40.3).abs() < 0.05);
    }
}
