//! Spectroscopy post-processing: windowed FFT of time-domain traces,
//! Lorentzian-plus-dips fitting, peak tracking across B, and the RMS
//! deviation used for parameter scans.

mod deviation;
mod fft;
mod fit;
mod track;

pub use deviation::{argmin_scan, deviation_d, scan_deviation, DeviationReport, Residual};
pub use fft::{window_and_fft, window_and_fft_with, AmplitudeSpectrum, Waveform, Window, MIN_SAMPLES};
pub use fit::{fit_composite, FitModel, FitOptions, FitResult, GaussianDip, Lorentzian};
pub use track::{track_peaks, DipClass, FieldSpectrum, PeakTrack, TrackOptions, TrackPoint};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Result};

/// `model` sampled on `freq_hz` plus Gaussian noise of standard deviation
/// `noise · amplitude`, from a seeded generator.
pub fn synthetic_spectrum(model: &FitModel, freq_hz: &[f64], noise: f64, seed: u64) -> Result<Vec<f64>> {
    model.validate()?;
    if !(noise >= 0.0) {
        return Err(invalid("noise", "must be >= 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = noise * model.lorentzian.amplitude.abs();
    let dist = Normal::new(0.0, sigma).map_err(|e| invalid("noise", e.to_string()))?;
    Ok(freq_hz.iter().map(|&f| model.eval(f) + dist.sample(&mut rng)).collect())
}

/// Damped single-cycle pulse centred at `t0` [s] followed by an echo of
/// relative amplitude `echo` delayed by `delay` [s].
pub fn synthetic_pulse_train(n: usize, dt: f64, t0: f64, delay: f64, echo: f64) -> Result<Waveform> {
    let width = 0.3e-12;
    let pulse = |t: f64| {
        let x = (t - t0) / width;
        -x * (-0.5 * x * x).exp()
    };
    Waveform::sample(n, dt, |t| pulse(t) + echo * pulse(t - delay))
}
