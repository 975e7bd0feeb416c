mod common;

use common::linspace;
use usc_core::coupling::CouplingSet;
use usc_core::inout::transmission_map;
use usc_core::params::units::rad_to_hz;
use usc_core::profile::toy_mode_fourier;
use usc_core::spectro::{
    fit_composite, synthetic_pulse_train, track_peaks, window_and_fft, FieldSpectrum, FitModel, FitOptions,
    TrackOptions,
};
use usc_core::{HamiltonianFlags, PhysParams, Polarization};

#[test]
fn tracking_follows_upper_polariton_ridge() {
    let p = PhysParams::default();
    let prof = [toy_mode_fourier(1, 1.0).unwrap()];
    // field step small enough that the ridge moves less than a linewidth
    let b = linspace(0.9, 1.3, 41);
    let freq = linspace(300e9, 700e9, 801);
    let step = freq[1] - freq[0];
    let map = transmission_map(
        |b| CouplingSet::from_profiles(&prof, &p, b),
        &b,
        &freq,
        HamiltonianFlags::default(),
        p.gamma_c,
        Polarization::Y,
        Polarization::Y,
    )
    .unwrap();
    let spectra: Vec<FieldSpectrum> = map
        .spectra
        .iter()
        .zip(&b)
        .map(|(s, &b)| FieldSpectrum { b, freq_hz: freq.clone(), values: s.t.clone() })
        .collect();
    // ridge: largest maximum above the bare mode
    let f1 = rad_to_hz(prof[0].omega);
    let ridge: Vec<f64> = spectra
        .iter()
        .map(|s| {
            let k = (0..freq.len())
                .filter(|&i| freq[i] > f1)
                .max_by(|&x, &y| s.values[x].total_cmp(&s.values[y]))
                .unwrap();
            freq[k]
        })
        .collect();
    let seed = FitModel::peak(ridge[0], 8e9, 0.5);
    let opts = TrackOptions { window_hz: Some(25e9), max_jump_hz: Some(60e9), ..TrackOptions::default() };
    let track = track_peaks(&spectra, &seed, &opts).unwrap();
    assert!(track.lost_fields().is_empty());
    for (pt, r) in track.points.iter().zip(&ridge) {
        assert!((pt.center() - r).abs() <= step, "B={}: {} vs {}", pt.b, pt.center(), r);
    }
    // the ridge moves with B
    assert!(ridge.last().unwrap() - ridge[0] > 10.0 * step);
}

#[test]
fn time_trace_to_fitted_peak() {
    let f0 = 0.40e12;
    let tau = 25e-12;
    let n = 3000;
    let dt = 0.05e-12;
    let pulse = synthetic_pulse_train(n, dt, 5e-12, 40e-12, 0.0).unwrap();
    let ringing = usc_core::spectro::Waveform::sample(n, dt, |t| {
        let t = t - 5e-12;
        if t < 0.0 { 0.0 } else { (std::f64::consts::TAU * f0 * t).sin() * (-t / tau).exp() }
    })
    .unwrap();
    assert_eq!(pulse.len(), ringing.len());
    let s = window_and_fft(&ringing, ringing.duration(), 4.0).unwrap();
    let keep: Vec<usize> = (0..s.freq_hz.len()).filter(|&i| (s.freq_hz[i] - f0).abs() < 60e9).collect();
    let f: Vec<f64> = keep.iter().map(|&i| s.freq_hz[i]).collect();
    let y: Vec<f64> = keep.iter().map(|&i| s.amplitude[i].powi(2)).collect();
    let peak = y.iter().cloned().fold(0.0, f64::max);
    let init = FitModel::peak(s.peak().0, 10e9, peak);
    let r = fit_composite(&f, &y, &init, &FitOptions::default()).unwrap();
    // power spectrum of a damped sinusoid: Lorentzian of FWHM 1/(π τ)
    assert!((r.model.lorentzian.center - f0).abs() <= 0.2e9);
    let want = 1.0 / (std::f64::consts::PI * tau);
    assert!((r.model.lorentzian.fwhm - want).abs() <= 0.05 * want, "{}", r.model.lorentzian.fwhm);
}

#[test]
fn centered_shallow_dip_keeps_peak_center() {
    let f = linspace(250e9, 350e9, 401);
    let truth = FitModel::peak(300e9, 12e9, 1.0).with_dip(300e9, 1.5e9, 0.4);
    let y = usc_core::spectro::synthetic_spectrum(&truth, &f, 0.005, 11).unwrap();
    let init = FitModel::peak(302e9, 10e9, 0.8).with_dip(300.5e9, 2e9, 0.2);
    let r = fit_composite(&f, &y, &init, &FitOptions::default()).unwrap();
    assert!((r.model.lorentzian.center - 300e9).abs() <= 0.01 * 300e9);
}
