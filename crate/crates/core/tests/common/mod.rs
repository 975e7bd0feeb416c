#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use usc_core::profile::FourierTerm;
use usc_core::{FourierField, InPlaneField, ModeLabel, ModeProfile, Polarization, C64};

/// Real band-limited field (`|m_i| ≤ band`) in the component of `sigma`,
/// scaled to the power of a toy profile.
pub fn random_fourier(seed: u64, band: i32, sigma: Polarization) -> FourierField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    for _ in 0..rng.random_range(1..=4) {
        let m = [rng.random_range(-band..=band), rng.random_range(1..=band)];
        let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        for (m, c) in [(m, c), ([-m[0], -m[1]], c.conj())] {
            let (ex, ey) = match sigma {
                Polarization::X => (c, C64::new(0.0, 0.0)),
                Polarization::Y => (C64::new(0.0, 0.0), c),
            };
            terms.push(FourierTerm { m, ex, ey });
        }
    }
    let f = FourierField::new(terms);
    f.scaled(C64::new((0.25 / f.power()).sqrt(), 0.0))
}

pub fn random_profile(seed: u64, p: usize, sigma: Polarization, f_hz: f64) -> ModeProfile {
    ModeProfile::new(
        ModeLabel::new(p, sigma),
        std::f64::consts::TAU * f_hz,
        70.0,
        InPlaneField::Fourier(random_fourier(seed, 2, sigma)),
    )
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
