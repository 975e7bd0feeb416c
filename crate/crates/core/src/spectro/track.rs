use rayon::prelude::*;

use super::fit::{fit_composite, FitModel, FitOptions, FitResult};
use crate::error::{Error, Result};

/// One measured spectrum at field `b` [T].
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpectrum {
    pub b: f64,
    pub freq_hz: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackOptions {
    pub fit: FitOptions,
    /// A dip whose center varies by less than this fraction of its mean
    /// across the series is treated as a Fabry–Pérot artifact.
    pub drift_threshold: f64,
    /// Fit only data within this distance of the current peak center [Hz].
    pub window_hz: Option<f64>,
    /// A fitted center farther than this from the seed counts as lost [Hz].
    /// `None` allows up to twice the seed FWHM.
    pub max_jump_hz: Option<f64>,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            fit: FitOptions::default(),
            drift_threshold: 0.01,
            window_hz: None,
            max_jump_hz: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DipClass {
    /// Center stays put across B.
    FabryPerot,
    /// Center moves with B.
    Drifting,
    /// Single-field series: no drift statistics.
    Unclassified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackPoint {
    pub b: f64,
    pub fit: FitResult,
    /// Fit failed to converge, left the data range or jumped too far.
    pub lost: bool,
}

impl TrackPoint {
    pub fn center(&self) -> f64 {
        self.fit.model.lorentzian.center
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakTrack {
    pub points: Vec<TrackPoint>,
    pub dip_classes: Vec<DipClass>,
    /// Common dip centers used in the final pass [Hz].
    pub dip_centers: Vec<f64>,
}

impl PeakTrack {
    /// `(B, center)` of every point that was not lost.
    pub fn table(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter(|p| !p.lost)
            .map(|p| (p.b, p.center()))
            .collect()
    }

    pub fn lost_fields(&self) -> Vec<f64> {
        self.points.iter().filter(|p| p.lost).map(|p| p.b).collect()
    }
}

fn windowed<'a>(s: &'a FieldSpectrum, center: f64, w: Option<f64>) -> (Vec<f64>, Vec<f64>) {
    match w {
        None => (s.freq_hz.clone(), s.values.clone()),
        Some(w) => s
            .freq_hz
            .iter()
            .zip(&s.values)
            .filter(|(f, _)| (**f - center).abs() <= w)
            .map(|(f, v)| (*f, *v))
            .unzip(),
    }
}

fn fit_at(
    s: &FieldSpectrum,
    seed: &FitModel,
    opts: &TrackOptions,
    fit: &FitOptions,
) -> (FitResult, bool) {
    let (f, v) = windowed(s, seed.lorentzian.center, opts.window_hz);
    // dips outside the window cannot be fitted; keep them as seeded
    let mut fit = fit.clone();
    let lo = f.first().copied().unwrap_or(0.0);
    let hi = f.last().copied().unwrap_or(0.0);
    let outside: Vec<usize> = seed
        .dips
        .iter()
        .enumerate()
        .filter(|(_, d)| d.center < lo || d.center > hi)
        .map(|(k, _)| k)
        .collect();
    let mut seed = seed.clone();
    if !outside.is_empty() {
        if fit.fixed.is_empty() {
            fit.fixed = vec![false; seed.n_params()];
        }
        for k in outside.iter().rev() {
            seed.dips.remove(*k);
            fit.fixed.drain(4 + 3 * k..7 + 3 * k);
        }
    }
    if f.len() < seed.n_params() + 1 || seed.lorentzian.center < lo || seed.lorentzian.center > hi {
        let empty = FitResult {
            model: seed.clone(),
            covariance: nalgebra::DMatrix::zeros(seed.n_params(), seed.n_params()),
            converged: false,
            iterations: 0,
            residual_norm: f64::NAN,
        };
        return (empty, true);
    }
    match fit_composite(&f, &v, &seed, &fit) {
        Ok(r) => {
            let jump = opts.max_jump_hz.unwrap_or(2.0 * seed.lorentzian.fwhm);
            let c = r.model.lorentzian.center;
            let lost = !r.converged
                || c <= lo
                || c >= hi
                || (c - seed.lorentzian.center).abs() > jump
                || r.model.lorentzian.amplitude <= 0.0;
            (r, lost)
        }
        Err(_) => {
            let empty = FitResult {
                model: seed.clone(),
                covariance: nalgebra::DMatrix::zeros(seed.n_params(), seed.n_params()),
                converged: false,
                iterations: 0,
                residual_norm: f64::NAN,
            };
            (empty, true)
        }
    }
}

/// Follows one Lorentzian peak through a B-ordered series of spectra.
///
/// A first sequential pass seeds every fit from the last successful one.
/// Dips whose centers drift less than `drift_threshold` are then classified
/// as Fabry–Pérot artifacts, pinned at their median center and width, and
/// all fields are refitted in parallel from the first-pass results.
pub fn track_peaks(spectra: &[FieldSpectrum], seed: &FitModel, opts: &TrackOptions) -> Result<PeakTrack> {
    if spectra.is_empty() {
        return Err(Error::Empty("spectra"));
    }
    if spectra.windows(2).any(|w| !(w[1].b > w[0].b)) {
        return Err(crate::error::invalid("spectra", "fields must be strictly increasing"));
    }
    if !(opts.drift_threshold >= 0.0) {
        return Err(crate::error::invalid("drift_threshold", "must be >= 0"));
    }
    seed.validate()?;

    let mut first = Vec::with_capacity(spectra.len());
    let mut current = seed.clone();
    for s in spectra {
        let (r, lost) = fit_at(s, &current, opts, &opts.fit);
        if !lost && r.model.dips.len() == current.dips.len() {
            current = r.model.clone();
        }
        first.push(TrackPoint { b: s.b, fit: r, lost });
    }

    let nd = seed.dips.len();
    let good: Vec<&TrackPoint> = first
        .iter()
        .filter(|p| !p.lost && p.fit.model.dips.len() == nd)
        .collect();
    if spectra.len() < 2 || good.len() < 2 {
        return Ok(PeakTrack {
            points: first,
            dip_classes: vec![DipClass::Unclassified; nd],
            dip_centers: seed.dips.iter().map(|d| d.center).collect(),
        });
    }

    let median = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    let mut classes = Vec::with_capacity(nd);
    let mut centers = Vec::with_capacity(nd);
    let mut widths = Vec::with_capacity(nd);
    for k in 0..nd {
        let c: Vec<f64> = good.iter().map(|p| p.fit.model.dips[k].center).collect();
        let (lo, hi) = c.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        classes.push(if (hi - lo) <= opts.drift_threshold * mean.abs() {
            DipClass::FabryPerot
        } else {
            DipClass::Drifting
        });
        centers.push(median(c));
        widths.push(median(good.iter().map(|p| p.fit.model.dips[k].width).collect()));
    }
    if !classes.contains(&DipClass::FabryPerot) {
        return Ok(PeakTrack {
            points: first,
            dip_classes: classes,
            dip_centers: centers,
        });
    }

    let mut fit = opts.fit.clone();
    if fit.fixed.is_empty() {
        fit.fixed = vec![false; seed.n_params()];
    }
    for (k, c) in classes.iter().enumerate() {
        if *c == DipClass::FabryPerot {
            fit.fixed[4 + 3 * k] = true;
            fit.fixed[5 + 3 * k] = true;
        }
    }
    // seeds: the first-pass result, or the last good one before a lost point
    let mut seeds = Vec::with_capacity(first.len());
    let mut last = seed.clone();
    for p in &first {
        if !p.lost && p.fit.model.dips.len() == nd {
            last = p.fit.model.clone();
        }
        let mut s = last.clone();
        for (k, c) in classes.iter().enumerate() {
            if *c == DipClass::FabryPerot {
                s.dips[k].center = centers[k];
                s.dips[k].width = widths[k];
            }
        }
        seeds.push(s);
    }
    let points = spectra
        .par_iter()
        .zip(seeds.par_iter())
        .map(|(s, sd)| {
            let (r, lost) = fit_at(s, sd, opts, &fit);
            TrackPoint { b: s.b, fit: r, lost }
        })
        .collect();
    Ok(PeakTrack {
        points,
        dip_classes: classes,
        dip_centers: centers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(dip_moves: bool) -> Vec<FieldSpectrum> {
        let f: Vec<f64> = (0..300).map(|i| 250e9 + 0.5e9 * i as f64).collect();
        (0..8)
            .map(|i| {
                let b = 0.5 + 0.1 * i as f64;
                let c = 320e9 + 5e9 * i as f64;
                let dip = if dip_moves { 300e9 + 4e9 * i as f64 } else { 330e9 };
                let m = FitModel::peak(c, 20e9, 1.0).with_dip(dip, 1.5e9, 0.3);
                FieldSpectrum {
                    b,
                    values: f.iter().map(|&x| m.eval(x)).collect(),
                    freq_hz: f.clone(),
                }
            })
            .collect()
    }

    #[test]
    fn constant_dip_is_fabry_perot() {
        let s = series(false);
        let seed = FitModel::peak(318e9, 18e9, 0.9).with_dip(330.5e9, 2e9, 0.2);
        let t = track_peaks(&s, &seed, &TrackOptions::default()).unwrap();
        assert_eq!(t.dip_classes, vec![DipClass::FabryPerot]);
        assert!((t.dip_centers[0] - 330e9).abs() < 0.1e9);
        for (i, p) in t.points.iter().enumerate() {
            assert!(!p.lost);
            assert!((p.center() - (320e9 + 5e9 * i as f64)).abs() < 1e6);
            assert_eq!(p.fit.model.dips[0].center, t.dip_centers[0]);
        }
    }

    #[test]
    fn moving_dip_is_not_fabry_perot() {
        let s = series(true);
        let seed = FitModel::peak(318e9, 18e9, 0.9).with_dip(300.5e9, 2e9, 0.2);
        let opts = TrackOptions {
            max_jump_hz: Some(30e9),
            ..TrackOptions::default()
        };
        let t = track_peaks(&s, &seed, &opts).unwrap();
        assert_eq!(t.dip_classes, vec![DipClass::Drifting]);
    }

    #[test]
    fn single_field_is_unclassified() {
        let s = &series(false)[..1];
        let seed = FitModel::peak(318e9, 18e9, 0.9).with_dip(330.5e9, 2e9, 0.2);
        let t = track_peaks(s, &seed, &TrackOptions::default()).unwrap();
        assert_eq!(t.dip_classes, vec![DipClass::Unclassified]);
        assert_eq!(t.table().len(), 1);
    }

    #[test]
    fn unordered_fields_rejected() {
        let mut s = series(false);
        s.swap(0, 1);
        let seed = FitModel::peak(318e9, 18e9, 0.9);
        assert!(track_peaks(&s, &seed, &TrackOptions::default()).is_err());
    }

    #[test]
    fn peak_leaving_range_is_lost() {
        let mut s = series(false);
        let f = s[0].freq_hz.clone();
        let m = FitModel::peak(500e9, 20e9, 1.0);
        s.push(FieldSpectrum {
            b: 2.0,
            values: f.iter().map(|&x| m.eval(x) * 0.0 + 0.01 * (x / 1e9).sin()).collect(),
            freq_hz: f,
        });
        let seed = FitModel::peak(318e9, 18e9, 0.9);
        let t = track_peaks(&s, &seed, &TrackOptions::default()).unwrap();
        assert_eq!(t.lost_fields(), vec![2.0]);
    }
}
