use std::io::{Read, Write};

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::C64;

/// Minimum number of samples of a waveform.
pub const MIN_SAMPLES: usize = 16;

/// Uniformly sampled time-domain trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    t: Vec<f64>,
    e: Vec<f64>,
}

impl Waveform {
    /// `t` in seconds, strictly uniform within 10⁻⁶ of the mean step.
    pub fn new(t: Vec<f64>, e: Vec<f64>) -> Result<Self> {
        if t.len() != e.len() {
            return Err(Error::InvalidWaveform(format!(
                "{} times for {} samples",
                t.len(),
                e.len()
            )));
        }
        if t.len() < MIN_SAMPLES {
            return Err(Error::InvalidWaveform(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                t.len()
            )));
        }
        if t.iter().chain(&e).any(|v| !v.is_finite()) {
            return Err(Error::InvalidWaveform("non-finite sample".into()));
        }
        let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
        if !(dt > 0.0) {
            return Err(Error::InvalidWaveform("time axis must increase".into()));
        }
        if t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt) {
            return Err(Error::InvalidWaveform("time axis is not uniform".into()));
        }
        Ok(Self { t, e })
    }

    /// Samples `f(t_k)` at `t_k = k·dt`.
    pub fn sample(n: usize, dt: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let t: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
        let e = t.iter().map(|&x| f(x)).collect();
        Self::new(t, e)
    }

    /// Two-column CSV `t_ps, E` with a header row.
    pub fn from_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let (mut t, mut e) = (Vec::new(), Vec::new());
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidWaveform(format!("row {}: bad column {}", line + 2, i + 1)))
            };
            t.push(parse(0)? * 1e-12);
            e.push(parse(1)?);
        }
        Self::new(t, e)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t_ps", "E"])?;
        for (t, e) in self.t.iter().zip(&self.e) {
            w.write_record([format!("{:.9}", t * 1e12), format!("{e:.12e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.e
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn dt(&self) -> f64 {
        (self.t[self.t.len() - 1] - self.t[0]) / (self.t.len() - 1) as f64
    }

    /// Record length `N·dt`.
    pub fn duration(&self) -> f64 {
        self.dt() * self.len() as f64
    }
}

/// Taper applied to the kept samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

/// One-sided magnitude spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSpectrum {
    pub freq_hz: Vec<f64>,
    pub amplitude: Vec<f64>,
}

impl AmplitudeSpectrum {
    pub fn bin_width(&self) -> f64 {
        self.freq_hz[1] - self.freq_hz[0]
    }

    /// Strongest non-DC bin, refined by a parabola through its neighbours.
    pub fn peak(&self) -> (f64, f64) {
        self.peak_in(self.freq_hz[1], f64::INFINITY)
    }

    /// Strongest bin with `lo <= f <= hi`, parabolically refined.
    pub fn peak_in(&self, lo: f64, hi: f64) -> (f64, f64) {
        let a = &self.amplitude;
        let k = (0..a.len())
            .filter(|&k| self.freq_hz[k] >= lo && self.freq_hz[k] <= hi)
            .max_by(|&x, &y| a[x].total_cmp(&a[y]))
            .unwrap_or(0);
        if k == 0 || k + 1 >= a.len() {
            return (self.freq_hz[k], a[k]);
        }
        let (l, c, r) = (a[k - 1], a[k], a[k + 1]);
        let den = l - 2.0 * c + r;
        if den >= 0.0 {
            return (self.freq_hz[k], c);
        }
        let x = 0.5 * (l - r) / den;
        (self.freq_hz[k] + x * self.bin_width(), c - 0.25 * (l - r) * x)
    }

    /// Full width at half maximum of the peak containing bin `near` [Hz],
    /// by linear interpolation of the half-maximum crossings.
    pub fn fwhm_near(&self, near: f64) -> f64 {
        let a = &self.amplitude;
        let mut k = ((near / self.bin_width()).round() as usize).min(a.len() - 1);
        while k + 1 < a.len() && a[k + 1] > a[k] {
            k += 1;
        }
        while k > 0 && a[k - 1] > a[k] {
            k -= 1;
        }
        let half = 0.5 * a[k];
        let mut lo = k;
        while lo > 0 && a[lo] > half {
            lo -= 1;
        }
        let mut hi = k;
        while hi + 1 < a.len() && a[hi] > half {
            hi += 1;
        }
        let cross = |i: usize, j: usize| {
            let (fi, fj) = (self.freq_hz[i], self.freq_hz[j]);
            if a[j] == a[i] {
                fi
            } else {
                fi + (half - a[i]) / (a[j] - a[i]) * (fj - fi)
            }
        };
        cross(hi, hi.saturating_sub(1)) - cross(lo, lo + 1)
    }

    /// CSV with columns `freq_GHz, amplitude`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["freq_GHz", "amplitude"])?;
        for (f, a) in self.freq_hz.iter().zip(&self.amplitude) {
            w.write_record([format!("{:.9}", f * 1e-9), format!("{a:.12e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Rectangular truncation at `t_cut` after the first sample, zero padding
/// to `pad_factor` times the original record length, and `|FFT|·dt`.
pub fn window_and_fft(w: &Waveform, t_cut: f64, pad_factor: f64) -> Result<AmplitudeSpectrum> {
    window_and_fft_with(w, t_cut, pad_factor, Window::Rectangular)
}

pub fn window_and_fft_with(
    w: &Waveform,
    t_cut: f64,
    pad_factor: f64,
    window: Window,
) -> Result<AmplitudeSpectrum> {
    if !(t_cut > 0.0) {
        return Err(Error::InvalidWaveform(format!("t_cut must be positive, got {t_cut}")));
    }
    if !(pad_factor >= 1.0) || !pad_factor.is_finite() {
        return Err(Error::InvalidWaveform(format!("pad_factor must be >= 1, got {pad_factor}")));
    }
    let dt = w.dt();
    let t0 = w.times()[0];
    let kept = w
        .times()
        .iter()
        .take_while(|&&t| t - t0 <= t_cut * (1.0 + 1e-12))
        .count();
    if kept < 2 {
        return Err(Error::InvalidWaveform(format!("t_cut {t_cut} keeps fewer than two samples")));
    }
    let len = ((pad_factor * w.len() as f64).round() as usize).max(kept);
    let mut buf: Vec<C64> = vec![C64::new(0.0, 0.0); len];
    for (k, v) in w.values()[..kept].iter().enumerate() {
        let taper = match window {
            Window::Rectangular => 1.0,
            Window::Hann => {
                0.5 - 0.5 * (std::f64::consts::TAU * k as f64 / (kept - 1) as f64).cos()
            }
        };
        buf[k] = C64::new(v * taper, 0.0);
    }
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let half = len / 2 + 1;
    let df = 1.0 / (len as f64 * dt);
    Ok(AmplitudeSpectrum {
        freq_hz: (0..half).map(|k| k as f64 * df).collect(),
        amplitude: buf[..half].iter().map(|z| z.norm() * dt).collect(),
    })
}
