//! Bounded damped least squares for a Lorentzian peak on a constant
//! baseline, modulated by Gaussian dips.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lorentzian {
    /// [Hz]
    pub center: f64,
    /// [Hz]
    pub fwhm: f64,
    /// Peak height above the baseline.
    pub amplitude: f64,
}

/// Multiplicative dip `1 - depth·exp(-(f - center)²/(2 width²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianDip {
    pub center: f64,
    pub width: f64,
    pub depth: f64,
}

/// `(baseline + L(f)) · Π_k dip_k(f)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitModel {
    pub baseline: f64,
    pub lorentzian: Lorentzian,
    #[serde(default)]
    pub dips: Vec<GaussianDip>,
}

impl FitModel {
    pub fn peak(center: f64, fwhm: f64, amplitude: f64) -> Self {
        Self {
            baseline: 0.0,
            lorentzian: Lorentzian {
                center,
                fwhm,
                amplitude,
            },
            dips: Vec::new(),
        }
    }

    pub fn with_dip(mut self, center: f64, width: f64, depth: f64) -> Self {
        self.dips.push(GaussianDip {
            center,
            width,
            depth,
        });
        self
    }

    pub fn with_baseline(mut self, baseline: f64) -> Self {
        self.baseline = baseline;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let l = &self.lorentzian;
        if !(l.fwhm > 0.0) {
            return Err(Error::Fit(format!("fwhm must be > 0, got {}", l.fwhm)));
        }
        for d in &self.dips {
            if !(d.width > 0.0) || !(d.depth >= 0.0) {
                return Err(Error::Fit(format!(
                    "dip at {} needs width > 0 and depth >= 0",
                    d.center
                )));
            }
        }
        if self.to_params().iter().any(|v| !v.is_finite()) {
            return Err(Error::Fit("non-finite parameter".into()));
        }
        Ok(())
    }

    pub fn eval(&self, f: f64) -> f64 {
        let l = &self.lorentzian;
        let hw = 0.5 * l.fwhm;
        let peak = l.amplitude * hw * hw / ((f - l.center).powi(2) + hw * hw);
        self.dips.iter().fold(self.baseline + peak, |acc, d| {
            acc * (1.0 - d.depth * (-(f - d.center).powi(2) / (2.0 * d.width * d.width)).exp())
        })
    }

    /// Parameter vector `[baseline, center, fwhm, amplitude, (c, w, depth)…]`.
    pub fn to_params(&self) -> Vec<f64> {
        let l = &self.lorentzian;
        let mut p = vec![self.baseline, l.center, l.fwhm, l.amplitude];
        for d in &self.dips {
            p.extend([d.center, d.width, d.depth]);
        }
        p
    }

    fn from_params(p: &[f64]) -> Self {
        Self {
            baseline: p[0],
            lorentzian: Lorentzian {
                center: p[1],
                fwhm: p[2],
                amplitude: p[3],
            },
            dips: p[4..]
                .chunks(3)
                .map(|c| GaussianDip {
                    center: c[0],
                    width: c[1],
                    depth: c[2],
                })
                .collect(),
        }
    }

    pub fn n_params(&self) -> usize {
        4 + 3 * self.dips.len()
    }
}

/// Role of a parameter, used for default bounds and internal scaling.
#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Level,
    Position,
    Width,
    Depth,
}

fn kinds(n: usize) -> Vec<Kind> {
    let mut k = vec![Kind::Level, Kind::Position, Kind::Width, Kind::Level];
    while k.len() < n {
        k.extend([Kind::Position, Kind::Width, Kind::Depth]);
    }
    k
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Iteration cap of each fitting stage.
    pub max_iter: usize,
    /// Relative cost decrease below which the fit has converged.
    pub ftol: f64,
    /// Box bounds as two models; `None` keeps positions inside the data
    /// range, widths positive and depths in `[0, 1]`.
    pub bounds: Option<(FitModel, FitModel)>,
    /// Parameters held at their initial value, in `to_params` order.
    pub fixed: Vec<bool>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            ftol: 1e-10,
            bounds: None,
            fixed: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    /// Parameter covariance in `to_params` order; fixed parameters have
    /// zero rows and columns.
    pub covariance: DMatrix<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// `sqrt(Σ r²)` of the final residuals.
    pub residual_norm: f64,
}

impl FitResult {
    /// One-sigma uncertainty of every parameter.
    pub fn std_errors(&self) -> Vec<f64> {
        (0..self.covariance.nrows())
            .map(|i| self.covariance[(i, i)].max(0.0).sqrt())
            .collect()
    }
}

fn check_data(freq: &[f64], values: &[f64]) -> Result<()> {
    if freq.len() != values.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} frequencies for {} values",
            freq.len(),
            values.len()
        )));
    }
    if freq.is_empty() {
        return Err(Error::Empty("spectrum"));
    }
    if freq.iter().chain(values).any(|v| !v.is_finite()) {
        return Err(Error::Fit("non-finite data".into()));
    }
    Ok(())
}

/// Fits `init` to `(freq, values)`.
///
/// With dips present, the peak and baseline are first fitted with the dips
/// held at their seeds, then all free parameters together; a badly seeded
/// peak otherwise tends to flatten the dips in the first steps.
///
/// Parameters are scaled internally (levels by the data maximum, positions
/// and widths by the frequency span), so a uniform rescaling of the values
/// maps the iteration onto itself. Hitting `max_iter` returns the best point
/// with `converged = false`.
pub fn fit_composite(
    freq: &[f64],
    values: &[f64],
    init: &FitModel,
    options: &FitOptions,
) -> Result<FitResult> {
    check_data(freq, values)?;
    init.validate()?;
    let n = init.n_params();
    if !options.fixed.is_empty() && options.fixed.len() != n {
        return Err(Error::Fit(format!(
            "fixed mask has {} entries for {n} parameters",
            options.fixed.len()
        )));
    }
    let fixed = |i: usize| options.fixed.get(i).copied().unwrap_or(false);
    if (4..n).all(fixed) {
        return damped_least_squares(freq, values, init, options);
    }
    let stage = FitOptions {
        fixed: (0..n).map(|i| i >= 4 || fixed(i)).collect(),
        ..options.clone()
    };
    let first = damped_least_squares(freq, values, init, &stage)?;
    let mut r = damped_least_squares(freq, values, &first.model, options)?;
    r.iterations += first.iterations;
    Ok(r)
}

fn damped_least_squares(
    freq: &[f64],
    values: &[f64],
    init: &FitModel,
    options: &FitOptions,
) -> Result<FitResult> {
    let n = init.n_params();
    let (fmin, fmax) = freq
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &f| (a.min(f), b.max(f)));
    let span = (fmax - fmin).max(f64::MIN_POSITIVE);
    let step = span / (freq.len().max(2) - 1) as f64;
    let level = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let level = if level > 0.0 { level } else { 1.0 };
    let kinds = kinds(n);
    let scale: Vec<f64> = kinds
        .iter()
        .map(|k| match k {
            Kind::Level => level,
            Kind::Position | Kind::Width => span,
            Kind::Depth => 1.0,
        })
        .collect();

    let (lo, hi): (Vec<f64>, Vec<f64>) = match &options.bounds {
        Some((l, h)) => {
            if l.n_params() != n || h.n_params() != n {
                return Err(Error::Fit("bounds must have the same shape as init".into()));
            }
            (l.to_params(), h.to_params())
        }
        None => kinds
            .iter()
            .map(|k| match k {
                Kind::Level => (f64::NEG_INFINITY, f64::INFINITY),
                Kind::Position => (fmin, fmax),
                // narrower features are not resolved by the data
                Kind::Width => (0.5 * step, f64::INFINITY),
                Kind::Depth => (0.0, 1.0),
            })
            .unzip(),
    };
    let p0 = init.to_params();
    for i in 0..n {
        if lo[i] > hi[i] {
            return Err(Error::Fit(format!("empty bound interval for parameter {i}")));
        }
        if kinds[i] == Kind::Position && (p0[i] < fmin || p0[i] > fmax) && options.bounds.is_none() {
            return Err(Error::Fit(format!(
                "initial center {} outside [{fmin}, {fmax}]",
                p0[i]
            )));
        }
    }
    let free: Vec<usize> = (0..n)
        .filter(|&i| !options.fixed.get(i).copied().unwrap_or(false))
        .collect();
    let k = free.len();
    let m = freq.len();

    let to_full = |x: &[f64]| -> Vec<f64> {
        let mut p = p0.clone();
        for (j, &i) in free.iter().enumerate() {
            p[i] = x[j] * scale[i];
        }
        p
    };
    let project = |x: &mut [f64]| {
        for (j, &i) in free.iter().enumerate() {
            x[j] = (x[j] * scale[i]).clamp(lo[i], hi[i]) / scale[i];
        }
    };
    let residuals = |x: &[f64]| -> DVector<f64> {
        let model = FitModel::from_params(&to_full(x));
        DVector::from_iterator(m, freq.iter().zip(values).map(|(&f, &v)| (model.eval(f) - v) / level))
    };
    let jacobian = |x: &[f64], r0: &DVector<f64>| -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(m, k);
        let mut xp = x.to_vec();
        for j in 0..k {
            let h = 1e-7 * x[j].abs().max(1e-3);
            let orig = xp[j];
            // central difference, one-sided where a bound is active
            xp[j] = orig + h;
            let up_ok = xp[j] * scale[free[j]] <= hi[free[j]];
            let rp = if up_ok { residuals(&xp) } else { r0.clone() };
            xp[j] = orig - h;
            let dn_ok = xp[j] * scale[free[j]] >= lo[free[j]];
            let rm = if dn_ok { residuals(&xp) } else { r0.clone() };
            xp[j] = orig;
            let width = h * ((up_ok as u8 + dn_ok as u8) as f64);
            if width > 0.0 {
                jac.set_column(j, &((rp - rm) / width));
            }
        }
        jac
    };

    let mut x: Vec<f64> = free.iter().map(|&i| p0[i] / scale[i]).collect();
    project(&mut x);
    let mut r = residuals(&x);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let mut converged = k == 0 || cost == 0.0;
    let mut iterations = 0;
    while !converged && iterations < options.max_iter {
        iterations += 1;
        let jac = jacobian(&x, &r);
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &r;
        let mut improved = false;
        while lambda < 1e16 {
            let mut a = jtj.clone();
            for i in 0..k {
                a[(i, i)] += lambda * jtj[(i, i)].max(1e-12);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&(-&grad))) else {
                lambda *= 10.0;
                continue;
            };
            let mut trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            project(&mut trial);
            let rt = residuals(&trial);
            let ct = rt.norm_squared();
            if ct < cost {
                let moved = trial
                    .iter()
                    .zip(&x)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                let drop = cost - ct;
                x = trial;
                r = rt;
                converged = drop <= options.ftol * cost || moved <= 1e-15;
                cost = ct;
                lambda = (lambda / 10.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            // no descent direction left at machine precision
            converged = true;
        }
    }

    let jac = jacobian(&x, &r);
    let mut covariance = DMatrix::zeros(n, n);
    if m > k && k > 0 {
        let s2 = cost * level * level / (m - k) as f64;
        let jtj = jac.transpose() * &jac;
        if let Some(inv) = jtj.clone().try_inverse().or_else(|| jtj.pseudo_inverse(1e-14).ok()) {
            for (a, &i) in free.iter().enumerate() {
                for (b, &j) in free.iter().enumerate() {
                    covariance[(i, j)] = s2 * inv[(a, b)] * scale[i] * scale[j];
                }
            }
        }
    }
    Ok(FitResult {
        model: FitModel::from_params(&to_full(&x)),
        covariance,
        converged,
        iterations,
        residual_norm: cost.sqrt() * level,
    })
}
