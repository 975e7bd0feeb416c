use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Frequency residual of one branch at one field in one polarization family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub branch: usize,
    /// [T]
    pub b: f64,
    pub family: String,
    /// Measured minus computed [Hz].
    pub delta_f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub residuals: Vec<Residual>,
    /// Data points per family.
    pub n: usize,
    /// RMS deviation [Hz].
    pub d: f64,
}

impl DeviationReport {
    pub fn new(residuals: Vec<Residual>, n: usize) -> Result<Self> {
        let dfs: Vec<f64> = residuals.iter().map(|r| r.delta_f).collect();
        let d = deviation_d(&dfs, n)?;
        Ok(Self { residuals, n, d })
    }

    /// `D` recomputed from the stored residuals.
    pub fn recompute(&self) -> Result<f64> {
        let dfs: Vec<f64> = self.residuals.iter().map(|r| r.delta_f).collect();
        deviation_d(&dfs, self.n)
    }
}

/// `D = sqrt(Σ Δf² / (2N))`, where the sum runs over both polarization
/// families and `N` counts the points of one family.
pub fn deviation_d(delta_f: &[f64], n: usize) -> Result<f64> {
    if delta_f.is_empty() {
        return Err(Error::Empty("residuals"));
    }
    if n == 0 {
        return Err(invalid("N", "must be > 0"));
    }
    if delta_f.iter().any(|d| !d.is_finite()) {
        return Err(invalid("delta_f", "non-finite residual"));
    }
    let s: f64 = delta_f.iter().map(|d| d * d).sum();
    Ok((s / (2.0 * n as f64)).sqrt())
}

/// Scanned parameter value with the smallest `D`, refined by a parabola
/// through the minimum and its neighbours when they are equally spaced.
pub fn argmin_scan(params: &[f64], d: &[f64]) -> Result<f64> {
    if params.is_empty() {
        return Err(Error::Empty("scan"));
    }
    if params.len() != d.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} parameters for {} values",
            params.len(),
            d.len()
        )));
    }
    let k = (0..d.len())
        .filter(|&i| d[i].is_finite())
        .min_by(|&a, &b| d[a].total_cmp(&d[b]))
        .ok_or(Error::Empty("finite scan values"))?;
    if k == 0 || k + 1 == d.len() {
        return Ok(params[k]);
    }
    let (h1, h2) = (params[k] - params[k - 1], params[k + 1] - params[k]);
    let den = d[k - 1] - 2.0 * d[k] + d[k + 1];
    if (h1 - h2).abs() > 1e-9 * h1.abs() || !(den > 0.0) {
        return Ok(params[k]);
    }
    Ok(params[k] + 0.5 * h1 * (d[k - 1] - d[k + 1]) / den)
}

/// Evaluates `residuals(p)` over a scan and returns `(argmin, D values)`.
pub fn scan_deviation<F>(params: &[f64], n: usize, residuals: F) -> Result<(f64, Vec<f64>)>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    let d = params
        .iter()
        .map(|&p| deviation_d(&residuals(p)?, n))
        .collect::<Result<Vec<_>>>()?;
    Ok((argmin_scan(params, &d)?, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_collapses() {
        assert_eq!(deviation_d(&[0.0; 26], 13).unwrap(), 0.0);
        let d = deviation_d(&[3e9], 1).unwrap();
        assert!((d - 3e9 / 2f64.sqrt()).abs() < 1e-3);
        assert!(deviation_d(&[], 1).is_err());
        assert!(deviation_d(&[1.0], 0).is_err());
    }

    #[test]
    fn report_recomputes() {
        let r: Vec<Residual> = (0..26)
            .map(|i| Residual {
                branch: i % 3,
                b: 0.1 * i as f64,
                family: if i < 13 { "x" } else { "y" }.into(),
                delta_f: 1e9 * (i as f64 - 12.5),
            })
            .collect();
        let rep = DeviationReport::new(r, 13).unwrap();
        assert_eq!(rep.recompute().unwrap(), rep.d);
    }

    #[test]
    fn parabola_argmin() {
        let t: Vec<f64> = (0..21).map(|i| 50.0 + i as f64).collect();
        let (best, d) = scan_deviation(&t, 1, |x| Ok(vec![(x - 61.3) * 1e8, 2e8])).unwrap();
        // D² is quadratic in the parameter, D itself only near the minimum
        assert!((best - 61.3).abs() < 0.05, "{best}");
        assert_eq!(d.len(), 21);
        assert_eq!(argmin_scan(&[1.0, 2.0], &[3.0, 1.0]).unwrap(), 2.0);
    }
}
