//! Cavity mode profiles in the plane of the electron gas.
//!
//! Positions are fractional coordinates `(x/a, y/a) ∈ [0, 1)²` of one unit
//! cell. A grid of `nx × ny` samples stores the values at `(i/nx, j/ny)`; the
//! periodic image at 1 is implied and never stored. Fourier coefficients use
//! `E(ρ) = Σ_G U(G) exp(iG·ρ)` with `G = 2π(m_x, m_y)/a`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    X,
    Y,
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::X => f.write_str("x"),
            Polarization::Y => f.write_str("y"),
        }
    }
}

impl std::str::FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" | "X" => Ok(Polarization::X),
            "y" | "Y" => Ok(Polarization::Y),
            other => Err(invalid("polarization", format!("`{other}` is not x or y"))),
        }
    }
}

/// Identifies a cavity mode by its index `p` and polarization `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeLabel {
    pub p: usize,
    pub sigma: Polarization,
}

impl ModeLabel {
    pub fn new(p: usize, sigma: Polarization) -> Self {
        Self { p, sigma }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.sigma)
    }
}

/// Real in-plane field components sampled on a uniform periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub nx: usize,
    pub ny: usize,
    /// Row-major samples, index `iy * nx + ix`.
    pub ex: Vec<f64>,
    pub ey: Vec<f64>,
}

impl GridField {
    pub fn new(nx: usize, ny: usize, ex: Vec<f64>, ey: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::ShapeMismatch("grid must be non-empty".into()));
        }
        if ex.len() != nx * ny || ey.len() != nx * ny {
            return Err(Error::ShapeMismatch(format!(
                "expected {} samples per component, got {} and {}",
                nx * ny,
                ex.len(),
                ey.len()
            )));
        }
        Ok(Self { nx, ny, ex, ey })
    }

    /// Samples the closure `f(x/a, y/a) -> (E_x, E_y)` on an `nx × ny` grid.
    pub fn from_fn(nx: usize, ny: usize, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let mut ex = Vec::with_capacity(nx * ny);
        let mut ey = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            let y = iy as f64 / ny as f64;
            for ix in 0..nx {
                let (vx, vy) = f(ix as f64 / nx as f64, y);
                ex.push(vx);
                ey.push(vy);
            }
        }
        Self { nx, ny, ex, ey }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn at(&self, ix: usize, iy: usize) -> (f64, f64) {
        let k = iy * self.nx + ix;
        (self.ex[k], self.ey[k])
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            nx: self.nx,
            ny: self.ny,
            ex: self.ex.iter().map(|v| v * s).collect(),
            ey: self.ey.iter().map(|v| v * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.ex
            .iter()
            .chain(&self.ey)
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// One reciprocal-lattice term of a Fourier series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierTerm {
    pub m: [i32; 2],
    pub ex: C64,
    pub ey: C64,
}

/// Sparse Fourier representation, sorted by `m` with unique entries.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierField {
    terms: Vec<FourierTerm>,
}

impl FourierField {
    /// Builds a field from terms; duplicate `m` entries are summed.
    pub fn new(terms: impl IntoIterator<Item = FourierTerm>) -> Self {
        let mut map: BTreeMap<[i32; 2], (C64, C64)> = BTreeMap::new();
        for t in terms {
            let e = map.entry(t.m).or_default();
            e.0 += t.ex;
            e.1 += t.ey;
        }
        Self {
            terms: map
                .into_iter()
                .map(|(m, (ex, ey))| FourierTerm { m, ex, ey })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[FourierTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, m: [i32; 2]) -> Option<&FourierTerm> {
        self.terms
            .binary_search_by(|t| t.m.cmp(&m))
            .ok()
            .map(|i| &self.terms[i])
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| FourierTerm {
                    m: t.m,
                    ex: t.ex * s,
                    ey: t.ey * s,
                })
                .collect(),
        }
    }

    /// Field value at fractional position `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> (C64, C64) {
        self.terms.iter().fold(
            (C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
            |(sx, sy), t| {
                let ph = C64::from_polar(1.0, TAU * (t.m[0] as f64 * x + t.m[1] as f64 * y));
                (sx + t.ex * ph, sy + t.ey * ph)
            },
        )
    }

    /// Largest deviation from `U(-G) = U(G)*`, zero for a real field.
    pub fn conjugate_symmetry_residual(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let (ox, oy) = self
                    .get([-t.m[0], -t.m[1]])
                    .map(|o| (o.ex, o.ey))
                    .unwrap_or_default();
                (t.ex - ox.conj()).norm().max((t.ey - oy.conj()).norm())
            })
            .fold(0.0, f64::max)
    }

    /// Sum of |U|² over both components (equals the cell average of |E|²).
    pub fn power(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.ex.norm_sqr() + t.ey.norm_sqr())
            .sum()
    }

    /// Samples the real part of the series on an `nx × ny` grid.
    pub fn reconstruct(&self, nx: usize, ny: usize) -> GridField {
        let table = |n: usize, m: i32| -> Vec<C64> {
            (0..n)
                .map(|k| C64::from_polar(1.0, TAU * m as f64 * k as f64 / n as f64))
                .collect()
        };
        let mut ex = vec![0.0; nx * ny];
        let mut ey = vec![0.0; nx * ny];
        for t in &self.terms {
            let px = table(nx, t.m[0]);
            let py = table(ny, t.m[1]);
            for iy in 0..ny {
                for ix in 0..nx {
                    let ph = px[ix] * py[iy];
                    let k = iy * nx + ix;
                    ex[k] += (t.ex * ph).re;
                    ey[k] += (t.ey * ph).re;
                }
            }
        }
        GridField { nx, ny, ex, ey }
    }
}

/// In-plane field at the height of the electron gas.
#[derive(Debug, Clone, PartialEq)]
pub enum InPlaneField {
    Grid(GridField),
    Fourier(FourierField),
}

impl InPlaneField {
    pub fn is_empty(&self) -> bool {
        match self {
            InPlaneField::Grid(g) => g.is_empty(),
            InPlaneField::Fourier(f) => f.is_empty(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        match self {
            InPlaneField::Grid(g) => InPlaneField::Grid(g.scaled(s)),
            InPlaneField::Fourier(f) => InPlaneField::Fourier(f.scaled(C64::new(s, 0.0))),
        }
    }

    /// Full (unpruned) Fourier coefficients. Grids are transformed exactly by
    /// a DFT; every retained `|m|` is below the Nyquist index.
    pub fn to_fourier(&self) -> FourierField {
        match self {
            InPlaneField::Fourier(f) => f.clone(),
            InPlaneField::Grid(g) => dft(g, None, 0.0),
        }
    }
}

/// z-resolved field data over one unit cell, used for vacuum maps.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeField {
    pub nx: usize,
    pub ny: usize,
    /// Heights of the z samples [m], strictly increasing.
    pub z: Vec<f64>,
    /// Relative permittivity ε(ρ, z), index `(iz * ny + iy) * nx + ix`.
    pub eps: Vec<f64>,
    pub ex: Vec<f64>,
    pub ey: Vec<f64>,
    pub ez: Vec<f64>,
}

impl VolumeField {
    pub fn nz(&self) -> usize {
        self.z.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.nx * self.ny * self.nz();
        if n == 0 {
            return Err(Error::ShapeMismatch("volume grid is empty".into()));
        }
        for (name, v) in [
            ("eps", &self.eps),
            ("ex", &self.ex),
            ("ey", &self.ey),
            ("ez", &self.ez),
        ] {
            if v.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "volume component {name}: expected {n} samples, got {}",
                    v.len()
                )));
            }
        }
        if self.z.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("z", "z samples must be strictly increasing"));
        }
        Ok(())
    }
}

/// A cavity mode: label, frequency, quality factor and spatial profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeProfile {
    pub label: ModeLabel,
    /// Angular frequency [rad/s].
    pub omega: f64,
    pub quality: f64,
    pub field: InPlaneField,
    pub volume: Option<VolumeField>,
}

impl ModeProfile {
    pub fn new(label: ModeLabel, omega: f64, quality: f64, field: InPlaneField) -> Self {
        Self {
            label,
            omega,
            quality,
            field,
            volume: None,
        }
    }

    pub fn with_frequency(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_quality(mut self, quality: f64) -> Self {
        self.quality = quality;
        self
    }
}

/// Default toy-model frequencies [Hz] and quality factors of modes 1 and 2.
pub const TOY_FREQUENCIES_HZ: [f64; 2] = [0.339e12, 0.384e12];
pub const TOY_QUALITY: [f64; 2] = [72.0, 70.0];

fn toy_phase(p: usize, eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(invalid("eps", format!("{eps} is outside [0, 1]")));
    }
    match p {
        1 => Ok(0.0),
        2 => Ok((1.0 - eps) * FRAC_PI_2),
        _ => Err(invalid("p", format!("toy model has modes 1 and 2, got {p}"))),
    }
}

/// Single-component toy profile `sin(2πx/a + φ) sin(2πy/a + φ)` with
/// `φ = 0` for mode 1 and `φ = (1-ε)π/2` for mode 2.
///
/// The field is stored in the `y` component, so `g̃ = g_y` is real.
pub fn toy_mode_profile(p: usize, eps: f64, grid_n: usize) -> Result<ModeProfile> {
    if grid_n < 8 {
        return Err(invalid("grid_n", format!("need at least 8 samples, got {grid_n}")));
    }
    let phi = toy_phase(p, eps)?;
    let grid = GridField::from_fn(grid_n, grid_n, |x, y| {
        (0.0, (TAU * x + phi).sin() * (TAU * y + phi).sin())
    });
    Ok(ModeProfile::new(
        ModeLabel::new(p, Polarization::Y),
        TAU * TOY_FREQUENCIES_HZ[p - 1],
        TOY_QUALITY[p - 1],
        InPlaneField::Grid(grid),
    ))
}

/// Analytic Fourier series of the toy profile (four terms, `m = (±1, ±1)`).
pub fn toy_mode_fourier(p: usize, eps: f64) -> Result<ModeProfile> {
    let phi = toy_phase(p, eps)?;
    // sin(θ + φ) = [e^{i(θ+φ)} - e^{-i(θ+φ)}] / 2i
    let axis = |s: i32| -> C64 {
        let two_i = C64::new(0.0, 2.0);
        if s > 0 {
            C64::from_polar(1.0, phi) / two_i
        } else {
            -C64::from_polar(1.0, -phi) / two_i
        }
    };
    let terms = [-1, 1]
        .into_iter()
        .flat_map(|mx| [-1, 1].into_iter().map(move |my| (mx, my)))
        .map(|(mx, my)| FourierTerm {
            m: [mx, my],
            ex: C64::new(0.0, 0.0),
            ey: axis(mx) * axis(my),
        });
    Ok(ModeProfile::new(
        ModeLabel::new(p, Polarization::Y),
        TAU * TOY_FREQUENCIES_HZ[p - 1],
        TOY_QUALITY[p - 1],
        InPlaneField::Fourier(FourierField::new(terms)),
    ))
}

fn signed_index(k: usize, n: usize) -> i32 {
    if k <= n / 2 {
        k as i32
    } else {
        k as i32 - n as i32
    }
}

fn fft2(data: &mut [C64], nx: usize, ny: usize) {
    let mut planner = FftPlanner::<f64>::new();
    let row = planner.plan_fft_forward(nx);
    for chunk in data.chunks_exact_mut(nx) {
        row.process(chunk);
    }
    let col = planner.plan_fft_forward(ny);
    let mut buf = vec![C64::new(0.0, 0.0); ny];
    for ix in 0..nx {
        for iy in 0..ny {
            buf[iy] = data[iy * nx + ix];
        }
        col.process(&mut buf);
        for iy in 0..ny {
            data[iy * nx + ix] = buf[iy];
        }
    }
}

/// Normalized DFT of both components, keeping `|m_j| <= cutoff` (when given)
/// and strictly below the Nyquist index, then pruning terms whose largest
/// component is below `drop_tol` times the overall maximum.
fn dft(grid: &GridField, cutoff: Option<i32>, drop_tol: f64) -> FourierField {
    let (nx, ny) = (grid.nx, grid.ny);
    let norm = 1.0 / (nx * ny) as f64;
    let transform = |v: &[f64]| {
        let mut d: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
        fft2(&mut d, nx, ny);
        d
    };
    let fx = transform(&grid.ex);
    let fy = transform(&grid.ey);
    let nyquist_ok = |k: usize, n: usize| n % 2 == 1 || k != n / 2;
    let mut raw = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            if !nyquist_ok(ix, nx) || !nyquist_ok(iy, ny) {
                continue;
            }
            let m = [signed_index(ix, nx), signed_index(iy, ny)];
            if let Some(c) = cutoff {
                if m[0].abs() > c || m[1].abs() > c {
                    continue;
                }
            }
            let k = iy * nx + ix;
            raw.push(FourierTerm {
                m,
                ex: fx[k] * norm,
                ey: fy[k] * norm,
            });
        }
    }
    let peak = raw
        .iter()
        .map(|t| t.ex.norm().max(t.ey.norm()))
        .fold(0.0, f64::max);
    let threshold = drop_tol * peak;
    FourierField::new(
        raw.into_iter()
            .filter(|t| peak > 0.0 && t.ex.norm().max(t.ey.norm()) >= threshold.max(f64::MIN_POSITIVE)),
    )
}

/// Default relative pruning threshold for Fourier coefficients.
pub const DEFAULT_DROP_TOL: f64 = 1e-8;

/// Fourier coefficients `U(G) = ∫ dρ/a² E(ρ) e^{-iG·ρ}` of a gridded profile,
/// restricted to `|m_x|, |m_y| <= cutoff`, with coefficients smaller than
/// `drop_tol · max|U|` removed.
pub fn fourier_decompose(profile: &ModeProfile, cutoff: i32, drop_tol: f64) -> Result<ModeProfile> {
    if cutoff < 1 {
        return Err(invalid("cutoff", format!("must be >= 1, got {cutoff}")));
    }
    if !(0.0..1.0).contains(&drop_tol) {
        return Err(invalid("drop_tol", format!("{drop_tol} outside [0, 1)")));
    }
    let field = match &profile.field {
        InPlaneField::Grid(g) => dft(g, Some(cutoff), drop_tol),
        InPlaneField::Fourier(f) => {
            let kept: Vec<FourierTerm> = f
                .terms()
                .iter()
                .copied()
                .filter(|t| t.m[0].abs() <= cutoff && t.m[1].abs() <= cutoff)
                .collect();
            let peak = kept.iter().map(|t| t.ex.norm().max(t.ey.norm())).fold(0.0, f64::max);
            FourierField::new(
                kept.into_iter()
                    .filter(|t| peak > 0.0 && t.ex.norm().max(t.ey.norm()) >= (drop_tol * peak).max(f64::MIN_POSITIVE)),
            )
        }
    };
    Ok(ModeProfile {
        field: InPlaneField::Fourier(field),
        ..profile.clone()
    })
}

/// Grid version of a profile (Fourier series sampled on `n × n`).
pub fn to_grid(profile: &ModeProfile, n: usize) -> ModeProfile {
    let field = match &profile.field {
        InPlaneField::Grid(g) => g.clone(),
        InPlaneField::Fourier(f) => f.reconstruct(n, n),
    };
    ModeProfile {
        field: InPlaneField::Grid(field),
        ..profile.clone()
    }
}
