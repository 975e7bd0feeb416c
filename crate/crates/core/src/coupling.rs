//! Light-matter coupling fields and the overlap quantities derived from them.
//!
//! For a mode `(p,σ)` the coupling field is
//! `g_{p,σ,j}(ρ) = E_{p,σ,j}(ρ) √(e² ω_c n_e / (4 ε₀ m_eff ω_p a))`.
//! Only the square-root prefactor depends on the magnetic field, so each
//! [`ModeCoupling`] stores the B-independent field `h = g / √ω_c` and the set
//! carries `ω_c`. Every overlap is an integral `∫ dρ/a²` over one unit cell,
//! evaluated by the midpoint rule on grids or by Parseval's identity on
//! Fourier series.

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::params::{cyclotron_frequency, PhysParams};
use crate::profile::{
    fourier_decompose, InPlaneField, ModeLabel, ModeProfile, Polarization,
};
use crate::C64;

/// One entry of a [`CouplingSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCoupling {
    pub label: ModeLabel,
    /// Bare mode frequency ω_p [rad/s].
    pub omega: f64,
    pub quality: f64,
    /// `g / √ω_c` [√(rad/s)].
    reduced: InPlaneField,
}

impl ModeCoupling {
    pub fn reduced_field(&self) -> &InPlaneField {
        &self.reduced
    }

    /// Coupling field `g_{p,σ,j}(ρ)` [rad/s] at cyclotron frequency `omega_c`.
    pub fn field(&self, omega_c: f64) -> InPlaneField {
        self.reduced.scaled(omega_c.sqrt())
    }
}

/// Builds the coupling-field entry of one mode.
pub fn coupling_field(profile: &ModeProfile, params: &PhysParams) -> Result<ModeCoupling> {
    if !(profile.omega > 0.0) || !profile.omega.is_finite() {
        return Err(Error::ZeroModeFrequency(profile.omega));
    }
    params.validate()?;
    let prefactor = params.reduced_coupling_sq(profile.omega).sqrt();
    Ok(ModeCoupling {
        label: profile.label,
        omega: profile.omega,
        quality: profile.quality,
        reduced: profile.field.scaled(prefactor),
    })
}

/// Square-root prefactor of the coupling field for a unit-amplitude profile
/// [rad/s].
pub fn coupling_prefactor(omega_p: f64, omega_c: f64, params: &PhysParams) -> Result<f64> {
    if !(omega_p > 0.0) {
        return Err(Error::ZeroModeFrequency(omega_p));
    }
    if omega_c < 0.0 {
        return Err(invalid("omega_c", "must be non-negative"));
    }
    Ok((omega_c * params.reduced_coupling_sq(omega_p)).sqrt())
}

/// `I[j][k] = ∫ dρ/a² a_j(ρ) b_k(ρ)*` for `j, k ∈ {x, y}`.
pub(crate) fn component_overlaps(a: &InPlaneField, b: &InPlaneField) -> [[C64; 2]; 2] {
    match (a, b) {
        (InPlaneField::Grid(ga), InPlaneField::Grid(gb)) if ga.nx == gb.nx && ga.ny == gb.ny => {
            let n = ga.len() as f64;
            let dot = |u: &[f64], v: &[f64]| -> C64 {
                C64::new(u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>() / n, 0.0)
            };
            [
                [dot(&ga.ex, &gb.ex), dot(&ga.ex, &gb.ey)],
                [dot(&ga.ey, &gb.ex), dot(&ga.ey, &gb.ey)],
            ]
        }
        _ => {
            let fa = a.to_fourier();
            let fb = b.to_fourier();
            let mut out = [[C64::new(0.0, 0.0); 2]; 2];
            for ta in fa.terms() {
                if let Some(tb) = fb.get(ta.m) {
                    let ua = [ta.ex, ta.ey];
                    let ub = [tb.ex, tb.ey];
                    for j in 0..2 {
                        for k in 0..2 {
                            out[j][k] += ua[j] * ub[k].conj();
                        }
                    }
                }
            }
            out
        }
    }
}

/// A figure of merit defined as the square root of a possibly complex ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOfMerit {
    pub radicand: C64,
}

impl FigureOfMerit {
    /// `√|radicand|`; equals the figure of merit whenever the radicand is
    /// real and non-negative.
    pub fn magnitude(&self) -> f64 {
        self.radicand.norm().sqrt()
    }

    /// Phase of the radicand [rad]; zero for real overlaps.
    pub fn phase(&self) -> f64 {
        self.radicand.arg()
    }

    /// Principal complex square root of the radicand.
    pub fn value(&self) -> C64 {
        self.radicand.sqrt()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.radicand.im.abs() <= tol * self.radicand.norm().max(f64::MIN_POSITIVE)
            && self.radicand.re >= 0.0
    }
}

/// Coupling fields of a collection of modes at one cyclotron frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSet {
    modes: Vec<ModeCoupling>,
    omega_c: f64,
    /// Reversed field orientation conjugates g̃ (the CR rotates the other way).
    reversed: bool,
}

impl CouplingSet {
    pub fn new(modes: Vec<ModeCoupling>, omega_c: f64) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::Empty("coupling set has no modes"));
        }
        if !(omega_c >= 0.0) || !omega_c.is_finite() {
            return Err(invalid("omega_c", format!("{omega_c} must be finite and >= 0")));
        }
        for (i, m) in modes.iter().enumerate() {
            if m.reduced.is_empty() {
                return Err(Error::EmptyField(m.label));
            }
            if modes[..i].iter().any(|o| o.label == m.label) {
                return Err(invalid("modes", format!("duplicate mode {}", m.label)));
            }
        }
        Ok(Self {
            modes,
            omega_c,
            reversed: false,
        })
    }

    /// Coupling set of `profiles` at field `b` [T].
    pub fn from_profiles(profiles: &[ModeProfile], params: &PhysParams, b: f64) -> Result<Self> {
        let omega_c = cyclotron_frequency(b, params)?;
        let modes = profiles
            .iter()
            .map(|p| coupling_field(p, params))
            .collect::<Result<Vec<_>>>()?;
        Self::new(modes, omega_c)
    }

    pub fn modes(&self) -> &[ModeCoupling] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.omega).collect()
    }

    pub fn labels(&self) -> Vec<ModeLabel> {
        self.modes.iter().map(|m| m.label).collect()
    }

    /// Same fields at a different cyclotron frequency.
    pub fn with_cyclotron(&self, omega_c: f64) -> Result<Self> {
        if !(omega_c >= 0.0) || !omega_c.is_finite() {
            return Err(invalid("omega_c", format!("{omega_c} must be finite and >= 0")));
        }
        Ok(Self {
            omega_c,
            ..self.clone()
        })
    }

    /// Same fields at a signed magnetic field `b` [T]; negative values flip
    /// the CR chirality.
    pub fn at_field(&self, b: f64, params: &PhysParams) -> Result<Self> {
        let mut out = self.with_cyclotron(cyclotron_frequency(b.abs(), params)?)?;
        out.reversed = b < 0.0;
        Ok(out)
    }

    pub fn with_reversed(mut self, reversed: bool) -> Self {
        self.reversed = reversed;
        self
    }

    /// Overrides the bare frequency of one mode, keeping its field profile.
    /// The B-independent amplitude rescales as `1/√ω_p`.
    pub fn with_mode_frequency(&self, label: ModeLabel, omega: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::ZeroModeFrequency(omega));
        }
        let i = self.index_of(label)?;
        let mut out = self.clone();
        let m = &mut out.modes[i];
        m.reduced = m.reduced.scaled((m.omega / omega).sqrt());
        m.omega = omega;
        Ok(out)
    }

    /// Converts every field to a pruned Fourier series.
    pub fn to_fourier(&self, cutoff: i32, drop_tol: f64) -> Result<Self> {
        let modes = self
            .modes
            .iter()
            .map(|m| {
                let prof = ModeProfile::new(m.label, m.omega, m.quality, m.reduced.clone());
                let f = fourier_decompose(&prof, cutoff, drop_tol)?;
                Ok(ModeCoupling {
                    reduced: f.field,
                    ..m.clone()
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { modes, ..self.clone() })
    }

    pub fn index_of(&self, label: ModeLabel) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m.label == label)
            .ok_or(Error::UnknownMode(label))
    }

    pub fn mode(&self, label: ModeLabel) -> Result<&ModeCoupling> {
        Ok(&self.modes[self.index_of(label)?])
    }

    /// Sign `s` in `g̃ = g_y - s·i g_x`.
    pub(crate) fn chirality(&self) -> f64 {
        if self.reversed {
            -1.0
        } else {
            1.0
        }
    }

    /// `∫ dρ/a² h̃_i h̃_j*` with `h̃ = g̃ / √ω_c`.
    fn reduced_tilde_overlap(&self, i: usize, j: usize) -> C64 {
        let o = component_overlaps(&self.modes[i].reduced, &self.modes[j].reduced);
        let s = self.chirality();
        // (a_y - s i a_x)(b_y* + s i b_x*)
        o[1][1] + o[0][0] + C64::new(0.0, s) * (o[1][0] - o[0][1])
    }

    /// `∫ dρ/a² g̃_i g̃_j*` [rad²/s²].
    pub fn tilde_overlap(&self, i: usize, j: usize) -> C64 {
        self.reduced_tilde_overlap(i, j) * self.omega_c
    }

    /// Effective coupling `Ω_{p,σ} = (∫ dρ/a² |g̃|²)^{1/2}` [rad/s].
    pub fn effective_coupling(&self, label: ModeLabel) -> Result<f64> {
        let i = self.index_of(label)?;
        Ok(self.effective_coupling_at(i))
    }

    pub fn effective_coupling_at(&self, i: usize) -> f64 {
        (self.reduced_tilde_overlap(i, i).re.max(0.0) * self.omega_c).sqrt()
    }

    pub fn effective_couplings(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.effective_coupling_at(i)).collect()
    }

    /// Normalized overlap `ξ_{p,p';σ,σ'}` of the complex coupling fields.
    pub fn overlap_xi(&self, a: ModeLabel, b: ModeLabel) -> Result<C64> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        self.overlap_xi_at(i, j)
    }

    pub fn overlap_xi_at(&self, i: usize, j: usize) -> Result<C64> {
        let nii = self.reduced_tilde_overlap(i, i).re;
        let njj = self.reduced_tilde_overlap(j, j).re;
        if !(nii > 0.0) {
            return Err(Error::ZeroCoupling(self.modes[i].label));
        }
        if !(njj > 0.0) {
            return Err(Error::ZeroCoupling(self.modes[j].label));
        }
        if i == j {
            return Ok(C64::new(1.0, 0.0));
        }
        Ok(self.reduced_tilde_overlap(i, j) / (nii * njj).sqrt())
    }

    /// Full ξ matrix over all modes of the set.
    pub fn xi_matrix(&self) -> Result<DMatrix<C64>> {
        let n = self.len();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.overlap_xi_at(i, j)?;
            }
        }
        Ok(out)
    }

    /// A² coefficients `D_{p,p';σ,σ'} = Σ_j ∫ dρ/a² g_j g'_j* / ω_c` [rad/s].
    pub fn a2_coefficients(&self) -> Result<DMatrix<C64>> {
        if !(self.omega_c > 0.0) {
            return Err(Error::ZeroCyclotronFrequency);
        }
        Ok(self.a2_reduced())
    }

    /// A² coefficients from the B-independent fields; identical to
    /// [`Self::a2_coefficients`] wherever the latter is defined.
    pub(crate) fn a2_reduced(&self) -> DMatrix<C64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| {
            let o = component_overlaps(&self.modes[i].reduced, &self.modes[j].reduced);
            o[0][0] + o[1][1]
        })
    }

    /// Multimode USC figure of merit
    /// `η_{pp',σ} = √(∫ g̃_p g̃_{p'}* / (ω_c (ω_p + ω_{p'})/2))`.
    pub fn fom_eta(&self, p: usize, p_prime: usize, sigma: Polarization) -> Result<FigureOfMerit> {
        let i = self.index_of(ModeLabel::new(p, sigma))?;
        let j = self.index_of(ModeLabel::new(p_prime, sigma))?;
        self.fom_eta_at(i, j)
    }

    pub fn fom_eta_at(&self, i: usize, j: usize) -> Result<FigureOfMerit> {
        if !(self.omega_c > 0.0) {
            return Err(Error::ZeroCyclotronFrequency);
        }
        let mean = 0.5 * (self.modes[i].omega + self.modes[j].omega);
        Ok(FigureOfMerit {
            radicand: self.reduced_tilde_overlap(i, j) / mean,
        })
    }

    /// Superstrong-coupling figure of merit of modes `p = 1, 2`:
    /// `Λ_σ = √(∫ g̃_1 g̃_2* / (ω_c (ω_2 - ω_1)))`.
    pub fn fom_lambda(&self, sigma: Polarization) -> Result<FigureOfMerit> {
        self.fom_lambda_pair(ModeLabel::new(1, sigma), ModeLabel::new(2, sigma))
    }

    pub fn fom_lambda_pair(&self, first: ModeLabel, second: ModeLabel) -> Result<FigureOfMerit> {
        if !(self.omega_c > 0.0) {
            return Err(Error::ZeroCyclotronFrequency);
        }
        let (i, j) = (self.index_of(first)?, self.index_of(second)?);
        let gap = self.modes[j].omega - self.modes[i].omega;
        if gap == 0.0 {
            return Err(Error::DegenerateModes(first, second));
        }
        Ok(FigureOfMerit {
            radicand: self.reduced_tilde_overlap(i, j) / gap,
        })
    }
}
