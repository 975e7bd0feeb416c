//! Run configuration: TOML schema, boundary units and validation.
//!
//! Configs use GHz/THz, Tesla and µm; everything is converted to SI once,
//! here.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use usc_core::params::{ELECTRON_MASS, GAAS_MASS_RATIO};
use usc_core::spectro::Window;
use usc_core::{PhysParams, Polarization, TermSelection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Toy,
    IngestProfiles,
    Magnetofilm,
    SpectroPipeline,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::Toy,
        Scenario::IngestProfiles,
        Scenario::Magnetofilm,
        Scenario::SpectroPipeline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Toy => "toy",
            Scenario::IngestProfiles => "ingest-profiles",
            Scenario::Magnetofilm => "magnetofilm",
            Scenario::SpectroPipeline => "spectro-pipeline",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Scenario::Toy => {
                "two-mode toy model: dispersion, correlations, eta collapse and transmission maps"
            }
            Scenario::IngestProfiles => {
                "mode profiles from manifest files: couplings, figures of merit, dispersion and spectra"
            }
            Scenario::Magnetofilm => "circular and linear transmission of a gyrotropic sheet on a substrate",
            Scenario::SpectroPipeline => {
                "time traces or synthetic maps through FFT, peak tracking and deviation from the model"
            }
        }
    }

    pub fn required(self) -> &'static [&'static str] {
        match self {
            Scenario::Toy => &["scenario", "one of sweep/collapse/transmission"],
            Scenario::IngestProfiles => &["scenario", "profiles", "sweep"],
            Scenario::Magnetofilm => &["scenario", "film"],
            Scenario::SpectroPipeline => &["scenario", "spectro"],
        }
    }

    pub fn optional(self) -> &'static [&'static str] {
        match self {
            Scenario::Toy => &["seed", "out_dir", "params", "model", "sweep", "collapse", "transmission", "output"],
            Scenario::IngestProfiles => &["seed", "out_dir", "params", "transmission", "output"],
            Scenario::Magnetofilm => &["seed", "out_dir", "params", "output"],
            Scenario::SpectroPipeline => &["seed", "out_dir", "params", "model", "transmission", "output"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub params: ParamsSection,
    #[serde(default)]
    pub model: ModelSection,
    pub profiles: Option<ProfilesSection>,
    pub sweep: Option<SweepSection>,
    pub collapse: Option<CollapseSection>,
    pub transmission: Option<TransmissionSection>,
    pub film: Option<FilmSection>,
    pub spectro: Option<SpectroSection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsSection {
    pub n_e_per_m2: f64,
    /// In units of the free electron mass.
    pub m_eff_ratio: f64,
    pub lattice_a_um: f64,
    pub gamma_c_ghz: f64,
    pub d_qw_um: f64,
}

impl Default for ParamsSection {
    fn default() -> Self {
        Self {
            n_e_per_m2: 3.08e16,
            m_eff_ratio: GAAS_MASS_RATIO,
            lattice_a_um: 333.0,
            gamma_c_ghz: 5.7,
            d_qw_um: 2.0,
        }
    }
}

impl ParamsSection {
    pub fn to_phys(&self) -> PhysParams {
        PhysParams {
            n_e: self.n_e_per_m2,
            m_eff: self.m_eff_ratio * ELECTRON_MASS,
            a: self.lattice_a_um * 1e-6,
            gamma_c: TAU * self.gamma_c_ghz * 1e9,
            d_qw: self.d_qw_um * 1e-6,
            ..PhysParams::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Fourier,
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    /// Spatial overlap parameter of the toy profiles, in [0, 1].
    pub eps: f64,
    pub f1_thz: f64,
    pub f2_thz: f64,
    pub q1: f64,
    pub q2: f64,
    pub representation: Representation,
    pub grid_n: usize,
    /// Grid profiles are decomposed up to `|m| ≤ fourier_cutoff`.
    pub fourier_cutoff: i32,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            eps: 1.0,
            f1_thz: 0.339,
            f2_thz: 0.384,
            q1: 72.0,
            q2: 70.0,
            representation: Representation::Fourier,
            grid_n: 128,
            fourier_cutoff: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfilesSection {
    /// Manifest paths, relative to the config file.
    pub manifests: Vec<PathBuf>,
    /// Fourier cutoff `|m| ≤ cutoff` applied to grid profiles (the full
    /// Hamiltonian needs Fourier fields).
    #[serde(default = "default_cutoff")]
    pub fourier_cutoff: i32,
    #[serde(default = "default_drop_tol")]
    pub drop_tol: f64,
}

fn default_cutoff() -> i32 {
    6
}

fn default_drop_tol() -> f64 {
    1e-8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub b_min_t: f64,
    pub b_max_t: f64,
    pub points: usize,
    #[serde(default = "default_terms")]
    pub terms: Vec<TermSelection>,
    /// Also write photon correlations at every field.
    #[serde(default)]
    pub correlations: bool,
    #[serde(default)]
    pub allow_unstable: bool,
}

fn default_terms() -> Vec<TermSelection> {
    vec![TermSelection::Full]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollapsePath {
    Omega1,
    Omega2,
    Eps,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollapseSection {
    pub b_t: f64,
    #[serde(default = "default_collapse_points")]
    pub points: usize,
    #[serde(default = "default_paths")]
    pub paths: Vec<CollapsePath>,
    /// Upper end of the frequency paths.
    #[serde(default = "default_f_max_thz")]
    pub f_max_thz: f64,
}

fn default_collapse_points() -> usize {
    200
}

fn default_paths() -> Vec<CollapsePath> {
    vec![CollapsePath::Omega1, CollapsePath::Omega2, CollapsePath::Eps]
}

fn default_f_max_thz() -> f64 {
    1.8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmissionSection {
    pub b_min_t: f64,
    pub b_max_t: f64,
    pub b_points: usize,
    pub f_min_ghz: f64,
    pub f_max_ghz: f64,
    pub f_points: usize,
    #[serde(default = "default_pol")]
    pub sigma_in: Polarization,
    #[serde(default = "default_pol")]
    pub sigma_out: Polarization,
    #[serde(default = "default_term")]
    pub term: TermSelection,
}

fn default_pol() -> Polarization {
    Polarization::Y
}

fn default_term() -> TermSelection {
    TermSelection::Full
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilmSection {
    pub substrate_um: f64,
    #[serde(default = "default_eps_substrate")]
    pub eps_substrate: f64,
    pub b_t: Vec<f64>,
    pub f_min_ghz: f64,
    pub f_max_ghz: f64,
    pub f_points: usize,
    /// Scattering rate override γ/2π; defaults to half the CR linewidth.
    pub gamma_ghz: Option<f64>,
}

fn default_eps_substrate() -> f64 {
    usc_core::magnetofilm::GAAS_PERMITTIVITY
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectroSource {
    /// Noisy transmission spectra of the toy model (needs `[transmission]`).
    ToyMap,
    /// Time-domain traces, one per field.
    Traces,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceEntry {
    pub b_t: f64,
    /// CSV with columns `t_ps, E`, relative to the config file.
    pub file: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DipSeed {
    pub center_ghz: f64,
    pub width_ghz: f64,
    #[serde(default = "default_depth")]
    pub depth: f64,
}

fn default_depth() -> f64 {
    0.2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectroSection {
    pub source: SpectroSource,
    #[serde(default)]
    pub traces: Vec<TraceEntry>,
    #[serde(default = "default_t_cut")]
    pub t_cut_ps: f64,
    #[serde(default = "default_pad")]
    pub pad_factor: f64,
    #[serde(default = "default_window")]
    pub window: Window,
    /// Only this band of each spectrum is tracked.
    pub fit_min_ghz: Option<f64>,
    pub fit_max_ghz: Option<f64>,
    /// Relative noise added to synthetic spectra.
    #[serde(default = "default_noise")]
    pub noise: f64,
    pub seed_center_ghz: f64,
    pub seed_fwhm_ghz: f64,
    #[serde(default)]
    pub dips: Vec<DipSeed>,
    pub track_window_ghz: Option<f64>,
    pub max_jump_ghz: Option<f64>,
    #[serde(default = "default_drift")]
    pub drift_threshold: f64,
    /// Compare tracked centers with the nearest toy-model branch.
    #[serde(default)]
    pub compare_to_model: bool,
}

fn default_t_cut() -> f64 {
    66.0
}

fn default_pad() -> f64 {
    4.0
}

fn default_window() -> Window {
    Window::Rectangular
}

fn default_noise() -> f64 {
    0.01
}

fn default_drift() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub plots: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { plots: true }
    }
}

/// Parsed config together with its source text and location.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub text: String,
    pub path: PathBuf,
}

impl LoadedConfig {
    pub fn base_dir(&self) -> &Path {
        self.path.parent().unwrap_or(Path::new("."))
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir().join(p)
        }
    }
}

pub fn load(path: &Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config: RunConfig = toml::from_str(&text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .map_or(String::new(), |l| format!("line {l}: "));
        anyhow!("{}: {line}{}", path.display(), e.message())
    })?;
    let loaded = LoadedConfig {
        config,
        text,
        path: path.to_path_buf(),
    };
    validate(&loaded).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok(loaded)
}

/// `line N: ` for the first assignment to `key`, if present.
fn at(text: &str, key: &str) -> String {
    text.lines()
        .position(|l| {
            let l = l.trim_start();
            l.strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map_or(String::new(), |i| format!("line {}: ", i + 1))
}

fn section_at(text: &str, name: &str) -> String {
    let header = format!("[{name}]");
    text.lines()
        .position(|l| l.trim() == header)
        .map_or(String::new(), |i| format!("line {}: ", i + 1))
}

fn positive(text: &str, key: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        bail!("{}`{key}` must be finite and > 0, got {v}", at(text, key));
    }
    Ok(())
}

fn range(text: &str, lo_key: &str, lo: f64, hi_key: &str, hi: f64) -> Result<()> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        bail!("{}`{lo_key}` ({lo}) must be below `{hi_key}` ({hi})", at(text, hi_key));
    }
    Ok(())
}

fn count(text: &str, key: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        bail!("{}`{key}` must be at least {min}, got {n}", at(text, key));
    }
    Ok(())
}

fn validate(l: &LoadedConfig) -> Result<()> {
    let c = &l.config;
    let t = l.text.as_str();
    let p = &c.params;
    if !(p.n_e_per_m2 >= 0.0) {
        bail!("{}`n_e_per_m2` must be >= 0", at(t, "n_e_per_m2"));
    }
    positive(t, "m_eff_ratio", p.m_eff_ratio)?;
    positive(t, "lattice_a_um", p.lattice_a_um)?;
    positive(t, "gamma_c_ghz", p.gamma_c_ghz)?;
    positive(t, "d_qw_um", p.d_qw_um)?;

    let m = &c.model;
    if !(0.0..=1.0).contains(&m.eps) {
        bail!("{}`eps` must lie in [0, 1], got {}", at(t, "eps"), m.eps);
    }
    positive(t, "f1_thz", m.f1_thz)?;
    positive(t, "f2_thz", m.f2_thz)?;
    positive(t, "q1", m.q1)?;
    positive(t, "q2", m.q2)?;
    count(t, "grid_n", m.grid_n, 8)?;
    if m.fourier_cutoff < 1 {
        bail!("{}`fourier_cutoff` must be >= 1", at(t, "fourier_cutoff"));
    }

    let need = |present: bool, name: &str| -> Result<()> {
        if !present {
            bail!(
                "scenario `{}` needs a [{name}] section",
                c.scenario.name()
            );
        }
        Ok(())
    };
    let forbid = |present: bool, name: &str| -> Result<()> {
        if present {
            bail!(
                "{}[{name}] is not used by scenario `{}`",
                section_at(t, name),
                c.scenario.name()
            );
        }
        Ok(())
    };
    match c.scenario {
        Scenario::Toy => {
            if c.sweep.is_none() && c.collapse.is_none() && c.transmission.is_none() {
                bail!("scenario `toy` needs at least one of [sweep], [collapse], [transmission]");
            }
            forbid(c.profiles.is_some(), "profiles")?;
            forbid(c.film.is_some(), "film")?;
            forbid(c.spectro.is_some(), "spectro")?;
        }
        Scenario::IngestProfiles => {
            need(c.profiles.is_some(), "profiles")?;
            need(c.sweep.is_some(), "sweep")?;
            forbid(c.collapse.is_some(), "collapse")?;
            forbid(c.film.is_some(), "film")?;
            forbid(c.spectro.is_some(), "spectro")?;
        }
        Scenario::Magnetofilm => {
            need(c.film.is_some(), "film")?;
            for (s, n) in [
                (c.sweep.is_some(), "sweep"),
                (c.profiles.is_some(), "profiles"),
                (c.collapse.is_some(), "collapse"),
                (c.transmission.is_some(), "transmission"),
                (c.spectro.is_some(), "spectro"),
            ] {
                forbid(s, n)?;
            }
        }
        Scenario::SpectroPipeline => {
            need(c.spectro.is_some(), "spectro")?;
            forbid(c.profiles.is_some(), "profiles")?;
            forbid(c.film.is_some(), "film")?;
            forbid(c.collapse.is_some(), "collapse")?;
        }
    }

    if let Some(s) = &c.sweep {
        if !(s.b_min_t >= 0.0) {
            bail!("{}`b_min_t` must be >= 0", at(t, "b_min_t"));
        }
        range(t, "b_min_t", s.b_min_t, "b_max_t", s.b_max_t)?;
        count(t, "points", s.points, 2)?;
        if s.terms.is_empty() {
            bail!("{}`terms` must not be empty", at(t, "terms"));
        }
    }
    if let Some(pr) = &c.profiles {
        if pr.manifests.is_empty() {
            bail!("{}`manifests` must list at least one file", at(t, "manifests"));
        }
        for m in &pr.manifests {
            let full = l.resolve(m);
            if !full.is_file() {
                bail!("{}profile manifest {} does not exist", at(t, "manifests"), full.display());
            }
        }
        if pr.fourier_cutoff < 1 {
            bail!("{}`fourier_cutoff` must be >= 1", at(t, "fourier_cutoff"));
        }
        if !(pr.drop_tol >= 0.0) {
            bail!("{}`drop_tol` must be >= 0", at(t, "drop_tol"));
        }
    }
    if let Some(co) = &c.collapse {
        positive(t, "b_t", co.b_t)?;
        count(t, "points", co.points, 2)?;
        if co.paths.is_empty() {
            bail!("{}`paths` must not be empty", at(t, "paths"));
        }
        if !(co.f_max_thz > m.f1_thz.max(m.f2_thz)) {
            bail!("{}`f_max_thz` must exceed both mode frequencies", at(t, "f_max_thz"));
        }
    }
    if let Some(tr) = &c.transmission {
        if !(tr.b_min_t >= 0.0) {
            bail!("{}`b_min_t` must be >= 0", at(t, "b_min_t"));
        }
        if tr.b_points > 1 {
            range(t, "b_min_t", tr.b_min_t, "b_max_t", tr.b_max_t)?;
        }
        count(t, "b_points", tr.b_points, 1)?;
        if !(tr.f_min_ghz > 0.0) {
            bail!("{}`f_min_ghz` must be > 0", at(t, "f_min_ghz"));
        }
        range(t, "f_min_ghz", tr.f_min_ghz, "f_max_ghz", tr.f_max_ghz)?;
        count(t, "f_points", tr.f_points, 2)?;
    }
    if let Some(f) = &c.film {
        positive(t, "substrate_um", f.substrate_um)?;
        if !(f.eps_substrate >= 1.0) {
            bail!("{}`eps_substrate` must be >= 1", at(t, "eps_substrate"));
        }
        if f.b_t.is_empty() || f.b_t.iter().any(|b| !b.is_finite()) {
            bail!("{}`b_t` must list finite fields", at(t, "b_t"));
        }
        if !(f.f_min_ghz > 0.0) {
            bail!("{}`f_min_ghz` must be > 0", at(t, "f_min_ghz"));
        }
        range(t, "f_min_ghz", f.f_min_ghz, "f_max_ghz", f.f_max_ghz)?;
        count(t, "f_points", f.f_points, 2)?;
        if let Some(g) = f.gamma_ghz {
            if !(g >= 0.0) {
                bail!("{}`gamma_ghz` must be >= 0", at(t, "gamma_ghz"));
            }
        }
    }
    if let Some(s) = &c.spectro {
        match s.source {
            SpectroSource::ToyMap => {
                if c.transmission.is_none() {
                    bail!("{}source `toy-map` needs a [transmission] section", at(t, "source"));
                }
                if !s.traces.is_empty() {
                    bail!("{}`traces` are only read with source `traces`", at(t, "traces"));
                }
            }
            SpectroSource::Traces => {
                if s.traces.is_empty() {
                    bail!("{}source `traces` needs at least one [[spectro.traces]] entry", at(t, "source"));
                }
                for tr in &s.traces {
                    let full = l.resolve(&tr.file);
                    if !full.is_file() {
                        bail!("{}trace file {} does not exist", at(t, "file"), full.display());
                    }
                }
                if s.traces.windows(2).any(|w| !(w[1].b_t > w[0].b_t)) {
                    bail!("{}trace fields must be strictly increasing", at(t, "b_t"));
                }
            }
        }
        positive(t, "t_cut_ps", s.t_cut_ps)?;
        if !(s.pad_factor >= 1.0) {
            bail!("{}`pad_factor` must be >= 1", at(t, "pad_factor"));
        }
        if !(s.noise >= 0.0) {
            bail!("{}`noise` must be >= 0", at(t, "noise"));
        }
        if let (Some(lo), Some(hi)) = (s.fit_min_ghz, s.fit_max_ghz) {
            range(t, "fit_min_ghz", lo, "fit_max_ghz", hi)?;
        }
        positive(t, "seed_center_ghz", s.seed_center_ghz)?;
        positive(t, "seed_fwhm_ghz", s.seed_fwhm_ghz)?;
        for d in &s.dips {
            positive(t, "center_ghz", d.center_ghz)?;
            positive(t, "width_ghz", d.width_ghz)?;
            if !(0.0..=1.0).contains(&d.depth) {
                bail!("{}`depth` must lie in [0, 1]", at(t, "depth"));
            }
        }
        if let Some(w) = s.track_window_ghz {
            positive(t, "track_window_ghz", w)?;
        }
        if let Some(w) = s.max_jump_ghz {
            positive(t, "max_jump_ghz", w)?;
        }
        if !(s.drift_threshold >= 0.0) {
            bail!("{}`drift_threshold` must be >= 0", at(t, "drift_threshold"));
        }
    }
    Ok(())
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<LoadedConfig> {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, text).unwrap();
        load(&path)
    }

    #[test]
    fn minimal_toy_config() {
        let c = parse("scenario = \"toy\"\n[sweep]\nb_min_t = 0.1\nb_max_t = 2.0\npoints = 10\n").unwrap();
        assert_eq!(c.config.scenario, Scenario::Toy);
        assert_eq!(c.config.sweep.unwrap().terms, vec![TermSelection::Full]);
        assert!(c.config.output.plots);
    }

    #[test]
    fn unknown_key_reports_line() {
        let e = parse("scenario = \"toy\"\n[sweep]\nb_min_t = 0.1\nb_max = 2.0\npoints = 10\n")
            .unwrap_err()
            .to_string();
        assert!(e.contains("line 4"), "{e}");
        assert!(e.contains("b_max"), "{e}");
    }

    #[test]
    fn semantic_errors_report_line() {
        let e = parse("scenario = \"toy\"\n[sweep]\nb_min_t = 2.0\nb_max_t = 1.0\npoints = 10\n")
            .unwrap_err()
            .to_string();
        assert!(e.contains("line 4"), "{e}");
    }

    #[test]
    fn missing_section_rejected() {
        let e = parse("scenario = \"magnetofilm\"\n").unwrap_err().to_string();
        assert!(e.contains("[film]"), "{e}");
    }

    #[test]
    fn foreign_section_rejected() {
        let e = parse(
            "scenario = \"toy\"\n[sweep]\nb_min_t = 0.1\nb_max_t = 2.0\npoints = 10\n[film]\nsubstrate_um = 60\nb_t = [1.0]\nf_min_ghz = 100\nf_max_ghz = 600\nf_points = 10\n",
        )
        .unwrap_err()
        .to_string();
        assert!(e.contains("line 6"), "{e}");
    }

    #[test]
    fn empty_config_rejected() {
        assert!(parse("").is_err());
    }

    #[test]
    fn boundary_units_convert() {
        let p = ParamsSection::default().to_phys();
        let d = PhysParams::default();
        assert!((p.gamma_c - d.gamma_c).abs() < 1e-6 * d.gamma_c);
        assert!((p.a - d.a).abs() < 1e-15);
        assert!((p.m_eff - d.m_eff).abs() < 1e-40);
    }
}
