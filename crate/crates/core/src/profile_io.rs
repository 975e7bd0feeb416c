//! On-disk mode profiles: a TOML manifest plus a numeric payload.
//!
//! ```toml
//! format_version = 1
//! lattice_a_um = 333.0
//! omega_GHz = 339.0
//! Q = 72.0
//! polarization = "y"
//! p_index = 1
//! grid_nx = 64
//! grid_ny = 64
//! grid_nz = 40                  # only with z-resolved data
//! z_samples_um = [ ... ]        # grid_nz heights, strictly increasing
//! components = ["ex", "ey"]     # plus "eps", "vol_ex", "vol_ey", "vol_ez"
//! normalization_constant = 1.0
//! data_file = "mode1y.bin"
//! data_format = "binary"        # or "csv"
//! data_layout = "row_major_float64_little_endian"
//! ```
//!
//! The payload holds the listed components back to back. `ex`, `ey` are the
//! in-plane field at the electron gas, `grid_ny × grid_nx` values each
//! (index `iy * nx + ix`). The volume components `eps`, `vol_ex`, `vol_ey`,
//! `vol_ez` hold `grid_nz × grid_ny × grid_nx` values each (index
//! `(iz * ny + iy) * nx + ix`). Binary payloads are little-endian f64; CSV
//! payloads have a `value` header and one number per line in the same order.
//!
//! `normalization_constant` is `∫dρ dz ε E² / a³` of the stored amplitudes;
//! fields are divided by its square root on load.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::units::{ghz_to_rad, rad_to_ghz, um_to_m};
use crate::profile::{GridField, InPlaneField, ModeLabel, ModeProfile, Polarization, VolumeField};

pub const FORMAT_VERSION: u32 = 1;
pub const DATA_LAYOUT: &str = "row_major_float64_little_endian";

const IN_PLANE: [&str; 2] = ["ex", "ey"];
const VOLUME: [&str; 4] = ["eps", "vol_ex", "vol_ey", "vol_ez"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PayloadFormat {
    Binary,
    Csv,
}

impl PayloadFormat {
    fn extension(self) -> &'static str {
        match self {
            Self::Binary => "bin",
            Self::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileManifest {
    pub format_version: u32,
    pub lattice_a_um: f64,
    #[serde(rename = "omega_GHz")]
    pub omega_ghz: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub polarization: Polarization,
    pub p_index: usize,
    pub grid_nx: usize,
    pub grid_ny: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_nz: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_samples_um: Option<Vec<f64>>,
    pub components: Vec<String>,
    pub normalization_constant: f64,
    pub data_file: String,
    pub data_format: PayloadFormat,
    pub data_layout: String,
}

impl ProfileManifest {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Format(m));
        if self.format_version != FORMAT_VERSION {
            return bad(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            ));
        }
        if self.data_layout != DATA_LAYOUT {
            return bad(format!("data_layout must be \"{DATA_LAYOUT}\", got \"{}\"", self.data_layout));
        }
        for (name, v) in [
            ("lattice_a_um", self.lattice_a_um),
            ("omega_GHz", self.omega_ghz),
            ("Q", self.q),
            ("normalization_constant", self.normalization_constant),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be finite and > 0, got {v}"));
            }
        }
        if self.grid_nx == 0 || self.grid_ny == 0 {
            return bad("grid_nx and grid_ny must be > 0".into());
        }
        for c in &self.components {
            if !IN_PLANE.contains(&c.as_str()) && !VOLUME.contains(&c.as_str()) {
                return bad(format!("unknown component \"{c}\""));
            }
            if self.components.iter().filter(|x| *x == c).count() > 1 {
                return bad(format!("component \"{c}\" listed twice"));
            }
        }
        if !IN_PLANE.iter().any(|c| self.has(c)) {
            return bad("components must include ex or ey".into());
        }
        let has_volume = VOLUME.iter().any(|c| self.has(c));
        match (self.grid_nz, &self.z_samples_um) {
            (Some(nz), Some(z)) => {
                if z.len() != nz || nz < 2 {
                    return bad(format!("grid_nz = {nz} with {} z samples", z.len()));
                }
                if !VOLUME.iter().all(|c| self.has(c)) {
                    return bad("z-resolved data needs eps, vol_ex, vol_ey and vol_ez".into());
                }
            }
            (None, None) if !has_volume => {}
            _ => return bad("grid_nz, z_samples_um and volume components go together".into()),
        }
        Ok(())
    }

    fn has(&self, c: &str) -> bool {
        self.components.iter().any(|x| x == c)
    }

    fn len_of(&self, c: &str) -> usize {
        let plane = self.grid_nx * self.grid_ny;
        if IN_PLANE.contains(&c) {
            plane
        } else {
            plane * self.grid_nz.unwrap_or(0)
        }
    }

    /// Number of f64 values in the payload.
    pub fn payload_len(&self) -> usize {
        self.components.iter().map(|c| self.len_of(c)).sum()
    }
}

pub fn read_manifest(path: &Path) -> Result<ProfileManifest> {
    let text = fs::read_to_string(path)?;
    let m: ProfileManifest =
        toml::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    m.validate()?;
    Ok(m)
}

fn payload_path(manifest_path: &Path, m: &ProfileManifest) -> PathBuf {
    manifest_path
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .join(&m.data_file)
}

/// Manifest and raw payload, without rescaling.
pub fn read_raw(manifest_path: &Path) -> Result<(ProfileManifest, Vec<f64>)> {
    let m = read_manifest(manifest_path)?;
    let path = payload_path(manifest_path, &m);
    let data = match m.data_format {
        PayloadFormat::Binary => {
            let bytes = fs::read(&path)?;
            if bytes.len() % 8 != 0 {
                return Err(Error::Format(format!(
                    "{}: {} bytes is not a whole number of f64",
                    path.display(),
                    bytes.len()
                )));
            }
            bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect()
        }
        PayloadFormat::Csv => {
            let mut rdr = csv::Reader::from_path(&path)?;
            let mut v = Vec::new();
            for (i, rec) in rdr.records().enumerate() {
                let rec = rec?;
                let x = rec
                    .get(0)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Format(format!("{}: line {}: not a number", path.display(), i + 2)))?;
                v.push(x);
            }
            v
        }
    };
    if data.len() != m.payload_len() {
        return Err(Error::Format(format!(
            "{}: expected {} values, found {}",
            path.display(),
            m.payload_len(),
            data.len()
        )));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::Format(format!("{}: non-finite value", path.display())));
    }
    Ok((m, data))
}

/// Loads a profile and rescales it by `1/sqrt(normalization_constant)`.
pub fn read_profile(manifest_path: &Path) -> Result<(ModeProfile, ProfileManifest)> {
    let (m, data) = read_raw(manifest_path)?;
    let s = 1.0 / m.normalization_constant.sqrt();
    let (nx, ny) = (m.grid_nx, m.grid_ny);
    let mut comps: std::collections::HashMap<&str, Vec<f64>> = Default::default();
    let mut at = 0;
    for c in &m.components {
        let n = m.len_of(c);
        comps.insert(c.as_str(), data[at..at + n].to_vec());
        at += n;
    }
    let take = |c: &str, n: usize, scale: f64| -> Vec<f64> {
        comps
            .get(c)
            .map(|v| v.iter().map(|x| x * scale).collect())
            .unwrap_or_else(|| vec![0.0; n])
    };
    let plane = GridField::new(nx, ny, take("ex", nx * ny, s), take("ey", nx * ny, s))?;
    let mut profile = ModeProfile::new(
        ModeLabel::new(m.p_index, m.polarization),
        ghz_to_rad(m.omega_ghz),
        m.q,
        InPlaneField::Grid(plane),
    );
    if let (Some(nz), Some(z)) = (m.grid_nz, &m.z_samples_um) {
        let n = nx * ny * nz;
        let vol = VolumeField {
            nx,
            ny,
            z: z.iter().map(|&v| um_to_m(v)).collect(),
            eps: take("eps", n, 1.0),
            ex: take("vol_ex", n, s),
            ey: take("vol_ey", n, s),
            ez: take("vol_ez", n, s),
        };
        vol.validate()?;
        profile.volume = Some(vol);
    }
    Ok((profile, m))
}

fn write_payload(path: &Path, format: PayloadFormat, data: &[f64]) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    match format {
        PayloadFormat::Binary => {
            for x in data {
                out.write_all(&x.to_le_bytes())?;
            }
        }
        PayloadFormat::Csv => {
            writeln!(out, "value")?;
            for x in data {
                // shortest representation that parses back to the same bits
                writeln!(out, "{x:?}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn write_manifest(dir: &Path, stem: &str, m: &ProfileManifest, data: &[f64]) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    write_payload(&dir.join(&m.data_file), m.data_format, data)?;
    let text = toml::to_string(m).map_err(|e| Error::Format(e.to_string()))?;
    let path = dir.join(format!("{stem}.toml"));
    fs::write(&path, text)?;
    Ok(path)
}

/// Writes `profile` as `<dir>/<stem>.toml` plus payload. Fourier profiles
/// are sampled on a `grid_n × grid_n` grid first.
pub fn write_profile(
    profile: &ModeProfile,
    lattice_a: f64,
    dir: &Path,
    stem: &str,
    format: PayloadFormat,
    grid_n: usize,
) -> Result<PathBuf> {
    let grid = match &profile.field {
        InPlaneField::Grid(g) => g.clone(),
        InPlaneField::Fourier(f) => f.reconstruct(grid_n, grid_n),
    };
    let mut components: Vec<String> = IN_PLANE.iter().map(|s| s.to_string()).collect();
    let mut data = grid.ex.clone();
    data.extend(&grid.ey);
    let (mut grid_nz, mut z_samples_um) = (None, None);
    if let Some(vol) = &profile.volume {
        vol.validate()?;
        if (vol.nx, vol.ny) != (grid.nx, grid.ny) {
            return Err(Error::ShapeMismatch(format!(
                "volume grid {}x{} differs from in-plane grid {}x{}",
                vol.nx, vol.ny, grid.nx, grid.ny
            )));
        }
        components.extend(VOLUME.iter().map(|s| s.to_string()));
        for v in [&vol.eps, &vol.ex, &vol.ey, &vol.ez] {
            data.extend(v);
        }
        grid_nz = Some(vol.nz());
        z_samples_um = Some(vol.z.iter().map(|z| z * 1e6).collect());
    }
    let m = ProfileManifest {
        format_version: FORMAT_VERSION,
        lattice_a_um: lattice_a * 1e6,
        omega_ghz: rad_to_ghz(profile.omega),
        q: profile.quality,
        polarization: profile.label.sigma,
        p_index: profile.label.p,
        grid_nx: grid.nx,
        grid_ny: grid.ny,
        grid_nz,
        z_samples_um,
        components,
        normalization_constant: 1.0,
        data_file: format!("{stem}.{}", format.extension()),
        data_format: format,
        data_layout: DATA_LAYOUT.to_string(),
    };
    m.validate()?;
    write_manifest(dir, stem, &m, &data)
}

/// Rewrites a profile with a different payload format, keeping every value
/// bit for bit. Returns the new manifest path.
pub fn convert_profile(manifest_path: &Path, dir: &Path, format: PayloadFormat) -> Result<PathBuf> {
    let (mut m, data) = read_raw(manifest_path)?;
    let stem = manifest_path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::Format(format!("bad manifest name {}", manifest_path.display())))?
        .to_string();
    m.data_format = format;
    m.data_file = format!("{stem}.{}", format.extension());
    write_manifest(dir, &stem, &m, &data)
}
