//! Writes a small set of profile files for the `ingest-profiles` example
//! config: the two toy modes at partial overlap (y polarized, one binary and
//! one CSV payload) and an x-polarized mode with a volume field.
//!
//! ```text
//! cargo run -p usc-core --example write_toy_profiles -- configs/profiles
//! ```

use std::f64::consts::TAU;
use std::path::PathBuf;

use usc_core::profile::{toy_mode_profile, GridField, InPlaneField, ModeLabel, ModeProfile, VolumeField};
use usc_core::profile_io::{write_profile, PayloadFormat};
use usc_core::vacuum::normalization;
use usc_core::{PhysParams, Polarization};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "configs/profiles".into()));
    std::fs::create_dir_all(&dir)?;
    let a = PhysParams::default().a;
    let eps = 0.6;
    let n = 32;

    let m1 = toy_mode_profile(1, eps, n)?;
    let m2 = toy_mode_profile(2, eps, n)?;
    println!("{}", write_profile(&m1, a, &dir, "mode1_y", PayloadFormat::Binary, n)?.display());
    println!("{}", write_profile(&m2, a, &dir, "mode2_y", PayloadFormat::Csv, n)?.display());

    // x-polarized mode bound to a slab at z = 0 with an evanescent tail
    let nv = 16;
    let plane = GridField::from_fn(nv, nv, |x, y| ((TAU * x).cos() * (TAU * y).sin(), 0.0));
    let nz = 21;
    let z: Vec<f64> = (0..nz).map(|i| (-0.5 + i as f64 / (nz - 1) as f64) * a).collect();
    let mut vol = VolumeField {
        nx: nv,
        ny: nv,
        z: z.clone(),
        eps: Vec::new(),
        ex: Vec::new(),
        ey: Vec::new(),
        ez: Vec::new(),
    };
    for &zz in &z {
        let inside = zz.abs() <= 0.06 * a;
        let decay = (-(zz.abs() / (0.15 * a))).exp();
        for i in 0..nv * nv {
            vol.eps.push(if inside { 11.6 } else { 1.0 });
            vol.ex.push(plane.ex[i] * decay);
            vol.ey.push(0.0);
            vol.ez.push(0.0);
        }
    }
    let s = 1.0 / normalization(&vol, a)?.sqrt();
    for v in vol.ex.iter_mut() {
        *v *= s;
    }
    let mut mx = ModeProfile::new(ModeLabel::new(1, Polarization::X), TAU * 0.352e12, 65.0, InPlaneField::Grid(plane));
    mx.volume = Some(vol);
    println!("{}", write_profile(&mx, a, &dir, "mode1_x", PayloadFormat::Binary, nv)?.display());
    Ok(())
}
