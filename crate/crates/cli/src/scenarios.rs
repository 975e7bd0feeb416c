//! The four runnable scenarios.

use std::f64::consts::TAU;
use std::fs::File;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use usc_core::hopfield::{build_hamiltonian, diagonalize};
use usc_core::magnetofilm::{film_transmission, GyroParams, LayerStack};
use usc_core::params::units::rad_to_ghz;
use usc_core::profile::fourier_decompose;
use usc_core::profile_io::read_profile;
use usc_core::spectro::{
    track_peaks, window_and_fft_with, DeviationReport, DipClass, FieldSpectrum, FitModel, FitOptions, Residual,
    TrackOptions, Waveform,
};
use usc_core::vacuum::vacuum_maps;
use usc_core::{CouplingSet, HamiltonianFlags};

use crate::config::{linspace, LoadedConfig, SpectroSource};
use crate::output::Artifacts;
use crate::physics::{self, Model};
use crate::plot::{self, Series};

pub fn toy(cfg: &LoadedConfig, out: &mut Artifacts) -> Result<()> {
    let c = &cfg.config;
    let params = c.params.to_phys();
    let model = physics::toy_base(&c.model, &params)?;
    let summary = physics::coupling_summary(&model, 1.0)?;
    out.write_json("couplings.json", &summary)?;
    if let Some(sw) = &c.sweep {
        let sweeps = physics::sweeps(&model, sw, out)?;
        out.write_json("sweeps.json", &sweeps)?;
    }
    if let Some(co) = &c.collapse {
        physics::collapse(&physics::toy_model(&c.model), &params, co, out)?;
    }
    if let Some(tr) = &c.transmission {
        physics::transmission(&model, tr, out)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct VacuumSummary {
    mode: String,
    zbar_um: f64,
    sigma_z_um: f64,
    norm: f64,
}

pub fn ingest(cfg: &LoadedConfig, out: &mut Artifacts) -> Result<()> {
    let c = &cfg.config;
    let pr = c.profiles.as_ref().expect("validated");
    let params = c.params.to_phys();
    let mut profiles = Vec::new();
    let mut vacuum = Vec::new();
    for m in &pr.manifests {
        let path = cfg.resolve(m);
        let (prof, manifest) = read_profile(&path).with_context(|| format!("reading {}", path.display()))?;
        let lattice = manifest.lattice_a_um * 1e-6;
        if (lattice - params.a).abs() > 1e-9 * params.a {
            bail!(
                "{} declares lattice constant {} µm but the run uses {} µm",
                path.display(),
                manifest.lattice_a_um,
                params.a * 1e6
            );
        }
        if prof.volume.is_some() {
            let v = vacuum_maps(&prof, &params).with_context(|| format!("vacuum maps of {}", path.display()))?;
            let name = format!("{}{}", prof.label.p, prof.label.sigma);
            out.write_with(&format!("vacuum_z_{name}.csv"), |buf| {
                let mut w = csv::Writer::from_writer(buf);
                w.write_record(["z_um", "I_z"])?;
                for (z, i) in v.z.iter().zip(&v.i_z) {
                    w.write_record([format!("{:.6}", z * 1e6), format!("{i:.12e}")])?;
                }
                w.flush()?;
                Ok(())
            })?;
            vacuum.push(VacuumSummary {
                mode: name,
                zbar_um: v.zbar * 1e6,
                sigma_z_um: v.sigma_z * 1e6,
                norm: v.norm,
            });
        }
        eprintln!("loaded mode {} from {}", prof.label, path.display());
        profiles.push(fourier_decompose(&prof, pr.fourier_cutoff, pr.drop_tol)?);
    }
    if !vacuum.is_empty() {
        out.write_json("vacuum.json", &vacuum)?;
    }
    let base = CouplingSet::from_profiles(&profiles, &params, 1.0)?;
    let model = Model { base, params };
    out.write_json("couplings.json", &physics::coupling_summary(&model, 1.0)?)?;
    let sweeps = physics::sweeps(&model, c.sweep.as_ref().expect("validated"), out)?;
    out.write_json("sweeps.json", &sweeps)?;
    if let Some(tr) = &c.transmission {
        physics::transmission(&model, tr, out)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct FilmSummary {
    b_t: f64,
    cyclotron_ghz: f64,
    /// Minimum of the CR-active channel over the grid; absent at B = 0.
    active_dip_ghz: Option<f64>,
    active_dip_t: Option<f64>,
    gamma_ghz: f64,
}

pub fn magnetofilm(cfg: &LoadedConfig, out: &mut Artifacts) -> Result<()> {
    let c = &cfg.config;
    let fs = c.film.as_ref().expect("validated");
    let params = c.params.to_phys();
    let stack = LayerStack::sheet_on_substrate(fs.substrate_um * 1e-6, fs.eps_substrate);
    let f = linspace(fs.f_min_ghz * 1e9, fs.f_max_ghz * 1e9, fs.f_points);
    let mut summary = Vec::new();
    let mut series = Vec::new();
    for &b in &fs.b_t {
        let mut gp = GyroParams::from_params(&params, b);
        if let Some(g) = fs.gamma_ghz {
            gp = gp.with_gamma(TAU * g * 1e9);
        }
        eprintln!("film at B = {b} T");
        let s = film_transmission(&stack, &gp, &f).with_context(|| format!("film transmission at {b} T"))?;
        out.write_with(&format!("film_B{b:.3}T.csv"), |buf| Ok(s.write_csv(buf)?))?;
        // reversing B swaps which circular channel is CR-active
        let active = if b > 0.0 { Some(&s.t_minus) } else if b < 0.0 { Some(&s.t_plus) } else { None };
        let k = active.and_then(|t| (0..f.len()).min_by(|&x, &y| t[x].total_cmp(&t[y])));
        summary.push(FilmSummary {
            b_t: b,
            cyclotron_ghz: rad_to_ghz(gp.omega_c().abs()),
            active_dip_ghz: k.map(|k| f[k] * 1e-9),
            active_dip_t: k.zip(active).map(|(k, t)| t[k]),
            gamma_ghz: gp.gamma / TAU * 1e-9,
        });
        for (name, t) in [("T-", &s.t_minus), ("T+", &s.t_plus)] {
            series.push(Series {
                label: format!("{name} {b} T"),
                points: f.iter().map(|x| x * 1e-9).zip(t.iter().cloned()).collect(),
                markers: false,
            });
        }
    }
    out.write_json("film_summary.json", &summary)?;
    if out.plots() {
        plot::lines(&out.path("film.svg"), "Circular transmission", "f (GHz)", "T", &series)?;
        out.register("film.svg")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TrackSummary {
    fields: usize,
    lost_fields_t: Vec<f64>,
    dip_classes: Vec<&'static str>,
    dip_centers_ghz: Vec<f64>,
    deviation: Option<DeviationSummary>,
}

#[derive(Serialize)]
struct DeviationSummary {
    n: usize,
    d_ghz: f64,
    residuals: Vec<Residual>,
}

pub fn spectro(cfg: &LoadedConfig, out: &mut Artifacts) -> Result<()> {
    let c = &cfg.config;
    let sp = c.spectro.as_ref().expect("validated");
    let params = c.params.to_phys();
    let mut spectra: Vec<FieldSpectrum> = match sp.source {
        SpectroSource::ToyMap => {
            let model = physics::toy_base(&c.model, &params)?;
            let tr = c.transmission.as_ref().expect("validated");
            let map = physics::transmission(&model, tr, out)?;
            let peak = map.max();
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            map.spectra
                .iter()
                .zip(&map.b)
                .map(|(s, &b)| FieldSpectrum {
                    b,
                    freq_hz: s.freq_hz.clone(),
                    values: s
                        .t
                        .iter()
                        .map(|t| {
                            let z: f64 = StandardNormal.sample(&mut rng);
                            t + sp.noise * peak * z
                        })
                        .collect(),
                })
                .collect()
        }
        SpectroSource::Traces => {
            let mut v = Vec::new();
            for (i, tr) in sp.traces.iter().enumerate() {
                let path = cfg.resolve(&tr.file);
                let w = Waveform::from_csv(File::open(&path).with_context(|| format!("opening {}", path.display()))?)
                    .with_context(|| format!("reading trace {}", path.display()))?;
                let s = window_and_fft_with(&w, sp.t_cut_ps * 1e-12, sp.pad_factor, sp.window)
                    .with_context(|| format!("FFT of {}", path.display()))?;
                out.write_with(&format!("spectrum_{i:03}.csv"), |buf| Ok(s.write_csv(buf)?))?;
                v.push(FieldSpectrum {
                    b: tr.b_t,
                    freq_hz: s.freq_hz.clone(),
                    values: s.amplitude.clone(),
                });
            }
            v
        }
    };
    let lo = sp.fit_min_ghz.map_or(f64::NEG_INFINITY, |x| x * 1e9);
    let hi = sp.fit_max_ghz.map_or(f64::INFINITY, |x| x * 1e9);
    for s in &mut spectra {
        let keep: Vec<usize> = (0..s.freq_hz.len())
            .filter(|&i| s.freq_hz[i] >= lo && s.freq_hz[i] <= hi)
            .collect();
        if keep.len() < 8 {
            bail!("fewer than 8 spectral points in the fit band at B = {} T", s.b);
        }
        s.freq_hz = keep.iter().map(|&i| s.freq_hz[i]).collect();
        s.values = keep.iter().map(|&i| s.values[i]).collect();
    }
    out.write_with("spectra.csv", |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["B_T", "freq_GHz", "value"])?;
        for s in &spectra {
            for (f, v) in s.freq_hz.iter().zip(&s.values) {
                w.write_record([format!("{:.6}", s.b), format!("{:.9}", f * 1e-9), format!("{v:.12e}")])?;
            }
        }
        w.flush()?;
        Ok(())
    })?;

    let first = &spectra[0];
    let center = sp.seed_center_ghz * 1e9;
    let near = (0..first.freq_hz.len())
        .min_by(|&a, &b| (first.freq_hz[a] - center).abs().total_cmp(&(first.freq_hz[b] - center).abs()))
        .unwrap_or(0);
    let mut seed = FitModel::peak(center, sp.seed_fwhm_ghz * 1e9, first.values[near].max(f64::MIN_POSITIVE));
    for d in &sp.dips {
        seed = seed.with_dip(d.center_ghz * 1e9, d.width_ghz * 1e9, d.depth);
    }
    let opts = TrackOptions {
        fit: FitOptions::default(),
        drift_threshold: sp.drift_threshold,
        window_hz: sp.track_window_ghz.map(|w| w * 1e9),
        max_jump_hz: sp.max_jump_ghz.map(|w| w * 1e9),
    };
    eprintln!("tracking over {} fields", spectra.len());
    let track = track_peaks(&spectra, &seed, &opts).context("peak tracking")?;
    out.write_with("track.csv", |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["B_T", "center_GHz", "center_err_GHz", "fwhm_GHz", "amplitude", "converged", "lost"])?;
        for p in &track.points {
            let err = p.fit.std_errors().get(1).cloned().unwrap_or(f64::NAN);
            let l = &p.fit.model.lorentzian;
            w.write_record([
                format!("{:.6}", p.b),
                format!("{:.9}", l.center * 1e-9),
                format!("{:.9}", err * 1e-9),
                format!("{:.9}", l.fwhm * 1e-9),
                format!("{:.12e}", l.amplitude),
                p.fit.converged.to_string(),
                p.lost.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    })?;

    let deviation = if sp.compare_to_model {
        let model = physics::toy_base(&c.model, &params)?;
        let mut residuals = Vec::new();
        for (b, f) in track.table() {
            let h = build_hamiltonian(&model.at(b)?, HamiltonianFlags::default())?.with_b_field(b);
            let sol = diagonalize(&h)?;
            let w = sol.omegas();
            let (branch, df) = (0..sol.n_modes())
                .filter(|&l| sol.photon_weight(l) > 1e-9)
                .map(|l| (l, f - w[l] / TAU))
                .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                .context("no bright branch to compare with")?;
            residuals.push(Residual {
                branch,
                b,
                family: "tracked".into(),
                delta_f: df,
            });
        }
        if residuals.is_empty() {
            bail!("every field was lost; nothing to compare with the model");
        }
        let n = residuals.len();
        let report = DeviationReport::new(residuals, n)?;
        Some(DeviationSummary {
            n: report.n,
            d_ghz: report.d * 1e-9,
            residuals: report.residuals,
        })
    } else {
        None
    };
    let summary = TrackSummary {
        fields: track.points.len(),
        lost_fields_t: track.lost_fields(),
        dip_classes: track
            .dip_classes
            .iter()
            .map(|d| match d {
                DipClass::FabryPerot => "fabry-perot",
                DipClass::Drifting => "drifting",
                DipClass::Unclassified => "unclassified",
            })
            .collect(),
        dip_centers_ghz: track.dip_centers.iter().map(|x| x * 1e-9).collect(),
        deviation,
    };
    out.write_json("track_summary.json", &summary)?;

    if out.plots() {
        let b: Vec<f64> = spectra.iter().map(|s| s.b).collect();
        let same_axis = spectra.windows(2).all(|w| w[0].freq_hz == w[1].freq_hz);
        let pts: Vec<(f64, f64)> = track.table().into_iter().map(|(b, f)| (b, f * 1e-9)).collect();
        if same_axis && b.len() > 1 {
            let fg: Vec<f64> = spectra[0].freq_hz.iter().map(|x| x * 1e-9).collect();
            let values: Vec<Vec<f64>> = spectra.iter().map(|s| s.values.clone()).collect();
            plot::heatmap(
                &out.path("track.svg"),
                "Tracked peak",
                "B (T)",
                "f (GHz)",
                &b,
                &fg,
                &values,
                &[Series {
                    label: String::new(),
                    points: pts,
                    markers: true,
                }],
            )?;
        } else {
            plot::lines(
                &out.path("track.svg"),
                "Tracked peak",
                "B (T)",
                "f (GHz)",
                &[Series {
                    label: "center".into(),
                    points: pts,
                    markers: true,
                }],
            )?;
        }
        out.register("track.svg")?;
    }
    Ok(())
}
