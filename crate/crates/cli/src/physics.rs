//! Dispersion, correlation, collapse and transmission outputs shared by the
//! toy and ingest-profiles scenarios.

use std::f64::consts::TAU;

use anyhow::{Context, Result};
use serde::Serialize;
use usc_core::hopfield::{
    build_hamiltonian, diagonalize, dispersion_sweep, mp_crossing, vacuum_correlations, SweepOptions,
};
use usc_core::inout::transmission_map;
use usc_core::params::units::rad_to_ghz;
use usc_core::toy::ToyModel;
use usc_core::{CouplingSet, ModeLabel, PhysParams, TermSelection};

use crate::config::{linspace, CollapsePath, CollapseSection, SweepSection, TransmissionSection};
use crate::output::Artifacts;
use crate::plot::{self, Series};

/// Coupling set at any field: the fields are B-independent, only `ω_c` and
/// the chirality change.
pub struct Model {
    pub base: CouplingSet,
    pub params: PhysParams,
}

impl Model {
    pub fn at(&self, b: f64) -> usc_core::Result<CouplingSet> {
        self.base.at_field(b, &self.params)
    }
}

#[derive(Debug, Serialize)]
pub struct ModeSummary {
    pub label: String,
    pub freq_ghz: f64,
    pub quality: f64,
    /// `Ω/ω_p` at the reference field.
    pub omega_ratio: f64,
}

#[derive(Debug, Serialize)]
pub struct PairSummary {
    pub modes: [String; 2],
    pub xi_abs: f64,
    pub xi_phase: f64,
    pub eta_abs: f64,
    pub eta_phase: f64,
    pub eta_is_real: bool,
    pub lambda_abs: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct CouplingSummary {
    pub reference_field_t: f64,
    pub modes: Vec<ModeSummary>,
    pub pairs: Vec<PairSummary>,
}

fn label(l: ModeLabel) -> String {
    format!("{}{}", l.p, l.sigma)
}

pub fn coupling_summary(model: &Model, b_ref: f64) -> Result<CouplingSummary> {
    let cs = model.at(b_ref)?;
    let labels = cs.labels();
    let modes = cs
        .modes()
        .iter()
        .enumerate()
        .map(|(i, m)| ModeSummary {
            label: label(m.label),
            freq_ghz: rad_to_ghz(m.omega),
            quality: m.quality,
            omega_ratio: cs.effective_coupling_at(i) / m.omega,
        })
        .collect();
    let mut pairs = Vec::new();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let xi = cs.overlap_xi_at(i, j)?;
            let eta = cs.fom_eta_at(i, j)?;
            let lambda = if labels[i].sigma == labels[j].sigma && cs.omegas()[i] != cs.omegas()[j] {
                cs.fom_lambda_pair(labels[i], labels[j]).ok().map(|f| f.magnitude())
            } else {
                None
            };
            pairs.push(PairSummary {
                modes: [label(labels[i]), label(labels[j])],
                xi_abs: xi.norm(),
                xi_phase: xi.arg(),
                eta_abs: eta.magnitude(),
                eta_phase: eta.phase(),
                eta_is_real: eta.is_real(1e-9),
                lambda_abs: lambda,
            });
        }
    }
    Ok(CouplingSummary {
        reference_field_t: b_ref,
        modes,
        pairs,
    })
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub term: String,
    pub branches: usize,
    pub fields: usize,
    pub unstable_fields_t: Vec<f64>,
    /// `(field index, branch)` pairs whose jump exceeded the threshold.
    pub discontinuities: Vec<(usize, usize)>,
    /// Field where the bright middle polariton crosses the CR, if it does.
    pub mp_crossing_t: Option<f64>,
}

pub fn sweeps(model: &Model, sweep: &SweepSection, out: &mut Artifacts) -> Result<Vec<SweepSummary>> {
    let grid = linspace(sweep.b_min_t, sweep.b_max_t, sweep.points);
    let mut summaries = Vec::new();
    for &term in &sweep.terms {
        let name = term.name();
        eprintln!("sweep {name}: {} fields", grid.len());
        let opts = SweepOptions {
            allow_unstable: sweep.allow_unstable,
            ..SweepOptions::with_flags(term.flags())
        };
        let s = dispersion_sweep(&model.base, &model.params, &grid, opts)
            .with_context(|| format!("dispersion sweep with {name} terms"))?;
        out.write_with(&format!("dispersion_{name}.csv"), |buf| Ok(s.write_csv(buf)?))?;

        if let Ok(weights) = s.mp_weights() {
            out.write_with(&format!("mp_weights_{name}.csv"), |buf| {
                let mut w = csv::Writer::from_writer(buf);
                let mut header = vec!["B_T".to_string()];
                header.extend(model.base.labels().into_iter().map(|l| format!("weight_{}", label(l))));
                w.write_record(&header)?;
                for (b, row) in grid.iter().zip(&weights) {
                    let mut r = vec![format!("{b:.6}")];
                    r.extend(row.iter().map(|v| format!("{v:.9}")));
                    w.write_record(&r)?;
                }
                w.flush()?;
                Ok(())
            })?;
        }

        if sweep.correlations {
            let labels = model.base.labels();
            out.write_with(&format!("correlations_{name}.csv"), |buf| {
                let mut w = csv::Writer::from_writer(buf);
                w.write_record(["B_T", "row_mode", "col_mode", "re", "im"])?;
                for (b, sol) in grid.iter().zip(s.solutions()) {
                    if !sol.is_stable() {
                        continue;
                    }
                    let c = vacuum_correlations(sol)?;
                    for (i, li) in labels.iter().enumerate() {
                        for (j, lj) in labels.iter().enumerate() {
                            w.write_record([
                                format!("{b:.6}"),
                                label(*li),
                                label(*lj),
                                format!("{:.12e}", c[(i, j)].re),
                                format!("{:.12e}", c[(i, j)].im),
                            ])?;
                        }
                    }
                }
                w.flush()?;
                Ok(())
            })?;
        }

        if out.plots() {
            let n = s.branch_count();
            let mut series: Vec<Series> = (0..n)
                .map(|k| Series {
                    label: String::new(),
                    points: grid.iter().cloned().zip(s.branch_hz(k).into_iter().map(|f| f * 1e-9)).collect(),
                    markers: false,
                })
                .collect();
            series.push(Series {
                label: "CR".into(),
                points: grid.iter().zip(s.omega_c()).map(|(&b, w)| (b, rad_to_ghz(w))).collect(),
                markers: false,
            });
            let file = format!("dispersion_{name}.svg");
            plot::lines(&out.path(&file), &format!("Polariton dispersion ({name})"), "B (T)", "f (GHz)", &series)?;
            out.register(&file)?;
        }

        let crossing = mp_crossing(|b| model.at(b), term.flags(), grid[0].max(1e-3), grid[grid.len() - 1], 1e-6)
            .ok()
            .map(|c| c.b);
        summaries.push(SweepSummary {
            term: name.into(),
            branches: s.branch_count(),
            fields: grid.len(),
            unstable_fields_t: s.unstable_points(),
            discontinuities: s.discontinuities().to_vec(),
            mp_crossing_t: crossing,
        });
    }
    Ok(summaries)
}

pub fn transmission(
    model: &Model,
    tr: &TransmissionSection,
    out: &mut Artifacts,
) -> Result<usc_core::inout::TransmissionMap> {
    let b = linspace(tr.b_min_t, tr.b_max_t, tr.b_points);
    let f = linspace(tr.f_min_ghz * 1e9, tr.f_max_ghz * 1e9, tr.f_points);
    eprintln!("transmission {}: {} fields x {} frequencies", tr.term.name(), b.len(), f.len());
    let map = transmission_map(
        |b| model.at(b),
        &b,
        &f,
        tr.term.flags(),
        model.params.gamma_c,
        tr.sigma_in,
        tr.sigma_out,
    )
    .context("transmission map")?;
    let stem = format!("transmission_{}_{}{}", tr.term.name(), tr.sigma_in, tr.sigma_out);
    out.write_with(&format!("{stem}.csv"), |buf| Ok(map.write_long_csv(buf)?))?;
    out.write_with(&format!("{stem}_matrix.csv"), |buf| Ok(map.write_matrix_csv(buf)?))?;
    if out.plots() {
        let mut ridge = Vec::new();
        for &bi in &b {
            let h = build_hamiltonian(&model.at(bi)?, tr.term.flags())?;
            if let Ok(sol) = diagonalize(&h) {
                let w = sol.omegas();
                ridge.extend(
                    (0..sol.n_modes())
                        .filter(|&l| sol.photon_weight(l) > 1e-9)
                        .map(|l| (bi, rad_to_ghz(w[l]))),
                );
            }
        }
        let fg: Vec<f64> = f.iter().map(|x| x * 1e-9).collect();
        let values: Vec<Vec<f64>> = map.spectra.iter().map(|s| s.t.clone()).collect();
        let file = format!("{stem}.svg");
        plot::heatmap(
            &out.path(&file),
            &format!("Transmission {}{} ({})", tr.sigma_in, tr.sigma_out, tr.term.name()),
            "B (T)",
            "f (GHz)",
            &b,
            &fg,
            &values,
            &[Series {
                label: String::new(),
                points: ridge,
                markers: true,
            }],
        )?;
        out.register(&file)?;
    }
    Ok(map)
}

/// `|⟨a₁†a₂⟩|` against `|η₁₂|` along the configured parameter paths.
pub fn collapse(
    toy: &ToyModel,
    params: &PhysParams,
    co: &CollapseSection,
    out: &mut Artifacts,
) -> Result<()> {
    let [w1, w2] = toy.omega;
    let mut rows: Vec<(CollapsePath, f64, f64, f64, f64)> = Vec::new();
    for &path in &co.paths {
        let (values, make): (Vec<f64>, Box<dyn Fn(f64) -> ToyModel>) = match path {
            CollapsePath::Omega1 => (
                linspace(w1 / TAU, co.f_max_thz * 1e12, co.points),
                Box::new(|f| toy.clone().with_frequencies(TAU * f, w2)),
            ),
            CollapsePath::Omega2 => (
                linspace(w2 / TAU, co.f_max_thz * 1e12, co.points),
                Box::new(|f| toy.clone().with_frequencies(w1, TAU * f)),
            ),
            CollapsePath::Eps => (
                linspace(0.0, 1.0, co.points),
                Box::new(|e| ToyModel { eps: e, ..toy.clone() }),
            ),
        };
        eprintln!("collapse along {path:?}: {} points", values.len());
        for v in values {
            let cs = make(v).coupling_set(params, co.b_t)?;
            let eta = cs.fom_eta_at(0, 1)?.magnitude();
            let h = build_hamiltonian(&cs, TermSelection::Full.flags())?.with_b_field(co.b_t);
            let sol = diagonalize(&h)?;
            sol.check_stable()
                .with_context(|| format!("collapse path {path:?} at {v}"))?;
            let c = vacuum_correlations(&sol)?[(0, 1)];
            rows.push((path, v, eta, c.re, c.norm()));
        }
    }
    out.write_with("collapse.csv", |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["path", "parameter", "eta_abs", "corr12_re", "corr12_abs"])?;
        for (p, v, eta, re, abs) in &rows {
            let (name, v) = match p {
                CollapsePath::Omega1 => ("omega1_THz", v * 1e-12),
                CollapsePath::Omega2 => ("omega2_THz", v * 1e-12),
                CollapsePath::Eps => ("eps", *v),
            };
            w.write_record([
                name.to_string(),
                format!("{v:.9}"),
                format!("{eta:.12e}"),
                format!("{re:.12e}"),
                format!("{abs:.12e}"),
            ])?;
        }
        w.flush()?;
        Ok(())
    })?;
    if out.plots() {
        let series: Vec<Series> = co
            .paths
            .iter()
            .map(|&p| Series {
                label: format!("{p:?}"),
                points: rows.iter().filter(|r| r.0 == p).map(|r| (r.2, r.4)).collect(),
                markers: true,
            })
            .collect();
        plot::lines(
            &out.path("collapse.svg"),
            &format!("Correlation vs eta at B = {} T", co.b_t),
            "|eta_12|",
            "|<a1+ a2>|",
            &series,
        )?;
        out.register("collapse.svg")?;
    }
    Ok(())
}

/// Toy coupling set with frequencies and quality factors from the config.
pub fn toy_model(m: &crate::config::ModelSection) -> ToyModel {
    ToyModel::new(m.eps)
        .with_frequencies(TAU * m.f1_thz * 1e12, TAU * m.f2_thz * 1e12)
        .with_quality(m.q1, m.q2)
        .with_grid(m.grid_n)
}

pub fn toy_base(m: &crate::config::ModelSection, params: &PhysParams) -> Result<Model> {
    let toy = toy_model(m);
    let base = match m.representation {
        crate::config::Representation::Fourier => toy.coupling_set(params, 1.0)?,
        crate::config::Representation::Grid => {
            toy.grid_coupling_set(params, 1.0)?.to_fourier(m.fourier_cutoff, 1e-8)?
        }
    };
    Ok(Model {
        base,
        params: *params,
    })
}
