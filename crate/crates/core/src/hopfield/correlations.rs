use std::io::Write;

use nalgebra::DMatrix;

use super::bogoliubov::{diagonalize, PolaritonSolution};
use super::hamiltonian::{build_hamiltonian, HamiltonianFlags};
use crate::coupling::CouplingSet;
use crate::error::{invalid, Error, Result};
use crate::profile::ModeLabel;
use crate::C64;

/// Photon weight below which a branch counts as dark.
const DARK_WEIGHT: f64 = 1e-9;

/// `⟨a†_p a_p'⟩` in the Fock state with `occupations[λ]` polaritons per mode:
/// `Σ_λ X̃^λ_p* X̃^λ_p' (n_λ + 1) + Σ_λ X^λ_p X^λ_p'* n_λ`.
pub fn ground_state_correlations(
    sol: &PolaritonSolution,
    occupations: &[f64],
) -> Result<DMatrix<C64>> {
    if occupations.len() != sol.n_modes() {
        return Err(invalid(
            "occupations",
            format!("expected {} entries, got {}", sol.n_modes(), occupations.len()),
        ));
    }
    if let Some(n) = occupations.iter().find(|n| !(**n >= 0.0) || !n.is_finite()) {
        return Err(invalid("occupations", format!("{n} must be finite and >= 0")));
    }
    sol.check_stable()?;
    let np = sol.n_photon();
    let mut out = DMatrix::zeros(np, np);
    for (l, &n) in occupations.iter().enumerate() {
        for p in 0..np {
            for q in 0..np {
                out[(p, q)] += sol.xt(l, p).conj() * sol.xt(l, q) * (n + 1.0)
                    + sol.x(l, p) * sol.x(l, q).conj() * n;
            }
        }
    }
    Ok(out)
}

/// Vacuum (`n_λ = 0`) correlations.
pub fn vacuum_correlations(sol: &PolaritonSolution) -> Result<DMatrix<C64>> {
    ground_state_correlations(sol, &vec![0.0; sol.n_modes()])
}

/// Middle polaritons: every eigenvalue strictly between the lowest (LP) and
/// highest (UP) one.
///
/// They only form when the photon modes share the CR, i.e. when fewer than
/// `2 n_photon` branches carry photon weight; otherwise each mode splits into
/// its own LP/UP pair and [`Error::NoMiddlePolariton`] is returned.
pub fn mp_branches(sol: &PolaritonSolution) -> Result<Vec<usize>> {
    let n = sol.n_modes();
    let bright = (0..n).filter(|&l| sol.photon_weight(l) > DARK_WEIGHT).count();
    if bright >= 2 * sol.n_photon() {
        return Err(Error::NoMiddlePolariton(format!(
            "{bright} bright branches for {} photon modes: every mode splits independently",
            sol.n_photon()
        )));
    }
    if n < 3 {
        return Err(Error::NoMiddlePolariton("fewer than three branches".into()));
    }
    Ok((1..n - 1).collect())
}

/// `Σ_{λ ∈ MPs} |X^λ_p|²` for every photon mode `p`.
pub fn mp_weights(sol: &PolaritonSolution) -> Result<Vec<f64>> {
    let mps = mp_branches(sol)?;
    Ok((0..sol.n_photon())
        .map(|p| mps.iter().map(|&l| sol.x(l, p).norm_sqr()).sum())
        .collect())
}

/// Point where the bright middle polariton crosses the bare CR frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct MpCrossing {
    pub b: f64,
    /// MP frequency at the crossing [rad/s] (equal to ω_c there).
    pub omega: f64,
    /// MP weights per photon mode at the crossing.
    pub weights: Vec<f64>,
}

/// Bright MP closest to ω_c and its signed detuning `ω_MP - ω_c`.
fn bright_mp_detuning(sol: &PolaritonSolution) -> Result<(usize, f64)> {
    let wc = sol.omega_c();
    let omegas = sol.omegas();
    mp_branches(sol)?
        .into_iter()
        .filter(|&l| sol.photon_weight(l) > DARK_WEIGHT)
        .map(|l| (l, omegas[l] - wc))
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .ok_or_else(|| Error::NoMiddlePolariton("no bright branch between LP and UP".into()))
}

/// Finds the field in `[b_lo, b_hi]` where the bright MP crosses ω_c by
/// bisection, to within `b_tol` [T].
pub fn mp_crossing<F>(
    couplings: F,
    flags: HamiltonianFlags,
    b_lo: f64,
    b_hi: f64,
    b_tol: f64,
) -> Result<MpCrossing>
where
    F: Fn(f64) -> Result<CouplingSet>,
{
    if !(b_lo < b_hi) || !(b_tol > 0.0) {
        return Err(invalid("b range", format!("need b_lo < b_hi and b_tol > 0, got [{b_lo}, {b_hi}], {b_tol}")));
    }
    let solve = |b: f64| -> Result<PolaritonSolution> {
        let h = build_hamiltonian(&couplings(b)?, flags)?.with_b_field(b);
        let sol = diagonalize(&h)?;
        sol.check_stable()?;
        Ok(sol)
    };
    let (mut lo, mut hi) = (b_lo, b_hi);
    let f_lo = bright_mp_detuning(&solve(lo)?)?.1;
    let f_hi = bright_mp_detuning(&solve(hi)?)?.1;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoMiddlePolariton(format!(
            "MP does not cross the CR between {b_lo} T and {b_hi} T"
        )));
    }
    while hi - lo > b_tol {
        let mid = 0.5 * (lo + hi);
        let f = bright_mp_detuning(&solve(mid)?)?.1;
        if f.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b = 0.5 * (lo + hi);
    let sol = solve(b)?;
    let (l, _) = bright_mp_detuning(&sol)?;
    Ok(MpCrossing {
        b,
        omega: sol.omegas()[l],
        weights: mp_weights(&sol)?,
    })
}

/// Writes a correlation matrix as long-format CSV
/// (`row_mode, col_mode, re, im`).
pub fn write_correlation_csv<W: Write>(
    labels: &[ModeLabel],
    corr: &DMatrix<C64>,
    out: W,
) -> Result<()> {
    if corr.shape() != (labels.len(), labels.len()) {
        return Err(Error::ShapeMismatch(format!(
            "{} labels for a {:?} matrix",
            labels.len(),
            corr.shape()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row_mode", "col_mode", "re", "im"])?;
    for (i, li) in labels.iter().enumerate() {
        for (j, lj) in labels.iter().enumerate() {
            let z = corr[(i, j)];
            w.write_record([
                li.to_string(),
                lj.to_string(),
                format!("{:.12e}", z.re),
                format!("{:.12e}", z.im),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
