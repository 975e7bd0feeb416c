use std::cmp::Ordering;
use std::fmt;

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use super::hamiltonian::{HopfieldMatrix, MatterMode, PhotonMode};
use crate::error::{Error, Result};
use crate::linalg::{eta_inner, max_abs};
use crate::C64;

/// Largest tolerated deviation of a physical mode's symplectic norm from 1.
const NORM_TOL: f64 = 1e-9;

/// Classification of a selected eigenmode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    Stable,
    /// Real eigenvalue with positive norm but negative frequency: the
    /// Hamiltonian is not bounded from below.
    NegativeFrequency,
    /// Complex eigenvalue of the dynamical matrix.
    Dynamical,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::NegativeFrequency => "negative_frequency",
            Stability::Dynamical => "dynamical",
        }
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Diagonalization route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Cholesky route when `M` is positive definite, general route otherwise.
    #[default]
    Auto,
    /// Cholesky factorization `M = K†K` and Hermitian eigenproblem of
    /// `K η K†`. Fails when `M` is not positive definite.
    Cholesky,
    /// Eigenvalues of `ηM` from a complex Schur form, eigenvectors from null
    /// spaces, symplectic Gram-Schmidt inside degenerate clusters.
    General,
}

/// Eigenmodes of a quadratic bosonic Hamiltonian.
///
/// Mode `λ` is stored as the column `y_λ` of `ηM y = ω y` with `y†ηy = 1`.
/// The polariton operator is
/// `p_λ = Σ_p X_p a_p + Σ_G W_G b_G + Σ_p X̃_p a_p† + Σ_G W̃_G b_G†`
/// with `X = y_a*`, `W = y_b*`, `X̃ = -y_{a†}*`, `W̃ = -y_{b†}*`.
/// `W̃` is indexed by the matter mode whose creation operator it multiplies.
#[derive(Debug, Clone)]
pub struct PolaritonSolution {
    eigenvalues: Vec<C64>,
    stability: Vec<Stability>,
    vectors: DMatrix<C64>,
    photons: Vec<PhotonMode>,
    matter: Vec<MatterMode>,
    omega_c: f64,
    b_field: Option<f64>,
}

impl PolaritonSolution {
    pub fn n_modes(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn n_photon(&self) -> usize {
        self.photons.len()
    }

    pub fn n_matter(&self) -> usize {
        self.matter.len()
    }

    pub fn photons(&self) -> &[PhotonMode] {
        &self.photons
    }

    pub fn matter(&self) -> &[MatterMode] {
        &self.matter
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn b_field(&self) -> Option<f64> {
        self.b_field
    }

    /// Eigenfrequencies ω_λ [rad/s], ascending. For dynamically unstable
    /// modes this is the real part of the eigenvalue.
    pub fn omegas(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    pub fn stability(&self) -> &[Stability] {
        &self.stability
    }

    pub fn is_stable(&self) -> bool {
        self.stability.iter().all(|s| *s == Stability::Stable)
    }

    /// Error describing the first unstable mode, if any.
    pub fn check_stable(&self) -> Result<()> {
        if let Some(k) = self.stability.iter().position(|s| *s != Stability::Stable) {
            return Err(Error::Unstable {
                b: self.b_field.unwrap_or(f64::NAN),
                detail: format!(
                    "mode {k} is {} (eigenvalue {:.6e})",
                    self.stability[k], self.eigenvalues[k]
                ),
            });
        }
        Ok(())
    }

    pub fn vector(&self, lambda: usize) -> DVector<C64> {
        self.vectors.column(lambda).into_owned()
    }

    /// `X^λ_p`.
    pub fn x(&self, lambda: usize, p: usize) -> C64 {
        self.vectors[(p, lambda)].conj()
    }

    /// `W^λ_G` for matter mode `k`.
    pub fn w(&self, lambda: usize, k: usize) -> C64 {
        self.vectors[(self.n_photon() + k, lambda)].conj()
    }

    /// `X̃^λ_p`.
    pub fn xt(&self, lambda: usize, p: usize) -> C64 {
        -self.vectors[(self.n_modes() + p, lambda)].conj()
    }

    /// `W̃^λ` for matter mode `k`.
    pub fn wt(&self, lambda: usize, k: usize) -> C64 {
        -self.vectors[(self.n_modes() + self.n_photon() + k, lambda)].conj()
    }

    /// Blocks `(X, W, X̃, W̃)` with one row per polariton mode.
    pub fn blocks(&self) -> [DMatrix<C64>; 4] {
        let n = self.n_modes();
        let (np, nm) = (self.n_photon(), self.n_matter());
        [
            DMatrix::from_fn(n, np, |l, p| self.x(l, p)),
            DMatrix::from_fn(n, nm, |l, k| self.w(l, k)),
            DMatrix::from_fn(n, np, |l, p| self.xt(l, p)),
            DMatrix::from_fn(n, nm, |l, k| self.wt(l, k)),
        ]
    }

    /// `Σ|X|² + Σ|W|² - Σ|X̃|² - Σ|W̃|²` of mode `λ`.
    pub fn symplectic_norm(&self, lambda: usize) -> f64 {
        let y: Vec<C64> = self.vectors.column(lambda).iter().copied().collect();
        eta_inner(&y, &y).re
    }

    /// Photon content `Σ_p |X^λ_p|²`.
    pub fn photon_weight(&self, lambda: usize) -> f64 {
        (0..self.n_photon()).map(|p| self.x(lambda, p).norm_sqr()).sum()
    }

    /// Photon content including the anomalous part, `Σ_p |X|² + |X̃|²`.
    pub fn photon_content(&self, lambda: usize) -> f64 {
        (0..self.n_photon())
            .map(|p| self.x(lambda, p).norm_sqr() + self.xt(lambda, p).norm_sqr())
            .sum()
    }
}

/// Bogoliubov diagonalization with the default route.
pub fn diagonalize(h: &HopfieldMatrix) -> Result<PolaritonSolution> {
    diagonalize_with(h, Method::Auto)
}

pub fn diagonalize_with(h: &HopfieldMatrix, method: Method) -> Result<PolaritonSolution> {
    h.check_structure()?;
    let (eigenvalues, stability, vectors) = match method {
        Method::Cholesky => cholesky_route(h).ok_or_else(|| Error::Unstable {
            b: h.b_field().unwrap_or(f64::NAN),
            detail: "Hamiltonian matrix is not positive definite".into(),
        })?,
        Method::General => general_route(h)?,
        Method::Auto => match cholesky_route(h) {
            Some(r) => r,
            None => general_route(h)?,
        },
    };
    let sol = PolaritonSolution {
        eigenvalues,
        stability,
        vectors,
        photons: h.photons().to_vec(),
        matter: h.matter().to_vec(),
        omega_c: h.omega_c(),
        b_field: h.b_field(),
    };
    for k in 0..sol.n_modes() {
        if sol.stability[k] == Stability::Dynamical {
            continue;
        }
        let norm = sol.symplectic_norm(k);
        if (norm - 1.0).abs() > NORM_TOL || !norm.is_finite() {
            return Err(Error::Normalization { mode: k, norm });
        }
    }
    Ok(sol)
}

type Modes = (Vec<C64>, Vec<Stability>, DMatrix<C64>);

fn sorted(mut modes: Vec<(C64, Stability, DVector<C64>)>, dim: usize) -> Modes {
    modes.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap_or(Ordering::Equal)
            .then(a.0.im.partial_cmp(&b.0.im).unwrap_or(Ordering::Equal))
    });
    let mut v = DMatrix::zeros(dim, modes.len());
    for (k, m) in modes.iter().enumerate() {
        v.set_column(k, &m.2);
    }
    (
        modes.iter().map(|m| m.0).collect(),
        modes.iter().map(|m| m.1).collect(),
        v,
    )
}

fn cholesky_route(h: &HopfieldMatrix) -> Option<Modes> {
    let n = h.n_modes();
    let chol = Cholesky::new(h.matrix().clone())?;
    let l = chol.l();
    // the complex factorization takes complex square roots instead of failing
    // on indefinite input
    if l.diagonal().iter().any(|d| !(d.re > 0.0) || d.im.abs() > 1e-12 * d.re) {
        return None;
    }
    // M = L L† = K† K with K = L† upper triangular
    let k = l.adjoint();
    let mut k_eta = k.clone();
    for j in n..2 * n {
        for i in 0..2 * n {
            k_eta[(i, j)] = -k_eta[(i, j)];
        }
    }
    let mut w = &k_eta * k.adjoint();
    w = (&w + w.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(w);
    let mut modes = Vec::with_capacity(n);
    for (idx, &ev) in eig.eigenvalues.iter().enumerate() {
        if ev <= 0.0 {
            continue;
        }
        let rhs = eig.eigenvectors.column(idx) * C64::new(ev.sqrt(), 0.0);
        let y = k.solve_upper_triangular(&rhs)?;
        modes.push((C64::new(ev, 0.0), Stability::Stable, y));
    }
    if modes.len() != n {
        return None;
    }
    Some(sorted(modes, 2 * n))
}

fn general_route(h: &HopfieldMatrix) -> Result<Modes> {
    let n = h.n_modes();
    let dim = 2 * n;
    let dynm = h.dynamical();
    let scale = max_abs(h.matrix()).max(f64::MIN_POSITIVE);
    let cluster_tol = 1e-8 * scale;
    let real_tol = 1e-7 * scale;

    let evs: Vec<C64> = dynm
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Unstable {
            b: h.b_field().unwrap_or(f64::NAN),
            detail: "Schur form did not converge".into(),
        })?
        .iter()
        .copied()
        .collect();

    let mut order: Vec<C64> = evs;
    order.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
    });
    let mut clusters: Vec<Vec<C64>> = Vec::new();
    for z in order {
        match clusters.last_mut() {
            Some(c) if c.iter().any(|w| (*w - z).norm() <= cluster_tol) => c.push(z),
            _ => clusters.push(vec![z]),
        }
    }

    let mut physical = Vec::new();
    let mut complex = Vec::new();
    for c in clusters {
        let k = c.len();
        let mean = c.iter().sum::<C64>() / k as f64;
        let basis = null_space(&dynm, mean, k);
        if mean.im.abs() > real_tol {
            for col in 0..k {
                complex.push((mean, Stability::Dynamical, basis.column(col).into_owned()));
            }
            continue;
        }
        let lambda = C64::new(mean.re, 0.0);
        let gram = eta_gram(&basis, n);
        let eig = SymmetricEigen::new(gram.clone());
        let positive = eig.eigenvalues.iter().filter(|g| **g > 1e-10).count();
        let flag = if lambda.re < -real_tol {
            Stability::NegativeFrequency
        } else {
            Stability::Stable
        };
        if positive == k {
            // symplectic Gram-Schmidt in input order: Y L^{-†}
            if let Some(ch) = Cholesky::new(gram.clone()) {
                let l_adj = ch.l().adjoint();
                for col in 0..k {
                    let mut e = DVector::zeros(k);
                    e[col] = C64::new(1.0, 0.0);
                    let coef = l_adj.solve_upper_triangular(&e).expect("nonsingular");
                    physical.push((lambda, flag, &basis * coef));
                }
                continue;
            }
        }
        for (idx, g) in eig.eigenvalues.iter().enumerate() {
            if *g > 1e-10 {
                let y = &basis * eig.eigenvectors.column(idx) * C64::new(1.0 / g.sqrt(), 0.0);
                physical.push((lambda, flag, y));
            }
        }
    }
    if physical.len() > n {
        return Err(Error::Normalization {
            mode: physical.len(),
            norm: f64::NAN,
        });
    }
    complex.sort_by(|a, b| {
        b.0.re
            .partial_cmp(&a.0.re)
            .unwrap_or(Ordering::Equal)
            .then(b.0.im.partial_cmp(&a.0.im).unwrap_or(Ordering::Equal))
    });
    let missing = n - physical.len();
    if complex.len() < missing {
        return Err(Error::Unstable {
            b: h.b_field().unwrap_or(f64::NAN),
            detail: format!(
                "only {} of {n} modes could be identified (exceptional point?)",
                physical.len() + complex.len()
            ),
        });
    }
    physical.extend(complex.into_iter().take(missing));
    Ok(sorted(physical, dim))
}

/// Orthonormal basis of the `k` right singular vectors of `D - λI` with the
/// smallest singular values.
fn null_space(d: &DMatrix<C64>, lambda: C64, k: usize) -> DMatrix<C64> {
    let dim = d.nrows();
    let shifted = d - DMatrix::from_diagonal_element(dim, dim, lambda);
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.sort_by(|&a, &b| {
        svd.singular_values[a]
            .partial_cmp(&svd.singular_values[b])
            .unwrap_or(Ordering::Equal)
    });
    let mut out = DMatrix::zeros(dim, k);
    for (c, &i) in idx.iter().take(k).enumerate() {
        let row = v_t.row(i);
        for r in 0..dim {
            out[(r, c)] = row[r].conj();
        }
    }
    out
}

fn eta_gram(y: &DMatrix<C64>, n: usize) -> DMatrix<C64> {
    let mut ey = y.clone();
    for i in n..2 * n {
        for j in 0..y.ncols() {
            ey[(i, j)] = -ey[(i, j)];
        }
    }
    let g = y.adjoint() * ey;
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}
