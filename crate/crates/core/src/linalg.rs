use nalgebra::DMatrix;

use crate::C64;

pub(crate) fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// Largest entry of `M - M†`.
pub(crate) fn hermitian_residual(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut r: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            r = r.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    r
}

/// Indefinite inner product `u† η v` with `η = diag(1ₙ, -1ₙ)`.
pub(crate) fn eta_inner(u: &[C64], v: &[C64]) -> C64 {
    let n = u.len() / 2;
    let mut s = zero();
    for k in 0..u.len() {
        let t = u[k].conj() * v[k];
        if k < n {
            s += t;
        } else {
            s -= t;
        }
    }
    s
}
