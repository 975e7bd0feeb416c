mod common;

use std::f64::consts::TAU;

use common::{linspace, random_profile};
use nalgebra::DMatrix;
use proptest::prelude::*;
use usc_core::hopfield::{
    build_hamiltonian, diagonalize, ground_state_correlations, vacuum_correlations, PhotonMode,
};
use usc_core::profile::FourierTerm;
use usc_core::toy::ToyModel;
use usc_core::{
    CouplingSet, FourierField, HamiltonianFlags, HopfieldMatrix, InPlaneField, ModeLabel, ModeProfile,
    PhysParams, Polarization, TermSelection, C64,
};

fn bright_sorted(h: &HopfieldMatrix) -> Vec<f64> {
    let sol = diagonalize(h).unwrap();
    let w = sol.omegas();
    let mut out: Vec<f64> = (0..sol.n_modes())
        .filter(|&l| sol.photon_weight(l) > 1e-9)
        .map(|l| w[l])
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symplectic_norm_is_one(
        seeds in prop::collection::vec(any::<u64>(), 1..4),
        b in 0.05..4.0f64,
        sel in prop::sample::select(vec![TermSelection::Full, TermSelection::Decoupled, TermSelection::Rwa, TermSelection::A2Only]),
    ) {
        let profiles: Vec<ModeProfile> = seeds
            .iter()
            .enumerate()
            .map(|(i, &s)| random_profile(s, i + 1, Polarization::Y, 0.3e12 + 0.07e12 * i as f64))
            .collect();
        let cs = CouplingSet::from_profiles(&profiles, &PhysParams::default(), b).unwrap();
        let sol = diagonalize(&build_hamiltonian(&cs, sel.flags()).unwrap()).unwrap();
        prop_assert!(sol.is_stable());
        for l in 0..sol.n_modes() {
            prop_assert!((sol.symplectic_norm(l) - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn single_mode_spectrum_ignores_global_phase(seed in any::<u64>(), theta in 0.0..TAU, b in 0.2..2.0f64) {
        let prof = random_profile(seed, 1, Polarization::Y, 0.35e12);
        let InPlaneField::Fourier(f) = &prof.field else { unreachable!() };
        let rotated = ModeProfile { field: InPlaneField::Fourier(f.scaled(C64::from_polar(1.0, theta))), ..prof.clone() };
        let p = PhysParams::default();
        let w = |pr: ModeProfile| {
            let cs = CouplingSet::from_profiles(&[pr], &p, b).unwrap();
            diagonalize(&build_hamiltonian(&cs, HamiltonianFlags::default()).unwrap()).unwrap().omegas()
        };
        for (a, c) in w(prof).iter().zip(w(rotated)) {
            prop_assert!((a - c).abs() <= 1e-10 * a);
        }
    }

    #[test]
    fn correlations_match_fock_space(
        w1 in 0.8..1.2f64, w2 in 0.8..1.2f64,
        a12 in (-0.2..0.2f64, -0.2..0.2f64),
        b11 in -0.15..0.15f64, b22 in -0.15..0.15f64, b12 in (-0.1..0.1f64, -0.1..0.1f64),
    ) {
        let a = DMatrix::from_row_slice(2, 2, &[
            C64::new(w1, 0.0), C64::new(a12.0, a12.1),
            C64::new(a12.0, -a12.1), C64::new(w2, 0.0),
        ]);
        let bm = DMatrix::from_row_slice(2, 2, &[
            C64::new(b11, 0.0), C64::new(b12.0, b12.1),
            C64::new(b12.0, b12.1), C64::new(b22, 0.0),
        ]);
        let photons = (1..=2)
            .map(|p| PhotonMode { label: ModeLabel::new(p, Polarization::Y), omega: 1.0, quality: 1.0 })
            .collect();
        let h = HopfieldMatrix::from_blocks(photons, vec![], &a, &bm, 1.0, HamiltonianFlags::default()).unwrap();
        let sol = diagonalize(&h).unwrap();
        prop_assume!(sol.is_stable());

        let fock = FockOracle::new(&a, &bm, 16);
        let c0 = vacuum_correlations(&sol).unwrap();
        let e0 = fock.correlations(0);
        prop_assert!((&c0 - &e0).norm() <= 1e-8, "ground state:\n{}\n{}", c0, e0);

        // lowest quasiparticle singly occupied is the first excited state
        let w = sol.omegas();
        let low = if w[0] <= w[1] { 0 } else { 1 };
        prop_assume!((w[0] - w[1]).abs() > 1e-3);
        let mut occ = vec![0.0; 2];
        occ[low] = 1.0;
        let c1 = ground_state_correlations(&sol, &occ).unwrap();
        let e1 = fock.correlations(1);
        prop_assert!((&c1 - &e1).norm() <= 1e-8, "one quasiparticle:\n{}\n{}", c1, e1);
        prop_assert!((fock.gap() - w[low]).abs() <= 1e-9);
    }
}

/// Exact diagonalization of `½ Φ†MΦ` for two bosons in a truncated Fock space.
struct FockOracle {
    n: usize,
    eig: nalgebra::SymmetricEigen<C64, nalgebra::Dyn>,
    order: Vec<usize>,
}

/// `a_i |n⟩` for two modes; `None` when it annihilates the state.
fn lower(n: [usize; 2], i: usize) -> Option<([usize; 2], f64)> {
    (n[i] > 0).then(|| {
        let mut m = n;
        m[i] -= 1;
        (m, (n[i] as f64).sqrt())
    })
}

fn raise(n: [usize; 2], i: usize, cut: usize) -> Option<([usize; 2], f64)> {
    (n[i] + 1 < cut).then(|| {
        let mut m = n;
        m[i] += 1;
        (m, (m[i] as f64).sqrt())
    })
}

impl FockOracle {
    fn new(a: &DMatrix<C64>, b: &DMatrix<C64>, n: usize) -> Self {
        let idx = |s: [usize; 2]| s[0] * n + s[1];
        let mut h = DMatrix::<C64>::zeros(n * n, n * n);
        // H = Σ A_ij a_i†a_j + ½ Σ (B_ij a_i†a_j† + B*_ij a_i a_j), up to a constant
        for n1 in 0..n {
            for n2 in 0..n {
                let s = [n1, n2];
                for i in 0..2 {
                    for j in 0..2 {
                        if let Some((t, c1)) = lower(s, j) {
                            if let Some((u, c2)) = raise(t, i, n) {
                                h[(idx(u), idx(s))] += a[(i, j)] * c1 * c2;
                            }
                        }
                        if let Some((t, c1)) = raise(s, j, n) {
                            if let Some((u, c2)) = raise(t, i, n) {
                                h[(idx(u), idx(s))] += b[(i, j)] * (0.5 * c1 * c2);
                            }
                        }
                        if let Some((t, c1)) = lower(s, j) {
                            if let Some((u, c2)) = lower(t, i) {
                                h[(idx(u), idx(s))] += b[(i, j)].conj() * (0.5 * c1 * c2);
                            }
                        }
                    }
                }
            }
        }
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..n * n).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
        Self { n, eig, order }
    }

    fn gap(&self) -> f64 {
        self.eig.eigenvalues[self.order[1]] - self.eig.eigenvalues[self.order[0]]
    }

    /// `⟨a_p† a_q⟩ = ⟨a_p ψ | a_q ψ⟩` in eigenstate number `level`.
    fn correlations(&self, level: usize) -> DMatrix<C64> {
        let n = self.n;
        let psi = self.eig.eigenvectors.column(self.order[level]);
        let apply = |i: usize| {
            let mut out = vec![C64::new(0.0, 0.0); n * n];
            for n1 in 0..n {
                for n2 in 0..n {
                    if let Some((t, c)) = lower([n1, n2], i) {
                        out[t[0] * n + t[1]] += psi[n1 * n + n2] * c;
                    }
                }
            }
            out
        };
        let v = [apply(0), apply(1)];
        DMatrix::from_fn(2, 2, |p, q| v[p].iter().zip(&v[q]).map(|(x, y)| x.conj() * y).sum())
    }
}

fn disjoint_profile(p: usize, m: [[i32; 2]; 2]) -> ModeProfile {
    let c = C64::new(0.0, -0.25);
    let terms = m.iter().flat_map(|&m| {
        [
            FourierTerm { m, ex: C64::new(0.0, 0.0), ey: c },
            FourierTerm { m: [-m[0], -m[1]], ex: C64::new(0.0, 0.0), ey: c.conj() },
        ]
    });
    ModeProfile::new(
        ModeLabel::new(p, Polarization::Y),
        TAU * [0.339e12, 0.384e12][p - 1],
        70.0,
        InPlaneField::Fourier(FourierField::new(terms)),
    )
}

#[test]
fn zero_overlap_full_equals_decoupled() {
    let prof = [
        disjoint_profile(1, [[1, 1], [1, -1]]),
        disjoint_profile(2, [[2, 0], [0, 2]]),
    ];
    let p = PhysParams::default();
    for b in [0.3, 0.81, 0.9, 1.5] {
        let cs = CouplingSet::from_profiles(&prof, &p, b).unwrap();
        assert_eq!(cs.overlap_xi_at(0, 1).unwrap().norm(), 0.0);
        let full = bright_sorted(&build_hamiltonian(&cs, TermSelection::Full.flags()).unwrap());
        let dec = bright_sorted(&build_hamiltonian(&cs, TermSelection::Decoupled.flags()).unwrap());
        assert_eq!(full.len(), dec.len());
        for (x, y) in full.iter().zip(&dec) {
            assert!((x - y).abs() <= 1e-10 * y, "B={b}: {x} vs {y}");
        }
    }
}

#[test]
fn a2_terms_keep_spectrum_real_up_to_ten_tesla() {
    let p = PhysParams::default();
    for eps in [0.0, 0.5, 1.0] {
        let toy = ToyModel::new(eps);
        for sel in [TermSelection::Full, TermSelection::Decoupled] {
            for b in linspace(1e-3, 10.0, 101) {
                let cs = toy.coupling_set(&p, b).unwrap();
                let sol = diagonalize(&build_hamiltonian(&cs, sel.flags()).unwrap()).unwrap();
                assert!(sol.is_stable(), "eps={eps} {sel:?} B={b}");
                assert!(sol.omegas().iter().all(|w| *w >= 0.0));
            }
        }
    }
}

#[test]
fn a2_only_correlations_do_not_depend_on_field() {
    let p = PhysParams::default();
    let toy = ToyModel::new(0.6);
    let c: Vec<DMatrix<C64>> = linspace(0.1, 3.0, 30)
        .into_iter()
        .map(|b| {
            let cs = toy.coupling_set(&p, b).unwrap();
            vacuum_correlations(&diagonalize(&build_hamiltonian(&cs, TermSelection::A2Only.flags()).unwrap()).unwrap())
                .unwrap()
        })
        .collect();
    for i in 0..2 {
        for j in 0..2 {
            let v: Vec<f64> = c.iter().map(|m| m[(i, j)].norm()).collect();
            let spread = v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
            assert!(spread < 1e-12, "({i},{j}): {spread}");
            assert!(v[0] > 0.0);
        }
    }
    // H_int alone carries the field dependence
    let hint: Vec<f64> = [0.5, 0.81, 1.2]
        .iter()
        .map(|&b| {
            let cs = toy.coupling_set(&p, b).unwrap();
            let sol = diagonalize(&build_hamiltonian(&cs, TermSelection::HintOnly.flags()).unwrap()).unwrap();
            vacuum_correlations(&sol).unwrap()[(0, 1)].norm()
        })
        .collect();
    assert!((hint[0] - hint[1]).abs() > 1e-6 && (hint[1] - hint[2]).abs() > 1e-6);
}
