mod common;

use common::{random_fourier, random_profile};
use proptest::prelude::*;
use usc_core::profile::{fourier_decompose, toy_mode_profile};
use usc_core::{CouplingSet, InPlaneField, ModeLabel, ModeProfile, PhysParams, Polarization};

fn set(seeds: &[u64], b: f64) -> CouplingSet {
    let sig = [Polarization::Y, Polarization::X, Polarization::Y];
    let profiles: Vec<ModeProfile> = seeds
        .iter()
        .enumerate()
        .map(|(i, &s)| random_profile(s, i + 1, sig[i % 3], 0.3e12 + 0.05e12 * i as f64))
        .collect();
    CouplingSet::from_profiles(&profiles, &PhysParams::default(), b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn xi_is_hermitian_with_unit_diagonal(seeds in prop::collection::vec(any::<u64>(), 2..4), b in 0.1..3.0f64) {
        let cs = set(&seeds, b);
        let xi = cs.xi_matrix().unwrap();
        for i in 0..cs.len() {
            prop_assert_eq!(xi[(i, i)].re, 1.0);
            prop_assert_eq!(xi[(i, i)].im, 0.0);
            for j in 0..cs.len() {
                prop_assert!((xi[(i, j)] - xi[(j, i)].conj()).norm() <= 1e-12);
                prop_assert!(xi[(i, j)].norm() <= 1.0 + 1e-6);
            }
        }
    }

    #[test]
    fn grid_coupling_matches_fourier_sum(seed in any::<u64>()) {
        let f = random_fourier(seed, 2, Polarization::Y);
        let four = ModeProfile::new(ModeLabel::new(1, Polarization::Y), 2e12, 70.0, InPlaneField::Fourier(f.clone()));
        let grid = ModeProfile { field: InPlaneField::Grid(f.reconstruct(32, 32)), ..four.clone() };
        let p = PhysParams::default();
        let a = CouplingSet::from_profiles(&[four], &p, 1.0).unwrap().effective_coupling_at(0);
        let b = CouplingSet::from_profiles(&[grid], &p, 1.0).unwrap().effective_coupling_at(0);
        prop_assert!((a - b).abs() <= 1e-8 * a, "{} vs {}", a, b);
    }

    #[test]
    fn eta_diagonal_matches_effective_coupling(seeds in prop::collection::vec(any::<u64>(), 1..4), b in 0.1..3.0f64) {
        let cs = set(&seeds, b);
        for i in 0..cs.len() {
            let eta = cs.fom_eta_at(i, i).unwrap().magnitude();
            let om = cs.effective_coupling_at(i);
            let lhs = eta * eta * cs.omega_c() * cs.omegas()[i];
            prop_assert!((lhs - om * om).abs() <= 1e-10 * om * om);
        }
    }

    #[test]
    fn decompose_inverts_reconstruct(seed in any::<u64>()) {
        let f = random_fourier(seed, 2, Polarization::Y);
        let grid = ModeProfile::new(ModeLabel::new(1, Polarization::Y), 2e12, 70.0, InPlaneField::Grid(f.reconstruct(16, 16)));
        let back = fourier_decompose(&grid, 3, 0.0).unwrap();
        let InPlaneField::Fourier(g) = back.field else { panic!("not a Fourier field") };
        for t in g.terms() {
            let want = f.get(t.m).map_or(usc_core::C64::new(0.0, 0.0), |x| x.ey);
            prop_assert!((t.ey - want).norm() <= 1e-10, "{:?}: {} vs {}", t.m, t.ey, want);
        }
        for t in f.terms() {
            prop_assert!(g.get(t.m).is_some());
        }
    }
}

#[test]
fn toy_integrals_converge_under_grid_doubling() {
    let p = PhysParams::default();
    for eps in [0.0, 0.3, 0.8, 1.0] {
        let at = |n| {
            let prof = [toy_mode_profile(1, eps, n).unwrap(), toy_mode_profile(2, eps, n).unwrap()];
            let cs = CouplingSet::from_profiles(&prof, &p, 0.81).unwrap();
            (cs.effective_coupling_at(0), cs.overlap_xi_at(0, 1).unwrap().re)
        };
        let (o64, x64) = at(64);
        let (o128, x128) = at(128);
        assert!((o64 - o128).abs() <= 1e-6 * o128);
        assert!((x64 - x128).abs() <= 1e-6);
    }
}
