use nalgebra::DMatrix;
use num_complex::Complex64;
use passive_spectra::interlace::inverse_system;
use passive_spectra::linops::{self, invariant_subspace};
use passive_spectra::model::matching_distance;
use passive_spectra::passivity::{are_residual, extremal_solutions, hamiltonian, spectral_zeros};
use passive_spectra::random::{strictly_passive_system, symmetric_system};
use passive_spectra::{PortSign, Realization};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sign_for(seed: u64) -> PortSign {
    if seed % 2 == 0 {
        PortSign::Plus
    } else {
        PortSign::Minus
    }
}

#[test]
fn symmetric_systems_have_real_spectral_zeros() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for k in 0..500u64 {
        let r = symmetric_system(&mut rng, 10, sign_for(k));
        let s = spectral_zeros(&r).unwrap();
        let scale = s.values().iter().fold(1.0f64, |a, z| a.max(z.norm()));
        assert!(s.max_imag() <= 1e-8 * scale, "system {k}: max imag {}", s.max_imag());
    }
}

#[test]
fn hamiltonian_is_shared_with_the_inverse_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..100u64 {
        let r = if k % 3 == 0 {
            strictly_passive_system(&mut rng, 8)
        } else {
            symmetric_system(&mut rng, 8, sign_for(k))
        };
        let y = inverse_system(&r).unwrap();
        let (h, hy) = (hamiltonian(&r).unwrap(), hamiltonian(&y).unwrap());
        let scale = h.matrix.amax().max(1.0);
        assert!((&h.matrix - &hy.matrix).amax() <= 1e-10 * scale, "system {k}");

        let (s, sy) = (spectral_zeros(&r).unwrap(), spectral_zeros(&y).unwrap());
        assert!(matching_distance(s.values(), sy.values()) <= 1e-8);

        let (p, py) = (extremal_solutions(&r).unwrap(), extremal_solutions(&y).unwrap());
        let kscale = p.k_max.amax().max(1.0);
        assert!((&p.k_max - &py.k_max).amax() <= 1e-8 * kscale);
        assert!((&p.k_min - &py.k_min).amax() <= 1e-8 * kscale);
    }
}

/// Every `K` from a Lagrangian selection of real spectral zeros (one of
/// each `±μ` pair) lies between the extremal solutions.
fn check_intermediate_solutions(r: &Realization) {
    let pair = extremal_solutions(r).unwrap();
    let h = hamiltonian(r).unwrap();
    let stable: Vec<f64> = spectral_zeros(r).unwrap().stable().iter().map(|z| z.re).collect();
    let n = stable.len();
    let tol = 1e-7 * (1.0 + pair.k_max.norm());
    for mask in 0..(1u32 << n) {
        let chosen: Vec<f64> = (0..n)
            .map(|i| if mask & (1 << i) != 0 { stable[i] } else { -stable[i] })
            .collect();
        let sel = invariant_subspace(&h.matrix, |z: Complex64| {
            chosen.iter().any(|&c| (z.re - c).abs() <= 1e-6 * (1.0 + c.abs()))
        })
        .unwrap();
        assert_eq!(sel.dim(), n);
        let k = match sel.riccati_solution() {
            Ok(k) => k,
            Err(_) => continue,
        };
        assert!(are_residual(r, &k).unwrap() <= 1e-6 * (1.0 + k.norm()));
        let lower = linops::sym_eig(&linops::symmetrize(&(&k - &pair.k_min))).unwrap();
        let upper = linops::sym_eig(&linops::symmetrize(&(&pair.k_max - &k))).unwrap();
        assert!(
            lower.eigenvalues[0] >= -tol,
            "K below K_min by {}",
            lower.eigenvalues[0]
        );
        assert!(
            upper.eigenvalues[0] >= -tol,
            "K above K_max by {}",
            upper.eigenvalues[0]
        );
    }
}

#[test]
fn intermediate_riccati_solutions_are_ordered() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 40 {
        let r = symmetric_system(&mut rng, 3, sign_for(checked));
        check_intermediate_solutions(&r);
        checked += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, rng_seed: RngSeed::Fixed(0x9a55), ..ProptestConfig::default() })]

    #[test]
    fn spectrum_is_closed_under_negation_and_conjugation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = strictly_passive_system(&mut rng, 8);
        let s = spectral_zeros(&r).unwrap();
        let neg: Vec<Complex64> = s.values().iter().map(|z| -z).collect();
        let conj: Vec<Complex64> = s.values().iter().map(|z| z.conj()).collect();
        prop_assert!(matching_distance(s.values(), &neg) <= 1e-8);
        prop_assert!(matching_distance(s.values(), &conj) <= 1e-8);
        prop_assert_eq!(s.stable().len(), r.n());
    }

    #[test]
    fn extremal_residuals_are_small(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = if seed % 3 == 0 {
            symmetric_system(&mut rng, 8, sign_for(seed / 3))
        } else {
            strictly_passive_system(&mut rng, 8)
        };
        let p = extremal_solutions(&r).unwrap();
        prop_assert!(p.residual_min <= 1e-8 * (1.0 + p.k_min.norm()));
        prop_assert!(p.residual_max <= 1e-8 * (1.0 + p.k_max.norm()));
        let gap = linops::sym_eig(&linops::symmetrize(&(&p.k_max - &p.k_min))).unwrap();
        prop_assert!(gap.eigenvalues[0] >= -1e-8 * p.k_max.norm());
    }

    #[test]
    fn symmetric_storage_is_reciprocal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = symmetric_system(&mut rng, 8, sign_for(seed));
        let p = extremal_solutions(&r).unwrap();
        let n = r.n();
        prop_assert!((&p.k_max * &p.k_min - DMatrix::identity(n, n)).norm() <= 1e-8);
    }
}
