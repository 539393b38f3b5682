//! Invariants that must hold for arbitrary inputs.

mod common;

use common::*;
use proptest::prelude::*;
use spinring_core::linalg::{eigh, kron, partial_trace, ComplexMatrix, C64};
use spinring_core::measures::{concurrence, entanglement_of_formation};
use spinring_core::model::{build_hamiltonian, pauli_at_site, Boundary, ModelSpec, Pauli};
use spinring_core::thermal::{gibbs_state, ground_state};

fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    &(a * b) - &(b * a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigh_reconstructs_random_hermitian(seed in any::<u64>(), dim in 1usize..=64) {
        let mut r = rng(seed);
        let m = random_hermitian(&mut r, dim);
        let d = eigh(&m).unwrap();
        let scale = m.max_abs().max(1.0);
        prop_assert!(d.reconstruct().max_abs_diff(&m) <= 1e-10 * scale);
        let v = &d.eigenvectors;
        prop_assert!((&v.dagger() * v).max_abs_diff(&ComplexMatrix::identity(dim)) <= 1e-10);
        prop_assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn kron_trace_factorizes(seed in any::<u64>(), da in 1usize..=6, db in 1usize..=6) {
        let mut r = rng(seed);
        let a = random_hermitian(&mut r, da);
        let b = random_hermitian(&mut r, db);
        let lhs = kron(&a, &b).unwrap().trace();
        prop_assert!((lhs - a.trace() * b.trace()).norm() <= 1e-12);
    }

    #[test]
    fn partial_trace_of_product_state(seed in any::<u64>(), left in 1usize..=3, right in 1usize..=3) {
        let mut r = rng(seed);
        let rho_a = random_density(&mut r, 1 << left);
        let rho_b = random_hermitian(&mut r, 1 << right);
        let joint = kron(&rho_a, &rho_b).unwrap();
        let keep: Vec<usize> = (0..left).collect();
        let reduced = partial_trace(&joint, &keep, left + right).unwrap();
        prop_assert!(reduced.max_abs_diff(&rho_a.scale(rho_b.trace())) <= 1e-12);
        let traced = partial_trace(&joint, &(left..left + right).collect::<Vec<_>>(), left + right).unwrap();
        prop_assert!((traced.trace() - joint.trace()).norm() <= 1e-12);
    }

    #[test]
    fn exp_times_exp_of_negative_is_identity(seed in any::<u64>(), dim in 1usize..=16) {
        let mut r = rng(seed);
        let m = random_hermitian(&mut r, dim);
        let spread = eigh(&m).unwrap().eigenvalues.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        let m = m.scale_real(if spread > 0.0 { 5.0 / spread } else { 1.0 });
        let d = eigh(&m).unwrap();
        let e_plus = d.apply(f64::exp).unwrap();
        let e_minus = d.apply(|x| (-x).exp()).unwrap();
        prop_assert!((&e_plus * &e_minus).max_abs_diff(&ComplexMatrix::identity(dim)) <= 1e-9);
    }

    #[test]
    fn hamiltonian_conserves_magnetization(
        n in 2usize..=6,
        coupling in -2.0f64..2.0,
        zz in -2.0f64..2.0,
        fields in prop::collection::vec(-2.0f64..2.0, 6),
        open in any::<bool>(),
    ) {
        let boundary = if open { Boundary::Open } else { Boundary::Cyclic };
        let spec = ModelSpec::new(n, coupling, zz, fields[..n].to_vec(), boundary).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let mut mz = ComplexMatrix::zeros(spec.dim());
        for s in 0..n {
            mz = &mz + &pauli_at_site(Pauli::Z, s, n).unwrap();
        }
        prop_assert!(commutator(&h, &mz).max_abs() <= 1e-12);
        prop_assert!(h.hermiticity_error() <= 1e-12);
        prop_assert!(h.is_real());
    }

    #[test]
    fn gibbs_states_are_valid(seed in any::<u64>(), dim in 2usize..=16, t in 0.01f64..50.0) {
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, dim).scale_real(3.0);
        let state = gibbs_state(&h, t).unwrap();
        prop_assert!((state.rho.trace().re - 1.0).abs() <= 1e-10);
        prop_assert!(state.rho.hermiticity_error() <= 1e-10);
        prop_assert!(eigh(&state.rho).unwrap().eigenvalues[0] >= -1e-10);
    }

    #[test]
    fn gibbs_state_ignores_energy_shift(seed in any::<u64>(), dim in 2usize..=12, c in -50.0f64..50.0, t in 0.1f64..10.0) {
        let mut r = rng(seed);
        let h = random_real_symmetric(&mut r, dim);
        let shifted = &h + &ComplexMatrix::identity(dim).scale_real(c);
        let a = gibbs_state(&h, t).unwrap().rho;
        let b = gibbs_state(&shifted, t).unwrap().rho;
        prop_assert!(a.max_abs_diff(&b) <= 1e-12);
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, 4);
        let u = kron(&random_unitary(&mut r, 2), &random_unitary(&mut r, 2)).unwrap();
        let before = concurrence(&rho).unwrap().concurrence;
        let after = concurrence(&conjugate(&u, &rho)).unwrap().concurrence;
        prop_assert!((before - after).abs() <= 1e-9);
    }

    #[test]
    fn separable_mixtures_have_zero_concurrence(seed in any::<u64>(), terms in 1usize..=6) {
        let mut r = rng(seed);
        let mut rho = ComplexMatrix::zeros(4);
        let weights: Vec<f64> = (0..terms).map(|_| rand::Rng::gen_range(&mut r, 0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for w in weights {
            let a = random_density(&mut r, 2);
            let b = random_density(&mut r, 2);
            rho = &rho + &kron(&a, &b).unwrap().scale_real(w / total);
        }
        let report = concurrence(&rho.hermitian_part()).unwrap();
        prop_assert!(report.concurrence <= 1e-9);
        prop_assert!(report.lambdas.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(report.lambdas.iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn formation_is_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let e_lo = entanglement_of_formation(lo).unwrap();
        let e_hi = entanglement_of_formation(hi).unwrap();
        prop_assert!(e_lo <= e_hi + 1e-15);
        prop_assert!((0.0..=1.0).contains(&e_lo));
    }
}

#[test]
fn paulis_on_different_sites_commute() {
    let n = 4;
    let all = [Pauli::X, Pauli::Y, Pauli::Z];
    for m in 0..n {
        for k in 0..n {
            if m == k {
                continue;
            }
            for a in all {
                for b in all {
                    let sa = pauli_at_site(a, m, n).unwrap();
                    let sb = pauli_at_site(b, k, n).unwrap();
                    assert!(commutator(&sa, &sb).max_abs() <= 1e-14);
                }
            }
        }
    }
}

#[test]
fn odd_ring_spectrum_depends_on_coupling_sign() {
    let spectrum = |j: f64| {
        let spec = ModelSpec::xx_ring(3, j, 0.0).unwrap();
        eigh(&build_hamiltonian(&spec).unwrap())
            .unwrap()
            .eigenvalues
    };
    let (plus, minus) = (spectrum(1.0), spectrum(-1.0));
    let max_gap = plus
        .iter()
        .zip(&minus)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(max_gap > 0.5, "{plus:?} vs {minus:?}");
}

#[test]
fn even_ring_spectrum_is_sign_symmetric() {
    let spectrum = |j: f64| {
        let spec = ModelSpec::xx_ring(4, j, 0.0).unwrap();
        eigh(&build_hamiltonian(&spec).unwrap())
            .unwrap()
            .eigenvalues
    };
    let (plus, minus) = (spectrum(1.0), spectrum(-1.0));
    for (a, b) in plus.iter().zip(&minus) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn gibbs_approaches_maximally_mixed_monotonically() {
    let mut r = rng(7);
    for dim in [2, 4, 8] {
        let h = random_hermitian(&mut r, dim);
        let mixed = ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64);
        let distances: Vec<f64> = [1.0, 10.0, 100.0, 1e4]
            .iter()
            .map(|&t| gibbs_state(&h, t).unwrap().rho.max_abs_diff(&mixed))
            .collect();
        assert!(distances.windows(2).all(|w| w[1] < w[0]), "{distances:?}");
    }
}

#[test]
fn low_temperature_limit_matches_ground_state() {
    let mut r = rng(11);
    let mut hamiltonians: Vec<ComplexMatrix> =
        (0..5).map(|_| random_hermitian(&mut r, 6)).collect();
    // Degenerate ground space: the 3-site ferromagnetic ring at zero field.
    hamiltonians.push(build_hamiltonian(&ModelSpec::xx_ring(3, 1.0, 0.0).unwrap()).unwrap());
    for h in hamiltonians {
        let e = eigh(&h).unwrap().eigenvalues;
        let g = ground_state(&h).unwrap();
        let degeneracy = e.iter().filter(|&&x| x - e[0] < 1e-8).count();
        let gap = e[degeneracy] - e[0];
        let cold = gibbs_state(&h, 1e-3 * gap).unwrap();
        assert!(cold.rho.max_abs_diff(&g.rho) <= 1e-6);
    }
}

#[test]
fn pure_states_give_rank_one_ground_projector() {
    let h = build_hamiltonian(&ModelSpec::xx_ring(2, 1.0, 0.0).unwrap()).unwrap();
    let g = ground_state(&h).unwrap();
    assert!(((&g.rho * &g.rho).max_abs_diff(&g.rho)) < 1e-14);
    assert!((g.rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-14);
}
