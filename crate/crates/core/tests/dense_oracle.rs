use num_complex::Complex64;
use proptest::prelude::*;
use qlab_core::dense::{
    build_full_chain_hamiltonian, build_island_hamiltonian, eigh, evolve, expectation, integral_of_motion,
    island_state, norm_sqr, spin, DenseOperator,
};
use std::f64::consts::PI;

fn normalized(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = norm_sqr(&v).sqrt();
    v.into_iter().map(|z| z / n).collect()
}

#[test]
fn island_spectrum_is_chebyshev() {
    for n in [2usize, 8, 17, 64] {
        let h = build_island_hamiltonian(n).unwrap();
        let e = eigh(&h).unwrap();
        let mut want: Vec<f64> = (1..=n).map(|j| 2.0 * (j as f64 * PI / (n + 1) as f64).cos()).collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in e.values.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "N={n}");
        }
        assert!(e.residual(&h) < 1e-10 * h.frobenius_norm());
    }
}

#[test]
fn integrals_of_motion_commute_with_chain() {
    let h = build_full_chain_hamiltonian(5).unwrap();
    for j in 1..5 {
        let g = integral_of_motion(5, j).unwrap();
        assert_eq!(g.commutator(&h).unwrap().frobenius_norm(), 0.0, "g_{j}");
    }
}

#[test]
fn vacuum_is_stationary() {
    let h = build_full_chain_hamiltonian(6).unwrap();
    let mut vac = vec![Complex64::new(0.0, 0.0); 1 << 6];
    vac[0] = Complex64::new(1.0, 0.0);
    assert_eq!(norm_sqr(&h.matvec(&vac).unwrap()), 0.0);
}

/// Sector label: the pattern of "down, up" adjacent pairs, which H preserves.
fn sector(n_sites: usize, index: usize) -> Vec<bool> {
    (1..n_sites).map(|j| !spin::is_up(n_sites, index, j) && spin::is_up(n_sites, index, j + 1)).collect()
}

#[test]
fn chain_block_diagonalizes_over_islands() {
    for n_sites in 3..=8 {
        let h = build_full_chain_hamiltonian(n_sites).unwrap();
        let dim = 1 << n_sites;
        for i in 0..dim {
            for j in 0..dim {
                if sector(n_sites, i) != sector(n_sites, j) {
                    assert_eq!(h.get(i, j), Complex64::new(0.0, 0.0), "n={n_sites} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn full_chain_island_sector_matches_island_hamiltonian() {
    // From |1⟩ the last site of an open chain can never flip, so the island
    // spans |1⟩..|n_sites−1⟩.
    let n_sites = 7;
    let h = build_full_chain_hamiltonian(n_sites).unwrap();
    let idx: Vec<usize> = (1..n_sites).map(|m| spin::product_index(n_sites, 1..=m)).collect();
    assert_eq!(h.leakage(&idx), 0.0);
    assert_eq!(h.restrict(&idx), build_island_hamiltonian(n_sites - 1).unwrap());
}

#[test]
fn occupations_of_island_and_vacuum() {
    let n_sites = 5;
    let one = island_state(n_sites, 1);
    let n1 = spin::embed(n_sites, &[(1, spin::up())]);
    assert!((expectation(&one, &n1).unwrap().re() - 1.0).abs() < 1e-15);
    let vac = island_state(n_sites, 0);
    for j in 1..=n_sites {
        let nj = spin::embed(n_sites, &[(j, spin::up())]);
        assert_eq!(expectation(&vac, &nj).unwrap().re(), 0.0);
    }
    let id = DenseOperator::identity(1 << n_sites);
    assert!((expectation(&one, &id).unwrap().re() - 1.0).abs() < 1e-15);
}

#[test]
fn evolution_at_zero_time_is_identity() {
    let h = build_island_hamiltonian(6).unwrap();
    let psi = normalized((0..6).map(|k| Complex64::new(k as f64 + 1.0, -(k as f64))).collect());
    let out = evolve(&h, &psi, 0.0).unwrap();
    for (a, b) in psi.iter().zip(&out) {
        assert!((a - b).norm() < 1e-14);
    }
}

#[test]
fn evolution_of_full_chain_stays_in_island() {
    let n_sites = 6;
    let h = build_full_chain_hamiltonian(n_sites).unwrap();
    let psi = evolve(&h, &island_state(n_sites, 1), 3.0).unwrap();
    let island: f64 = (1..n_sites).map(|m| psi[spin::product_index(n_sites, 1..=m)].norm_sqr()).sum();
    assert!((island - 1.0).abs() < 1e-12);
}

fn hermitian_strategy(n: usize) -> impl Strategy<Value = DenseOperator> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        let raw = DenseOperator::from_fn(n, |i, j| Complex64::new(v[i * n + j].0, v[i * n + j].1));
        &(&raw + &raw.adjoint()) * 0.5
    })
}

fn state_strategy(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| normalized(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn jacobi_residual_small(h in hermitian_strategy(9)) {
        let e = eigh(&h).unwrap();
        prop_assert!(e.residual(&h) < 1e-10 * h.frobenius_norm().max(1.0));
        let vtv = e.vectors.adjoint().matmul(&e.vectors).unwrap();
        prop_assert!((&vtv - &DenseOperator::identity(9)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn evolution_is_unitary_and_conserves_energy(
        h in hermitian_strategy(7),
        psi in state_strategy(7),
    ) {
        let e0 = expectation(&psi, &h).unwrap().re();
        for t in [0.5, 5.0, 50.0] {
            let out = evolve(&h, &psi, t).unwrap();
            prop_assert!((norm_sqr(&out) - 1.0).abs() < 1e-10);
            prop_assert!((expectation(&out, &h).unwrap().re() - e0).abs() < 1e-10);
        }
    }
}
