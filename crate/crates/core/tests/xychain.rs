use num_complex::Complex64;
use proptest::prelude::*;
use qlab_core::dense::{spin, DenseOperator};
use qlab_core::specfun::bessel_j;
use qlab_core::xychain::oracle::{full_hamiltonian, jordan_wigner, FiniteXyChain};
use qlab_core::xychain::{
    evolution_coefficient, gamma_estimate, limit_occupation, macro_observable, measurement_occupation, occupation,
    recurrence_coefficients, MacroState,
};

#[test]
fn taylor_series_matches_bessel_form() {
    // κt = 2 from several (κ, t) splits.
    for (kappa, t) in [(1.0, 2.0), (0.5, 4.0), (-2.0, -1.0)] {
        let c = recurrence_coefficients(70, kappa);
        for r in -6..=6 {
            let err = (c.taylor(r, t) - evolution_coefficient(r, t, kappa).unwrap()).norm();
            assert!(err < 1e-10, "κ={kappa} r={r}: {err}");
        }
    }
}

#[test]
fn coefficients_symmetric_with_bounded_support() {
    let c = recurrence_coefficients(12, 0.7);
    for m in 0..=12usize {
        for p in -15i64..=15 {
            assert_eq!(c.get(m, -p), c.get(m, p));
            if p.unsigned_abs() as usize > m {
                assert_eq!(c.get(m, p), 0.0);
            }
        }
    }
}

#[test]
fn one_particle_unitarity() {
    for x in [0.3, 10.0, 27.5, 50.0] {
        let top = x as i64 + 60;
        let s: f64 = (-top..=top).map(|r| evolution_coefficient(r, x, 1.0).unwrap().norm_sqr()).sum();
        assert!((s - 1.0).abs() < 1e-10, "κt={x}");
    }
}

#[test]
fn central_site_closed_form() {
    for t in [0.1, 1.0, 3.7, 12.0, 80.0, 1000.0] {
        let j0 = bessel_j(0, t).unwrap();
        assert!((occupation(0, t, 1.0).unwrap() - 0.5 * (1.0 - j0 * j0)).abs() < 1e-10);
    }
}

#[test]
fn long_time_half_filling() {
    for j in -3..=3 {
        assert!((occupation(j, 1e3, 1.0).unwrap() - 0.5).abs() < 1e-3, "j={j}");
    }
}

#[test]
fn particle_hole_symmetry() {
    // n_j + n_{−1−j} = 1 for the step state.
    for j in -5..=5 {
        let s = occupation(j, 4.3, 1.0).unwrap() + occupation(-1 - j, 4.3, 1.0).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }
}

#[test]
fn oracle_matches_bessel_inside_light_cone() {
    let chain = FiniteXyChain::new(-5, 10, 1.0).unwrap();
    assert_eq!(chain.sector_dim(), 252);
    for k in 0..=8 {
        let t = 0.25 * k as f64;
        let dense = chain.occupations(t).unwrap();
        for (label, n) in chain.labels().into_iter().zip(dense) {
            if (-3..=2).contains(&label) {
                let err = (n - occupation(label, t, 1.0).unwrap()).abs();
                assert!(err < 1e-3, "j={label} t={t}: {err}");
            }
        }
    }
}

#[test]
fn sector_evolution_agrees_with_full_space() {
    let n_sites = 6;
    let chain = FiniteXyChain::new(-3, n_sites, 0.8).unwrap();
    let h = full_hamiltonian(n_sites, 0.8);
    let psi = qlab_core::dense::evolve(&h, &chain.initial_vector(), 1.7).unwrap();
    let sector = chain.occupations(1.7).unwrap();
    for s in 1..=n_sites {
        let full: f64 =
            psi.iter().enumerate().filter(|(i, _)| spin::is_up(n_sites, *i, s)).map(|(_, a)| a.norm_sqr()).sum();
        assert!((full - sector[s - 1]).abs() < 1e-12);
    }
}

#[test]
fn jordan_wigner_fermions() {
    let n_sites = 5;
    let b: Vec<DenseOperator> = (1..=n_sites).map(|s| jordan_wigner(n_sites, s)).collect();
    let id = DenseOperator::identity(1 << n_sites);
    for (r, br) in b.iter().enumerate() {
        for (s, bs) in b.iter().enumerate() {
            let anti = &br.matmul(&bs.adjoint()).unwrap() + &bs.adjoint().matmul(br).unwrap();
            let want = if r == s { id.clone() } else { DenseOperator::zeros(1 << n_sites) };
            assert_eq!((&anti - &want).frobenius_norm(), 0.0);
        }
    }
    // Nearest-neighbour hopping keeps its form in the fermion picture.
    let mut hb = DenseOperator::zeros(1 << n_sites);
    for s in 0..n_sites - 1 {
        let hop = b[s].adjoint().matmul(&b[s + 1]).unwrap();
        hb = &hb + &(&(&hop + &hop.adjoint()) * 0.5);
    }
    assert!((&hb - &full_hamiltonian(n_sites, 1.0)).frobenius_norm() < 1e-15);
}

#[test]
fn cross_terms_vanish_on_step_state() {
    let chain = FiniteXyChain::new(-5, 10, 1.0).unwrap();
    assert!(chain.max_cross_term().unwrap() < 1e-12);
}

#[test]
fn measurement_examples() {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for j in -3..=3 {
        let still = measurement_occupation(j, 7.0, 1.0, zero, one).unwrap();
        assert_eq!(still, if j <= -1 { 1.0 } else { 0.0 });
        assert!((measurement_occupation(j, 1e3, 1.0, one, zero).unwrap() - 0.5).abs() < 1e-3);
    }
    assert!((limit_occupation(0, h, h).unwrap() - 0.25).abs() < 1e-15);
    assert!((macro_observable(MacroState::Final, one).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(macro_observable(MacroState::Final, zero).unwrap(), 0.0);
    assert_eq!(gamma_estimate(0.0, 1.0, h, h, 10).unwrap(), 0.0);
}

proptest! {
    #[test]
    fn occupation_in_unit_interval(j in -20i64..20, t in 0.0f64..200.0) {
        let n = occupation(j, t, 1.0).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&n));
    }

    #[test]
    fn unitarity_up_to_fifty(x in 0.0f64..50.0) {
        let top = x as i64 + 60;
        let s: f64 = (-top..=top).map(|r| evolution_coefficient(r, x, 1.0).unwrap().norm_sqr()).sum();
        prop_assert!((s - 1.0).abs() < 1e-10);
    }

    #[test]
    fn measurement_is_convex_combination(
        theta in 0.0f64..std::f64::consts::FRAC_PI_2,
        phase in 0.0f64..std::f64::consts::TAU,
        j in -6i64..6,
        t in 0.0f64..30.0,
    ) {
        let cp = Complex64::from_polar(theta.cos(), phase);
        let cm = Complex64::new(theta.sin(), 0.0);
        let m = measurement_occupation(j, t, 1.0, cp, cm).unwrap();
        let want = theta.cos().powi(2) * occupation(j, t, 1.0).unwrap()
            + theta.sin().powi(2) * if j <= -1 { 1.0 } else { 0.0 };
        prop_assert!((m - want).abs() < 1e-14);
    }
}
