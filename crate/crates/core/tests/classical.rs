use std::f64::consts::PI;

use proptest::prelude::*;
use qlab_core::classical::fock_oracle;
use qlab_core::classical::*;
use qlab_core::{Complex64, Error};

fn point(q: f64, p: f64, lambda: f64) -> OrbitPoint {
    OrbitPoint::from_qp(q, p, lambda).unwrap()
}

#[test]
fn orbit_point_rejects_bad_scale() {
    assert!(OrbitPoint::new(Complex64::new(1.0, 0.0), 0.0).is_err());
    assert!(OrbitPoint::new(Complex64::new(1.0, 0.0), -0.5).is_err());
    assert!(OrbitPoint::new(Complex64::new(1.0, 0.0), f64::NAN).is_err());
}

#[test]
fn trajectories_start_at_z0() {
    let z0 = point(0.7, -0.2, 0.6);
    assert_eq!(quantum_trajectory(&z0, 0.0, 1.3).unwrap(), z0.z);
    assert_eq!(classical_trajectory(&z0, 0.0, 1.3), z0.z);
}

#[test]
fn quantum_trajectory_rejects_zero_renormalization() {
    assert!(matches!(quantum_trajectory(&point(1.0, 0.0, 0.5), 1.0, 0.0), Err(Error::Domain(_))));
}

#[test]
fn quantum_motion_is_on_tangent_circle() {
    let z0 = point(0.4, 0.9, 0.7);
    let a = 2.0;
    let (centre, radius) = quantum_circle(&z0);
    let f = orbit_energy(&z0, a);
    assert!((radius - f / a * z0.z.norm()).abs() < 1e-15);
    for k in 0..50 {
        let z = quantum_trajectory(&z0, 0.173 * k as f64, a).unwrap();
        assert!(((z - centre).norm() - radius).abs() < 1e-13);
        // The classical circle is centred at the origin.
        let zc = classical_trajectory(&z0, 0.173 * k as f64, a);
        assert!((zc.norm() - z0.z.norm()).abs() < 1e-13);
    }
    assert!(((z0.z - centre).norm() - radius).abs() < 1e-15);
}

#[test]
fn frequencies_differ() {
    let z0 = point(0.3, 0.1, 0.4);
    let a = 1.0;
    let f = orbit_energy(&z0, a);
    assert!(f < a);
    assert!(classical_period(&z0, a) > quantum_period(&z0, a));
    let origin = point(0.0, 0.0, 0.4);
    assert_eq!(orbit_energy(&origin, a), a);
}

#[test]
fn closed_form_periods_match_detected_returns() {
    let cases = [(point(0.5, 0.2, 0.5), 1.0), (point(-0.3, 0.6, 0.8), 2.5), (point(1.0, -1.0, 1.0), 0.7)];
    for (z0, a) in cases {
        let tq = quantum_period(&z0, a);
        let found = return_time(|t| quantum_trajectory(&z0, t, a).unwrap(), 1.5 * tq, tq / 64.0, 1e-8)
            .unwrap()
            .expect("quantum return");
        assert!((found - tq).abs() < 1e-6, "quantum: {found} vs {tq}");

        let tc = classical_period(&z0, a);
        let found = return_time(|t| classical_trajectory(&z0, t, a), 1.5 * tc, tc / 64.0, 1e-8)
            .unwrap()
            .expect("classical return");
        assert!((found - tc).abs() < 1e-6, "classical: {found} vs {tc}");
    }
}

#[test]
fn return_time_reports_absence() {
    let z0 = point(0.5, 0.0, 0.5);
    let tq = quantum_period(&z0, 1.0);
    let none = return_time(|t| quantum_trajectory(&z0, t, 1.0).unwrap(), 0.8 * tq, tq / 64.0, 1e-8).unwrap();
    assert!(none.is_none());
    assert!(return_time(|t| classical_trajectory(&z0, t, 1.0), 1.0, 0.0, 1e-8).is_err());
}

#[test]
fn fock_oracle_matches_closed_form() {
    let mut worst = 0.0f64;
    for (q, p, lambda, a) in [(0.5, 0.3, 0.5, 1.0), (1.2, -0.8, 0.6, 0.4), (0.0, 1.5, 0.9, 3.0), (2.0, 2.0, 1.0, 1.0)] {
        let z0 = point(q, p, lambda);
        assert!(z0.alpha_sqr() <= 10.0);
        for k in 0..12 {
            let t = 0.37 * k as f64;
            let oracle = fock_oracle::quantum_trajectory(&z0, t, a, fock_oracle::DEFAULT_N_MAX).unwrap();
            let exact = quantum_trajectory(&z0, t, a).unwrap();
            worst = worst.max((oracle - exact).norm());
        }
    }
    assert!(worst < 1e-6, "oracle deviates by {worst}");
}

#[test]
fn fock_truncation_is_negligible_up_to_ten() {
    let alpha = Complex64::from_polar(10f64.sqrt(), 0.7);
    assert!(fock_oracle::truncation_error(alpha, 60) < 1e-10);
    // Too few levels are refused rather than silently wrong.
    let z0 = point(4.0, 2.0, 1.0);
    assert!(fock_oracle::quantum_trajectory(&z0, 1.0, 1.0, 10).is_err());
}

#[test]
fn fock_oracle_classical_expectation_at_start() {
    // ⟨α|√2 λ a†|α⟩ = z before any evolution.
    let z0 = point(-0.4, 0.25, 0.3);
    let z = fock_oracle::quantum_trajectory(&z0, 0.0, 1.0, 60).unwrap();
    assert!((z - z0.z).norm() < 1e-12);
}

#[test]
fn critical_renormalization_formula() {
    let (lambda, b) = (0.5, 0.3);
    assert!((critical_renormalization(lambda, b) - 0.25 * (0.6f64).exp()).abs() < 1e-15);
    // At z̄z = b the energy f = a e^{−b/2λ²} equals λ².
    let z0 = OrbitPoint::new(Complex64::new(b.sqrt(), 0.0), lambda).unwrap();
    let f = orbit_energy(&z0, critical_renormalization(lambda, b));
    assert!((f - lambda * lambda).abs() < 1e-14);
}

#[test]
fn gaussian_packet_is_normalized() {
    for width in [1e-2, 0.3, 2.0] {
        let packet = SmearingPacket::gaussian(width, 801).unwrap();
        assert!((packet.second_moment() - 0.5 * width * width).abs() < 1e-12 * width * width.max(1.0));
    }
    assert!(SmearingPacket::from_samples(vec![0.0, 1.0, 2.0], vec![1.0, 1.0, 1.0]).is_err());
    assert!(SmearingPacket::gaussian(0.0, 101).is_err());
}

#[test]
fn constant_potential_is_unchanged() {
    let v = SampledPotential::from_fn(|_| 2.5, -5.0, 5.0, 101).unwrap();
    let packet = SmearingPacket::gaussian(0.4, 401).unwrap();
    for q in [-0.5, 0.0, 0.7] {
        assert!((smeared_potential(&v, &packet, q).unwrap() - 2.5).abs() < 1e-12);
    }
}

#[test]
fn harmonic_potential_gains_packet_variance() {
    let width = 0.3;
    let v = SampledPotential::from_fn(|q| q * q, -6.0, 6.0, 24_001).unwrap();
    let packet = SmearingPacket::gaussian(width, 1201).unwrap();
    for q in [-1.0, 0.0, 0.25, 2.0] {
        let expected = q * q + 0.5 * width * width;
        let got = smeared_potential(&v, &packet, q).unwrap();
        // Linear interpolation of q² overshoots by at most h²/4.
        assert!((got - expected).abs() < 1e-6, "q = {q}: {got} vs {expected}");
    }
}

#[test]
fn smearing_converges_as_width_shrinks() {
    let v = SampledPotential::from_fn(f64::cos, -4.0 * PI, 4.0 * PI, 80_001).unwrap();
    let mut previous = f64::INFINITY;
    for width in [0.5, 0.1, 1e-2] {
        let packet = SmearingPacket::gaussian(width, 801).unwrap();
        let mut worst = 0.0f64;
        for k in 0..=40 {
            let q = -3.0 + 0.15 * k as f64;
            let smeared = smeared_potential(&v, &packet, q).unwrap();
            worst = worst.max((smeared - q.cos()).abs());
            // cos q convolved with e^{−q′²/w²}/(w√π) is cos q e^{−w²/4}.
            assert!((smeared - q.cos() * (-0.25 * width * width).exp()).abs() < 1e-6);
        }
        assert!(worst < previous);
        previous = worst;
    }
    assert!(previous < 1e-3);
}

#[test]
fn packet_beyond_samples_is_an_error() {
    let v = SampledPotential::from_fn(f64::cos, -1.0, 1.0, 201).unwrap();
    let packet = SmearingPacket::gaussian(0.2, 201).unwrap();
    assert!(smeared_potential(&v, &packet, 0.0).is_err());
    let narrow = SmearingPacket::gaussian(0.01, 201).unwrap();
    assert!(smeared_potential(&v, &narrow, 0.5).is_ok());
    assert!(smeared_potential(&v, &narrow, 0.95).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smearing_preserves_bounds(
        c in 0.1f64..5.0,
        k in 0.2f64..4.0,
        shift in -3.0f64..3.0,
        width in 0.01f64..0.8,
        q in -2.0f64..2.0,
    ) {
        // 0 ≤ V ≤ c pointwise.
        let v = SampledPotential::from_fn(|x| c * (k * x + shift).sin().powi(2), -12.0, 12.0, 4001).unwrap();
        let packet = SmearingPacket::gaussian(width, 301).unwrap();
        let s = smeared_potential(&v, &packet, q).unwrap();
        prop_assert!(s >= 0.0);
        prop_assert!(s <= c * (1.0 + 1e-10));
    }

    #[test]
    fn circles_and_oracle(q in -2.0f64..2.0, p in -2.0f64..2.0, lambda in 0.45f64..1.0, a in 0.2f64..3.0, t in 0.0f64..20.0) {
        let z0 = OrbitPoint::from_qp(q, p, lambda).unwrap();
        prop_assume!(z0.alpha_sqr() <= 10.0);
        let zq = quantum_trajectory(&z0, t, a).unwrap();
        let zc = classical_trajectory(&z0, t, a);
        let (centre, radius) = quantum_circle(&z0);
        prop_assert!(((zq - centre).norm() - radius).abs() < 1e-12);
        prop_assert!((zc.norm() - z0.z.norm()).abs() < 1e-12);
        let oracle = fock_oracle::quantum_trajectory(&z0, t, a, 60).unwrap();
        prop_assert!((oracle - zq).norm() < 1e-6);
    }
}
