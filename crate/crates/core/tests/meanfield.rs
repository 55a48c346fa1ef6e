use std::f64::consts::PI;

use proptest::prelude::*;
use qlab_core::meanfield::*;
use qlab_core::Complex64;

fn pt(f: [f64; 3]) -> CoadjointPoint {
    CoadjointPoint(f)
}

fn basis(j: usize) -> [f64; 3] {
    let mut e = [0.0; 3];
    e[j] = 1.0;
    e
}

/// exp(M) by Taylor series after scaling by 2^−s, then squaring.
fn expm(m: &Mat2) -> Mat2 {
    let norm: f64 = m.0.iter().flatten().map(|z| z.norm()).sum();
    let s = norm.log2().ceil().max(0.0) as i32 + 4;
    let a = m.scale((0.5f64.powi(s)).into());
    let mut term = Mat2::identity();
    let mut sum = Mat2::identity();
    for k in 1..30 {
        term = term.mul(&a).scale((1.0 / k as f64).into());
        sum = sum.add(&term);
    }
    for _ in 0..s {
        sum = sum.mul(&sum);
    }
    sum
}

#[test]
fn structure_constants_are_lie() {
    for c in [StructureConstants::su2(), StructureConstants::so3()] {
        assert_eq!(c.antisymmetry_residual(), 0.0);
        assert!(c.jacobi_residual() < 1e-12);
    }
}

#[test]
fn coordinate_brackets() {
    let c = StructureConstants::su2();
    let f = [0.11, -0.27, 0.31];
    // {F_j, F_k} = −ε_{jkm}F_m; on so(3)*, {y_k, y_m} = −ε_{kmj}y_j.
    assert_eq!(berezin_bracket(&basis(0), &basis(1), &f, &c).unwrap(), -f[2]);
    assert_eq!(berezin_bracket(&basis(1), &basis(2), &f, &c).unwrap(), -f[0]);
    assert_eq!(berezin_bracket(&basis(2), &basis(0), &f, &c).unwrap(), -f[1]);
    assert_eq!(berezin_bracket(&basis(1), &basis(0), &f, &c).unwrap(), f[2]);
    for j in 0..3 {
        assert_eq!(berezin_bracket(&basis(j), &basis(j), &f, &StructureConstants::so3()).unwrap(), 0.0);
    }
    assert!(berezin_bracket(&[1.0], &basis(0), &f, &c).is_err());
}

#[test]
fn bcs_equations_of_motion() {
    // Ḟ₁ = 2(ε − λF₃)F₂, Ḟ₂ = −2(ε − λF₃)F₁, Ḟ₃ = 0.
    let p = BcsParams::new(0.25, 1.0, 0.2).unwrap();
    let c = StructureConstants::su2();
    let f = pt([0.12, -0.2, 0.33]);
    let w = 2.0 * (p.eps - p.lambda * f.0[2]);
    let expected = [w * f.0[1], -w * f.0[0], 0.0];
    for j in 0..3 {
        let got = berezin_bracket(&p.gradient(&f), &basis(j), &f.0, &c).unwrap();
        assert!((got - expected[j]).abs() < 1e-15);
    }
}

#[test]
fn exact_flow_fixed_points() {
    let p = BcsParams::new(0.25, 1.0, 0.2).unwrap();
    for t in [0.0, 1.3, 17.0] {
        let pole = pt([0.0, 0.0, 0.37]);
        assert_eq!(bcs_flow_exact(&pole, t, &p), pole);
        let ring = pt([0.2, -0.1, p.eps / p.lambda]);
        assert!(bcs_flow_exact(&ring, t, &p).distance(&ring) < 1e-15);
    }
}

#[test]
fn rk4_matches_exact_flow() {
    let p = BcsParams::new(0.25, 1.0, 0.2).unwrap();
    for f0 in [pt([0.2, 0.1, -0.3]), pt([-0.05, 0.4, 0.1]), pt([0.3, 0.0, 0.25])] {
        for t in [1.0, 5.5, 10.0] {
            let num = flow_rk4(|f| p.gradient(f), &f0, t, 1e-3).unwrap();
            let exact = bcs_flow_exact(&f0, t, &p);
            assert!(num.distance(&exact) < 1e-8, "t = {t}: {num:?} vs {exact:?}");
            assert!((num.norm_sqr() - f0.norm_sqr()).abs() < 1e-8);
        }
    }
}

#[test]
fn zero_gradient_is_constant() {
    let f0 = pt([0.1, 0.2, 0.3]);
    assert_eq!(flow_rk4(|_| [0.0; 3], &f0, 4.0, 0.1).unwrap(), f0);
    assert!(flow_rk4(|_| [0.0; 3], &f0, 4.0, 0.0).is_err());
}

#[test]
fn rotation_is_the_linear_flow() {
    // Q = τ·y generates the rotation about τ.
    let tau = [0.48, -0.6, 0.64];
    let y = [0.3, 0.1, -0.7];
    for t in [0.4, 2.0, 5.0] {
        let rot = so3_rotate(y, tau, t).unwrap();
        let flow = flow_rk4(|_| tau, &pt(y), t, 1e-3).unwrap();
        for k in 0..3 {
            assert!((rot[k] - flow.0[k]).abs() < 1e-10);
        }
    }
}

#[test]
fn rotation_edge_cases() {
    let tau = [0.0, 0.6, 0.8];
    let y = [1.0, -2.0, 0.5];
    assert_eq!(so3_rotate(y, tau, 0.0).unwrap(), y);
    let full = so3_rotate(y, tau, 2.0 * PI).unwrap();
    for k in 0..3 {
        assert!((full[k] - y[k]).abs() < 1e-14);
    }
    assert!(so3_rotate(y, [1.0, 1.0, 0.0], 1.0).is_err());
}

#[test]
fn cocycle_at_zero_is_identity() {
    let p = BcsParams::new(0.25, 1.0, 0.2).unwrap();
    let u = cocycle_evolve(&pt([0.1, 0.2, 0.3]), 0.0, 1e-3, &p).unwrap();
    assert_eq!(u, Su2Element::identity());
}

#[test]
fn cocycle_identity_and_transport() {
    let p = BcsParams::new(0.25, 1.0, 0.2).unwrap();
    let f0 = pt([0.2, -0.1, 0.15]);
    let (t, s, dt) = (0.7, 0.7, 1e-3);
    let ut = cocycle_evolve(&f0, t, dt, &p).unwrap();
    let us = cocycle_evolve(&bcs_flow_exact(&f0, t, &p), s, dt, &p).unwrap();
    let uts = cocycle_evolve(&f0, t + s, dt, &p).unwrap();
    assert!(us.mul(&ut).0.distance(&uts.0) < 1e-6);
    for u in [ut, us, uts] {
        assert!(u.defect() < 1e-10);
    }
    for time in [0.7, 3.0, 10.0] {
        let u = cocycle_evolve(&f0, time, dt, &p).unwrap();
        assert!(u.coadjoint(&f0).distance(&bcs_flow_exact(&f0, time, &p)) < 1e-6);
    }
}

#[test]
fn cocycle_at_stationary_point_is_one_parameter_group() {
    // At a fixed point, U(t) = exp(−itX(β_F)).
    let p = BcsParams::new(0.25, 1.0, 0.2).unwrap();
    let f = pt([0.3, 0.1, p.eps / p.lambda]);
    let t = 2.3;
    let x = generator(p.gradient(&f));
    let expected = expm(&x.scale(Complex64::new(0.0, -t)));
    let u = cocycle_evolve(&f, t, 1e-3, &p).unwrap();
    assert!(u.0.distance(&expected) < 1e-10);
}

#[test]
fn stabilizer_term_keeps_classical_flow() {
    // β° ∥ F changes the cocycle but not Ad*(U)F.
    let p = BcsParams::new(0.25, 1.0, 0.2).unwrap();
    let f0 = pt([0.2, -0.1, 0.15]);
    let plain = cocycle_evolve(&f0, 3.0, 1e-3, &p).unwrap();
    let shifted = cocycle_evolve_with(&f0, 3.0, 1e-3, &p, |f| [0.7 * f.0[0], 0.7 * f.0[1], 0.7 * f.0[2]]).unwrap();
    assert!(plain.0.distance(&shifted.0) > 1e-3);
    assert!(shifted.coadjoint(&f0).distance(&plain.coadjoint(&f0)) < 1e-8);
}

#[test]
fn gibbs_closed_form_and_trace_oracle() {
    let p = BcsParams::new(0.25, 1.0, 0.3).unwrap();
    let s = gibbs_expectations(&pt([0.0, 0.0, 0.4]), &p).unwrap();
    assert_eq!(s[0], 0.0);
    assert_eq!(s[1], 0.0);
    assert!((s[2] - (p.eps / p.temperature).tanh()).abs() < 1e-15);

    let sig = pauli();
    for f in [pt([0.2, -0.1, 0.15]), pt([0.0, 0.33, -0.2]), pt([0.1, 0.1, 0.1])] {
        let n = p.direction(&f);
        let beta_h = CoadjointPoint(n).sigma_dot().scale((p.gap(&f) / p.temperature).into());
        let rho = expm(&beta_h);
        let z = rho.trace();
        let s = gibbs_expectations(&f, &p).unwrap();
        for j in 0..3 {
            let oracle = (rho.mul(&sig[j]).trace() / z).re;
            assert!((s[j] - oracle).abs() < 1e-12, "j = {j}: {} vs {oracle}", s[j]);
        }
    }
    let hot = BcsParams::new(0.25, 1.0, 1e9).unwrap();
    assert!(gibbs_expectations(&pt([0.2, 0.1, 0.3]), &hot).unwrap().iter().all(|x| x.abs() < 1e-9));
    let cold = BcsParams { temperature: 0.0, ..p };
    assert!(gibbs_expectations(&pt([0.2, 0.1, 0.3]), &cold).is_err());
}

#[test]
fn critical_temperature_values() {
    // atanh(1/2) = ln(3)/2.
    let tc = critical_temperature(0.25, 1.0).unwrap();
    assert!((tc - 0.25 / (0.5 * 3f64.ln())).abs() < 1e-15);
    assert!((tc - 0.455_119_613_313_418_8).abs() < 1e-15, "{tc}");
    assert!(critical_temperature(0.5, 1.0).is_err());
    assert!(critical_temperature(0.6, 1.0).is_err());
    assert!(critical_temperature(0.499_999_9, 1.0).unwrap() < 0.07);
    // atanh(x) = x + O(x³), so T_c → λ/2 as ε → 0.
    assert!((critical_temperature(1e-7, 1.0).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn gap_equation_below_and_above_tc() {
    let p = BcsParams::new(0.25, 1.0, 0.2).unwrap();
    let sol = solve_gap_equation(&p).unwrap();
    assert!((sol.normal.0[2] - 0.5 * (0.25f64 / 0.2).tanh()).abs() < 1e-15);
    let branch = sol.superconducting.expect("T < T_c has a superconducting branch");
    assert!(branch.a > 0.25 && branch.a <= 0.5);
    assert!((2.0 * branch.a - (branch.a / 0.2).tanh()).abs() < 1e-10);
    assert!(branch.residual < 1e-10);
    assert_eq!(branch.f3, 0.25);
    for f in [sol.normal, branch.representative(), branch.point(1.1)] {
        assert!(f.is_physical());
        assert!(self_consistency_residual(&f, &p).unwrap() < 1e-10);
    }
    assert!(branch.representative().f_plus().norm() > 0.0);

    let hot = BcsParams::new(0.25, 1.0, 0.6).unwrap();
    let sol = solve_gap_equation(&hot).unwrap();
    assert!(sol.superconducting.is_none());
    assert!(self_consistency_residual(&sol.normal, &hot).unwrap() < 1e-15);

    // No branch when 2ε ≥ λ at any temperature.
    let weak = BcsParams::new(0.6, 1.0, 0.01).unwrap();
    assert!(solve_gap_equation(&weak).unwrap().superconducting.is_none());
}

#[test]
fn gap_branch_is_gauge_circle() {
    let p = BcsParams::new(0.25, 1.0, 0.3).unwrap();
    let branch = solve_gap_equation(&p).unwrap().superconducting.unwrap();
    for phase in [0.3, 1.9, 4.0] {
        let rotated = so3_rotate(branch.representative().0, [0.0, 0.0, 1.0], phase).unwrap();
        assert!(self_consistency_residual(&pt(rotated), &p).unwrap() < 1e-10);
        assert!(pt(rotated).distance(&branch.point(phase)) < 1e-14);
    }
}

#[test]
fn gap_tends_to_ground_state_circle() {
    let gs = ground_states(&BcsParams::new(0.25, 1.0, 0.0).unwrap()).unwrap();
    let (_, radius) = gs.circle.unwrap();
    let p = BcsParams::new(0.25, 1.0, 0.01).unwrap();
    let branch = solve_gap_equation(&p).unwrap().superconducting.unwrap();
    assert!((branch.a - 0.5).abs() < 1e-12);
    assert!((branch.f_plus_abs - radius).abs() < 1e-10);
}

#[test]
fn ground_state_classification() {
    let p = BcsParams::new(0.25, 1.0, 0.0).unwrap();
    let gs = ground_states(&p).unwrap();
    let (f3, r) = gs.circle.unwrap();
    assert_eq!(f3, 0.25);
    assert!((r - 3f64.sqrt() / 4.0).abs() < 1e-15);
    for state in gs.sample(12) {
        let s = state.spin_expectation();
        for j in 0..3 {
            assert!((s[j] - state.f.0[j]).abs() < 1e-12);
        }
        let norm: f64 = state.chi.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-14);
    }
    assert_eq!(gs.normal.f, pt([0.0, 0.0, 0.5]));

    let weak = ground_states(&BcsParams::new(0.6, 1.0, 0.0).unwrap()).unwrap();
    assert!(weak.circle.is_none());
    assert_eq!(weak.sample(5).len(), 1);
}

#[test]
fn phase_diagram_rows() {
    let rows = phase_diagram(0.25, 1.0, &[0.1, 0.45, 0.46, 0.6]).unwrap();
    assert_eq!(rows.iter().map(|r| r.super_branch.is_some()).collect::<Vec<_>>(), [true, true, false, false]);
    assert!(rows.iter().all(|r| r.a_normal == 0.25));
    assert!(phase_diagram(-1.0, 1.0, &[0.1]).is_err());
}

fn point_in_ball() -> impl Strategy<Value = CoadjointPoint> {
    (-0.5f64..0.5, -0.5f64..0.5, -0.5f64..0.5).prop_filter_map("outside ball", |(a, b, c)| {
        let f = pt([a, b, c]);
        f.is_physical().then_some(f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_antisymmetric_and_casimir_central(
        g1 in prop::array::uniform3(-2.0f64..2.0),
        g2 in prop::array::uniform3(-2.0f64..2.0),
        f in point_in_ball(),
    ) {
        let c = StructureConstants::su2();
        let ab = berezin_bracket(&g1, &g2, &f.0, &c).unwrap();
        let ba = berezin_bracket(&g2, &g1, &f.0, &c).unwrap();
        prop_assert!((ab + ba).abs() < 1e-15);
        prop_assert_eq!(berezin_bracket(&g1, &g1, &f.0, &c).unwrap(), 0.0);
        let casimir_grad = [2.0 * f.0[0], 2.0 * f.0[1], 2.0 * f.0[2]];
        for j in 0..3 {
            prop_assert!(berezin_bracket(&casimir_grad, &basis(j), &f.0, &c).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn exact_flow_preserves_casimir(f in point_in_ball(), eps in 0.05f64..1.0, lambda in 0.05f64..2.0) {
        let p = BcsParams::new(eps, lambda, 0.1).unwrap();
        let ft = bcs_flow_exact(&f, 7.3, &p);
        prop_assert!((ft.norm_sqr() - f.norm_sqr()).abs() < 1e-15);
        prop_assert_eq!(ft.0[2], f.0[2]);
    }

    #[test]
    fn polynomial_flow_preserves_casimir(
        f in point_in_ball(),
        a in prop::array::uniform3(-1.0f64..1.0),
        b in prop::array::uniform3(-1.0f64..1.0),
    ) {
        // Q = a·F + (b·F)² + F₁F₂F₃.
        let grad = |x: &CoadjointPoint| {
            let y = x.0;
            let bf: f64 = (0..3).map(|k| b[k] * y[k]).sum();
            [
                a[0] + 2.0 * bf * b[0] + y[1] * y[2],
                a[1] + 2.0 * bf * b[1] + y[0] * y[2],
                a[2] + 2.0 * bf * b[2] + y[0] * y[1],
            ]
        };
        let ft = flow_rk4(grad, &f, 10.0, 1e-3).unwrap();
        prop_assert!((ft.norm_sqr() - f.norm_sqr()).abs() < 1e-8);
    }

    #[test]
    fn rotation_preserves_length(y in prop::array::uniform3(-3.0f64..3.0), th in 0.0f64..PI, ph in 0.0f64..2.0 * PI, t in -10.0f64..10.0) {
        let tau = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
        let r = so3_rotate(y, tau, t).unwrap();
        let n = |v: [f64; 3]| v.iter().map(|x| x * x).sum::<f64>();
        prop_assert!((n(r) - n(y)).abs() < 1e-12 * (1.0 + n(y)));
    }

    #[test]
    fn cocycle_stays_in_su2(f in point_in_ball(), t in 0.0f64..5.0) {
        let p = BcsParams::new(0.25, 1.0, 0.2).unwrap();
        let u = cocycle_evolve(&f, t, 1e-2, &p).unwrap();
        prop_assert!(u.defect() < 1e-10);
    }

    #[test]
    fn gap_solutions_self_consistent(eps in 0.02f64..0.45, t_frac in 0.02f64..0.98) {
        let tc = critical_temperature(eps, 1.0).unwrap();
        let p = BcsParams::new(eps, 1.0, t_frac * tc).unwrap();
        let sol = solve_gap_equation(&p).unwrap();
        let branch = sol.superconducting.unwrap();
        prop_assert!(branch.a > eps && branch.a <= 0.5);
        prop_assert!(branch.representative().is_physical());
        prop_assert!(self_consistency_residual(&branch.representative(), &p).unwrap() < 1e-10);
        prop_assert!(self_consistency_residual(&sol.normal, &p).unwrap() < 1e-14);
    }
}
