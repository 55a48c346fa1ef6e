//! Mean-field BCS on su(2)*: Lie–Poisson flow, the SU(2) cocycle driving
//! the one-site evolution, gap equations and ground states, and the
//! classical spin on so(3)*.

use num_complex::Complex64;

use crate::error::{domain, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// F ∈ g* through its components F_j = F(ξ_j).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoadjointPoint(pub [f64; 3]);

impl CoadjointPoint {
    pub fn new(f1: f64, f2: f64, f3: f64) -> Self {
        CoadjointPoint([f1, f2, f3])
    }

    /// F₊ = F₁ + iF₂.
    pub fn f_plus(&self) -> Complex64 {
        Complex64::new(self.0[0], self.0[1])
    }

    /// F² = F₁² + F₂² + F₃², the Casimir.
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    /// F lies in the physical ball F² ≤ 1/4.
    pub fn is_physical(&self) -> bool {
        self.norm_sqr() <= 0.25 + 1e-15
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (0..3).map(|j| (self.0[j] - other.0[j]).powi(2)).sum::<f64>().sqrt()
    }

    /// F·σ as a 2×2 matrix.
    pub fn sigma_dot(&self) -> Mat2 {
        sigma_dot(self.0)
    }
}

/// c^j_{kl} with [ξ_k, ξ_l] = c^j_{kl} ξ_j, stored as `c[j][k][l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    pub c: Vec<Vec<Vec<f64>>>,
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

impl StructureConstants {
    /// [ξ_j, ξ_k] = ε_{jkm} ξ_m.
    pub fn su2() -> Self {
        let c = (0..3).map(|m| (0..3).map(|j| (0..3).map(|k| levi_civita(j, k, m)).collect()).collect()).collect();
        StructureConstants { c }
    }

    /// so(3) in the basis whose generators satisfy [Y_k, Y_m] = iε_{kmj}Y_j;
    /// the same constants as su(2).
    pub fn so3() -> Self {
        Self::su2()
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// max |c^j_{kl} + c^j_{lk}|.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim();
        let mut r = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    r = r.max((self.c[j][k][l] + self.c[j][l][k]).abs());
                }
            }
        }
        r
    }

    /// max over (a, b, d, e) of |Σ_m c^m_{ab} c^e_{md} + cyclic|.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim();
        let c = &self.c;
        let mut r = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    for e in 0..n {
                        let s: f64 = (0..n)
                            .map(|m| c[m][a][b] * c[e][m][d] + c[m][b][d] * c[e][m][a] + c[m][d][a] * c[e][m][b])
                            .sum();
                        r = r.max(s.abs());
                    }
                }
            }
        }
        r
    }
}

/// {Q₁, Q₂}(F) = −c^j_{km} ∂_kQ₁ ∂_mQ₂ F_j.
pub fn berezin_bracket(grad_q1: &[f64], grad_q2: &[f64], f: &[f64], c: &StructureConstants) -> Result<f64> {
    let n = c.dim();
    if grad_q1.len() != n || grad_q2.len() != n || f.len() != n {
        return domain(format!("bracket on a {n}-dimensional algebra needs {n}-component inputs"));
    }
    let mut s = 0.0;
    for j in 0..n {
        for k in 0..n {
            for m in 0..n {
                s += c.c[j][k][m] * grad_q1[k] * grad_q2[m] * f[j];
            }
        }
    }
    Ok(-s)
}

/// ε, λ and the temperature T (k_B = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcsParams {
    pub eps: f64,
    pub lambda: f64,
    pub temperature: f64,
}

impl BcsParams {
    pub fn new(eps: f64, lambda: f64, temperature: f64) -> Result<Self> {
        let p = BcsParams { eps, lambda, temperature };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.lambda > 0.0) {
            return domain(format!("need ε > 0 and λ > 0, got ε = {}, λ = {}", self.eps, self.lambda));
        }
        if !(self.temperature >= 0.0) {
            return domain(format!("temperature must be non-negative, got {}", self.temperature));
        }
        Ok(())
    }

    /// Q(F) = −2εF₃ − λ(F₁² + F₂²).
    pub fn hamiltonian(&self, f: &CoadjointPoint) -> f64 {
        -2.0 * self.eps * f.0[2] - self.lambda * (f.0[0] * f.0[0] + f.0[1] * f.0[1])
    }

    /// d_F Q in the basis ξ_j.
    pub fn gradient(&self, f: &CoadjointPoint) -> [f64; 3] {
        [-2.0 * self.lambda * f.0[0], -2.0 * self.lambda * f.0[1], -2.0 * self.eps]
    }

    /// a(F) = √(ε² + λ²F₊F₋).
    pub fn gap(&self, f: &CoadjointPoint) -> f64 {
        (self.eps * self.eps + self.lambda * self.lambda * f.f_plus().norm_sqr()).sqrt()
    }

    /// n(F) = (λF₁, λF₂, ε)/a(F).
    pub fn direction(&self, f: &CoadjointPoint) -> [f64; 3] {
        let a = self.gap(f);
        [self.lambda * f.0[0] / a, self.lambda * f.0[1] / a, self.eps / a]
    }
}

/// F₃ fixed, F_±(t) = F_±(0) e^{∓2i(ε − λF₃)t}.
pub fn bcs_flow_exact(f0: &CoadjointPoint, t: f64, p: &BcsParams) -> CoadjointPoint {
    let omega = 2.0 * (p.eps - p.lambda * f0.0[2]);
    let fp = f0.f_plus() * Complex64::from_polar(1.0, -omega * t);
    CoadjointPoint::new(fp.re, fp.im, f0.0[2])
}

/// Ḟ_j = {Q, F_j} = −c^i_{kj} ∂_kQ F_i.
fn lie_poisson_rhs(grad: [f64; 3], f: [f64; 3], c: &StructureConstants) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (j, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for i in 0..3 {
            for (k, g) in grad.iter().enumerate() {
                s += c.c[i][k][j] * g * f[i];
            }
        }
        *o = -s;
    }
    out
}

fn axpy(a: [f64; 3], s: f64, b: [f64; 3]) -> [f64; 3] {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

/// Classical RK4 for Ḟ_j = {Q, F_j} on su(2)*; the last step is shortened
/// to land on t.
pub fn flow_rk4(
    grad_q: impl Fn(&CoadjointPoint) -> [f64; 3],
    f0: &CoadjointPoint,
    t: f64,
    dt: f64,
) -> Result<CoadjointPoint> {
    if !(dt > 0.0) || !t.is_finite() {
        return domain(format!("need dt > 0 and finite t, got dt = {dt}, t = {t}"));
    }
    let c = StructureConstants::su2();
    let rhs = |f: [f64; 3]| lie_poisson_rhs(grad_q(&CoadjointPoint(f)), f, &c);
    let steps = (t.abs() / dt).ceil() as usize;
    let h = if steps == 0 { 0.0 } else { t / steps as f64 };
    let mut f = f0.0;
    for _ in 0..steps {
        let k1 = rhs(f);
        let k2 = rhs(axpy(f, 0.5 * h, k1));
        let k3 = rhs(axpy(f, 0.5 * h, k2));
        let k4 = rhs(axpy(f, h, k3));
        for j in 0..3 {
            f[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    Ok(CoadjointPoint(f))
}

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        let mut r = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(r)
    }

    pub fn adjoint(&self) -> Mat2 {
        let a = &self.0;
        Mat2([[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]])
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        let mut r = self.0;
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] += o.0[i][j];
            }
        }
        Mat2(r)
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        let mut r = self.0;
        r.iter_mut().flatten().for_each(|z| *z *= s);
        Mat2(r)
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn inverse(&self) -> Mat2 {
        let d = self.det();
        let a = &self.0;
        Mat2([[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]])
    }

    /// max-entry distance.
    pub fn distance(&self, o: &Mat2) -> f64 {
        let mut r = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                r = r.max((self.0[i][j] - o.0[i][j]).norm());
            }
        }
        r
    }
}

/// Pauli matrices σ₁, σ₂, σ₃; row 0 is the σ₃ = +1 state.
pub fn pauli() -> [Mat2; 3] {
    let i = Complex64::new(0.0, 1.0);
    [Mat2([[ZERO, ONE], [ONE, ZERO]]), Mat2([[ZERO, -i], [i, ZERO]]), Mat2([[ONE, ZERO], [ZERO, -ONE]])]
}

fn sigma_dot(v: [f64; 3]) -> Mat2 {
    let s = pauli();
    s[0].scale(v[0].into()).add(&s[1].scale(v[1].into())).add(&s[2].scale(v[2].into()))
}

/// U ∈ SU(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Element(pub Mat2);

impl Su2Element {
    pub fn identity() -> Self {
        Su2Element(Mat2::identity())
    }

    pub fn mul(&self, o: &Su2Element) -> Su2Element {
        Su2Element(self.0.mul(&o.0))
    }

    /// max(‖U†U − 1‖_max, |det U − 1|).
    pub fn defect(&self) -> f64 {
        let g = self.0.adjoint().mul(&self.0);
        g.distance(&Mat2::identity()).max((self.0.det() - ONE).norm())
    }

    /// Ad*(U)F: the components of U (F·σ) U†.
    pub fn coadjoint(&self, f: &CoadjointPoint) -> CoadjointPoint {
        let m = self.0.mul(&f.sigma_dot()).mul(&self.0.adjoint());
        let s = pauli();
        let comp = |j: usize| 0.5 * m.mul(&s[j]).trace().re;
        CoadjointPoint::new(comp(0), comp(1), comp(2))
    }

    /// Nearest unitary (polar factor), then the phase fixed so det = 1.
    fn reunitarize(m: Mat2) -> Su2Element {
        // √H = (H + √det H)/√(tr H + 2√det H) for positive 2×2 H.
        let h = m.adjoint().mul(&m);
        let sd = h.det().re.max(0.0).sqrt();
        let denom = (h.trace().re + 2.0 * sd).sqrt();
        let sqrt_h = h.add(&Mat2::identity().scale(sd.into())).scale((1.0 / denom).into());
        let u = m.mul(&sqrt_h.inverse());
        let phase = u.det().sqrt();
        Su2Element(u.scale(phase.inv()))
    }
}

/// X(β) = Σ β_j σ_j/2 for β = Σ β_j ξ_j.
pub fn generator(beta: [f64; 3]) -> Mat2 {
    sigma_dot(beta).scale(0.5.into())
}

/// U(t; F) solving i dU/dt = X(β_{F(t)})U with β = d_F Q, U(0) = 1.
pub fn cocycle_evolve(f0: &CoadjointPoint, t: f64, dt: f64, p: &BcsParams) -> Result<Su2Element> {
    cocycle_evolve_with(f0, t, dt, p, |_| [0.0; 3])
}

/// As [`cocycle_evolve`] with β = d_F Q + β°(F); β°(F) should lie in the
/// stabilizer of F.
pub fn cocycle_evolve_with(
    f0: &CoadjointPoint,
    t: f64,
    dt: f64,
    p: &BcsParams,
    beta0: impl Fn(&CoadjointPoint) -> [f64; 3],
) -> Result<Su2Element> {
    if !(dt > 0.0) || !(t >= 0.0 && t.is_finite()) {
        return domain(format!("need dt > 0 and finite t ≥ 0, got dt = {dt}, t = {t}"));
    }
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |s: f64, u: &Mat2| {
        let f = bcs_flow_exact(f0, s, p);
        let b = axpy(p.gradient(&f), 1.0, beta0(&f));
        generator(b).mul(u).scale(minus_i)
    };
    let steps = (t / dt).ceil() as usize;
    let h = if steps == 0 { 0.0 } else { t / steps as f64 };
    let mut u = Su2Element::identity();
    for k in 0..steps {
        let s = k as f64 * h;
        let m = u.0;
        let k1 = rhs(s, &m);
        let k2 = rhs(s + 0.5 * h, &m.add(&k1.scale((0.5 * h).into())));
        let k3 = rhs(s + 0.5 * h, &m.add(&k2.scale((0.5 * h).into())));
        let k4 = rhs(s + h, &m.add(&k3.scale(h.into())));
        let incr = k1.add(&k2.scale(2.0.into())).add(&k3.scale(2.0.into())).add(&k4);
        u = Su2Element::reunitarize(m.add(&incr.scale((h / 6.0).into())));
    }
    Ok(u)
}

/// ω_T⁰(σ_j) = n_j(F) tanh(a(F)/T).
pub fn gibbs_expectations(f: &CoadjointPoint, p: &BcsParams) -> Result<[f64; 3]> {
    if !(p.temperature > 0.0) {
        return domain(format!("Gibbs state needs T > 0, got {}", p.temperature));
    }
    let n = p.direction(f);
    let th = (p.gap(f) / p.temperature).tanh();
    Ok([n[0] * th, n[1] * th, n[2] * th])
}

/// max_j |ω_T⁰(σ_j) − 2F_j|.
pub fn self_consistency_residual(f: &CoadjointPoint, p: &BcsParams) -> Result<f64> {
    let s = gibbs_expectations(f, p)?;
    Ok((0..3).map(|j| (s[j] - 2.0 * f.0[j]).abs()).fold(0.0, f64::max))
}

/// T_c = ε / atanh(2ε/λ).
pub fn critical_temperature(eps: f64, lambda: f64) -> Result<f64> {
    if !(eps > 0.0 && lambda > 0.0) {
        return domain("need ε > 0 and λ > 0");
    }
    if 2.0 * eps >= lambda {
        return domain(format!("no superconducting phase: 2ε = {} ≥ λ = {lambda}", 2.0 * eps));
    }
    Ok(eps / (2.0 * eps / lambda).atanh())
}

/// The gauge circle F₃ = ε/λ, |F₊| = √(a² − ε²)/λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperconductingBranch {
    /// Root of 2a = λ tanh(a/T).
    pub a: f64,
    pub f3: f64,
    pub f_plus_abs: f64,
    /// |2a − λ tanh(a/T)|.
    pub residual: f64,
}

impl SuperconductingBranch {
    /// The point of the circle with arg F₊ = `phase`.
    pub fn point(&self, phase: f64) -> CoadjointPoint {
        CoadjointPoint::new(self.f_plus_abs * phase.cos(), self.f_plus_abs * phase.sin(), self.f3)
    }

    /// The representative with F₂ = 0, F₁ > 0.
    pub fn representative(&self) -> CoadjointPoint {
        self.point(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSolutions {
    /// F = (0, 0, ½ tanh(ε/T)).
    pub normal: CoadjointPoint,
    pub superconducting: Option<SuperconductingBranch>,
}

/// All self-consistent F at temperature T, up to the gauge phase.
pub fn solve_gap_equation(p: &BcsParams) -> Result<GapSolutions> {
    p.validate()?;
    let t = p.temperature;
    if !(t > 0.0) {
        return domain(format!("gap equation needs T > 0, got {t}"));
    }
    let normal = CoadjointPoint::new(0.0, 0.0, 0.5 * (p.eps / t).tanh());
    let superconducting = match critical_temperature(p.eps, p.lambda) {
        Ok(tc) if t < tc => Some(superconducting_root(p)),
        _ => None,
    };
    Ok(GapSolutions { normal, superconducting })
}

/// Bisection of 2a − λ tanh(a/T) on (ε, λ/2], which changes sign there
/// exactly when T < T_c.
fn superconducting_root(p: &BcsParams) -> SuperconductingBranch {
    let g = |a: f64| 2.0 * a - p.lambda * (a / p.temperature).tanh();
    let (mut lo, mut hi) = (p.eps, 0.5 * p.lambda);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = if g(lo).abs() < g(hi).abs() { lo } else { hi };
    SuperconductingBranch {
        a,
        f3: p.eps / p.lambda,
        f_plus_abs: (a * a - p.eps * p.eps).max(0.0).sqrt() / p.lambda,
        residual: g(a).abs(),
    }
}

/// One row of the phase diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRow {
    pub temperature: f64,
    /// a(F) on the normal solution (= ε).
    pub a_normal: f64,
    pub super_branch: Option<SuperconductingBranch>,
}

pub fn phase_diagram(eps: f64, lambda: f64, temperatures: &[f64]) -> Result<Vec<PhaseRow>> {
    temperatures
        .iter()
        .map(|&t| {
            let p = BcsParams::new(eps, lambda, t)?;
            let sol = solve_gap_equation(&p)?;
            Ok(PhaseRow { temperature: t, a_normal: p.gap(&sol.normal), super_branch: sol.superconducting })
        })
        .collect()
}

/// F with the one-site vector χ(F), the top eigenvector of n(F)·σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    pub f: CoadjointPoint,
    pub chi: [Complex64; 2],
}

impl GroundState {
    fn at(f: CoadjointPoint, p: &BcsParams) -> Self {
        GroundState { f, chi: top_eigenvector(p.direction(&f)) }
    }

    /// ⟨χ|σ_j/2|χ⟩.
    pub fn spin_expectation(&self) -> [f64; 3] {
        let s = pauli();
        let mut out = [0.0; 3];
        for (j, o) in out.iter_mut().enumerate() {
            let m = &s[j].0;
            let c = &self.chi;
            let v = [m[0][0] * c[0] + m[0][1] * c[1], m[1][0] * c[0] + m[1][1] * c[1]];
            *o = 0.5 * (c[0].conj() * v[0] + c[1].conj() * v[1]).re;
        }
        out
    }
}

/// Normalized χ with (n·σ)χ = χ for a unit vector n.
pub fn top_eigenvector(n: [f64; 3]) -> [Complex64; 2] {
    if n[2] > -1.0 + 1e-12 {
        let s = (2.0 * (1.0 + n[2])).sqrt();
        [Complex64::new((1.0 + n[2]) / s, 0.0), Complex64::new(n[0], n[1]) / s]
    } else {
        [ZERO, ONE]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStates {
    /// F = (0, 0, ½).
    pub normal: GroundState,
    /// F₃ = ε/λ and F₁² + F₂² = radius², present when 2ε < λ.
    pub circle: Option<(f64, f64)>,
    params: BcsParams,
}

impl GroundStates {
    /// Ground state at arg F₊ = `phase` on the circle.
    pub fn circle_point(&self, phase: f64) -> Option<GroundState> {
        self.circle
            .map(|(f3, r)| GroundState::at(CoadjointPoint::new(r * phase.cos(), r * phase.sin(), f3), &self.params))
    }

    /// The normal point and `k` equally spaced points of the circle.
    pub fn sample(&self, k: usize) -> Vec<GroundState> {
        let mut out = vec![self.normal];
        if self.circle.is_some() {
            out.extend((0..k).filter_map(|i| self.circle_point(2.0 * std::f64::consts::PI * i as f64 / k as f64)));
        }
        out
    }
}

/// Ground-state points F solving n_j(F) = 2F_j.
pub fn ground_states(p: &BcsParams) -> Result<GroundStates> {
    p.validate()?;
    let normal = GroundState::at(CoadjointPoint::new(0.0, 0.0, 0.5), p);
    let circle = (2.0 * p.eps < p.lambda).then(|| {
        let f3 = p.eps / p.lambda;
        (f3, (0.25 - f3 * f3).sqrt())
    });
    Ok(GroundStates { normal, circle, params: *p })
}

/// y_k cos t + ε_{kjm}τ_j y_m sin t + 2τ_k(τ·y) sin²(t/2).
pub fn so3_rotate(y: [f64; 3], tau: [f64; 3], t: f64) -> Result<[f64; 3]> {
    let tn: f64 = tau.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (tn - 1.0).abs() > 1e-12 {
        return domain(format!("rotation axis must be a unit vector, |τ| = {tn}"));
    }
    let dot: f64 = (0..3).map(|k| tau[k] * y[k]).sum();
    let cross = [tau[1] * y[2] - tau[2] * y[1], tau[2] * y[0] - tau[0] * y[2], tau[0] * y[1] - tau[1] * y[0]];
    let half = (0.5 * t).sin();
    Ok(std::array::from_fn(|k| y[k] * t.cos() + cross[k] * t.sin() + 2.0 * tau[k] * dot * half * half))
}
