//! X-Y chain as a measuring device: free-fermion one-particle evolution,
//! occupation dynamics from the half-filled step state, and the mixture
//! produced when the central bond is switched on by a probe spin.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::specfun::{bessel_j, bessel_j_all, minus_i_pow};

/// Lattice sums are cut once the remaining weight is below this.
pub const TAIL_TOL: f64 = 1e-12;

/// Coefficients of the nested commutators [H, b_0]^(m) = Σ_p c^(m)(p) b_p.
#[derive(Debug, Clone, PartialEq)]
pub struct HoppingCoefficients {
    pub kappa: f64,
    m_max: usize,
    /// `table[m][p + m_max]` = c^(m)(p) for |p| ≤ m_max.
    table: Vec<Vec<f64>>,
}

impl HoppingCoefficients {
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// c^(m)(p); zero outside the stored support.
    pub fn get(&self, m: usize, p: i64) -> f64 {
        if m > self.m_max || p.unsigned_abs() as usize > self.m_max {
            return 0.0;
        }
        self.table[m][(p + self.m_max as i64) as usize]
    }

    /// Σ_{m ≤ m_max} (it)^m/m! · c^(m)(r), the truncated Taylor series of C_t(r).
    pub fn taylor(&self, r: i64, t: f64) -> Complex64 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..=self.m_max {
            if m > 0 {
                term *= Complex64::new(0.0, t / m as f64);
            }
            acc += term * self.get(m, r);
        }
        acc
    }
}

/// Builds c^(0..=m_max) from c^(0)(p) = δ_{0p} and
/// c^(m+1)(p) = −(κ/2)(c^(m)(p−1) + c^(m)(p+1)).
pub fn recurrence_coefficients(m_max: usize, kappa: f64) -> HoppingCoefficients {
    let width = 2 * m_max + 1;
    let mut table = vec![vec![0.0; width]; m_max + 1];
    table[0][m_max] = 1.0;
    for m in 0..m_max {
        for i in 0..width {
            let left = if i > 0 { table[m][i - 1] } else { 0.0 };
            let right = if i + 1 < width { table[m][i + 1] } else { 0.0 };
            table[m + 1][i] = -0.5 * kappa * (left + right);
        }
    }
    HoppingCoefficients { kappa, m_max, table }
}

/// C_t(r) = (−i)^{|r|} J_{|r|}(κt).
pub fn evolution_coefficient(r: i64, t: f64, kappa: f64) -> Result<Complex64> {
    let n = r.unsigned_abs() as i64;
    Ok(minus_i_pow(n) * bessel_j(n as usize, kappa * t)?)
}

/// ⟨a_j*a_j⟩ in the step state: 1 left of the cut (j ≤ −1), 0 right of it.
pub fn initial_occupation(j: i64) -> f64 {
    if j <= -1 {
        1.0
    } else {
        0.0
    }
}

/// Σ_{r≥1} J²_{|j+r|}(κt), the occupation of site j at time t after the
/// step state starts to spread.
///
/// The sum runs over k = j+1, j+2, … up to a cutoff K chosen so that the
/// remainder Σ_{k>K} J_k² = (1 − J_0² − 2Σ_{k≤K} J_k²)/2 is below
/// [`TAIL_TOL`].
pub fn occupation(j: i64, t: f64, kappa: f64) -> Result<f64> {
    let x = kappa * t;
    if !x.is_finite() {
        return domain(format!("κt must be finite, got {x}"));
    }
    if x == 0.0 {
        return Ok(initial_occupation(j));
    }
    let mut k_max = j.unsigned_abs() as usize + x.abs().ceil() as usize + 20;
    let jv = loop {
        let jv = bessel_j_all(k_max, x)?;
        let inside = jv[0] * jv[0] + 2.0 * jv[1..].iter().map(|v| v * v).sum::<f64>();
        if 0.5 * (1.0 - inside) < TAIL_TOL {
            break jv;
        }
        k_max += k_max / 2 + 10;
    };
    Ok((j + 1..=k_max as i64).map(|k| jv[k.unsigned_abs() as usize].powi(2)).sum())
}

fn check_probe(c_plus: Complex64, c_minus: Complex64) -> Result<()> {
    let norm = c_plus.norm_sqr() + c_minus.norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized(norm));
    }
    Ok(())
}

/// Occupation of site j when the probe is c₊|+⟩ + c₋|−⟩: the |−⟩ branch
/// leaves the chain untouched.
pub fn measurement_occupation(j: i64, t: f64, kappa: f64, c_plus: Complex64, c_minus: Complex64) -> Result<f64> {
    check_probe(c_plus, c_minus)?;
    Ok(c_plus.norm_sqr() * occupation(j, t, kappa)? + c_minus.norm_sqr() * initial_occupation(j))
}

/// t → ∞ limit of [`measurement_occupation`].
pub fn limit_occupation(j: i64, c_plus: Complex64, c_minus: Complex64) -> Result<f64> {
    check_probe(c_plus, c_minus)?;
    Ok(0.5 * c_plus.norm_sqr() + c_minus.norm_sqr() * initial_occupation(j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MacroState {
    Initial,
    Final,
}

/// Mean occupation per site of the right half chain, γ.
pub fn macro_observable(state: MacroState, c_plus: Complex64) -> Result<f64> {
    let p = c_plus.norm_sqr();
    if p > 1.0 + 1e-10 {
        return Err(Error::Unnormalized(p));
    }
    Ok(match state {
        MacroState::Initial => 0.0,
        MacroState::Final => 0.5 * p,
    })
}

/// Finite-time estimate of γ: the average of the measured occupation over
/// sites 1..=window.
pub fn gamma_estimate(t: f64, kappa: f64, c_plus: Complex64, c_minus: Complex64, window: usize) -> Result<f64> {
    if window == 0 {
        return domain("window must contain at least one site");
    }
    let mut acc = 0.0;
    for n in 1..=window as i64 {
        acc += measurement_occupation(n, t, kappa, c_plus, c_minus)?;
    }
    Ok(acc / window as f64)
}

/// Dense reference for an open chain of `n_sites` spins labelled
/// `first_site..first_site + n_sites`.
pub mod oracle {
    use super::*;
    use crate::dense::{eigh, spin, DenseOperator, Eigen};

    /// Full-space κ/2 Σ (a_j*a_{j+1} + a_{j+1}*a_j) on `n_sites` spins,
    /// sites numbered 1..=n_sites as in [`spin::embed`].
    pub fn full_hamiltonian(n_sites: usize, kappa: f64) -> DenseOperator {
        let mut h = DenseOperator::zeros(1 << n_sites);
        for s in 1..n_sites {
            let hop = spin::embed(n_sites, &[(s, spin::raising()), (s + 1, spin::lowering())]);
            h = &h + &(&(&hop + &hop.adjoint()) * (0.5 * kappa));
        }
        h
    }

    /// Jordan–Wigner fermion b_s = (Π_{q<s} (1 − 2a_q*a_q)) a_s.
    pub fn jordan_wigner(n_sites: usize, s: usize) -> DenseOperator {
        let mut ops: Vec<(usize, DenseOperator)> = (1..s).map(|q| (q, spin::parity())).collect();
        ops.push((s, spin::lowering()));
        spin::embed(n_sites, &ops)
    }

    #[derive(Debug, Clone)]
    pub struct FiniteXyChain {
        pub first_site: i64,
        pub n_sites: usize,
        pub kappa: f64,
        /// Full-space indices of the fixed-particle-number sector.
        basis: Vec<usize>,
        initial: usize,
        eigen: Eigen,
    }

    impl FiniteXyChain {
        /// Chain with the step state (labels < 0 up) as initial vector. The
        /// Hamiltonian conserves the number of up spins, so only that sector
        /// is diagonalized.
        pub fn new(first_site: i64, n_sites: usize, kappa: f64) -> Result<Self> {
            if !(2..=16).contains(&n_sites) {
                return domain(format!("oracle chain needs 2..=16 sites, got {n_sites}"));
            }
            let ups: Vec<usize> = (1..=n_sites).filter(|&s| first_site + s as i64 - 1 < 0).collect();
            let initial_index = spin::product_index(n_sites, ups.iter().copied());
            let filling = ups.len() as u32;
            let basis: Vec<usize> = (0..1usize << n_sites).filter(|i| i.count_ones() == filling).collect();
            let position = |idx: usize| basis.binary_search(&idx).ok();
            let dim = basis.len();
            let mut h = DenseOperator::zeros(dim);
            for (col, &state) in basis.iter().enumerate() {
                for s in 1..n_sites {
                    let (a, b) = (spin::is_up(n_sites, state, s), spin::is_up(n_sites, state, s + 1));
                    if a != b {
                        let flipped = state ^ (1 << (n_sites - s)) ^ (1 << (n_sites - s - 1));
                        let row = position(flipped).expect("hop stays in sector");
                        h.set(row, col, Complex64::new(0.5 * kappa, 0.0));
                    }
                }
            }
            let eigen = eigh(&h)?;
            let initial = position(initial_index).expect("initial state in sector");
            Ok(FiniteXyChain { first_site, n_sites, kappa, basis, initial, eigen })
        }

        pub fn sector_dim(&self) -> usize {
            self.basis.len()
        }

        /// Site labels in chain order.
        pub fn labels(&self) -> Vec<i64> {
            (0..self.n_sites as i64).map(|i| self.first_site + i).collect()
        }

        /// ⟨a_j*a_j⟩ at time t for every site, in label order.
        pub fn occupations(&self, t: f64) -> Result<Vec<f64>> {
            let mut psi0 = vec![Complex64::new(0.0, 0.0); self.basis.len()];
            psi0[self.initial] = Complex64::new(1.0, 0.0);
            let psi = self.eigen.evolve(&psi0, t)?;
            Ok((1..=self.n_sites)
                .map(|s| {
                    self.basis
                        .iter()
                        .zip(&psi)
                        .filter(|(&idx, _)| spin::is_up(self.n_sites, idx, s))
                        .map(|(_, a)| a.norm_sqr())
                        .sum()
                })
                .collect())
        }

        /// Full-space step state.
        pub fn initial_vector(&self) -> Vec<Complex64> {
            let mut v = vec![Complex64::new(0.0, 0.0); 1 << self.n_sites];
            v[self.basis[self.initial]] = Complex64::new(1.0, 0.0);
            v
        }

        /// Largest |⟨Ψ₀|b_r* b_s|Ψ₀⟩| over r ≠ s, with the Jordan–Wigner
        /// fermions built explicitly in the full space.
        pub fn max_cross_term(&self) -> Result<f64> {
            let psi = self.initial_vector();
            let images =
                (1..=self.n_sites).map(|s| jordan_wigner(self.n_sites, s).matvec(&psi)).collect::<Result<Vec<_>>>()?;
            let mut worst = 0.0f64;
            for (r, br) in images.iter().enumerate() {
                for (s, bs) in images.iter().enumerate() {
                    if r != s {
                        worst = worst.max(crate::dense::inner(br, bs).norm());
                    }
                }
            }
            Ok(worst)
        }
    }
}
