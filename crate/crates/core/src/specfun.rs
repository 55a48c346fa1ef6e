//! Bessel functions of integer order, Chebyshev polynomials of the second
//! kind, and the finite-chain kernel J_n^(N).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Absolute accuracy target for the special functions in this module.
pub const SPECFUN_TOL: f64 = 1e-12;

const RESCALE_AT: f64 = 1e100;

/// Parameters of the finite-chain kernel J_n^(N)(z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteKernelParams {
    pub n: i64,
    pub chain_len: usize,
    pub z: f64,
}

/// J_n(x) for integer order n ≥ 0.
pub fn bessel_j(n: usize, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("bessel_j: argument {x} is not finite"));
    }
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let ax = x.abs();
    if use_series(n, ax) {
        return Ok(sign * series(n, ax));
    }
    Ok(sign * miller(n, ax)[n])
}

/// J_n(x) for any integer order, using J_{-n} = (-1)^n J_n.
pub fn bessel_j_int(n: i64, x: f64) -> Result<f64> {
    let v = bessel_j(n.unsigned_abs() as usize, x)?;
    Ok(if n < 0 && n % 2 != 0 { -v } else { v })
}

/// J_0(x), …, J_nmax(x) from a single recurrence sweep.
pub fn bessel_j_all(nmax: usize, x: f64) -> Result<Vec<f64>> {
    if !x.is_finite() {
        return domain(format!("bessel_j_all: argument {x} is not finite"));
    }
    let mut out = if x == 0.0 {
        let mut v = vec![0.0; nmax + 1];
        v[0] = 1.0;
        v
    } else if x.abs() <= 2.0 {
        (0..=nmax).map(|n| series(n, x.abs())).collect()
    } else {
        let mut v = miller(nmax, x.abs());
        v.truncate(nmax + 1);
        v
    };
    if x < 0.0 {
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
    }
    Ok(out)
}

// Terms of the power series decrease monotonically once (x/2)² ≤ n + 1, so
// the series is only used there.
fn use_series(n: usize, ax: f64) -> bool {
    ax <= 2.0 || 0.25 * ax * ax <= (n + 1) as f64
}

fn series(n: usize, ax: f64) -> f64 {
    let half = 0.5 * ax;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
        if term == 0.0 {
            return 0.0;
        }
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 0usize;
    loop {
        k += 1;
        term *= -q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || k > 500 {
            break;
        }
    }
    sum
}

/// Backward recurrence from an order well inside the evanescent region,
/// normalised by J_0² + 2ΣJ_k² = 1 with the sign fixed by J_0 + 2ΣJ_{2k} = 1.
/// Returns J_0..J_start (entries above `nmax` are less accurate).
fn miller(nmax: usize, ax: f64) -> Vec<f64> {
    let lead = (nmax as f64).max(ax.ceil());
    let start = lead as usize + 20 + (10.0 * (0.5 * ax).cbrt()).ceil() as usize;
    let mut v = vec![0.0; start + 2];
    v[start] = 1.0;
    for k in (1..=start).rev() {
        let next = 2.0 * k as f64 / ax * v[k] - v[k + 1];
        v[k - 1] = next;
        if next.abs() > RESCALE_AT {
            for w in v[k - 1..].iter_mut() {
                *w /= RESCALE_AT;
            }
        }
    }
    let mut sq = v[0] * v[0];
    let mut even = v[0];
    for (k, w) in v.iter().enumerate().skip(1) {
        sq += 2.0 * w * w;
        if k % 2 == 0 {
            even += 2.0 * w;
        }
    }
    let scale = even.signum() / sq.sqrt();
    v.truncate(start + 1);
    for w in v.iter_mut() {
        *w *= scale;
    }
    v
}

/// Chebyshev polynomial of the second kind by forward recurrence.
pub fn chebyshev_u(n: usize, z: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * z;
    for _ in 1..n {
        let next = 2.0 * z * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// J_n^(N)(z) = (i^n/(N+1)) Σ_{j=1}^N exp(−iz cos(jπ/(N+1))) cos(njπ/(N+1)).
pub fn finite_kernel(params: FiniteKernelParams) -> Result<Complex64> {
    let FiniteKernelParams { n, chain_len, z } = params;
    if chain_len < 1 {
        return domain("finite_kernel: chain length must be at least 1");
    }
    let step = PI / (chain_len + 1) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 1..=chain_len {
        let th = j as f64 * step;
        acc += Complex64::from_polar(1.0, -z * th.cos()) * (n as f64 * th).cos();
    }
    Ok(i_pow(n) * acc / (chain_len + 1) as f64)
}

/// i^n for any integer n.
pub fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// (−i)^n for any integer n.
pub fn minus_i_pow(n: i64) -> Complex64 {
    i_pow(-n)
}

/// J_1(x)/x with the limit 1/2 at x = 0.
pub fn bessel_j1_over_x(x: f64) -> Result<f64> {
    if x.abs() < 1e-8 {
        return Ok(0.5 - x * x / 16.0);
    }
    Ok(bessel_j(1, x)? / x)
}
