//! Brute-force ground truth: small dense operators, Hermitian
//! eigendecomposition by cyclic Jacobi rotations, exact evolution and
//! expectations. Everything analytic elsewhere in the crate is checked
//! against this module.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::error::{domain, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest full-chain size built densely (2^10 × 2^10 complex entries).
pub const MAX_FULL_CHAIN_SITES: usize = 10;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        DenseOperator { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        DenseOperator { dim, data }
    }

    pub fn from_real(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        Self::from_fn(dim, |i, j| Complex64::new(f(i, j), 0.0))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        DenseOperator { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max |M − M†| entrywise.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                r = r.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        r
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|v| v.im == 0.0)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dim(self.dim, x.len())?;
        Ok(self.data.chunks_exact(self.dim).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    /// Kronecker product self ⊗ other.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut out = Self::zeros(dim);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.data[(i * m + k) * dim + j * m + l] = a * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    /// Compression onto the coordinate subspace spanned by `indices`.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |i, j| self.get(indices[i], indices[j]))
    }

    /// Largest matrix element connecting `indices` to its complement.
    pub fn leakage(&self, indices: &[usize]) -> f64 {
        let mut inside = vec![false; self.dim];
        for &i in indices {
            inside[i] = true;
        }
        let mut worst: f64 = 0.0;
        for &j in indices {
            for (i, &flag) in inside.iter().enumerate() {
                if !flag {
                    worst = worst.max(self.get(i, j).norm()).max(self.get(j, i).norm());
                }
            }
        }
        worst
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        DenseOperator { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        DenseOperator { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul<f64> for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: f64) -> DenseOperator {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Amplitudes over the one-island basis |m⟩ = a₁*…a_m*Ω₀, m = 1..M
/// (stored with index m − 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainAmplitudes {
    pub coefficients: Vec<Complex64>,
}

impl ChainAmplitudes {
    /// The basis vector |m⟩ in an island of length `len`.
    pub fn basis(len: usize, m: usize) -> Result<Self> {
        if m < 1 || m > len {
            return domain(format!("island site {m} outside 1..={len}"));
        }
        let mut coefficients = vec![ZERO; len];
        coefficients[m - 1] = ONE;
        Ok(ChainAmplitudes { coefficients })
    }

    /// ⟨m|self⟩ for 1-based m.
    pub fn at(&self, m: usize) -> Complex64 {
        self.coefficients[m - 1]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.coefficients)
    }
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Hermitian eigendecomposition H = V diag(values) V†, values ascending.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Column k of this operator is the eigenvector for `values[k]`.
    pub vectors: DenseOperator,
}

impl Eigen {
    /// exp(−itH)ψ.
    pub fn evolve(&self, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        let n = self.values.len();
        check_dim(n, psi0.len())?;
        let v = &self.vectors;
        let mut coeff = vec![ZERO; n];
        for (k, c) in coeff.iter_mut().enumerate() {
            let mut acc = ZERO;
            for (i, p) in psi0.iter().enumerate() {
                acc += v.get(i, k).conj() * p;
            }
            *c = acc * Complex64::from_polar(1.0, -t * self.values[k]);
        }
        let mut out = vec![ZERO; n];
        for (i, o) in out.iter_mut().enumerate() {
            let row = &v.data[i * n..(i + 1) * n];
            *o = row.iter().zip(&coeff).map(|(a, b)| a * b).sum();
        }
        Ok(out)
    }

    /// ‖HV − VΛ‖_F.
    pub fn residual(&self, h: &DenseOperator) -> f64 {
        let n = self.values.len();
        let hv = h.matmul(&self.vectors).expect("dimensions checked at construction");
        let mut r = 0.0;
        for i in 0..n {
            for k in 0..n {
                r += (hv.get(i, k) - self.vectors.get(i, k) * self.values[k]).norm_sqr();
            }
        }
        r.sqrt()
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian operator.
pub fn eigh(h: &DenseOperator) -> Result<Eigen> {
    let scale = h.frobenius_norm().max(1e-300);
    let res = h.hermiticity_residual();
    if res > 1e-12 * scale.max(1.0) {
        return Err(Error::NotHermitian(res));
    }
    if h.is_real() && h.dim > JACOBI_MAX_REAL_DIM {
        Ok(householder_ql(h))
    } else if h.is_real() {
        Ok(jacobi_real(h))
    } else {
        Ok(jacobi_complex(h))
    }
}

const MAX_SWEEPS: usize = 100;

/// Larger real symmetric operators go through Householder reduction and
/// implicit QL, which is an order of magnitude faster than cyclic Jacobi.
const JACOBI_MAX_REAL_DIM: usize = 64;

fn rotation(a: f64, b: f64, r: f64) -> (f64, f64, f64) {
    let theta = (b - a) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    (t, c, t * c)
}

fn jacobi_real(h: &DenseOperator) -> Eigen {
    let n = h.dim;
    let mut a: Vec<f64> = h.data.iter().map(|z| z.re).collect();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().max(1e-300);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= 1e-32 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                if apq.abs() < 1e-18 * (app.abs() + aqq.abs()) {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let (t, c, s) = rotation(app, aqq, apq);
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let np = c * akp - s * akq;
                    let nq = s * akp + c * akq;
                    a[k * n + p] = np;
                    a[p * n + k] = np;
                    a[k * n + q] = nq;
                    a[q * n + k] = nq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    sorted(values, |i, k| Complex64::new(v[i * n + k], 0.0), n)
}

/// Householder tridiagonalization followed by the implicit QL iteration
/// (the EISPACK tred2/tql2 pair) for a real symmetric operator.
fn householder_ql(h: &DenseOperator) -> Eigen {
    let n = h.dim;
    let mut v: Vec<f64> = h.data.iter().map(|z| z.re).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut hh = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
                v[j * n + i] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                hh += *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = hh.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            hh -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                let f = d[j];
                v[j * n + i] = f;
                let mut g = e[j] + v[j * n + j] * f;
                for k in j + 1..i {
                    g += v[k * n + j] * d[k];
                    e[k] += v[k * n + j] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= hh;
                f += e[j] * d[j];
            }
            let hh2 = f / (hh + hh);
            for j in 0..i {
                e[j] -= hh2 * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
            }
        }
        d[i] = hh;
    }

    for i in 0..n.saturating_sub(1) {
        v[(n - 1) * n + i] = v[i * n + i];
        v[i * n + i] = 1.0;
        let hh = d[i + 1];
        if hh != 0.0 {
            for k in 0..=i {
                d[k] = v[k * n + i + 1] / hh;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k * n + i + 1] * v[k * n + j];
                }
                for k in 0..=i {
                    v[k * n + j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k * n + i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
        v[(n - 1) * n + j] = 0.0;
    }
    if n > 0 {
        v[(n - 1) * n + n - 1] = 1.0;
    }
    e[0] = 0.0;

    // Rows of w are the columns of v, so the QL rotations touch contiguous memory.
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            w[k * n + i] = v[i * n + k];
        }
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    if n > 0 {
        e[n - 1] = 0.0;
    }
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= f64::EPSILON * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            loop {
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut hh = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= hh;
                }
                f += hh;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    hh = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = hh + s * (c * g + s * d[i]);
                    let (lo, hi) = w.split_at_mut((i + 1) * n);
                    for (wk, wk1) in lo[i * n..].iter_mut().zip(&mut hi[..n]) {
                        let (a, b) = (*wk, *wk1);
                        *wk1 = s * a + c * b;
                        *wk = c * a - s * b;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= f64::EPSILON * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    sorted(d, |i, k| Complex64::new(w[k * n + i], 0.0), n)
}

fn jacobi_complex(h: &DenseOperator) -> Eigen {
    let n = h.dim;
    let mut a = h.data.clone();
    for i in 0..n {
        a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
    }
    let mut v = DenseOperator::identity(n).data;
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().max(1e-300);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off <= 1e-32 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let (app, aqq) = (a[p * n + p].re, a[q * n + q].re);
                if r < 1e-18 * (app.abs() + aqq.abs()) {
                    a[p * n + q] = ZERO;
                    a[q * n + p] = ZERO;
                    continue;
                }
                let w = apq / r;
                let wc = w.conj();
                let (t, c, s) = rotation(app, aqq, r);
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let np = akp * c - akq * wc * s;
                    let nq = akp * s + akq * wc * c;
                    a[k * n + p] = np;
                    a[p * n + k] = np.conj();
                    a[k * n + q] = nq;
                    a[q * n + k] = nq.conj();
                }
                a[p * n + p] = Complex64::new(app - t * r, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * r, 0.0);
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - vkq * wc * s;
                    v[k * n + q] = vkp * s + vkq * wc * c;
                }
            }
        }
    }
    let values: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    sorted(values, |i, k| v[i * n + k], n)
}

fn sorted(values: Vec<f64>, vec_entry: impl Fn(usize, usize) -> Complex64, n: usize) -> Eigen {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| values[x].total_cmp(&values[y]));
    let vectors = DenseOperator::from_fn(n, |i, k| vec_entry(i, order[k]));
    Eigen { values: order.iter().map(|&k| values[k]).collect(), vectors }
}

/// exp(−itH)ψ₀ via eigendecomposition.
pub fn evolve(h: &DenseOperator, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    check_dim(h.dim, psi0.len())?;
    let n2 = norm_sqr(psi0);
    if (n2 - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized(n2));
    }
    eigh(h)?.evolve(psi0, t)
}

/// ⟨ψ|A|ψ⟩, real when A is Hermitian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Expectation {
    Real(f64),
    Complex(Complex64),
}

impl Expectation {
    pub fn re(self) -> f64 {
        match self {
            Expectation::Real(x) => x,
            Expectation::Complex(z) => z.re,
        }
    }

    pub fn value(self) -> Complex64 {
        match self {
            Expectation::Real(x) => Complex64::new(x, 0.0),
            Expectation::Complex(z) => z,
        }
    }
}

pub fn expectation(psi: &[Complex64], a: &DenseOperator) -> Result<Expectation> {
    let av = a.matvec(psi)?;
    let z = inner(psi, &av);
    if a.is_hermitian(1e-14 * a.frobenius_norm().max(1.0)) {
        debug_assert!(z.im.abs() < 1e-10 * (1.0 + z.re.abs()));
        Ok(Expectation::Real(z.re))
    } else {
        Ok(Expectation::Complex(z))
    }
}

/// LU factorisation with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &DenseOperator) -> Result<Self> {
        let n = a.dim;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.frobenius_norm().max(1e-300);
        for col in 0..n {
            let (piv, best) = (col..n)
                .map(|r| (r, lu[r * n + col].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("non-empty pivot range");
            if best <= 1e-14 * scale {
                return Err(Error::Singular(format!("pivot {best:.3e} in column {col}")));
            }
            if piv != col {
                for k in 0..n {
                    lu.swap(piv * n + k, col * n + k);
                }
                perm.swap(piv, col);
            }
            let d = lu[col * n + col];
            for r in col + 1..n {
                let f = lu[r * n + col] / d;
                lu[r * n + col] = f;
                if f == ZERO {
                    continue;
                }
                for k in col + 1..n {
                    let u = lu[col * n + k];
                    lu[r * n + k] -= f * u;
                }
            }
        }
        Ok(Lu { n, lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n;
        check_dim(n, b.len())?;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.lu[i * n + k] * x[k];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.lu[i * n + k] * x[k];
            }
            x[i] = s / self.lu[i * n + i];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<DenseOperator> {
        let n = self.n;
        let mut out = DenseOperator::zeros(n);
        let mut e = vec![ZERO; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = ZERO);
            e[j] = ONE;
            let col = self.solve(&e)?;
            for (i, c) in col.into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        Ok(out)
    }
}

pub fn solve(a: &DenseOperator, b: &[Complex64]) -> Result<Vec<Complex64>> {
    Lu::new(a)?.solve(b)
}

/// Single-site operators in the local basis (index 0 = down, 1 = up).
pub mod spin {
    use super::*;

    pub fn raising() -> DenseOperator {
        DenseOperator::from_real(2, |i, j| if i == 1 && j == 0 { 1.0 } else { 0.0 })
    }

    pub fn lowering() -> DenseOperator {
        DenseOperator::from_real(2, |i, j| if i == 0 && j == 1 { 1.0 } else { 0.0 })
    }

    /// a*a, projector onto spin up.
    pub fn up() -> DenseOperator {
        DenseOperator::diagonal(&[0.0, 1.0])
    }

    /// a a*, projector onto spin down.
    pub fn down() -> DenseOperator {
        DenseOperator::diagonal(&[1.0, 0.0])
    }

    /// a* + a.
    pub fn flip() -> DenseOperator {
        DenseOperator::from_real(2, |i, j| if i != j { 1.0 } else { 0.0 })
    }

    /// 1 − 2a*a, the Jordan–Wigner string factor.
    pub fn parity() -> DenseOperator {
        DenseOperator::diagonal(&[1.0, -1.0])
    }

    /// Tensor product over sites 1..=n_sites with the given 2×2 blocks at
    /// their (1-based) positions and identities elsewhere. Site 1 is the
    /// leftmost tensor factor.
    pub fn embed(n_sites: usize, ops: &[(usize, DenseOperator)]) -> DenseOperator {
        let mut out = DenseOperator::identity(1);
        for site in 1..=n_sites {
            let mut local = DenseOperator::identity(2);
            for (s, op) in ops {
                if *s == site {
                    local = local.matmul(op).expect("2x2 blocks");
                }
            }
            out = out.kron(&local);
        }
        out
    }

    /// Basis index of the product state with the listed sites up.
    pub fn product_index(n_sites: usize, up_sites: impl IntoIterator<Item = usize>) -> usize {
        up_sites.into_iter().fold(0, |acc, s| acc | (1 << (n_sites - s)))
    }

    /// Whether site `s` is up in basis state `index`.
    pub fn is_up(n_sites: usize, index: usize, s: usize) -> bool {
        index >> (n_sites - s) & 1 == 1
    }
}

/// H_N: the island Hamiltonian, tridiagonal with unit off-diagonals.
pub fn build_island_hamiltonian(n: usize) -> Result<DenseOperator> {
    if n < 1 {
        return domain("island length must be at least 1");
    }
    Ok(DenseOperator::from_real(n, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 }))
}

/// Σ_n a_n*a_n (a_{n+1}* + a_{n+1}) a_{n+2}a_{n+2}* over the available
/// triples of an open chain of `n_sites` spins.
pub fn build_full_chain_hamiltonian(n_sites: usize) -> Result<DenseOperator> {
    if !(3..=MAX_FULL_CHAIN_SITES).contains(&n_sites) {
        return domain(format!("full chain needs 3 ≤ n_sites ≤ {MAX_FULL_CHAIN_SITES}, got {n_sites}"));
    }
    let mut h = DenseOperator::zeros(1 << n_sites);
    for n in 1..=n_sites - 2 {
        let term = spin::embed(n_sites, &[(n, spin::up()), (n + 1, spin::flip()), (n + 2, spin::down())]);
        h = &h + &term;
    }
    Ok(h)
}

/// g_j = a_j a_j* a_{j+1}* a_{j+1}: site j down and site j+1 up.
pub fn integral_of_motion(n_sites: usize, j: usize) -> Result<DenseOperator> {
    if j < 1 || j >= n_sites {
        return domain(format!("g_j needs 1 ≤ j < {n_sites}, got {j}"));
    }
    Ok(spin::embed(n_sites, &[(j, spin::down()), (j + 1, spin::up())]))
}

/// Full-space vector of the island state |m⟩ (sites 1..=m up).
pub fn island_state(n_sites: usize, m: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; 1 << n_sites];
    v[spin::product_index(n_sites, 1..=m)] = ONE;
    v
}
