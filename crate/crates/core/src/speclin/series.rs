use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quad::clenshaw_curtis;

/// Finite expansion in Chebyshev (`basis == 0`) or ultraspherical `C^(basis)`
/// polynomials on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebSeries {
    coeffs: Vec<C64>,
    basis: u32,
}

impl ChebSeries {
    pub fn new(coeffs: Vec<C64>, basis: u32) -> Self {
        let coeffs = if coeffs.is_empty() { vec![C64::new(0.0, 0.0)] } else { coeffs };
        Self { coeffs, basis }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect(), 0)
    }

    pub fn zero(basis: u32) -> Self {
        Self::new(vec![C64::new(0.0, 0.0)], basis)
    }

    pub fn constant(c: f64) -> Self {
        Self::from_real(&[c])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn basis(&self) -> u32 {
        self.basis
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Clenshaw evaluation in the series' own basis.
    pub fn eval(&self, x: f64) -> C64 {
        let c = &self.coeffs;
        let lam = self.basis as f64;
        let mut b1 = C64::new(0.0, 0.0);
        let mut b2 = C64::new(0.0, 0.0);
        if self.basis == 0 {
            for k in (1..c.len()).rev() {
                let b0 = c[k] + b1 * (2.0 * x) - b2;
                b2 = b1;
                b1 = b0;
            }
            return c[0] + b1 * x - b2;
        }
        // phi_{k+1} = alpha_k x phi_k - beta_k phi_{k-1},
        // alpha_k = 2(k+lam)/(k+1), beta_k = (k+2lam-1)/(k+1).
        for k in (1..c.len()).rev() {
            let kf = k as f64;
            let alpha = 2.0 * (kf + lam) / (kf + 1.0);
            let beta_next = (kf + 1.0 + 2.0 * lam - 1.0) / (kf + 2.0);
            let b0 = c[k] + b1 * (alpha * x) - b2 * beta_next;
            b2 = b1;
            b1 = b0;
        }
        // phi_1 = 2 lam x, phi_0 = 1, beta_1 = 2 lam / 2 = lam.
        c[0] + b1 * (2.0 * lam * x) - b2 * lam
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.eval(x).re
    }

    /// Drops trailing coefficients with modulus at most `tol`, keeping at least one.
    pub fn trimmed(mut self, tol: f64) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().map_or(false, |c| c.norm() <= tol) {
            self.coeffs.pop();
        }
        self
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        let s = self.max_abs_coeff().max(f64::MIN_POSITIVE);
        self.coeffs.iter().all(|c| c.im.abs() <= tol * s)
    }

    pub fn scale(&self, a: C64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * a).collect(), self.basis)
    }

    pub fn real_part(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| C64::new(c.re, 0.0)).collect(), self.basis)
    }

    /// `self + a * other`; both series must share a basis.
    pub fn axpy(&mut self, a: C64, other: &ChebSeries) {
        debug_assert_eq!(self.basis, other.basis);
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), C64::new(0.0, 0.0));
        }
        for (s, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *s += a * o;
        }
    }

    /// Coefficients from values at the points `cos(pi k / n)`, `k = 0..=n`.
    pub fn from_samples(samples: &[C64]) -> Result<Self> {
        cheb_transform(samples).map(|c| Self::new(c, 0))
    }

    /// Adaptive interpolation of a complex function: doubles the grid until the
    /// tail falls below `tol` relative to the largest coefficient.
    pub fn from_fn<F: Fn(f64) -> C64>(f: F, tol: f64) -> Self {
        let mut n = 16;
        loop {
            let samples: Vec<C64> = (0..=n).map(|k| f((PI * k as f64 / n as f64).cos())).collect();
            let c = cheb_transform(&samples).expect("non-empty");
            let scale = c.iter().fold(0.0f64, |m, x| m.max(x.norm()));
            // Sample rounding leaves a noise floor that grows slowly with n.
            let floor = tol.max(4.0 * f64::EPSILON * (n as f64).sqrt());
            let tail_len = (n / 8).max(4);
            let tail = c[c.len() - tail_len..].iter().fold(0.0f64, |m, x| m.max(x.norm()));
            if tail <= floor * scale || scale == 0.0 || n >= 1 << 16 {
                return Self::new(c, 0).trimmed(tol.max(2.0 * f64::EPSILON) * scale);
            }
            n *= 2;
        }
    }

    pub fn from_fn_real<F: Fn(f64) -> f64>(f: F, tol: f64) -> Self {
        Self::from_fn(|x| C64::new(f(x), 0.0), tol)
    }

    /// Derivative of a Chebyshev series, returned in the Chebyshev basis.
    pub fn derivative_t(&self) -> Self {
        assert_eq!(self.basis, 0, "derivative_t expects a Chebyshev series");
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::zero(0);
        }
        let c = &self.coeffs;
        let mut d = vec![C64::new(0.0, 0.0); n + 1];
        for k in (0..n - 1).rev() {
            d[k] = d[k + 2] + c[k + 1] * (2.0 * (k + 1) as f64);
        }
        d[0] *= 0.5;
        d.truncate(n - 1);
        Self::new(d, 0)
    }

    /// Exact change of basis upwards through the conversion chain.
    pub fn to_basis(&self, target: u32) -> Self {
        assert!(target >= self.basis, "to_basis only converts upwards");
        let mut c = self.coeffs.clone();
        for lam in self.basis..target {
            convert_up(&mut c, lam);
        }
        Self::new(c, target)
    }

    /// Exact change of basis back to Chebyshev by back substitution.
    pub fn to_chebyshev(&self) -> Self {
        let mut c = self.coeffs.clone();
        for lam in (0..self.basis).rev() {
            convert_down(&mut c, lam);
        }
        Self::new(c, 0)
    }

    /// `sqrt(int_{-1}^{1} w(x) |f(x)|^2 dx)` by Clenshaw-Curtis quadrature on
    /// enough points to integrate `|f|^2` exactly when `w` is constant.
    pub fn l2_norm_weighted<W: Fn(f64) -> f64>(&self, w: W) -> f64 {
        let (x, q) = clenshaw_curtis(2 * self.coeffs.len() + 2);
        let s: f64 = x.iter().zip(&q).map(|(&xi, &qi)| qi * w(xi) * self.eval(xi).norm_sqr()).sum();
        s.max(0.0).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_weighted(|_| 1.0)
    }
}

/// Conversion `C^(lam) -> C^(lam+1)` in place (`lam = 0` is Chebyshev `T`).
fn convert_up(c: &mut [C64], lam: u32) {
    let n = c.len();
    let lf = lam as f64;
    for k in 0..n {
        let (d, e) = if lam == 0 {
            (if k == 0 { 1.0 } else { 0.5 }, -0.5)
        } else {
            let kf = k as f64;
            (lf / (kf + lf), -lf / (kf + 2.0 + lf))
        };
        let next = if k + 2 < n { c[k + 2] } else { C64::new(0.0, 0.0) };
        c[k] = c[k] * d + next * e;
    }
}

/// Inverse of [`convert_up`]: the conversion is upper triangular with unit
/// structure, so back substitution from the last coefficient is exact.
fn convert_down(c: &mut [C64], lam: u32) {
    let n = c.len();
    let lf = lam as f64;
    for k in (0..n).rev() {
        let (d, e) = if lam == 0 {
            (if k == 0 { 1.0 } else { 0.5 }, -0.5)
        } else {
            let kf = k as f64;
            (lf / (kf + lf), -lf / (kf + 2.0 + lf))
        };
        let next = if k + 2 < n { c[k + 2] } else { C64::new(0.0, 0.0) };
        c[k] = (c[k] - next * e) / d;
    }
}

/// Chebyshev coefficients from values at the second-kind points
/// `x_k = cos(pi k / n)`, `k = 0..=n` (`x_0 = 1`), via a direct DCT-I.
pub fn cheb_transform(samples: &[C64]) -> Result<Vec<C64>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let n = samples.len() - 1;
    if n == 0 {
        return Ok(vec![samples[0]]);
    }
    let table: Vec<f64> = (0..2 * n).map(|m| (PI * m as f64 / n as f64).cos()).collect();
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut s = C64::new(0.0, 0.0);
        for (k, &f) in samples.iter().enumerate() {
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            s += f * (w * table[(j * k) % (2 * n)]);
        }
        let mut c = s * (2.0 / n as f64);
        if j == 0 || j == n {
            c *= 0.5;
        }
        out.push(c);
    }
    Ok(out)
}
