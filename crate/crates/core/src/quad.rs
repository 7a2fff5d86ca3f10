//! Clenshaw-Curtis quadrature.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Nodes `cos(pi k / n)` and weights for `npts = n + 1` points on `[-1, 1]`.
pub fn clenshaw_curtis(npts: usize) -> (Vec<f64>, Vec<f64>) {
    if npts <= 1 {
        return (vec![0.0], vec![2.0]);
    }
    let n = npts - 1;
    let nf = n as f64;
    let x: Vec<f64> = (0..=n).map(|k| (PI * k as f64 / nf).cos()).collect();
    let mut w = vec![0.0; npts];
    for (k, wk) in w.iter_mut().enumerate() {
        let theta = PI * k as f64 / nf;
        let mut s = 1.0;
        for j in 1..=n / 2 {
            let b = if 2 * j == n { 1.0 } else { 2.0 };
            s -= b * (2.0 * j as f64 * theta).cos() / (4.0 * (j * j) as f64 - 1.0);
        }
        let c = if k == 0 || k == n { 1.0 } else { 2.0 };
        *wk = c * s / nf;
    }
    (x, w)
}

/// `int_a^b f` on one Clenshaw-Curtis rule with `npts` points.
pub fn integrate<T, F>(f: F, a: f64, b: f64, npts: usize) -> T
where
    T: Default + core::ops::Add<Output = T> + core::ops::Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    let (x, w) = clenshaw_curtis(npts);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter().zip(&w).fold(T::default(), |acc, (&xi, &wi)| acc + f(mid + half * xi) * (wi * half))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [2, 3, 9, 33] {
            let (_, w) = clenshaw_curtis(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        let v: f64 = integrate(|x: f64| x.powi(6) - 3.0 * x, 0.0, 2.0, 9);
        assert!((v - (128.0 / 7.0 - 6.0)).abs() < 1e-13);
    }
}
