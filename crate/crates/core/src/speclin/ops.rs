use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use super::band::BandMatrix;
use super::series::ChebSeries;

/// Relative tolerance below which trailing multiplier coefficients are dropped.
pub const MULT_TRUNCATION_TOL: f64 = 1e-14;

/// Infinite banded operator between coefficient spaces.
#[derive(Clone, Debug)]
pub enum BandedOp {
    Identity,
    /// `C^(from) -> C^(to)`.
    Conversion { from: u32, to: u32 },
    /// `order`-th derivative, `C^(from) -> C^(from + order)`.
    Derivative { from: u32, order: u32 },
    /// Multiplication by a function whose coefficients are given in `C^(lambda)`.
    Multiplication { coeffs: Vec<C64>, lambda: u32 },
    /// `ops[0] * ops[1] * ...` (the last factor acts first).
    Product(Vec<BandedOp>),
    Sum(Vec<(C64, BandedOp)>),
    /// A precomputed section; exact for any section size up to its dimension.
    Materialized(Arc<BandMatrix>),
}

impl BandedOp {
    pub fn conversion(from: u32, to: u32) -> Self {
        assert!(to >= from, "conversion only goes upwards");
        if to == from {
            Self::Identity
        } else {
            Self::Conversion { from, to }
        }
    }

    pub fn derivative(from: u32, order: u32) -> Self {
        if order == 0 {
            Self::Identity
        } else {
            Self::Derivative { from, order }
        }
    }

    /// Multiplication by `f` (Chebyshev coefficients) acting in `C^(lambda)`.
    /// Trailing coefficients below `MULT_TRUNCATION_TOL * max|c|` are dropped.
    pub fn multiplication(f: &ChebSeries, lambda: u32) -> Self {
        assert_eq!(f.basis(), 0, "multiplier must be a Chebyshev series");
        let scale = f.max_abs_coeff();
        let t = f.clone().trimmed(MULT_TRUNCATION_TOL * scale);
        let c = t.to_basis(lambda);
        Self::Multiplication { coeffs: c.into_coeffs(), lambda }
    }

    /// Bandwidths `(lower, upper)`; lower bandwidths of derivatives are
    /// reported as zero (a superset of the true sparsity).
    pub fn bandwidths(&self) -> (usize, usize) {
        match self {
            Self::Identity => (0, 0),
            Self::Conversion { from, to } => (0, 2 * (to - from) as usize),
            Self::Derivative { order, .. } => (0, *order as usize),
            Self::Multiplication { coeffs, .. } => {
                let m = coeffs.len() - 1;
                (m, m)
            }
            Self::Product(ops) => ops.iter().fold((0, 0), |(l, u), op| {
                let (a, b) = op.bandwidths();
                (l + a, u + b)
            }),
            Self::Sum(terms) => terms.iter().fold((0, 0), |(l, u), (_, op)| {
                let (a, b) = op.bandwidths();
                (l.max(a), u.max(b))
            }),
            Self::Materialized(m) => (m.lower(), m.upper()),
        }
    }

    /// Exact leading `n x n` section of the infinite operator.
    pub fn section(&self, n: usize) -> BandMatrix {
        match self {
            Self::Identity => BandMatrix::identity(n),
            Self::Conversion { from, to } => {
                let mut m = BandMatrix::identity(n);
                for lam in *from..*to {
                    m = conversion_section(lam, n).mul(&m);
                }
                m
            }
            Self::Derivative { from, order } => derivative_section(*from, *order, n),
            Self::Multiplication { coeffs, lambda } => multiplication_section(coeffs, *lambda, n),
            Self::Product(ops) => {
                if ops.is_empty() {
                    return BandMatrix::identity(n);
                }
                let margin: usize = ops
                    .iter()
                    .map(|op| {
                        let (l, u) = op.bandwidths();
                        l + u
                    })
                    .sum();
                let big = n + margin;
                let mut acc = ops[0].section(big);
                for op in &ops[1..] {
                    acc = acc.mul(&op.section(big));
                }
                acc.crop(n, n)
            }
            Self::Sum(terms) => {
                let (l, u) = self.bandwidths();
                let mut acc = BandMatrix::zeros(n, n, l, u);
                for (a, op) in terms {
                    match op {
                        Self::Materialized(m) => {
                            assert!(n <= m.rows(), "materialized operator too small for section {n}");
                            acc.add_block(*a, m);
                        }
                        _ => acc.add_block(*a, &op.section(n)),
                    }
                }
                acc
            }
            Self::Materialized(m) => {
                assert!(n <= m.rows(), "materialized operator too small for section {n}");
                m.crop(n, n)
            }
        }
    }

    pub fn materialize(&self, n: usize) -> Self {
        Self::Materialized(Arc::new(self.section(n)))
    }

    /// Applies the operator to a finite series (exact).
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let (l, _) = self.bandwidths();
        let k = x.len() + l;
        let a = self.section(k);
        a.matvec(x)
    }
}

/// `S_lam : C^(lam) -> C^(lam+1)`.
pub fn conversion_section(lam: u32, n: usize) -> BandMatrix {
    let mut m = BandMatrix::zeros(n, n, 0, 2);
    let lf = lam as f64;
    for k in 0..n {
        let kf = k as f64;
        let (d, e) = if lam == 0 { (if k == 0 { 1.0 } else { 0.5 }, -0.5) } else { (lf / (kf + lf), -lf / (kf + lf)) };
        m.set(k, k, C64::new(d, 0.0));
        if k >= 2 {
            m.set(k - 2, k, C64::new(e, 0.0));
        }
    }
    m
}

/// `D^order : C^(from) -> C^(from+order)`.
pub fn derivative_section(from: u32, order: u32, n: usize) -> BandMatrix {
    let k = order as usize;
    let mut m = BandMatrix::zeros(n, n, 0, k);
    for col in k..n {
        let v = if from == 0 {
            // d^k T_n / dx^k = 2^(k-1) (k-1)! n C^(k)_(n-k)
            let mut f = 1.0;
            for j in 1..k {
                f *= j as f64;
            }
            (1u64 << (k - 1)) as f64 * f * col as f64
        } else {
            let mut f = 1.0;
            for j in 0..k {
                f *= 2.0 * (from as f64 + j as f64);
            }
            f
        };
        m.set(col - k, col, C64::new(v, 0.0));
    }
    m
}

/// Three-term recurrence `phi_{j+1} = a_j x phi_j - b_j phi_{j-1}` in `C^(lam)`.
fn recurrence(lam: u32, j: usize) -> (f64, f64) {
    if lam == 0 {
        (if j == 0 { 1.0 } else { 2.0 }, 1.0)
    } else {
        let (jf, lf) = (j as f64, lam as f64);
        (2.0 * (jf + lf) / (jf + 1.0), (jf + 2.0 * lf - 1.0) / (jf + 1.0))
    }
}

/// Multiplication by `x` acting in `C^(lam)`.
fn x_section(lam: u32, n: usize) -> BandMatrix {
    let mut m = BandMatrix::zeros(n, n, 1, 1);
    let lf = lam as f64;
    for k in 0..n {
        let kf = k as f64;
        let (up, down) = if lam == 0 {
            (if k == 0 { 1.0 } else { 0.5 }, 0.5)
        } else {
            ((kf + 1.0) / (2.0 * (kf + lf)), (kf + 2.0 * lf - 1.0) / (2.0 * (kf + lf)))
        };
        if k + 1 < n {
            m.set(k + 1, k, C64::new(up, 0.0));
        }
        if k >= 1 {
            m.set(k - 1, k, C64::new(down, 0.0));
        }
    }
    m
}

/// Section of `M_lam[f]` with `f = sum_j c_j phi_j`, built from the operator
/// recurrence on an enlarged section and cropped, so the result is exact.
pub fn multiplication_section(c: &[C64], lam: u32, n: usize) -> BandMatrix {
    let m = c.len().saturating_sub(1);
    if m == 0 {
        let mut out = BandMatrix::identity(n);
        for i in 0..n {
            out.set(i, i, c.first().copied().unwrap_or_default());
        }
        return out;
    }
    let big = n + m + 1;
    let x = x_section(lam, big);
    let mut acc = BandMatrix::zeros(big, big, m, m);
    let mut prev = BandMatrix::identity(big);
    let (a0, _) = recurrence(lam, 0);
    let mut cur = x.clone();
    scale_in_place(&mut cur, a0);
    acc = acc.add_scaled(c[0], &prev);
    acc = acc.add_scaled(c[1], &cur);
    for j in 1..m {
        let (aj, bj) = recurrence(lam, j);
        let mut next = x.mul(&cur);
        scale_in_place(&mut next, aj);
        next = next.add_scaled(C64::new(-bj, 0.0), &prev);
        acc = acc.add_scaled(c[j + 1], &next);
        prev = cur;
        cur = next;
    }
    acc.crop(n, n)
}

fn scale_in_place(m: &mut BandMatrix, a: f64) {
    let (r, c) = (m.rows(), m.cols());
    for i in 0..r {
        let (lo, hi) = m.row_range(i);
        for j in lo..hi.min(c) {
            let v = m.get(i, j);
            m.set(i, j, v * a);
        }
    }
}

/// Linear functional on Chebyshev coefficients.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryRow {
    /// `d^order/dx^order u` at `x = at`, `at` being `-1.0` or `1.0`.
    Derivative { order: u32, at: f64 },
    /// Explicit coefficients; entries beyond the vector are zero.
    Coeffs(Vec<C64>),
}

impl BoundaryRow {
    pub fn value(at: f64) -> Self {
        Self::Derivative { order: 0, at }
    }

    pub fn row(&self, n: usize) -> Vec<C64> {
        match self {
            Self::Derivative { order, at } => (0..n).map(|k| C64::new(chebyshev_derivative_at_end(k, *order, *at), 0.0)).collect(),
            Self::Coeffs(c) => {
                let mut v = vec![C64::new(0.0, 0.0); n];
                for (dst, src) in v.iter_mut().zip(c) {
                    *dst = *src;
                }
                v
            }
        }
    }

    pub fn apply(&self, x: &[C64]) -> C64 {
        self.row(x.len()).iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// `T_k^(d)(+-1) = (+-1)^(k+d) prod_{j<d} (k^2 - j^2) / (2j + 1)`.
pub fn chebyshev_derivative_at_end(k: usize, d: u32, at: f64) -> f64 {
    let kf = k as f64;
    let mut v = 1.0;
    for j in 0..d {
        let jf = j as f64;
        v *= (kf * kf - jf * jf) / (2.0 * jf + 1.0);
    }
    if at < 0.0 && (k + d as usize) % 2 == 1 {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn end_derivatives_match_closed_forms() {
        for k in 0..12 {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(chebyshev_derivative_at_end(k, 0, 1.0), 1.0);
            assert_eq!(chebyshev_derivative_at_end(k, 0, -1.0), s);
            assert_eq!(chebyshev_derivative_at_end(k, 1, -1.0), -s * (k * k) as f64);
        }
        // T_3 = 4x^3 - 3x, T_3'' = 24x.
        assert_eq!(chebyshev_derivative_at_end(3, 2, 1.0), 24.0);
        assert_eq!(chebyshev_derivative_at_end(3, 2, -1.0), -24.0);
    }
}
