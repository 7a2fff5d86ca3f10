use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::ops::{BandedOp, BoundaryRow};
use super::series::ChebSeries;
use crate::error::{Error, Result};

/// `[B; A] u = [c; f]`: dense boundary functionals on top of a banded operator.
#[derive(Clone, Debug)]
pub struct AlmostBandedSystem {
    pub op: BandedOp,
    pub boundary: Vec<BoundaryRow>,
    pub rhs: ChebSeries,
    pub rhs_boundary: Vec<C64>,
}

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

impl AlmostBandedSystem {
    /// Right-hand side of the truncated `n x n` system.
    fn truncated_rhs(&self, n: usize) -> Vec<C64> {
        let p = self.boundary.len();
        let mut f = vec![ZERO; n];
        for (q, &c) in self.rhs_boundary.iter().enumerate().take(p.min(n)) {
            f[q] = c;
        }
        for i in 0..n.saturating_sub(p) {
            f[p + i] = self.rhs.coeff(i);
        }
        f
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if n == 0 || n <= self.boundary.len() {
            return Err(Error::InvalidParameter("truncation size must exceed the number of boundary rows"));
        }
        if self.rhs_boundary.len() != self.boundary.len() {
            return Err(Error::InvalidParameter("boundary data length mismatch"));
        }
        Ok(())
    }
}

struct ActiveRow {
    vals: Vec<C64>,
    coef: Vec<C64>,
    rhs: C64,
}

/// Solves the `n x n` truncation by Givens QR that keeps the fill-in from the
/// dense rows in low-rank form: each active row stores its entries inside a
/// sliding window plus coefficients on the original boundary rows.
pub fn solve_almost_banded(sys: &AlmostBandedSystem, n: usize) -> Result<ChebSeries> {
    sys.check_size(n)?;
    let p = sys.boundary.len();
    let a = sys.op.section(n);
    let lb = a.lower() + p;
    let ub = a.upper().saturating_sub(p);
    let w = lb + ub;
    let bnd: Vec<Vec<C64>> = sys.boundary.iter().map(|b| b.row(n)).collect();
    let f = sys.truncated_rhs(n);

    let mut scale = a.max_abs();
    for row in &bnd {
        scale = row.iter().fold(scale, |m, c| m.max(c.norm()));
    }
    let tiny = 1e-15 * scale;

    let orig = |r: usize, j: usize| -> C64 {
        if r < p {
            bnd[r][j]
        } else {
            a.get(r - p, j)
        }
    };

    let mut active: VecDeque<ActiveRow> = VecDeque::with_capacity(lb + 1);
    let mut next_row = 0usize;
    let mut r_vals: Vec<C64> = Vec::with_capacity(n * (w + 1));
    let mut r_coef: Vec<C64> = Vec::with_capacity(n * p);
    let mut r_rhs: Vec<C64> = Vec::with_capacity(n);

    for k in 0..n {
        let last = (k + lb).min(n - 1);
        while next_row <= last {
            let r = next_row;
            let mut vals = vec![ZERO; w + 1];
            for (off, v) in vals.iter_mut().enumerate() {
                let j = k + off;
                if j < n {
                    *v = orig(r, j);
                }
            }
            let mut coef = vec![ZERO; p];
            if r < p {
                coef[r] = C64::new(1.0, 0.0);
            }
            active.push_back(ActiveRow { vals, coef, rhs: f[r] });
            next_row += 1;
        }

        let (head, rest) = active.as_mut_slices();
        let (top, others) = match head.split_first_mut() {
            Some((t, o)) => (t, o),
            None => return Err(Error::Singular { column: k }),
        };
        for row in others.iter_mut().chain(rest.iter_mut()) {
            rotate(top, row);
        }

        if top.vals[0].norm() <= tiny {
            return Err(Error::Singular { column: k });
        }
        let done = active.pop_front().expect("active row");
        r_vals.extend_from_slice(&done.vals);
        r_coef.extend_from_slice(&done.coef);
        r_rhs.push(done.rhs);

        let newcol = k + 1 + w;
        for row in active.iter_mut() {
            row.vals.rotate_left(1);
            let mut v = ZERO;
            if newcol < n {
                for (q, c) in row.coef.iter().enumerate() {
                    if *c != ZERO {
                        v += c * bnd[q][newcol];
                    }
                }
            }
            row.vals[w] = v;
        }
    }

    // Back substitution; `tail[q]` holds sum_{j > k + w} B_q[j] x_j.
    let mut x = vec![ZERO; n];
    let mut tail = vec![ZERO; p];
    for k in (0..n).rev() {
        let m = k + w + 1;
        if m < n {
            for q in 0..p {
                tail[q] += bnd[q][m] * x[m];
            }
        }
        let vals = &r_vals[k * (w + 1)..(k + 1) * (w + 1)];
        let mut s = r_rhs[k];
        for off in 1..=w {
            let j = k + off;
            if j >= n {
                break;
            }
            s -= vals[off] * x[j];
        }
        for q in 0..p {
            s -= r_coef[k * p + q] * tail[q];
        }
        x[k] = s / vals[0];
    }
    Ok(ChebSeries::new(x, 0))
}

/// Givens rotation zeroing `row.vals[0]` against `top.vals[0]`.
#[inline]
fn rotate(top: &mut ActiveRow, row: &mut ActiveRow) {
    let a = top.vals[0];
    let b = row.vals[0];
    if b == ZERO {
        return;
    }
    let rho = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = a / rho;
    let s = b / rho;
    let (cc, sc) = (c.conj(), s.conj());
    for (t, r) in top.vals.iter_mut().zip(row.vals.iter_mut()) {
        let (x, y) = (*t, *r);
        *t = cc * x + sc * y;
        *r = -s * x + c * y;
    }
    for (t, r) in top.coef.iter_mut().zip(row.coef.iter_mut()) {
        let (x, y) = (*t, *r);
        *t = cc * x + sc * y;
        *r = -s * x + c * y;
    }
    let (x, y) = (top.rhs, row.rhs);
    top.rhs = cc * x + sc * y;
    row.rhs = -s * x + c * y;
    row.vals[0] = ZERO;
}

/// Dense LU with partial pivoting on the same truncation; O(n^3).
pub fn solve_dense(sys: &AlmostBandedSystem, n: usize) -> Result<ChebSeries> {
    sys.check_size(n)?;
    let p = sys.boundary.len();
    let a = sys.op.section(n);
    let mut m: Vec<Vec<C64>> = sys.boundary.iter().map(|b| b.row(n)).collect();
    for i in 0..n - p {
        m.push((0..n).map(|j| a.get(i, j)).collect());
    }
    let mut f = sys.truncated_rhs(n);
    let scale = m.iter().flatten().fold(0.0f64, |s, c| s.max(c.norm()));
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm())).expect("non-empty");
        if m[piv][k].norm() <= 1e-15 * scale {
            return Err(Error::Singular { column: k });
        }
        m.swap(k, piv);
        f.swap(k, piv);
        let (upper, lower) = m.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        for (i, row) in lower.iter_mut().enumerate() {
            let l = row[k] / pivot_row[k];
            if l == ZERO {
                continue;
            }
            for j in k..n {
                row[j] -= l * pivot_row[j];
            }
            let fk = f[k];
            f[k + 1 + i] -= l * fk;
        }
    }
    let mut x = vec![ZERO; n];
    for k in (0..n).rev() {
        let mut s = f[k];
        for j in k + 1..n {
            s -= m[k][j] * x[j];
        }
        x[k] = s / m[k][k];
    }
    Ok(ChebSeries::new(x, 0))
}

/// Euclidean norm of the residual of the infinite system for `candidate`,
/// including boundary mismatches; the operator action is evaluated exactly on
/// at least `n_ext` coefficients.
pub fn residual_norm(sys: &AlmostBandedSystem, candidate: &ChebSeries, n_ext: usize) -> f64 {
    let r = residual_vector(sys, candidate.coeffs(), n_ext);
    let bc: f64 = boundary_mismatch(sys, candidate.coeffs()).iter().map(|c| c.norm_sqr()).sum();
    (r.iter().map(|c| c.norm_sqr()).sum::<f64>() + bc).sqrt()
}

/// `A x - f` as a coefficient vector in the range basis.
pub fn residual_vector(sys: &AlmostBandedSystem, x: &[C64], n_ext: usize) -> Vec<C64> {
    let (l, _) = sys.op.bandwidths();
    let n = n_ext.max(x.len() + l).max(sys.rhs.len());
    let a = sys.op.section(n);
    let mut r = a.matvec(x);
    for (i, ri) in r.iter_mut().enumerate() {
        *ri -= sys.rhs.coeff(i);
    }
    r
}

pub fn boundary_mismatch(sys: &AlmostBandedSystem, x: &[C64]) -> Vec<C64> {
    sys.boundary.iter().zip(&sys.rhs_boundary).map(|(b, &c)| b.apply(x) - c).collect()
}
