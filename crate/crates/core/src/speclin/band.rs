use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

/// Finite banded matrix stored row by row; `lower`/`upper` are bandwidths
/// (entry `(i, j)` may be nonzero only when `i - lower <= j <= i + upper`).
#[derive(Clone, Debug, PartialEq)]
pub struct BandMatrix {
    rows: usize,
    cols: usize,
    lower: usize,
    upper: usize,
    data: Vec<C64>,
}

impl BandMatrix {
    pub fn zeros(rows: usize, cols: usize, lower: usize, upper: usize) -> Self {
        let width = lower + upper + 1;
        Self { rows, cols, lower, upper, data: vec![C64::new(0.0, 0.0); rows * width] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n, 0, 0);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.rows || j >= self.cols || j + self.lower < i || j > i + self.upper {
            return None;
        }
        Some(i * (self.lower + self.upper + 1) + (j + self.lower - i))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.slot(i, j).map_or(C64::new(0.0, 0.0), |s| self.data[s])
    }

    /// Panics if `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        let s = self.slot(i, j).expect("entry outside band");
        self.data[s] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: C64) {
        let s = self.slot(i, j).expect("entry outside band");
        self.data[s] += v;
    }

    /// Column range `[lo, hi)` of row `i` inside the band.
    #[inline]
    pub fn row_range(&self, i: usize) -> (usize, usize) {
        let lo = i.saturating_sub(self.lower);
        let hi = (i + self.upper + 1).min(self.cols);
        (lo, hi.max(lo))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.rows];
        for (i, yi) in y.iter_mut().enumerate() {
            let (lo, hi) = self.row_range(i);
            let hi = hi.min(x.len());
            let mut s = C64::new(0.0, 0.0);
            if lo < hi {
                let base = i * (self.lower + self.upper + 1) + self.lower - i;
                for (a, xj) in self.data[base + lo..base + hi].iter().zip(&x[lo..hi]) {
                    s += a * xj;
                }
            }
            *yi = s;
        }
        y
    }

    pub fn mul(&self, other: &BandMatrix) -> BandMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = BandMatrix::zeros(self.rows, other.cols, self.lower + other.lower, self.upper + other.upper);
        for i in 0..self.rows {
            let (lo, hi) = self.row_range(i);
            for k in lo..hi {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let (blo, bhi) = other.row_range(k);
                for j in blo..bhi {
                    let b = other.get(k, j);
                    out.add_to(i, j, a * b);
                }
            }
        }
        out
    }

    /// `self + alpha * other`, with bandwidths widened as needed.
    pub fn add_scaled(&self, alpha: C64, other: &BandMatrix) -> BandMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        let mut out = BandMatrix::zeros(self.rows, self.cols, self.lower.max(other.lower), self.upper.max(other.upper));
        out.add_block(C64::new(1.0, 0.0), self);
        out.add_block(alpha, other);
        out
    }

    /// Leading `rows x cols` block.
    pub fn crop(&self, rows: usize, cols: usize) -> BandMatrix {
        assert!(rows <= self.rows && cols <= self.cols, "crop larger than matrix");
        let mut out = BandMatrix::zeros(rows, cols, self.lower, self.upper);
        out.add_block(C64::new(1.0, 0.0), self);
        out
    }

    /// Adds `alpha` times the leading block of `other`, which may be larger
    /// but must fit inside this matrix's band.
    pub fn add_block(&mut self, alpha: C64, other: &BandMatrix) {
        assert!(other.rows >= self.rows && other.cols >= self.cols, "block smaller than target");
        assert!(other.lower <= self.lower && other.upper <= self.upper, "block band wider than target");
        let w = self.lower + self.upper + 1;
        let ow = other.lower + other.upper + 1;
        for i in 0..self.rows {
            let (lo, hi) = self.row_range(i);
            let (olo, ohi) = other.row_range(i);
            let (lo, hi) = (lo.max(olo), hi.min(ohi));
            if lo >= hi {
                continue;
            }
            // Both rows are laid out by column offset `j + lower - i`.
            let dst = &mut self.data[i * w + lo + self.lower - i..i * w + hi + self.lower - i];
            let src = &other.data[i * ow + lo + other.lower - i..i * ow + hi + other.lower - i];
            debug_assert_eq!(dst.len(), src.len());
            for (d, s) in dst.iter_mut().zip(src) {
                *d += alpha * s;
            }
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }
}
