//! Contour deformations of the Bromwich integral and the trapezoidal rule on
//! them.
//!
//! Two families are provided. The hyperbola `sigma + mu (1 + sin(i s - alpha))`
//! has closed-form parameters (`hyperbolic_params`). The parabola
//! `sigma - 1/(4 delta) + mu (1 + i s)^2` has parameters found by minimizing
//! the worst of four competing exponential error terms (`parabolic_params`).
//!
//! Nodes are `z_j = gamma(j h)` for `j = -N..=N`, weights
//! `w_j = h/(2 pi i) gamma'(j h)`. For real `sigma`, `z_-j = conj(z_j)` and
//! `w_-j = conj(w_j)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quad;
use crate::special::nelder_mead_2d;
pub use crate::special::lambert_w0;
use crate::speclin::ChebSeries;

/// Relative slack allowed on the ends of a time window.
const WINDOW_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeWindow {
    pub t0: f64,
    pub t1: f64,
}

impl TimeWindow {
    pub fn new(t0: f64, t1: f64) -> Result<Self> {
        if !(t0 > 0.0 && t1 >= t0 && t1.is_finite()) {
            return Err(Error::InvalidParameter("time window needs 0 < t0 <= t1"));
        }
        Ok(Self { t0, t1 })
    }

    /// `Lambda = t1 / t0`.
    pub fn ratio(&self) -> f64 {
        self.t1 / self.t0
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t0 * (1.0 - WINDOW_SLACK) && t <= self.t1 * (1.0 + WINDOW_SLACK)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ContourKind {
    Hyperbolic { mu: f64, alpha: f64, sigma: f64 },
    Parabolic { mu: f64, delta: f64, sigma: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    kind: ContourKind,
    h: f64,
    n: usize,
    nodes: Vec<C64>,
    weights: Vec<C64>,
}

impl Contour {
    /// Builds nodes and weights for `j = -n..=n`.
    pub fn new(kind: ContourKind, h: f64, n: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) || n == 0 {
            return Err(Error::InvalidParameter("contour needs h > 0 and N >= 1"));
        }
        match kind {
            ContourKind::Hyperbolic { mu, alpha, .. } if !(mu > 0.0 && alpha > 0.0 && alpha < PI / 2.0) => {
                return Err(Error::Domain("hyperbola needs mu > 0 and 0 < alpha < pi/2"));
            }
            ContourKind::Parabolic { mu, delta, .. } if !(delta > 0.0 && mu > 0.25 / delta) => {
                return Err(Error::Domain("parabola needs delta > 0 and mu > 1/(4 delta)"));
            }
            _ => {}
        }
        let mut c = Self { kind, h, n, nodes: Vec::with_capacity(2 * n + 1), weights: Vec::with_capacity(2 * n + 1) };
        let scale = C64::new(0.0, -h / (2.0 * PI));
        for j in -(n as isize)..=(n as isize) {
            let s = j as f64 * h;
            c.nodes.push(c.gamma(s));
            c.weights.push(scale * c.gamma_prime(s));
        }
        Ok(c)
    }

    pub fn kind(&self) -> ContourKind {
        self.kind
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node half-count `N`.
    pub fn half_count(&self) -> usize {
        self.n
    }

    /// All `2N + 1` nodes, ordered `j = -N..=N`.
    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[C64] {
        &self.weights
    }

    pub fn node(&self, j: isize) -> C64 {
        self.nodes[(j + self.n as isize) as usize]
    }

    pub fn weight(&self, j: isize) -> C64 {
        self.weights[(j + self.n as isize) as usize]
    }

    /// Nodes `j = 0..=N`.
    pub fn upper_nodes(&self) -> &[C64] {
        &self.nodes[self.n..]
    }

    pub fn gamma(&self, s: f64) -> C64 {
        match self.kind {
            ContourKind::Hyperbolic { mu, alpha, sigma } => {
                C64::new(sigma + mu * (1.0 - alpha.sin() * s.cosh()), mu * alpha.cos() * s.sinh())
            }
            ContourKind::Parabolic { mu, delta, sigma } => {
                C64::new(sigma - 0.25 / delta + mu * (1.0 - s * s), 2.0 * mu * s)
            }
        }
    }

    pub fn gamma_prime(&self, s: f64) -> C64 {
        match self.kind {
            ContourKind::Hyperbolic { mu, alpha, .. } => {
                C64::new(-mu * alpha.sin() * s.sinh(), mu * alpha.cos() * s.cosh())
            }
            ContourKind::Parabolic { mu, .. } => C64::new(-2.0 * mu * s, 2.0 * mu),
        }
    }

    /// Real part of the contour at height `im`; the contour is a graph over
    /// the imaginary axis for both families.
    pub fn real_part_at(&self, im: f64) -> f64 {
        let s = match self.kind {
            ContourKind::Hyperbolic { mu, alpha, .. } => (im / (mu * alpha.cos())).asinh(),
            ContourKind::Parabolic { mu, .. } => im / (2.0 * mu),
        };
        self.gamma(s).re
    }

    /// `max_j Re z_j`.
    pub fn max_real_part(&self) -> f64 {
        self.nodes.iter().fold(f64::NEG_INFINITY, |m, z| m.max(z.re))
    }
}

/// Algorithm 1: closed-form stable parameters for the hyperbola.
pub fn hyperbolic_params(delta: f64, sigma: f64, win: TimeWindow, beta: f64, n: usize) -> Result<Contour> {
    if !(0.0..PI / 2.0).contains(&delta) {
        return Err(Error::Domain("delta must lie in [0, pi/2)"));
    }
    if !(beta > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter("beta must be positive and sigma finite"));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1"));
    }
    let q = (PI - 2.0 * delta) / 4.0;
    let sq = q.sin();
    let nf = n as f64;
    let mu = beta / (win.t1 * (1.0 - sq));
    let arg = win.ratio() * nf * PI * (PI - 2.0 * delta) / (beta * sq) * (1.0 - sq);
    let h = lambert_w0(arg)? / nf;
    let alpha = (h * mu * win.t1 + PI * PI - 2.0 * PI * delta) / (4.0 * PI);
    if !(alpha > 0.0 && alpha < PI / 2.0 - delta) {
        return Err(Error::Domain("alpha outside (0, pi/2 - delta); increase N or beta"));
    }
    Contour::new(ContourKind::Hyperbolic { mu, alpha, sigma }, h, n)
}

/// The four exponents balanced by Algorithm 2, maximized over `t in {t0, t1}`.
/// The second term is the printed closed form where its strip width is
/// admissible and its `a -> 0` limit elsewhere.
pub fn parabolic_objective(h: f64, mu: f64, delta: f64, win: TimeWindow, n: usize, eta: f64) -> f64 {
    if !(h > 0.0 && delta > 0.0 && mu > 0.25 / delta) {
        return f64::INFINITY;
    }
    let nf = n as f64;
    let e1 = -(2.0 * PI / h) * (1.0 - 1.0 / (2.0 * (mu * delta).sqrt()));
    [win.t0, win.t1]
        .iter()
        .map(|&t| {
            let base = -t / (4.0 * delta);
            // Minimum over the strip half-width a > 0 of
            // base + mu t (1 + a)^2 - 2 pi a / h. The interior minimizer
            // a = pi / (mu t h) - 1 exists only for mu t h < pi.
            let e2 = if mu * t * h < PI { base - PI * PI / (mu * t * h * h) + 2.0 * PI / h } else { base + mu * t };
            let e3 = base + mu * t * (1.0 - (h * nf) * (h * nf));
            let e4 = base + mu * t + eta.ln();
            e1.max(e2).max(e3).max(e4)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Coarse grid used to seed and back up the simplex search, in
/// `(ln h, ln(4 delta mu - 1))`.
const GRID: usize = 40;
const STARTS: usize = 8;

fn parabolic_coords(delta: f64) -> impl Fn([f64; 2]) -> (f64, f64) {
    move |p: [f64; 2]| (p[0].exp(), (1.0 + p[1].exp()) / (4.0 * delta))
}

/// Algorithm 2: `(h, mu)` minimizing [`parabolic_objective`] by multi-start
/// Nelder-Mead, never worse than the best point of the seeding grid.
pub fn parabolic_params(delta: f64, sigma: f64, win: TimeWindow, n: usize, eta: f64) -> Result<Contour> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain("delta must be positive"));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter("eta must lie in (0, 1)"));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1"));
    }
    let coords = parabolic_coords(delta);
    let obj = |p: [f64; 2]| {
        let (h, mu) = coords(p);
        parabolic_objective(h, mu, delta, win, n, eta)
    };
    let nf = n as f64;
    let (u_lo, u_hi) = ((1e-2 / nf).ln(), (1e2 / nf).ln());
    let (v_lo, v_hi) = (-12.0, 14.0);
    let mut grid: Vec<([f64; 2], f64)> = Vec::with_capacity(GRID * GRID);
    for i in 0..GRID {
        for k in 0..GRID {
            let p = [
                u_lo + (u_hi - u_lo) * i as f64 / (GRID - 1) as f64,
                v_lo + (v_hi - v_lo) * k as f64 / (GRID - 1) as f64,
            ];
            let v = obj(p);
            if v.is_finite() {
                grid.push((p, v));
            }
        }
    }
    if grid.is_empty() {
        return Err(Error::Optimizer("no feasible parabola parameters"));
    }
    grid.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut best = grid[0];
    let step = (u_hi - u_lo) / GRID as f64;
    for &(p0, _) in grid.iter().take(STARTS) {
        let (p, v) = nelder_mead_2d(obj, p0, step, 1e-13, 4000);
        if v < best.1 {
            best = (p, v);
        }
    }
    // Restart from the winner to shake off a collapsed simplex.
    let (p, v) = nelder_mead_2d(obj, best.0, 0.1 * step, 1e-14, 4000);
    if v < best.1 {
        best = (p, v);
    }
    let (h, mu) = coords(best.0);
    Contour::new(ContourKind::Parabolic { mu, delta, sigma }, h, n)
}

/// Values attached to contour nodes that can be summed by the trapezoidal rule.
pub trait NodeValue: Clone {
    fn zero_like(&self) -> Self;
    /// `self += a * x`.
    fn add_scaled(&mut self, a: C64, x: &Self);
    /// Real part, embedded back into the value type.
    fn real_part(&self) -> Self;
}

impl NodeValue for C64 {
    fn zero_like(&self) -> Self {
        C64::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, a: C64, x: &Self) {
        *self += a * x;
    }
    fn real_part(&self) -> Self {
        C64::new(self.re, 0.0)
    }
}

impl NodeValue for ChebSeries {
    fn zero_like(&self) -> Self {
        ChebSeries::zero(self.basis())
    }
    fn add_scaled(&mut self, a: C64, x: &Self) {
        self.axpy(a, x);
    }
    fn real_part(&self) -> Self {
        ChebSeries::real_part(self)
    }
}

/// Per-node data for [`invert_at_times`].
#[derive(Clone, Copy, Debug)]
pub enum NodeValues<'a, V> {
    /// One value per node, `j = -N..=N`.
    Full(&'a [V]),
    /// Values for `j = 0..=N` of a transform with real-valued inverse, so
    /// that the value at `-j` is the conjugate of the value at `j`.
    ConjugateHalf(&'a [V]),
}

/// Trapezoidal approximation `sum_j e^(z_j t) w_j z_j^order v_j` for each `t`.
pub fn invert_at_times<V: NodeValue>(values: NodeValues<'_, V>, contour: &Contour, win: TimeWindow, times: &[f64], order: u32) -> Result<Vec<V>> {
    if order > 1 {
        return Err(Error::InvalidParameter("derivative order must be 0 or 1"));
    }
    let n = contour.half_count();
    let (vals, first) = match values {
        NodeValues::Full(v) if v.len() == 2 * n + 1 => (v, 0),
        NodeValues::ConjugateHalf(v) if v.len() == n + 1 => (v, n),
        _ => return Err(Error::InvalidParameter("node value count does not match the contour")),
    };
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if !win.contains(t) {
            return Err(Error::TimeOutsideWindow { t, t0: win.t0, t1: win.t1 });
        }
        let mut acc = vals[0].zero_like();
        for (k, v) in vals.iter().enumerate() {
            let idx = first + k;
            let z = contour.nodes[idx];
            let mut c = (z * t).exp() * contour.weights[idx];
            if order == 1 {
                c *= z;
            }
            if first > 0 && k > 0 {
                c *= 2.0;
            }
            acc.add_scaled(c, v);
        }
        out.push(if first > 0 { acc.real_part() } else { acc });
    }
    Ok(out)
}

/// Components of the a-priori error bound for a hyperbolic contour.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorCertificate {
    /// Amplification of per-node errors of size `eta`.
    pub eta_term: f64,
    /// Quadrature-decay term, relative to the unknown constant `C`.
    pub quadrature_term: f64,
    /// The decay exponent inside the quadrature term.
    pub exponent: f64,
}

impl ErrorCertificate {
    pub fn total(&self) -> f64 {
        self.eta_term + self.quadrature_term
    }
}

/// Exponent `-(N pi (pi - 2 delta)/2) / log(Lambda (1/sin(pi/4 - delta/2) - 1)/beta * N pi (pi - 2 delta))`.
pub fn quadrature_exponent(n: usize, delta: f64, beta: f64, win: TimeWindow) -> f64 {
    let a = n as f64 * PI * (PI - 2.0 * delta);
    let s = (PI / 4.0 - delta / 2.0).sin();
    -(a / 2.0) / (win.ratio() * (1.0 / s - 1.0) / beta * a).ln()
}

/// `int_0^inf exp(x - k cosh x) dx` for `k > 0`.
fn amplification_integral(k: f64) -> f64 {
    let f = |x: f64| x - k * x.cosh();
    let peak = (1.0 / k).asinh();
    let top = f(peak);
    let mut end = peak.max(1.0);
    while f(end) > top - 60.0 {
        end += 1.0;
    }
    let panels = (4.0 * end).ceil() as usize;
    let w = end / panels as f64;
    (0..panels)
        .map(|p| quad::integrate(|x: f64| (f(x) - top).exp(), p as f64 * w, (p + 1) as f64 * w, 33))
        .sum::<f64>()
        * top.exp()
}

/// Both printed terms of the a-priori bound for a hyperbolic contour, with the
/// quadrature term given modulo the constant `c` (pass 1 for the bare term).
pub fn error_certificate(contour: &Contour, delta: f64, sigma: f64, beta: f64, eta: f64, win: TimeWindow, c: f64) -> Result<ErrorCertificate> {
    let ContourKind::Hyperbolic { mu, alpha, .. } = contour.kind else {
        return Err(Error::Domain("error certificate is stated for hyperbolic contours"));
    };
    let _ = sigma;
    let growth = (beta / (1.0 - alpha.sin())).exp();
    let integral = amplification_integral(mu * win.t0 * alpha.sin());
    let eta_term = 2.0 * mu * growth / PI * integral * eta;
    let exponent = quadrature_exponent(contour.half_count(), delta, beta, win);
    Ok(ErrorCertificate { eta_term, quadrature_term: c * growth * exponent.exp(), exponent })
}
