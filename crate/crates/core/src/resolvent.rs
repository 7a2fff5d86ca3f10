//! Computable lower bounds on `1/||T(z)^-1||` and the contour parameters
//! derived from them.
//!
//! With `M = max a/b` and `C = 2 sqrt(M)`, the resolvent satisfies
//! `||T(z)^-1|| <= 1/eps` wherever `Re z > eps`, or wherever `z = r e^(i theta)`
//! satisfies
//!
//! ```text
//! r^(nu/2) >= C sqrt((eps/r - cos theta) |cos((nu-1) theta)| / sin^2((2-nu) theta))
//!             + r^(nu/2 - 1) eps sqrt(2) / |sin((2-nu) theta)|
//! ```
//!
//! The `eps = 0` boundary of the second region has the closed form
//! [`r_star`]; outside it the operator is invertible.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::special::{bisect, golden_min};
use crate::speclin::ChebSeries;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    pub m: f64,
    pub c: f64,
    pub nu: f64,
}

/// Samples used to locate the maximum of `a/b` before refinement.
const RATIO_SAMPLES: usize = 256;

impl BoundParams {
    pub fn new(m: f64, nu: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidParameter("M must be positive and finite"));
        }
        if !(nu > 0.0 && nu < 2.0) {
            return Err(Error::InvalidOrder(nu));
        }
        Ok(Self { m, c: 2.0 * m.sqrt(), nu })
    }

    /// `M = max a/b` on `[-1, 1]`: dense sampling followed by golden-section
    /// refinement around the best sample.
    pub fn from_coefficients(a: &ChebSeries, b: &ChebSeries, nu: f64) -> Result<Self> {
        let ratio = |x: f64| a.eval_real(x) / b.eval_real(x);
        let mut best = (0.0, f64::MIN);
        for k in 0..=RATIO_SAMPLES {
            let x = -1.0 + 2.0 * k as f64 / RATIO_SAMPLES as f64;
            let v = ratio(x);
            if v > best.1 {
                best = (x, v);
            }
        }
        let h = 2.0 / RATIO_SAMPLES as f64;
        let lo = (best.0 - h).max(-1.0);
        let hi = (best.0 + h).min(1.0);
        let (_, neg) = golden_min(|x| -ratio(x), lo, hi, 1e-12);
        Self::new(best.1.max(-neg), nu)
    }
}

fn check_angle(nu: f64, theta: f64) -> Result<f64> {
    let s = ((2.0 - nu) * theta).sin();
    let arg = (2.0 - nu) * theta.abs();
    if !(arg > 0.0 && arg < PI) {
        return Err(Error::Domain("(2 - nu)|theta| must lie in (0, pi)"));
    }
    Ok(s)
}

/// Residual of the certification inequality; nonnegative where it holds.
fn condition(bp: &BoundParams, r: f64, theta: f64, eps: f64) -> f64 {
    let nu = bp.nu;
    let s = ((2.0 - nu) * theta).sin();
    let inner = ((eps / r - theta.cos()) * ((nu - 1.0) * theta).cos().abs() / (s * s)).max(0.0);
    r.powf(nu / 2.0) - bp.c * inner.sqrt() - r.powf(nu / 2.0 - 1.0) * eps * 2.0f64.sqrt() / s.abs()
}

/// Smallest `r` at which the inequality holds at angle `theta` for `eps`.
///
/// For `eps = 0` and `|theta| >= pi/2` this is the closed form
/// `[4M |cos theta| |cos((nu-1)theta)| / sin^2((2-nu)theta)]^(1/nu)`.
pub fn r_star(bp: &BoundParams, theta: f64, eps: f64) -> Result<f64> {
    let s = check_angle(bp.nu, theta)?;
    if !(eps >= 0.0) {
        return Err(Error::InvalidParameter("eps must be nonnegative"));
    }
    if eps == 0.0 {
        if theta.cos() >= 0.0 {
            return Ok(0.0);
        }
        let phase = (bp.nu - 1.0) * theta;
        let mut cn = phase.cos().abs();
        // Within rounding of a zero of the cosine the bound is exactly zero;
        // the 1/nu power would otherwise inflate the rounding error.
        if cn <= 4.0 * f64::EPSILON * phase.abs() {
            cn = 0.0;
        }
        let v = 4.0 * bp.m * theta.cos().abs() * cn / (s * s);
        return Ok(v.powf(1.0 / bp.nu));
    }
    let f = |lr: f64| condition(bp, lr.exp(), theta, eps);
    let mut hi = r_star(bp, theta, 0.0)?.max(eps).max(1e-300).ln() + 1.0;
    while f(hi) < 0.0 {
        hi += 2.0;
    }
    let mut lo = hi - 2.0;
    while f(lo) >= 0.0 {
        lo -= 2.0;
        if lo < -700.0 {
            return Ok(0.0);
        }
    }
    Ok(bisect(f, lo, hi, 1e-15).exp())
}

/// Largest certified `eps(z)` with `||T(z)^-1|| <= 1/eps(z)` (zero if neither
/// region certifies `z`).
pub fn epsilon_bound(bp: &BoundParams, z: C64) -> Result<f64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::BranchCut { re: z.re, im: z.im });
    }
    let half_plane = z.re.max(0.0);
    let r = z.norm();
    let theta = z.arg();
    let arg = (2.0 - bp.nu) * theta.abs();
    if !(arg > 0.0 && arg < PI) {
        return Ok(half_plane);
    }
    let g = |eps: f64| condition(bp, r, theta, eps);
    // On the curve itself nothing beyond eps = 0 is certified.
    if g(0.0) <= 0.0 {
        return Ok(half_plane);
    }
    let mut hi = r.max(1.0);
    while g(hi) >= 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Ok(hi);
        }
    }
    let e = bisect(g, 0.0, hi, 1e-14);
    // bisection returns the midpoint of the final bracket; step back inside.
    let e = if g(e) >= 0.0 { e } else { e * (1.0 - 1e-13) };
    Ok(half_plane.max(e))
}

/// Points `r_star(theta, eps) e^(i theta)` for `theta` on a grid in
/// `[pi/2, theta_max)`, `theta_max = min(pi, pi/(2 - nu))`.
pub fn region_curve(bp: &BoundParams, eps: f64, samples: usize) -> Result<Vec<(f64, f64)>> {
    let tmax = theta_max(bp.nu);
    let mut out = Vec::with_capacity(samples);
    for k in 0..samples {
        let theta = FRAC_PI_2 + (tmax - FRAC_PI_2) * k as f64 / samples as f64;
        let th = if theta <= FRAC_PI_2 { FRAC_PI_2 + 1e-15 } else { theta };
        out.push((th, r_star(bp, th, eps)?));
    }
    Ok(out)
}

fn theta_max(nu: f64) -> f64 {
    if nu <= 1.0 {
        PI / (2.0 - nu)
    } else {
        PI
    }
}

/// Half-opening `delta` of the sector `{|arg(z - sigma)| <= pi - delta}`
/// that contains every point left uncertified for `eps = 0`.
pub fn select_sector_delta(bp: &BoundParams, sigma: f64) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidParameter("sigma must be nonnegative"));
    }
    let nu = bp.nu;
    let tmax = theta_max(nu);
    let angle = |theta: f64| -> f64 {
        let r = r_star(bp, theta, 0.0).unwrap_or(0.0);
        let z = C64::from_polar(r, theta) - sigma;
        if z.norm() == 0.0 {
            PI
        } else {
            z.arg().abs()
        }
    };
    let lo = FRAC_PI_2;
    let hi = if nu < 1.0 { tmax * (1.0 - 1e-12) } else { tmax };
    let n = 2048;
    let mut best = (lo, angle(lo));
    for k in 0..=n {
        let theta = lo + (hi - lo) * k as f64 / n as f64;
        let a = angle(theta);
        if a < best.1 {
            best = (theta, a);
        }
    }
    let step = (hi - lo) / n as f64;
    let (_, refined) = golden_min(angle, (best.0 - step).max(lo), (best.0 + step).min(hi), 1e-13);
    let mut inf = best.1.min(refined);
    if nu < 1.0 {
        // Beyond the asymptote the whole wedge is uncertified.
        inf = inf.min(PI / (2.0 - nu));
    }
    Ok(PI - inf)
}

/// Parabola parameters `(delta, sigma)` with `sigma = 0`, so that the
/// uncertified set lies left of `Re z = -Im(z)^2 delta`.
///
/// For `nu >= 1` the curve is contained for `delta = 1/(4M)`. For `nu < 1`
/// the curve is unbounded, so the parabola is fitted through the curve point
/// with `Re z = ln(1e-16)/t0`, beyond which the contour contributes nothing
/// at double precision for times `t >= t0`.
pub fn select_parabola_delta(bp: &BoundParams, t0: f64) -> Result<(f64, f64)> {
    if !(t0 > 0.0) {
        return Err(Error::InvalidParameter("t0 must be positive"));
    }
    if bp.nu >= 1.0 {
        return Ok((1.0 / (4.0 * bp.m), 0.0));
    }
    let target = 1e-16f64.ln() / t0;
    let re = |theta: f64| r_star(bp, theta, 0.0).map(|r| r * theta.cos()).unwrap_or(f64::NEG_INFINITY);
    let lo = FRAC_PI_2 + 1e-12;
    let mut hi = theta_max(bp.nu) - 1e-3;
    while re(hi) > target {
        hi = 0.5 * (hi + theta_max(bp.nu));
        if theta_max(bp.nu) - hi < 1e-14 {
            return Err(Error::Domain("region curve does not reach the cutoff"));
        }
    }
    let theta = bisect(|t| re(t) - target, lo, hi, 1e-15);
    let r = r_star(bp, theta, 0.0)?;
    let (x, y) = (r * theta.cos(), r * theta.sin());
    Ok((-x / (y * y), 0.0))
}

/// `{z : |arg(z - sigma)| < pi - delta}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorRegion {
    pub delta: f64,
    pub sigma: f64,
}

impl SectorRegion {
    pub fn contains(&self, z: C64) -> bool {
        (z - self.sigma).arg().abs() < PI - self.delta
    }
}

/// `{z : Re z > sigma - delta Im(z)^2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParabolaRegion {
    pub delta: f64,
    pub sigma: f64,
}

impl ParabolaRegion {
    pub fn contains(&self, z: C64) -> bool {
        z.re > self.sigma - self.delta * z.im * z.im
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_order_closed_form() {
        let bp = BoundParams::new(6.25, 1.0).unwrap();
        let r = r_star(&bp, 0.75 * PI, 0.0).unwrap();
        let z = C64::from_polar(r, 0.75 * PI);
        assert!((z - C64::new(-25.0, 25.0)).norm() < 1e-12);
    }

    #[test]
    fn angle_domain_enforced() {
        let bp = BoundParams::new(1.0, 0.5).unwrap();
        assert!(r_star(&bp, 0.0, 0.0).is_err());
        assert!(r_star(&bp, PI / 1.5 + 0.01, 0.0).is_err());
    }
}
