//! The transformed beam operator
//! `T(z) u = rho^-1 ((a + z^nu b) u'')'' + z^2 u`
//! as an almost-banded ultraspherical system, and its right-hand side.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::speclin::{residual_vector, boundary_mismatch, AlmostBandedSystem, BandMatrix, BandedOp, BoundaryRow, ChebSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// `u = u' = 0`.
    Clamped,
    /// `u = u'' = 0`.
    SimplySupported,
}

/// Definition of the fractional derivative; decides which initial-data terms
/// enter the transformed equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    Caputo,
    RiemannLiouville,
}

#[derive(Clone, Debug)]
pub struct BeamPencil {
    a: ChebSeries,
    b: ChebSeries,
    rho: ChebSeries,
    nu: f64,
    left: BoundaryCondition,
    right: BoundaryCondition,
    convention: Convention,
    inv_rho: ChebSeries,
    stiff: BandedOp,
    damp: BandedOp,
    mass: BandedOp,
    rho_max: f64,
}

/// Points at which coefficient positivity is checked.
const POSITIVITY_SAMPLES: usize = 200;

fn check_positive(name: &'static str, f: &ChebSeries) -> Result<f64> {
    let mut fmax = f64::MIN;
    for k in 0..=POSITIVITY_SAMPLES {
        let x = (PI * k as f64 / POSITIVITY_SAMPLES as f64).cos();
        let v = f.eval_real(x);
        if !(v > 0.0) {
            return Err(Error::NonPositiveCoefficient { name, x, value: v });
        }
        fmax = fmax.max(v);
    }
    Ok(fmax)
}

impl BeamPencil {
    pub fn new(
        a: ChebSeries,
        b: ChebSeries,
        rho: ChebSeries,
        nu: f64,
        left: BoundaryCondition,
        right: BoundaryCondition,
        convention: Convention,
    ) -> Result<Self> {
        if !(nu > 0.0 && nu < 2.0) {
            return Err(Error::InvalidOrder(nu));
        }
        for s in [&a, &b, &rho] {
            if s.basis() != 0 {
                return Err(Error::InvalidParameter("coefficients must be Chebyshev series"));
            }
        }
        check_positive("a", &a)?;
        check_positive("b", &b)?;
        let rho_max = check_positive("rho", &rho)?;
        let rho_fn = rho.clone();
        let inv_rho = ChebSeries::from_fn_real(move |x| 1.0 / rho_fn.eval_real(x), 1e-16);
        let m_rho = BandedOp::multiplication(&inv_rho, 4);
        let d2 = BandedOp::derivative(2, 2);
        let d0 = BandedOp::derivative(0, 2);
        let stiff = BandedOp::Product(vec![m_rho.clone(), d2.clone(), BandedOp::multiplication(&a, 2), d0.clone()]);
        let damp = BandedOp::Product(vec![m_rho, d2, BandedOp::multiplication(&b, 2), d0]);
        let mass = BandedOp::conversion(0, 4);
        Ok(Self { a, b, rho, nu, left, right, convention, inv_rho, stiff, damp, mass, rho_max })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn a(&self) -> &ChebSeries {
        &self.a
    }

    pub fn b(&self) -> &ChebSeries {
        &self.b
    }

    pub fn rho(&self) -> &ChebSeries {
        &self.rho
    }

    pub fn inv_rho(&self) -> &ChebSeries {
        &self.inv_rho
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn boundary_conditions(&self) -> (BoundaryCondition, BoundaryCondition) {
        (self.left, self.right)
    }

    /// Bandwidths `(lower, upper)` of the operator part.
    pub fn bandwidths(&self) -> (usize, usize) {
        let (l1, u1) = self.stiff.bandwidths();
        let (l2, u2) = self.damp.bandwidths();
        (l1.max(l2), u1.max(u2).max(8))
    }

    pub fn boundary_rows(&self) -> Vec<BoundaryRow> {
        let mut rows = Vec::with_capacity(4);
        for (bc, at) in [(self.left, -1.0), (self.right, 1.0)] {
            rows.push(BoundaryRow::value(at));
            let order = match bc {
                BoundaryCondition::Clamped => 1,
                BoundaryCondition::SimplySupported => 2,
            };
            rows.push(BoundaryRow::Derivative { order, at });
        }
        rows
    }

    /// `z^nu` on the principal branch; the cut is the closed negative real axis.
    pub fn z_pow_nu(&self, z: C64) -> Result<C64> {
        z_pow(z, self.nu)
    }

    /// Materializes the z-independent operator parts, exact for every
    /// truncation size up to `size`.
    pub fn sections(&self, size: usize) -> PencilSections {
        PencilSections {
            size,
            stiff: Arc::new(self.stiff.section(size)),
            damp: Arc::new(self.damp.section(size)),
            mass: Arc::new(self.mass.section(size)),
        }
    }

    /// `T(z)` with right-hand side `rhs` (coefficients in `C^(4)`) and
    /// homogeneous boundary conditions.
    pub fn system_at(&self, sec: &PencilSections, z: C64, rhs: ChebSeries) -> Result<AlmostBandedSystem> {
        let zn = self.z_pow_nu(z)?;
        let op = BandedOp::Sum(vec![
            (C64::new(1.0, 0.0), BandedOp::Materialized(sec.stiff.clone())),
            (zn, BandedOp::Materialized(sec.damp.clone())),
            (z * z, BandedOp::Materialized(sec.mass.clone())),
        ])
        .materialize(sec.size);
        Ok(AlmostBandedSystem { op, boundary: self.boundary_rows(), rhs, rhs_boundary: vec![C64::new(0.0, 0.0); 4] })
    }

    /// `T(z)` at truncation `n` with a zero right-hand side.
    pub fn assemble_pencil_matrix(&self, z: C64, n: usize) -> Result<AlmostBandedSystem> {
        let (l, _) = self.bandwidths();
        let sec = self.sections(n + l + 8);
        self.system_at(&sec, z, ChebSeries::zero(4))
    }

    /// Precomputes the `C^(4)` pieces of the right-hand side.
    pub fn rhs_terms(&self, init: &InitialData, forcing: &Forcing) -> Result<RhsTerms> {
        for y in [&init.y0, &init.y1] {
            check_resolved(y)?;
        }
        let s = BandedOp::conversion(0, 4);
        let g_over_rho = {
            let g = forcing.profile.clone();
            let r = self.rho.clone();
            ChebSeries::from_fn(move |x| g.eval(x) / r.eval_real(x), 1e-16)
        };
        let conv = |y: &ChebSeries| ChebSeries::new(s.apply(y.coeffs()), 4);
        let by = |y: &ChebSeries| ChebSeries::new(self.damp.apply(y.coeffs()), 4);
        Ok(RhsTerms {
            g: conv(&g_over_rho).scale(C64::new(forcing.amplitude, 0.0)),
            y0: conv(&init.y0),
            y1: conv(&init.y1),
            by0: by(&init.y0),
            by1: by(&init.y1),
            g_over_rho,
        })
    }

    /// `K(z)`: transformed forcing, initial data and the fractional memory
    /// terms of the initial data.
    pub fn assemble_rhs(&self, terms: &RhsTerms, forcing: &Forcing, z: C64) -> Result<ChebSeries> {
        self.assemble_rhs_with(terms, forcing.time.transform(z), z)
    }

    /// `K(z)` with the time transform of the forcing supplied as `fhat`.
    pub fn assemble_rhs_with(&self, terms: &RhsTerms, fhat: C64, z: C64) -> Result<ChebSeries> {
        let zn = self.z_pow_nu(z)?;
        let mut k = terms.g.scale(fhat);
        k.axpy(z, &terms.y0);
        k.axpy(C64::new(1.0, 0.0), &terms.y1);
        let fractional = self.convention == Convention::Caputo || self.nu == 1.0;
        if fractional {
            k.axpy(zn / z, &terms.by0);
            if self.nu > 1.0 {
                k.axpy(zn / (z * z), &terms.by1);
            }
        }
        Ok(k)
    }

    /// Upper bound on `||T(z) u - K||` in `L^2_rho` plus a boundary mismatch
    /// term, from the exact coefficient residual converted to Chebyshev form
    /// (`|r(x)| <= sum |t_k|`).
    pub fn certified_residual(&self, sys: &AlmostBandedSystem, z: C64, u: &ChebSeries) -> f64 {
        let (l, _) = sys.op.bandwidths();
        let r = residual_vector(sys, u.coeffs(), u.len() + l);
        let t = ChebSeries::new(r, 4).to_chebyshev();
        let l1: f64 = t.coeffs().iter().map(|c| c.norm()).sum();
        let bc: f64 = boundary_mismatch(sys, u.coeffs()).iter().map(|c| c.norm()).sum();
        (2.0 * self.rho_max).sqrt() * l1 + bc * (1.0 + z.norm()).powi(2)
    }
}

pub fn z_pow(z: C64, nu: f64) -> Result<C64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::BranchCut { re: z.re, im: z.im });
    }
    Ok((z.ln() * nu).exp())
}

fn check_resolved(y: &ChebSeries) -> Result<()> {
    let n = y.len();
    if n < 64 {
        return Ok(());
    }
    let scale = y.max_abs_coeff();
    let tail = y.coeffs()[n - 8..].iter().fold(0.0f64, |m, c| m.max(c.norm()));
    if tail > 1e-12 * scale {
        return Err(Error::UnresolvedInitialData { tail: tail / scale });
    }
    Ok(())
}

/// Exact sections of the z-independent operator parts.
#[derive(Clone, Debug)]
pub struct PencilSections {
    pub size: usize,
    pub stiff: Arc<BandMatrix>,
    pub damp: Arc<BandMatrix>,
    pub mass: Arc<BandMatrix>,
}

/// Right-hand-side pieces in `C^(4)`.
#[derive(Clone, Debug)]
pub struct RhsTerms {
    /// `A S (g / rho)`.
    pub g: ChebSeries,
    pub y0: ChebSeries,
    pub y1: ChebSeries,
    /// `rho^-1 (b y0'')''`.
    pub by0: ChebSeries,
    pub by1: ChebSeries,
    /// `g / rho` in Chebyshev form.
    pub g_over_rho: ChebSeries,
}

#[derive(Clone, Debug)]
pub struct InitialData {
    pub y0: ChebSeries,
    pub y1: ChebSeries,
}

impl InitialData {
    pub fn zero() -> Self {
        Self { y0: ChebSeries::zero(0), y1: ChebSeries::zero(0) }
    }

    /// Largest violation of the pencil's boundary conditions by `y0` and `y1`.
    pub fn boundary_mismatch(&self, p: &BeamPencil) -> f64 {
        let mut m = 0.0f64;
        for row in p.boundary_rows() {
            for y in [&self.y0, &self.y1] {
                m = m.max(row.apply(y.coeffs()).norm());
            }
        }
        m
    }
}

/// Time dependence of the forcing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeProfile {
    Sin { omega: f64 },
    Cos { omega: f64 },
    Zero,
}

impl TimeProfile {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Self::Sin { omega } => (omega * t).sin(),
            Self::Cos { omega } => (omega * t).cos(),
            Self::Zero => 0.0,
        }
    }

    pub fn transform(&self, z: C64) -> C64 {
        match *self {
            Self::Sin { omega } => C64::new(omega, 0.0) / (z * z + omega * omega),
            Self::Cos { omega } => z / (z * z + omega * omega),
            Self::Zero => C64::new(0.0, 0.0),
        }
    }

    /// Poles of the transform with their residues.
    pub fn poles(&self) -> Vec<(C64, C64)> {
        match *self {
            Self::Sin { omega } => vec![(C64::new(0.0, omega), C64::new(0.0, -0.5)), (C64::new(0.0, -omega), C64::new(0.0, 0.5))],
            Self::Cos { omega } => vec![(C64::new(0.0, omega), C64::new(0.5, 0.0)), (C64::new(0.0, -omega), C64::new(0.5, 0.0))],
            Self::Zero => Vec::new(),
        }
    }
}

/// `F(x, t) = amplitude * profile(x) * time(t)`.
#[derive(Clone, Debug)]
pub struct Forcing {
    pub amplitude: f64,
    pub profile: ChebSeries,
    pub time: TimeProfile,
}

impl Forcing {
    pub fn none() -> Self {
        Self { amplitude: 0.0, profile: ChebSeries::zero(0), time: TimeProfile::Zero }
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0 || self.time == TimeProfile::Zero || self.profile.max_abs_coeff() == 0.0
    }
}

/// Dimensional beam data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalBeam {
    /// Mass per unit length.
    pub rho_a: f64,
    pub e0: f64,
    pub e1: f64,
    /// Second moment of area.
    pub inertia: f64,
    /// Beam length `l`; the length scale is the semichord `l / 2`.
    pub length: f64,
    /// Width as a fraction of the length.
    pub width_fraction: f64,
    /// Inverse time scale.
    pub frequency: f64,
    pub nu: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledBeam {
    pub rho: f64,
    pub e0_i: f64,
    pub e1_i: f64,
}

/// Scales with `L = l/2`, `T = 1/frequency` and the mass per unit area
/// `rho0 = rho_a / width`.
pub fn nondimensionalize(p: &PhysicalBeam) -> Result<ScaledBeam> {
    let vals = [p.rho_a, p.e0, p.inertia, p.length, p.width_fraction, p.frequency];
    if vals.iter().any(|v| !(*v > 0.0) || !v.is_finite()) || !(p.e1 >= 0.0) {
        return Err(Error::InvalidParameter("physical parameters must be positive and finite"));
    }
    if !(p.nu > 0.0 && p.nu < 2.0) {
        return Err(Error::InvalidOrder(p.nu));
    }
    let width = p.width_fraction * p.length;
    let rho0 = p.rho_a / width;
    let l = 0.5 * p.length;
    let t = 1.0 / p.frequency;
    let l4 = l * l * l * l;
    Ok(ScaledBeam {
        rho: p.rho_a / (rho0 * width),
        e0_i: p.e0 * p.inertia * t * t / (rho0 * l4),
        e1_i: p.e1 * p.inertia * t.powf(2.0 - p.nu) / (rho0 * l4),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_cut_rejected() {
        assert!(matches!(z_pow(C64::new(-1.0, 0.0), 0.5), Err(Error::BranchCut { .. })));
        assert!(matches!(z_pow(C64::new(0.0, 0.0), 0.5), Err(Error::BranchCut { .. })));
        let w = z_pow(C64::new(-1.0, 1e-300), 0.5).unwrap();
        assert!((w - C64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn sine_residues_reproduce_transform() {
        let p = TimeProfile::Sin { omega: 3.0 };
        let z = C64::new(0.7, 1.1);
        let s: C64 = p.poles().iter().map(|(q, r)| r / (z - q)).sum();
        assert!((s - p.transform(z)).norm() < 1e-15);
        let p = TimeProfile::Cos { omega: 3.0 };
        let s: C64 = p.poles().iter().map(|(q, r)| r / (z - q)).sum();
        assert!((s - p.transform(z)).norm() < 1e-15);
    }
}
