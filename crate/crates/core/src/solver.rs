//! Error-controlled solution of the beam problem.
//!
//! `solve_laplace` picks a contour from the resolvent bounds, solves
//! `T(z_j) u_j = K(z_j)` at every node with adaptive truncation until the
//! certified residual is below `eta eps(z_j)`, records residue corrections for
//! forcing poles crossed by the deformation, and doubles the node count until
//! two consecutive quadratures agree. `evaluate` then sums the stored node
//! solutions at any times in the window without further linear solves.
//!
//! All problem data is assumed real, so only nodes `j = 0..=N` are solved and
//! the time-domain solution is twice the real part of the half sum.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::contour::{error_certificate, hyperbolic_params, invert_at_times, parabolic_params, Contour, ContourKind, NodeValues, TimeWindow};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::pencil::{BeamPencil, Forcing, InitialData, PencilSections, RhsTerms};
use crate::quad;
use crate::resolvent::{epsilon_bound, select_parabola_delta, select_sector_delta, BoundParams};
use crate::special::gamma;
use crate::speclin::{solve_almost_banded, ChebSeries};

/// Smallest spatial truncation tried at each node.
pub const N_SPATIAL_MIN: usize = 64;
/// Largest spatial truncation before a node is declared unconverged.
pub const N_SPATIAL_MAX: usize = 4096;
/// Times compared when estimating the quadrature error.
pub const PROBE_TIMES: usize = 5;
/// Ratio `t1/t0` of each window when a long range is split.
pub const WINDOW_RATIO: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ContourChoice {
    Hyperbolic { beta: f64 },
    Parabolic,
}

impl Default for ContourChoice {
    fn default() -> Self {
        Self::Hyperbolic { beta: 2.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Target absolute `L^2` error of `y(., t)`.
    pub target: f64,
    pub contour: ContourChoice,
    /// Fixed node half-count. `None` doubles from `nodes_start` until two
    /// quadratures agree to `target`.
    pub nodes: Option<usize>,
    pub nodes_start: usize,
    pub nodes_max: usize,
    pub n_max: usize,
    /// Shift of the hyperbola; defaults to `beta / t1`.
    pub sigma: Option<f64>,
}

impl SolveOptions {
    pub fn new(target: f64) -> Self {
        Self { target, contour: ContourChoice::default(), nodes: None, nodes_start: 16, nodes_max: 1 << 17, n_max: N_SPATIAL_MAX, sigma: None }
    }
}

/// `e^(p t) field` added to the contour sum for a forcing pole `p` lying
/// between the Bromwich line and the contour.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleCorrection {
    pub pole: C64,
    pub field: ChebSeries,
}

#[derive(Clone, Debug)]
pub struct LaplaceSolve {
    pub contour: Contour,
    pub window: TimeWindow,
    pub choice: ContourChoice,
    pub delta: f64,
    pub sigma: f64,
    /// Per-node error tolerance in the resolvent graph norm.
    pub eta: f64,
    /// Solutions at nodes `j = 0..=N`.
    pub node_solutions: Vec<ChebSeries>,
    pub node_residuals: Vec<f64>,
    pub node_eps: Vec<f64>,
    /// Spatial truncation accepted at each node.
    pub node_sizes: Vec<usize>,
    /// False where the residual stalled at round-off above `eta eps`.
    pub node_certified: Vec<bool>,
    /// Nodes skipped because `e^(Re z t0)` is below double precision.
    pub node_dropped: Vec<bool>,
    pub pole_corrections: Vec<PoleCorrection>,
    /// Linear solves spent, including rejected truncations and node counts.
    pub solve_count: usize,
    /// `L^2` difference to the quadrature with half as many nodes.
    pub quadrature_estimate: Option<f64>,
    a: ChebSeries,
    rho: ChebSeries,
}

impl LaplaceSolve {
    pub fn all_nodes_certified(&self) -> bool {
        self.node_certified.iter().all(|&c| c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeCertificate {
    pub quadrature_estimate: Option<f64>,
    /// `sum_j |w_j e^(z_j t)| residual_j / eps_j`.
    pub node_error: f64,
    /// Printed a-priori bound (hyperbolic only), relative to its unknown constant.
    pub analytic_modulo_c: Option<f64>,
    pub nodes_certified: bool,
}

impl TimeCertificate {
    pub fn met(&self, target: f64) -> bool {
        self.nodes_certified && self.quadrature_estimate.is_some_and(|q| q + self.node_error <= target)
    }
}

#[derive(Clone, Debug)]
pub struct TimeSolution {
    pub times: Vec<f64>,
    pub y: Vec<ChebSeries>,
    pub y_t: Vec<ChebSeries>,
    pub energy: Vec<f64>,
    pub certificates: Vec<TimeCertificate>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyAsymptote {
    pub e1: f64,
    pub exponent: f64,
    pub correction_exponent: f64,
}

impl EnergyAsymptote {
    pub fn eval(&self, t: f64) -> f64 {
        self.e1 * t.powf(self.exponent)
    }
}

/// Solves with the forcing's analytic time transform.
pub fn solve_laplace<E: Executor>(p: &BeamPencil, init: &InitialData, forcing: &Forcing, win: TimeWindow, opts: &SolveOptions, exec: &E) -> Result<LaplaceSolve> {
    let time = forcing.time;
    let poles = if forcing.is_zero() { Vec::new() } else { time.poles() };
    solve_laplace_with(p, init, forcing, &|z| time.transform(z), &poles, win, opts, exec)
}

/// Solves with a caller-supplied time transform `fhat` of the forcing and the
/// poles of `fhat` with their residues.
#[allow(clippy::too_many_arguments)]
pub fn solve_laplace_with<E: Executor>(
    p: &BeamPencil,
    init: &InitialData,
    forcing: &Forcing,
    fhat: &(dyn Fn(C64) -> C64 + Sync),
    poles: &[(C64, C64)],
    win: TimeWindow,
    opts: &SolveOptions,
    exec: &E,
) -> Result<LaplaceSolve> {
    if !(opts.target > 0.0) {
        return Err(Error::InvalidParameter("target accuracy must be positive"));
    }
    let ctx = Context::new(p, init, forcing, fhat, poles, win, opts)?;
    let probes: Vec<f64> = (0..PROBE_TIMES).map(|k| win.t0 * win.ratio().powf(k as f64 / (PROBE_TIMES - 1) as f64)).collect();
    if let Some(n) = opts.nodes {
        let ls = ctx.solve_fixed(n, exec)?;
        // The half-size estimate is skipped when the closed-form contour is
        // not yet valid at `n / 2`.
        let coarse = match ctx.contour((n / 2).max(1)) {
            Ok(_) if n > 1 => ctx.solve_fixed(n / 2, exec)?,
            _ => return Ok(ls),
        };
        let diff = max_difference(&evaluate_y(&coarse, &probes)?, &evaluate_y(&ls, &probes)?);
        return Ok(LaplaceSolve { quadrature_estimate: Some(diff), solve_count: ls.solve_count + coarse.solve_count, ..ls });
    }
    let mut coarse = opts.nodes_start.max(1);
    while ctx.contour(coarse).is_err() {
        coarse *= 2;
        if coarse > opts.nodes_max {
            // Report the underlying reason from the largest allowed size.
            ctx.contour(opts.nodes_max)?;
            return Err(Error::QuadratureNotConverged { n_max: opts.nodes_max });
        }
    }
    let mut prev = ctx.solve_fixed(coarse, exec)?;
    let mut spent = prev.solve_count;
    let mut n = 2 * coarse;
    loop {
        if n > opts.nodes_max {
            return Err(Error::QuadratureNotConverged { n_max: coarse });
        }
        let next = ctx.solve_fixed(n, exec)?;
        spent += next.solve_count;
        let diff = max_difference(&evaluate_y(&prev, &probes)?, &evaluate_y(&next, &probes)?);
        if diff <= opts.target {
            return Ok(LaplaceSolve { quadrature_estimate: Some(diff), solve_count: spent, ..next });
        }
        coarse = n;
        n *= 2;
        prev = next;
    }
}

fn max_difference(a: &[ChebSeries], b: &[ChebSeries]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (u, v)| {
        let mut d = v.clone();
        d.axpy(C64::new(-1.0, 0.0), u);
        m.max(d.l2_norm())
    })
}

/// Region parameters `(delta, sigma)` and the contour with `n` nodes per
/// half that [`solve_laplace`] would use, without solving anything.
pub fn plan_contour(p: &BeamPencil, win: TimeWindow, opts: &SolveOptions, n: usize) -> Result<(Contour, f64, f64)> {
    let (_, delta, sigma) = region(p, win, opts)?;
    Ok((contour_for(delta, sigma, win, opts, n)?, delta, sigma))
}

fn region(p: &BeamPencil, win: TimeWindow, opts: &SolveOptions) -> Result<(BoundParams, f64, f64)> {
    let bp = BoundParams::from_coefficients(p.a(), p.b(), p.nu())?;
    let (delta, sigma) = match opts.contour {
        ContourChoice::Hyperbolic { beta } => {
            let sigma = opts.sigma.unwrap_or(beta / win.t1);
            (select_sector_delta(&bp, sigma)?, sigma)
        }
        ContourChoice::Parabolic => select_parabola_delta(&bp, win.t0)?,
    };
    if let ContourChoice::Hyperbolic { .. } = opts.contour {
        if !(delta < PI / 2.0) {
            return Err(Error::Domain("sector is degenerate; increase sigma"));
        }
    }
    Ok((bp, delta, sigma))
}

fn contour_for(delta: f64, sigma: f64, win: TimeWindow, opts: &SolveOptions, n: usize) -> Result<Contour> {
    match opts.contour {
        ContourChoice::Hyperbolic { beta } => hyperbolic_params(delta, sigma, win, beta, n),
        ContourChoice::Parabolic => parabolic_params(delta, sigma, win, n, (opts.target / 10.0).min(0.5)),
    }
}

struct Context<'a> {
    p: &'a BeamPencil,
    terms: RhsTerms,
    fhat: &'a (dyn Fn(C64) -> C64 + Sync),
    poles: &'a [(C64, C64)],
    forcing_zero: bool,
    bp: BoundParams,
    win: TimeWindow,
    opts: SolveOptions,
    delta: f64,
    sigma: f64,
}

impl<'a> Context<'a> {
    fn new(
        p: &'a BeamPencil,
        init: &InitialData,
        forcing: &Forcing,
        fhat: &'a (dyn Fn(C64) -> C64 + Sync),
        poles: &'a [(C64, C64)],
        win: TimeWindow,
        opts: &SolveOptions,
    ) -> Result<Self> {
        let (bp, delta, sigma) = region(p, win, opts)?;
        Ok(Self { p, terms: p.rhs_terms(init, forcing)?, fhat, poles, forcing_zero: forcing.is_zero(), bp, win, opts: *opts, delta, sigma })
    }

    fn contour(&self, n: usize) -> Result<Contour> {
        contour_for(self.delta, self.sigma, self.win, &self.opts, n)
    }

    fn rhs(&self, z: C64) -> Result<ChebSeries> {
        let fhat = if self.forcing_zero { C64::new(0.0, 0.0) } else { (self.fhat)(z) };
        self.p.assemble_rhs_with(&self.terms, fhat, z)
    }

    fn check_leading_coefficient(&self, z: C64) -> Result<()> {
        if self.p.nu() <= 1.0 {
            return Ok(());
        }
        let zn = self.p.z_pow_nu(z)?;
        for k in 0..=32 {
            let x = (PI * k as f64 / 32.0).cos();
            let (a, b) = (self.p.a().eval_real(x), self.p.b().eval_real(x));
            if (zn * b + a).norm() <= 1e-10 * (a.abs() + zn.norm() * b.abs()) {
                return Err(Error::DegenerateLeadingCoefficient { re: z.re, im: z.im });
            }
        }
        Ok(())
    }

    fn solve_fixed<E: Executor>(&self, n: usize, exec: &E) -> Result<LaplaceSolve> {
        let contour = self.contour(n)?;
        let win = self.win;
        let growth: f64 = contour.nodes().iter().zip(contour.weights()).map(|(z, w)| w.norm() * (z.re * win.t0).exp()).sum();
        let eta = self.opts.target / (10.0 * growth);
        let zs = contour.upper_nodes().to_vec();
        let mut eps = Vec::with_capacity(zs.len());
        let mut dropped = Vec::with_capacity(zs.len());
        let cutoff = 1e-16f64.ln();
        for (j, &z) in zs.iter().enumerate() {
            self.check_leading_coefficient(z)?;
            let e = epsilon_bound(&self.bp, z)?;
            let drop = e == 0.0 && self.opts.contour == ContourChoice::Parabolic && z.re * win.t0 < cutoff;
            if e == 0.0 && !drop {
                return Err(Error::NodeNotCertified { node: j, modulus: z.norm() });
            }
            eps.push(e);
            dropped.push(drop);
        }
        let counter = AtomicUsize::new(0);
        let rhs: Vec<Result<ChebSeries>> = exec.map(zs.len(), |j| if dropped[j] { Ok(ChebSeries::zero(4)) } else { self.rhs(zs[j]) });
        let rhs = rhs.into_iter().collect::<Result<Vec<_>>>()?;
        let nodes = self.solve_nodes(&zs, &rhs, &eps, &dropped, eta, exec, &counter)?;

        let mut crossed = Vec::new();
        if !self.forcing_zero {
            for &(pole, residue) in self.poles {
                let edge = contour.real_part_at(pole.im);
                if (pole.re - edge).abs() <= 1e-10 * (1.0 + pole.norm()) {
                    return Err(Error::PoleOnContour { re: pole.re, im: pole.im });
                }
                if pole.re > edge {
                    crossed.push((pole, residue));
                }
            }
        }
        let pz: Vec<C64> = crossed.iter().map(|c| c.0).collect();
        let mut peps = Vec::with_capacity(pz.len());
        for (j, &z) in pz.iter().enumerate() {
            self.check_leading_coefficient(z)?;
            let e = epsilon_bound(&self.bp, z)?;
            if e == 0.0 {
                return Err(Error::NodeNotCertified { node: zs.len() + j, modulus: z.norm() });
            }
            peps.push(e);
        }
        let prhs: Vec<ChebSeries> = crossed.iter().map(|&(_, r)| self.terms.g.scale(r)).collect();
        let pnodes = self.solve_nodes(&pz, &prhs, &peps, &vec![false; pz.len()], eta, exec, &counter)?;
        let pole_corrections = pz.iter().zip(pnodes).map(|(&pole, o)| PoleCorrection { pole, field: o.u }).collect();

        let mut ls = LaplaceSolve {
            contour,
            window: win,
            choice: self.opts.contour,
            delta: self.delta,
            sigma: self.sigma,
            eta,
            node_solutions: Vec::with_capacity(nodes.len()),
            node_residuals: Vec::with_capacity(nodes.len()),
            node_eps: eps,
            node_sizes: Vec::with_capacity(nodes.len()),
            node_certified: Vec::with_capacity(nodes.len()),
            node_dropped: dropped,
            pole_corrections,
            solve_count: counter.load(Ordering::Relaxed),
            quadrature_estimate: None,
            a: self.p.a().clone(),
            rho: self.p.rho().clone(),
        };
        for o in nodes {
            ls.node_solutions.push(o.u);
            ls.node_residuals.push(o.residual);
            ls.node_sizes.push(o.n);
            ls.node_certified.push(o.certified);
        }
        Ok(ls)
    }

    /// Solves `T(z_j) u = rhs_j` for all `j`, doubling the truncation of the
    /// unfinished nodes in lockstep so each size is materialized once.
    #[allow(clippy::too_many_arguments)]
    fn solve_nodes<E: Executor>(&self, zs: &[C64], rhs: &[ChebSeries], eps: &[f64], skip: &[bool], eta: f64, exec: &E, counter: &AtomicUsize) -> Result<Vec<NodeOutcome>> {
        let mut done: Vec<Option<NodeOutcome>> = skip
            .iter()
            .map(|&s| s.then(|| NodeOutcome { u: ChebSeries::zero(0), residual: 0.0, n: 0, certified: true }))
            .collect();
        let mut prev_res = vec![f64::INFINITY; zs.len()];
        let longest = rhs.iter().map(ChebSeries::len).max().unwrap_or(1);
        let mut n = N_SPATIAL_MIN.max(longest.next_power_of_two());
        let (l, _) = self.p.bandwidths();
        loop {
            let pending: Vec<usize> = (0..zs.len()).filter(|&j| done[j].is_none()).collect();
            if pending.is_empty() {
                break;
            }
            if n > self.opts.n_max {
                return Err(Error::NodeNotConverged { node: pending[0], n_max: self.opts.n_max });
            }
            let sec: PencilSections = self.p.sections(n + l + longest + 8);
            let results: Vec<Result<(ChebSeries, f64, f64)>> = exec.map(pending.len(), |k| {
                let j = pending[k];
                let sys = self.p.system_at(&sec, zs[j], rhs[j].clone())?;
                counter.fetch_add(1, Ordering::Relaxed);
                let u = solve_almost_banded(&sys, n)?;
                let res = self.p.certified_residual(&sys, zs[j], &u);
                Ok((u.clone(), res, relative_tail(&u)))
            });
            for (k, r) in results.into_iter().enumerate() {
                let j = pending[k];
                let (u, res, tail) = r?;
                let ratio = res / eps[j];
                let last = 2 * n > self.opts.n_max;
                if ratio <= eta && tail <= eta {
                    done[j] = Some(NodeOutcome { u, residual: res, n, certified: true });
                } else if tail <= 1e-13 || tail <= eta && (res >= 0.5 * prev_res[j] || last) {
                    // Resolved, but the residual has stalled at round-off.
                    done[j] = Some(NodeOutcome { u, residual: res, n, certified: false });
                }
                prev_res[j] = res;
            }
            n *= 2;
        }
        Ok(done.into_iter().flatten().collect())
    }
}

struct NodeOutcome {
    u: ChebSeries,
    residual: f64,
    n: usize,
    certified: bool,
}

/// `||last 10% of coefficients|| / ||all coefficients||`.
fn relative_tail(u: &ChebSeries) -> f64 {
    let c = u.coeffs();
    let total: f64 = c.iter().map(|x| x.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let start = c.len() - (c.len() / 10).max(1);
    let tail: f64 = c[start..].iter().map(|x| x.norm_sqr()).sum();
    (tail / total).sqrt()
}

fn evaluate_y(ls: &LaplaceSolve, times: &[f64]) -> Result<Vec<ChebSeries>> {
    let mut y = invert_at_times(NodeValues::ConjugateHalf(&ls.node_solutions), &ls.contour, ls.window, times, 0)?;
    for (t, yt) in times.iter().zip(y.iter_mut()) {
        for pc in &ls.pole_corrections {
            yt.axpy((pc.pole * t).exp(), &pc.field);
        }
        *yt = yt.real_part();
    }
    Ok(y)
}

/// `y`, `y_t`, energy and error certificates at `times`.
pub fn evaluate(ls: &LaplaceSolve, times: &[f64]) -> Result<TimeSolution> {
    let y = evaluate_y(ls, times)?;
    let mut y_t = invert_at_times(NodeValues::ConjugateHalf(&ls.node_solutions), &ls.contour, ls.window, times, 1)?;
    for (t, v) in times.iter().zip(y_t.iter_mut()) {
        for pc in &ls.pole_corrections {
            v.axpy(pc.pole * (pc.pole * t).exp(), &pc.field);
        }
        *v = v.real_part();
    }
    let energy = y.iter().zip(&y_t).map(|(y, v)| energy_density_integral(&ls.a, &ls.rho, y, v)).collect();
    let analytic = match (ls.choice, ls.contour.kind()) {
        (ContourChoice::Hyperbolic { beta }, ContourKind::Hyperbolic { .. }) => {
            Some(error_certificate(&ls.contour, ls.delta, ls.sigma, beta, ls.eta, ls.window, 1.0)?.total())
        }
        _ => None,
    };
    let nodes_certified = ls.all_nodes_certified();
    let certificates = times
        .iter()
        .map(|&t| {
            let node_error = ls
                .contour
                .upper_nodes()
                .iter()
                .zip(&ls.contour.weights()[ls.contour.half_count()..])
                .enumerate()
                .map(|(j, (z, w))| {
                    let m = if j == 0 { 1.0 } else { 2.0 };
                    let e = if ls.node_dropped[j] { 0.0 } else { ls.node_residuals[j] / ls.node_eps[j] };
                    m * w.norm() * (z.re * t).exp() * e
                })
                .sum();
            TimeCertificate {
                quadrature_estimate: ls.quadrature_estimate,
                node_error,
                analytic_modulo_c: analytic.map(|a| a * (ls.sigma * t).exp()),
                nodes_certified,
            }
        })
        .collect();
    Ok(TimeSolution { times: times.to_vec(), y, y_t, energy, certificates })
}

/// `E(t) = 1/2 int a |y_xx|^2 + rho |y_t|^2` for each time of `ts`.
pub fn energy(ts: &TimeSolution, p: &BeamPencil) -> Vec<f64> {
    ts.y.iter().zip(&ts.y_t).map(|(y, v)| energy_density_integral(p.a(), p.rho(), y, v)).collect()
}

fn energy_density_integral(a: &ChebSeries, rho: &ChebSeries, y: &ChebSeries, v: &ChebSeries) -> f64 {
    let yxx = y.to_chebyshev().derivative_t().derivative_t();
    let v = v.to_chebyshev();
    let len = yxx.len().max(v.len()).max(a.len()).max(rho.len());
    let density = |x: f64| a.eval_real(x) * yxx.eval(x).norm_sqr() + rho.eval_real(x) * v.eval(x).norm_sqr();
    0.5 * quad::integrate(density, -1.0, 1.0, 2 * len + 1)
}

fn is_constant(s: &ChebSeries) -> bool {
    let c0 = s.coeff(0).norm();
    s.coeffs().iter().skip(1).all(|c| c.norm() <= 1e-14 * c0)
}

/// Leading long-time behavior `E(t) ~ e1 t^(-2 nu)` of the free damped beam.
pub fn energy_asymptote(p: &BeamPencil, init: &InitialData) -> Result<EnergyAsymptote> {
    let nu = p.nu();
    if !(nu < 1.0) {
        return Err(Error::Domain("energy asymptote needs 0 < nu < 1"));
    }
    if !is_constant(p.a()) || !is_constant(p.b()) {
        return Err(Error::Domain("energy asymptote needs constant a and b"));
    }
    if init.y1.max_abs_coeff() != 0.0 {
        return Err(Error::Domain("energy asymptote needs zero initial velocity"));
    }
    let a = p.a().coeff(0).re;
    let b = p.b().coeff(0).re;
    let d2 = init.y0.to_chebyshev().derivative_t().derivative_t();
    let integral = quad::integrate(|x| d2.eval(x).norm_sqr(), -1.0, 1.0, 2 * d2.len() + 1);
    let s = (PI * nu).sin();
    let g = gamma(nu);
    Ok(EnergyAsymptote { e1: s * s * g * g / (2.0 * PI * PI) * (b * b / a) * integral, exponent: -2.0 * nu, correction_exponent: -3.0 * nu })
}

/// `int_0^t_end e^(-z s) f(s) ds` by Clenshaw-Curtis, split into panels when
/// `|z| t_end > 50`.
pub fn forcing_transform_numeric(f: &dyn Fn(f64) -> f64, t_end: f64, z: C64) -> C64 {
    if !(t_end > 0.0) {
        return C64::new(0.0, 0.0);
    }
    let scale = z.norm() * t_end;
    let panels = if scale > 50.0 { (scale / 25.0).ceil() as usize } else { 1 };
    let w = t_end / panels as f64;
    (0..panels)
        .map(|k| {
            let a = k as f64 * w;
            quad::integrate(|s| C64Sum((-z * s).exp() * f(s)), a, a + w, 65).0
        })
        .sum()
}

/// `C64` with the `Default + Add + Mul<f64>` shape `quad::integrate` needs.
#[derive(Clone, Copy, Default)]
struct C64Sum(C64);

impl core::ops::Add for C64Sum {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(self.0 + o.0)
    }
}

impl core::ops::Mul<f64> for C64Sum {
    type Output = Self;
    fn mul(self, o: f64) -> Self {
        Self(self.0 * o)
    }
}

/// Windows `[t0 10^k, t0 10^(k+1)]` covering `[t0, t1]`, the last one
/// ending at `t1`.
pub fn split_windows(t0: f64, t1: f64) -> Result<Vec<TimeWindow>> {
    let whole = TimeWindow::new(t0, t1)?;
    let mut out = Vec::new();
    let mut a = whole.t0;
    loop {
        let b = (a * WINDOW_RATIO).min(whole.t1);
        out.push(TimeWindow::new(a, b)?);
        if b >= whole.t1 * (1.0 - 1e-14) {
            return Ok(out);
        }
        a = b;
    }
}

/// One solve per window of [`split_windows`].
pub fn solve_windows<E: Executor>(p: &BeamPencil, init: &InitialData, forcing: &Forcing, t0: f64, t1: f64, opts: &SolveOptions, exec: &E) -> Result<Vec<LaplaceSolve>> {
    split_windows(t0, t1)?.into_iter().map(|w| solve_laplace(p, init, forcing, w, opts, exec)).collect()
}

/// Evaluates each time with the first window that contains it.
pub fn evaluate_windows(solves: &[LaplaceSolve], times: &[f64]) -> Result<TimeSolution> {
    let mut out = TimeSolution { times: Vec::new(), y: Vec::new(), y_t: Vec::new(), energy: Vec::new(), certificates: Vec::new() };
    for &t in times {
        let ls = solves
            .iter()
            .find(|ls| ls.window.contains(t))
            .ok_or(Error::TimeOutsideWindow { t, t0: solves.first().map_or(0.0, |s| s.window.t0), t1: solves.last().map_or(0.0, |s| s.window.t1) })?;
        let mut one = evaluate(ls, &[t])?;
        out.times.push(t);
        out.y.append(&mut one.y);
        out.y_t.append(&mut one.y_t);
        out.energy.append(&mut one.energy);
        out.certificates.append(&mut one.certificates);
    }
    Ok(out)
}
