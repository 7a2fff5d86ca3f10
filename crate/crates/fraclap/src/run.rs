//! Solve, evaluate and write the solution and energy tables for one problem.

use std::path::Path;

use fraclap_core::contour::ContourKind;
use fraclap_core::exec::Executor;
use fraclap_core::pencil::{BoundaryCondition, Convention};
use fraclap_core::solver::{energy_asymptote, evaluate_windows, solve_laplace, split_windows, EnergyAsymptote, LaplaceSolve, TimeSolution};

use crate::config::{Problem, Spacing};
use crate::output::{fmt_f64, write_csv, Metadata};
use crate::Error;

/// Certificate status of a finished run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub label: String,
    pub target: f64,
    pub certificates_met: bool,
    /// Largest quadrature estimate over all windows.
    pub quadrature_estimate: f64,
    /// Largest node-error bound over all output times.
    pub node_error: f64,
    pub uncertified_nodes: usize,
    pub nodes: usize,
    pub solves: usize,
}

impl RunReport {
    pub fn line(&self) -> String {
        format!(
            "{}: {} (target {:.1e}, quadrature estimate {:.2e}, node bound {:.2e}, uncertified nodes {}/{}, solves {})",
            self.label,
            if self.certificates_met { "certified" } else { "NOT certified" },
            self.target,
            self.quadrature_estimate,
            self.node_error,
            self.uncertified_nodes,
            self.nodes,
            self.solves
        )
    }
}

/// `samples` times from `t0` to `t1`, both included.
pub fn time_grid(t0: f64, t1: f64, samples: usize, spacing: Spacing) -> Vec<f64> {
    let samples = samples.max(2);
    let log = spacing == Spacing::Log;
    (0..samples)
        .map(|k| {
            let s = k as f64 / (samples - 1) as f64;
            if k + 1 == samples {
                t1
            } else if log {
                t0 * (t1 / t0).powf(s)
            } else {
                t0 + (t1 - t0) * s
            }
        })
        .collect()
}

pub fn x_grid(points: usize) -> Vec<f64> {
    let points = points.max(2);
    (0..points).map(|k| -1.0 + 2.0 * k as f64 / (points - 1) as f64).collect()
}

/// One solve per decade window of `prob.window`.
pub fn solve_problem<E: Executor>(prob: &Problem, exec: &E) -> Result<Vec<LaplaceSolve>, Error> {
    let windows = split_windows(prob.window.t0, prob.window.t1)?;
    let mut out = Vec::with_capacity(windows.len());
    for w in windows {
        out.push(solve_laplace(&prob.pencil, &prob.init, &prob.forcing, w, &prob.options, exec)?);
    }
    Ok(out)
}

pub fn report(label: &str, target: f64, solves: &[LaplaceSolve], ts: &TimeSolution) -> RunReport {
    RunReport {
        label: label.to_string(),
        target,
        certificates_met: ts.certificates.iter().all(|c| c.met(target)),
        quadrature_estimate: solves.iter().filter_map(|s| s.quadrature_estimate).fold(0.0, f64::max),
        node_error: ts.certificates.iter().map(|c| c.node_error).fold(0.0, f64::max),
        uncertified_nodes: solves.iter().map(|s| s.node_certified.iter().filter(|c| !**c).count()).sum(),
        nodes: solves.iter().map(|s| s.node_certified.len()).sum(),
        solves: solves.iter().map(|s| s.solve_count).sum(),
    }
}

fn bc_name(b: BoundaryCondition) -> &'static str {
    match b {
        BoundaryCondition::Clamped => "clamped",
        BoundaryCondition::SimplySupported => "simply_supported",
    }
}

/// Resolved parameters of `prob` and of every window's contour.
pub fn solve_metadata(prob: &Problem, solves: &[LaplaceSolve]) -> Metadata {
    let mut m = Metadata::new();
    let (l, r) = prob.pencil.boundary_conditions();
    m.push("nu", fmt_f64(prob.pencil.nu()))
        .push("convention", if prob.pencil.convention() == Convention::Caputo { "caputo" } else { "riemann_liouville" })
        .push("bc_left", bc_name(l))
        .push("bc_right", bc_name(r))
        .push("target_accuracy", fmt_f64(prob.options.target));
    for (k, s) in solves.iter().enumerate() {
        let c = &s.contour;
        let shape = match c.kind() {
            ContourKind::Hyperbolic { mu, alpha, sigma } => format!("hyperbolic mu={} alpha={} sigma={}", fmt_f64(mu), fmt_f64(alpha), fmt_f64(sigma)),
            ContourKind::Parabolic { mu, delta, sigma } => format!("parabolic mu={} delta={} sigma={}", fmt_f64(mu), fmt_f64(delta), fmt_f64(sigma)),
        };
        m.push(
            &format!("window{k}"),
            format!(
                "t0={} t1={} {shape} h={} N={} eta={} region_delta={} quadrature_estimate={}",
                fmt_f64(s.window.t0),
                fmt_f64(s.window.t1),
                fmt_f64(c.h()),
                c.half_count(),
                fmt_f64(s.eta),
                fmt_f64(s.delta),
                s.quadrature_estimate.map_or("none".to_string(), fmt_f64)
            ),
        );
    }
    m
}

/// Long format: one row per `(t, x)`.
pub fn write_solution(path: &Path, meta: &Metadata, ts: &TimeSolution, xs: &[f64]) -> Result<(), Error> {
    let rows = ts.times.iter().enumerate().flat_map(|(k, &t)| {
        xs.iter().map(move |&x| vec![fmt_f64(t), fmt_f64(x), fmt_f64(ts.y[k].eval_real(x)), fmt_f64(ts.y_t[k].eval_real(x))])
    });
    write_csv(path, meta, &["t", "x", "y", "y_t"], rows)
}

/// `t, E` and, when available, the leading asymptote `e1 t^(-2 nu)`.
pub fn write_energy(path: &Path, meta: &Metadata, ts: &TimeSolution, asy: Option<&EnergyAsymptote>) -> Result<(), Error> {
    let mut meta = meta.clone();
    if let Some(a) = asy {
        meta.push("e1", fmt_f64(a.e1)).push("exponent", fmt_f64(a.exponent)).push("correction_exponent", fmt_f64(a.correction_exponent));
    }
    let rows = ts.times.iter().zip(&ts.energy).map(|(&t, &e)| vec![fmt_f64(t), fmt_f64(e), asy.map_or(String::new(), |a| fmt_f64(a.eval(t)))]);
    write_csv(path, &meta, &["t", "energy", "asymptote"], rows)
}

/// The leading energy asymptote when the problem is a free, constant
/// coefficient beam released from rest with `nu < 1`.
pub fn asymptote_if_applicable(prob: &Problem) -> Option<EnergyAsymptote> {
    if !prob.forcing.is_zero() {
        return None;
    }
    energy_asymptote(&prob.pencil, &prob.init).ok()
}

/// Full pipeline for one problem: solve, evaluate on `times`, write both
/// tables under `dir` with `stem` as file prefix.
pub fn run_problem<E: Executor>(
    label: &str,
    prob: &Problem,
    config_toml: &str,
    times: &[f64],
    xs: &[f64],
    dir: &Path,
    files: (&str, &str),
    exec: &E,
) -> Result<(RunReport, TimeSolution, Vec<LaplaceSolve>), Error> {
    let solves = solve_problem(prob, exec)?;
    let ts = evaluate_windows(&solves, times)?;
    let mut meta = solve_metadata(prob, &solves);
    meta.push_config(config_toml);
    write_solution(&dir.join(files.0), &meta, &ts, xs)?;
    write_energy(&dir.join(files.1), &meta, &ts, asymptote_if_applicable(prob).as_ref())?;
    Ok((report(label, prob.options.target, &solves, &ts), ts, solves))
}
