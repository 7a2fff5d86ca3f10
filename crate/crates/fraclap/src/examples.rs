//! Built-in problems: the forced and free constant-coefficient beam, the
//! variably damped clamped beam at several orders, and the convergence study
//! on a problem with variable coefficients.

use std::f64::consts::PI;
use std::path::Path;

use fraclap_core::contour::TimeWindow;
use fraclap_core::exec::Executor;
use fraclap_core::pencil::z_pow;
use fraclap_core::solver::{evaluate, solve_laplace, TimeSolution};
use fraclap_core::speclin::ChebSeries;
use fraclap_core::C64;

use crate::config::*;
use crate::output::{fmt_f64, write_csv, Metadata};
use crate::run::{run_problem, x_grid, RunReport};
use crate::Error;

pub const EXAMPLE1_A: f64 = 821.2;
pub const EXAMPLE1_B: f64 = 3.70;
pub const EXAMPLE1_NU: f64 = 0.64;
pub const EXAMPLE1_PROFILE: &str = "sin(pi*(x - 1))";
pub const FREE_DECAY_Y0: &str = "sin(2*pi*x)^2*(1 + x)*(1 - x)^2";
pub const EXAMPLE2_DAMPING: &str = "1.01 + tanh(10*x)";
pub const EXAMPLE2_Y0: &str = "(1 + x)^2*(1 - x)^2";
pub const EXAMPLE2_PROFILE: &str = "24 - pi^2*(1 + x)^2*(1 - x)^2";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExampleName {
    Example1,
    Example1Free,
    Example2,
    Example3,
    Convergence,
}

/// Command-line overrides shared by every example.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub nu: Option<f64>,
    pub omega: Option<f64>,
    pub accuracy: Option<f64>,
    pub contour: Option<ContourName>,
    pub nodes: Option<usize>,
    pub t0: Option<f64>,
    pub t1: Option<f64>,
    pub samples: Option<usize>,
    pub x_points: Option<usize>,
}

/// Outcome of an example: per-run certificates plus extra summary lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExampleOutcome {
    pub reports: Vec<RunReport>,
    pub notes: Vec<String>,
}

impl ExampleOutcome {
    pub fn certified(&self) -> bool {
        self.reports.iter().all(|r| r.certificates_met)
    }
}

fn beam_config(a: &str, b: &str, nu: f64, bc: BcName) -> BeamConfig {
    BeamConfig { a: a.into(), b: b.into(), rho: "1".into(), nu, convention: ConventionName::Caputo, bc_left: bc, bc_right: bc }
}

fn apply(cfg: &mut ProblemConfig, o: &Overrides) {
    if let Some(a) = o.accuracy {
        cfg.solver.target_accuracy = a;
    }
    if let Some(c) = o.contour {
        cfg.solver.contour = c;
    }
    if o.nodes.is_some() {
        cfg.solver.nodes = o.nodes;
    }
    if let Some(t) = o.t0 {
        cfg.time.t0 = t;
    }
    if let Some(t) = o.t1 {
        cfg.time.t1 = t;
    }
    if let Some(s) = o.samples {
        cfg.time.samples = s;
    }
    if let Some(x) = o.x_points {
        cfg.output.x_points = x;
    }
}

/// Forced constant-coefficient beam at rest, simply supported at both ends.
pub fn example1_config(omega: f64, o: &Overrides) -> ProblemConfig {
    let mut cfg = ProblemConfig {
        beam: beam_config(&EXAMPLE1_A.to_string(), &EXAMPLE1_B.to_string(), o.nu.unwrap_or(EXAMPLE1_NU), BcName::SimplySupported),
        initial: InitialConfig::default(),
        forcing: ForcingConfig { profile: EXAMPLE1_PROFILE.into(), kind: ForcingKind::Sin, omega, amplitude: 1.0 },
        time: TimeConfig { t0: 0.1, t1: 5.0, samples: 20, spacing: Spacing::Linear },
        solver: SolverConfig::default(),
        output: OutputConfig { solution: format!("example1_omega{omega}_solution.csv"), energy: format!("example1_omega{omega}_energy.csv"), ..OutputConfig::default() },
    };
    apply(&mut cfg, o);
    cfg
}

/// The same beam released from rest with an initial deflection.
pub fn example1_free_config(nu: f64, o: &Overrides) -> ProblemConfig {
    let mut cfg = ProblemConfig {
        beam: beam_config(&EXAMPLE1_A.to_string(), &EXAMPLE1_B.to_string(), nu, BcName::SimplySupported),
        initial: InitialConfig { y0: FREE_DECAY_Y0.into(), y1: "0".into() },
        forcing: ForcingConfig::default(),
        time: TimeConfig { t0: 1.0, t1: 1e4, samples: 121, spacing: Spacing::Log },
        solver: SolverConfig { target_accuracy: 1e-9, ..SolverConfig::default() },
        output: OutputConfig { solution: format!("example1_free_nu{nu}_solution.csv"), energy: format!("example1_free_nu{nu}_energy.csv"), ..OutputConfig::default() },
    };
    apply(&mut cfg, o);
    cfg
}

/// Clamped beam with damping concentrated on the right half.
pub fn example2_config(nu: f64, o: &Overrides) -> ProblemConfig {
    let mut cfg = ProblemConfig {
        beam: beam_config("1", EXAMPLE2_DAMPING, nu, BcName::Clamped),
        initial: InitialConfig { y0: EXAMPLE2_Y0.into(), y1: "0".into() },
        forcing: ForcingConfig { profile: EXAMPLE2_PROFILE.into(), kind: ForcingKind::Cos, omega: o.omega.unwrap_or(PI), amplitude: 1.0 },
        time: TimeConfig { t0: 0.05, t1: 6.0, samples: 120, spacing: Spacing::Linear },
        solver: SolverConfig::default(),
        output: OutputConfig { solution: format!("example2_nu{nu}_solution.csv"), energy: format!("example2_nu{nu}_energy.csv"), ..OutputConfig::default() },
    };
    apply(&mut cfg, o);
    cfg
}

/// Variable coefficients with mixed end conditions.
pub fn convergence_config(o: &Overrides) -> ProblemConfig {
    let mut cfg = ProblemConfig {
        beam: BeamConfig {
            a: "cosh(x)".into(),
            b: "sin(pi*x) + 2".into(),
            rho: "tanh(x) + 2".into(),
            nu: o.nu.unwrap_or(0.8),
            convention: ConventionName::Caputo,
            bc_left: BcName::Clamped,
            bc_right: BcName::SimplySupported,
        },
        initial: InitialConfig { y0: "sin(2*pi*x)*(1 - x^2)*(1 - x)".into(), y1: "0".into() },
        forcing: ForcingConfig { profile: "sin(pi*x)".into(), kind: ForcingKind::Cos, omega: o.omega.unwrap_or(20.0), amplitude: 1.0 },
        time: TimeConfig { t0: 1.0, t1: 10.0, samples: 50, spacing: Spacing::Linear },
        solver: SolverConfig { target_accuracy: 1e-10, ..SolverConfig::default() },
        output: OutputConfig { solution: "convergence_solution.csv".into(), energy: "convergence_energy.csv".into(), ..OutputConfig::default() },
    };
    apply(&mut cfg, o);
    cfg
}

/// Steady-state amplitude `Im[e^(i w t) / (pi^4 a + pi^4 b (i w)^nu - w^2)]`
/// of the forced mode `sin(pi (x - 1))`.
pub fn example1_steady_state(a: f64, b: f64, nu: f64, omega: f64, t: f64) -> f64 {
    let p4 = PI.powi(4);
    let iw = C64::new(0.0, omega);
    let d = p4 * a + p4 * b * z_pow(iw, nu).expect("i omega is off the cut") - omega * omega;
    ((iw * t).exp() / d).im
}

/// `L^2(-1, 1)` distance between `y` and `q sin(pi (x - 1))`.
fn modal_deviation(y: &ChebSeries, q: f64, mode: &ChebSeries) -> f64 {
    let mut d = y.clone();
    d.axpy(C64::new(-q, 0.0), mode);
    d.l2_norm()
}

fn run_config<E: Executor>(label: &str, cfg: &ProblemConfig, times: &[f64], out: &Path, exec: &E) -> Result<(RunReport, TimeSolution), Error> {
    let prob = cfg.build()?;
    let (report, ts, _) = run_problem(label, &prob, &cfg.to_toml(), times, &x_grid(cfg.output.x_points), out, (&cfg.output.solution, &cfg.output.energy), exec)?;
    Ok((report, ts))
}

pub fn run_example<E: Executor>(name: ExampleName, o: &Overrides, out: &Path, exec: &E) -> Result<ExampleOutcome, Error> {
    match name {
        ExampleName::Example1 => example1(o, out, exec),
        ExampleName::Example1Free => example1_free(o, out, exec),
        ExampleName::Example2 => example2(&o.nu.map_or(vec![0.5, 0.7, 1.0], |v| vec![v]), "example2", o, out, exec),
        ExampleName::Example3 => example2(&o.nu.map_or(vec![1.2, 1.8], |v| vec![v]), "example3", o, out, exec),
        ExampleName::Convergence => convergence(o, out, exec),
    }
}

fn example1<E: Executor>(o: &Overrides, out: &Path, exec: &E) -> Result<ExampleOutcome, Error> {
    let mut outcome = ExampleOutcome::default();
    let mode = series(EXAMPLE1_PROFILE)?;
    for omega in o.omega.map_or(vec![5.0, 25.0, 100.0], |w| vec![w]) {
        let cfg = example1_config(omega, o);
        let times = cfg.times();
        let (report, ts) = run_config(&format!("example1 omega={omega}"), &cfg, &times, out, exec)?;
        let rows: Vec<(f64, f64)> = ts
            .times
            .iter()
            .zip(&ts.y)
            .map(|(&t, y)| (t, modal_deviation(y, example1_steady_state(EXAMPLE1_A, EXAMPLE1_B, cfg.beam.nu, omega, t), &mode)))
            .collect();
        let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
        let mut meta = Metadata::new();
        meta.push("description", "L2 distance to the steady-state closed form").push_config(&cfg.to_toml());
        write_csv(out.join(format!("example1_omega{omega}_deviation.csv")), &meta, &["t", "l2_deviation"], rows.iter().map(|&(t, d)| vec![fmt_f64(t), fmt_f64(d)]))?;
        outcome.notes.push(format!("example1 omega={omega}: max L2 deviation from the steady-state closed form {worst:.3e}"));
        outcome.reports.push(report);
    }
    Ok(outcome)
}

fn example1_free<E: Executor>(o: &Overrides, out: &Path, exec: &E) -> Result<ExampleOutcome, Error> {
    let mut outcome = ExampleOutcome::default();
    for nu in o.nu.map_or(vec![0.32, 0.64], |v| vec![v]) {
        let cfg = example1_free_config(nu, o);
        let times = cfg.times();
        let (report, _) = run_config(&format!("example1_free nu={nu}"), &cfg, &times, out, exec)?;
        outcome.reports.push(report);
    }
    Ok(outcome)
}

/// Energy of the undamped solution `(1 + x)^2 (1 - x)^2 cos(pi t)`.
pub fn undamped_energy(t: f64) -> f64 {
    let (c, s) = ((PI * t).cos(), (PI * t).sin());
    0.5 * (128.0 / 5.0 * c * c + PI * PI * 256.0 / 315.0 * s * s)
}

/// Writes the undamped closed-form solution and energy after checking that
/// the solver refuses the undamped beam. Returns a summary line.
pub fn write_undamped_reference(o: &Overrides, out: &Path) -> Result<String, Error> {
    let mut undamped = example2_config(1.0, o);
    undamped.beam.b = "0".into();
    let note = match undamped.build() {
        Err(e) => format!("example2 undamped: solver input rejected ({e}); writing the closed form"),
        Ok(_) => return Err(Error::Config("an undamped beam should be rejected".into())),
    };
    let times = undamped.times();
    let xs = x_grid(undamped.output.x_points);
    let mut meta = Metadata::new();
    meta.push("description", "undamped closed form (1 + x)^2 (1 - x)^2 cos(pi t)").push_config(&undamped.to_toml());
    let shape = |x: f64| (1.0 - x * x).powi(2);
    let rows = times.iter().flat_map(|&t| {
        xs.iter().map(move |&x| vec![fmt_f64(t), fmt_f64(x), fmt_f64(shape(x) * (PI * t).cos()), fmt_f64(-PI * shape(x) * (PI * t).sin())])
    });
    write_csv(out.join("example2_undamped_solution.csv"), &meta, &["t", "x", "y", "y_t"], rows)?;
    let rows = times.iter().map(|&t| vec![fmt_f64(t), fmt_f64(undamped_energy(t)), String::new()]);
    write_csv(out.join("example2_undamped_energy.csv"), &meta, &["t", "energy", "asymptote"], rows)?;
    Ok(note)
}

fn example2<E: Executor>(nus: &[f64], stem: &str, o: &Overrides, out: &Path, exec: &E) -> Result<ExampleOutcome, Error> {
    let mut outcome = ExampleOutcome::default();
    for &nu in nus {
        let mut cfg = example2_config(nu, o);
        cfg.output.solution = format!("{stem}_nu{nu}_solution.csv");
        cfg.output.energy = format!("{stem}_nu{nu}_energy.csv");
        let times = cfg.times();
        let (report, _) = run_config(&format!("{stem} nu={nu}"), &cfg, &times, out, exec)?;
        outcome.reports.push(report);
    }
    if stem == "example2" {
        outcome.notes.push(write_undamped_reference(o, out)?);
    }
    Ok(outcome)
}

/// Node counts of the convergence table.
pub const CONVERGENCE_NODES: [usize; 12] = [10, 20, 30, 40, 60, 80, 100, 120, 160, 200, 240, 320];
/// Node count of the reference solution.
pub const CONVERGENCE_REFERENCE: usize = 480;

/// Maximum over `times` of the `L^2` error of each node count against the
/// reference node count; `None` where the contour is not available.
pub fn convergence_table<E: Executor>(cfg: &ProblemConfig, contour: ContourName, nodes: &[usize], reference: usize, times: &[f64], exec: &E) -> Result<Vec<(usize, Option<f64>)>, Error> {
    let mut cfg = cfg.clone();
    cfg.solver.contour = contour;
    let prob = cfg.build()?;
    let win = TimeWindow::new(cfg.time.t0, cfg.time.t1)?;
    let solve = |n: usize| {
        let opts = fraclap_core::solver::SolveOptions { nodes: Some(n), ..prob.options };
        solve_laplace(&prob.pencil, &prob.init, &prob.forcing, win, &opts, exec).and_then(|ls| evaluate(&ls, times))
    };
    let truth = solve(reference)?;
    let mut out = Vec::with_capacity(nodes.len());
    for &n in nodes {
        let err = match solve(n) {
            Ok(ts) => Some(ts.y.iter().zip(&truth.y).map(|(u, v)| modal_difference(u, v)).fold(0.0, f64::max)),
            // Small node counts can fall outside the closed-form parameter range.
            Err(fraclap_core::Error::Domain(_)) => None,
            Err(e) => return Err(e.into()),
        };
        out.push((n, err));
    }
    Ok(out)
}

fn modal_difference(u: &ChebSeries, v: &ChebSeries) -> f64 {
    let mut d = u.clone();
    d.axpy(C64::new(-1.0, 0.0), v);
    d.l2_norm()
}

fn convergence<E: Executor>(o: &Overrides, out: &Path, exec: &E) -> Result<ExampleOutcome, Error> {
    let mut outcome = ExampleOutcome::default();
    let cfg = convergence_config(&Overrides { nodes: None, ..o.clone() });
    let times = cfg.times();
    let reference = o.nodes.unwrap_or(CONVERGENCE_REFERENCE);
    let nodes: Vec<usize> = CONVERGENCE_NODES.iter().copied().filter(|&n| n < reference).collect();
    let contours = o.contour.map_or(vec![ContourName::Hyperbolic, ContourName::Parabolic], |c| vec![c]);
    let mut rows = Vec::new();
    for c in contours {
        let name = if c == ContourName::Hyperbolic { "hyperbolic" } else { "parabolic" };
        for (n, err) in convergence_table(&cfg, c, &nodes, reference, &times, exec)? {
            let shown = err.map_or("n/a".to_string(), |e| format!("{e:.3e}"));
            outcome.notes.push(format!("convergence {name} N={n}: {shown}"));
            rows.push(vec![name.to_string(), n.to_string(), err.map_or(String::new(), fmt_f64)]);
        }
    }
    let mut meta = Metadata::new();
    meta.push("description", "max over t of the L2 difference to the reference node count").push("reference_N", reference).push_config(&cfg.to_toml());
    write_csv(out.join("convergence.csv"), &meta, &["contour", "N", "error"], rows)?;
    // The certified run at the configured accuracy.
    let (report, _) = run_config("convergence", &cfg, &times, out, exec)?;
    outcome.reports.push(report);
    Ok(outcome)
}
