//! TOML problem description and its translation to solver inputs.

use fraclap_core::contour::TimeWindow;
use fraclap_core::pencil::{BeamPencil, BoundaryCondition, Convention, Forcing, InitialData, TimeProfile};
use fraclap_core::solver::{ContourChoice, SolveOptions};
use fraclap_core::speclin::ChebSeries;
use serde::{Deserialize, Serialize};

use crate::expr::parse_expr;
use crate::Error;

/// Coefficient tolerance for sampling expressions into Chebyshev series.
const SERIES_TOL: f64 = 1e-16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub beam: BeamConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub forcing: ForcingConfig,
    pub time: TimeConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamConfig {
    pub a: String,
    pub b: String,
    #[serde(default = "one")]
    pub rho: String,
    pub nu: f64,
    #[serde(default)]
    pub convention: ConventionName,
    pub bc_left: BcName,
    pub bc_right: BcName,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default = "zero")]
    pub y0: String,
    #[serde(default = "zero")]
    pub y1: String,
}

impl Default for InitialConfig {
    fn default() -> Self {
        Self { y0: zero(), y1: zero() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingConfig {
    #[serde(default = "zero")]
    pub profile: String,
    #[serde(default)]
    pub kind: ForcingKind,
    #[serde(default)]
    pub omega: f64,
    #[serde(default = "unit")]
    pub amplitude: f64,
}

impl Default for ForcingConfig {
    fn default() -> Self {
        Self { profile: zero(), kind: ForcingKind::Zero, omega: 0.0, amplitude: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t0: f64,
    pub t1: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_target")]
    pub target_accuracy: f64,
    #[serde(default)]
    pub contour: ContourName,
    #[serde(default = "default_beta")]
    pub beta: f64,
    /// Fixed node half-count; adaptive when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { target_accuracy: default_target(), contour: ContourName::Hyperbolic, beta: default_beta(), nodes: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_solution")]
    pub solution: String,
    #[serde(default = "default_energy")]
    pub energy: String,
    #[serde(default = "default_x_points")]
    pub x_points: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { solution: default_solution(), energy: default_energy(), x_points: default_x_points() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConventionName {
    #[default]
    Caputo,
    RiemannLiouville,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcName {
    Clamped,
    SimplySupported,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingKind {
    Sin,
    Cos,
    #[default]
    Zero,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ContourName {
    #[default]
    Hyperbolic,
    Parabolic,
}

fn one() -> String {
    "1".into()
}
fn zero() -> String {
    "0".into()
}
fn unit() -> f64 {
    1.0
}
fn default_samples() -> usize {
    50
}
fn default_target() -> f64 {
    1e-8
}
fn default_beta() -> f64 {
    2.0
}
fn default_solution() -> String {
    "solution.csv".into()
}
fn default_energy() -> String {
    "energy.csv".into()
}
fn default_x_points() -> usize {
    101
}

impl From<BcName> for BoundaryCondition {
    fn from(b: BcName) -> Self {
        match b {
            BcName::Clamped => BoundaryCondition::Clamped,
            BcName::SimplySupported => BoundaryCondition::SimplySupported,
        }
    }
}

/// Solver inputs built from a [`ProblemConfig`].
#[derive(Clone, Debug)]
pub struct Problem {
    pub pencil: BeamPencil,
    pub init: InitialData,
    pub forcing: Forcing,
    pub window: TimeWindow,
    pub options: SolveOptions,
}

pub fn series(src: &str) -> Result<ChebSeries, Error> {
    let e = parse_expr(src)?;
    let s = ChebSeries::from_fn_real(|x| e.eval(x), SERIES_TOL);
    if s.coeffs().iter().any(|c| !c.re.is_finite()) {
        return Err(Error::Config(format!("expression `{src}` is not finite on [-1, 1]")));
    }
    Ok(s)
}

impl ProblemConfig {
    pub fn times(&self) -> Vec<f64> {
        crate::run::time_grid(self.time.t0, self.time.t1, self.time.samples, self.time.spacing)
    }

    pub fn from_toml(text: &str) -> Result<Self, Error> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn build(&self) -> Result<Problem, Error> {
        let b = &self.beam;
        let convention = match b.convention {
            ConventionName::Caputo => Convention::Caputo,
            ConventionName::RiemannLiouville => Convention::RiemannLiouville,
        };
        let pencil = BeamPencil::new(series(&b.a)?, series(&b.b)?, series(&b.rho)?, b.nu, b.bc_left.into(), b.bc_right.into(), convention)?;
        let init = InitialData { y0: series(&self.initial.y0)?, y1: series(&self.initial.y1)? };
        let f = &self.forcing;
        let time = match f.kind {
            ForcingKind::Sin => TimeProfile::Sin { omega: f.omega },
            ForcingKind::Cos => TimeProfile::Cos { omega: f.omega },
            ForcingKind::Zero => TimeProfile::Zero,
        };
        if !f.amplitude.is_finite() || !f.omega.is_finite() {
            return Err(Error::Config("forcing amplitude and omega must be finite".into()));
        }
        let forcing = Forcing { amplitude: f.amplitude, profile: series(&f.profile)?, time };
        let window = TimeWindow::new(self.time.t0, self.time.t1)?;
        let s = &self.solver;
        let contour = match s.contour {
            ContourName::Hyperbolic => ContourChoice::Hyperbolic { beta: s.beta },
            ContourName::Parabolic => ContourChoice::Parabolic,
        };
        let options = SolveOptions { contour, nodes: s.nodes, ..SolveOptions::new(s.target_accuracy) };
        Ok(Problem { pencil, init, forcing, window, options })
    }
}
