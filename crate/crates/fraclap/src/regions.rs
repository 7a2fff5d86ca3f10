//! Tables of the uncertified-region boundary and of contour nodes.

use std::path::Path;

use fraclap_core::contour::TimeWindow;
use fraclap_core::resolvent::{region_curve, BoundParams};
use fraclap_core::solver::plan_contour;

use crate::config::Problem;
use crate::output::{fmt_f64, write_csv, Metadata};
use crate::Error;

pub const CURVE_EPSILONS: [f64; 4] = [0.0, 1.0, 5.0, 10.0];
pub const CURVE_SAMPLES: usize = 2000;

/// `(eps, theta, r)` rows of the boundary `r*(theta, eps)` for each
/// `eps` in [`CURVE_EPSILONS`].
pub fn region_rows(nu: f64, m: f64) -> Result<Vec<(f64, f64, f64)>, Error> {
    let bp = BoundParams::new(m, nu)?;
    let mut rows = Vec::with_capacity(CURVE_EPSILONS.len() * CURVE_SAMPLES);
    for eps in CURVE_EPSILONS {
        rows.extend(region_curve(&bp, eps, CURVE_SAMPLES)?.into_iter().map(|(th, r)| (eps, th, r)));
    }
    Ok(rows)
}

pub fn write_region_curves(path: &Path, nu: f64, m: f64) -> Result<(), Error> {
    let rows = region_rows(nu, m)?;
    let mut meta = Metadata::new();
    meta.push("nu", fmt_f64(nu)).push("M", fmt_f64(m));
    let rows = rows.into_iter().map(|(eps, th, r)| {
        let (re, im) = if r.is_finite() { (r * th.cos(), r * th.sin()) } else { (f64::NAN, f64::NAN) };
        vec![fmt_f64(eps), fmt_f64(th), fmt_f64(r), fmt_f64(re), fmt_f64(im)]
    });
    write_csv(path, &meta, &["eps", "theta", "r", "re", "im"], rows)
}

/// Nodes and weights `j = -N..=N` of the contour for `win`, with the region
/// parameters that produced it.
pub fn write_contour_dump(path: &Path, prob: &Problem, win: TimeWindow, n: usize, config_toml: &str) -> Result<(), Error> {
    let (c, delta, sigma) = plan_contour(&prob.pencil, win, &prob.options, n)?;
    let bp = BoundParams::from_coefficients(prob.pencil.a(), prob.pencil.b(), prob.pencil.nu())?;
    let mut meta = Metadata::new();
    meta.push("nu", fmt_f64(prob.pencil.nu()))
        .push("M", fmt_f64(bp.m))
        .push("t0", fmt_f64(win.t0))
        .push("t1", fmt_f64(win.t1))
        .push("region_delta", fmt_f64(delta))
        .push("sigma", fmt_f64(sigma))
        .push("h", fmt_f64(c.h()))
        .push("N", n)
        .push("kind", format!("{:?}", c.kind()))
        .push_config(config_toml);
    let half = c.half_count() as isize;
    let rows = (-half..=half).map(|j| {
        let (z, w) = (c.node(j), c.weight(j));
        vec![j.to_string(), fmt_f64(z.re), fmt_f64(z.im), fmt_f64(w.re), fmt_f64(w.im)]
    });
    write_csv(path, &meta, &["j", "re", "im", "weight_re", "weight_im"], rows)
}
