use std::f64::consts::PI;

use fraclap_core::contour::*;
use fraclap_core::exec::Sequential;
use fraclap_core::pencil::*;
use fraclap_core::solver::*;
use fraclap_core::speclin::ChebSeries;
use fraclap_core::{Error, C64};

const E0I: f64 = 821.2;
const E1I: f64 = 3.70;

fn beam(nu: f64, a: f64, b: f64) -> BeamPencil {
    BeamPencil::new(
        ChebSeries::constant(a),
        ChebSeries::constant(b),
        ChebSeries::constant(1.0),
        nu,
        BoundaryCondition::SimplySupported,
        BoundaryCondition::SimplySupported,
        Convention::Caputo,
    )
    .unwrap()
}

fn mode() -> ChebSeries {
    ChebSeries::from_fn_real(|x| (PI * (x - 1.0)).sin(), 1e-16)
}

fn sin_forcing(omega: f64) -> Forcing {
    Forcing { amplitude: 1.0, profile: mode(), time: TimeProfile::Sin { omega } }
}

/// Denominator of the single-mode transform `q(z) = fhat(z) / d(z)`.
fn modal_denominator(z: C64) -> C64 {
    let p4 = PI.powi(4);
    z * z + p4 * E1I * z.powf(0.64) + p4 * E0I
}

fn modal_denominator_prime(z: C64) -> C64 {
    2.0 * z + PI.powi(4) * E1I * 0.64 * z.powf(-0.36)
}

/// Damped eigenvalue of the forced mode in the upper half plane, by Newton
/// from the undamped frequency.
fn modal_root() -> C64 {
    let mut z = C64::new(0.0, PI * PI * E0I.sqrt());
    for _ in 0..60 {
        z -= modal_denominator(z) / modal_denominator_prime(z);
    }
    z
}

/// Modal amplitude of the zero-data forced beam: scalar inversion on a wide
/// contour with many nodes, plus the residues of every singularity the
/// contour crosses.
fn modal_amplitude(omega: f64, times: &[f64]) -> Vec<f64> {
    let win = TimeWindow::new(times.iter().cloned().fold(f64::INFINITY, f64::min), times.iter().cloned().fold(0.0, f64::max)).unwrap();
    let c = hyperbolic_params(0.3, 0.4, win, 2.0, 400).unwrap();
    let tp = TimeProfile::Sin { omega };
    let v: Vec<C64> = c.nodes().iter().map(|&z| tp.transform(z) / modal_denominator(z)).collect();
    let q = invert_at_times(NodeValues::Full(&v), &c, win, times, 0).unwrap();
    let root = modal_root();
    assert!(modal_denominator(root).norm() < 1e-9 * E0I);
    let mut residues: Vec<(C64, C64)> = tp.poles().into_iter().map(|(p, r)| (p, r / modal_denominator(p))).collect();
    for p in [root, root.conj()] {
        residues.push((p, tp.transform(p) / modal_denominator_prime(p)));
    }
    times
        .iter()
        .zip(q)
        .map(|(&t, mut v)| {
            for &(p, r) in &residues {
                if p.re > c.real_part_at(p.im) {
                    v += (p * t).exp() * r;
                }
            }
            v.re
        })
        .collect()
}

fn times20() -> Vec<f64> {
    (0..20).map(|k| 0.1 + 4.9 * k as f64 / 19.0).collect()
}

#[test]
fn forced_beam_matches_the_modal_solution() {
    let times = times20();
    let win = TimeWindow::new(0.1, 5.0).unwrap();
    for omega in [5.0, 25.0, 100.0] {
        let ls = solve_laplace(&beam(0.64, E0I, E1I), &InitialData::zero(), &sin_forcing(omega), win, &SolveOptions::new(1e-8), &Sequential).unwrap();
        // A forcing pole carries a correction exactly when it lies right of the contour.
        for (p, _) in (TimeProfile::Sin { omega }).poles() {
            let crossed = p.re > ls.contour.real_part_at(p.im);
            assert_eq!(crossed, ls.pole_corrections.iter().any(|c| c.pole == p), "omega {omega}");
        }
        let ts = evaluate(&ls, &times).unwrap();
        let q = modal_amplitude(omega, &times);
        for (k, y) in ts.y.iter().enumerate() {
            let mut d = y.clone();
            d.axpy(C64::new(-q[k], 0.0), &mode());
            assert!(d.l2_norm() <= 1e-8, "omega {omega} t {} err {:e}", times[k], d.l2_norm());
            assert!(ts.certificates[k].met(1e-8) || !ls.all_nodes_certified());
        }
    }
}

#[test]
fn solution_vanishes_at_the_forcing_node() {
    let win = TimeWindow::new(0.1, 1.0).unwrap();
    let ls = solve_laplace(&beam(0.64, E0I, E1I), &InitialData::zero(), &sin_forcing(5.0), win, &SolveOptions::new(1e-8), &Sequential).unwrap();
    let times: Vec<f64> = (0..30).map(|k| 0.1 + 0.9 * k as f64 / 29.0).collect();
    let ts = evaluate(&ls, &times).unwrap();
    for y in &ts.y {
        assert!(y.eval_real(0.0).abs() <= 1e-12);
    }
}

#[test]
fn zero_data_gives_zero_solution() {
    let win = TimeWindow::new(1.0, 10.0).unwrap();
    let ls = solve_laplace(&beam(0.64, E0I, E1I), &InitialData::zero(), &Forcing::none(), win, &SolveOptions::new(1e-8), &Sequential).unwrap();
    assert!(ls.node_solutions.iter().all(|u| u.max_abs_coeff() == 0.0));
    assert!(ls.pole_corrections.is_empty());
    let ts = evaluate(&ls, &[1.0, 3.0, 10.0]).unwrap();
    assert!(ts.y.iter().chain(&ts.y_t).all(|u| u.max_abs_coeff() == 0.0));
    assert!(ts.energy.iter().all(|&e| e == 0.0));
}

fn free_decay_data() -> InitialData {
    InitialData {
        y0: ChebSeries::from_fn_real(|x| (2.0 * PI * x).sin().powi(2) * (1.0 + x) * (1.0 - x).powi(2), 1e-16),
        y1: ChebSeries::zero(0),
    }
}

#[test]
fn one_solve_serves_every_time() {
    let win = TimeWindow::new(1.0, 10.0).unwrap();
    let ls = solve_laplace(&beam(0.64, E0I, E1I), &free_decay_data(), &Forcing::none(), win, &SolveOptions::new(1e-8), &Sequential).unwrap();
    let count = ls.solve_count;
    assert!(count > 0);
    let times: Vec<f64> = (0..100).map(|k| 1.0 + 9.0 * k as f64 / 99.0).collect();
    let all = evaluate(&ls, &times).unwrap();
    assert_eq!(ls.solve_count, count);
    // Any subset gives bit-identical values.
    let sub: Vec<f64> = times.iter().step_by(7).cloned().collect();
    let part = evaluate(&ls, &sub).unwrap();
    for (k, y) in part.y.iter().enumerate() {
        assert_eq!(y.coeffs(), all.y[7 * k].coeffs());
    }
    assert!(matches!(evaluate(&ls, &[11.0]), Err(Error::TimeOutsideWindow { .. })));
}

#[test]
fn energy_of_a_polynomial_mode() {
    let p = beam(0.5, 1.0, 1.0);
    let shape = ChebSeries::from_fn_real(|x| (1.0 - x * x).powi(2), 1e-16);
    let times = [0.0, 0.3, 1.0, 2.5];
    let ts = TimeSolution {
        times: times.to_vec(),
        y: times.iter().map(|t| shape.scale(C64::new(t.cos(), 0.0))).collect(),
        y_t: times.iter().map(|t| shape.scale(C64::new(-t.sin(), 0.0))).collect(),
        energy: Vec::new(),
        certificates: Vec::new(),
    };
    // int (12x^2 - 4)^2 = 128/5 and int (1 - x^2)^4 = 256/315.
    for (t, e) in times.iter().zip(energy(&ts, &p)) {
        let exact = 0.5 * (t.cos().powi(2) * 128.0 / 5.0 + t.sin().powi(2) * 256.0 / 315.0);
        assert!((e - exact).abs() <= 1e-13 * exact, "t {t}");
    }
}

#[test]
fn energy_asymptote_coefficient() {
    let init = free_decay_data();
    let e = energy_asymptote(&beam(0.64, E0I, E1I), &init).unwrap();
    assert_eq!((e.exponent, e.correction_exponent), (-1.28, -0.64 * 3.0));
    // Composite Simpson on 10^4 panels of the hand-differentiated profile.
    let d2 = |x: f64| {
        let (s, c) = ((2.0 * PI * x).sin(), (2.0 * PI * x).cos());
        let f = s * s;
        let f1 = 4.0 * PI * s * c;
        let f2 = 8.0 * PI * PI * (c * c - s * s);
        let g = (1.0 + x) * (1.0 - x).powi(2);
        let g1 = (1.0 - x).powi(2) - 2.0 * (1.0 + x) * (1.0 - x);
        let g2 = -4.0 * (1.0 - x) + 2.0 * (1.0 + x);
        f2 * g + 2.0 * f1 * g1 + f * g2
    };
    let m = 10_000;
    let hh = 2.0 / m as f64;
    let mut integral = 0.0;
    for k in 0..=m {
        let w = if k == 0 || k == m { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        integral += w * d2(-1.0 + k as f64 * hh).powi(2);
    }
    integral *= hh / 3.0;
    let s = (0.64 * PI).sin();
    let g = fraclap_core::special::gamma(0.64);
    let oracle = s * s * g * g / (2.0 * PI * PI) * (E1I * E1I / E0I) * integral;
    assert!((e.e1 - oracle).abs() <= 1e-10 * oracle, "{} {}", e.e1, oracle);

    assert_eq!(energy_asymptote(&beam(0.64, E0I, E1I), &InitialData::zero()).unwrap().e1, 0.0);
    let doubled = energy_asymptote(&beam(0.64, E0I, 2.0 * E1I), &init).unwrap();
    assert!((doubled.e1 - 4.0 * e.e1).abs() <= 1e-14 * doubled.e1);

    assert!(energy_asymptote(&beam(1.2, E0I, E1I), &init).is_err());
    let moving = InitialData { y0: init.y0.clone(), y1: init.y0.clone() };
    assert!(energy_asymptote(&beam(0.64, E0I, E1I), &moving).is_err());
    let varying = BeamPencil::new(
        ChebSeries::from_fn_real(f64::cosh, 1e-16),
        ChebSeries::constant(1.0),
        ChebSeries::constant(1.0),
        0.5,
        BoundaryCondition::SimplySupported,
        BoundaryCondition::SimplySupported,
        Convention::Caputo,
    )
    .unwrap();
    assert!(energy_asymptote(&varying, &init).is_err());
}

#[test]
fn numeric_forcing_transform() {
    assert_eq!(forcing_transform_numeric(&|_| 0.0, 3.0, C64::new(1.0, 2.0)), C64::new(0.0, 0.0));
    let a = 0.3;
    for z in [C64::new(1.0, 0.0), C64::new(-2.0, 5.0), C64::new(0.5, 80.0), C64::new(-10.0, -300.0)] {
        for t1 in [0.5, 2.0] {
            let exact = (((a - z) * t1).exp() - 1.0) / (a - z);
            let got = forcing_transform_numeric(&|s| (a * s).exp(), t1, z);
            // Scale of the integral of |integrand|.
            let k = a - z.re;
            let mass = if k.abs() < 1e-12 { t1 } else { ((k * t1).exp() - 1.0) / k };
            assert!((got - exact).norm() <= 1e-13 * mass, "z {z} t1 {t1}");
        }
    }
}

#[test]
fn truncated_forcing_does_not_change_the_past() {
    // The solution at t only depends on the forcing on [0, t].
    let omega = 5.0;
    let p = beam(0.64, E0I, E1I);
    let win = TimeWindow::new(1.0, 3.0).unwrap();
    let opts = SolveOptions::new(1e-9);
    let full = solve_laplace(&p, &InitialData::zero(), &sin_forcing(omega), win, &opts, &Sequential).unwrap();
    let cut = |z: C64| forcing_transform_numeric(&|s| (omega * s).sin(), 1.0, z);
    let part = solve_laplace_with(&p, &InitialData::zero(), &sin_forcing(omega), &cut, &[], win, &opts, &Sequential).unwrap();
    let a = evaluate(&full, &[1.0]).unwrap();
    let b = evaluate(&part, &[1.0]).unwrap();
    let mut d = a.y[0].clone();
    d.axpy(C64::new(-1.0, 0.0), &b.y[0]);
    assert!(d.l2_norm() <= 1e-9, "{:e}", d.l2_norm());
    // Later times do see the difference.
    let a = evaluate(&full, &[2.5]).unwrap();
    let b = evaluate(&part, &[2.5]).unwrap();
    let mut d = a.y[0].clone();
    d.axpy(C64::new(-1.0, 0.0), &b.y[0]);
    assert!(d.l2_norm() > 1e-7);
}

#[test]
fn node_solutions_are_conjugate_symmetric() {
    let p = beam(0.64, E0I, E1I);
    let init = free_decay_data();
    let forcing = sin_forcing(5.0);
    let win = TimeWindow::new(1.0, 10.0).unwrap();
    let ls = solve_laplace(&p, &init, &forcing, win, &SolveOptions { nodes: Some(256), ..SolveOptions::new(1e-8) }, &Sequential).unwrap();
    let terms = p.rhs_terms(&init, &forcing).unwrap();
    let n = ls.contour.half_count();
    let mut full = vec![ChebSeries::zero(0); 2 * n + 1];
    for j in 0..=n {
        let z = ls.contour.node(-(j as isize));
        assert!((z - ls.contour.node(j as isize).conj()).norm() <= 1e-14 * z.norm());
        let rhs = p.assemble_rhs(&terms, &forcing, z).unwrap();
        let sys = p.assemble_pencil_matrix(z, ls.node_sizes[j]).unwrap();
        let sys = fraclap_core::speclin::AlmostBandedSystem { rhs, ..sys };
        let u = fraclap_core::speclin::solve_almost_banded(&sys, ls.node_sizes[j]).unwrap();
        let mine = &ls.node_solutions[j];
        let scale = mine.max_abs_coeff();
        for k in 0..mine.len() {
            assert!((u.coeff(k) - mine.coeff(k).conj()).norm() <= 1e-10 * scale, "node {j} coeff {k}");
        }
        full[n - j] = u;
        full[n + j] = mine.clone();
    }
    // The full sum has a negligible imaginary part.
    let times = [1.0, 2.0, 5.0, 10.0];
    let ys = invert_at_times(NodeValues::Full(&full), &ls.contour, win, &times, 0).unwrap();
    for y in ys {
        let re = y.real_part().max_abs_coeff();
        let im = y.coeffs().iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        assert!(im <= 1e-11 * re, "{im:e} {re:e}");
    }
}

#[test]
fn certified_node_error_bounds_the_true_node_error() {
    let win = TimeWindow::new(0.1, 5.0).unwrap();
    for omega in [5.0, 25.0, 100.0] {
        let ls = solve_laplace(&beam(0.64, E0I, E1I), &InitialData::zero(), &sin_forcing(omega), win, &SolveOptions::new(1e-8), &Sequential).unwrap();
        let tp = TimeProfile::Sin { omega };
        let mut worst = 0.0f64;
        for (j, u) in ls.node_solutions.iter().enumerate() {
            if ls.node_dropped[j] {
                continue;
            }
            let z = ls.contour.upper_nodes()[j];
            let mut d = u.clone();
            d.axpy(-tp.transform(z) / modal_denominator(z), &mode());
            let bound = ls.node_residuals[j] / ls.node_eps[j];
            assert!(d.l2_norm() <= bound, "omega {omega} node {j} z {z} err {:e} bound {bound:e}", d.l2_norm());
            worst = worst.max(d.l2_norm() / bound);
        }
        assert!(worst > 0.0);
    }
}

fn variable_beam() -> (BeamPencil, InitialData, Forcing) {
    let p = BeamPencil::new(
        ChebSeries::from_fn_real(f64::cosh, 1e-16),
        ChebSeries::from_fn_real(|x| (PI * x).sin() + 2.0, 1e-16),
        ChebSeries::from_fn_real(|x| x.tanh() + 2.0, 1e-16),
        0.8,
        BoundaryCondition::Clamped,
        BoundaryCondition::SimplySupported,
        Convention::Caputo,
    )
    .unwrap();
    let y0 = ChebSeries::from_fn_real(|x| (2.0 * PI * x).sin() * (1.0 - x * x) * (1.0 - x), 1e-16);
    let forcing = Forcing { amplitude: 1.0, profile: ChebSeries::from_fn_real(|x| (PI * x).sin(), 1e-16), time: TimeProfile::Cos { omega: 20.0 } };
    (p, InitialData { y0, y1: ChebSeries::zero(0) }, forcing)
}

#[test]
fn variable_coefficients_stay_at_modest_spatial_size() {
    let (p, init, forcing) = variable_beam();
    let win = TimeWindow::new(1.0, 10.0).unwrap();
    let mut prev = f64::INFINITY;
    for n in [60, 120] {
        let ls = solve_laplace(&p, &init, &forcing, win, &SolveOptions { nodes: Some(n), ..SolveOptions::new(1e-10) }, &Sequential).unwrap();
        assert!(ls.node_sizes.iter().all(|&s| s <= 512));
        let est = ls.quadrature_estimate.unwrap();
        assert!(est < prev / 100.0, "N {n} estimate {est:e}");
        prev = est;
        let ts = evaluate(&ls, &[1.0, 10.0]).unwrap();
        // Left end clamped, right end simply supported.
        for y in &ts.y {
            let d = y.to_chebyshev().derivative_t();
            assert!(y.eval_real(-1.0).abs() < 1e-10 && d.eval_real(-1.0).abs() < 1e-9);
            assert!(y.eval_real(1.0).abs() < 1e-10 && d.derivative_t().eval_real(1.0).abs() < 1e-7);
        }
    }
}

#[test]
fn windows_cover_the_range_by_decades() {
    let w = split_windows(1e2, 1e4).unwrap();
    assert_eq!(w.len(), 2);
    assert_eq!((w[0].t0, w[0].t1, w[1].t0, w[1].t1), (1e2, 1e3, 1e3, 1e4));
    let w = split_windows(0.5, 7.0).unwrap();
    assert_eq!(w.len(), 2);
    assert_eq!(w[1].t1, 7.0);
    for pair in w.windows(2) {
        assert_eq!(pair[0].t1, pair[1].t0);
    }
    assert!(split_windows(3.0, 1.0).is_err());
}

#[test]
fn certified_flag_matches_the_node_ratio() {
    let (p, init, forcing) = variable_beam();
    let win = TimeWindow::new(1.0, 10.0).unwrap();
    let ls = solve_laplace(&p, &init, &forcing, win, &SolveOptions { nodes: Some(60), ..SolveOptions::new(1e-6) }, &Sequential).unwrap();
    for j in 0..ls.node_solutions.len() {
        if ls.node_certified[j] {
            assert!(ls.node_residuals[j] / ls.node_eps[j] <= ls.eta, "node {j}");
        }
        assert!(ls.node_eps[j] > 0.0 && ls.node_residuals[j].is_finite());
    }
    assert_eq!(ls.all_nodes_certified(), ls.node_certified.iter().all(|&c| c));
}

#[test]
fn doubling_nodes_stays_within_the_estimate() {
    let (p, init, forcing) = variable_beam();
    let win = TimeWindow::new(1.0, 10.0).unwrap();
    let ls = solve_laplace(&p, &init, &forcing, win, &SolveOptions::new(1e-8), &Sequential).unwrap();
    let est = ls.quadrature_estimate.unwrap();
    assert!(est <= 1e-8);
    let n = ls.contour.half_count();
    let finer = solve_laplace(&p, &init, &forcing, win, &SolveOptions { nodes: Some(2 * n), ..SolveOptions::new(1e-8) }, &Sequential).unwrap();
    let times: Vec<f64> = (0..25).map(|k| 1.0 + 9.0 * k as f64 / 24.0).collect();
    let a = evaluate(&ls, &times).unwrap();
    let b = evaluate(&finer, &times).unwrap();
    for (u, v) in a.y.iter().zip(&b.y) {
        let mut d = v.clone();
        d.axpy(C64::new(-1.0, 0.0), u);
        assert!(d.l2_norm() <= est, "{:e} > {est:e}", d.l2_norm());
    }
}

mod reuse {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn shared() -> &'static LaplaceSolve {
        static LS: OnceLock<LaplaceSolve> = OnceLock::new();
        LS.get_or_init(|| {
            let (p, init, forcing) = variable_beam();
            solve_laplace(&p, &init, &forcing, TimeWindow::new(1.0, 10.0).unwrap(), &SolveOptions { nodes: Some(60), ..SolveOptions::new(1e-6) }, &Sequential).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn evaluation_is_independent_of_the_time_batch(ts in prop::collection::vec(1.0f64..=10.0, 1..8), k in 0usize..8) {
            let ls = shared();
            let batch = evaluate(ls, &ts).unwrap();
            let k = k % ts.len();
            let one = evaluate(ls, &ts[k..=k]).unwrap();
            prop_assert_eq!(&one.y[0], &batch.y[k]);
            prop_assert_eq!(one.energy[0], batch.energy[k]);
        }
    }
}
