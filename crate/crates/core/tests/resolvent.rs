use std::f64::consts::{FRAC_PI_2, PI};

use fraclap_core::pencil::*;
use fraclap_core::resolvent::*;
use fraclap_core::speclin::{solve_almost_banded, ChebSeries};
use fraclap_core::{Error, C64};

fn bp(m: f64, nu: f64) -> BoundParams {
    BoundParams::new(m, nu).unwrap()
}

#[test]
fn unit_order_curve_is_the_parabola() {
    let b = bp(6.25, 1.0);
    let r = r_star(&b, 0.75 * PI, 0.0).unwrap();
    assert!((r - 35.355_339_059_327_38).abs() < 1e-10);
    let z = C64::from_polar(r, 0.75 * PI);
    assert!((z.im * z.im - 25.0 * (-z.re)).abs() < 1e-10 * r * r);
    for k in 0..=1000 {
        let theta = FRAC_PI_2 + 0.01 + (PI - 0.02 - FRAC_PI_2) * k as f64 / 1000.0;
        // Im z = 5 sqrt(-Re z) in polar form.
        let parabola = 25.0 * -theta.cos() / (theta.sin() * theta.sin());
        let r = r_star(&b, theta, 0.0).unwrap();
        assert!((r - parabola).abs() <= 1e-10 * r, "theta = {theta}");
    }
    let (delta, sigma) = select_parabola_delta(&b, 1.0).unwrap();
    assert_eq!((delta, sigma), (0.04, 0.0));
    // Re z = -delta Im(z)^2 is the same curve.
    assert!((z.re + delta * z.im * z.im).abs() < 1e-10 * r);
}

#[test]
fn bounded_curve_closes_at_the_origin() {
    let b = bp(6.25, 1.6);
    let theta = PI / (2.0 * 0.6);
    assert!(r_star(&b, theta, 0.0).unwrap().abs() <= 1e-12);
    assert!(r_star(&b, -theta, 0.0).unwrap().abs() <= 1e-12);
}

#[test]
fn unbounded_curve_diverges_at_the_asymptote() {
    let b = bp(6.25, 0.7);
    let asym = PI / 1.3;
    let mut prev = 0.0;
    for k in 1..=12 {
        let theta = asym - 10f64.powi(-k);
        let r = r_star(&b, theta, 0.0).unwrap();
        assert!(r > prev);
        prev = r;
    }
    assert!(prev > 1e20);
    assert!(r_star(&b, asym + 1e-3, 0.0).is_err());
}

#[test]
fn curve_is_symmetric_and_monotone_in_eps() {
    for nu in [0.5, 0.64, 1.0, 1.3, 1.6] {
        let b = bp(3.0, nu);
        let tmax = if nu <= 1.0 { PI / (2.0 - nu) } else { PI };
        for k in 1..40 {
            let theta = FRAC_PI_2 + (tmax - FRAC_PI_2) * k as f64 / 40.0;
            let mut prev = 0.0;
            for eps in [0.0, 0.5, 1.0, 5.0, 10.0, 50.0] {
                let r = r_star(&b, theta, eps).unwrap();
                let m = r_star(&b, -theta, eps).unwrap();
                assert!((r - m).abs() <= 1e-14 * r.max(1.0));
                assert!(r >= prev * (1.0 - 1e-12), "nu {nu} theta {theta} eps {eps}");
                prev = r;
            }
        }
    }
}

#[test]
fn epsilon_bound_branches() {
    let b = bp(222.0, 0.64);
    assert!(epsilon_bound(&b, C64::new(3.0, 1.0)).unwrap() >= 3.0);
    assert!(matches!(epsilon_bound(&b, C64::new(-1.0, 0.0)), Err(Error::BranchCut { .. })));
    // A point on the eps = 0 curve is certified with eps = 0 to rounding.
    let theta = 2.0;
    let r = r_star(&b, theta, 0.0).unwrap();
    assert!(epsilon_bound(&b, C64::from_polar(r, theta)).unwrap() <= 1e-9 * r);
    assert_eq!(epsilon_bound(&b, C64::from_polar(0.5 * r, theta)).unwrap(), 0.0);
}

#[test]
fn epsilon_bound_grows_along_rays() {
    let b = bp(821.2 / 3.70, 0.64);
    for theta in [1.7, 1.9, 2.1, 2.25] {
        let r0 = 1.01 * r_star(&b, theta, 0.0).unwrap();
        let mut prev = 0.0;
        for k in 0..100 {
            let z = C64::from_polar(r0 * 1.1f64.powi(k), theta);
            let e = epsilon_bound(&b, z).unwrap();
            assert!(e > 0.0 && e >= prev, "theta {theta} k {k}");
            // The bisection answer sits on the boundary of the inequality.
            assert!(r_star(&b, theta, e).unwrap() <= z.norm() * (1.0 + 1e-9));
            prev = e;
        }
    }
}

#[test]
fn sector_contains_no_uncertified_curve_points() {
    for sigma in [0.05, 0.5, 3.0] {
        let b = bp(6.25, 1.6);
        let delta = select_sector_delta(&b, sigma).unwrap();
        assert!((0.0..FRAC_PI_2).contains(&delta));
        let sector = SectorRegion { delta, sigma };
        let mut closest = PI;
        for (theta, r) in region_curve(&b, 0.0, 10_000).unwrap() {
            for th in [theta, -theta] {
                let z = C64::from_polar(r, th);
                let a = (z - sigma).arg().abs();
                assert!(a >= PI - delta - 1e-6, "sigma {sigma} theta {th}");
                assert!(!sector.contains(z * (1.0 - 1e-6) + sigma * 1e-6) || a >= PI - delta - 1e-6);
                closest = closest.min(a);
            }
        }
        // The sector is tight: some curve point sits on its edge.
        assert!((closest - (PI - delta)).abs() < 1e-6);
    }
}

#[test]
fn sector_narrows_far_from_the_parabola() {
    let b = bp(6.25, 1.0);
    let near = select_sector_delta(&b, 0.1).unwrap();
    let far = select_sector_delta(&b, 1e4).unwrap();
    assert!(far < near && far < 0.05, "{near} {far}");
}

#[test]
fn sector_respects_the_unbounded_asymptote() {
    let nu = 0.7;
    let delta = select_sector_delta(&bp(6.25, nu), 0.2).unwrap();
    assert!(delta >= PI - PI / (2.0 - nu) - 1e-9);
    assert!(delta < FRAC_PI_2);
}

#[test]
fn parabola_cutoff_for_unbounded_curve() {
    let b = bp(821.2 / 3.70, 0.64);
    let (delta, sigma) = select_parabola_delta(&b, 1.0).unwrap();
    assert_eq!(sigma, 0.0);
    let target = 1e-16f64.ln();
    // Find the curve point with Re z = target independently and check it lies on the parabola.
    let re = |theta: f64| r_star(&b, theta, 0.0).unwrap() * theta.cos();
    let (mut lo, mut hi) = (FRAC_PI_2 + 1e-9, PI / 1.36 - 1e-9);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if re(m) > target {
            lo = m;
        } else {
            hi = m;
        }
    }
    let z = C64::from_polar(r_star(&b, lo, 0.0).unwrap(), lo);
    assert!((z.re - target).abs() <= 1e-12 * target.abs());
    assert!((z.re + delta * z.im * z.im).abs() <= 1e-9 * z.norm());
    let region = ParabolaRegion { delta, sigma };
    assert!(region.contains(C64::new(0.0, 1.0)) && !region.contains(z - 1.0));
    assert_eq!(select_parabola_delta(&bp(6.25, 1.3), 1.0).unwrap().0, 0.04);
}

#[test]
fn ratio_maximum_found_for_variable_coefficients() {
    let a = ChebSeries::from_fn_real(f64::cosh, 1e-16);
    let b = ChebSeries::from_fn_real(|x| (PI * x).sin() + 2.0, 1e-16);
    let bp = BoundParams::from_coefficients(&a, &b, 0.8).unwrap();
    let mut best = 0.0f64;
    for k in 0..=200_000 {
        let x = -1.0 + 2.0 * k as f64 / 200_000.0;
        best = best.max(x.cosh() / ((PI * x).sin() + 2.0));
    }
    assert!((bp.m - best).abs() < 1e-9 * best);
    assert!((bp.c - 2.0 * best.sqrt()).abs() < 1e-9);
}

#[test]
fn certified_points_respect_the_resolvent_bound() {
    let p = BeamPencil::new(
        ChebSeries::constant(821.2),
        ChebSeries::constant(3.70),
        ChebSeries::constant(1.0),
        0.64,
        BoundaryCondition::Clamped,
        BoundaryCondition::Clamped,
        Convention::Caputo,
    )
    .unwrap();
    let b = BoundParams::from_coefficients(p.a(), p.b(), p.nu()).unwrap();
    let mut points = vec![C64::new(1.0, 0.5), C64::new(5.0, 50.0), C64::new(0.2, 900.0), C64::new(40.0, 3.0)];
    for theta in [1.6, 1.65, 1.7, 1.75, 1.85, 1.9, 2.05, 2.2] {
        for f in [1.2, 3.0] {
            points.push(C64::from_polar(f * r_star(&b, theta, 0.0).unwrap(), theta));
        }
    }
    let rhs = [
        ChebSeries::from_fn_real(|x| (3.0 * x).cos() + x, 1e-16),
        ChebSeries::from_fn_real(|x| (1.0 - x * x).powi(2), 1e-16),
        ChebSeries::from_fn_real(|x| (PI * x).sin(), 1e-16),
    ];
    let sec = p.sections(420);
    assert_eq!(points.len(), 20);
    for &z in &points {
        let eps = epsilon_bound(&b, z).unwrap();
        assert!(eps > 0.0, "z = {z}");
        for f in &rhs {
            let sys = p.system_at(&sec, z, f.to_basis(4)).unwrap();
            let u = solve_almost_banded(&sys, 400).unwrap();
            assert!(p.certified_residual(&sys, z, &u) / eps <= 1e-10 * f.l2_norm(), "z = {z}");
            assert!(eps * u.l2_norm() <= f.l2_norm(), "z = {z}");
        }
    }
}
