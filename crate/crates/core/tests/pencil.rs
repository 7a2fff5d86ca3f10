use std::f64::consts::PI;

use fraclap_core::pencil::*;
use fraclap_core::speclin::{solve_almost_banded, solve_dense, ChebSeries};
use fraclap_core::{Error, C64};

fn constant_beam(nu: f64, bc: BoundaryCondition) -> BeamPencil {
    BeamPencil::new(
        ChebSeries::constant(821.2),
        ChebSeries::constant(3.70),
        ChebSeries::constant(1.0),
        nu,
        bc,
        bc,
        Convention::Caputo,
    )
    .unwrap()
}

fn mode() -> ChebSeries {
    ChebSeries::from_fn_real(|x| (PI * (x - 1.0)).sin(), 1e-16)
}

#[test]
fn simply_supported_mode_is_an_eigenfunction() {
    let p = constant_beam(0.64, BoundaryCondition::SimplySupported);
    let g = mode();
    let pi4 = PI.powi(4);
    for z in [C64::new(1.0, 2.0), C64::new(-30.0, 80.0), C64::new(0.1, -5.0)] {
        let sec = p.sections(80);
        let sys = p.system_at(&sec, z, g.to_basis(4)).unwrap();
        let u = solve_almost_banded(&sys, 48).unwrap();
        let denom = 821.2 * pi4 + 3.70 * pi4 * p.z_pow_nu(z).unwrap() + z * z;
        for &x in &[-0.6, 0.0, 0.45] {
            let want = g.eval(x) / denom;
            assert!((u.eval(x) - want).norm() < 1e-12 * want.norm().max(1e-6), "z = {z}");
        }
    }
}

#[test]
fn variable_coefficient_solve_matches_dense() {
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
    let rhs = ChebSeries::from_fn_real(|x| (PI * x).sin(), 1e-16).to_basis(4);
    let sec = p.sections(300);
    for z in [C64::new(2.0, 3.0), C64::new(-10.0, 40.0)] {
        let sys = p.system_at(&sec, z, rhs.clone()).unwrap();
        let a = solve_almost_banded(&sys, 96).unwrap();
        let d = solve_dense(&sys, 96).unwrap();
        let err = a.coeffs().iter().zip(d.coeffs()).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
        assert!(err < 1e-11 * d.max_abs_coeff().max(1e-3));
        let r = p.certified_residual(&sys, z, &a);
        assert!(r < 1e-8, "residual {r:e}");
    }
}

#[test]
fn conjugate_node_gives_conjugate_solution() {
    let p = constant_beam(0.5, BoundaryCondition::Clamped);
    let sec = p.sections(60);
    let g = ChebSeries::from_fn_real(|x| (1.0 - x * x).powi(2), 1e-16).to_basis(4);
    let z = C64::new(-3.0, 7.0);
    let u = solve_almost_banded(&p.system_at(&sec, z, g.clone()).unwrap(), 40).unwrap();
    let v = solve_almost_banded(&p.system_at(&sec, z.conj(), g).unwrap(), 40).unwrap();
    for (a, b) in u.coeffs().iter().zip(v.coeffs()) {
        assert!((a.conj() - b).norm() < 1e-15 * u.max_abs_coeff().max(1e-300) * 100.0);
    }
}

#[test]
fn boundary_conditions_hold_on_solution() {
    let p = BeamPencil::new(
        ChebSeries::constant(1.0),
        ChebSeries::constant(1.0),
        ChebSeries::constant(1.0),
        1.2,
        BoundaryCondition::Clamped,
        BoundaryCondition::SimplySupported,
        Convention::Caputo,
    )
    .unwrap();
    let sec = p.sections(60);
    let u = solve_almost_banded(&p.system_at(&sec, C64::new(1.0, 1.0), ChebSeries::constant(1.0).to_basis(4)).unwrap(), 32).unwrap();
    let d1 = u.derivative_t();
    let d2 = d1.derivative_t();
    assert!(u.eval(-1.0).norm() < 1e-14);
    assert!(d1.eval(-1.0).norm() < 1e-13);
    assert!(u.eval(1.0).norm() < 1e-14);
    assert!(d2.eval(1.0).norm() < 1e-12);
}

#[test]
fn branch_cut_and_bad_inputs_rejected() {
    let p = constant_beam(0.5, BoundaryCondition::Clamped);
    assert!(matches!(p.assemble_pencil_matrix(C64::new(-2.0, 0.0), 16), Err(Error::BranchCut { .. })));
    let bad = BeamPencil::new(
        ChebSeries::from_real(&[0.0, 1.0]),
        ChebSeries::constant(1.0),
        ChebSeries::constant(1.0),
        0.5,
        BoundaryCondition::Clamped,
        BoundaryCondition::Clamped,
        Convention::Caputo,
    );
    assert!(matches!(bad, Err(Error::NonPositiveCoefficient { name: "a", .. })));
    let bad = BeamPencil::new(
        ChebSeries::constant(1.0),
        ChebSeries::constant(1.0),
        ChebSeries::constant(1.0),
        2.0,
        BoundaryCondition::Clamped,
        BoundaryCondition::Clamped,
        Convention::Caputo,
    );
    assert!(matches!(bad, Err(Error::InvalidOrder(_))));
}

#[test]
fn riemann_liouville_drops_memory_terms() {
    let y0 = ChebSeries::from_fn_real(|x| (1.0 - x * x).powi(2), 1e-16);
    let init = InitialData { y0: y0.clone(), y1: ChebSeries::zero(0) };
    let z = C64::new(1.0, 2.0);
    let mk = |conv, nu| {
        BeamPencil::new(
            ChebSeries::constant(1.0),
            ChebSeries::constant(2.0),
            ChebSeries::constant(1.0),
            nu,
            BoundaryCondition::Clamped,
            BoundaryCondition::Clamped,
            conv,
        )
        .unwrap()
    };
    let f = Forcing::none();
    let k = |p: &BeamPencil| {
        let t = p.rhs_terms(&init, &f).unwrap();
        p.assemble_rhs(&t, &f, z).unwrap()
    };
    let caputo = mk(Convention::Caputo, 0.5);
    let rl = mk(Convention::RiemannLiouville, 0.5);
    let diff = k(&caputo);
    let mut d = diff.clone();
    d.axpy(C64::new(-1.0, 0.0), &k(&rl));
    // (b y0'')'' = 2 * 24 for y0 = (1 - x^2)^2.
    let want = caputo.z_pow_nu(z).unwrap() / z * 48.0;
    assert!((d.eval(0.3) - want).norm() < 1e-12, "{} vs {}", d.eval(0.3), want);
    // At nu = 1 both conventions coincide.
    let mut d1 = k(&mk(Convention::Caputo, 1.0));
    d1.axpy(C64::new(-1.0, 0.0), &k(&mk(Convention::RiemannLiouville, 1.0)));
    assert!(d1.max_abs_coeff() < 1e-14);
}

#[test]
fn nondimensionalization_reproduces_reference_beam() {
    let p = PhysicalBeam { rho_a: 0.818, e0: 5.04e7, e1: 2.27e5, inertia: 8.33e-6, length: 1.0, width_fraction: 0.1, frequency: 1.0, nu: 0.5 };
    let s = nondimensionalize(&p).unwrap();
    assert!((s.rho - 1.0).abs() < 1e-12);
    assert!((s.e0_i - 821.2).abs() < 0.05, "{}", s.e0_i);
    assert!((s.e1_i - 3.70).abs() < 0.005, "{}", s.e1_i);
    let doubled = nondimensionalize(&PhysicalBeam { e0: 2.0 * p.e0, ..p }).unwrap();
    assert!((doubled.e0_i - 2.0 * s.e0_i).abs() < 1e-9);
    // Unit scales leave the numbers unchanged.
    let unit = PhysicalBeam { rho_a: 1.0, e0: 3.0, e1: 0.25, inertia: 2.0, length: 2.0, width_fraction: 0.5, frequency: 1.0, nu: 0.7 };
    let u = nondimensionalize(&unit).unwrap();
    assert!((u.rho - 1.0).abs() < 1e-15 && (u.e0_i - 6.0).abs() < 1e-14 && (u.e1_i - 0.5).abs() < 1e-14);
}

#[test]
fn even_coefficients_decouple_parity() {
    let p = BeamPencil::new(
        ChebSeries::from_fn_real(f64::cosh, 1e-16),
        ChebSeries::from_fn_real(|x| 2.0 + x * x, 1e-16),
        ChebSeries::from_fn_real(|x| 1.0 + 0.5 * x * x * x * x, 1e-16),
        0.7,
        BoundaryCondition::Clamped,
        BoundaryCondition::Clamped,
        Convention::Caputo,
    )
    .unwrap();
    let sys = p.assemble_pencil_matrix(C64::new(-2.0, 9.0), 64).unwrap();
    let m = sys.op.section(64);
    let scale = m.max_abs();
    for i in 0..64 {
        for j in 0..64 {
            if (i + j) % 2 == 1 {
                assert!(m.get(i, j).norm() <= 1e-12 * scale, "({i}, {j})");
            }
        }
    }
    // Left and right rows are mirror images under x -> -x.
    let rows: Vec<Vec<C64>> = sys.boundary.iter().map(|r| r.row(64)).collect();
    for d in 0..2 {
        for k in 0..64 {
            let sign = if (k + d) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((rows[d][k] - sign * rows[2 + d][k]).norm() <= 1e-12 * rows[d][k].norm().max(1.0));
        }
    }
}

#[test]
fn conjugate_node_gives_conjugate_matrix() {
    let p = constant_beam(0.64, BoundaryCondition::Clamped);
    let z = C64::new(-4.0, 11.0);
    let a = p.assemble_pencil_matrix(z, 40).unwrap().op.section(40);
    let b = p.assemble_pencil_matrix(z.conj(), 40).unwrap().op.section(40);
    for i in 0..40 {
        for j in 0..40 {
            assert!((a.get(i, j).conj() - b.get(i, j)).norm() <= 1e-15 * a.max_abs());
        }
    }
}

#[test]
fn conventions_agree_for_zero_initial_data() {
    let init = InitialData::zero();
    let f = Forcing { amplitude: 2.0, profile: ChebSeries::from_fn_real(|x| (PI * x).sin(), 1e-16), time: TimeProfile::Cos { omega: 3.0 } };
    let z = C64::new(0.5, 4.0);
    let rhs = |conv| {
        let p = BeamPencil::new(ChebSeries::constant(1.0), ChebSeries::constant(2.0), ChebSeries::constant(1.0), 0.4, BoundaryCondition::Clamped, BoundaryCondition::Clamped, conv).unwrap();
        p.assemble_rhs(&p.rhs_terms(&init, &f).unwrap(), &f, z).unwrap()
    };
    assert_eq!(rhs(Convention::Caputo), rhs(Convention::RiemannLiouville));
}
