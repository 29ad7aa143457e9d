use std::f64::consts::{E, PI};

use arccap::exact::{solve_capacity, Method};
use arccap::oracle_fd::{fd_capacity, fd_solve, FdProblem};
use arccap::Error;

fn cap(gamma: f64, r: f64, n: usize) -> f64 {
    fd_capacity(&FdProblem::new(gamma, r, n, n)).unwrap().value
}

#[test]
fn annulus_closed_form() {
    let res = fd_capacity(&FdProblem::new(PI, E, 512, 512)).unwrap();
    assert_eq!(res.method, Method::Oracle);
    assert!((res.value - PI).abs() < 0.01 * PI, "{}", res.value);
}

#[test]
fn arc_against_exact() {
    let exact = solve_capacity(PI / 2.0, 1.5).unwrap().value;
    let fd = cap(PI / 2.0, 1.5, 256);
    assert!((fd - exact).abs() < 0.02 * exact, "fd {fd}, exact {exact}");
}

#[test]
fn smaller_gap_larger_capacity() {
    assert!(cap(PI / 2.0, 1.2, 128) > cap(PI / 2.0, 1.5, 128));
}

#[test]
fn grid_convergence_factor() {
    let c: Vec<f64> = [128, 256, 512]
        .iter()
        .map(|&n| cap(PI / 2.0, 1.5, n))
        .collect();
    let factor = (c[1] - c[0]).abs() / (c[2] - c[1]).abs();
    assert!((1.3..=4.5).contains(&factor), "caps {c:?}, factor {factor}");
}

#[test]
fn truncation_insensitivity() {
    let base = FdProblem::new(PI / 2.0, 1.5, 512, 512);
    let a = fd_capacity(&base).unwrap().value;
    let b = fd_capacity(&base.clone().with_r_out(2.0 * base.r_out))
        .unwrap()
        .value;
    assert!((a - b).abs() < 2e-3 * a, "{a} vs {b}");
}

#[test]
fn maximum_principle_and_energy() {
    let sol = fd_solve(&FdProblem::new(1.0, 1.3, 128, 128)).unwrap();
    assert!(sol.energy > 0.0);
    assert!(sol.field.omega.iter().all(|&w| (0.0..=1.0).contains(&w)));
    assert!(sol.grid_residual >= 0.0);
}

#[test]
fn field_csv_header() {
    let sol = fd_solve(&FdProblem::new(1.0, 1.3, 64, 64)).unwrap();
    let csv = sol.field.to_csv();
    assert_eq!(csv.lines().next().unwrap(), "r,theta,omega");
    assert_eq!(
        csv.lines().count(),
        1 + (sol.field.n_s + 1) * (sol.field.n_theta + 1)
    );
}

#[test]
fn invalid_problems() {
    let bad = [
        FdProblem::new(0.0, 1.5, 128, 128),
        FdProblem::new(4.0, 1.5, 128, 128),
        FdProblem::new(1.0, 1.0, 128, 128),
        FdProblem::new(1.0, 1.5, 32, 128),
        FdProblem::new(1.0, 1.5, 128, 128).with_r_out(5.0),
    ];
    for p in bad {
        assert!(
            matches!(fd_capacity(&p), Err(Error::GeometryInvalid(_))),
            "{p:?}"
        );
    }
}
