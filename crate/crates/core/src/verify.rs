//! The acceptance suite: ten numbered checks, each reporting pass/fail with
//! the measured quantity.

use std::f64::consts::{E, PI};
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::arc_map::{map_z, trace_boundary, RectangleMapParams};
use crate::asymptotics::{arc_series, linear_series, pi_minus_f_asym};
use crate::convergence::{arc_sweep, gamma_sweep, linear_sweep, loglog_slope};
use crate::elliptic::{
    complete_K, incomplete_E, incomplete_F, incomplete_Pi, moduli_from_nome, pi_special,
    theta_parts_via, EllipticContext, Modulus, ThetaKind, ThetaPath,
};
use crate::error::Result;
use crate::exact::{gamma_of, normalize, sc_solve, solve_capacity, solve_normalized, ArcCondenser};
use crate::oracle_fd::{fd_capacity, FdProblem};
use crate::quadrature;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub number: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {} ({:.2} s)",
            self.number,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.seconds
        )
    }
}

fn run(
    number: u32,
    title: &'static str,
    limit: Option<f64>,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionOutcome {
    let t = Instant::now();
    let outcome = body();
    let seconds = t.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(lim) = limit {
        if seconds > lim {
            passed = false;
            detail.push_str(&format!("; runtime {seconds:.2} s over {lim} s"));
        }
    }
    CriterionOutcome {
        number,
        title,
        passed,
        detail,
        seconds,
    }
}

const SLOPE_WINDOW: (f64, f64) = (1.8, 2.3);

fn in_window(s: f64) -> bool {
    s >= SLOPE_WINDOW.0 && s <= SLOPE_WINDOW.1
}

/// Arc expansion remainder order at (ρ, L) = (1, π/2).
pub fn criterion_1() -> CriterionOutcome {
    run(1, "arc expansion remainder order", Some(5.0), || {
        let (rho, l) = (1.0, PI / 2.0);
        let rows = arc_sweep(rho, l, 1e-4, 1e-2, 12)?;
        let slope = rows.last().map(|r| r.slope_running).unwrap_or(f64::NAN);
        // Same data with the O(h) term −Lh/(12ρ²) that γ/ln R contributes.
        let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
        let corrected: Vec<f64> = rows
            .iter()
            .map(|r| (r.cap_exact - r.cap_series + l * r.h / (12.0 * rho * rho)).abs())
            .collect();
        let slope_corr = loglog_slope(&hs, &corrected);
        Ok((
            in_window(slope),
            format!(
                "slope {slope:.4} (window [1.8, 2.3]); err at h=1e-4 {:.3e}; slope after adding -Lh/(12 rho^2): {slope_corr:.4}",
                rows[0].abs_err
            ),
        ))
    })
}

/// Parallel-segment expansion remainder order at L = 1.
pub fn criterion_2() -> CriterionOutcome {
    run(
        2,
        "parallel-segment expansion remainder order",
        Some(5.0),
        || {
            let rows = linear_sweep(1.0, 1e-4, 1e-2, 12)?;
            let slope = rows.last().map(|r| r.slope_running).unwrap_or(f64::NAN);
            Ok((
                in_window(slope),
                format!("slope {slope:.4} (window [1.8, 2.3])"),
            ))
        },
    )
}

/// Large-radius bridge from the arc to the parallel-segment condenser.
pub fn criterion_3() -> CriterionOutcome {
    run(3, "large-radius bridge", None, || {
        let (rho, l, h) = (1e6, 1.0, 1e-3);
        let arc = arc_series(rho, l, h)?;
        let lin = linear_series(l, h)?;
        let worst = arc
            .terms
            .iter()
            .zip(&lin.terms)
            .map(|(a, b)| ((a.value - b.value) / b.value).abs())
            .fold(0.0, f64::max);
        let exact = solve_normalized(&normalize(ArcCondenser { rho, l, h })?)?.value;
        let sc = sc_solve(l, h)?.value;
        let rel = (exact / sc - 1.0).abs();
        Ok((
            worst < 1e-5 && rel < 1e-8 && arc.terms.len() == 7,
            format!("worst term mismatch {worst:.2e} (< 1e-5); exact arc vs segments {rel:.2e} (< 1e-8)"),
        ))
    })
}

/// Round trip γ → y → γ on a 5×5 grid.
pub fn criterion_4() -> CriterionOutcome {
    run(4, "transcendental equation round trip", Some(10.0), || {
        let mut worst: f64 = 0.0;
        for i in 0..5 {
            let gamma = 0.2 + 2.8 * i as f64 / 4.0;
            for j in 0..5 {
                let r = 1.01 + 0.99 * j as f64 / 4.0;
                let y = solve_capacity(gamma, r)?.value;
                worst = worst.max((gamma_of(r, y)? - gamma).abs());
            }
        }
        Ok((
            worst < 1e-10,
            format!("max |gamma(y) - gamma| = {worst:.2e} (< 1e-10)"),
        ))
    })
}

/// Boundary geometry of the rectangle map at R = 1.5, y = 2.
pub fn criterion_5() -> CriterionOutcome {
    run(5, "rectangle map geometry", None, || {
        let (r, y) = (1.5, 2.0);
        let ctx = EllipticContext::from_capacity(y, r)?;
        let p = RectangleMapParams::from_context(&ctx)?;
        let tr = trace_boundary(&p, 1000)?;
        let outer = tr
            .outer_arc
            .iter()
            .map(|s| (s.z.norm() - r).abs())
            .fold(0.0, f64::max);
        let inner = tr
            .inner_arc
            .iter()
            .map(|s| (s.z.norm() * r - 1.0).abs())
            .fold(0.0, f64::max);
        let shift = tr
            .outer_arc
            .iter()
            .zip(&tr.inner_arc)
            .map(|(b, t)| (t.z * r * r - b.z).norm() / b.z.norm())
            .fold(0.0, f64::max);
        let dg = (tr.gamma_est - gamma_of(r, y)?).abs();
        Ok((
            outer < 1e-11 && inner < 1e-11 && shift < 1e-11 && dg < 1e-9,
            format!("||z|-R| {outer:.1e}, ||zR|-1| {inner:.1e}, top/bottom {shift:.1e} (< 1e-11); gamma {dg:.1e} (< 1e-9)"),
        ))
    })
}

/// Π(u, iα) against the argument of the map at R = 1.3, y = 4.
pub fn criterion_6() -> CriterionOutcome {
    run(6, "third-kind integral against the map", None, || {
        let ctx = EllipticContext::from_capacity(4.0, 1.3)?;
        let p = RectangleMapParams::from_context(&ctx)?;
        let jac = ctx.jacobi_imag()?;
        let mut worst: f64 = 0.0;
        for f in [0.2, 0.5, 0.8] {
            let u = f * ctx.kval;
            let z = map_z(Complex64::new(u, 0.0), &p)?;
            let rhs = 0.5 * (z / p.r).ln().im + u * jac.z_over_i;
            worst = worst.max((pi_special(u, &ctx)? - rhs).abs());
        }
        Ok((worst < 1e-10, format!("max mismatch {worst:.2e} (< 1e-10)")))
    })
}

/// Special-function identities and quadrature agreement.
pub fn criterion_7() -> CriterionOutcome {
    run(7, "special functions", None, || {
        let mut notes = Vec::new();
        let mut ok = true;

        let mut legendre: f64 = 0.0;
        for k in [0.1, 0.5, 0.8, 0.99, 0.999_999] {
            let m = Modulus::from_k(k)?;
            let (kk, ee) = (m.complete_k()?, m.complete_e()?);
            let (kp, ep) = (m.complement().complete_k()?, m.complement().complete_e()?);
            legendre = legendre.max((ee * kp + ep * kk - kk * kp - PI / 2.0).abs());
        }
        ok &= legendre < 1e-12;
        notes.push(format!("Legendre {legendre:.1e}"));

        let mut quartic: f64 = 0.0;
        for q in [0.01f64, 0.05, 0.1, 0.3, 0.6] {
            let ln_q = q.ln();
            let zero = Complex64::new(0.0, 0.0);
            let t = |kind| crate::elliptic::theta_parts(kind, zero, ln_q).map(|p| p.value().re);
            let (t2, t3, t4) = (
                t(ThetaKind::Two)?,
                t(ThetaKind::Three)?,
                t(ThetaKind::Four)?,
            );
            quartic = quartic.max((t2.powi(4) + t4.powi(4) - t3.powi(4)).abs() / t3.powi(4));
        }
        ok &= quartic < 1e-12;
        notes.push(format!("quartic {quartic:.1e}"));

        let mut paths: f64 = 0.0;
        for q in [0.3f64, 0.45, 0.6, 0.75, 0.9, 0.95] {
            for w in [
                Complex64::new(0.37, 0.0),
                Complex64::new(1.1, 0.2),
                Complex64::new(-0.4, -0.15),
            ] {
                for kind in [
                    ThetaKind::One,
                    ThetaKind::Two,
                    ThetaKind::Three,
                    ThetaKind::Four,
                ] {
                    let a = theta_parts_via(kind, w, q.ln(), ThetaPath::Direct)?.value();
                    let b = theta_parts_via(kind, w, q.ln(), ThetaPath::Transformed)?.value();
                    paths = paths.max((a - b).norm() / b.norm());
                }
            }
        }
        ok &= paths < 1e-11;
        notes.push(format!("direct/transformed {paths:.1e}"));

        let (k, _, kk, _) = moduli_from_nome(0.01)?;
        let checks = [
            ("K(q=0.01)", kk, quadrature::complete_k(k)?, 1e-12),
            (
                "K(0.8)",
                complete_K(0.8)?,
                quadrature::complete_k(0.8)?,
                1e-13,
            ),
            (
                "F(0.9,0.95)",
                incomplete_F(0.9, 0.95)?,
                quadrature::legendre_f(0.9, 0.95)?,
                1e-12,
            ),
            (
                "E(0.7,0.8)",
                incomplete_E(0.7, 0.8)?,
                quadrature::legendre_e(0.7, 0.8)?,
                1e-12,
            ),
            (
                "Pi(0.8,2.5,0.9)",
                incomplete_Pi(0.8, 2.5, 0.9)?,
                quadrature::legendre_pi(0.8, 2.5, 0.9)?,
                1e-12,
            ),
        ];
        for (name, a, b, tol) in checks {
            let d = (a - b).abs();
            ok &= d < tol;
            notes.push(format!("{name} {d:.1e}"));
        }
        Ok((ok, notes.join(", ")))
    })
}

/// Residual order of the half-angle expansion at R = 1.0001.
pub fn criterion_8() -> CriterionOutcome {
    run(8, "half-angle expansion residual order", None, || {
        let rows = gamma_sweep(1.0001, 50.0, 5000.0, 12)?;
        let xs: Vec<f64> = rows.iter().map(|r| r.x).collect();
        let res: Vec<f64> = rows.iter().map(|r| r.residual).collect();
        let slope = loglog_slope(&xs, &res);
        let zeros = res.iter().filter(|&&v| v == 0.0).count();
        Ok((
            (slope - 5.0).abs() <= 0.3,
            format!(
                "slope {slope:.3} (want 5 +- 0.3); residual {:.2e} at y=50, {:.2e} at y=5000; {zeros} exact zeros skipped",
                res[0],
                res[res.len() - 1]
            ),
        ))
    })
}

/// Π − F approximation error as the modulus approaches 1 at σ = 1e-3.
pub fn criterion_9() -> CriterionOutcome {
    run(9, "third-kind approximation near k = 1", None, || {
        let (sigma, nu) = (1e-3, 1.0);
        let mut gaps = Vec::new();
        let mut errs = Vec::new();
        for j in 0..6 {
            let kc = 1e-8 / 2f64.powi(j);
            let k = 1.0 - kc;
            let exact = quadrature::legendre_pi_minus_f(1.0 - sigma, nu, k)?;
            gaps.push(kc);
            errs.push((pi_minus_f_asym(sigma, nu, k)? - exact).abs());
        }
        let slope = loglog_slope(&gaps, &errs);
        let c = errs
            .iter()
            .zip(&gaps)
            .map(|(e, g)| e * sigma / g)
            .fold(0.0, f64::max);
        Ok((
            (slope - 1.0).abs() <= 0.2,
            format!("slope {slope:.3} (want 1 +- 0.2); max err*sigma/(1-k) = {c:.3}"),
        ))
    })
}

/// Finite-difference oracle against the exact solver and the annulus.
pub fn criterion_10() -> CriterionOutcome {
    run(10, "finite-difference oracle", Some(120.0), || {
        let t = Instant::now();
        let fd = fd_capacity(&FdProblem::new(PI / 2.0, 1.5, 512, 512).with_r_out(75.0))?.value;
        let t_arc = t.elapsed().as_secs_f64();
        let exact = solve_capacity(PI / 2.0, 1.5)?.value;
        let rel_arc = (fd / exact - 1.0).abs();
        let t = Instant::now();
        let ring = fd_capacity(&FdProblem::new(PI, E, 512, 512))?.value;
        let t_ring = t.elapsed().as_secs_f64();
        let rel_ring = (ring / PI - 1.0).abs();
        Ok((
            rel_arc < 0.02 && rel_ring < 0.01 && t_arc < 60.0 && t_ring < 60.0,
            format!(
                "arc {fd:.6} vs {exact:.6} ({:.3}% < 2%, {t_arc:.1} s); annulus {ring:.6} vs pi ({:.1e}% < 1%, {t_ring:.1} s)",
                100.0 * rel_arc,
                100.0 * rel_ring
            ),
        ))
    })
}

/// All ten criteria in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}
