use std::f64::consts::{FRAC_PI_2, PI};

use arccap::elliptic::{
    complete_E, complete_K, incomplete_E, incomplete_F, incomplete_Pi, jacobi_imag,
    moduli_from_nome, pi_special, theta, theta_dlog4, theta_parts, theta_parts_via,
    EllipticContext, Modulus, Nome, ThetaKind, ThetaPath,
};
use arccap::quadrature;
use arccap::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn theta_trivial_values() {
    assert_eq!(theta(1, c(0.0, 0.0), 0.3).unwrap().norm(), 0.0);
    assert!((theta(3, c(0.0, 0.0), 0.0).unwrap() - 1.0).norm() < 1e-15);
    let q: f64 = 0.1;
    let partial = 1.0 - 2.0 * q + 2.0 * q.powi(4) - 2.0 * q.powi(9) + 2.0 * q.powi(16);
    assert!((theta(4, c(0.0, 0.0), q).unwrap().re - partial).abs() < 1e-15);
    assert!((theta(4, c(0.0, 0.0), q).unwrap().re - 0.800199998).abs() < 1e-9);
}

#[test]
fn theta_rejects_bad_nome() {
    assert!(matches!(
        theta(4, c(0.1, 0.0), 1.0),
        Err(Error::NomeOutOfRange(_))
    ));
    assert!(matches!(
        theta(4, c(0.1, 0.0), -0.1),
        Err(Error::NomeOutOfRange(_))
    ));
    assert!(theta(5, c(0.1, 0.0), 0.1).is_err());
}

#[test]
fn dlog4_even_and_finite_difference() {
    assert!(theta_dlog4(c(0.0, 0.0), 0.2).unwrap().norm() < 1e-15);
    let w = c(0.3, 0.1);
    let s = theta_dlog4(w, 0.15).unwrap() + theta_dlog4(-w, 0.15).unwrap();
    assert!(s.norm() < 1e-14);

    let h = 1e-6;
    let lp = theta(4, c(0.5 + h, 0.0), 0.1).unwrap().re.ln();
    let lm = theta(4, c(0.5 - h, 0.0), 0.1).unwrap().re.ln();
    let fd = (lp - lm) / (2.0 * h);
    assert!((theta_dlog4(c(0.5, 0.0), 0.1).unwrap().re - fd).abs() < 1e-8);
}

#[test]
fn dlog4_pole() {
    // ϑ₄ vanishes at πτ/2
    let q: f64 = 0.2;
    let w = c(0.0, -q.ln() / 2.0);
    match theta_dlog4(w, q) {
        Err(e) => assert!(matches!(e, Error::PoleAtZero)),
        Ok(d) => assert!(d.norm() > 1e10),
    }
}

#[test]
fn moduli_examples() {
    let (k, kp, kk, _) = moduli_from_nome(1e-9).unwrap();
    assert!(k < 1e-3 && (kk - FRAC_PI_2).abs() < 1e-8 && (kp - 1.0).abs() < 1e-8);
    let (k, kp, _, _) = moduli_from_nome(0.05).unwrap();
    assert!((k * k + kp * kp - 1.0).abs() < 1e-14);
    let (k, _, kk, kkp) = moduli_from_nome(0.01).unwrap();
    assert!((kk - quadrature::complete_k(k).unwrap()).abs() < 1e-12);
    assert!((kkp / kk - 0.01f64.ln().abs() / PI).abs() < 1e-13);
    assert!(moduli_from_nome(1.0).is_err());
}

#[test]
fn complete_k_examples() {
    assert!((complete_K(0.0).unwrap() - FRAC_PI_2).abs() < 1e-16);
    assert!(matches!(complete_K(1.0), Err(Error::ModulusOutOfRange(_))));
    assert!(matches!(complete_K(-0.1), Err(Error::ModulusOutOfRange(_))));
    assert!((complete_K(0.8).unwrap() - quadrature::complete_k(0.8).unwrap()).abs() < 1e-13);
    assert!((complete_E(0.8).unwrap() - quadrature::complete_e(0.8).unwrap()).abs() < 1e-13);
}

#[test]
fn incomplete_examples() {
    assert!((incomplete_F(0.5, 0.0).unwrap() - 0.5f64.asin()).abs() < 1e-16);
    assert!((incomplete_F(1.0, 0.6).unwrap() - complete_K(0.6).unwrap()).abs() < 1e-13);
    assert!(
        (incomplete_F(0.9, 0.95).unwrap() - quadrature::legendre_f(0.9, 0.95).unwrap()).abs()
            < 1e-12
    );

    assert!((incomplete_E(0.5, 0.0).unwrap() - 0.5f64.asin()).abs() < 1e-16);
    assert!((incomplete_E(1.0, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-16);
    assert!(
        (incomplete_E(0.7, 0.8).unwrap() - quadrature::legendre_e(0.7, 0.8).unwrap()).abs() < 1e-12
    );

    assert!(
        (incomplete_Pi(0.6, 0.0, 0.4).unwrap() - incomplete_F(0.6, 0.4).unwrap()).abs() < 1e-15
    );
    assert_eq!(incomplete_Pi(0.0, 1.3, 0.4).unwrap(), 0.0);
    assert!(
        (incomplete_Pi(0.8, 2.5, 0.9).unwrap() - quadrature::legendre_pi(0.8, 2.5, 0.9).unwrap())
            .abs()
            < 1e-12
    );
}

#[test]
fn incomplete_errors() {
    assert!(incomplete_F(1.2, 0.5).is_err());
    assert!(incomplete_F(0.5, 1.0).is_err());
    assert!(incomplete_E(-0.1, 0.5).is_err());
    assert!(matches!(
        incomplete_Pi(0.9, -2.0, 0.5),
        Err(Error::CharacteristicPole(_))
    ));
}

#[test]
fn jacobi_imag_small_argument() {
    let v = jacobi_imag(1e-12, 0.6).unwrap();
    assert!(v.sn_over_i.abs() < 1e-11 && (v.cn - 1.0).abs() < 1e-15 && (v.dn - 1.0).abs() < 1e-15);
    assert!(v.z_over_i.abs() < 1e-11);
}

#[test]
fn jacobi_imag_identities() {
    let v = jacobi_imag(0.5, 0.9).unwrap();
    assert!((v.cn * v.cn - v.sn_over_i * v.sn_over_i - 1.0).abs() < 1e-12);
    assert!((v.dn * v.dn - 0.81 * v.sn_over_i * v.sn_over_i - 1.0).abs() < 1e-12);
    assert!((v.nu - 0.81 * v.sn_over_i * v.sn_over_i).abs() < 1e-15);
    let kp = Modulus::from_k(0.9)
        .unwrap()
        .complement()
        .complete_k()
        .unwrap();
    assert!(matches!(
        jacobi_imag(kp, 0.9),
        Err(Error::ImagArgTooLarge { .. })
    ));
}

/// Theta-quotient evaluation at imaginary argument: directly in the nome q
/// with complex theta values, and in the transformed nome q₁ at real η.
#[test]
fn jacobi_imag_against_theta_quotients() {
    let (alpha, k) = (0.4, 0.7);
    let m = Modulus::from_k(k).unwrap();
    let kk = m.complete_k().unwrap();
    let kkp = m.complement().complete_k().unwrap();
    let ln_q = -PI * kkp / kk;
    let v = jacobi_imag(alpha, k).unwrap();

    let w = c(0.0, alpha * PI / (2.0 * kk));
    let th = |kind, w| theta_parts(kind, w, ln_q).unwrap().value();
    let zero = c(0.0, 0.0);
    let sqrt_k = th(ThetaKind::Two, zero) / th(ThetaKind::Three, zero);
    let sqrt_kp = th(ThetaKind::Four, zero) / th(ThetaKind::Three, zero);
    let t4 = th(ThetaKind::Four, w);
    let sn = th(ThetaKind::One, w) / t4 / sqrt_k;
    let cn = sqrt_kp / sqrt_k * th(ThetaKind::Two, w) / t4;
    let dn = sqrt_kp * th(ThetaKind::Three, w) / t4;
    assert!((sn - c(0.0, v.sn_over_i)).norm() < 1e-11 * v.sn_over_i.abs());
    assert!((cn - v.cn).norm() < 1e-11 * v.cn);
    assert!((dn - v.dn).norm() < 1e-11 * v.dn);

    // q₁ forms
    let ln_q1 = PI * PI / ln_q;
    let eta = PI * alpha / (2.0 * kkp);
    let t1 = |kind| theta_parts(kind, c(eta, 0.0), ln_q1).unwrap();
    let (p1, p2, p3, p4) = (
        t1(ThetaKind::One),
        t1(ThetaKind::Two),
        t1(ThetaKind::Three),
        t1(ThetaKind::Four),
    );
    let (sk, skp) = (k.sqrt(), m.kc.sqrt());
    assert!((p1.ratio(&p2).re / sk - v.sn_over_i).abs() < 1e-11 * v.sn_over_i);
    assert!((skp / sk * p4.ratio(&p2).re - v.cn).abs() < 1e-11 * v.cn);
    assert!((skp * p3.ratio(&p2).re - v.dn).abs() < 1e-11 * v.dn);
    let z = ln_q1 / (2.0 * kk) * (alpha / kk + p2.dlog.re);
    assert!((z - v.z_over_i).abs() < 1e-11 * v.z_over_i.abs().max(1.0));
}

#[test]
fn legendre_relation_in_contexts() {
    for &(y, r) in &[(0.5, 1.5), (3.0, 1.2), (40.0, 1.01), (900.0, 1.001)] {
        let ctx = EllipticContext::from_capacity(y, r).unwrap();
        let (e, ep) = ctx.complete_e_pair().unwrap();
        let lhs = e * ctx.kprimeval + ep * ctx.kval - ctx.kval * ctx.kprimeval;
        assert!((lhs - FRAC_PI_2).abs() < 1e-12, "y = {y}: {lhs}");
    }
}

#[test]
fn context_invariants() {
    let ctx = EllipticContext::from_capacity(2.5, 1.4).unwrap();
    assert!((ctx.k * ctx.k + ctx.kprime * ctx.kprime - 1.0).abs() < 1e-14);
    assert!((ctx.omega1 - 2.0 * ctx.kval).abs() < 1e-13 * ctx.omega1);
    assert!((ctx.omega2 - 2.0 * ctx.kprimeval).abs() < 1e-13 * ctx.omega2);
    assert!((ctx.eta - 1.4f64.ln() * 2.5 / 2.0).abs() < 1e-15);
    assert!((ctx.x - 1.0 / (PI * 2.5)).abs() < 1e-17);
    assert!((ctx.kval / ctx.kprimeval - 2.5).abs() < 1e-13);
    let n = Nome::from_capacity(2.5).unwrap();
    assert!((n.log_q * n.log_q1 / (PI * PI) - 1.0).abs() < 1e-14);
}

/// Π(u, iα)/i by quadrature of its defining integral, t = sin θ.
fn special_pi_quadrature(u: f64, ctx: &EllipticContext) -> f64 {
    let jac = ctx.jacobi_imag().unwrap();
    let k2 = ctx.k * ctx.k;
    let x = arccap::elliptic::sncndn(u, ctx.modulus()).sn;
    let integral = quadrature::integrate(
        |th| {
            let s2 = th.sin().powi(2);
            s2 / ((1.0 + jac.nu * s2) * (1.0 - k2 * s2).sqrt())
        },
        0.0,
        x.asin(),
        1e-15,
    )
    .unwrap();
    k2 * jac.sn_over_i * jac.cn * jac.dn * integral
}

#[test]
fn pi_special_examples() {
    let ctx = EllipticContext::from_capacity(4.0, 1.3).unwrap();
    assert_eq!(pi_special(0.0, &ctx).unwrap(), 0.0);
    let u = 0.5 * ctx.kval;
    assert!((pi_special(u, &ctx).unwrap() - special_pi_quadrature(u, &ctx)).abs() < 1e-10);
    assert!(pi_special(1.5 * ctx.kval, &ctx).is_err());
}

#[test]
fn quartic_identity() {
    for q in [0.01f64, 0.05, 0.1, 0.3, 0.6] {
        let t = |j| theta(j, c(0.0, 0.0), q).unwrap().re;
        let (t2, t3, t4) = (t(2), t(3), t(4));
        assert!((t2.powi(4) + t4.powi(4) - t3.powi(4)).abs() < 1e-12 * t3.powi(4));
    }
}

#[test]
fn theta_zero_of_theta4() {
    let q: f64 = 0.2;
    let half = -q.ln() / 2.0;
    let t3 = theta(3, c(0.0, 0.0), q).unwrap().norm();
    for (m, n) in [(0.0, 0.0), (1.0, 0.0), (-1.0, 1.0), (2.0, -1.0)] {
        let w = c(PI * m, half - q.ln() * n);
        assert!(theta(4, w, q).unwrap().norm() < 1e-10 * t3);
    }
}

#[test]
fn nome_transform_consistency() {
    for q in [0.3f64, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.94] {
        for w in [c(0.2, 0.0), c(0.9, 0.3), c(-1.2, -0.1)] {
            for kind in [
                ThetaKind::One,
                ThetaKind::Two,
                ThetaKind::Three,
                ThetaKind::Four,
            ] {
                let a = theta_parts_via(kind, w, q.ln(), ThetaPath::Direct)
                    .unwrap()
                    .value();
                let b = theta_parts_via(kind, w, q.ln(), ThetaPath::Transformed)
                    .unwrap()
                    .value();
                assert!(rel(a, b) < 1e-11, "q={q} w={w} {kind:?}: {}", rel(a, b));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn theta4_quasi_periodicity(re in -3.0f64..3.0, im in -0.5f64..0.5, q in 0.01f64..0.6) {
        let w = c(re, im);
        let t = theta(4, w, q).unwrap();
        let shifted = theta(4, w + PI, q).unwrap();
        prop_assert!(rel(shifted, t) < 1e-11);
        let pitau = c(0.0, -q.ln());
        let lhs = theta(4, w + pitau, q).unwrap();
        let rhs = -t * (c(0.0, -2.0) * w).exp() / q;
        prop_assert!(rel(lhs, rhs) < 1e-11);
    }

    #[test]
    fn half_period_shifts(re in -2.0f64..2.0, im in -0.4f64..0.4, q in 0.01f64..0.6) {
        let w = c(re, im);
        let i = c(0.0, 1.0);
        let half_pitau = c(0.0, -q.ln() / 2.0);
        // ϑ₁(w + πτ/2) = i q^{-1/4} e^{-iw} ϑ₄(w), ϑ₄(w + πτ/2) = i q^{-1/4} e^{-iw} ϑ₁(w)
        let f = i * q.powf(-0.25) * (-i * w).exp();
        prop_assert!(rel(theta(1, w + half_pitau, q).unwrap(), f * theta(4, w, q).unwrap()) < 1e-11);
        prop_assert!(rel(theta(4, w + half_pitau, q).unwrap(), f * theta(1, w, q).unwrap()) < 1e-11);
        // ϑ₁(w + π/2) = ϑ₂(w), ϑ₄(w + π/2) = ϑ₃(w)
        prop_assert!(rel(theta(1, w + PI / 2.0, q).unwrap(), theta(2, w, q).unwrap()) < 1e-11);
        prop_assert!(rel(theta(4, w + PI / 2.0, q).unwrap(), theta(3, w, q).unwrap()) < 1e-11);
    }

    #[test]
    fn parity(re in -2.0f64..2.0, im in -0.4f64..0.4, q in 0.01f64..0.9) {
        let w = c(re, im);
        let a = theta(1, w, q).unwrap();
        prop_assert!((a + theta(1, -w, q).unwrap()).norm() <= 1e-14 * a.norm().max(1e-300) + 1e-300);
        for j in [2, 3, 4] {
            let a = theta(j, w, q).unwrap();
            prop_assert!((a - theta(j, -w, q).unwrap()).norm() <= 1e-14 * a.norm());
        }
    }

    #[test]
    fn direct_and_transformed_nome_agree(re in -1.5f64..1.5, im in -0.3f64..0.3, q in 0.3f64..0.95, j in 1usize..=4) {
        let kind = ThetaKind::from_index(j).unwrap();
        let w = c(re, im);
        let a = theta_parts_via(kind, w, q.ln(), ThetaPath::Direct).unwrap();
        let b = theta_parts_via(kind, w, q.ln(), ThetaPath::Transformed).unwrap();
        prop_assert!(rel(a.value(), b.value()) < 1e-11);
        prop_assert!((a.dlog - b.dlog).norm() < 1e-10 * b.dlog.norm().max(1.0));
    }

    #[test]
    fn incomplete_f_against_quadrature(x in 0.0f64..0.999, k in 0.0f64..0.99) {
        let a = incomplete_F(x, k).unwrap();
        prop_assert!((a - quadrature::legendre_f(x, k).unwrap()).abs() < 1e-12);
        let e = incomplete_E(x, k).unwrap();
        prop_assert!((e - quadrature::legendre_e(x, k).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn legendre_relation(k in 0.001f64..0.999_999) {
        let m = Modulus::from_k(k).unwrap();
        let (kk, ee) = (m.complete_k().unwrap(), m.complete_e().unwrap());
        let (kp, ep) = (m.complement().complete_k().unwrap(), m.complement().complete_e().unwrap());
        prop_assert!((ee * kp + ep * kk - kk * kp - FRAC_PI_2).abs() < 1e-12);
    }
}
