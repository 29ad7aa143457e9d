//! Adaptive Gauss–Kronrod (7/15) quadrature and the Legendre integrals
//! evaluated with it after the substitution t = sin θ.
//!
//! This path shares nothing with the Carlson/AGM production code and serves
//! as its cross-check.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_9,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

const MAX_DEPTH: u32 = 60;

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
    let (val, err) = kronrod(f, a, b);
    if !val.is_finite() {
        return Err(Error::NonFinite("quadrature"));
    }
    // below a few ulps of the panel value the estimate is roundoff
    let floor = 16.0 * f64::EPSILON * val.abs();
    if err <= tol.max(floor) || (b - a).abs() < 1e-15 * (a.abs() + b.abs()) {
        return Ok(val);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::ArgOutOfRange(format!(
            "quadrature did not converge on [{a}, {b}]"
        )));
    }
    let m = 0.5 * (a + b);
    Ok(adapt(f, a, m, 0.5 * tol, depth + 1)? + adapt(f, m, b, 0.5 * tol, depth + 1)?)
}

/// ∫ₐᵇ f with absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    adapt(&f, a, b, tol, 0)
}

const TOL: f64 = 1e-15;

fn delta(theta: f64, k: f64) -> f64 {
    let s = k * theta.sin();
    ((1.0 - s) * (1.0 + s)).sqrt()
}

/// F(x, k) = ∫₀^{asin x} dθ / √(1 − k² sin²θ).
pub fn legendre_f(x: f64, k: f64) -> Result<f64> {
    integrate(|t| 1.0 / delta(t, k), 0.0, x.asin(), TOL)
}

/// E(x, k) = ∫₀^{asin x} √(1 − k² sin²θ) dθ.
pub fn legendre_e(x: f64, k: f64) -> Result<f64> {
    integrate(|t| delta(t, k), 0.0, x.asin(), TOL)
}

/// Π(x, ν, k) = ∫₀^{asin x} dθ / ((1 + ν sin²θ) √(1 − k² sin²θ)).
pub fn legendre_pi(x: f64, nu: f64, k: f64) -> Result<f64> {
    integrate(
        |t| 1.0 / ((1.0 + nu * t.sin().powi(2)) * delta(t, k)),
        0.0,
        x.asin(),
        TOL,
    )
}

/// Π(x, ν, k) − F(x, k) with the two integrands subtracted pointwise.
pub fn legendre_pi_minus_f(x: f64, nu: f64, k: f64) -> Result<f64> {
    integrate(
        |t| {
            let s2 = t.sin().powi(2);
            -nu * s2 / ((1.0 + nu * s2) * delta(t, k))
        },
        0.0,
        x.asin(),
        TOL,
    )
}

/// K(k) = F(1, k).
pub fn complete_k(k: f64) -> Result<f64> {
    integrate(|t| 1.0 / delta(t, k), 0.0, std::f64::consts::FRAC_PI_2, TOL)
}

/// E(k) = E(1, k).
pub fn complete_e(k: f64) -> Result<f64> {
    integrate(|t| delta(t, k), 0.0, std::f64::consts::FRAC_PI_2, TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_trig() {
        let v = integrate(|x| x.powi(5), 0.0, 2.0, 1e-15).unwrap();
        assert!((v - 64.0 / 6.0).abs() < 1e-13);
        let v = integrate(f64::sin, 0.0, std::f64::consts::PI, 1e-15).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_modulus_closed_forms() {
        assert!((legendre_f(0.5, 0.0).unwrap() - 0.5f64.asin()).abs() < 1e-15);
        assert!((complete_k(0.0).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
