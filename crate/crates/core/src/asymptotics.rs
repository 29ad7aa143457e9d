//! Closed-form asymptotic expansions with per-term breakdowns.
//!
//! Terms are evaluated exactly in the displayed form (no regrouping), so
//! that the arc series can be compared term by term with its ρ → ∞ limit.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// One labelled term of an expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub label: String,
    pub value: f64,
}

/// An expansion split into its terms, with the order of the neglected
/// remainder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesBreakdown {
    pub terms: Vec<Term>,
    pub total: f64,
    #[serde(rename = "remainder")]
    pub order_of_remainder: String,
}

impl SeriesBreakdown {
    fn new(terms: Vec<(&str, f64)>, remainder: &str) -> Self {
        let terms: Vec<Term> = terms
            .into_iter()
            .map(|(l, v)| Term {
                label: l.to_string(),
                value: v,
            })
            .collect();
        let total = terms.iter().map(|t| t.value).sum();
        Self {
            terms,
            total,
            order_of_remainder: remainder.to_string(),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.value).collect()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::GeometryInvalid(format!(
            "{name} = {v} must be positive"
        )));
    }
    Ok(())
}

/// Capacity of the circular-arc condenser with mid radius ρ, arc length L
/// and gap h, as h → 0:
///
/// ```text
/// L/h + (1/π)ln(1/h) + (1/π)(1 + ln(4πρ sin(L/2ρ)))
///   + cot(L/2ρ)/(2π²ρ)·h ln(1/h) + cot(L/2ρ)/(2π²ρ)·h[1/2 + ln(4πρ sin(L/2ρ))]
///   − h² ln²(1/h)/(8π³ρ² sin²(L/2ρ))
///   − h² ln(1/h)(2 ln(4πρ sin(L/2ρ)) − cos(L/ρ))/(8π³ρ² sin²(L/2ρ))  + O(h²)
/// ```
pub fn arc_series(rho: f64, l: f64, h: f64) -> Result<SeriesBreakdown> {
    positive("rho", rho)?;
    positive("L", l)?;
    positive("h", h)?;
    if l >= 2.0 * PI * rho {
        return Err(Error::GeometryInvalid(format!(
            "arc length {l} not below 2*pi*rho"
        )));
    }
    let ln1h = -h.ln();
    let half = l / (2.0 * rho);
    let sin_half = half.sin();
    let cot = half.cos() / sin_half;
    let lg = (4.0 * PI * rho * sin_half).ln();
    let den = 8.0 * PI.powi(3) * rho * rho * sin_half * sin_half;
    Ok(SeriesBreakdown::new(
        vec![
            ("L/h", l / h),
            ("(1/pi)ln(1/h)", ln1h / PI),
            ("(1/pi)(1+ln(4 pi rho sin(L/2rho)))", (1.0 + lg) / PI),
            (
                "cot(L/2rho)/(2 pi^2 rho) h ln(1/h)",
                cot / (2.0 * PI * PI * rho) * h * ln1h,
            ),
            (
                "cot(L/2rho)/(2 pi^2 rho) h (1/2+ln(4 pi rho sin(L/2rho)))",
                cot / (2.0 * PI * PI * rho) * h * (0.5 + lg),
            ),
            (
                "-h^2 ln^2(1/h)/(8 pi^3 rho^2 sin^2(L/2rho))",
                -h * h * ln1h * ln1h / den,
            ),
            (
                "-h^2 ln(1/h)(2ln(4 pi rho sin(L/2rho))-cos(L/rho))/(8 pi^3 rho^2 sin^2(L/2rho))",
                -h * h * ln1h * (2.0 * lg - (l / rho).cos()) / den,
            ),
        ],
        "O(h^2)",
    ))
}

/// The ρ = 1 form of `arc_series` in γ = L/2 and δ = h/2:
///
/// ```text
/// γ/δ + (1/π)ln(1/δ) + (1/π)(1 + ln(2π sin γ)) + (cot γ/π²) δ ln(1/δ)
///   + (δ cot γ/π²)(1/2 + ln(2π sin γ)) − δ² ln²(1/δ)/(2π³ sin²γ)
///   − δ² ln(1/δ)(2 ln(2π sin γ) − cos 2γ)/(2π³ sin²γ)  + O(δ²)
/// ```
pub fn arc_series_unit(gamma: f64, delta: f64) -> Result<SeriesBreakdown> {
    check_gamma(gamma)?;
    positive("delta", delta)?;
    let ln1d = -delta.ln();
    let (s, c) = gamma.sin_cos();
    let cot = c / s;
    let lg = (2.0 * PI * s).ln();
    let den = 2.0 * PI.powi(3) * s * s;
    Ok(SeriesBreakdown::new(
        vec![
            ("gamma/delta", gamma / delta),
            ("(1/pi)ln(1/delta)", ln1d / PI),
            ("(1/pi)(1+ln(2 pi sin gamma))", (1.0 + lg) / PI),
            (
                "cot(gamma)/pi^2 delta ln(1/delta)",
                cot / (PI * PI) * delta * ln1d,
            ),
            (
                "delta cot(gamma)/pi^2 (1/2+ln(2 pi sin gamma))",
                delta * cot / (PI * PI) * (0.5 + lg),
            ),
            (
                "-delta^2 ln^2(1/delta)/(2 pi^3 sin^2 gamma)",
                -delta * delta * ln1d * ln1d / den,
            ),
            (
                "-delta^2 ln(1/delta)(2ln(2 pi sin gamma)-cos(2 gamma))/(2 pi^3 sin^2 gamma)",
                -delta * delta * ln1d * (2.0 * lg - (2.0 * gamma).cos()) / den,
            ),
        ],
        "O(delta^2)",
    ))
}

/// The same capacity expanded in ε = R − 1 for the reduced condenser with
/// plate radii R and 1/R:
///
/// ```text
/// γ/ε + (1/π)ln(1/ε) + γ/2 + (1/π)(1 + ln(2π sin γ)) + (cot γ/π²) ε ln(1/ε)
///   + ε[γ/4 + 1/(2π) + (cot γ/π²)(1/2 + ln(2π sin γ))]
///   − ε² ln²(1/ε)/(2π³ sin²γ)
///   − ε² ln(1/ε)(1 + π cot γ − cot²γ + 2 ln(2π sin γ)/sin²γ)/(2π³)  + O(ε²)
/// ```
pub fn arc_series_eps(gamma: f64, eps: f64) -> Result<SeriesBreakdown> {
    check_gamma(gamma)?;
    positive("epsilon", eps)?;
    let ln1e = -eps.ln();
    let (s, c) = gamma.sin_cos();
    let cot = c / s;
    let lg = (2.0 * PI * s).ln();
    let pi3 = PI.powi(3);
    Ok(SeriesBreakdown::new(
        vec![
            ("gamma/eps", gamma / eps),
            ("(1/pi)ln(1/eps)", ln1e / PI),
            ("gamma/2", gamma / 2.0),
            ("(1/pi)(1+ln(2 pi sin gamma))", (1.0 + lg) / PI),
            (
                "cot(gamma)/pi^2 eps ln(1/eps)",
                cot / (PI * PI) * eps * ln1e,
            ),
            (
                "eps(gamma/4+1/(2pi)+cot(gamma)/pi^2(1/2+ln(2 pi sin gamma)))",
                eps * (gamma / 4.0 + 0.5 / PI + cot / (PI * PI) * (0.5 + lg)),
            ),
            (
                "-eps^2 ln^2(1/eps)/(2 pi^3 sin^2 gamma)",
                -eps * eps * ln1e * ln1e / (2.0 * pi3 * s * s),
            ),
            (
                "-eps^2 ln(1/eps)(1+pi cot-cot^2+2ln(2 pi sin gamma)/sin^2 gamma)/(2 pi^3)",
                -eps * eps * ln1e * (1.0 + PI * cot - cot * cot + 2.0 * lg / (s * s)) / (2.0 * pi3),
            ),
        ],
        "O(eps^2)",
    ))
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < PI) {
        return Err(Error::GeometryInvalid(format!(
            "half-angle {gamma} outside (0, pi)"
        )));
    }
    Ok(())
}

/// Capacity of two parallel segments of length L at distance h, h → 0:
///
/// ```text
/// L/h + (1/π)ln(1/h) + (1/π)(1 + ln(2πL)) + (h/(π²L))ln(1/h)
///   + (h/(π²L))(1/2 + ln(2πL)) − (h²/(2π³L²))ln²(1/h)
///   + (h²/(π³L²))(1/2 − ln(2πL))ln(1/h)  + O(h²)
/// ```
pub fn linear_series(l: f64, h: f64) -> Result<SeriesBreakdown> {
    positive("L", l)?;
    positive("h", h)?;
    if h >= l {
        return Err(Error::GeometryInvalid(format!(
            "gap {h} not below plate length {l}"
        )));
    }
    let ln1h = -h.ln();
    let lg = (2.0 * PI * l).ln();
    let pi2l = PI * PI * l;
    let pi3l2 = PI.powi(3) * l * l;
    Ok(SeriesBreakdown::new(
        vec![
            ("L/h", l / h),
            ("(1/pi)ln(1/h)", ln1h / PI),
            ("(1/pi)(1+ln(2 pi L))", (1.0 + lg) / PI),
            ("(h/(pi^2 L))ln(1/h)", h / pi2l * ln1h),
            ("(h/(pi^2 L))(1/2+ln(2 pi L))", h / pi2l * (0.5 + lg)),
            (
                "-(h^2/(2 pi^3 L^2))ln^2(1/h)",
                -h * h / (2.0 * pi3l2) * ln1h * ln1h,
            ),
            (
                "(h^2/(pi^3 L^2))(1/2-ln(2 pi L))ln(1/h)",
                h * h / pi3l2 * (0.5 - lg) * ln1h,
            ),
        ],
        "O(h^2)",
    ))
}

/// Leading behaviour L/h + (1/π)ln(1/h) shared by all parallel-curve
/// condensers; the remainder is O(1).
pub fn leading_order(l: f64, h: f64) -> Result<f64> {
    positive("L", l)?;
    positive("h", h)?;
    Ok(l / h - h.ln() / PI)
}

/// Auxiliary quantities of the γ expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaSeriesState {
    pub eta: f64,
    pub x: f64,
    /// z = 2ηx tan η
    pub z_aux: f64,
    /// s = 1/sin²η
    pub s_aux: f64,
    /// σ = 1 − λ ≈ (ηx tan η/sin²η)(1 − β)
    pub sigma: f64,
    pub beta: f64,
    /// Terms of γ by order: x⁰, x ln(1/x), x, x², x³, x⁴.
    pub terms: [f64; 6],
    pub gamma: f64,
}

/// γ as a function of η = y ln R/2 and x = 1/(πy), through order x⁴:
///
/// ```text
/// 2η − 2ηx ln(1/x) − 2ηx(1 + ln(sin 2η/η)) + 2η²x² cot 2η
///   + 2η³x³(3 − 2 sin²2η)/(3 sin²2η)
///   + η⁴x⁴(25 + 96 sin²η − 48 sin⁴η − 128 sin⁶η)/(12 sin³2η)
/// ```
pub fn gamma_series(eta: f64, x: f64) -> Result<f64> {
    Ok(gamma_series_state(eta, x)?.gamma)
}

pub fn gamma_series_state(eta: f64, x: f64) -> Result<GammaSeriesState> {
    if !(eta > 0.0 && eta < PI / 2.0) {
        return Err(Error::ArgOutOfRange(format!(
            "eta = {eta} outside (0, pi/2)"
        )));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::ArgOutOfRange(format!("x = {x} must be positive")));
    }
    let s2e = (2.0 * eta).sin();
    if s2e == 0.0 {
        return Err(Error::ArgOutOfRange("sin(2 eta) vanishes".into()));
    }
    let sn2 = eta.sin().powi(2);
    let ex = eta * x;
    let terms = [
        2.0 * eta,
        -2.0 * ex * (-x.ln()),
        -2.0 * ex * (1.0 + (s2e / eta).ln()),
        2.0 * ex * ex * (2.0 * eta).cos() / s2e,
        2.0 * ex.powi(3) * (3.0 - 2.0 * s2e * s2e) / (3.0 * s2e * s2e),
        ex.powi(4) * (25.0 + 96.0 * sn2 - 48.0 * sn2 * sn2 - 128.0 * sn2.powi(3))
            / (12.0 * s2e.powi(3)),
    ];

    let z = 2.0 * ex * eta.tan();
    let s = 1.0 / sn2;
    let beta = z * (1.0 - s / 4.0) - z * z * (1.0 - s / 2.0 + s * s / 8.0)
        + z.powi(3) * (1.0 - 3.0 * s / 4.0 + 3.0 * s * s / 8.0 - 5.0 * s.powi(3) / 64.0)
        - z.powi(4)
            * (1.0 - s + 3.0 * s * s / 4.0 - 5.0 * s.powi(3) / 16.0 + 7.0 * s.powi(4) / 128.0);
    let sigma = ex * eta.tan() * s * (1.0 - beta);
    Ok(GammaSeriesState {
        eta,
        x,
        z_aux: z,
        s_aux: s,
        sigma,
        beta,
        terms,
        gamma: terms.iter().sum(),
    })
}

/// Approximation of Π(1 − σ, ν, k) − F(1 − σ, k) for k → 1, σ → 0 with
/// (1 − k)/σ → 0:
///
/// ```text
/// −ν/(2(1+ν))·ln((2−σ)/σ) + √ν·arctan((1−σ)√ν)/(1+ν)
/// ```
pub fn pi_minus_f_asym(sigma: f64, nu: f64, k: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::ArgOutOfRange(format!(
            "sigma = {sigma} outside (0, 1)"
        )));
    }
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::ArgOutOfRange(format!("nu = {nu} must be positive")));
    }
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::ArgOutOfRange(format!("k = {k} outside (0, 1)")));
    }
    let r = nu.sqrt();
    Ok(-nu / (2.0 * (1.0 + nu)) * ((2.0 - sigma) / sigma).ln()
        + r * ((1.0 - sigma) * r).atan() / (1.0 + nu))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_are_sums() {
        let b = arc_series(1.0, PI, 0.01).unwrap();
        assert_eq!(b.terms.len(), 7);
        assert!((b.terms[0].value - 100.0 * PI).abs() < 1e-12);
        let sum: f64 = b.values().iter().sum();
        assert!((sum - b.total).abs() <= 1e-15 * b.total);
        assert_eq!(b.order_of_remainder, "O(h^2)");
    }

    #[test]
    fn leading_order_values() {
        assert_eq!(leading_order(1.0, 1.0).unwrap(), 1.0);
        let v = leading_order(2.0, 0.01).unwrap();
        assert!((v - (200.0 + 100f64.ln() / PI)).abs() < 1e-12);
    }

    #[test]
    fn linear_leading_term() {
        assert!((linear_series(1.0, 0.01).unwrap().terms[0].value - 100.0).abs() < 1e-12);
        assert!(linear_series(1.0, 2.0).is_err());
    }

    #[test]
    fn gamma_series_limits() {
        let g = gamma_series(0.7, 1e-12).unwrap();
        assert!((g - 1.4).abs() < 1e-9);
        let st = gamma_series_state(PI / 4.0, 0.01).unwrap();
        assert!(st.terms[3].abs() < 1e-15);
        assert!(gamma_series(2.0, 0.01).is_err());
    }

    #[test]
    fn pi_minus_f_asym_vanishes_with_nu() {
        assert!(pi_minus_f_asym(0.1, 1e-14, 0.5).unwrap().abs() < 1e-13);
    }
}
