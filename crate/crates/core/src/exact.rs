//! Exact capacities: the circular-arc condenser through its transcendental
//! equation γ(y) = γ*, and the parallel-segment condenser through the
//! classical equation πL/(2h) = K·E(φ, k) − E·F(φ, k).
//!
//! Real form of the arc equation. With s = sn(iα)/i, c = cn(iα),
//! d = dn(iα), ζ = Z(iα)/i and ν = k²s², the stationary point of Arg z(u)
//! on [0, K] is at sn²(μ₁) = λ² where
//!
//! ```text
//! λ² = ζ / (k² s (c d − s ζ))
//! ```
//!
//! and the half-angle of the plates is
//!
//! ```text
//! γ = (2 c d / s)·[Π(λ, ν, k) − F(λ, k)] + 2 F(λ, k) ζ.
//! ```

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::asymptotics;
use crate::elliptic::{EllipticContext, JacobiImagValues, Modulus, Nome};
use crate::error::{Error, Result};
use crate::roots::brent;

/// Circular-arc condenser: plates of radii ρ ∓ h/2 spanning arc length L
/// about the mid-radius ρ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcCondenser {
    pub rho: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub h: f64,
}

/// Two parallel segments of length L at distance h.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearCondenser {
    #[serde(rename = "L")]
    pub l: f64,
    pub h: f64,
}

/// The reduced condenser with plates R·e^{iφ} and e^{iφ}/R, |φ| ≤ γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedGeometry {
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    #[serde(rename = "R")]
    pub r: f64,
    /// ln R = atanh δ, kept to full relative precision for tiny gaps.
    pub ln_r: f64,
}

impl NormalizedGeometry {
    /// From the half-angle and the radius ratio directly.
    pub fn from_gamma_r(gamma: f64, r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 1.0) {
            return Err(Error::GeometryInvalid(format!(
                "radius ratio {r} must exceed 1"
            )));
        }
        let ln_r = r.ln();
        Self::from_gamma_log_r(gamma, ln_r)
    }

    pub fn from_gamma_log_r(gamma: f64, ln_r: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < PI) {
            return Err(Error::GeometryInvalid(format!(
                "half-angle {gamma} outside (0, pi)"
            )));
        }
        if !(ln_r.is_finite() && ln_r > 0.0) {
            return Err(Error::GeometryInvalid(format!(
                "ln R = {ln_r} must be positive"
            )));
        }
        Ok(Self {
            gamma,
            delta: ln_r.tanh(),
            epsilon: ln_r.exp_m1(),
            r: ln_r.exp(),
            ln_r,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    ScExact,
    Series,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityResult {
    pub value: f64,
    pub method: Method,
    pub residual: f64,
    pub iterations: usize,
    /// Final bracket of the root search, when one was used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<(f64, f64)>,
}

/// Where Arg z(u) is extremal on [0, K].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverIntermediates {
    pub lambda: f64,
    pub mu1: f64,
    pub jac: JacobiImagValues,
}

/// State of the parallel-segment equation at a modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct ScState {
    pub k_sc: f64,
    pub kprime_sc: f64,
    pub K_sc: f64,
    pub E_sc: f64,
    pub phi: f64,
}

/// Reduces (ρ, L, h) to the half-angle γ = L/(2ρ) and the radius ratio
/// R = √((1+δ)/(1−δ)), δ = h/(2ρ).
pub fn normalize(c: ArcCondenser) -> Result<NormalizedGeometry> {
    if !(c.rho.is_finite() && c.rho > 0.0) {
        return Err(Error::GeometryInvalid(format!(
            "rho = {} must be positive",
            c.rho
        )));
    }
    if !(c.l > 0.0 && c.l < 2.0 * PI * c.rho) {
        return Err(Error::GeometryInvalid(format!(
            "arc length {} outside (0, 2*pi*rho)",
            c.l
        )));
    }
    if !(c.h > 0.0 && c.h < 2.0 * c.rho) {
        return Err(Error::GeometryInvalid(format!(
            "gap {} outside (0, 2*rho)",
            c.h
        )));
    }
    let gamma = c.l / (2.0 * c.rho);
    let delta = c.h / (2.0 * c.rho);
    let ln_r = delta.atanh();
    Ok(NormalizedGeometry {
        gamma,
        delta,
        epsilon: ln_r.exp_m1(),
        r: ((1.0 + delta) / (1.0 - delta)).sqrt(),
        ln_r,
    })
}

struct Stationary {
    gamma: f64,
    inter: SolverIntermediates,
}

fn stationary(ctx: &EllipticContext) -> Result<Stationary> {
    if ctx.eta >= FRAC_PI_2 - 1e-9 {
        return Err(Error::OutsideLemmaRange { eta: ctx.eta });
    }
    let jac = ctx.jacobi_imag()?;
    let (s, c, d, zeta) = (jac.sn_over_i, jac.cn, jac.dn, jac.z_over_i);
    let m: Modulus = ctx.modulus();
    let denom = m.k2() * s * ctx.cd_minus_s_zeta(&jac);
    let lam2 = zeta / denom;
    if !(lam2 > 0.0 && lam2 < 1.0) {
        return Err(Error::LambdaOutOfRange(lam2));
    }
    let omx2 = (denom - zeta) / denom;
    let lambda = lam2.sqrt();
    let f = m.f_with(lambda, omx2);
    let pmf = m.pi_minus_f_with(lambda, omx2, jac.nu);
    let gamma = 2.0 * c * d / s * pmf + 2.0 * f * zeta;
    if !gamma.is_finite() {
        return Err(Error::NonFinite("gamma_of"));
    }
    Ok(Stationary {
        gamma,
        inter: SolverIntermediates {
            lambda,
            mu1: f,
            jac,
        },
    })
}

/// Half-angle γ of the plates of the reduced condenser with radius ratio R
/// whose capacity is y.
pub fn gamma_of(r: f64, y: f64) -> Result<f64> {
    gamma_of_log(ln_ratio(r)?, y)
}

/// `gamma_of` with ln R supplied directly.
pub fn gamma_of_log(ln_r: f64, y: f64) -> Result<f64> {
    Ok(stationary(&EllipticContext::from_capacity_log(y, ln_r)?)?.gamma)
}

/// λ, μ₁ = F(λ, k) and the imaginary-argument values behind `gamma_of`.
pub fn mu1_of(r: f64, y: f64) -> Result<SolverIntermediates> {
    Ok(stationary(&EllipticContext::from_capacity(y, r)?)?.inter)
}

fn ln_ratio(r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 1.0) {
        return Err(Error::GeometryInvalid(format!(
            "radius ratio {r} must exceed 1"
        )));
    }
    Ok(r.ln())
}

const Y_MIN: f64 = 1e-6;
const Y_MAX: f64 = 1e9;
const RTOL: f64 = 1e-15;
const MAX_ITER: usize = 200;

/// Capacity of the reduced condenser with half-angle γ and radius ratio R.
pub fn solve_capacity(gamma: f64, r: f64) -> Result<CapacityResult> {
    solve_normalized(&NormalizedGeometry::from_gamma_r(gamma, r)?)
}

/// Capacity of a circular-arc condenser.
pub fn solve_arc(c: ArcCondenser) -> Result<CapacityResult> {
    solve_normalized(&normalize(c)?)
}

pub fn solve_normalized(g: &NormalizedGeometry) -> Result<CapacityResult> {
    let gamma = g.gamma;
    if gamma >= PI - 1e-9 {
        return Err(Error::GeometryInvalid(
            "full circles have capacity pi/ln R; no arc equation".into(),
        ));
    }
    let ln_r = g.ln_r;
    let y_top = ((PI - 4e-9) / ln_r).min(Y_MAX);

    let guess = asymptotics::arc_series_unit(gamma, g.delta)
        .map(|b| b.total)
        .unwrap_or(f64::NAN);
    let y0 = if guess.is_finite() && guess > 0.0 && guess < y_top {
        guess
    } else {
        (gamma / ln_r).min(0.5 * y_top)
    };
    let f = |y: f64| gamma_of_log(ln_r, y).map(|v| v - gamma);

    // the upper end closes in on y_top geometrically in y_top − y
    let mut width = (10.0 * g.delta / gamma).max(1e-12);
    let (mut lo, mut hi);
    let (mut flo, mut fhi);
    loop {
        lo = (y0 / (1.0 + width)).max(Y_MIN);
        hi = (y0 * (1.0 + width)).min(y_top - (y_top - y0) / (1.0 + width));
        flo = f(lo)?;
        fhi = f(hi)?;
        if flo.signum() != fhi.signum() || flo == 0.0 || fhi == 0.0 {
            break;
        }
        if lo <= Y_MIN && width > 1e12 {
            return Err(Error::BracketFailure(format!(
                "gamma = {gamma}, R = {}: no sign change in y in [{lo}, {hi}]",
                g.r
            )));
        }
        width *= 2.0;
    }
    let root = brent(f, lo, hi, flo, fhi, 0.0, RTOL, MAX_ITER)?;
    Ok(CapacityResult {
        value: root.x,
        method: Method::Exact,
        residual: root.fx.abs(),
        iterations: root.iterations,
        bracket: Some((lo, hi)),
    })
}

struct ScEval {
    mismatch: f64,
    state: ScState,
}

// K·E(φ) − E·F(φ) − πL/(2h) at the modulus whose capacity K/K′ is y
fn sc_eval(y: f64, target: f64) -> Result<ScEval> {
    let nome = Nome::from_capacity(y)?;
    let md = crate::elliptic::moduli_from_log_nome(&nome);
    let m = md.m;
    let kk = md.kk;
    let kc2 = m.kc2();
    // (K − E)/k² and (E − k′²K)/k², so that k² never divides
    let (kme, tail) = m.sc_parts_over_k2(kk);
    let e = kc2 * kk + m.k2() * tail;
    let x2 = kme / kk;
    let omx2 = tail / kk;
    let x = x2.sqrt();
    let ephi = m.e_with(x, omx2);
    let fphi = m.f_with(x, omx2);
    Ok(ScEval {
        mismatch: kk * ephi - e * fphi - target,
        state: ScState {
            k_sc: m.k,
            kprime_sc: m.kc,
            K_sc: kk,
            E_sc: e,
            phi: x.asin(),
        },
    })
}

/// Capacity K/K′ of the parallel-segment condenser.
pub fn sc_solve(l: f64, h: f64) -> Result<CapacityResult> {
    Ok(sc_solve_state(l, h)?.0)
}

/// `sc_solve` together with the modulus-side quantities at the root.
pub fn sc_solve_state(l: f64, h: f64) -> Result<(CapacityResult, ScState)> {
    if !(l.is_finite() && l > 0.0 && h.is_finite() && h > 0.0) {
        return Err(Error::GeometryInvalid(format!(
            "L = {l}, h = {h} must be positive"
        )));
    }
    let target = PI * l / (2.0 * h);
    let f = |y: f64| sc_eval(y, target).map(|e| e.mismatch);

    let guess = if h < l {
        asymptotics::linear_series(l, h)
            .map(|b| b.total)
            .unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    let y0 = if guess.is_finite() && guess > 0.0 {
        guess
    } else {
        (l / h).max(0.1)
    };
    let mut width = (10.0 * h / l).max(1e-12);
    let (mut lo, mut hi);
    let (mut flo, mut fhi);
    loop {
        lo = (y0 / (1.0 + width)).max(Y_MIN);
        hi = (y0 * (1.0 + width)).min(Y_MAX);
        flo = f(lo)?;
        fhi = f(hi)?;
        if flo.signum() != fhi.signum() || flo == 0.0 || fhi == 0.0 {
            break;
        }
        if lo <= Y_MIN && hi >= Y_MAX {
            return Err(Error::BracketFailure(format!(
                "L = {l}, h = {h}: no sign change in [{lo}, {hi}]"
            )));
        }
        width *= 2.0;
    }
    let root = brent(f, lo, hi, flo, fhi, 0.0, RTOL, MAX_ITER)?;
    let state = sc_eval(root.x, target)?.state;
    Ok((
        CapacityResult {
            value: root.x,
            method: Method::ScExact,
            residual: root.fx.abs(),
            iterations: root.iterations,
            bracket: Some((lo, hi)),
        },
        state,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        let g = normalize(ArcCondenser {
            rho: 1.0,
            l: PI,
            h: 0.2,
        })
        .unwrap();
        assert!((g.gamma - PI / 2.0).abs() < 1e-15);
        assert!((g.delta - 0.1).abs() < 1e-16);
        assert!((g.r - (1.1f64 / 0.9).sqrt()).abs() < 1e-15);
        assert!((g.ln_r.exp() - g.r).abs() < 1e-15);
        assert!(normalize(ArcCondenser {
            rho: 1.0,
            l: 2.0 * PI,
            h: 0.1
        })
        .is_err());
        assert!(normalize(ArcCondenser {
            rho: 2.0,
            l: 2.0 * PI * 2.0 * 0.99,
            h: 0.1
        })
        .is_ok());
    }

    #[test]
    fn gamma_grows_like_two_eta() {
        let r = 1.001f64;
        let y = 2000.0;
        let g = gamma_of(r, y).unwrap();
        let eta = 0.5 * y * r.ln();
        assert!(
            g < 2.0 * eta && g > 2.0 * eta * 0.95,
            "{g} vs {}",
            2.0 * eta
        );
    }

    #[test]
    fn round_trip_small_case() {
        let g0 = gamma_of(1.3, 5.0).unwrap();
        let res = solve_capacity(g0, 1.3).unwrap();
        assert!((res.value - 5.0).abs() < 1e-9 * 5.0, "{}", res.value);
    }

    #[test]
    fn map_range_enforced() {
        assert!(matches!(
            gamma_of(1.5, 10.0),
            Err(Error::OutsideLemmaRange { .. })
        ));
    }

    #[test]
    fn sc_monotone_in_gap() {
        let a = sc_solve(1.0, 0.1).unwrap().value;
        let b = sc_solve(1.0, 0.2).unwrap().value;
        let c = sc_solve(1.0, 0.4).unwrap().value;
        assert!(a > b && b > c);
    }
}
