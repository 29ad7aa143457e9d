//! The conformal map of the period rectangle [0, ω₁]×[0, ω₂] onto the plane
//! slit along the two arcs |z| = R and |z| = 1/R:
//!
//! ```text
//! z(u) = R · ϑ₄(πu/ω₁ − i ln R/2; q) / ϑ₄(πu/ω₁ + i ln R/2; q),   q = e^{−π ω₂/ω₁}
//! ```
//!
//! The bottom side goes to the outer arc, the top side to the inner arc and
//! the horizontal mid-line to the unit circle.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::elliptic::theta::{theta_parts, ThetaKind};
use crate::elliptic::EllipticContext;
use crate::error::{Error, Result};

const POLE_GUARD: f64 = 1e-12;
const GOLDEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RectangleMapParams {
    pub omega1: f64,
    pub omega2: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl RectangleMapParams {
    pub fn new(omega1: f64, omega2: f64, r: f64) -> Result<Self> {
        if !(omega1 > 0.0 && omega2 > 0.0 && omega1.is_finite() && omega2.is_finite()) {
            return Err(Error::GeometryInvalid(format!(
                "periods ({omega1}, {omega2}) must be positive"
            )));
        }
        if !(r > 1.0 && r.ln() < PI * omega2 / omega1) {
            return Err(Error::GeometryInvalid(format!(
                "R = {r} outside (1, exp(π ω₂/ω₁)) for ω₁ = {omega1}, ω₂ = {omega2}"
            )));
        }
        Ok(Self { omega1, omega2, r })
    }

    /// ω₁ = 2K, ω₂ = 2K′ for the capacity and radius ratio in `ctx`.
    pub fn from_context(ctx: &EllipticContext) -> Result<Self> {
        Self::new(ctx.omega1, ctx.omega2, ctx.r())
    }

    pub fn log_nome(&self) -> f64 {
        -PI * self.omega2 / self.omega1
    }

    pub fn nome(&self) -> f64 {
        self.log_nome().exp()
    }

    /// Im of the preimage of ∞ on the left side.
    pub fn alpha_pre(&self) -> f64 {
        0.5 * self.omega2 - self.omega1 * self.r.ln() / (2.0 * PI)
    }

    /// Im of the preimage of 0 on the left side.
    pub fn beta_pre(&self) -> f64 {
        0.5 * self.omega2 + self.omega1 * self.r.ln() / (2.0 * PI)
    }
}

/// z(u). The nome is taken from the params as exp(−π ω₂/ω₁).
pub fn map_z(u: Complex64, p: &RectangleMapParams) -> Result<Complex64> {
    let pole = Complex64::new(0.0, p.alpha_pre());
    if (u - pole).norm() < POLE_GUARD || (u - pole - p.omega1).norm() < POLE_GUARD {
        return Err(Error::PoleAtAlpha);
    }
    let w = u * (PI / p.omega1);
    let shift = Complex64::new(0.0, 0.5 * p.r.ln());
    let ln_q = p.log_nome();
    let num = theta_parts(ThetaKind::Four, w - shift, ln_q)?;
    let den = theta_parts(ThetaKind::Four, w + shift, ln_q)?;
    if den.series.norm() == 0.0 {
        return Err(Error::PoleAtAlpha);
    }
    let z = num.ratio(&den) * p.r;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::PoleAtAlpha);
    }
    Ok(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Bottom,
    Top,
    Mid,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Bottom => "bottom",
            Side::Top => "top",
            Side::Mid => "mid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub u: Complex64,
    pub z: Complex64,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    pub params: RectangleMapParams,
    /// Images of the bottom side, on |z| = R.
    pub outer_arc: Vec<TracePoint>,
    /// Images of the top side, on |z| = 1/R.
    pub inner_arc: Vec<TracePoint>,
    /// Images of the mid-line Im u = ω₂/2, on the unit circle.
    pub mid_line: Vec<TracePoint>,
    /// max |Arg z(t)| over the bottom side.
    pub gamma_est: f64,
    /// Where the maximum is attained, in (0, ω₁/2).
    pub t_max: f64,
    pub alpha_pre: f64,
    pub beta_pre: f64,
}

impl BoundaryTrace {
    /// Rows `u_re,u_im,z_re,z_im,side`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u_re,u_im,z_re,z_im,side\n");
        for p in self
            .outer_arc
            .iter()
            .chain(&self.inner_arc)
            .chain(&self.mid_line)
        {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{}",
                p.u.re,
                p.u.im,
                p.z.re,
                p.z.im,
                p.side.as_str()
            );
        }
        out
    }
}

fn arg_abs(t: f64, p: &RectangleMapParams) -> Result<f64> {
    let a = map_z(Complex64::new(t, 0.0), p)?.arg().abs();
    if a >= PI - 1e-9 {
        return Err(Error::GeometryInvalid(format!(
            "Arg z({t}) = {a} reached the branch cut"
        )));
    }
    Ok(a)
}

/// Golden-section maximisation of |Arg z(t)| on [a, b].
fn golden_max(mut a: f64, mut b: f64, p: &RectangleMapParams) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = arg_abs(c, p)?;
    let mut fd = arg_abs(d, p)?;
    while b - a > GOLDEN_TOL * (1.0 + a.abs()) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = arg_abs(c, p)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = arg_abs(d, p)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, arg_abs(t, p)?.max(fc).max(fd)))
}

/// Samples the bottom, top and mid lines at `n` uniform points each and
/// locates the angular half-spread γ of the plates.
pub fn trace_boundary(p: &RectangleMapParams, n: usize) -> Result<BoundaryTrace> {
    if n < 8 {
        return Err(Error::ArgOutOfRange(format!("trace needs n ≥ 8, got {n}")));
    }
    let step = p.omega1 / (n - 1) as f64;
    let mut outer = Vec::with_capacity(n);
    let mut inner = Vec::with_capacity(n);
    let mut mid = Vec::with_capacity(n);
    for j in 0..n {
        let t = j as f64 * step;
        for (im, side) in [
            (0.0, Side::Bottom),
            (p.omega2, Side::Top),
            (0.5 * p.omega2, Side::Mid),
        ] {
            let u = Complex64::new(t, im);
            let z = map_z(u, p)?;
            let point = TracePoint { u, z, side };
            match side {
                Side::Bottom => outer.push(point),
                Side::Top => inner.push(point),
                Side::Mid => mid.push(point),
            }
        }
    }

    // The extremum sits in (0, ω₁/2); bracket it from a coarse scan there.
    let m = n.max(64);
    let half = 0.5 * p.omega1;
    let h = half / m as f64;
    let mut best = (0usize, -1.0);
    for j in 1..m {
        let v = arg_abs(j as f64 * h, p)?;
        if v > best.1 {
            best = (j, v);
        }
    }
    let lo = (best.0 - 1) as f64 * h;
    let hi = (best.0 + 1) as f64 * h;
    let (t_max, gamma_est) = golden_max(lo, hi, p)?;

    Ok(BoundaryTrace {
        params: *p,
        outer_arc: outer,
        inner_arc: inner,
        mid_line: mid,
        gamma_est,
        t_max,
        alpha_pre: p.alpha_pre(),
        beta_pre: p.beta_pre(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> RectangleMapParams {
        let ctx = EllipticContext::from_capacity(2.0, 1.5).unwrap();
        RectangleMapParams::from_context(&ctx).unwrap()
    }

    #[test]
    fn corner_and_midpoint_values() {
        let p = params();
        let z0 = map_z(Complex64::new(0.0, 0.0), &p).unwrap();
        assert!((z0 - p.r).norm() < 1e-13);
        let zm = map_z(Complex64::new(0.0, 0.5 * p.omega2), &p).unwrap();
        assert!((zm + 1.0).norm() < 1e-12);
        let zb = map_z(Complex64::new(0.0, p.beta_pre()), &p).unwrap();
        assert!(zb.norm() < 1e-11);
        assert!(matches!(
            map_z(Complex64::new(0.0, p.alpha_pre()), &p),
            Err(Error::PoleAtAlpha)
        ));
    }

    #[test]
    fn preimages_sum_to_height() {
        let p = params();
        assert!((p.alpha_pre() + p.beta_pre() - p.omega2).abs() < 1e-14);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let tr = trace_boundary(&params(), 8).unwrap();
        let csv = tr.to_csv();
        assert!(csv.starts_with("u_re,u_im,z_re,z_im,side\n"));
        assert_eq!(csv.lines().count(), 1 + 3 * 8);
    }

    #[test]
    fn rejects_radius_outside_map_range() {
        assert!(RectangleMapParams::new(2.0, 1.0, (PI / 2.0).exp() * 1.01).is_err());
        assert!(RectangleMapParams::new(2.0, 1.0, 1.0).is_err());
    }
}
