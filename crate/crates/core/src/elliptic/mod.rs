//! Special-function substrate: theta functions, Legendre integrals, Jacobi
//! functions at real and imaginary argument, the Jacobi Z function, and the
//! bundle of nome/moduli/period quantities attached to a capacity value.

mod carlson;
pub mod integrals;
pub mod jacobi;
pub mod theta;

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};

pub use integrals::{complete_E, complete_K, incomplete_E, incomplete_F, incomplete_Pi, Modulus};
pub use jacobi::{sncndn, SnCnDn};
pub use theta::{
    theta, theta_dlog4, theta_parts, theta_parts_via, ThetaKind, ThetaParts, ThetaPath, NOME_SWITCH,
};

const SERIES_CUTOFF: f64 = 1e-17;

/// The nome q = e^{iπτ} and its transform q₁ = e^{π²/ln q}.
///
/// Both logarithms are kept because either nome may underflow or round to 1
/// at extreme capacities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Nome {
    pub q: f64,
    pub q1: f64,
    /// ω₂/ω₁ = ln(1/q)/π.
    pub tau: f64,
    pub log_q: f64,
    pub log_q1: f64,
}

impl Nome {
    pub fn from_q(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0 - 1e-12) {
            return Err(Error::NomeOutOfRange(q));
        }
        Ok(Self::from_log(q.ln()))
    }

    /// q = e^{−π/y}.
    pub fn from_capacity(y: f64) -> Result<Self> {
        if !(y.is_finite() && y > 0.0) {
            return Err(Error::ArgOutOfRange(format!(
                "capacity {y} must be positive"
            )));
        }
        let nome = Self::from_log(-PI / y);
        if nome.q >= 1.0 - 1e-12 {
            return Err(Error::NomeOutOfRange(nome.q));
        }
        Ok(nome)
    }

    fn from_log(log_q: f64) -> Self {
        let log_q1 = PI * PI / log_q;
        Self {
            q: log_q.exp(),
            q1: log_q1.exp(),
            tau: -log_q / PI,
            log_q,
            log_q1,
        }
    }

    fn direct(&self) -> bool {
        self.log_q <= NOME_SWITCH.ln()
    }
}

/// k, k′ and K, K′ for a nome, with ln k′ kept separately because k′
/// underflows once the capacity exceeds a few hundred.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Moduli {
    pub m: Modulus,
    pub ln_kc: f64,
    pub kk: f64,
    pub kkp: f64,
}

// (Σ q^{n(n+1)}, ϑ₃(0), ϑ₄(0)) at nome e^{ln_q}
fn null_sums(ln_q: f64) -> (f64, f64, f64) {
    let mut s2 = 1.0;
    let mut t3 = 1.0;
    let mut t4 = 1.0;
    for n in 1..4096 {
        let nf = n as f64;
        let a = (ln_q * nf * nf).exp();
        s2 += (ln_q * nf * (nf + 1.0)).exp();
        t3 += 2.0 * a;
        t4 += if n % 2 == 1 { -2.0 * a } else { 2.0 * a };
        if a < SERIES_CUTOFF {
            break;
        }
    }
    (s2, t3, t4)
}

pub(crate) fn moduli_from_log_nome(nome: &Nome) -> Moduli {
    if nome.direct() {
        moduli_direct(nome)
    } else {
        moduli_transformed(nome)
    }
}

fn moduli_direct(nome: &Nome) -> Moduli {
    let (s2, t3, t4) = null_sums(nome.log_q);
    let k = 4.0 * (0.5 * nome.log_q).exp() * (s2 / t3) * (s2 / t3);
    let kc = (t4 / t3) * (t4 / t3);
    let kk = 0.5 * PI * t3 * t3;
    Moduli {
        m: Modulus::from_pair(k, kc),
        ln_kc: kc.ln(),
        kk,
        kkp: kk * nome.tau,
    }
}

fn moduli_transformed(nome: &Nome) -> Moduli {
    let (s2, t3, t4) = null_sums(nome.log_q1);
    let ln_kc = 2.0 * LN_2 + 0.5 * nome.log_q1 + 2.0 * (s2 / t3).ln();
    let k = (t4 / t3) * (t4 / t3);
    let kkp = 0.5 * PI * t3 * t3;
    Moduli {
        m: Modulus::from_pair(k, ln_kc.exp()),
        ln_kc,
        kk: kkp / nome.tau,
        kkp,
    }
}

/// (k, k′, K, K′) from the nome: k = ϑ₂²/ϑ₃², k′ = ϑ₄²/ϑ₃², K = (π/2)ϑ₃²,
/// K′ = K·ln(1/q)/π.
pub fn moduli_from_nome(q: f64) -> Result<(f64, f64, f64, f64)> {
    let nome = Nome::from_q(q)?;
    let md = moduli_from_log_nome(&nome);
    Ok((md.m.k, md.m.kc, md.kk, md.kkp))
}

/// Jacobi functions and Z at the imaginary point iα, in real arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiImagValues {
    /// sn(iα, k)/i = sn(α, k′)/cn(α, k′)
    pub sn_over_i: f64,
    /// cn(iα, k) = 1/cn(α, k′)
    pub cn: f64,
    /// dn(iα, k) = dn(α, k′)/cn(α, k′)
    pub dn: f64,
    /// Z(iα, k)/i
    pub z_over_i: f64,
    /// k²·sn_over_i²
    pub nu: f64,
}

fn imag_values(alpha: f64, md: &Moduli, log_q: f64) -> Result<JacobiImagValues> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::ArgOutOfRange(format!(
            "imaginary argument {alpha} must be positive"
        )));
    }
    if alpha >= md.kkp - 1e-12 {
        return Err(Error::ImagArgTooLarge {
            alpha,
            kprime: md.kkp,
        });
    }
    let v = sncndn(alpha, md.m.complement());
    let s = v.sn / v.cn;
    let c = 1.0 / v.cn;
    let d = v.dn / v.cn;
    let z_over_i = if log_q <= NOME_SWITCH.ln() {
        0.5 * PI / md.kk * theta::dlog4_imag(0.5 * PI * alpha / md.kk, log_q)
    } else {
        let log_q1 = PI * PI / log_q;
        let eta = 0.5 * PI * alpha / md.kkp;
        -0.5 * PI / md.kkp * (alpha / md.kk + theta::dlog2_real(eta, log_q1))
    };
    let out = JacobiImagValues {
        sn_over_i: s,
        cn: c,
        dn: d,
        z_over_i,
        nu: md.m.k2() * s * s,
    };
    if ![out.sn_over_i, out.cn, out.dn, out.z_over_i, out.nu]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(Error::NonFinite("jacobi_imag"));
    }
    Ok(out)
}

/// sn, cn, dn and Z at iα for a real modulus k ∈ [0, 1), requiring α < K′(k).
pub fn jacobi_imag(alpha: f64, k: f64) -> Result<JacobiImagValues> {
    let m = Modulus::from_k(k)?;
    let kk = m.complete_k()?;
    let kkp = if m.k == 0.0 {
        f64::INFINITY
    } else {
        m.complement().complete_k()?
    };
    let log_q = -PI * kkp / kk;
    let md = Moduli {
        m,
        ln_kc: m.kc.ln(),
        kk,
        kkp,
    };
    imag_values(alpha, &md, log_q)
}

/// Everything the capacity equation needs for one value of the capacity y
/// and plate radius ratio R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticContext {
    pub y: f64,
    pub nome: Nome,
    pub k: f64,
    /// Underflows to zero for y above roughly 450; `ln_kprime` stays finite.
    pub kprime: f64,
    pub ln_kprime: f64,
    pub kval: f64,
    pub kprimeval: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub ln_r: f64,
    /// α = K ln R / π
    pub alpha: f64,
    /// η = y ln R / 2
    pub eta: f64,
    /// x = 1/(π y)
    pub x: f64,
}

impl EllipticContext {
    pub fn from_capacity(y: f64, r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 1.0) {
            return Err(Error::GeometryInvalid(format!(
                "radius ratio {r} must exceed 1"
            )));
        }
        Self::from_capacity_log(y, r.ln())
    }

    /// Same as `from_capacity` with ln R supplied directly.
    pub fn from_capacity_log(y: f64, ln_r: f64) -> Result<Self> {
        if !(ln_r.is_finite() && ln_r > 0.0) {
            return Err(Error::GeometryInvalid(format!(
                "ln R = {ln_r} must be positive"
            )));
        }
        let nome = Nome::from_capacity(y)?;
        let md = moduli_from_log_nome(&nome);
        Ok(Self {
            y,
            nome,
            k: md.m.k,
            kprime: md.m.kc,
            ln_kprime: md.ln_kc,
            kval: md.kk,
            kprimeval: md.kkp,
            omega1: 2.0 * md.kk,
            omega2: 2.0 * md.kkp,
            ln_r,
            alpha: md.kk * ln_r / PI,
            eta: 0.5 * y * ln_r,
            x: 1.0 / (PI * y),
        })
    }

    pub fn r(&self) -> f64 {
        self.ln_r.exp()
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::from_pair(self.k, self.kprime)
    }

    pub(crate) fn moduli(&self) -> Moduli {
        Moduli {
            m: self.modulus(),
            ln_kc: self.ln_kprime,
            kk: self.kval,
            kkp: self.kprimeval,
        }
    }

    /// Jacobi functions and Z at iα.
    pub fn jacobi_imag(&self) -> Result<JacobiImagValues> {
        imag_values(self.alpha, &self.moduli(), self.nome.log_q)
    }

    /// cn(iα)dn(iα) − (sn(iα)/i)(Z(iα)/i), the denominator of λ².
    ///
    /// Both products grow like tan²η as η → π/2. In the transformed nome the
    /// identity ϑ₁′ϑ₂ − ϑ₁ϑ₂′ = ϑ₂(0)²ϑ₃ϑ₄ turns the difference into
    /// s·(π/2K′)·(ϑ₁′/ϑ₁(η; q₁) + ln R/π), which has no cancellation.
    pub fn cd_minus_s_zeta(&self, jac: &JacobiImagValues) -> f64 {
        if self.nome.log_q1 <= NOME_SWITCH.ln() {
            let eta = 0.5 * PI * self.alpha / self.kprimeval;
            let inner = theta::dlog1_real(eta, self.nome.log_q1) + self.alpha / self.kval;
            jac.sn_over_i * 0.5 * PI / self.kprimeval * inner
        } else {
            jac.cn * jac.dn - jac.sn_over_i * jac.z_over_i
        }
    }

    /// E(k) and E(k′).
    pub fn complete_e_pair(&self) -> Result<(f64, f64)> {
        let m = self.modulus();
        Ok((m.complete_e()?, m.complement().complete_e()?))
    }
}

/// Π(u, iα)/i = (cn·dn/sn)(iα)·[F(x, k) − Π(x, ν, k)] reduced to real
/// arithmetic, x = sn(u, k), for u ∈ [0, K].
pub fn pi_special(u: f64, ctx: &EllipticContext) -> Result<f64> {
    if !(u.is_finite() && (0.0..=ctx.kval * (1.0 + 1e-15)).contains(&u)) {
        return Err(Error::ArgOutOfRange(format!("u = {u} outside [0, K]")));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    let jac = ctx.jacobi_imag()?;
    let v = sncndn(u, ctx.modulus());
    let pi_minus_f = ctx.modulus().pi_minus_f_with(v.sn, v.cn * v.cn, jac.nu);
    Ok(-jac.cn * jac.dn / jac.sn_over_i * pi_minus_f)
}
