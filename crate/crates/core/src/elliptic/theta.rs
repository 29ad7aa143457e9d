//! Jacobi theta functions ϑ₁..ϑ₄ in the nome convention
//!
//! ```text
//! ϑ₁(w;q) = 2 Σ (-1)ⁿ q^{(n+½)²} sin((2n+1)w)
//! ϑ₂(w;q) = 2 Σ      q^{(n+½)²} cos((2n+1)w)
//! ϑ₃(w;q) = 1 + 2 Σ      q^{n²} cos(2nw)
//! ϑ₄(w;q) = 1 + 2 Σ (-1)ⁿ q^{n²} cos(2nw)
//! ```
//!
//! Evaluation reduces the argument into the fundamental cell
//! |Re w| ≤ π/2, |Im w| ≤ ln(1/q)/2 with the quasi-periodicity relations,
//! then sums the series directly for q ≤ 1/2 or switches to the transformed
//! nome q₁ = exp(π²/ln q) otherwise. Everything is carried in terms of ln q so
//! that nomes whose powers underflow (q₁ → 0) stay usable.
//!
//! Above q = 1/2 the Fourier series cancels badly (its terms are O(1) while
//! ϑ can be far smaller), so an expansion in q itself uses the triple
//! product there instead.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Direct series below this nome, transformed nome above.
pub const NOME_SWITCH: f64 = 0.5;

const SERIES_CUTOFF: f64 = 1e-17;
const MAX_TERMS: usize = 4096;
const MAX_FACTORS: f64 = 1e6;

/// Which of the four theta functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    One,
    Two,
    Three,
    Four,
}

impl ThetaKind {
    pub fn from_index(j: usize) -> Result<Self> {
        match j {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            4 => Ok(Self::Four),
            _ => Err(Error::ArgOutOfRange(format!(
                "theta index {j} not in 1..=4"
            ))),
        }
    }

    /// Sign c in ϑ(w + πτ) = c·q⁻¹·e^{-2iw}·ϑ(w).
    fn quasi_period_sign_negative(self) -> bool {
        matches!(self, Self::One | Self::Four)
    }

    /// ϑ₁, ϑ₂ change sign under w → w + π.
    fn antiperiodic(self) -> bool {
        matches!(self, Self::One | Self::Two)
    }

    /// Partner under the Jacobi imaginary transformation.
    fn transformed(self) -> Self {
        match self {
            Self::One => Self::One,
            Self::Two => Self::Four,
            Self::Three => Self::Three,
            Self::Four => Self::Two,
        }
    }
}

/// A theta value split as `exp(log_prefactor) * series`, together with the
/// logarithmic derivative ϑ′/ϑ.
///
/// Ratios of theta values should be formed from the parts so that tiny
/// prefactors (q^{1/4} with q underflowing) cancel before exponentiation.
#[derive(Debug, Clone, Copy)]
pub struct ThetaParts {
    pub log_prefactor: Complex64,
    pub series: Complex64,
    pub dlog: Complex64,
}

impl ThetaParts {
    pub fn value(&self) -> Complex64 {
        if self.series == Complex64::new(0.0, 0.0) {
            return self.series;
        }
        self.log_prefactor.exp() * self.series
    }

    /// |ϑ| without forming it, as a natural logarithm.
    pub fn ln_abs(&self) -> f64 {
        self.log_prefactor.re + self.series.norm().ln()
    }

    /// self / other
    pub fn ratio(&self, other: &ThetaParts) -> Complex64 {
        (self.log_prefactor - other.log_prefactor).exp() * self.series / other.series
    }
}

fn check_log_nome(ln_q: f64) -> Result<()> {
    // ln q = -inf encodes q = 0
    if ln_q.is_nan() || ln_q >= (1.0 - 1e-12_f64).ln() {
        return Err(Error::NomeOutOfRange(ln_q.exp()));
    }
    Ok(())
}

/// Evaluates ϑ_j(w; q) given ln q < 0, returning value parts and ϑ′/ϑ.
pub fn theta_parts(kind: ThetaKind, w: Complex64, ln_q: f64) -> Result<ThetaParts> {
    check_log_nome(ln_q)?;
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::NonFinite("theta argument"));
    }
    let parts = eval(kind, w, ln_q, ln_q > NOME_SWITCH.ln());
    if !(parts.series.re.is_finite() && parts.series.im.is_finite()) {
        return Err(Error::NonFinite("theta series"));
    }
    Ok(parts)
}

/// Which series evaluates a theta function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaPath {
    /// Expansions in q itself: the Fourier series, or the triple product
    /// for q > 1/2.
    Direct,
    /// The series in q₁ = exp(π²/ln q) after the Jacobi imaginary transformation.
    Transformed,
}

/// Like [`theta_parts`] with the evaluation path forced instead of chosen by
/// [`NOME_SWITCH`]. Either path is valid for every nome; the choice only
/// affects how many terms are needed.
pub fn theta_parts_via(
    kind: ThetaKind,
    w: Complex64,
    ln_q: f64,
    path: ThetaPath,
) -> Result<ThetaParts> {
    check_log_nome(ln_q)?;
    if !(w.re.is_finite() && w.im.is_finite()) || !ln_q.is_finite() {
        return Err(Error::NonFinite("theta argument"));
    }
    let parts = eval(kind, w, ln_q, path == ThetaPath::Transformed);
    if !(parts.series.re.is_finite() && parts.series.im.is_finite()) {
        return Err(Error::NonFinite("theta series"));
    }
    Ok(parts)
}

fn eval(kind: ThetaKind, w: Complex64, ln_q: f64, transform: bool) -> ThetaParts {
    let i = Complex64::i();
    let mut log_pref = Complex64::new(0.0, 0.0);
    let mut dlog_shift = Complex64::new(0.0, 0.0);

    // Imaginary reduction: w = w0 + m·πτ with Im(πτ) = ln(1/q).
    let mut w0 = w;
    if ln_q.is_finite() {
        let period = -ln_q;
        let m = (w.im / period).round();
        if m != 0.0 {
            w0 = w - i * (m * period);
            // ϑ(w0 + mπτ) = c^m q^{-m²} e^{-2imw0} ϑ(w0)
            log_pref += Complex64::new(-m * m * ln_q, 0.0) - 2.0 * i * m * w0;
            if kind.quasi_period_sign_negative() && (m as i64).rem_euclid(2) == 1 {
                log_pref += i * PI;
            }
            dlog_shift += -2.0 * i * m;
        }
    }

    // Real reduction: |Re w1| ≤ π/2.
    let p = (w0.re / PI).round();
    let w1 = w0 - p * PI;
    if kind.antiperiodic() && (p as i64).rem_euclid(2) == 1 {
        log_pref += i * PI;
    }

    if transform {
        let ln_q1 = PI * PI / ln_q;
        let z = i * w1 * (ln_q1 / PI);
        log_pref += Complex64::new(0.5 * (-ln_q1 / PI).ln(), 0.0) + w1 * w1 * (ln_q1 / (PI * PI));
        if kind == ThetaKind::One {
            log_pref += i * (PI / 2.0);
        }
        let inner = in_nome(kind.transformed(), z, ln_q1);
        return ThetaParts {
            log_prefactor: log_pref + inner.log_prefactor,
            series: inner.series,
            dlog: dlog_shift + w1 * (2.0 * ln_q1 / (PI * PI)) + i * (ln_q1 / PI) * inner.dlog,
        };
    }

    let inner = in_nome(kind, w1, ln_q);
    ThetaParts {
        log_prefactor: log_pref + inner.log_prefactor,
        series: inner.series,
        dlog: dlog_shift + inner.dlog,
    }
}

fn in_nome(kind: ThetaKind, w: Complex64, ln_q: f64) -> ThetaParts {
    // number of factors before q^{2n} drops below the cutoff
    let factors = SERIES_CUTOFF.ln() / (2.0 * ln_q);
    if ln_q > NOME_SWITCH.ln() && factors < MAX_FACTORS {
        product(kind, w, ln_q)
    } else {
        direct(kind, w, ln_q)
    }
}

/// Jacobi triple product, e.g.
/// ϑ₄(w) = Π (1 − q²ⁿ)(1 − q²ⁿ⁻¹e^{2iw})(1 − q²ⁿ⁻¹e^{−2iw}).
/// ϑ₁, ϑ₂ carry 2q^{1/4} sin w, 2q^{1/4} cos w and q²ⁿ in place of q²ⁿ⁻¹;
/// ϑ₂, ϑ₃ flip the sign inside the w-dependent factors.
fn product(kind: ThetaKind, w: Complex64, ln_q: f64) -> ThetaParts {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let (ep, em) = ((2.0 * i * w).exp(), (-2.0 * i * w).exp());
    let sign = if matches!(kind, ThetaKind::Two | ThetaKind::Three) {
        1.0
    } else {
        -1.0
    };
    let (mut prod, mut dlog) = match kind {
        ThetaKind::One => (w.sin(), w.cos() / w.sin()),
        ThetaKind::Two => (w.cos(), -w.sin() / w.cos()),
        _ => (one, Complex64::new(0.0, 0.0)),
    };
    let mut scale = 0.0;
    let big = ep.norm().max(em.norm());
    let mut n = 1.0;
    loop {
        let even = 2.0 * n * ln_q;
        let power = if matches!(kind, ThetaKind::One | ThetaKind::Two) {
            even
        } else {
            even - ln_q
        };
        let a = power.exp();
        let fp = one + sign * a * ep;
        let fm = one + sign * a * em;
        prod *= fp * fm * (-even.exp_m1());
        dlog += 2.0 * i * sign * a * (ep / fp - em / fm);
        let m = prod.norm();
        if m < 1e-100 || m > 1e100 {
            scale += m.ln();
            prod /= m;
        }
        if a * big < SERIES_CUTOFF && even.exp() < SERIES_CUTOFF {
            break;
        }
        n += 1.0;
    }
    if matches!(kind, ThetaKind::One | ThetaKind::Two) {
        scale += LN_2 + 0.25 * ln_q;
    }
    ThetaParts {
        log_prefactor: Complex64::new(scale, 0.0),
        series: prod,
        dlog,
    }
}

/// Log-scaled running sum of c·e^{b}; the largest exponent seen is kept in
/// `scale` so that individually huge terms never form.
struct ScaledSum {
    scale: f64,
    sum: Complex64,
    dsum: Complex64,
}

impl ScaledSum {
    fn new() -> Self {
        Self {
            scale: f64::NEG_INFINITY,
            sum: Complex64::new(0.0, 0.0),
            dsum: Complex64::new(0.0, 0.0),
        }
    }

    /// Adds c·e^{b} to the sum and c·d·e^{b} to the derivative sum.
    fn add(&mut self, c: Complex64, d: Complex64, b: Complex64) {
        if b.re > self.scale {
            let f = (self.scale - b.re).exp();
            self.sum *= f;
            self.dsum *= f;
            self.scale = b.re;
        }
        let e = Complex64::new(0.0, b.im).exp() * (b.re - self.scale).exp();
        self.sum += c * e;
        self.dsum += c * d * e;
    }
}

/// Plain series summation; expects an already reduced argument.
///
/// Each trigonometric term is split into e^{±i·arg} and its weight folded
/// into the exponent, so arguments with large imaginary part (as produced
/// by the nome transformation) do not overflow.
fn direct(kind: ThetaKind, w: Complex64, ln_q: f64) -> ThetaParts {
    let i = Complex64::i();
    let v = w.im.abs();
    let mut acc = ScaledSum::new();
    let odd = matches!(kind, ThetaKind::One | ThetaKind::Two);
    if !odd {
        acc.add(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        );
    }
    let first = if odd { 0 } else { 1 };
    for n in first..MAX_TERMS {
        let nf = n as f64;
        let (ln_w, mult) = if odd {
            (
                if n == 0 { 0.0 } else { ln_q * nf * (nf + 1.0) },
                2.0 * nf + 1.0,
            )
        } else {
            (ln_q * nf * nf, 2.0 * nf)
        };
        let sign = if matches!(kind, ThetaKind::One | ThetaKind::Four) && n % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        let arg = w * mult;
        let dplus = i * mult;
        let (cp, cm) = match kind {
            // sin = (e^{ia} − e^{−ia})/2i
            ThetaKind::One => (
                Complex64::new(0.0, -0.5 * sign),
                Complex64::new(0.0, 0.5 * sign),
            ),
            // 2cos = e^{ia} + e^{−ia}; ϑ₂ carries cos without the 2
            ThetaKind::Two => (
                Complex64::new(0.5 * sign, 0.0),
                Complex64::new(0.5 * sign, 0.0),
            ),
            _ => (Complex64::new(sign, 0.0), Complex64::new(sign, 0.0)),
        };
        acc.add(cp, dplus, i * arg + ln_w);
        acc.add(cm, -dplus, -i * arg + ln_w);
        let bound = ln_w + mult * v;
        if n > 0 && past_peak(nf, v, ln_q) && (bound - acc.scale).exp() < SERIES_CUTOFF {
            break;
        }
    }
    let mut log_pref = if odd {
        if ln_q == f64::NEG_INFINITY {
            // q = 0: ϑ₁ = ϑ₂ = 0, keep the series so the log-derivative is defined
            f64::NEG_INFINITY
        } else {
            LN_2 + 0.25 * ln_q
        }
    } else {
        0.0
    };
    log_pref += acc.scale;
    ThetaParts {
        log_prefactor: Complex64::new(log_pref, 0.0),
        series: acc.sum,
        dlog: acc.dsum / acc.sum,
    }
}

// the term bound q^{n²} e^{2n|v|} is decreasing once n > |v| / ln(1/q)
fn past_peak(n: f64, v: f64, ln_q: f64) -> bool {
    ln_q == f64::NEG_INFINITY || n > v / -ln_q
}

/// ϑ_j(w; q) for j ∈ 1..=4 and q ∈ [0, 1 − 1e-12).
pub fn theta(j: usize, w: Complex64, q: f64) -> Result<Complex64> {
    let kind = ThetaKind::from_index(j)?;
    let ln_q = log_nome(q)?;
    let value = theta_parts(kind, w, ln_q)?.value();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite("theta value"));
    }
    Ok(value)
}

/// ϑ₄′(w; q) / ϑ₄(w; q).
pub fn theta_dlog4(w: Complex64, q: f64) -> Result<Complex64> {
    let ln_q = log_nome(q)?;
    let parts = theta_parts(ThetaKind::Four, w, ln_q)?;
    if parts.series.norm() == 0.0 || parts.ln_abs() < (1e-300_f64).ln() {
        return Err(Error::PoleAtZero);
    }
    Ok(parts.dlog)
}

pub(crate) fn log_nome(q: f64) -> Result<f64> {
    if !(0.0..1.0 - 1e-12).contains(&q) {
        return Err(Error::NomeOutOfRange(q));
    }
    Ok(if q == 0.0 { f64::NEG_INFINITY } else { q.ln() })
}

/// Real-argument ϑ₂′/ϑ₂ at real w for a small nome, summed directly.
pub(crate) fn dlog2_real(w: f64, ln_q: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let weight = if n == 0 {
            1.0
        } else {
            (ln_q * nf * (nf + 1.0)).exp()
        };
        let m = 2.0 * nf + 1.0;
        den += weight * (m * w).cos();
        num -= weight * m * (m * w).sin();
        if n > 0 && weight < SERIES_CUTOFF {
            break;
        }
    }
    num / den
}

/// Real-argument ϑ₁′/ϑ₁ at real w for a small nome, summed directly.
pub(crate) fn dlog1_real(w: f64, ln_q: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let weight = if n == 0 {
            1.0
        } else {
            (ln_q * nf * (nf + 1.0)).exp()
        };
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        let m = 2.0 * nf + 1.0;
        den += sign * weight * (m * w).sin();
        num += sign * weight * m * (m * w).cos();
        if n > 0 && weight < SERIES_CUTOFF {
            break;
        }
    }
    num / den
}

/// ϑ₄′(ix)/(i·ϑ₄(ix)) for real x with |x| ≤ ln(1/q)/2, summed directly
/// in real arithmetic.
pub(crate) fn dlog4_imag(x: f64, ln_q: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 1.0;
    for n in 1..MAX_TERMS {
        let nf = n as f64;
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        let weight = (ln_q * nf * nf).exp();
        den += 2.0 * sign * weight * (2.0 * nf * x).cosh();
        num -= 4.0 * nf * sign * weight * (2.0 * nf * x).sinh();
        if past_peak(nf, x.abs(), ln_q)
            && (ln_q * nf * nf + 2.0 * nf * x.abs()).exp() < SERIES_CUTOFF
        {
            break;
        }
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(theta(1, c(0.0, 0.0), 0.3).unwrap().norm(), 0.0);
        assert_eq!(theta(3, c(0.0, 0.0), 0.0).unwrap(), c(1.0, 0.0));
        assert_eq!(theta(2, c(0.4, 0.0), 0.0).unwrap(), c(0.0, 0.0));
        let t4 = theta(4, c(0.0, 0.0), 0.1).unwrap();
        // 1 − 2q + 2q⁴ − 2q⁹ + 2q¹⁶, further terms below 1e-17
        let partial = 1.0 - 2.0 * 0.1 + 2.0 * 1e-4 - 2.0 * 1e-9 + 2.0 * 1e-16;
        assert!((t4.re - partial).abs() < 4.0 * f64::EPSILON);
        assert!((t4.re - 0.800199998).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_nome_and_index() {
        assert!(matches!(
            theta(1, c(0.1, 0.0), 1.0),
            Err(Error::NomeOutOfRange(_))
        ));
        assert!(matches!(
            theta(1, c(0.1, 0.0), -0.1),
            Err(Error::NomeOutOfRange(_))
        ));
        assert!(theta(4, c(0.1, 0.0), 1.0 - 1e-13).is_err());
        assert!(matches!(
            theta(5, c(0.1, 0.0), 0.2),
            Err(Error::ArgOutOfRange(_))
        ));
    }

    #[test]
    fn dlog4_even_and_zero_at_origin() {
        assert!(theta_dlog4(c(0.0, 0.0), 0.2).unwrap().norm() < 1e-16);
        let w = c(0.3, 0.1);
        let s = theta_dlog4(w, 0.15).unwrap() + theta_dlog4(-w, 0.15).unwrap();
        assert!(s.norm() < 1e-14);
    }

    #[test]
    fn dlog4_pole_at_zero_of_theta4() {
        // ϑ₄ vanishes at πτ/2 = i·ln(1/q)/2
        let q: f64 = 0.2;
        let w = c(0.0, -q.ln() / 2.0);
        assert!(
            matches!(theta_dlog4(w, q), Err(Error::PoleAtZero))
                || theta_dlog4(w, q).unwrap().norm() > 1e10
        );
    }

    #[test]
    fn real_helpers_match_complex_path() {
        let ln_q = (0.07_f64).ln();
        let d2 = theta_parts(ThetaKind::Two, c(0.7, 0.0), ln_q).unwrap().dlog;
        assert!((d2.re - dlog2_real(0.7, ln_q)).abs() < 1e-14);
        let x = 0.6;
        let d4 = theta_parts(ThetaKind::Four, c(0.0, x), ln_q).unwrap().dlog;
        assert!((d4.im - dlog4_imag(x, ln_q)).abs() < 1e-13 * d4.norm().max(1.0));
    }

    #[test]
    fn large_imaginary_argument_is_reduced() {
        // ϑ₃(w + 2πτ) = q⁻⁴ e^{-4iw} ϑ₃(w)
        let q: f64 = 0.3;
        let w = c(0.2, 0.1);
        let shifted = w + c(0.0, -2.0 * q.ln());
        let lhs = theta(3, shifted, q).unwrap();
        let rhs = theta(3, w, q).unwrap() * q.powi(-4) * (c(0.0, -4.0) * w).exp();
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
    }
}
