//! Complete and incomplete Legendre integrals of the first, second and third
//! kind, with the third kind in the convention
//!
//! ```text
//! Π(x, ν, k) = ∫₀ˣ dt / ((1 + ν t²) √((1 − t²)(1 − k² t²)))
//! ```
//!
//! The complete first kind uses the AGM; everything else goes through the
//! Carlson forms, which keep full relative accuracy as k → 1 and x → 1
//! provided the caller hands in k′ and 1 − x² directly.

#![allow(non_snake_case)]

use std::f64::consts::FRAC_PI_2;

use super::carlson::{rd, rf, rj};
use crate::error::{Error, Result};

/// A modulus together with its complement, k² + k′² = 1.
///
/// Near k = 1 the complement cannot be recovered from k, so code that cares
/// builds the pair from whichever side is known accurately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    pub k: f64,
    pub kc: f64,
}

impl Modulus {
    pub fn from_k(k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::ModulusOutOfRange(k));
        }
        Ok(Self {
            k,
            kc: ((1.0 - k) * (1.0 + k)).sqrt(),
        })
    }

    /// Builds the pair from k′ ∈ (0, 1]; k′ = 0 is allowed only when the
    /// caller never asks for K (k = 1 exactly).
    pub fn from_complement(kc: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&kc) {
            return Err(Error::ModulusOutOfRange(kc));
        }
        Ok(Self {
            k: ((1.0 - kc) * (1.0 + kc)).sqrt(),
            kc,
        })
    }

    pub(crate) fn from_pair(k: f64, kc: f64) -> Self {
        Self { k, kc }
    }

    pub fn k2(&self) -> f64 {
        self.k * self.k
    }

    pub fn kc2(&self) -> f64 {
        self.kc * self.kc
    }

    pub fn complement(&self) -> Self {
        Self {
            k: self.kc,
            kc: self.k,
        }
    }

    /// K(k) = π / (2·AGM(1, k′)).
    pub fn complete_k(&self) -> Result<f64> {
        if self.kc <= 0.0 {
            return Err(Error::ModulusOutOfRange(self.k));
        }
        Ok(FRAC_PI_2 / agm(1.0, self.kc))
    }

    /// E(k).
    pub fn complete_e(&self) -> Result<f64> {
        if self.kc == 0.0 {
            return Ok(1.0);
        }
        Ok(self.kc2() * self.complete_k()? + self.e_minus_kc2_k_tail())
    }

    /// K − E, free of cancellation.
    pub fn k_minus_e(&self) -> Result<f64> {
        let kc2 = self.kc2();
        if kc2 < 1e-30 {
            return Ok(self.complete_k()? - 1.0);
        }
        Ok(self.k2() * rd(0.0, kc2, 1.0) / 3.0)
    }

    /// E − k′²K, free of cancellation.
    pub fn e_minus_kc2_k(&self) -> Result<f64> {
        if self.kc <= 0.0 {
            return Err(Error::ModulusOutOfRange(self.k));
        }
        Ok(self.e_minus_kc2_k_tail())
    }

    /// (K − E)/k² and (E − k′²K)/k², finite as k → 0.
    pub(crate) fn sc_parts_over_k2(&self, kk: f64) -> (f64, f64) {
        let kc2 = self.kc2();
        if kc2 < 1e-30 {
            return ((kk - 1.0) / self.k2(), 1.0 / self.k2());
        }
        (rd(0.0, kc2, 1.0) / 3.0, kc2 * rd(0.0, 1.0, kc2) / 3.0)
    }

    fn e_minus_kc2_k_tail(&self) -> f64 {
        let kc2 = self.kc2();
        if kc2 < 1e-30 {
            return 1.0;
        }
        self.k2() * kc2 * rd(0.0, 1.0, kc2) / 3.0
    }

    /// F(x, k) given x and 1 − x².
    pub(crate) fn f_with(&self, x: f64, omx2: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let delta2 = omx2 + self.kc2() * x * x;
        x * rf(omx2, delta2, 1.0)
    }

    /// E(x, k) given x and 1 − x².
    pub(crate) fn e_with(&self, x: f64, omx2: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let delta2 = omx2 + self.kc2() * x * x;
        x * rf(omx2, delta2, 1.0) - self.k2() * x * x * x * rd(omx2, delta2, 1.0) / 3.0
    }

    /// Π(x, ν, k) − F(x, k) given x and 1 − x²; needs 1 + νx² > 0.
    pub(crate) fn pi_minus_f_with(&self, x: f64, omx2: f64, nu: f64) -> f64 {
        if x == 0.0 || nu == 0.0 {
            return 0.0;
        }
        let delta2 = omx2 + self.kc2() * x * x;
        -nu * x * x * x * rj(omx2, delta2, 1.0, 1.0 + nu * x * x) / 3.0
    }
}

/// Arithmetic–geometric mean.
pub(crate) fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

fn check_modulus(k: f64) -> Result<Modulus> {
    if !k.is_finite() {
        return Err(Error::NonFinite("modulus"));
    }
    Modulus::from_k(k)
}

fn check_upper(xarg: f64, m: &Modulus) -> Result<()> {
    if !(0.0..=1.0).contains(&xarg) {
        return Err(Error::ArgOutOfRange(format!(
            "upper limit {xarg} outside [0, 1]"
        )));
    }
    if m.k * xarg >= 1.0 {
        return Err(Error::ArgOutOfRange(format!(
            "k·x = {} not below 1",
            m.k * xarg
        )));
    }
    Ok(())
}

/// Complete integral of the first kind K(k), k ∈ [0, 1).
pub fn complete_K(k: f64) -> Result<f64> {
    check_modulus(k)?.complete_k()
}

/// Complete integral of the second kind E(k), k ∈ [0, 1].
pub fn complete_E(k: f64) -> Result<f64> {
    if k == 1.0 {
        return Ok(1.0);
    }
    check_modulus(k)?.complete_e()
}

/// F(x, k) = ∫₀ˣ dt / √((1 − t²)(1 − k²t²)).
pub fn incomplete_F(xarg: f64, k: f64) -> Result<f64> {
    let m = check_modulus(k)?;
    check_upper(xarg, &m)?;
    if xarg == 1.0 {
        return m.complete_k();
    }
    if k == 0.0 {
        return Ok(xarg.asin());
    }
    Ok(m.f_with(xarg, (1.0 - xarg) * (1.0 + xarg)))
}

/// E(x, k) = ∫₀ˣ √(1 − k²t²) / √(1 − t²) dt.
pub fn incomplete_E(xarg: f64, k: f64) -> Result<f64> {
    let m = check_modulus(k)?;
    check_upper(xarg, &m)?;
    if xarg == 1.0 {
        return m.complete_e();
    }
    if k == 0.0 {
        return Ok(xarg.asin());
    }
    Ok(m.e_with(xarg, (1.0 - xarg) * (1.0 + xarg)))
}

/// Π(x, ν, k) = ∫₀ˣ dt / ((1 + νt²) √((1 − t²)(1 − k²t²))).
pub fn incomplete_Pi(xarg: f64, nu: f64, k: f64) -> Result<f64> {
    let m = check_modulus(k)?;
    check_upper(xarg, &m)?;
    if !nu.is_finite() {
        return Err(Error::NonFinite("characteristic"));
    }
    if 1.0 + nu * xarg * xarg <= 0.0 {
        return Err(Error::CharacteristicPole(nu));
    }
    if xarg == 0.0 {
        return Ok(0.0);
    }
    let omx2 = (1.0 - xarg) * (1.0 + xarg);
    let f = if xarg == 1.0 {
        m.complete_k()?
    } else {
        m.f_with(xarg, omx2)
    };
    Ok(f + m.pi_minus_f_with(xarg, omx2, nu))
}
