//! Real-argument Jacobi elliptic functions by the descending AGM (Landen)
//! scheme.

use super::integrals::Modulus;

/// sn, cn, dn at real u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnCnDn {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Evaluates sn(u, k), cn(u, k), dn(u, k) for a modulus pair with k ∈ [0, 1].
pub fn sncndn(u: f64, m: Modulus) -> SnCnDn {
    if m.k == 0.0 {
        return SnCnDn {
            sn: u.sin(),
            cn: u.cos(),
            dn: 1.0,
        };
    }
    if m.kc == 0.0 {
        let sech = 1.0 / u.cosh();
        return SnCnDn {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
        };
    }

    let mut a = [0.0f64; 64];
    let mut c = [0.0f64; 64];
    a[0] = 1.0;
    c[0] = m.k;
    let mut b = m.kc;
    let mut n = 0;
    while n < 63 && c[n].abs() > f64::EPSILON * a[n] {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }

    let mut phi = (2f64).powi(n as i32) * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    // dn² = cn² + k′² sn² has no cancellation
    let dn = (cn * cn + m.kc2() * sn * sn).sqrt();
    SnCnDn { sn, cn, dn }
}
