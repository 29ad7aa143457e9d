//! Carlson symmetric integrals R_F, R_D, R_J, R_C by duplication.
//!
//! Used internally for the incomplete Legendre integrals: in the regime of
//! interest (k → 1, upper limit → 1) they stay accurate where direct
//! quadrature of the Legendre forms would have to resolve a near-singular
//! integrand. Arguments follow B. C. Carlson, Numer. Algorithms 10 (1995).

const TOL: f64 = 1e-16;
const MAX_DUPLICATIONS: usize = 400;

/// R_F(x, y, z), at most one argument zero.
pub(crate) fn rf(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0);
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let q = (3.0 * TOL).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    let mut scale = 1.0;
    for _ in 0..MAX_DUPLICATIONS {
        if q * scale < a.abs() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xx = (a0 - x0) * scale / a;
    let yy = (a0 - y0) * scale / a;
    let zz = -(xx + yy);
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// R_C(x, y) for x ≥ 0, y > 0.
pub(crate) fn rc(x: f64, y: f64) -> f64 {
    debug_assert!(x >= 0.0 && y > 0.0);
    let y0 = y;
    let (mut x, mut y) = (x, y);
    let a0 = (x + 2.0 * y) / 3.0;
    let q = (3.0 * TOL).powf(-1.0 / 8.0) * (a0 - x).abs();
    let mut a = a0;
    let mut scale = 1.0;
    for _ in 0..MAX_DUPLICATIONS {
        if q * scale < a.abs() {
            break;
        }
        let lambda = 2.0 * x.sqrt() * y.sqrt() + y;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let s = (y0 - a0) * scale / a;
    let poly = 1.0
        + s * s
            * (3.0 / 10.0
                + s * (1.0 / 7.0
                    + s * (3.0 / 8.0 + s * (9.0 / 22.0 + s * (159.0 / 208.0 + s * 9.0 / 8.0)))));
    poly / a.sqrt()
}

/// R_J(x, y, z, p) for x, y, z ≥ 0 (at most one zero) and p > 0.
pub(crate) fn rj(x: f64, y: f64, z: f64, p: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0 && p > 0.0);
    let (x0, y0, z0) = (x, y, z);
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let a0 = (x + y + z + 2.0 * p) / 5.0;
    let delta = (p - x) * (p - y) * (p - z);
    let q = (0.25 * TOL).powf(-1.0 / 6.0)
        * (a0 - x)
            .abs()
            .max((a0 - y).abs())
            .max((a0 - z).abs())
            .max((a0 - p).abs());
    let mut a = a0;
    let mut scale = 1.0;
    let mut sum = 0.0;
    for m in 0..MAX_DUPLICATIONS {
        if q * scale < a.abs() {
            break;
        }
        let (sx, sy, sz, sp) = (x.sqrt(), y.sqrt(), z.sqrt(), p.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        let d = (sp + sx) * (sp + sy) * (sp + sz);
        let e = delta * 4f64.powi(-3 * m as i32) / (d * d);
        sum += scale * rc(1.0, 1.0 + e) / d;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        p = 0.25 * (p + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xx = (a0 - x0) * scale / a;
    let yy = (a0 - y0) * scale / a;
    let zz = (a0 - z0) * scale / a;
    let pp = -(xx + yy + zz) / 2.0;
    let e2 = xx * yy + xx * zz + yy * zz - 3.0 * pp * pp;
    let e3 = xx * yy * zz + 2.0 * e2 * pp + 4.0 * pp * pp * pp;
    let e4 = (2.0 * xx * yy * zz + e2 * pp + 3.0 * pp * pp * pp) * pp;
    let e5 = xx * yy * zz * pp * pp;
    let poly = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    scale * poly / (a * a.sqrt()) + 6.0 * sum
}

/// R_D(x, y, z) = R_J(x, y, z, z).
pub(crate) fn rd(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z > 0.0);
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let q = (0.25 * TOL).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    let mut scale = 1.0;
    let mut sum = 0.0;
    for _ in 0..MAX_DUPLICATIONS {
        if q * scale < a.abs() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        sum += scale / (sz * (z + lambda));
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xx = (a0 - x0) * scale / a;
    let yy = (a0 - y0) * scale / a;
    let zz = -(xx + yy) / 3.0;
    let e2 = xx * yy - 6.0 * zz * zz;
    let e3 = (3.0 * xx * yy - 8.0 * zz * zz) * zz;
    let e4 = 3.0 * (xx * yy - zz * zz) * zz * zz;
    let e5 = xx * yy * zz * zz * zz;
    let poly = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    scale * poly / (a * a.sqrt()) + 3.0 * sum
}
