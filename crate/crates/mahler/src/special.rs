//! Dilogarithm kernels: the principal-branch `Li_2` and the Bloch–Wigner
//! function `D(z) = Im(Li_2(z)) + arg(1-z) log|z|`.
//!
//! `D` vanishes on the real line, is antisymmetric under conjugation, and
//! extends continuously with `D(0) = D(1) = D(∞) = 0`. Arguments are taken
//! in `[-π, π)` throughout.

use std::f64::consts::PI;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::Complex64;

const PI2_6: f64 = PI * PI / 6.0;

/// `arg(z)` in `[-π, π)`.
pub fn arg_pm(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a >= PI {
        -PI
    } else {
        a
    }
}

/// Principal logarithm with `arg ∈ [-π, π)`.
pub fn ln_pm(z: Complex64) -> Complex64 {
    Complex64::new(z.norm().ln(), arg_pm(z))
}

/// Value of the Bloch–Wigner function together with an error estimate.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DilogValue {
    pub value: f64,
    pub est_error: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Li2Value {
    pub value: Complex64,
    pub est_error: f64,
}

// B_{2n} / (2n+1)! for the series Li_2 = Σ B_k u^{k+1}/(k+1)!, u = -log(1-z).
const U_SERIES: [f64; 17] = [
    1.0 / 36.0,
    -1.0 / 3600.0,
    1.0 / 211_680.0,
    -1.0 / 10_886_400.0,
    5.0 / 2_634_508_800.0,
    -691.0 / (2730.0 * 6_227_020_800.0),
    7.0 / (6.0 * 1_307_674_368_000.0),
    -3617.0 / (510.0 * 3.55687428096e14),
    43867.0 / (798.0 * 1.21645100408832e17),
    -174611.0 / (330.0 * 5.109094217170944e19),
    854513.0 / (138.0 * 2.585201673888498e22),
    -236364091.0 / (2730.0 * 1.5511210043330986e25),
    8553103.0 / (6.0 * 1.0888869450418352e28),
    -23749461029.0 / (870.0 * 8.841761993739702e30),
    8615841276005.0 / (14322.0 * 8.222838654177922e33),
    -7709321041217.0 / (510.0 * 8.683317618811886e36),
    2577687858367.0 / (6.0 * 1.0333147966386145e40),
];

/// Direct power series, valid for |z| <= 1/2.
fn li2_power_series(z: Complex64) -> (Complex64, f64) {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..=80u32 {
        zk *= z;
        let term = zk / (k * k) as f64;
        sum += term;
        last = term.norm();
        if last < 1e-18 * (1.0 + sum.norm()) {
            break;
        }
    }
    (sum, last + 4.0 * f64::EPSILON * sum.norm())
}

/// Bernoulli series in u = -log(1-z); effective in the unit-disc half-plane
/// Re(z) <= 1/2 where neither the power series nor the Möbius maps help.
fn li2_u_series(z: Complex64) -> (Complex64, f64) {
    let u = -ln_pm(Complex64::new(1.0, 0.0) - z);
    let u2 = u * u;
    let mut sum = u - u2 * 0.25;
    let mut upow = u; // u^{2n+1} as the loop advances
    let mut last = f64::INFINITY;
    for c in U_SERIES {
        upow *= u2;
        let term = upow * c;
        sum += term;
        last = term.norm();
        if last < 1e-18 * (1.0 + sum.norm()) {
            break;
        }
    }
    (sum, last + 6.0 * f64::EPSILON * sum.norm())
}

pub fn li2_with_error(z: Complex64) -> Li2Value {
    if z.is_zero() {
        return Li2Value {
            value: Complex64::new(0.0, 0.0),
            est_error: 0.0,
        };
    }
    if z == Complex64::new(1.0, 0.0) {
        return Li2Value {
            value: Complex64::new(PI2_6, 0.0),
            est_error: f64::EPSILON * PI2_6,
        };
    }
    let one = Complex64::new(1.0, 0.0);
    let mut w = z;
    let mut sign = 1.0;
    let mut offset = Complex64::new(0.0, 0.0);
    if w.norm_sqr() > 1.0 {
        // Li_2(z) = -Li_2(1/z) - π²/6 - log²(-z)/2
        let l = ln_pm(-w);
        offset += -Complex64::new(PI2_6, 0.0) - l * l * 0.5;
        sign = -1.0;
        w = one / w;
    }
    if w.re > 0.5 {
        // Li_2(w) = π²/6 - log(w)log(1-w) - Li_2(1-w)
        offset += (Complex64::new(PI2_6, 0.0) - ln_pm(w) * ln_pm(one - w)) * sign;
        sign = -sign;
        w = one - w;
    }
    let (val, err) = if w.norm_sqr() <= 0.25 {
        li2_power_series(w)
    } else {
        li2_u_series(w)
    };
    Li2Value {
        value: offset + val * sign,
        est_error: err + 8.0 * f64::EPSILON * (offset.norm() + val.norm()),
    }
}

/// Principal-branch dilogarithm on all of ℂ.
pub fn li2(z: Complex64) -> Complex64 {
    li2_with_error(z).value
}

pub fn bloch_wigner_with_error(z: Complex64) -> DilogValue {
    if !z.is_finite() {
        return DilogValue {
            value: 0.0,
            est_error: 0.0,
        };
    }
    if z.im == 0.0 {
        // D vanishes identically on the real line
        return DilogValue {
            value: 0.0,
            est_error: 0.0,
        };
    }
    let n2 = z.norm_sqr();
    if n2 > 1.0 {
        // D(1/z) = -D(z); the reciprocal lands inside the unit disc where
        // the log-modulus term stays small.
        let inner = bloch_wigner_with_error(Complex64::new(1.0, 0.0) / z);
        return DilogValue {
            value: -inner.value,
            est_error: inner.est_error,
        };
    }
    let li = li2_with_error(z);
    let log_abs = 0.5 * n2.ln();
    let arg1z = arg_pm(Complex64::new(1.0 - z.re, -z.im));
    let value = li.value.im + arg1z * log_abs;
    DilogValue {
        value,
        est_error: li.est_error + 4.0 * f64::EPSILON * (arg1z * log_abs).abs(),
    }
}

/// The Bloch–Wigner dilogarithm `D(z)`.
pub fn bloch_wigner(z: Complex64) -> f64 {
    bloch_wigner_with_error(z).value
}
