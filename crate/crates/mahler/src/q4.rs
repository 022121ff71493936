//! Closed-form measure of `x + 1/x + y + 1/y + 4` over any torus.
//!
//! Under `x = w/z`, `y = wz` the polynomial splits into two linear factors,
//! and the measure of each factor over `|w| = c = √(ab)`, `|z| = d = √(b/a)`
//! reduces to dilogarithm boundary terms plus an arctangent integral along
//! the arc where the root modulus `|z(w)|` exceeds `d`. The arc is governed
//! by the threshold `A = ((1-d²)/(1+d²))·((1+c²)/(2c))`: outside `|A| < 1`
//! the arc is empty or full and the measure collapses to plain logarithms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::bloch_wigner;
use crate::Complex64;

use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Q4Params {
    pub a: f64,
    pub b: f64,
    /// √(ab)
    pub c: f64,
    /// √(b/a)
    pub d: f64,
    /// The arc threshold ((1-d²)/(1+d²))·((1+c²)/(2c)).
    #[serde(rename = "A")]
    pub threshold: f64,
    /// arcsin of the threshold, present only when |A| < 1.
    pub mu: Option<f64>,
}

fn check_radii(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput(
            "torus radii must be positive and finite".into(),
        ));
    }
    Ok(())
}

fn threshold_of(c: f64, d: f64) -> f64 {
    (1.0 - d * d) / (1.0 + d * d) * (1.0 + c * c) / (2.0 * c)
}

pub fn q4_params(a: f64, b: f64) -> Result<Q4Params> {
    check_radii(a, b)?;
    let c = (a * b).sqrt();
    let d = (b / a).sqrt();
    let threshold = threshold_of(c, d);
    let mu = (threshold.abs() < 1.0).then(|| threshold.asin());
    Ok(Q4Params {
        a,
        b,
        c,
        d,
        threshold,
        mu,
    })
}

/// Dilogarithm pair `D(ic e^{-iμ}) + D(ic e^{iμ})`.
fn dilog_pair(c: f64, mu: f64) -> f64 {
    bloch_wigner(Complex64::from_polar(c, FRAC_PI_2 - mu))
        + bloch_wigner(Complex64::from_polar(c, FRAC_PI_2 + mu))
}

/// `m_{a,b}(x + 1/x + y + 1/y + 4)` in closed form.
pub fn q4_closed(a: f64, b: f64) -> Result<f64> {
    let p = q4_params(a, b)?;
    Ok(match p.mu {
        None => p.c.ln().abs() + p.d.ln().abs(),
        Some(mu) => {
            let arctan = if p.c == 1.0 {
                0.0
            } else {
                ((p.c - 1.0 / p.c) / (2.0 * mu.cos())).atan()
            };
            (2.0 / PI) * (dilog_pair(p.c, mu) - mu * p.d.ln() + p.c.ln() * arctan)
        }
    })
}

/// `m_{c,d}(1 + iw + iz + wz)` by the three-case arc analysis, including the
/// `max(log c, 0)` contribution of the `w + i` factor. Satisfies
/// `2·linear_factor_measure(c, d) - log(cd) = q4_closed(c/d, cd)`.
pub fn linear_factor_measure(c: f64, d: f64) -> Result<f64> {
    check_radii(c, d)?;
    let threshold = threshold_of(c, d);
    let base = c.ln().max(0.0);
    Ok(if threshold <= -1.0 {
        base + d.ln()
    } else if threshold >= 1.0 {
        base
    } else {
        let mu = threshold.asin();
        let arctan = if c == 1.0 {
            0.0
        } else {
            (2.0 * mu.cos() / (c - 1.0 / c)).atan()
        };
        base + (dilog_pair(c, mu) - c.ln() * arctan + (FRAC_PI_2 - mu) * d.ln()) / PI
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcCase {
    /// `|z(w)| <= d` on the whole circle (threshold <= -1).
    AllBelow,
    /// `|z(w)| > d` on the whole circle (threshold >= 1).
    AllAbove,
    /// The circle splits; the `> d` arc runs from `-π - μ` to `μ`.
    Split,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ArcSplit {
    pub case: ArcCase,
    /// Angles bounding the `|z(w)| > d` arc when split; both sines equal
    /// the threshold.
    pub endpoints: Option<(f64, f64)>,
}

pub fn arc_split(c: f64, d: f64) -> Result<ArcSplit> {
    check_radii(c, d)?;
    let t = threshold_of(c, d);
    Ok(if t <= -1.0 {
        ArcSplit {
            case: ArcCase::AllBelow,
            endpoints: None,
        }
    } else if t >= 1.0 {
        ArcSplit {
            case: ArcCase::AllAbove,
            endpoints: None,
        }
    } else {
        let mu = t.asin();
        ArcSplit {
            case: ArcCase::Split,
            endpoints: Some((-PI - mu, mu)),
        }
    })
}

/// `∫ d arg((1+iw)/(1-iw))` along `w = c e^{iθ}` from `θ = alpha` to `beta`:
/// `arctan(2cos α/(c - 1/c)) - arctan(2cos β/(c - 1/c))`. Zero at `c = 1` by
/// continuity.
pub fn arg_integral_closed(c: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidInput("arc radius must be positive".into()));
    }
    if c == 1.0 {
        return Ok(0.0);
    }
    let s = c - 1.0 / c;
    Ok((2.0 * alpha.cos() / s).atan() - (2.0 * beta.cos() / s).atan())
}
