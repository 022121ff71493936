//! Mahler-measure engines over arbitrary tori.
//!
//! `mahler_direct` averages `log|p|` on an angle grid in any number of
//! variables. `mahler_jensen` reduces a two-variable measure to a single
//! angle integral by factoring in the second variable and applying Jensen's
//! formula to the root moduli; away from the vanishing locus it converges
//! spectrally.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::YFactorization;
use crate::quad::{periodic_integral_1d, periodic_integral_nd, safe_log_abs, GridSpec, QuadResult};
use crate::roots::roots_complex;
use crate::{Complex64, LaurentPoly};

/// Integration torus `|x_k| = radii[k]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Torus {
    radii: Vec<f64>,
}

impl Torus {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidInput("torus needs at least one radius".into()));
        }
        for &r in &radii {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "torus radii must be positive and finite, got {r}"
                )));
            }
        }
        Ok(Torus { radii })
    }

    pub fn unit(dim: usize) -> Self {
        Torus {
            radii: vec![1.0; dim],
        }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn dim(&self) -> usize {
        self.radii.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Jensen,
    Series,
    ClosedForm,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodDetail {
    Quadrature(QuadResult),
    Terms { count: usize },
    None,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureResult {
    pub value: f64,
    pub est_error: f64,
    pub method: Method,
    pub detail: MethodDetail,
}

/// Roots of a one-variable slice at one sampled point, as used by the
/// Jensen reduction.
#[derive(Clone, Debug)]
pub struct RootSlice {
    pub at_angle: f64,
    pub roots: Vec<Complex64>,
    pub leading_abs: f64,
    /// True when the leading coefficient dropped below the trim threshold
    /// and the effective degree fell.
    pub degree_drop: bool,
}

/// `(1/2π) ∮ log|z - z0|` over `|z| = radius`: `log max(|z0|, radius)`.
pub fn jensen_circle(z0: Complex64, radius: f64) -> Result<f64> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    Ok(z0.norm().max(radius).ln())
}

/// Σ |c_e| Π r_k^{e_k}: the largest value |p| can reach on the torus, and
/// the scale of the evaluation roundoff.
fn torus_coeff_scale(p: &LaurentPoly, radii: &[f64]) -> f64 {
    p.terms()
        .map(|(e, c)| {
            let mut m = c.norm();
            for (k, &ek) in e.iter().enumerate() {
                m *= radii[k].powi(ek as i32);
            }
            m
        })
        .sum()
}

/// Torus average of `log|p|` on the full angle grid.
///
/// Moduli below `1e-14` of the coefficient scale are numerically
/// indistinguishable from zero, so they are treated as singular (refined and
/// if need be excluded) rather than fed to the logarithm.
pub fn mahler_direct(p: &LaurentPoly, t: &Torus, spec: &GridSpec) -> Result<MeasureResult> {
    if p.is_zero() {
        return Err(Error::InvalidInput(
            "Mahler measure of the zero polynomial".into(),
        ));
    }
    if p.n_vars() != t.dim() {
        return Err(Error::VarMismatch {
            left: p.n_vars(),
            right: t.dim(),
        });
    }
    if spec.dim() != t.dim() {
        return Err(Error::InvalidInput(format!(
            "grid has {} dims for a {}-torus",
            spec.dim(),
            t.dim()
        )));
    }
    let radii = t.radii();
    let threshold = spec
        .singular_threshold
        .max(1e-14 * torus_coeff_scale(p, radii));
    let integrand = |theta: &[f64]| -> f64 {
        let mut pts = [Complex64::new(0.0, 0.0); 8];
        for (k, (&r, &th)) in radii.iter().zip(theta.iter()).enumerate() {
            pts[k] = Complex64::from_polar(r, th);
        }
        match p.evaluate(&pts[..radii.len()]) {
            Ok(v) => safe_log_abs(v.norm(), threshold),
            Err(_) => f64::NAN,
        }
    };
    let quad = periodic_integral_nd(integrand, spec)?;
    Ok(MeasureResult {
        value: quad.value,
        est_error: quad.est_error,
        method: Method::Direct,
        detail: MethodDetail::Quadrature(quad),
    })
}

/// Trim near-vanishing leading coefficients; keeps the Jensen integrand
/// continuous through degree drops (a root escaping to infinity trades
/// exactly against the shrinking leading coefficient).
fn trim_leading(coeffs: &mut Vec<Complex64>, scale: f64) -> bool {
    let mut dropped = false;
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() <= 1e-13 * scale {
        coeffs.pop();
        dropped = true;
    }
    dropped
}

/// Root data of `p` in variable `var` at the point `x` on the other circle.
pub fn root_slice(
    fact: &YFactorization<Complex64>,
    x: Complex64,
    at_angle: f64,
    tol: f64,
) -> Result<RootSlice> {
    let mut coeffs = Vec::with_capacity(fact.degree + 1);
    for k in 0..=fact.degree {
        coeffs.push(fact.coeff_poly(k).evaluate(&[x])?);
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let degree_drop = trim_leading(&mut coeffs, scale);
    let leading_abs = coeffs.last().unwrap().norm();
    let roots = if coeffs.len() == 1 {
        Vec::new()
    } else {
        roots_complex(&coeffs, tol)?
    };
    Ok(RootSlice {
        at_angle,
        roots,
        leading_abs,
        degree_drop,
    })
}

/// Jensen-reduced measure of a two-variable polynomial over `T^2_{a,b}`:
/// factor in the second variable and integrate
/// `log|Q_F(x)| + Σ_j log max(|y_j(x)|, b)` over `|x| = a`.
pub fn mahler_jensen(p: &LaurentPoly, t: &Torus, spec: &GridSpec) -> Result<MeasureResult> {
    if p.n_vars() != 2 || t.dim() != 2 {
        return Err(Error::VarMismatch {
            left: p.n_vars(),
            right: t.dim(),
        });
    }
    if spec.dim() != 1 {
        return Err(Error::InvalidInput(
            "the Jensen engine integrates over one angle; pass a 1-D grid".into(),
        ));
    }
    let fact = p.factor_in_variable(1)?;
    let (a, b) = (t.radii()[0], t.radii()[1]);
    let log_b = b.ln();
    let threshold = spec.singular_threshold;

    let integrand = |theta: f64| -> f64 {
        let x = Complex64::from_polar(a, theta);
        let mut coeffs = Vec::with_capacity(fact.degree + 1);
        for k in 0..=fact.degree {
            match fact.coeff_poly(k).evaluate(&[x]) {
                Ok(v) => coeffs.push(v),
                Err(_) => return f64::NAN,
            }
        }
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale < threshold {
            return f64::NEG_INFINITY;
        }
        trim_leading(&mut coeffs, scale);
        let lead = coeffs.last().unwrap().norm();
        let mut acc = safe_log_abs(lead, threshold);
        if coeffs.len() > 1 {
            match roots_complex(&coeffs, 1e-12) {
                Ok(roots) => {
                    for r in roots {
                        acc += r.norm().max(b).ln();
                    }
                }
                Err(_) => return f64::NAN,
            }
        }
        acc
    };

    let quad = periodic_integral_1d(integrand, spec)?;
    Ok(MeasureResult {
        value: quad.value - fact.pole_order as f64 * log_b,
        est_error: quad.est_error,
        method: Method::Jensen,
        detail: MethodDetail::Quadrature(quad),
    })
}

/// Exact one-variable Mahler measure over `|x| = radius` via Jensen's
/// formula on the roots: `-v log r + log|c_top| + Σ log max(|root|, r)`.
pub fn mahler_1var_exact(p: &LaurentPoly, radius: f64) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::InvalidInput(
            "Mahler measure of the zero polynomial".into(),
        ));
    }
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    if p.n_vars() == 0 {
        return Ok(p.constant_term().norm().ln());
    }
    let (coeffs, pole) = p.cleared_coeffs_1var()?;
    let mut value = -(pole as f64) * radius.ln();
    if coeffs.len() == 1 {
        return Ok(value + coeffs[0].norm().ln());
    }
    value += coeffs.last().unwrap().norm().ln();
    for r in roots_complex(&coeffs, 1e-13)? {
        value += r.norm().max(radius).ln();
    }
    Ok(value)
}
