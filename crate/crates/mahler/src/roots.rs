//! Simultaneous complex root finding by the Aberth–Ehrlich iteration.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::Complex64;

const MAX_SWEEPS: usize = 200;
const STEP_TOL: f64 = 1e-14;

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::zero();
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Σ |c_k| |z|^k, the natural backward-error scale at z.
fn eval_scale(coeffs: &[Complex64], z_abs: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * z_abs + c.norm();
    }
    acc
}

/// All complex roots of `Σ coeffs[k] z^k`, counted with multiplicity.
///
/// Exact zero coefficients at both ends are trimmed first (zero roots are
/// emitted directly). The remaining roots come from the Aberth–Ehrlich
/// iteration started on a staggered circle, polished with one Newton step,
/// and validated against `|p(root)| <= tol * scale`. Output order is
/// deterministic: by argument, then modulus.
pub fn roots_complex(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1].is_zero() {
        hi -= 1;
    }
    if hi <= 1 {
        return Err(Error::InvalidInput(
            "root solver needs degree >= 1 after trimming".into(),
        ));
    }
    let mut lo = 0;
    while coeffs[lo].is_zero() {
        lo += 1;
    }
    let mut roots = vec![Complex64::zero(); lo];
    let work = &coeffs[lo..hi];
    let d = work.len() - 1;

    if d == 1 {
        roots.push(-work[0] / work[1]);
    } else {
        roots.extend(aberth(work, tol)?);
    }

    roots.sort_unstable_by(|a, b| {
        let ka = (a.arg(), a.norm());
        let kb = (b.arg(), b.norm());
        ka.partial_cmp(&kb).unwrap()
    });
    Ok(roots)
}

fn aberth(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    let deriv: Vec<Complex64> = (1..=d)
        .map(|k| coeffs[k] * Complex64::new(k as f64, 0.0))
        .collect();

    // staggered circle of radius (|c_0|/|c_d|)^(1/d)
    let r0 = (coeffs[0].norm() / coeffs[d].norm()).powf(1.0 / d as f64);
    let r0 = if r0.is_finite() && r0 > 0.0 { r0 } else { 1.0 };
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / d as f64
                + std::f64::consts::FRAC_PI_2 / d as f64;
            Complex64::from_polar(r0, angle)
        })
        .collect();

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut max_step = 0.0f64;
        for k in 0..d {
            let p = horner(coeffs, z[k]);
            if p.is_zero() {
                continue;
            }
            let dp = horner(&deriv, z[k]);
            let newton = if dp.is_zero() {
                // stationary point: nudge off it deterministically
                z[k] *= Complex64::new(1.0 + 1e-8, 1e-8);
                max_step = f64::INFINITY;
                continue;
            } else {
                p / dp
            };
            let mut repulsion = Complex64::zero();
            for j in 0..d {
                if j != k {
                    let diff = z[k] - z[j];
                    if !diff.is_zero() {
                        repulsion += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.is_zero() { newton } else { newton / denom };
            z[k] -= step;
            if !z[k].is_finite() {
                return Err(Error::NumericalFailure {
                    sweeps,
                    max_residual: f64::INFINITY,
                    residuals: vec![f64::INFINITY; d],
                });
            }
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < STEP_TOL {
            converged = true;
            break;
        }
    }

    // one Newton polish per root
    for zk in z.iter_mut() {
        let dp = horner(&deriv, *zk);
        if !dp.is_zero() {
            let corrected = *zk - horner(coeffs, *zk) / dp;
            if corrected.is_finite() {
                *zk = corrected;
            }
        }
    }

    let residuals: Vec<f64> = z
        .iter()
        .map(|&zk| horner(coeffs, zk).norm() / eval_scale(coeffs, zk.norm()).max(f64::MIN_POSITIVE))
        .collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    let accept = tol.max(1e4 * f64::EPSILON);
    if !converged || max_residual > accept {
        return Err(Error::NumericalFailure {
            sweeps,
            max_residual,
            residuals,
        });
    }
    Ok(z)
}
