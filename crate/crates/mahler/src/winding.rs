//! Argument-principle counters: winding indices of one-variable slices and
//! the root-location census behind them.
//!
//! For a Laurent polynomial `p` nonvanishing on `|z| = R`, the contour
//! average of `z p'(z)/p(z)` is the number of zeros inside the circle minus
//! the pole order at the origin. These integers are the correction
//! coefficients relating measures over deformed tori to the standard one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::roots_complex;
use crate::{Complex64, LaurentPoly};

pub const DEFAULT_CONTOUR_NODES: usize = 4096;

/// Winding index with its raw contour value and rounding residual.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IndexCount {
    pub nu: i64,
    pub raw: Complex64,
    pub residual: f64,
}

/// Which variable of a two-variable polynomial is probed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarRole {
    X,
    Y,
}

/// Zeros-inside-minus-pole-order of a one-variable Laurent polynomial,
/// computed as the trapezoidal contour integral of `p'/p` over `|z| = radius`.
pub fn index_in_disc(p: &LaurentPoly, radius: f64, n_nodes: usize) -> Result<IndexCount> {
    if p.n_vars() != 1 {
        return Err(Error::VarMismatch {
            left: p.n_vars(),
            right: 1,
        });
    }
    if !radius.is_finite() || radius <= 0.0 || n_nodes < 8 {
        return Err(Error::InvalidInput(
            "index_in_disc needs a positive radius and at least 8 nodes".into(),
        ));
    }
    if p.is_zero() {
        return Err(Error::ZeroOnContour {
            min_abs: 0.0,
            scale: 0.0,
        });
    }
    let dp = p.derivative(0)?;
    let nodes: Vec<(Complex64, Complex64)> = (0..n_nodes)
        .map(|j| {
            let z =
                Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / n_nodes as f64);
            (z, p.evaluate(&[z]).unwrap())
        })
        .collect();
    let min_abs = nodes.iter().map(|(_, v)| v.norm()).fold(f64::INFINITY, f64::min);
    let max_abs = nodes.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    if min_abs < 1e-8 * max_abs || max_abs == 0.0 {
        return Err(Error::ZeroOnContour {
            min_abs,
            scale: max_abs,
        });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for &(z, pv) in &nodes {
        let term = z * dp.evaluate(&[z])? / pv;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let raw = sum / n_nodes as f64;
    let nu = raw.re.round();
    let residual = (raw - Complex64::new(nu, 0.0)).norm();
    if residual >= 0.1 {
        return Err(Error::NonIntegral {
            raw_re: raw.re,
            raw_im: raw.im,
            residual,
        });
    }
    Ok(IndexCount {
        nu: nu as i64,
        raw,
        residual,
    })
}

/// The index pair (ν¹, ν²): ν¹ counts the slice at `y = b` inside `|x| < a`,
/// ν² the slice at `x = a` inside `|y| < b`.
pub fn nu_pair(p: &LaurentPoly, a: f64, b: f64) -> Result<(IndexCount, IndexCount)> {
    if p.n_vars() != 2 {
        return Err(Error::VarMismatch {
            left: p.n_vars(),
            right: 2,
        });
    }
    let slice_y = p.slice(1, &Complex64::new(b, 0.0))?;
    let nu1 = index_in_disc(&slice_y, a, DEFAULT_CONTOUR_NODES)?;
    let slice_x = p.slice(0, &Complex64::new(a, 0.0))?;
    let nu2 = index_in_disc(&slice_x, b, DEFAULT_CONTOUR_NODES)?;
    Ok((nu1, nu2))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RhoReport {
    /// Inside-count at each probe; `None` marks a probe where the root
    /// solver failed (flagged and excluded from the constancy check).
    pub counts: Vec<Option<usize>>,
    pub constant: bool,
}

/// Probe the inside-root count of one-variable slices at equally spaced
/// points of the other circle. For a polynomial nonvanishing on the torus
/// the count is the same at every probe.
pub fn rho_constancy(
    p: &LaurentPoly,
    a: f64,
    b: f64,
    probes: usize,
    role: VarRole,
) -> Result<RhoReport> {
    if p.n_vars() != 2 {
        return Err(Error::VarMismatch {
            left: p.n_vars(),
            right: 2,
        });
    }
    if probes == 0 {
        return Err(Error::InvalidInput("at least one probe required".into()));
    }
    // role Y: slices in y probed along |x| = a, counted inside |y| < b
    let (probe_var, probe_radius, count_radius) = match role {
        VarRole::Y => (0, a, b),
        VarRole::X => (1, b, a),
    };
    let mut counts = Vec::with_capacity(probes);
    for k in 0..probes {
        let w = Complex64::from_polar(
            probe_radius,
            std::f64::consts::TAU * k as f64 / probes as f64,
        );
        let slice = p.slice(probe_var, &w)?;
        let count = slice
            .cleared_coeffs_1var()
            .ok()
            .filter(|(coeffs, _)| coeffs.len() > 1)
            .and_then(|(coeffs, _)| roots_complex(&coeffs, 1e-10).ok())
            .map(|roots| roots.iter().filter(|r| r.norm() < count_radius).count());
        counts.push(count);
    }
    let mut seen = counts.iter().flatten();
    let constant = match seen.next() {
        Some(first) => counts.iter().flatten().all(|c| c == first),
        None => false,
    };
    Ok(RhoReport { counts, constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{boyd_base, member};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn monomial_indices() {
        let z = poly("x");
        let r = index_in_disc(&z, 1.0, 64).unwrap();
        assert_eq!(r.nu, 1);
        assert!(r.residual < 1e-12);

        let zinv = poly("x^-1");
        let r = index_in_disc(&zinv, 1.0, 64).unwrap();
        assert_eq!(r.nu, -1);
    }

    #[test]
    fn family_slice_index() {
        // x + 1/x + 4.25: zeros {-4, -1/4} minus the simple pole, inside |x| < 10
        let p = poly("x + x^-1 + 4.25");
        let r = index_in_disc(&p, 10.0, 4096).unwrap();
        assert_eq!(r.nu, 1);
        assert!(r.residual < 1e-10);
    }

    #[test]
    fn zero_on_contour_detected() {
        let p = poly("x - 1");
        assert!(matches!(
            index_in_disc(&p, 1.0, 64),
            Err(Error::ZeroOnContour { .. })
        ));
    }

    #[test]
    fn nu_pair_on_the_family() {
        // r = R_{a,b} + 4 puts the parameter in the unbounded component
        let (a, b) = (1.5, 1.2);
        let r = a + 1.0 / a + b + 1.0 / b + 4.0;
        let p = member(&boyd_base(2), c(r, 0.0));
        let (n1, n2) = nu_pair(&p, a, b).unwrap();
        assert_eq!((n1.nu, n2.nu), (0, 0));

        // Q_0 at (10, 4): both roots of the y = 4 slice sit inside |x| < 10
        let q0 = boyd_base(2);
        let (n1, _n2) = nu_pair(&q0, 10.0, 4.0).unwrap();
        assert_eq!(n1.nu, 1);
    }

    #[test]
    fn linear_family_indices() {
        // x + y + c with |c| < a - b, a > b: ν = (1, 0)
        let p = poly("x + y + 0.5");
        let (n1, n2) = nu_pair(&p, 2.0, 1.0).unwrap();
        assert_eq!((n1.nu, n2.nu), (1, 0));
    }

    #[test]
    fn residual_shrinks_with_node_count() {
        let p = poly("x - 0.8");
        let r16 = index_in_disc(&p, 1.0, 16).unwrap();
        let r32 = index_in_disc(&p, 1.0, 32).unwrap();
        assert!(r32.residual <= r16.residual / 4.0 + 1e-15);
    }

    #[test]
    fn rho_is_constant_for_nonvanishing_cases() {
        let q6 = member(&boyd_base(2), c(6.0, 0.0));
        let rep = rho_constancy(&q6, 1.2, 1.1, 64, VarRole::Y).unwrap();
        assert!(rep.constant);

        let q0 = boyd_base(2);
        let rep = rho_constancy(&q0, 10.0, 4.0, 64, VarRole::X).unwrap();
        assert!(rep.constant);
        assert_eq!(rep.counts[0], Some(2));

        let y = poly("y");
        let rep = rho_constancy(&y, 1.7, 0.3, 16, VarRole::Y).unwrap();
        assert!(rep.constant);
        assert_eq!(rep.counts[0], Some(1));
    }
}
