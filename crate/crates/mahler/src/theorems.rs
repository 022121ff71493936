//! Relations between measures over deformed tori and the standard measure:
//! the large-parameter series, the unbounded-component invariance check, the
//! bounded-component closed form, and the Cassaigne–Maillot formula for
//! `ax + by + c`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{
    mahler_1var_exact, mahler_direct, mahler_jensen, MeasureResult, Torus,
};
use crate::quad::GridSpec;
use crate::region::{build_region, PointClass};
use crate::roots::roots_complex;
use crate::special::{bloch_wigner, ln_pm};
use crate::winding::{index_in_disc, nu_pair, VarRole, DEFAULT_CONTOUR_NODES};
use crate::{Complex64, LaurentPoly};

/// Outcome of the torus-deformation relation
/// `m_radii(q + r) = m_unit(q + r) + Σ ν_j log a_j`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationReport {
    pub lhs: MeasureResult,
    pub rhs_base: MeasureResult,
    pub nu: Vec<i64>,
    pub rhs: f64,
    pub discrepancy: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Power-sum coefficients `a_n = constant_term(q^n)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesCoeffs {
    pub coeffs: Vec<Complex64>,
    pub n_max: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesMtilde {
    pub value: Complex64,
    /// Geometric bound on the dropped tail.
    pub remainder_bound: f64,
    pub terms: usize,
    /// Grid maximum of |q| on the unit torus, the convergence radius proxy.
    pub torus_bound: f64,
}

fn require_no_constant_term(q: &LaurentPoly) -> Result<()> {
    if !q.constant_term().is_zero() {
        return Err(Error::InvalidInput(
            "family base polynomial must have no constant term".into(),
        ));
    }
    Ok(())
}

pub fn series_coefficients(q: &LaurentPoly, n_max: usize) -> Result<SeriesCoeffs> {
    require_no_constant_term(q)?;
    let mut coeffs = Vec::with_capacity(n_max);
    let mut power = LaurentPoly::constant(q.n_vars(), Complex64::new(1.0, 0.0));
    for _ in 1..=n_max {
        power = power.mul(q)?;
        coeffs.push(power.constant_term());
    }
    Ok(SeriesCoeffs { coeffs, n_max })
}

/// Grid maximum of |q| over the unit torus (64 nodes per dimension), the
/// practical stand-in for the exact convergence radius.
pub fn torus_sup_bound(q: &LaurentPoly, radii: &[f64]) -> Result<f64> {
    let n = q.n_vars();
    if radii.len() != n {
        return Err(Error::VarMismatch {
            left: n,
            right: radii.len(),
        });
    }
    let nodes = 64usize;
    let total = (nodes as u64).pow(n as u32);
    let tau = std::f64::consts::TAU;
    let mut best: f64 = 0.0;
    let mut pts = vec![Complex64::new(0.0, 0.0); n];
    for flat in 0..total {
        let mut rem = flat;
        for d in 0..n {
            let k = (rem % nodes as u64) as f64;
            rem /= nodes as u64;
            pts[d] = Complex64::from_polar(radii[d], tau * k / nodes as f64);
        }
        best = best.max(q.evaluate(&pts)?.norm());
    }
    Ok(best)
}

/// Truncated large-parameter expansion
/// `m̃(r) = log r - Σ_{n=1}^{N} a_n / (n r^n)`, the holomorphic function
/// whose real part is the measure of `r - q` for `|r|` beyond the torus
/// bound. For bases with no odd constant terms (the four-term family) this
/// equals the expansion for `q + r` as well.
pub fn series_mtilde(q: &LaurentPoly, r: Complex64, n_terms: usize) -> Result<SeriesMtilde> {
    require_no_constant_term(q)?;
    let bound = torus_sup_bound(q, &vec![1.0; q.n_vars()])?;
    if r.norm() <= bound {
        return Err(Error::DivergentSeries {
            r_abs: r.norm(),
            bound,
        });
    }
    if r.im == 0.0 && r.re <= 0.0 {
        return Err(Error::InvalidInput(
            "series parameter lies on the branch cut (-inf, 0]".into(),
        ));
    }
    let mut value = ln_pm(r);
    let inv_r = Complex64::new(1.0, 0.0) / r;
    let mut inv_pow = Complex64::new(1.0, 0.0);
    let coeffs = series_coefficients(q, n_terms)?;
    for (idx, a_n) in coeffs.coeffs.iter().enumerate() {
        let n = (idx + 1) as f64;
        inv_pow *= inv_r;
        value -= a_n * inv_pow / n;
    }
    let ratio = bound / r.norm();
    let remainder_bound = if n_terms == 0 {
        ratio / (1.0 - ratio)
    } else {
        ratio.powi(n_terms as i32 + 1) / ((n_terms as f64 + 1.0) * (1.0 - ratio))
    };
    Ok(SeriesMtilde {
        value,
        remainder_bound,
        terms: n_terms,
        torus_bound: bound,
    })
}

fn classify_for_family(q: &LaurentPoly, r: Complex64, a: f64, b: f64) -> Result<PointClass> {
    let model = build_region(q, a, b, 1024, 1024)?;
    Ok(model.classify(r))
}

/// Check `m_radii(q + r) = m_unit(q + r) + Σ ν_j log a_j` for a parameter in
/// the unbounded complement component of the vanishing region on both tori.
///
/// The precondition is enforced, not trusted: for two variables through the
/// sampled region model, and in higher dimensions through the sufficient
/// bound `|r| > max |q|` on both tori.
pub fn verify_main_relation(
    q_base: &LaurentPoly,
    r: Complex64,
    t: &Torus,
    tol: f64,
) -> Result<RelationReport> {
    require_no_constant_term(q_base)?;
    let n = q_base.n_vars();
    if t.dim() != n {
        return Err(Error::VarMismatch {
            left: n,
            right: t.dim(),
        });
    }
    if n == 2 {
        let (a, b) = (t.radii()[0], t.radii()[1]);
        for (ra, rb) in [(a, b), (1.0, 1.0)] {
            if classify_for_family(q_base, r, ra, rb)? != PointClass::Unbounded {
                return Err(Error::PreconditionNotMet(format!(
                    "r = {r} is not in the unbounded component for radii ({ra}, {rb})"
                )));
            }
        }
    } else {
        for radii in [t.radii().to_vec(), vec![1.0; n]] {
            let bound = torus_sup_bound(q_base, &radii)?;
            if r.norm() <= bound {
                return Err(Error::PreconditionNotMet(format!(
                    "|r| = {} does not clear the torus bound {} for radii {:?}",
                    r.norm(),
                    bound,
                    radii
                )));
            }
        }
    }

    let member = q_base.add_constant(r);
    let (lhs, rhs_base) = if n == 2 {
        let spec = GridSpec::default_for_dim(1);
        (
            mahler_jensen(&member, t, &spec)?,
            mahler_jensen(&member, &Torus::unit(2), &spec)?,
        )
    } else {
        let spec = GridSpec::default_for_dim(n);
        (
            mahler_direct(&member, t, &spec)?,
            mahler_direct(&member, &Torus::unit(n), &spec)?,
        )
    };

    let mut nu = Vec::with_capacity(n);
    if n == 2 {
        let (n1, n2) = nu_pair(&member, t.radii()[0], t.radii()[1])?;
        nu.push(n1.nu);
        nu.push(n2.nu);
    } else {
        for j in 0..n {
            // substitute every variable except j at its positive real point;
            // indices shift down as earlier variables are removed
            let mut slice = member.clone();
            let mut removed = 0;
            for k in 0..n {
                if k == j {
                    continue;
                }
                slice = slice.slice(k - removed, &Complex64::new(t.radii()[k], 0.0))?;
                removed += 1;
            }
            nu.push(index_in_disc(&slice, t.radii()[j], DEFAULT_CONTOUR_NODES)?.nu);
        }
    }

    let correction: f64 = nu
        .iter()
        .zip(t.radii())
        .map(|(&nj, &aj)| nj as f64 * aj.ln())
        .sum();
    let rhs = rhs_base.value + correction;
    let discrepancy = (lhs.value - rhs).abs();
    Ok(RelationReport {
        lhs,
        rhs_base,
        nu,
        rhs,
        discrepancy,
        tol,
        pass: discrepancy <= tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// All slice roots inside the test circle: the leading coefficient
    /// carries the measure.
    Leading,
    /// All slice roots outside: the constant coefficient carries it.
    Constant,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundedValue {
    pub value: f64,
    pub branch: Branch,
    pub nu: i64,
}

const ROOT_MARGIN: f64 = 1e-9;

/// Measure of `q + r` for `r` in a bounded complement component, by the
/// all-roots-inside / all-roots-outside reduction.
///
/// With `role = X` the slice at `y = b` is root-tested against `|x| = a` and
/// the value is `ν¹ log a` plus the one-variable measure (over `|y| = b`) of
/// the leading or constant coefficient of the factorization in `x`.
pub fn bounded_component_value(
    q_base: &LaurentPoly,
    r: Complex64,
    t: &Torus,
    role: VarRole,
) -> Result<BoundedValue> {
    require_no_constant_term(q_base)?;
    if q_base.n_vars() != 2 || t.dim() != 2 {
        return Err(Error::VarMismatch {
            left: q_base.n_vars(),
            right: t.dim(),
        });
    }
    let (a, b) = (t.radii()[0], t.radii()[1]);
    if !matches!(classify_for_family(q_base, r, a, b)?, PointClass::Bounded(_)) {
        return Err(Error::PreconditionNotMet(format!(
            "r = {r} is not in a bounded component for radii ({a}, {b})"
        )));
    }

    let member = q_base.add_constant(r);
    // role X: roots in x of the slice at y = b, tested against |x| = a
    let (slice_var, slice_at, circle, factor_var, other_circle) = match role {
        VarRole::X => (1, b, a, 0, b),
        VarRole::Y => (0, a, b, 1, a),
    };
    let slice = member.slice(slice_var, &Complex64::new(slice_at, 0.0))?;
    let (coeffs, pole) = slice.cleared_coeffs_1var()?;
    if coeffs.len() <= 1 {
        return Err(Error::PreconditionNotMet(
            "slice polynomial has no roots to test".into(),
        ));
    }
    let roots = roots_complex(&coeffs, 1e-12)?;
    let inside = roots
        .iter()
        .filter(|z| z.norm() < circle * (1.0 - ROOT_MARGIN))
        .count();
    let outside = roots
        .iter()
        .filter(|z| z.norm() > circle * (1.0 + ROOT_MARGIN))
        .count();
    if inside + outside < roots.len() || (inside > 0 && outside > 0) {
        return Err(Error::MixedRoots {
            inside,
            outside,
            margin: ROOT_MARGIN,
        });
    }

    let fact = member.factor_in_variable(factor_var)?;
    let (branch, coeff_poly) = if inside == roots.len() {
        (Branch::Leading, &fact.leading)
    } else {
        (Branch::Constant, &fact.constant)
    };
    let nu = inside as i64 - pole as i64;
    let value = nu as f64 * circle.ln() + mahler_1var_exact(coeff_poly, other_circle)?;
    Ok(BoundedValue { value, branch, nu })
}

/// The dilogarithm branch of the Cassaigne–Maillot formula, evaluated from
/// the side moduli regardless of whether they close a triangle.
pub fn cm_dilog_branch(na: f64, nb: f64, nc: f64) -> f64 {
    let clamp = |v: f64| v.clamp(-1.0, 1.0);
    let alpha = clamp((nb * nb + nc * nc - na * na) / (2.0 * nb * nc)).acos();
    let beta = clamp((na * na + nc * nc - nb * nb) / (2.0 * na * nc)).acos();
    let gamma = clamp((na * na + nb * nb - nc * nc) / (2.0 * na * nb)).acos();
    let d = bloch_wigner(Complex64::from_polar(na / nb, gamma));
    (alpha * na.ln() + beta * nb.ln() + gamma * nc.ln() + d) / std::f64::consts::PI
}

/// `m(ax + by + c)`: the triangle test on the moduli picks between the
/// dilogarithm branch and `log max`. Degenerate triangles fall to the
/// `log max` branch; the two branches agree there in the limit.
pub fn cassaigne_maillot(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let (na, nb, nc) = (a.norm(), b.norm(), c.norm());
    let triangle = na < nb + nc && nb < na + nc && nc < na + nb;
    if triangle {
        cm_dilog_branch(na, nb, nc)
    } else {
        na.max(nb).max(nc).ln()
    }
}
