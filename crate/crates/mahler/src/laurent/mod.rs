//! Sparse Laurent polynomials in `n ≥ 1` complex variables.
//!
//! A polynomial is a mapping from exponent vectors (signed, one entry per
//! variable) to coefficients, kept in canonical sparse form: no stored
//! coefficient is exactly zero, and two polynomials are equal iff their term
//! maps are equal. Arithmetic is generic over the coefficient ring so the
//! same engine runs on `Complex<f64>` and on exact rational (Gaussian)
//! coefficients; see the type aliases at the crate root.

pub mod parse;

pub use parse::{parse_complex, parse_poly, parse_poly_with_arity, var_name};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Neg;

use num_traits::{Num, Zero};

use crate::error::{Error, Result};
use crate::Complex64;

/// Coefficient ring bound for the generic polynomial engine.
pub trait Coeff: Num + Neg<Output = Self> + Clone + PartialEq + fmt::Debug {}
impl<T> Coeff for T where T: Num + Neg<Output = T> + Clone + PartialEq + fmt::Debug {}

/// Per-variable exponent cap. Bounded keys keep the sparse maps hashable and
/// overflow-free under convolution; anything near this bound is far beyond
/// the scale the engines are meant for.
pub const MAX_DEGREE: i32 = 30_000;

#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<C> {
    n_vars: usize,
    terms: BTreeMap<Vec<i16>, C>,
}

fn check_exponent(e: i32) -> Result<i16> {
    if e.abs() > MAX_DEGREE {
        return Err(Error::InvalidInput(format!(
            "exponent {e} exceeds the degree cap {MAX_DEGREE}"
        )));
    }
    Ok(e as i16)
}

impl<C: Coeff> SparsePoly<C> {
    /// The zero polynomial in `n_vars` variables.
    pub fn zero_poly(n_vars: usize) -> Self {
        SparsePoly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: C) -> Self {
        let mut p = Self::zero_poly(n_vars);
        p.insert_term(vec![0; n_vars], c);
        p
    }

    /// The monomial `x_var`.
    pub fn variable(n_vars: usize, var: usize) -> Result<Self> {
        Self::monomial_at(n_vars, var, 1, C::one())
    }

    /// `c * x_var^e`.
    pub fn monomial_at(n_vars: usize, var: usize, e: i32, c: C) -> Result<Self> {
        if var >= n_vars {
            return Err(Error::InvalidInput(format!(
                "variable index {var} out of range for {n_vars} variables"
            )));
        }
        let mut exps = vec![0i16; n_vars];
        exps[var] = check_exponent(e)?;
        let mut p = Self::zero_poly(n_vars);
        p.insert_term(exps, c);
        Ok(p)
    }

    pub fn from_terms<I>(n_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i16>, C)>,
    {
        let mut p = Self::zero_poly(n_vars);
        for (exps, c) in terms {
            if exps.len() != n_vars {
                return Err(Error::InvalidInput(format!(
                    "exponent vector of length {} for a {}-variable polynomial",
                    exps.len(),
                    n_vars
                )));
            }
            for &e in &exps {
                check_exponent(e as i32)?;
            }
            p.insert_term(exps, c);
        }
        Ok(p)
    }

    /// Add `c` into the term at `exps`, keeping canonical form.
    fn insert_term(&mut self, exps: Vec<i16>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i16], &C)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[i16]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of the all-zero exponent vector (zero if absent).
    pub fn constant_term(&self) -> C {
        self.coefficient(&vec![0i16; self.n_vars])
    }

    fn check_same_arity(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::VarMismatch {
                left: self.n_vars,
                right: other.n_vars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero_poly(self.n_vars);
        if c.is_zero() {
            return out;
        }
        for (e, t) in &self.terms {
            out.insert_term(e.clone(), t.clone() * c.clone());
        }
        out
    }

    pub fn add_constant(&self, c: C) -> Self {
        let mut out = self.clone();
        out.insert_term(vec![0; self.n_vars], c);
        out
    }

    /// Convolution of term maps.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_arity(other)?;
        let mut out = Self::zero_poly(self.n_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = Vec::with_capacity(self.n_vars);
                for k in 0..self.n_vars {
                    e.push(check_exponent(ea[k] as i32 + eb[k] as i32)?);
                }
                out.insert_term(e, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// Power by repeated squaring; `pow(p, 0)` is the constant one.
    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::constant(self.n_vars, C::one());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Substitute `value` for `x_var` and collect like terms in the
    /// remaining `n_vars - 1` variables.
    pub fn slice(&self, var: usize, value: &C) -> Result<SparsePoly<C>> {
        if var >= self.n_vars {
            return Err(Error::InvalidInput(format!(
                "variable index {var} out of range for {} variables",
                self.n_vars
            )));
        }
        let needs_inverse = self.terms.keys().any(|e| e[var] < 0);
        if value.is_zero() && needs_inverse {
            return Err(Error::ZeroCoordinate { var });
        }
        let mut out = SparsePoly::zero_poly(self.n_vars - 1);
        for (e, c) in &self.terms {
            let mut rest = Vec::with_capacity(self.n_vars - 1);
            for (k, &ek) in e.iter().enumerate() {
                if k != var {
                    rest.push(ek);
                }
            }
            out.insert_term(rest, c.clone() * scalar_pow(value, e[var] as i32));
        }
        Ok(out)
    }

    /// Largest power of `x_var^{-1}`, i.e. `max(0, -min exponent)`.
    pub fn pole_order(&self, var: usize) -> usize {
        self.terms
            .keys()
            .map(|e| e[var] as i32)
            .min()
            .map_or(0, |m| (-m).max(0) as usize)
    }

    /// View the polynomial as a one-variable polynomial in `x_var` after
    /// clearing its pole, splitting off the leading and constant
    /// coefficients (polynomials in the remaining variables).
    pub fn factor_in_variable(&self, var: usize) -> Result<YFactorization<C>> {
        if var >= self.n_vars {
            return Err(Error::InvalidInput(format!(
                "variable index {var} out of range for {} variables",
                self.n_vars
            )));
        }
        if self.terms.keys().all(|e| e[var] == 0) {
            return Err(Error::ConstantInVariable { var });
        }
        let pole = self.pole_order(var) as i32;
        let degree = self
            .terms
            .keys()
            .map(|e| e[var] as i32 + pole)
            .max()
            .unwrap();
        if degree < 1 {
            // only negative powers of x_var: no polynomial part after clearing
            return Err(Error::ConstantInVariable { var });
        }
        let rest_vars = self.n_vars - 1;
        let mut coeffs: Vec<SparsePoly<C>> =
            (0..=degree).map(|_| SparsePoly::zero_poly(rest_vars)).collect();
        for (e, c) in &self.terms {
            let k = (e[var] as i32 + pole) as usize;
            let mut rest = Vec::with_capacity(rest_vars);
            for (j, &ej) in e.iter().enumerate() {
                if j != var {
                    rest.push(ej);
                }
            }
            coeffs[k].insert_term(rest, c.clone());
        }
        let leading = coeffs.pop().unwrap();
        let constant = coeffs.remove(0);
        Ok(YFactorization {
            var,
            pole_order: pole as usize,
            degree: degree as usize,
            leading,
            constant,
            middle: coeffs,
        })
    }

    /// Apply `f` to every coefficient, re-canonicalizing.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SparsePoly<D> {
        let mut out = SparsePoly::zero_poly(self.n_vars);
        for (e, c) in &self.terms {
            out.insert_term(e.clone(), f(c));
        }
        out
    }
}

/// `v^e` in an arbitrary coefficient ring; negative exponents invert first.
fn scalar_pow<C: Coeff>(v: &C, e: i32) -> C {
    if e == 0 {
        return C::one();
    }
    let base = if e < 0 {
        C::one() / v.clone()
    } else {
        v.clone()
    };
    let mut acc = C::one();
    let mut b = base;
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * b.clone();
        }
        k >>= 1;
        if k > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

impl SparsePoly<Complex64> {
    /// Evaluate at a point of `(C*)^n` with compensated (Kahan) summation.
    ///
    /// A zero coordinate is a domain error when some term carries a negative
    /// exponent in that variable; otherwise the zero factor is taken as-is.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.n_vars {
            return Err(Error::VarMismatch {
                left: self.n_vars,
                right: point.len(),
            });
        }
        for (k, v) in point.iter().enumerate() {
            if v.is_zero() && self.terms.keys().any(|e| e[k] < 0) {
                return Err(Error::ZeroCoordinate { var: k });
            }
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut comp = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = *c;
            for (k, &ek) in e.iter().enumerate() {
                if ek != 0 {
                    term *= point[k].powi(ek as i32);
                }
            }
            // Kahan step, componentwise through complex arithmetic
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        Ok(sum)
    }

    /// Term-wise derivative in `x_var`.
    pub fn derivative(&self, var: usize) -> Result<Self> {
        if var >= self.n_vars {
            return Err(Error::InvalidInput(format!(
                "variable index {var} out of range for {} variables",
                self.n_vars
            )));
        }
        let mut out = Self::zero_poly(self.n_vars);
        for (e, c) in &self.terms {
            let ek = e[var] as i32;
            if ek == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[var] = check_exponent(ek - 1)?;
            out.insert_term(exps, c * Complex64::new(ek as f64, 0.0));
        }
        Ok(out)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficients of the pole-cleared one-variable polynomial, low to
    /// high, together with the pole order. Only for `n_vars == 1`.
    pub fn cleared_coeffs_1var(&self) -> Result<(Vec<Complex64>, usize)> {
        if self.n_vars != 1 {
            return Err(Error::VarMismatch {
                left: self.n_vars,
                right: 1,
            });
        }
        if self.is_zero() {
            return Ok((vec![], 0));
        }
        let pole = self.pole_order(0) as i32;
        let top = self.terms.keys().map(|e| e[0] as i32).max().unwrap() + pole;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); top as usize + 1];
        for (e, c) in &self.terms {
            coeffs[(e[0] as i32 + pole) as usize] = *c;
        }
        Ok((coeffs, pole as usize))
    }
}

impl SparsePoly<crate::ExactCoeff> {
    /// Approximate the exact coefficients in double precision.
    pub fn to_f64(&self) -> SparsePoly<Complex64> {
        use num_traits::ToPrimitive;
        self.map_coeffs(|c| {
            Complex64::new(
                c.re.to_f64().unwrap_or(f64::NAN),
                c.im.to_f64().unwrap_or(f64::NAN),
            )
        })
    }
}

/// One-variable view of a Laurent polynomial after clearing its pole:
/// `p = u^{-pole_order} (leading u^degree + constant + Σ_j middle[j-1] u^j)`.
///
/// The coefficients are polynomials in the remaining variables.
#[derive(Clone, Debug, PartialEq)]
pub struct YFactorization<C> {
    pub var: usize,
    pub pole_order: usize,
    pub degree: usize,
    pub leading: SparsePoly<C>,
    pub constant: SparsePoly<C>,
    pub middle: Vec<SparsePoly<C>>,
}

impl<C: Coeff> YFactorization<C> {
    /// Coefficient polynomial of `u^k` in the cleared form, `0 <= k <= degree`.
    pub fn coeff_poly(&self, k: usize) -> &SparsePoly<C> {
        if k == 0 {
            &self.constant
        } else if k == self.degree {
            &self.leading
        } else {
            &self.middle[k - 1]
        }
    }

    /// Rebuild the source polynomial; exact for exact coefficient rings.
    pub fn reassemble(&self) -> Result<SparsePoly<C>> {
        let n = self.leading.n_vars() + 1;
        let mut out = SparsePoly::zero_poly(n);
        for k in 0..=self.degree {
            let coeff = self.coeff_poly(k);
            let e_var = k as i32 - self.pole_order as i32;
            for (rest, c) in coeff.terms() {
                let mut exps = Vec::with_capacity(n);
                exps.extend_from_slice(&rest[..self.var]);
                exps.push(check_exponent(e_var)?);
                exps.extend_from_slice(&rest[self.var..]);
                out.insert_term(exps, c.clone());
            }
        }
        Ok(out)
    }
}
