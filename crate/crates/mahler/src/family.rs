//! The tempered family `x + 1/x + y + 1/y + r` and its n-variable analogue.

use crate::{Complex64, LaurentPoly};

/// `Σ_k (x_k + 1/x_k)` in `n_vars` variables.
pub fn boyd_base(n_vars: usize) -> LaurentPoly {
    let mut terms = Vec::with_capacity(2 * n_vars);
    for k in 0..n_vars {
        for e in [1i16, -1] {
            let mut exps = vec![0i16; n_vars];
            exps[k] = e;
            terms.push((exps, Complex64::new(1.0, 0.0)));
        }
    }
    LaurentPoly::from_terms(n_vars, terms).unwrap()
}

/// The family member at parameter `r`: `base + r`.
pub fn member(base: &LaurentPoly, r: Complex64) -> LaurentPoly {
    base.add_constant(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn base_has_no_constant_term() {
        for n in 1..=3 {
            let b = boyd_base(n);
            assert_eq!(b.num_terms(), 2 * n);
            assert!(b.constant_term().is_zero());
        }
    }

    #[test]
    fn member_matches_parsed_form() {
        let q4 = member(&boyd_base(2), Complex64::new(4.0, 0.0));
        let parsed: LaurentPoly = "x + x^-1 + y + y^-1 + 4".parse().unwrap();
        assert_eq!(q4, parsed);
    }
}
