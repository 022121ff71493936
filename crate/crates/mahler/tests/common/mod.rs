//! Shared oracles for the integration suites. Everything here is computed
//! independently of the library paths under test.
#![allow(dead_code)] // each suite uses its own subset

use mahler::{Complex64, LaurentPoly};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// ζ(3) by direct summation with an Euler–Maclaurin tail.
pub fn zeta3() -> f64 {
    let n = 100_000u64;
    let mut s = 0.0;
    for k in (1..=n).rev() {
        s += 1.0 / (k * k * k) as f64;
    }
    let nf = n as f64;
    s + 1.0 / (2.0 * nf * nf) - 1.0 / (2.0 * nf * nf * nf)
}

/// Catalan's constant from its alternating series, tail-averaged.
pub fn catalan() -> f64 {
    let mut sum = 0.0;
    let mut prev = 0.0;
    for k in 0..=400_000u64 {
        prev = sum;
        let t = 1.0 / ((2 * k + 1) * (2 * k + 1)) as f64;
        sum += if k % 2 == 0 { t } else { -t };
    }
    0.5 * (sum + prev)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random sparse Laurent polynomial with exponents in `[-max_exp, max_exp]`
/// and complex coefficients in `[-2, 2]^2`.
pub fn random_poly(rng: &mut ChaCha8Rng, n_vars: usize, max_exp: i16, terms: usize) -> LaurentPoly {
    loop {
        let mut list = Vec::with_capacity(terms);
        for _ in 0..terms {
            let exps: Vec<i16> = (0..n_vars).map(|_| rng.gen_range(-max_exp..=max_exp)).collect();
            let c = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            list.push((exps, c));
        }
        let p = LaurentPoly::from_terms(n_vars, list).unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

/// Vanishing detector: a genuine positive minimum plateaus under grid
/// refinement, while a zero on the torus keeps the sampled minimum falling
/// proportionally to the spacing.
pub fn vanishes_on_torus(p: &LaurentPoly, radii: &[f64]) -> bool {
    let coarse = grid_min_abs(p, radii, 256);
    let fine = grid_min_abs(p, radii, 512);
    fine <= 5e-2 || fine <= 0.8 * coarse
}

/// Minimum of |p| over a coarse angle grid on the torus.
pub fn grid_min_abs(p: &LaurentPoly, radii: &[f64], nodes: usize) -> f64 {
    let tau = std::f64::consts::TAU;
    let n = p.n_vars();
    let total = (nodes as u64).pow(n as u32);
    let mut min = f64::INFINITY;
    let mut pts = vec![Complex64::new(0.0, 0.0); n];
    for flat in 0..total {
        let mut rem = flat;
        for d in 0..n {
            let k = (rem % nodes as u64) as f64;
            rem /= nodes as u64;
            pts[d] = Complex64::from_polar(radii[d], tau * k / nodes as f64);
        }
        min = min.min(p.evaluate(&pts).unwrap().norm());
    }
    min
}
