//! Periodic quadrature over angle variables.
//!
//! The workhorse is the uniform trapezoidal average, which is spectrally
//! accurate for periodic integrands that are analytic in a strip. Integrands
//! with isolated log singularities on the path (polynomials vanishing on the
//! integration torus) are handled by local dyadic refinement of singular
//! nodes; sub-nodes that remain singular are excluded, which is sound because
//! log singularities are integrable.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid description for the trapezoidal engines.
///
/// `nodes_per_dim` entries must be powers of two and at least 8, so error
/// estimation by grid halving stays on-lattice. `singular_threshold` is the
/// floor for a modulus entering a logarithm (see [`safe_log_abs`]).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    pub nodes_per_dim: Vec<usize>,
    pub refinement_levels: usize,
    pub singular_threshold: f64,
}

impl GridSpec {
    pub fn new(nodes_per_dim: Vec<usize>) -> Result<Self> {
        let spec = GridSpec {
            nodes_per_dim,
            refinement_levels: 6,
            singular_threshold: 1e-300,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Desk-scale defaults: 4096 nodes in 1-D, 1024² in 2-D, 128³ in 3-D.
    pub fn default_for_dim(dim: usize) -> Self {
        let n = match dim {
            1 => 4096,
            2 => 1024,
            3 => 128,
            _ => 32,
        };
        GridSpec {
            nodes_per_dim: vec![n; dim.max(1)],
            refinement_levels: 6,
            singular_threshold: 1e-300,
        }
    }

    pub fn with_refinement(mut self, levels: usize) -> Self {
        self.refinement_levels = levels;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_dim.is_empty() {
            return Err(Error::InvalidInput("empty grid".into()));
        }
        for &n in &self.nodes_per_dim {
            if n < 8 || !n.is_power_of_two() {
                return Err(Error::InvalidInput(format!(
                    "nodes_per_dim entries must be powers of two >= 8, got {n}"
                )));
            }
        }
        if !(self.singular_threshold.is_finite() && self.singular_threshold > 0.0) {
            return Err(Error::InvalidInput(
                "singular_threshold must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.nodes_per_dim.len()
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub est_error: f64,
    pub nodes_used: u64,
    pub skipped_nodes: u64,
}

/// `ln(modulus)`, mapped to `-inf` below the threshold so the engine can
/// recognize the node as singular.
pub fn safe_log_abs(modulus: f64, threshold: f64) -> f64 {
    if modulus < threshold {
        f64::NEG_INFINITY
    } else {
        modulus.ln()
    }
}

struct GridTotals {
    sum: f64,
    evals: u64,
    skipped: u64,
}

/// Full-depth dyadic refinement of one singular cell: the cell around
/// `center` is covered by `2^level` midpoints per dimension; leaves that are
/// still singular contribute zero.
fn refine_cell<F>(f: &F, center: &[f64], h: &[f64], level: usize) -> (f64, u64, u64)
where
    F: Fn(&[f64]) -> f64,
{
    let dim = center.len();
    let m = 1usize << level;
    let total: u64 = (m as u64).pow(dim as u32);
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut skipped = 0u64;
    let mut theta = vec![0.0; dim];
    for flat in 0..total {
        let mut rem = flat;
        for d in 0..dim {
            let k = (rem % m as u64) as f64;
            rem /= m as u64;
            theta[d] = center[d] + h[d] * ((k + 0.5) / m as f64 - 0.5);
        }
        let v = f(&theta);
        if v.is_finite() {
            let y = v - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        } else {
            skipped += 1;
        }
    }
    (sum / total as f64, total, skipped)
}

fn tree_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => tree_sum(&xs[..n / 2]) + tree_sum(&xs[n / 2..]),
    }
}

/// Refinement depth capped so one singular node costs at most ~4096 extra
/// evaluations regardless of dimension.
fn effective_levels(levels: usize, dim: usize) -> usize {
    levels.min((12 / dim.max(1)).max(1))
}

fn grid_average<F>(f: &F, nodes: &[usize], levels: usize) -> GridTotals
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = nodes.len();
    let h: Vec<f64> = nodes.iter().map(|&n| TAU / n as f64).collect();
    let inner: u64 = nodes[1..].iter().map(|&n| n as u64).product();
    let levels = effective_levels(levels, dim);

    let rows: Vec<(f64, u64, u64)> = (0..nodes[0])
        .into_par_iter()
        .map(|j0| {
            let mut theta = vec![0.0; dim];
            theta[0] = j0 as f64 * h[0];
            let mut sum = 0.0;
            let mut comp = 0.0;
            let mut evals = 0u64;
            let mut skipped = 0u64;
            for flat in 0..inner {
                let mut rem = flat;
                for d in 1..dim {
                    theta[d] = (rem % nodes[d] as u64) as f64 * h[d];
                    rem /= nodes[d] as u64;
                }
                let v = f(&theta);
                let cell = if v.is_finite() {
                    evals += 1;
                    v
                } else {
                    let (avg, e, s) = refine_cell(f, &theta, &h, levels);
                    evals += 1 + e;
                    skipped += s;
                    avg
                };
                let y = cell - comp;
                let t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
            (sum, evals, skipped)
        })
        .collect();

    let row_sums: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let node_count: u64 = nodes.iter().map(|&n| n as u64).product();
    GridTotals {
        sum: tree_sum(&row_sums) / node_count as f64,
        evals: rows.iter().map(|r| r.1).sum(),
        skipped: rows.iter().map(|r| r.2).sum(),
    }
}

/// Average of `f` over the angle torus `[0, 2π)^n` with the node layout of
/// `spec`. The error estimate compares against the half-resolution grid.
pub fn periodic_integral_nd<F>(f: F, spec: &GridSpec) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    spec.validate()?;
    let full = grid_average(&f, &spec.nodes_per_dim, spec.refinement_levels);
    let halved: Vec<usize> = spec.nodes_per_dim.iter().map(|&n| n / 2).collect();
    let half = grid_average(&f, &halved, spec.refinement_levels);
    let nodes_used = full.evals + half.evals;
    let skipped_nodes = full.skipped + half.skipped;
    if skipped_nodes * 100 > nodes_used {
        return Err(Error::SingularityDominated {
            skipped: skipped_nodes,
            used: nodes_used,
        });
    }
    Ok(QuadResult {
        value: full.sum,
        est_error: (full.sum - half.sum).abs(),
        nodes_used,
        skipped_nodes,
    })
}

/// One-dimensional specialization of [`periodic_integral_nd`].
pub fn periodic_integral_1d<F>(f: F, spec: &GridSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    if spec.dim() != 1 {
        return Err(Error::InvalidInput(format!(
            "expected a 1-D grid, got {} dims",
            spec.dim()
        )));
    }
    periodic_integral_nd(|t: &[f64]| f(t[0]), spec)
}
