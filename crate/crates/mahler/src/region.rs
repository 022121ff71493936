//! The vanishing region of a parameter family: the set of `r` for which
//! `q + r` vanishes on a fixed torus, sampled on an angle grid and
//! rasterized, with the complement split into its unbounded and bounded
//! connected components.
//!
//! For the four-term family `x + 1/x + y + 1/y` the module also carries the
//! closed-form extremes of the region and the hyperbolic-trig conditions
//! under which its outer and inner boundaries are exact ellipses.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::{Complex64, LaurentPoly};

/// One connected component of the complement of the sampled region.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Component {
    pub bounded: bool,
    /// Cell centroid farthest from the region (by grid distance transform);
    /// a robust seed point for measure evaluation inside the component.
    pub representative: Complex64,
    pub cells: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointClass {
    InRegion,
    Unbounded,
    Bounded(usize),
}

/// Sampled image of `(x, y) ↦ -q(x, y)` over the torus, i.e. the parameter
/// values `r` at which `q + r` vanishes, with labeled complement components.
#[derive(Clone, Debug)]
pub struct RegionModel {
    samples: Vec<Complex64>,
    res: usize,
    half_width: f64,
    /// 0 = region, 1 = unbounded complement, k+2 = bounded component k.
    /// Every complement cell is labeled, so 0 doubles as "occupied".
    labels: Vec<u32>,
    components: Vec<Component>,
    max_sample_abs: f64,
}

impl RegionModel {
    fn cell_of(&self, r: Complex64) -> Option<usize> {
        let m = self.half_width;
        if r.re <= -m || r.re >= m || r.im <= -m || r.im >= m {
            return None;
        }
        let step = 2.0 * m / self.res as f64;
        let ix = (((r.re + m) / step) as usize).min(self.res - 1);
        let iy = (((r.im + m) / step) as usize).min(self.res - 1);
        Some(iy * self.res + ix)
    }

    fn cell_center(&self, idx: usize) -> Complex64 {
        let step = 2.0 * self.half_width / self.res as f64;
        let ix = idx % self.res;
        let iy = idx / self.res;
        Complex64::new(
            -self.half_width + (ix as f64 + 0.5) * step,
            -self.half_width + (iy as f64 + 0.5) * step,
        )
    }

    /// Raster lookup. Points outside the bounding box belong to the
    /// unbounded component.
    pub fn classify(&self, r: Complex64) -> PointClass {
        match self.cell_of(r) {
            None => PointClass::Unbounded,
            Some(idx) => match self.labels[idx] {
                0 => PointClass::InRegion,
                1 => PointClass::Unbounded,
                k => PointClass::Bounded(k as usize - 2),
            },
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn bounded_count(&self) -> usize {
        self.components.iter().filter(|c| c.bounded).count()
    }

    pub fn unbounded_representative(&self) -> Complex64 {
        self.components
            .iter()
            .find(|c| !c.bounded)
            .map(|c| c.representative)
            .unwrap()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn max_sample_abs(&self) -> f64 {
        self.max_sample_abs
    }

    pub fn resolution(&self) -> usize {
        self.res
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Raster rows as `(re, im, label)` with the label coding of `labels`.
    pub fn raster_cells(&self) -> impl Iterator<Item = (f64, f64, u32)> + '_ {
        (0..self.res * self.res).map(move |idx| {
            let c = self.cell_center(idx);
            (c.re, c.im, self.labels[idx])
        })
    }
}

/// Sample and rasterize the vanishing region of the family `q + r` over
/// `T^2_{a,b}`.
pub fn build_region(
    q: &LaurentPoly,
    a: f64,
    b: f64,
    n_angles: usize,
    raster_res: usize,
) -> Result<RegionModel> {
    if q.n_vars() != 2 {
        return Err(Error::VarMismatch {
            left: q.n_vars(),
            right: 2,
        });
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidInput("torus radii must be positive".into()));
    }
    if n_angles < 256 || raster_res < 512 {
        return Err(Error::InvalidInput(
            "build_region needs n_angles >= 256 and raster_res >= 512".into(),
        ));
    }

    let tau = std::f64::consts::TAU;
    let rows: Vec<Vec<Complex64>> = (0..n_angles)
        .into_par_iter()
        .map(|i| {
            let x = Complex64::from_polar(a, tau * i as f64 / n_angles as f64);
            (0..n_angles)
                .map(|j| {
                    let y = Complex64::from_polar(b, tau * j as f64 / n_angles as f64);
                    -q.evaluate(&[x, y]).unwrap_or(Complex64::new(f64::NAN, 0.0))
                })
                .collect()
        })
        .collect();

    let mut samples = Vec::with_capacity(n_angles * n_angles);
    for row in &rows {
        samples.extend_from_slice(row);
    }
    let max_abs = samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
    if !max_abs.is_finite() {
        return Err(Error::InvalidInput(
            "region sampling produced non-finite values".into(),
        ));
    }

    // largest gap between neighboring samples (torus neighbors, with wrap)
    let mut gap: f64 = 0.0;
    for i in 0..n_angles {
        for j in 0..n_angles {
            let s = rows[i][j];
            gap = gap.max((rows[i][(j + 1) % n_angles] - s).norm());
            gap = gap.max((rows[(i + 1) % n_angles][j] - s).norm());
        }
    }

    let half_width = (max_abs + 1.0) * 1.02 + 1e-9;
    let res = raster_res;
    let step = 2.0 * half_width / res as f64;
    let mut occupied = vec![false; res * res];
    for s in &samples {
        let ix = (((s.re + half_width) / step) as usize).min(res - 1);
        let iy = (((s.im + half_width) / step) as usize).min(res - 1);
        occupied[iy * res + ix] = true;
    }

    // dilation wide enough to close inter-sample gaps, capped so thin
    // complement channels survive
    let dilate = ((gap / (2.0 * step)).ceil() as usize).clamp(1, 4);
    let mut dilated = occupied.clone();
    for iy in 0..res {
        for ix in 0..res {
            if occupied[iy * res + ix] {
                let y0 = iy.saturating_sub(dilate);
                let y1 = (iy + dilate).min(res - 1);
                let x0 = ix.saturating_sub(dilate);
                let x1 = (ix + dilate).min(res - 1);
                for yy in y0..=y1 {
                    for xx in x0..=x1 {
                        dilated[yy * res + xx] = true;
                    }
                }
            }
        }
    }
    let occupied = dilated;

    // complement labeling: flood from the box boundary first
    let mut labels = vec![0u32; res * res];
    let mut queue = VecDeque::new();
    for ix in 0..res {
        for iy in [0, res - 1] {
            for idx in [iy * res + ix, ix * res + iy] {
                if !occupied[idx] && labels[idx] == 0 {
                    labels[idx] = 1;
                    queue.push_back(idx);
                }
            }
        }
    }
    flood(&mut labels, &occupied, &mut queue, res);

    let mut next_label = 2u32;
    let mut sizes = vec![0usize; 2];
    for start in 0..res * res {
        if occupied[start] || labels[start] != 0 {
            continue;
        }
        labels[start] = next_label;
        let mut q2 = VecDeque::from([start]);
        flood(&mut labels, &occupied, &mut q2, res);
        next_label += 1;
        sizes.push(0);
    }
    for idx in 0..res * res {
        if !occupied[idx] && labels[idx] >= 1 {
            sizes[labels[idx] as usize] += 1;
        }
    }

    // distance transform from the region, for representatives
    let mut dist = vec![u32::MAX; res * res];
    let mut dq = VecDeque::new();
    for idx in 0..res * res {
        if occupied[idx] {
            dist[idx] = 0;
            dq.push_back(idx);
        }
    }
    while let Some(idx) = dq.pop_front() {
        let d = dist[idx];
        let (ix, iy) = (idx % res, idx / res);
        for (nx, ny) in neighbors4(ix, iy, res) {
            let nidx = ny * res + nx;
            if dist[nidx] == u32::MAX {
                dist[nidx] = d + 1;
                dq.push_back(nidx);
            }
        }
    }

    let mut best: Vec<(u32, usize)> = vec![(0, 0); next_label as usize];
    for idx in 0..res * res {
        let l = labels[idx] as usize;
        if !occupied[idx] && l >= 1 && dist[idx] != u32::MAX && dist[idx] > best[l].0 {
            best[l] = (dist[idx], idx);
        }
    }

    let model = RegionModel {
        samples,
        res,
        half_width,
        labels,
        components: Vec::new(),
        max_sample_abs: max_abs,
    };
    let mut components = Vec::new();
    for l in 1..next_label as usize {
        components.push(Component {
            bounded: l >= 2,
            representative: model.cell_center(best[l].1),
            cells: sizes[l],
        });
    }
    Ok(RegionModel { components, ..model })
}

fn neighbors4(ix: usize, iy: usize, res: usize) -> impl Iterator<Item = (usize, usize)> {
    let mut out = [(0usize, 0usize); 4];
    let mut n = 0;
    if ix > 0 {
        out[n] = (ix - 1, iy);
        n += 1;
    }
    if ix + 1 < res {
        out[n] = (ix + 1, iy);
        n += 1;
    }
    if iy > 0 {
        out[n] = (ix, iy - 1);
        n += 1;
    }
    if iy + 1 < res {
        out[n] = (ix, iy + 1);
        n += 1;
    }
    out.into_iter().take(n)
}

fn flood(labels: &mut [u32], occupied: &[bool], queue: &mut VecDeque<usize>, res: usize) {
    while let Some(idx) = queue.pop_front() {
        let l = labels[idx];
        let (ix, iy) = (idx % res, idx / res);
        for (nx, ny) in neighbors4(ix, iy, res) {
            let nidx = ny * res + nx;
            if !occupied[nidx] && labels[nidx] == 0 {
                labels[nidx] = l;
                queue.push_back(nidx);
            }
        }
    }
}

/// Closed-form extremes of the vanishing region of `x + 1/x + y + 1/y + r`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FamilyExtremes {
    /// max |r| over the region: a + 1/a + b + 1/b
    pub r_max: f64,
    /// min |r| over the region: |(a + 1/a) - (b + 1/b)|
    pub r_min: f64,
    /// max |Im r| over the region: |a - 1/a| + |b - 1/b|
    pub im_max: f64,
}

pub fn family_extremes(a: f64, b: f64) -> Result<FamilyExtremes> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidInput("radii must be positive".into()));
    }
    Ok(FamilyExtremes {
        r_max: a + 1.0 / a + b + 1.0 / b,
        r_min: ((a + 1.0 / a) - (b + 1.0 / b)).abs(),
        im_max: (a - 1.0 / a).abs() + (b - 1.0 / b).abs(),
    })
}

/// Whether the outer/inner boundaries of the family region are the exact
/// ellipses, per the hyperbolic-trig criteria in `x = log a`, `y = log b`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EllipseConditions {
    pub outer_ok: bool,
    pub inner_ok: bool,
}

pub fn ellipse_conditions(a: f64, b: f64) -> Result<EllipseConditions> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidInput("radii must be positive".into()));
    }
    if a == b {
        return Err(Error::PreconditionNotMet(
            "ellipse conditions require a != b".into(),
        ));
    }
    let (x, y) = (a.ln(), b.ln());
    let max_sinh2 = x.sinh().powi(2).max(y.sinh().powi(2));
    let outer_ok =
        ((x + y) / 2.0).sinh().powi(2) * (1.0 + x.cosh() * y.cosh()) >= max_sinh2;
    let inner_first =
        (y.tanh() * x.cosh()).abs().min((x.tanh() * y.cosh()).abs()) > 1.0;
    let inner_second =
        ((x + y) / 2.0).cosh().powi(2) * (x.cosh() * y.cosh() - 1.0) >= max_sinh2;
    Ok(EllipseConditions {
        outer_ok,
        inner_ok: inner_first && inner_second,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EllipseClass {
    InRegion,
    /// Strictly outside the outer ellipse (the unbounded component).
    Outside,
    /// Strictly inside the inner ellipse (the bounded component).
    Inside,
    /// The boundary conditions do not hold at (a, b); no closed-form answer.
    Undecidable,
}

/// Closed-form membership test for the family region when both ellipse
/// conditions hold: between the two ellipses with semi-axes
/// `2(cosh x ± cosh y)` and `2(sinh x ± sinh y)`.
pub fn ellipse_membership(r: Complex64, a: f64, b: f64) -> EllipseClass {
    let cond = match ellipse_conditions(a, b) {
        Ok(c) => c,
        Err(_) => return EllipseClass::Undecidable,
    };
    if !(cond.outer_ok && cond.inner_ok) {
        return EllipseClass::Undecidable;
    }
    let (x, y) = (a.ln(), b.ln());
    let outer = quad_form(r, x.cosh() + y.cosh(), x.sinh() + y.sinh());
    if outer > 4.0 {
        return EllipseClass::Outside;
    }
    let inner = quad_form(r, x.cosh() - y.cosh(), x.sinh() - y.sinh());
    if inner < 4.0 {
        return EllipseClass::Inside;
    }
    EllipseClass::InRegion
}

fn quad_form(r: Complex64, su: f64, sv: f64) -> f64 {
    (r.re / su).powi(2) + (r.im / sv).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::boyd_base;

    #[test]
    fn extremes_examples() {
        let e = family_extremes(1.0, 1.0).unwrap();
        assert_eq!((e.r_max, e.r_min, e.im_max), (4.0, 0.0, 0.0));

        let e = family_extremes(10.0, 4.0).unwrap();
        assert!((e.r_max - 14.35).abs() < 1e-12);
        assert!((e.r_min - 5.85).abs() < 1e-12);
        assert!((e.im_max - 13.65).abs() < 1e-12);

        let e = family_extremes(2.0, 0.5).unwrap();
        assert!(e.r_min.abs() < 1e-12);

        // recomputed: (1.5 + 2/3) - (1.07 + 1/1.07)
        let e = family_extremes(1.5, 1.07).unwrap();
        let want = (1.5 + 1.0 / 1.5) - (1.07 + 1.0 / 1.07);
        assert!((e.r_min - want).abs() < 1e-15, "{}", e.r_min);
        assert!((e.r_min - 0.162_087_227_414_33).abs() < 1e-12);
        assert!(e.r_min > 0.0);
    }

    #[test]
    fn ellipse_condition_examples() {
        let c = ellipse_conditions(10.0, 4.0).unwrap();
        assert!(c.outer_ok && c.inner_ok);

        let c = ellipse_conditions(1.5, 1.07).unwrap();
        assert!(!c.outer_ok && !c.inner_ok);

        assert!(matches!(
            ellipse_conditions(1.3, 1.3),
            Err(Error::PreconditionNotMet(_))
        ));
    }

    #[test]
    fn ellipse_membership_examples() {
        let z = |re: f64| Complex64::new(re, 0.0);
        assert_eq!(ellipse_membership(z(20.0), 10.0, 4.0), EllipseClass::Outside);
        assert_eq!(ellipse_membership(z(0.0), 10.0, 4.0), EllipseClass::Inside);
        assert_eq!(ellipse_membership(z(10.0), 10.0, 4.0), EllipseClass::InRegion);
        assert_eq!(
            ellipse_membership(z(1.0), 1.5, 1.07),
            EllipseClass::Undecidable
        );
    }

    #[test]
    fn region_components_along_the_family() {
        let q = boyd_base(2);

        // a = b = 1: the region is the segment [-4, 4]; no bounded holes
        let m = build_region(&q, 1.0, 1.0, 256, 512).unwrap();
        assert_eq!(m.bounded_count(), 0);
        assert_eq!(m.classify(Complex64::new(0.0, 0.0)), PointClass::InRegion);
        assert_eq!(m.classify(Complex64::new(6.0, 0.0)), PointClass::Unbounded);

        // (10, 4): exactly one bounded hole containing 0
        let m = build_region(&q, 10.0, 4.0, 512, 512).unwrap();
        assert_eq!(m.bounded_count(), 1);
        assert!(matches!(
            m.classify(Complex64::new(0.0, 0.0)),
            PointClass::Bounded(_)
        ));
        assert_eq!(m.classify(Complex64::new(20.0, 0.0)), PointClass::Unbounded);

        // (1.5, 1.07): r_min > 0, so the thin hole is present
        let m = build_region(&q, 1.5, 1.07, 1024, 1024).unwrap();
        assert_eq!(m.bounded_count(), 1);

        // (1.2, 1.1): r = 6 is beyond r_max ≈ 4.042
        let m = build_region(&q, 1.2, 1.1, 256, 512).unwrap();
        assert_eq!(m.classify(Complex64::new(6.0, 0.0)), PointClass::Unbounded);
    }

    #[test]
    fn representatives_sit_in_their_components() {
        let q = boyd_base(2);
        let m = build_region(&q, 10.0, 4.0, 512, 512).unwrap();
        for (k, comp) in m.components().iter().enumerate() {
            let class = m.classify(comp.representative);
            if comp.bounded {
                assert!(matches!(class, PointClass::Bounded(_)), "component {k}");
            } else {
                assert_eq!(class, PointClass::Unbounded, "component {k}");
            }
        }
    }
}
