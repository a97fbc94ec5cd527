//! Pass/fail checks of structural properties on a concrete scene.
//!
//! Every check is deterministic and reports the measured quantity next to its threshold so
//! that failures can be judged by their margin.

use std::collections::VecDeque;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::iteration::{EscapeParams, PointCloud};
use crate::markov::{m_tau_apply, Raster};
use crate::par;
use crate::spatial::{median_nn_distance, PointIndex};
use crate::system::{stream_rng, GeneratorSystem, RandomModel};
use crate::thermo::Metric;

/// Uniform record of one check, for batteries and reports.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (measured {:.6e}, threshold {:.6e}){}",
            self.name,
            if self.pass { "pass" } else { "FAIL" },
            self.measured,
            self.threshold,
            if self.detail.is_empty() { String::new() } else { format!("; {}", self.detail) }
        )
    }
}

fn all_preimages(system: &GeneratorSystem, points: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
    let per_point: Vec<Result<Vec<Vec<Complex64>>>> =
        par::map_slice(points, |&z| system.generators().iter().map(|h| h.preimages(z)).collect::<Result<Vec<_>>>());
    let mut sets = vec![Vec::new(); system.len()];
    for p in per_point {
        for (j, roots) in p?.into_iter().enumerate() {
            sets[j].extend(roots);
        }
    }
    Ok(sets)
}

/// Largest distance from a point of `a` to the set `b`.
fn directed_hausdorff(a: &[Complex64], b: &PointIndex) -> f64 {
    par::map_slice(a, |&z| b.nearest(z).1).into_iter().fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelfSimilarityReport {
    /// `sup_{x ∈ cloud} d(x, ⋃ h_j^{-1}(cloud))`.
    pub cloud_to_preimages: f64,
    /// `sup_{w ∈ ⋃ h_j^{-1}(cloud)} d(w, cloud)`.
    pub preimages_to_cloud: f64,
    pub tol: f64,
}

impl SelfSimilarityReport {
    pub fn distance(&self) -> f64 {
        self.cloud_to_preimages.max(self.preimages_to_cloud)
    }

    pub fn pass(&self) -> bool {
        self.distance() <= self.tol
    }

    pub fn outcome(&self) -> CheckOutcome {
        CheckOutcome {
            name: "backward self-similarity".into(),
            pass: self.pass(),
            measured: self.distance(),
            threshold: self.tol,
            detail: format!(
                "cloud→preimages {:.3e}, preimages→cloud {:.3e}",
                self.cloud_to_preimages, self.preimages_to_cloud
            ),
        }
    }
}

/// Symmetric Hausdorff distance between a cloud and the union of its preimages.
pub fn check_backward_self_similarity(
    system: &GeneratorSystem,
    cloud: &PointCloud,
    tol: f64,
) -> Result<SelfSimilarityReport> {
    let pre: Vec<Complex64> = all_preimages(system, &cloud.points)?.concat();
    let cloud_to_preimages = directed_hausdorff(&cloud.points, &PointIndex::new(&pre));
    let preimages_to_cloud = directed_hausdorff(&pre, &PointIndex::new(&cloud.points));
    Ok(SelfSimilarityReport { cloud_to_preimages, preimages_to_cloud, tol })
}

/// Margin required by [`check_disjoint_preimages`], in units of the median spacing.
pub const DISJOINT_MARGIN_FACTOR: f64 = 5.0;

#[derive(Clone, Debug, PartialEq)]
pub struct DisjointReport {
    /// Minimum over `i < j` of `d(h_i^{-1}(cloud), h_j^{-1}(cloud))`.
    pub min_distance: f64,
    pub required: f64,
    pub closest_pair: (usize, usize),
}

impl DisjointReport {
    pub fn pass(&self) -> bool {
        self.min_distance > 0.0 && self.min_distance >= self.required
    }

    pub fn outcome(&self) -> CheckOutcome {
        CheckOutcome {
            name: "disjoint preimages".into(),
            pass: self.pass(),
            measured: self.min_distance,
            threshold: self.required,
            detail: format!("closest pieces {} and {}", self.closest_pair.0 + 1, self.closest_pair.1 + 1),
        }
    }
}

/// Separation of the generator-wise preimages of the cloud; the margin must be at least
/// [`DISJOINT_MARGIN_FACTOR`] times the cloud's median nearest-neighbour distance.
pub fn check_disjoint_preimages(system: &GeneratorSystem, cloud: &PointCloud) -> Result<DisjointReport> {
    if system.len() < 2 {
        return Err(Error::InvalidParameter("disjointness needs at least two generators".into()));
    }
    let sets = all_preimages(system, &cloud.points)?;
    let mut best = (f64::INFINITY, (0, 1));
    for j in 1..sets.len() {
        let index = PointIndex::new(&sets[j]);
        for (i, set) in sets.iter().enumerate().take(j) {
            let d = par::map_slice(set, |&w| index.nearest(w).1).into_iter().fold(f64::INFINITY, f64::min);
            if d < best.0 {
                best = (d, (i, j));
            }
        }
    }
    Ok(DisjointReport {
        min_distance: best.0,
        required: DISJOINT_MARGIN_FACTOR * median_nn_distance(&cloud.points),
        closest_pair: best.1,
    })
}

/// Open region used as the candidate set of the open set condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    /// `{inner < |z - center| < outer}`.
    Annulus { center: Complex64, inner: f64, outer: f64 },
}

impl Region {
    pub fn annulus(inner: f64, outer: f64) -> Self {
        Region::Annulus { center: Complex64::new(0.0, 0.0), inner, outer }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            Region::Annulus { center, inner, outer } => {
                let r = (z - center).norm();
                inner < r && r < outer
            }
        }
    }

    /// Uniform (by area) random point of the region.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match *self {
            Region::Annulus { center, inner, outer } => loop {
                let r = (inner * inner + rng.random::<f64>() * (outer * outer - inner * inner)).sqrt();
                let z = center + Complex64::from_polar(r, std::f64::consts::TAU * rng.random::<f64>());
                if self.contains(z) {
                    return z;
                }
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OpenSetReport {
    pub samples: usize,
    /// Samples with a preimage outside the region.
    pub escaping: usize,
    /// Samples with a preimage `w` under `h_i` that also lies in `h_j^{-1}(U)` for `j ≠ i`.
    pub overlapping: usize,
    pub first_violation: Option<Complex64>,
}

impl OpenSetReport {
    pub fn pass(&self) -> bool {
        self.escaping == 0 && self.overlapping == 0
    }

    pub fn outcome(&self) -> CheckOutcome {
        CheckOutcome {
            name: "open set condition".into(),
            pass: self.pass(),
            measured: (self.escaping + self.overlapping) as f64,
            threshold: 0.0,
            detail: format!("{} samples, {} escaping, {} overlapping", self.samples, self.escaping, self.overlapping),
        }
    }
}

/// Samples `U` and checks `h_j^{-1}(U) ⊂ U` for every `j` and `h_i^{-1}(U) ∩ h_j^{-1}(U) = ∅`
/// for `i ≠ j`. Overlap is tested exactly per preimage: `w ∈ h_i^{-1}(U)` lies in
/// `h_j^{-1}(U)` iff `h_j(w) ∈ U`.
pub fn check_open_set_condition(
    system: &GeneratorSystem,
    region: &Region,
    samples: usize,
    rng_seed: u64,
) -> Result<OpenSetReport> {
    let parts = crate::estimate::chunks(samples as u64, crate::estimate::MC_CHUNKS);
    let results: Vec<Result<(usize, usize, Option<Complex64>)>> = par::map_slice(&parts, |&(chunk, n)| {
        let mut rng = stream_rng(rng_seed, chunk);
        let (mut escaping, mut overlapping, mut first) = (0, 0, None);
        for _ in 0..n {
            let z = region.sample(&mut rng);
            let (mut esc, mut ovl) = (false, false);
            for (i, h) in system.generators().iter().enumerate() {
                for w in h.preimages(z)? {
                    esc |= !region.contains(w);
                    ovl |= system.generators().iter().enumerate().any(|(j, g)| j != i && region.contains(g.eval(w)));
                }
            }
            if esc || ovl {
                first = first.or(Some(z));
            }
            escaping += esc as usize;
            overlapping += ovl as usize;
        }
        Ok((escaping, overlapping, first))
    });
    let mut report = OpenSetReport { samples, escaping: 0, overlapping: 0, first_violation: None };
    for r in results {
        let (e, o, f) = r?;
        report.escaping += e;
        report.overlapping += o;
        report.first_violation = report.first_violation.or(f);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointReport {
    /// `sup |T − M_τ T|` (interval gap) over resolved pixels.
    pub residual: f64,
    /// `sup (gap − 2·max width − modulus)`; the check passes when this is ≤ 0.
    pub excess: f64,
    pub max_width: f64,
    pub max_modulus: f64,
    pub unresolved: usize,
    pub pixels: usize,
}

impl FixedPointReport {
    pub fn pass(&self) -> bool {
        self.excess <= 0.0
    }

    pub fn unresolved_fraction(&self) -> f64 {
        self.unresolved as f64 / self.pixels as f64
    }

    pub fn outcome(&self) -> CheckOutcome {
        CheckOutcome {
            name: "fixed point of M_tau".into(),
            pass: self.pass(),
            measured: self.residual,
            threshold: self.residual - self.excess,
            detail: format!("max width {:.3e}, unresolved {}/{} pixels", self.max_width, self.unresolved, self.pixels),
        }
    }
}

/// Compares a raster of `T∞,τ` with its image under `M_τ`. At each resolved pixel the gap
/// must not exceed `2 · max cell width + local interpolation modulus`.
pub fn check_fixed_point(raster: &Raster, model: &RandomModel, params: &EscapeParams) -> FixedPointReport {
    let image = m_tau_apply(raster, model, params);
    let max_width = raster.max_width();
    let (mut residual, mut excess, mut max_modulus, mut unresolved): (f64, f64, f64, usize) =
        (0.0, f64::NEG_INFINITY, 0.0, 0);
    for k in 0..raster.cells.len() {
        if image.unresolved[k] {
            unresolved += 1;
            continue;
        }
        let gap = raster.cells[k].distance(&image.raster.cells[k]);
        residual = residual.max(gap);
        max_modulus = max_modulus.max(image.modulus[k]);
        excess = excess.max(gap - 2.0 * max_width - image.modulus[k]);
    }
    FixedPointReport { residual, excess, max_width, max_modulus, unresolved, pixels: raster.cells.len() }
}

/// Per-pixel minimum and maximum of midpoints over the 3x3 neighbourhood.
fn neighbourhood_range(raster: &Raster) -> (Vec<f64>, Vec<f64>) {
    let (nx, ny) = (raster.nx, raster.ny);
    par::map_range(nx * ny, |k| {
        let (ix, iy) = (k % nx, k / nx);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for y in iy.saturating_sub(1)..(iy + 2).min(ny) {
            for x in ix.saturating_sub(1)..(ix + 2).min(nx) {
                let m = raster.get(x, y).mid();
                lo = lo.min(m);
                hi = hi.max(m);
            }
        }
        (lo, hi)
    })
    .into_iter()
    .unzip()
}

/// Pixels where `T` is not locally constant: the oscillation of midpoints over the 3x3
/// neighbourhood exceeds `2 · band_eps`.
pub fn julia_band(raster: &Raster, band_eps: f64) -> Vec<bool> {
    let (lo, hi) = neighbourhood_range(raster);
    lo.iter().zip(&hi).map(|(l, h)| h - l > 2.0 * band_eps).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelOrderReport {
    pub t1: f64,
    pub t2: f64,
    pub band_eps: f64,
    /// Julia-band pixels near level `t1`, and barrier pixels straddling `t2`.
    pub s1_pixels: usize,
    pub s2_pixels: usize,
    /// Pixels of the `t1` band reachable from the border without crossing the `t2` band.
    pub reached: usize,
    pub resolution: (usize, usize),
}

impl LevelOrderReport {
    pub fn pass(&self) -> bool {
        self.reached == 0
    }

    pub fn outcome(&self) -> CheckOutcome {
        CheckOutcome {
            name: format!("level order {} < {}", self.t1, self.t2),
            pass: self.pass(),
            measured: self.reached as f64,
            threshold: 0.0,
            detail: format!(
                "{} level pixels, {} barrier pixels at {}x{}",
                self.s1_pixels, self.s2_pixels, self.resolution.0, self.resolution.1
            ),
        }
    }
}

/// Checks that the level set `T = t1` lies in the bounded complementary components of
/// `T = t2`: an 8-connected flood fill from the raster border must not reach a Julia-band
/// pixel with `|T − t1| ≤ band_eps`. The barrier is every pixel whose 3x3 range of midpoints,
/// widened by `band_eps`, contains `t2`, so that no 8-connected path can change sides of the
/// level `t2` without meeting it.
pub fn check_level_order(raster: &Raster, t1: f64, t2: f64, band_eps: f64) -> Result<LevelOrderReport> {
    if !(0.0..=1.0).contains(&t1) || !(0.0..=1.0).contains(&t2) || t1 == t2 {
        return Err(Error::InvalidParameter(format!("levels {t1}, {t2} must be distinct points of [0, 1]")));
    }
    let band = julia_band(raster, band_eps);
    let n = raster.cells.len();
    let s1: Vec<bool> = (0..n).map(|k| band[k] && (raster.cells[k].mid() - t1).abs() <= band_eps).collect();
    let (lo, hi) = neighbourhood_range(raster);
    let s2: Vec<bool> = (0..n).map(|k| lo[k] - band_eps <= t2 && t2 <= hi[k] + band_eps).collect();
    let (s1_pixels, s2_pixels) = (s1.iter().filter(|&&b| b).count(), s2.iter().filter(|&&b| b).count());
    if s1_pixels == 0 || s2_pixels == 0 {
        return Err(Error::InvalidParameter(format!("empty level band ({s1_pixels} / {s2_pixels} pixels)")));
    }
    let (nx, ny) = (raster.nx, raster.ny);
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for iy in 0..ny {
        for ix in 0..nx {
            if (ix == 0 || iy == 0 || ix == nx - 1 || iy == ny - 1) && !s2[iy * nx + ix] {
                seen[iy * nx + ix] = true;
                queue.push_back((ix, iy));
            }
        }
    }
    while let Some((ix, iy)) = queue.pop_front() {
        for y in iy.saturating_sub(1)..(iy + 2).min(ny) {
            for x in ix.saturating_sub(1)..(ix + 2).min(nx) {
                let k = y * nx + x;
                if !seen[k] && !s2[k] {
                    seen[k] = true;
                    queue.push_back((x, y));
                }
            }
        }
    }
    let reached = (0..n).filter(|&k| seen[k] && s1[k]).count();
    Ok(LevelOrderReport { t1, t2, band_eps, s1_pixels, s2_pixels, reached, resolution: (nx, ny) })
}

/// Histogram bin width of [`check_range_full`].
pub const RANGE_BIN: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct RangeReport {
    /// Julia-band pixel counts per bin of width [`RANGE_BIN`].
    pub bins: Vec<usize>,
    pub band_pixels: usize,
}

impl RangeReport {
    pub fn pass(&self) -> bool {
        self.bins.iter().all(|&c| c > 0)
    }

    pub fn empty_bins(&self) -> usize {
        self.bins.iter().filter(|&&c| c == 0).count()
    }

    pub fn outcome(&self) -> CheckOutcome {
        CheckOutcome {
            name: "range covers [0,1]".into(),
            pass: self.pass(),
            measured: self.empty_bins() as f64,
            threshold: 0.0,
            detail: format!(
                "{} empty bins of {}, {} band pixels",
                self.empty_bins(),
                self.bins.len(),
                self.band_pixels
            ),
        }
    }
}

/// Histogram of `T` midpoints over the Julia band.
pub fn check_range_full(raster: &Raster, band_eps: f64) -> RangeReport {
    let n_bins = (1.0 / RANGE_BIN).round() as usize;
    let band = julia_band(raster, band_eps);
    let mut bins = vec![0; n_bins];
    let mut band_pixels = 0;
    for (k, c) in raster.cells.iter().enumerate() {
        if band[k] {
            band_pixels += 1;
            bins[((c.mid() / RANGE_BIN) as usize).min(n_bins - 1)] += 1;
        }
    }
    RangeReport { bins, band_pixels }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlobalHoelderReport {
    /// Largest `t` with `(max p_j)(max ‖h_j'‖_s)^t < 1`, shrunk by 1%.
    pub t_admissible: f64,
    pub max_derivative: f64,
    /// `max |T(z_1) − T(z_2)| / d(z_1, z_2)^t` over the sampled pairs.
    pub constant: f64,
    pub pairs: usize,
}

impl GlobalHoelderReport {
    pub fn pass(&self) -> bool {
        self.t_admissible > 0.0 && self.constant.is_finite()
    }

    pub fn outcome(&self) -> CheckOutcome {
        CheckOutcome {
            name: "global Hoelder bound".into(),
            pass: self.pass(),
            measured: self.constant,
            threshold: f64::INFINITY,
            detail: format!("t = {:.4}, max derivative {:.4}", self.t_admissible, self.max_derivative),
        }
    }
}

/// Extracts an admissible Hölder exponent from the weights and the maximal spherical
/// derivative on the pieces `h_j^{-1}(J)` (read off the cloud provenance), then measures the
/// Hölder constant over `pairs` random pairs near the cloud at scales `10^{-1}…10^{-4}`.
/// Interval noise is subtracted from each difference.
pub fn check_global_hoelder(
    model: &RandomModel,
    evaluator: impl Fn(Complex64) -> Interval + Sync,
    cloud: &PointCloud,
    pairs: usize,
    rng_seed: u64,
) -> Result<GlobalHoelderReport> {
    if cloud.is_empty() {
        return Err(Error::InvalidParameter("global Hoelder check needs a cloud".into()));
    }
    let sys = model.system();
    let max_derivative = par::map_range(cloud.len(), |k| {
        let y = cloud.points[k];
        let (z, dh) = sys.get(cloud.provenance[k]).eval_with_derivative(y);
        Metric::Spherical.derivative_norm(y, z, dh)
    })
    .into_iter()
    .fold(0.0, f64::max);
    let p_max = model.weights().iter().copied().fold(0.0, f64::max);
    let t_admissible = if max_derivative <= 1.0 { 1.0 } else { (0.99 * -p_max.ln() / max_derivative.ln()).min(1.0) };
    let ratios = par::map_range(pairs, |i| {
        let mut rng = stream_rng(rng_seed, i as u64);
        let base = cloud.points[rng.random_range(0..cloud.len())];
        let z1 = base + Complex64::from_polar(1e-3 * rng.random::<f64>(), std::f64::consts::TAU * rng.random::<f64>());
        let d = 10f64.powf(-1.0 - 3.0 * rng.random::<f64>());
        let z2 = z1 + Complex64::from_polar(d, std::f64::consts::TAU * rng.random::<f64>());
        let (a, b) = (evaluator(z1), evaluator(z2));
        let diff = ((a.mid() - b.mid()).abs() - 0.5 * (a.width() + b.width())).max(0.0);
        diff / d.powf(t_admissible)
    });
    let constant = ratios.into_iter().fold(0.0, f64::max);
    Ok(GlobalHoelderReport { t_admissible, max_derivative, constant, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iteration::julia_backward_cloud;
    use crate::markov::{t_raster, BBox};
    use crate::poly::Polynomial;
    use crate::scenes;

    fn circle_cloud(n: usize) -> PointCloud {
        let pts: Vec<Complex64> =
            (0..n).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)).collect();
        PointCloud::uniform(pts, vec![0; n]).unwrap()
    }

    #[test]
    fn circle_is_backward_self_similar() {
        let sys = scenes::circle_system();
        let report = check_backward_self_similarity(&sys, &circle_cloud(80_000), 1e-4).unwrap();
        assert!(report.pass(), "{report:?}");
    }

    #[test]
    fn corrupted_cloud_fails_self_similarity() {
        let sys = scenes::circle_system();
        let mut cloud = circle_cloud(20_000);
        for k in (0..cloud.len()).step_by(10) {
            cloud.points[k] += Complex64::new(0.2, 0.0);
        }
        let report = check_backward_self_similarity(&sys, &cloud, 1e-3).unwrap();
        assert!(!report.pass());
    }

    #[test]
    fn two_attractor_preimages_are_one_apart() {
        let sys = scenes::two_attractors_system();
        let report = check_disjoint_preimages(&sys, &circle_cloud(4000)).unwrap();
        assert!((report.min_distance - 1.0).abs() < 1e-9, "{report:?}");
        assert!(report.pass());
    }

    #[test]
    fn open_set_examples() {
        let circle = scenes::circle_system();
        assert!(check_open_set_condition(&circle, &Region::annulus(0.5, 2.0), 2000, 1).unwrap().pass());
        let dc1 = scenes::dc1_system();
        assert!(check_open_set_condition(&dc1, &Region::annulus(0.4, 4.0), 2000, 1).unwrap().pass());
        let z4 = GeneratorSystem::new(vec![Polynomial::monomial(2), Polynomial::monomial(4)]).unwrap();
        let report = check_open_set_condition(&z4, &Region::annulus(0.9, 1.1), 2000, 1).unwrap();
        assert!(!report.pass());
        assert!(report.overlapping > 0);
    }

    #[test]
    fn fixed_point_negative_control() {
        let model = RandomModel::uniform(scenes::two_attractors_system());
        let params = EscapeParams::certified(model.system(), Some(scenes::two_attractors_trap()), 200).unwrap();
        let mut raster = t_raster(&model, &params, BBox::square(3.0), 64, 64, 16).unwrap();
        assert!(check_fixed_point(&raster, &model, &params).pass());
        let centre = raster.index(32, 32);
        raster.cells[centre] = Interval::ONE;
        assert!(!check_fixed_point(&raster, &model, &params).pass());
    }

    #[test]
    fn radial_scene_orders_levels() {
        // T(z) = clamp(|z| - 1, 0, 1) on the plane: levels are nested circles.
        let bbox = BBox::square(2.5);
        let mut raster = Raster::constant(bbox, 200, 200, Interval::ZERO);
        for iy in 0..200 {
            for ix in 0..200 {
                let v = (raster.center(ix, iy).norm() - 1.0).clamp(0.0, 1.0);
                let k = raster.index(ix, iy);
                raster.cells[k] = Interval::point(v);
            }
        }
        assert!(check_level_order(&raster, 0.25, 0.75, 0.02).unwrap().pass());
        assert!(!check_level_order(&raster, 0.75, 0.25, 0.02).unwrap().pass());
        assert!(check_range_full(&raster, 0.005).pass());
    }

    #[test]
    fn constant_raster_has_no_range() {
        let raster = Raster::constant(BBox::square(1.0), 50, 50, Interval::ONE);
        let report = check_range_full(&raster, 0.02);
        assert_eq!(report.band_pixels, 0);
        assert!(!report.pass());
        assert!(check_level_order(&raster, 0.25, 0.75, 0.02).is_err());
    }

    #[test]
    fn dc1_global_hoelder() {
        let model = scenes::dc1_model(0.5);
        let params = EscapeParams::certified(model.system(), Some(scenes::dc1_trap()), 24).unwrap();
        let cloud = julia_backward_cloud(model.system(), 4000, 64, 3).unwrap();
        let eval = |z| crate::markov::t_infinity_exact(z, &model, &params, 12);
        let report = check_global_hoelder(&model, eval, &cloud, 200, 1).unwrap();
        assert!(report.t_admissible > 0.0);
        assert!(report.pass(), "{report:?}");
    }
}
