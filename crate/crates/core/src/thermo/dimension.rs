use std::collections::HashSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::estimate::least_squares;
use crate::iteration::PointCloud;
use crate::par;
use crate::spatial::{median, median_nn_distance, PointIndex};
use crate::system::GeneratorSystem;

/// Metric in which derivative norms are measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Metric {
    #[default]
    Spherical,
    Euclidean,
}

impl Metric {
    /// `‖h'(w)‖` for `z = h(w)`.
    pub fn derivative_norm(self, w: Complex64, z: Complex64, dh: Complex64) -> f64 {
        match self {
            Metric::Euclidean => dh.norm(),
            Metric::Spherical => dh.norm() * (1.0 + w.norm_sqr()) / (1.0 + z.norm_sqr()),
        }
    }
}

/// One inverse-branch transfer `z_target ← w`, with `w` looked up at cloud point `source`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transfer {
    pub source: usize,
    pub generator: usize,
    /// `log ‖h_j'(w)‖`.
    pub log_norm: f64,
}

/// Nearest-neighbour discretization of `L_t φ(z) = Σ_j Σ_{h_j(w)=z} φ(w) ‖h_j'(w)‖^{-t}` on a
/// point cloud.
#[derive(Clone, Debug)]
pub struct TransferOperator {
    pub metric: Metric,
    /// `rows[i]` lists the transfers into cloud point `i`.
    pub rows: Vec<Vec<Transfer>>,
    /// Median distance from a preimage to the cloud point standing in for it.
    pub lookup_median: f64,
    pub cloud_median_nn: f64,
}

/// Allowed ratio of the median lookup distance to the cloud's own median spacing.
pub const MESH_FACTOR: f64 = 10.0;

impl TransferOperator {
    /// Builds the operator; fails with [`Error::SparseCloud`] when preimages land farther from
    /// the cloud than `mesh` (default `MESH_FACTOR ×` the cloud's median spacing).
    pub fn new(system: &GeneratorSystem, cloud: &PointCloud, metric: Metric, mesh: Option<f64>) -> Result<Self> {
        if cloud.len() < 2 {
            return Err(Error::InvalidParameter("transfer operator needs at least two cloud points".into()));
        }
        let index = PointIndex::new(&cloud.points);
        let built: Vec<Result<(Vec<Transfer>, Vec<f64>)>> = par::map_slice(&cloud.points, |&z| {
            let mut row = Vec::new();
            let mut lookups = Vec::new();
            for (j, h) in system.generators().iter().enumerate() {
                for w in h.preimages(z)? {
                    let (_, dh) = h.eval_with_derivative(w);
                    let (source, d) = index.nearest(w);
                    let norm = metric.derivative_norm(w, z, dh);
                    if !(norm > 0.0) {
                        return Err(Error::InvalidParameter(format!("critical point {w} on the cloud")));
                    }
                    row.push(Transfer { source, generator: j, log_norm: norm.ln() });
                    lookups.push(d);
                }
            }
            Ok((row, lookups))
        });
        let mut rows = Vec::with_capacity(cloud.len());
        let mut lookups = Vec::new();
        for b in built {
            let (row, d) = b?;
            rows.push(row);
            lookups.extend(d);
        }
        let lookup_median = median(&mut lookups);
        let cloud_median_nn = median_nn_distance(&cloud.points);
        let mesh = mesh.unwrap_or(MESH_FACTOR * cloud_median_nn);
        if lookup_median > mesh {
            return Err(Error::SparseCloud { median: lookup_median, mesh });
        }
        Ok(Self { metric, rows, lookup_median, cloud_median_nn })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `L_t v`.
    pub fn apply(&self, t: f64, v: &[f64]) -> Vec<f64> {
        par::map_slice(&self.rows, |row| row.iter().map(|tr| v[tr.source] * (-t * tr.log_norm).exp()).sum())
    }

    /// `v L_t` (the adjoint, acting on measures).
    pub fn apply_adjoint(&self, t: f64, nu: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; nu.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for tr in row {
                out[tr.source] += nu[i] * (-t * tr.log_norm).exp();
            }
        }
        out
    }

    /// Power iteration for the leading eigenvalue of `L_t`.
    pub fn spectral_state(&self, t: f64, max_sweeps: usize) -> Result<TransferOperatorState> {
        let (log_rho, vector, sweeps) = power_iterate(self.len(), max_sweeps, |v| self.apply(t, v))?;
        Ok(TransferOperatorState { t, log_rho, vector, sweeps, metric: self.metric })
    }
}

/// Converged right eigenvector of `L_t`, normalized in the sup-norm.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferOperatorState {
    pub t: f64,
    pub log_rho: f64,
    pub vector: Vec<f64>,
    pub sweeps: usize,
    pub metric: Metric,
}

const POWER_TOL: f64 = 1e-9;
/// Growth rates are averaged over this many sweeps, which also absorbs cyclic structure.
const WINDOW: usize = 8;

/// Returns `(log ρ, eigenvector, sweeps)`. The eigenvector is the average of the last
/// [`WINDOW`] normalized iterates.
pub(crate) fn power_iterate(
    n: usize,
    max_sweeps: usize,
    step: impl Fn(&[f64]) -> Vec<f64>,
) -> Result<(f64, Vec<f64>, usize)> {
    let mut v = vec![1.0; n];
    let mut logs: Vec<f64> = Vec::new();
    let mut history: Vec<Vec<f64>> = Vec::new();
    let mut previous = f64::NAN;
    for sweep in 1..=max_sweeps {
        let w = step(&v);
        let sup = w.iter().copied().fold(0.0, f64::max);
        if !(sup > 0.0) || !sup.is_finite() {
            return Err(Error::NonConvergence(format!("iterate degenerated at sweep {sweep}")));
        }
        logs.push(sup.ln());
        v = w.into_iter().map(|x| x / sup).collect();
        history.push(v.clone());
        if history.len() > WINDOW {
            history.remove(0);
        }
        if logs.len() >= WINDOW {
            let avg = logs[logs.len() - WINDOW..].iter().sum::<f64>() / WINDOW as f64;
            if (avg - previous).abs() <= POWER_TOL * avg.abs().max(1.0) {
                let mut vec = vec![0.0; n];
                for h in &history {
                    for (a, b) in vec.iter_mut().zip(h) {
                        *a += b / WINDOW as f64;
                    }
                }
                return Ok((avg, vec, sweep));
            }
            previous = avg;
        }
    }
    Err(Error::NonConvergence(format!("no convergence after {max_sweeps} sweeps")))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BowenOptions {
    pub metric: Metric,
    pub bracket: (f64, f64),
    /// Bisection stops once `|log ρ(L_t)| ≤ tol`.
    pub tol: f64,
    pub mesh: Option<f64>,
    pub max_sweeps: usize,
}

impl Default for BowenOptions {
    fn default() -> Self {
        Self { metric: Metric::Spherical, bracket: (0.2, 1.99), tol: 1e-3, mesh: None, max_sweeps: 2000 }
    }
}

#[derive(Clone, Debug)]
pub struct BowenResult {
    pub delta: f64,
    /// Every `(t, log ρ(L_t))` evaluated, in order.
    pub trace: Vec<(f64, f64)>,
    pub state: TransferOperatorState,
}

/// Root of `t ↦ log ρ(L_t)` by bisection, which estimates the Hausdorff dimension of the
/// Julia set for hyperbolic systems.
pub fn bowen_dimension(op: &TransferOperator, options: &BowenOptions) -> Result<BowenResult> {
    let (mut lo, mut hi) = options.bracket;
    let mut trace = Vec::new();
    let eval = |t: f64, trace: &mut Vec<(f64, f64)>| -> Result<TransferOperatorState> {
        let s = op.spectral_state(t, options.max_sweeps)?;
        trace.push((t, s.log_rho));
        Ok(s)
    };
    let s_lo = eval(lo, &mut trace)?;
    let s_hi = eval(hi, &mut trace)?;
    if !(s_lo.log_rho > 0.0 && s_hi.log_rho < 0.0) {
        return Err(Error::Bracket { lo, hi, f_lo: s_lo.log_rho, f_hi: s_hi.log_rho });
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let s = eval(mid, &mut trace)?;
        if s.log_rho.abs() <= options.tol {
            return Ok(BowenResult { delta: mid, trace, state: s });
        }
        if s.log_rho > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence("bisection exhausted".into()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxCount {
    pub dimension: f64,
    /// `(ε, N(ε))` per scale.
    pub counts: Vec<(f64, usize)>,
}

/// Minimum cloud size for a box-counting estimate.
pub const BOX_MIN_POINTS: usize = 10_000;

/// Least-squares slope of `log N(ε)` against `log(1/ε)`, with `N(ε)` the number of occupied
/// grid boxes of side `ε`.
pub fn box_counting_dim(cloud: &PointCloud, scales: &[f64]) -> Result<BoxCount> {
    if scales.len() < 2 {
        return Err(Error::DegenerateFit("need at least two scales".into()));
    }
    if cloud.len() < BOX_MIN_POINTS {
        return Err(Error::InvalidParameter(format!(
            "box counting needs ≥ {BOX_MIN_POINTS} points, got {}",
            cloud.len()
        )));
    }
    if scales.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidParameter("scales must be positive".into()));
    }
    let counts: Vec<(f64, usize)> = par::map_slice(scales, |&eps| {
        let boxes: HashSet<(i64, i64)> =
            cloud.points.iter().map(|z| ((z.re / eps).floor() as i64, (z.im / eps).floor() as i64)).collect();
        (eps, boxes.len())
    });
    let fit: Vec<(f64, f64)> = counts.iter().map(|&(e, n)| ((1.0 / e).ln(), (n as f64).ln())).collect();
    let (dimension, _) = least_squares(&fit)?;
    Ok(BoxCount { dimension, counts })
}

/// Geometric scales `ε_k = coarse · ratio^k`.
pub fn geometric_scales(coarse: f64, fine: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![coarse];
    }
    let ratio = (fine / coarse).powf(1.0 / (count - 1) as f64);
    (0..count).map(|k| coarse * ratio.powi(k as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iteration::julia_backward_cloud;
    use crate::scenes;

    #[test]
    fn circle_has_dimension_one() {
        let sys = scenes::circle_system();
        let cloud = julia_backward_cloud(&sys, 4000, 64, 1).unwrap();
        let op = TransferOperator::new(&sys, &cloud, Metric::Spherical, None).unwrap();
        let s = op.spectral_state(0.5, 500).unwrap();
        assert!((s.log_rho - 0.5 * std::f64::consts::LN_2).abs() < 1e-9);
        let res = bowen_dimension(&op, &BowenOptions::default()).unwrap();
        assert!((res.delta - 1.0).abs() < 0.02, "{}", res.delta);
        assert!(res.trace.len() >= 3);
    }

    #[test]
    fn bracket_must_straddle() {
        let sys = scenes::circle_system();
        let cloud = julia_backward_cloud(&sys, 1000, 64, 1).unwrap();
        let op = TransferOperator::new(&sys, &cloud, Metric::Euclidean, None).unwrap();
        let opts = BowenOptions { bracket: (1.2, 1.9), ..Default::default() };
        assert!(matches!(bowen_dimension(&op, &opts), Err(Error::Bracket { .. })));
    }

    #[test]
    fn sparse_cloud_rejected() {
        let sys = scenes::circle_system();
        let pts = vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)];
        let cloud = PointCloud::uniform(pts, vec![0; 3]).unwrap();
        let err = TransferOperator::new(&sys, &cloud, Metric::Spherical, Some(1e-3)).unwrap_err();
        assert!(matches!(err, Error::SparseCloud { .. }));
    }

    #[test]
    fn box_counting_circle_and_segment() {
        for sys in [scenes::circle_system(), scenes::chebyshev_system()] {
            let cloud = julia_backward_cloud(&sys, 100_000, 64, 2).unwrap();
            let bc = box_counting_dim(&cloud, &geometric_scales(0.1, 0.005, 6)).unwrap();
            assert!((bc.dimension - 1.0).abs() < 0.05, "{}", bc.dimension);
        }
    }

    #[test]
    fn box_counting_preconditions() {
        let cloud = PointCloud::uniform(vec![Complex64::new(0.0, 0.0); 10], vec![0; 10]).unwrap();
        assert!(box_counting_dim(&cloud, &[0.1, 0.01]).is_err());
    }
}
