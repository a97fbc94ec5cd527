use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::estimate::least_squares;
use crate::interval::Interval;
use crate::iteration::{EscapeParams, PointCloud};
use crate::par;
use crate::system::{stream_rng, RandomModel};

use super::dimension::{power_iterate, TransferOperator};

/// Closed-form exponent `u(h,p,μ) = (−Σ p_j log p_j) / (Σ p_j log deg h_j + ∫Ω)`.
pub fn hoelder_entropy(model: &RandomModel, omega_int: f64) -> Result<f64> {
    let w = model.weights();
    let numerator: f64 = -w.iter().map(|p| p * p.ln()).sum::<f64>();
    let denominator: f64 =
        w.iter().zip(model.system().generators()).map(|(p, h)| p * (h.degree() as f64).ln()).sum::<f64>() + omega_int;
    if !(denominator > 0.0) {
        return Err(Error::NonpositiveDenominator(denominator));
    }
    Ok(numerator / denominator)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NondiffConditions {
    /// `Σ p_j log(p_j deg h_j) > 0`.
    pub entropy_exceeds: bool,
    /// Postcritical orbits stayed inside the escape disk along every sampled word.
    pub postcritical_bounded: bool,
    /// Exactly two generators.
    pub two_generators: bool,
}

impl NondiffConditions {
    pub fn any(&self) -> bool {
        self.entropy_exceeds || self.postcritical_bounded || self.two_generators
    }
}

/// Checks the three alternative hypotheses under which the unitary eigenfunctions are
/// nowhere differentiable on a dense set when `u < 1`. The boundedness of the postcritical
/// set is a probabilistic certificate over `words` random words of length `depth`.
pub fn nondiff_conditions(
    model: &RandomModel,
    params: &EscapeParams,
    words: usize,
    depth: usize,
    rng_seed: u64,
) -> Result<NondiffConditions> {
    let sys = model.system();
    let entropy_exceeds =
        model.weights().iter().zip(sys.generators()).map(|(p, h)| p * (p * h.degree() as f64).ln()).sum::<f64>() > 0.0;
    let values = sys.critical_values()?;
    let escaped = par::map_range(words, |w| {
        let mut rng = stream_rng(rng_seed, w as u64);
        let mut zs = values.clone();
        for _ in 0..depth {
            let h = sys.get(model.sample_index(&mut rng));
            for z in zs.iter_mut() {
                *z = h.eval(*z);
                if !(z.norm() <= params.radius) {
                    return true;
                }
            }
        }
        false
    });
    Ok(NondiffConditions {
        entropy_exceeds,
        postcritical_bounded: !escaped.iter().any(|&e| e),
        two_generators: sys.len() == 2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    NondifferentiableDense,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HoelderReport {
    pub u_entropy: f64,
    /// `None` when the transfer-operator estimate was not requested or failed.
    pub u_hausdorff: Option<f64>,
    pub omega_integral: (f64, f64),
    pub conditions: NondiffConditions,
    pub verdict: Verdict,
}

impl HoelderReport {
    pub fn new(
        u_entropy: f64,
        u_hausdorff: Option<f64>,
        omega_integral: (f64, f64),
        conditions: NondiffConditions,
    ) -> Self {
        let verdict =
            if conditions.any() && u_entropy < 1.0 { Verdict::NondifferentiableDense } else { Verdict::Inconclusive };
        Self { u_entropy, u_hausdorff, omega_integral, conditions, verdict }
    }
}

/// Fraction of transfers allowed to land on a cloud point of a different piece.
pub const PIECE_MISMATCH_LIMIT: f64 = 0.02;

#[derive(Clone, Debug, PartialEq)]
pub struct HausdorffExponent {
    pub u: f64,
    /// Conformal mass of each piece `h_j^{-1}(J)`.
    pub piece_mass: Vec<f64>,
    /// `min α / max α` over the cloud.
    pub alpha_ratio: f64,
}

/// Exponent `u(h,p,ρ̃)` from the conformal measure `ν` (left eigenvector of `L_δ`) and the
/// density `α` (right eigenvector):
/// `−Σ_j log p_j ∫_{piece j} α dν / Σ_j ∫_{piece j} α log‖h_j'‖ dν`.
/// Pieces are read off the cloud provenance.
pub fn hoelder_hausdorff(
    model: &RandomModel,
    cloud: &PointCloud,
    op: &TransferOperator,
    delta: f64,
    max_sweeps: usize,
) -> Result<HausdorffExponent> {
    if op.len() != cloud.len() {
        return Err(Error::InvalidParameter("operator and cloud differ in size".into()));
    }
    let mut mismatched = 0;
    let mut total = 0;
    for row in &op.rows {
        for tr in row {
            total += 1;
            if cloud.provenance[tr.source] != tr.generator {
                mismatched += 1;
            }
        }
    }
    if mismatched as f64 > PIECE_MISMATCH_LIMIT * total as f64 {
        return Err(Error::AmbiguousPieces { mismatched, total });
    }
    let alpha = op.spectral_state(delta, max_sweeps)?.vector;
    let (_, nu, _) = power_iterate(op.len(), max_sweeps, |v| op.apply_adjoint(delta, v))?;
    let alpha_max = alpha.iter().copied().fold(0.0, f64::max);
    let alpha_min = alpha.iter().copied().fold(f64::INFINITY, f64::min);

    // log‖h_j'(y)‖ at the cloud point itself, with j its piece.
    let sys = model.system();
    let log_norms: Vec<f64> = par::map_range(cloud.len(), |k| {
        let y = cloud.points[k];
        let (z, dh) = sys.get(cloud.provenance[k]).eval_with_derivative(y);
        op.metric.derivative_norm(y, z, dh).ln()
    });
    let m = sys.len();
    let mut piece_mass = vec![0.0; m];
    let mut denominator = 0.0;
    for k in 0..cloud.len() {
        let mass = alpha[k] * nu[k];
        piece_mass[cloud.provenance[k]] += mass;
        denominator += mass * log_norms[k];
    }
    let numerator: f64 = piece_mass.iter().zip(model.weights()).map(|(a, p)| -p.ln() * a).sum();
    if !(denominator > 0.0) {
        return Err(Error::NonpositiveDenominator(denominator));
    }
    let scale: f64 = piece_mass.iter().sum();
    Ok(HausdorffExponent {
        u: numerator / denominator,
        piece_mass: piece_mass.into_iter().map(|a| a / scale).collect(),
        alpha_ratio: alpha_min / alpha_max,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalSlope {
    /// `+∞` when the function is constant at every probed radius.
    pub slope: f64,
    pub residual: f64,
    /// `(r, M(r), interval noise at r)`.
    pub samples: Vec<(f64, f64, f64)>,
    /// Every fitted oscillation exceeded twice its interval noise.
    pub reliable: bool,
}

/// Pointwise Hölder slope at `z0`: `M(r) = max |T(z) − T(z0)|` over `probes` equally spaced
/// points on `|z − z0| = r`, then the least-squares slope of `log M(r)` against `log r`.
pub fn pointwise_hoelder_empirical(
    evaluator: impl Fn(Complex64) -> Interval + Sync,
    z0: Complex64,
    radii: &[f64],
    probes: usize,
) -> Result<EmpiricalSlope> {
    if radii.len() < 2 || probes == 0 {
        return Err(Error::InvalidParameter("need at least two radii and one probe".into()));
    }
    let centre = evaluator(z0);
    let samples: Vec<(f64, f64, f64)> = par::map_slice(radii, |&r| {
        let mut osc: f64 = 0.0;
        let mut noise: f64 = 0.0;
        for k in 0..probes {
            let z = z0 + Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / probes as f64);
            let v = evaluator(z);
            let d = (v.mid() - centre.mid()).abs();
            if d > osc {
                osc = d;
                noise = 0.5 * (v.width() + centre.width());
            }
        }
        (r, osc, noise)
    });
    let fit: Vec<(f64, f64)> = samples.iter().filter(|s| s.1 > 0.0).map(|s| (s.0.ln(), s.1.ln())).collect();
    if fit.len() < 2 {
        return Ok(EmpiricalSlope { slope: f64::INFINITY, residual: 0.0, reliable: fit.is_empty(), samples });
    }
    let (slope, intercept) = least_squares(&fit)?;
    let residual =
        (fit.iter().map(|(x, y)| (y - slope * x - intercept).powi(2)).sum::<f64>() / fit.len() as f64).sqrt();
    let reliable = samples.iter().filter(|s| s.1 > 0.0).all(|s| s.1 > 2.0 * s.2);
    Ok(EmpiricalSlope { slope, residual, samples, reliable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenes;
    use crate::staircase::devils_staircase;

    #[test]
    fn entropy_exponent_examples() {
        assert!((hoelder_entropy(&scenes::dc1_model(0.5), 0.0).unwrap() - 0.5).abs() < 1e-15);
        let u = hoelder_entropy(&scenes::dc1_model(0.25), 0.0).unwrap();
        assert!((u - 0.40563).abs() < 1e-4, "{u}");
        let u = hoelder_entropy(&scenes::dc1_model(0.05), 0.0).unwrap();
        assert!((u - 0.1432).abs() < 1e-3, "{u}");
        assert!(matches!(hoelder_entropy(&scenes::dc1_model(0.5), -2.0), Err(Error::NonpositiveDenominator(_))));
    }

    #[test]
    fn dc1_conditions_hold() {
        let model = scenes::dc1_model(0.5);
        let params = EscapeParams::certified(model.system(), Some(scenes::dc1_trap()), 24).unwrap();
        let c = nondiff_conditions(&model, &params, 64, 40, 1).unwrap();
        assert_eq!(c, NondiffConditions { entropy_exceeds: true, postcritical_bounded: true, two_generators: true });
        let c = nondiff_conditions(&scenes::dc1_model(0.05), &params, 8, 10, 1).unwrap();
        assert!(c.entropy_exceeds);
        let report = HoelderReport::new(0.5, None, (0.0, 0.0), c);
        assert_eq!(report.verdict, Verdict::NondifferentiableDense);
    }

    #[test]
    fn flat_staircase_gives_infinite_slope() {
        let eval = |z: Complex64| devils_staircase(z.re, 40);
        let s = pointwise_hoelder_empirical(eval, Complex64::new(0.5, 0.0), &[0.1, 0.05, 0.01], 2).unwrap();
        assert_eq!(s.slope, f64::INFINITY);
    }

    #[test]
    fn cantor_slope_at_zero() {
        // φ(3^{-k}) = 2^{-k}, so the exponent at 0 is log 2 / log 3.
        let eval = |z: Complex64| devils_staircase(z.re.max(0.0), 60);
        let radii: Vec<f64> = (2..12).map(|k| 3f64.powi(-k)).collect();
        let s = pointwise_hoelder_empirical(eval, Complex64::new(0.0, 0.0), &radii, 2).unwrap();
        assert!((s.slope - 2f64.ln() / 3f64.ln()).abs() < 1e-6, "{s:?}");
    }
}
