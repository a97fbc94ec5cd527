//! Monte Carlo bookkeeping shared by the escape-probability estimators.

use crate::error::{Error, Result};

/// Outcome counts of `trials` independent random orbits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub trials: u64,
    pub hits: u64,
    pub indeterminate: u64,
    pub estimate: f64,
    /// Binomial standard error with the Agresti–Coull adjustment `(k+2)/(n+4)`,
    /// so an all-or-nothing sample still carries a nonzero error.
    pub stderr: f64,
}

/// Indeterminate mass above this fraction marks an estimate as unreliable.
pub const INDETERMINATE_LIMIT: f64 = 0.01;

impl McEstimate {
    pub fn from_counts(trials: u64, hits: u64, indeterminate: u64) -> Self {
        let n = trials.max(1) as f64;
        let estimate = hits as f64 / n;
        let adjusted = (hits as f64 + 2.0) / (n + 4.0);
        let stderr = (adjusted * (1.0 - adjusted) / n).sqrt();
        Self { trials, hits, indeterminate, estimate, stderr }
    }

    pub fn indeterminate_fraction(&self) -> f64 {
        self.indeterminate as f64 / self.trials.max(1) as f64
    }

    pub fn flagged(&self) -> bool {
        self.indeterminate_fraction() > INDETERMINATE_LIMIT
    }
}

/// Splits `trials` into fixed chunks so the split does not depend on the thread count.
pub(crate) fn chunks(trials: u64, n_chunks: u64) -> Vec<(u64, u64)> {
    let per = trials.div_ceil(n_chunks.max(1));
    (0..n_chunks).map(|c| (c, per.min(trials.saturating_sub(c * per)))).filter(|&(_, n)| n > 0).collect()
}

pub(crate) const MC_CHUNKS: u64 = 16;

/// Slope and intercept of the least-squares line through `(x, y)`.
pub fn least_squares(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_trials() {
        for t in [1u64, 15, 16, 17, 1000, 10_007] {
            let c = chunks(t, MC_CHUNKS);
            assert_eq!(c.iter().map(|x| x.1).sum::<u64>(), t);
        }
    }

    #[test]
    fn degenerate_sample_has_positive_error() {
        let e = McEstimate::from_counts(10_000, 10_000, 0);
        assert_eq!(e.estimate, 1.0);
        assert!(e.stderr > 0.0 && e.stderr < 0.01);
    }
}
