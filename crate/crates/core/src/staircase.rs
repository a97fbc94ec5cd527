//! One-dimensional singular functions: the Cantor function and Lebesgue's singular functions,
//! as bounded solutions of their functional equations and as escape probabilities of random
//! walks on the real line.

use rand::Rng;

use crate::error::{Error, Result};
use crate::estimate::{chunks, McEstimate, MC_CHUNKS};
use crate::interval::Interval;
use crate::par;
use crate::system::stream_rng;

/// Two expanding affine maps fixing the structure of `(-∞, 0]` and `[1, ∞)`, chosen at random.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StaircaseModel {
    /// `x ↦ 3x` and `x ↦ 3(x-1)+1`, each with probability 1/2.
    Cantor,
    /// `x ↦ 2x` with probability `a`, `x ↦ 2(x-1)+1` with probability `1-a`.
    Bernoulli { a: f64 },
}

impl StaircaseModel {
    pub fn bernoulli(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParameter(format!("Bernoulli parameter {a} not in (0, 1)")));
        }
        Ok(Self::Bernoulli { a })
    }

    /// `(f_1(x), p_1, f_2(x), p_2)`.
    #[inline]
    fn branches(&self, x: f64) -> (f64, f64, f64, f64) {
        match *self {
            Self::Cantor => (3.0 * x, 0.5, 3.0 * x - 2.0, 0.5),
            Self::Bernoulli { a } => (2.0 * x, a, 2.0 * x - 1.0, 1.0 - a),
        }
    }

    /// Probability that the random orbit of `x` tends to `+∞`, bracketed after `depth` steps.
    ///
    /// Leaves at `x >= 1` contribute 1, leaves at `x <= 0` contribute 0 and leaves still in
    /// `(0, 1)` after `depth` steps contribute their whole probability to the width.
    pub fn value(&self, x: f64, depth: usize) -> Interval {
        let mut escaped = 0.0;
        let mut unresolved = 0.0;
        let mut stack = vec![(x, 1.0, 0usize)];
        while let Some((x, w, level)) = stack.pop() {
            if x >= 1.0 {
                escaped += w;
            } else if x <= 0.0 {
            } else if level == depth {
                unresolved += w;
            } else {
                let (x1, p1, x2, p2) = self.branches(x);
                stack.push((x2, w * p2, level + 1));
                stack.push((x1, w * p1, level + 1));
            }
        }
        Interval::new(escaped, (escaped + unresolved).min(1.0))
    }
}

/// The Cantor function φ, from `φ(x) = φ(3x)/2 + φ(3x-2)/2` with `φ = 0` on `(-∞, 0]` and
/// `φ = 1` on `[1, ∞)`.
pub fn devils_staircase(x: f64, depth: usize) -> Interval {
    StaircaseModel::Cantor.value(x, depth)
}

/// Lebesgue's singular function ψ_a, from `ψ(x) = a ψ(2x) + (1-a) ψ(2x-1)`.
pub fn lebesgue_singular(x: f64, a: f64, depth: usize) -> Result<Interval> {
    Ok(StaircaseModel::bernoulli(a)?.value(x, depth))
}

/// Fraction of `trials` random orbits reaching `x_n >= 1` (hence `+∞`) before `x_n <= 0`.
/// Orbits still in `(0, 1)` after `max_iter` steps are counted as indeterminate.
pub fn staircase_mc(x: f64, model: StaircaseModel, trials: u64, max_iter: usize, rng_seed: u64) -> McEstimate {
    let parts = chunks(trials, MC_CHUNKS);
    let counts = par::map_slice(&parts, |&(chunk, n)| {
        let mut rng = stream_rng(rng_seed, chunk);
        let (mut hits, mut open) = (0u64, 0u64);
        for _ in 0..n {
            let mut y = x;
            let mut step = 0;
            loop {
                if y >= 1.0 {
                    hits += 1;
                    break;
                }
                if y <= 0.0 {
                    break;
                }
                if step == max_iter {
                    open += 1;
                    break;
                }
                let (y1, p1, y2, _) = model.branches(y);
                y = if rng.random::<f64>() < p1 { y1 } else { y2 };
                step += 1;
            }
        }
        (hits, open)
    });
    let hits = counts.iter().map(|c| c.0).sum();
    let open = counts.iter().map(|c| c.1).sum();
    McEstimate::from_counts(trials, hits, open)
}

/// Samples `(x, lo, hi)` on a uniform grid of `n` points over `[0, 1]`.
pub fn staircase_table(model: StaircaseModel, n: usize, depth: usize) -> Vec<(f64, Interval)> {
    let n = n.max(2);
    par::map_range(n, |k| {
        let x = k as f64 / (n - 1) as f64;
        (x, model.value(x, depth))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_examples() {
        assert_eq!(devils_staircase(1.0 / 3.0, 1), Interval::point(0.5));
        let q = devils_staircase(0.25, 40);
        assert!(q.width() <= 2f64.powi(-39));
        assert!((q.mid() - 1.0 / 3.0).abs() <= 1e-9);
        assert_eq!(devils_staircase(-5.0, 10), Interval::ZERO);
        assert_eq!(devils_staircase(7.0, 0), Interval::ONE);
    }

    #[test]
    fn cantor_plateau_is_flat() {
        for x in [0.34, 0.4, 0.5, 0.6, 0.66] {
            assert_eq!(devils_staircase(x, 3), Interval::point(0.5));
        }
    }

    #[test]
    fn lebesgue_examples() {
        for k in 1..10 {
            let a = k as f64 / 10.0;
            assert_eq!(lebesgue_singular(0.5, a, 4).unwrap(), Interval::point(a));
            assert_eq!(lebesgue_singular(0.25, a, 4).unwrap(), Interval::point(a * a));
        }
        assert!(lebesgue_singular(0.5, 1.0, 4).is_err());
    }

    #[test]
    fn half_gives_identity() {
        let depth = 40;
        for k in 0..=100 {
            let x = k as f64 / 100.0 + 1e-3 * (k as f64).sin();
            let x = x.clamp(0.0, 1.0);
            let v = lebesgue_singular(x, 0.5, depth).unwrap();
            assert!(v.contains(x) || (v.mid() - x).abs() <= 2f64.powi(1 - depth as i32), "{x} {v}");
        }
    }

    #[test]
    fn mc_examples() {
        let e = staircase_mc(1.0 / 3.0, StaircaseModel::Cantor, 10_000, 200, 1);
        assert!((e.estimate - 0.5).abs() <= 3.0 * e.stderr);
        let e = staircase_mc(0.5, StaircaseModel::bernoulli(0.3).unwrap(), 10_000, 200, 2);
        assert!((e.estimate - 0.3).abs() <= 3.0 * e.stderr);
        let e = staircase_mc(2.0, StaircaseModel::Cantor, 1000, 10, 3);
        assert_eq!(e.estimate, 1.0);
        assert_eq!(e.indeterminate, 0);
    }

    #[test]
    fn boundary_maps_preserve_the_half_lines() {
        // Escape certification relies on both second branches pushing x > 1 further right.
        for x in [1.0 + 1e-9, 1.5, 10.0] {
            assert!(3.0 * x - 2.0 > x || x == 1.0);
            assert!(2.0 * x - 1.0 > x);
            assert!(3.0 * x > x && 2.0 * x > x);
        }
        for x in [-1e-9, -0.5, -10.0] {
            assert!(3.0 * x <= 0.0 && 3.0 * x - 2.0 <= 0.0);
            assert!(2.0 * x <= 0.0 && 2.0 * x - 1.0 <= 0.0);
        }
    }
}
