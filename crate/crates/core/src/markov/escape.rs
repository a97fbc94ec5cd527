use num_complex::Complex64;

use crate::estimate::{chunks, McEstimate, MC_CHUNKS};
use crate::interval::Interval;
use crate::iteration::{EscapeParams, Fate};
use crate::par;
use crate::system::{stream_rng, RandomModel};

/// Branches of the expansion tree lighter than this are not expanded; their mass goes to the
/// interval width.
pub const PRUNE_WEIGHT: f64 = 1e-6;

/// Work counters of one tree expansion.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TreeStats {
    pub nodes: u64,
    /// Mass of branches cut at the depth limit.
    pub depth_mass: f64,
    /// Mass of branches cut by [`PRUNE_WEIGHT`].
    pub pruned_mass: f64,
}

/// Bracket of `T∞,τ(z)` from the bounded recursion `T(z) = Σ p_j T(h_j(z))`.
///
/// Escaped leaves contribute 1, trapped leaves 0; leaves left open at `depth` (or lighter than
/// [`PRUNE_WEIGHT`]) contribute `[0, weight]`. The width equals the open mass.
pub fn t_infinity_exact(z: Complex64, model: &RandomModel, params: &EscapeParams, depth: usize) -> Interval {
    t_infinity_with_stats(z, model, params, depth).0
}

pub fn t_infinity_with_stats(
    z: Complex64,
    model: &RandomModel,
    params: &EscapeParams,
    depth: usize,
) -> (Interval, TreeStats) {
    let system = model.system();
    let weights = model.weights();
    let mut stats = TreeStats::default();
    let mut escaped = 0.0;
    let mut stack: Vec<(Complex64, f64, usize)> = vec![(z, 1.0, 0)];
    while let Some((w, mass, level)) = stack.pop() {
        stats.nodes += 1;
        match params.fate(w) {
            Some(Fate::Escaped) => escaped += mass,
            Some(Fate::Trapped) => {}
            None if level >= depth => stats.depth_mass += mass,
            None if mass < PRUNE_WEIGHT => stats.pruned_mass += mass,
            None => {
                for (j, p) in weights.iter().enumerate().rev() {
                    stack.push((system.get(j).eval(w), mass * p, level + 1));
                }
            }
        }
    }
    let open = stats.depth_mass + stats.pruned_mass;
    (Interval::new(escaped.min(1.0), (escaped + open).min(1.0)), stats)
}

/// Monte Carlo estimate of `T∞,τ(z)`: the fraction of random orbits leaving the escape radius
/// before entering the trap. Orbits still undecided after `params.max_depth` steps are
/// counted as indeterminate.
pub fn t_infinity_mc(
    z: Complex64,
    model: &RandomModel,
    params: &EscapeParams,
    trials: u64,
    rng_seed: u64,
) -> McEstimate {
    let parts = chunks(trials, MC_CHUNKS);
    let counts = par::map_slice(&parts, |&(chunk, n)| {
        let mut rng = stream_rng(rng_seed, chunk);
        let (mut hits, mut open) = (0u64, 0u64);
        for _ in 0..n {
            let mut w = z;
            let mut step = 0;
            loop {
                match params.fate(w) {
                    Some(Fate::Escaped) => {
                        hits += 1;
                        break;
                    }
                    Some(Fate::Trapped) => break,
                    None if step >= params.max_depth => {
                        open += 1;
                        break;
                    }
                    None => {
                        w = model.system().get(model.sample_index(&mut rng)).eval(w);
                        step += 1;
                    }
                }
            }
        }
        (hits, open)
    });
    McEstimate::from_counts(trials, counts.iter().map(|c| c.0).sum(), counts.iter().map(|c| c.1).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenes;

    fn dc1() -> (RandomModel, EscapeParams) {
        let model = scenes::dc1_model(0.5);
        let params = EscapeParams::certified(model.system(), Some(scenes::dc1_trap()), 400).unwrap();
        (model, params)
    }

    #[test]
    fn base_cases() {
        let (model, params) = dc1();
        assert_eq!(t_infinity_exact(Complex64::new(10.0, 0.0), &model, &params, 0), Interval::ONE);
        assert_eq!(t_infinity_exact(Complex64::new(0.0, 0.0), &model, &params, 0), Interval::ZERO);
        let mc = t_infinity_mc(Complex64::new(10.0, 0.0), &model, &params, 100, 1);
        assert_eq!(mc.estimate, 1.0);
        let mc = t_infinity_mc(Complex64::new(0.0, 0.0), &model, &params, 100, 1);
        assert_eq!(mc.estimate, 0.0);
    }

    #[test]
    fn exact_and_mc_agree_at_reference_point() {
        let (model, params) = dc1();
        let z = Complex64::new(1.2, 0.0);
        let exact = t_infinity_exact(z, &model, &params, 24);
        assert!(exact.width() <= 0.01);
        let mc = t_infinity_mc(z, &model, &params, 20_000, 5);
        assert!(!mc.flagged());
        assert!((mc.estimate - exact.mid()).abs() <= 3.0 * mc.stderr + 0.5 * exact.width());
    }

    #[test]
    fn refinement_is_nested() {
        let (model, params) = dc1();
        for k in 0..40 {
            let z = Complex64::from_polar(0.5 + 0.09 * k as f64, 0.7 * k as f64);
            let coarse = t_infinity_exact(z, &model, &params, 6);
            let fine = t_infinity_exact(z, &model, &params, 18);
            assert!(fine.within(&coarse, 1e-12), "{z}: {fine} ⊄ {coarse}");
        }
    }

    #[test]
    fn width_is_open_mass() {
        let (model, params) = dc1();
        let (v, s) = t_infinity_with_stats(Complex64::new(1.9, 0.3), &model, &params, 10);
        assert!((v.width() - (s.depth_mass + s.pruned_mass)).abs() < 1e-12);
    }
}
