use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par;
use crate::system::{stream_rng, GeneratorSystem, RandomModel, RandomSequence};

/// Target accuracy of the escape-rate tail.
const TAIL_TOLERANCE: f64 = 1e-16;
/// Past this many letters beyond escape the tail has long converged for degree ≥ 2.
const TAIL_LETTERS: usize = 1100;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenValue {
    pub value: f64,
    /// Upper bound on `|G - value|` from the truncated tail.
    pub remainder: f64,
    /// The orbit never left the escape disk within `n_max` steps; `value` is 0.
    pub bounded: bool,
}

/// Escape-rate potential `G_γ(y) = lim (1/deg γ_{n,1}) log⁺ |γ_{n,1}(y)|` for the sequence
/// whose `k`-th letter (0-based) is `letter(k)`.
///
/// Once the orbit leaves the disk of radius `radius` (at least the escape radius of the
/// system), it is followed in log-space, `log|h(z)| = d log|z| + log|a_d| + log|1+ε|` with
/// `|ε| ≤ Σ_{i<d} |a_i| / (|a_d| |z|)`, until the remaining terms are below machine precision.
pub fn green_function(
    system: &GeneratorSystem,
    mut letter: impl FnMut(usize) -> usize,
    y: Complex64,
    n_max: usize,
    radius: f64,
) -> GreenValue {
    // `log_deg` is `log deg γ_{k,1}`; the estimate is `log|z| / deg γ_{k,1}`.
    let mut z = y;
    let mut k = 0;
    let mut log_deg = 0.0;
    while z.norm() <= radius {
        if k >= n_max {
            return GreenValue { value: 0.0, remainder: 0.0, bounded: true };
        }
        let h = system.get(letter(k));
        z = h.eval(z);
        log_deg += (h.degree() as f64).ln();
        k += 1;
    }
    let mut ell = z.norm().ln();
    let mut remainder = 0.0;
    let max_lead =
        system.generators().iter().map(|h| h.leading().norm().ln().abs() + std::f64::consts::LN_2).fold(0.0, f64::max);
    for _ in 0..TAIL_LETTERS {
        let h = system.get(letter(k));
        k += 1;
        let d = h.degree() as f64;
        let lead = h.leading().norm();
        if d * ell < 600.0 {
            let next = h.eval(z);
            z = next;
            ell = next.norm().ln();
        } else {
            // |z| is huge here, so the lower-order terms only enter through the bound.
            let lower: f64 = h.coeffs()[..h.degree()].iter().map(|c| c.norm()).sum();
            let eps = (lower / lead) * (-ell).exp();
            ell = d * ell + lead.ln();
            remainder += -(1.0 - eps.min(0.5)).ln() * (-(log_deg + d.ln())).exp();
        }
        log_deg += d.ln();
        // Later terms are at most `max_lead / deg γ_{n+1,1}`, geometric with ratio ≤ 1/2.
        let tail = 2.0 * max_lead * (-(log_deg + std::f64::consts::LN_2)).exp();
        let value = ell * (-log_deg).exp();
        if tail <= TAIL_TOLERANCE * value.abs().max(1.0) {
            return GreenValue { value: value.max(0.0), remainder: remainder + tail, bounded: false };
        }
    }
    let value = ell * (-log_deg).exp();
    GreenValue { value: value.max(0.0), remainder: remainder + max_lead * (-log_deg).exp(), bounded: false }
}

/// `Ω(γ) = Σ_c G_γ(c)` over the critical points `c` of `γ_1`, with multiplicity.
pub fn omega(
    system: &GeneratorSystem,
    mut letter: impl FnMut(usize) -> usize,
    n_max: usize,
    radius: f64,
) -> Result<f64> {
    let first = letter(0);
    let mut total = 0.0;
    for (c, mult) in system.get(first).critical_points()? {
        total += mult as f64 * green_function(system, &mut letter, c, n_max, radius).value;
    }
    Ok(total)
}

/// Monte Carlo mean and standard error of `Ω` over i.i.d. sequences drawn from the model.
pub fn omega_integral(model: &RandomModel, samples: usize, n_max: usize, rng_seed: u64) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::InvalidParameter("omega_integral needs at least one sample".into()));
    }
    let radius = crate::iteration::escape_radius(model.system());
    let values: Vec<Result<f64>> = par::map_range(samples, |i| {
        let mut seq = RandomSequence::new(model, stream_rng(rng_seed, i as u64));
        omega(model.system(), |k| seq.letter(k), n_max, radius)
    });
    let values: Vec<f64> = values.into_iter().collect::<Result<_>>()?;
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    Ok((mean, (var / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::scenes;

    #[test]
    fn square_map_green_is_log_modulus() {
        let sys = scenes::circle_system();
        for y in [2.0, 3.5, 1.2] {
            let g = green_function(&sys, |_| 0, Complex64::new(y, 0.0), 200, 2.0);
            assert!((g.value - f64::ln(y)).abs() < 1e-10, "{y}: {g:?}");
            assert!(!g.bounded);
        }
        let g = green_function(&sys, |_| 0, Complex64::new(0.1, 0.0), 200, 2.0);
        assert_eq!(g.value, 0.0);
        assert!(g.bounded);
    }

    #[test]
    fn matches_direct_limit_for_an_escaping_critical_point() {
        // z² + 3: the critical point escapes, and G(0) = G(3) / 2.
        let sys = GeneratorSystem::new(vec![Polynomial::from_real(&[3.0, 0.0, 1.0]).unwrap()]).unwrap();
        let r = crate::iteration::escape_radius(&sys);
        let g = green_function(&sys, |_| 0, Complex64::new(0.0, 0.0), 100, r).value;
        assert!(g > 0.0);
        let mut direct = Vec::new();
        for n in [4, 5, 6] {
            let mut z = Complex64::new(0.0, 0.0);
            for _ in 0..n {
                z = sys.get(0).eval(z);
            }
            direct.push(z.norm().ln() / 2f64.powi(n));
        }
        assert!((direct[2] - g).abs() <= (direct[1] - g).abs() + 1e-15);
        assert!((direct[1] - g).abs() <= (direct[0] - g).abs() + 1e-15);
        assert!((direct[2] - g).abs() < 1e-6, "{direct:?} {g}");
        let omega = omega(&sys, |_| 0, 100, r).unwrap();
        assert!((omega - g).abs() < 1e-15);
    }

    #[test]
    fn dc1_critical_points_have_zero_green() {
        let model = scenes::dc1_model(0.5);
        let r = crate::iteration::escape_radius(model.system());
        for c in [0.0, 1.0, -1.0] {
            let mut seq = RandomSequence::new(&model, stream_rng(5, 0));
            let g = green_function(model.system(), |k| seq.letter(k), Complex64::new(c, 0.0), 500, r);
            assert_eq!(g.value, 0.0);
        }
        let (mean, err) = omega_integral(&model, 200, 200, 3).unwrap();
        assert_eq!((mean, err), (0.0, 0.0));
    }
}
