//! Complex polynomials in ascending-coefficient form.
//!
//! Evaluation is plain Horner in a fixed order so results are bit-reproducible.
//! Roots come from an Aberth simultaneous iteration started on a circle whose
//! radius is a Cauchy-type bound on the root moduli.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on the degree produced by [`Polynomial::compose`].
pub const DEGREE_CAP: usize = 64;

const MAX_ABERTH_ITERATIONS: usize = 500;
/// Fixed angular offset of the initial guesses (radians).
const INITIAL_ANGLE: f64 = 0.4;
/// Roots of the derivative closer than this (relative) are merged into one critical point.
const CLUSTER_TOL: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients. Trailing zeros are trimmed;
    /// at least one nonzero coefficient is required.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() || (coeffs.len() == 1 && coeffs[0] == Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidPolynomial("zero polynomial".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidPolynomial("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `z^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
        coeffs[d] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    /// Largest coefficient modulus.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `sum |a_i| |z|^i`, the natural scale of rounding error in `eval(z)`.
    pub fn abs_eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Value and first derivative in one Horner pass.
    #[inline]
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.degree() == 0 {
            return Polynomial { coeffs: vec![Complex64::new(0.0, 0.0)] };
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
        Polynomial { coeffs }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).copied().unwrap_or(zero) + other.coeffs.get(i).copied().unwrap_or(zero))
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial { coeffs }
    }

    /// `self - w` as a new polynomial (shifts the constant term).
    pub fn minus_constant(&self, w: Complex64) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] -= w;
        Polynomial { coeffs }
    }

    /// `self ∘ inner` with the default degree cap.
    pub fn compose(&self, inner: &Polynomial) -> Result<Polynomial> {
        self.compose_capped(inner, DEGREE_CAP)
    }

    pub fn compose_capped(&self, inner: &Polynomial, cap: usize) -> Result<Polynomial> {
        let degree = self.degree() * inner.degree();
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        // Horner over polynomials.
        let mut acc = Polynomial { coeffs: vec![self.leading()] };
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(inner);
            acc.coeffs[0] += c;
        }
        Polynomial::new(acc.coeffs)
    }

    /// All `degree` roots with multiplicity.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let d = self.degree();
        if d == 0 {
            return Err(Error::InvalidPolynomial("constant polynomial has no roots".into()));
        }
        // Exact zero roots first.
        let zeros = self.coeffs.iter().take_while(|c| c.re == 0.0 && c.im == 0.0).count();
        let mut out = vec![Complex64::new(0.0, 0.0); zeros];
        let rest = &self.coeffs[zeros..];
        let rd = rest.len() - 1;
        if rd == 0 {
            return Ok(out);
        }
        let lead = rest[rd];
        let monic: Vec<Complex64> = rest.iter().map(|c| c / lead).collect();
        if rd == 1 {
            out.push(-monic[0]);
            return Ok(out);
        }
        out.extend(aberth(&monic)?);
        Ok(out)
    }

    /// Roots of `self(w) = z`.
    pub fn preimages(&self, z: Complex64) -> Result<Vec<Complex64>> {
        self.minus_constant(z).roots()
    }

    /// Roots of the derivative, merged into (location, multiplicity) pairs.
    pub fn critical_points(&self) -> Result<Vec<(Complex64, usize)>> {
        if self.degree() < 2 {
            return Err(Error::InvalidPolynomial("critical points need degree >= 2".into()));
        }
        let roots = self.derivative().roots()?;
        let mut clusters: Vec<(Complex64, usize)> = Vec::new();
        let mut members: Vec<Vec<Complex64>> = Vec::new();
        'outer: for r in roots {
            for (k, cluster) in members.iter_mut().enumerate() {
                let c = clusters[k].0;
                if (r - c).norm() <= CLUSTER_TOL * c.norm().max(1.0) {
                    cluster.push(r);
                    let n = cluster.len();
                    clusters[k] = (cluster.iter().sum::<Complex64>() / n as f64, n);
                    continue 'outer;
                }
            }
            members.push(vec![r]);
            clusters.push((r, 1));
        }
        Ok(clusters)
    }
}

/// Aberth iteration on a monic polynomial (ascending coefficients, leading 1, degree ≥ 2).
fn aberth(monic: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = monic.len() - 1;
    let p = Polynomial { coeffs: monic.to_vec() };
    // Cauchy bound and Fujiwara bound; the smaller one keeps iteration counts low.
    let cauchy = 1.0 + monic[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let fujiwara = 2.0
        * (1..=d)
            .map(|k| {
                let c = monic[d - k].norm();
                if k == d {
                    (c / 2.0).powf(1.0 / k as f64)
                } else {
                    c.powf(1.0 / k as f64)
                }
            })
            .fold(0.0, f64::max);
    let radius = cauchy.min(fujiwara).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, INITIAL_ANGLE + std::f64::consts::TAU * k as f64 / d as f64))
        .collect();
    let mut done = vec![false; d];
    let eps = f64::EPSILON;
    for _ in 0..MAX_ABERTH_ITERATIONS {
        let mut all_done = true;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (pk, dpk) = p.eval_with_derivative(z[k]);
            let scale = p.abs_eval(z[k].norm());
            if pk.norm() <= 4.0 * d as f64 * eps * scale {
                done[k] = true;
                continue;
            }
            all_done = false;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        sum += diff.inv();
                    }
                }
            }
            let step = if dpk.norm() == 0.0 {
                Complex64::from_polar(radius * 1e-3 + eps, k as f64)
            } else {
                let ratio = pk / dpk;
                let denom = Complex64::new(1.0, 0.0) - ratio * sum;
                if denom.norm() == 0.0 {
                    ratio
                } else {
                    ratio / denom
                }
            };
            z[k] -= step;
            if step.norm() <= 2.0 * eps * z[k].norm().max(eps) {
                done[k] = true;
            }
        }
        if all_done {
            break;
        }
    }
    let mut worst = 0.0f64;
    for zk in &z {
        let scale = p.abs_eval(zk.norm());
        let rel = p.eval(*zk).norm() / scale.max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
    }
    if !worst.is_finite() || worst > 1e-12 {
        return Err(Error::RootSolver { degree: d, iterations: MAX_ABERTH_ITERATIONS, residual: worst });
    }
    Ok(z)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            match i {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v
    }

    #[test]
    fn eval_examples() {
        let q = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(q.eval(c(0.0)), c(-1.0));
        let quarter = Polynomial::from_real(&[0.0, 0.0, 0.25]).unwrap();
        assert_eq!(quarter.eval(c(2.0)), c(1.0));
        let h1 = q.compose(&q).unwrap();
        assert_eq!(h1.eval(c(1.0)), c(-1.0));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(Polynomial::monomial(2).derivative().coeffs(), &[c(0.0), c(2.0)]);
        let q = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        let h1 = q.compose(&q).unwrap();
        assert_eq!(h1.derivative().coeffs(), &[c(0.0), c(-4.0), c(0.0), c(4.0)]);
        let h2 = Polynomial::from_real(&[0.0, 0.0, 0.0, 0.0, 1.0 / 64.0]).unwrap();
        assert_eq!(h2.derivative().coeffs(), &[c(0.0), c(0.0), c(0.0), c(1.0 / 16.0)]);
    }

    #[test]
    fn compose_examples() {
        let sq = Polynomial::monomial(2);
        assert_eq!(sq.compose(&sq).unwrap(), Polynomial::monomial(4));
        let q = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(q.compose(&q).unwrap().coeffs(), &[c(0.0), c(0.0), c(-2.0), c(0.0), c(1.0)]);
        let g2 = Polynomial::from_real(&[0.0, 0.0, 0.25]).unwrap();
        assert_eq!(g2.compose(&g2).unwrap().coeffs()[4], c(1.0 / 64.0));
    }

    #[test]
    fn compose_respects_degree_cap() {
        let p = Polynomial::monomial(8);
        let q = Polynomial::monomial(9);
        assert!(matches!(p.compose(&q), Err(Error::DegreeCap { degree: 72, cap: 64 })));
        assert_eq!(p.compose(&p).unwrap().degree(), 64);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(Polynomial::from_real(&[0.0, 0.0]).is_err());
        assert_eq!(Polynomial::from_real(&[1.0, 2.0, 0.0]).unwrap().degree(), 1);
    }

    #[test]
    fn critical_point_examples() {
        assert_eq!(Polynomial::monomial(2).critical_points().unwrap(), vec![(c(0.0), 1)]);

        let q = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        let mut crit = q.compose(&q).unwrap().critical_points().unwrap();
        crit.sort_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap());
        let expected = [-1.0, 0.0, 1.0];
        assert_eq!(crit.len(), 3);
        for ((z, m), e) in crit.iter().zip(expected) {
            assert_eq!(*m, 1);
            assert!((z - c(e)).norm() < 1e-12);
        }

        let h2 = Polynomial::from_real(&[0.0, 0.0, 0.0, 0.0, 1.0 / 64.0]).unwrap();
        assert_eq!(h2.critical_points().unwrap(), vec![(c(0.0), 3)]);
    }

    #[test]
    fn root_examples() {
        let r = sorted_re(Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap().roots().unwrap());
        assert!((r[0] - c(-1.0)).norm() < 1e-14 && (r[1] - c(1.0)).norm() < 1e-14);
        let r = sorted_re(Polynomial::from_real(&[-4.0, 0.0, 1.0]).unwrap().roots().unwrap());
        assert!((r[0] - c(-2.0)).norm() < 1e-14 && (r[1] - c(2.0)).norm() < 1e-14);
        let r = sorted_re(Polynomial::from_real(&[0.0, 0.0, -2.0, 0.0, 1.0]).unwrap().roots().unwrap());
        let s = 2f64.sqrt();
        for (got, want) in r.iter().zip([-s, 0.0, 0.0, s]) {
            assert!((got - c(want)).norm() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn roots_of_nearly_multiple_root() {
        // (z - 1)^3 perturbed; residual criterion still holds.
        let p = Polynomial::from_real(&[-1.0 + 1e-12, 3.0, -3.0, 1.0]).unwrap();
        let roots = p.roots().unwrap();
        for r in roots {
            assert!(p.eval(r).norm() <= 1e-10 * p.coeff_scale());
        }
    }

    #[test]
    fn display_is_readable() {
        let q = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(q.to_string(), "1z^2 + -1");
    }
}
