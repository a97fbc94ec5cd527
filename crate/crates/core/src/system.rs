//! Generator systems, random models and words.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Ordered list of distinct polynomial generators `h_1, ..., h_m` of degree ≥ 2.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSystem {
    generators: Vec<Polynomial>,
}

impl GeneratorSystem {
    pub fn new(generators: Vec<Polynomial>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidSystem("need at least one generator".into()));
        }
        for (j, g) in generators.iter().enumerate() {
            if g.degree() < 2 {
                return Err(Error::InvalidSystem(format!("generator {} has degree {} < 2", j + 1, g.degree())));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if generators[i] == generators[j] {
                    return Err(Error::InvalidSystem(format!("generators {} and {} coincide", i + 1, j + 1)));
                }
            }
        }
        Ok(Self { generators })
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn get(&self, j: usize) -> &Polynomial {
        &self.generators[j]
    }

    /// Applies `word` to `z` (first letter first).
    pub fn apply(&self, word: &Word, z: Complex64) -> Complex64 {
        word.indices().iter().fold(z, |z, &j| self.generators[j].eval(z))
    }

    /// Critical values of every generator, i.e. the first layer of the postcritical set.
    pub fn critical_values(&self) -> Result<Vec<Complex64>> {
        let mut out = Vec::new();
        for g in &self.generators {
            for (c, _) in g.critical_points()? {
                out.push(g.eval(c));
            }
        }
        Ok(out)
    }
}

/// A generator system together with a probability vector; the finitely supported measure τ.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomModel {
    system: GeneratorSystem,
    weights: Vec<f64>,
}

impl RandomModel {
    pub fn new(system: GeneratorSystem, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != system.len() {
            return Err(Error::InvalidWeights(format!("{} weights for {} generators", weights.len(), system.len())));
        }
        if weights.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(Error::InvalidWeights("every weight must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { system, weights })
    }

    /// Equal weights `1/m`.
    pub fn uniform(system: GeneratorSystem) -> Self {
        let m = system.len();
        Self { system, weights: vec![1.0 / m as f64; m] }
    }

    pub fn system(&self) -> &GeneratorSystem {
        &self.system
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Samples a generator index according to the weights.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (j, p) in self.weights.iter().enumerate() {
            acc += p;
            if u < acc {
                return j;
            }
        }
        self.weights.len() - 1
    }
}

/// A finite word `(i_1, ..., i_n)` of 0-based generator indices, acting as
/// `h_{i_n} ∘ ... ∘ h_{i_1}`. Displayed with 1-based labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    indices: Vec<usize>,
}

impl Word {
    pub fn new(indices: Vec<usize>) -> Self {
        Self { indices }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Checks every letter against the number of generators.
    pub fn checked(indices: Vec<usize>, m: usize) -> Result<Self> {
        if let Some(bad) = indices.iter().find(|&&i| i >= m) {
            return Err(Error::InvalidParameter(format!("word letter {} out of range 1..={m}", bad + 1)));
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn push(&mut self, j: usize) {
        self.indices.push(j);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "]")
    }
}

/// An infinite i.i.d. sequence `γ = (γ_1, γ_2, ...)` drawn from τ, materialized lazily.
pub struct RandomSequence<'a> {
    model: &'a RandomModel,
    rng: ChaCha8Rng,
    letters: Vec<usize>,
}

impl<'a> RandomSequence<'a> {
    pub fn new(model: &'a RandomModel, rng: ChaCha8Rng) -> Self {
        Self { model, rng, letters: Vec::new() }
    }

    /// The `k`-th letter (0-based position).
    pub fn letter(&mut self, k: usize) -> usize {
        while self.letters.len() <= k {
            let j = self.model.sample_index(&mut self.rng);
            self.letters.push(j);
        }
        self.letters[k]
    }

    /// The prefix materialized so far.
    pub fn prefix(&self) -> Word {
        Word::new(self.letters.clone())
    }
}

/// Independent RNG for `(seed, stream)`; streams never overlap for a given seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq() -> Polynomial {
        Polynomial::monomial(2)
    }

    #[test]
    fn duplicate_generators_rejected() {
        let err = GeneratorSystem::new(vec![sq(), sq()]).unwrap_err();
        assert!(matches!(err, Error::InvalidSystem(_)));
    }

    #[test]
    fn low_degree_rejected() {
        let lin = Polynomial::from_real(&[0.0, 2.0]).unwrap();
        assert!(GeneratorSystem::new(vec![lin]).is_err());
    }

    #[test]
    fn weights_validated() {
        let quarter = Polynomial::from_real(&[0.0, 0.0, 0.25]).unwrap();
        let sys = GeneratorSystem::new(vec![sq(), quarter]).unwrap();
        assert!(RandomModel::new(sys.clone(), vec![0.5, 0.5]).is_ok());
        assert!(RandomModel::new(sys.clone(), vec![0.6, 0.5]).is_err());
        assert!(RandomModel::new(sys.clone(), vec![1.0, 0.0]).is_err());
        assert!(RandomModel::new(sys, vec![1.0]).is_err());
    }

    #[test]
    fn word_display_is_one_based() {
        assert_eq!(Word::new(vec![0, 1, 0]).to_string(), "[1,2,1]");
        assert!(Word::checked(vec![2], 2).is_err());
    }

    #[test]
    fn sampling_follows_weights() {
        let quarter = Polynomial::from_real(&[0.0, 0.0, 0.25]).unwrap();
        let model = RandomModel::new(GeneratorSystem::new(vec![sq(), quarter]).unwrap(), vec![0.25, 0.75]).unwrap();
        let mut rng = stream_rng(7, 0);
        let n = 40_000;
        let ones = (0..n).filter(|_| model.sample_index(&mut rng) == 1).count();
        let frac = ones as f64 / n as f64;
        assert!((frac - 0.75).abs() < 0.01, "{frac}");
    }

    #[test]
    fn random_sequence_is_stable() {
        let model = RandomModel::uniform(
            GeneratorSystem::new(vec![sq(), Polynomial::from_real(&[0.0, 0.0, 0.25]).unwrap()]).unwrap(),
        );
        let mut a = RandomSequence::new(&model, stream_rng(3, 1));
        let mut b = RandomSequence::new(&model, stream_rng(3, 1));
        let la: Vec<usize> = (0..50).map(|k| a.letter(k)).collect();
        let lb: Vec<usize> = (0..50).rev().map(|k| b.letter(k)).collect::<Vec<_>>().into_iter().rev().collect();
        assert_eq!(la, lb);
    }
}
