//! JSON scene files: a generator system with weights and numerical settings, or a
//! one-dimensional staircase model.
//!
//! ```json
//! {
//!   "name": "dc1",
//!   "generators": [
//!     {"compose": [[[-1, 0], [0, 0], [1, 0]], [[-1, 0], [0, 0], [1, 0]]]},
//!     {"compose": [[0, 0, 0.25], [0, 0, 0.25]]}
//!   ],
//!   "weights": [0.5, 0.5],
//!   "trap": [{"center": [0, 0], "radius": 0.4}],
//!   "bbox": [-5.1, 5.1, -5.1, 5.1],
//!   "resolution": 256,
//!   "depth": 24
//! }
//! ```
//!
//! Coefficients are listed from the constant term up, each as `[re, im]` or a bare real.
//! A `compose` list `[outer, ..., inner]` denotes `outer ∘ ... ∘ inner`.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::iteration::{Disk, EscapeParams, Trap};
use crate::markov::BBox;
use crate::poly::Polynomial;
use crate::staircase::StaircaseModel;
use crate::system::{GeneratorSystem, RandomModel};
use crate::verify::Region;

#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Coeff {
    Pair([f64; 2]),
    Real(f64),
}

impl Coeff {
    fn complex(self) -> Complex64 {
        match self {
            Coeff::Pair([re, im]) => Complex64::new(re, im),
            Coeff::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Composition {
    pub compose: Vec<Vec<Coeff>>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Coefficients(Vec<Coeff>),
    Compose(Composition),
}

impl GeneratorSpec {
    pub fn polynomial(&self) -> Result<Polynomial> {
        let poly = |c: &[Coeff]| Polynomial::new(c.iter().map(|x| x.complex()).collect());
        match self {
            GeneratorSpec::Coefficients(c) => poly(c),
            GeneratorSpec::Compose(Composition { compose }) => {
                let mut parts = compose.iter().rev();
                let inner = parts.next().ok_or_else(|| Error::Scene("empty composition".into()))?;
                let mut acc = poly(inner)?;
                for outer in parts {
                    acc = poly(outer)?.compose(&acc)?;
                }
                Ok(acc)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DiskSpec {
    pub center: [f64; 2],
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Resolution {
    Square(usize),
    Rect([usize; 2]),
}

impl Resolution {
    pub fn dims(self) -> (usize, usize) {
        match self {
            Resolution::Square(n) => (n, n),
            Resolution::Rect([nx, ny]) => (nx, ny),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum StaircaseSpec {
    Cantor,
    Bernoulli { a: f64 },
}

/// Annulus `{inner < |z - center| < outer}` for the open set check.
#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AnnulusSpec {
    #[serde(default)]
    pub center: [f64; 2],
    pub inner: f64,
    pub outer: f64,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    /// Defaults to equal weights.
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    /// Must be at least the computed escape radius.
    #[serde(default)]
    pub escape_radius: Option<f64>,
    #[serde(default)]
    pub trap: Vec<DiskSpec>,
    #[serde(default)]
    pub bbox: Option<[f64; 4]>,
    #[serde(default)]
    pub resolution: Option<Resolution>,
    #[serde(default)]
    pub depth: Option<usize>,
    /// Starting points for the minimal-set search; defaults to a grid over `bbox`.
    #[serde(default)]
    pub seeds: Vec<[f64; 2]>,
    #[serde(default)]
    pub cloud_points: Option<usize>,
    #[serde(default)]
    pub open_set: Option<AnnulusSpec>,
    #[serde(default)]
    pub staircase: Option<StaircaseSpec>,
    /// Output directory.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

pub const DEFAULT_DEPTH: usize = 24;
pub const DEFAULT_RESOLUTION: usize = 256;
pub const DEFAULT_CLOUD_POINTS: usize = 100_000;

impl Scene {
    pub fn from_json(text: &str) -> Result<Self> {
        let scene: Scene = serde_json::from_str(text).map_err(|e| Error::SceneParse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        scene.validate()?;
        Ok(scene)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Resolves `name` as a file path, then as the path with `.json` appended, then as the
    /// name of a built-in scene.
    pub fn resolve(name: &str) -> Result<Self> {
        let path = Path::new(name);
        if path.is_file() {
            return Self::load(path);
        }
        let with_ext = PathBuf::from(format!("{name}.json"));
        if with_ext.is_file() {
            return Self::load(&with_ext);
        }
        let stem = path.file_name().and_then(|s| s.to_str()).unwrap_or(name);
        match builtin(stem) {
            Some(text) => Self::from_json(text),
            None => Err(Error::Scene(format!("no scene file or built-in scene named {name:?}"))),
        }
    }

    fn validate(&self) -> Result<()> {
        match (self.generators.is_empty(), self.staircase.is_some()) {
            (true, false) => return Err(Error::Scene("scene needs generators or a staircase model".into())),
            (false, true) => {
                return Err(Error::Scene("scene cannot have both generators and a staircase model".into()))
            }
            _ => {}
        }
        if let Some(s) = self.staircase {
            self.staircase_model_of(s)?;
            return Ok(());
        }
        let model = self.model()?;
        self.params_with_depth(&model, self.depth())?;
        self.bbox()?;
        let (nx, ny) = self.resolution();
        if nx < 2 || ny < 2 {
            return Err(Error::Scene("resolution must be at least 2".into()));
        }
        Ok(())
    }

    pub fn is_staircase(&self) -> bool {
        self.staircase.is_some()
    }

    fn staircase_model_of(&self, s: StaircaseSpec) -> Result<StaircaseModel> {
        match s {
            StaircaseSpec::Cantor => Ok(StaircaseModel::Cantor),
            StaircaseSpec::Bernoulli { a } => StaircaseModel::bernoulli(a),
        }
    }

    pub fn staircase_model(&self) -> Result<StaircaseModel> {
        let s = self.staircase.ok_or_else(|| Error::Scene(format!("scene {} has no staircase model", self.name)))?;
        self.staircase_model_of(s)
    }

    pub fn system(&self) -> Result<GeneratorSystem> {
        if self.generators.is_empty() {
            return Err(Error::Scene(format!("scene {} has no generators", self.name)));
        }
        let polys = self
            .generators
            .iter()
            .enumerate()
            .map(|(j, g)| g.polynomial().map_err(|e| Error::Scene(format!("generator {}: {e}", j + 1))))
            .collect::<Result<Vec<_>>>()?;
        GeneratorSystem::new(polys)
    }

    pub fn model(&self) -> Result<RandomModel> {
        let system = self.system()?;
        match &self.weights {
            Some(w) => RandomModel::new(system, w.clone()),
            None => Ok(RandomModel::uniform(system)),
        }
    }

    pub fn trap(&self) -> Option<Trap> {
        if self.trap.is_empty() {
            return None;
        }
        Some(Trap::new(
            self.trap.iter().map(|d| Disk::new(Complex64::new(d.center[0], d.center[1]), d.radius)).collect(),
        ))
    }

    pub fn depth(&self) -> usize {
        self.depth.unwrap_or(DEFAULT_DEPTH)
    }

    /// Escape radius, certified trap and depth limit.
    pub fn params_with_depth(&self, model: &RandomModel, depth: usize) -> Result<EscapeParams> {
        let params = EscapeParams::certified(model.system(), self.trap(), depth)?;
        match self.escape_radius {
            Some(r) => params.with_radius(model.system(), r),
            None => Ok(params),
        }
    }

    /// Defaults to the square `[-R', R']²` with `R'` slightly beyond the escape radius.
    pub fn bbox(&self) -> Result<BBox> {
        match self.bbox {
            Some([xmin, xmax, ymin, ymax]) => BBox::new(xmin, xmax, ymin, ymax),
            None => {
                let r = crate::iteration::escape_radius(&self.system()?);
                Ok(BBox::square(1.02 * r))
            }
        }
    }

    pub fn resolution(&self) -> (usize, usize) {
        self.resolution.map_or((DEFAULT_RESOLUTION, DEFAULT_RESOLUTION), Resolution::dims)
    }

    pub fn cloud_points(&self) -> usize {
        self.cloud_points.unwrap_or(DEFAULT_CLOUD_POINTS)
    }

    pub fn open_set_region(&self) -> Option<Region> {
        self.open_set.map(|a| Region::Annulus {
            center: Complex64::new(a.center[0], a.center[1]),
            inner: a.inner,
            outer: a.outer,
        })
    }

    /// Explicit seeds, or an 8x8 grid of pixel-style centers over the bounding box.
    pub fn seed_points(&self) -> Result<Vec<Complex64>> {
        if !self.seeds.is_empty() {
            return Ok(self.seeds.iter().map(|s| Complex64::new(s[0], s[1])).collect());
        }
        let b = self.bbox()?;
        let n = 8;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let x = b.xmin + (b.xmax - b.xmin) * (i as f64 + 0.5) / n as f64;
                let y = b.ymin + (b.ymax - b.ymin) * (j as f64 + 0.5) / n as f64;
                out.push(Complex64::new(x, y));
            }
        }
        Ok(out)
    }
}

/// Scenes shipped with the crate, keyed by name.
pub const BUILTIN: [(&str, &str); 7] = [
    ("circle", include_str!("../../../scenes/circle.json")),
    ("chebyshev", include_str!("../../../scenes/chebyshev.json")),
    ("dc1", include_str!("../../../scenes/dc1.json")),
    ("two-attractors", include_str!("../../../scenes/two-attractors.json")),
    ("disjoint-k", include_str!("../../../scenes/disjoint-k.json")),
    ("cantor", include_str!("../../../scenes/cantor.json")),
    ("bernoulli-a", include_str!("../../../scenes/bernoulli-a.json")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenes;

    #[test]
    fn builtins_parse_and_match_the_reference_systems() {
        for (name, text) in BUILTIN {
            let scene = Scene::from_json(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(scene.name, name);
        }
        let get = |n| Scene::from_json(builtin(n).unwrap()).unwrap();
        assert_eq!(get("dc1").system().unwrap(), scenes::dc1_system());
        assert_eq!(get("dc1").trap(), Some(scenes::dc1_trap()));
        assert_eq!(get("two-attractors").system().unwrap(), scenes::two_attractors_system());
        assert_eq!(get("disjoint-k").system().unwrap(), scenes::disjoint_k_system());
        assert_eq!(get("circle").system().unwrap(), scenes::circle_system());
        assert_eq!(get("chebyshev").system().unwrap(), scenes::chebyshev_system());
        assert_eq!(get("cantor").staircase_model().unwrap(), StaircaseModel::Cantor);
        assert!(matches!(get("bernoulli-a").staircase_model().unwrap(), StaircaseModel::Bernoulli { .. }));
    }

    #[test]
    fn unknown_keys_rejected_with_position() {
        let text = "{\n  \"name\": \"x\",\n  \"generators\": [[0, 0, 1]],\n  \"colour\": 3\n}";
        match Scene::from_json(text) {
            Err(Error::SceneParse { line, column, message }) => {
                assert_eq!(line, 4);
                assert!(column > 0);
                assert!(message.contains("colour"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invariant_violations_are_named() {
        let bad_weights = r#"{"name": "x", "generators": [[0, 0, 1], [0, 0, 0.25]], "weights": [0.7, 0.7]}"#;
        assert!(matches!(Scene::from_json(bad_weights), Err(Error::InvalidWeights(_))));
        let linear = r#"{"name": "x", "generators": [[0, 2]]}"#;
        assert!(matches!(Scene::from_json(linear), Err(Error::InvalidSystem(_))));
        let both = r#"{"name": "x", "generators": [[0, 0, 1]], "staircase": {"model": "cantor"}}"#;
        assert!(matches!(Scene::from_json(both), Err(Error::Scene(_))));
        let small_radius = r#"{"name": "x", "generators": [[0, 0, 1]], "escape_radius": 0.5}"#;
        assert!(Scene::from_json(small_radius).is_err());
    }

    #[test]
    fn composition_and_complex_coefficients() {
        let text = r#"{"name": "x", "generators": [{"compose": [[[0, 1], 0, 1], [-5, 1]]}]}"#;
        let scene = Scene::from_json(text).unwrap();
        let h = scene.system().unwrap().get(0).clone();
        // i + (z - 5)^2
        let z = Complex64::new(0.3, -0.2);
        let expect = Complex64::new(0.0, 1.0) + (z - 5.0) * (z - 5.0);
        assert!((h.eval(z) - expect).norm() < 1e-12);
    }
}
