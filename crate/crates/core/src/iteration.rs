//! Forward orbits, certified escape and trap regions, the inverse-branch chaos
//! game for J(G), and kernel-Julia witness search.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::par;
use crate::poly::Polynomial;
use crate::system::{stream_rng, GeneratorSystem, Word};

/// Orbits are abandoned as escaped once they pass `radius * ESCAPE_ABORT_FACTOR`.
pub const ESCAPE_ABORT_FACTOR: f64 = 1024.0;
/// Number of independent chaos-game chains; fixed so results do not depend on thread count.
pub const CLOUD_CHAINS: usize = 16;
pub const DEFAULT_BURN_IN: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Self { center, radius }
    }

    #[inline]
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm_sqr() <= self.radius * self.radius
    }
}

/// A finite union of closed disks, forward invariant under every generator once certified.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Trap {
    pub disks: Vec<Disk>,
}

impl Trap {
    pub fn new(disks: Vec<Disk>) -> Self {
        Self { disks }
    }

    #[inline]
    pub fn contains(&self, z: Complex64) -> bool {
        self.disks.iter().any(|d| d.contains(z))
    }
}

/// Result of [`validate_trap`]: the smallest slack `r_target - sup|h_j(z) - b_target|` over all
/// disks and generators, after the Lipschitz allowance between boundary samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapCertificate {
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EscapeParams {
    pub radius: f64,
    pub trap: Option<Trap>,
    pub max_depth: usize,
}

/// How an orbit point is resolved by the certified regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fate {
    Escaped,
    Trapped,
}

impl EscapeParams {
    /// Escape radius from [`escape_radius`], trap checked by [`validate_trap`].
    pub fn certified(system: &GeneratorSystem, trap: Option<Trap>, max_depth: usize) -> Result<Self> {
        if let Some(t) = &trap {
            validate_trap(system, t, 4096)?;
        }
        Ok(Self { radius: escape_radius(system), trap, max_depth })
    }

    /// Replaces the radius; rejected when smaller than the certified bound.
    pub fn with_radius(mut self, system: &GeneratorSystem, radius: f64) -> Result<Self> {
        let bound = escape_radius(system);
        if radius < bound {
            return Err(Error::InvalidParameter(format!("escape radius {radius} below certified bound {bound}")));
        }
        self.radius = radius;
        Ok(self)
    }

    #[inline]
    pub fn fate(&self, z: Complex64) -> Option<Fate> {
        if z.norm_sqr() > self.radius * self.radius {
            Some(Fate::Escaped)
        } else if self.trap.as_ref().is_some_and(|t| t.contains(z)) {
            Some(Fate::Trapped)
        } else {
            None
        }
    }
}

/// Radius beyond which every generator at least doubles the modulus.
///
/// For each generator the bound is the unique positive root of
/// `|a_d| x^d - sum_{i<d} |a_i| x^i - 2x` (one sign change, so one positive root),
/// clamped below by 1. Beyond it `|h(z)| >= 2|z|`.
pub fn escape_radius(system: &GeneratorSystem) -> f64 {
    system.generators().iter().map(doubling_radius).fold(1.0, f64::max)
}

fn doubling_radius(p: &Polynomial) -> f64 {
    let d = p.degree();
    let lead = p.leading().norm();
    let lower: Vec<f64> = p.coeffs()[..d].iter().map(|c| c.norm()).collect();
    let q = |x: f64| {
        let mut v = lead * x.powi(d as i32) - 2.0 * x;
        for (i, a) in lower.iter().enumerate() {
            v -= a * x.powi(i as i32);
        }
        v
    };
    let s: f64 = lower.iter().sum();
    let mut hi = ((2.0 + s) / lead).max(1.0);
    if q(1.0) >= 0.0 {
        return 1.0;
    }
    let mut lo = 1.0;
    while q(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if q(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Certifies that every generator maps every trap disk into a single trap disk.
///
/// Uses `samples` boundary points per disk (maximum modulus principle) plus a derivative-based
/// Lipschitz allowance for the arcs between samples.
pub fn validate_trap(system: &GeneratorSystem, trap: &Trap, samples: usize) -> Result<TrapCertificate> {
    if trap.disks.is_empty() {
        return Err(Error::InvalidParameter("trap has no disks".into()));
    }
    if trap.disks.iter().any(|d| !(d.radius > 0.0)) {
        return Err(Error::InvalidParameter("trap radius must be positive".into()));
    }
    let samples = samples.max(8);
    let mut margin = f64::INFINITY;
    for (i, disk) in trap.disks.iter().enumerate() {
        let spacing = TAU * disk.radius / samples as f64;
        for (j, h) in system.generators().iter().enumerate() {
            let lipschitz = h.derivative().abs_eval(disk.center.norm() + disk.radius);
            let allowance = 0.5 * lipschitz * spacing;
            let images: Vec<Complex64> = (0..samples)
                .map(|k| h.eval(disk.center + Complex64::from_polar(disk.radius, TAU * k as f64 / samples as f64)))
                .collect();
            let best = trap
                .disks
                .iter()
                .map(|t| {
                    let sup = images.iter().map(|w| (w - t.center).norm()).fold(0.0, f64::max);
                    t.radius - (sup + allowance)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            if best <= 0.0 {
                let worst = images
                    .iter()
                    .enumerate()
                    .max_by(|a, b| {
                        let da =
                            trap.disks.iter().map(|t| (a.1 - t.center).norm() - t.radius).fold(f64::INFINITY, f64::min);
                        let db =
                            trap.disks.iter().map(|t| (b.1 - t.center).norm() - t.radius).fold(f64::INFINITY, f64::min);
                        da.total_cmp(&db)
                    })
                    .map(|(k, _)| k)
                    .unwrap_or(0);
                let point = disk.center + Complex64::from_polar(disk.radius, TAU * worst as f64 / samples as f64);
                return Err(Error::TrapNotInvariant { disk: i, generator: j + 1, point });
            }
            margin = margin.min(best);
        }
    }
    Ok(TrapCertificate { margin })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub points: Vec<Complex64>,
    pub escaped: bool,
}

/// Trajectory `z, h_{i_1}(z), ..., γ_{n,1}(z)`, cut short once the modulus passes
/// `radius * 1024`.
pub fn forward_orbit(system: &GeneratorSystem, word: &Word, z: Complex64, radius: f64) -> Orbit {
    let limit = radius * ESCAPE_ABORT_FACTOR;
    let mut points = Vec::with_capacity(word.len() + 1);
    points.push(z);
    let mut cur = z;
    for &j in word.indices() {
        if cur.norm() > limit {
            return Orbit { points, escaped: true };
        }
        cur = system.get(j).eval(cur);
        points.push(cur);
    }
    let escaped = cur.norm() > limit || !cur.re.is_finite() || !cur.im.is_finite();
    Orbit { points, escaped }
}

/// Weighted sample of J(G). `provenance[k]` is the (0-based) generator whose inverse branch
/// produced `points[k]`, so `points[k]` lies in `h_j^{-1}(J(G))` for `j = provenance[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub provenance: Vec<usize>,
}

impl PointCloud {
    pub fn new(points: Vec<Complex64>, weights: Vec<f64>, provenance: Vec<usize>) -> Result<Self> {
        if points.len() != weights.len() || points.len() != provenance.len() {
            return Err(Error::InvalidParameter("point cloud columns differ in length".into()));
        }
        if points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite cloud point".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidParameter("negative cloud weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if !points.is_empty() && (total - 1.0).abs() > 1e-15 * points.len() as f64 + 1e-12 {
            return Err(Error::InvalidParameter(format!("cloud weights sum to {total}")));
        }
        Ok(Self { points, weights, provenance })
    }

    /// Equal weights.
    pub fn uniform(points: Vec<Complex64>, provenance: Vec<usize>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0 / n as f64; n], provenance)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The repelling fixed point of `h` with the largest multiplier.
pub fn repelling_fixed_point(h: &Polynomial, generator: usize) -> Result<Complex64> {
    let mut coeffs = h.coeffs().to_vec();
    coeffs[1] -= 1.0;
    let fixed = Polynomial::new(coeffs)?;
    let mut best = (Complex64::new(0.0, 0.0), f64::NEG_INFINITY);
    for z in fixed.roots()? {
        let m = h.derivative().eval(z).norm();
        if m > best.1 {
            best = (z, m);
        }
    }
    if best.1 <= 1.0 {
        return Err(Error::NoRepellingFixedPoint { generator, multiplier: best.1 });
    }
    Ok(best.0)
}

/// Chaos game on inverse branches: pick a generator uniformly, then a uniformly random root
/// of `h_j(w) = z`. Runs [`CLOUD_CHAINS`] independent chains seeded from `rng_seed`
/// and concatenates them in chain order.
pub fn julia_backward_cloud(
    system: &GeneratorSystem,
    n_points: usize,
    burn_in: usize,
    rng_seed: u64,
) -> Result<PointCloud> {
    if n_points == 0 {
        return Err(Error::InvalidParameter("cloud needs at least one point".into()));
    }
    let seed_point = repelling_fixed_point(system.get(0), 1)?;
    let per_chain = n_points.div_ceil(CLOUD_CHAINS);
    let chains: Vec<Result<(Vec<Complex64>, Vec<usize>)>> = par::map_range(CLOUD_CHAINS, |chain| {
        let take = per_chain.min(n_points.saturating_sub(chain * per_chain));
        let mut rng = stream_rng(rng_seed, chain as u64);
        let mut z = seed_point;
        let mut pts = Vec::with_capacity(take);
        let mut prov = Vec::with_capacity(take);
        for step in 0..burn_in + take {
            let j = rng.random_range(0..system.len());
            let roots = system.get(j).preimages(z)?;
            z = roots[rng.random_range(0..roots.len())];
            if step >= burn_in {
                pts.push(z);
                prov.push(j);
            }
        }
        Ok((pts, prov))
    });
    let mut points = Vec::with_capacity(n_points);
    let mut provenance = Vec::with_capacity(n_points);
    for chain in chains {
        let (p, j) = chain?;
        points.extend(p);
        provenance.extend(j);
    }
    PointCloud::uniform(points, provenance)
}

/// Deterministic cover of J(G) at resolution `eps`: breadth-first inverse iteration from a
/// repelling fixed point, keeping one point per grid box of side `eps` and expanding only
/// newly reached boxes. Stops early once `max_points` boxes are reached.
pub fn julia_box_cover(system: &GeneratorSystem, eps: f64, max_points: usize) -> Result<PointCloud> {
    if !(eps > 0.0) || max_points == 0 {
        return Err(Error::InvalidParameter("box cover needs eps > 0 and max_points > 0".into()));
    }
    let start = repelling_fixed_point(system.get(0), 1)?;
    let key = |z: Complex64| ((z.re / eps).floor() as i64, (z.im / eps).floor() as i64);
    let mut seen = std::collections::HashSet::new();
    let mut points = Vec::new();
    let mut provenance = Vec::new();
    let mut frontier = vec![start];
    seen.insert(key(start));
    while !frontier.is_empty() && points.len() < max_points {
        let expanded: Vec<Result<Vec<(usize, Complex64)>>> = par::map_slice(&frontier, |&z| {
            let mut out = Vec::new();
            for j in 0..system.len() {
                for w in system.get(j).preimages(z)? {
                    out.push((j, w));
                }
            }
            Ok(out)
        });
        let mut next = Vec::new();
        for batch in expanded {
            for (j, w) in batch? {
                if points.len() < max_points && seen.insert(key(w)) {
                    points.push(w);
                    provenance.push(j);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    PointCloud::uniform(points, provenance)
}

/// Shortest word (breadth-first, lexicographic within a length) sending `z` into the escape
/// region or the certified trap, searching lengths up to `params.max_depth`.
///
/// A returned word certifies `z ∉ J_ker(G)`. `None` means the search was exhausted.
pub fn kernel_witness(z: Complex64, system: &GeneratorSystem, params: &EscapeParams) -> Option<Word> {
    let mut queue: VecDeque<(Complex64, Word)> = VecDeque::new();
    queue.push_back((z, Word::empty()));
    while let Some((w, word)) = queue.pop_front() {
        if params.fate(w).is_some() {
            return Some(word);
        }
        if word.len() >= params.max_depth {
            continue;
        }
        for j in 0..system.len() {
            let mut next = word.clone();
            next.push(j);
            queue.push_back((system.get(j).eval(w), next));
        }
    }
    None
}
