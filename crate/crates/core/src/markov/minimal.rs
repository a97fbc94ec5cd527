use std::collections::{BTreeSet, HashMap};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::iteration::{EscapeParams, Fate};
use crate::par;
use crate::spatial::{median, PointIndex};
use crate::system::{stream_rng, RandomModel};

/// Gap threshold is this multiple of the median nearest-neighbour distance.
const GAP_FACTOR: f64 = 20.0;
/// Absolute floor of the gap threshold (orbits that converge to machine precision).
const GAP_FLOOR: f64 = 1e-9;
/// Clusters closer than this multiple of the threshold are reported as ambiguous.
const AMBIGUITY_FACTOR: f64 = 3.0;
/// Images of at most this many points per cluster are used to build the transition graph.
const EDGE_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub points: Vec<Complex64>,
    pub centroid: Complex64,
    pub diameter: f64,
}

/// Node of the transition graph: a finite cluster or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Cluster(usize),
    Infinity,
    /// Image that fell outside every cluster.
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalSet {
    pub nodes: Vec<Node>,
    /// Cyclic period `r_L`; `None` when convergence was too slow to trust.
    pub period: Option<usize>,
}

impl MinimalSet {
    pub fn is_infinity(&self) -> bool {
        self.nodes == [Node::Infinity]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalSetReport {
    pub clusters: Vec<Cluster>,
    /// `(from, generator, to)` edges; generator is 0-based.
    pub edges: Vec<(Node, usize, Node)>,
    pub minimal_sets: Vec<MinimalSet>,
    pub includes_infinity: bool,
    pub threshold: f64,
    /// Smallest inter-cluster distance is below `3 × threshold`.
    pub ambiguous: bool,
    /// First and second halves of the samples cluster differently.
    pub slow_convergence: bool,
    pub escape_radius: f64,
}

impl MinimalSetReport {
    /// `Σ_L r_L`, when every period is known.
    pub fn period_sum(&self) -> Option<usize> {
        self.minimal_sets.iter().map(|m| m.period).sum()
    }

    /// Minimal set containing `node`, if any.
    pub fn set_of(&self, node: Node) -> Option<usize> {
        self.minimal_sets.iter().position(|m| m.nodes.contains(&node))
    }

    /// Node reached by a point: infinity beyond the escape radius, else the cluster whose
    /// nearest point is within `radius`.
    fn locate(&self, index: &PointIndex, owner: &[usize], z: Complex64, radius: f64) -> Node {
        if !(z.norm() <= self.escape_radius) {
            return Node::Infinity;
        }
        if index.is_empty() {
            return Node::Unknown;
        }
        let (k, d) = index.nearest(z);
        if d <= radius {
            Node::Cluster(owner[k])
        } else {
            Node::Unknown
        }
    }

    fn point_index(&self) -> (PointIndex, Vec<usize>) {
        let mut pts = Vec::new();
        let mut owner = Vec::new();
        for (k, c) in self.clusters.iter().enumerate() {
            pts.extend_from_slice(&c.points);
            owner.extend(std::iter::repeat_n(k, c.points.len()));
        }
        (PointIndex::new(&pts), owner)
    }
}

/// Runs random forward orbits from `seeds` and locates the minimal sets of the random system
/// as bottom strongly connected components of the cluster transition graph.
pub fn minimal_sets(
    model: &RandomModel,
    params: &EscapeParams,
    seeds: &[Complex64],
    burn_in: usize,
    samples: usize,
    rng_seed: u64,
) -> Result<MinimalSetReport> {
    if seeds.is_empty() || samples == 0 {
        return Err(Error::InvalidParameter("minimal_sets needs seeds and samples".into()));
    }
    let orbits: Vec<(Vec<Complex64>, bool)> = par::map_range(seeds.len(), |i| {
        let mut rng = stream_rng(rng_seed, i as u64);
        let mut z = seeds[i];
        let mut kept = Vec::with_capacity(samples);
        for step in 0..burn_in + samples {
            if params.fate(z) == Some(Fate::Escaped) {
                return (kept, true);
            }
            if step >= burn_in {
                kept.push(z);
            }
            z = model.system().get(model.sample_index(&mut rng)).eval(z);
        }
        (kept, false)
    });
    let includes_infinity = orbits.iter().any(|o| o.1);
    let all: Vec<Complex64> = orbits.iter().flat_map(|o| o.0.iter().copied()).collect();
    let first: Vec<Complex64> = orbits.iter().flat_map(|o| o.0[..o.0.len() / 2].iter().copied()).collect();
    let second: Vec<Complex64> = orbits.iter().flat_map(|o| o.0[o.0.len() / 2..].iter().copied()).collect();

    let threshold = gap_threshold(&all);
    let clusters = single_linkage(&all, threshold);
    let slow_convergence = !first.is_empty()
        && !second.is_empty()
        && single_linkage(&first, threshold).len() != single_linkage(&second, threshold).len();

    let mut min_gap = f64::INFINITY;
    for a in 0..clusters.len() {
        for b in a + 1..clusters.len() {
            min_gap = min_gap.min(set_distance(&clusters[a].points, &clusters[b].points));
        }
    }
    let ambiguous = min_gap < AMBIGUITY_FACTOR * threshold;

    let mut report = MinimalSetReport {
        clusters,
        edges: Vec::new(),
        minimal_sets: Vec::new(),
        includes_infinity,
        threshold,
        ambiguous,
        slow_convergence,
        escape_radius: params.radius,
    };
    let (index, owner) = report.point_index();
    let mut edges = BTreeSet::new();
    for (k, c) in report.clusters.iter().enumerate() {
        let stride = c.points.len().div_ceil(EDGE_SAMPLES).max(1);
        for (j, h) in model.system().generators().iter().enumerate() {
            edges.insert((Node::Infinity, j, Node::Infinity));
            for z in c.points.iter().step_by(stride) {
                let to = report.locate(&index, &owner, h.eval(*z), threshold);
                edges.insert((Node::Cluster(k), j, to));
            }
        }
    }
    report.edges = edges.into_iter().collect();

    let mut nodes: Vec<Node> = (0..report.clusters.len()).map(Node::Cluster).collect();
    nodes.push(Node::Infinity);
    let trusted = !(report.slow_convergence || report.ambiguous);
    report.minimal_sets = bottom_components(&nodes, &report.edges)
        .into_iter()
        .map(|(members, period)| MinimalSet { nodes: members, period: trusted.then_some(period) })
        .collect();
    Ok(report)
}

fn gap_threshold(points: &[Complex64]) -> f64 {
    if points.len() < 2 {
        return GAP_FLOOR;
    }
    let index = PointIndex::new(points);
    let mut d = par::map_range(points.len(), |i| index.nearest_other(i, points[i]));
    (GAP_FACTOR * median(&mut d)).max(GAP_FLOOR)
}

fn set_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let index = PointIndex::new(b);
    a.iter().map(|z| index.nearest(*z).1).fold(f64::INFINITY, f64::min)
}

/// Single-linkage clusters with the given gap. Exact duplicates are merged before linking.
fn single_linkage(points: &[Complex64], threshold: f64) -> Vec<Cluster> {
    let mut distinct: HashMap<(u64, u64), usize> = HashMap::new();
    let mut reps: Vec<Complex64> = Vec::new();
    for z in points {
        let key = (z.re.to_bits(), z.im.to_bits());
        distinct.entry(key).or_insert_with(|| {
            reps.push(*z);
            reps.len() - 1
        });
    }
    let n = reps.len();
    if n == 0 {
        return Vec::new();
    }
    let index = PointIndex::new(&reps);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, &z) in reps.iter().enumerate() {
        for j in index.within(z, threshold) {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (i, &z) in reps.iter().enumerate() {
        let root = find(&mut parent, i);
        let g = *slot.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(z);
    }
    groups
        .into_iter()
        .map(|points| {
            let centroid = points.iter().sum::<Complex64>() / points.len() as f64;
            let radius = points.iter().map(|z| (z - centroid).norm()).fold(0.0, f64::max);
            Cluster { points, centroid, diameter: 2.0 * radius }
        })
        .collect()
}

/// Bottom strongly connected components and their periods (gcd of cycle lengths, from BFS
/// levels: `gcd over edges u→v of level(u) + 1 - level(v)`).
fn bottom_components(nodes: &[Node], edges: &[(Node, usize, Node)]) -> Vec<(Vec<Node>, usize)> {
    let pos: HashMap<Node, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let n = nodes.len();
    let unknown = n;
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n + 1];
    for (from, _, to) in edges {
        let f = pos[from];
        let t = pos.get(to).copied().unwrap_or(unknown);
        adj[f].insert(t);
    }
    let reach: Vec<Vec<bool>> = (0..=n)
        .map(|s| {
            let mut seen = vec![false; n + 1];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            seen
        })
        .collect();
    let mut done = vec![false; n];
    let mut out = Vec::new();
    for u in 0..n {
        if done[u] || reach[u][unknown] {
            continue;
        }
        let bottom = (0..n).all(|v| !reach[u][v] || reach[v][u]);
        if !bottom {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&v| reach[u][v]).collect();
        for &v in &members {
            done[v] = true;
        }
        // BFS levels inside the component.
        let mut level = vec![usize::MAX; n + 1];
        level[u] = 0;
        let mut queue = std::collections::VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if level[y] == usize::MAX {
                    level[y] = level[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        let mut g = 0usize;
        for &x in &members {
            for &y in &adj[x] {
                let diff = (level[x] as i64 + 1 - level[y] as i64).unsigned_abs() as usize;
                g = gcd(g, diff);
            }
        }
        out.push((members.into_iter().map(|i| nodes[i]).collect(), g.max(1)));
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Per-minimal-set Monte Carlo probabilities `T_{L,τ}(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalProbabilities {
    pub trials: u64,
    /// Hit counts, indexed like `report.minimal_sets`.
    pub counts: Vec<u64>,
    pub indeterminate: u64,
}

impl MinimalProbabilities {
    pub fn probabilities(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.trials as f64).collect()
    }

    pub fn indeterminate_fraction(&self) -> f64 {
        self.indeterminate as f64 / self.trials as f64
    }

    pub fn flagged(&self) -> bool {
        self.indeterminate_fraction() > crate::estimate::INDETERMINATE_LIMIT
    }
}

/// Fraction of random orbits from `z` that enter the neighbourhood of each minimal set within
/// `max_steps` steps. The neighbourhood is the cluster gap threshold (or the escape radius for
/// infinity).
pub fn t_minimal_mc(
    z: Complex64,
    model: &RandomModel,
    report: &MinimalSetReport,
    trials: u64,
    max_steps: usize,
    rng_seed: u64,
) -> MinimalProbabilities {
    let (index, owner) = report.point_index();
    let radius = (3.0 * report.threshold).max(1e-6);
    let parts = crate::estimate::chunks(trials, crate::estimate::MC_CHUNKS);
    let n_sets = report.minimal_sets.len();
    let counts = par::map_slice(&parts, |&(chunk, n)| {
        let mut rng = stream_rng(rng_seed, chunk);
        let mut hits = vec![0u64; n_sets];
        let mut open = 0u64;
        for _ in 0..n {
            let mut w = z;
            let mut landed = None;
            for _ in 0..=max_steps {
                if let Some(set) = report.set_of(report.locate(&index, &owner, w, radius)) {
                    landed = Some(set);
                    break;
                }
                w = model.system().get(model.sample_index(&mut rng)).eval(w);
            }
            match landed {
                Some(s) => hits[s] += 1,
                None => open += 1,
            }
        }
        (hits, open)
    });
    let mut total = vec![0u64; n_sets];
    let mut indeterminate = 0;
    for (hits, open) in counts {
        for (t, h) in total.iter_mut().zip(hits) {
            *t += h;
        }
        indeterminate += open;
    }
    MinimalProbabilities { trials, counts: total, indeterminate }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContractionEstimate {
    /// `exp(slope)` of `log |(γ_{n,1})'(z)|` against `n`.
    pub eta: f64,
    pub used_probes: usize,
    pub excluded_probes: usize,
}

impl ContractionEstimate {
    pub fn contracting(&self) -> bool {
        self.eta < 1.0
    }
}

/// Least-squares rate of `log |(γ_{n,1})'(z)|` over `words_per_probe` random words of length
/// `n` from each probe. Probes already beyond the escape radius are excluded.
pub fn contraction_rate(
    model: &RandomModel,
    params: &EscapeParams,
    probes: &[Complex64],
    n: usize,
    words_per_probe: usize,
    rng_seed: u64,
) -> Result<ContractionEstimate> {
    let used: Vec<Complex64> = probes.iter().copied().filter(|z| params.fate(*z) != Some(Fate::Escaped)).collect();
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for (i, z0) in used.iter().enumerate() {
        let mut rng = stream_rng(rng_seed, i as u64);
        for _ in 0..words_per_probe {
            let mut z = *z0;
            let mut log_deriv = 0.0;
            for k in 1..=n {
                let (w, dw) = model.system().get(model.sample_index(&mut rng)).eval_with_derivative(z);
                let m = dw.norm();
                if m == 0.0 || !w.re.is_finite() {
                    break;
                }
                log_deriv += m.ln();
                if log_deriv < -600.0 {
                    break;
                }
                samples.push((k as f64, log_deriv));
                z = w;
            }
        }
    }
    if samples.len() < 2 {
        return Err(Error::DegenerateFit("too few derivative samples".into()));
    }
    let (slope, _) = crate::estimate::least_squares(&samples)?;
    Ok(ContractionEstimate { eta: slope.exp(), used_probes: used.len(), excluded_probes: probes.len() - used.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenes;
    use crate::system::GeneratorSystem;

    fn grid_seeds(half: f64, n: usize) -> Vec<Complex64> {
        let mut v = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let t = |k: usize| -half + 2.0 * half * (k as f64 + 0.5) / n as f64;
                v.push(Complex64::new(t(i), t(j)));
            }
        }
        v
    }

    #[test]
    fn two_attractors() {
        let model = RandomModel::uniform(scenes::two_attractors_system());
        let params = EscapeParams::certified(model.system(), None, 100).unwrap();
        let report = minimal_sets(&model, &params, &grid_seeds(3.0, 8), 200, 50, 1).unwrap();
        assert_eq!(report.minimal_sets.len(), 2);
        assert_eq!(report.period_sum(), Some(2));
        assert!(report.minimal_sets.iter().any(|m| m.is_infinity()));
        let finite = report.minimal_sets.iter().find(|m| !m.is_infinity()).unwrap();
        let Node::Cluster(k) = finite.nodes[0] else { panic!() };
        assert!(report.clusters[k].centroid.norm() <= 1e-6);
    }

    #[test]
    fn basilica_cycle_has_period_two() {
        let sys = GeneratorSystem::new(vec![scenes::basilica()]).unwrap();
        let model = RandomModel::uniform(sys);
        let params = EscapeParams::certified(model.system(), None, 100).unwrap();
        let report = minimal_sets(&model, &params, &grid_seeds(1.5, 8), 200, 50, 2).unwrap();
        let finite: Vec<_> = report.minimal_sets.iter().filter(|m| !m.is_infinity()).collect();
        assert_eq!(finite.len(), 1);
        assert_eq!(finite[0].period, Some(2));
        assert_eq!(finite[0].nodes.len(), 2);
    }

    #[test]
    fn minimal_probabilities_balance() {
        let model = RandomModel::uniform(scenes::two_attractors_system());
        let params = EscapeParams::certified(model.system(), None, 100).unwrap();
        let report = minimal_sets(&model, &params, &grid_seeds(3.0, 6), 100, 20, 1).unwrap();
        let probs = t_minimal_mc(Complex64::new(0.1, 0.0), &model, &report, 1000, 200, 4);
        let zero = report.minimal_sets.iter().position(|m| !m.is_infinity()).unwrap();
        assert_eq!(probs.counts[zero], 1000);
        let far = t_minimal_mc(Complex64::new(50.0, 0.0), &model, &report, 1000, 200, 4);
        let inf = report.minimal_sets.iter().position(|m| m.is_infinity()).unwrap();
        assert_eq!(far.counts[inf], 1000);
        for p in [&probs, &far] {
            assert_eq!(p.counts.iter().sum::<u64>() + p.indeterminate, p.trials);
        }
    }

    #[test]
    fn contraction_examples() {
        let model = RandomModel::uniform(scenes::circle_system());
        let params = EscapeParams::certified(model.system(), None, 100).unwrap();
        let est =
            contraction_rate(&model, &params, &[Complex64::new(0.5, 0.0), Complex64::new(5.0, 0.0)], 12, 4, 1).unwrap();
        assert!(est.contracting());
        assert_eq!(est.excluded_probes, 1);

        let model = RandomModel::uniform(scenes::two_attractors_system());
        let params = EscapeParams::certified(model.system(), None, 100).unwrap();
        let probes: Vec<Complex64> = (0..8).map(|k| Complex64::from_polar(0.3, k as f64)).collect();
        assert!(contraction_rate(&model, &params, &probes, 12, 8, 2).unwrap().contracting());
    }

    #[test]
    fn period_of_three_cycle() {
        let nodes = vec![Node::Cluster(0), Node::Cluster(1), Node::Cluster(2), Node::Infinity];
        let edges = vec![
            (Node::Cluster(0), 0, Node::Cluster(1)),
            (Node::Cluster(1), 0, Node::Cluster(2)),
            (Node::Cluster(2), 0, Node::Cluster(0)),
            (Node::Infinity, 0, Node::Infinity),
        ];
        let comps = bottom_components(&nodes, &edges);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].1, 3);
        assert_eq!(comps[1].1, 1);
    }
}
