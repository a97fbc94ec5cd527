//! Nearest-neighbour lookups over planar point sets.

use num_complex::Complex64;
use rstar::primitives::GeomWithData;
use rstar::RTree;

type Entry = GeomWithData<[f64; 2], usize>;

pub struct PointIndex {
    tree: RTree<Entry>,
    len: usize,
}

impl PointIndex {
    pub fn new(points: &[Complex64]) -> Self {
        let entries: Vec<Entry> = points.iter().enumerate().map(|(i, z)| Entry::new([z.re, z.im], i)).collect();
        Self { tree: RTree::bulk_load(entries), len: points.len() }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Index of and Euclidean distance to the nearest indexed point. Panics on an empty index.
    pub fn nearest(&self, z: Complex64) -> (usize, f64) {
        let q = [z.re, z.im];
        let e = self.tree.nearest_neighbor(&q).expect("nearest on empty index");
        (e.data, dist(e.geom(), &q))
    }

    /// Distance from indexed point `i` (located at `z`) to its nearest other indexed point.
    pub fn nearest_other(&self, i: usize, z: Complex64) -> f64 {
        let q = [z.re, z.im];
        self.tree.nearest_neighbor_iter(&q).find(|e| e.data != i).map_or(f64::INFINITY, |e| dist(e.geom(), &q))
    }

    /// Indices of all points within distance `r` of `z`.
    pub fn within(&self, z: Complex64, r: f64) -> impl Iterator<Item = usize> + '_ {
        self.tree.locate_within_distance([z.re, z.im], r * r).map(|e| e.data)
    }
}

fn dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Median nearest-neighbour distance of a point set (self-matches excluded).
pub fn median_nn_distance(points: &[Complex64]) -> f64 {
    if points.len() < 2 {
        return f64::INFINITY;
    }
    let index = PointIndex::new(points);
    let mut d = crate::par::map_range(points.len(), |i| index.nearest_other(i, points[i]));
    median(&mut d)
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
