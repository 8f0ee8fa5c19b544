use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

/// Spaces up to this size get exhaustive metric-axiom checks.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 200;

/// How distances are produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricKind<T> {
    Euclidean,
    /// Euclidean distance raised to `alpha`, `0 < alpha <= 1`.
    Snowflake {
        alpha: T,
    },
    /// Explicit distance matrix.
    Matrix,
    /// Shortest-path closure of a weighted, undirected graph.
    Graph,
}

impl<T> MetricKind<T> {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Euclidean => "euclidean",
            MetricKind::Snowflake { .. } => "snowflake",
            MetricKind::Matrix => "matrix",
            MetricKind::Graph => "graph",
        }
    }
}

/// A finite metric space on dense indices `0..n`, together with the step
/// graph that defines which pairs may be consecutive on a discrete arc.
///
/// Coordinate-backed and matrix spaces use the unit-ball graph at
/// `step_radius`; graph spaces use their own edges.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace<T> {
    kind: MetricKind<T>,
    n: usize,
    dim: usize,
    coords: Option<Vec<T>>,
    matrix: Option<Vec<T>>,
    edges: Option<Vec<(usize, usize, T)>>,
    step_radius: T,
    resolution: T,
    adjacency: Vec<Vec<usize>>,
}

impl<T: Scalar> MetricSpace<T> {
    /// Euclidean space on the given coordinate vectors.
    pub fn euclidean(points: Vec<Vec<T>>, step_radius: Option<T>) -> Result<Self> {
        Self::from_coords(MetricKind::Euclidean, points, step_radius)
    }

    /// Snowflaked euclidean space `d = |x - y|^alpha`.
    pub fn snowflake(points: Vec<Vec<T>>, alpha: T, step_radius: Option<T>) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "snowflake exponent {alpha} outside (0, 1]"
            )));
        }
        Self::from_coords(MetricKind::Snowflake { alpha }, points, step_radius)
    }

    fn from_coords(kind: MetricKind<T>, points: Vec<Vec<T>>, step_radius: Option<T>) -> Result<Self> {
        let n = points.len();
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidSpace("points have inconsistent dimensions".into()));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSpace("non-finite coordinate".into()));
        }
        let coords: Vec<T> = points.into_iter().flatten().collect();
        let mut space = Self {
            kind,
            n,
            dim,
            coords: Some(coords),
            matrix: None,
            edges: None,
            step_radius: T::zero(),
            resolution: T::zero(),
            adjacency: Vec::new(),
        };
        space.finish_unit_ball(step_radius)?;
        Ok(space)
    }

    /// Space given by an explicit distance matrix. Rejects asymmetric
    /// matrices and triangle violations beyond `1e-9 * max entry`.
    pub fn from_matrix(rows: Vec<Vec<T>>, step_radius: Option<T>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpace("distance matrix is not square".into()));
        }
        let matrix: Vec<T> = rows.into_iter().flatten().collect();
        let max_entry = matrix.iter().copied().fold(T::zero(), T::max);
        let tol = max_entry * lit(1e-9);
        for i in 0..n {
            for j in 0..n {
                let d = matrix[i * n + j];
                if !d.is_finite() || d < T::zero() {
                    return Err(Error::InvalidSpace(format!("entry ({i}, {j}) = {d} is not a finite non-negative distance")));
                }
                if i == j && d != T::zero() {
                    return Err(Error::InvalidSpace(format!("diagonal entry ({i}, {i}) = {d} is not zero")));
                }
                if i != j && d == T::zero() {
                    return Err(Error::InvalidSpace(format!("distinct points {i} and {j} at distance zero")));
                }
                if (d - matrix[j * n + i]).abs() > tol {
                    return Err(Error::InvalidSpace(format!(
                        "asymmetric distances: d({i}, {j}) = {d} but d({j}, {i}) = {}",
                        matrix[j * n + i]
                    )));
                }
            }
        }
        let mut space = Self {
            kind: MetricKind::Matrix,
            n,
            dim: 0,
            coords: None,
            matrix: Some(matrix),
            edges: None,
            step_radius: T::zero(),
            resolution: T::zero(),
            adjacency: Vec::new(),
        };
        if let Some((i, j, k)) = space.triangle_violation(tol, 0) {
            return Err(Error::InvalidSpace(format!(
                "triangle inequality violated: d({i}, {k}) > d({i}, {j}) + d({j}, {k})"
            )));
        }
        space.finish_unit_ball(step_radius)?;
        Ok(space)
    }

    /// Graph metric: all-pairs shortest paths over positive edge weights.
    /// Step adjacency is the edge relation itself.
    pub fn from_graph(n: usize, edges: Vec<(usize, usize, T)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut weighted: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange { index: u.max(v), len: n });
            }
            if u == v || !(w > T::zero()) || !w.is_finite() {
                return Err(Error::InvalidSpace(format!("edge ({u}, {v}, {w}) is not a positive-weight edge")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            weighted[u].push((v, w));
            weighted[v].push((u, w));
        }
        for a in &mut adjacency {
            a.sort_unstable();
            a.dedup();
        }
        let rows: Vec<Vec<T>> = (0..n).into_par_iter().map(|s| dijkstra(&weighted, s)).collect();
        for (s, row) in rows.iter().enumerate() {
            if let Some(t) = row.iter().position(|d| d.is_infinite()) {
                return Err(Error::InvalidSpace(format!("graph is disconnected: {t} unreachable from {s}")));
            }
        }
        let matrix: Vec<T> = rows.into_iter().flatten().collect();
        let step_radius = edges.iter().map(|e| e.2).fold(T::zero(), T::max);
        let resolution = min_positive(&matrix);
        Ok(Self {
            kind: MetricKind::Graph,
            n,
            dim: 0,
            coords: None,
            matrix: Some(matrix),
            edges: Some(edges),
            step_radius,
            resolution,
            adjacency,
        })
    }

    fn finish_unit_ball(&mut self, step_radius: Option<T>) -> Result<()> {
        let n = self.n;
        let this = &*self;
        let min_per_row: Vec<T> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut m = T::infinity();
                for j in 0..n {
                    if i != j {
                        let d = this.dist(i, j);
                        if d < m {
                            m = d;
                        }
                    }
                }
                m
            })
            .collect();
        if let Some(i) = min_per_row.iter().position(|&d| d == T::zero()) {
            return Err(Error::InvalidSpace(format!("point {i} duplicates another point")));
        }
        let h = if n < 2 {
            T::zero()
        } else {
            min_per_row.iter().copied().fold(T::infinity(), T::min)
        };
        let rho = match step_radius {
            Some(r) if !(r > T::zero()) => {
                return Err(Error::InvalidParameter(format!("step radius {r} must be positive")));
            }
            Some(r) => r,
            None => h * lit(1.5),
        };
        let adjacency: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|i| (0..n).filter(|&j| j != i && this.dist(i, j) <= rho).collect())
            .collect();
        self.resolution = h;
        self.step_radius = rho;
        self.adjacency = adjacency;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn kind(&self) -> MetricKind<T> {
        self.kind
    }

    /// Coordinate dimension; zero for matrix and graph spaces.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self, i: usize) -> Option<&[T]> {
        self.coords.as_ref().map(|c| &c[i * self.dim..(i + 1) * self.dim])
    }

    pub fn edges(&self) -> Option<&[(usize, usize, T)]> {
        self.edges.as_deref()
    }

    /// Row-major distance matrix for matrix and graph spaces.
    pub fn matrix(&self) -> Option<&[T]> {
        self.matrix.as_deref()
    }

    /// True for coordinate-backed spaces in the plane.
    pub fn is_planar(&self) -> bool {
        self.coords.is_some() && self.dim == 2
    }

    /// Two points are step-adjacent iff `d <= step_radius` (or share an
    /// edge, for graph spaces).
    pub fn step_radius(&self) -> T {
        self.step_radius
    }

    /// Minimum positive pairwise distance `h`; zero for spaces with fewer
    /// than two points.
    pub fn resolution(&self) -> T {
        self.resolution
    }

    /// Sorted step-graph neighbours of `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn is_step(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, len: self.n })
        }
    }

    /// Checked distance.
    pub fn distance(&self, i: usize, j: usize) -> Result<T> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.dist(i, j))
    }

    /// Distance without index validation; panics on out-of-range indices.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> T {
        if i == j {
            return T::zero();
        }
        if let Some(m) = &self.matrix {
            return m[i * self.n + j];
        }
        let c = self.coords.as_ref().expect("coordinate space");
        let (a, b) = (&c[i * self.dim..(i + 1) * self.dim], &c[j * self.dim..(j + 1) * self.dim]);
        let sq: T = a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum();
        match self.kind {
            MetricKind::Snowflake { alpha } => sq.sqrt().powf(alpha),
            _ => sq.sqrt(),
        }
    }

    /// First triangle violation `d(i,k) > d(i,j) + d(j,k) + tol`, if any.
    /// Exhaustive up to [`EXHAUSTIVE_AXIOM_LIMIT`] points, otherwise
    /// checks a seeded sample of triples.
    pub fn triangle_violation(&self, tol: T, seed: u64) -> Option<(usize, usize, usize)> {
        let n = self.n;
        let violates = |i: usize, j: usize, k: usize| self.dist(i, k) > self.dist(i, j) + self.dist(j, k) + tol;
        if n <= EXHAUSTIVE_AXIOM_LIMIT {
            (0..n).into_par_iter().find_map_first(|i| {
                for j in 0..n {
                    for k in 0..n {
                        if violates(i, j, k) {
                            return Some((i, j, k));
                        }
                    }
                }
                None
            })
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let idx: Vec<usize> = (0..n).collect();
            let sample: Vec<usize> = idx.choose_multiple(&mut rng, EXHAUSTIVE_AXIOM_LIMIT).copied().collect();
            for &i in &sample {
                for &j in &sample {
                    for &k in &sample {
                        if violates(i, j, k) {
                            return Some((i, j, k));
                        }
                    }
                }
            }
            None
        }
    }

    /// Checks symmetry, positivity and the triangle inequality; returns a
    /// description of the first violation.
    pub fn verify_axioms(&self) -> std::result::Result<(), String> {
        let n = self.n;
        let lim = n.min(EXHAUSTIVE_AXIOM_LIMIT);
        for i in 0..lim {
            for j in 0..lim {
                let d = self.dist(i, j);
                if d != self.dist(j, i) {
                    return Err(format!("asymmetric pair ({i}, {j})"));
                }
                if (i == j) != (d == T::zero()) || d < T::zero() {
                    return Err(format!("positivity fails at ({i}, {j})"));
                }
            }
        }
        let scale = if n > 1 { self.resolution.max(T::one()) } else { T::one() };
        let tol = scale * lit::<T>(T::REL_SLACK);
        match self.triangle_violation(tol, 0) {
            Some((i, j, k)) => Err(format!("triangle inequality fails at ({i}, {j}, {k}): {}", to_f64(self.dist(i, k)))),
            None => Ok(()),
        }
    }
}

fn min_positive<T: Scalar>(m: &[T]) -> T {
    let v = m.iter().copied().filter(|&d| d > T::zero()).fold(T::infinity(), T::min);
    if v.is_finite() {
        v
    } else {
        T::zero()
    }
}

struct HeapItem<T>(T, usize);

impl<T: PartialOrd> PartialEq for HeapItem<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: PartialOrd> Eq for HeapItem<T> {}
impl<T: PartialOrd> PartialOrd for HeapItem<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: PartialOrd> Ord for HeapItem<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then index
        other
            .0
            .partial_cmp(&self.0)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.1.cmp(&self.1))
    }
}

fn dijkstra<T: Scalar>(adj: &[Vec<(usize, T)>], source: usize) -> Vec<T> {
    let mut dist = vec![T::infinity(); adj.len()];
    dist[source] = T::zero();
    let mut heap = BinaryHeap::new();
    heap.push(HeapItem(T::zero(), source));
    while let Some(HeapItem(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(HeapItem(nd, v));
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> MetricSpace<f64> {
        MetricSpace::euclidean((0..n).map(|i| vec![i as f64]).collect(), None).unwrap()
    }

    #[test]
    fn identity_and_pythagorean_distance() {
        let s = MetricSpace::euclidean(vec![vec![0.0, 0.0], vec![3.0, 4.0]], None).unwrap();
        assert_eq!(s.distance(1, 1).unwrap(), 0.0);
        assert_eq!(s.distance(0, 1).unwrap(), 5.0);
    }

    #[test]
    fn snowflake_distance_is_power_of_euclidean() {
        let s = MetricSpace::snowflake(vec![vec![0.0, 0.0], vec![3.0, 4.0]], 0.5, None).unwrap();
        assert!((s.distance(0, 1).unwrap() - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn snowflake_exponent_outside_unit_interval_is_rejected() {
        for alpha in [0.0, -0.5, 1.5] {
            assert!(MetricSpace::snowflake(vec![vec![0.0], vec![1.0]], alpha, None).is_err());
        }
    }

    #[test]
    fn out_of_range_index_is_an_error() {
        let s = line(3);
        assert!(matches!(s.distance(0, 3), Err(Error::IndexOutOfRange { index: 3, len: 3 })));
    }

    #[test]
    fn resolution_and_default_step_radius() {
        let s = MetricSpace::euclidean(vec![vec![0.0], vec![2.0], vec![7.0]], None).unwrap();
        assert_eq!(s.resolution(), 2.0);
        assert_eq!(s.step_radius(), 3.0);
        assert_eq!(s.neighbors(0), &[1]);
        assert_eq!(s.neighbors(2), &[] as &[usize]);
        assert_eq!(line(1).resolution(), 0.0);
    }

    #[test]
    fn duplicate_points_are_rejected() {
        assert!(MetricSpace::euclidean(vec![vec![1.0, 1.0], vec![1.0, 1.0]], None).is_err());
    }

    #[test]
    fn graph_metric_is_shortest_path_closure() {
        // square with one heavy diagonal
        let edges = vec![(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0), (0, 2, 5.0)];
        let g = MetricSpace::from_graph(4, edges).unwrap();
        assert_eq!(g.dist(0, 2), 2.0);
        assert_eq!(g.dist(1, 3), 2.0);
        assert!(g.is_step(0, 2));
        assert!(!g.is_step(1, 3));
        assert_eq!(g.resolution(), 1.0);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        assert!(MetricSpace::from_graph(3, vec![(0, 1, 1.0)]).is_err());
    }

    #[test]
    fn matrix_validation_reports_asymmetry_and_triangle_failures() {
        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        let err = MetricSpace::from_matrix(asym, None).unwrap_err().to_string();
        assert!(err.contains("(0, 1)"), "{err}");
        let tri = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        assert!(MetricSpace::from_matrix(tri, None).unwrap_err().to_string().contains("triangle"));
    }

    #[test]
    fn axioms_hold_on_constructed_spaces() {
        line(50).verify_axioms().unwrap();
        let s = MetricSpace::snowflake((0..30).map(|i| vec![i as f64, (i * i % 7) as f64]).collect(), 0.3, None).unwrap();
        s.verify_axioms().unwrap();
    }

    #[test]
    fn f32_spaces_work() {
        let s = MetricSpace::<f32>::euclidean(vec![vec![0.0, 0.0], vec![3.0, 4.0]], None).unwrap();
        assert_eq!(s.dist(0, 1), 5.0_f32);
    }
}
