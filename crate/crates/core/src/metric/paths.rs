use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{HypothesisFailure, Result};
use crate::metric::sets::diameter_unchecked;
use crate::metric::{DiscreteArc, MetricSpace};
use crate::scalar::Scalar;

/// A step path realising linear connectivity for one pair, with the
/// achieved ratio `diam(path) / d(x, y)`.
#[derive(Debug, Clone, Serialize)]
pub struct LinearPath<T> {
    pub arc: DiscreteArc,
    pub diameter: T,
    /// Defined as 1 when `x == y`.
    pub ratio: T,
}

/// Minimum-hop step path from `x` to `y`.
///
/// Breadth-first search with neighbours expanded in ascending index order,
/// so the path equals the `x`-rooted tree path of [`BfsTree`].
pub fn linear_path<T: Scalar>(space: &MetricSpace<T>, x: usize, y: usize) -> Result<LinearPath<T>> {
    space.check_index(x)?;
    space.check_index(y)?;
    if x == y {
        return Ok(LinearPath {
            arc: DiscreteArc::single(x),
            diameter: T::zero(),
            ratio: T::one(),
        });
    }
    let mut parent: HashMap<usize, usize> = HashMap::new();
    parent.insert(x, x);
    let mut queue = VecDeque::from([x]);
    'search: while let Some(u) = queue.pop_front() {
        for &v in space.neighbors(u) {
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(v) {
                e.insert(u);
                if v == y {
                    break 'search;
                }
                queue.push_back(v);
            }
        }
    }
    if !parent.contains_key(&y) {
        return Err(HypothesisFailure::NoPath { from: x, to: y }.into());
    }
    let mut path = vec![y];
    let mut cur = y;
    while cur != x {
        cur = parent[&cur];
        path.push(cur);
    }
    path.reverse();
    let diameter = diameter_unchecked(space, &path);
    let ratio = diameter / space.dist(x, y);
    Ok(LinearPath {
        arc: DiscreteArc::from_indices(path).expect("bfs paths are injective"),
        diameter,
        ratio,
    })
}

/// Full breadth-first tree from a root, with the diameter of every tree
/// path, computed incrementally along the tree.
pub(crate) struct BfsTree<T> {
    pub parent: Vec<Option<usize>>,
    pub path_diameter: Vec<T>,
}

impl<T: Scalar> BfsTree<T> {
    pub fn build(space: &MetricSpace<T>, root: usize) -> Self {
        let n = space.len();
        let mut parent = vec![None; n];
        let mut path_diameter = vec![T::zero(); n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut order = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in space.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        for &v in order.iter().skip(1) {
            let p = parent[v].expect("non-root has a parent");
            let mut far = path_diameter[p];
            let mut a = Some(p);
            while let Some(z) = a {
                far = far.max(space.dist(z, v));
                a = parent[z];
            }
            path_diameter[v] = far;
        }
        Self { parent, path_diameter }
    }

    pub fn reached(&self, root: usize, v: usize) -> bool {
        v == root || self.parent[v].is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: usize, h: usize) -> MetricSpace<f64> {
        let pts = (0..h).flat_map(|y| (0..w).map(move |x| vec![x as f64, y as f64])).collect();
        MetricSpace::euclidean(pts, Some(1.0)).unwrap()
    }

    #[test]
    fn degenerate_pair_has_unit_ratio() {
        let s = grid(3, 3);
        let p = linear_path(&s, 4, 4).unwrap();
        assert_eq!(p.arc.indices(), &[4]);
        assert_eq!(p.ratio, 1.0);
    }

    #[test]
    fn adjacent_grid_points_give_the_edge() {
        let s = grid(3, 3);
        let p = linear_path(&s, 0, 1).unwrap();
        assert_eq!(p.arc.indices(), &[0, 1]);
        assert_eq!(p.ratio, 1.0);
    }

    #[test]
    fn opposite_corners_of_a_grid_give_a_staircase() {
        let s = grid(10, 10);
        let p = linear_path(&s, 0, 99).unwrap();
        assert_eq!(p.arc.len(), 19);
        assert!(p.ratio <= 2f64.sqrt());
        DiscreteArc::new(&s, p.arc.indices().to_vec()).unwrap();
    }

    #[test]
    fn disconnected_pair_signals_hypothesis_failure() {
        let s = MetricSpace::euclidean(vec![vec![0.0], vec![1.0], vec![5.0]], Some(1.0)).unwrap();
        let e = linear_path(&s, 0, 2).unwrap_err();
        assert!(matches!(e, crate::Error::Hypothesis(HypothesisFailure::NoPath { from: 0, to: 2 })));
    }

    #[test]
    fn tree_paths_match_linear_paths() {
        let s = grid(5, 4);
        let tree = BfsTree::build(&s, 7);
        for y in 0..s.len() {
            let p = linear_path(&s, 7, y).unwrap();
            assert_eq!(tree.path_diameter[y], p.diameter);
        }
    }
}
