//! Coarse maps between arcs and the exhaustive `ε`-follows check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{DiscreteArc, MetricSpace};
use crate::scalar::{within, Scalar};

/// A not-necessarily-continuous assignment from positions of a source arc
/// to positions of a target arc, with the displacement it claims.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoarseMap<T> {
    pub assignment: Vec<usize>,
    pub target_len: usize,
    pub displacement_bound: T,
}

impl<T: Scalar> CoarseMap<T> {
    pub fn identity(len: usize) -> Self {
        Self {
            assignment: (0..len).collect(),
            target_len: len,
            displacement_bound: T::zero(),
        }
    }

    pub fn source_len(&self) -> usize {
        self.assignment.len()
    }

    pub fn maps_endpoints(&self) -> bool {
        !self.assignment.is_empty()
            && self.target_len > 0
            && self.assignment[0] == 0
            && self.assignment[self.assignment.len() - 1] == self.target_len - 1
    }

    /// `self` followed by `next`: a map from this map's source into
    /// `next`'s target. Bounds add.
    pub fn then(&self, next: &CoarseMap<T>) -> Result<CoarseMap<T>> {
        if self.target_len != next.source_len() {
            return Err(Error::InvalidParameter(format!(
                "cannot compose: target of length {} feeds a map with source length {}",
                self.target_len,
                next.source_len()
            )));
        }
        Ok(CoarseMap {
            assignment: self.assignment.iter().map(|&p| next.assignment[p]).collect(),
            target_len: next.target_len,
            displacement_bound: self.displacement_bound + next.displacement_bound,
        })
    }
}

/// Violating triple: every point between source positions `x <= y`
/// must be `ε`-close to `target[p(x), p(y)]`, and `z` is not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FollowsWitness {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FollowsReport<T> {
    pub passed: bool,
    pub endpoints_ok: bool,
    pub epsilon: T,
    /// `max d(B[k], A[p(k)])`.
    pub max_displacement: T,
    pub witness: Option<FollowsWitness>,
}

/// Exhaustive `ε`-follows check of `source` against `target` under `map`.
///
/// For a fixed middle point `z`, the targets within `ε` of `z` split the
/// target positions into gaps; a subarc `target[u, v]` misses them exactly
/// when `u` and `v` lie in the same gap. So the condition over all
/// `x <= z <= y` reduces to: no gap holds both some `p(x)`, `x <= z`, and
/// some `p(y)`, `y >= z`. This makes the check O(|B| (|A| + |B|)).
pub fn verify_follows<T: Scalar>(
    space: &MetricSpace<T>,
    source: &DiscreteArc,
    target: &DiscreteArc,
    map: &CoarseMap<T>,
    epsilon: T,
) -> FollowsReport<T> {
    let shape_ok = map.source_len() == source.len() && map.target_len == target.len() && map.assignment.iter().all(|&p| p < target.len());
    let endpoints_ok = shape_ok && map.maps_endpoints();
    if !shape_ok {
        return FollowsReport {
            passed: false,
            endpoints_ok,
            epsilon,
            max_displacement: T::infinity(),
            witness: None,
        };
    }
    let src = source.indices();
    let tgt = target.indices();
    let p = &map.assignment;
    let max_displacement = (0..src.len())
        .into_par_iter()
        .map(|k| space.dist(src[k], tgt[p[k]]))
        .reduce(T::zero, T::max);

    let witness = (0..src.len()).into_par_iter().find_map_first(|z| {
        let mut gap_of = vec![None; tgt.len()];
        let mut hits = 0usize;
        for (q, &t) in tgt.iter().enumerate() {
            if within(space.dist(src[z], t), epsilon) {
                hits += 1;
            } else {
                gap_of[q] = Some(hits);
            }
        }
        let mut left: Vec<Option<usize>> = vec![None; hits + 1];
        for x in 0..=z {
            if let Some(g) = gap_of[p[x]] {
                left[g].get_or_insert(x);
            }
        }
        (z..src.len()).find_map(|y| {
            let g = gap_of[p[y]]?;
            left[g].map(|x| FollowsWitness { x, y, z })
        })
    });
    FollowsReport {
        passed: endpoints_ok && witness.is_none(),
        endpoints_ok,
        epsilon,
        max_displacement,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane_line(n: usize, y: f64) -> Vec<Vec<f64>> {
        (0..n).map(|i| vec![i as f64, y]).collect()
    }

    #[test]
    fn identity_follows_itself_at_zero() {
        let s = MetricSpace::euclidean(plane_line(10, 0.0), Some(1.0)).unwrap();
        let a = DiscreteArc::new(&s, (0..10).collect()).unwrap();
        let rep = verify_follows(&s, &a, &a, &CoarseMap::identity(10), 0.0);
        assert!(rep.passed);
        assert_eq!(rep.max_displacement, 0.0);
    }

    #[test]
    fn single_point_source_passes_when_endpoints_coincide() {
        let s = MetricSpace::euclidean(plane_line(3, 0.0), Some(1.0)).unwrap();
        let a = DiscreteArc::single(1);
        let map = CoarseMap {
            assignment: vec![0],
            target_len: 1,
            displacement_bound: 0.0,
        };
        assert!(verify_follows(&s, &a, &a, &map, 0.0).passed);
    }

    #[test]
    fn shifted_copy_fails_at_half_the_shift() {
        let eps = 1.0;
        let mut pts = plane_line(10, 0.0);
        pts.extend(plane_line(10, 2.0 * eps));
        let s = MetricSpace::euclidean(pts, Some(1.0)).unwrap();
        let a = DiscreteArc::new(&s, (0..10).collect()).unwrap();
        let b = DiscreteArc::new(&s, (10..20).collect()).unwrap();
        let map = CoarseMap::identity(10);
        let rep = verify_follows(&s, &b, &a, &map, eps);
        assert!(!rep.passed);
        assert_eq!(rep.witness, Some(FollowsWitness { x: 0, y: 0, z: 0 }));
        assert!(verify_follows(&s, &b, &a, &map, 2.0 * eps).passed);
    }

    #[test]
    fn subarc_condition_is_stronger_than_pointwise_displacement() {
        // B runs along A but the map sends everything to A's start, then
        // jumps to the end only at B's end: the middle of B strays from
        // A[p(x), p(y)] = {A[0]} for x, y before the end.
        let s = MetricSpace::euclidean(plane_line(10, 0.0), Some(1.0)).unwrap();
        let a = DiscreteArc::new(&s, (0..10).collect()).unwrap();
        let mut assignment = vec![0; 10];
        assignment[9] = 9;
        let map = CoarseMap {
            assignment,
            target_len: 10,
            displacement_bound: 0.0,
        };
        let rep = verify_follows(&s, &a, &a, &map, 3.0);
        assert!(!rep.passed);
        let w = rep.witness.unwrap();
        assert!(w.x <= w.z && w.z <= w.y && w.y < 9);
        assert!(verify_follows(&s, &a, &a, &map, 9.0).passed);
    }

    #[test]
    fn composition_adds_bounds_and_keeps_endpoints() {
        let m1 = CoarseMap {
            assignment: vec![0, 0, 2, 3],
            target_len: 4,
            displacement_bound: 0.5,
        };
        let m2 = CoarseMap {
            assignment: vec![0, 1, 1, 5],
            target_len: 6,
            displacement_bound: 0.25,
        };
        let c = m1.then(&m2).unwrap();
        assert_eq!(c.assignment, vec![0, 0, 1, 5]);
        assert_eq!(c.displacement_bound, 0.75);
        assert!(c.maps_endpoints());
        assert!(m2.then(&m1).is_err());
    }
}
