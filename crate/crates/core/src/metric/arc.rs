use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::scalar::Scalar;

/// An injective sequence of points whose consecutive members are
/// step-adjacent: the discrete stand-in for an embedded arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteArc {
    indices: Vec<usize>,
    positions: HashMap<usize, usize>,
}

impl DiscreteArc {
    /// Validates injectivity and the step-gap bound.
    pub fn new<T: Scalar>(space: &MetricSpace<T>, indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidArc("an arc needs at least one point".into()));
        }
        for &i in &indices {
            space.check_index(i)?;
        }
        let arc = Self::from_indices(indices)?;
        if let Some(k) = arc.indices.windows(2).position(|w| !space.is_step(w[0], w[1])) {
            return Err(Error::InvalidArc(format!(
                "points {} and {} at positions {k}, {} are not step-adjacent",
                arc.indices[k],
                arc.indices[k + 1],
                k + 1
            )));
        }
        Ok(arc)
    }

    /// Checks injectivity only.
    pub(crate) fn from_indices(indices: Vec<usize>) -> Result<Self> {
        let mut positions = HashMap::with_capacity(indices.len());
        for (pos, &i) in indices.iter().enumerate() {
            if let Some(prev) = positions.insert(i, pos) {
                return Err(Error::InvalidArc(format!("point {i} repeats at positions {prev} and {pos}")));
            }
        }
        Ok(Self { indices, positions })
    }

    pub fn single(point: usize) -> Self {
        Self::from_indices(vec![point]).expect("one point is injective")
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

    /// First endpoint.
    pub fn a(&self) -> usize {
        self.indices[0]
    }

    /// Last endpoint.
    pub fn b(&self) -> usize {
        self.indices[self.indices.len() - 1]
    }

    pub fn point(&self, pos: usize) -> usize {
        self.indices[pos]
    }

    pub fn position(&self, point: usize) -> Option<usize> {
        self.positions.get(&point).copied()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.positions.contains_key(&point)
    }

    /// The closed subarc between two positions, in either order.
    pub fn subarc(&self, p: usize, q: usize) -> &[usize] {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        &self.indices[lo..=hi]
    }

    /// The closed subarc between two points of the arc.
    pub fn subarc_between(&self, x: usize, y: usize) -> Option<&[usize]> {
        Some(self.subarc(self.position(x)?, self.position(y)?))
    }
}

impl Serialize for DiscreteArc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiscreteArc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(d)?;
        Self::from_indices(indices).map_err(serde::de::Error::custom)
    }
}

/// Removes every cycle from a walk: whenever a point recurs, the walk is
/// cut back to its first visit. Consecutive pairs of the result are
/// consecutive pairs of the input.
pub fn excise_loops(walk: &[usize]) -> (Vec<usize>, usize) {
    let mut out: Vec<usize> = Vec::with_capacity(walk.len());
    let mut at: HashMap<usize, usize> = HashMap::new();
    let mut excised = 0;
    for &p in walk {
        if let Some(&pos) = at.get(&p) {
            for q in out.drain(pos + 1..) {
                at.remove(&q);
            }
            excised += 1;
        } else {
            at.insert(p, out.len());
            out.push(p);
        }
    }
    (out, excised)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> MetricSpace<f64> {
        MetricSpace::euclidean((0..n).map(|i| vec![i as f64]).collect(), Some(1.0)).unwrap()
    }

    #[test]
    fn rejects_repeats_and_gaps() {
        let s = line(5);
        assert!(DiscreteArc::new(&s, vec![0, 1, 0]).is_err());
        assert!(DiscreteArc::new(&s, vec![0, 2]).is_err());
        assert!(DiscreteArc::new(&s, vec![]).is_err());
        assert!(DiscreteArc::new(&s, vec![0, 9]).is_err());
        let a = DiscreteArc::new(&s, vec![2, 3, 4]).unwrap();
        assert_eq!((a.a(), a.b()), (2, 4));
    }

    #[test]
    fn subarc_is_order_agnostic() {
        let s = line(6);
        let a = DiscreteArc::new(&s, vec![5, 4, 3, 2, 1]).unwrap();
        assert_eq!(a.subarc(1, 3), &[4, 3, 2]);
        assert_eq!(a.subarc(3, 1), &[4, 3, 2]);
        assert_eq!(a.subarc_between(2, 4).unwrap(), &[4, 3, 2]);
        assert_eq!(a.subarc(2, 2), &[3]);
    }

    #[test]
    fn excision_cuts_back_to_first_visit() {
        let (out, n) = excise_loops(&[0, 1, 2, 3, 1, 4, 5, 4, 6]);
        assert_eq!(out, vec![0, 1, 4, 6]);
        assert_eq!(n, 2);
        let (same, none) = excise_loops(&[3, 2, 1]);
        assert_eq!((same, none), (vec![3, 2, 1], 0));
    }

    #[test]
    fn serializes_as_index_list() {
        let s = line(3);
        let a = DiscreteArc::new(&s, vec![0, 1, 2]).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "[0,1,2]");
        let back: DiscreteArc = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<DiscreteArc>("[1,1]").is_err());
    }
}
