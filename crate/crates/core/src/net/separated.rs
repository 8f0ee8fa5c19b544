use serde::{Deserialize, Serialize};

use crate::error::{Error, HypothesisFailure, Result};
use crate::metric::MetricSpace;
use crate::scalar::{to_f64, Scalar};

/// A maximal `r`-separated subset containing the seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Net<T> {
    members: Vec<usize>,
    radius: T,
    seeds: Vec<usize>,
}

impl<T: Scalar> Net<T> {
    /// Wraps an arbitrary member list without checking anything; use
    /// [`Net::verify`] to inspect it.
    pub fn from_parts(mut members: Vec<usize>, radius: T, seeds: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { members, radius, seeds }
    }

    /// Ascending member indices.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.binary_search(&p).is_ok()
    }

    /// Exhaustive check of separation, maximality and seed membership.
    pub fn verify(&self, space: &MetricSpace<T>) -> NetReport {
        let r = self.radius;
        let mut separation_witness = None;
        'outer: for (i, &x) in self.members.iter().enumerate() {
            for &y in &self.members[i + 1..] {
                if space.dist(x, y) < r {
                    separation_witness = Some((x, y));
                    break 'outer;
                }
            }
        }
        let uncovered = (0..space.len()).find(|&p| !self.members.iter().any(|&m| space.dist(p, m) < r));
        let missing_seed = self.seeds.iter().copied().find(|s| !self.contains(*s));
        NetReport {
            separated: separation_witness.is_none(),
            separation_witness,
            maximal: uncovered.is_none(),
            uncovered,
            seeds_included: missing_seed.is_none(),
            missing_seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NetReport {
    pub separated: bool,
    pub separation_witness: Option<(usize, usize)>,
    pub maximal: bool,
    pub uncovered: Option<usize>,
    pub seeds_included: bool,
    pub missing_seed: Option<usize>,
}

impl NetReport {
    pub fn passed(&self) -> bool {
        self.separated && self.maximal && self.seeds_included
    }
}

/// Greedy maximal `r`-separated set: the seeds first, then every point in
/// ascending index order that is at least `r` from all members so far.
pub fn build_net<T: Scalar>(space: &MetricSpace<T>, r: T, seeds: &[usize]) -> Result<Net<T>> {
    if !(r > T::zero()) {
        return Err(Error::InvalidParameter(format!("net radius {r} must be positive")));
    }
    let mut seeds_dedup: Vec<usize> = Vec::new();
    for &s in seeds {
        space.check_index(s)?;
        if !seeds_dedup.contains(&s) {
            seeds_dedup.push(s);
        }
    }
    for (i, &a) in seeds_dedup.iter().enumerate() {
        for &b in &seeds_dedup[i + 1..] {
            let d = space.dist(a, b);
            if d < r {
                return Err(HypothesisFailure::SeedsTooClose {
                    a,
                    b,
                    distance: to_f64(d),
                    radius: to_f64(r),
                }
                .into());
            }
        }
    }
    let mut members = seeds_dedup.clone();
    for p in 0..space.len() {
        if members.iter().all(|&m| space.dist(p, m) >= r) {
            members.push(p);
        }
    }
    Ok(Net::from_parts(members, r, seeds_dedup))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> MetricSpace<f64> {
        MetricSpace::euclidean(xs.iter().map(|&x| vec![x]).collect(), None).unwrap()
    }

    #[test]
    fn single_point_net() {
        let s = line(&[0.0]);
        let net = build_net(&s, 1.0, &[0]).unwrap();
        assert_eq!(net.members(), &[0]);
        assert!(net.verify(&s).passed());
    }

    #[test]
    fn seeded_sweep_on_three_points() {
        // at exactly r from both seeds, the middle point is uncovered by
        // open balls and must join
        let s = line(&[0.0, 1.0, 2.0]);
        let net = build_net(&s, 1.0, &[0, 2]).unwrap();
        assert_eq!(net.members(), &[0, 1, 2]);
        assert!(net.verify(&s).passed());
        let s = line(&[0.0, 0.9, 2.0]);
        let net = build_net(&s, 1.0, &[0, 2]).unwrap();
        assert_eq!(net.members(), &[0, 2]);
        assert!(net.verify(&s).passed());
    }

    #[test]
    fn close_seeds_are_a_hypothesis_failure() {
        let s = line(&[0.0, 0.5, 2.0]);
        let e = build_net(&s, 1.0, &[0, 1]).unwrap_err();
        assert!(matches!(e, Error::Hypothesis(HypothesisFailure::SeedsTooClose { a: 0, b: 1, .. })));
    }

    #[test]
    fn verify_reports_witnesses() {
        let s = line(&[0.0, 1.0, 2.0, 3.0]);
        let bad = Net::from_parts(vec![0, 1], 1.5, vec![3]);
        let rep = bad.verify(&s);
        assert_eq!(rep.separation_witness, Some((0, 1)));
        assert_eq!(rep.uncovered, Some(3));
        assert_eq!(rep.missing_seed, Some(3));
        assert!(!rep.passed());
    }

    #[test]
    fn greedy_net_on_a_grid_is_valid() {
        let pts = (0..100).map(|i| vec![(i % 10) as f64, (i / 10) as f64]).collect();
        let s = MetricSpace::euclidean(pts, None).unwrap();
        for r in [1.0, 1.5, 2.2, 4.0] {
            let net = build_net(&s, r, &[0, 99]).unwrap();
            assert!(net.verify(&s).passed(), "r = {r}");
        }
    }
}
