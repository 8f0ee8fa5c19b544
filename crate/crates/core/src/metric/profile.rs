//! Empirical estimates of the linear-connectivity constant `L` and the
//! doubling constant `N` of a finite space.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HypothesisFailure, Result};
use crate::metric::paths::BfsTree;
use crate::metric::sets::diameter_unchecked;
use crate::metric::MetricSpace;
use crate::scalar::{lit, Scalar};

/// Which centres (or path sources) an estimator visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sampling {
    Exhaustive,
    /// The first `count` entries of a seeded permutation of the points, so
    /// that larger counts visit supersets of smaller ones.
    Seeded { count: usize, seed: u64 },
}

impl Sampling {
    fn centers(self, n: usize) -> (Vec<usize>, bool) {
        match self {
            Sampling::Exhaustive => ((0..n).collect(), true),
            Sampling::Seeded { count, seed } => {
                let mut all: Vec<usize> = (0..n).collect();
                all.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                all.truncate(count.min(n));
                let exact = all.len() == n;
                (all, exact)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DoublingEstimate<T> {
    pub n_hat: usize,
    pub centers: usize,
    pub radii: Vec<T>,
    /// All centres were visited over the full default ladder.
    pub exact: bool,
    /// Centre and radius attaining `n_hat`.
    pub witness: Option<(usize, T)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConnectivityEstimate<T> {
    pub l_hat: T,
    pub sources: usize,
    pub exact: bool,
    /// Ordered pair attaining `l_hat`.
    pub witness: Option<(usize, usize)>,
}

/// Combined hypothesis-constant estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceProfile<T> {
    pub l_hat: T,
    pub n_hat: usize,
    pub sample_count: usize,
    pub exact: bool,
}

/// `h, 2h, 4h, ...` up to the first radius at least the space diameter.
pub fn radius_ladder<T: Scalar>(space: &MetricSpace<T>) -> Vec<T> {
    let h = space.resolution();
    if space.len() < 2 {
        return Vec::new();
    }
    let all: Vec<usize> = (0..space.len()).collect();
    let diam = diameter_unchecked(space, &all);
    let mut r = h;
    let mut ladder = vec![r];
    while r < diam {
        r = r * lit(2.0);
        ladder.push(r);
    }
    ladder
}

/// Number of closed `radius/2` balls, centred at member points and chosen
/// greedily in index order, needed to cover the closed ball `B(center, radius)`.
pub fn greedy_half_cover<T: Scalar>(space: &MetricSpace<T>, center: usize, radius: T) -> usize {
    let ball: Vec<usize> = (0..space.len()).filter(|&p| space.dist(center, p) <= radius).collect();
    let half = radius * lit(0.5);
    let mut covered = vec![false; ball.len()];
    let mut count = 0;
    for i in 0..ball.len() {
        if covered[i] {
            continue;
        }
        count += 1;
        for j in i..ball.len() {
            if !covered[j] && space.dist(ball[i], ball[j]) <= half {
                covered[j] = true;
            }
        }
    }
    count
}

/// Greedy upper bound on the doubling constant over sampled balls.
/// `radii = None` uses [`radius_ladder`].
pub fn estimate_doubling<T: Scalar>(space: &MetricSpace<T>, sampling: Sampling, radii: Option<Vec<T>>) -> DoublingEstimate<T> {
    let (centers, all_centers) = sampling.centers(space.len());
    let default_ladder = radii.is_none();
    let radii = radii.unwrap_or_else(|| radius_ladder(space));
    let best = centers
        .par_iter()
        .flat_map_iter(|&c| radii.iter().map(move |&r| (c, r)))
        .map(|(c, r)| (greedy_half_cover(space, c, r), c, r))
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) { b } else { a });
    let (n_hat, witness) = match best {
        Some((k, c, r)) => (k.max(1), Some((c, r))),
        None => (1, None),
    };
    DoublingEstimate {
        n_hat,
        centers: centers.len(),
        radii,
        exact: all_centers && default_ladder,
        witness,
    }
}

/// `max diam(path) / d(x, y)` over sampled sources `x` and all targets `y`,
/// using the minimum-hop paths of [`crate::linear_path`]. Always at least 1.
pub fn estimate_linear_connectivity<T: Scalar>(space: &MetricSpace<T>, sampling: Sampling) -> Result<ConnectivityEstimate<T>> {
    let (sources, exact) = sampling.centers(space.len());
    let per_source: Vec<std::result::Result<(T, Option<(usize, usize)>), HypothesisFailure>> = sources
        .par_iter()
        .map(|&x| {
            let tree = BfsTree::build(space, x);
            let mut best = (T::one(), None);
            for y in 0..space.len() {
                if y == x {
                    continue;
                }
                if !tree.reached(x, y) {
                    return Err(HypothesisFailure::NoPath { from: x, to: y });
                }
                let ratio = tree.path_diameter[y] / space.dist(x, y);
                if ratio > best.0 {
                    best = (ratio, Some((x, y)));
                }
            }
            Ok(best)
        })
        .collect();
    let mut l_hat = T::one();
    let mut witness = None;
    for r in per_source {
        let (ratio, w) = r?;
        if ratio > l_hat {
            l_hat = ratio;
            witness = w;
        }
    }
    Ok(ConnectivityEstimate {
        l_hat,
        sources: sources.len(),
        exact,
        witness,
    })
}

/// Both estimates with the same sampling.
pub fn profile<T: Scalar>(space: &MetricSpace<T>, sampling: Sampling) -> Result<SpaceProfile<T>> {
    let l = estimate_linear_connectivity(space, sampling)?;
    let n = estimate_doubling(space, sampling, None);
    Ok(SpaceProfile {
        l_hat: l.l_hat,
        n_hat: n.n_hat,
        sample_count: l.sources,
        exact: l.exact && n.exact,
    })
}
