use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, HypothesisFailure, Result};
use crate::net::{Blob, BlobFamily};
use crate::scalar::Scalar;
use crate::straighten::Discretization;

/// Subsequence `r_0 = 0 < r_1 < ... < r_m = n` of the discretization and
/// the net members `x_{r_j}` it selects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlobChain {
    pub r_seq: Vec<usize>,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    /// `j` with `V_{r_j}` and `V_{r_{j+1}}` disjoint.
    pub consecutive_disjoint: Option<usize>,
    /// `(i, j)`, `j >= i + 2`, with intersecting blobs.
    pub distant_intersecting: Option<(usize, usize)>,
    /// Positions `k` of the discretization whose blobs `V_{x_k}` and
    /// `V_{x_{k+1}}` are disjoint.
    pub discretization_gaps: Vec<usize>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.consecutive_disjoint.is_none() && self.distant_intersecting.is_none()
    }
}

impl BlobChain {
    /// `m`, the number of jumps.
    pub fn jumps(&self) -> usize {
        self.r_seq.len() - 1
    }

    pub fn verify<T: Scalar>(&self, family: &BlobFamily<T>, disc: &Discretization<T>) -> Result<ChainReport> {
        let blobs = self.members.iter().map(|&x| blob_of(family, x)).collect::<Result<Vec<_>>>()?;
        let m = blobs.len();
        let consecutive_disjoint = (0..m.saturating_sub(1)).find(|&j| !blobs[j].intersects(blobs[j + 1]));
        let distant_intersecting = (0..m)
            .flat_map(|i| (i + 2..m).map(move |j| (i, j)))
            .find(|&(i, j)| blobs[i].intersects(blobs[j]));
        let mut discretization_gaps = Vec::new();
        for (k, w) in disc.x_seq.windows(2).enumerate() {
            if !blob_of(family, w[0])?.intersects(blob_of(family, w[1])?) {
                discretization_gaps.push(k);
            }
        }
        Ok(ChainReport {
            consecutive_disjoint,
            distant_intersecting,
            discretization_gaps,
        })
    }
}

pub(crate) fn blob_of<T: Scalar>(family: &BlobFamily<T>, owner: usize) -> Result<&Blob<T>> {
    family
        .blob(owner)
        .ok_or_else(|| Error::InvalidParameter(format!("{owner} has no blob in the family")))
}

/// Max-jump recursion `r_j = max{k : V_{x_k} meets V_{x_{r_{j-1}}}}` until
/// `r_m = n`.
pub fn extract_chain<T: Scalar>(family: &BlobFamily<T>, disc: &Discretization<T>) -> Result<BlobChain> {
    let xs = &disc.x_seq;
    let n = xs.len() - 1;
    let mut meets: HashMap<(usize, usize), bool> = HashMap::new();
    let mut r_seq = vec![0];
    let mut cur = 0;
    while cur < n {
        let here = blob_of(family, xs[cur])?;
        let mut next = cur;
        for k in (cur + 1..=n).rev() {
            let key = (xs[cur].min(xs[k]), xs[cur].max(xs[k]));
            let hit = match meets.get(&key) {
                Some(&h) => h,
                None => {
                    let h = here.intersects(blob_of(family, xs[k])?);
                    meets.insert(key, h);
                    h
                }
            };
            if hit {
                next = k;
                break;
            }
        }
        if next == cur {
            return Err(HypothesisFailure::ChainStall { index: cur }.into());
        }
        r_seq.push(next);
        cur = next;
    }
    let members = r_seq.iter().map(|&k| xs[k]).collect();
    Ok(BlobChain { r_seq, members })
}

#[cfg(test)]
pub(crate) mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::scalar::LogValue;

    /// Family where blob `i` holds the given points; owners are `0..k`.
    pub(crate) fn synthetic_family(blobs: &[Vec<usize>]) -> BlobFamily<f64> {
        let blobs = blobs
            .iter()
            .enumerate()
            .map(|(owner, pts)| {
                let mut points = pts.clone();
                points.sort_unstable();
                (
                    owner,
                    Blob {
                        owner,
                        points,
                        internal_edges: Vec::new(),
                        construction_log: Vec::new(),
                        reach: 0.0,
                        initial_diameter: 0.0,
                    },
                )
            })
            .collect();
        BlobFamily {
            radius: 1.0,
            links: Vec::new(),
            l_hat: 1.0,
            color_count: 1,
            labels: BTreeMap::new(),
            blobs,
            gap_delta_theoretical: LogValue::from_ln(0.5f64.ln()),
            gap_delta_measured: None,
            gap_delta_effective: 0.5,
            anomalies: Vec::new(),
            budget_violations: 0,
        }
    }

    fn disc(x_seq: Vec<usize>) -> Discretization<f64> {
        let y_seq = (0..x_seq.len()).collect();
        Discretization { x_seq, y_seq, radius: 1.0, handoffs: Vec::new() }
    }

    #[test]
    fn no_pieces_gives_the_trivial_chain() {
        let fam = synthetic_family(&[vec![0]]);
        let c = extract_chain(&fam, &disc(vec![0])).unwrap();
        assert_eq!(c.r_seq, vec![0]);
        assert_eq!(c.jumps(), 0);
    }

    #[test]
    fn pairwise_intersecting_blobs_give_one_jump() {
        let fam = synthetic_family(&[vec![0, 9], vec![1, 9], vec![2, 9], vec![3, 9]]);
        let c = extract_chain(&fam, &disc(vec![0, 1, 2, 3])).unwrap();
        assert_eq!(c.r_seq, vec![0, 3]);
        assert_eq!(c.members, vec![0, 3]);
    }

    #[test]
    fn consecutive_only_intersections_visit_every_member() {
        // blob k = {10k, 10k + 5, 10(k + 1)}: neighbours share 10(k + 1)
        let blobs: Vec<Vec<usize>> = (0..5).map(|k| vec![10 * k, 10 * k + 5, 10 * (k + 1)]).collect();
        let fam = synthetic_family(&blobs);
        let d = disc(vec![0, 1, 2, 3, 4]);
        let c = extract_chain(&fam, &d).unwrap();
        assert_eq!(c.r_seq, vec![0, 1, 2, 3, 4]);
        assert!(c.verify(&fam, &d).unwrap().passed());
    }

    #[test]
    fn revisited_member_is_jumped_over() {
        // the walk goes 0, 1, 2, 1, 3; blob 1 meets blob 3
        let fam = synthetic_family(&[vec![0, 1], vec![1, 2, 3], vec![2], vec![3]]);
        let c = extract_chain(&fam, &disc(vec![0, 1, 2, 1, 3])).unwrap();
        assert_eq!(c.r_seq, vec![0, 3, 4]);
        assert_eq!(c.members, vec![0, 1, 3]);
    }

    #[test]
    fn isolated_blob_stalls_the_recursion() {
        let fam = synthetic_family(&[vec![0], vec![1]]);
        let e = extract_chain(&fam, &disc(vec![0, 1])).unwrap_err();
        assert!(matches!(e, Error::Hypothesis(HypothesisFailure::ChainStall { index: 0 })));
    }
}
