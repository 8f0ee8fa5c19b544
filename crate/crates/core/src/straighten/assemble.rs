use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{HypothesisFailure, Result};
use crate::metric::{excise_loops, DiscreteArc, MetricSpace};
use crate::net::{sorted_intersect, Blob, BlobFamily};
use crate::scalar::Scalar;
use crate::straighten::chain::blob_of;
use crate::straighten::{BlobChain, Discretization};

/// The straightened arc with its segment structure.
#[derive(Debug, Clone, Serialize)]
pub struct Assembly {
    pub arc: DiscreteArc,
    /// Junctions `z_0 = a, z_1, ..., z_m`.
    pub z_seq: Vec<usize>,
    /// Segments `J_0, ..., J_m` as found; `J_i` runs from `z_i` to `z_{i+1}`
    /// and the last one ends at `b`.
    pub segments: Vec<Vec<usize>>,
    /// For each position of `arc`, the `i` with the point in `J[z_i, z_{i+1})`.
    pub labels: Vec<usize>,
    /// Cycles removed while concatenating.
    pub excised_loops: usize,
}

impl Assembly {
    /// First pair of segments that meet other than at their shared
    /// junction: `(i, j, point)`.
    pub fn segment_collision(&self) -> Option<(usize, usize, usize)> {
        let sorted: Vec<Vec<usize>> = self
            .segments
            .iter()
            .map(|s| {
                let mut v = s.clone();
                v.sort_unstable();
                v
            })
            .collect();
        for i in 0..sorted.len() {
            for j in i + 1..sorted.len() {
                if !sorted_intersect(&sorted[i], &sorted[j]) {
                    continue;
                }
                let allowed = (j == i + 1).then(|| self.z_seq[j]);
                if let Some(p) = sorted[i].iter().copied().find(|p| sorted[j].binary_search(p).is_ok() && Some(*p) != allowed)
                {
                    return Some((i, j, p));
                }
            }
        }
        None
    }
}

/// Minimum-hop path inside a blob from `start` to the first point meeting
/// `goal`, with neighbours expanded in ascending order.
fn path_in_blob<T: Scalar>(blob: &Blob<T>, adj: &BTreeMap<usize, Vec<usize>>, start: usize, goal: impl Fn(usize) -> bool) -> Result<Vec<usize>> {
    let unreachable = || HypothesisFailure::BlobUnreachable {
        owner: blob.owner,
        from: start,
    };
    if !blob.contains(start) {
        return Err(unreachable().into());
    }
    if goal(start) {
        return Ok(vec![start]);
    }
    let mut parent = HashMap::from([(start, start)]);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[&u] {
            if parent.contains_key(&v) {
                continue;
            }
            parent.insert(v, u);
            if goal(v) {
                let mut path = vec![v];
                let mut cur = v;
                while cur != start {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Ok(path);
            }
            queue.push_back(v);
        }
    }
    Err(unreachable().into())
}

/// Joins `a` to `b` through the chain's blobs: segment `J_i` lives in
/// `V_{x_{r_i}}` and stops at its first contact with `V_{x_{r_{i+1}}}`; the
/// last segment runs inside the final blob to `b`.
pub fn assemble_arc<T: Scalar>(
    space: &MetricSpace<T>,
    family: &BlobFamily<T>,
    chain: &BlobChain,
    disc: &Discretization<T>,
    source: &DiscreteArc,
) -> Result<Assembly> {
    debug_assert_eq!(chain.members.first(), disc.x_seq.first());
    let blobs = chain.members.iter().map(|&x| blob_of(family, x)).collect::<Result<Vec<_>>>()?;
    let b = source.b();
    let mut z_seq = vec![source.a()];
    let mut segments = Vec::with_capacity(blobs.len());
    for (i, blob) in blobs.iter().enumerate() {
        let adj = blob.adjacency();
        let z = z_seq[i];
        let seg = match blobs.get(i + 1) {
            Some(next) => path_in_blob(blob, &adj, z, |p| next.contains(p))?,
            None => path_in_blob(blob, &adj, z, |p| p == b)?,
        };
        if i + 1 < blobs.len() {
            z_seq.push(*seg.last().expect("segments are non-empty"));
        }
        segments.push(seg);
    }
    let mut walk = Vec::new();
    let mut walk_labels = Vec::new();
    for (i, seg) in segments.iter().enumerate() {
        if i > 0 {
            walk.pop();
            walk_labels.pop();
        }
        walk.extend_from_slice(seg);
        walk_labels.extend(std::iter::repeat(i).take(seg.len()));
    }
    let mut first_label = HashMap::new();
    for (&p, &l) in walk.iter().zip(&walk_labels) {
        first_label.entry(p).or_insert(l);
    }
    let (indices, excised_loops) = excise_loops(&walk);
    let labels = indices.iter().map(|p| first_label[p]).collect();
    let arc = DiscreteArc::new(space, indices)?;
    Ok(Assembly {
        arc,
        z_seq,
        segments,
        labels,
        excised_loops,
    })
}
