use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::metric::MetricSpace;
use crate::net::Net;
use crate::scalar::Scalar;

/// Partition of the net into classes whose members are pairwise at least
/// `separation_target` apart. Labels run from 1 to `color_count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coloring<T> {
    labels: BTreeMap<usize, usize>,
    color_count: usize,
    separation_target: T,
}

impl<T: Scalar> Coloring<T> {
    pub fn from_labels(labels: BTreeMap<usize, usize>, separation_target: T) -> Self {
        let color_count = labels.values().copied().max().unwrap_or(0);
        Self {
            labels,
            color_count,
            separation_target,
        }
    }

    pub fn label(&self, member: usize) -> Option<usize> {
        self.labels.get(&member).copied()
    }

    pub fn labels(&self) -> &BTreeMap<usize, usize> {
        &self.labels
    }

    /// `M`.
    pub fn color_count(&self) -> usize {
        self.color_count
    }

    pub fn separation_target(&self) -> T {
        self.separation_target
    }

    /// Members of each class in ascending order; entry `k` holds label `k + 1`.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.color_count];
        for (&m, &l) in &self.labels {
            out[l - 1].push(m);
        }
        out
    }

    /// Exhaustive same-label separation check, plus the greedy bound
    /// `M <= 1 + max #{other members closer than the target}`.
    pub fn verify(&self, space: &MetricSpace<T>, net: &Net<T>) -> ColoringReport {
        let members = net.members();
        let mut witness = None;
        let mut bound = 0;
        let mut unlabeled = None;
        for (i, &x) in members.iter().enumerate() {
            if unlabeled.is_none() && !self.labels.contains_key(&x) {
                unlabeled = Some(x);
            }
            let mut close = 0;
            for (j, &y) in members.iter().enumerate() {
                if i == j || space.dist(x, y) >= self.separation_target {
                    continue;
                }
                close += 1;
                if j > i && witness.is_none() && self.label(x).is_some() && self.label(x) == self.label(y) {
                    witness = Some((x, y));
                }
            }
            bound = bound.max(close + 1);
        }
        ColoringReport {
            separated: witness.is_none() && unlabeled.is_none(),
            witness,
            unlabeled,
            greedy_bound: bound,
            within_greedy_bound: self.color_count <= bound.max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoringReport {
    pub separated: bool,
    pub witness: Option<(usize, usize)>,
    pub unlabeled: Option<usize>,
    pub greedy_bound: usize,
    pub within_greedy_bound: bool,
}

impl ColoringReport {
    pub fn passed(&self) -> bool {
        self.separated && self.within_greedy_bound
    }
}

/// Smallest-available-label greedy colouring in ascending member order.
pub fn color_net<T: Scalar>(space: &MetricSpace<T>, net: &Net<T>, separation_target: T) -> Coloring<T> {
    let mut labels = BTreeMap::new();
    let members = net.members();
    for (i, &x) in members.iter().enumerate() {
        let mut used: Vec<usize> = members[..i]
            .iter()
            .filter(|&&y| space.dist(x, y) < separation_target)
            .map(|y| labels[y])
            .collect();
        used.sort_unstable();
        used.dedup();
        let label = used
            .iter()
            .enumerate()
            .find(|&(k, &l)| l != k + 1)
            .map_or(used.len() + 1, |(k, _)| k + 1);
        labels.insert(x, label);
    }
    Coloring::from_labels(labels, separation_target)
}
