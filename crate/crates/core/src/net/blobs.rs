//! Blob sets `V_x`: connected unions of step paths attached to each net
//! member, built class by class so that disjoint blobs keep a gap.
//!
//! For `x` in colour class `n + 1` the blob starts as the union of linear
//! paths from `x` to every net member within `2r`. It is then compared,
//! for each earlier class `i = 1..=n`, with the (finished) blob of the
//! class-`i` member it comes close to; a positive gap below
//! `(1/2)(5L)^(-i) r` is closed with a linear path between the nearest
//! pair of points, which the budget `L (5L)^(-i) r` bounds.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::metric::sets::{diameter_unchecked, set_distance_unchecked};
use crate::metric::{linear_path, MetricSpace};
use crate::net::{Coloring, Net};
use crate::scalar::{count, lit, within, LogValue, Scalar};

/// One bridging step of a blob's construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeEvent<T> {
    /// Colour class `i` of the target.
    pub stage: usize,
    pub target_owner: usize,
    /// Blob gap before bridging.
    pub gap: T,
    pub bridge: Vec<usize>,
    pub bridge_diameter: T,
    /// `L (5L)^(-i) r`.
    pub budget: T,
    pub within_budget: bool,
}

/// More than one member of a class was `5Lr`-close to a blob under
/// construction; only the closest was considered.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlobAnomaly {
    pub owner: usize,
    pub stage: usize,
    pub close_owners: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Blob<T> {
    pub owner: usize,
    /// Ascending point indices.
    pub points: Vec<usize>,
    /// Step pairs `(u, v)` with `u < v` contributed by the constituent paths.
    pub internal_edges: Vec<(usize, usize)>,
    pub construction_log: Vec<BridgeEvent<T>>,
    /// `max d(owner, p)` over the blob.
    pub reach: T,
    /// Diameter before any bridge was added.
    pub initial_diameter: T,
}

impl<T: Scalar> Blob<T> {
    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    pub fn intersects(&self, other: &Blob<T>) -> bool {
        sorted_intersect(&self.points, &other.points)
    }

    /// Sorted neighbour lists over the internal edges.
    pub fn adjacency(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> = self.points.iter().map(|&p| (p, Vec::new())).collect();
        for &(u, v) in &self.internal_edges {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        for list in adj.values_mut() {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Connected under internal edges, with every edge inside the blob.
    pub fn is_connected(&self) -> bool {
        if self.internal_edges.iter().any(|&(u, v)| !self.contains(u) || !self.contains(v)) {
            return false;
        }
        let Some(&start) = self.points.first() else {
            return false;
        };
        let adj = self.adjacency();
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[&u] {
                if seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        seen.len() == self.points.len()
    }
}

pub(crate) fn sorted_intersect(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

#[derive(Debug, Clone, Serialize)]
pub struct BlobFamily<T> {
    pub radius: T,
    /// Extra `(owner, member)` pairs joined by a linear path in the owner's
    /// blob, beyond the members within `2r`.
    pub links: Vec<(usize, usize)>,
    pub l_hat: T,
    pub color_count: usize,
    pub labels: BTreeMap<usize, usize>,
    pub blobs: BTreeMap<usize, Blob<T>>,
    /// `(1/2)(5L)^(-M)`, kept in log form.
    pub gap_delta_theoretical: LogValue,
    /// Smallest gap between disjoint blobs, in units of `r`; `None` when
    /// every pair of blobs intersects.
    pub gap_delta_measured: Option<T>,
    /// Gap constant used downstream: the measured gap floored at the
    /// theoretical one, or `1/2` when no two blobs are disjoint.
    pub gap_delta_effective: T,
    pub anomalies: Vec<BlobAnomaly>,
    pub budget_violations: usize,
}

impl<T: Scalar> BlobFamily<T> {
    pub fn blob(&self, owner: usize) -> Option<&Blob<T>> {
        self.blobs.get(&owner)
    }

    pub fn bridge_count(&self) -> usize {
        self.blobs.values().map(|b| b.construction_log.len()).sum()
    }
}

struct BlobBuilder {
    points: BTreeSet<usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl BlobBuilder {
    fn add_path(&mut self, path: &[usize]) {
        self.points.extend(path.iter().copied());
        for w in path.windows(2) {
            self.edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
    }

    fn snapshot(&self) -> Vec<usize> {
        self.points.iter().copied().collect()
    }
}

fn reach_of<T: Scalar>(space: &MetricSpace<T>, owner: usize, pts: &[usize]) -> T {
    pts.iter().map(|&p| space.dist(owner, p)).fold(T::zero(), T::max)
}

/// Builds `V_x` for every member, processing colour classes in order.
pub fn build_blobs<T: Scalar>(space: &MetricSpace<T>, net: &Net<T>, coloring: &Coloring<T>, l_hat: T) -> Result<BlobFamily<T>> {
    build_blobs_linked(space, net, coloring, l_hat, &[])
}

/// [`build_blobs`] where each `(x, y)` in `links` also puts a linear path
/// from `x` to `y` into `V_x`.
pub fn build_blobs_linked<T: Scalar>(
    space: &MetricSpace<T>,
    net: &Net<T>,
    coloring: &Coloring<T>,
    l_hat: T,
    links: &[(usize, usize)],
) -> Result<BlobFamily<T>> {
    let r = net.radius();
    let h = space.resolution();
    let five_l = lit::<T>(5.0) * l_hat;
    let close_radius = five_l * r;
    let two_r = r + r;
    let mut links: Vec<(usize, usize)> = links
        .iter()
        .copied()
        .filter(|&(x, y)| x != y && space.dist(x, y) > two_r)
        .collect();
    links.sort_unstable();
    links.dedup();
    let classes = coloring.classes();
    let mut blobs: BTreeMap<usize, Blob<T>> = BTreeMap::new();
    let mut anomalies = Vec::new();

    for (class_idx, class) in classes.iter().enumerate() {
        let built: Vec<Result<(Blob<T>, Vec<BlobAnomaly>)>> = class
            .par_iter()
            .map(|&x| {
                let mut b = BlobBuilder {
                    points: BTreeSet::from([x]),
                    edges: BTreeSet::new(),
                };
                for &y in net.members() {
                    if y != x && space.dist(x, y) <= two_r {
                        b.add_path(linear_path(space, x, y)?.arc.indices());
                    }
                }
                let from = links.partition_point(|l| l.0 < x);
                for &(_, y) in links[from..].iter().take_while(|l| l.0 == x) {
                    b.add_path(linear_path(space, x, y)?.arc.indices());
                }
                let initial = b.snapshot();
                let initial_diameter = diameter_unchecked(space, &initial);
                let mut log = Vec::new();
                let mut local_anomalies = Vec::new();
                let mut threshold = r * lit(0.5);
                let mut budget = l_hat * r;
                for (i, earlier) in classes[..class_idx].iter().enumerate() {
                    let stage = i + 1;
                    threshold = threshold / five_l;
                    budget = budget / five_l;
                    // positive gaps between finite sets are at least h
                    if threshold <= h {
                        break;
                    }
                    let current = b.snapshot();
                    let reach = reach_of(space, x, &current);
                    let mut close: Vec<(T, usize)> = earlier
                        .iter()
                        .filter_map(|&y| {
                            let vy = &blobs[&y];
                            if space.dist(x, y) - reach - vy.reach >= close_radius {
                                return None;
                            }
                            let g = set_distance_unchecked(space, &current, &vy.points);
                            (g < close_radius).then_some((g, y))
                        })
                        .collect();
                    if close.is_empty() {
                        continue;
                    }
                    close.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances").then(a.1.cmp(&b.1)));
                    if close.len() > 1 {
                        local_anomalies.push(BlobAnomaly {
                            owner: x,
                            stage,
                            close_owners: close.iter().map(|c| c.1).collect(),
                        });
                    }
                    let (gap, y) = close[0];
                    if !(gap > T::zero() && gap < threshold) {
                        continue;
                    }
                    let vy = &blobs[&y];
                    let (u, v) = closest_pair(space, &current, &vy.points);
                    let bridge = linear_path(space, u, v)?;
                    b.add_path(bridge.arc.indices());
                    log.push(BridgeEvent {
                        stage,
                        target_owner: y,
                        gap,
                        bridge: bridge.arc.indices().to_vec(),
                        bridge_diameter: bridge.diameter,
                        budget,
                        within_budget: bridge.diameter <= budget,
                    });
                }
                let points = b.snapshot();
                let reach = reach_of(space, x, &points);
                Ok((
                    Blob {
                        owner: x,
                        points,
                        internal_edges: b.edges.into_iter().collect(),
                        construction_log: log,
                        reach,
                        initial_diameter,
                    },
                    local_anomalies,
                ))
            })
            .collect();
        for item in built {
            let (blob, an) = item?;
            anomalies.extend(an);
            blobs.insert(blob.owner, blob);
        }
    }

    let m = coloring.color_count();
    let ln_theoretical = (0.5f64).ln() - (m as f64) * crate::scalar::to_f64(five_l).ln();
    let gap_delta_theoretical = LogValue::from_ln(ln_theoretical);
    let measured = min_disjoint_gap(space, &blobs, r).map(|g| g / r);
    let gap_delta_effective = match measured {
        Some(g) => g.max(gap_delta_theoretical.value::<T>()),
        None => lit(0.5),
    };
    let budget_violations = blobs
        .values()
        .flat_map(|b| &b.construction_log)
        .filter(|e| !e.within_budget)
        .count();
    Ok(BlobFamily {
        radius: r,
        links,
        l_hat,
        color_count: m,
        labels: coloring.labels().clone(),
        blobs,
        gap_delta_theoretical,
        gap_delta_measured: measured,
        gap_delta_effective,
        anomalies,
        budget_violations,
    })
}

fn closest_pair<T: Scalar>(space: &MetricSpace<T>, u: &[usize], v: &[usize]) -> (usize, usize) {
    let mut best = (T::infinity(), (u[0], v[0]));
    for &a in u {
        for &b in v {
            let d = space.dist(a, b);
            if d < best.0 {
                best = (d, (a, b));
            }
        }
    }
    best.1
}

/// Lower bound on `d(V_x, V_y)` from owner distance and reaches.
fn gap_lower_bound<T: Scalar>(space: &MetricSpace<T>, a: &Blob<T>, b: &Blob<T>) -> T {
    space.dist(a.owner, b.owner) - a.reach - b.reach
}

/// Smallest set distance over pairs of disjoint blobs, if any.
fn min_disjoint_gap<T: Scalar>(space: &MetricSpace<T>, blobs: &BTreeMap<usize, Blob<T>>, r: T) -> Option<T> {
    let list: Vec<&Blob<T>> = blobs.values().collect();
    let scan = |cutoff: Option<T>| -> Option<T> {
        (0..list.len())
            .into_par_iter()
            .filter_map(|i| {
                let mut best: Option<T> = None;
                for b in &list[i + 1..] {
                    let a = list[i];
                    if let Some(c) = cutoff {
                        if gap_lower_bound(space, a, b) >= c {
                            continue;
                        }
                    }
                    if a.intersects(b) {
                        continue;
                    }
                    let g = set_distance_unchecked(space, &a.points, &b.points);
                    if best.is_none_or(|cur| g < cur) {
                        best = Some(g);
                    }
                }
                best
            })
            .reduce_with(T::min)
    };
    let cutoff = lit::<T>(4.0) * r + space.resolution();
    match scan(Some(cutoff)) {
        Some(g) if g < cutoff => Some(g),
        _ => scan(None),
    }
}

/// Outcome of one checked property, with a failing witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyVerdict<W> {
    pub passed: bool,
    pub witness: Option<W>,
}

impl<W> PropertyVerdict<W> {
    fn from_witness(witness: Option<W>) -> Self {
        Self {
            passed: witness.is_none(),
            witness,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlobReport<T> {
    pub connected: PropertyVerdict<usize>,
    /// `d(x, y) <= 2r  =>  y in V_x`, and every extra link is present.
    pub neighbors_included: PropertyVerdict<(usize, usize)>,
    /// `diam(V_x) <= 5 L r`; witness is the owner and its blob diameter.
    pub diameter_bound: PropertyVerdict<(usize, T)>,
    /// Disjoint blobs are at least `gap_delta_effective * r` apart; witness
    /// is the pair and its distance.
    pub gap: PropertyVerdict<(usize, usize, T)>,
    /// Effective gap is at least the theoretical one, asserted only when
    /// the theoretical gap is resolvable (`>= h / r`).
    pub gap_floor: PropertyVerdict<T>,
    /// Largest `diam(V_x) / (L r)`.
    pub max_diameter_ratio: T,
    /// Largest `diam(V_x^(0)) / (L r)`; the construction aims for 4.
    pub max_initial_diameter_ratio: T,
}

impl<T> BlobReport<T> {
    pub fn passed(&self) -> bool {
        self.connected.passed && self.neighbors_included.passed && self.diameter_bound.passed && self.gap.passed && self.gap_floor.passed
    }
}

/// Exhaustive check of connectivity and the three blob properties.
pub fn verify_blob_properties<T: Scalar>(space: &MetricSpace<T>, family: &BlobFamily<T>, net: &Net<T>, l_hat: T) -> BlobReport<T> {
    let r = family.radius;
    let two_r = r + r;
    let lr = l_hat * r;
    let members = net.members();

    let connected = PropertyVerdict::from_witness(
        members
            .iter()
            .copied()
            .find(|x| !family.blob(*x).is_some_and(Blob::is_connected)),
    );

    let neighbors_included = PropertyVerdict::from_witness(members.par_iter().find_map_first(|&x| {
        members
            .iter()
            .find(|&&y| space.dist(x, y) <= two_r && !family.blob(x).is_some_and(|b| b.contains(y)))
            .map(|&y| (x, y))
    }).or_else(|| {
        family
            .links
            .iter()
            .copied()
            .find(|&(x, y)| !family.blob(x).is_some_and(|b| b.contains(y)))
    }));

    let mut max_ratio = T::zero();
    let mut max_initial = T::zero();
    let mut diam_witness = None;
    for &x in members {
        let Some(b) = family.blob(x) else { continue };
        let d = diameter_unchecked(space, &b.points);
        max_ratio = max_ratio.max(d / lr);
        max_initial = max_initial.max(b.initial_diameter / lr);
        if diam_witness.is_none() && !within(d, lit::<T>(5.0) * lr) {
            diam_witness = Some((x, d));
        }
    }

    let threshold = family.gap_delta_effective * r;
    let blobs: Vec<&Blob<T>> = members.iter().filter_map(|x| family.blob(*x)).collect();
    let gap_witness = (0..blobs.len()).into_par_iter().find_map_first(|i| {
        let a = blobs[i];
        for b in &blobs[i + 1..] {
            if gap_lower_bound(space, a, b) > threshold || a.intersects(b) {
                continue;
            }
            let g = set_distance_unchecked(space, &a.points, &b.points);
            if !within(threshold, g) {
                return Some((a.owner, b.owner, g));
            }
        }
        None
    });

    let h = space.resolution();
    let resolvable = r > T::zero() && family.gap_delta_theoretical.ge(h / r);
    let floor_ok = !resolvable || family.gap_delta_measured.is_none_or(|g| within(family.gap_delta_theoretical.value::<T>(), g));

    BlobReport {
        connected,
        neighbors_included,
        diameter_bound: PropertyVerdict::from_witness(diam_witness),
        gap: PropertyVerdict::from_witness(gap_witness),
        gap_floor: PropertyVerdict::from_witness((!floor_ok).then_some(family.gap_delta_effective)),
        max_diameter_ratio: max_ratio,
        max_initial_diameter_ratio: max_initial,
    }
}

/// Net, colouring and blobs at radius `r` with the standard separation
/// target `20 L r`.
pub fn blob_family_at<T: Scalar>(space: &MetricSpace<T>, r: T, seeds: &[usize], l_hat: T) -> Result<(Net<T>, Coloring<T>, BlobFamily<T>)> {
    let net = crate::net::build_net(space, r, seeds)?;
    let coloring = crate::net::color_net(space, &net, count::<T>(20) * l_hat * r);
    let family = build_blobs(space, &net, &coloring, l_hat)?;
    Ok((net, coloring, family))
}
