use serde::{Deserialize, Serialize};

use crate::error::{HypothesisFailure, Result};
use crate::metric::{DiscreteArc, MetricSpace};
use crate::net::Net;
use crate::scalar::Scalar;

/// Cover of an arc by consecutive closed pieces `A[y_i, y_{i+1}]`, each
/// strictly inside the ball `B(x_i, r)` of a net member.
///
/// `y_seq` holds arc positions and has the same length as `x_seq`; the
/// last member `x_n` owns no piece and is `b` whenever `b` is in the net.
/// When no ball holds two consecutive arc points, piece `i` stops one short
/// at `A[y_i, y_{i+1} - 1]` and `i` is listed in `handoffs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discretization<T> {
    pub x_seq: Vec<usize>,
    pub y_seq: Vec<usize>,
    pub radius: T,
    #[serde(default)]
    pub handoffs: Vec<usize>,
}

impl<T: Scalar> Discretization<T> {
    /// `n`, the number of pieces.
    pub fn pieces(&self) -> usize {
        self.x_seq.len() - 1
    }

    /// Last arc position of piece `i`.
    pub fn piece_end(&self, i: usize) -> usize {
        self.y_seq[i + 1] - usize::from(self.handoffs.binary_search(&i).is_ok())
    }

    /// Exhaustive invariant check; `Err` names the first broken one.
    pub fn verify(&self, space: &MetricSpace<T>, arc: &DiscreteArc, net: &Net<T>) -> std::result::Result<(), String> {
        let n = self.x_seq.len();
        if n == 0 || n != self.y_seq.len() {
            return Err(format!("x_seq has {} entries, y_seq {}", n, self.y_seq.len()));
        }
        if self.y_seq[0] != 0 || self.y_seq[n - 1] != arc.len() - 1 {
            return Err("y_seq does not start and end at the arc endpoints".into());
        }
        if let Some(w) = self.y_seq.windows(2).position(|w| w[0] >= w[1]) {
            return Err(format!("y_seq not increasing at {w}"));
        }
        if let Some(&x) = self.x_seq.iter().find(|&&x| !net.contains(x)) {
            return Err(format!("{x} is not a net member"));
        }
        for i in 0..n.saturating_sub(1) {
            for pos in self.y_seq[i]..=self.piece_end(i) {
                if space.dist(self.x_seq[i], arc.point(pos)) >= self.radius {
                    return Err(format!("arc position {pos} escapes the ball of piece {i}"));
                }
            }
        }
        if net.contains(arc.a()) && self.x_seq[0] != arc.a() {
            return Err("x_0 differs from the seeded endpoint a".into());
        }
        if net.contains(arc.b()) && self.x_seq[n - 1] != arc.b() {
            return Err("x_n differs from the seeded endpoint b".into());
        }
        Ok(())
    }
}

/// Greedy-longest walk along the arc. From position `p`, every net member
/// whose open ball holds `A[p]` is a candidate; the one covering the longest
/// run `A[p..=q]` wins, ties going to the smallest index. `x_0 = a` is forced
/// when `a` is a net member. If the winning run is `A[p]` alone, the piece
/// hands off to position `p + 1`, whose member is then the covering one
/// nearest the previous member.
pub fn discretize_arc<T: Scalar>(space: &MetricSpace<T>, arc: &DiscreteArc, net: &Net<T>) -> Result<Discretization<T>> {
    let r = net.radius();
    let pts = arc.indices();
    let last = pts.len() - 1;
    if last == 0 {
        let x = if net.contains(arc.a()) {
            arc.a()
        } else {
            covering_members(space, net, pts[0])
                .next()
                .ok_or(HypothesisFailure::Uncovered { point: pts[0] })?
        };
        return Ok(Discretization {
            x_seq: vec![x],
            y_seq: vec![0],
            radius: r,
            handoffs: Vec::new(),
        });
    }
    let extent = |m: usize, p: usize| {
        let mut q = p;
        while q < last && space.dist(m, pts[q + 1]) < r {
            q += 1;
        }
        q
    };
    let mut x_seq = Vec::new();
    let mut y_seq = vec![0];
    let mut handoffs = Vec::new();
    let mut p = 0;
    while p < last {
        let best = if p == 0 && net.contains(arc.a()) {
            Some((extent(arc.a(), 0), arc.a()))
        } else if handoffs.last() == Some(&(x_seq.len().wrapping_sub(1))) {
            // after a handoff, stay as close to the previous member as possible
            let prev = *x_seq.last().expect("handoff follows a piece");
            covering_members(space, net, pts[p])
                .map(|m| (space.dist(prev, m), extent(m, p), m))
                .fold(None, |acc: Option<(T, usize, usize)>, c| match acc {
                    Some(a) if a.0 < c.0 || (a.0 == c.0 && a.1 >= c.1) => Some(a),
                    _ => Some(c),
                })
                .map(|(_, q, m)| (q, m))
        } else {
            covering_members(space, net, pts[p])
                .map(|m| (extent(m, p), m))
                .fold(None, |acc: Option<(usize, usize)>, c| match acc {
                    Some(a) if a.0 >= c.0 => Some(a),
                    _ => Some(c),
                })
        };
        let (q, m) = best.ok_or(HypothesisFailure::Uncovered { point: pts[p] })?;
        let q = if q == p {
            handoffs.push(x_seq.len());
            p + 1
        } else {
            q
        };
        x_seq.push(m);
        y_seq.push(q);
        p = q;
    }
    let closing = if net.contains(arc.b()) {
        arc.b()
    } else {
        *x_seq.last().expect("at least one piece")
    };
    x_seq.push(closing);
    Ok(Discretization {
        x_seq,
        y_seq,
        radius: r,
        handoffs,
    })
}

fn covering_members<'a, T: Scalar>(space: &'a MetricSpace<T>, net: &'a Net<T>, point: usize) -> impl Iterator<Item = usize> + 'a {
    let r = net.radius();
    net.members().iter().copied().filter(move |&m| space.dist(m, point) < r)
}
