//! Direct evaluation of every checked definition over raw coordinates.
//! Nothing here calls into the library: distances are recomputed from the
//! point list and every quantifier is a plain nested loop.

pub const SLACK: f64 = 1e-9;

pub fn le(value: f64, bound: f64) -> bool {
    value <= bound + bound.abs() * SLACK
}

pub struct Brute {
    pub d: Vec<Vec<f64>>,
}

impl Brute {
    pub fn new(points: &[Vec<f64>]) -> Self {
        let d = points
            .iter()
            .map(|p| {
                points
                    .iter()
                    .map(|q| p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
                    .collect()
            })
            .collect();
        Self { d }
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn diam(&self, set: &[usize]) -> f64 {
        let mut m = 0.0f64;
        for &a in set {
            for &b in set {
                m = m.max(self.d[a][b]);
            }
        }
        m
    }

    pub fn set_dist(&self, u: &[usize], v: &[usize]) -> f64 {
        let mut m = f64::INFINITY;
        for &a in u {
            for &b in v {
                m = m.min(self.d[a][b]);
            }
        }
        m
    }

    /// Pairwise `>= r` and every point `< r` from some member.
    pub fn net_ok(&self, members: &[usize], r: f64) -> (bool, bool) {
        let mut separated = true;
        for &x in members {
            for &y in members {
                if x != y && self.d[x][y] < r {
                    separated = false;
                }
            }
        }
        let maximal = (0..self.n()).all(|p| members.iter().any(|&m| self.d[p][m] < r));
        (separated, maximal)
    }

    /// Distinct members sharing a label are at least `target` apart.
    pub fn coloring_ok(&self, members: &[usize], label: impl Fn(usize) -> Option<usize>, target: f64) -> bool {
        for &x in members {
            if label(x).is_none() {
                return false;
            }
            for &y in members {
                if x != y && label(x) == label(y) && self.d[x][y] < target {
                    return false;
                }
            }
        }
        true
    }

    /// Properties (1), (2), (3') of a blob family given as point lists.
    pub fn blob_props(&self, members: &[usize], blobs: &[(usize, Vec<usize>)], r: f64, l: f64, delta: f64) -> (bool, bool, bool) {
        let blob = |x: usize| blobs.iter().find(|b| b.0 == x).map(|b| b.1.as_slice()).unwrap_or(&[]);
        let mut p1 = true;
        for &x in members {
            for &y in members {
                // y = x included: each owner lies in its own blob
                if self.d[x][y] <= 2.0 * r && !blob(x).contains(&y) {
                    p1 = false;
                }
            }
        }
        let p2 = members.iter().all(|&x| le(self.diam(blob(x)), 5.0 * l * r));
        let mut p3 = true;
        for &x in members {
            for &y in members {
                if x == y {
                    continue;
                }
                let (bx, by) = (blob(x), blob(y));
                let disjoint = !bx.iter().any(|p| by.contains(p));
                if disjoint && !le(delta * r, self.set_dist(bx, by)) {
                    p3 = false;
                }
            }
        }
        (p1, p2, p3)
    }

    /// `d(x, y) < s ι  =>  diam(J[x, y]) <= S ι` over all position pairs.
    pub fn star_ok(&self, arc: &[usize], iota: f64, s: f64, big_s: f64) -> bool {
        for i in 0..arc.len() {
            for j in i + 1..arc.len() {
                if self.d[arc[i]][arc[j]] < s * iota && !le(self.diam(&arc[i..=j]), big_s * iota) {
                    return false;
                }
            }
        }
        true
    }

    /// `p` respects endpoints and every `B[z]`, `x <= z <= y`, is within
    /// `ε` of `A[min(p(x), p(y)) ..= max(p(x), p(y))]`.
    pub fn follows_ok(&self, b: &[usize], a: &[usize], p: &[usize], eps: f64) -> bool {
        if p.len() != b.len() || p.iter().any(|&q| q >= a.len()) {
            return false;
        }
        if p[0] != 0 || p[p.len() - 1] != a.len() - 1 {
            return false;
        }
        for x in 0..b.len() {
            for y in x..b.len() {
                let (lo, hi) = (p[x].min(p[y]), p[x].max(p[y]));
                for &bz in &b[x..=y] {
                    if !le(self.set_dist(&[bz], &a[lo..=hi]), eps) {
                        return false;
                    }
                }
            }
        }
        true
    }
}
