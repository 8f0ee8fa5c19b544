//! Set-level distance utilities over point-index sets.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::{DiscreteArc, MetricSpace};
use crate::scalar::Scalar;

fn non_empty(s: &[usize]) -> Result<()> {
    if s.is_empty() {
        Err(Error::EmptySet)
    } else {
        Ok(())
    }
}

/// `inf { d(u, v) : u in U, v in V }`.
pub fn set_distance<T: Scalar>(space: &MetricSpace<T>, u: &[usize], v: &[usize]) -> Result<T> {
    non_empty(u)?;
    non_empty(v)?;
    Ok(set_distance_unchecked(space, u, v))
}

pub(crate) fn set_distance_unchecked<T: Scalar>(space: &MetricSpace<T>, u: &[usize], v: &[usize]) -> T {
    let mut best = T::infinity();
    for &a in u {
        for &b in v {
            let d = space.dist(a, b);
            if d < best {
                best = d;
            }
        }
    }
    best
}

/// `sup_{u in U} d(u, V)`.
pub fn directed_hausdorff<T: Scalar>(space: &MetricSpace<T>, u: &[usize], v: &[usize]) -> Result<T> {
    non_empty(u)?;
    non_empty(v)?;
    Ok(u.par_iter()
        .map(|&a| v.iter().map(|&b| space.dist(a, b)).fold(T::infinity(), T::min))
        .reduce(T::zero, T::max))
}

/// Hausdorff distance: the larger of the two directed distances.
pub fn hausdorff_distance<T: Scalar>(space: &MetricSpace<T>, u: &[usize], v: &[usize]) -> Result<T> {
    Ok(directed_hausdorff(space, u, v)?.max(directed_hausdorff(space, v, u)?))
}

/// Maximum pairwise distance; zero for singletons.
pub fn diameter<T: Scalar>(space: &MetricSpace<T>, s: &[usize]) -> Result<T> {
    non_empty(s)?;
    Ok(diameter_unchecked(space, s))
}

pub(crate) fn diameter_unchecked<T: Scalar>(space: &MetricSpace<T>, s: &[usize]) -> T {
    if s.len() > 256 {
        return (0..s.len())
            .into_par_iter()
            .map(|i| s[i + 1..].iter().map(|&b| space.dist(s[i], b)).fold(T::zero(), T::max))
            .reduce(T::zero, T::max);
    }
    let mut best = T::zero();
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            let d = space.dist(a, b);
            if d > best {
                best = d;
            }
        }
    }
    best
}

/// Visits every position pair `x <= y` of an arc with `d(J[x], J[y])` and
/// `diam(J[x..=y])`, in O(|J|^2) total time.
///
/// Uses `diam(x, y) = max(diam(x+1, y), diam(x, y-1), d(x, y))`, keeping
/// one row of the table.
pub fn scan_subarcs<T, F>(space: &MetricSpace<T>, arc: &DiscreteArc, mut visit: F)
where
    T: Scalar,
    F: FnMut(usize, usize, T, T),
{
    let pts = arc.indices();
    let n = pts.len();
    let mut row = vec![T::zero(); n];
    for x in (0..n).rev() {
        visit(x, x, T::zero(), T::zero());
        // row holds diam(x+1, y) for y > x before the update
        let mut left = T::zero();
        for y in x + 1..n {
            let d = space.dist(pts[x], pts[y]);
            let diam = row[y].max(left).max(d);
            row[y] = diam;
            left = diam;
            visit(x, y, d, diam);
        }
        row[x] = T::zero();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> MetricSpace<f64> {
        MetricSpace::euclidean((0..10).map(|i| vec![i as f64]).collect(), None).unwrap()
    }

    #[test]
    fn set_distance_examples() {
        let s = line();
        assert_eq!(set_distance(&s, &[3], &[3]).unwrap(), 0.0);
        assert_eq!(set_distance(&s, &[0], &[5, 6]).unwrap(), 5.0);
        assert_eq!(set_distance(&s, &[1, 2, 3], &[3, 4]).unwrap(), 0.0);
        assert!(matches!(set_distance(&s, &[], &[1]), Err(Error::EmptySet)));
    }

    #[test]
    fn hausdorff_examples() {
        let pts = (0..=10).map(|i| vec![i as f64]).collect();
        let s = MetricSpace::euclidean(pts, None).unwrap();
        assert_eq!(hausdorff_distance(&s, &[0, 4], &[4, 0]).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&s, &[0], &[0, 10]).unwrap(), 10.0);
        assert_eq!(directed_hausdorff(&s, &[0], &[0, 10]).unwrap(), 0.0);
        assert!(hausdorff_distance(&s, &[0], &[]).is_err());
    }

    #[test]
    fn diameter_examples() {
        let s = MetricSpace::euclidean(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], None).unwrap();
        assert_eq!(diameter(&s, &[1]).unwrap(), 0.0);
        assert!((diameter(&s, &[0, 1, 2]).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(diameter(&s, &[2, 0, 1]).unwrap(), diameter(&s, &[0, 1, 2]).unwrap());
        assert!(diameter(&s, &[]).is_err());
    }

    #[test]
    fn subarc_scan_matches_direct_diameters() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![0.0, 2.0]];
        let s = MetricSpace::euclidean(pts, Some(1.0)).unwrap();
        let arc = DiscreteArc::new(&s, vec![0, 1, 2, 3, 4]).unwrap();
        let mut seen = 0;
        scan_subarcs(&s, &arc, |x, y, d, diam| {
            seen += 1;
            assert_eq!(d, s.dist(arc.point(x), arc.point(y)));
            assert_eq!(diam, diameter(&s, arc.subarc(x, y)).unwrap());
        });
        assert_eq!(seen, 15);
    }
}
