use serde::Serialize;

use crate::metric::{scan_subarcs, DiscreteArc, MetricSpace};
use crate::scalar::{within, Scalar};

/// Exhaustive measurement of the two-constant condition
/// `d(x, y) < s ι  =>  diam(J[x, y]) < S ι` on an arc.
///
/// A pair is *long* when `diam(J[x, y])` exceeds `S ι` beyond the scalar
/// slack; the condition holds for a given `s` iff every long pair has
/// `d(x, y) >= s ι`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarReport<T> {
    pub iota: T,
    /// `S` the arc is held to.
    pub big_s_target: T,
    /// `s` the arc is held to.
    pub s_reference: T,
    /// Largest `s` for which the condition holds with `big_s_target`:
    /// `min d/ι` over long pairs, capped at 1.
    pub s_achieved: T,
    /// `max diam/ι` over pairs with `d < s_reference ι`.
    pub big_s_achieved: T,
    pub passed: bool,
    /// A long pair of positions with `d < s_reference ι`.
    pub witness: Option<(usize, usize)>,
}

pub fn check_star<T: Scalar>(space: &MetricSpace<T>, arc: &DiscreteArc, iota: T, s_reference: T, big_s_target: T) -> StarReport<T> {
    let long_at = big_s_target * iota;
    let short_below = s_reference * iota;
    let mut s_achieved = T::one();
    let mut big_s_achieved = T::zero();
    let mut witness = None;
    scan_subarcs(space, arc, |x, y, d, diam| {
        let long = !within(diam, long_at);
        if long {
            s_achieved = s_achieved.min(d / iota);
        }
        if d < short_below {
            big_s_achieved = big_s_achieved.max(diam / iota);
            if long && witness.is_none_or(|w| (x, y) < w) {
                witness = Some((x, y));
            }
        }
    });
    StarReport {
        iota,
        big_s_target,
        s_reference,
        s_achieved,
        big_s_achieved,
        passed: witness.is_none(),
        witness,
    }
}
