//! Straightening iterated over the scales `ε δ, ε δ², ...` down to the
//! resolution floor, with the finite-trace forms of the limit claims.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{hausdorff_distance, scan_subarcs, DiscreteArc, MetricSpace};
use crate::scalar::{lit, within, Scalar};
use crate::straighten::{
    scale_floor, straighten, verify_follows, CoarseMap, Diagnostics, FollowsReport, StarConstants, StraightenParams,
    StraighteningCase, BIG_S,
};

/// Upper limit on `δ` regardless of the constants.
pub const DELTA_CAP: f64 = 0.1;
/// Bound on `sum δ^n` for `δ <= 1/10`.
pub const SERIES_BOUND: f64 = 11.0 / 9.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Depth {
    Steps(usize),
    /// As many steps as keep `ε δ^n` at or above the scale floor.
    UntilFloor,
}

/// How the scale ratio is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaRule<T> {
    Fixed(T),
    /// `min{s/(4+2S), 1/10}` with `s` the guaranteed constant of each step.
    Guaranteed,
    /// Same with the measured `s` of each step.
    Achieved,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationConfig<T> {
    pub epsilon: T,
    pub delta: DeltaRule<T>,
    pub max_depth: Depth,
    pub l_hat: T,
    pub verify_blobs: bool,
    /// Reruns allowed while searching for a self-consistent `δ`.
    pub max_attempts: usize,
}

impl<T: Scalar> IterationConfig<T> {
    pub fn new(epsilon: T, l_hat: T) -> Self {
        Self {
            epsilon,
            delta: DeltaRule::Guaranteed,
            max_depth: Depth::UntilFloor,
            l_hat,
            verify_blobs: true,
            max_attempts: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepSummary<T> {
    /// `n`: this step maps `J_n` to `J_{n+1}`.
    pub n: usize,
    pub iota: T,
    pub case: StraighteningCase,
    pub radius: Option<T>,
    pub gap_delta_effective: Option<T>,
    pub constants: StarConstants<T>,
    pub follows_max_displacement: T,
    pub diagnostics: Diagnostics,
    pub arc_len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaCondition<T> {
    pub delta: T,
    /// `min s_guaranteed` over the steps.
    pub s_guaranteed: Option<T>,
    /// `min s_achieved` over the steps.
    pub s_achieved: Option<T>,
    /// `min{s_achieved/(4+2S), 1/10}`; the trace is only valid below it.
    pub bound_achieved: Option<T>,
    pub bound_guaranteed: Option<T>,
    pub holds: bool,
    /// Every `δ` tried, in order.
    pub attempts: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalQuasiArcReport<T> {
    pub scale_lo: T,
    pub scale_hi: T,
    pub lambda_measured: T,
    pub pairs: usize,
    /// No pair in the band; `lambda_measured` is 1 by convention.
    pub vacuous: bool,
    pub witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyEntry<T> {
    /// 1-based arc indices `n < k`.
    pub n: usize,
    pub k: usize,
    pub distance: T,
    pub bound: T,
    /// Only `n >= 2` is covered by the bound; earlier pairs are recorded.
    pub asserted: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyReport<T> {
    pub entries: Vec<CauchyEntry<T>>,
    /// `max distance/bound` over asserted entries.
    pub max_ratio: T,
    pub vacuous: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiscaleTrace<T> {
    /// `J_1 = A, J_2, ..., J_K`.
    pub arcs: Vec<DiscreteArc>,
    /// `ι_n = ε δ^n` for each step.
    pub scales: Vec<T>,
    /// Entry `k` maps `J_{k+2}` to `J_{k+1}`.
    pub follow_maps: Vec<CoarseMap<T>>,
    pub steps: Vec<StepSummary<T>>,
    /// `J_K` to `J_1`.
    pub composed_map: CoarseMap<T>,
    pub composed_follows: FollowsReport<T>,
    /// Composed bound is at most `(11/9) ε δ`.
    pub composed_within_series_bound: bool,
    pub epsilon: T,
    pub floor: T,
    pub delta: DeltaCondition<T>,
    pub big_s: T,
    /// `δ²`.
    pub alpha: T,
    /// `(4S + 3δ)/δ²`.
    pub lambda: T,
    pub local: LocalQuasiArcReport<T>,
    pub lambda_within_bound: bool,
    pub cauchy: CauchyReport<T>,
    pub endpoints_constant: bool,
}

impl<T: Scalar> MultiscaleTrace<T> {
    pub fn last(&self) -> &DiscreteArc {
        self.arcs.last().expect("trace holds the input arc")
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn passed(&self) -> bool {
        self.composed_follows.passed
            && self.composed_within_series_bound
            && self.delta.holds
            && self.lambda_within_bound
            && self.cauchy.passed
            && self.endpoints_constant
    }
}

/// `maps[k]` takes `J_{k+2}` to `J_{k+1}`; the result takes the last arc to
/// the first. With no maps this is the identity on `base_len` positions.
pub fn compose_follow_maps<T: Scalar>(maps: &[CoarseMap<T>], base_len: usize) -> Result<CoarseMap<T>> {
    let Some((last, rest)) = maps.split_last() else {
        return Ok(CoarseMap::identity(base_len));
    };
    if maps[0].target_len != base_len {
        return Err(Error::InvalidParameter(format!(
            "first map targets {} positions, base arc has {base_len}",
            maps[0].target_len
        )));
    }
    rest.iter().rev().try_fold(last.clone(), |acc, m| acc.then(m))
}

/// `max diam(J[x, y]) / d(x, y)` over pairs with `d(x, y)` in the closed
/// band `[scale_lo, scale_hi]`.
pub fn measure_local_quasiarc<T: Scalar>(space: &MetricSpace<T>, arc: &DiscreteArc, scale_lo: T, scale_hi: T) -> LocalQuasiArcReport<T> {
    let mut lambda = T::one();
    let mut pairs = 0;
    let mut witness = None;
    scan_subarcs(space, arc, |x, y, d, diam| {
        if x == y || d < scale_lo || d > scale_hi {
            return;
        }
        pairs += 1;
        let ratio = diam / d;
        if ratio > lambda || witness.is_none() {
            lambda = lambda.max(ratio);
            witness = Some((x, y));
        }
    });
    LocalQuasiArcReport {
        scale_lo,
        scale_hi,
        lambda_measured: lambda,
        pairs,
        vacuous: pairs == 0,
        witness,
    }
}

/// Hausdorff distances between all pairs of arcs of the trace against
/// `(11/9) ε δ^n + S ε δ^(n-1)`.
pub fn check_cauchy<T: Scalar>(space: &MetricSpace<T>, arcs: &[DiscreteArc], epsilon: T, delta: T, big_s: T) -> CauchyReport<T> {
    let mut entries = Vec::new();
    let mut max_ratio = T::zero();
    for n in 1..=arcs.len() {
        for k in n + 1..=arcs.len() {
            let distance = hausdorff_distance(space, arcs[n - 1].indices(), arcs[k - 1].indices()).expect("arcs are non-empty");
            let bound = epsilon * (lit::<T>(SERIES_BOUND) * delta.powi(n as i32) + big_s * delta.powi(n as i32 - 1));
            let asserted = n >= 2;
            if asserted && bound > T::zero() {
                max_ratio = max_ratio.max(distance / bound);
            }
            entries.push(CauchyEntry {
                n,
                k,
                distance,
                bound,
                asserted,
                holds: within(distance, bound),
            });
        }
    }
    let passed = entries.iter().all(|e| !e.asserted || e.holds);
    CauchyReport {
        vacuous: !entries.iter().any(|e| e.asserted),
        entries,
        max_ratio,
        passed,
    }
}

struct Run<T> {
    arcs: Vec<DiscreteArc>,
    scales: Vec<T>,
    maps: Vec<CoarseMap<T>>,
    steps: Vec<StepSummary<T>>,
}

fn steps_for<T: Scalar>(config: &IterationConfig<T>, delta: T, floor: T) -> Result<usize> {
    match config.max_depth {
        Depth::Steps(k) => {
            let last = config.epsilon * delta.powi(k as i32);
            if k > 0 && last < floor {
                return Err(Error::ScaleFloor {
                    iota: crate::scalar::to_f64(last),
                    floor: crate::scalar::to_f64(floor),
                });
            }
            Ok(k)
        }
        Depth::UntilFloor => {
            let mut k = 0;
            let mut iota = config.epsilon * delta;
            while iota >= floor && iota > T::zero() {
                k += 1;
                iota *= delta;
            }
            Ok(k)
        }
    }
}

fn run_schedule<T: Scalar>(space: &MetricSpace<T>, arc: &DiscreteArc, config: &IterationConfig<T>, delta: T, floor: T) -> Result<Run<T>> {
    let depth = steps_for(config, delta, floor)?;
    let params = StraightenParams {
        l_hat: config.l_hat,
        verify_blobs: config.verify_blobs,
    };
    let mut run = Run {
        arcs: vec![arc.clone()],
        scales: Vec::with_capacity(depth),
        maps: Vec::with_capacity(depth),
        steps: Vec::with_capacity(depth),
    };
    let mut iota = config.epsilon;
    for n in 1..=depth {
        iota *= delta;
        let current = run.arcs.last().expect("non-empty");
        let res = straighten(space, &params, current, iota)?;
        if let Some(why) = res.failure().or_else(|| (!res.passed()).then(|| "s below the guaranteed value".to_string())) {
            return Err(Error::Verification {
                stage: "iterate",
                detail: format!("step {n} at scale {iota}: {why}"),
            });
        }
        run.steps.push(StepSummary {
            n,
            iota,
            case: res.case,
            radius: res.radius,
            gap_delta_effective: res.gap_delta_effective,
            constants: res.constants.clone(),
            follows_max_displacement: res.verdicts.follows.max_displacement,
            diagnostics: res.diagnostics.clone(),
            arc_len: res.arc.len(),
        });
        run.scales.push(iota);
        run.maps.push(res.follow_map);
        run.arcs.push(res.arc);
    }
    Ok(run)
}

fn delta_bound<T: Scalar>(s: Option<T>, big_s: T) -> Option<T> {
    s.map(|s| (s / (lit::<T>(4.0) + lit::<T>(2.0) * big_s)).min(lit(DELTA_CAP)))
}

/// Runs the schedule and checks everything that survives on the finite
/// trace. With a rule-based `δ`, starts at 1/10 and shrinks `δ` to the
/// bound its own run produced until the run is self-consistent.
pub fn iterate<T: Scalar>(space: &MetricSpace<T>, arc: &DiscreteArc, config: &IterationConfig<T>) -> Result<MultiscaleTrace<T>> {
    let eps = config.epsilon;
    if !(eps > T::zero()) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {eps}")));
    }
    let big_s: T = lit(BIG_S);
    let floor = scale_floor(space, config.l_hat);
    let mut delta = match config.delta {
        DeltaRule::Fixed(d) => {
            if !(d > T::zero() && d < T::one()) {
                return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {d}")));
            }
            d
        }
        _ => lit(DELTA_CAP),
    };
    let mut attempts = Vec::new();
    let (run, condition) = loop {
        attempts.push(delta);
        let run = run_schedule(space, arc, config, delta, floor)?;
        let min_of = |f: fn(&StarConstants<T>) -> T| run.steps.iter().map(|s| f(&s.constants)).reduce(T::min);
        let s_guaranteed = min_of(|c| c.s_guaranteed);
        let s_achieved = min_of(|c| c.s_achieved);
        let bound_guaranteed = delta_bound(s_guaranteed, big_s);
        let bound_achieved = delta_bound(s_achieved, big_s);
        let holds = bound_achieved.is_none_or(|b| within(delta, b));
        let rule_bound = match config.delta {
            DeltaRule::Fixed(_) => None,
            DeltaRule::Guaranteed => bound_guaranteed,
            DeltaRule::Achieved => bound_achieved,
        };
        let settled = rule_bound.is_none_or(|b| within(delta, b));
        if settled || attempts.len() >= config.max_attempts.max(1) {
            let condition = DeltaCondition {
                delta,
                s_guaranteed,
                s_achieved,
                bound_achieved,
                bound_guaranteed,
                holds: holds && settled,
                attempts: attempts.clone(),
            };
            break (run, condition);
        }
        delta = rule_bound.expect("unsettled implies a bound");
    };

    let composed_map = compose_follow_maps(&run.maps, arc.len())?;
    let composed_follows = verify_follows(space, run.arcs.last().expect("non-empty"), arc, &composed_map, composed_map.displacement_bound);
    let composed_within_series_bound = within(composed_map.displacement_bound, lit::<T>(SERIES_BOUND) * eps * delta);
    let alpha = delta * delta;
    let lambda = (lit::<T>(4.0) * big_s + lit::<T>(3.0) * delta) / alpha;
    let last = run.arcs.last().expect("non-empty");
    let local = measure_local_quasiarc(space, last, space.resolution() / alpha, eps * alpha);
    let lambda_within_bound = local.vacuous || within(local.lambda_measured, lambda);
    let cauchy = check_cauchy(space, &run.arcs, eps, delta, big_s);
    let endpoints_constant = run.arcs.iter().all(|j| j.a() == arc.a() && j.b() == arc.b());
    Ok(MultiscaleTrace {
        arcs: run.arcs,
        scales: run.scales,
        follow_maps: run.maps,
        steps: run.steps,
        composed_map,
        composed_follows,
        composed_within_series_bound,
        epsilon: eps,
        floor,
        delta: condition,
        big_s,
        alpha,
        lambda,
        local,
        lambda_within_bound,
        cauchy,
        endpoints_constant,
    })
}
