use std::collections::BTreeMap;

use serde::Serialize;

use quasiarc::metric::{ConnectivityEstimate, DoublingEstimate};
use quasiarc::multiscale::{CauchyReport, DeltaCondition, LocalQuasiArcReport, StepSummary};
use quasiarc::straighten::{Diagnostics, FollowsReport, StarConstants, StraighteningCase, Verdicts};
use quasiarc::{diameter, DiscreteArc, LogValue, MultiscaleTrace, Space, StraighteningResult};

pub const SCHEMA_VERSION: &str = "quasiarc.report/v1";

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: CommandEcho,
    pub space: Option<SpaceSummary>,
    pub profile: Option<ProfileSummary>,
    pub straighten: Option<StraightenSummary>,
    pub iterate: Option<IterateSummary>,
    pub outcome: Outcome,
    /// Wall-clock milliseconds per stage; the only non-deterministic field.
    pub timing_ms: BTreeMap<&'static str, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommandEcho {
    pub name: &'static str,
    pub space: String,
    pub arc: Option<String>,
    pub iota: Option<f64>,
    pub epsilon: Option<f64>,
    pub depth: Option<usize>,
    pub delta: Option<String>,
    pub l_hat: Option<f64>,
    pub seed: u64,
    pub exhaustive: bool,
}

#[derive(Debug, Serialize)]
pub struct SpaceSummary {
    pub n: usize,
    pub metric: &'static str,
    pub dim: usize,
    pub resolution: f64,
    pub step_radius: f64,
    pub planar: bool,
}

impl SpaceSummary {
    pub fn of(space: &Space) -> Self {
        Self {
            n: space.len(),
            metric: space.kind().name(),
            dim: space.dim(),
            resolution: space.resolution(),
            step_radius: space.step_radius(),
            planar: space.is_planar(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ProfileSummary {
    pub l_hat: f64,
    pub l_exact: bool,
    pub l_sources: usize,
    pub l_witness: Option<(usize, usize)>,
    pub n_hat: usize,
    pub n_exact: bool,
    pub n_centers: usize,
    pub n_witness: Option<(usize, f64)>,
    /// `L_hat` the run used, when given on the command line.
    pub l_hat_override: Option<f64>,
}

impl ProfileSummary {
    pub fn new(l: &ConnectivityEstimate<f64>, n: &DoublingEstimate<f64>, l_hat_override: Option<f64>) -> Self {
        Self {
            l_hat: l.l_hat,
            l_exact: l.exact,
            l_sources: l.sources,
            l_witness: l.witness,
            n_hat: n.n_hat,
            n_exact: n.exact,
            n_centers: n.centers,
            n_witness: n.witness,
            l_hat_override,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ArcSummary {
    pub len: usize,
    pub a: usize,
    pub b: usize,
    pub diameter: f64,
    pub indices: Option<Vec<usize>>,
}

impl ArcSummary {
    pub fn of(space: &Space, arc: &DiscreteArc, with_indices: bool) -> Self {
        Self {
            len: arc.len(),
            a: arc.a(),
            b: arc.b(),
            diameter: diameter(space, arc.indices()).unwrap_or(0.0),
            indices: with_indices.then(|| arc.indices().to_vec()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct StraightenSummary {
    pub case: StraighteningCase,
    pub iota: f64,
    pub l_hat: f64,
    pub scale_floor: f64,
    pub radius: Option<f64>,
    pub input: ArcSummary,
    pub output: ArcSummary,
    pub net_size: usize,
    /// `M`, the number of colour classes.
    pub color_count: usize,
    pub gap_delta_theoretical: Option<LogValue>,
    pub gap_delta_effective: Option<f64>,
    pub chain_length: Option<usize>,
    pub constants: StarConstants<f64>,
    pub verdicts: Verdicts<f64>,
    pub diagnostics: Diagnostics,
    pub passed: bool,
}

impl StraightenSummary {
    pub fn new(space: &Space, input: &DiscreteArc, res: &StraighteningResult, floor: f64) -> Self {
        Self {
            case: res.case,
            iota: res.iota,
            l_hat: res.l_hat,
            scale_floor: floor,
            radius: res.radius,
            input: ArcSummary::of(space, input, false),
            output: ArcSummary::of(space, &res.arc, true),
            net_size: res.diagnostics.net_size,
            color_count: res.diagnostics.color_count,
            gap_delta_theoretical: res.gap_delta_theoretical,
            gap_delta_effective: res.gap_delta_effective,
            chain_length: res.chain.as_ref().map(|c| c.members.len()),
            constants: res.constants.clone(),
            verdicts: res.verdicts.clone(),
            diagnostics: res.diagnostics.clone(),
            passed: res.passed(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct IterateSummary {
    pub epsilon: f64,
    pub scale_floor: f64,
    pub depth: usize,
    pub scales: Vec<f64>,
    pub delta: DeltaCondition<f64>,
    pub big_s: f64,
    pub alpha: f64,
    pub lambda_theoretical: f64,
    pub local: LocalQuasiArcReport<f64>,
    pub lambda_within_bound: bool,
    pub steps: Vec<StepSummary<f64>>,
    pub arc_lengths: Vec<usize>,
    pub composed_displacement_bound: f64,
    pub composed_follows: FollowsReport<f64>,
    pub composed_within_series_bound: bool,
    pub cauchy: CauchyReport<f64>,
    pub endpoints_constant: bool,
    pub output: ArcSummary,
    pub passed: bool,
}

impl IterateSummary {
    pub fn new(space: &Space, t: &MultiscaleTrace) -> Self {
        Self {
            epsilon: t.epsilon,
            scale_floor: t.floor,
            depth: t.depth(),
            scales: t.scales.clone(),
            delta: t.delta.clone(),
            big_s: t.big_s,
            alpha: t.alpha,
            lambda_theoretical: t.lambda,
            local: t.local.clone(),
            lambda_within_bound: t.lambda_within_bound,
            steps: t.steps.clone(),
            arc_lengths: t.arcs.iter().map(DiscreteArc::len).collect(),
            composed_displacement_bound: t.composed_map.displacement_bound,
            composed_follows: t.composed_follows.clone(),
            composed_within_series_bound: t.composed_within_series_bound,
            cauchy: t.cauchy.clone(),
            endpoints_constant: t.endpoints_constant,
            output: ArcSummary::of(space, t.last(), true),
            passed: t.passed(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeClass {
    Pass,
    Hypothesis,
    Usage,
    Verification,
}

impl OutcomeClass {
    pub fn exit_code(self) -> i32 {
        match self {
            OutcomeClass::Pass => 0,
            OutcomeClass::Hypothesis => 1,
            OutcomeClass::Usage => 2,
            OutcomeClass::Verification => 3,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Outcome {
    pub class: OutcomeClass,
    pub exit_code: i32,
    pub message: Option<String>,
}

impl Outcome {
    pub fn new(class: OutcomeClass, message: Option<String>) -> Self {
        Self {
            class,
            exit_code: class.exit_code(),
            message,
        }
    }
}
