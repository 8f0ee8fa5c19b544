//! `quasiarc`: profile a finite space, straighten an arc at one scale, or
//! iterate the straightening over shrinking scales; writes a JSON report
//! and, for planar spaces, SVG pictures.

mod report;
mod source;
mod svg;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quasiarc::metric::Sampling;
use quasiarc::straighten::scale_floor;
use quasiarc::{
    estimate_doubling, estimate_linear_connectivity, iterate, straighten, DeltaRule, Depth, Error, ErrorClass,
    IterationConfig, StraightenParams,
};

use report::{CommandEcho, IterateSummary, Outcome, OutcomeClass, ProfileSummary, RunReport, SpaceSummary, StraightenSummary};
use source::{load_source, resolve_arc, Source};

/// Largest space the `--exhaustive` estimators accept.
const EXHAUSTIVE_LIMIT: usize = 2000;
/// Sources or centres visited by the default seeded estimators.
const SAMPLE_COUNT: usize = 256;

#[derive(Parser, Debug)]
#[command(name = "quasiarc", version, about = "Straighten arcs into quasi-arcs in finite metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the linear-connectivity and doubling constants.
    Profile(Common),
    /// Straighten an arc at a single scale.
    Straighten {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        arc: ArcArgs,
        /// Scale ι; must be at least the floor 20·L·h.
        #[arg(long)]
        iota: f64,
    },
    /// Straighten repeatedly at scales ε·δⁿ.
    Iterate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        arc: ArcArgs,
        #[arg(long)]
        epsilon: f64,
        /// Number of steps; runs down to the scale floor when omitted.
        #[arg(long)]
        depth: Option<usize>,
        /// Fixed scale ratio δ in (0, 1); overrides --delta-rule.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, value_enum, default_value_t = RuleArg::Guaranteed)]
        delta_rule: RuleArg,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Space file (.json or .csv) or generator spec such as grid2d:32x32.
    #[arg(long)]
    space: String,
    /// Seed for the sampled estimators.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Visit every point in the estimators (spaces up to 2000 points).
    #[arg(long)]
    exhaustive: bool,
    /// Use this L instead of the estimate.
    #[arg(long)]
    l_hat: Option<f64>,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG path (planar spaces only); iterate writes one numbered file per step.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ArcArgs {
    /// `default`, a generated arc name, or a JSON file of point indices.
    #[arg(long, default_value = "default")]
    arc: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    Guaranteed,
    Achieved,
}

struct Run {
    report: RunReport,
    timer: Instant,
    stage: Instant,
}

impl Run {
    fn lap(&mut self, name: &'static str) {
        let now = Instant::now();
        self.report.timing_ms.insert(name, (now - self.stage).as_secs_f64() * 1e3);
        self.stage = now;
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, echo) = echo(&cli.command);
    let start = Instant::now();
    let mut run = Run {
        report: RunReport {
            schema: report::SCHEMA_VERSION,
            command: echo,
            space: None,
            profile: None,
            straighten: None,
            iterate: None,
            outcome: Outcome::new(OutcomeClass::Pass, None),
            timing_ms: BTreeMap::new(),
        },
        timer: start,
        stage: start,
    };
    let outcome = match execute(&cli.command, common, &mut run) {
        Ok(o) => o,
        Err(e) => {
            let class = match e.class() {
                ErrorClass::Hypothesis => OutcomeClass::Hypothesis,
                ErrorClass::Usage => OutcomeClass::Usage,
                ErrorClass::Verification => OutcomeClass::Verification,
            };
            Outcome::new(class, Some(e.to_string()))
        }
    };
    if let Some(m) = &outcome.message {
        eprintln!("quasiarc: {m}");
    }
    let code = outcome.exit_code;
    run.report.outcome = outcome;
    run.report.timing_ms.insert("total", run.timer.elapsed().as_secs_f64() * 1e3);
    if let Err(e) = write_report(&run.report, common.out.as_deref()) {
        eprintln!("quasiarc: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}

fn echo(cmd: &Command) -> (&Common, CommandEcho) {
    let base = |name, c: &Common| CommandEcho {
        name,
        space: c.space.clone(),
        arc: None,
        iota: None,
        epsilon: None,
        depth: None,
        delta: None,
        l_hat: c.l_hat,
        seed: c.seed,
        exhaustive: c.exhaustive,
    };
    match cmd {
        Command::Profile(c) => (c, base("profile", c)),
        Command::Straighten { common, arc, iota } => {
            let mut e = base("straighten", common);
            e.arc = Some(arc.arc.clone());
            e.iota = Some(*iota);
            (common, e)
        }
        Command::Iterate {
            common,
            arc,
            epsilon,
            depth,
            delta,
            delta_rule,
        } => {
            let mut e = base("iterate", common);
            e.arc = Some(arc.arc.clone());
            e.epsilon = Some(*epsilon);
            e.depth = *depth;
            e.delta = Some(match delta {
                Some(d) => format!("fixed:{d}"),
                None => format!("{delta_rule:?}").to_lowercase(),
            });
            (common, e)
        }
    }
}

fn execute(cmd: &Command, common: &Common, run: &mut Run) -> quasiarc::Result<Outcome> {
    let source = load_source(&common.space)?;
    run.report.space = Some(SpaceSummary::of(&source.space));
    run.lap("load");
    let l_hat = estimate_profile(&source, common, run)?;
    match cmd {
        Command::Profile(_) => Ok(Outcome::new(OutcomeClass::Pass, None)),
        Command::Straighten { arc, iota, .. } => {
            let arc = resolve_arc(&source, &arc.arc)?;
            let space = &source.space;
            let res = straighten(space, &StraightenParams::new(l_hat), &arc, *iota)?;
            run.lap("straighten");
            let summary = StraightenSummary::new(space, &arc, &res, scale_floor(space, l_hat));
            let failure = res.failure().or_else(|| (!res.passed()).then(|| "guarantee constants not met".to_string()));
            run.report.straighten = Some(summary);
            if let Some(path) = &common.svg {
                let title = format!("{} straightened at {iota}", source.label);
                write_svg(space, &arc, Some(&res.arc), &title, path)?;
                run.lap("svg");
            }
            Ok(verdict_outcome(failure, &run.report))
        }
        Command::Iterate {
            arc,
            epsilon,
            depth,
            delta,
            delta_rule,
            ..
        } => {
            let arc = resolve_arc(&source, &arc.arc)?;
            let space = &source.space;
            let mut cfg = IterationConfig::new(*epsilon, l_hat);
            cfg.max_depth = depth.map_or(Depth::UntilFloor, Depth::Steps);
            cfg.delta = match (delta, delta_rule) {
                (Some(d), _) => DeltaRule::Fixed(*d),
                (None, RuleArg::Guaranteed) => DeltaRule::Guaranteed,
                (None, RuleArg::Achieved) => DeltaRule::Achieved,
            };
            let trace = iterate(space, &arc, &cfg)?;
            run.lap("iterate");
            let summary = IterateSummary::new(space, &trace);
            let failure = (!trace.passed()).then(|| iterate_failure(&summary));
            run.report.iterate = Some(summary);
            if let Some(path) = &common.svg {
                if trace.depth() == 0 {
                    write_svg(space, &arc, None, &format!("{} at depth 0", source.label), &svg::numbered(path, 0))?;
                }
                for (n, pair) in trace.arcs.windows(2).enumerate() {
                    let title = format!("{} step {} at {}", source.label, n + 1, trace.scales[n]);
                    write_svg(space, &pair[0], Some(&pair[1]), &title, &svg::numbered(path, n + 1))?;
                }
                run.lap("svg");
            }
            Ok(verdict_outcome(failure, &run.report))
        }
    }
}

fn estimate_profile(source: &Source, common: &Common, run: &mut Run) -> quasiarc::Result<f64> {
    let n = source.space.len();
    let sampling = if common.exhaustive {
        if n > EXHAUSTIVE_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "--exhaustive is limited to {EXHAUSTIVE_LIMIT} points, the space has {n}"
            )));
        }
        Sampling::Exhaustive
    } else {
        Sampling::Seeded {
            count: SAMPLE_COUNT,
            seed: common.seed,
        }
    };
    let l = estimate_linear_connectivity(&source.space, sampling)?;
    let doubling = estimate_doubling(&source.space, sampling, None);
    run.report.profile = Some(ProfileSummary::new(&l, &doubling, common.l_hat));
    run.lap("profile");
    Ok(common.l_hat.unwrap_or(l.l_hat))
}

fn verdict_outcome(failure: Option<String>, report: &RunReport) -> Outcome {
    match failure {
        None => Outcome::new(OutcomeClass::Pass, None),
        Some(f) => {
            // dump the failing verdicts with their witnesses
            let detail = report
                .straighten
                .as_ref()
                .map(|s| serde_json::to_string(&s.verdicts))
                .or_else(|| report.iterate.as_ref().map(|i| serde_json::to_string(&(&i.delta, &i.composed_follows, &i.cauchy))))
                .and_then(|r| r.ok())
                .unwrap_or_default();
            eprintln!("quasiarc: witness dump: {detail}");
            Outcome::new(OutcomeClass::Verification, Some(format!("verification failed: {f}")))
        }
    }
}

fn iterate_failure(s: &IterateSummary) -> String {
    let mut parts = Vec::new();
    if !s.composed_follows.passed {
        parts.push("composed map does not follow");
    }
    if !s.composed_within_series_bound {
        parts.push("composed displacement above the series bound");
    }
    if !s.delta.holds {
        parts.push("delta above the bound its run achieved");
    }
    if !s.lambda_within_bound {
        parts.push("lambda above its bound");
    }
    if !s.cauchy.passed {
        parts.push("Cauchy bound violated");
    }
    if !s.endpoints_constant {
        parts.push("endpoints moved");
    }
    parts.join(", ")
}

fn write_svg(space: &quasiarc::Space, input: &quasiarc::DiscreteArc, output: Option<&quasiarc::DiscreteArc>, title: &str, path: &Path) -> quasiarc::Result<()> {
    match svg::render(space, input, output, title) {
        Some(s) => std::fs::write(path, s)?,
        None => eprintln!("quasiarc: {} is not a planar coordinate space; no SVG written", space.kind().name()),
    }
    Ok(())
}

fn write_report(report: &RunReport, out: Option<&Path>) -> std::io::Result<()> {
    let mut json = serde_json::to_string_pretty(report).map_err(std::io::Error::other)?;
    json.push('\n');
    match out {
        Some(p) => std::fs::write(p, json),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}
