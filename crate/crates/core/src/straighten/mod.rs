//! Single-scale straightening: replace an arc by one that `ι`-follows it,
//! shares its endpoints and has no long subarcs between close points.
//!
//! For `d(a, b) > ι/L` the arc is discretized against an `r`-net,
//! `r = ι/(20L)`, seeded with both endpoints; a max-jump chain through the
//! members' blobs skips every doubled-back section, and the new arc is
//! threaded through the chain's blobs.

mod assemble;
mod chain;
mod discretize;
mod follow;
mod star;

use serde::Serialize;

pub use assemble::{assemble_arc, Assembly};
pub use chain::{extract_chain, BlobChain, ChainReport};
pub use discretize::{discretize_arc, Discretization};
pub use follow::{verify_follows, CoarseMap, FollowsReport, FollowsWitness};
pub use star::{check_star, StarReport};

use crate::error::{Error, Result};
use crate::metric::{linear_path, DiscreteArc, MetricSpace};
use crate::net::{build_blobs_linked, build_net, color_net, verify_blob_properties, BlobReport};
use crate::scalar::{lit, to_f64, LogValue, Scalar};

/// Target for the long-subarc constant: `10L / 20L`.
pub const BIG_S: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StraightenParams<T> {
    /// Linear-connectivity constant the construction is scaled by.
    pub l_hat: T,
    /// Re-check the blob properties on every run.
    pub verify_blobs: bool,
}

impl<T: Scalar> StraightenParams<T> {
    pub fn new(l_hat: T) -> Self {
        Self { l_hat, verify_blobs: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StraighteningCase {
    /// `a = b`.
    Trivial,
    /// `d(a, b) <= ι/L`: a single linear path.
    Short,
    /// The net and blob-chain construction.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarConstants<T> {
    /// `δ/(20L)` with the theoretical gap constant.
    pub s_theoretical: LogValue,
    /// `δ_eff/(20L)`; in the short case, `h/ι`.
    pub s_guaranteed: T,
    pub s_achieved: T,
    pub big_s_theoretical: T,
    pub big_s_achieved: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdicts<T> {
    pub endpoints: bool,
    pub follows: FollowsReport<T>,
    pub star: StarReport<T>,
    pub blobs: Option<BlobReport<T>>,
    pub discretization: Option<String>,
    pub chain: Option<ChainReport>,
    pub segment_collision: Option<(usize, usize, usize)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub net_size: usize,
    pub color_count: usize,
    pub bridges: usize,
    pub handoffs: usize,
    /// Handoff pairs further apart than `2r`.
    pub extra_links: usize,
    pub budget_violations: usize,
    pub anomalies: usize,
    pub excised_loops: usize,
    pub pieces: usize,
    pub chain_jumps: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StraighteningResult<T> {
    pub case: StraighteningCase,
    pub iota: T,
    pub l_hat: T,
    /// Net radius `ι/(20L)` in the full case.
    pub radius: Option<T>,
    pub arc: DiscreteArc,
    /// From the new arc to the input arc.
    pub follow_map: CoarseMap<T>,
    pub z_seq: Vec<usize>,
    pub discretization: Option<Discretization<T>>,
    pub chain: Option<BlobChain>,
    pub gap_delta_theoretical: Option<LogValue>,
    pub gap_delta_effective: Option<T>,
    pub constants: StarConstants<T>,
    pub verdicts: Verdicts<T>,
    pub diagnostics: Diagnostics,
}

impl<T: Scalar> StraighteningResult<T> {
    /// Every verified guarantee holds.
    pub fn passed(&self) -> bool {
        let v = &self.verdicts;
        v.endpoints
            && v.follows.passed
            && v.star.passed
            && v.blobs.as_ref().is_none_or(|b| b.passed())
            && v.discretization.is_none()
            && v.chain.as_ref().is_none_or(|c| c.passed())
            && v.segment_collision.is_none()
            && self.constants.s_achieved >= self.constants.s_guaranteed
    }

    /// First failed verdict, for error reports.
    pub fn failure(&self) -> Option<String> {
        let v = &self.verdicts;
        if !v.endpoints {
            return Some("endpoints changed".into());
        }
        if !v.follows.passed {
            return Some(match v.follows.witness {
                Some(w) => format!("follows check failed at x = {}, y = {}, z = {}", w.x, w.y, w.z),
                None => "follow map does not send endpoints to endpoints".into(),
            });
        }
        if !v.star.passed {
            let (x, y) = v.star.witness.expect("failed star check has a witness");
            return Some(format!("long subarc between close positions {x} and {y}"));
        }
        if let Some(b) = v.blobs.as_ref().filter(|b| !b.passed()) {
            return Some(format!("blob properties failed: {b:?}"));
        }
        if let Some(d) = &v.discretization {
            return Some(format!("discretization: {d}"));
        }
        if let Some(c) = v.chain.as_ref().filter(|c| !c.passed()) {
            return Some(format!("chain: {c:?}"));
        }
        if let Some((i, j, p)) = v.segment_collision {
            return Some(format!("segments {i} and {j} meet at {p}"));
        }
        None
    }
}

/// `20 L h`, the smallest scale the construction accepts.
pub fn scale_floor<T: Scalar>(space: &MetricSpace<T>, l_hat: T) -> T {
    lit::<T>(20.0) * l_hat * space.resolution()
}

/// Handoff pairs `(x_i, x_{i+1})`, which [`build_blobs_linked`] joins so
/// that consecutive blobs of the discretization still meet.
pub fn handoff_links<T: Scalar>(disc: &Discretization<T>) -> Vec<(usize, usize)> {
    disc.handoffs.iter().map(|&i| (disc.x_seq[i], disc.x_seq[i + 1])).collect()
}

/// Composes each new-arc position with the source position of the chain
/// member its segment belongs to; the last segment goes to `b`.
pub fn build_follow_map<T: Scalar>(
    assembly: &Assembly,
    chain: &BlobChain,
    disc: &Discretization<T>,
    source: &DiscreteArc,
    iota: T,
) -> CoarseMap<T> {
    let assignment = assembly
        .labels
        .iter()
        .map(|&i| disc.y_seq[chain.r_seq[i].min(disc.y_seq.len() - 1)])
        .collect();
    CoarseMap {
        assignment,
        target_len: source.len(),
        displacement_bound: iota,
    }
}

pub fn straighten<T: Scalar>(space: &MetricSpace<T>, params: &StraightenParams<T>, arc: &DiscreteArc, iota: T) -> Result<StraighteningResult<T>> {
    let l_hat = params.l_hat;
    if !(iota > T::zero()) || !iota.is_finite() {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {iota}")));
    }
    if !(l_hat >= T::one()) || !l_hat.is_finite() {
        return Err(Error::InvalidParameter(format!("L_hat must be at least 1, got {l_hat}")));
    }
    let (a, b) = (arc.a(), arc.b());
    space.check_index(a)?;
    space.check_index(b)?;
    let floor = scale_floor(space, l_hat);
    if space.len() > 1 && iota < floor {
        return Err(Error::ScaleFloor {
            iota: to_f64(iota),
            floor: to_f64(floor),
        });
    }
    let half: T = lit(BIG_S);
    let resolution_s = if space.len() > 1 { space.resolution() / iota } else { T::zero() };

    if a == b {
        let out = DiscreteArc::single(a);
        let map = CoarseMap {
            assignment: vec![0],
            target_len: arc.len(),
            displacement_bound: iota,
        };
        return Ok(finish(space, arc, out, map, iota, l_hat, StraighteningCase::Trivial, resolution_s, half, None));
    }

    if space.dist(a, b) <= iota / l_hat {
        let out = linear_path(space, a, b)?.arc;
        let mut assignment = vec![0; out.len()];
        *assignment.last_mut().expect("non-empty") = arc.len() - 1;
        let map = CoarseMap {
            assignment,
            target_len: arc.len(),
            displacement_bound: iota,
        };
        return Ok(finish(space, arc, out, map, iota, l_hat, StraighteningCase::Short, resolution_s, half, None));
    }

    let r = iota / (lit::<T>(20.0) * l_hat);
    let net = build_net(space, r, &[a, b])?;
    let disc = discretize_arc(space, arc, &net)?;
    let coloring = color_net(space, &net, lit::<T>(20.0) * l_hat * r);
    let family = build_blobs_linked(space, &net, &coloring, l_hat, &handoff_links(&disc))?;
    let chain = extract_chain(&family, &disc)?;
    let assembly = assemble_arc(space, &family, &chain, &disc, arc)?;
    let map = build_follow_map(&assembly, &chain, &disc, arc, iota);

    let s_guaranteed = family.gap_delta_effective / (lit::<T>(20.0) * l_hat);
    let full = FullParts {
        blobs: params.verify_blobs.then(|| verify_blob_properties(space, &family, &net, l_hat)),
        discretization: disc.verify(space, arc, &net).err(),
        chain: Some(chain.verify(&family, &disc)?),
        segment_collision: assembly.segment_collision(),
        s_theoretical: LogValue::from_ln(family.gap_delta_theoretical.ln - (20.0 * to_f64(l_hat)).ln()),
        gap: family.gap_delta_theoretical,
        gap_effective: family.gap_delta_effective,
        radius: r,
        diagnostics: Diagnostics {
            net_size: net.len(),
            color_count: coloring.color_count(),
            bridges: family.bridge_count(),
            handoffs: disc.handoffs.len(),
            extra_links: family.links.len(),
            budget_violations: family.budget_violations,
            anomalies: family.anomalies.len(),
            excised_loops: assembly.excised_loops,
            pieces: disc.pieces(),
            chain_jumps: chain.jumps(),
        },
        z_seq: assembly.z_seq.clone(),
        disc,
        chain_value: chain,
    };
    Ok(finish(space, arc, assembly.arc, map, iota, l_hat, StraighteningCase::Full, s_guaranteed, half, Some(full)))
}

struct FullParts<T> {
    blobs: Option<BlobReport<T>>,
    discretization: Option<String>,
    chain: Option<ChainReport>,
    segment_collision: Option<(usize, usize, usize)>,
    s_theoretical: LogValue,
    gap: LogValue,
    gap_effective: T,
    radius: T,
    diagnostics: Diagnostics,
    z_seq: Vec<usize>,
    disc: Discretization<T>,
    chain_value: BlobChain,
}

#[allow(clippy::too_many_arguments)]
fn finish<T: Scalar>(
    space: &MetricSpace<T>,
    source: &DiscreteArc,
    out: DiscreteArc,
    map: CoarseMap<T>,
    iota: T,
    l_hat: T,
    case: StraighteningCase,
    s_guaranteed: T,
    half: T,
    full: Option<FullParts<T>>,
) -> StraighteningResult<T> {
    let endpoints = out.a() == source.a() && out.b() == source.b();
    let follows = verify_follows(space, &out, source, &map, iota);
    let star = check_star(space, &out, iota, s_guaranteed, half);
    let constants = StarConstants {
        s_theoretical: full
            .as_ref()
            .map_or_else(|| LogValue::from_ln(to_f64(s_guaranteed).ln()), |f| f.s_theoretical),
        s_guaranteed,
        s_achieved: star.s_achieved,
        big_s_theoretical: half,
        big_s_achieved: star.big_s_achieved,
    };
    match full {
        None => StraighteningResult {
            case,
            iota,
            l_hat,
            radius: None,
            arc: out,
            follow_map: map,
            z_seq: vec![source.a()],
            discretization: None,
            chain: None,
            gap_delta_theoretical: None,
            gap_delta_effective: None,
            constants,
            verdicts: Verdicts {
                endpoints,
                follows,
                star,
                blobs: None,
                discretization: None,
                chain: None,
                segment_collision: None,
            },
            diagnostics: Diagnostics::default(),
        },
        Some(f) => StraighteningResult {
            case,
            iota,
            l_hat,
            radius: Some(f.radius),
            arc: out,
            follow_map: map,
            z_seq: f.z_seq,
            discretization: Some(f.disc),
            chain: Some(f.chain_value),
            gap_delta_theoretical: Some(f.gap),
            gap_delta_effective: Some(f.gap_effective),
            constants,
            verdicts: Verdicts {
                endpoints,
                follows,
                star,
                blobs: f.blobs,
                discretization: f.discretization,
                chain: f.chain,
                segment_collision: f.segment_collision,
            },
            diagnostics: f.diagnostics,
        },
    }
}
