#![allow(dead_code)]

pub mod brute;

use std::collections::BTreeMap;

use quasiarc::net::{Coloring, Net};
use quasiarc::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use brute::Brute;

/// A jittered planar grid of at most 40 points with a self-avoiding walk.
pub struct MicroConfig {
    pub seed: u64,
    pub points: Vec<Vec<f64>>,
    pub space: Space,
    pub arc: DiscreteArc,
}

pub fn micro_config(seed: u64) -> MicroConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = rng.gen_range(3..=8usize);
    let h = rng.gen_range(2..=(40 / w).min(6));
    let jitter = rng.gen_range(0.0..0.3);
    let points: Vec<Vec<f64>> = (0..w * h)
        .map(|i| vec![(i % w) as f64 + rng.gen_range(-jitter..=jitter), (i / w) as f64 + rng.gen_range(-jitter..=jitter)])
        .collect();
    let space = Space::euclidean(points.clone(), Some(1.7)).expect("jittered grid is a valid space");
    let n = space.len();
    let mut walk = vec![rng.gen_range(0..n)];
    let target = rng.gen_range(3..=n);
    while walk.len() < target {
        let here = *walk.last().unwrap();
        let mut next: Vec<usize> = space.neighbors(here).iter().copied().filter(|v| !walk.contains(v)).collect();
        if next.is_empty() {
            break;
        }
        next.shuffle(&mut rng);
        walk.push(next[0]);
    }
    let arc = DiscreteArc::new(&space, walk).expect("walk is an arc");
    MicroConfig { seed, points, space, arc }
}

/// One verdict from each side.
#[derive(Debug, Default)]
pub struct Agreement {
    pub compared: usize,
    pub positive: usize,
    pub negative: usize,
    pub disagreements: Vec<String>,
}

impl Agreement {
    fn record(&mut self, what: &str, seed: u64, pipeline: bool, oracle: bool) {
        self.compared += 1;
        if oracle {
            self.positive += 1;
        } else {
            self.negative += 1;
        }
        if pipeline != oracle {
            self.disagreements.push(format!("seed {seed}: {what} pipeline={pipeline} oracle={oracle}"));
        }
    }
}

/// Runs every pipeline check on one configuration, honest and corrupted,
/// against the brute-force oracle.
pub fn compare_config(cfg: &MicroConfig, out: &mut Agreement) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9);
    let space = &cfg.space;
    let brute = Brute::new(&cfg.points);
    let seed = cfg.seed;
    let l = estimate_linear_connectivity(space, Sampling::Exhaustive).expect("connected").l_hat;
    let (a, b) = (cfg.arc.a(), cfg.arc.b());

    // nets, honest then with a member dropped or a close point added
    let r = rng.gen_range(0.8..2.5);
    let seeds = if brute.d[a][b] >= r { vec![a, b] } else { vec![a] };
    let net = build_net(space, r, &seeds).expect("seeds separated");
    let mut nets = vec![net.clone()];
    let mut members = net.members().to_vec();
    if members.len() > 1 {
        members.remove(rng.gen_range(0..members.len()));
        nets.push(Net::from_parts(members, r, Vec::new()));
    }
    let outsider = (0..space.len()).find(|p| !net.contains(*p)).unwrap_or(0);
    let mut grown = net.members().to_vec();
    grown.push(outsider);
    nets.push(Net::from_parts(grown, r, Vec::new()));
    for n in &nets {
        let rep = n.verify(space);
        let (sep, max) = brute.net_ok(n.members(), r);
        out.record("net separation", seed, rep.separated, sep);
        out.record("net maximality", seed, rep.maximal, max);
    }

    // colouring
    let target = 20.0 * l * r;
    let coloring = color_net(space, &net, target);
    let mut colorings = vec![coloring.clone()];
    if net.len() > 1 {
        let mut labels: BTreeMap<usize, usize> = coloring.labels().clone();
        let x = net.members()[0];
        let y = net.members()[1 + rng.gen_range(0..net.len() - 1)];
        labels.insert(y, labels[&x]);
        colorings.push(Coloring::from_labels(labels, target));
    }
    for c in &colorings {
        let rep = c.verify(space, &net);
        out.record("coloring separation", seed, rep.separated, brute.coloring_ok(net.members(), |m| c.label(m), target));
    }

    // blobs, honest then with one point removed from one blob
    let (bnet, _, family) = blob_family_at(space, r, &seeds, l).expect("family");
    let mut families = vec![family.clone()];
    let owners: Vec<usize> = family.blobs.keys().copied().collect();
    let victim = owners[rng.gen_range(0..owners.len())];
    let mut corrupted = family.clone();
    let blob = corrupted.blobs.get_mut(&victim).unwrap();
    if blob.points.len() > 1 {
        let k = rng.gen_range(0..blob.points.len());
        let gone = blob.points.remove(k);
        blob.internal_edges.retain(|&(u, v)| u != gone && v != gone);
        families.push(corrupted);
    }
    let mut shrunk = family.clone();
    shrunk.gap_delta_effective *= 4.0;
    families.push(shrunk);
    for f in &families {
        let rep = verify_blob_properties(space, f, &bnet, l);
        let lists: Vec<(usize, Vec<usize>)> = f.blobs.iter().map(|(&o, b)| (o, b.points.clone())).collect();
        let (p1, p2, p3) = brute.blob_props(bnet.members(), &lists, r, l, f.gap_delta_effective);
        out.record("blob property (1)", seed, rep.neighbors_included.passed, p1);
        out.record("blob property (2)", seed, rep.diameter_bound.passed, p2);
        out.record("blob property (3')", seed, rep.gap.passed, p3);
    }

    // (*) on the raw walk, which often doubles back
    let iota = rng.gen_range(1.0..6.0);
    let s_ref = rng.gen_range(0.05..0.6);
    let rep = check_star(space, &cfg.arc, iota, s_ref, 0.5);
    out.record("(*) on input", seed, rep.passed, brute.star_ok(cfg.arc.indices(), iota, s_ref, 0.5));

    // straightening output: (*) and follows, then a corrupted map
    let floor = straighten::scale_floor(space, l);
    let iota = floor * rng.gen_range(1.0..2.5);
    if let Ok(res) = straighten(space, &StraightenParams::new(l), &cfg.arc, iota) {
        let s = res.constants.s_guaranteed;
        let rep = check_star(space, &res.arc, iota, s, 0.5);
        out.record("(*) on output", seed, rep.passed, brute.star_ok(res.arc.indices(), iota, s, 0.5));
        let eps_values = [iota, iota * rng.gen_range(0.05..0.5)];
        for eps in eps_values {
            let rep = verify_follows(space, &res.arc, &cfg.arc, &res.follow_map, eps);
            let ok = brute.follows_ok(res.arc.indices(), cfg.arc.indices(), &res.follow_map.assignment, eps);
            out.record("follows", seed, rep.passed, ok);
        }
    }
    let mut map = CoarseMap::<f64>::identity(cfg.arc.len());
    let last = cfg.arc.len() - 1;
    for q in map.assignment.iter_mut().take(last).skip(1) {
        *q = rng.gen_range(0..=last);
    }
    let eps = rng.gen_range(0.5..4.0);
    let rep = verify_follows(space, &cfg.arc, &cfg.arc, &map, eps);
    out.record("follows (scrambled map)", seed, rep.passed, brute.follows_ok(cfg.arc.indices(), cfg.arc.indices(), &map.assignment, eps));
}

pub const MICRO_CONFIGS: u64 = 60;

pub fn run_oracle_suite() -> Agreement {
    let mut out = Agreement::default();
    for seed in 0..MICRO_CONFIGS {
        compare_config(&micro_config(seed), &mut out);
    }
    out
}
