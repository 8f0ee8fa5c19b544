use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{DiscreteArc, MetricSpace};
use crate::scalar::{count, lit, Scalar};

/// Largest space a generator will build.
pub const MAX_POINTS: usize = 20_000;

/// Lattice samples per unit length in comb spaces.
pub const COMB_SAMPLES_PER_UNIT: usize = 4;

/// A generated test space. None of the kinds is randomized, so a spec
/// determines its output completely.
///
/// String syntax: `grid2d:WxH`, `koch:LEVEL:SAMPLES`, `sierpinski:LEVEL`,
/// `comb:TEETH:LEN:SPACING`, `snowflake:N:ALPHA`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// Unit lattice `w x h`, 4-connected.
    Grid2d { w: usize, h: usize },
    /// Koch curve of the given level, each edge of length `samples_per_edge`
    /// sampled at unit spacing.
    Koch { level: u32, samples_per_edge: usize },
    /// Sierpinski gasket graph with unit edges.
    Sierpinski { level: u32 },
    /// Filled lattice rectangle of spacing `1/4`, `(teeth + 1) * spacing`
    /// wide and `tooth_len` tall, 4-connected, with a comb-shaped arc.
    Comb { teeth: usize, tooth_len: usize, spacing: usize },
    /// `n` unit-spaced collinear points under `|x - y|^alpha`.
    SnowflakeLine { n: usize, alpha: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedArc {
    pub name: String,
    pub arc: DiscreteArc,
}

#[derive(Debug, Clone)]
pub struct Generated<T> {
    pub spec: GeneratorSpec,
    pub space: MetricSpace<T>,
    /// Default arcs; the first is the primary one.
    pub arcs: Vec<NamedArc>,
}

impl<T> Generated<T> {
    pub fn arc(&self, name: &str) -> Option<&DiscreteArc> {
        self.arcs.iter().find(|a| a.name == name).map(|a| &a.arc)
    }

    pub fn default_arc(&self) -> Option<&DiscreteArc> {
        self.arcs.first().map(|a| &a.arc)
    }
}

impl GeneratorSpec {
    pub fn point_count(&self) -> Option<usize> {
        match *self {
            GeneratorSpec::Grid2d { w, h } => w.checked_mul(h),
            GeneratorSpec::Koch { level, samples_per_edge } => 4usize
                .checked_pow(level)
                .and_then(|e| e.checked_mul(samples_per_edge))
                .and_then(|n| n.checked_add(1)),
            GeneratorSpec::Sierpinski { level } => 3usize.checked_pow(level + 1).map(|t| (t + 3) / 2),
            GeneratorSpec::Comb { teeth, tooth_len, spacing } => {
                let k = COMB_SAMPLES_PER_UNIT;
                let nx = (teeth.checked_add(1)?).checked_mul(spacing)?.checked_mul(k)?.checked_add(1)?;
                let ny = tooth_len.checked_mul(k)?.checked_add(1)?;
                nx.checked_mul(ny)
            }
            GeneratorSpec::SnowflakeLine { n, .. } => Some(n),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(format!("{self}: {m}")));
        match *self {
            GeneratorSpec::Grid2d { w, h } if w == 0 || h == 0 => return bad("grid sides must be positive"),
            GeneratorSpec::Koch { samples_per_edge: 0, .. } => return bad("samples per edge must be positive"),
            GeneratorSpec::Comb { teeth, tooth_len, spacing } if teeth == 0 || tooth_len == 0 || spacing == 0 => {
                return bad("comb parameters must be positive")
            }
            GeneratorSpec::SnowflakeLine { n, alpha } => {
                if n == 0 {
                    return bad("need at least one point");
                }
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return bad("exponent must lie in (0, 1]");
                }
            }
            _ => {}
        }
        match self.point_count() {
            Some(n) if n <= MAX_POINTS => Ok(()),
            Some(n) => bad(&format!("{n} points exceed the limit of {MAX_POINTS}")),
            None => bad("size overflows"),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorSpec::Grid2d { w, h } => write!(f, "grid2d:{w}x{h}"),
            GeneratorSpec::Koch { level, samples_per_edge } => write!(f, "koch:{level}:{samples_per_edge}"),
            GeneratorSpec::Sierpinski { level } => write!(f, "sierpinski:{level}"),
            GeneratorSpec::Comb { teeth, tooth_len, spacing } => write!(f, "comb:{teeth}:{tooth_len}:{spacing}"),
            GeneratorSpec::SnowflakeLine { n, alpha } => write!(f, "snowflake:{n}:{alpha}"),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unrecognised generator spec '{s}'"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let int = |p: &str| p.parse::<usize>().map_err(|_| bad());
        let spec = match parts.as_slice() {
            ["grid2d", dims] => {
                let (w, h) = dims.split_once('x').ok_or_else(bad)?;
                GeneratorSpec::Grid2d { w: int(w)?, h: int(h)? }
            }
            ["koch", level, samples] => GeneratorSpec::Koch {
                level: level.parse().map_err(|_| bad())?,
                samples_per_edge: int(samples)?,
            },
            ["sierpinski", level] => GeneratorSpec::Sierpinski {
                level: level.parse().map_err(|_| bad())?,
            },
            ["comb", teeth, len, spacing] => GeneratorSpec::Comb {
                teeth: int(teeth)?,
                tooth_len: int(len)?,
                spacing: int(spacing)?,
            },
            ["snowflake", n, alpha] => GeneratorSpec::SnowflakeLine {
                n: int(n)?,
                alpha: alpha.parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

pub fn generate<T: Scalar>(spec: &GeneratorSpec) -> Result<Generated<T>> {
    spec.validate()?;
    let (space, arcs) = match *spec {
        GeneratorSpec::Grid2d { w, h } => grid2d(w, h)?,
        GeneratorSpec::Koch { level, samples_per_edge } => koch(level, samples_per_edge)?,
        GeneratorSpec::Sierpinski { level } => sierpinski(level)?,
        GeneratorSpec::Comb { teeth, tooth_len, spacing } => comb(teeth, tooth_len, spacing)?,
        GeneratorSpec::SnowflakeLine { n, alpha } => snowflake_line(n, lit(alpha))?,
    };
    let arcs = arcs
        .into_iter()
        .map(|(name, indices)| {
            Ok(NamedArc {
                name: name.to_string(),
                arc: DiscreteArc::new(&space, indices)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Generated {
        spec: *spec,
        space,
        arcs,
    })
}

type Built<T> = (MetricSpace<T>, Vec<(&'static str, Vec<usize>)>);

fn grid2d<T: Scalar>(w: usize, h: usize) -> Result<Built<T>> {
    let pts = (0..h).flat_map(|y| (0..w).map(move |x| vec![count::<T>(x), count::<T>(y)])).collect();
    let space = MetricSpace::euclidean(pts, Some(T::one()))?;
    let mut arcs = Vec::new();
    if w * h > 1 {
        let serpentine = (0..h)
            .flat_map(|y| {
                let row: Vec<usize> = (0..w).map(|x| y * w + x).collect();
                if y % 2 == 0 {
                    row
                } else {
                    row.into_iter().rev().collect()
                }
            })
            .collect();
        arcs.push(("serpentine", serpentine));
    }
    if w > 1 {
        arcs.push(("row", (0..w).collect()));
    }
    Ok((space, arcs))
}

fn koch<T: Scalar>(level: u32, samples: usize) -> Result<Built<T>> {
    // turtle walk over the level-`level` curve: turns of +60, -120, +60
    let mut turns: Vec<i32> = Vec::new();
    for _ in 0..level {
        // F -> F+F--F+F: every edge gains the motif, old turns sit between
        let next = std::iter::once(vec![1, -2, 1])
            .chain(turns.iter().map(|&t| vec![t, 1, -2, 1]))
            .flatten()
            .collect();
        turns = next;
    }
    let step = |heading: i32| {
        let angle = f64::from(heading.rem_euclid(6)) * std::f64::consts::FRAC_PI_3;
        (angle.cos(), angle.sin())
    };
    let mut pts: Vec<Vec<T>> = Vec::with_capacity((turns.len() + 1) * samples + 1);
    let (mut x, mut y) = (0.0f64, 0.0f64);
    let mut heading = 0;
    pts.push(vec![lit(x), lit(y)]);
    for edge in 0..=turns.len() {
        if edge > 0 {
            heading += turns[edge - 1];
        }
        let (dx, dy) = step(heading);
        let (x0, y0) = (x, y);
        for k in 1..=samples {
            let t = k as f64;
            pts.push(vec![lit(x0 + t * dx), lit(y0 + t * dy)]);
        }
        x = x0 + samples as f64 * dx;
        y = y0 + samples as f64 * dy;
    }
    let n = pts.len();
    let space = MetricSpace::euclidean(pts, None)?;
    Ok((space, vec![("polyline", (0..n).collect())]))
}

fn sierpinski<T: Scalar>(level: u32) -> Result<Built<T>> {
    // unit triangles (a, b), (a + 1, b), (a, b + 1) in lattice coordinates
    let mut corners: Vec<(usize, usize)> = vec![(0, 0)];
    for l in 0..level {
        let s = 1usize << l;
        corners = corners
            .iter()
            .flat_map(|&(a, b)| [(a, b), (a + s, b), (a, b + s)])
            .collect();
    }
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for &(a, b) in &corners {
        let tri = [(a, b), (a + 1, b), (a, b + 1)];
        vertices.extend(tri);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            edges.insert((tri[i].min(tri[j]), tri[i].max(tri[j])));
        }
    }
    let index: BTreeMap<(usize, usize), usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let weighted = edges.iter().map(|(u, v)| (index[u], index[v], T::one())).collect();
    let space = MetricSpace::from_graph(index.len(), weighted)?;
    let side = 1usize << level;
    let base = (0..=side).map(|i| index[&(i, 0)]).collect();
    let detour = (0..=side)
        .map(|j| index[&(0, j)])
        .chain((1..=side).map(|i| index[&(i, side - i)]))
        .collect();
    Ok((space, vec![("detour", detour), ("base", base)]))
}

fn comb<T: Scalar>(teeth: usize, tooth_len: usize, spacing: usize) -> Result<Built<T>> {
    let k = COMB_SAMPLES_PER_UNIT;
    let nx = (teeth + 1) * spacing * k + 1;
    let ny = tooth_len * k + 1;
    let h = lit::<T>(1.0 / k as f64);
    let at = |i: usize, j: usize| j * nx + i;
    let pts = (0..ny)
        .flat_map(|j| (0..nx).map(move |i| vec![count::<T>(i) * h, count::<T>(j) * h]))
        .collect();
    let space = MetricSpace::euclidean(pts, Some(h))?;
    let tooth_columns: Vec<usize> = (1..=teeth).map(|t| t * spacing * k).collect();
    let mut hairpin = Vec::new();
    let mut i = 0;
    for &c in &tooth_columns {
        hairpin.extend((i..c).map(|x| at(x, 0)));
        hairpin.extend((0..ny).map(|j| at(c, j)));
        hairpin.extend((0..ny).rev().map(|j| at(c + 1, j)));
        i = c + 2;
    }
    hairpin.extend((i..nx).map(|x| at(x, 0)));
    let base = (0..nx).map(|x| at(x, 0)).collect();
    Ok((space, vec![("hairpin", hairpin), ("base", base)]))
}

fn snowflake_line<T: Scalar>(n: usize, alpha: T) -> Result<Built<T>> {
    let pts = (0..n).map(|i| vec![count::<T>(i)]).collect();
    let space = MetricSpace::snowflake(pts, alpha, None)?;
    let arcs = if n > 1 { vec![("line", (0..n).collect())] } else { Vec::new() };
    Ok((space, arcs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{estimate_linear_connectivity, Sampling};

    fn gen(s: &str) -> Generated<f64> {
        generate(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["grid2d:32x32", "koch:3:16", "comb:5:40:3", "sierpinski:4", "snowflake:100:0.5"] {
            let spec: GeneratorSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("grid2d:3".parse::<GeneratorSpec>().is_err());
        assert!("torus:3".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn single_cell_grid_has_no_arcs() {
        let g = gen("grid2d:1x1");
        assert_eq!(g.space.len(), 1);
        assert!(g.arcs.is_empty());
    }

    #[test]
    fn small_grid_is_root_two_connected() {
        let g = gen("grid2d:8x8");
        assert_eq!(g.space.len(), 64);
        let l = estimate_linear_connectivity(&g.space, Sampling::Exhaustive).unwrap();
        assert!(l.l_hat <= 2f64.sqrt() + 1e-9);
        assert_eq!(g.default_arc().unwrap().len(), 64);
    }

    #[test]
    fn koch_sizes_and_resolution() {
        let g = gen("koch:2:4");
        assert_eq!(g.space.len(), 16 * 4 + 1);
        assert!((g.space.resolution() - 1.0).abs() < 1e-9);
        let arc = g.default_arc().unwrap();
        let end = g.space.coords(arc.b()).unwrap();
        assert!((end[0] - 36.0).abs() < 1e-9 && end[1].abs() < 1e-9);
    }

    #[test]
    fn sierpinski_counts_and_corner_distances() {
        let g = gen("sierpinski:3");
        assert_eq!(g.space.len(), 42);
        let base = g.arc("base").unwrap();
        let detour = g.arc("detour").unwrap();
        assert_eq!((base.a(), base.b()), (detour.a(), detour.b()));
        assert_eq!(g.space.dist(base.a(), base.b()), 8.0);
        assert_eq!(detour.len(), 17);
    }

    #[test]
    fn comb_hairpin_visits_every_tooth() {
        let g = gen("comb:3:20:2");
        assert_eq!(g.space.len(), 33 * 81);
        let hairpin = g.arc("hairpin").unwrap();
        assert_eq!(hairpin.len(), 33 + 3 * (2 * 81 - 2));
        assert_eq!(g.space.resolution(), 0.25);
        assert_eq!(g.space.coords(hairpin.b()).unwrap(), &[8.0, 0.0]);
    }

    #[test]
    fn oversized_specs_are_refused() {
        assert!(generate::<f64>(&"grid2d:200x200".parse().unwrap()).is_err());
        assert!(generate::<f64>(&"snowflake:10:1.5".parse().unwrap()).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen("koch:3:8");
        let b = gen("koch:3:8");
        assert_eq!(a.space, b.space);
        assert_eq!(a.arcs, b.arcs);
    }
}
