use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{DiscreteArc, MetricKind, MetricSpace};
use crate::scalar::Scalar;

/// On-disk form of a space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile<T> {
    pub metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<T>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<T>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize, T)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_radius: Option<T>,
}

impl<T: Scalar> SpaceFile<T> {
    pub fn from_space(space: &MetricSpace<T>) -> Self {
        let n = space.len();
        let points = || Some((0..n).map(|i| space.coords(i).expect("coordinate space").to_vec()).collect());
        let mut file = SpaceFile {
            metric: space.kind().name().to_string(),
            alpha: None,
            points: None,
            matrix: None,
            edges: None,
            step_radius: Some(space.step_radius()),
        };
        match space.kind() {
            MetricKind::Euclidean => file.points = points(),
            MetricKind::Snowflake { alpha } => {
                file.alpha = Some(alpha);
                file.points = points();
            }
            MetricKind::Matrix => {
                let m = space.matrix().expect("matrix space");
                file.matrix = Some(m.chunks(n.max(1)).take(n).map(<[T]>::to_vec).collect());
            }
            MetricKind::Graph => {
                file.edges = space.edges().map(<[_]>::to_vec);
                file.step_radius = None;
            }
        }
        file
    }

    pub fn into_space(self) -> Result<MetricSpace<T>> {
        let missing = |what: &str| Error::InvalidSpace(format!("{} space needs '{what}'", self.metric));
        match self.metric.as_str() {
            "euclidean" => MetricSpace::euclidean(self.points.clone().ok_or_else(|| missing("points"))?, self.step_radius),
            "snowflake" => MetricSpace::snowflake(
                self.points.clone().ok_or_else(|| missing("points"))?,
                self.alpha.ok_or_else(|| missing("alpha"))?,
                self.step_radius,
            ),
            "matrix" => MetricSpace::from_matrix(self.matrix.clone().ok_or_else(|| missing("matrix"))?, self.step_radius),
            "graph" => {
                let edges = self.edges.clone().ok_or_else(|| missing("edges"))?;
                let n = edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0);
                MetricSpace::from_graph(n, edges)
            }
            other => Err(Error::InvalidSpace(format!("unknown metric '{other}'"))),
        }
    }
}

/// Reads a space from JSON, or from CSV coordinates (one point per row,
/// no header) when the extension is `.csv`.
pub fn load_space<T: Scalar>(path: impl AsRef<Path>) -> Result<MetricSpace<T>> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_path(path)?;
        let points = reader.deserialize().collect::<std::result::Result<Vec<Vec<T>>, _>>()?;
        return MetricSpace::euclidean(points, None);
    }
    let file: SpaceFile<T> = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    file.into_space()
}

pub fn save_space<T: Scalar>(space: &MetricSpace<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &SpaceFile::from_space(space))?;
    w.write_all(b"\n")?;
    Ok(())
}

/// An arc file is a JSON array of point indices.
pub fn load_arc<T: Scalar>(space: &MetricSpace<T>, path: impl AsRef<Path>) -> Result<DiscreteArc> {
    let indices: Vec<usize> = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    DiscreteArc::new(space, indices)
}

pub fn save_arc(arc: &DiscreteArc, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut w, arc)?;
    w.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate, GeneratorSpec};

    #[test]
    fn generated_spaces_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for spec in ["grid2d:4x3", "sierpinski:2", "snowflake:12:0.5"] {
            let g = generate::<f64>(&spec.parse::<GeneratorSpec>().unwrap()).unwrap();
            let path = dir.path().join("space.json");
            save_space(&g.space, &path).unwrap();
            assert_eq!(load_space::<f64>(&path).unwrap(), g.space, "{spec}");
        }
    }

    #[test]
    fn matrix_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec![vec![0.0, 0.1, 0.3], vec![0.1, 0.0, 0.25], vec![0.3, 0.25, 0.0]];
        let space = MetricSpace::from_matrix(rows, None).unwrap();
        let path = dir.path().join("m.json");
        save_space(&space, &path).unwrap();
        let back = load_space::<f64>(&path).unwrap();
        assert_eq!(back.matrix(), space.matrix());
        assert_eq!(back, space);
    }

    #[test]
    fn asymmetric_matrix_is_rejected_with_indices() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"metric": "matrix", "matrix": [[0, 1, 2], [1, 0, 1], [2, 1.5, 0]]}"#).unwrap();
        let e = load_space::<f64>(&path).unwrap_err().to_string();
        assert!(e.contains("(1, 2)") || e.contains("(2, 1)"), "{e}");
    }

    #[test]
    fn csv_points_become_a_euclidean_space() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        std::fs::write(&path, "0,0\n1, 0\n1,1\n").unwrap();
        let s = load_space::<f64>(&path).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.kind().name(), "euclidean");
        assert_eq!(s.dist(0, 2), 2f64.sqrt());
    }

    #[test]
    fn arcs_round_trip_and_are_validated() {
        let dir = tempfile::tempdir().unwrap();
        let g = generate::<f64>(&"grid2d:3x3".parse().unwrap()).unwrap();
        let path = dir.path().join("arc.json");
        save_arc(g.default_arc().unwrap(), &path).unwrap();
        assert_eq!(&load_arc(&g.space, &path).unwrap(), g.default_arc().unwrap());
        std::fs::write(&path, "[0, 2]").unwrap();
        assert!(load_arc(&g.space, &path).is_err());
    }
}
