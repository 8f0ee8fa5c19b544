use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use quasiarc::{DiscreteArc, Space};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

/// Input polyline in grey under the output in colour, with both endpoints
/// marked. `None` for spaces without planar coordinates.
pub fn render(space: &Space, input: &DiscreteArc, output: Option<&DiscreteArc>, title: &str) -> Option<String> {
    if !space.is_planar() {
        return None;
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for i in 0..space.len() {
        let c = space.coords(i)?;
        for k in 0..2 {
            lo[k] = lo[k].min(c[k]);
            hi[k] = hi[k].max(c[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let width = (hi[0] - lo[0]) * scale + 2.0 * MARGIN;
    let height = (hi[1] - lo[1]) * scale + 2.0 * MARGIN;
    let xy = |p: usize| {
        let c = space.coords(p).expect("planar space has coordinates");
        // flip y so that the picture is upright
        (MARGIN + (c[0] - lo[0]) * scale, height - MARGIN - (c[1] - lo[1]) * scale)
    };
    let polyline = |arc: &DiscreteArc| {
        arc.indices()
            .iter()
            .map(|&p| {
                let (x, y) = xy(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let _ = writeln!(s, "  <title>{}</title>", escape(title));
    let _ = writeln!(s, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"  <polyline class="input" points="{}" fill="none" stroke="#9e9e9e" stroke-width="3" stroke-linejoin="round"/>"##,
        polyline(input)
    );
    if let Some(out) = output {
        let _ = writeln!(
            s,
            r##"  <polyline class="output" points="{}" fill="none" stroke="#d62728" stroke-width="1.5" stroke-linejoin="round"/>"##,
            polyline(out)
        );
    }
    for p in [input.a(), input.b()] {
        let (x, y) = xy(p);
        let _ = writeln!(s, r##"  <circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#1f77b4"/>"##);
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// `out.svg` becomes `out-<n>.svg`.
pub fn numbered(path: &Path, n: usize) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("arc");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("svg");
    path.with_file_name(format!("{stem}-{n}.{ext}"))
}
