use std::path::Path;

use quasiarc::corpus::{generate, load_arc, load_space, GeneratorSpec};
use quasiarc::{DiscreteArc, Error, Result, Space};

/// A loaded or generated space with the arcs that came with it.
pub struct Source {
    pub label: String,
    pub space: Space,
    pub named_arcs: Vec<(String, DiscreteArc)>,
}

/// An existing file is read as a space; anything else must be a genspec.
pub fn load_source(spec: &str) -> Result<Source> {
    if Path::new(spec).is_file() {
        return Ok(Source {
            label: spec.to_string(),
            space: load_space(spec)?,
            named_arcs: Vec::new(),
        });
    }
    let gen: GeneratorSpec = spec.parse()?;
    let g = generate::<f64>(&gen)?;
    Ok(Source {
        label: gen.to_string(),
        space: g.space,
        named_arcs: g.arcs.into_iter().map(|a| (a.name, a.arc)).collect(),
    })
}

/// `default`, the name of a generated arc, or a path to a JSON index list.
pub fn resolve_arc(source: &Source, arc: &str) -> Result<DiscreteArc> {
    if arc == "default" {
        return source
            .named_arcs
            .first()
            .map(|(_, a)| a.clone())
            .ok_or_else(|| Error::InvalidParameter(format!("{} has no default arc; pass --arc <path>", source.label)));
    }
    if let Some((_, a)) = source.named_arcs.iter().find(|(n, _)| n == arc) {
        return Ok(a.clone());
    }
    if Path::new(arc).is_file() {
        return load_arc(&source.space, arc);
    }
    let names: Vec<&str> = source.named_arcs.iter().map(|(n, _)| n.as_str()).collect();
    Err(Error::InvalidParameter(format!(
        "arc '{arc}' is neither a file nor one of the generated arcs {names:?}"
    )))
}
