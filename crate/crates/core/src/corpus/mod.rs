//! Generated test spaces with their default arcs, and space/arc files.

mod generators;
mod io;

pub use generators::{generate, Generated, GeneratorSpec, NamedArc, COMB_SAMPLES_PER_UNIT, MAX_POINTS};
pub use io::{load_arc, load_space, save_arc, save_space, SpaceFile};
