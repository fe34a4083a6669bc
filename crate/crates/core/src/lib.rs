//! Workbench for k-Gallai edge colorings of complete graphs: generators,
//! partition and subgraph oracles, an exact threshold-number engine,
//! closed-form bound evaluators and certificate extractors.

pub mod bounds;
pub mod canon;
pub mod certificate;
pub mod coloring;
pub mod constructions;
pub mod engine;
pub mod error;
pub mod extract;
pub mod io;
pub mod partition;
pub mod pattern;
pub mod search;

pub use certificate::{CertKind, Certificate};
pub use coloring::{Color, ColorSet, EdgeColoring, SimpleGraph};
pub use error::{Error, Result};
