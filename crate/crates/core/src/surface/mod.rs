//! Surfaces as pants graphs with Fenchel–Nielsen coordinates, their holonomy
//! representations, and the surface file format.

mod format;
mod graph;
mod holonomy;

use thiserror::Error;

use crate::isometry::IsometryError;
use crate::word::WordError;

pub use format::{format_float, parse_surface, serialize_surface, FormatError};
pub use graph::{
    canonical_graph, surface_area, validate, BoundaryLeg, CurveId, FnCoordinates, Gluing,
    InteriorCoord, PantsGraph, PantsId, Slot, Surface,
};
pub use holonomy::{cut_along, evaluate_word, fn_to_holonomy, HolonomyRep};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("malformed pants graph: {0}")]
    MalformedGraph(String),
    #[error("pants graph is disconnected")]
    Disconnected,
    #[error("no coordinate for curve {0}")]
    MissingCoordinate(CurveId),
    #[error("coordinate given for curve {0}, which is not in the graph")]
    UnknownCurve(CurveId),
    #[error("curve {curve} has non-positive length {value}")]
    NonPositiveLength { curve: CurveId, value: f64 },
    #[error("curve {curve} has length {value} above the cap")]
    LengthOverCap { curve: CurveId, value: f64 },
    #[error("curve {curve} has a non-finite twist")]
    NonFiniteTwist { curve: CurveId },
    #[error("holonomy failed its checks: {0}")]
    NumericalInstability(String),
    #[error("generator `{0}` is not part of the representation")]
    UnknownGenerator(char),
    #[error("representation needs {0} generators, more than the 26 available symbols")]
    TooManyGenerators(usize),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Isometry(#[from] IsometryError),
}
