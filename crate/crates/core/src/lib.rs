//! Short pants decompositions of hyperbolic surfaces.
//!
//! The crate is layered bottom-up:
//!
//! * [`trig`]: right-angled hexagon and pentagon identities for pairs of pants;
//! * [`surface`]: pants graphs, Fenchel–Nielsen coordinates, holonomy and the
//!   surface file format;
//! * [`spectra`]: closed geodesics, systoles, axes and orthogeodesics;
//! * [`peel`]: the boundary-peeling construction and its certificate;
//! * [`harness`]: seeded surface sampling and batch CSV reports.

mod dd;
pub mod harness;
pub mod isometry;
pub mod peel;
pub mod spectra;
pub mod surface;
pub mod trig;
pub mod word;

pub use harness::{run_experiment, sample_surface, ExperimentConfig, HarnessError};
pub use isometry::{trace_length, BoundaryPoint, Isometry, IsometryError};
pub use peel::{
    decompose, decompose_closed, peel_all, verify_bers_bound, Certificate, PeelError, PeelReport,
};
pub use spectra::{
    enumerate_closed_geodesics, shortest_orthogeodesic, systole, EnumerationPolicy, GeodesicClass,
    Orthogeodesic, Piece, SpectraError,
};
pub use surface::{
    evaluate_word, fn_to_holonomy, parse_surface, serialize_surface, surface_area, validate,
    CurveId, FnCoordinates, HolonomyRep, PantsGraph, Surface, SurfaceError,
};
pub use trig::{CuffTriple, SeamPair, Tolerance, TrigError};
pub use word::{Letter, Word};
