//! Closed geodesics, systoles, axes and orthogeodesics of a holonomy
//! representation.
//!
//! All searches enumerate freely reduced words up to a length cutoff. The
//! cutoff is a heuristic: every answer is recomputed at
//! `max_word_length + stability_margin` and a disagreement is reported as
//! [`SpectraError::StabilityFailure`] instead of being returned.

mod axes;
mod enumerate;
mod ortho;

use thiserror::Error;

use crate::isometry::IsometryError;
use crate::surface::{CurveId, SurfaceError};
use crate::trig::Tolerance;
use crate::word::Word;

pub use axes::{axes_cross, axis_endpoints, distance_between_axes};
pub use enumerate::{enumerate_closed_geodesics, systole, systole_collar_check};
pub use ortho::{
    shortest_orthogeodesic, shortest_orthogeodesic_between, ArcType, Orthogeodesic, Piece,
    PieceBoundary,
};

pub(crate) use axes::side_of;
pub(crate) use ortho::boundary_frame;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("answer changed between word length {cutoff} ({at_cutoff}) and {extended} ({at_extended}); raise the cutoff")]
    StabilityFailure {
        cutoff: usize,
        extended: usize,
        at_cutoff: f64,
        at_extended: f64,
    },
    #[error("no admissible arc up to word length {0}")]
    NoArcFound(usize),
    #[error("no closed geodesic up to word length {0}")]
    NoGeodesic(usize),
    #[error("axes cross")]
    AxesCross,
    #[error("axes share an endpoint")]
    AxesAsymptotic,
    #[error("invalid enumeration policy: {0}")]
    InvalidPolicy(String),
    #[error("curve {0} is not a boundary of the piece")]
    UnknownBoundary(CurveId),
    #[error(transparent)]
    NotHyperbolic(#[from] IsometryError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Search depths for word enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationPolicy {
    pub max_word_length: usize,
    /// Extra depth at which every answer is recomputed and must not change.
    pub stability_margin: usize,
    /// Word length of the conjugators used by crossing tests.
    pub conjugator_cutoff: usize,
    pub tolerance: Tolerance,
}

impl Default for EnumerationPolicy {
    fn default() -> Self {
        Self {
            max_word_length: 6,
            stability_margin: 2,
            conjugator_cutoff: 4,
            tolerance: Tolerance::default(),
        }
    }
}

impl EnumerationPolicy {
    pub fn new(
        max_word_length: usize,
        stability_margin: usize,
        conjugator_cutoff: usize,
    ) -> Result<Self, SpectraError> {
        let p = Self {
            max_word_length,
            stability_margin,
            conjugator_cutoff,
            tolerance: Tolerance::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_tolerance(mut self, tolerance: Tolerance) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn validate(&self) -> Result<(), SpectraError> {
        if self.max_word_length < 2 {
            return Err(SpectraError::InvalidPolicy(
                "max_word_length must be at least 2".into(),
            ));
        }
        if self.stability_margin < 2 {
            return Err(SpectraError::InvalidPolicy(
                "stability_margin must be at least 2".into(),
            ));
        }
        if self.conjugator_cutoff < 1 {
            return Err(SpectraError::InvalidPolicy(
                "conjugator_cutoff must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn extended(&self) -> usize {
        self.max_word_length + self.stability_margin
    }
}

/// A conjugacy class of the surface group with its geodesic length.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicClass {
    /// Canonical representative, see [`Word::canonical`].
    pub word: Word,
    pub length: f64,
    pub simple_hint: Option<bool>,
}
