//! Polyhedral structure of tropical theta functions: domains of linearity,
//! the corner locus modulo periods, and mesh export.
//!
//! Full complexes are limited to `g ≤ 3`; evaluation itself has no cap.

mod cell;
mod complex;
mod export;
pub mod polytope;
mod segment;

pub use cell::{linearity_cell, CellFacet, LinearityCell};
pub use complex::{corner_locus, CellComplex, LocusFace, Point};
pub use export::{export_mesh, mesh_json, MeshFormat};
pub use segment::{periodic_segment_pieces, segment_pieces, LinearPiece};

use thiserror::Error;

use crate::lattice::LatticeVector;
use crate::trop_av::TropAvError;
use crate::trop_theta::ThetaError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("point lies on the corner locus; tied terms {ties:?}")]
    OnCornerLocus { ties: Vec<LatticeVector> },
    #[error("polyhedral computations are limited to g <= 3, found g = {g}")]
    RankTooLarge { g: usize },
    #[error("the corner locus needs an ample theta function")]
    NotAmple,
    #[error("term {witness:?} is not minimal on any open set")]
    NotFullDimensional { witness: LatticeVector },
    #[error("no point off the corner locus found among the seed candidates")]
    NoGenericPoint,
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    TropAv(#[from] TropAvError),
}
