//! Grid diagrams, cable grids and grid chain complexes over `F2[U]`.
//!
//! The crate builds toroidal grid diagrams and their `(p, q)`-cables, the
//! fully collapsed grid complex `𝒞(D)` with its variants `p𝒞` and `𝒞/U`, and
//! computes the transverse and Legendrian invariants `θ̂`, `η` and `τ` by exact
//! linear algebra over `F2` and `F2[U]`.

pub mod cabling;
pub mod complex;
pub mod error;
pub mod grid;
pub mod homology;
pub mod invariants;
pub mod moves;
pub mod rect;
pub mod states;

pub use cabling::{build_cable, infer_q, plan_for_q, q_range, BlockType, CableMode, CablePlan, QRange};
pub use complex::{build_fully_collapsed, build_pc, build_tilde, BigradedComplex, Limits};
pub use error::{CableError, ComplexError, GridError, HomologyError, InvariantError, MoveError, ParseError};
pub use grid::{
    Bigrading, ClassicalInvariants, ComponentPartition, Corner, CornerCensus, GridDiagram, GridState, Marker,
};
pub use moves::{commute_columns, stabilize, torus_translate, StabilizationType};
