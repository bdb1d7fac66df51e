//! Exact computational models for extended affine Weyl groups, the standard
//! apartment, twisted Frobenius structures and classical Deligne-Lusztig
//! varieties over small finite fields.

#![allow(clippy::needless_range_loop)]

pub mod affine_weyl;
pub mod building_geometry;
mod error;
pub mod finite_flag_lab;
mod nodeset;
pub mod root_datum;
pub mod sigma_structures;

pub use affine_weyl::{AffineElement, AffineWeyl, CosetSide, FiniteWeyl};
pub use error::{Error, Result};
pub use nodeset::NodeSet;
pub use root_datum::{DynkinType, RootDatum};
