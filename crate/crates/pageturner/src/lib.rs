//! Successor ("page-turning") constructions on filtered objects.
//!
//! Two engines share this crate. The combinatorial one works with finite
//! cubical sets and filtered cubical sets; the stable one works with filtered
//! chain complexes of free abelian groups, where homology plays the role of
//! homotopy groups.

// dimension-indexed loops read better with the index
#![allow(clippy::needless_range_loop)]

pub mod complex;
pub mod cubical;
pub mod error;
pub mod filtered_cubical;
pub mod hom;
pub mod linalg;
pub mod rees;
pub mod verify;

pub use error::{Error, Result};
