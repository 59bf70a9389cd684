//! Hom complexes of filtered complexes and successor hom-sets.

mod cells;
mod cofiber;
mod complex;
mod ctau;
mod successor;

pub use cells::*;
pub use cofiber::*;
pub use complex::*;
pub use ctau::*;
pub use successor::*;
