//! Chain complexes, filtered chain complexes and their spectral-sequence data.

mod chain;
mod couple;
mod day;
mod filtered;
mod io;
mod spiral;
mod weight;

pub use chain::*;
pub use couple::*;
pub use day::*;
pub use filtered::*;
pub use io::*;
pub use spiral::*;
pub use weight::*;
