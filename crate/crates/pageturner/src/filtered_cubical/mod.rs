//! Filtered cubical sets, the successor construction and its compatibilities.

mod day;
mod filtered;
mod json;
mod pullback;
mod successor;

pub use day::*;
pub use filtered::*;
pub use json::*;
pub use pullback::*;
pub use successor::*;
