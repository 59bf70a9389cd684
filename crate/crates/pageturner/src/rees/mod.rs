//! Ideal-adic Rees towers over small rings, their modules and hom groups.

mod hom;
mod module;
mod ring;

pub use hom::*;
pub use module::*;
pub use ring::*;
