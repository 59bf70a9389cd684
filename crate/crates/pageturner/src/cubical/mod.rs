//! Finite cubical sets on the box category without connections.

mod boxword;
mod colimit;
mod json;
mod path;
mod search;
mod set;

pub use boxword::*;
pub use colimit::*;
pub use json::*;
pub use path::*;
pub use search::*;
pub use set::*;

pub(crate) use path::describe as describe_cube;
pub(crate) use set::dedupe as dedupe_names;
