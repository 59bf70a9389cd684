//! Exact integer linear algebra: dense matrices, Smith normal form, and
//! subquotient abelian groups with homomorphisms between them.

mod group;
mod mat;
mod snf;

pub use group::{describe_orders, homology_at, is_exact, reduce_by, Group, Hom, NotContained};
pub use mat::Mat;
pub use snf::{kernel_basis, lattice_basis, rank, smith_normal_form, solve, SmithNormalForm, Solver};
