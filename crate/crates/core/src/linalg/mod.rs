//! Exact integer linear algebra: dense matrices, Smith normal form, integer
//! solving and lattice kernels.

mod lattice;
mod matrix;
mod smith;

pub use lattice::{kernel_basis, left_kernel_basis, solve_integer, RowLattice};
pub use matrix::IntMatrix;
pub(crate) use matrix::big_to_json;
pub use smith::{determinant, smith_normal_form, SmithDecomposition};
