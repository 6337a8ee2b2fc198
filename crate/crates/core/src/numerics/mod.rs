//! Root finding, secular equations and dense eigensolvers.

pub mod bdg;
pub mod eigen;
pub mod root;
pub mod secular;

pub use bdg::bdg_eig;
pub use eigen::{lowest_eigenpairs, sym_eig, sym_eigvals, SymEigen};
pub use root::{solve_bracketed, RootConfig};
pub use secular::{solve_secular, solve_secular_detailed, SecularProblem, SecularRoot, SecularSide, SecularSolution};
