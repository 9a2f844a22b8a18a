//! Exact integer and rational linear algebra: Smith normal forms, integer
//! and rational solving, and linear-programming feasibility with Farkas
//! certificates.

pub mod dixon;
pub mod lp;
pub mod mat;
pub mod modp;
pub mod smith;

pub use dixon::{gauss_solve, solve_rational};
pub use lp::{lp_feasible, verify_farkas, verify_point, FarkasCertificate, LinearSystem, LpOutcome};
pub use mat::{IMat, Mat, QMat, ZMat};
pub use smith::{integer_solve, smith, smith_full, SmithDecomposition, SmithFull};
