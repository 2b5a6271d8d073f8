//! Exact linear algebra over `F2` and `F2[U]`.

pub mod f2;
pub mod snf;

pub use f2::{boundary_membership, Elimination, Membership};
pub use snf::{
    graded_snf, tilde_poincare_table, u_image_test, u_image_test_quotient, ClassComponent, ClassStatus,
    ModuleDecomposition, PivotStrategy, Reduction, TorsionSummand,
};
