//! Exact symbolic engine for Lie bialgebra structures and twist quantizations
//! on asymptotic symmetry algebras.

pub mod algebra;
pub mod catalog;
pub mod cohomology;
pub mod contraction;
pub mod dual;
pub mod envelope;
pub mod linalg;
pub mod quantum;
pub mod scalar;
pub mod tensor;
