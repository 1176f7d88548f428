//! Exact computer algebra for finite-dimensional Novikov algebras and
//! quadratic Novikov algebras given by structure constants.
//!
//! Everything is computed over the rationals (or multivariate polynomials
//! over the rationals when parameters such as `k`, `s`, `t` are involved);
//! there is no floating point anywhere. The main entry points are:
//!
//! - [`scalar`]: exact scalars (rationals and polynomials) with nonvanishing
//!   constraint sets,
//! - [`matrix`]: dense exact linear algebra (determinants, kernels, solving),
//! - [`algebra`]: Novikov algebras as structure-constant tensors, axiom
//!   checking, ideals, quotients and direct sums,
//! - [`forms`]: symmetric bilinear forms, the invariance equation and
//!   quadratic Novikov algebras,
//! - [`reps`]: representations, the adjoint and dual representations and the
//!   intertwiner built from a quadratic form,
//! - [`structure`]: orthogonal complements, decomposition into nondegenerate
//!   ideals, isotropic ideal discovery and splittings,
//! - [`dext`]: double extensions (validation, construction, extraction),
//! - [`classify`]: the built-in catalog of low-dimensional algebras and the
//!   machine verification of the dimension-2 and dimension-3 tables.

pub mod algebra;
pub mod classify;
pub mod dext;
pub mod forms;
pub mod matrix;
pub mod reps;
pub mod scalar;
pub mod structure;

pub use algebra::{NovikovAlgebra, Subspace, SubspaceKind};
pub use forms::{QuadraticNovikov, SymBilinearForm};
pub use matrix::Matrix;
pub use scalar::{ConstraintSet, Scalar};
