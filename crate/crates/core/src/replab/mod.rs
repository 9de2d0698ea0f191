//! Numeric realization of the contracted representation on wave functions
//! of momentum.

mod action;
mod calculus;
mod generators;
mod spin;

pub use action::*;
pub use calculus::{op_commutator, CoeffFn, CoeffValue, FirstOrderOp, GradientMode, PointOp};
pub use generators::*;
pub use spin::SpinRep;

pub type Vec3 = nalgebra::Vector3<f64>;
pub type CMat = nalgebra::DMatrix<num_complex::Complex64>;
pub type CVec = nalgebra::DVector<num_complex::Complex64>;
