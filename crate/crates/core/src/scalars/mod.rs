//! Exact coefficient arithmetic, exact linear solving and orthogonality-ideal
//! membership.

pub mod exact;
pub mod graded;
pub mod linsolve;
pub mod ortho;

pub use exact::{q, q_frac, ExactComplex, Q};
pub use graded::{graded_mul, GradedScalar};
pub use linsolve::{solve_linear_exact, LinearOutcome, SparseRow, SparseSystem};
pub use ortho::{ideal_membership, CommPoly, MemberCertificate, Membership, OrthoGen, RVar};
