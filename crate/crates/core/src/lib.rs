//! Exact computation of Cartier–Manin matrices and the invariants they
//! control (Cartier rank, a-number, p-rank, nilpotency index) for
//! nonsingular plane curves over prime fields.
//!
//! Three independent routes are provided and cross-checked against each
//! other:
//!
//! * [`engine`] builds the matrix of the Cartier operator on the adjoint
//!   basis `x^i y^j dx / F_y` and reads off ranks by exact elimination;
//! * [`formulas`] counts solvable congruence systems for the Fermat and
//!   Hurwitz families;
//! * [`formulas`] also evaluates the closed-form rank and a-number
//!   expressions for the `sp±1` / `sp` subfamilies.
//!
//! All arithmetic is exact modulo a prime `p < 2^31`.

pub mod curve;
pub mod engine;
pub mod error;
pub mod field;
pub mod formulas;
pub mod input;
pub mod matrix;
pub mod par;
pub mod poly;
pub mod report;
pub mod singular;
pub mod sweep;

pub use curve::{CurveModel, Family};
pub use engine::{
    build_cartier_matrix, compute_invariants, BuildOptions, CartierMatrix, Expansion,
    InvariantReport,
};
pub use error::{Error, Result};
pub use field::{lucas_binomial, Fp, PrimeField};
pub use matrix::MatrixFp;
pub use par::Execution;
pub use poly::{Monomial, SparseBivarPoly};
