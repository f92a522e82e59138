//! Frobenius nilpotence of singularities over finite fields.
//!
//! The crate decides whether the Frobenius action on local cohomology is
//! nilpotent for two families of singularities:
//!
//! * graded hypersurfaces `k[x_0..x_n]/(f)` with `f` quasi-homogeneous
//!   ([`lochom`]), by computing the Hasse–Witt type matrix of Frobenius on
//!   the degree-zero piece of the top local cohomology;
//! * two-dimensional singularities described by the simple normal crossing
//!   configuration of their exceptional curves ([`snc`]).
//!
//! [`sweep`] repeats the graded computation for the reductions of an
//! integer model modulo many primes and summarizes the evidence.

pub mod fields;
pub mod lochom;
pub mod matrix;
pub mod polynomials;
pub mod semilinear;
pub mod snc;
pub mod sweep;

pub use fields::{FieldElement, FieldError, FiniteField};
pub use matrix::Matrix;
pub use polynomials::{IntegerPoly, IntegerTerm, PolyError, SparsePoly, WeightSystem};
pub use semilinear::{brute_force_oracle, FittingSplit, SemilinearError, SemilinearOperator};
pub use sweep::{
    aggregate_verdict, enumerate_primes, export, residue_breakdown, sweep_hypersurface,
    IntegerModel, SkipPolicy, SweepError, SweepOptions, SweepReport,
};
