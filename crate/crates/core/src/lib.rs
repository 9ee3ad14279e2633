//! Real spectral triples on the noncommutative n-torus, realized on finite
//! lattice truncations and checked numerically.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Jacobi eigensolver, nullspaces.
//! * [`clifford`]: Clifford generators, grading, reality matrix and sign table.
//! * [`torus`]: the torus algebra and its opposite acting on a shifted lattice.
//! * [`triple`]: assembly of `D`, `J`, `Γ` and the constant-block solver.
//! * [`axioms`]: Hochschild chains and the verification checks.
//! * [`equivalence`]: spin-structure actions and unitary equivalences.
//! * [`cliffordcheck`]: deciding whether Hermitian matrices generate a Clifford algebra.

pub mod axioms;
pub mod clifford;
pub mod cliffordcheck;
pub mod equivalence;
pub mod error;
pub mod linalg;
pub mod torus;
pub mod triple;

pub use clifford::{build_generators, sign_table, CliffordRep, Sign, SignTriple};
pub use error::{Error, Result};
pub use linalg::{phase, ComplexMatrix, EigenDecomposition};
pub use num_complex::Complex64;
pub use torus::{canonical_a, AMatrix, ThetaMatrix, TruncatedLattice};
pub use triple::{assemble, AssembledTriple, TauMatrix, TripleConfig};
