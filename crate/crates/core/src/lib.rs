//! Exact computation of the K-theoretic invariants of a shift of finite type
//! from its adjacency matrix.
//!
//! Everything hangs off [`Sft`], an immutable per-matrix context that caches
//! the minimal polynomial, matrix powers, the centralizer and commutator
//! lattices and the Perron data. Elements of the inductive-limit groups are
//! plain `(payload, level)` values; all operations on them go through the
//! context so that equality can use the kernel-stabilization exponent `l`
//! of the minimal polynomial `x^l p_A(x)`.
//!
//! ```
//! use sftdim::{AdjacencyMatrix, Sft, StableElement};
//!
//! let sft = Sft::new(AdjacencyMatrix::from_i64(&[vec![2]]).unwrap());
//! // [1,1] and [2,2] are both 1/2 in Z[1/2]
//! let a = StableElement::from_i64(&[1], 1);
//! let b = StableElement::from_i64(&[2], 2);
//! assert!(sft.equal_s(&a, &b));
//! ```

pub mod cylinder;
pub mod dimension;
pub mod duality;
pub mod error;
pub mod linalg;
pub mod serde_int;
pub mod sft;
pub mod shift_equiv;
pub mod traces;

mod context;

pub use context::{Sft, SftConfig};
pub use cylinder::{
    CentralizerLattice, CommutatorLattice, CylinderElement, CylinderK0Element, CylinderK1Element,
    K1Equality, K1GroupStructure, RAElement,
};
pub use dimension::{HomoclinicElement, Positivity, StableElement, UnstableElement};
pub use duality::StableHom;
pub use error::{Result, SftError};
pub use linalg::{IntMatrix, IntPoly, MinPolyData};
pub use sft::{AdjacencyMatrix, Classification, SpectralDecomposition};
pub use shift_equiv::{
    SearchOutcome, ShiftEquivalence, ShiftEquivalenceWitness, VerificationReport,
};
pub use traces::PerronData;

/// Library version, stamped into reports for reproducibility.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
