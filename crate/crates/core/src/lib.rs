//! Exact computational topology for images of special generic maps.
//!
//! The crate builds "elementary polyhedra" — expression trees over manifold
//! atoms combined by bouquets, products and connected sums — and computes
//! their homology, cohomology rings and triple Massey products by closed-form
//! rules. Every closed-form rule is backed by an independent brute-force
//! oracle running exact integer chain-complex computations (Smith normal
//! form), so results can be cross-checked instead of trusted.
//!
//! Module map:
//! - [`graded`]: coefficient rings and finitely generated graded modules over
//!   a PID (direct sum, tensor, Tor, Künneth).
//! - [`matrix`] / [`field`]: exact linear algebra, generic over the integer
//!   scalar type.
//! - [`oracle`]: integer chain complexes, Smith normal form homology, and the
//!   simplicial cup-product oracle.
//! - [`term`]: the polyhedron term grammar, root sequences, and the
//!   classification/whitelist checkers for roots.
//! - [`ring`]: graded cohomology rings presented by structure constants.
//! - [`invariants`]: closed-form homology of terms, the disc-with-holes
//!   calculus, parametrized cup-product rings, and degree-based vanishing
//!   checks.
//! - [`dga`]: finite differential graded algebras and triple Massey products,
//!   including the Borromean fixture.
//! - [`sgm`]: source-manifold invariants computed from the image of a special
//!   generic map, with a Mayer–Vietoris cross-check.

pub mod dga;
pub mod error;
pub mod field;
pub mod graded;
pub mod invariants;
pub mod matrix;
pub mod oracle;
pub mod ring;
pub mod sgm;
pub mod term;

pub use error::{Error, Result};

/// Default arbitrary-precision scalar for all exact computations.
pub type Int = num_bigint::BigInt;

/// Integer matrix over the default scalar.
pub type IntMatrix = matrix::Mat<Int>;

/// Chain complex over the default scalar.
pub type IntChainComplex = oracle::ChainComplex<Int>;

/// Hard ceiling on the degrees a graded object may occupy. Operations that
/// would exceed it fail instead of truncating.
pub const DEFAULT_DEGREE_CAP: usize = 32;
