// Indexed loops mirror the matrix formulas, and arithmetic methods on
// value types follow computer-algebra naming rather than operator traits.
#![allow(clippy::needless_range_loop, clippy::should_implement_trait)]

//! Exact computer algebra for rational quantum tori.
//!
//! A quantum torus here is a twisted group algebra of `Z^n`, presented by an
//! integer exponent matrix `B` over `Z/(m)`: the basis elements multiply as
//! `d_g * d_h = q^(g^T B h) * d_{g+h}` for a root of unity `q` of order `m`.
//! This crate classifies such algebras up to graded isomorphism and builds the
//! supporting exact machinery:
//!
//! - [`cyclic_ring`]: arithmetic in `Z/(m)` (with `m = 0` meaning `Z`), units,
//!   the multiplicative representative set `P`, additive orders, divisibility.
//! - [`cyclotomic`]: exact arithmetic in `Q(zeta_M)` as polynomial residues,
//!   the concrete scalar field for torus elements.
//! - [`matrix`]: exact integer and residue matrices, Smith normal form over
//!   cyclic rings (`GL^2` and `SL^2` variants), determinantal divisors, and
//!   lifting of invertible residue matrices to `GL_n(Z)`.
//! - [`alternating`]: skew normal forms `N(h_1, ..., h_s)` of alternating
//!   matrices, canonical orbit representatives under the congruence action of
//!   `GL_n(Z)`, stabilizer determinant groups, and exhaustive orbit
//!   enumeration at desk scale.
//! - [`cohomology`]: biadditive 2-cocycles on `Z^n`, the commutator map, its
//!   alternating section, quadratic-form coboundaries, and the structure of
//!   `H^2` for direct sums of cyclic groups.
//! - [`torus`]: torus presentations, sparse element arithmetic over
//!   `Q(zeta_M)`, the tensor normal form, and the graded isomorphism decision.
//! - [`automorphism`]: graded automorphisms of the rank-2 torus as symbolic
//!   `(character, base-change)` pairs, generator lifts, and the splitting of
//!   the automorphism exact sequence with its parameter constraints.
//!
//! All arithmetic is exact; there is no floating point anywhere. Searches that
//! would enumerate a matrix group carry explicit work guards and fail loudly
//! instead of truncating.

pub mod alternating;
pub mod automorphism;
pub mod cohomology;
pub mod cyclic_ring;
pub mod cyclotomic;
pub mod matrix;
pub mod torus;
pub mod wire;

/// Default work-unit budget for brute-force group scans.
///
/// One work unit is one candidate matrix considered during an enumeration.
pub const DEFAULT_MAX_WORK: u64 = 100_000_000;

/// Errors shared across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} exceeds the supported bound 2^32")]
    ModulusTooLarge(u64),
    #[error("operation requires a finite modulus (m > 0)")]
    InfiniteRing,
    #[error("operands have mismatched moduli: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} does not divide {1}")]
    NotDivisible(i64, i64),
    #[error("integer value exceeds the machine range supported for ring elements")]
    IntegerOverflow,
    #[error("matrix is not invertible over the ring")]
    NotInvertible,
    #[error("determinant {0} is not +-1 mod {1}; no integer preimage in GL_n(Z)")]
    NoUnimodularLift(i64, u64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not alternating")]
    NotAlternating,
    #[error("chain of length {0} does not fit in dimension {1}")]
    ChainTooLong(usize, usize),
    #[error("work guard exceeded: needs about {required} units, budget {budget} (raise --max-work)")]
    FeasibilityExceeded { required: u64, budget: u64 },
    #[error("element is not homogeneous; only single-term elements are units")]
    NonHomogeneous,
    #[error("presentation has non-torsion scalars (m = 0); element arithmetic is unavailable")]
    NonTorsionScalars,
    #[error("presentations differ; elements live in different algebras")]
    PresentationMismatch,
    #[error("splitting constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("free symbol {0} is unbound")]
    UnboundSymbol(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
