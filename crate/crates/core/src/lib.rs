//! Continuous g-functions for one-sided subshifts over finite and countably
//! infinite alphabets.
//!
//! The crate computes exit-witness tables and distances to the exit set
//! `E_K = {x ∉ K : Θ(x) ∈ K}`, certifies property G, builds the reciprocal
//! and weighted-distance g-functions, verifies them with exact rational
//! arithmetic, and simulates the Markov process that appends one symbol per
//! step with probabilities given by a g-function.
//!
//! ```
//! use gshift::{Subshift, SubshiftSpec, WitnessTable, ClosureVerdict};
//!
//! let golden = Subshift::new(SubshiftSpec::forbidden(2, &["11"]).unwrap()).unwrap();
//! let table = WitnessTable::build(&golden, 16);
//! assert!(matches!(table.closure_meets_k(), ClosureVerdict::Disjoint { depth: 2, .. }));
//! ```

pub mod cli;
pub mod error;
pub mod exitset;
pub mod gfun;
pub mod sample;
pub mod sequence;
pub mod sim;
pub mod subshift;

pub use error::{Error, Result};
pub use exitset::{ClosedVerdict, ClosureVerdict, Distance, NValue, WitnessStatus, WitnessTable};
pub use gfun::{Certification, Enclosure, GCertificate, GFunction, Variant, WeightSeq};
pub use sequence::{canonicalize, metric, word_replace_last, Dyadic, Point, Symbol, Word};
pub use subshift::{Alphabet, Subshift, SubshiftSpec, TransitionGraph};

/// Exact rationals used for weights, g-values and enclosures.
pub type Rational = num_rational::BigRational;
