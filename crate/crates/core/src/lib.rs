//! Analysis of k-homogeneous access structures: participant reduction,
//! information-rate upper bounds via independent sequences, ideal linear
//! schemes, and the ideality classifier.

pub mod bounds;
pub mod classifier;
pub mod enumeration;
pub mod field;
pub mod io;
pub mod reduction;
pub mod scheme;
pub mod set;
pub mod structure;

/// Exact rational used for bounds and rates.
pub type Rational = num_rational::Ratio<u64>;

pub use field::PrimeField;
pub use set::ParticipantSet;
pub use structure::AccessStructure;
