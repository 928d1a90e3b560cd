//! Exact truncated q-series arithmetic, Bailey pairs and identity checks.

pub mod bailey;
pub mod coeffring;
pub mod error;
pub mod identities;
pub mod partitions;
pub mod qseries;
pub mod report;
pub mod series;

pub use coeffring::{Coefficient, Exponents, Param, Rational};
pub use error::{Error, Result};
pub use series::{HalfExponent, MonomialSpec, Series, Verdict, EXACT};
pub use partitions::Partition;
pub use report::{Mismatch, Status, VerificationReport};
pub use bailey::BaileyPair;
pub use identities::{check_identity, lemma_2_2_check, list_identities, run_suite, IdentityCase, SuiteSummary};
