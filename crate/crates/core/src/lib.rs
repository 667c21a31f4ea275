//! Certified irreducibility for primitive integer polynomials.
//!
//! A polynomial is certified irreducible by a single value `f(n) = ±p^k·d`
//! at a large enough `n`, plus side conditions on the derivative or the
//! Taylor coefficients of `f(x + n)` when `k > 1`. The [`criterion`] module
//! searches for such witnesses, [`certificate`] stores and re-verifies them,
//! and [`oracle`] provides an independent brute-force factorizer for testing.

pub mod certificate;
pub mod cli;
pub mod criterion;
pub mod nt;
pub mod oracle;
pub mod poly;

pub use certificate::{verify, Certificate, CertificateError, VerifyReport};
pub use criterion::{
    certify_at, check_theorem1, check_theorem2, search, smallest_per_variant, Certification,
    CriterionError, CriterionOutcome, SearchConfig, SearchOutcome, Variant, VariantSet,
};
pub use nt::{
    factor, is_prime, prime_power_splits, valuation, FactorConfig, PrimePowerSplit, Sign,
};
pub use poly::{Polynomial, RootBound, TaylorCoefficients};

pub const TOOL_VERSION: &str = concat!("irrcert ", env!("CARGO_PKG_VERSION"));
