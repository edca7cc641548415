//! Computational companion for zero-density and Chebotarev-average estimates
//! over families of Galois extensions of Q.
//!
//! The crate covers finite groups and Frobenius data ([`group`], [`field`]),
//! Dirichlet coefficients of ζ_K/ζ and their Rankin–Selberg products
//! ([`artin`]), exact large-sieve mean values ([`large_sieve`]), an explicit
//! smooth weight and its Laplace transform ([`weights`]), zero-free-region
//! bookkeeping ([`zfr`]), Chebotarev counting ([`chebotarev`]) and field
//! families ([`families`]).

pub mod arith;
pub mod artin;
pub mod chebotarev;
pub mod error;
pub mod families;
pub mod field;
pub mod group;
pub mod large_sieve;
pub mod numerics;
pub mod polymod;
pub mod selftest;
pub mod sieve;
pub mod weights;
pub mod zfr;

mod par;

pub use error::{Error, Result};
pub use field::{Catalog, FieldDescriptor, FrobeniusData};
pub use group::{build_group, ConjugacyClass, FiniteGroup};
pub use sieve::{sieve_primes, PrimeSieve};

/// Version tag written into every JSON report.
pub const SCHEMA_VERSION: u32 = 1;
