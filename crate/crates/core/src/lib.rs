pub mod arith;
pub mod error;
pub mod farey;
pub mod gint;
pub mod moment;
pub mod numeric;
pub mod quad;
pub mod region;
pub mod sieve;
pub mod verify;

pub use error::{Error, Result};
pub use gint::{CanonicalGaussianInt, GaussScalar, GaussianInt, PrimeFactorization};

pub type GInt = GaussianInt<i64>;
pub type CanonicalGInt = CanonicalGaussianInt<i64>;
pub type Factorization = PrimeFactorization<i64>;
