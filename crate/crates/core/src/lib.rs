//! Quadratic Hecke families over `Q` and `Q(i)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`ring`]: Gaussian and rational integers, ideals, factorization, residue rings.
//! * [`symbol`]: power residue symbols and the Jacobi symbol.
//! * [`family`]: the modulus, ray class group, representatives and the characters `chi_a`.
//! * [`analytic`]: Mellin transforms, the kernel `K`, Poisson summation checks, L-functions.
//! * [`sieve`]: the Gram-matrix norms `B1`, `B2`, `B3`, the sums `Sigma_3..Sigma_5` and main terms.

pub mod analytic;
pub mod error;
pub mod family;
pub mod ring;
pub mod sieve;
pub mod symbol;

pub use error::{Error, Result};
