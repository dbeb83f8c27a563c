//! Primality certification for integers 4m^2 * 5^n - 1 through the
//! arithmetic of the Kummer surface attached to the Jacobian of
//! y^2 = x^5 + h.
//!
//! The offline pipeline works on the Jacobian with exact arithmetic:
//! Cantor's algorithm in Mumford coordinates ([`genus2`]), the quotient map
//! to the Kummer quartic in P^3 ([`kummer`]), and interpolation of the four
//! degree-5 forms representing real multiplication by sqrt(5) ([`sqrt5`]).
//! The online test ([`certify`]) iterates those forms modulo the candidate
//! and reads off prime / composite / unknown. Desk-scale brute force lives
//! in [`oracle`]; bit-exact file formats in [`files`]; the precompute
//! drivers in [`pipeline`].

pub mod arith;
pub mod certify;
pub mod field;
pub mod files;
pub mod genus2;
pub mod kummer;
pub mod linalg;
pub mod monomial;
pub mod oracle;
pub mod pipeline;
pub mod poly;
pub mod sqrt5;

pub use field::{CyclotomicField, Field, PrimeField, QuadExtField, Rationals, WordField};
pub use genus2::{Curve, CyclotomicIntegerEndo, MumfordDivisor};
pub use kummer::KummerPoint;

/// Divisor on the curve over Q.
pub type RationalDivisor = MumfordDivisor<Rationals>;
/// Divisor over Q(zeta_5), the field the interpolation samples live in.
pub type CyclotomicDivisor = MumfordDivisor<CyclotomicField>;
/// Divisor over a big prime field.
pub type PrimeDivisor = MumfordDivisor<PrimeField>;
/// Divisor over a machine-word prime field.
pub type WordDivisor = MumfordDivisor<WordField>;
