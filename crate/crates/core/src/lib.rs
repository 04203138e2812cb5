//! Residue class rings of prime Hurwitz integers.
//!
//! The crate builds the `N(alpha)` residues of a prime Hurwitz integer `alpha`
//! from two rounding-based modulo branches, checks the algebraic properties of
//! the resulting map `Z/N -> H/alpha H` exhaustively, and derives the average
//! energy and code-rate figures used to compare such constellations.
//!
//! All arithmetic is exact: Hurwitz integers are stored in doubled
//! coordinates and intermediate quotients are rational.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod graph;
pub mod modulo;
pub mod primes;
pub mod quaternion;
pub mod rational;
pub mod rounding;
pub mod verify;

pub use error::{Error, Result};
pub use modulo::{
    left_congruent, mu, mu1, mu2, residue_table, Branch, PrimeModulus, ResidueEntry, ResidueTable,
};
pub use primes::{find_primes_with_norm, is_prime, units, ClassFilter, UnitSet};
pub use quaternion::{HurwitzInt, ParityClass};
pub use rational::RationalQuaternion;
pub use rounding::{round_quaternion, round_scalar, RoundingMode};
