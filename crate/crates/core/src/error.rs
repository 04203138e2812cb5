use thiserror::Error;

/// Errors produced by the library. Verification failures are not errors;
/// they are reported through [`crate::verify::VerificationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow in quaternion arithmetic")]
    Overflow,

    #[error("quaternion has zero norm and cannot be inverted")]
    ZeroNorm,

    #[error("doubled coordinates {0:?} mix parities; not a Hurwitz integer")]
    MixedParity([i64; 4]),

    #[error("{0} is not a rational prime")]
    NotPrime(u64),

    #[error("norm of {alpha} is {norm}, which is not prime")]
    NonPrimeModulus { alpha: String, norm: u64 },

    #[error("cannot parse quaternion {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("p = {p} is not congruent to 1 mod 24 (p mod 24 = {residue})")]
    RateModulus { p: u64, residue: u64 },

    #[error("code dimension k must be positive")]
    ZeroDimension,

    #[error("residues at z = {z1} and z = {z2} are left-congruent modulo {alpha}; construction violated bijectivity")]
    Bijectivity { alpha: String, z1: u64, z2: u64 },

    #[error("residue at z = {z} is not congruent to z modulo {alpha}")]
    Congruence { alpha: String, z: u64 },

    #[error("no representative of norm {norm} found in the {class} class")]
    NoRepresentative { norm: u64, class: String },

    #[error("SVG export requires a two-dimensional layout")]
    SvgNeedsLayout2d,

    #[error("layout has {layout} coordinates but graph has {graph} vertices")]
    LayoutMismatch { layout: usize, graph: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("malformed {format} input: {reason}")]
    Format {
        format: &'static str,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
