use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series has no nonzero coefficient inside its precision window")]
    ZeroLeadingCoefficient,

    #[error("precision exhausted: exponent {needed} requested, series known below {available}")]
    PrecisionExhausted { needed: String, available: String },

    #[error("{0} is not a discriminant (must be nonzero and 0 or 1 mod 4)")]
    NotADiscriminant(i64),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("{id} expansion has {found} at q^({exponent}), expected {expected}")]
    RegistryMismatch { id: String, exponent: String, expected: String, found: String },

    #[error("coefficient {0} is not an integer")]
    NonIntegralCoefficient(String),

    #[error("matrix [[{a}, {b}], [{c}, {d}]] does not have determinant 1")]
    NotUnimodular { a: i64, b: i64, c: i64, d: i64 },

    #[error("form {0} is not positive definite")]
    NotPositiveDefinite(String),

    #[error("r^2 = {disc} (mod {modulus}) has no solution")]
    NoSquareRoot { disc: i64, modulus: i64 },

    #[error("no representative of the class of {form} in Q_{level}(D, {residue}) found within the search bound")]
    RepresentativeNotFound { form: String, level: i64, residue: i64 },

    #[error("form {form} represents no integer coprime to {d0} within the search box")]
    NoCoprimeRepresentation { form: String, d0: i64 },

    #[error("genus character of {form} for {d0} is not well defined: represented values disagree")]
    InconsistentCharacter { form: String, d0: i64 },

    #[error("evaluation did not converge: {0}")]
    NonConvergent(String),

    #[error("rounding failed: {0}")]
    RoundingFailed(String),

    #[error("cross-check failed for D = {disc}: series route {series}, trace route {traces}")]
    CrossCheckFailed { disc: i64, series: String, traces: String },

    #[error("curve is singular")]
    SingularCurve,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {p} exceeds the configured bound {bound}")]
    PrimeTooLarge { p: u64, bound: u64 },

    #[error("point is not on the curve")]
    PointNotOnCurve,

    #[error("need {needed} coefficients, only {available} supplied")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("D = {disc} is not admissible: {reasons}")]
    NotAdmissible { disc: i64, reasons: String },

    #[error("no attested coefficient for D = {0}")]
    UnknownCoefficient(i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
