use alloc::string::String;
use core::fmt;

/// Errors raised by the algebraic core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    InvalidDegree(u32),
    /// Exhausted every monic polynomial of the requested degree.
    NoIrreducible { p: u64, d: u32 },
    FieldMismatch,
    ShapeMismatch { expected: (usize, usize), found: (usize, usize) },
    NotInvertible,
    /// `(c, d)` does not define a point of P^1(Z/N).
    InvalidPoint { c: i64, d: i64, modulus: u64 },
    NotAUnit { value: i64, modulus: u64 },
    InvalidSubgroup(String),
    /// A 2x2 matrix whose determinant vanishes in the coefficient field.
    SingularAction,
    InvalidModule(String),
    UnsupportedCharacteristic(u64),
    InvalidWeight(u32),
    HeckeIndex { r: u64, reason: &'static str },
    IncompatibleSpaces(String),
    /// A named hypothesis of a verification driver is violated.
    Hypothesis(String),
    MissingPrime(u64),
    OutOfRange(String),
    GroupTable(String),
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::InvalidDegree(d) => write!(f, "invalid extension degree {d}"),
            Error::NoIrreducible { p, d } => {
                write!(f, "no monic irreducible of degree {d} over F_{p} (internal bug)")
            }
            Error::FieldMismatch => write!(f, "operands live over different fields"),
            Error::ShapeMismatch { expected, found } => write!(
                f,
                "shape mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::NotInvertible => write!(f, "element or matrix is not invertible"),
            Error::InvalidPoint { c, d, modulus } => {
                write!(f, "({c}, {d}) is not a point of P^1(Z/{modulus})")
            }
            Error::NotAUnit { value, modulus } => write!(f, "{value} is not a unit mod {modulus}"),
            Error::InvalidSubgroup(s) => write!(f, "invalid subgroup: {s}"),
            Error::SingularAction => write!(f, "matrix is singular in the coefficient field"),
            Error::InvalidModule(s) => write!(f, "invalid coefficient module: {s}"),
            Error::UnsupportedCharacteristic(p) => {
                write!(f, "characteristic {p} is not supported (need p >= 5 or 0)")
            }
            Error::InvalidWeight(k) => write!(f, "invalid weight {k}"),
            Error::HeckeIndex { r, reason } => write!(f, "T_{r} refused: {reason}"),
            Error::IncompatibleSpaces(s) => write!(f, "incompatible spaces: {s}"),
            Error::Hypothesis(s) => write!(f, "hypothesis violated: {s}"),
            Error::MissingPrime(r) => write!(f, "eigensystem has no eigenvalue for prime {r}"),
            Error::OutOfRange(s) => write!(f, "out of range: {s}"),
            Error::GroupTable(s) => write!(f, "group table: {s}"),
            Error::Internal(s) => write!(f, "internal error: {s}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
