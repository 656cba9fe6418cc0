use thiserror::Error;

/// Errors raised when an input violates an operation's preconditions.
///
/// Mathematical checks that merely come out negative (a Jacobi violation, a
/// failed cocycle law) are reported through the per-operation report types,
/// not through this enum.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("Lie algebra fails the Jacobi identity on {violations} triple(s)")]
    InvalidAlgebra { violations: usize },

    #[error("bilinear form is not symmetric")]
    NotSymmetric,

    #[error("bilinear form is degenerate (rank {rank} < {dim})")]
    Degenerate { rank: usize, dim: usize },

    #[error(
        "derivation is not skew for the form: w(e{i},e{j}) = {w_ij} but w(e{j},e{i}) = {w_ji}"
    )]
    NotSkew {
        i: usize,
        j: usize,
        w_ij: String,
        w_ji: String,
    },

    #[error("form is not ad-invariant: nu is not antisymmetric on ({0}, {1}, {2})")]
    NotAntisymmetric(usize, usize, usize),

    #[error("map is not a Lie algebra morphism on basis pair ({0}, {1})")]
    NotLieMorphism(usize, usize),

    #[error("map is not a group homomorphism: f({a}*{b}) != f({a})*f({b})")]
    NotHomomorphism { a: usize, b: usize },

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("group order {order} exceeds configured bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("eigenvalue angle {angle} is not within {tolerance} of a multiple of 2pi/{order}")]
    EigenvalueNotRootOfUnity {
        angle: f64,
        order: usize,
        tolerance: f64,
    },

    #[error("character average is not a non-negative integer: {0}")]
    NonIntegralAverage(String),

    #[error("1-cochain is not a strict cocycle on simplex {0}")]
    NotCocycle(String),

    #[error("subgroup is not central in the extension")]
    NotCentral,

    #[error("invalid group extension: {0}")]
    InvalidExtension(String),

    #[error("surface is not closed and oriented: {0}")]
    NotClosedSurface(String),

    #[error("unsupported coefficients: {0}")]
    UnsupportedCoefficients(String),
}

pub type Result<T> = std::result::Result<T, Error>;
