use thiserror::Error;

use crate::scalar::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertibleMod { value: String, modulus: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch { context: &'static str, left: usize, right: usize },
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("subspaces live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("not a chain map at this degree: {0}")]
    NotAChainMap(String),
    #[error("boundary requested in degree 0")]
    DegreeZero,
    #[error("degree {degree} outside the built range 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("complex inconsistency: ∂∂≠0 at degree {0}")]
    ComplexInconsistency(usize),
    #[error("size guard exceeded: estimated {estimated} bytes, cap {cap} bytes")]
    SizeGuard { estimated: u128, cap: u128 },
    #[error("matrix size must be at least 1")]
    ZeroSize,
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("AeA ≠ A: the idempotent is not full")]
    NotFullIdempotent,
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("bimodule is not A-symmetric")]
    NotSymmetric,
    #[error("not a bimodule morphism")]
    NotBimoduleMorphism,
    #[error("Morita data endpoints do not match")]
    EndpointMismatch,
    #[error("invalid triple morphism: {0}")]
    InvalidMorphism(String),
    #[error("dual-basis certificate has no solution")]
    DualBasisInfeasible,
    #[error("homotopy index {index} out of range for degree {degree}")]
    HomotopyIndex { index: usize, degree: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}
