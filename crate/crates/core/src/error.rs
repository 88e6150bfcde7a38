use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("affinely dependent vertices in simplex {0}")]
    AffinelyDependent(String),
    #[error("geometric realization is not an embedding: open cells {0} and {1} intersect")]
    NotEmbedded(String, String),
    #[error("simplex {0} is not in the complex")]
    MissingSimplex(String),
    #[error("region is not {expected}: {detail}")]
    RegionKind { expected: &'static str, detail: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("restriction square does not commute: {0}")]
    NonCommuting(String),
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("objects live on different base spaces")]
    BaseMismatch,
    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("injective resolution did not terminate within {0} steps")]
    ResolutionDiverged(usize),
    #[error("resolution is not a quasi-isomorphism at cell {0}")]
    NotQuasiIsomorphic(String),
    #[error("covector is not generic: constant on edge {0}")]
    NonGeneric(String),
    #[error("covector does not annihilate the direction space of {0}")]
    NotConormal(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
