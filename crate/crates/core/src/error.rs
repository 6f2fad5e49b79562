use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("generators act on different degrees ({0} and {1})")]
    DegreeMismatch(usize, usize),

    #[error("group order exceeds the element cap of {cap}")]
    OrderCapExceeded { cap: usize },

    #[error("subgroup lattice exceeds the cap of {cap} subgroups")]
    LatticeCapExceeded { cap: usize },

    #[error("group {group} is not {pi}-separable")]
    NotSeparable { group: String, pi: String },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("Dixon's method failed: {0}")]
    Dixon(String),

    #[error("character admits more than one pi-factorization")]
    MultipleFactorizations,

    #[error("no Clifford correspondent found")]
    NoCorrespondent,

    #[error("no pi'-special extension of the stable character")]
    NoExtension,

    #[error("{0} pi'-special extensions of a stable character")]
    MultipleExtensions(usize),

    #[error("cone decomposition failed: {0}")]
    ConeDecompositionFailure(String),

    #[error("no vertex found for an irreducible partial character")]
    NoVertexFound,

    #[error("verification mismatch: {0}")]
    Mismatch(String),

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
