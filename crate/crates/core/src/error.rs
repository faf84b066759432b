use thiserror::Error;

use crate::model::Weight;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
        found: String,
    },

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),

    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),

    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),

    #[error("world `{world}` has no value for atom `{atom}`")]
    IncompleteValuation { world: String, atom: String },

    #[error("universe has no worlds")]
    EmptyUniverse,

    #[error("universe of {size} worlds exceeds the bound of {bound}")]
    UniverseTooLarge { size: usize, bound: usize },

    #[error("world `{world}` appears in rank {first} and rank {second}")]
    OverlappingSupports {
        world: String,
        first: usize,
        second: usize,
    },

    #[error("rank {rank} weights sum to {sum}, expected 1")]
    WeightSum { rank: usize, sum: Weight },

    #[error("rank {rank} has a non-positive weight {weight} on world `{world}`")]
    NonPositiveWeight {
        rank: usize,
        world: String,
        weight: Weight,
    },

    #[error("rank {0} has an empty support")]
    EmptyRank(usize),

    #[error("invalid conditional table: {axiom} fails at {instance}")]
    InvalidTable { axiom: String, instance: String },

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("line {line}: {message}")]
    ModelFile { line: usize, message: String },
}
