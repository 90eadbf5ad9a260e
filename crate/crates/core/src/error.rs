use thiserror::Error;

use crate::doxastic::ConflictReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while building or querying a store.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // kernel
    #[error("a world needs at least one atom")]
    EmptyWorld,
    #[error("duplicate atom label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("atom `{atom}` is not part of world `{world}`")]
    AtomOutsideWorld { world: String, atom: String },
    #[error("an individual needs a nonempty extent")]
    EmptyExtent,
    #[error("unknown individual `{0}`")]
    UnknownIndividual(String),
    #[error("mereology is intra-world: `{0}` and `{1}` live in different worlds")]
    CrossWorldMereology(String, String),
    #[error("the individuals share no common part")]
    NoCommonPart,
    #[error("name `{0}` is already bound")]
    DuplicateName(String),

    // possibility
    #[error("a possibility needs at least one member")]
    EmptyPossibility,
    #[error("functional possibility `{name}` has two members in world `{world}`")]
    FunctionalViolation { name: String, world: String },
    #[error("unknown possibility `{0}`")]
    UnknownPossibility(String),
    #[error("the set of possibilities is empty")]
    EmptySet,
    #[error("the possibilities never jointly overlap")]
    NotComoverlapable,

    // doxastic
    #[error("unknown context `{0}`")]
    UnknownContext(String),
    #[error("context `{0}` is modally inconsistent")]
    InconsistentContext(String),
    #[error("epoch {requested} is in the future (current epoch is {current})")]
    FutureEpoch { requested: u64, current: u64 },
    #[error("{0}")]
    ModallyInconsistent(Box<ConflictReport>),
    #[error("credence ratio undefined: `{0}` is impossible in this context")]
    ZeroDenominator(String),
    #[error("{count} candidate worlds exceed the oracle bound of {bound}")]
    TooManyCandidates { count: usize, bound: usize },

    // testimony
    #[error("agent `{agent}` is not registered in context `{context}`")]
    UnregisteredAgent { context: String, agent: String },
    #[error("unknown testimony `{0}`")]
    UnknownTestimony(String),
    #[error("testimony `{0}` has already been endorsed or rejected")]
    TestimonySettled(String),
    #[error("no testimony context for `{speaker}` under `{context}` at or before epoch {epoch}")]
    UnknownNestedContext {
        context: String,
        speaker: String,
        epoch: u64,
    },

    // identity
    #[error("store is inconsistent: {0}")]
    InconsistentStore(String),
    #[error("the stores share no lineage prefix")]
    DisjointLineages,
    #[error("stage `{0}` has diverging contents in the two stores")]
    DivergentStage(String),
    #[error("the stores are built over different models")]
    ModelMismatch,
    #[error("unknown stage `{0}`")]
    UnknownStage(String),
    #[error("replay failed: {0}")]
    Replay(String),
}

impl Error {
    /// True for errors caused by a reference to something that does not exist.
    pub fn is_unknown_reference(&self) -> bool {
        matches!(
            self,
            Error::UnknownWorld(_)
                | Error::UnknownIndividual(_)
                | Error::UnknownPossibility(_)
                | Error::UnknownContext(_)
                | Error::UnknownTestimony(_)
                | Error::UnknownNestedContext { .. }
                | Error::UnknownStage(_)
                | Error::UnregisteredAgent { .. }
        )
    }

    pub fn is_modal_inconsistency(&self) -> bool {
        matches!(
            self,
            Error::ModallyInconsistent(_)
                | Error::InconsistentContext(_)
                | Error::InconsistentStore(_)
        )
    }
}
