//! A modal knowledge store over finite possible-world models.
//!
//! Worlds are sets of atoms, individuals are world-bound atom sets, and
//! everything modal is computed from which worlds host which individuals:
//!
//! - [`kernel`]: worlds, individuals, part-of and overlap.
//! - [`possibility`]: counterpart sets and their joint modal status.
//! - [`doxastic`]: status constraints held in a context, solved to the
//!   worlds compatible with them, with history and credence ratios.
//! - [`testimony`]: agents and testimony in nested contexts.
//! - [`identity`]: stage lineage, fork and merge of whole stores.
//! - [`dsl`]: the `.pkb` text format.
//! - [`cli`]: the `pkb` command line.

pub mod cli;
pub mod doxastic;
pub mod dsl;
pub mod error;
pub mod identity;
pub mod kernel;
pub mod possibility;
pub mod store;
pub mod testimony;

pub use doxastic::{
    entails, Answer, BeliefBase, ConflictEntry, ConflictReport, ContextId, DoxasticState, Epoch,
    ModalStatus, OracleVerdict, Verdict,
};
pub use error::{Error, Result};
pub use identity::{fork, lineage, merge, StageId};
pub use kernel::{AtomId, Extent, IndividualId, Model, WorldId};
pub use possibility::{Compossibility, DeDictoStatus, PossibilityId, SetModalStatus, Universe};
pub use store::{Event, LoggedEvent, Store};
pub use testimony::{AgentRecord, Endorsement, TestimonyRecord};
