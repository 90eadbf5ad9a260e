//! The `.pkb` text language: one statement per line, `#` starts a comment.
//!
//! ```text
//! world w1 { edi.t1.a lon.t0.a }
//! ind w1 a1 { edi.t1.a lon.t0.a }
//! poss Annes functional { a1@w1 }
//! construct AnneInEdi = comoverlap(Annes, Edinburghs)
//! context root = ctx(Mes, Day30s)
//! assert root contingent AnneInEdi
//! agent root Bindis necessary
//! testify root Bindis @Day30s necessary AnneInEdi
//! endorse root t1@root
//! reject root t1@root
//! epoch
//! query root possibly AnneInEdi
//! stage root.1 from root
//! ```
//!
//! A store file is the canonical serialization of a store in this language.

mod exec;
mod parser;
mod serialize;
mod syntax;

pub use exec::{answer_query, execute, explain_query, load_str, ExecError, LoadError, Session};
pub use parser::{parse_line, parse_script, Resolver};
pub use serialize::{serialize, serialize_model};
pub use syntax::{Diagnostic, Query, Script, Severity, Statement, StatementKind};
