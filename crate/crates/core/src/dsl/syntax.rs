use std::fmt;

use crate::doxastic::ModalStatus;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    Possibly(String),
    Classify(String),
    Ratio(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementKind {
    World {
        name: String,
        atoms: Vec<String>,
    },
    Individual {
        world: String,
        name: String,
        atoms: Vec<String>,
    },
    Possibility {
        name: String,
        functional: bool,
        /// (individual, world) pairs.
        members: Vec<(String, String)>,
    },
    Construct {
        name: String,
        inputs: Vec<String>,
    },
    Context {
        name: String,
        agent: String,
        now: String,
        parent: Option<String>,
    },
    Assert {
        context: String,
        status: ModalStatus,
        possibility: String,
    },
    Agent {
        context: String,
        agent: String,
        status: ModalStatus,
    },
    Testify {
        context: String,
        speaker: String,
        now: String,
        status: ModalStatus,
        possibility: String,
    },
    Endorse {
        context: String,
        testimony: String,
    },
    Reject {
        context: String,
        testimony: String,
    },
    Epoch,
    Query {
        context: String,
        query: Query,
    },
    Stage {
        id: String,
        parents: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    /// 1-based source line.
    pub line: usize,
    pub kind: StatementKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Statement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub severity: Severity,
    pub message: String,
    pub token: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
        };
        write!(
            f,
            "{}:{}: {severity}: {}",
            self.line, self.column, self.message
        )?;
        if !self.token.is_empty() {
            write!(f, " (at `{}`)", self.token)?;
        }
        Ok(())
    }
}
