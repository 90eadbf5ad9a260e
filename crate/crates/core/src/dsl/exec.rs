//! Statement execution against a store.

use std::collections::BTreeMap;
use std::fmt;

use super::parser::parse_script;
use super::syntax::{Diagnostic, Query, Script, Statement, StatementKind};
use crate::doxastic::{Epoch, Verdict};
use crate::error::{Error, Result};
use crate::identity::{merge, StageId};
use crate::store::Store;

/// A store plus the per-stage snapshots needed to branch or merge by stage
/// id, and the output lines produced by queries so far.
#[derive(Debug, Clone, Default)]
pub struct Session {
    store: Store,
    snapshots: BTreeMap<String, Store>,
    pub outputs: Vec<String>,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_store(store: Store) -> Self {
        Session {
            store,
            snapshots: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn into_store(self) -> Store {
        self.store
    }

    /// Runs one statement. Query answers are returned and also appended to
    /// `outputs`. A rejected assertion is an error and leaves the store as it was.
    pub fn run(&mut self, statement: &StatementKind) -> Result<Option<String>> {
        let out = self.apply(statement)?;
        if let Some(line) = &out {
            self.outputs.push(line.clone());
        }
        Ok(out)
    }

    fn apply(&mut self, statement: &StatementKind) -> Result<Option<String>> {
        let store = &mut self.store;
        match statement {
            StatementKind::World { name, atoms } => {
                store.universe.model.add_world(name, atoms)?;
            }
            StatementKind::Individual { world, name, atoms } => {
                let model = &mut store.universe.model;
                let w = model
                    .world_by_name(world)
                    .ok_or_else(|| Error::UnknownWorld(world.clone()))?;
                let extent = model.atoms(w, atoms)?;
                model.add_individual(w, extent, Some(name))?;
            }
            StatementKind::Possibility {
                name,
                functional,
                members,
            } => {
                let model = &store.universe.model;
                let ids = members
                    .iter()
                    .map(|(ind, world)| {
                        let w = model
                            .world_by_name(world)
                            .ok_or_else(|| Error::UnknownWorld(world.clone()))?;
                        model
                            .individual_by_name(w, ind)
                            .ok_or_else(|| Error::UnknownIndividual(format!("{ind}@{world}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                store.universe.define_possibility(name, ids, *functional)?;
            }
            StatementKind::Construct { name, inputs } => {
                let ids = inputs
                    .iter()
                    .map(|p| store.universe.resolve(p))
                    .collect::<Result<Vec<_>>>()?;
                store.universe.comoverlap_construct(&ids, name)?;
            }
            StatementKind::Context {
                name,
                agent,
                now,
                parent,
            } => {
                let agent = store.possibility(agent)?;
                let now = store.possibility(now)?;
                let parent = parent.as_deref().map(|p| store.context(p)).transpose()?;
                store.open_context(name, agent, now, parent)?;
            }
            StatementKind::Assert {
                context,
                status,
                possibility,
            } => {
                let ctx = store.context(context)?;
                let p = store.possibility(possibility)?;
                if let Verdict::Rejected(report) = store.assert_status(ctx, p, *status)? {
                    return Err(Error::ModallyInconsistent(Box::new(report)));
                }
            }
            StatementKind::Agent {
                context,
                agent,
                status,
            } => {
                let ctx = store.context(context)?;
                let p = store.possibility(agent)?;
                store.register_agent(ctx, p, *status)?;
            }
            StatementKind::Testify {
                context,
                speaker,
                now,
                status,
                possibility,
            } => {
                let ctx = store.context(context)?;
                let speaker = store.possibility(speaker)?;
                let now = store.possibility(now)?;
                let p = store.possibility(possibility)?;
                store.record_testimony(ctx, speaker, now, p, *status)?;
            }
            StatementKind::Endorse { context, testimony } => {
                let ctx = store.context(context)?;
                if let Verdict::Rejected(report) = store.endorse(ctx, testimony)? {
                    return Err(Error::ModallyInconsistent(Box::new(report)));
                }
            }
            StatementKind::Reject { context, testimony } => {
                let ctx = store.context(context)?;
                store.reject_testimony(ctx, testimony)?;
            }
            StatementKind::Epoch => {
                store.advance_epoch();
            }
            StatementKind::Query { context, query } => {
                return answer_query(store, context, query, None).map(Some);
            }
            StatementKind::Stage { id, parents } => self.stage(id, parents)?,
        }
        Ok(None)
    }

    fn stage(&mut self, id: &str, parents: &[String]) -> Result<()> {
        let tip = self.store.lineage().tip().id.to_string();
        if parents.is_empty() {
            return if id == tip {
                Ok(())
            } else {
                Err(Error::UnknownStage(id.to_string()))
            };
        }
        self.snapshots.insert(tip, self.store.clone());
        let snapshot = |p: &String| {
            self.snapshots
                .get(p)
                .ok_or_else(|| Error::UnknownStage(p.clone()))
        };
        let next = match parents {
            [p] => snapshot(p)?.branch(StageId::new(id))?,
            [p, q] => {
                let merged = merge(snapshot(p)?, snapshot(q)?)?;
                let got = merged.lineage().tip().id.clone();
                if got.as_str() != id {
                    return Err(Error::Replay(format!(
                        "merging `{p}` and `{q}` yields stage `{got}`, not `{id}`"
                    )));
                }
                merged
            }
            _ => return Err(Error::Replay(format!("stage `{id}` has too many parents"))),
        };
        self.store = next;
        Ok(())
    }
}

/// Formats the answer to a query, at `at` or the current epoch.
///
/// `possibly` answers `yes`/`no`; `classify` answers the status; `ratio`
/// answers the credence ratio. Every answer carries the owner and the epoch.
pub fn answer_query(
    store: &Store,
    context: &str,
    query: &Query,
    at: Option<Epoch>,
) -> Result<String> {
    let ctx = store.context(context)?;
    let at = at.unwrap_or(store.epoch());
    let beliefs = store.beliefs();
    let owner = store.universe.name(beliefs.context(ctx)?.agent).to_string();
    Ok(match query {
        Query::Possibly(p) => {
            let p = store.possibility(p)?;
            beliefs.answer_at(&store.universe, ctx, p, at)?.to_string()
        }
        Query::Classify(p) => {
            let p = store.possibility(p)?;
            let status = beliefs.classify(&store.universe, ctx, p, at)?;
            format!("{status} | owner={owner} | epoch={at}")
        }
        Query::Ratio(q, p) => {
            let q = store.possibility(q)?;
            let p = store.possibility(p)?;
            let ratio = beliefs.credence_ratio(&store.universe, q, p, ctx, at)?;
            format!("{ratio} | owner={owner} | epoch={at}")
        }
    })
}

/// The world sets behind an answer.
pub fn explain_query(
    store: &Store,
    context: &str,
    query: &Query,
    at: Option<Epoch>,
) -> Result<Vec<String>> {
    let ctx = store.context(context)?;
    let at = at.unwrap_or(store.epoch());
    let u = &store.universe;
    let state = store.beliefs().solve_worlds(u, ctx, at)?;
    let mut lines = vec![
        format!("candidates = {}", u.display_worlds(&state.candidates)),
        format!("allowed = {}", u.display_worlds(&state.allowed)),
    ];
    for c in store.beliefs().context(ctx)?.live_at(at) {
        lines.push(format!(
            "live {} {} (epoch {})",
            c.status,
            u.name(c.possibility),
            c.asserted_at
        ));
    }
    let names: Vec<&String> = match query {
        Query::Possibly(p) | Query::Classify(p) => vec![p],
        Query::Ratio(q, p) => vec![q, p],
    };
    for name in names {
        let worlds = u.worlds_of(u.resolve(name)?)?;
        lines.push(format!("worlds({name}) = {}", u.display_worlds(worlds)));
    }
    Ok(lines)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecError {
    pub line: usize,
    pub error: Error,
}

impl fmt::Display for ExecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

impl std::error::Error for ExecError {}

impl ExecError {
    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic {
            line: self.line,
            column: 1,
            severity: super::Severity::Error,
            message: self.error.to_string(),
            token: String::new(),
        }
    }
}

/// Runs a parsed script from an empty store, stopping at the first failure.
pub fn execute(script: &Script) -> std::result::Result<Session, ExecError> {
    let mut session = Session::new();
    for Statement { line, kind } in &script.statements {
        session
            .run(kind)
            .map_err(|error| ExecError { line: *line, error })?;
    }
    Ok(session)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadError {
    Parse(Vec<Diagnostic>),
    Exec(ExecError),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Parse(ds) => {
                for (i, d) in ds.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
            LoadError::Exec(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LoadError {}

/// Parses and runs a script.
pub fn load_str(text: &str) -> std::result::Result<Session, LoadError> {
    let script = parse_script(text).map_err(LoadError::Parse)?;
    execute(&script).map_err(LoadError::Exec)
}
