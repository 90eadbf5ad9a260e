//! The store: a universe, the beliefs held over it, and the event log that
//! produced those beliefs, split into lineage stages.
//!
//! Every belief mutation goes through the store so that it is logged. Events
//! refer to contexts and possibilities by name, which lets a log be replayed
//! onto any universe with the same declarations.

use std::collections::BTreeMap;

use crate::doxastic::{Answer, BeliefBase, ContextId, Epoch, ModalStatus, Provenance, Verdict};
use crate::error::Result;
use crate::identity::{Lineage, StageId};
use crate::possibility::{PossibilityId, Universe};
use crate::testimony::{nested_context_name, AgentRecord, Endorsement, TestimonyRecord};

/// A logged belief mutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    /// An idle epoch advance.
    Tick,
    OpenContext {
        name: String,
        agent: String,
        now: String,
        parent: Option<String>,
    },
    Assert {
        context: String,
        possibility: String,
        status: ModalStatus,
    },
    RegisterAgent {
        context: String,
        agent: String,
        status: ModalStatus,
    },
    Testify {
        id: String,
        context: String,
        speaker: String,
        now: String,
        possibility: String,
        status: ModalStatus,
    },
    Endorse {
        context: String,
        testimony: String,
    },
    Reject {
        context: String,
        testimony: String,
    },
}

/// An event with the epoch it carries: the new epoch for mutations that
/// advance the clock, the current one for context openings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoggedEvent {
    pub epoch: Epoch,
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Store {
    pub universe: Universe,
    pub(crate) beliefs: BeliefBase,
    pub(crate) lineage: Lineage,
}

impl Default for Store {
    fn default() -> Self {
        Self::new()
    }
}

impl Store {
    pub fn new() -> Self {
        Self::with_universe(Universe::default())
    }

    pub fn with_universe(universe: Universe) -> Self {
        Store {
            universe,
            beliefs: BeliefBase::new(),
            lineage: Lineage::new(),
        }
    }

    pub fn beliefs(&self) -> &BeliefBase {
        &self.beliefs
    }

    pub fn lineage(&self) -> &Lineage {
        &self.lineage
    }

    pub fn epoch(&self) -> Epoch {
        self.beliefs.epoch()
    }

    pub fn context(&self, name: &str) -> Result<ContextId> {
        self.beliefs.resolve_context(name)
    }

    pub fn possibility(&self, name: &str) -> Result<PossibilityId> {
        self.universe.resolve(name)
    }

    fn log(&mut self, epoch: Epoch, event: Event) {
        self.lineage
            .tip_mut()
            .events
            .push(LoggedEvent { epoch, event });
    }

    fn provenance(&self) -> Provenance {
        Provenance {
            stage: self.lineage.tip().id.clone(),
            testimony: None,
        }
    }

    fn ctx_name(&self, ctx: ContextId) -> String {
        self.beliefs.context_name(ctx).to_string()
    }

    fn poss_name(&self, p: PossibilityId) -> String {
        self.universe.name(p).to_string()
    }

    pub fn advance_epoch(&mut self) -> Epoch {
        let at = self.beliefs.tick();
        self.log(at, Event::Tick);
        at
    }

    pub fn open_context(
        &mut self,
        name: &str,
        agent: PossibilityId,
        now: PossibilityId,
        parent: Option<ContextId>,
    ) -> Result<ContextId> {
        let id = self
            .beliefs
            .open_context(&self.universe, name, agent, now, parent)?;
        let event = Event::OpenContext {
            name: name.to_string(),
            agent: self.poss_name(agent),
            now: self.poss_name(now),
            parent: parent.map(|p| self.ctx_name(p)),
        };
        self.log(self.epoch(), event);
        Ok(id)
    }

    /// Asserts through the guard rail. Rejections leave the store untouched.
    pub fn assert_status(
        &mut self,
        ctx: ContextId,
        possibility: PossibilityId,
        status: ModalStatus,
    ) -> Result<Verdict> {
        let provenance = self.provenance();
        let verdict =
            self.beliefs
                .assert_status(&self.universe, ctx, possibility, status, provenance)?;
        if let Verdict::Accepted(at) = verdict {
            let event = Event::Assert {
                context: self.ctx_name(ctx),
                possibility: self.poss_name(possibility),
                status,
            };
            self.log(at, event);
        }
        Ok(verdict)
    }

    pub fn register_agent(
        &mut self,
        ctx: ContextId,
        agent: PossibilityId,
        existence: ModalStatus,
    ) -> Result<AgentRecord> {
        let stage = self.lineage.tip().id.clone();
        let record = self
            .beliefs
            .register_agent(&self.universe, ctx, agent, existence, stage)?;
        let event = Event::RegisterAgent {
            context: self.ctx_name(ctx),
            agent: self.poss_name(agent),
            status: existence,
        };
        self.log(record.registered_at, event);
        Ok(record)
    }

    /// Next testimony id: counted per stage so that ids from sibling
    /// branches never clash.
    fn next_testimony_id(&self) -> String {
        let tip = self.lineage.tip();
        let n = tip
            .events
            .iter()
            .filter(|e| matches!(e.event, Event::Testify { .. }))
            .count();
        format!("t{}@{}", n + 1, tip.id)
    }

    pub fn record_testimony(
        &mut self,
        ctx: ContextId,
        speaker: PossibilityId,
        now: PossibilityId,
        possibility: PossibilityId,
        status: ModalStatus,
    ) -> Result<TestimonyRecord> {
        let id = self.next_testimony_id();
        let stage = self.lineage.tip().id.clone();
        let record = self.beliefs.record_testimony(
            &self.universe,
            ctx,
            speaker,
            now,
            possibility,
            status,
            id.clone(),
            stage,
        )?;
        let event = Event::Testify {
            id,
            context: self.ctx_name(ctx),
            speaker: self.poss_name(speaker),
            now: self.poss_name(now),
            possibility: self.poss_name(possibility),
            status,
        };
        self.log(record.at, event);
        Ok(record)
    }

    pub fn endorse(&mut self, ctx: ContextId, testimony: &str) -> Result<Verdict> {
        let stage = self.lineage.tip().id.clone();
        let verdict = self
            .beliefs
            .endorse(&self.universe, ctx, testimony, stage)?;
        if let Verdict::Accepted(at) = verdict {
            let event = Event::Endorse {
                context: self.ctx_name(ctx),
                testimony: testimony.to_string(),
            };
            self.log(at, event);
        }
        Ok(verdict)
    }

    pub fn reject_testimony(&mut self, ctx: ContextId, testimony: &str) -> Result<Epoch> {
        let at = self.beliefs.reject_testimony(ctx, testimony)?;
        let event = Event::Reject {
            context: self.ctx_name(ctx),
            testimony: testimony.to_string(),
        };
        self.log(at, event);
        Ok(at)
    }

    pub fn classify(
        &self,
        ctx: ContextId,
        possibility: PossibilityId,
        at: Epoch,
    ) -> Result<ModalStatus> {
        self.beliefs.classify(&self.universe, ctx, possibility, at)
    }

    pub fn query_possibly(&self, ctx: ContextId, possibility: PossibilityId) -> Result<Answer> {
        self.beliefs
            .query_possibly(&self.universe, ctx, possibility)
    }

    /// True when every context has a solution at the current epoch.
    pub fn is_consistent(&self) -> bool {
        self.beliefs
            .inconsistent_contexts(&self.universe)
            .is_empty()
    }

    /// Current classification of every possibility in every context, keyed by
    /// (context name, possibility name). `None` marks an unsolvable context.
    pub fn classifications(&self) -> BTreeMap<(String, String), Option<ModalStatus>> {
        self.classifications_at(self.epoch())
    }

    pub fn classifications_at(&self, at: Epoch) -> BTreeMap<(String, String), Option<ModalStatus>> {
        let mut out = BTreeMap::new();
        for c in self.beliefs.contexts() {
            for p in self.universe.possibilities() {
                let status = self.beliefs.classify(&self.universe, c.id, p.id, at).ok();
                out.insert((c.name.clone(), p.name.clone()), status);
            }
        }
        out
    }

    /// Rebuilds the beliefs from the universe and the logged events alone.
    pub fn rebuild(&self) -> Result<Store> {
        let mut fresh = Store {
            universe: self.universe.clone(),
            beliefs: BeliefBase::new(),
            lineage: self.lineage.clone(),
        };
        for (stage, logged) in self.lineage.interleaved_events() {
            fresh.apply_raw(stage, logged)?;
        }
        fresh.beliefs.epoch = self.epoch();
        Ok(fresh)
    }

    /// Applies a logged event without guard rails, at the epoch it carries.
    /// Testimony transitions that are no longer valid are skipped.
    pub(crate) fn apply_raw(&mut self, stage: &StageId, logged: &LoggedEvent) -> Result<()> {
        let at = logged.epoch;
        self.beliefs.epoch = at;
        let provenance = |testimony: Option<String>| Provenance {
            stage: stage.clone(),
            testimony,
        };
        match &logged.event {
            Event::Tick => {}
            Event::OpenContext {
                name,
                agent,
                now,
                parent,
            } => {
                let agent = self.universe.resolve(agent)?;
                let now = self.universe.resolve(now)?;
                let parent = parent
                    .as_deref()
                    .map(|p| self.beliefs.resolve_context(p))
                    .transpose()?;
                self.beliefs
                    .open_or_reuse(&self.universe, name, agent, now, parent)?;
            }
            Event::Assert {
                context,
                possibility,
                status,
            } => {
                let ctx = self.beliefs.resolve_context(context)?;
                let p = self.universe.resolve(possibility)?;
                self.beliefs.record(ctx, p, *status, at, provenance(None));
            }
            Event::RegisterAgent {
                context,
                agent,
                status,
            } => {
                let ctx = self.beliefs.resolve_context(context)?;
                let p = self.universe.resolve(agent)?;
                self.beliefs.record(ctx, p, *status, at, provenance(None));
                self.beliefs.agents.insert(
                    (ctx, p),
                    AgentRecord {
                        context: ctx,
                        agent: p,
                        existence: *status,
                        registered_at: at,
                    },
                );
            }
            Event::Testify {
                id,
                context,
                speaker,
                now,
                possibility,
                status,
            } => {
                let ctx = self.beliefs.resolve_context(context)?;
                let speaker_id = self.universe.resolve(speaker)?;
                let now_id = self.universe.resolve(now)?;
                let p = self.universe.resolve(possibility)?;
                let nested = match self.beliefs.reusable_nested(ctx, speaker_id, now_id) {
                    Some(n) => n,
                    None => {
                        let name = nested_context_name(context, speaker, at);
                        let n = self.beliefs.open_or_reuse(
                            &self.universe,
                            &name,
                            speaker_id,
                            now_id,
                            Some(ctx),
                        )?;
                        self.beliefs.nested.insert((ctx, speaker_id, at), n);
                        n
                    }
                };
                self.beliefs
                    .record(nested, p, *status, at, provenance(Some(id.clone())));
                self.beliefs.testimonies.insert(
                    id.clone(),
                    TestimonyRecord {
                        id: id.clone(),
                        speaker: speaker_id,
                        now: now_id,
                        at,
                        possibility: p,
                        status: *status,
                        speaker_context: nested,
                        receiving_context: ctx,
                        endorsement: Endorsement::Recorded,
                    },
                );
            }
            Event::Endorse { context, testimony } => {
                let ctx = self.beliefs.resolve_context(context)?;
                let record = self.beliefs.testimony(testimony)?.clone();
                self.beliefs.record(
                    ctx,
                    record.possibility,
                    record.status,
                    at,
                    provenance(Some(testimony.clone())),
                );
                if let Some(r) = self.beliefs.testimonies.get_mut(testimony) {
                    r.endorsement = Endorsement::Endorsed;
                }
            }
            Event::Reject { context, testimony } => {
                self.beliefs.resolve_context(context)?;
                if let Some(r) = self.beliefs.testimonies.get_mut(testimony) {
                    if r.endorsement == Endorsement::Recorded {
                        r.endorsement = Endorsement::Rejected;
                    }
                }
            }
        }
        Ok(())
    }
}
