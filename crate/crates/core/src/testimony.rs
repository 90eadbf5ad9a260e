//! Agents, testimony and nested contexts.
//!
//! A testimony is stored as a constraint inside a context nested under the
//! receiving context and indexed to the speaker. Recording never touches the
//! receiving context's own constraints; adopting the content is a separate
//! endorsement that goes through the normal guard rail.

use std::collections::BTreeSet;
use std::fmt;

use crate::doxastic::{
    solve, BeliefBase, ConflictEntry, ConflictReport, ContextId, Epoch, ModalStatus, Provenance,
    Verdict,
};
use crate::error::{Error, Result};
use crate::identity::StageId;
use crate::possibility::{PossibilityId, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endorsement {
    Recorded,
    Endorsed,
    Rejected,
}

impl fmt::Display for Endorsement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endorsement::Recorded => "recorded",
            Endorsement::Endorsed => "endorsed",
            Endorsement::Rejected => "rejected",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentRecord {
    pub context: ContextId,
    pub agent: PossibilityId,
    /// Existence status as held by the registering context.
    pub existence: ModalStatus,
    pub registered_at: Epoch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestimonyRecord {
    pub id: String,
    pub speaker: PossibilityId,
    pub now: PossibilityId,
    pub at: Epoch,
    pub possibility: PossibilityId,
    pub status: ModalStatus,
    pub speaker_context: ContextId,
    pub receiving_context: ContextId,
    pub endorsement: Endorsement,
}

/// Name of the context holding what `speaker` said under `parent` from `at`.
pub fn nested_context_name(parent: &str, speaker: &str, at: Epoch) -> String {
    format!("{parent}.{speaker}@{at}")
}

impl BeliefBase {
    pub fn agents(&self, ctx: ContextId) -> impl Iterator<Item = &AgentRecord> {
        self.agents
            .range((ctx, PossibilityId(0))..=(ctx, PossibilityId(u32::MAX)))
            .map(|(_, r)| r)
    }

    pub fn agent_record(&self, ctx: ContextId, agent: PossibilityId) -> Option<&AgentRecord> {
        self.agents.get(&(ctx, agent))
    }

    pub fn testimonies(&self) -> impl Iterator<Item = &TestimonyRecord> {
        self.testimonies.values()
    }

    pub fn testimony(&self, id: &str) -> Result<&TestimonyRecord> {
        self.testimonies
            .get(id)
            .ok_or_else(|| Error::UnknownTestimony(id.to_string()))
    }

    /// Registers `agent` in `ctx` by asserting its existence status there.
    pub(crate) fn register_agent(
        &mut self,
        universe: &Universe,
        ctx: ContextId,
        agent: PossibilityId,
        existence: ModalStatus,
        stage: StageId,
    ) -> Result<AgentRecord> {
        let provenance = Provenance {
            stage,
            testimony: None,
        };
        match self.assert_status(universe, ctx, agent, existence, provenance)? {
            Verdict::Rejected(report) => Err(Error::ModallyInconsistent(Box::new(report))),
            Verdict::Accepted(at) => {
                let record = AgentRecord {
                    context: ctx,
                    agent,
                    existence,
                    registered_at: at,
                };
                self.agents.insert((ctx, agent), record.clone());
                Ok(record)
            }
        }
    }

    /// The most recent context opened under `ctx` for `speaker` indexed to `now`.
    pub(crate) fn reusable_nested(
        &self,
        ctx: ContextId,
        speaker: PossibilityId,
        now: PossibilityId,
    ) -> Option<ContextId> {
        self.nested
            .range((ctx, speaker, Epoch(0))..=(ctx, speaker, Epoch(u64::MAX)))
            .rev()
            .map(|(_, &id)| id)
            .find(|&id| self.context(id).is_ok_and(|c| c.now == now))
    }

    /// Records that `speaker` testified `status` of `possibility`.
    ///
    /// The receiving context is untouched. The content is asserted inside the
    /// speaker's nested context, which is opened on first use, and the guard
    /// rail applies there only.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn record_testimony(
        &mut self,
        universe: &Universe,
        ctx: ContextId,
        speaker: PossibilityId,
        now: PossibilityId,
        possibility: PossibilityId,
        status: ModalStatus,
        id: String,
        stage: StageId,
    ) -> Result<TestimonyRecord> {
        let parent_name = self.context(ctx)?.name.clone();
        universe.possibility(possibility)?;
        if self.agent_record(ctx, speaker).is_none() {
            return Err(Error::UnregisteredAgent {
                context: parent_name,
                agent: universe.name(speaker).to_string(),
            });
        }
        if self.testimonies.contains_key(&id) {
            return Err(Error::DuplicateName(id));
        }
        if !universe.comoverlapable(&[speaker, now])? {
            return Err(Error::NotComoverlapable);
        }
        let reuse = self.reusable_nested(ctx, speaker, now);
        let next = self.epoch.next();
        let fresh_name = nested_context_name(&parent_name, universe.name(speaker), next);
        match reuse {
            Some(nested) => {
                if let Err(report) = self.try_assert(universe, nested, possibility, status)? {
                    return Err(Error::ModallyInconsistent(Box::new(report)));
                }
            }
            None => {
                if self.context_by_name(&fresh_name).is_some() {
                    return Err(Error::DuplicateName(fresh_name));
                }
                let candidates = universe.comoverlap_worlds(&[speaker, now])?;
                let worlds = universe.worlds_of(possibility)?;
                if solve(&candidates, &[(status, worlds)]).is_none() {
                    return Err(Error::ModallyInconsistent(Box::new(ConflictReport {
                        context: fresh_name,
                        members: vec![ConflictEntry {
                            possibility: universe.name(possibility).to_string(),
                            status,
                            asserted_at: None,
                            stage: None,
                        }],
                    })));
                }
            }
        }
        let at = self.tick();
        let nested = match reuse {
            Some(nested) => nested,
            None => {
                let nested = self.open_context(universe, &fresh_name, speaker, now, Some(ctx))?;
                self.nested.insert((ctx, speaker, at), nested);
                nested
            }
        };
        let provenance = Provenance {
            stage,
            testimony: Some(id.clone()),
        };
        self.record(nested, possibility, status, at, provenance);
        let record = TestimonyRecord {
            id: id.clone(),
            speaker,
            now,
            at,
            possibility,
            status,
            speaker_context: nested,
            receiving_context: ctx,
            endorsement: Endorsement::Recorded,
        };
        self.testimonies.insert(id, record.clone());
        Ok(record)
    }

    /// Adopts a recorded testimony's content into `ctx` through the guard rail.
    pub(crate) fn endorse(
        &mut self,
        universe: &Universe,
        ctx: ContextId,
        id: &str,
        stage: StageId,
    ) -> Result<Verdict> {
        self.context(ctx)?;
        let record = self.testimony(id)?;
        if record.endorsement != Endorsement::Recorded {
            return Err(Error::TestimonySettled(id.to_string()));
        }
        let (possibility, status) = (record.possibility, record.status);
        let provenance = Provenance {
            stage,
            testimony: Some(id.to_string()),
        };
        let verdict = self.assert_status(universe, ctx, possibility, status, provenance)?;
        if verdict.is_accepted() {
            if let Some(r) = self.testimonies.get_mut(id) {
                r.endorsement = Endorsement::Endorsed;
            }
        }
        Ok(verdict)
    }

    /// Marks a recorded testimony as declined. Advances the epoch.
    pub(crate) fn reject_testimony(&mut self, ctx: ContextId, id: &str) -> Result<Epoch> {
        self.context(ctx)?;
        let record = self.testimony(id)?;
        if record.endorsement != Endorsement::Recorded {
            return Err(Error::TestimonySettled(id.to_string()));
        }
        let at = self.tick();
        if let Some(r) = self.testimonies.get_mut(id) {
            r.endorsement = Endorsement::Rejected;
        }
        Ok(at)
    }

    /// The nested context for `speaker` under `ctx` that was current at `at`.
    pub fn nested_context(
        &self,
        ctx: ContextId,
        speaker: PossibilityId,
        at: Epoch,
    ) -> Option<ContextId> {
        self.nested
            .range((ctx, speaker, Epoch(0))..=(ctx, speaker, at))
            .next_back()
            .map(|(_, &id)| id)
    }

    /// What `speaker` held about `possibility` at `at`, according to the
    /// testimony recorded under `ctx`.
    pub fn agent_belief(
        &self,
        universe: &Universe,
        ctx: ContextId,
        speaker: PossibilityId,
        at: Epoch,
        possibility: PossibilityId,
    ) -> Result<ModalStatus> {
        let name = self.context(ctx)?.name.clone();
        let nested =
            self.nested_context(ctx, speaker, at)
                .ok_or_else(|| Error::UnknownNestedContext {
                    context: name,
                    speaker: universe.name(speaker).to_string(),
                    epoch: at.0,
                })?;
        self.classify(universe, nested, possibility, at)
    }

    /// Every context reachable from `ctx` through testimony nesting, `ctx` first.
    pub fn context_tree(&self, ctx: ContextId) -> Vec<ContextId> {
        let mut out = vec![ctx];
        let mut seen = BTreeSet::from([ctx]);
        let mut i = 0;
        while i < out.len() {
            let parent = out[i];
            for c in self.contexts() {
                if c.parent == Some(parent) && seen.insert(c.id) {
                    out.push(c.id);
                }
            }
            i += 1;
        }
        out
    }
}
