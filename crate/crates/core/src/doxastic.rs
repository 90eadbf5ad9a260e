//! The indexed belief layer.
//!
//! Beliefs are stored as status constraints (possible, necessary, contingent,
//! impossible) on possibilities, relative to a doxastic context: an agent
//! possibility taken at a "now" possibility. The context's candidate worlds
//! are the worlds where the agent overlaps now; its doxastically actual worlds
//! are the largest subset of candidates satisfying every live constraint.
//!
//! Constraints are never deleted. A new assertion on the same possibility
//! supersedes the previous one, which stays in the history with the epoch at
//! which it stopped being current.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::identity::StageId;
use crate::kernel::WorldId;
use crate::possibility::{PossibilityId, Universe};
use crate::testimony::{AgentRecord, TestimonyRecord};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Epoch(pub u64);

impl Epoch {
    pub fn next(self) -> Epoch {
        Epoch(self.0 + 1)
    }
}

impl fmt::Display for Epoch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalStatus {
    Possible,
    Necessary,
    Contingent,
    Impossible,
}

impl ModalStatus {
    pub const ALL: [ModalStatus; 4] = [
        ModalStatus::Possible,
        ModalStatus::Necessary,
        ModalStatus::Contingent,
        ModalStatus::Impossible,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModalStatus::Possible => "possible",
            ModalStatus::Necessary => "necessary",
            ModalStatus::Contingent => "contingent",
            ModalStatus::Impossible => "impossible",
        }
    }

    /// Literal reading of the status against a set of doxastic worlds.
    pub fn holds(self, doxastic: &BTreeSet<WorldId>, worlds: &BTreeSet<WorldId>) -> bool {
        let meets = !doxastic.is_disjoint(worlds);
        let within = doxastic.is_subset(worlds);
        match self {
            ModalStatus::Possible => meets,
            ModalStatus::Necessary => !doxastic.is_empty() && within,
            ModalStatus::Contingent => meets && !within,
            ModalStatus::Impossible => !meets,
        }
    }
}

impl fmt::Display for ModalStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModalStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "possible" => Ok(ModalStatus::Possible),
            "necessary" => Ok(ModalStatus::Necessary),
            "contingent" => Ok(ModalStatus::Contingent),
            "impossible" => Ok(ModalStatus::Impossible),
            other => Err(format!(
                "unknown status `{other}` (expected possible, necessary, contingent or impossible)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextId(pub(crate) u32);

impl ContextId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub context: ContextId,
    pub possibility: PossibilityId,
    pub status: ModalStatus,
    pub asserted_at: Epoch,
    pub superseded_at: Option<Epoch>,
    /// Whose belief this is: the agent of the asserting context.
    pub provenance: PossibilityId,
    /// Set when the constraint entered through an endorsed testimony.
    pub testimony: Option<String>,
    /// The lineage stage in which the assertion was made.
    pub stage: StageId,
}

impl Constraint {
    pub fn live_at(&self, at: Epoch) -> bool {
        self.asserted_at <= at && self.superseded_at.is_none_or(|s| s > at)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoxasticContext {
    pub id: ContextId,
    pub name: String,
    pub agent: PossibilityId,
    pub now: PossibilityId,
    pub parent: Option<ContextId>,
    pub opened_at: Epoch,
    constraints: Vec<Constraint>,
    live: BTreeMap<PossibilityId, usize>,
}

impl DoxasticContext {
    /// The full constraint log in assertion order.
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Constraints that are current right now.
    pub fn current(&self) -> impl Iterator<Item = &Constraint> {
        self.live.values().map(|&i| &self.constraints[i])
    }

    pub fn live_at(&self, at: Epoch) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(move |c| c.live_at(at))
    }
}

/// The solved view of a context at an epoch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoxasticState {
    pub context: ContextId,
    pub epoch: Epoch,
    pub candidates: BTreeSet<WorldId>,
    /// The doxastically actual worlds: the maximal satisfying candidate set.
    pub allowed: BTreeSet<WorldId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictEntry {
    pub possibility: String,
    pub status: ModalStatus,
    /// `None` for the assertion that was being proposed.
    pub asserted_at: Option<Epoch>,
    pub stage: Option<StageId>,
}

/// A minimal set of constraints that cannot hold together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictReport {
    pub context: String,
    pub members: Vec<ConflictEntry>,
}

impl fmt::Display for ConflictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "modal inconsistency in context `{}`:", self.context)?;
        for (i, m) in self.members.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{} {}", m.status, m.possibility)?;
            match (m.asserted_at, &m.stage) {
                (None, _) => write!(f, " (proposed)")?,
                (Some(e), Some(s)) => write!(f, " (epoch {e}, stage {s})")?,
                (Some(e), None) => write!(f, " (epoch {e})")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted(Epoch),
    Rejected(ConflictReport),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted(_))
    }
}

/// The answer to "is it possible that ...?", stamped with whose belief it is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer {
    pub possibly: bool,
    pub status: ModalStatus,
    pub owner: String,
    pub epoch: Epoch,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} | status={} | owner={} | epoch={}",
            if self.possibly { "yes" } else { "no" },
            self.status,
            self.owner,
            self.epoch
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HistoryEntry {
    pub status: ModalStatus,
    pub asserted_at: Epoch,
    pub superseded_at: Option<Epoch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub consistent: bool,
    /// Every nonempty candidate subset satisfying all constraints.
    pub satisfying: Vec<BTreeSet<WorldId>>,
}

pub const DEFAULT_ORACLE_BOUND: usize = 16;

/// Computes the doxastically actual worlds for a constraint set.
///
/// Necessary and impossible constraints cut the candidates down; possible
/// and contingent ones only impose witnesses, which a larger set can only
/// keep. So the cut set is the unique maximal candidate and the constraint
/// set is satisfiable iff it satisfies everything.
pub fn solve(
    candidates: &BTreeSet<WorldId>,
    constraints: &[(ModalStatus, &BTreeSet<WorldId>)],
) -> Option<BTreeSet<WorldId>> {
    let mut allowed = candidates.clone();
    for (status, worlds) in constraints {
        match status {
            ModalStatus::Necessary => allowed.retain(|w| worlds.contains(w)),
            ModalStatus::Impossible => allowed.retain(|w| !worlds.contains(w)),
            _ => {}
        }
    }
    if allowed.is_empty() {
        return None;
    }
    for (status, worlds) in constraints {
        let ok = match status {
            ModalStatus::Possible => !allowed.is_disjoint(worlds),
            ModalStatus::Contingent => !allowed.is_disjoint(worlds) && !allowed.is_subset(worlds),
            _ => true,
        };
        if !ok {
            return None;
        }
    }
    Some(allowed)
}

/// Brute force: tries every nonempty subset of the candidates.
pub fn oracle(
    candidates: &BTreeSet<WorldId>,
    constraints: &[(ModalStatus, &BTreeSet<WorldId>)],
    bound: usize,
) -> Result<OracleVerdict> {
    if candidates.len() > bound {
        return Err(Error::TooManyCandidates {
            count: candidates.len(),
            bound,
        });
    }
    let worlds: Vec<WorldId> = candidates.iter().copied().collect();
    let mut satisfying = Vec::new();
    for mask in 1u64..(1u64 << worlds.len()) {
        let subset: BTreeSet<WorldId> = worlds
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &w)| w)
            .collect();
        if constraints.iter().all(|(s, w)| s.holds(&subset, w)) {
            satisfying.push(subset);
        }
    }
    Ok(OracleVerdict {
        consistent: !satisfying.is_empty(),
        satisfying,
    })
}

/// The most specific status of a possibility relative to doxastic worlds.
pub fn classify_against(allowed: &BTreeSet<WorldId>, worlds: &BTreeSet<WorldId>) -> ModalStatus {
    if allowed.is_disjoint(worlds) {
        ModalStatus::Impossible
    } else if allowed.is_subset(worlds) {
        ModalStatus::Necessary
    } else {
        ModalStatus::Contingent
    }
}

/// Shrinks an unsatisfiable constraint list to an irreducible core by trying
/// to drop each member in turn. Returns indices into `constraints`.
pub fn minimal_conflict(
    candidates: &BTreeSet<WorldId>,
    constraints: &[(ModalStatus, &BTreeSet<WorldId>)],
) -> Vec<usize> {
    let mut kept: Vec<usize> = (0..constraints.len()).collect();
    let mut i = 0;
    while i < kept.len() {
        let trial: Vec<_> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &k)| constraints[k])
            .collect();
        if solve(candidates, &trial).is_none() {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

/// Structural dependency between possibilities: wherever `q` is, `p` is too,
/// and every member of `q` overlaps some member of `p` in its world.
pub fn entails(universe: &Universe, q: PossibilityId, p: PossibilityId) -> Result<bool> {
    let q_worlds = universe.worlds_of(q)?;
    let p_worlds = universe.worlds_of(p)?;
    if !q_worlds.is_subset(p_worlds) {
        return Ok(false);
    }
    let model = &universe.model;
    for &m in &universe.possibility(q)?.members {
        let world = model.individual(m).world;
        let mut overlapped = false;
        for n in universe.members_in(p, world)? {
            if model.overlap(m, n)? {
                overlapped = true;
                break;
            }
        }
        if !overlapped {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which lineage stage and testimony, if any, an assertion comes from.
#[derive(Debug, Clone)]
pub(crate) struct Provenance {
    pub stage: StageId,
    pub testimony: Option<String>,
}

/// All doxastic contexts of a store plus their constraint logs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BeliefBase {
    pub(crate) epoch: Epoch,
    contexts: Vec<DoxasticContext>,
    by_name: BTreeMap<String, ContextId>,
    pub(crate) nested: BTreeMap<(ContextId, PossibilityId, Epoch), ContextId>,
    pub(crate) agents: BTreeMap<(ContextId, PossibilityId), AgentRecord>,
    pub(crate) testimonies: BTreeMap<String, TestimonyRecord>,
}

impl BeliefBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn epoch(&self) -> Epoch {
        self.epoch
    }

    pub(crate) fn tick(&mut self) -> Epoch {
        self.epoch = self.epoch.next();
        self.epoch
    }

    pub fn contexts(&self) -> impl ExactSizeIterator<Item = &DoxasticContext> {
        self.contexts.iter()
    }

    pub fn context(&self, id: ContextId) -> Result<&DoxasticContext> {
        self.contexts
            .get(id.index())
            .ok_or_else(|| Error::UnknownContext(format!("context#{}", id.0)))
    }

    pub fn context_by_name(&self, name: &str) -> Option<ContextId> {
        self.by_name.get(name).copied()
    }

    pub fn resolve_context(&self, name: &str) -> Result<ContextId> {
        self.context_by_name(name)
            .ok_or_else(|| Error::UnknownContext(name.to_string()))
    }

    pub fn context_name(&self, id: ContextId) -> &str {
        self.contexts
            .get(id.index())
            .map(|c| c.name.as_str())
            .unwrap_or("?")
    }

    /// Worlds where the context's agent overlaps its now.
    pub fn candidates(&self, universe: &Universe, ctx: ContextId) -> Result<BTreeSet<WorldId>> {
        let c = self.context(ctx)?;
        universe.comoverlap_worlds(&[c.agent, c.now])
    }

    /// Opens a named context. The agent has to exist at the index time in at
    /// least one world.
    pub fn open_context(
        &mut self,
        universe: &Universe,
        name: &str,
        agent: PossibilityId,
        now: PossibilityId,
        parent: Option<ContextId>,
    ) -> Result<ContextId> {
        if self.by_name.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        if let Some(p) = parent {
            self.context(p)?;
        }
        if !universe.comoverlapable(&[agent, now])? {
            return Err(Error::NotComoverlapable);
        }
        let id = ContextId(self.contexts.len() as u32);
        self.contexts.push(DoxasticContext {
            id,
            name: name.to_string(),
            agent,
            now,
            parent,
            opened_at: self.epoch,
            constraints: Vec::new(),
            live: BTreeMap::new(),
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    /// Like [`open_context`](Self::open_context), but an existing context with
    /// the same name and definition is returned instead of rejected.
    pub(crate) fn open_or_reuse(
        &mut self,
        universe: &Universe,
        name: &str,
        agent: PossibilityId,
        now: PossibilityId,
        parent: Option<ContextId>,
    ) -> Result<ContextId> {
        if let Some(id) = self.context_by_name(name) {
            let c = &self.contexts[id.index()];
            if c.agent == agent && c.now == now && c.parent == parent {
                return Ok(id);
            }
            return Err(Error::DuplicateName(name.to_string()));
        }
        self.open_context(universe, name, agent, now, parent)
    }

    fn check_epoch(&self, at: Epoch) -> Result<()> {
        if at > self.epoch {
            return Err(Error::FutureEpoch {
                requested: at.0,
                current: self.epoch.0,
            });
        }
        Ok(())
    }

    fn report(
        &self,
        ctx: ContextId,
        candidates: &BTreeSet<WorldId>,
        entries: Vec<ConflictEntry>,
        worlds: Vec<&BTreeSet<WorldId>>,
    ) -> ConflictReport {
        let pairs: Vec<_> = entries.iter().map(|e| e.status).zip(worlds).collect();
        let core = minimal_conflict(candidates, &pairs);
        ConflictReport {
            context: self.context_name(ctx).to_string(),
            members: core.into_iter().map(|i| entries[i].clone()).collect(),
        }
    }

    fn entry(&self, universe: &Universe, c: &Constraint) -> ConflictEntry {
        ConflictEntry {
            possibility: universe.name(c.possibility).to_string(),
            status: c.status,
            asserted_at: Some(c.asserted_at),
            stage: Some(c.stage.clone()),
        }
    }

    /// Checks what the context would look like with `status` asserted on
    /// `possibility`, without recording anything.
    pub fn try_assert(
        &self,
        universe: &Universe,
        ctx: ContextId,
        possibility: PossibilityId,
        status: ModalStatus,
    ) -> Result<std::result::Result<BTreeSet<WorldId>, ConflictReport>> {
        self.check_assert(universe, ctx, possibility, status, false)
    }

    /// With `keep_own`, a current constraint on `possibility` that the context
    /// asserted itself (not adopted from testimony) stays in the check
    /// instead of being treated as superseded.
    fn check_assert(
        &self,
        universe: &Universe,
        ctx: ContextId,
        possibility: PossibilityId,
        status: ModalStatus,
        keep_own: bool,
    ) -> Result<std::result::Result<BTreeSet<WorldId>, ConflictReport>> {
        let context = self.context(ctx)?;
        let proposed_worlds = universe.worlds_of(possibility)?;
        let candidates = self.candidates(universe, ctx)?;
        let mut kept: Vec<&Constraint> = context
            .current()
            .filter(|c| c.possibility != possibility || (keep_own && c.testimony.is_none()))
            .collect();
        kept.sort_by_key(|c| (c.asserted_at, c.possibility));
        let mut entries: Vec<ConflictEntry> =
            kept.iter().map(|c| self.entry(universe, c)).collect();
        let mut worlds: Vec<&BTreeSet<WorldId>> = kept
            .iter()
            .map(|c| universe.worlds_of(c.possibility))
            .collect::<Result<_>>()?;
        entries.push(ConflictEntry {
            possibility: universe.name(possibility).to_string(),
            status,
            asserted_at: None,
            stage: None,
        });
        worlds.push(proposed_worlds);
        let pairs: Vec<_> = entries
            .iter()
            .map(|e| e.status)
            .zip(worlds.iter().copied())
            .collect();
        Ok(match solve(&candidates, &pairs) {
            Some(allowed) => Ok(allowed),
            None => Err(self.report(ctx, &candidates, entries, worlds)),
        })
    }

    /// Asserts a status through the guard rail. On acceptance the epoch
    /// advances and the constraint is stamped with the new epoch; on
    /// rejection nothing changes. Adopted testimony must agree with the
    /// context's own constraint on the same possibility; it replaces only
    /// earlier adopted testimony.
    pub(crate) fn assert_status(
        &mut self,
        universe: &Universe,
        ctx: ContextId,
        possibility: PossibilityId,
        status: ModalStatus,
        provenance: Provenance,
    ) -> Result<Verdict> {
        let keep_own = provenance.testimony.is_some();
        match self.check_assert(universe, ctx, possibility, status, keep_own)? {
            Err(report) => Ok(Verdict::Rejected(report)),
            Ok(_) => {
                let at = self.tick();
                self.record(ctx, possibility, status, at, provenance);
                Ok(Verdict::Accepted(at))
            }
        }
    }

    /// Appends a constraint without consulting the guard rail.
    pub(crate) fn record(
        &mut self,
        ctx: ContextId,
        possibility: PossibilityId,
        status: ModalStatus,
        at: Epoch,
        provenance: Provenance,
    ) {
        let context = &mut self.contexts[ctx.index()];
        if let Some(&prev) = context.live.get(&possibility) {
            let old = &mut context.constraints[prev];
            debug_assert!(old.superseded_at.is_none());
            old.superseded_at = Some(at);
        }
        let agent = context.agent;
        context.constraints.push(Constraint {
            context: ctx,
            possibility,
            status,
            asserted_at: at,
            superseded_at: None,
            provenance: agent,
            testimony: provenance.testimony,
            stage: provenance.stage,
        });
        context
            .live
            .insert(possibility, context.constraints.len() - 1);
    }

    pub fn solve_worlds(
        &self,
        universe: &Universe,
        ctx: ContextId,
        at: Epoch,
    ) -> Result<DoxasticState> {
        self.check_epoch(at)?;
        let context = self.context(ctx)?;
        let candidates = self.candidates(universe, ctx)?;
        let live: Vec<&Constraint> = context.live_at(at).collect();
        let worlds: Vec<&BTreeSet<WorldId>> = live
            .iter()
            .map(|c| universe.worlds_of(c.possibility))
            .collect::<Result<_>>()?;
        let pairs: Vec<_> = live
            .iter()
            .map(|c| c.status)
            .zip(worlds.iter().copied())
            .collect();
        match solve(&candidates, &pairs) {
            Some(allowed) => Ok(DoxasticState {
                context: ctx,
                epoch: at,
                candidates,
                allowed,
            }),
            None => {
                let entries = live.iter().map(|c| self.entry(universe, c)).collect();
                Err(Error::ModallyInconsistent(Box::new(self.report(
                    ctx,
                    &candidates,
                    entries,
                    worlds,
                ))))
            }
        }
    }

    fn allowed(&self, universe: &Universe, ctx: ContextId, at: Epoch) -> Result<BTreeSet<WorldId>> {
        match self.solve_worlds(universe, ctx, at) {
            Ok(state) => Ok(state.allowed),
            Err(Error::ModallyInconsistent(_)) => Err(Error::InconsistentContext(
                self.context_name(ctx).to_string(),
            )),
            Err(e) => Err(e),
        }
    }

    pub fn classify(
        &self,
        universe: &Universe,
        ctx: ContextId,
        possibility: PossibilityId,
        at: Epoch,
    ) -> Result<ModalStatus> {
        let allowed = self.allowed(universe, ctx, at)?;
        Ok(classify_against(&allowed, universe.worlds_of(possibility)?))
    }

    pub fn query_possibly(
        &self,
        universe: &Universe,
        ctx: ContextId,
        possibility: PossibilityId,
    ) -> Result<Answer> {
        self.answer_at(universe, ctx, possibility, self.epoch)
    }

    /// The possibly-answer as it stood at an earlier epoch.
    pub fn answer_at(
        &self,
        universe: &Universe,
        ctx: ContextId,
        possibility: PossibilityId,
        at: Epoch,
    ) -> Result<Answer> {
        let status = self.classify(universe, ctx, possibility, at)?;
        let agent = self.context(ctx)?.agent;
        Ok(Answer {
            possibly: status != ModalStatus::Impossible,
            status,
            owner: universe.name(agent).to_string(),
            epoch: at,
        })
    }

    pub fn history(&self, ctx: ContextId, possibility: PossibilityId) -> Result<Vec<HistoryEntry>> {
        Ok(self
            .context(ctx)?
            .constraints
            .iter()
            .filter(|c| c.possibility == possibility)
            .map(|c| HistoryEntry {
                status: c.status,
                asserted_at: c.asserted_at,
                superseded_at: c.superseded_at,
            })
            .collect())
    }

    /// Relative credence of `q` against `p`: the share of doxastically actual
    /// worlds, counted uniformly.
    pub fn credence_ratio(
        &self,
        universe: &Universe,
        q: PossibilityId,
        p: PossibilityId,
        ctx: ContextId,
        at: Epoch,
    ) -> Result<Ratio<u64>> {
        let allowed = self.allowed(universe, ctx, at)?;
        let count = |x: PossibilityId| -> Result<u64> {
            Ok(universe
                .worlds_of(x)?
                .iter()
                .filter(|w| allowed.contains(w))
                .count() as u64)
        };
        let numerator = count(q)?;
        let denominator = count(p)?;
        if denominator == 0 {
            return Err(Error::ZeroDenominator(universe.name(p).to_string()));
        }
        Ok(Ratio::new(numerator, denominator))
    }

    pub fn oracle_solve(
        &self,
        universe: &Universe,
        ctx: ContextId,
        at: Epoch,
        bound: usize,
    ) -> Result<OracleVerdict> {
        self.check_epoch(at)?;
        let context = self.context(ctx)?;
        let candidates = self.candidates(universe, ctx)?;
        let pairs: Vec<_> = context
            .live_at(at)
            .map(|c| Ok((c.status, universe.worlds_of(c.possibility)?)))
            .collect::<Result<_>>()?;
        oracle(&candidates, &pairs, bound)
    }

    /// Contexts whose current constraints have no solution.
    pub fn inconsistent_contexts(&self, universe: &Universe) -> Vec<String> {
        self.contexts
            .iter()
            .filter(|c| self.solve_worlds(universe, c.id, self.epoch).is_err())
            .map(|c| c.name.clone())
            .collect()
    }
}
