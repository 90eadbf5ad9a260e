//! Store lineage: stages of the event log, fork (fission) and merge (fusion).
//!
//! A stage is a run of events between branch points. Forking closes the tip
//! stage and starts two children that share it; merging replays the union of
//! both ancestries and opens a stage with both tips as parents.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::doxastic::{
    minimal_conflict, solve, BeliefBase, ConflictEntry, ConflictReport, Constraint, Epoch,
    ModalStatus,
};
use crate::dsl::serialize_model;
use crate::error::{Error, Result};
use crate::store::{LoggedEvent, Store};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StageId(String);

impl StageId {
    pub fn new(id: impl Into<String>) -> Self {
        StageId(id.into())
    }

    pub fn root() -> Self {
        StageId::new("root")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub id: StageId,
    pub parents: Vec<StageId>,
    /// First epoch of the stage's range.
    pub start: Epoch,
    /// Exclusive end, set when the stage is closed by a fork or merge.
    pub end: Option<Epoch>,
    pub events: Vec<LoggedEvent>,
}

impl Stage {
    fn open(id: StageId, parents: Vec<StageId>, start: Epoch) -> Self {
        Stage {
            id,
            parents,
            start,
            end: None,
            events: Vec::new(),
        }
    }

    fn same_segment(&self, other: &Stage) -> bool {
        self.parents == other.parents && self.start == other.start && self.events == other.events
    }
}

/// The stage DAG of one store. It always has a single open tip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lineage {
    stages: BTreeMap<StageId, Stage>,
    tip: StageId,
}

impl Default for Lineage {
    fn default() -> Self {
        Self::new()
    }
}

impl Lineage {
    pub fn new() -> Self {
        let root = Stage::open(StageId::root(), Vec::new(), Epoch(0));
        Lineage {
            stages: BTreeMap::from([(root.id.clone(), root)]),
            tip: StageId::root(),
        }
    }

    pub fn tip(&self) -> &Stage {
        &self.stages[&self.tip]
    }

    pub(crate) fn tip_mut(&mut self) -> &mut Stage {
        self.stages.get_mut(&self.tip).expect("tip stage exists")
    }

    pub fn stage(&self, id: &StageId) -> Option<&Stage> {
        self.stages.get(id)
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Stages in topological order; ties go to the earlier start, then the
    /// smaller id. The order does not depend on how the DAG was assembled.
    pub fn stages(&self) -> Vec<&Stage> {
        let mut pending: BTreeMap<&StageId, usize> = self
            .stages
            .values()
            .map(|s| (&s.id, s.parents.len()))
            .collect();
        let mut ready: BTreeSet<(Epoch, &StageId)> = pending
            .iter()
            .filter(|(_, &n)| n == 0)
            .map(|(&id, _)| (self.stages[id].start, id))
            .collect();
        let mut out = Vec::with_capacity(self.stages.len());
        while let Some(next) = ready.pop_first() {
            let id = next.1;
            pending.remove(id);
            out.push(&self.stages[id]);
            for s in self.stages.values() {
                if s.parents.contains(id) {
                    let n = pending.get_mut(&s.id).expect("child pending");
                    *n -= 1;
                    if *n == 0 {
                        ready.insert((s.start, &s.id));
                    }
                }
            }
        }
        out
    }

    /// True when `a` is `b` or one of its ancestors.
    pub fn is_ancestor(&self, a: &StageId, b: &StageId) -> bool {
        let mut stack = vec![b];
        let mut seen = BTreeSet::new();
        while let Some(id) = stack.pop() {
            if id == a {
                return true;
            }
            if seen.insert(id) {
                if let Some(s) = self.stages.get(id) {
                    stack.extend(s.parents.iter());
                }
            }
        }
        false
    }

    /// Every logged event, ordered by epoch, then stage order, then position.
    pub fn interleaved_events(&self) -> Vec<(&StageId, &LoggedEvent)> {
        let mut keyed = Vec::new();
        for (rank, stage) in self.stages().into_iter().enumerate() {
            for (pos, e) in stage.events.iter().enumerate() {
                keyed.push(((e.epoch, rank, pos), (&stage.id, e)));
            }
        }
        keyed.sort_by_key(|(k, _)| *k);
        keyed.into_iter().map(|(_, v)| v).collect()
    }

    /// Closes the tip and opens `child` on top of it.
    fn extend(&mut self, child: StageId, start: Epoch) -> Result<()> {
        if self.stages.contains_key(&child) {
            return Err(Error::DuplicateName(child.to_string()));
        }
        let parent = self.tip.clone();
        self.tip_mut().end = Some(start);
        self.stages.insert(
            child.clone(),
            Stage::open(child.clone(), vec![parent], start),
        );
        self.tip = child;
        Ok(())
    }
}

/// One line of a lineage listing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageSummary {
    pub id: StageId,
    pub parents: Vec<StageId>,
    pub start: Epoch,
    pub end: Option<Epoch>,
    pub events: usize,
}

impl fmt::Display for StageSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = self.end.map_or("..".to_string(), |e| e.to_string());
        let parents = if self.parents.is_empty() {
            "-".to_string()
        } else {
            self.parents
                .iter()
                .map(StageId::as_str)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "{} [{}, {}) parents={} events={}",
            self.id, self.start, end, parents, self.events
        )
    }
}

pub fn lineage(store: &Store) -> Vec<StageSummary> {
    store
        .lineage
        .stages()
        .into_iter()
        .map(|s| StageSummary {
            id: s.id.clone(),
            parents: s.parents.clone(),
            start: s.start,
            end: s.end,
            events: s.events.len(),
        })
        .collect()
}

fn check_consistent(store: &Store) -> Result<()> {
    let bad = store.beliefs.inconsistent_contexts(&store.universe);
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::InconsistentStore(format!(
            "unsolvable contexts: {}",
            bad.join(", ")
        )))
    }
}

impl Store {
    /// A child store whose new tip stage `id` continues from the current tip.
    pub fn branch(&self, id: StageId) -> Result<Store> {
        check_consistent(self)?;
        let mut child = self.clone();
        child.lineage.extend(id, self.epoch().next())?;
        Ok(child)
    }
}

/// Splits a store into two children sharing its stages.
pub fn fork(store: &Store) -> Result<(Store, Store)> {
    let tip = &store.lineage.tip;
    let a = store.branch(StageId::new(format!("{tip}.1")))?;
    let b = store.branch(StageId::new(format!("{tip}.2")))?;
    Ok((a, b))
}

/// Identity of a constraint across stores built over the same log.
type ConstraintKey = (String, String, Epoch, StageId);

fn constraint_key(beliefs: &BeliefBase, store: &Store, c: &Constraint) -> ConstraintKey {
    (
        beliefs.context_name(c.context).to_string(),
        store.universe.name(c.possibility).to_string(),
        c.asserted_at,
        c.stage.clone(),
    )
}

struct BranchView<'a> {
    all: BTreeMap<ConstraintKey, &'a Constraint>,
    live: BTreeSet<ConstraintKey>,
}

fn branch_view(store: &Store) -> BranchView<'_> {
    let mut all = BTreeMap::new();
    let mut live = BTreeSet::new();
    for ctx in store.beliefs.contexts() {
        for c in ctx.constraints() {
            let key = constraint_key(&store.beliefs, store, c);
            if c.superseded_at.is_none() {
                live.insert(key.clone());
            }
            all.insert(key, c);
        }
    }
    BranchView { all, live }
}

/// Checks that, per context, the constraints current in either branch hold
/// together. A shared constraint superseded by one branch no longer counts.
fn check_combined(a: &Store, b: &Store) -> Result<()> {
    let va = branch_view(a);
    let vb = branch_view(b);
    let mut per_context: BTreeMap<&str, Vec<(&ConstraintKey, ModalStatus)>> = BTreeMap::new();
    for key in va.live.union(&vb.live) {
        let dropped_a = va.all.contains_key(key) && !va.live.contains(key);
        let dropped_b = vb.all.contains_key(key) && !vb.live.contains(key);
        if dropped_a || dropped_b {
            continue;
        }
        let c = va
            .all
            .get(key)
            .or_else(|| vb.all.get(key))
            .expect("key known");
        per_context
            .entry(key.0.as_str())
            .or_default()
            .push((key, c.status));
    }
    for (ctx_name, mut entries) in per_context {
        entries.sort_by(|x, y| (x.0 .2, &x.0 .1, &x.0 .3).cmp(&(y.0 .2, &y.0 .1, &y.0 .3)));
        let (store, ctx) = match a.beliefs.context_by_name(ctx_name) {
            Some(id) => (a, id),
            None => (b, b.beliefs.resolve_context(ctx_name)?),
        };
        let candidates = store.beliefs.candidates(&store.universe, ctx)?;
        let worlds = entries
            .iter()
            .map(|(k, _)| store.universe.worlds_of(store.universe.resolve(&k.1)?))
            .collect::<Result<Vec<_>>>()?;
        let pairs: Vec<_> = entries.iter().map(|e| e.1).zip(worlds).collect();
        if solve(&candidates, &pairs).is_none() {
            let core = minimal_conflict(&candidates, &pairs);
            return Err(Error::ModallyInconsistent(Box::new(ConflictReport {
                context: ctx_name.to_string(),
                members: core
                    .into_iter()
                    .map(|i| {
                        let (key, status) = entries[i];
                        ConflictEntry {
                            possibility: key.1.clone(),
                            status,
                            asserted_at: Some(key.2),
                            stage: Some(key.3.clone()),
                        }
                    })
                    .collect(),
            })));
        }
    }
    Ok(())
}

/// Fuses two stores that share a lineage prefix.
///
/// If one tip descends from the other the result is the descendant.
/// Otherwise the union of both logs is replayed in (epoch, stage order,
/// position) order onto a new stage whose parents are both tips. The merge
/// fails with a conflict report when the constraints current in either
/// branch cannot hold together in some context.
pub fn merge(a: &Store, b: &Store) -> Result<Store> {
    if serialize_model(&a.universe) != serialize_model(&b.universe) {
        return Err(Error::ModelMismatch);
    }
    let (la, lb) = (&a.lineage, &b.lineage);
    match (la.stage(&StageId::root()), lb.stage(&StageId::root())) {
        (Some(ra), Some(rb)) if ra.same_segment(rb) => {}
        _ => return Err(Error::DisjointLineages),
    }
    for (id, sa) in &la.stages {
        if let Some(sb) = lb.stages.get(id) {
            let ends_agree = match (sa.end, sb.end) {
                (Some(x), Some(y)) => x == y,
                _ => true,
            };
            if !sa.same_segment(sb) || !ends_agree {
                return Err(Error::DivergentStage(id.to_string()));
            }
        }
    }
    if lb.is_ancestor(&la.tip, &lb.tip) {
        return Ok(b.clone());
    }
    if la.is_ancestor(&lb.tip, &la.tip) {
        return Ok(a.clone());
    }
    check_combined(a, b)?;

    let epoch = a.epoch().max(b.epoch());
    let start = epoch.next();
    let (lo, hi) = if la.tip <= lb.tip {
        (&la.tip, &lb.tip)
    } else {
        (&lb.tip, &la.tip)
    };
    let merged_id = StageId::new(format!("{lo}_{hi}"));
    let mut stages = la.stages.clone();
    for (id, s) in &lb.stages {
        let entry = stages.entry(id.clone()).or_insert_with(|| s.clone());
        if entry.end.is_none() {
            entry.end = s.end;
        }
    }
    for tip in [lo, hi] {
        stages.get_mut(tip).expect("tip present").end = Some(start);
    }
    if stages.contains_key(&merged_id) {
        return Err(Error::DuplicateName(merged_id.to_string()));
    }
    stages.insert(
        merged_id.clone(),
        Stage::open(merged_id.clone(), vec![lo.clone(), hi.clone()], start),
    );
    let lineage = Lineage {
        stages,
        tip: merged_id,
    };

    let mut merged = Store::with_universe(a.universe.clone());
    for (stage, logged) in lineage.interleaved_events() {
        merged
            .apply_raw(stage, logged)
            .map_err(|e| Error::Replay(e.to_string()))?;
    }
    merged.beliefs.epoch = epoch;
    merged.lineage = lineage;
    check_consistent(&merged)?;
    Ok(merged)
}
