//! Shared test support: fixture loading, random plain-set models, and
//! brute-force oracles that work on plain sets rather than engine types.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use modalkb::doxastic::ModalStatus;
use modalkb::dsl::load_str;
use modalkb::{IndividualId, PossibilityId, Store, Universe, WorldId};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const STATUSES: [ModalStatus; 4] = [
    ModalStatus::Possible,
    ModalStatus::Necessary,
    ModalStatus::Contingent,
    ModalStatus::Impossible,
];

pub fn fixture_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture readable")
}

pub fn load_fixture(name: &str) -> Store {
    load_str(&fixture_text(name))
        .unwrap_or_else(|e| panic!("{name}: {e}"))
        .into_store()
}

pub fn anne4() -> Store {
    load_fixture("anne4.pkb")
}

pub fn anne4_testimony() -> Store {
    load_fixture("anne4_testimony.pkb")
}

pub fn world_names(u: &Universe, ws: &BTreeSet<WorldId>) -> BTreeSet<String> {
    ws.iter().map(|&w| u.model.world(w).name.clone()).collect()
}

pub fn names(list: &[&str]) -> BTreeSet<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub fn labels(u: &Universe, id: IndividualId) -> BTreeSet<String> {
    u.model
        .extent_labels(id)
        .into_iter()
        .map(String::from)
        .collect()
}

pub type PlainExtent = BTreeSet<usize>;

/// A world as a number of atoms plus distinct individual extents.
#[derive(Debug, Clone)]
pub struct PlainWorld {
    pub atoms: usize,
    pub inds: Vec<PlainExtent>,
}

/// Members are (world index, individual index) pairs.
#[derive(Debug, Clone)]
pub struct PlainPoss {
    pub members: BTreeSet<(usize, usize)>,
    pub functional: bool,
}

#[derive(Debug, Clone)]
pub struct PlainModel {
    pub worlds: Vec<PlainWorld>,
    pub poss: Vec<PlainPoss>,
}

pub fn random_extent(rng: &mut ChaCha8Rng, atoms: usize) -> PlainExtent {
    loop {
        let e: PlainExtent = (0..atoms).filter(|_| rng.gen_bool(0.4)).collect();
        if !e.is_empty() {
            return e;
        }
    }
}

pub fn random_plain(
    rng: &mut ChaCha8Rng,
    max_worlds: usize,
    max_atoms: usize,
    max_poss: usize,
) -> PlainModel {
    let n_worlds = rng.gen_range(1..=max_worlds);
    let mut worlds = Vec::new();
    for _ in 0..n_worlds {
        let atoms = rng.gen_range(1..=max_atoms);
        let mut inds: Vec<PlainExtent> = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            let e = random_extent(rng, atoms);
            if !inds.contains(&e) {
                inds.push(e);
            }
        }
        worlds.push(PlainWorld { atoms, inds });
    }
    let mut poss = Vec::new();
    for _ in 0..rng.gen_range(1..=max_poss) {
        let mut members = BTreeSet::new();
        for (w, world) in worlds.iter().enumerate() {
            if rng.gen_bool(0.6) {
                let k = if rng.gen_bool(0.75) { 1 } else { 2 };
                for _ in 0..k {
                    members.insert((w, rng.gen_range(0..world.inds.len())));
                }
            }
        }
        if members.is_empty() {
            let w = rng.gen_range(0..worlds.len());
            members.insert((w, rng.gen_range(0..worlds[w].inds.len())));
        }
        let single = {
            let mut per: BTreeMap<usize, usize> = BTreeMap::new();
            for &(w, _) in &members {
                *per.entry(w).or_default() += 1;
            }
            per.values().all(|&n| n == 1)
        };
        poss.push(PlainPoss {
            members,
            functional: single && rng.gen_bool(0.5),
        });
    }
    PlainModel { worlds, poss }
}

/// Engine universe built from a plain model; returns possibility ids in order.
pub fn build_universe(plain: &PlainModel) -> (Universe, Vec<PossibilityId>) {
    let mut u = Universe::default();
    let mut ind_ids: BTreeMap<(usize, usize), IndividualId> = BTreeMap::new();
    for (w, world) in plain.worlds.iter().enumerate() {
        let labels: Vec<String> = (0..world.atoms).map(|a| format!("x{a}")).collect();
        let wid = u.model.add_world(&format!("w{w}"), &labels).unwrap();
        for (i, ext) in world.inds.iter().enumerate() {
            let atoms = u
                .model
                .atoms(wid, ext.iter().map(|a| format!("x{a}")))
                .unwrap();
            let id = u
                .model
                .add_individual(wid, atoms, Some(&format!("i{i}")))
                .unwrap();
            ind_ids.insert((w, i), id);
        }
    }
    let mut ids = Vec::new();
    for (k, p) in plain.poss.iter().enumerate() {
        let members = p.members.iter().map(|m| ind_ids[m]);
        ids.push(
            u.define_possibility(&format!("P{k}"), members, p.functional)
                .unwrap(),
        );
    }
    (u, ids)
}

/// (world index, extent) of an engine individual, for comparing with plain sets.
pub fn plain_of(u: &Universe, id: IndividualId) -> (usize, PlainExtent) {
    let ind = u.model.individual(id);
    let world = u.model.world(ind.world);
    let w: usize = world.name[1..].parse().unwrap();
    (w, ind.extent.iter().map(|a| a as usize).collect())
}

pub fn bf_worlds_of(p: &PlainPoss) -> BTreeSet<usize> {
    p.members.iter().map(|&(w, _)| w).collect()
}

/// Joint world set of a possibility set.
pub fn bf_joint(plain: &PlainModel, set: &[usize]) -> BTreeSet<usize> {
    (0..plain.worlds.len())
        .filter(|w| {
            set.iter()
                .all(|&p| bf_worlds_of(&plain.poss[p]).contains(w))
        })
        .collect()
}

/// Every selection of one member per possibility in world `w`, as extents.
pub fn bf_selections(plain: &PlainModel, set: &[usize], w: usize) -> Vec<Vec<PlainExtent>> {
    let mut acc: Vec<Vec<PlainExtent>> = vec![Vec::new()];
    for &p in set {
        let members: Vec<&PlainExtent> = plain.poss[p]
            .members
            .iter()
            .filter(|&&(mw, _)| mw == w)
            .map(|&(_, i)| &plain.worlds[w].inds[i])
            .collect();
        let mut next = Vec::new();
        for partial in &acc {
            for m in &members {
                let mut extended = partial.clone();
                extended.push((*m).clone());
                next.push(extended);
            }
        }
        acc = next;
    }
    acc
}

/// All (world, common extent) pairs with a nonempty joint intersection.
pub fn bf_overlaps(plain: &PlainModel, set: &[usize]) -> BTreeSet<(usize, PlainExtent)> {
    let mut out = BTreeSet::new();
    for w in 0..plain.worlds.len() {
        for sel in bf_selections(plain, set, w) {
            let mut common = sel[0].clone();
            for e in &sel[1..] {
                common = common.intersection(e).copied().collect();
            }
            if !common.is_empty() {
                out.insert((w, common));
            }
        }
    }
    out
}

/// Literal reading of a status against a doxastic world set.
pub fn literally(status: ModalStatus, d: &BTreeSet<WorldId>, w: &BTreeSet<WorldId>) -> bool {
    let meets = d.iter().any(|x| w.contains(x));
    let within = d.iter().all(|x| w.contains(x));
    match status {
        ModalStatus::Possible => meets,
        ModalStatus::Necessary => !d.is_empty() && within,
        ModalStatus::Contingent => meets && !within,
        ModalStatus::Impossible => !meets,
    }
}

/// All nonempty candidate subsets satisfying every constraint.
pub fn bf_satisfying(
    candidates: &BTreeSet<WorldId>,
    constraints: &[(ModalStatus, BTreeSet<WorldId>)],
) -> Vec<BTreeSet<WorldId>> {
    let cands: Vec<WorldId> = candidates.iter().copied().collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << cands.len()) {
        let d: BTreeSet<WorldId> = cands
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &w)| w)
            .collect();
        if constraints.iter().all(|(s, w)| literally(*s, &d, w)) {
            out.push(d);
        }
    }
    out
}

/// The union of all satisfying subsets, when there is any.
pub fn bf_maximal(sat: &[BTreeSet<WorldId>]) -> Option<BTreeSet<WorldId>> {
    if sat.is_empty() {
        return None;
    }
    Some(sat.iter().flatten().copied().collect())
}

pub fn bf_classify(d: &BTreeSet<WorldId>, w: &BTreeSet<WorldId>) -> ModalStatus {
    if d.iter().all(|x| !w.contains(x)) {
        ModalStatus::Impossible
    } else if d.iter().all(|x| w.contains(x)) {
        ModalStatus::Necessary
    } else {
        ModalStatus::Contingent
    }
}

/// A random universe with `Me` (worms of a random nonempty world subset) and
/// `Now` (all worms) so that a context over them has Me's worlds as candidates.
pub fn random_indexed_universe(
    rng: &mut ChaCha8Rng,
    max_worlds: usize,
    max_atoms: usize,
    max_poss: usize,
) -> (
    PlainModel,
    Universe,
    Vec<PossibilityId>,
    PossibilityId,
    PossibilityId,
) {
    let plain = random_plain(rng, max_worlds, max_atoms, max_poss);
    let (mut u, ids) = build_universe(&plain);
    let worms: Vec<IndividualId> = u.model.worlds().map(|w| w.worm).collect();
    let mut me: Vec<IndividualId> = worms
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.7))
        .collect();
    if me.is_empty() {
        me.push(*worms.choose(rng).unwrap());
    }
    let me = u.define_possibility("Me", me, true).unwrap();
    let now = u.define_possibility("Now", worms, true).unwrap();
    (plain, u, ids, me, now)
}

/// A random store built through the public API: declarations, a root
/// context, guarded assertions, agents, testimony, idle ticks, and
/// optionally a fork with a merge.
pub fn random_store(rng: &mut ChaCha8Rng) -> Store {
    let (_, mut u, ids, me, now) = random_indexed_universe(rng, 5, 6, 6);
    if ids.len() >= 2 && rng.gen_bool(0.5) {
        let pair = [ids[0], ids[1]];
        if u.comoverlapable(&pair).unwrap() {
            u.comoverlap_construct(&pair, "C01").unwrap();
        }
    }
    let all: Vec<PossibilityId> = u.possibilities().map(|p| p.id).collect();
    let mut store = Store::with_universe(u);
    let root = store.open_context("root", me, now, None).unwrap();
    let steps = rng.gen_range(0..10);
    random_steps(rng, &mut store, root, &all, steps);
    if rng.gen_bool(0.4) {
        let (mut a, mut b) = modalkb::fork(&store).unwrap();
        let root_a = a.context("root").unwrap();
        let root_b = b.context("root").unwrap();
        let na = rng.gen_range(0..4);
        let nb = rng.gen_range(0..4);
        random_steps(rng, &mut a, root_a, &all, na);
        random_steps(rng, &mut b, root_b, &all, nb);
        store = match modalkb::merge(&a, &b) {
            Ok(m) if rng.gen_bool(0.7) => m,
            _ => a,
        };
        let root = store.context("root").unwrap();
        let n = rng.gen_range(0..3);
        random_steps(rng, &mut store, root, &all, n);
    }
    store
}

pub fn random_steps(
    rng: &mut ChaCha8Rng,
    store: &mut Store,
    root: modalkb::ContextId,
    all: &[PossibilityId],
    steps: usize,
) {
    for _ in 0..steps {
        let p = *all.choose(rng).unwrap();
        match rng.gen_range(0..10) {
            0 => {
                store.advance_epoch();
            }
            1 => {
                let _ = store.register_agent(root, p, ModalStatus::Possible);
            }
            2 => {
                let speakers: Vec<PossibilityId> =
                    store.beliefs().agents(root).map(|r| r.agent).collect();
                if let Some(&s) = speakers.choose(rng) {
                    let q = *all.choose(rng).unwrap();
                    let now = store.possibility("Now").unwrap();
                    let status = *STATUSES.choose(rng).unwrap();
                    let _ = store.record_testimony(root, s, now, q, status);
                }
            }
            3 => {
                let open: Vec<String> = store
                    .beliefs()
                    .testimonies()
                    .filter(|t| t.endorsement == modalkb::Endorsement::Recorded)
                    .map(|t| t.id.clone())
                    .collect();
                if let Some(id) = open.choose(rng) {
                    let _ = store.endorse(root, id);
                }
            }
            _ => {
                let status = *STATUSES.choose(rng).unwrap();
                let _ = store.assert_status(root, p, status);
            }
        }
    }
}

/// Every (context, possibility) history, by name.
pub fn histories(
    store: &Store,
) -> BTreeMap<(String, String), Vec<modalkb::doxastic::HistoryEntry>> {
    let mut out = BTreeMap::new();
    for c in store.beliefs().contexts() {
        for p in store.universe.possibilities() {
            let h = store.beliefs().history(c.id, p.id).unwrap();
            if !h.is_empty() {
                out.insert((c.name.clone(), p.name.clone()), h);
            }
        }
    }
    out
}
