//! Canonical text form of a store.
//!
//! Layout: a header with the lineage, then worlds, individuals, declared
//! possibilities and constructs (each ordered by name, constructs after
//! their inputs), then the event log stage by stage. Individuals without a
//! name get a generated `_N` name when something has to refer to them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::kernel::IndividualId;
use crate::possibility::{Origin, PossibilityId, Universe};
use crate::store::{Event, Store};

pub const HEADER: &str = "# pkb store v1";

/// Names used to refer to individuals in the output, plus the unnamed ones
/// that need an `ind` line of their own.
struct Naming {
    names: BTreeMap<IndividualId, String>,
    generated: Vec<(IndividualId, String)>,
}

fn naming(universe: &Universe) -> Naming {
    let model = &universe.model;
    let mut constructed = BTreeSet::new();
    let mut declared_refs = BTreeSet::new();
    for p in universe.possibilities() {
        match p.origin {
            Origin::Declared => declared_refs.extend(p.members.iter().copied()),
            Origin::Comoverlap(_) => constructed.extend(p.members.iter().copied()),
        }
    }
    let mut names = BTreeMap::new();
    let mut unnamed = Vec::new();
    for ind in model.individuals() {
        match model.name_of(ind.id) {
            Some(n) => {
                names.insert(ind.id, n.to_string());
            }
            None if declared_refs.contains(&ind.id) || !constructed.contains(&ind.id) => {
                let world = &model.world(ind.world).name;
                unnamed.push(((world.clone(), model.extent_labels(ind.id)), ind.id));
            }
            None => {}
        }
    }
    unnamed.sort();
    let taken: BTreeSet<&str> = model
        .worlds()
        .flat_map(|w| model.names_in(w.id).map(|(n, _)| n))
        .collect();
    let mut generated = Vec::new();
    let mut counter = 0;
    for (_, id) in unnamed {
        let name = loop {
            counter += 1;
            let candidate = format!("_{counter}");
            if !taken.contains(candidate.as_str()) {
                break candidate;
            }
        };
        names.insert(id, name.clone());
        generated.push((id, name));
    }
    Naming { names, generated }
}

/// Constructs ordered so that inputs come first; ties by name.
fn construct_order(universe: &Universe) -> Vec<PossibilityId> {
    let mut deps: BTreeMap<&str, (PossibilityId, BTreeSet<&str>)> = BTreeMap::new();
    for p in universe.possibilities() {
        if let Origin::Comoverlap(inputs) = &p.origin {
            let inputs = inputs
                .iter()
                .filter(|i| matches!(universe.possibility(**i), Ok(q) if matches!(q.origin, Origin::Comoverlap(_))))
                .map(|&i| universe.name(i))
                .collect();
            deps.insert(p.name.as_str(), (p.id, inputs));
        }
    }
    let mut out = Vec::new();
    let mut done = BTreeSet::new();
    while !deps.is_empty() {
        let next = deps
            .iter()
            .find(|(_, (_, ins))| ins.iter().all(|i| done.contains(i)))
            .map(|(&name, _)| name)
            .expect("constructs only depend on earlier possibilities");
        let (id, _) = deps.remove(next).expect("present");
        done.insert(next);
        out.push(id);
    }
    out
}

/// The declarations of a universe in canonical order.
pub fn serialize_model(universe: &Universe) -> String {
    let model = &universe.model;
    let naming = naming(universe);
    let mut out = String::new();

    let mut worlds: Vec<_> = model.worlds().collect();
    worlds.sort_by(|a, b| a.name.cmp(&b.name));
    for w in &worlds {
        let _ = writeln!(out, "world {} {{ {} }}", w.name, w.atom_labels().join(" "));
    }

    for w in &worlds {
        let mut lines: Vec<(String, IndividualId)> = model
            .names_in(w.id)
            .filter(|&(n, id)| !(n == w.name && id == w.worm))
            .map(|(n, id)| (n.to_string(), id))
            .collect();
        lines.extend(
            naming
                .generated
                .iter()
                .filter(|(id, _)| model.individual(*id).world == w.id)
                .map(|(id, n)| (n.clone(), *id)),
        );
        lines.sort();
        for (name, id) in lines {
            let _ = writeln!(
                out,
                "ind {} {} {{ {} }}",
                w.name,
                name,
                model.extent_labels(id).join(" ")
            );
        }
    }

    let member_list = |p: PossibilityId| -> String {
        let mut members: Vec<(&str, &str)> = universe
            .possibility(p)
            .map(|p| {
                p.members
                    .iter()
                    .map(|&m| {
                        (
                            model.world(model.individual(m).world).name.as_str(),
                            naming.names[&m].as_str(),
                        )
                    })
                    .collect()
            })
            .unwrap_or_default();
        members.sort();
        members
            .iter()
            .map(|(w, n)| format!("{n}@{w}"))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut declared: Vec<_> = universe
        .possibilities()
        .filter(|p| p.origin == Origin::Declared)
        .collect();
    declared.sort_by(|a, b| a.name.cmp(&b.name));
    for p in declared {
        let flag = if p.functional { " functional" } else { "" };
        let _ = writeln!(out, "poss {}{flag} {{ {} }}", p.name, member_list(p.id));
    }

    for id in construct_order(universe) {
        let p = universe.possibility(id).expect("listed");
        if let Origin::Comoverlap(inputs) = &p.origin {
            let inputs: Vec<&str> = inputs.iter().map(|&i| universe.name(i)).collect();
            let _ = writeln!(
                out,
                "construct {} = comoverlap({})",
                p.name,
                inputs.join(", ")
            );
        }
    }
    out
}

fn event_line(event: &Event) -> String {
    match event {
        Event::Tick => "epoch".to_string(),
        Event::OpenContext {
            name,
            agent,
            now,
            parent,
        } => match parent {
            Some(p) => format!("context {name} = ctx({agent}, {now}, parent={p})"),
            None => format!("context {name} = ctx({agent}, {now})"),
        },
        Event::Assert {
            context,
            possibility,
            status,
        } => format!("assert {context} {status} {possibility}"),
        Event::RegisterAgent {
            context,
            agent,
            status,
        } => format!("agent {context} {agent} {status}"),
        Event::Testify {
            context,
            speaker,
            now,
            possibility,
            status,
            ..
        } => format!("testify {context} {speaker} @{now} {status} {possibility}"),
        Event::Endorse { context, testimony } => format!("endorse {context} {testimony}"),
        Event::Reject { context, testimony } => format!("reject {context} {testimony}"),
    }
}

/// The canonical store file. Serializing, parsing and serializing again
/// gives the same text.
pub fn serialize(store: &Store) -> String {
    let stages = store.lineage().stages();
    let ids: Vec<&str> = stages.iter().map(|s| s.id.as_str()).collect();
    let mut out = format!("{HEADER}\n# lineage: {}\n", ids.join(" "));
    let model = serialize_model(&store.universe);
    let has_events = stages.iter().any(|s| !s.events.is_empty());
    if !model.is_empty() {
        out.push('\n');
        out.push_str(&model);
    }
    if has_events || stages.len() > 1 {
        out.push('\n');
    }
    for stage in &stages {
        if stages.len() > 1 {
            if stage.parents.is_empty() {
                let _ = writeln!(out, "stage {}", stage.id);
            } else {
                let parents: Vec<&str> = stage.parents.iter().map(|p| p.as_str()).collect();
                let _ = writeln!(out, "stage {} from {}", stage.id, parents.join(" "));
            }
        }
        for e in &stage.events {
            out.push_str(&event_line(&e.event));
            out.push('\n');
        }
    }
    out
}
