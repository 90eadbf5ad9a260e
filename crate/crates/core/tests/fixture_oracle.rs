//! ANNE4 values recomputed from the fixture text with plain string sets,
//! checked against the frozen expectations and then against the engine.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use modalkb::doxastic::ModalStatus;
use num_rational::Ratio;

type Labels = BTreeSet<String>;

/// (world, individual) -> atom labels, and possibility -> (individual, world) members.
struct Plain {
    inds: BTreeMap<(String, String), Labels>,
    poss: BTreeMap<String, Vec<(String, String)>>,
    worlds: Vec<String>,
}

fn braced(line: &str) -> Vec<String> {
    let inner = &line[line.find('{').unwrap() + 1..line.rfind('}').unwrap()];
    inner.split_whitespace().map(String::from).collect()
}

fn read_plain(text: &str) -> Plain {
    let mut inds = BTreeMap::new();
    let mut poss = BTreeMap::new();
    let mut worlds = Vec::new();
    for line in text.lines() {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.first() {
            Some(&"world") => {
                worlds.push(words[1].to_string());
                inds.insert(
                    (words[1].to_string(), words[1].to_string()),
                    braced(line).into_iter().collect(),
                );
            }
            Some(&"ind") => {
                inds.insert(
                    (words[1].to_string(), words[2].to_string()),
                    braced(line).into_iter().collect(),
                );
            }
            Some(&"poss") => {
                let members = braced(line)
                    .into_iter()
                    .map(|m| {
                        let (i, w) = m.rsplit_once('@').unwrap();
                        (i.to_string(), w.to_string())
                    })
                    .collect();
                poss.insert(words[1].to_string(), members);
            }
            _ => {}
        }
    }
    Plain { inds, poss, worlds }
}

impl Plain {
    fn members_in(&self, p: &str, w: &str) -> Vec<&Labels> {
        self.poss[p]
            .iter()
            .filter(|(_, mw)| mw == w)
            .map(|(i, mw)| &self.inds[&(mw.clone(), i.clone())])
            .collect()
    }

    fn worlds_of(&self, p: &str) -> BTreeSet<String> {
        self.poss[p].iter().map(|(_, w)| w.clone()).collect()
    }

    /// world -> common extents over every member selection.
    fn comoverlap(&self, set: &[&str]) -> BTreeMap<String, BTreeSet<Labels>> {
        let mut out = BTreeMap::new();
        for w in &self.worlds {
            let mut acc: Vec<Labels> = vec![];
            let mut first = true;
            for p in set {
                let ms = self.members_in(p, w);
                if first {
                    acc = ms.into_iter().cloned().collect();
                    first = false;
                } else {
                    acc = acc
                        .iter()
                        .flat_map(|a| ms.iter().map(move |m| a.intersection(m).cloned().collect()))
                        .collect();
                }
            }
            let found: BTreeSet<Labels> = acc.into_iter().filter(|e| !e.is_empty()).collect();
            if !found.is_empty() {
                out.insert(w.clone(), found);
            }
        }
        out
    }

    fn ind(&self, w: &str, name: &str) -> &Labels {
        &self.inds[&(w.to_string(), name.to_string())]
    }
}

fn set(xs: &[&str]) -> Labels {
    xs.iter().map(|s| s.to_string()).collect()
}

fn expected_constructs() -> BTreeMap<&'static str, BTreeMap<String, BTreeSet<Labels>>> {
    BTreeMap::from([
        (
            "AnneInEdiOnDay",
            BTreeMap::from([
                (
                    "w1".to_string(),
                    BTreeSet::from([set(&["edi.t1.a", "edi.t1.m"])]),
                ),
                ("w4".to_string(), BTreeSet::from([set(&["edi.t1.a"])])),
            ]),
        ),
        (
            "AnneInBriOnDay",
            BTreeMap::from([("w2".to_string(), BTreeSet::from([set(&["bri.t1.a"])]))]),
        ),
        (
            "AnneMetEffie",
            BTreeMap::from([("w1".to_string(), BTreeSet::from([set(&["edi.t1.m"])]))]),
        ),
    ])
}

fn construct_inputs(name: &str) -> Vec<&'static str> {
    match name {
        "AnneInEdiOnDay" => vec!["Annes", "Edinburghs", "Day30s"],
        "AnneInBriOnDay" => vec!["Annes", "Brightons", "Day30s"],
        "AnneMetEffie" => vec!["Annes", "Effies"],
        _ => unreachable!(),
    }
}

#[test]
fn plain_recomputation_matches_frozen_values() {
    let plain = read_plain(&fixture_text("anne4.pkb"));
    assert_eq!(plain.worlds_of("Annes"), names(&["w1", "w2", "w3", "w4"]));
    assert_eq!(plain.worlds_of("Effies"), names(&["w1"]));
    for (name, expected) in expected_constructs() {
        assert_eq!(
            plain.comoverlap(&construct_inputs(name)),
            expected,
            "{name}"
        );
    }
    assert!(plain
        .comoverlap(&["Annes", "Brightons", "Edinburghs"])
        .is_empty());
    let me_now = plain.comoverlap(&["Mes", "Day30s"]);
    assert_eq!(
        me_now.keys().cloned().collect::<BTreeSet<_>>(),
        names(&["w1", "w2", "w3", "w4"])
    );

    let a1 = plain.ind("w1", "a1");
    let edi1 = plain.ind("w1", "Edinburgh");
    let f1 = plain.ind("w1", "f1");
    assert_eq!(
        a1.intersection(edi1).cloned().collect::<Labels>(),
        set(&["edi.t1.a", "edi.t1.m"])
    );
    assert_eq!(
        a1.intersection(f1).cloned().collect::<Labels>(),
        set(&["edi.t1.m"])
    );
    assert!(plain
        .ind("w2", "a2")
        .is_disjoint(plain.ind("w2", "Edinburgh")));
    assert!(set(&["edi.t1.a", "edi.t1.m"]).is_subset(plain.ind("w1", "Day30")));

    // credence with every candidate world allowed: |{w1}| / |{w1, w4}|
    let met = expected_constructs()["AnneMetEffie"].len() as u64;
    let edi = expected_constructs()["AnneInEdiOnDay"].len() as u64;
    assert_eq!(Ratio::new(met, edi), Ratio::new(1, 2));
}

#[test]
fn engine_agrees_with_plain_recomputation() {
    let store = anne4();
    let u = &store.universe;
    for (name, expected) in expected_constructs() {
        let p = u.resolve(name).unwrap();
        let mut got: BTreeMap<String, BTreeSet<Labels>> = BTreeMap::new();
        for &m in &u.possibility(p).unwrap().members {
            let w = u.model.world(u.model.individual(m).world).name.clone();
            got.entry(w).or_default().insert(labels(u, m));
        }
        assert_eq!(got, expected, "{name}");
        let inputs: Vec<_> = construct_inputs(name)
            .iter()
            .map(|n| u.resolve(n).unwrap())
            .collect();
        assert_eq!(
            world_names(u, &u.comoverlap_worlds(&inputs).unwrap()),
            expected.keys().cloned().collect()
        );
    }
    let annes = u.resolve("Annes").unwrap();
    let bri = u.resolve("Brightons").unwrap();
    let edi = u.resolve("Edinburghs").unwrap();
    assert!(!u.comoverlapable(&[annes, bri, edi]).unwrap());

    let root = store.context("root").unwrap();
    let cands = store.beliefs().candidates(u, root).unwrap();
    assert_eq!(world_names(u, &cands), names(&["w1", "w2", "w3", "w4"]));
    let met = u.resolve("AnneMetEffie").unwrap();
    let inedi = u.resolve("AnneInEdiOnDay").unwrap();
    let ratio = store
        .beliefs()
        .credence_ratio(u, met, inedi, root, store.epoch())
        .unwrap();
    assert_eq!(ratio, Ratio::new(1, 2));
    assert_eq!(
        store.classify(root, inedi, store.epoch()).unwrap(),
        ModalStatus::Contingent
    );
}

#[test]
fn extended_fixture_keeps_base_values() {
    let base = read_plain(&fixture_text("anne4.pkb"));
    let ext = read_plain(&fixture_text("anne4_testimony.pkb"));
    for (name, _) in expected_constructs() {
        assert_eq!(
            base.comoverlap(&construct_inputs(name)),
            ext.comoverlap(&construct_inputs(name))
        );
    }
    assert_eq!(ext.worlds_of("Bindis"), names(&["w1", "w2", "w3", "w4"]));
    assert_eq!(ext.worlds_of("Carols"), names(&["w1", "w2", "w3", "w4"]));
    assert_eq!(
        ext.comoverlap(&["Bindis", "Day30s"]).len(),
        4,
        "Bindi is present on the day in every world"
    );
}
