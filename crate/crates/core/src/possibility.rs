//! Individual possibilities: named counterpart sets spanning worlds.
//!
//! A possibility collects individuals from different worlds that stand in for
//! one thing across those worlds; read as a set it is also a property
//! extension. Every modal predicate here is a function of which worlds host
//! members and how member extents overlap inside a world.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{AtomId, Extent, IndividualId, Model, WorldId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PossibilityId(pub(crate) u32);

impl PossibilityId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PossibilityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "possibility#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Declared,
    /// Built from the joint overlaps of these inputs, in declaration order.
    Comoverlap(Vec<PossibilityId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndividualPossibility {
    pub id: PossibilityId,
    pub name: String,
    pub members: BTreeSet<IndividualId>,
    /// At most one member per world.
    pub functional: bool,
    pub origin: Origin,
    worlds: BTreeSet<WorldId>,
}

impl IndividualPossibility {
    pub fn worlds(&self) -> &BTreeSet<WorldId> {
        &self.worlds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Compossibility {
    /// Jointly present in every world.
    Comnecessary,
    /// Jointly present in some worlds only.
    Comcontingent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetModalStatus {
    Compossible(Compossibility),
    Impossible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeDictoStatus {
    Necessarily,
    ContingentlyPossible,
    Impossible,
}

/// A world model together with the possibilities defined over it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Universe {
    pub model: Model,
    possibilities: Vec<IndividualPossibility>,
    by_name: BTreeMap<String, PossibilityId>,
}

impl Universe {
    pub fn new(model: Model) -> Self {
        Self {
            model,
            ..Self::default()
        }
    }

    pub fn possibilities(&self) -> impl ExactSizeIterator<Item = &IndividualPossibility> {
        self.possibilities.iter()
    }

    pub fn possibility(&self, id: PossibilityId) -> Result<&IndividualPossibility> {
        self.possibilities
            .get(id.index())
            .ok_or_else(|| Error::UnknownPossibility(id.to_string()))
    }

    pub fn possibility_by_name(&self, name: &str) -> Option<PossibilityId> {
        self.by_name.get(name).copied()
    }

    pub fn resolve(&self, name: &str) -> Result<PossibilityId> {
        self.possibility_by_name(name)
            .ok_or_else(|| Error::UnknownPossibility(name.to_string()))
    }

    pub fn name(&self, id: PossibilityId) -> &str {
        self.possibilities
            .get(id.index())
            .map(|p| p.name.as_str())
            .unwrap_or("?")
    }

    pub fn define_possibility<I>(
        &mut self,
        name: &str,
        members: I,
        functional: bool,
    ) -> Result<PossibilityId>
    where
        I: IntoIterator<Item = IndividualId>,
    {
        let members: BTreeSet<_> = members.into_iter().collect();
        self.register(name, members, Some(functional), Origin::Declared)
    }

    fn register(
        &mut self,
        name: &str,
        members: BTreeSet<IndividualId>,
        functional: Option<bool>,
        origin: Origin,
    ) -> Result<PossibilityId> {
        if self.by_name.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        if members.is_empty() {
            return Err(Error::EmptyPossibility);
        }
        let mut per_world: BTreeMap<WorldId, usize> = BTreeMap::new();
        for &m in &members {
            if !self.model.contains_individual(m) {
                return Err(Error::UnknownIndividual(m.to_string()));
            }
            *per_world.entry(self.model.individual(m).world).or_default() += 1;
        }
        let single_valued = per_world.values().all(|&n| n == 1);
        let functional = match functional {
            Some(true) if !single_valued => {
                let (&world, _) = per_world.iter().find(|(_, &n)| n > 1).unwrap();
                return Err(Error::FunctionalViolation {
                    name: name.to_string(),
                    world: self.model.world(world).name.clone(),
                });
            }
            Some(flag) => flag,
            None => single_valued,
        };
        let id = PossibilityId(self.possibilities.len() as u32);
        self.possibilities.push(IndividualPossibility {
            id,
            name: name.to_string(),
            members,
            functional,
            origin,
            worlds: per_world.into_keys().collect(),
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn worlds_of(&self, p: PossibilityId) -> Result<&BTreeSet<WorldId>> {
        Ok(self.possibility(p)?.worlds())
    }

    pub fn members_in(
        &self,
        p: PossibilityId,
        world: WorldId,
    ) -> Result<impl Iterator<Item = IndividualId> + '_> {
        let model = &self.model;
        Ok(self
            .possibility(p)?
            .members
            .iter()
            .copied()
            .filter(move |&m| model.individual(m).world == world))
    }

    fn distinct(&self, set: &[PossibilityId]) -> Result<Vec<PossibilityId>> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &p in set {
            self.possibility(p)?;
            if seen.insert(p) {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Worlds hosting at least one member of every possibility in `set`.
    pub fn joint_worlds(&self, set: &[PossibilityId]) -> Result<BTreeSet<WorldId>> {
        let set = self.distinct(set)?;
        let mut worlds = self.worlds_of(set[0])?.clone();
        for &p in &set[1..] {
            let other = self.worlds_of(p)?;
            worlds.retain(|w| other.contains(w));
        }
        Ok(worlds)
    }

    pub fn modal_status_of_set(&self, set: &[PossibilityId]) -> Result<SetModalStatus> {
        let joint = self.joint_worlds(set)?;
        Ok(if joint.is_empty() {
            SetModalStatus::Impossible
        } else if joint.len() == self.model.world_count() {
            SetModalStatus::Compossible(Compossibility::Comnecessary)
        } else {
            SetModalStatus::Compossible(Compossibility::Comcontingent)
        })
    }

    /// Every nonempty common part obtainable by choosing one member of each
    /// possibility inside a single world.
    fn joint_overlaps(&self, set: &[PossibilityId]) -> Result<BTreeSet<(WorldId, Extent)>> {
        let set = self.distinct(set)?;
        let mut found = BTreeSet::new();
        for world in self.joint_worlds(&set)? {
            let choices: Vec<Vec<IndividualId>> = set
                .iter()
                .map(|&p| self.members_in(p, world).map(Iterator::collect))
                .collect::<Result<_>>()?;
            self.collect_overlaps(world, &choices, None, &mut found);
        }
        Ok(found)
    }

    fn collect_overlaps(
        &self,
        world: WorldId,
        choices: &[Vec<IndividualId>],
        common: Option<&Extent>,
        found: &mut BTreeSet<(WorldId, Extent)>,
    ) {
        let Some((first, rest)) = choices.split_first() else {
            if let Some(common) = common {
                found.insert((world, common.clone()));
            }
            return;
        };
        for &m in first {
            let extent = &self.model.individual(m).extent;
            let next = match common {
                None => extent.clone(),
                Some(c) => c.intersection(extent),
            };
            if !next.is_empty() {
                self.collect_overlaps(world, rest, Some(&next), found);
            }
        }
    }

    pub fn comoverlapable(&self, set: &[PossibilityId]) -> Result<bool> {
        Ok(!self.joint_overlaps(set)?.is_empty())
    }

    /// Worlds in which the possibilities jointly overlap.
    pub fn comoverlap_worlds(&self, set: &[PossibilityId]) -> Result<BTreeSet<WorldId>> {
        Ok(self
            .joint_overlaps(set)?
            .into_iter()
            .map(|(w, _)| w)
            .collect())
    }

    /// Builds the possibility whose members are the joint overlaps of `set`,
    /// materializing each overlap individual in its world.
    pub fn comoverlap_construct(
        &mut self,
        set: &[PossibilityId],
        name: &str,
    ) -> Result<PossibilityId> {
        if self.by_name.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let inputs = self.distinct(set)?;
        let overlaps = self.joint_overlaps(&inputs)?;
        if overlaps.is_empty() {
            return Err(Error::NotComoverlapable);
        }
        let mut members = BTreeSet::new();
        for (world, extent) in overlaps {
            let atoms = extent.iter().map(|index| AtomId { world, index });
            members.insert(self.model.add_individual(world, atoms, None)?);
        }
        self.register(name, members, None, Origin::Comoverlap(inputs))
    }

    pub fn de_dicto_relate(&self, p: PossibilityId, q: PossibilityId) -> Result<DeDictoStatus> {
        let p = &self.possibility(p)?.members;
        let q = &self.possibility(q)?.members;
        Ok(if p.is_disjoint(q) {
            DeDictoStatus::Impossible
        } else if p.is_subset(q) {
            DeDictoStatus::Necessarily
        } else {
            DeDictoStatus::ContingentlyPossible
        })
    }

    pub fn display_worlds(&self, worlds: &BTreeSet<WorldId>) -> String {
        let names: Vec<&str> = worlds
            .iter()
            .map(|&w| self.model.world(w).name.as_str())
            .collect();
        format!("{{{}}}", names.join(", "))
    }
}
