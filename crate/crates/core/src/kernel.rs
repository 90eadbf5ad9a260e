//! Finite extensional world models.
//!
//! A world is a finite set of atoms (minimal spacetime cells). An individual
//! is a nonempty set of atoms of exactly one world, its four-dimensional
//! extent, and two individuals of the same world with the same extent are the
//! same individual. Part-of is extent inclusion and overlap is a nonempty
//! extent intersection; both are only defined inside a single world.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldId(pub(crate) u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndividualId(pub(crate) u32);

/// An atom is addressed by its world and its position in that world's atom list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId {
    pub world: WorldId,
    pub index: u32,
}

impl WorldId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl IndividualId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for WorldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "world#{}", self.0)
    }
}

impl fmt::Display for IndividualId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "individual#{}", self.0)
    }
}

/// The atoms an individual occupies, as indices local to its world.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Extent(BTreeSet<u32>);

impl Extent {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, atom: u32) -> bool {
        self.0.contains(&atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &Extent) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersects(&self, other: &Extent) -> bool {
        !self.0.is_disjoint(&other.0)
    }

    pub fn intersection(&self, other: &Extent) -> Extent {
        Extent(self.0.intersection(&other.0).copied().collect())
    }
}

impl FromIterator<u32> for Extent {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        Extent(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    pub id: WorldId,
    pub name: String,
    atoms: Vec<String>,
    atom_index: BTreeMap<String, u32>,
    individuals: BTreeSet<IndividualId>,
    /// The individual whose extent is every atom of the world.
    pub worm: IndividualId,
}

impl World {
    pub fn atom_labels(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_label(&self, index: u32) -> &str {
        &self.atoms[index as usize]
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn individuals(&self) -> impl Iterator<Item = IndividualId> + '_ {
        self.individuals.iter().copied()
    }

    pub fn full_extent(&self) -> Extent {
        (0..self.atoms.len() as u32).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub id: IndividualId,
    pub world: WorldId,
    pub extent: Extent,
    pub label: Option<String>,
}

/// The finite stand-in for the plurality of worlds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    worlds: Vec<World>,
    world_names: BTreeMap<String, WorldId>,
    individuals: Vec<Individual>,
    registry: BTreeMap<(WorldId, Extent), IndividualId>,
    names: BTreeMap<(WorldId, String), IndividualId>,
}

impl Model {
    pub fn new() -> Self {
        Self::default()
    }

    /// Creates a world over the given atom labels. The world-worm individual
    /// is created alongside and bound to the world's own name.
    pub fn add_world<I, S>(&mut self, name: &str, atom_labels: I) -> Result<WorldId>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        if self.world_names.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let mut atoms = Vec::new();
        let mut atom_index = BTreeMap::new();
        for label in atom_labels {
            let label = label.as_ref();
            if atom_index
                .insert(label.to_string(), atoms.len() as u32)
                .is_some()
            {
                return Err(Error::DuplicateLabel(label.to_string()));
            }
            atoms.push(label.to_string());
        }
        if atoms.is_empty() {
            return Err(Error::EmptyWorld);
        }
        let id = WorldId(self.worlds.len() as u32);
        let worm = IndividualId(self.individuals.len() as u32);
        let world = World {
            id,
            name: name.to_string(),
            atoms,
            atom_index,
            individuals: BTreeSet::new(),
            worm,
        };
        let extent = world.full_extent();
        self.worlds.push(world);
        self.world_names.insert(name.to_string(), id);
        let created = self.insert_individual(id, extent, Some(name))?;
        debug_assert_eq!(created, worm);
        Ok(id)
    }

    pub fn world(&self, id: WorldId) -> &World {
        &self.worlds[id.index()]
    }

    pub fn world_by_name(&self, name: &str) -> Option<WorldId> {
        self.world_names.get(name).copied()
    }

    pub fn worlds(&self) -> impl ExactSizeIterator<Item = &World> {
        self.worlds.iter()
    }

    pub fn world_ids(&self) -> BTreeSet<WorldId> {
        self.worlds.iter().map(|w| w.id).collect()
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn individual(&self, id: IndividualId) -> &Individual {
        &self.individuals[id.index()]
    }

    pub fn individuals(&self) -> impl ExactSizeIterator<Item = &Individual> {
        self.individuals.iter()
    }

    pub fn contains_individual(&self, id: IndividualId) -> bool {
        id.index() < self.individuals.len()
    }

    pub fn individual_by_name(&self, world: WorldId, name: &str) -> Option<IndividualId> {
        self.names.get(&(world, name.to_string())).copied()
    }

    /// Every name bound in `world`, with the individual it denotes.
    pub fn names_in(&self, world: WorldId) -> impl Iterator<Item = (&str, IndividualId)> {
        self.names
            .range((world, String::new())..)
            .take_while(move |((w, _), _)| *w == world)
            .map(|((_, name), id)| (name.as_str(), *id))
    }

    /// The smallest name bound to an individual, if any.
    pub fn name_of(&self, id: IndividualId) -> Option<&str> {
        let world = self.individual(id).world;
        self.names_in(world)
            .find(|(_, bound)| *bound == id)
            .map(|(name, _)| name)
    }

    pub fn atom(&self, world: WorldId, label: &str) -> Result<AtomId> {
        let w = self.world(world);
        w.atom_index
            .get(label)
            .map(|&index| AtomId { world, index })
            .ok_or_else(|| Error::AtomOutsideWorld {
                world: w.name.clone(),
                atom: label.to_string(),
            })
    }

    pub fn atoms<I, S>(&self, world: WorldId, labels: I) -> Result<Vec<AtomId>>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        labels
            .into_iter()
            .map(|l| self.atom(world, l.as_ref()))
            .collect()
    }

    /// Adds (or finds) the individual of `world` with exactly this extent.
    ///
    /// Identity is extensional: asking twice for the same extent returns the
    /// same id. A label is bound as a name for the individual; binding a name
    /// that already denotes a different individual is an error.
    pub fn add_individual<I>(
        &mut self,
        world: WorldId,
        extent: I,
        label: Option<&str>,
    ) -> Result<IndividualId>
    where
        I: IntoIterator<Item = AtomId>,
    {
        let w = self
            .worlds
            .get(world.index())
            .ok_or_else(|| Error::UnknownWorld(world.to_string()))?;
        let mut local = BTreeSet::new();
        for atom in extent {
            if atom.world != world || atom.index as usize >= w.atoms.len() {
                let label = self
                    .worlds
                    .get(atom.world.index())
                    .and_then(|aw| aw.atoms.get(atom.index as usize))
                    .cloned()
                    .unwrap_or_else(|| format!("{atom:?}"));
                return Err(Error::AtomOutsideWorld {
                    world: w.name.clone(),
                    atom: label,
                });
            }
            local.insert(atom.index);
        }
        if local.is_empty() {
            return Err(Error::EmptyExtent);
        }
        self.insert_individual(world, Extent(local), label)
    }

    fn insert_individual(
        &mut self,
        world: WorldId,
        extent: Extent,
        label: Option<&str>,
    ) -> Result<IndividualId> {
        let existing = self.registry.get(&(world, extent.clone())).copied();
        if let Some(label) = label {
            if let Some(bound) = self.individual_by_name(world, label) {
                if Some(bound) != existing {
                    return Err(Error::DuplicateName(label.to_string()));
                }
            }
        }
        let id = match existing {
            Some(id) => id,
            None => {
                let id = IndividualId(self.individuals.len() as u32);
                self.individuals.push(Individual {
                    id,
                    world,
                    extent: extent.clone(),
                    label: label.map(str::to_string),
                });
                self.registry.insert((world, extent), id);
                self.worlds[world.index()].individuals.insert(id);
                id
            }
        };
        if let Some(label) = label {
            self.names.insert((world, label.to_string()), id);
            let ind = &mut self.individuals[id.index()];
            if ind.label.is_none() {
                ind.label = Some(label.to_string());
            }
        }
        Ok(id)
    }

    /// Looks up the individual with exactly this extent without creating it.
    pub fn find_individual(&self, world: WorldId, extent: &Extent) -> Option<IndividualId> {
        self.registry.get(&(world, extent.clone())).copied()
    }

    fn checked(&self, id: IndividualId) -> Result<&Individual> {
        self.individuals
            .get(id.index())
            .ok_or_else(|| Error::UnknownIndividual(id.to_string()))
    }

    fn same_world(&self, x: IndividualId, y: IndividualId) -> Result<(&Individual, &Individual)> {
        let a = self.checked(x)?;
        let b = self.checked(y)?;
        if a.world != b.world {
            return Err(Error::CrossWorldMereology(
                self.display_individual(x),
                self.display_individual(y),
            ));
        }
        Ok((a, b))
    }

    pub fn part_of(&self, x: IndividualId, y: IndividualId) -> Result<bool> {
        let (a, b) = self.same_world(x, y)?;
        Ok(a.extent.is_subset(&b.extent))
    }

    pub fn overlap(&self, x: IndividualId, y: IndividualId) -> Result<bool> {
        let (a, b) = self.same_world(x, y)?;
        Ok(a.extent.intersects(&b.extent))
    }

    /// The common part of a set of same-world individuals, as an extent.
    /// Returns an empty extent when they share nothing.
    pub fn common_extent(&self, xs: &[IndividualId]) -> Result<(WorldId, Extent)> {
        let (first, rest) = xs.split_first().ok_or(Error::EmptySet)?;
        let head = self.checked(*first)?;
        let mut common = head.extent.clone();
        for &x in rest {
            let (_, other) = self.same_world(*first, x)?;
            common = common.intersection(&other.extent);
        }
        Ok((head.world, common))
    }

    /// Returns the individual whose extent is the common intersection of
    /// `xs`, materializing it if it does not exist yet.
    pub fn intersect_individuals(&mut self, xs: &[IndividualId]) -> Result<IndividualId> {
        let (world, common) = self.common_extent(xs)?;
        if common.is_empty() {
            return Err(Error::NoCommonPart);
        }
        self.insert_individual(world, common, None)
    }

    pub fn extent_labels(&self, id: IndividualId) -> Vec<&str> {
        let ind = self.individual(id);
        let w = self.world(ind.world);
        ind.extent.iter().map(|a| w.atom_label(a)).collect()
    }

    /// `name@world` when the individual is named, `{atoms}@world` otherwise.
    pub fn display_individual(&self, id: IndividualId) -> String {
        let Some(ind) = self.individuals.get(id.index()) else {
            return id.to_string();
        };
        let world = &self.world(ind.world).name;
        match self.name_of(id) {
            Some(name) => format!("{name}@{world}"),
            None => format!("{{{}}}@{world}", self.extent_labels(id).join(" ")),
        }
    }
}
