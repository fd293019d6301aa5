use std::fmt;

use super::{Model, Result, SemanticsError};
use crate::model::{Atom, Formula, Literal};

/// A total assignment, stored as a bitmask over the model's atom order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(pub(crate) u64);

impl World {
    pub fn bits(self) -> u64 {
        self.0
    }
}

/// Admissible worlds of a knowledge base, optionally filtered by a context
/// formula. Worlds are kept in ascending bitmask order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldSet {
    atoms: Vec<Atom>,
    worlds: Vec<u64>,
}

impl WorldSet {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = World> + '_ {
        self.worlds.iter().map(|w| World(*w))
    }

    pub(crate) fn raw(&self) -> &[u64] {
        &self.worlds
    }

    pub fn value(&self, world: World, atom: &Atom) -> Option<bool> {
        let i = self.atoms.iter().position(|a| a == atom)?;
        Some(world.0 >> i & 1 == 1)
    }

    /// The world as one literal per atom, in atom order.
    pub fn literals(&self, world: World) -> Vec<Literal> {
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, a)| Literal::new(a.clone(), world.0 >> i & 1 == 1))
            .collect()
    }

    pub fn render(&self, world: World) -> String {
        Rendered(self, world).to_string()
    }
}

struct Rendered<'a>(&'a WorldSet, World);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.0.literals(self.1).iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl Model<'_> {
    pub(crate) fn world_set(&self, worlds: Vec<u64>) -> WorldSet {
        WorldSet {
            atoms: self.atoms.clone(),
            worlds,
        }
    }

    /// All admissible worlds satisfying `context` (every admissible world
    /// when it is `None`).
    pub fn worlds(&self, context: Option<&Formula>) -> Result<WorldSet> {
        let worlds = match context {
            None => self.collect(|_| true),
            Some(f) => {
                if !f.is_modal_free() {
                    return Err(SemanticsError::ModalFormula(f.to_string()));
                }
                let e = self.compile(f)?;
                self.collect(|w| e.holds(w))
            }
        };
        Ok(self.world_set(worlds))
    }
}
