//! Finite possible-world semantics for a knowledge base.
//!
//! A world is a total truth assignment over the declared atoms. It is
//! *admissible* when it makes no incompatibility constraint fully true and
//! satisfies every strict rule. All queries reduce to sweeps over the
//! `2^n` assignments, which run on rayon when the `parallel` feature is on.
//! Results never depend on the sweep strategy.

mod compile;
mod defeasible;
mod entail;
mod modal;
pub mod oracle;
mod worlds;

use std::collections::HashMap;

use thiserror::Error;

use crate::lang::rule_text;
use crate::model::{desugar_strict, Atom, Formula, KnowledgeBase, RuleKind};
use compile::Expr;

pub use defeasible::Closure;
pub use entail::Counterfactual;
pub use modal::{ModalAnswer, ModalEntry, ModalReport};
pub use worlds::{World, WorldSet};

/// Default cap on the number of atoms, i.e. `2^24` candidate worlds.
pub const DEFAULT_MAX_ATOMS: usize = 24;

/// Worlds are `u64` bitmasks; past this the sweep is infeasible anyway.
pub const HARD_MAX_ATOMS: usize = 40;

/// Below this many atoms a sweep is too short to be worth splitting.
#[cfg(feature = "parallel")]
const PARALLEL_MIN_ATOMS: usize = 12;

/// Smallest slice of the world space handed to one rayon task.
#[cfg(feature = "parallel")]
const PARALLEL_CHUNK: u64 = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        return Strategy::Parallel;
        #[cfg(not(feature = "parallel"))]
        return Strategy::Sequential;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub max_atoms: usize,
    pub strategy: Strategy,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_atoms: DEFAULT_MAX_ATOMS,
            strategy: Strategy::default(),
        }
    }
}

impl Config {
    pub fn with_max_atoms(self, max_atoms: usize) -> Self {
        Config { max_atoms, ..self }
    }

    pub fn with_strategy(self, strategy: Strategy) -> Self {
        Config { strategy, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("knowledge base has {atoms} atoms, more than the bound of {bound}")]
    AtomBoundExceeded { atoms: usize, bound: usize },
    #[error("formula `{0}` contains a modal operator and needs a context")]
    MissingContext(String),
    #[error("formula `{0}` must be modal-free here")]
    ModalFormula(String),
    #[error("undeclared atom `{0}`")]
    UndeclaredAtom(Atom),
    #[error("the facts are incoherent")]
    IncoherentFacts,
}

pub type Result<T> = std::result::Result<T, SemanticsError>;

/// Where a restriction on worlds comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Source {
    /// Index into the declared constraints.
    Constraint(usize),
    /// Index into the rule list (a strict rule).
    Strict(usize),
}

#[derive(Debug, Clone)]
enum Test {
    /// Violated when every `pos` bit is set and every `neg` bit is clear.
    Clause { pos: u64, neg: u64 },
    /// Violated when the antecedent holds and the consequent fails.
    Conditional { antecedent: Expr, consequent: Expr },
}

#[derive(Debug, Clone)]
pub(crate) struct Restriction {
    test: Test,
    pub source: Source,
}

impl Restriction {
    #[inline]
    fn violated(&self, w: u64) -> bool {
        match &self.test {
            Test::Clause { pos, neg } => w & pos == *pos && w & neg == 0,
            Test::Conditional {
                antecedent,
                consequent,
            } => antecedent.holds(w) && !consequent.holds(w),
        }
    }
}

/// A knowledge base compiled for world enumeration.
#[derive(Debug, Clone)]
pub struct Model<'kb> {
    kb: &'kb KnowledgeBase,
    atoms: Vec<Atom>,
    index: HashMap<Atom, u32>,
    restrictions: Vec<Restriction>,
    strategy: Strategy,
}

impl<'kb> Model<'kb> {
    pub fn new(kb: &'kb KnowledgeBase, config: &Config) -> Result<Self> {
        let bound = config.max_atoms.min(HARD_MAX_ATOMS);
        if kb.atoms().len() > bound {
            return Err(SemanticsError::AtomBoundExceeded {
                atoms: kb.atoms().len(),
                bound,
            });
        }
        let atoms: Vec<Atom> = kb.atoms().iter().cloned().collect();
        let index = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i as u32))
            .collect();
        let mut model = Model {
            kb,
            atoms,
            index,
            restrictions: Vec::new(),
            strategy: config.strategy,
        };
        let mut restrictions = Vec::new();
        for (i, c) in kb.declared_constraints().iter().enumerate() {
            restrictions.push(Restriction {
                test: model.clause(&c.members),
                source: Source::Constraint(i),
            });
        }
        for (i, rule) in kb.rules().iter().enumerate() {
            if rule.kind != RuleKind::Strict {
                continue;
            }
            let source = Source::Strict(i);
            match desugar_strict(rule) {
                Some(constraints) => restrictions.extend(constraints.iter().map(|c| Restriction {
                    test: model.clause(&c.members),
                    source,
                })),
                None => restrictions.push(Restriction {
                    test: Test::Conditional {
                        antecedent: model.compile(&rule.antecedent)?,
                        consequent: model.compile(&rule.consequent)?,
                    },
                    source,
                }),
            }
        }
        model.restrictions = restrictions;
        Ok(model)
    }

    pub fn kb(&self) -> &'kb KnowledgeBase {
        self.kb
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    fn clause(&self, members: &[crate::model::Literal]) -> Test {
        let (mut pos, mut neg) = (0u64, 0u64);
        for m in members {
            let bit = 1u64 << self.index[&m.atom];
            if m.positive {
                pos |= bit;
            } else {
                neg |= bit;
            }
        }
        Test::Clause { pos, neg }
    }

    pub(crate) fn compile(&self, f: &Formula) -> Result<Expr> {
        Ok(match f {
            Formula::Atom(a) => Expr::Var(
                *self
                    .index
                    .get(a)
                    .ok_or_else(|| SemanticsError::UndeclaredAtom(a.clone()))?,
            ),
            Formula::Not(x) => Expr::Not(Box::new(self.compile(x)?)),
            Formula::And(xs) => {
                Expr::And(xs.iter().map(|x| self.compile(x)).collect::<Result<_>>()?)
            }
            Formula::Or(xs) => Expr::Or(xs.iter().map(|x| self.compile(x)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => {
                Expr::Implies(Box::new(self.compile(a)?), Box::new(self.compile(b)?))
            }
            Formula::Possibly(x) => Expr::Possibly(Box::new(self.compile(x)?)),
            Formula::Necessarily(x) => Expr::Necessarily(Box::new(self.compile(x)?)),
        })
    }

    /// Compiles a set of formulas that must be modal-free into one conjunction.
    pub(crate) fn compile_plain(&self, fs: &[Formula]) -> Result<Expr> {
        let mut parts = Vec::with_capacity(fs.len());
        for f in fs {
            if !f.is_modal_free() {
                return Err(SemanticsError::ModalFormula(f.to_string()));
            }
            parts.push(self.compile(f)?);
        }
        Ok(Expr::And(parts))
    }

    #[inline]
    pub(crate) fn admissible(&self, w: u64) -> bool {
        !self.restrictions.iter().any(|r| r.violated(w))
    }

    pub(crate) fn restrictions(&self) -> &[Restriction] {
        &self.restrictions
    }

    /// The same model keeping only the restrictions selected by `keep`.
    pub(crate) fn restricted(&self, keep: &[bool]) -> Model<'kb> {
        let restrictions = self
            .restrictions
            .iter()
            .zip(keep)
            .filter(|(_, k)| **k)
            .map(|(r, _)| r.clone())
            .collect();
        Model {
            restrictions,
            ..self.clone()
        }
    }

    pub(crate) fn describe(&self, source: Source) -> String {
        match source {
            Source::Constraint(i) => self.kb.declared_constraints()[i].to_string(),
            Source::Strict(i) => rule_text(&self.kb.rules()[i]),
        }
    }

    fn space(&self) -> u64 {
        1u64 << self.atoms.len()
    }

    #[cfg(feature = "parallel")]
    fn chunks(&self) -> u64 {
        self.space().div_ceil(PARALLEL_CHUNK)
    }

    /// The worlds of chunk `c`, in ascending order.
    #[cfg(feature = "parallel")]
    fn chunk(&self, c: u64) -> std::ops::Range<u64> {
        c * PARALLEL_CHUNK..((c + 1) * PARALLEL_CHUNK).min(self.space())
    }

    #[cfg(feature = "parallel")]
    fn parallel(&self) -> bool {
        self.strategy == Strategy::Parallel && self.atoms.len() >= PARALLEL_MIN_ATOMS
    }

    /// Whether some admissible world satisfies `pred`.
    pub(crate) fn exists(&self, pred: impl Fn(u64) -> bool + Sync + Send) -> bool {
        let test = |w: u64| self.admissible(w) && pred(w);
        #[cfg(feature = "parallel")]
        if self.parallel() {
            use rayon::prelude::*;
            return (0..self.chunks())
                .into_par_iter()
                .any(|c| self.chunk(c).any(test));
        }
        (0..self.space()).any(test)
    }

    /// The lowest admissible world satisfying `pred`.
    pub(crate) fn first(&self, pred: impl Fn(u64) -> bool + Sync + Send) -> Option<u64> {
        let test = |w: &u64| self.admissible(*w) && pred(*w);
        #[cfg(feature = "parallel")]
        if self.parallel() {
            use rayon::prelude::*;
            return (0..self.chunks())
                .into_par_iter()
                .find_map_first(|c| self.chunk(c).find(test));
        }
        (0..self.space()).find(test)
    }

    /// All admissible worlds satisfying `pred`, in ascending order.
    pub(crate) fn collect(&self, pred: impl Fn(u64) -> bool + Sync + Send) -> Vec<u64> {
        let test = |w: &u64| self.admissible(*w) && pred(*w);
        #[cfg(feature = "parallel")]
        if self.parallel() {
            use rayon::prelude::*;
            return (0..self.chunks())
                .into_par_iter()
                .map(|c| self.chunk(c).filter(test).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .concat();
        }
        (0..self.space()).filter(test).collect()
    }

    /// Whether the knowledge base admits at least one world.
    pub fn coherent(&self) -> bool {
        self.exists(|_| true)
    }
}
