use super::{Model, Result, SemanticsError, World, WorldSet};
use crate::model::{Formula, RuleKind};

/// Answer to `possible(..)` / `necessary(..)` relative to a context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalAnswer {
    pub holds: bool,
    /// Number of admissible worlds in the context.
    pub context_worlds: usize,
    /// A world where the formula holds (for `possible`) or fails (for
    /// `necessary`), if any.
    pub witness: Option<Vec<crate::model::Literal>>,
}

impl ModalAnswer {
    /// The context picked out no world at all.
    pub fn vacuous(&self) -> bool {
        self.context_worlds == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalEntry {
    pub label: String,
    pub satisfied: bool,
    /// The antecedent is unsatisfiable in every admissible world.
    pub vacuous: bool,
    pub witness: Option<World>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalReport {
    /// Atom order for rendering witnesses.
    pub worlds: WorldSet,
    pub entries: Vec<ModalEntry>,
}

impl ModalReport {
    pub fn all_satisfied(&self) -> bool {
        self.entries.iter().all(|e| e.satisfied)
    }

    pub fn entry(&self, label: &str) -> Option<&ModalEntry> {
        self.entries.iter().find(|e| e.label == label)
    }
}

impl Model<'_> {
    /// Truth of `f` at `world`. Modal subformulas quantify over `ctx`.
    pub fn eval(&self, world: World, f: &Formula, ctx: Option<&WorldSet>) -> Result<bool> {
        let e = self.compile(f)?;
        e.holds_in(world.0, ctx.map(WorldSet::raw))
            .ok_or_else(|| SemanticsError::MissingContext(f.to_string()))
    }

    fn context(&self, context: Option<&Formula>) -> Result<WorldSet> {
        self.worlds(context)
    }

    /// `◇f` relative to the worlds picked out by `context`.
    pub fn possible(&self, f: &Formula, context: Option<&Formula>) -> Result<ModalAnswer> {
        let ctx = self.context(context)?;
        let e = self.compile(f)?;
        let mut witness = None;
        for w in ctx.raw() {
            if e.holds_in(*w, Some(ctx.raw())).unwrap_or(false) {
                witness = Some(ctx.literals(World(*w)));
                break;
            }
        }
        Ok(ModalAnswer {
            holds: witness.is_some(),
            context_worlds: ctx.len(),
            witness,
        })
    }

    /// `□f` relative to the worlds picked out by `context`; true when the
    /// context is empty.
    pub fn necessary(&self, f: &Formula, context: Option<&Formula>) -> Result<ModalAnswer> {
        let ctx = self.context(context)?;
        let e = self.compile(f)?;
        let mut witness = None;
        for w in ctx.raw() {
            if !e.holds_in(*w, Some(ctx.raw())).unwrap_or(false) {
                witness = Some(ctx.literals(World(*w)));
                break;
            }
        }
        Ok(ModalAnswer {
            holds: witness.is_none(),
            context_worlds: ctx.len(),
            witness,
        })
    }

    /// Checks each modal rule `p => poss(q)`: satisfied when some admissible
    /// `p`-world satisfies `q`, or vacuously when there is no `p`-world.
    pub fn check_modal_rules(&self) -> Result<ModalReport> {
        let mut entries = Vec::new();
        for rule in self.kb.rules_of(RuleKind::Modal) {
            let antecedent = self.compile(&rule.antecedent)?;
            let body = self.compile(rule.modal_body().expect("validated modal rule"))?;
            let vacuous = !self.exists(|w| antecedent.holds(w));
            let witness = if vacuous {
                None
            } else {
                self.first(|w| antecedent.holds(w) && body.holds(w))
                    .map(World)
            };
            entries.push(ModalEntry {
                label: rule.label.clone(),
                satisfied: vacuous || witness.is_some(),
                vacuous,
                witness,
            });
        }
        Ok(ModalReport {
            worlds: self.world_set(Vec::new()),
            entries,
        })
    }
}
