//! Knowledge-base data model: atoms, literals, formulas, constraints and
//! rules, plus validation of parsed drafts into immutable revisions.

mod formula;
mod kb;

pub use formula::{Atom, Formula, Literal};
pub(crate) use kb::desugar_strict;
pub use kb::{
    add_statement, build_kb, extend_kb, Constraint, ConstraintOrigin, KnowledgeBase,
    KnowledgeBaseDraft, Rule, RuleKind, SpannedStatement, Statement, ValidationError,
};
