//! A material-inference engine.
//!
//! Knowledge bases declare atoms, incompatibility constraints (sets of
//! literals that cannot hold together), strict rules, defeasible rules and
//! modal conditionals `p => poss(q)`. They are evaluated over the finite set
//! of admissible possible worlds, which gives:
//!
//! * incoherence of formula sets and incompatibility-entailment,
//! * S5 possibility and necessity relative to an antecedent context,
//! * nonmonotonic (defeasible) consequence with specificity,
//! * compatibility weights, abductive ranking, chaining through the
//!   implication graph, and a necessary-condition classifier.
//!
//! ```
//! use mik_core::{build_kb, parse_kb, Config, Literal, Model, SourceText, VerdictKind};
//!
//! let src = SourceText::stdin(
//!     "atom penguin, bird, flies.
//!      strict penguin -> bird.
//!      incompatible {penguin, flies}.
//!      defeasible bird ~> flies.",
//! );
//! let kb = build_kb(&parse_kb(&src).unwrap()).unwrap();
//! let model = Model::new(&kb, &Config::default()).unwrap();
//! let verdict = model
//!     .defeasible_query(&[Literal::from_text("penguin")], &Literal::from_text("flies"))
//!     .unwrap();
//! assert_eq!(verdict.kind, VerdictKind::Blocked);
//! ```

pub mod lang;
pub mod model;
pub mod query;
pub mod reason;
pub mod semantics;

pub use lang::{
    parse_formula, parse_kb, parse_literals, parse_query, print_kb, ParseDiagnostic, SourceText,
};
pub use model::{
    add_statement, build_kb, extend_kb, Atom, Constraint, Formula, KnowledgeBase,
    KnowledgeBaseDraft, Literal, Rule, RuleKind, Statement, ValidationError,
};
pub use query::{Query, TraceStep, Verdict, VerdictKind};
pub use reason::ReasonError;
pub use semantics::{Config, Model, SemanticsError, Strategy, World, WorldSet};
