//! Queries accepted by the engine and the verdicts it returns.

use std::fmt;

use crate::model::{Atom, Formula, Literal};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    /// `incoherent {f1, .., fn}`
    Incoherent(Vec<Formula>),
    /// `entails {X} |= q`
    Entails {
        premises: Vec<Formula>,
        conclusion: Formula,
    },
    /// `counterfactual {X} |= q`
    Counterfactual {
        premises: Vec<Formula>,
        conclusion: Formula,
    },
    /// `possible(f | context)`
    Possible {
        formula: Formula,
        context: Option<Formula>,
    },
    /// `necessary(f | context)`
    Necessary {
        formula: Formula,
        context: Option<Formula>,
    },
    /// `defeasible(goal | facts)`
    Defeasible { goal: Literal, facts: Vec<Literal> },
    /// `weight(s | S)`
    Weight {
        subject: Literal,
        reference: Vec<Literal>,
    },
    /// `abduce(observations | candidates)`
    Abduce {
        observations: Vec<Literal>,
        candidates: Vec<Literal>,
    },
    /// `chain(start)`
    Chain(Formula),
    /// `classify(class | features)`
    Classify { class: Atom, features: Vec<Atom> },
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn write_context(
    f: &mut fmt::Formatter<'_>,
    name: &str,
    formula: &Formula,
    context: &Option<Formula>,
) -> fmt::Result {
    write!(f, "{name}(")?;
    crate::lang::write_formula_no_top_or(f, formula)?;
    match context {
        Some(c) => write!(f, " | {c})"),
        None => f.write_str(")"),
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Incoherent(fs) => write!(f, "incoherent {{{}}}", join(fs)),
            Query::Entails {
                premises,
                conclusion,
            } => write!(f, "entails {{{}}} |= {conclusion}", join(premises)),
            Query::Counterfactual {
                premises,
                conclusion,
            } => write!(f, "counterfactual {{{}}} |= {conclusion}", join(premises)),
            Query::Possible { formula, context } => write_context(f, "possible", formula, context),
            Query::Necessary { formula, context } => {
                write_context(f, "necessary", formula, context)
            }
            Query::Defeasible { goal, facts } => {
                write!(f, "defeasible({goal} | {{{}}})", join(facts))
            }
            Query::Weight { subject, reference } => {
                write!(f, "weight({subject} | {{{}}})", join(reference))
            }
            Query::Abduce {
                observations,
                candidates,
            } => write!(
                f,
                "abduce({{{}}} | {{{}}})",
                join(observations),
                join(candidates)
            ),
            Query::Chain(start) => write!(f, "chain({start})"),
            Query::Classify { class, features } => {
                write!(f, "classify({class} | {{{}}})", join(features))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    /// Follows from strict knowledge alone (commitment).
    Entailed,
    /// Follows by undefeated defeasible rules (entitlement).
    DefeasiblyEntailed,
    /// A defeasible rule would yield the goal but is defeated.
    Blocked,
    NotEntailed,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Entailed => "entailed",
            VerdictKind::DefeasiblyEntailed => "defeasibly_entailed",
            VerdictKind::Blocked => "blocked",
            VerdictKind::NotEntailed => "not_entailed",
        }
    }

    pub fn holds(self) -> bool {
        matches!(
            self,
            VerdictKind::Entailed | VerdictKind::DefeasiblyEntailed
        )
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One justification step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TraceStep {
    Fact(Literal),
    /// A rule, rendered in DSL syntax.
    Rule(String),
    /// A declared incompatibility constraint.
    Constraint(String),
    DefeatedBy(String),
    /// An unresolved conflict between two defeasible rules.
    Conflict(String, String),
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceStep::Fact(l) => write!(f, "fact {l}"),
            TraceStep::Rule(r) => f.write_str(r),
            TraceStep::Constraint(c) => f.write_str(c),
            TraceStep::DefeatedBy(d) => write!(f, "defeated by {d}"),
            TraceStep::Conflict(a, b) => write!(f, "unresolved conflict between {a} and {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub trace: Vec<TraceStep>,
    /// Set for `Blocked`: what defeated the rule, in DSL syntax.
    pub defeater: Option<String>,
}

impl Verdict {
    pub fn not_entailed(trace: Vec<TraceStep>) -> Self {
        Verdict {
            kind: VerdictKind::NotEntailed,
            trace,
            defeater: None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VerdictKind::Entailed => f.write_str("ENTAILED"),
            VerdictKind::DefeasiblyEntailed => f.write_str("DEFEASIBLY ENTAILED"),
            VerdictKind::Blocked => write!(
                f,
                "BLOCKED by {}",
                self.defeater.as_deref().unwrap_or("unknown defeater")
            ),
            VerdictKind::NotEntailed => f.write_str("NOT ENTAILED"),
        }
    }
}
