use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use super::formula::{Atom, Formula, Literal};
use crate::lang::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    /// `p -> q`: holds in every admissible world.
    Strict,
    /// `p ~> q`: probative, can be defeated.
    Defeasible,
    /// `p => poss(q)`: the antecedent picks out a context in which `q` is possible.
    Modal,
}

impl RuleKind {
    pub fn keyword(self) -> &'static str {
        match self {
            RuleKind::Strict => "strict",
            RuleKind::Defeasible => "defeasible",
            RuleKind::Modal => "rule",
        }
    }

    pub fn arrow(self) -> &'static str {
        match self {
            RuleKind::Strict => "->",
            RuleKind::Defeasible => "~>",
            RuleKind::Modal => "=>",
        }
    }

    fn label_prefix(self) -> &'static str {
        match self {
            RuleKind::Strict => "s",
            RuleKind::Defeasible => "d",
            RuleKind::Modal => "m",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub kind: RuleKind,
    pub label: String,
    pub antecedent: Formula,
    pub consequent: Formula,
}

impl Rule {
    /// For a modal rule, the formula under `poss(...)`.
    pub fn modal_body(&self) -> Option<&Formula> {
        match (&self.kind, &self.consequent) {
            (RuleKind::Modal, Formula::Possibly(body)) => Some(body),
            _ => None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::lang::rule_text(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstraintOrigin {
    Declared,
    /// Desugared from the strict rule with this label.
    StrictRule(String),
}

/// A set of literals that may not all be true together.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    /// Members in declaration order, without duplicates.
    pub members: Vec<Literal>,
    pub origin: ConstraintOrigin,
}

impl Constraint {
    pub fn declared(members: Vec<Literal>) -> Self {
        Constraint {
            members,
            origin: ConstraintOrigin::Declared,
        }
    }

    pub fn arity(&self) -> usize {
        self.members.len()
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("incompatible {")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// One parsed statement of the DSL.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Atoms(Vec<Atom>),
    Incompatible(Vec<Literal>),
    Rule {
        kind: RuleKind,
        label: Option<String>,
        antecedent: Formula,
        consequent: Formula,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpannedStatement {
    pub statement: Statement,
    pub span: Span,
}

/// Unvalidated statements in source order, as produced by the parser.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBaseDraft {
    pub statements: Vec<SpannedStatement>,
}

impl KnowledgeBaseDraft {
    pub fn append(&mut self, other: KnowledgeBaseDraft) {
        self.statements.extend(other.statements);
    }

    pub fn atom_count(&self) -> usize {
        self.count(|s| match s {
            Statement::Atoms(a) => a.len(),
            _ => 0,
        })
    }

    pub fn constraint_count(&self) -> usize {
        self.count(|s| matches!(s, Statement::Incompatible(_)) as usize)
    }

    pub fn rule_count(&self, kind: RuleKind) -> usize {
        self.count(|s| matches!(s, Statement::Rule { kind: k, .. } if *k == kind) as usize)
    }

    fn count(&self, f: impl Fn(&Statement) -> usize) -> usize {
        self.statements.iter().map(|s| f(&s.statement)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("undeclared atom `{atom}` in {context}")]
    UndeclaredAtom { atom: Atom, context: String },
    #[error("atom `{0}` is declared more than once")]
    DuplicateAtom(Atom),
    #[error("duplicate rule label `{0}`")]
    DuplicateLabel(String),
    #[error("incompatibility constraint needs at least two members, got {0}")]
    ConstraintArity(usize),
    #[error("incompatibility constraint contains both `{0}` and its negation")]
    VacuousConstraint(Atom),
    #[error("modal operator in the antecedent of rule `{0}`")]
    ModalInAntecedent(String),
    #[error("modal operator in the consequent of {kind} rule `{label}`")]
    ModalInConsequent { kind: &'static str, label: String },
    #[error("modal rule `{0}` must have a consequent of the form poss(<modal-free formula>)")]
    MalformedModalConsequent(String),
}

/// An immutable, validated revision of a knowledge base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    revision: u64,
    atoms: BTreeSet<Atom>,
    constraints: Vec<Constraint>,
    derived: Vec<Constraint>,
    rules: Vec<Rule>,
}

impl KnowledgeBase {
    fn empty() -> Self {
        KnowledgeBase {
            revision: 0,
            atoms: BTreeSet::new(),
            constraints: Vec::new(),
            derived: Vec::new(),
            rules: Vec::new(),
        }
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    /// Constraints written with `incompatible`, in declaration order.
    pub fn declared_constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Constraints desugared from strict rules.
    pub fn derived_constraints(&self) -> &[Constraint] {
        &self.derived
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().chain(self.derived.iter())
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rules_of(&self, kind: RuleKind) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(move |r| r.kind == kind)
    }

    pub fn rule(&self, label: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.label == label)
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.constraints.is_empty() && self.rules.is_empty()
    }

    /// Equality of content, ignoring the revision number.
    pub fn same_statements(&self, other: &KnowledgeBase) -> bool {
        self.atoms == other.atoms
            && self.constraints == other.constraints
            && self.derived == other.derived
            && self.rules == other.rules
    }

    /// Applies one statement in place, leaving `self` untouched on error.
    fn apply(&mut self, stmt: &Statement) -> Result<(), Vec<ValidationError>> {
        match stmt {
            Statement::Atoms(atoms) => {
                let mut seen = HashSet::new();
                let errors: Vec<_> = atoms
                    .iter()
                    .filter(|a| self.atoms.contains(*a) || !seen.insert(*a))
                    .map(|a| ValidationError::DuplicateAtom(a.clone()))
                    .collect();
                if !errors.is_empty() {
                    return Err(errors);
                }
                self.atoms.extend(atoms.iter().cloned());
                Ok(())
            }
            Statement::Incompatible(members) => {
                let constraint = self.check_constraint(members)?;
                self.constraints.push(constraint);
                Ok(())
            }
            Statement::Rule {
                kind,
                label,
                antecedent,
                consequent,
            } => {
                let label = match label {
                    Some(l) => l.clone(),
                    None => self.fresh_label(*kind),
                };
                let rule = Rule {
                    kind: *kind,
                    label,
                    antecedent: antecedent.clone(),
                    consequent: consequent.clone(),
                };
                self.check_rule(&rule)?;
                if rule.kind == RuleKind::Strict {
                    self.derived
                        .extend(desugar_strict(&rule).unwrap_or_default());
                }
                self.rules.push(rule);
                Ok(())
            }
        }
    }

    fn fresh_label(&self, kind: RuleKind) -> String {
        let base = self.rules_of(kind).count() + 1;
        (base..)
            .map(|n| format!("{}{n}", kind.label_prefix()))
            .find(|l| self.rule(l).is_none())
            .unwrap()
    }

    fn undeclared(&self, f: &Formula, context: &str) -> Vec<ValidationError> {
        f.atoms()
            .into_iter()
            .filter(|a| !self.atoms.contains(a))
            .map(|atom| ValidationError::UndeclaredAtom {
                atom,
                context: context.to_string(),
            })
            .collect()
    }

    fn check_constraint(&self, members: &[Literal]) -> Result<Constraint, Vec<ValidationError>> {
        let mut errors = Vec::new();
        let mut unique: Vec<Literal> = Vec::new();
        for m in members {
            if !self.atoms.contains(&m.atom) {
                errors.push(ValidationError::UndeclaredAtom {
                    atom: m.atom.clone(),
                    context: "incompatibility constraint".into(),
                });
            }
            if !unique.contains(m) {
                unique.push(m.clone());
            }
        }
        for m in &unique {
            if m.positive && unique.contains(&m.negate()) {
                errors.push(ValidationError::VacuousConstraint(m.atom.clone()));
            }
        }
        if unique.len() < 2 {
            errors.push(ValidationError::ConstraintArity(unique.len()));
        }
        if errors.is_empty() {
            Ok(Constraint::declared(unique))
        } else {
            Err(errors)
        }
    }

    fn check_rule(&self, rule: &Rule) -> Result<(), Vec<ValidationError>> {
        let context = format!("rule `{}`", rule.label);
        let mut errors = self.undeclared(&rule.antecedent, &context);
        errors.extend(self.undeclared(&rule.consequent, &context));
        if self.rule(&rule.label).is_some() {
            errors.push(ValidationError::DuplicateLabel(rule.label.clone()));
        }
        if !rule.antecedent.is_modal_free() {
            errors.push(ValidationError::ModalInAntecedent(rule.label.clone()));
        }
        match rule.kind {
            RuleKind::Strict | RuleKind::Defeasible => {
                if !rule.consequent.is_modal_free() {
                    errors.push(ValidationError::ModalInConsequent {
                        kind: rule.kind.keyword(),
                        label: rule.label.clone(),
                    });
                }
            }
            RuleKind::Modal => {
                if rule.modal_body().is_none_or(|b| !b.is_modal_free()) {
                    errors.push(ValidationError::MalformedModalConsequent(
                        rule.label.clone(),
                    ));
                }
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }
}

/// `a1 & .. & an -> c1 & .. & cm` becomes one constraint `{a1, .., an, !ci}`
/// per consequent literal. Returns `None` when the rule is not of that shape
/// (or a constraint would collapse below arity two); such rules are enforced
/// as material conditionals by the world model instead.
pub(crate) fn desugar_strict(rule: &Rule) -> Option<Vec<Constraint>> {
    let antecedent = rule.antecedent.as_literal_conjunction()?;
    let consequent = rule.consequent.as_literal_conjunction()?;
    let mut premises: Vec<Literal> = Vec::new();
    for l in antecedent {
        if !premises.contains(&l) {
            premises.push(l);
        }
    }
    if premises.iter().any(|l| premises.contains(&l.negate())) {
        // Unsatisfiable antecedent: the rule constrains nothing.
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    for c in consequent {
        if premises.contains(&c) {
            continue;
        }
        let denial = c.negate();
        if premises.contains(&denial) {
            return None;
        }
        let mut members = premises.clone();
        members.push(denial);
        let constraint = Constraint {
            members,
            origin: ConstraintOrigin::StrictRule(rule.label.clone()),
        };
        if !out.contains(&constraint) {
            out.push(constraint);
        }
    }
    Some(out)
}

/// Validates a draft into revision 1 of a knowledge base.
pub fn build_kb(draft: &KnowledgeBaseDraft) -> Result<KnowledgeBase, Vec<ValidationError>> {
    let mut kb = KnowledgeBase::empty();
    let mut errors = Vec::new();
    for s in &draft.statements {
        if let Err(e) = kb.apply(&s.statement) {
            errors.extend(e);
        }
    }
    if errors.is_empty() {
        kb.revision = 1;
        Ok(kb)
    } else {
        Err(errors)
    }
}

/// Returns a new revision with `stmt` added; `kb` itself is unchanged.
pub fn add_statement(
    kb: &KnowledgeBase,
    stmt: &Statement,
) -> Result<KnowledgeBase, Vec<ValidationError>> {
    let mut next = kb.clone();
    next.apply(stmt)?;
    next.revision = kb.revision + 1;
    Ok(next)
}

/// Returns a new revision with every statement of `draft` added, or all
/// validation errors; `kb` itself is unchanged.
pub fn extend_kb(
    kb: &KnowledgeBase,
    draft: &KnowledgeBaseDraft,
) -> Result<KnowledgeBase, Vec<ValidationError>> {
    let mut next = kb.clone();
    let mut errors = Vec::new();
    for s in &draft.statements {
        if let Err(e) = next.apply(&s.statement) {
            errors.extend(e);
        }
    }
    if errors.is_empty() {
        next.revision = kb.revision + 1;
        Ok(next)
    } else {
        Err(errors)
    }
}
