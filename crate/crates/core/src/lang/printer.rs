use std::fmt::{self, Write as _};

use super::source::SourceText;
use crate::model::{Formula, KnowledgeBase, Rule, RuleKind};

// Binding strength, loosest first.
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;
const ATOMIC: u8 = 5;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => IMPLIES,
        Formula::Or(_) => OR,
        Formula::And(_) => AND,
        Formula::Not(_) => NOT,
        Formula::Atom(_) | Formula::Possibly(_) | Formula::Necessarily(_) => ATOMIC,
    }
}

/// Writes `f`, parenthesized when it binds looser than `min`.
fn write_at(out: &mut fmt::Formatter<'_>, f: &Formula, min: u8) -> fmt::Result {
    if precedence(f) < min {
        out.write_str("(")?;
        write_formula(out, f)?;
        out.write_str(")")
    } else {
        write_formula(out, f)
    }
}

fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    match f {
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::Not(inner) => {
            out.write_str("!")?;
            write_at(out, inner, NOT)
        }
        Formula::And(parts) | Formula::Or(parts) => {
            let (sep, own) = if matches!(f, Formula::And(_)) {
                (" & ", AND)
            } else {
                (" | ", OR)
            };
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.write_str(sep)?;
                }
                // Nested chains of the same connective keep their parentheses.
                write_at(out, p, own + 1)?;
            }
            Ok(())
        }
        Formula::Implies(a, b) => {
            write_at(out, a, IMPLIES + 1)?;
            out.write_str(" -> ")?;
            write_at(out, b, IMPLIES)
        }
        Formula::Possibly(inner) => {
            out.write_str("poss(")?;
            write_formula(out, inner)?;
            out.write_str(")")
        }
        Formula::Necessarily(inner) => {
            out.write_str("nec(")?;
            write_formula(out, inner)?;
            out.write_str(")")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}

fn has_bare_or(f: &Formula) -> bool {
    match f {
        Formula::Or(_) => true,
        Formula::Implies(a, b) => has_bare_or(a) || has_bare_or(b),
        _ => false,
    }
}

/// Writes a formula for a position where a top-level `|` would be read as
/// a separator (the body of `possible(...)` and `necessary(...)`).
pub fn write_formula_no_top_or(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    if has_bare_or(f) {
        out.write_str("(")?;
        write_formula(out, f)?;
        out.write_str(")")
    } else {
        write_formula(out, f)
    }
}

/// One rule as a DSL statement, without the trailing period.
pub fn rule_text(rule: &Rule) -> String {
    match rule.kind {
        RuleKind::Strict => format!(
            "strict {}: {}",
            rule.label,
            Formula::implies(rule.antecedent.clone(), rule.consequent.clone())
        ),
        kind => format!(
            "{} {}: {} {} {}",
            kind.keyword(),
            rule.label,
            rule.antecedent,
            kind.arrow(),
            rule.consequent
        ),
    }
}

/// Canonical text: atoms sorted, declared constraints in declaration order,
/// then rules in order, one statement per line. Derived constraints are
/// omitted since validation regenerates them.
pub fn print_kb(kb: &KnowledgeBase) -> SourceText {
    if kb.is_empty() {
        return SourceText::new("<printed>", "(* empty *)\n");
    }
    let mut out = String::new();
    if !kb.atoms().is_empty() {
        let names: Vec<_> = kb.atoms().iter().map(|a| a.name()).collect();
        writeln!(out, "atom {}.", names.join(", ")).unwrap();
    }
    for c in kb.declared_constraints() {
        writeln!(out, "{c}.").unwrap();
    }
    for r in kb.rules() {
        writeln!(out, "{}.", rule_text(r)).unwrap();
    }
    SourceText::new("<printed>", out)
}
