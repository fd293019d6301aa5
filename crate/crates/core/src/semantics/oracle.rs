//! Reference implementations that share nothing with the compiled world
//! model: assignments are maps from atoms to booleans, formulas are
//! evaluated by walking the syntax tree, and incompatibility-entailment is
//! decided by its quantified definition (everything incompatible with the
//! conclusion is incompatible with the premises) instead of by worlds.
//! These are exponential and meant for cross-checking.

use std::collections::BTreeMap;

use super::{Result, SemanticsError};
use crate::model::{Atom, Formula, KnowledgeBase, Literal, RuleKind};

/// Atom bound for [`inc_entails_oracle`]; it visits `3^n` literal sets.
pub const ORACLE_MAX_ATOMS: usize = 8;

type Assignment = BTreeMap<Atom, bool>;

fn eval(a: &Assignment, f: &Formula) -> bool {
    match f {
        Formula::Atom(x) => a[x],
        Formula::Not(x) => !eval(a, x),
        Formula::And(xs) => xs.iter().all(|x| eval(a, x)),
        Formula::Or(xs) => xs.iter().any(|x| eval(a, x)),
        Formula::Implies(x, y) => !eval(a, x) || eval(a, y),
        Formula::Possibly(_) | Formula::Necessarily(_) => {
            panic!("oracle evaluates modal-free formulas only")
        }
    }
}

fn literal_true(a: &Assignment, l: &Literal) -> bool {
    a[&l.atom] == l.positive
}

fn admissible(kb: &KnowledgeBase, a: &Assignment) -> bool {
    let constraints_ok = kb
        .constraints()
        .all(|c| !c.members.iter().all(|m| literal_true(a, m)));
    let strict_ok = kb
        .rules_of(RuleKind::Strict)
        .all(|r| !eval(a, &r.antecedent) || eval(a, &r.consequent));
    constraints_ok && strict_ok
}

fn assignments(atoms: &[Atom]) -> impl Iterator<Item = Assignment> + '_ {
    (0u64..1 << atoms.len()).map(move |bits| {
        atoms
            .iter()
            .enumerate()
            .map(|(i, atom)| (atom.clone(), bits >> i & 1 == 1))
            .collect()
    })
}

/// Incoherence by brute-force enumeration of assignments.
pub fn incoherent_by_enumeration(kb: &KnowledgeBase, set: &[Formula]) -> bool {
    let atoms: Vec<Atom> = kb.atoms().iter().cloned().collect();
    let coherent =
        assignments(&atoms).any(|a| admissible(kb, &a) && set.iter().all(|f| eval(&a, f)));
    !coherent
}

/// Incompatibility-entailment by its quantified definition: for every set
/// `Y` of literals over the KB's atoms, if `Y ∪ {q}` is incoherent then
/// `Y ∪ X` is incoherent. Sets holding both `p` and `!p` satisfy the
/// condition trivially and are skipped.
pub fn inc_entails_oracle(
    kb: &KnowledgeBase,
    premises: &[Formula],
    conclusion: &Formula,
) -> Result<bool> {
    if kb.atoms().len() > ORACLE_MAX_ATOMS {
        return Err(SemanticsError::AtomBoundExceeded {
            atoms: kb.atoms().len(),
            bound: ORACLE_MAX_ATOMS,
        });
    }
    for f in premises.iter().chain(std::iter::once(conclusion)) {
        if !f.is_modal_free() {
            return Err(SemanticsError::ModalFormula(f.to_string()));
        }
        if let Some(a) = f.atoms().into_iter().find(|a| !kb.atoms().contains(a)) {
            return Err(SemanticsError::UndeclaredAtom(a));
        }
    }
    let atoms: Vec<Atom> = kb.atoms().iter().cloned().collect();
    let total = 3usize.pow(atoms.len() as u32);
    for code in 0..total {
        // base-3 digit per atom: 0 absent, 1 positive, 2 negative
        let mut y = Vec::new();
        let mut c = code;
        for atom in &atoms {
            match c % 3 {
                1 => y.push(Formula::from(atom.pos())),
                2 => y.push(Formula::from(atom.neg())),
                _ => {}
            }
            c /= 3;
        }
        let mut with_q = y.clone();
        with_q.push(conclusion.clone());
        if !incoherent_by_enumeration(kb, &with_q) {
            continue;
        }
        let mut with_x = y;
        with_x.extend(premises.iter().cloned());
        if !incoherent_by_enumeration(kb, &with_x) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The quantified definition restricted to literal premises and
/// conclusions, with the coherence of every consistent literal set
/// tabulated once per knowledge base. Suited to checking many pairs.
#[derive(Debug, Clone)]
pub struct LiteralOracle {
    atoms: Vec<Atom>,
    pow3: Vec<usize>,
    /// Indexed by base-3 code: digit 0 absent, 1 positive, 2 negative.
    coherent: Vec<bool>,
}

impl LiteralOracle {
    pub fn new(kb: &KnowledgeBase) -> Result<Self> {
        if kb.atoms().len() > ORACLE_MAX_ATOMS {
            return Err(SemanticsError::AtomBoundExceeded {
                atoms: kb.atoms().len(),
                bound: ORACLE_MAX_ATOMS,
            });
        }
        let atoms: Vec<Atom> = kb.atoms().iter().cloned().collect();
        let admissible: Vec<Assignment> =
            assignments(&atoms).filter(|a| admissible(kb, a)).collect();
        let pow3: Vec<usize> = (0..=atoms.len()).map(|i| 3usize.pow(i as u32)).collect();
        let coherent = (0..pow3[atoms.len()])
            .map(|code| {
                let set = Self::decode(&atoms, code);
                admissible
                    .iter()
                    .any(|a| set.iter().all(|l| literal_true(a, l)))
            })
            .collect();
        Ok(LiteralOracle {
            atoms,
            pow3,
            coherent,
        })
    }

    fn decode(atoms: &[Atom], mut code: usize) -> Vec<Literal> {
        let mut out = Vec::new();
        for atom in atoms {
            match code % 3 {
                1 => out.push(atom.pos()),
                2 => out.push(atom.neg()),
                _ => {}
            }
            code /= 3;
        }
        out
    }

    /// Adds `set` to the literal set `code`; `None` if that puts a literal
    /// and its negation together.
    fn merge(&self, mut code: usize, set: &[Literal]) -> Option<usize> {
        for l in set {
            let i = self
                .atoms
                .iter()
                .position(|a| *a == l.atom)
                .expect("literal over a declared atom");
            let want = if l.positive { 1 } else { 2 };
            match code / self.pow3[i] % 3 {
                0 => code += want * self.pow3[i],
                d if d == want => {}
                _ => return None,
            }
        }
        Some(code)
    }

    pub fn incoherent(&self, set: &[Literal]) -> bool {
        self.merge(0, set).is_none_or(|c| !self.coherent[c])
    }

    /// For every literal set `Y`: `Y ∪ {q}` incoherent implies `Y ∪ X`
    /// incoherent.
    pub fn entails(&self, premises: &[Literal], conclusion: &Literal) -> bool {
        (0..self.coherent.len()).all(|y| {
            let with_q = self.merge(y, std::slice::from_ref(conclusion));
            if with_q.is_some_and(|c| self.coherent[c]) {
                return true;
            }
            self.merge(y, premises).is_none_or(|c| !self.coherent[c])
        })
    }
}
