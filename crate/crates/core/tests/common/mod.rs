#![allow(dead_code)]

use std::path::PathBuf;

use mik_core::model::{
    add_statement, build_kb, Atom, Formula, KnowledgeBase, KnowledgeBaseDraft, Literal, RuleKind,
    Statement,
};
use mik_core::{parse_kb, SourceText};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x6d69_6b5f_7365_6564;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

/// Parses and validates the concatenation of the named fixtures.
pub fn load(names: &[&str]) -> KnowledgeBase {
    let mut draft = KnowledgeBaseDraft::default();
    for name in names {
        let src = SourceText::new(*name, fixture_text(name));
        draft.append(parse_kb(&src).unwrap());
    }
    build_kb(&draft).unwrap()
}

pub fn kb(text: &str) -> KnowledgeBase {
    build_kb(&parse_kb(&SourceText::stdin(text)).unwrap()).unwrap()
}

pub fn atom_names(n: usize) -> Vec<Atom> {
    (0..n).map(|i| Atom::new(format!("a{i}"))).collect()
}

pub fn literal(rng: &mut ChaCha8Rng, atoms: &[Atom]) -> Literal {
    Literal::new(atoms.choose(rng).unwrap().clone(), rng.gen())
}

/// Every literal over `atoms`, both polarities.
pub fn literal_universe(atoms: &[Atom]) -> Vec<Literal> {
    atoms.iter().flat_map(|a| [a.pos(), a.neg()]).collect()
}

/// A constraint over `arity` distinct atoms.
pub fn constraint(rng: &mut ChaCha8Rng, atoms: &[Atom], arity: usize) -> Vec<Literal> {
    atoms
        .choose_multiple(rng, arity)
        .map(|a| Literal::new(a.clone(), rng.gen()))
        .collect()
}

/// A modal-free formula of bounded depth built with the public constructors.
pub fn formula(rng: &mut ChaCha8Rng, atoms: &[Atom], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return Formula::from(literal(rng, atoms));
    }
    let width = rng.gen_range(2..=3);
    match rng.gen_range(0..4) {
        0 => Formula::not(formula(rng, atoms, depth - 1)),
        k @ (1 | 2) => {
            let parts: Vec<Formula> = (0..width).map(|_| formula(rng, atoms, depth - 1)).collect();
            if k == 1 {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
        _ => Formula::implies(
            formula(rng, atoms, depth - 1),
            formula(rng, atoms, depth - 1),
        ),
    }
}

fn rule(
    kind: RuleKind,
    label: Option<String>,
    antecedent: Formula,
    consequent: Formula,
) -> Statement {
    Statement::Rule {
        kind,
        label,
        antecedent,
        consequent,
    }
}

/// A random valid knowledge base using every statement kind. Invalid
/// statements are retried, so the result always validates.
pub fn random_kb(rng: &mut ChaCha8Rng, n_atoms: usize) -> KnowledgeBase {
    let atoms = atom_names(n_atoms);
    let mut kb = build_kb(&KnowledgeBaseDraft::default()).unwrap();
    let mut shuffled = atoms.clone();
    shuffled.shuffle(rng);
    for chunk in shuffled.chunks(3) {
        kb = add_statement(&kb, &Statement::Atoms(chunk.to_vec())).unwrap();
    }
    let statements = rng.gen_range(0..8);
    let mut added = 0;
    while added < statements {
        let label = rng
            .gen_bool(0.3)
            .then(|| format!("r{}", rng.gen_range(0..100)));
        let stmt = match rng.gen_range(0..4) {
            0 if n_atoms >= 2 => {
                let arity = rng.gen_range(2..=n_atoms.min(3));
                Statement::Incompatible(constraint(rng, &atoms, arity))
            }
            1 => rule(
                RuleKind::Strict,
                label,
                formula(rng, &atoms, 2),
                formula(rng, &atoms, 2),
            ),
            2 => rule(
                RuleKind::Defeasible,
                label,
                formula(rng, &atoms, 2),
                formula(rng, &atoms, 2),
            ),
            _ => rule(
                RuleKind::Modal,
                label,
                formula(rng, &atoms, 2),
                Formula::possibly(formula(rng, &atoms, 2)),
            ),
        };
        if let Ok(next) = add_statement(&kb, &stmt) {
            kb = next;
            added += 1;
        }
    }
    kb
}

/// A knowledge base of atoms and literal constraints only.
pub fn constraint_kb(atoms: &[Atom], constraints: &[Vec<Literal>]) -> KnowledgeBase {
    let empty = build_kb(&KnowledgeBaseDraft::default()).unwrap();
    let mut kb = add_statement(&empty, &Statement::Atoms(atoms.to_vec())).unwrap();
    for c in constraints {
        kb = add_statement(&kb, &Statement::Incompatible(c.clone())).unwrap();
    }
    kb
}
