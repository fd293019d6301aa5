use std::collections::BTreeSet;
use std::fmt;

/// An atomic sentence. Names are lowercase identifiers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Self {
        Atom(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn pos(&self) -> Literal {
        Literal::new(self.clone(), true)
    }

    pub fn neg(&self) -> Literal {
        Literal::new(self.clone(), false)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::new(s)
    }
}

/// An atom together with a polarity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn new(atom: Atom, positive: bool) -> Self {
        Literal { atom, positive }
    }

    pub fn negate(&self) -> Literal {
        Literal::new(self.atom.clone(), !self.positive)
    }

    /// Parses `p` or `!p` without any validation of the name.
    pub fn from_text(s: &str) -> Literal {
        match s.strip_prefix('!') {
            Some(rest) => Atom::new(rest.trim()).neg(),
            None => Atom::new(s.trim()).pos(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("!")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// Propositional formula with the two S5 modalities.
///
/// `And`/`Or` are n-ary; the parser produces one node per unparenthesized
/// chain so that printing and re-parsing preserves the tree exactly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Possibly(Box<Formula>),
    Necessarily(Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name))
    }

    // A constructor, not negation of `self`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        Self::nary(parts.into_iter().collect(), Formula::And)
    }

    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        Self::nary(parts.into_iter().collect(), Formula::Or)
    }

    fn nary(mut parts: Vec<Formula>, make: fn(Vec<Formula>) -> Formula) -> Formula {
        match parts.len() {
            0 => panic!("connective needs at least one operand"),
            1 => parts.pop().unwrap(),
            _ => make(parts),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn possibly(f: Formula) -> Formula {
        Formula::Possibly(Box::new(f))
    }

    pub fn necessarily(f: Formula) -> Formula {
        Formula::Necessarily(Box::new(f))
    }

    pub fn is_modal_free(&self) -> bool {
        self.modal_depth() == 0
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::modal_depth).max().unwrap_or(0)
            }
            Formula::Implies(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Possibly(f) | Formula::Necessarily(f) => 1 + f.modal_depth(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) | Formula::Possibly(f) | Formula::Necessarily(f) => {
                f.collect_atoms(out)
            }
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// `p` or `!p`, after stripping double negations.
    pub fn as_literal(&self) -> Option<Literal> {
        match self {
            Formula::Atom(a) => Some(a.pos()),
            Formula::Not(inner) => inner.as_literal().map(|l| l.negate()),
            _ => None,
        }
    }

    /// The literals of a conjunction of literals (a lone literal counts).
    pub fn as_literal_conjunction(&self) -> Option<Vec<Literal>> {
        match self {
            Formula::And(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    out.extend(f.as_literal_conjunction()?);
                }
                Some(out)
            }
            other => other.as_literal().map(|l| vec![l]),
        }
    }

    /// Canonical form used for syntactic node identity: nested conjunctions
    /// and disjunctions are flattened, sorted and deduplicated, and double
    /// negations removed.
    pub fn canonical(&self) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::Not(inner) => match inner.canonical() {
                Formula::Not(x) => *x,
                c => Formula::not(c),
            },
            Formula::And(fs) => Self::canonical_nary(fs, true),
            Formula::Or(fs) => Self::canonical_nary(fs, false),
            Formula::Implies(a, b) => Formula::implies(a.canonical(), b.canonical()),
            Formula::Possibly(f) => Formula::possibly(f.canonical()),
            Formula::Necessarily(f) => Formula::necessarily(f.canonical()),
        }
    }

    fn canonical_nary(fs: &[Formula], conj: bool) -> Formula {
        let mut parts = BTreeSet::new();
        for f in fs {
            match (f.canonical(), conj) {
                (Formula::And(inner), true) | (Formula::Or(inner), false) => parts.extend(inner),
                (c, _) => {
                    parts.insert(c);
                }
            }
        }
        let parts: Vec<_> = parts.into_iter().collect();
        if conj {
            Formula::and(parts)
        } else {
            Formula::or(parts)
        }
    }
}

impl From<Literal> for Formula {
    fn from(l: Literal) -> Self {
        let a = Formula::Atom(l.atom);
        if l.positive {
            a
        } else {
            Formula::not(a)
        }
    }
}

impl From<&Literal> for Formula {
    fn from(l: &Literal) -> Self {
        Formula::from(l.clone())
    }
}

impl From<Atom> for Formula {
    fn from(a: Atom) -> Self {
        Formula::Atom(a)
    }
}
