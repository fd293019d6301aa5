//! Formulas compiled against a fixed atom order; a world is a bitmask with
//! bit `i` holding the truth value of atom `i`.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Expr {
    Var(u32),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Possibly(Box<Expr>),
    Necessarily(Box<Expr>),
}

impl Expr {
    /// Classical evaluation; modal subformulas must not occur.
    #[inline]
    pub fn holds(&self, w: u64) -> bool {
        match self {
            Expr::Var(i) => w >> i & 1 == 1,
            Expr::Not(e) => !e.holds(w),
            Expr::And(es) => es.iter().all(|e| e.holds(w)),
            Expr::Or(es) => es.iter().any(|e| e.holds(w)),
            Expr::Implies(a, b) => !a.holds(w) || b.holds(w),
            Expr::Possibly(_) | Expr::Necessarily(_) => {
                unreachable!("modal formula evaluated without a context")
            }
        }
    }

    /// Evaluation with S5 modalities over `ctx`: every world in the context
    /// sees every other, so the value of a modal subformula does not depend
    /// on `w`. Returns `None` if a modality is met and `ctx` is absent.
    pub fn holds_in(&self, w: u64, ctx: Option<&[u64]>) -> Option<bool> {
        Some(match self {
            Expr::Var(i) => w >> i & 1 == 1,
            Expr::Not(e) => !e.holds_in(w, ctx)?,
            Expr::And(es) => {
                for e in es {
                    if !e.holds_in(w, ctx)? {
                        return Some(false);
                    }
                }
                true
            }
            Expr::Or(es) => {
                for e in es {
                    if e.holds_in(w, ctx)? {
                        return Some(true);
                    }
                }
                false
            }
            Expr::Implies(a, b) => !a.holds_in(w, ctx)? || b.holds_in(w, ctx)?,
            Expr::Possibly(e) => {
                let ctx = ctx?;
                for &v in ctx {
                    if e.holds_in(v, Some(ctx))? {
                        return Some(true);
                    }
                }
                false
            }
            Expr::Necessarily(e) => {
                let ctx = ctx?;
                for &v in ctx {
                    if !e.holds_in(v, Some(ctx))? {
                        return Some(false);
                    }
                }
                true
            }
        })
    }
}
