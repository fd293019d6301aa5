//! Defeasible consequence over the strict world model.
//!
//! Defeasible rules fire in rounds. In each round every unfired rule whose
//! antecedent is entailed by the facts plus accepted conclusions is
//! considered at once, and a rule is kept out when
//!
//! 1. its conclusion is incoherent with the facts under strict knowledge,
//! 2. a conflicting applicable rule is more specific (its antecedent
//!    entails ours but not conversely), or
//! 3. its conclusion is incoherent with conclusions accepted earlier.
//!
//! A conflict that specificity cannot settle keeps both rules out without
//! counting as a defeat. Each rule is considered at most once.

use std::collections::BTreeSet;

use super::{Model, Result, SemanticsError, Source};
use crate::lang::rule_text;
use crate::model::{Formula, Literal, RuleKind};
use crate::query::{TraceStep, Verdict, VerdictKind};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Defeat {
    Strict(Vec<Source>),
    MoreSpecific(usize),
    Earlier(usize),
}

#[derive(Debug, Clone)]
struct Fired {
    rule: usize,
    /// Earlier accepted rules and strict sources its antecedent relied on.
    rules_used: Vec<usize>,
    sources_used: Vec<Source>,
    facts_used: Vec<usize>,
}

#[derive(Debug, Default)]
struct Run {
    accepted: Vec<Fired>,
    defeated: Vec<(Fired, Defeat)>,
    conflicts: Vec<(usize, usize)>,
}

/// What the facts commit to (strict consequence) and entitle to
/// (undefeated defeasible consequence), as literals over declared atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub committed: Vec<Literal>,
    pub entitled: Vec<Literal>,
}

impl Model<'_> {
    fn defeasible_rules(&self) -> Vec<usize> {
        self.kb
            .rules()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.kind == RuleKind::Defeasible)
            .map(|(i, _)| i)
            .collect()
    }

    fn antecedent(&self, rule: usize) -> &Formula {
        &self.kb.rules()[rule].antecedent
    }

    fn consequent(&self, rule: usize) -> &Formula {
        &self.kb.rules()[rule].consequent
    }

    fn more_specific(&self, a: usize, b: usize) -> Result<bool> {
        let (ant_a, ant_b) = (self.antecedent(a), self.antecedent(b));
        Ok(self.inc_entails(std::slice::from_ref(ant_a), ant_b)?
            && !self.inc_entails(std::slice::from_ref(ant_b), ant_a)?)
    }

    fn known(&self, facts: &[Formula], accepted: &[Fired]) -> Vec<Formula> {
        let mut known = facts.to_vec();
        known.extend(accepted.iter().map(|f| self.consequent(f.rule).clone()));
        known
    }

    /// Why `rule`'s antecedent holds given the facts and accepted rules.
    fn support(&self, rule: usize, facts: &[Formula], accepted: &[Fired]) -> Result<Fired> {
        let mut removable = facts.to_vec();
        removable.extend(accepted.iter().map(|f| self.consequent(f.rule).clone()));
        let fixed = [Formula::not(self.antecedent(rule).clone())];
        let core = self.incoherent_core(&fixed, &removable)?;
        let (facts_used, rules_used) = split(&core.formulas, facts.len(), accepted);
        Ok(Fired {
            rule,
            rules_used,
            sources_used: core.sources,
            facts_used,
        })
    }

    /// The earlier accepted rule whose conclusion `rule` contradicts.
    /// Callers ensure facts, accepted conclusions and `rule`'s conclusion
    /// are jointly incoherent.
    fn culprit(&self, rule: usize, facts: &[Formula], accepted: &[Fired]) -> Result<Defeat> {
        let mut fixed = facts.to_vec();
        fixed.push(self.consequent(rule).clone());
        let removable: Vec<_> = accepted
            .iter()
            .map(|f| self.consequent(f.rule).clone())
            .collect();
        let core = self.incoherent_core(&fixed, &removable)?;
        Ok(match core.formulas.first() {
            Some(i) => Defeat::Earlier(accepted[*i].rule),
            None => Defeat::Strict(core.sources),
        })
    }

    fn run_defaults(&self, facts: &[Formula]) -> Result<Run> {
        let mut run = Run::default();
        let mut settled = BTreeSet::new();
        loop {
            let known = self.known(facts, &run.accepted);
            let mut applicable = Vec::new();
            for r in self.defeasible_rules() {
                if !settled.contains(&r) && self.inc_entails(&known, self.antecedent(r))? {
                    applicable.push(r);
                }
            }
            if applicable.is_empty() {
                return Ok(run);
            }
            settled.extend(applicable.iter().copied());

            let mut live = Vec::new();
            for &r in &applicable {
                let fired = self.support(r, facts, &run.accepted)?;
                let mut with = facts.to_vec();
                with.push(self.consequent(r).clone());
                if self.incoherent(&with)? {
                    let core = self.incoherent_core(&[self.consequent(r).clone()], facts)?;
                    run.defeated.push((fired, Defeat::Strict(core.sources)));
                    continue;
                }
                let mut with = known.clone();
                with.push(self.consequent(r).clone());
                if self.incoherent(&with)? {
                    let defeat = self.culprit(r, facts, &run.accepted)?;
                    run.defeated.push((fired, defeat));
                } else {
                    live.push(fired);
                }
            }

            let mut winners = Vec::new();
            for fired in &live {
                let r = fired.rule;
                let mut defeat = None;
                let mut unresolved = None;
                for other in &live {
                    let o = other.rule;
                    if o == r {
                        continue;
                    }
                    let mut both = known.clone();
                    both.push(self.consequent(r).clone());
                    both.push(self.consequent(o).clone());
                    if !self.incoherent(&both)? {
                        continue;
                    }
                    if self.more_specific(o, r)? {
                        defeat.get_or_insert(Defeat::MoreSpecific(o));
                    } else if !self.more_specific(r, o)? {
                        unresolved.get_or_insert(o);
                    }
                }
                match (defeat, unresolved) {
                    (Some(d), _) => run.defeated.push((fired.clone(), d)),
                    (None, Some(o)) => {
                        let pair = (r.min(o), r.max(o));
                        if !run.conflicts.contains(&pair) {
                            run.conflicts.push(pair);
                        }
                    }
                    (None, None) => winners.push(fired.clone()),
                }
            }

            for fired in winners {
                let mut with = self.known(facts, &run.accepted);
                with.push(self.consequent(fired.rule).clone());
                if self.incoherent(&with)? {
                    let defeat = self.culprit(fired.rule, facts, &run.accepted)?;
                    run.defeated.push((fired, defeat));
                } else {
                    run.accepted.push(fired);
                }
            }
        }
    }

    fn facts_as_formulas(&self, facts: &[Literal]) -> Result<Vec<Formula>> {
        let fs: Vec<Formula> = facts.iter().map(Formula::from).collect();
        if self.incoherent(&fs)? {
            return Err(SemanticsError::IncoherentFacts);
        }
        Ok(fs)
    }

    fn source_step(&self, s: Source) -> TraceStep {
        match s {
            Source::Constraint(_) => TraceStep::Constraint(self.describe(s)),
            Source::Strict(_) => TraceStep::Rule(self.describe(s)),
        }
    }

    /// Trace for an accepted or defeated rule: its prerequisites first.
    fn derivation(&self, fired: &Fired, run: &Run, facts: &[Literal], out: &mut Vec<TraceStep>) {
        for &r in &fired.rules_used {
            if let Some(prev) = run.accepted.iter().find(|f| f.rule == r) {
                self.derivation(prev, run, facts, out);
            }
        }
        for &i in &fired.facts_used {
            push_unique(out, TraceStep::Fact(facts[i].clone()));
        }
        for &s in &fired.sources_used {
            push_unique(out, self.source_step(s));
        }
        push_unique(
            out,
            TraceStep::Rule(rule_text(&self.kb.rules()[fired.rule])),
        );
    }

    fn defeater_text(&self, defeat: &Defeat) -> String {
        match defeat {
            Defeat::Strict(sources) => sources
                .iter()
                .map(|s| self.describe(*s))
                .collect::<Vec<_>>()
                .join(" and "),
            Defeat::MoreSpecific(r) => {
                format!("more specific {}", rule_text(&self.kb.rules()[*r]))
            }
            Defeat::Earlier(r) => rule_text(&self.kb.rules()[*r]),
        }
    }

    /// Whether `goal` follows from `facts`: strictly, defeasibly, or not,
    /// and whether a defeated rule would have yielded it.
    pub fn defeasible_query(&self, facts: &[Literal], goal: &Literal) -> Result<Verdict> {
        let fact_fs = self.facts_as_formulas(facts)?;
        let goal_f = Formula::from(goal);

        if self.inc_entails(&fact_fs, &goal_f)? {
            let core = self.incoherent_core(&[Formula::not(goal_f.clone())], &fact_fs)?;
            let mut trace: Vec<TraceStep> = core
                .formulas
                .iter()
                .map(|i| TraceStep::Fact(facts[*i].clone()))
                .collect();
            trace.extend(core.sources.iter().map(|s| self.source_step(*s)));
            return Ok(Verdict {
                kind: VerdictKind::Entailed,
                trace,
                defeater: None,
            });
        }

        let run = self.run_defaults(&fact_fs)?;
        let known = self.known(&fact_fs, &run.accepted);
        let mut with_goal = fact_fs.clone();
        with_goal.push(goal_f.clone());
        if self.inc_entails(&known, &goal_f)? && !self.incoherent(&with_goal)? {
            let mut fixed = fact_fs.clone();
            fixed.push(Formula::not(goal_f.clone()));
            let removable: Vec<_> = run
                .accepted
                .iter()
                .map(|f| self.consequent(f.rule).clone())
                .collect();
            let core = self.incoherent_core(&fixed, &removable)?;
            let mut trace = Vec::new();
            for i in core.formulas {
                self.derivation(&run.accepted[i], &run, facts, &mut trace);
            }
            for s in core.sources {
                push_unique(&mut trace, self.source_step(s));
            }
            return Ok(Verdict {
                kind: VerdictKind::DefeasiblyEntailed,
                trace,
                defeater: None,
            });
        }

        for (fired, defeat) in &run.defeated {
            if self.would_yield(fired.rule, &goal_f)? {
                let mut trace = Vec::new();
                self.derivation(fired, &run, facts, &mut trace);
                let defeater = self.defeater_text(defeat);
                trace.push(TraceStep::DefeatedBy(defeater.clone()));
                return Ok(Verdict {
                    kind: VerdictKind::Blocked,
                    trace,
                    defeater: Some(defeater),
                });
            }
        }

        let mut notes = Vec::new();
        for &(a, b) in &run.conflicts {
            if self.would_yield(a, &goal_f)? || self.would_yield(b, &goal_f)? {
                notes.push(TraceStep::Conflict(
                    rule_text(&self.kb.rules()[a]),
                    rule_text(&self.kb.rules()[b]),
                ));
            }
        }
        Ok(Verdict::not_entailed(notes))
    }

    /// Whether firing `rule` would on its own settle `goal`: its antecedent
    /// and consequent are jointly coherent and entail the goal.
    fn would_yield(&self, rule: usize, goal: &Formula) -> Result<bool> {
        let hypothetical = [self.antecedent(rule).clone(), self.consequent(rule).clone()];
        Ok(!self.incoherent(&hypothetical)? && self.inc_entails(&hypothetical, goal)?)
    }

    /// Commitments and entitlements of `facts` over every literal.
    pub fn closure(&self, facts: &[Literal]) -> Result<Closure> {
        let fact_fs = self.facts_as_formulas(facts)?;
        let run = self.run_defaults(&fact_fs)?;
        let known = self.known(&fact_fs, &run.accepted);
        let mut committed = Vec::new();
        let mut entitled = Vec::new();
        for atom in &self.atoms {
            for lit in [atom.pos(), atom.neg()] {
                let f = Formula::from(&lit);
                if self.inc_entails(&fact_fs, &f)? {
                    committed.push(lit.clone());
                    entitled.push(lit);
                } else if self.inc_entails(&known, &f)? {
                    entitled.push(lit);
                }
            }
        }
        Ok(Closure {
            committed,
            entitled,
        })
    }
}

fn split(kept: &[usize], n_facts: usize, accepted: &[Fired]) -> (Vec<usize>, Vec<usize>) {
    let facts = kept.iter().copied().filter(|i| *i < n_facts).collect();
    let rules = kept
        .iter()
        .filter(|i| **i >= n_facts)
        .map(|i| accepted[i - n_facts].rule)
        .collect();
    (facts, rules)
}

fn push_unique(out: &mut Vec<TraceStep>, step: TraceStep) {
    if !out.contains(&step) {
        out.push(step);
    }
}
