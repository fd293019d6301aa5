use std::collections::BTreeSet;

use super::{dedup, ReasonError, Result};
use crate::model::{Atom, Formula, Literal, RuleKind};
use crate::semantics::Model;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub hypothesis: Literal,
    /// The hypothesis is coherent with all observations together.
    pub coherent: bool,
    /// Observations the hypothesis entails or makes possible, counted
    /// one by one.
    pub explained: Vec<Literal>,
    pub consilience: usize,
    /// Atoms the hypothesis commits to beyond the observations.
    pub auxiliary: Vec<Atom>,
    pub simplicity: usize,
    /// 1-based position in the ranking.
    pub rank: usize,
}

/// Candidates ordered by coherence, then consilience (more is better), then
/// simplicity (fewer auxiliary atoms is better), then label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbductionRanking {
    pub hypotheses: Vec<Hypothesis>,
}

impl AbductionRanking {
    pub fn best(&self) -> Option<&Hypothesis> {
        self.hypotheses.first()
    }

    pub fn labels(&self) -> Vec<String> {
        self.hypotheses
            .iter()
            .map(|h| h.hypothesis.to_string())
            .collect()
    }
}

/// Ranks caller-supplied candidate hypotheses against the observations.
///
/// A candidate `a` explains an observation `o` when `{a}` entails `o`, or
/// when a satisfied modal rule `p => poss(psi)` has `{a}` entailing `p` and
/// `psi` entailing `o`.
pub fn abduce(
    model: &Model<'_>,
    observations: &[Literal],
    candidates: &[Literal],
) -> Result<AbductionRanking> {
    let observations = dedup(observations);
    let candidates = dedup(candidates);
    if candidates.is_empty() {
        return Err(ReasonError::NoCandidates);
    }
    let obs_formulas: Vec<Formula> = observations.iter().map(Formula::from).collect();
    if model.incoherent(&obs_formulas)? {
        return Err(ReasonError::IncoherentObservations);
    }

    let report = model.check_modal_rules()?;
    let modal: Vec<(&Formula, &Formula)> = model
        .kb()
        .rules_of(RuleKind::Modal)
        .filter(|r| {
            report
                .entry(&r.label)
                .is_some_and(|e| e.satisfied && !e.vacuous)
        })
        .map(|r| (&r.antecedent, r.modal_body().expect("validated modal rule")))
        .collect();
    let obs_atoms: BTreeSet<&Atom> = observations.iter().map(|o| &o.atom).collect();

    let mut hypotheses = Vec::with_capacity(candidates.len());
    for a in candidates {
        let premise = [Formula::from(&a)];
        let mut with_obs = obs_formulas.clone();
        with_obs.push(premise[0].clone());
        let coherent = !model.incoherent(&with_obs)?;

        let mut bodies = Vec::new();
        for (antecedent, body) in &modal {
            if model.inc_entails(&premise, antecedent)? {
                bodies.push(*body);
            }
        }
        let mut explained = Vec::new();
        for (o, of) in observations.iter().zip(&obs_formulas) {
            let mut hit = model.inc_entails(&premise, of)?;
            for body in &bodies {
                if hit {
                    break;
                }
                hit = model.inc_entails(std::slice::from_ref(*body), of)?;
            }
            if hit {
                explained.push(o.clone());
            }
        }

        let mut auxiliary = Vec::new();
        for atom in model.atoms() {
            if obs_atoms.contains(atom) {
                continue;
            }
            if model.inc_entails(&premise, &Formula::from(atom.pos()))?
                || model.inc_entails(&premise, &Formula::from(atom.neg()))?
            {
                auxiliary.push(atom.clone());
            }
        }

        hypotheses.push(Hypothesis {
            hypothesis: a,
            coherent,
            consilience: explained.len(),
            explained,
            simplicity: auxiliary.len(),
            auxiliary,
            rank: 0,
        });
    }

    hypotheses.sort_by(|x, y| {
        y.coherent
            .cmp(&x.coherent)
            .then(y.consilience.cmp(&x.consilience))
            .then(x.simplicity.cmp(&y.simplicity))
            .then_with(|| x.hypothesis.to_string().cmp(&y.hypothesis.to_string()))
    });
    for (i, h) in hypotheses.iter_mut().enumerate() {
        h.rank = i + 1;
    }
    Ok(AbductionRanking { hypotheses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::test_support::*;
    use crate::semantics::Config;

    const WET: &str = "atom rain, sprinkler, wet_lawn, wet_street.\n\
        rule rain => poss(wet_lawn & wet_street).\n\
        rule sprinkler => poss(wet_lawn).";

    fn lits(s: &[&str]) -> Vec<Literal> {
        s.iter().map(|x| Literal::from_text(x)).collect()
    }

    #[test]
    fn rain_explains_more() {
        let k = kb(WET);
        let m = Model::new(&k, &Config::default()).unwrap();
        let r = abduce(
            &m,
            &lits(&["wet_lawn", "wet_street"]),
            &lits(&["sprinkler", "rain"]),
        )
        .unwrap();
        assert_eq!(r.labels(), ["rain", "sprinkler"]);
        assert_eq!(r.hypotheses[0].consilience, 2);
        assert_eq!(r.hypotheses[1].consilience, 1);
        assert_eq!(r.hypotheses[0].simplicity, 1);
    }

    #[test]
    fn ties_fall_back_to_label() {
        let k = kb(WET);
        let m = Model::new(&k, &Config::default()).unwrap();
        let r = abduce(&m, &lits(&["wet_lawn"]), &lits(&["sprinkler", "rain"])).unwrap();
        assert_eq!(r.hypotheses[0].consilience, r.hypotheses[1].consilience);
        assert_eq!(r.hypotheses[0].simplicity, r.hypotheses[1].simplicity);
        assert_eq!(r.labels(), ["rain", "sprinkler"]);
    }

    #[test]
    fn incoherent_candidate_last() {
        let k = kb(&format!("{WET}\natom drought.\nincompatible {{drought, wet_lawn}}.\nstrict drought -> wet_street."));
        let m = Model::new(&k, &Config::default()).unwrap();
        let r = abduce(
            &m,
            &lits(&["wet_lawn", "wet_street"]),
            &lits(&["drought", "sprinkler"]),
        )
        .unwrap();
        assert_eq!(r.labels(), ["sprinkler", "drought"]);
        assert!(!r.hypotheses[1].coherent);
        assert_eq!(r.hypotheses[1].consilience, 1);
    }

    #[test]
    fn errors() {
        let k = kb("atom p, q. incompatible {p, q}.");
        let m = Model::new(&k, &Config::default()).unwrap();
        assert_eq!(
            abduce(&m, &lits(&["p"]), &[]),
            Err(ReasonError::NoCandidates)
        );
        assert_eq!(
            abduce(&m, &lits(&["p", "q"]), &lits(&["p"])),
            Err(ReasonError::IncoherentObservations)
        );
    }
}
