use super::{Model, Result, Source};
use crate::model::Formula;

/// Outcome of a counterfactual check, with the sentence it supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterfactual {
    pub supported: bool,
    pub sentence: String,
}

/// The part of an incoherent set that is actually needed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Core {
    /// Indices into the removable formulas that were kept.
    pub formulas: Vec<usize>,
    /// Sources of the restrictions that were kept, deduplicated, in order.
    pub sources: Vec<Source>,
}

impl Model<'_> {
    /// True iff no admissible world satisfies every formula in `set`.
    pub fn incoherent(&self, set: &[Formula]) -> Result<bool> {
        let e = self.compile_plain(set)?;
        Ok(!self.exists(|w| e.holds(w)))
    }

    /// Incompatibility-entailment: every admissible world satisfying all of
    /// `premises` satisfies `conclusion`. Equivalently, everything
    /// incompatible with the conclusion is incompatible with the premises.
    pub fn inc_entails(&self, premises: &[Formula], conclusion: &Formula) -> Result<bool> {
        let mut set = premises.to_vec();
        set.push(Formula::not(conclusion.clone()));
        self.incoherent(&set)
    }

    /// Same truth condition as [`Model::inc_entails`], rendered as a
    /// subjunctive conditional.
    pub fn supports_counterfactual(
        &self,
        premises: &[Formula],
        conclusion: &Formula,
    ) -> Result<Counterfactual> {
        let supported = self.inc_entails(premises, conclusion)?;
        let antecedent = if premises.is_empty() {
            "anything".to_string()
        } else {
            premises
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" and ")
        };
        let sentence = if supported {
            format!("If it had been {antecedent}, it would have been {conclusion}")
        } else {
            format!("If it had been {antecedent}, it would not necessarily have been {conclusion}")
        };
        Ok(Counterfactual {
            supported,
            sentence,
        })
    }

    /// A minimal incoherent part of `set` followed by the constraints and
    /// strict rules it relies on. Empty when `set` is coherent.
    pub fn explain_incoherence(&self, set: &[Formula]) -> Result<Vec<String>> {
        if !self.incoherent(set)? {
            return Ok(Vec::new());
        }
        let core = self.incoherent_core(&[], set)?;
        Ok(self.render_core(&core, set, "member"))
    }

    /// The premises and the constraints and strict rules an entailment
    /// relies on. Empty when the entailment fails.
    pub fn explain_entailment(
        &self,
        premises: &[Formula],
        conclusion: &Formula,
    ) -> Result<Vec<String>> {
        if !self.inc_entails(premises, conclusion)? {
            return Ok(Vec::new());
        }
        let core = self.incoherent_core(&[Formula::not(conclusion.clone())], premises)?;
        Ok(self.render_core(&core, premises, "premise"))
    }

    fn render_core(&self, core: &Core, formulas: &[Formula], role: &str) -> Vec<String> {
        let mut out: Vec<String> = core
            .formulas
            .iter()
            .map(|&i| format!("{role} {}", formulas[i]))
            .collect();
        out.extend(core.sources.iter().map(|&s| self.describe(s)));
        out
    }

    /// Shrinks an incoherent set `fixed ∪ removable` to a minimal core by
    /// deletion: first the removable formulas, then the restrictions.
    /// Callers guarantee the full set is incoherent.
    pub(crate) fn incoherent_core(&self, fixed: &[Formula], removable: &[Formula]) -> Result<Core> {
        let mut keep_f = vec![true; removable.len()];
        let with = |model: &Model, keep_f: &[bool]| -> Result<bool> {
            let mut set = fixed.to_vec();
            set.extend(
                removable
                    .iter()
                    .zip(keep_f)
                    .filter(|(_, k)| **k)
                    .map(|(f, _)| f.clone()),
            );
            model.incoherent(&set)
        };
        debug_assert!(with(self, &keep_f)?);
        for i in 0..removable.len() {
            keep_f[i] = false;
            if !with(self, &keep_f)? {
                keep_f[i] = true;
            }
        }
        // Restrictions sharing a source are dropped together.
        let mut keep_r = vec![true; self.restrictions().len()];
        let mut sources: Vec<Source> = self.restrictions().iter().map(|r| r.source).collect();
        sources.dedup();
        let mut kept_sources = Vec::new();
        for s in sources {
            let trial: Vec<bool> = self
                .restrictions()
                .iter()
                .zip(&keep_r)
                .map(|(r, k)| *k && r.source != s)
                .collect();
            if with(&self.restricted(&trial), &keep_f)? {
                keep_r = trial;
            } else {
                kept_sources.push(s);
            }
        }
        Ok(Core {
            formulas: keep_f
                .iter()
                .enumerate()
                .filter(|(_, k)| **k)
                .map(|(i, _)| i)
                .collect(),
            sources: kept_sources,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::super::Config;
    use super::*;
    use crate::lang::{parse_formula, SourceText};

    fn f(s: &str) -> Formula {
        parse_formula(&SourceText::stdin(s)).unwrap()
    }

    fn fs(items: &[&str]) -> Vec<Formula> {
        items.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn literal_contradiction() {
        let k = kb("atom p.");
        let m = Model::new(&k, &Config::default()).unwrap();
        assert!(m.incoherent(&fs(&["p", "!p"])).unwrap());
        assert!(!m.incoherent(&[]).unwrap());
    }

    #[test]
    fn blackberry_set_not_either_individually() {
        let k = kb(BLACKBERRY);
        let m = Model::new(&k, &Config::default()).unwrap();
        assert!(m.incoherent(&fs(&["blackberry", "red", "ripe"])).unwrap());
        assert!(!m.incoherent(&fs(&["blackberry", "red"])).unwrap());
        assert!(!m.incoherent(&fs(&["blackberry", "ripe"])).unwrap());
    }

    #[test]
    fn formal_set_and_its_subsets() {
        let k = kb("atom p, q.");
        let m = Model::new(&k, &Config::default()).unwrap();
        let full = fs(&["p", "p -> q", "!q"]);
        assert!(m.incoherent(&full).unwrap());
        for skip in 0..3 {
            let sub: Vec<_> = full
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, x)| x.clone())
                .collect();
            assert!(!m.incoherent(&sub).unwrap(), "subset without {skip}");
        }
    }

    #[test]
    fn entailment_examples() {
        let pedro = kb(PEDRO);
        let m = Model::new(&pedro, &Config::default()).unwrap();
        assert!(m.inc_entails(&fs(&["donkey"]), &f("mammal")).unwrap());
        assert!(!m.inc_entails(&fs(&["mammal"]), &f("donkey")).unwrap());
        assert!(m.inc_entails(&fs(&["donkey"]), &f("donkey")).unwrap());

        let tweety = kb(TWEETY);
        let m = Model::new(&tweety, &Config::default()).unwrap();
        assert!(m.inc_entails(&fs(&["penguin"]), &f("bird")).unwrap());
    }

    #[test]
    fn counterfactuals() {
        let pedro = kb(PEDRO);
        let m = Model::new(&pedro, &Config::default()).unwrap();
        let c = m
            .supports_counterfactual(&fs(&["donkey"]), &f("mammal"))
            .unwrap();
        assert!(c.supported);
        assert_eq!(
            c.sentence,
            "If it had been donkey, it would have been mammal"
        );

        let tweety = kb(TWEETY);
        let m = Model::new(&tweety, &Config::default()).unwrap();
        assert!(
            m.supports_counterfactual(&fs(&["penguin"]), &f("!flies"))
                .unwrap()
                .supported
        );
        assert!(
            m.supports_counterfactual(&fs(&["bird"]), &f("bird"))
                .unwrap()
                .supported
        );
    }

    #[test]
    fn modal_formulas_rejected() {
        let k = kb("atom p.");
        let m = Model::new(&k, &Config::default()).unwrap();
        assert!(m.incoherent(&fs(&["poss(p)"])).is_err());
    }

    #[test]
    fn core_names_the_constraint() {
        let k = kb(TWEETY);
        let m = Model::new(&k, &Config::default()).unwrap();
        let core = m
            .incoherent_core(&fs(&["flies"]), &fs(&["penguin"]))
            .unwrap();
        assert_eq!(core.formulas, vec![0]);
        assert_eq!(core.sources, vec![Source::Constraint(0)]);
        assert_eq!(m.describe(core.sources[0]), "incompatible {penguin, flies}");
    }

    #[test]
    fn explanations() {
        let k = kb(PEDRO);
        let m = Model::new(&k, &Config::default()).unwrap();
        assert_eq!(
            m.explain_entailment(&fs(&["donkey", "!mammal | mammal"]), &f("mammal"))
                .unwrap(),
            ["premise donkey", "strict s1: donkey -> mammal"]
        );
        assert!(m
            .explain_entailment(&fs(&["mammal"]), &f("donkey"))
            .unwrap()
            .is_empty());
        let k = kb(BLACKBERRY);
        let m = Model::new(&k, &Config::default()).unwrap();
        assert_eq!(
            m.explain_incoherence(&fs(&["blackberry", "red", "ripe"]))
                .unwrap(),
            [
                "member blackberry",
                "member red",
                "member ripe",
                "incompatible {blackberry, red, ripe}"
            ]
        );
        assert!(m
            .explain_incoherence(&fs(&["red", "ripe"]))
            .unwrap()
            .is_empty());
    }
}
