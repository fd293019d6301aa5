use std::collections::BTreeSet;

use super::{ReasonError, Result};
use crate::model::{Atom, Formula};
use crate::semantics::Model;

/// A labelled instance of a feature table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub name: String,
    pub features: BTreeSet<String>,
    pub label: String,
}

/// Parses `name: feature, feature, ... ; label` lines. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_table(text: &str) -> Result<Vec<Example>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| ReasonError::Table {
            line: i + 1,
            message: message.to_string(),
        };
        let (name, rest) = line
            .split_once(':')
            .ok_or_else(|| err("expected `name:`"))?;
        let (features, label) = rest
            .rsplit_once(';')
            .ok_or_else(|| err("expected `; label`"))?;
        let name = name.trim();
        let label = label.trim();
        if name.is_empty() {
            return Err(err("empty instance name"));
        }
        if label.is_empty() {
            return Err(err("empty label"));
        }
        let features = features
            .split(',')
            .map(str::trim)
            .filter(|f| !f.is_empty())
            .map(String::from)
            .collect();
        out.push(Example {
            name: name.to_string(),
            features,
            label: label.to_string(),
        });
    }
    Ok(out)
}

/// Features shared by every positive training example of a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureModel {
    pub class: String,
    pub necessary: BTreeSet<String>,
    pub training: Vec<String>,
}

pub fn learn_necessary(examples: &[Example], class: &str) -> Result<FeatureModel> {
    let mut positives = examples.iter().filter(|e| e.label == class);
    let first = positives
        .next()
        .ok_or_else(|| ReasonError::NoPositiveExamples(class.to_string()))?;
    let mut necessary = first.features.clone();
    let mut training = vec![first.name.clone()];
    for e in positives {
        necessary.retain(|f| e.features.contains(f));
        training.push(e.name.clone());
    }
    Ok(FeatureModel {
        class: class.to_string(),
        necessary,
        training,
    })
}

/// Positive iff every necessary feature is present.
pub fn predict(model: &FeatureModel, features: &BTreeSet<String>) -> bool {
    model.necessary.is_subset(features)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

pub fn confusion(model: &FeatureModel, dataset: &[Example]) -> Confusion {
    let mut c = Confusion::default();
    for e in dataset {
        match (predict(model, &e.features), e.label == model.class) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    c
}

/// Classification against the knowledge base: the necessary conditions of
/// a class atom are the other atoms it entails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KbClassification {
    pub class: Atom,
    pub necessary: Vec<Atom>,
    pub missing: Vec<Atom>,
    pub predicted: bool,
}

pub fn classify_kb(model: &Model<'_>, class: &Atom, features: &[Atom]) -> Result<KbClassification> {
    let premise = [Formula::from(class.clone())];
    model.compile_plain(&premise)?;
    let mut necessary = Vec::new();
    for atom in model.atoms() {
        if atom != class && model.inc_entails(&premise, &Formula::from(atom.clone()))? {
            necessary.push(atom.clone());
        }
    }
    for f in features {
        model.compile_plain(&[Formula::from(f.clone())])?;
    }
    let missing: Vec<Atom> = necessary
        .iter()
        .filter(|a| !features.contains(a))
        .cloned()
        .collect();
    Ok(KbClassification {
        class: class.clone(),
        predicted: missing.is_empty(),
        necessary,
        missing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::test_support::*;
    use crate::semantics::Config;

    const TABLE: &str = "# animals\n\
        cobra: cold-blooded, scales, lays-eggs, poisonous, no-legs ; reptile\n\
        \n\
        boa: cold-blooded, scales, no-legs ; reptile\n\
        salmon: cold-blooded, scales, lays-eggs ; fish\n\
        rock: ; mineral\n";

    fn set(s: &[&str]) -> BTreeSet<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn table() {
        let t = parse_table(TABLE).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t[1].name, "boa");
        assert_eq!(t[1].features, set(&["cold-blooded", "scales", "no-legs"]));
        assert!(t[3].features.is_empty());
        assert!(matches!(
            parse_table("x: a, b\n"),
            Err(ReasonError::Table { line: 1, .. })
        ));
        assert!(matches!(
            parse_table("\nno colon ; y"),
            Err(ReasonError::Table { line: 2, .. })
        ));
    }

    #[test]
    fn learn_and_predict() {
        let t = parse_table(TABLE).unwrap();
        let m = learn_necessary(&t, "reptile").unwrap();
        assert_eq!(m.necessary, set(&["cold-blooded", "scales", "no-legs"]));
        assert_eq!(m.training, ["cobra", "boa"]);
        assert!(!predict(&m, &t[2].features));
        assert_eq!(
            confusion(&m, &t),
            Confusion {
                tp: 2,
                fp: 0,
                tn: 2,
                fn_: 0
            }
        );
        assert_eq!(confusion(&m, &[]), Confusion::default());
        assert_eq!(
            learn_necessary(&t, "bird"),
            Err(ReasonError::NoPositiveExamples("bird".into()))
        );
    }

    #[test]
    fn kb_necessary_conditions() {
        let k = kb("atom reptile, scales, cold, legs.\nstrict reptile -> scales & cold.");
        let m = Model::new(&k, &Config::default()).unwrap();
        let c = classify_kb(
            &m,
            &Atom::new("reptile"),
            &[Atom::new("scales"), Atom::new("cold")],
        )
        .unwrap();
        assert!(c.predicted);
        assert_eq!(c.necessary, [Atom::new("cold"), Atom::new("scales")]);
        let c = classify_kb(&m, &Atom::new("reptile"), &[Atom::new("scales")]).unwrap();
        assert!(!c.predicted);
        assert_eq!(c.missing, [Atom::new("cold")]);
    }
}
