use num_rational::Ratio;

use super::{dedup, ReasonError, Result};
use crate::model::{Formula, Literal};
use crate::semantics::Model;

/// Share of a reference set that is compatible with a sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightResult {
    pub value: Ratio<usize>,
    pub compatible: Vec<Literal>,
    pub incompatible: Vec<Literal>,
}

/// Fraction of the members `t` of `reference` for which `{s, t}` is
/// coherent. The reference set is treated as a set: repeats count once.
pub fn weight(model: &Model<'_>, s: &Literal, reference: &[Literal]) -> Result<WeightResult> {
    let reference = dedup(reference);
    if reference.is_empty() {
        return Err(ReasonError::EmptyReferenceSet);
    }
    let subject = Formula::from(s);
    let mut compatible = Vec::new();
    let mut incompatible = Vec::new();
    for t in reference {
        if model.incoherent(&[subject.clone(), Formula::from(&t)])? {
            incompatible.push(t);
        } else {
            compatible.push(t);
        }
    }
    let total = compatible.len() + incompatible.len();
    Ok(WeightResult {
        value: Ratio::new(compatible.len(), total),
        compatible,
        incompatible,
    })
}
