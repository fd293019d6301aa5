//! Inference services built on the world semantics: compatibility weights,
//! abductive ranking, chaining through the implication graph, and the
//! necessary-condition classifier.

mod abduce;
mod chain;
mod classify;
mod weight;

use thiserror::Error;

use crate::semantics::SemanticsError;

pub use abduce::{abduce, AbductionRanking, Hypothesis};
pub use chain::{chain, DerivationPath, Edge, ImplicationGraph, Role};
pub use classify::{
    classify_kb, confusion, learn_necessary, parse_table, predict, Confusion, Example,
    FeatureModel, KbClassification,
};
pub use weight::{weight, WeightResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("the reference set is empty")]
    EmptyReferenceSet,
    #[error("no candidate hypotheses were given")]
    NoCandidates,
    #[error("the observations are incoherent")]
    IncoherentObservations,
    #[error("no node of the implication graph matches `{0}`")]
    UnknownStartPattern(String),
    #[error("no positive examples of class `{0}`")]
    NoPositiveExamples(String),
    #[error("line {line}: {message}")]
    Table { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, ReasonError>;

/// Keeps the first occurrence of each item.
fn dedup<T: Clone + PartialEq>(items: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for item in items {
        if !out.contains(item) {
            out.push(item.clone());
        }
    }
    out
}
