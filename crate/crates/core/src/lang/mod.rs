//! The `.mik` knowledge-base language: lexer, recursive-descent parser for
//! statements and queries, and the canonical printer.
//!
//! ```text
//! (* Tweety *)
//! atom penguin, bird, flies.
//! strict penguin -> bird.
//! incompatible {penguin, flies}.
//! defeasible bird ~> flies.
//! rule blackberry => poss(red & !ripe).
//! ```
//!
//! Operators bind, tightest first: `!`, `&`, `|`, `->` (right associative).
//! `poss(..)` and `nec(..)` are the modalities.

mod lexer;
mod parser;
mod printer;
mod source;

pub use parser::{parse_formula, parse_kb, parse_literals, parse_query};
pub use printer::{print_kb, rule_text, write_formula_no_top_or};
pub use source::{ParseDiagnostic, Severity, SourceText, Span};
