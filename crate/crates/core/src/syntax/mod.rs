//! Signatures, terms, formulas and diagram formulas.

mod diagram;
mod formula;
mod parse;
mod signature;
mod term;

pub use diagram::{
    substitute, DiagramDisplay, DiagramFormula, DiagramReport, DiagramViolation, Reduct, VariableMap,
};
pub(crate) use diagram::tuples;
pub use formula::{AtomicDisplay, AtomicFormula, Matrix, QuantifiedFormula, Quantifier, SentenceDisplay};
pub use parse::{parse_atomic, parse_sentence, parse_term, parse_term_with_coefficients};
pub use signature::{FunctionSymbol, Signature, Symbol};
pub use term::{Term, TermDisplay};
