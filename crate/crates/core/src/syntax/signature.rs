use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionSymbol {
    pub name: String,
    pub arity: usize,
}

/// A symbol of a signature, resolved to its position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Function(usize),
    Constant(usize),
}

/// A finite functional language: operation symbols with positive arities
/// and constant symbols. Declaration order is the iteration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    functions: Vec<FunctionSymbol>,
    constants: Vec<String>,
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new<F, C>(functions: F, constants: C) -> Result<Self>
    where
        F: IntoIterator,
        F::Item: Into<(String, usize)>,
        C: IntoIterator,
        C::Item: Into<String>,
    {
        let functions: Vec<FunctionSymbol> = functions
            .into_iter()
            .map(|item| {
                let (name, arity) = item.into();
                FunctionSymbol { name, arity }
            })
            .collect();
        let constants: Vec<String> = constants.into_iter().map(Into::into).collect();

        let mut seen = BTreeSet::new();
        for f in &functions {
            if f.arity == 0 {
                return Err(Error::Signature(format!(
                    "function `{}` must have positive arity",
                    f.name
                )));
            }
            if !is_identifier(&f.name) {
                return Err(Error::Signature(format!("`{}` is not an identifier", f.name)));
            }
            if !seen.insert(f.name.as_str()) {
                return Err(Error::Signature(format!("duplicate symbol `{}`", f.name)));
            }
        }
        for c in &constants {
            if !is_identifier(c) {
                return Err(Error::Signature(format!("`{c}` is not an identifier")));
            }
            if !seen.insert(c.as_str()) {
                return Err(Error::Signature(format!("duplicate symbol `{c}`")));
            }
        }
        Ok(Signature {
            functions,
            constants,
        })
    }

    /// Shorthand for fixtures and tests: `Signature::build(&[("mul", 2)], &["e"])`.
    pub fn build(functions: &[(&str, usize)], constants: &[&str]) -> Result<Self> {
        Signature::new(
            functions.iter().map(|(n, a)| (n.to_string(), *a)),
            constants.iter().map(|c| c.to_string()),
        )
    }

    pub fn functions(&self) -> &[FunctionSymbol] {
        &self.functions
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn function_count(&self) -> usize {
        self.functions.len()
    }

    pub fn constant_count(&self) -> usize {
        self.constants.len()
    }

    pub fn arity(&self, f: usize) -> usize {
        self.functions[f].arity
    }

    pub fn function_name(&self, f: usize) -> &str {
        &self.functions[f].name
    }

    pub fn constant_name(&self, c: usize) -> &str {
        &self.constants[c]
    }

    pub fn function(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == name)
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.function(name)
            .map(Symbol::Function)
            .or_else(|| self.constant(name).map(Symbol::Constant))
    }

    pub fn max_arity(&self) -> usize {
        self.functions.iter().map(|f| f.arity).max().unwrap_or(0)
    }

    /// The sub-signature keeping only the listed symbols, in declaration order.
    pub fn restrict(&self, functions: &BTreeSet<usize>, constants: &BTreeSet<usize>) -> Signature {
        Signature {
            functions: functions.iter().map(|&f| self.functions[f].clone()).collect(),
            constants: constants.iter().map(|&c| self.constants[c].clone()).collect(),
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .functions
            .iter()
            .map(|s| format!("{}/{}", s.name, s.arity))
            .collect();
        parts.extend(self.constants.iter().cloned());
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_nullary_functions() {
        assert!(Signature::build(&[("f", 1)], &["f"]).is_err());
        assert!(Signature::build(&[("f", 0)], &[]).is_err());
        assert!(Signature::build(&[("1f", 1)], &[]).is_err());
        let sig = Signature::build(&[("mul", 2), ("inv", 1)], &["e"]).unwrap();
        assert_eq!(sig.lookup("inv"), Some(Symbol::Function(1)));
        assert_eq!(sig.lookup("e"), Some(Symbol::Constant(0)));
        assert_eq!(sig.to_string(), "{mul/2, inv/1, e}");
    }
}
