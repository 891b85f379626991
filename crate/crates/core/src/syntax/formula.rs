use std::collections::BTreeSet;
use std::fmt;

use super::{Signature, Term};

/// An equation `lhs = rhs`, or its negation when `negated` is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomicFormula {
    pub lhs: Term,
    pub rhs: Term,
    pub negated: bool,
}

impl AtomicFormula {
    pub fn eq(lhs: Term, rhs: Term) -> Self {
        AtomicFormula {
            lhs,
            rhs,
            negated: false,
        }
    }

    pub fn neq(lhs: Term, rhs: Term) -> Self {
        AtomicFormula {
            lhs,
            rhs,
            negated: true,
        }
    }

    pub fn negate(&self) -> Self {
        AtomicFormula {
            negated: !self.negated,
            ..self.clone()
        }
    }

    /// The underlying positive equation.
    pub fn positive(&self) -> Self {
        AtomicFormula {
            negated: false,
            ..self.clone()
        }
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.lhs.collect_vars(&mut out);
        self.rhs.collect_vars(&mut out);
        out
    }

    pub fn max_var(&self) -> Option<usize> {
        self.lhs.max_var().max(self.rhs.max_var())
    }

    pub fn depth(&self) -> usize {
        self.lhs.depth().max(self.rhs.depth())
    }

    pub fn has_coefficients(&self) -> bool {
        self.lhs.has_coefficients() || self.rhs.has_coefficients()
    }

    /// Canonical orientation: applications to the left of anything else,
    /// variables to the left of constants, two variables in index order.
    /// Equality is symmetric, so orientation never changes meaning.
    pub fn oriented(self) -> Self {
        use Term::*;
        let swap = match (&self.lhs, &self.rhs) {
            (App(..), App(..)) => self.lhs > self.rhs,
            (App(..), _) => false,
            (_, App(..)) => true,
            (Var(_), Var(_)) => self.lhs > self.rhs,
            (Var(_), _) => false,
            (_, Var(_)) => true,
            _ => self.lhs > self.rhs,
        };
        if swap {
            AtomicFormula {
                lhs: self.rhs,
                rhs: self.lhs,
                negated: self.negated,
            }
        } else {
            self
        }
    }

    pub fn rename(&self, map: &impl Fn(usize) -> usize) -> Self {
        AtomicFormula {
            lhs: self.lhs.rename(map),
            rhs: self.rhs.rename(map),
            negated: self.negated,
        }
    }

    pub fn fits(&self, sig: &Signature, var_count: usize, coefficient_count: usize) -> bool {
        self.lhs.fits(sig, var_count, coefficient_count)
            && self.rhs.fits(sig, var_count, coefficient_count)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature, vars: &'a [String]) -> AtomicDisplay<'a> {
        AtomicDisplay {
            atom: self,
            sig,
            vars,
        }
    }
}

pub struct AtomicDisplay<'a> {
    atom: &'a AtomicFormula,
    sig: &'a Signature,
    vars: &'a [String],
}

impl fmt::Display for AtomicDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.atom.negated { "!=" } else { "=" };
        write!(
            f,
            "{} {op} {}",
            self.atom.lhs.display(self.sig, self.vars),
            self.atom.rhs.display(self.sig, self.vars)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// Quantifier-free matrix of a prenex sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Matrix {
    Literal(AtomicFormula),
    And(Vec<Matrix>),
    Or(Vec<Matrix>),
    Implies(Box<Matrix>, Box<Matrix>),
}

impl Matrix {
    /// Negation pushed down to the literals.
    pub fn negate(&self) -> Matrix {
        match self {
            Matrix::Literal(a) => Matrix::Literal(a.negate()),
            Matrix::And(parts) => Matrix::Or(parts.iter().map(Matrix::negate).collect()),
            Matrix::Or(parts) => Matrix::And(parts.iter().map(Matrix::negate).collect()),
            Matrix::Implies(p, c) => Matrix::And(vec![(**p).clone(), c.negate()]),
        }
    }

    pub fn literals(&self) -> Vec<&AtomicFormula> {
        let mut out = Vec::new();
        self.push_literals(&mut out);
        out
    }

    fn push_literals<'a>(&'a self, out: &mut Vec<&'a AtomicFormula>) {
        match self {
            Matrix::Literal(a) => out.push(a),
            Matrix::And(parts) | Matrix::Or(parts) => {
                parts.iter().for_each(|p| p.push_literals(out))
            }
            Matrix::Implies(p, c) => {
                p.push_literals(out);
                c.push_literals(out);
            }
        }
    }

    /// Evaluate given a literal oracle.
    pub fn eval_with<E>(&self, lit: &mut impl FnMut(&AtomicFormula) -> Result<bool, E>) -> Result<bool, E> {
        Ok(match self {
            Matrix::Literal(a) => lit(a)?,
            Matrix::And(parts) => {
                for p in parts {
                    if !p.eval_with(lit)? {
                        return Ok(false);
                    }
                }
                true
            }
            Matrix::Or(parts) => {
                for p in parts {
                    if p.eval_with(lit)? {
                        return Ok(true);
                    }
                }
                false
            }
            Matrix::Implies(p, c) => !p.eval_with(lit)? || c.eval_with(lit)?,
        })
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, sig: &Signature, vars: &[String], top: bool) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, parts: &[Matrix], sep: &str| -> fmt::Result {
            if !top {
                f.write_str("(")?;
            }
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                p.fmt_with(f, sig, vars, false)?;
            }
            if !top {
                f.write_str(")")?;
            }
            Ok(())
        };
        match self {
            Matrix::Literal(a) => write!(f, "{}", a.display(sig, vars)),
            Matrix::And(parts) if parts.is_empty() => f.write_str("true"),
            Matrix::Or(parts) if parts.is_empty() => f.write_str("false"),
            Matrix::And(parts) => join(f, parts, " & "),
            Matrix::Or(parts) => join(f, parts, " | "),
            Matrix::Implies(p, c) => {
                if !top {
                    f.write_str("(")?;
                }
                p.fmt_with(f, sig, vars, false)?;
                f.write_str(" -> ")?;
                c.fmt_with(f, sig, vars, false)?;
                if !top {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// A prenex sentence `Q1 x1 ... Qm xm . matrix`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantifiedFormula {
    /// Names of the bound variables; the matrix refers to them by position.
    pub vars: Vec<String>,
    pub prefix: Vec<(Quantifier, usize)>,
    pub matrix: Matrix,
}

impl QuantifiedFormula {
    pub fn universal(vars: Vec<String>, matrix: Matrix) -> Self {
        let prefix = (0..vars.len()).map(|v| (Quantifier::Forall, v)).collect();
        QuantifiedFormula {
            vars,
            prefix,
            matrix,
        }
    }

    pub fn existential(vars: Vec<String>, matrix: Matrix) -> Self {
        let prefix = (0..vars.len()).map(|v| (Quantifier::Exists, v)).collect();
        QuantifiedFormula {
            vars,
            prefix,
            matrix,
        }
    }

    /// `forall x̄ ((p1 & ... & pk) -> c)`.
    pub fn quasi_identity(vars: Vec<String>, premises: Vec<AtomicFormula>, conclusion: AtomicFormula) -> Self {
        let premise = match premises.len() {
            1 => Matrix::Literal(premises.into_iter().next().unwrap()),
            _ => Matrix::And(premises.into_iter().map(Matrix::Literal).collect()),
        };
        QuantifiedFormula::universal(
            vars,
            Matrix::Implies(Box::new(premise), Box::new(Matrix::Literal(conclusion))),
        )
    }

    pub fn is_universal(&self) -> bool {
        self.prefix.iter().all(|(q, _)| *q == Quantifier::Forall)
    }

    pub fn is_existential(&self) -> bool {
        self.prefix.iter().all(|(q, _)| *q == Quantifier::Exists)
    }

    /// Premises and conclusion when the sentence is a quasi-identity or an
    /// identity (empty premises).
    pub fn as_horn(&self) -> Option<(Vec<AtomicFormula>, AtomicFormula)> {
        if !self.is_universal() {
            return None;
        }
        let positive = |m: &Matrix| match m {
            Matrix::Literal(a) if !a.negated => Some(a.clone()),
            _ => None,
        };
        match &self.matrix {
            Matrix::Literal(a) if !a.negated => Some((Vec::new(), a.clone())),
            Matrix::Implies(p, c) => {
                let conclusion = positive(c)?;
                let premises = match &**p {
                    Matrix::And(parts) => parts.iter().map(positive).collect::<Option<Vec<_>>>()?,
                    other => vec![positive(other)?],
                };
                Some((premises, conclusion))
            }
            _ => None,
        }
    }

    /// The dual sentence, equivalent to the negation.
    pub fn negate(&self) -> Self {
        QuantifiedFormula {
            vars: self.vars.clone(),
            prefix: self
                .prefix
                .iter()
                .map(|(q, v)| {
                    let dual = match q {
                        Quantifier::Forall => Quantifier::Exists,
                        Quantifier::Exists => Quantifier::Forall,
                    };
                    (dual, *v)
                })
                .collect(),
            matrix: self.matrix.negate(),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> SentenceDisplay<'a> {
        SentenceDisplay { sentence: self, sig }
    }
}

pub struct SentenceDisplay<'a> {
    sentence: &'a QuantifiedFormula,
    sig: &'a Signature,
}

impl fmt::Display for SentenceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.sentence;
        let mut current: Option<Quantifier> = None;
        for (q, v) in &s.prefix {
            if current != Some(*q) {
                if current.is_some() {
                    f.write_str(" ")?;
                }
                f.write_str(match q {
                    Quantifier::Forall => "forall",
                    Quantifier::Exists => "exists",
                })?;
                current = Some(*q);
            }
            write!(f, " {}", s.vars[*v])?;
        }
        if !s.prefix.is_empty() {
            f.write_str(" . ")?;
        }
        s.matrix.fmt_with(f, self.sig, &s.vars, s.prefix.is_empty())?;
        Ok(())
    }
}
