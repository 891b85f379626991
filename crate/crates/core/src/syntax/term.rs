use std::collections::BTreeSet;
use std::fmt;

use super::Signature;

/// A term over a signature. Variables are positions in an ordered variable
/// list owned by the surrounding object; `Coef(a)` is the constant `c_a`
/// naming element `a` of a coefficient algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    Const(usize),
    Coef(usize),
    App(usize, Vec<Term>),
}

impl Term {
    pub fn app(f: usize, args: Vec<Term>) -> Term {
        Term::App(f, args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }

    /// The variable set V(t).
    pub fn vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(_, args) => args.iter().filter_map(Term::max_var).max(),
            _ => None,
        }
    }

    pub fn max_coefficient(&self) -> Option<usize> {
        match self {
            Term::Coef(a) => Some(*a),
            Term::App(_, args) => args.iter().filter_map(Term::max_coefficient).max(),
            _ => None,
        }
    }

    pub fn has_coefficients(&self) -> bool {
        self.max_coefficient().is_some()
    }

    /// Replace every variable `x` by `map(x)`.
    pub fn rename(&self, map: &impl Fn(usize) -> usize) -> Term {
        match self {
            Term::Var(v) => Term::Var(map(*v)),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.rename(map)).collect()),
            other => other.clone(),
        }
    }

    /// Replace every variable `x` by the term `subst[x]`.
    pub fn substitute(&self, subst: &[Term]) -> Term {
        match self {
            Term::Var(v) => subst[*v].clone(),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.substitute(subst)).collect()),
            other => other.clone(),
        }
    }

    /// All subterms, children before parents, each listed once.
    pub fn subterms(&self) -> Vec<Term> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.push_subterms(&mut seen, &mut out);
        out
    }

    fn push_subterms(&self, seen: &mut BTreeSet<Term>, out: &mut Vec<Term>) {
        if let Term::App(_, args) = self {
            for a in args {
                a.push_subterms(seen, out);
            }
        }
        if seen.insert(self.clone()) {
            out.push(self.clone());
        }
    }

    /// Checks that every symbol is declared with the right arity.
    pub fn fits(&self, sig: &Signature, var_count: usize, coefficient_count: usize) -> bool {
        match self {
            Term::Var(v) => *v < var_count,
            Term::Const(c) => *c < sig.constant_count(),
            Term::Coef(a) => *a < coefficient_count,
            Term::App(f, args) => {
                *f < sig.function_count()
                    && sig.arity(*f) == args.len()
                    && args.iter().all(|a| a.fits(sig, var_count, coefficient_count))
            }
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature, vars: &'a [String]) -> TermDisplay<'a> {
        TermDisplay {
            term: self,
            sig,
            vars,
        }
    }
}

/// Renders a term in the prefix text grammar.
pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
    vars: &'a [String],
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => match self.vars.get(*v) {
                Some(name) => f.write_str(name),
                None => write!(f, "?{v}"),
            },
            Term::Const(c) => f.write_str(self.sig.constant_name(*c)),
            Term::Coef(a) => write!(f, "@{a}"),
            Term::App(sym, args) => {
                write!(f, "{}(", self.sig.function_name(*sym))?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", a.display(self.sig, self.vars))?;
                }
                f.write_str(")")
            }
        }
    }
}
