use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{AtomicFormula, Signature, Term};
use crate::error::{Error, Result};

/// A finite reduct of a signature, by symbol position. `coefficients`
/// lists the coefficient constants `c_a` kept when working over `L_A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Reduct {
    pub functions: BTreeSet<usize>,
    pub constants: BTreeSet<usize>,
    pub coefficients: BTreeSet<usize>,
}

impl Reduct {
    pub fn empty() -> Self {
        Reduct::default()
    }

    /// Every symbol of `sig`, plus coefficients `0..coefficient_count`.
    pub fn full(sig: &Signature, coefficient_count: usize) -> Self {
        Reduct {
            functions: (0..sig.function_count()).collect(),
            constants: (0..sig.constant_count()).collect(),
            coefficients: (0..coefficient_count).collect(),
        }
    }

    /// Number of symbols: functions, then constants, then coefficients.
    pub fn symbol_count(sig: &Signature, coefficient_count: usize) -> usize {
        sig.function_count() + sig.constant_count() + coefficient_count
    }

    /// The reduct selected by bit `k` of `mask`, symbols numbered as in
    /// [`Reduct::symbol_count`].
    pub fn from_mask(sig: &Signature, coefficient_count: usize, mask: u64) -> Self {
        let nf = sig.function_count();
        let nc = sig.constant_count();
        let mut r = Reduct::empty();
        for k in 0..Reduct::symbol_count(sig, coefficient_count) {
            if mask >> k & 1 == 1 {
                if k < nf {
                    r.functions.insert(k);
                } else if k < nf + nc {
                    r.constants.insert(k - nf);
                } else {
                    r.coefficients.insert(k - nf - nc);
                }
            }
        }
        r
    }

    pub fn to_mask(&self, sig: &Signature) -> u64 {
        let nf = sig.function_count();
        let nc = sig.constant_count();
        let mut m = 0u64;
        self.functions.iter().for_each(|&f| m |= 1 << f);
        self.constants.iter().for_each(|&c| m |= 1 << (nf + c));
        self.coefficients.iter().for_each(|&a| m |= 1 << (nf + nc + a));
        m
    }

    pub fn is_subset(&self, other: &Reduct) -> bool {
        self.functions.is_subset(&other.functions)
            && self.constants.is_subset(&other.constants)
            && self.coefficients.is_subset(&other.coefficients)
    }

    pub fn union(&self, other: &Reduct) -> Reduct {
        Reduct {
            functions: self.functions.union(&other.functions).copied().collect(),
            constants: self.constants.union(&other.constants).copied().collect(),
            coefficients: self.coefficients.union(&other.coefficients).copied().collect(),
        }
    }

    pub fn fits(&self, sig: &Signature, coefficient_count: usize) -> bool {
        self.functions.iter().all(|&f| f < sig.function_count())
            && self.constants.iter().all(|&c| c < sig.constant_count())
            && self.coefficients.iter().all(|&a| a < coefficient_count)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> ReductDisplay<'a> {
        ReductDisplay { reduct: self, sig }
    }
}

pub struct ReductDisplay<'a> {
    reduct: &'a Reduct,
    sig: &'a Signature,
}

impl fmt::Display for ReductDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        parts.extend(self.reduct.functions.iter().map(|&s| self.sig.function_name(s).to_string()));
        parts.extend(self.reduct.constants.iter().map(|&c| self.sig.constant_name(c).to_string()));
        parts.extend(self.reduct.coefficients.iter().map(|a| format!("@{a}")));
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A conjunction of literals meant to describe a finite relational
/// submodel over a reduct. Conjuncts are kept in canonical orientation, so
/// `x != y` and `y != x` are the same conjunct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagramFormula {
    pub reduct: Reduct,
    pub vars: Vec<String>,
    pub conjuncts: BTreeSet<AtomicFormula>,
}

/// One way a candidate fails to be a consistent diagram formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiagramViolation {
    MissingInequation { x: usize, y: usize },
    MissingFunctionEntry { function: usize, args: Vec<usize>, value: usize },
    MissingConstantEntry { constant: Term, var: usize },
    BothPolarities(AtomicFormula),
    FunctionalClash { function: usize, args: Vec<usize>, values: (usize, usize) },
    ConstantClash { constant: Term, vars: (usize, usize) },
    PositiveVariableEquality(AtomicFormula),
    ForeignSymbol(AtomicFormula),
    ForeignShape(AtomicFormula),
}

impl DiagramViolation {
    pub fn describe(&self, sig: &Signature, vars: &[String]) -> String {
        let v = |x: &usize| vars.get(*x).cloned().unwrap_or_else(|| format!("?{x}"));
        let app = |f: &usize, args: &[usize]| {
            let args: Vec<String> = args.iter().map(v).collect();
            format!("{}({})", sig.function_name(*f), args.join(", "))
        };
        match self {
            DiagramViolation::MissingInequation { x, y } => {
                format!("missing inequation {} != {}", v(x), v(y))
            }
            DiagramViolation::MissingFunctionEntry { function, args, value } => {
                format!("missing F-entry {} = {} (in either polarity)", app(function, args), v(value))
            }
            DiagramViolation::MissingConstantEntry { constant, var } => format!(
                "missing constant entry {} = {} (in either polarity)",
                v(var),
                constant.display(sig, vars)
            ),
            DiagramViolation::BothPolarities(a) => {
                format!("both polarities of {}", a.positive().display(sig, vars))
            }
            DiagramViolation::FunctionalClash { function, args, values } => format!(
                "functional clash: {} = {} and {} = {}",
                app(function, args),
                v(&values.0),
                app(function, args),
                v(&values.1)
            ),
            DiagramViolation::ConstantClash { constant, vars: (x, y) } => format!(
                "constant clash: {} and {} both equal {}",
                v(x),
                v(y),
                constant.display(sig, &[])
            ),
            DiagramViolation::PositiveVariableEquality(a) => {
                format!("equality between variables: {}", a.display(sig, vars))
            }
            DiagramViolation::ForeignSymbol(a) => {
                format!("symbol or variable outside the reduct: {}", a.display(sig, vars))
            }
            DiagramViolation::ForeignShape(a) => {
                format!("conjunct of a shape no diagram formula contains: {}", a.display(sig, vars))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiagramReport {
    pub violations: Vec<DiagramViolation>,
}

impl DiagramReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Shapes a diagram conjunct may take, after orientation.
enum Shape {
    Vars(usize, usize),
    Entry(usize, Vec<usize>, usize),
    Named(Term, usize),
}

fn shape(a: &AtomicFormula) -> Option<Shape> {
    match (&a.lhs, &a.rhs) {
        (Term::Var(x), Term::Var(y)) => Some(Shape::Vars(*x, *y)),
        (Term::App(f, args), Term::Var(x0)) => {
            let args: Option<Vec<usize>> = args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => Some(*v),
                    _ => None,
                })
                .collect();
            Some(Shape::Entry(*f, args?, *x0))
        }
        (Term::Var(x), c @ (Term::Const(_) | Term::Coef(_))) => Some(Shape::Named(c.clone(), *x)),
        _ => None,
    }
}

fn in_reduct(term: &Term, reduct: &Reduct) -> bool {
    match term {
        Term::Const(c) => reduct.constants.contains(c),
        Term::Coef(a) => reduct.coefficients.contains(a),
        _ => true,
    }
}

/// Every tuple in `0..n` of length `k`, lexicographically.
pub(crate) fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if n == 0 && k > 0 { 0 } else { n.pow(k as u32) };
    (0..total).map(move |mut code| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        t
    })
}

impl DiagramFormula {
    pub fn new(reduct: Reduct, vars: Vec<String>, conjuncts: impl IntoIterator<Item = AtomicFormula>) -> Self {
        DiagramFormula {
            reduct,
            vars,
            conjuncts: conjuncts.into_iter().map(AtomicFormula::oriented).collect(),
        }
    }

    pub fn contains(&self, atom: &AtomicFormula) -> bool {
        self.conjuncts.contains(&atom.clone().oriented())
    }

    pub fn positive_conjuncts(&self) -> impl Iterator<Item = &AtomicFormula> {
        self.conjuncts.iter().filter(|a| !a.negated)
    }

    /// Check the completeness conditions and consistency against `sig`
    /// (with `coefficient_count` coefficient constants available).
    pub fn validate(&self, sig: &Signature, coefficient_count: usize) -> DiagramReport {
        let n = self.vars.len();
        let mut violations = Vec::new();
        let mut reduct_ok = true;
        if !self.reduct.fits(sig, coefficient_count) {
            reduct_ok = false;
        }

        let mut entries: BTreeMap<(usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
        let mut named: BTreeMap<Term, Vec<usize>> = BTreeMap::new();
        for a in &self.conjuncts {
            let fits = a.fits(sig, n, coefficient_count)
                && in_reduct(&a.lhs, &self.reduct)
                && in_reduct(&a.rhs, &self.reduct);
            match shape(a) {
                None => violations.push(DiagramViolation::ForeignShape(a.clone())),
                Some(_) if !fits => violations.push(DiagramViolation::ForeignSymbol(a.clone())),
                Some(Shape::Vars(x, y)) => {
                    if !a.negated || x == y {
                        violations.push(DiagramViolation::PositiveVariableEquality(a.clone()));
                    }
                }
                Some(Shape::Entry(f, args, x0)) => {
                    if !self.reduct.functions.contains(&f) {
                        violations.push(DiagramViolation::ForeignSymbol(a.clone()));
                    } else if !a.negated {
                        entries.entry((f, args)).or_default().push(x0);
                    }
                }
                Some(Shape::Named(c, x)) => {
                    if !a.negated {
                        named.entry(c).or_default().push(x);
                    }
                }
            }
            if a.negated && self.conjuncts.contains(&a.positive()) {
                violations.push(DiagramViolation::BothPolarities(a.positive()));
            }
        }

        for x in 0..n {
            for y in x + 1..n {
                if !self.conjuncts.contains(&AtomicFormula::neq(Term::Var(x), Term::Var(y))) {
                    violations.push(DiagramViolation::MissingInequation { x, y });
                }
            }
        }

        if reduct_ok {
            for &f in &self.reduct.functions {
                for args in tuples(n, sig.arity(f)) {
                    let lhs = Term::App(f, args.iter().map(|&v| Term::Var(v)).collect());
                    for x0 in 0..n {
                        let pos = AtomicFormula::eq(lhs.clone(), Term::Var(x0));
                        if !self.conjuncts.contains(&pos) && !self.conjuncts.contains(&pos.negate()) {
                            violations.push(DiagramViolation::MissingFunctionEntry {
                                function: f,
                                args: args.clone(),
                                value: x0,
                            });
                        }
                    }
                }
            }
            let names = self
                .reduct
                .constants
                .iter()
                .map(|&c| Term::Const(c))
                .chain(self.reduct.coefficients.iter().map(|&a| Term::Coef(a)));
            for c in names {
                for x in 0..n {
                    let pos = AtomicFormula::eq(Term::Var(x), c.clone());
                    if !self.conjuncts.contains(&pos) && !self.conjuncts.contains(&pos.negate()) {
                        violations.push(DiagramViolation::MissingConstantEntry { constant: c.clone(), var: x });
                    }
                }
            }
        }

        for ((f, args), values) in entries {
            for w in values.windows(2) {
                violations.push(DiagramViolation::FunctionalClash {
                    function: f,
                    args: args.clone(),
                    values: (w[0], w[1]),
                });
            }
        }
        for (c, xs) in named {
            for w in xs.windows(2) {
                violations.push(DiagramViolation::ConstantClash {
                    constant: c.clone(),
                    vars: (w[0], w[1]),
                });
            }
        }
        violations.sort();
        DiagramReport { violations }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> DiagramDisplay<'a> {
        DiagramDisplay { formula: self, sig }
    }
}

pub struct DiagramDisplay<'a> {
    formula: &'a DiagramFormula,
    sig: &'a Signature,
}

impl fmt::Display for DiagramDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .formula
            .conjuncts
            .iter()
            .map(|a| a.display(self.sig, &self.formula.vars).to_string())
            .collect();
        if parts.is_empty() {
            f.write_str("true")
        } else {
            f.write_str(&parts.join(" & "))
        }
    }
}

/// A total map from the positions of one variable list to another.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableMap {
    pub targets: Vec<usize>,
}

impl VariableMap {
    pub fn new(targets: Vec<usize>) -> Self {
        VariableMap { targets }
    }

    pub fn identity(n: usize) -> Self {
        VariableMap { targets: (0..n).collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.targets[x]
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &VariableMap) -> VariableMap {
        VariableMap {
            targets: self.targets.iter().map(|&x| then.targets[x]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.targets.iter().enumerate().all(|(i, &t)| i == t)
    }

    /// Checks that the map is total on `source` variables and lands in `target`.
    pub fn check(&self, source: usize, target: usize) -> Result<()> {
        if self.targets.len() != source {
            return Err(Error::VariableMap(format!(
                "map covers {} variables but the source has {source}",
                self.targets.len()
            )));
        }
        if let Some(&t) = self.targets.iter().find(|&&t| t >= target) {
            return Err(Error::VariableMap(format!(
                "image {t} is outside a target list of {target} variables"
            )));
        }
        Ok(())
    }
}

/// The conjuncts of `φ(γ(X))`. The result need not be a diagram formula:
/// a non-injective `γ` can produce conjuncts such as `x != x`.
pub fn substitute(phi: &DiagramFormula, gamma: &VariableMap) -> Result<BTreeSet<AtomicFormula>> {
    if gamma.targets.len() < phi.vars.len() {
        return Err(Error::VariableMap(format!(
            "map covers {} of {} variables",
            gamma.targets.len(),
            phi.vars.len()
        )));
    }
    Ok(phi
        .conjuncts
        .iter()
        .map(|a| a.rename(&|x| gamma.targets[x]).oriented())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meet() -> Signature {
        Signature::build(&[("meet", 2)], &[]).unwrap()
    }

    fn uv() -> Vec<String> {
        vec!["u".into(), "v".into()]
    }

    fn entry(args: [usize; 2], value: usize, negated: bool) -> AtomicFormula {
        AtomicFormula {
            lhs: Term::App(0, args.iter().map(|&v| Term::Var(v)).collect()),
            rhs: Term::Var(value),
            negated,
        }
    }

    fn s2_diagram() -> DiagramFormula {
        let mut conjuncts = vec![AtomicFormula::neq(Term::Var(1), Term::Var(0))];
        for args in tuples(2, 2) {
            let value = args[0].min(args[1]);
            for x0 in 0..2 {
                conjuncts.push(entry([args[0], args[1]], x0, x0 != value));
            }
        }
        DiagramFormula::new(Reduct::full(&meet(), 0), uv(), conjuncts)
    }

    #[test]
    fn meet_table_diagram_is_valid() {
        let phi = s2_diagram();
        assert!(phi.validate(&meet(), 0).is_valid());
        assert_eq!(phi.positive_conjuncts().count(), 4);
        assert_eq!(phi.conjuncts.iter().filter(|a| a.negated).count(), 5);
    }

    #[test]
    fn removing_an_entry_is_reported() {
        let mut phi = s2_diagram();
        phi.conjuncts.remove(&entry([0, 1], 0, false));
        let report = phi.validate(&meet(), 0);
        assert_eq!(
            report.violations,
            vec![DiagramViolation::MissingFunctionEntry {
                function: 0,
                args: vec![0, 1],
                value: 0
            }]
        );
        assert!(report.violations[0].describe(&meet(), &uv()).contains("missing F-entry"));
    }

    #[test]
    fn two_positive_values_clash() {
        let sig = Signature::build(&[("f", 1)], &[]).unwrap();
        let f = |x: usize, y: usize| AtomicFormula::eq(Term::App(0, vec![Term::Var(x)]), Term::Var(y));
        let phi = DiagramFormula::new(
            Reduct::full(&sig, 0),
            uv(),
            [f(0, 0), f(0, 1), AtomicFormula::neq(Term::Var(0), Term::Var(1))],
        );
        let report = phi.validate(&sig, 0);
        assert!(report.violations.contains(&DiagramViolation::FunctionalClash {
            function: 0,
            args: vec![0],
            values: (0, 1)
        }));
    }

    #[test]
    fn substitution_cases() {
        let phi = s2_diagram();
        assert_eq!(substitute(&phi, &VariableMap::identity(2)).unwrap(), phi.conjuncts);
        let collapsed = substitute(&phi, &VariableMap::new(vec![0, 0])).unwrap();
        assert!(collapsed.contains(&AtomicFormula::neq(Term::Var(0), Term::Var(0))));
        assert!(substitute(&phi, &VariableMap::new(vec![0])).is_err());

        let sig = Signature::build(&[("f", 1)], &[]).unwrap();
        let one = DiagramFormula::new(
            Reduct::full(&sig, 0),
            uv(),
            [AtomicFormula::eq(Term::App(0, vec![Term::Var(0)]), Term::Var(1))],
        );
        let moved = substitute(&one, &VariableMap::new(vec![2, 3])).unwrap();
        assert!(moved.contains(&AtomicFormula::eq(Term::App(0, vec![Term::Var(2)]), Term::Var(3))));
    }

    #[test]
    fn reduct_masks_round_trip() {
        let sig = Signature::build(&[("mul", 2), ("inv", 1)], &["e"]).unwrap();
        for mask in 0..16u64 {
            let r = Reduct::from_mask(&sig, 1, mask);
            assert_eq!(r.to_mask(&sig), mask);
        }
        assert_eq!(Reduct::full(&sig, 0).display(&sig).to_string(), "{mul, inv, e}");
    }
}
