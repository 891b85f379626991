use super::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::syntax::{tuples, AtomicFormula, QuantifiedFormula, Term};

/// The core of the diagram of `a` as ground sentences over `L_A`:
/// constant bindings, one positive sentence per table entry, and one
/// inequation per unordered pair of distinct elements.
pub fn core_diagram(a: &FiniteAlgebra) -> Vec<AtomicFormula> {
    let sig = a.signature();
    let mut out = Vec::new();
    for c in 0..sig.constant_count() {
        out.push(AtomicFormula::eq(Term::Const(c), Term::Coef(a.constant(c))));
    }
    for f in 0..sig.function_count() {
        for args in tuples(a.size(), sig.arity(f)) {
            let lhs = Term::App(f, args.iter().map(|&x| Term::Coef(x)).collect());
            out.push(AtomicFormula::eq(lhs, Term::Coef(a.apply(f, &args))));
        }
    }
    for x in 0..a.size() {
        for y in x + 1..a.size() {
            out.push(AtomicFormula::neq(Term::Coef(x), Term::Coef(y)));
        }
    }
    out
}

/// The quasi-identities axiomatizing A-algebras together with the trivial
/// algebra: the positive core sentences, and `c_a = c_b -> x = y` for
/// distinct `a, b`.
pub fn a_algebra_quasi_identities(a: &FiniteAlgebra) -> Vec<QuantifiedFormula> {
    let mut out: Vec<QuantifiedFormula> = core_diagram(a)
        .into_iter()
        .filter(|s| !s.negated)
        .map(|s| QuantifiedFormula::universal(Vec::new(), crate::syntax::Matrix::Literal(s)))
        .collect();
    for x in 0..a.size() {
        for y in x + 1..a.size() {
            out.push(QuantifiedFormula::quasi_identity(
                vec!["x".into(), "y".into()],
                vec![AtomicFormula::eq(Term::Coef(x), Term::Coef(y))],
                AtomicFormula::eq(Term::Var(0), Term::Var(1)),
            ));
        }
    }
    out
}

/// Outcome of checking `B ⊨ Diag₀(A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ACheck {
    pub holds: bool,
    pub violations: Vec<AtomicFormula>,
}

/// Whether `b`, with `c_a` read as `b.coefficients()[a]`, satisfies the
/// core diagram of `a`; equivalently whether `a ↦ λ(a)` embeds `a` in `b`.
pub fn is_a_algebra(a: &FiniteAlgebra, b: &FiniteAlgebra) -> ACheck {
    if a.signature() != b.signature() || b.coefficient_count() != a.size() {
        return ACheck {
            holds: false,
            violations: Vec::new(),
        };
    }
    let violations: Vec<AtomicFormula> = core_diagram(a)
        .into_iter()
        .filter(|s| {
            let l = b.eval_fast(&s.lhs, &[]);
            let r = b.eval_fast(&s.rhs, &[]);
            (l == r) == s.negated
        })
        .collect();
    ACheck {
        holds: violations.is_empty(),
        violations,
    }
}

/// An algebra `B` with an embedding `λ: A -> B`, stored as coefficient
/// interpretations on `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientStructure {
    pub coefficient: FiniteAlgebra,
    pub algebra: FiniteAlgebra,
}

impl CoefficientStructure {
    pub fn new(a: FiniteAlgebra, b: FiniteAlgebra, lambda: Vec<usize>) -> Result<Self> {
        a.same_signature(&b)?;
        if lambda.len() != a.size() {
            return Err(Error::Coefficients(format!(
                "λ has {} values for a coefficient algebra of size {}",
                lambda.len(),
                a.size()
            )));
        }
        let a = a.without_coefficients();
        let b = b.with_coefficients(lambda)?;
        let check = is_a_algebra(&a, &b);
        if !check.holds {
            let vars: Vec<String> = Vec::new();
            let first = check.violations[0].display(a.signature(), &vars).to_string();
            return Err(Error::Coefficients(format!(
                "λ is not an embedding: {first} fails ({} violations)",
                check.violations.len()
            )));
        }
        Ok(CoefficientStructure { coefficient: a, algebra: b })
    }

    pub fn lambda(&self) -> &[usize] {
        self.algebra.coefficients()
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::syntax::tuples;

    #[test]
    fn core_diagram_counts() {
        let e = FiniteAlgebra::trivial(&group_signature());
        let d = core_diagram(&e);
        assert_eq!(d.iter().filter(|s| s.negated).count(), 0);
        assert_eq!(d.iter().filter(|s| matches!(s.lhs, Term::App(..))).count(), 2);

        let d = core_diagram(&z2());
        let constants = d.iter().filter(|s| matches!(s.lhs, Term::Const(_))).count();
        let mul = d.iter().filter(|s| matches!(s.lhs, Term::App(0, _))).count();
        let inv = d.iter().filter(|s| matches!(s.lhs, Term::App(1, _))).count();
        let neq = d.iter().filter(|s| s.negated).count();
        assert_eq!((constants, mul, inv, neq), (1, 4, 2, 1));

        let d = core_diagram(&s2());
        assert_eq!(d.len(), 5);
        assert_eq!(d.iter().filter(|s| s.negated).count(), 1);
    }

    #[test]
    fn a_algebra_examples() {
        assert!(is_a_algebra(&z2(), &z4().with_coefficients(vec![0, 2]).unwrap()).holds);
        assert!(CoefficientStructure::new(z2(), z2(), vec![0, 1]).is_ok());
        for lambda in tuples(3, 2) {
            assert!(!is_a_algebra(&z2(), &z3().with_coefficients(lambda).unwrap()).holds);
        }
        assert!(CoefficientStructure::new(z2(), z4(), vec![0, 1]).is_err());
    }
}
