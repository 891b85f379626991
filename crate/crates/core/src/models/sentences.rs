use crate::algebra::FiniteAlgebra;
use crate::error::{Budget, Error, Result};
use crate::syntax::{AtomicFormula, Matrix, QuantifiedFormula};

/// Truth of a sentence in one algebra. `witness` is a counterexample for
/// a false universal sentence and a realizing point for a true
/// existential one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceVerdict {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

fn literal(b: &FiniteAlgebra, a: &AtomicFormula, point: &[usize]) -> bool {
    (b.eval_fast(&a.lhs, point) == b.eval_fast(&a.rhs, point)) != a.negated
}

pub(crate) fn matrix_holds(b: &FiniteAlgebra, m: &Matrix, point: &[usize]) -> bool {
    m.eval_with::<()>(&mut |a| Ok(literal(b, a, point))).unwrap_or(false)
}

fn fits(b: &FiniteAlgebra, s: &QuantifiedFormula) -> Result<()> {
    let n = s.vars.len();
    for a in s.matrix.literals() {
        if !a.fits(b.signature(), n, b.coefficient_count()) {
            return Err(Error::SignatureMismatch(format!(
                "literal {} does not fit the algebra",
                a.display(b.signature(), &s.vars)
            )));
        }
    }
    Ok(())
}

/// Visit all of `B^n` in lexicographic order until `stop` returns true.
fn scan(b: &FiniteAlgebra, n: usize, budget: &Budget, mut stop: impl FnMut(&[usize]) -> bool) -> Result<Option<Vec<usize>>> {
    let space = (b.size() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let space = budget.check_universe("assignment space", space)?;
    let mut point = vec![0; n];
    for _ in 0..space {
        if stop(&point) {
            return Ok(Some(point));
        }
        for slot in point.iter_mut().rev() {
            *slot += 1;
            if *slot < b.size() {
                break;
            }
            *slot = 0;
        }
    }
    Ok(None)
}

pub fn check_universal_sentence(b: &FiniteAlgebra, s: &QuantifiedFormula, budget: &Budget) -> Result<SentenceVerdict> {
    if !s.is_universal() {
        return Err(Error::Shape("expected a universal sentence".into()));
    }
    fits(b, s)?;
    let counter = scan(b, s.vars.len(), budget, |p| !matrix_holds(b, &s.matrix, p))?;
    Ok(SentenceVerdict {
        holds: counter.is_none(),
        witness: counter,
    })
}

/// Existential sentences. A conjunction of literals is searched by
/// backtracking, checking each literal once its variables are assigned;
/// other matrices are scanned point by point.
pub fn check_existential_sentence(b: &FiniteAlgebra, s: &QuantifiedFormula, budget: &Budget) -> Result<SentenceVerdict> {
    if !s.is_existential() {
        return Err(Error::Shape("expected an existential sentence".into()));
    }
    fits(b, s)?;
    let n = s.vars.len();
    if let Some(lits) = conjunction(&s.matrix) {
        let mut by_var: Vec<Vec<&AtomicFormula>> = vec![Vec::new(); n + 1];
        for a in lits {
            let slot = a.max_var().map_or(0, |v| v + 1);
            by_var[slot].push(a);
        }
        if !by_var[0].iter().all(|a| literal(b, a, &[])) {
            return Ok(SentenceVerdict {
                holds: false,
                witness: None,
            });
        }
        let mut point = vec![0; n];
        let found = extend(b, &by_var, 0, &mut point);
        return Ok(SentenceVerdict {
            holds: found,
            witness: found.then_some(point),
        });
    }
    let found = scan(b, n, budget, |p| matrix_holds(b, &s.matrix, p))?;
    Ok(SentenceVerdict {
        holds: found.is_some(),
        witness: found,
    })
}

fn conjunction(m: &Matrix) -> Option<Vec<&AtomicFormula>> {
    match m {
        Matrix::Literal(a) => Some(vec![a]),
        Matrix::And(parts) => {
            let mut out = Vec::new();
            for p in parts {
                out.extend(conjunction(p)?);
            }
            Some(out)
        }
        _ => None,
    }
}

fn extend(b: &FiniteAlgebra, by_var: &[Vec<&AtomicFormula>], v: usize, point: &mut Vec<usize>) -> bool {
    if v == point.len() {
        return true;
    }
    for x in 0..b.size() {
        point[v] = x;
        if by_var[v + 1].iter().all(|a| literal(b, a, point)) && extend(b, by_var, v + 1, point) {
            return true;
        }
    }
    false
}

/// Universal or existential, by prefix.
pub fn check_sentence(b: &FiniteAlgebra, s: &QuantifiedFormula, budget: &Budget) -> Result<SentenceVerdict> {
    if s.is_universal() {
        check_universal_sentence(b, s, budget)
    } else if s.is_existential() {
        check_existential_sentence(b, s, budget)
    } else {
        Err(Error::Shape("mixed quantifier prefixes are not evaluated".into()))
    }
}

/// Quasi-identities and identities; points failing a premise are skipped
/// without evaluating the rest.
pub fn check_quasi_identity(b: &FiniteAlgebra, s: &QuantifiedFormula, budget: &Budget) -> Result<SentenceVerdict> {
    let (premises, conclusion) = s
        .as_horn()
        .ok_or_else(|| Error::Shape("expected a quasi-identity".into()))?;
    fits(b, s)?;
    let counter = scan(b, s.vars.len(), budget, |p| {
        premises.iter().all(|a| literal(b, a, p)) && !literal(b, &conclusion, p)
    })?;
    Ok(SentenceVerdict {
        holds: counter.is_none(),
        witness: counter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::syntax::parse_sentence;

    fn sentence(b: &FiniteAlgebra, text: &str) -> QuantifiedFormula {
        parse_sentence(text, b.signature(), b.coefficient_count()).unwrap()
    }

    #[test]
    fn universal_examples() {
        let budget = Budget::default();
        let s = sentence(&z2(), "forall x . mul(x, x) = e");
        assert!(check_universal_sentence(&z2(), &s, &budget).unwrap().holds);
        let v = check_universal_sentence(&z4(), &s, &budget).unwrap();
        assert_eq!(v, SentenceVerdict { holds: false, witness: Some(vec![1]) });
        let trivial = sentence(&s2(), "forall x . x = x");
        assert!(check_universal_sentence(&s2(), &trivial, &budget).unwrap().holds);
        let ex = sentence(&z2(), "exists x . mul(x, x) = e");
        assert!(check_universal_sentence(&z2(), &ex, &budget).is_err());
    }

    #[test]
    fn quasi_identity_examples() {
        let budget = Budget::default();
        let q = sentence(&z3(), "qi: mul(x, x) = e -> x = e");
        assert!(check_quasi_identity(&z3(), &q, &budget).unwrap().holds);
        assert_eq!(check_quasi_identity(&z2(), &q, &budget).unwrap().witness, Some(vec![1]));
        let t = sentence(&s2(), "qi: x = x -> x = x");
        assert!(check_quasi_identity(&s2(), &t, &budget).unwrap().holds);
        let not_horn = sentence(&z2(), "forall x . x = e | mul(x, x) = e");
        assert!(check_quasi_identity(&z2(), &not_horn, &budget).is_err());
    }

    #[test]
    fn duality_on_examples() {
        let budget = Budget::default();
        for b in [z2(), z3(), z4(), v4()] {
            for text in [
                "forall x . mul(x, x) = e",
                "forall x y . mul(x, y) = mul(y, x)",
                "forall x y . x = y | mul(x, y) = e",
                "forall x . mul(x, x) = e -> x = e",
            ] {
                let s = sentence(&b, text);
                let u = check_universal_sentence(&b, &s, &budget).unwrap();
                let e = check_existential_sentence(&b, &s.negate(), &budget).unwrap();
                assert_eq!(u.holds, !e.holds);
                assert_eq!(u.witness, e.witness);
            }
        }
    }
}
