use std::collections::HashMap;

use super::AlgebraicSet;
use crate::algebra::FiniteAlgebra;
use crate::error::{Budget, Error, Result};
use crate::syntax::{tuples, AtomicFormula, Term};

/// The term functions on a nonempty algebraic set `Y`: the subalgebra of
/// `B^Y` generated by the coordinate projections and the constants. Two
/// terms agree on `Y` exactly when their traces coincide, so this decides
/// membership in the radical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSubalgebra {
    pub points: Vec<Vec<usize>>,
    /// `values[e][p]` is element `e` evaluated at point `p`.
    pub values: Vec<Vec<usize>>,
    /// A term with that trace, found breadth-first.
    pub witnesses: Vec<Term>,
    /// Element index of each coordinate projection.
    pub projections: Vec<usize>,
    /// The trace functions as an abstract algebra, elements in discovery
    /// order; coefficient constants are carried over when `B` has them.
    pub algebra: FiniteAlgebra,
}

impl TraceSubalgebra {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Element of a term, computed in the trace algebra itself rather than
    /// by evaluating at points.
    pub fn element_of(&self, t: &Term) -> usize {
        match t {
            Term::Var(v) => self.projections[*v],
            Term::Const(c) => self.algebra.constant(*c),
            Term::Coef(a) => self.algebra.coefficients()[*a],
            Term::App(f, args) => {
                let args: Vec<usize> = args.iter().map(|a| self.element_of(a)).collect();
                self.algebra.apply(*f, &args)
            }
        }
    }

    /// `t = s ∈ Rad(Y)`, decided by comparing elements of the trace algebra.
    pub fn in_radical(&self, q: &AtomicFormula) -> bool {
        self.element_of(&q.lhs) == self.element_of(&q.rhs)
    }

    /// The evaluation homomorphism at point `p`.
    pub fn evaluation(&self, p: usize) -> Vec<usize> {
        self.values.iter().map(|v| v[p]).collect()
    }
}

/// Build the trace subalgebra of `y`.
pub fn trace_subalgebra(y: &AlgebraicSet, budget: &Budget) -> Result<TraceSubalgebra> {
    if y.is_empty() {
        return Err(Error::EmptyVariety);
    }
    let b = &y.algebra;
    let sig = b.signature().clone();
    let n = y.n();
    let mut values: Vec<Vec<usize>> = Vec::new();
    let mut witnesses: Vec<Term> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut intern = |v: Vec<usize>, w: Term, values: &mut Vec<Vec<usize>>, witnesses: &mut Vec<Term>| -> usize {
        if let Some(&e) = index.get(&v) {
            return e;
        }
        let e = values.len();
        index.insert(v.clone(), e);
        values.push(v);
        witnesses.push(w);
        e
    };
    let projections: Vec<usize> = (0..n)
        .map(|i| {
            let v = y.points.iter().map(|p| p[i]).collect();
            intern(v, Term::Var(i), &mut values, &mut witnesses)
        })
        .collect();
    let constants: Vec<usize> = (0..sig.constant_count())
        .map(|c| intern(vec![b.constant(c); y.points.len()], Term::Const(c), &mut values, &mut witnesses))
        .collect();
    let coefficients: Vec<usize> = (0..b.coefficient_count())
        .map(|a| {
            intern(
                vec![b.coefficients()[a]; y.points.len()],
                Term::Coef(a),
                &mut values,
                &mut witnesses,
            )
        })
        .collect();

    let mut table: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    loop {
        let current = values.len();
        for f in 0..sig.function_count() {
            for args in tuples(current, sig.arity(f)) {
                if table.contains_key(&(f, args.clone())) {
                    continue;
                }
                let v: Vec<usize> = (0..y.points.len())
                    .map(|p| {
                        let at: Vec<usize> = args.iter().map(|&a| values[a][p]).collect();
                        b.apply(f, &at)
                    })
                    .collect();
                let w = Term::App(f, args.iter().map(|&a| witnesses[a].clone()).collect());
                let e = intern(v, w, &mut values, &mut witnesses);
                if values.len() > budget.max_universe {
                    return Err(Error::bound("trace subalgebra", values.len() as u128, budget.max_universe));
                }
                table.insert((f, args), e);
            }
        }
        if values.len() == current {
            break;
        }
    }
    let size = values.len();
    let algebra = FiniteAlgebra::from_fn(sig, size, |f, args| table[&(f, args.to_vec())], constants)?
        .with_coefficients(coefficients)?;
    Ok(TraceSubalgebra {
        points: y.points.clone(),
        values,
        witnesses,
        projections,
        algebra,
    })
}

/// `q ∈ Rad(Y)`: both sides agree at every point. True for every `q` when
/// `Y` is empty.
pub fn radical_member(y: &AlgebraicSet, q: &AtomicFormula) -> Result<bool> {
    if q.negated {
        return Err(Error::Shape("the radical contains equations".into()));
    }
    if !q.fits(&y.system.sig, y.n(), y.algebra.coefficient_count()) {
        return Err(Error::ForeignVariable(format!(
            "{} is not over the variables of the set",
            q.display(&y.system.sig, &y.system.vars)
        )));
    }
    Ok(y
        .points
        .iter()
        .all(|p| y.algebra.eval_fast(&q.lhs, p) == y.algebra.eval_fast(&q.rhs, p)))
}

/// `Γ(Y)` with the images of the coordinate projections as generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinate {
    pub algebra: FiniteAlgebra,
    pub generators: Vec<usize>,
    pub trace: TraceSubalgebra,
}

pub fn coordinate_algebra(y: &AlgebraicSet, budget: &Budget) -> Result<Coordinate> {
    let trace = trace_subalgebra(y, budget)?;
    Ok(Coordinate {
        algebra: trace.algebra.clone(),
        generators: trace.projections.clone(),
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::system;
    use super::super::{solve, AlgebraicSet};
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::algebra::{enumerate_homomorphisms, find_isomorphism, HomMode};
    use crate::syntax::parse_atomic;

    fn meet_set() -> AlgebraicSet {
        solve(&system(&s2(), &["x", "y"], &["meet(x, y) = x"]), &s2(), &Budget::default()).unwrap()
    }

    #[test]
    fn radical_examples() {
        let y = meet_set();
        let q = |s: &str| parse_atomic(s, &y.system.sig, &y.system.vars, 0).unwrap();
        assert!(radical_member(&y, &q("meet(x, y) = meet(x, meet(y, y))")).unwrap());
        assert!(!radical_member(&y, &q("x = y")).unwrap());
        let empty = solve(&system(&n2(), &["x"], &["x = f(x)"]), &n2(), &Budget::default()).unwrap();
        let vars = ["x".to_string()];
        assert!(radical_member(&empty, &parse_atomic("x = f(x)", n2().signature(), &vars, 0).unwrap()).unwrap());
    }

    #[test]
    fn trace_examples() {
        let b = Budget::default();
        let t = trace_subalgebra(&meet_set(), &b).unwrap();
        assert_eq!(t.values, vec![vec![0, 0, 1], vec![0, 1, 1]]);

        let line = solve(&system(&s2(), &["x"], &[]), &s2(), &b).unwrap();
        assert_eq!(trace_subalgebra(&line, &b).unwrap().len(), 1);

        let c_line = solve(&system(&c01(), &["x"], &[]), &c01(), &b).unwrap();
        let t = trace_subalgebra(&c_line, &b).unwrap();
        assert_eq!(t.values, vec![vec![0, 1], vec![0, 0], vec![1, 1]]);
        assert_eq!(coordinate_algebra(&c_line, &b).unwrap().algebra.size(), 3);
        assert_eq!(trace_subalgebra(&solve(&system(&n2(), &["x"], &["x = f(x)"]), &n2(), &b).unwrap(), &b), Err(Error::EmptyVariety));
    }

    #[test]
    fn coordinate_algebra_of_meet_set_is_s2() {
        let c = coordinate_algebra(&meet_set(), &Budget::default()).unwrap();
        let iso = find_isomorphism(&c.algebra, &s2()).unwrap().unwrap();
        let (a, bb) = (c.generators[0], c.generators[1]);
        assert_eq!(c.algebra.apply(0, &[a, bb]), a);
        assert_eq!(iso.map.len(), 2);
    }

    #[test]
    fn single_point_coordinate_algebra() {
        let b = Budget::default();
        let y = solve(&system(&z4(), &["x"], &["mul(x, x) = x"]), &z4(), &b).unwrap();
        assert_eq!(y.points, vec![vec![0]]);
        assert!(coordinate_algebra(&y, &b).unwrap().algebra.is_trivial());

        // With Z2 embedded as {0, 2}, the equation x = @1 pins x = 2.
        let z4a = z4().with_coefficients(vec![0, 2]).unwrap();
        let y = solve(&system(&z4a, &["x"], &["x = @1"]), &z4a, &b).unwrap();
        assert_eq!(y.points, vec![vec![2]]);
        let c = coordinate_algebra(&y, &b).unwrap();
        assert_eq!(c.algebra.size(), z4().generated_subalgebra(&[2]).unwrap().universe.len());
    }

    #[test]
    fn generator_respecting_homs_are_points() {
        let b = Budget::default();
        let y = meet_set();
        let c = coordinate_algebra(&y, &b).unwrap();
        let homs = enumerate_homomorphisms(&c.algebra, &s2(), HomMode::All).unwrap();
        let mut from_homs: Vec<Vec<usize>> = homs
            .iter()
            .map(|h| c.generators.iter().map(|&g| h.apply(g)).collect())
            .collect();
        from_homs.sort();
        assert_eq!(from_homs, y.points);
    }
}
