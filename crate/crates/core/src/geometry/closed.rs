use std::collections::BTreeSet;

use super::irreducible::maximal_pieces;
use super::{solve, AlgebraicSet};
use crate::algebra::FiniteAlgebra;
use crate::error::{Budget, Error, Result};

/// A Zariski closed subset of `B^n`: a finite union of algebraic sets,
/// kept as an antichain. Empty components are dropped, so the empty set
/// has no components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedSet {
    pub algebra: FiniteAlgebra,
    pub n: usize,
    pub components: Vec<AlgebraicSet>,
}

impl ClosedSet {
    pub fn empty(algebra: FiniteAlgebra, n: usize) -> ClosedSet {
        ClosedSet {
            algebra,
            n,
            components: Vec::new(),
        }
    }

    pub fn from_set(y: AlgebraicSet) -> ClosedSet {
        let mut c = ClosedSet::empty(y.algebra.clone(), y.n());
        if !y.is_empty() {
            c.components.push(y);
        }
        c
    }

    fn normalized(algebra: FiniteAlgebra, n: usize, sets: Vec<AlgebraicSet>) -> ClosedSet {
        let pieces = sets.into_iter().filter(|s| !s.is_empty()).map(|s| (s.points.clone(), s)).collect();
        ClosedSet {
            algebra,
            n,
            components: maximal_pieces(pieces).into_iter().map(|(_, s)| s).collect(),
        }
    }

    pub fn points(&self) -> Vec<Vec<usize>> {
        let all: BTreeSet<Vec<usize>> = self.components.iter().flat_map(|c| c.points.iter().cloned()).collect();
        all.into_iter().collect()
    }

    pub fn contains(&self, point: &[usize]) -> bool {
        self.components.iter().any(|c| c.contains(point))
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    fn same_space(&self, other: &ClosedSet) -> Result<()> {
        if self.n != other.n || self.algebra != other.algebra {
            return Err(Error::Shape(format!(
                "closed sets live in different spaces (dimension {} vs {})",
                self.n, other.n
            )));
        }
        Ok(())
    }
}

pub fn closed_union(a: &ClosedSet, b: &ClosedSet) -> Result<ClosedSet> {
    a.same_space(b)?;
    let all = a.components.iter().chain(&b.components).cloned().collect();
    Ok(ClosedSet::normalized(a.algebra.clone(), a.n, all))
}

/// Distributes over components; each pairwise meet is `V(S1 ∪ S2)`.
pub fn closed_intersection(a: &ClosedSet, b: &ClosedSet, budget: &Budget) -> Result<ClosedSet> {
    a.same_space(b)?;
    let mut all = Vec::new();
    for x in &a.components {
        for y in &b.components {
            all.push(solve(&x.system.union(&y.system)?, &a.algebra, budget)?);
        }
    }
    Ok(ClosedSet::normalized(a.algebra.clone(), a.n, all))
}

#[cfg(test)]
mod tests {
    use super::super::tests::system;
    use super::*;
    use crate::algebra::fixtures::*;

    #[test]
    fn closed_set_examples() {
        let b = Budget::default();
        let y = ClosedSet::from_set(solve(&system(&s2(), &["x", "y"], &["meet(x, y) = x"]), &s2(), &b).unwrap());
        let empty = ClosedSet::empty(s2(), 2);
        assert_eq!(closed_union(&y, &empty).unwrap(), y);
        assert_eq!(closed_union(&y, &y).unwrap(), y);

        let s1 = system(&s2(), &["x", "y"], &["meet(x, y) = x"]);
        let s2sys = system(&s2(), &["x", "y"], &["meet(x, y) = y"]);
        let a = ClosedSet::from_set(solve(&s1, &s2(), &b).unwrap());
        let c = ClosedSet::from_set(solve(&s2sys, &s2(), &b).unwrap());
        let meet = closed_intersection(&a, &c, &b).unwrap();
        let direct = solve(&s1.union(&s2sys).unwrap(), &s2(), &b).unwrap();
        assert_eq!(meet.points(), direct.points);
        assert_eq!(meet.points(), vec![vec![0, 0], vec![1, 1]]);

        let join = closed_union(&a, &c).unwrap();
        assert_eq!(join.components.len(), 2);
        assert_eq!(join.points().len(), 4);

        let other = ClosedSet::empty(s2(), 3);
        assert!(closed_union(&a, &other).is_err());
    }

    #[test]
    fn closed_set_decomposition() {
        let b = Budget::default();
        let line = ClosedSet::from_set(solve(&system(&c01(), &["x"], &[]), &c01(), &b).unwrap());
        let parts = line.decompose(&b).unwrap();
        assert_eq!(parts.len(), 2);
    }
}
