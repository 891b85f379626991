use std::collections::HashMap;

use super::{trace_subalgebra, AlgebraicSet, ClosedSet, EquationSystem};
use crate::error::{Budget, Result};
use crate::syntax::AtomicFormula;

/// A proper algebraic subset of `Y` cut out by one extra equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub equation: AtomicFormula,
    pub points: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    /// A point at which distinct term functions take distinct values.
    Irreducible { generic_point: Vec<usize> },
    /// Maximal proper equalizers; their union is `Y`.
    Reducible { cover: Vec<Cut> },
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible { .. })
    }
}

/// Decide irreducibility from the equalizers `E(f, g) ∩ Y` of distinct
/// term functions. Every proper algebraic subset of `Y` lies in one of
/// them, so `Y` is reducible exactly when they cover it.
pub fn is_irreducible(y: &AlgebraicSet, budget: &Budget) -> Result<Irreducibility> {
    let trace = trace_subalgebra(y, budget)?;
    let m = y.points.len();
    let k = trace.len();
    let mut covered = vec![false; m];
    let mut equalizers: HashMap<Vec<bool>, (usize, usize)> = HashMap::new();
    let mut order: Vec<Vec<bool>> = Vec::new();
    for f in 0..k {
        for g in f + 1..k {
            let mask: Vec<bool> = (0..m).map(|p| trace.values[f][p] == trace.values[g][p]).collect();
            if !mask.iter().any(|&x| x) {
                continue;
            }
            mask.iter().enumerate().filter(|(_, &x)| x).for_each(|(p, _)| covered[p] = true);
            if !equalizers.contains_key(&mask) {
                equalizers.insert(mask.clone(), (f, g));
                order.push(mask);
            }
        }
    }
    if let Some(p) = covered.iter().position(|&c| !c) {
        return Ok(Irreducibility::Irreducible {
            generic_point: y.points[p].clone(),
        });
    }
    let subset = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(&x, &y)| !x || y);
    let maximal: Vec<&Vec<bool>> = order
        .iter()
        .filter(|a| !order.iter().any(|b| b != *a && subset(a, b)))
        .collect();
    let cover = maximal
        .into_iter()
        .map(|mask| {
            let (f, g) = equalizers[mask];
            Cut {
                equation: AtomicFormula::eq(trace.witnesses[f].clone(), trace.witnesses[g].clone()),
                points: (0..m).filter(|&p| mask[p]).map(|p| y.points[p].clone()).collect(),
            }
        })
        .collect();
    Ok(Irreducibility::Reducible { cover })
}

/// Order in which the pieces of a cover are explored. The result does not
/// depend on it; both exist so the claim can be tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionOrder {
    Forward,
    Reverse,
}

/// Irreducible components of `y`, sorted by their point lists. Each carries
/// the original system plus the equations that cut it out.
pub fn decompose(y: &AlgebraicSet, budget: &Budget) -> Result<Vec<AlgebraicSet>> {
    decompose_with(y, DecompositionOrder::Forward, budget)
}

pub fn decompose_with(y: &AlgebraicSet, order: DecompositionOrder, budget: &Budget) -> Result<Vec<AlgebraicSet>> {
    if y.is_empty() {
        return Ok(Vec::new());
    }
    let mut memo: HashMap<Vec<Vec<usize>>, Vec<(Vec<Vec<usize>>, EquationSystem)>> = HashMap::new();
    let parts = components(y, y.points.clone(), y.system.clone(), order, budget, &mut memo)?;
    Ok(parts
        .into_iter()
        .map(|(points, system)| y.restricted(system, points))
        .collect())
}

type Memo = HashMap<Vec<Vec<usize>>, Vec<(Vec<Vec<usize>>, EquationSystem)>>;

fn components(
    host: &AlgebraicSet,
    points: Vec<Vec<usize>>,
    system: EquationSystem,
    order: DecompositionOrder,
    budget: &Budget,
    memo: &mut Memo,
) -> Result<Vec<(Vec<Vec<usize>>, EquationSystem)>> {
    if let Some(done) = memo.get(&points) {
        return Ok(done.clone());
    }
    let piece = host.restricted(system.clone(), points.clone());
    let result = match is_irreducible(&piece, budget)? {
        Irreducibility::Irreducible { .. } => vec![(points.clone(), system)],
        Irreducibility::Reducible { mut cover } => {
            if order == DecompositionOrder::Reverse {
                cover.reverse();
            }
            let mut found = Vec::new();
            for cut in cover {
                let sub = system.extended([cut.equation]);
                found.extend(components(host, cut.points, sub, order, budget, memo)?);
            }
            maximal_pieces(found)
        }
    };
    memo.insert(points, result.clone());
    Ok(result)
}

/// Drop pieces contained in others (keeping the first of equal ones) and
/// sort by point list.
pub(crate) fn maximal_pieces<T: Clone>(mut pieces: Vec<(Vec<Vec<usize>>, T)>) -> Vec<(Vec<Vec<usize>>, T)> {
    let contains = |big: &[Vec<usize>], small: &[Vec<usize>]| {
        small.iter().all(|p| big.binary_search(p).is_ok())
    };
    pieces.sort_by(|a, b| b.0.len().cmp(&a.0.len()));
    let mut kept: Vec<(Vec<Vec<usize>>, T)> = Vec::new();
    for piece in pieces {
        if !kept.iter().any(|k| contains(&k.0, &piece.0)) {
            kept.push(piece);
        }
    }
    kept.sort_by(|a, b| a.0.cmp(&b.0));
    kept
}

impl ClosedSet {
    /// Irreducible components of a finite union of algebraic sets.
    pub fn decompose(&self, budget: &Budget) -> Result<Vec<AlgebraicSet>> {
        let mut all = Vec::new();
        for c in &self.components {
            for piece in decompose(c, budget)? {
                all.push((piece.points.clone(), piece));
            }
        }
        Ok(maximal_pieces(all).into_iter().map(|(_, p)| p).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::super::solve;
    use super::super::tests::system;
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::error::Error;

    #[test]
    fn irreducibility_examples() {
        let b = Budget::default();
        let y = solve(&system(&s2(), &["x", "y"], &["meet(x, y) = x"]), &s2(), &b).unwrap();
        assert_eq!(
            is_irreducible(&y, &b).unwrap(),
            Irreducibility::Irreducible {
                generic_point: vec![0, 1]
            }
        );

        let line = solve(&system(&c01(), &["x"], &[]), &c01(), &b).unwrap();
        match is_irreducible(&line, &b).unwrap() {
            Irreducibility::Reducible { cover } => {
                let pts: Vec<_> = cover.iter().map(|c| c.points.clone()).collect();
                assert_eq!(pts, vec![vec![vec![0]], vec![vec![1]]]);
            }
            other => panic!("{other:?}"),
        }

        let point = solve(&system(&z3(), &["x"], &["x = e"]), &z3(), &b).unwrap();
        assert!(is_irreducible(&point, &b).unwrap().is_irreducible());

        let empty = solve(&system(&n2(), &["x"], &["x = f(x)"]), &n2(), &b).unwrap();
        assert_eq!(is_irreducible(&empty, &b), Err(Error::EmptyVariety));
    }

    #[test]
    fn decomposition_examples() {
        let b = Budget::default();
        let line = solve(&system(&c01(), &["x"], &[]), &c01(), &b).unwrap();
        let parts = decompose(&line, &b).unwrap();
        let pts: Vec<_> = parts.iter().map(|p| p.points.clone()).collect();
        assert_eq!(pts, vec![vec![vec![0]], vec![vec![1]]]);
        for p in &parts {
            assert!(p.recheck(&b).unwrap());
        }

        let y = solve(&system(&s2(), &["x", "y"], &["meet(x, y) = x"]), &s2(), &b).unwrap();
        assert_eq!(decompose(&y, &b).unwrap().len(), 1);

        let plane = solve(&system(&c01(), &["x", "y"], &[]), &c01(), &b).unwrap();
        let parts = decompose(&plane, &b).unwrap();
        assert_eq!(parts.len(), 4);
        assert!(parts.iter().all(|p| p.points.len() == 1));
        let reverse = decompose_with(&plane, DecompositionOrder::Reverse, &b).unwrap();
        assert_eq!(
            parts.iter().map(|p| &p.points).collect::<Vec<_>>(),
            reverse.iter().map(|p| &p.points).collect::<Vec<_>>()
        );
    }
}
