//! Algebraic sets over a finite algebra and their coordinate algebras.

mod closed;
mod irreducible;
mod trace;

use std::collections::BTreeSet;

use crate::algebra::FiniteAlgebra;
use crate::error::{Budget, Error, Result};
use crate::syntax::{AtomicFormula, Signature};

pub use closed::{closed_intersection, closed_union, ClosedSet};
pub use irreducible::{decompose, decompose_with, is_irreducible, Cut, DecompositionOrder, Irreducibility};
pub use trace::{coordinate_algebra, radical_member, trace_subalgebra, Coordinate, TraceSubalgebra};

/// A finite system of equations in the variables `vars`. Coefficient
/// leaves `@a` are allowed for `a < coefficient_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquationSystem {
    pub sig: Signature,
    pub vars: Vec<String>,
    pub equations: Vec<AtomicFormula>,
    pub coefficient_count: usize,
}

impl EquationSystem {
    pub fn new(sig: Signature, vars: Vec<String>, equations: Vec<AtomicFormula>) -> Result<Self> {
        EquationSystem::with_coefficients(sig, vars, equations, 0)
    }

    pub fn with_coefficients(
        sig: Signature,
        vars: Vec<String>,
        equations: Vec<AtomicFormula>,
        coefficient_count: usize,
    ) -> Result<Self> {
        for e in &equations {
            if e.negated {
                return Err(Error::Shape("a system contains equations only".into()));
            }
            if !e.fits(&sig, vars.len(), coefficient_count) {
                return Err(Error::ForeignVariable(format!(
                    "equation {} is not over the system's variables and signature",
                    e.display(&sig, &vars)
                )));
            }
        }
        Ok(EquationSystem {
            sig,
            vars,
            equations,
            coefficient_count,
        })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// `S ∪ {extra}`, skipping equations already present.
    pub fn extended(&self, extra: impl IntoIterator<Item = AtomicFormula>) -> EquationSystem {
        let mut out = self.clone();
        for e in extra {
            if !out.equations.contains(&e) {
                out.equations.push(e);
            }
        }
        out
    }

    pub fn union(&self, other: &EquationSystem) -> Result<EquationSystem> {
        if self.sig != other.sig || self.vars.len() != other.vars.len() {
            return Err(Error::Shape("systems over different variables or signatures".into()));
        }
        Ok(self.extended(other.equations.iter().cloned()))
    }
}

/// The solution set `V_B(S)`: every point of `B^n` satisfying `S`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicSet {
    pub algebra: FiniteAlgebra,
    pub system: EquationSystem,
    pub points: Vec<Vec<usize>>,
}

impl AlgebraicSet {
    pub fn n(&self) -> usize {
        self.system.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: &[usize]) -> bool {
        self.points.binary_search_by(|p| p.as_slice().cmp(point)).is_ok()
    }

    pub fn point_set(&self) -> BTreeSet<Vec<usize>> {
        self.points.iter().cloned().collect()
    }

    pub fn is_subset(&self, other: &AlgebraicSet) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    /// The same algebraic set restricted to `points` with a larger system;
    /// the caller guarantees the points solve it.
    pub(crate) fn restricted(&self, system: EquationSystem, points: Vec<Vec<usize>>) -> AlgebraicSet {
        AlgebraicSet {
            algebra: self.algebra.clone(),
            system,
            points,
        }
    }

    /// Re-solve the defining system and compare.
    pub fn recheck(&self, budget: &Budget) -> Result<bool> {
        Ok(solve(&self.system, &self.algebra, budget)?.points == self.points)
    }
}

pub(crate) fn compatible(system: &EquationSystem, b: &FiniteAlgebra) -> Result<()> {
    if &system.sig != b.signature() {
        return Err(Error::SignatureMismatch(format!("{} vs {}", system.sig, b.signature())));
    }
    if system.coefficient_count > b.coefficient_count() {
        return Err(Error::Coefficients(format!(
            "system uses {} coefficient constants, the algebra interprets {}",
            system.coefficient_count,
            b.coefficient_count()
        )));
    }
    Ok(())
}

/// Enumerate `B^n` lexicographically, rejecting a point at its first
/// failing equation.
pub fn solve(system: &EquationSystem, b: &FiniteAlgebra, budget: &Budget) -> Result<AlgebraicSet> {
    compatible(system, b)?;
    let n = system.vars.len();
    let space = (b.size() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let space = budget.check_universe("point space", space)?;
    let mut points = Vec::new();
    let mut point = vec![0; n];
    for _ in 0..space {
        if system
            .equations
            .iter()
            .all(|e| b.eval_fast(&e.lhs, &point) == b.eval_fast(&e.rhs, &point))
        {
            points.push(point.clone());
        }
        for slot in point.iter_mut().rev() {
            *slot += 1;
            if *slot < b.size() {
                break;
            }
            *slot = 0;
        }
    }
    Ok(AlgebraicSet {
        algebra: b.clone(),
        system: system.clone(),
        points,
    })
}

/// Least 1-based index from which the solution sets of the chain no longer
/// change.
pub fn noetherian_chain_probe(b: &FiniteAlgebra, systems: &[EquationSystem], budget: &Budget) -> Result<usize> {
    if systems.is_empty() {
        return Err(Error::Shape("an empty chain has no stabilization index".into()));
    }
    let sets: Vec<Vec<Vec<usize>>> = systems
        .iter()
        .map(|s| solve(s, b, budget).map(|y| y.points))
        .collect::<Result<_>>()?;
    let last = sets.last().unwrap();
    let mut index = sets.len();
    while index > 1 && &sets[index - 2] == last {
        index -= 1;
    }
    Ok(index)
}
