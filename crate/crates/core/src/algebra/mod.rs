//! Finite algebras given by operation tables.

mod coefficients;
mod congruence;
pub mod fixtures;
mod hom;
mod limit;
mod product;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{tuples, Signature, Term};

pub use coefficients::{a_algebra_quasi_identities, core_diagram, is_a_algebra, ACheck, CoefficientStructure};
pub use congruence::{kernel, quotient, Congruence, Quotient};
pub use hom::{enumerate_homomorphisms, find_isomorphism, first_homomorphism, HomMode, Homomorphism};
pub(crate) use hom::search as search_homomorphisms;
pub use limit::{direct_limit_algebras, AlgebraDirectSystem, DirectLimit};
pub use product::{direct_product, filterproduct, is_subdirect, Filter, Filterproduct, Product};

/// A finite algebra on `{0, .., size-1}`.
///
/// Each function symbol `F` of arity `n` has a table of `size^n` entries in
/// row-major order: the value at `(a_1, .., a_n)` sits at
/// `a_1 * size^(n-1) + .. + a_n`. `coefficients[a]` interprets the
/// coefficient constant `c_a`; it is empty for plain algebras.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    sig: Signature,
    size: usize,
    tables: Vec<Vec<usize>>,
    constants: Vec<usize>,
    coefficients: Vec<usize>,
}

impl FiniteAlgebra {
    pub fn new(sig: Signature, size: usize, tables: Vec<Vec<usize>>, constants: Vec<usize>) -> Result<Self> {
        if size == 0 {
            return Err(Error::Algebra("the universe must be nonempty".into()));
        }
        if tables.len() != sig.function_count() {
            return Err(Error::Algebra(format!(
                "{} tables given for {} function symbols",
                tables.len(),
                sig.function_count()
            )));
        }
        for (f, table) in tables.iter().enumerate() {
            let expected = (size as u128).checked_pow(sig.arity(f) as u32);
            if expected != Some(table.len() as u128) {
                return Err(Error::Algebra(format!(
                    "table of `{}` has {} entries, expected {}^{}",
                    sig.function_name(f),
                    table.len(),
                    size,
                    sig.arity(f)
                )));
            }
            if let Some(v) = table.iter().find(|&&v| v >= size) {
                return Err(Error::Algebra(format!(
                    "table of `{}` contains {v}, outside the universe",
                    sig.function_name(f)
                )));
            }
        }
        if constants.len() != sig.constant_count() {
            return Err(Error::Algebra(format!(
                "{} constant values given for {} constants",
                constants.len(),
                sig.constant_count()
            )));
        }
        if let Some(v) = constants.iter().find(|&&v| v >= size) {
            return Err(Error::Algebra(format!("constant value {v} outside the universe")));
        }
        Ok(FiniteAlgebra {
            sig,
            size,
            tables,
            constants,
            coefficients: Vec::new(),
        })
    }

    /// Build from an operation function; used for fixtures and products.
    pub fn from_fn(
        sig: Signature,
        size: usize,
        op: impl Fn(usize, &[usize]) -> usize,
        constants: Vec<usize>,
    ) -> Result<Self> {
        let tables = (0..sig.function_count())
            .map(|f| tuples(size, sig.arity(f)).map(|args| op(f, &args)).collect())
            .collect();
        FiniteAlgebra::new(sig, size, tables, constants)
    }

    /// The one-element algebra over `sig`.
    pub fn trivial(sig: &Signature) -> Self {
        FiniteAlgebra::from_fn(sig.clone(), 1, |_, _| 0, vec![0; sig.constant_count()]).expect("trivial algebra")
    }

    /// Attach interpretations of coefficient constants.
    pub fn with_coefficients(mut self, coefficients: Vec<usize>) -> Result<Self> {
        if let Some(v) = coefficients.iter().find(|&&v| v >= self.size) {
            return Err(Error::Coefficients(format!("coefficient value {v} outside the universe")));
        }
        self.coefficients = coefficients;
        Ok(self)
    }

    /// The same algebra with coefficients dropped.
    pub fn without_coefficients(&self) -> Self {
        FiniteAlgebra {
            coefficients: Vec::new(),
            ..self.clone()
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    pub fn table(&self, f: usize) -> &[usize] {
        &self.tables[f]
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn constant(&self, c: usize) -> usize {
        self.constants[c]
    }

    pub fn constants(&self) -> &[usize] {
        &self.constants
    }

    pub fn coefficients(&self) -> &[usize] {
        &self.coefficients
    }

    pub fn coefficient_count(&self) -> usize {
        self.coefficients.len()
    }

    /// Row-major position of an argument tuple.
    pub fn index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    pub fn apply(&self, f: usize, args: &[usize]) -> usize {
        self.tables[f][self.index(args)]
    }

    /// `t^B(point)`, where `point[x]` is the value of variable `x`.
    pub fn eval(&self, t: &Term, point: &[usize]) -> Result<usize> {
        match t {
            Term::Var(v) => point
                .get(*v)
                .copied()
                .ok_or_else(|| Error::MissingAssignment(format!("#{v}"))),
            Term::Const(c) => self
                .constants
                .get(*c)
                .copied()
                .ok_or_else(|| Error::SignatureMismatch(format!("constant #{c} is not interpreted"))),
            Term::Coef(a) => self
                .coefficients
                .get(*a)
                .copied()
                .ok_or_else(|| Error::Coefficients(format!("coefficient @{a} is not interpreted"))),
            Term::App(f, args) => {
                if *f >= self.tables.len() || self.sig.arity(*f) != args.len() {
                    return Err(Error::SignatureMismatch(format!("function #{f} does not fit the algebra")));
                }
                let mut idx = 0;
                for a in args {
                    idx = idx * self.size + self.eval(a, point)?;
                }
                Ok(self.tables[*f][idx])
            }
        }
    }

    /// Evaluation for terms already known to fit the algebra and the point.
    pub(crate) fn eval_fast(&self, t: &Term, point: &[usize]) -> usize {
        match t {
            Term::Var(v) => point[*v],
            Term::Const(c) => self.constants[*c],
            Term::Coef(a) => self.coefficients[*a],
            Term::App(f, args) => {
                let idx = args.iter().fold(0, |acc, a| acc * self.size + self.eval_fast(a, point));
                self.tables[*f][idx]
            }
        }
    }

    /// Whether `t` can be evaluated here with `var_count` variables.
    pub fn fits(&self, t: &Term, var_count: usize) -> bool {
        t.fits(&self.sig, var_count, self.coefficients.len())
    }

    /// Least subuniverse containing `seed` and the constants, with a term
    /// over the seed for every element. Variable `i` of a witness is
    /// `seed[i]` (seed taken sorted and deduplicated).
    pub fn generated_subalgebra(&self, seed: &[usize]) -> Result<Generated> {
        self.generate(seed, false)
    }

    /// As [`FiniteAlgebra::generated_subalgebra`], also closing under the
    /// coefficient constants.
    pub fn generated_a_subalgebra(&self, seed: &[usize]) -> Result<Generated> {
        self.generate(seed, true)
    }

    fn generate(&self, seed: &[usize], with_coefficients: bool) -> Result<Generated> {
        let mut seed: Vec<usize> = seed.to_vec();
        seed.sort_unstable();
        seed.dedup();
        if let Some(&m) = seed.iter().find(|&&m| m >= self.size) {
            return Err(Error::Algebra(format!("seed element {m} outside the universe")));
        }
        let mut witness: BTreeMap<usize, Term> = BTreeMap::new();
        for (i, &m) in seed.iter().enumerate() {
            witness.insert(m, Term::Var(i));
        }
        let mut named: Vec<(usize, Term)> = (0..self.constants.len())
            .map(|c| (self.constants[c], Term::Const(c)))
            .collect();
        if with_coefficients {
            named.extend(self.coefficients.iter().enumerate().map(|(a, &m)| (m, Term::Coef(a))));
        }
        if witness.is_empty() {
            if named.is_empty() {
                return Err(Error::EmptyUniverse);
            }
            for (m, t) in &named {
                witness.entry(*m).or_insert_with(|| t.clone());
            }
        }
        let mut named_added = false;
        loop {
            let current: Vec<usize> = witness.keys().copied().collect();
            let mut fresh: BTreeMap<usize, Term> = BTreeMap::new();
            for f in 0..self.sig.function_count() {
                let n = self.sig.arity(f);
                for pos in tuples(current.len(), n) {
                    let args: Vec<usize> = pos.iter().map(|&p| current[p]).collect();
                    let v = self.apply(f, &args);
                    if !witness.contains_key(&v) && !fresh.contains_key(&v) {
                        let t = Term::App(f, args.iter().map(|a| witness[a].clone()).collect());
                        fresh.insert(v, t);
                    }
                }
            }
            if fresh.is_empty() {
                if named_added {
                    break;
                }
                named_added = true;
                for (m, t) in &named {
                    if !witness.contains_key(m) {
                        fresh.insert(*m, t.clone());
                    }
                }
                if fresh.is_empty() {
                    break;
                }
            }
            witness.extend(fresh);
        }
        Ok(Generated {
            universe: witness.keys().copied().collect(),
            witness,
        })
    }

    /// Whether `subset` is closed under every operation and contains the
    /// constants; the first escaping application is reported otherwise.
    pub fn closure_failure(&self, subset: &[usize]) -> Option<String> {
        let mut member = vec![false; self.size];
        subset.iter().for_each(|&m| member[m] = true);
        for (c, &v) in self.constants.iter().enumerate() {
            if !member[v] {
                return Some(format!("constant `{}` = {v} is missing", self.sig.constant_name(c)));
            }
        }
        for f in 0..self.sig.function_count() {
            for pos in tuples(subset.len(), self.sig.arity(f)) {
                let args: Vec<usize> = pos.iter().map(|&p| subset[p]).collect();
                let v = self.apply(f, &args);
                if !member[v] {
                    return Some(format!("{}{:?} = {v} escapes", self.sig.function_name(f), args));
                }
            }
        }
        None
    }

    /// The subalgebra on a closed subset, relabeled in increasing order,
    /// with its inclusion map.
    pub fn subalgebra(&self, subset: &[usize]) -> Result<(FiniteAlgebra, Homomorphism)> {
        let mut elems = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if let Some(why) = self.closure_failure(&elems) {
            return Err(Error::NotClosed(why));
        }
        let mut relabel = vec![usize::MAX; self.size];
        elems.iter().enumerate().for_each(|(i, &m)| relabel[m] = i);
        let sub = FiniteAlgebra::from_fn(
            self.sig.clone(),
            elems.len(),
            |f, args| {
                let outer: Vec<usize> = args.iter().map(|&a| elems[a]).collect();
                relabel[self.apply(f, &outer)]
            },
            self.constants.iter().map(|&c| relabel[c]).collect(),
        )?;
        let sub = if self.coefficients.iter().all(|&c| relabel[c] != usize::MAX) {
            sub.with_coefficients(self.coefficients.iter().map(|&c| relabel[c]).collect())?
        } else {
            sub
        };
        Ok((sub, Homomorphism::new(elems)))
    }

    /// `self` viewed in a sub-signature (tables of the kept symbols only).
    pub fn reduct(&self, functions: &[usize], constants: &[usize]) -> FiniteAlgebra {
        let sig = self
            .sig
            .restrict(&functions.iter().copied().collect(), &constants.iter().copied().collect());
        FiniteAlgebra {
            sig,
            size: self.size,
            tables: functions.iter().map(|&f| self.tables[f].clone()).collect(),
            constants: constants.iter().map(|&c| self.constants[c]).collect(),
            coefficients: self.coefficients.clone(),
        }
    }

    pub(crate) fn same_signature(&self, other: &FiniteAlgebra) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(format!("{} vs {}", self.sig, other.sig)));
        }
        Ok(())
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra of size {} over {}", self.size, self.sig)?;
        for (s, table) in self.tables.iter().enumerate() {
            writeln!(f, "  {} = {:?}", self.sig.function_name(s), table)?;
        }
        for (c, v) in self.constants.iter().enumerate() {
            writeln!(f, "  {} = {v}", self.sig.constant_name(c))?;
        }
        if !self.coefficients.is_empty() {
            writeln!(f, "  coefficients = {:?}", self.coefficients)?;
        }
        Ok(())
    }
}

/// Output of subalgebra generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    /// Sorted subuniverse.
    pub universe: Vec<usize>,
    /// A term over the seed variables evaluating to each element.
    pub witness: BTreeMap<usize, Term>,
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::syntax::parse_term;

    #[test]
    fn meet_evaluation_by_hand() {
        let s2 = s2();
        let vars = vec!["x".to_string(), "y".to_string()];
        let t = parse_term("meet(x, meet(y, x))", s2.signature(), &vars).unwrap();
        assert_eq!(s2.eval(&t, &[1, 0]).unwrap(), 1.min(0.min(1)));
        assert!(matches!(s2.eval(&t, &[1]), Err(Error::MissingAssignment(_))));
        let z2 = z2();
        assert_eq!(z2.eval(&Term::Const(0), &[]).unwrap(), 0);
        assert_eq!(z2.eval(&Term::Var(0), &[1]).unwrap(), 1);
    }

    #[test]
    fn generated_subalgebras() {
        let g = z4().generated_subalgebra(&[2]).unwrap();
        assert_eq!(g.universe, vec![0, 2]);
        let sig = z4().signature().clone();
        assert_eq!(g.witness[&0].display(&sig, &["x".into()]).to_string(), "mul(x, x)");
        assert_eq!(s2().generated_subalgebra(&[0, 1]).unwrap().universe, vec![0, 1]);
        assert_eq!(z2().generated_subalgebra(&[]).unwrap().universe, vec![0]);
        assert_eq!(s2().generated_subalgebra(&[]), Err(Error::EmptyUniverse));
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let sig = Signature::build(&[("f", 1)], &[]).unwrap();
        assert!(FiniteAlgebra::new(sig.clone(), 2, vec![vec![0, 2]], vec![]).is_err());
        assert!(FiniteAlgebra::new(sig.clone(), 2, vec![vec![0]], vec![]).is_err());
        assert!(FiniteAlgebra::new(sig, 0, vec![vec![]], vec![]).is_err());
    }

    #[test]
    fn subalgebra_on_closed_subset() {
        let (sub, inc) = z4().subalgebra(&[0, 2]).unwrap();
        assert_eq!(sub.size(), 2);
        assert!(find_isomorphism(&sub, &z2()).unwrap().is_some());
        assert_eq!(inc.map, vec![0, 2]);
        assert!(matches!(z4().subalgebra(&[0, 1]), Err(Error::NotClosed(_))));
    }
}
