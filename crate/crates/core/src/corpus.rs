//! The named algebras and coefficient triples the acceptance suites run over.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::fixtures::{self, groupoid_signature, unary_signature};
use crate::algebra::{CoefficientStructure, FiniteAlgebra};
use crate::error::Result;

/// Default seed of the shipped manifest.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// A uniformly random binary operation on three elements.
pub fn random_groupoid(rng: &mut ChaCha8Rng) -> FiniteAlgebra {
    let table = (0..9).map(|_| rng.gen_range(0..3)).collect();
    FiniteAlgebra::new(groupoid_signature(), 3, vec![table], vec![]).expect("groupoid table")
}

/// `count` groupoids named `G0, G1, ...`, drawn from one seeded stream.
pub fn random_groupoids(seed: u64, count: usize) -> Vec<(String, FiniteAlgebra)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| (format!("G{i}"), random_groupoid(&mut rng))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub algebras: Vec<(String, FiniteAlgebra)>,
    /// How many trailing entries were drawn at random.
    pub random: usize,
}

impl Corpus {
    /// Named fixtures, the other two-element unary algebras, trivial unary
    /// and groupoid algebras, and ten random groupoids.
    pub fn standard(seed: u64) -> Corpus {
        let mut algebras: Vec<(String, FiniteAlgebra)> =
            fixtures::all().into_iter().map(|(n, a)| (n.to_string(), a)).collect();
        algebras.push(("E_unary".into(), FiniteAlgebra::trivial(&unary_signature())));
        // U10 is N2.
        algebras.extend(fixtures::all_unary2().into_iter().filter(|(n, _)| n != "U10"));
        algebras.push(("E_groupoid".into(), FiniteAlgebra::trivial(&groupoid_signature())));
        algebras.extend(random_groupoids(seed, 10));
        Corpus { algebras, random: 10 }
    }

    /// The hand-written members.
    pub fn fixtures(&self) -> &[(String, FiniteAlgebra)] {
        &self.algebras[..self.algebras.len() - self.random]
    }

    pub fn get(&self, name: &str) -> Option<&FiniteAlgebra> {
        self.algebras.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    /// Ordered pairs `(C, B)` over a shared signature, as indices.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.algebras.len();
        let mut out = Vec::new();
        for c in 0..n {
            for b in 0..n {
                if self.algebras[c].1.signature() == self.algebras[b].1.signature() {
                    out.push((c, b));
                }
            }
        }
        out
    }
}

/// `(A, C, B)` with `C` and `B` carrying coefficients from `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTriple {
    pub label: String,
    pub a: FiniteAlgebra,
    pub c: CoefficientStructure,
    pub b: CoefficientStructure,
}

impl CoefficientTriple {
    pub fn new(label: &str, a: FiniteAlgebra, c: (FiniteAlgebra, Vec<usize>), b: (FiniteAlgebra, Vec<usize>)) -> Result<Self> {
        Ok(CoefficientTriple {
            label: label.to_string(),
            c: CoefficientStructure::new(a.clone(), c.0, c.1)?,
            b: CoefficientStructure::new(a.clone(), b.0, b.1)?,
            a,
        })
    }

    /// `B` is `A` with the identity embedding.
    pub fn b_is_a(&self) -> bool {
        self.b.algebra.without_coefficients() == self.a && self.b.lambda().iter().enumerate().all(|(i, &m)| i == m)
    }
}

/// Coefficient triples over groups, semilattices and constants, several
/// with `B = A`.
pub fn coefficient_triples() -> Result<Vec<CoefficientTriple>> {
    use fixtures::{c01, cyclic, s2, v4, z2, z3, z4};
    let e_group = FiniteAlgebra::trivial(&fixtures::group_signature());
    let e_meet = FiniteAlgebra::trivial(&fixtures::meet_signature());
    let id = |n: usize| (0..n).collect::<Vec<_>>();
    Ok(vec![
        CoefficientTriple::new("Z2;Z2;Z2", z2(), (z2(), id(2)), (z2(), id(2)))?,
        CoefficientTriple::new("Z2;Z4;Z4", z2(), (z4(), vec![0, 2]), (z4(), vec![0, 2]))?,
        CoefficientTriple::new("Z2;V4;Z2", z2(), (v4(), vec![0, 1]), (z2(), id(2)))?,
        CoefficientTriple::new("Z2;Z4;Z2", z2(), (z4(), vec![0, 2]), (z2(), id(2)))?,
        CoefficientTriple::new("Z2;Z2;Z4", z2(), (z2(), id(2)), (z4(), vec![0, 2]))?,
        CoefficientTriple::new("Z2;V4;V4", z2(), (v4(), vec![0, 2]), (v4(), vec![0, 1]))?,
        CoefficientTriple::new("Z2;Z2;V4", z2(), (z2(), id(2)), (v4(), vec![0, 3]))?,
        CoefficientTriple::new("Z3;Z3;Z3", z3(), (z3(), vec![0, 2, 1]), (z3(), id(3)))?,
        CoefficientTriple::new("Z4;Z4;Z4", z4(), (cyclic(4), vec![0, 3, 2, 1]), (z4(), id(4)))?,
        CoefficientTriple::new("S2;S2;S2", s2(), (s2(), id(2)), (s2(), id(2)))?,
        CoefficientTriple::new("C01;C01;C01", c01(), (c01(), id(2)), (c01(), id(2)))?,
        CoefficientTriple::new("E;S2;S2 (0 vs 1)", e_meet.clone(), (s2(), vec![0]), (s2(), vec![1]))?,
        CoefficientTriple::new("E;S2;S2", e_meet, (s2(), vec![1]), (s2(), vec![1]))?,
        CoefficientTriple::new("E;Z4;Z2", e_group.clone(), (z4(), vec![0]), (z2(), vec![0]))?,
        CoefficientTriple::new("E;Z2;Z4", e_group, (z2(), vec![0]), (z4(), vec![0]))?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let c = Corpus::standard(DEFAULT_SEED);
        assert_eq!(c.algebras.len(), 10 + 1 + 3 + 1 + 10);
        assert!(c.pairs().len() >= 40);
        assert_eq!(Corpus::standard(DEFAULT_SEED), c);
        assert_ne!(Corpus::standard(DEFAULT_SEED + 1), c);
        let names: std::collections::BTreeSet<&str> = c.algebras.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names.len(), c.algebras.len());
    }

    #[test]
    fn triples_are_valid() {
        let t = coefficient_triples().unwrap();
        assert!(t.len() >= 10);
        assert!(t.iter().filter(|t| t.b_is_a()).count() >= 5);
    }
}
