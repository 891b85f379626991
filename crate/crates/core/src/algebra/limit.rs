use std::collections::BTreeMap;

use super::{FiniteAlgebra, Homomorphism};
use crate::error::{Budget, Error, Result};
use crate::order::Poset;

/// Algebras `M_i` over a finite directed poset with maps `h_ij: M_i -> M_j`
/// for `i <= j`. Missing `h_ii` are read as identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDirectSystem {
    pub order: Poset,
    pub algebras: Vec<FiniteAlgebra>,
    pub homs: BTreeMap<(usize, usize), Homomorphism>,
}

impl AlgebraDirectSystem {
    /// A chain `M_0 -> M_1 -> ...` from consecutive maps; longer maps are
    /// composed.
    pub fn chain(algebras: Vec<FiniteAlgebra>, steps: Vec<Homomorphism>) -> Result<Self> {
        if steps.len() + 1 != algebras.len() {
            return Err(Error::DirectSystem("a chain of n algebras needs n-1 maps".into()));
        }
        let n = algebras.len();
        let mut homs = BTreeMap::new();
        for i in 0..n {
            let mut h = Homomorphism::identity(algebras[i].size());
            homs.insert((i, i), h.clone());
            for (j, step) in steps.iter().enumerate().skip(i) {
                h = h.then(step);
                homs.insert((i, j + 1), h.clone());
            }
        }
        Ok(AlgebraDirectSystem {
            order: Poset::chain(n),
            algebras,
            homs,
        })
    }

    fn hom(&self, i: usize, j: usize) -> Option<Homomorphism> {
        match self.homs.get(&(i, j)) {
            Some(h) => Some(h.clone()),
            None if i == j => Some(Homomorphism::identity(self.algebras[i].size())),
            None => None,
        }
    }

    /// Directedness, maps present and homomorphic, identities, cocycle.
    pub fn validate(&self) -> Result<()> {
        let n = self.order.len();
        if n == 0 || self.algebras.len() != n {
            return Err(Error::DirectSystem(format!(
                "{} algebras for {} indices",
                self.algebras.len(),
                n
            )));
        }
        if let Some((i, j)) = self.order.directedness_failure() {
            return Err(Error::DirectSystem(format!("indices {i} and {j} have no upper bound")));
        }
        for a in &self.algebras {
            self.algebras[0].same_signature(a)?;
        }
        for (i, j) in self.order.pairs() {
            let h = self
                .hom(i, j)
                .ok_or_else(|| Error::DirectSystem(format!("map h_{i}{j} is missing")))?;
            if !h.is_homomorphism(&self.algebras[i], &self.algebras[j], false) {
                return Err(Error::DirectSystem(format!("h_{i}{j} is not a homomorphism")));
            }
            if i == j && h != Homomorphism::identity(self.algebras[i].size()) {
                return Err(Error::DirectSystem(format!("h_{i}{i} is not the identity")));
            }
        }
        for (i, j) in self.order.pairs() {
            for k in 0..n {
                if self.order.leq(j, k) {
                    let via = self.hom(i, j).unwrap().then(&self.hom(j, k).unwrap());
                    if via != self.hom(i, k).unwrap() {
                        return Err(Error::DirectSystem(format!("h_{j}{k} ∘ h_{i}{j} differs from h_{i}{k}")));
                    }
                }
            }
        }
        if self.homs.keys().any(|&(i, j)| i >= n || j >= n || !self.order.leq(i, j)) {
            return Err(Error::DirectSystem("a map is given for an unordered pair".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectLimit {
    pub algebra: FiniteAlgebra,
    /// `class_of[i][m]` is the class of `(m, i)`.
    pub class_of: Vec<Vec<usize>>,
    /// The greatest index, when there is one.
    pub top: Option<usize>,
}

/// The disjoint union of the `M_i` modulo
/// `(m, i) ≡ (m', j) ⟺ h_ik(m) = h_jk(m')` for some `k >= i, j`.
pub fn direct_limit_algebras(system: &AlgebraDirectSystem, budget: &Budget) -> Result<DirectLimit> {
    system.validate()?;
    let n = system.order.len();
    let offsets: Vec<usize> = system
        .algebras
        .iter()
        .scan(0, |acc, a| {
            let o = *acc;
            *acc += a.size();
            Some(o)
        })
        .collect();
    let total: usize = system.algebras.iter().map(FiniteAlgebra::size).sum();
    budget.check_universe("direct limit", total as u128)?;

    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, k) in system.order.pairs() {
        let h = system.hom(i, k).unwrap();
        for m in 0..system.algebras[i].size() {
            let a = find(&mut parent, offsets[i] + m);
            let b = find(&mut parent, offsets[k] + h.apply(m));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut class_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reps: Vec<(usize, usize)> = Vec::new();
    let mut class_of: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(system.algebras[i].size());
        for m in 0..system.algebras[i].size() {
            let root = find(&mut parent, offsets[i] + m);
            let next = class_index.len();
            let c = *class_index.entry(root).or_insert_with(|| {
                reps.push((i, m));
                next
            });
            row.push(c);
        }
        class_of.push(row);
    }

    let sig = system.algebras[0].signature().clone();
    let apply = |f: usize, args: &[usize]| -> usize {
        let mut k = reps[args[0]].0;
        for &a in &args[1..] {
            k = system.order.upper_bound(k, reps[a].0).expect("directed");
        }
        let lifted: Vec<usize> = args
            .iter()
            .map(|&a| {
                let (i, m) = reps[a];
                system.hom(i, k).unwrap().apply(m)
            })
            .collect();
        class_of[k][system.algebras[k].apply(f, &lifted)]
    };
    let algebra = FiniteAlgebra::from_fn(
        sig.clone(),
        reps.len(),
        apply,
        (0..sig.constant_count())
            .map(|c| class_of[0][system.algebras[0].constant(c)])
            .collect(),
    )?;
    Ok(DirectLimit {
        algebra,
        class_of,
        top: system.order.maximum(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::find_isomorphism;
    use super::*;

    #[test]
    fn chains() {
        let b = Budget::default();
        let ids = AlgebraDirectSystem::chain(
            vec![z2(), z2(), z2()],
            vec![Homomorphism::identity(2), Homomorphism::identity(2)],
        )
        .unwrap();
        let lim = direct_limit_algebras(&ids, &b).unwrap();
        assert!(find_isomorphism(&lim.algebra, &z2()).unwrap().is_some());

        let reduce = AlgebraDirectSystem::chain(
            vec![z4(), z2(), z2()],
            vec![Homomorphism::new(vec![0, 1, 0, 1]), Homomorphism::identity(2)],
        )
        .unwrap();
        let lim = direct_limit_algebras(&reduce, &b).unwrap();
        assert_eq!(lim.top, Some(2));
        assert!(find_isomorphism(&lim.algebra, &z2()).unwrap().is_some());
        assert_eq!(lim.class_of[0], vec![0, 1, 0, 1]);

        let single = AlgebraDirectSystem::chain(vec![v4()], vec![]).unwrap();
        assert!(find_isomorphism(&direct_limit_algebras(&single, &b).unwrap().algebra, &v4())
            .unwrap()
            .is_some());
    }

    #[test]
    fn broken_cocycle_is_rejected() {
        let mut sys = AlgebraDirectSystem::chain(
            vec![z2(), z2(), z2()],
            vec![Homomorphism::identity(2), Homomorphism::identity(2)],
        )
        .unwrap();
        sys.homs.insert((0, 2), Homomorphism::new(vec![0, 0]));
        assert!(matches!(direct_limit_algebras(&sys, &Budget::default()), Err(Error::DirectSystem(_))));
    }
}
