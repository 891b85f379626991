use std::collections::BTreeMap;

use super::{FiniteAlgebra, Homomorphism};
use crate::error::{Error, Result};
use crate::syntax::tuples;

/// A partition of `0..n`; `labels[m]` is the least member of the class of `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    labels: Vec<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut least: BTreeMap<usize, usize> = BTreeMap::new();
        for m in 0..n {
            let r = self.find(m);
            least.entry(r).or_insert(m);
        }
        (0..n).map(|m| least[&self.find(m)]).collect()
    }
}

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Congruence { labels: (0..n).collect() }
    }

    pub fn total(n: usize) -> Self {
        Congruence { labels: vec![0; n] }
    }

    /// From any class labelling (`m ~ m'` iff equal labels); not checked
    /// for compatibility.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut first: BTreeMap<usize, usize> = BTreeMap::new();
        let labels = labels
            .iter()
            .enumerate()
            .map(|(m, l)| *first.entry(*l).or_insert(m))
            .collect();
        Congruence { labels }
    }

    /// The partition with the given classes, checked to be a congruence of `alg`.
    pub fn from_classes(alg: &FiniteAlgebra, classes: &[Vec<usize>]) -> Result<Self> {
        let n = alg.size();
        let mut label = vec![usize::MAX; n];
        for (i, class) in classes.iter().enumerate() {
            for &m in class {
                if m >= n || label[m] != usize::MAX {
                    return Err(Error::NotCongruence(format!("element {m} is out of range or listed twice")));
                }
                label[m] = i;
            }
        }
        if let Some(m) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::NotCongruence(format!("element {m} is in no class")));
        }
        let theta = Congruence::from_labels(&label);
        theta.check(alg)?;
        Ok(theta)
    }

    /// Least congruence containing the given pairs.
    pub fn generated(alg: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Self {
        let mut uf = UnionFind::new(alg.size());
        for &(a, b) in pairs {
            uf.union(a, b);
        }
        close(alg, &mut uf);
        Congruence { labels: uf.labels() }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_of(&self, m: usize) -> usize {
        self.labels[m]
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    /// Classes ordered by least member, members increasing.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (m, &l) in self.labels.iter().enumerate() {
            by_label.entry(l).or_default().push(m);
        }
        by_label.into_values().collect()
    }

    pub fn class_count(&self) -> usize {
        self.labels.iter().enumerate().filter(|(m, &l)| *m == l).count()
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().enumerate().all(|(m, &l)| m == l)
    }

    pub fn is_total(&self) -> bool {
        self.labels.iter().all(|&l| l == 0)
    }

    /// `self ⊆ other` as relations.
    pub fn is_below(&self, other: &Congruence) -> bool {
        (0..self.len()).all(|m| other.related(m, self.labels[m]))
    }

    /// Compatibility with every operation of `alg`.
    pub fn check(&self, alg: &FiniteAlgebra) -> Result<()> {
        if self.len() != alg.size() {
            return Err(Error::NotCongruence(format!(
                "partition of {} elements for an algebra of size {}",
                self.len(),
                alg.size()
            )));
        }
        let sig = alg.signature();
        for f in 0..sig.function_count() {
            for args in tuples(alg.size(), sig.arity(f)) {
                for p in 0..args.len() {
                    let mut moved = args.clone();
                    moved[p] = self.labels[args[p]];
                    if !self.related(alg.apply(f, &args), alg.apply(f, &moved)) {
                        return Err(Error::NotCongruence(format!(
                            "`{}` maps related tuples {:?} and {:?} to unrelated values",
                            sig.function_name(f),
                            args,
                            moved
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn meet(&self, other: &Congruence) -> Result<Congruence> {
        self.same_size(other)?;
        let keys: Vec<(usize, usize)> = (0..self.len()).map(|m| (self.labels[m], other.labels[m])).collect();
        let mut first: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let labels = keys.iter().enumerate().map(|(m, k)| *first.entry(*k).or_insert(m)).collect();
        Ok(Congruence { labels })
    }

    /// Least congruence of `alg` above both.
    pub fn join(&self, other: &Congruence, alg: &FiniteAlgebra) -> Result<Congruence> {
        self.same_size(other)?;
        if self.len() != alg.size() {
            return Err(Error::NotCongruence("partition size differs from the algebra".into()));
        }
        let mut uf = UnionFind::new(self.len());
        for m in 0..self.len() {
            uf.union(m, self.labels[m]);
            uf.union(m, other.labels[m]);
        }
        close(alg, &mut uf);
        Ok(Congruence { labels: uf.labels() })
    }

    fn same_size(&self, other: &Congruence) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::NotCongruence(format!(
                "partitions of {} and {} elements",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }
}

/// Close a union-find partition under compatibility with every operation.
/// Moving one argument to its class root at a time suffices, since the
/// remaining cases follow by transitivity.
fn close(alg: &FiniteAlgebra, uf: &mut UnionFind) {
    let sig = alg.signature();
    loop {
        let mut changed = false;
        for f in 0..sig.function_count() {
            for args in tuples(alg.size(), sig.arity(f)) {
                for p in 0..args.len() {
                    let root = uf.find(args[p]);
                    if root == args[p] {
                        continue;
                    }
                    let mut moved = args.clone();
                    moved[p] = root;
                    changed |= uf.union(alg.apply(f, &args), alg.apply(f, &moved));
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// A quotient algebra with its canonical epimorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub algebra: FiniteAlgebra,
    /// `m ↦ m/θ`, classes numbered by increasing least member.
    pub projection: Homomorphism,
}

/// `alg / theta`.
pub fn quotient(alg: &FiniteAlgebra, theta: &Congruence) -> Result<Quotient> {
    theta.check(alg)?;
    let reps: Vec<usize> = (0..alg.size()).filter(|&m| theta.class_of(m) == m).collect();
    let mut index = vec![0; alg.size()];
    for m in 0..alg.size() {
        index[m] = reps.binary_search(&theta.class_of(m)).expect("label is a representative");
    }
    let algebra = FiniteAlgebra::from_fn(
        alg.signature().clone(),
        reps.len(),
        |f, args| {
            let lifted: Vec<usize> = args.iter().map(|&a| reps[a]).collect();
            index[alg.apply(f, &lifted)]
        },
        alg.constants().iter().map(|&c| index[c]).collect(),
    )?
    .with_coefficients(alg.coefficients().iter().map(|&c| index[c]).collect())?;
    Ok(Quotient {
        algebra,
        projection: Homomorphism::new(index),
    })
}

/// The partition of the domain of `h` into fibers.
pub fn kernel(h: &Homomorphism) -> Congruence {
    Congruence::from_labels(&h.map)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{direct_product, enumerate_homomorphisms, find_isomorphism, HomMode};
    use super::*;
    use crate::Budget;

    #[test]
    fn z4_mod_two() {
        let theta = Congruence::from_classes(&z4(), &[vec![0, 2], vec![1, 3]]).unwrap();
        let q = quotient(&z4(), &theta).unwrap();
        assert!(find_isomorphism(&q.algebra, &z2()).unwrap().is_some());
        assert_eq!(q.projection.map, vec![0, 1, 0, 1]);
        assert_eq!(kernel(&Homomorphism::new(vec![0, 1, 0, 1])), theta);
        assert!(Congruence::from_classes(&z4(), &[vec![0, 1], vec![2, 3]]).is_err());
    }

    #[test]
    fn trivial_quotients() {
        let id = quotient(&z4(), &Congruence::identity(4)).unwrap();
        assert!(find_isomorphism(&id.algebra, &z4()).unwrap().is_some());
        let total = quotient(&z4(), &Congruence::total(4)).unwrap();
        assert!(total.algebra.is_trivial());
        assert!(kernel(&Homomorphism::identity(3)).is_identity());
        assert!(kernel(&Homomorphism::new(vec![0, 0])).is_total());
    }

    #[test]
    fn lattice_operations() {
        let theta = Congruence::from_classes(&z4(), &[vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(theta.meet(&Congruence::identity(4)).unwrap(), Congruence::identity(4));
        assert_eq!(theta.join(&Congruence::total(4), &z4()).unwrap(), Congruence::total(4));

        let v = direct_product(&[z2(), z2()], &Budget::default()).unwrap();
        let k0 = kernel(&v.projections[0]);
        let k1 = kernel(&v.projections[1]);
        assert!(k0.join(&k1, &v.algebra).unwrap().is_total());
        assert!(k0.meet(&k1).unwrap().is_identity());
    }

    #[test]
    fn join_needs_compatibility_closure() {
        // In Z4, identifying 0 and 1 forces everything together.
        let a = Congruence::from_labels(&[0, 0, 2, 3]);
        let j = a.join(&Congruence::identity(4), &z4()).unwrap();
        assert!(j.is_total());
        for h in enumerate_homomorphisms(&z4(), &z2(), HomMode::All).unwrap() {
            assert!(kernel(&h).check(&z4()).is_ok());
        }
    }
}
