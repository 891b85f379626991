//! Finite partial orders for index sets of direct systems.

use crate::error::{Error, Result};

/// A partial order on `0..n`, stored as its full `<=` relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    leq: Vec<bool>,
}

impl Poset {
    /// Reflexive-transitive closure of `pairs` (each `(i, j)` meaning `i <= j`).
    /// Fails if the closure is not antisymmetric.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::DirectSystem(format!("order pair ({i}, {j}) outside {n} indices")));
            }
            leq[i * n + j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::DirectSystem(format!("indices {i} and {j} are mutually below each other")));
                }
            }
        }
        Ok(Poset { n, leq })
    }

    /// The chain `0 <= 1 <= ... <= n-1`.
    pub fn chain(n: usize) -> Self {
        Poset::from_pairs(n, (1..n).map(|i| (i - 1, i))).expect("a chain is a partial order")
    }

    /// Order given by a predicate, assumed to be a partial order already.
    pub fn from_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                rel[i * n + j] = i == j || leq(i, j);
            }
        }
        Poset { n, leq: rel }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.n + j]
    }

    /// All pairs `i <= j`, row by row.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (0..self.n).filter(move |&j| self.leq(i, j)).map(move |j| (i, j)))
    }

    /// Covering pairs (the Hasse diagram).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.pairs()
            .filter(|&(i, j)| i != j && !(0..self.n).any(|k| k != i && k != j && self.leq(i, k) && self.leq(k, j)))
            .collect()
    }

    /// Least index above both, if any.
    pub fn upper_bound(&self, i: usize, j: usize) -> Option<usize> {
        (0..self.n).find(|&k| self.leq(i, k) && self.leq(j, k))
    }

    /// First pair of indices without a common upper bound.
    pub fn directedness_failure(&self) -> Option<(usize, usize)> {
        if self.n == 0 {
            return Some((0, 0));
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.upper_bound(i, j).is_none() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_directed(&self) -> bool {
        self.directedness_failure().is_none()
    }

    /// The greatest index. A finite directed poset always has one.
    pub fn maximum(&self) -> Option<usize> {
        (0..self.n).find(|&m| (0..self.n).all(|i| self.leq(i, m)))
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&m| (0..self.n).all(|j| j == m || !self.leq(m, j)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_maximal_elements_are_not_directed() {
        let p = Poset::from_pairs(3, [(0, 1), (0, 2)]).unwrap();
        assert!(!p.is_directed());
        assert_eq!(p.maximal(), vec![1, 2]);
        assert_eq!(p.maximum(), None);
        assert!(Poset::from_pairs(2, [(0, 1), (1, 0)]).is_err());
    }

    proptest! {
        #[test]
        fn finite_directed_orders_have_a_maximum(n in 1usize..7, raw in proptest::collection::vec((0usize..7, 0usize..7), 0..12)) {
            let pairs: Vec<_> = raw.into_iter().filter(|&(i, j)| i < n && j < n && i < j).collect();
            let p = Poset::from_pairs(n, pairs).unwrap();
            prop_assert_eq!(p.is_directed(), p.maximum().is_some());
        }
    }
}
