use super::{quotient, Congruence, FiniteAlgebra, Homomorphism};
use crate::error::{Budget, Error, Result};

/// A direct product with its projections. Element tuples are numbered
/// row-major: the last coordinate varies fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    pub algebra: FiniteAlgebra,
    pub projections: Vec<Homomorphism>,
    pub sizes: Vec<usize>,
}

impl Product {
    pub fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.sizes).fold(0, |acc, (&a, &k)| acc * k + a)
    }

    pub fn decode(&self, mut m: usize) -> Vec<usize> {
        let mut t = vec![0; self.sizes.len()];
        for (slot, &k) in t.iter_mut().zip(&self.sizes).rev() {
            *slot = m % k;
            m /= k;
        }
        t
    }
}

/// `∏ factors`, operations coordinate-wise. Coefficients, when every
/// factor has the same number of them, are taken coordinate-wise too.
pub fn direct_product(factors: &[FiniteAlgebra], budget: &Budget) -> Result<Product> {
    let first = factors
        .first()
        .ok_or_else(|| Error::Algebra("a direct product needs at least one factor".into()))?;
    for f in factors {
        first.same_signature(f)?;
    }
    let coefs = first.coefficient_count();
    if factors.iter().any(|f| f.coefficient_count() != coefs) {
        return Err(Error::Coefficients("factors carry different coefficient counts".into()));
    }
    let total = factors.iter().try_fold(1u128, |acc, f| acc.checked_mul(f.size() as u128)).unwrap_or(u128::MAX);
    let size = budget.check_universe("direct product", total)?;
    let sizes: Vec<usize> = factors.iter().map(FiniteAlgebra::size).collect();
    let shell = Product {
        algebra: FiniteAlgebra::trivial(first.signature()),
        projections: Vec::new(),
        sizes: sizes.clone(),
    };
    let decoded: Vec<Vec<usize>> = (0..size).map(|m| shell.decode(m)).collect();
    let sig = first.signature().clone();
    let algebra = FiniteAlgebra::from_fn(
        sig.clone(),
        size,
        |f, args| {
            let tuple: Vec<usize> = (0..factors.len())
                .map(|j| {
                    let coords: Vec<usize> = args.iter().map(|&a| decoded[a][j]).collect();
                    factors[j].apply(f, &coords)
                })
                .collect();
            shell.encode(&tuple)
        },
        (0..sig.constant_count())
            .map(|c| shell.encode(&factors.iter().map(|fa| fa.constant(c)).collect::<Vec<_>>()))
            .collect(),
    )?
    .with_coefficients(
        (0..coefs)
            .map(|a| shell.encode(&factors.iter().map(|fa| fa.coefficients()[a]).collect::<Vec<_>>()))
            .collect(),
    )?;
    let projections = (0..factors.len())
        .map(|j| Homomorphism::new(decoded.iter().map(|t| t[j]).collect()))
        .collect();
    Ok(Product {
        algebra,
        projections,
        sizes,
    })
}

/// Whether the subalgebra on `subset` of a product projects onto every factor.
pub fn is_subdirect(product: &Product, subset: &[usize]) -> Result<bool> {
    if let Some(why) = product.algebra.closure_failure(subset) {
        return Err(Error::NotClosed(why));
    }
    Ok(product.projections.iter().zip(&product.sizes).all(|(p, &k)| {
        let mut hit = vec![false; k];
        subset.iter().for_each(|&m| hit[p.apply(m)] = true);
        hit.into_iter().all(|x| x)
    }))
}

/// A filter on a finite index set `{0, .., n-1}`; members are bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Filter {
    n: usize,
    members: Vec<u64>,
}

const MAX_INDICES: usize = 16;

impl Filter {
    /// Validates the filter axioms: nonempty, proper, upward closed, closed
    /// under intersection.
    pub fn new(n: usize, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n > MAX_INDICES {
            return Err(Error::bound("filter index set", n as u128, MAX_INDICES));
        }
        let full = Filter::full_mask(n);
        let mut members: Vec<u64> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::NotFilter("a filter is nonempty".into()));
        }
        if let Some(m) = members.iter().find(|&&m| m & !full != 0) {
            return Err(Error::NotFilter(format!("set {m:#b} is not a subset of the index set")));
        }
        if members.contains(&0) {
            return Err(Error::NotFilter("the empty set belongs to the filter".into()));
        }
        let has = |s: u64| members.binary_search(&s).is_ok();
        for &a in &members {
            for &b in &members {
                if !has(a & b) {
                    return Err(Error::NotFilter(format!("{a:#b} ∩ {b:#b} is missing")));
                }
            }
            for s in 0..=full {
                if s & a == a && !has(s) {
                    return Err(Error::NotFilter(format!("superset {s:#b} of {a:#b} is missing")));
                }
            }
        }
        Ok(Filter { n, members })
    }

    fn full_mask(n: usize) -> u64 {
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    /// All supersets of `generator`.
    pub fn principal(n: usize, generator: u64) -> Result<Self> {
        let full = Filter::full_mask(n.min(MAX_INDICES));
        Filter::new(n, (0..=full).filter(|s| s & generator == generator))
    }

    /// `{I}`.
    pub fn trivial(n: usize) -> Result<Self> {
        Filter::principal(n, Filter::full_mask(n.min(MAX_INDICES)))
    }

    /// The principal ultrafilter of all sets containing `i`.
    pub fn ultra_at(n: usize, i: usize) -> Result<Self> {
        Filter::principal(n, 1 << i)
    }

    pub fn index_count(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn contains(&self, set: u64) -> bool {
        self.members.binary_search(&set).is_ok()
    }

    /// Intersection of all members; a filter on a finite set is the set of
    /// supersets of this.
    pub fn generator(&self) -> u64 {
        self.members.iter().fold(Filter::full_mask(self.n), |acc, &m| acc & m)
    }

    pub fn is_ultrafilter(&self) -> bool {
        let full = Filter::full_mask(self.n);
        (0..=full).all(|s| self.contains(s) || self.contains(full & !s))
    }

    /// The index a principal ultrafilter is concentrated at.
    pub fn ultra_index(&self) -> Option<usize> {
        let g = self.generator();
        (g.count_ones() == 1).then(|| g.trailing_zeros() as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filterproduct {
    pub algebra: FiniteAlgebra,
    pub product: Product,
    pub congruence: Congruence,
    /// The quotient map from the product.
    pub projection: Homomorphism,
}

/// `∏ factors / D`: tuples identified when they agree on a member of `D`.
pub fn filterproduct(factors: &[FiniteAlgebra], filter: &Filter, budget: &Budget) -> Result<Filterproduct> {
    if filter.index_count() != factors.len() {
        return Err(Error::NotFilter(format!(
            "filter on {} indices for {} factors",
            filter.index_count(),
            factors.len()
        )));
    }
    let product = direct_product(factors, budget)?;
    let size = product.algebra.size();
    let decoded: Vec<Vec<usize>> = (0..size).map(|m| product.decode(m)).collect();
    let mut labels = vec![0; size];
    for a in 0..size {
        labels[a] = (0..=a)
            .find(|&b| {
                let agree = (0..factors.len())
                    .filter(|&j| decoded[a][j] == decoded[b][j])
                    .fold(0u64, |acc, j| acc | 1 << j);
                filter.contains(agree)
            })
            .expect("a agrees with itself everywhere");
    }
    let congruence = Congruence::from_labels(&labels);
    let q = quotient(&product.algebra, &congruence)?;
    Ok(Filterproduct {
        algebra: q.algebra,
        product,
        congruence,
        projection: q.projection,
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::find_isomorphism;
    use super::*;

    #[test]
    fn products() {
        let b = Budget::default();
        let p = direct_product(&[z2(), z2()], &b).unwrap();
        assert_eq!(p.algebra.size(), 4);
        assert_eq!(p.algebra.constant(0), p.encode(&[0, 0]));
        assert!(find_isomorphism(&p.algebra, &v4()).unwrap().is_some());
        let single = direct_product(&[z3()], &b).unwrap();
        assert!(find_isomorphism(&single.algebra, &z3()).unwrap().is_some());
        let lattice = direct_product(&[s2(), s2()], &b).unwrap();
        // (0,1) ∧ (1,0) = (0,0)
        assert_eq!(lattice.algebra.apply(0, &[1, 2]), 0);
        assert_eq!(lattice.algebra.apply(0, &[3, 2]), 2);
        assert!(direct_product(&[z4(), z4(), z4()], &Budget::with_max_universe(10))
            .unwrap_err()
            .is_resource_bound());
    }

    #[test]
    fn subdirectness() {
        let p = direct_product(&[z2(), z2()], &Budget::default()).unwrap();
        assert!(is_subdirect(&p, &[0, 3]).unwrap());
        assert!(!is_subdirect(&p, &[0]).unwrap());
        assert!(is_subdirect(&p, &[0, 1, 2, 3]).unwrap());
        assert!(is_subdirect(&p, &[0, 1, 2]).is_err());
    }

    #[test]
    fn filters() {
        assert!(Filter::new(2, [0b01]).is_err());
        assert!(Filter::new(2, [0b01, 0b11, 0b00]).is_err());
        let d = Filter::new(2, [0b01, 0b11]).unwrap();
        assert!(d.is_ultrafilter());
        assert_eq!(d.ultra_index(), Some(0));
        assert!(!Filter::trivial(2).unwrap().is_ultrafilter());
    }

    #[test]
    fn filterproduct_examples() {
        let b = Budget::default();
        let d = Filter::new(2, [0b01, 0b11]).unwrap();
        let fp = filterproduct(&[z2(), z3()], &d, &b).unwrap();
        assert!(find_isomorphism(&fp.algebra, &z2()).unwrap().is_some());

        let full = filterproduct(&[z2(), z3()], &Filter::trivial(2).unwrap(), &b).unwrap();
        assert_eq!(full.algebra.size(), 6);

        let d01 = Filter::principal(3, 0b011).unwrap();
        let fp = filterproduct(&[z2(), z2(), z3()], &d01, &b).unwrap();
        assert!(find_isomorphism(&fp.algebra, &v4()).unwrap().is_some());
    }
}
