//! Brute-force references for the suites. Nothing here calls the code it
//! is used to check.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::FiniteAlgebra;
use crate::syntax::{AtomicFormula, Signature, Term};

pub fn eval(b: &FiniteAlgebra, t: &Term, point: &[usize]) -> usize {
    match t {
        Term::Var(v) => point[*v],
        Term::Const(c) => b.constants()[*c],
        Term::Coef(a) => b.coefficients()[*a],
        Term::App(f, args) => {
            let values: Vec<usize> = args.iter().map(|a| eval(b, a, point)).collect();
            let mut idx = 0;
            for v in values {
                idx = idx * b.size() + v;
            }
            b.table(*f)[idx]
        }
    }
}

pub fn holds(b: &FiniteAlgebra, a: &AtomicFormula, point: &[usize]) -> bool {
    (eval(b, &a.lhs, point) == eval(b, &a.rhs, point)) != a.negated
}

/// All of `B^n`, last coordinate fastest.
pub fn space(size: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..size).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn solutions(b: &FiniteAlgebra, n: usize, equations: &[AtomicFormula]) -> Vec<Vec<usize>> {
    space(b.size(), n)
        .into_iter()
        .filter(|p| equations.iter().all(|e| holds(b, e, p)))
        .collect()
}

pub fn in_radical(b: &FiniteAlgebra, points: &[Vec<usize>], q: &AtomicFormula) -> bool {
    points.iter().all(|p| holds(b, q, p))
}

/// Every term function on `points`, as its value vector: projections,
/// constants and coefficients closed under the operations.
pub fn trace_functions(b: &FiniteAlgebra, n: usize, points: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..n {
        set.insert(points.iter().map(|p| p[i]).collect());
    }
    for &c in b.constants().iter().chain(b.coefficients()) {
        set.insert(vec![c; points.len()]);
    }
    let sig = b.signature();
    loop {
        let current: Vec<Vec<usize>> = set.iter().cloned().collect();
        let before = set.len();
        for f in 0..sig.function_count() {
            for args in space(current.len(), sig.arity(f)) {
                let v = (0..points.len())
                    .map(|p| {
                        let at: Vec<usize> = args.iter().map(|&a| current[a][p]).collect();
                        b.table(f)[at.iter().fold(0, |acc, &x| acc * b.size() + x)]
                    })
                    .collect();
                set.insert(v);
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// A point of `points` at which all distinct term functions differ.
pub fn generic_point(b: &FiniteAlgebra, n: usize, points: &[Vec<usize>]) -> Option<Vec<usize>> {
    let fns: Vec<Vec<usize>> = trace_functions(b, n, points).into_iter().collect();
    (0..points.len())
        .find(|&p| {
            let values: BTreeSet<usize> = fns.iter().map(|f| f[p]).collect();
            values.len() == fns.len()
        })
        .map(|p| points[p].clone())
}

/// Table check of `map: C -> B`.
pub fn is_homomorphism(map: &[usize], c: &FiniteAlgebra, b: &FiniteAlgebra, fixing: bool) -> bool {
    if map.len() != c.size() || map.iter().any(|&m| m >= b.size()) {
        return false;
    }
    let sig = c.signature();
    for f in 0..sig.function_count() {
        for args in space(c.size(), sig.arity(f)) {
            let lhs = map[c.table(f)[args.iter().fold(0, |acc, &x| acc * c.size() + x)]];
            let image: Vec<usize> = args.iter().map(|&a| map[a]).collect();
            let rhs = b.table(f)[image.iter().fold(0, |acc, &x| acc * b.size() + x)];
            if lhs != rhs {
                return false;
            }
        }
    }
    if c.constants().iter().zip(b.constants()).any(|(&x, &y)| map[x] != y) {
        return false;
    }
    !fixing || c.coefficients().iter().zip(b.coefficients()).all(|(&x, &y)| map[x] == y)
}

pub fn is_injective(map: &[usize]) -> bool {
    map.iter().collect::<BTreeSet<_>>().len() == map.len()
}

/// Terms of depth at most `depth` over `n` variables and the constants.
pub fn terms(sig: &Signature, n: usize, depth: usize) -> Vec<Term> {
    let mut by_depth: Vec<Vec<Term>> = vec![(0..n)
        .map(Term::Var)
        .chain((0..sig.constant_count()).map(Term::Const))
        .collect()];
    for d in 1..=depth {
        let below: Vec<Term> = by_depth.iter().flatten().cloned().collect();
        let mut level = Vec::new();
        for f in 0..sig.function_count() {
            let k = sig.arity(f);
            for args in space(below.len(), k) {
                // At least one argument sits exactly one level down.
                if args.iter().any(|&a| below[a].depth() == d - 1) {
                    level.push(Term::App(f, args.iter().map(|&a| below[a].clone()).collect()));
                }
            }
        }
        by_depth.push(level);
    }
    by_depth.into_iter().flatten().collect()
}

pub fn random_term(rng: &mut ChaCha8Rng, sig: &Signature, n: usize, depth: usize) -> Term {
    let leaves = n + sig.constant_count();
    if depth == 0 || sig.function_count() == 0 || rng.gen_bool(0.35) {
        let k = rng.gen_range(0..leaves);
        return if k < n { Term::Var(k) } else { Term::Const(k - n) };
    }
    let f = rng.gen_range(0..sig.function_count());
    Term::App(f, (0..sig.arity(f)).map(|_| random_term(rng, sig, n, depth - 1)).collect())
}

/// The congruent closure of `relations` inside a fixed term universe,
/// obtained by applying reflexivity, symmetry, transitivity and
/// compatibility until nothing changes.
pub struct Saturation {
    index: HashMap<Term, usize>,
    class: Vec<usize>,
}

impl Saturation {
    pub fn new(universe: Vec<Term>, relations: &[AtomicFormula]) -> Saturation {
        let mut universe = universe;
        for r in relations {
            universe.extend(r.lhs.subterms());
            universe.extend(r.rhs.subterms());
        }
        let mut index: HashMap<Term, usize> = HashMap::new();
        let mut terms: Vec<Term> = Vec::new();
        for t in universe {
            if !index.contains_key(&t) {
                index.insert(t.clone(), terms.len());
                terms.push(t);
            }
        }
        // The relation is kept as explicit generating pairs; `class[i]` is
        // the least index related to `i`.
        let mut pairs: Vec<(usize, usize)> = relations.iter().map(|r| (index[&r.lhs], index[&r.rhs])).collect();
        let class = loop {
            // Symmetric-transitive closure of the pairs plus reflexivity:
            // connected components, labelled by least member.
            let mut adj: Vec<Vec<usize>> = vec![Vec::new(); terms.len()];
            for &(a, b) in &pairs {
                adj[a].push(b);
                adj[b].push(a);
            }
            let mut next = vec![usize::MAX; terms.len()];
            for start in 0..terms.len() {
                if next[start] != usize::MAX {
                    continue;
                }
                let mut stack = vec![start];
                next[start] = start;
                while let Some(x) = stack.pop() {
                    for &y in &adj[x] {
                        if next[y] == usize::MAX {
                            next[y] = start;
                            stack.push(y);
                        }
                    }
                }
            }
            // Compatibility: applications with related arguments.
            let mut buckets: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut added = false;
            for (i, t) in terms.iter().enumerate() {
                if let Term::App(f, args) = t {
                    let key = (*f, args.iter().map(|a| next[index[a]]).collect());
                    match buckets.get(&key) {
                        Some(&j) if next[j] != next[i] => {
                            pairs.push((i, j));
                            added = true;
                        }
                        Some(_) => {}
                        None => {
                            buckets.insert(key, i);
                        }
                    }
                }
            }
            if !added {
                break next;
            }
        };
        Saturation { index, class }
    }

    /// `None` when a side lies outside the universe.
    pub fn related(&self, t: &Term, s: &Term) -> Option<bool> {
        Some(self.class[*self.index.get(t)?] == self.class[*self.index.get(s)?])
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;

    #[test]
    fn term_counts() {
        // meet over two variables: 2, 2 + 4, 2 + 36.
        assert_eq!(terms(&meet_signature(), 2, 0).len(), 2);
        assert_eq!(terms(&meet_signature(), 2, 1).len(), 6);
        assert_eq!(terms(&meet_signature(), 2, 2).len(), 38);
    }

    #[test]
    fn saturation_by_hand() {
        let sig = unary_signature();
        let f = |t: Term| Term::App(0, vec![t]);
        let x = Term::Var(0);
        let rel = [AtomicFormula::eq(f(x.clone()), x.clone())];
        let s = Saturation::new(terms(&sig, 1, 3), &rel);
        assert_eq!(s.related(&f(f(f(x.clone()))), &x), Some(true));
        let y = Term::Var(1);
        let s = Saturation::new(terms(&sig, 2, 2), &rel);
        assert_eq!(s.related(&f(y.clone()), &y), Some(false));
    }

    #[test]
    fn generic_points_by_hand() {
        // The meet line {0,1}: x itself separates nothing else.
        let line = vec![vec![0], vec![1]];
        assert!(generic_point(&s2(), 1, &line).is_some());
        // The C01 line is covered by x = c0 and x = c1.
        assert_eq!(generic_point(&c01(), 1, &line), None);
    }
}
