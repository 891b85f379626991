//! Local submodels, diagram formulas and the class operators that can be
//! decided on finite algebras: universal closure by local embeddability,
//! separation, discrimination, and sentence checking.

mod sentences;
mod shadow;

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{first_homomorphism, search_homomorphisms, FiniteAlgebra, HomMode, Homomorphism};
use crate::error::{Budget, Error, Result};
use crate::syntax::{AtomicFormula, DiagramFormula, Matrix, QuantifiedFormula, Reduct, Term};

pub use sentences::{
    check_existential_sentence, check_quasi_identity, check_sentence, check_universal_sentence, SentenceVerdict,
};
pub use shadow::{shadow_pool, ucl_shadow, ShadowPool, ShadowVerdict};

/// The relational version of an algebra restricted to a reduct and a
/// subset of its universe. `functions[F]` holds the tuples `(m1..mn, m0)`
/// with `F(m1..mn) = m0` and every coordinate in the universe; a named
/// constant maps to its value when that value lies in the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalStructure {
    pub universe: Vec<usize>,
    pub reduct: Reduct,
    pub functions: BTreeMap<usize, BTreeSet<Vec<usize>>>,
    pub constants: BTreeMap<Term, Option<usize>>,
}

impl RelationalStructure {
    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }
}

fn check_reduct(m: &FiniteAlgebra, reduct: &Reduct) -> Result<()> {
    if !reduct.fits(m.signature(), m.coefficient_count()) {
        return Err(Error::Signature(format!(
            "reduct is not a sublanguage of {}",
            m.signature()
        )));
    }
    Ok(())
}

/// The induced relational substructure on `universe` (sorted, distinct).
pub fn induced_substructure(m: &FiniteAlgebra, reduct: &Reduct, universe: &[usize]) -> Result<RelationalStructure> {
    check_reduct(m, reduct)?;
    if universe.windows(2).any(|w| w[0] >= w[1]) || universe.iter().any(|&x| x >= m.size()) {
        return Err(Error::Shape("universe must be a sorted subset of the algebra".into()));
    }
    let inside = |x: usize| universe.binary_search(&x).is_ok();
    let mut functions = BTreeMap::new();
    for &f in &reduct.functions {
        let mut rel = BTreeSet::new();
        for pos in crate::syntax::tuples(universe.len(), m.signature().arity(f)) {
            let args: Vec<usize> = pos.iter().map(|&p| universe[p]).collect();
            let value = m.apply(f, &args);
            if inside(value) {
                let mut t = args;
                t.push(value);
                rel.insert(t);
            }
        }
        functions.insert(f, rel);
    }
    let mut constants = BTreeMap::new();
    for &c in &reduct.constants {
        let v = m.constant(c);
        constants.insert(Term::Const(c), inside(v).then_some(v));
    }
    for &a in &reduct.coefficients {
        let v = m.coefficients()[a];
        constants.insert(Term::Coef(a), inside(v).then_some(v));
    }
    Ok(RelationalStructure {
        universe: universe.to_vec(),
        reduct: reduct.clone(),
        functions,
        constants,
    })
}

/// `k`-element subsets of `0..n`, lexicographically.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            go(n, k, x + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(n, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// All local submodels of `m` over `reduct` on subsets of exactly `size`
/// elements, subsets in lexicographic order.
pub fn local_submodels(m: &FiniteAlgebra, reduct: &Reduct, size: usize) -> Result<Vec<RelationalStructure>> {
    check_reduct(m, reduct)?;
    if size > m.size() {
        return Err(Error::Shape(format!("no {size}-element subsets in an algebra of size {}", m.size())));
    }
    subsets(m.size(), size)
        .iter()
        .map(|u| induced_substructure(m, reduct, u))
        .collect()
}

/// The diagram formula of a local submodel: variable `i` stands for
/// `universe[i]` and is named after it.
pub fn diagram_formula_of(n: &RelationalStructure, arity: impl Fn(usize) -> usize) -> DiagramFormula {
    let k = n.universe.len();
    let vars: Vec<String> = n.universe.iter().map(|m| format!("x{m}")).collect();
    let mut conjuncts = Vec::new();
    for x in 0..k {
        for y in x + 1..k {
            conjuncts.push(AtomicFormula::neq(Term::Var(x), Term::Var(y)));
        }
    }
    for (&f, rel) in &n.functions {
        for pos in crate::syntax::tuples(k, arity(f)) {
            let lhs = Term::App(f, pos.iter().map(|&p| Term::Var(p)).collect());
            for x0 in 0..k {
                let mut t: Vec<usize> = pos.iter().map(|&p| n.universe[p]).collect();
                t.push(n.universe[x0]);
                let atom = AtomicFormula::eq(lhs.clone(), Term::Var(x0));
                conjuncts.push(if rel.contains(&t) { atom } else { atom.negate() });
            }
        }
    }
    for (c, value) in &n.constants {
        for x in 0..k {
            let atom = AtomicFormula::eq(Term::Var(x), c.clone());
            conjuncts.push(if *value == Some(n.universe[x]) { atom } else { atom.negate() });
        }
    }
    DiagramFormula::new(n.reduct.clone(), vars, conjuncts)
}

/// Diagram formula of the submodel of `m` on `universe`.
pub fn induced_diagram(m: &FiniteAlgebra, reduct: &Reduct, universe: &[usize]) -> Result<DiagramFormula> {
    let n = induced_substructure(m, reduct, universe)?;
    Ok(diagram_formula_of(&n, |f| m.signature().arity(f)))
}

/// `∃x̄ φ` as a sentence.
pub fn diagram_sentence(phi: &DiagramFormula) -> QuantifiedFormula {
    QuantifiedFormula::existential(
        phi.vars.clone(),
        Matrix::And(phi.conjuncts.iter().cloned().map(Matrix::Literal).collect()),
    )
}

/// An assignment of `φ`'s variables in `b` satisfying every conjunct, the
/// lexicographically least one. Inequations make the search injective.
pub fn realizable(phi: &DiagramFormula, b: &FiniteAlgebra) -> Result<Option<Vec<usize>>> {
    if !phi.reduct.fits(b.signature(), b.coefficient_count()) {
        return Err(Error::SignatureMismatch(format!(
            "reduct {} is not interpreted in the algebra",
            phi.reduct.display(b.signature())
        )));
    }
    let n = phi.vars.len();
    let mut by_var: Vec<Vec<&AtomicFormula>> = vec![Vec::new(); n + 1];
    let mut distinct: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in &phi.conjuncts {
        if !a.fits(b.signature(), n, b.coefficient_count()) {
            return Err(Error::SignatureMismatch(format!(
                "conjunct {} does not fit the algebra",
                a.display(b.signature(), &phi.vars)
            )));
        }
        if let (true, Term::Var(x), Term::Var(y)) = (a.negated, &a.lhs, &a.rhs) {
            if x != y {
                distinct[*x.max(y)].push(*x.min(y));
                continue;
            }
        }
        by_var[a.max_var().map_or(0, |v| v + 1)].push(a);
    }
    let holds = |a: &AtomicFormula, p: &[usize]| (b.eval_fast(&a.lhs, p) == b.eval_fast(&a.rhs, p)) != a.negated;
    if !by_var[0].iter().all(|a| holds(a, &[])) {
        return Ok(None);
    }
    let mut point = vec![0; n];
    fn go(
        v: usize,
        point: &mut Vec<usize>,
        size: usize,
        by_var: &[Vec<&AtomicFormula>],
        distinct: &[Vec<usize>],
        holds: &dyn Fn(&AtomicFormula, &[usize]) -> bool,
    ) -> bool {
        if v == point.len() {
            return true;
        }
        for x in 0..size {
            point[v] = x;
            if distinct[v].iter().any(|&u| point[u] == x) {
                continue;
            }
            if by_var[v + 1].iter().all(|a| holds(a, point)) && go(v + 1, point, size, by_var, distinct, holds) {
                return true;
            }
        }
        false
    }
    Ok(go(0, &mut point, b.size(), &by_var, &distinct, &holds).then_some(point))
}

/// Whether `assignment` satisfies every conjunct of `φ` in `b`.
pub fn satisfies(phi: &DiagramFormula, b: &FiniteAlgebra, assignment: &[usize]) -> bool {
    assignment.len() == phi.vars.len()
        && phi
            .conjuncts
            .iter()
            .all(|a| (b.eval_fast(&a.lhs, assignment) == b.eval_fast(&a.rhs, assignment)) != a.negated)
}

/// A finite nonempty class of algebras over one signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassK {
    pub members: Vec<FiniteAlgebra>,
}

impl ClassK {
    pub fn new(members: Vec<FiniteAlgebra>) -> Result<ClassK> {
        let first = members
            .first()
            .ok_or_else(|| Error::Shape("a class needs at least one member".into()))?;
        for m in &members[1..] {
            if m.signature() != first.signature() || m.coefficient_count() != first.coefficient_count() {
                return Err(Error::SignatureMismatch("class members over different languages".into()));
            }
        }
        Ok(ClassK { members })
    }

    pub fn single(b: FiniteAlgebra) -> ClassK {
        ClassK { members: vec![b] }
    }

    fn compatible(&self, c: &FiniteAlgebra) -> Result<()> {
        let b = &self.members[0];
        if b.signature() != c.signature() {
            return Err(Error::SignatureMismatch(format!("{} vs {}", c.signature(), b.signature())));
        }
        if b.coefficient_count() != c.coefficient_count() {
            return Err(Error::Coefficients(format!(
                "{} vs {} coefficient constants",
                c.coefficient_count(),
                b.coefficient_count()
            )));
        }
        Ok(())
    }
}

/// A local submodel whose diagram formula no member of the class realizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFailure {
    pub universe: Vec<usize>,
    pub formula: DiagramFormula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UclVerdict {
    pub holds: bool,
    pub certificate: Option<LocalFailure>,
    /// Diagram formulas checked.
    pub checked: usize,
}

/// `C ∈ L(K)`: every local submodel of `C` has its diagram formula realized
/// in some member of `K`. Subsets are visited by size, then
/// lexicographically, over the full language of `C`; a diagram over a
/// smaller reduct is a subconjunction, so the full one decides. When a
/// subset fails, the certificate is the first failing reduct in mask order.
pub fn locally_embeddable(c: &FiniteAlgebra, k: &ClassK) -> Result<UclVerdict> {
    k.compatible(c)?;
    let sig = c.signature();
    let ncoef = c.coefficient_count();
    let full = Reduct::full(sig, ncoef);
    let in_class = |phi: &DiagramFormula| -> Result<bool> {
        for b in &k.members {
            if realizable(phi, b)?.is_some() {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let mut checked = 0;
    for size in 1..=c.size() {
        for universe in subsets(c.size(), size) {
            checked += 1;
            if in_class(&induced_diagram(c, &full, &universe)?)? {
                continue;
            }
            let symbols = Reduct::symbol_count(sig, ncoef);
            for mask in 0..1u64 << symbols {
                let reduct = Reduct::from_mask(sig, ncoef, mask);
                let phi = induced_diagram(c, &reduct, &universe)?;
                checked += 1;
                if !in_class(&phi)? {
                    return Ok(UclVerdict {
                        holds: false,
                        certificate: Some(LocalFailure { universe, formula: phi }),
                        checked,
                    });
                }
            }
            unreachable!("the full reduct failed");
        }
    }
    Ok(UclVerdict {
        holds: true,
        certificate: None,
        checked,
    })
}

/// `Th∃(B) ⊇ Th∃(C)` for finite `C`. Every diagram formula realizable in
/// `C` is a subconjunction of a renaming of the total diagram of `C`, so it
/// suffices to check the sentence `∃x̄ Diag(C)` in `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionVerdict {
    pub holds: bool,
    pub sentence: QuantifiedFormula,
    pub witness: Option<Vec<usize>>,
}

pub fn exists_theory_included(c: &FiniteAlgebra, b: &FiniteAlgebra, budget: &Budget) -> Result<InclusionVerdict> {
    ClassK::single(b.clone()).compatible(c)?;
    let universe: Vec<usize> = (0..c.size()).collect();
    let phi = induced_diagram(c, &Reduct::full(c.signature(), c.coefficient_count()), &universe)?;
    let sentence = diagram_sentence(&phi);
    let v = check_existential_sentence(b, &sentence, budget)?;
    Ok(InclusionVerdict {
        holds: v.holds,
        sentence,
        witness: v.witness,
    })
}

fn mode_for(c: &FiniteAlgebra, injective: bool) -> HomMode {
    match (c.coefficient_count() > 0, injective) {
        (false, false) => HomMode::All,
        (false, true) => HomMode::Injective,
        (true, false) => HomMode::Fixing,
        (true, true) => HomMode::FixingInjective,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationVerdict {
    pub holds: bool,
    /// A pair no homomorphism into the class distinguishes.
    pub inseparable: Option<(usize, usize)>,
}

/// Homomorphisms into the class separate every pair of distinct elements.
/// With coefficients present, only coefficient-fixing maps count.
pub fn separates(k: &ClassK, c: &FiniteAlgebra) -> Result<SeparationVerdict> {
    k.compatible(c)?;
    let n = c.size();
    let mut split = vec![false; n * n];
    for b in &k.members {
        search_homomorphisms(c, b, mode_for(c, false), &[], &mut |h| {
            for x in 0..n {
                for y in x + 1..n {
                    if h[x] != h[y] {
                        split[x * n + y] = true;
                    }
                }
            }
            true
        })?;
    }
    let inseparable = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .find(|&(x, y)| !split[x * n + y]);
    Ok(SeparationVerdict {
        holds: inseparable.is_none(),
        inseparable,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminationVerdict {
    pub holds: bool,
    /// Member index and an embedding into it.
    pub embedding: Option<(usize, Homomorphism)>,
}

/// For finite `C` the whole universe is a finite set to discriminate, so
/// this asks for an embedding into some member.
pub fn discriminates(k: &ClassK, c: &FiniteAlgebra) -> Result<DiscriminationVerdict> {
    k.compatible(c)?;
    for (i, b) in k.members.iter().enumerate() {
        if let Some(h) = first_homomorphism(c, b, mode_for(c, true), &[])? {
            return Ok(DiscriminationVerdict {
                holds: true,
                embedding: Some((i, h)),
            });
        }
    }
    Ok(DiscriminationVerdict {
        holds: false,
        embedding: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::syntax::Signature;

    fn full(b: &FiniteAlgebra) -> Reduct {
        Reduct::full(b.signature(), b.coefficient_count())
    }

    fn only_function(f: usize) -> Reduct {
        Reduct {
            functions: [f].into(),
            ..Reduct::empty()
        }
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn local_submodel_examples() {
        let s = local_submodels(&s2(), &full(&s2()), 2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].functions[&0].len(), 4);

        let z = local_submodels(&z4(), &only_function(0), 1).unwrap();
        let nonempty: Vec<bool> = z.iter().map(|n| !n.functions[&0].is_empty()).collect();
        assert_eq!(nonempty, vec![true, false, false, false]);

        let bare = local_submodels(&z3(), &Reduct::empty(), 1).unwrap();
        assert_eq!(bare.len(), 3);
        assert!(bare.iter().all(|n| n.functions.is_empty() && n.constants.is_empty()));

        let bogus = Reduct {
            functions: [5].into(),
            ..Reduct::empty()
        };
        assert!(local_submodels(&s2(), &bogus, 1).is_err());
    }

    #[test]
    fn diagram_examples() {
        let phi = induced_diagram(&s2(), &full(&s2()), &[0, 1]).unwrap();
        assert_eq!(phi.conjuncts.len(), 1 + 8);
        assert_eq!(phi.positive_conjuncts().count(), 4);
        assert!(phi.validate(s2().signature(), 0).is_valid());

        let e_only = Reduct {
            constants: [0].into(),
            ..Reduct::empty()
        };
        let at0 = induced_diagram(&z2(), &e_only, &[0]).unwrap();
        assert_eq!(at0.display(z2().signature()).to_string(), "x0 = e");
        let at1 = induced_diagram(&z2(), &e_only, &[1]).unwrap();
        assert_eq!(at1.display(z2().signature()).to_string(), "x1 != e");
    }

    #[test]
    fn diagram_validation_accepts_every_induced_diagram() {
        for (_, m) in all() {
            let ncoef = m.coefficient_count();
            for mask in 0..1u64 << Reduct::symbol_count(m.signature(), ncoef) {
                let reduct = Reduct::from_mask(m.signature(), ncoef, mask);
                for size in 1..=m.size().min(3) {
                    for n in local_submodels(&m, &reduct, size).unwrap() {
                        let phi = diagram_formula_of(&n, |f| m.signature().arity(f));
                        assert!(phi.validate(m.signature(), ncoef).is_valid());
                        assert!(satisfies(&phi, &m, &n.universe));
                        let first = realizable(&phi, &m).unwrap().unwrap();
                        assert!(first <= n.universe);
                    }
                }
            }
        }
    }

    #[test]
    fn realizability_examples() {
        let phi = induced_diagram(&s2(), &full(&s2()), &[0, 1]).unwrap();
        assert_eq!(realizable(&phi, &s2()).unwrap(), Some(vec![0, 1]));

        let e = FiniteAlgebra::trivial(s2().signature());
        assert_eq!(realizable(&phi, &e).unwrap(), None);

        let sub = induced_diagram(&z2(), &full(&z2()), &[0, 1]).unwrap();
        assert_eq!(realizable(&sub, &z4()).unwrap(), Some(vec![0, 2]));
    }

    #[test]
    fn ucl_examples() {
        assert!(locally_embeddable(&z2(), &ClassK::single(z2())).unwrap().holds);

        let v = locally_embeddable(&z4(), &ClassK::single(z2())).unwrap();
        assert!(!v.holds);
        let cert = v.certificate.unwrap();
        assert_eq!(realizable(&cert.formula, &z4()).unwrap(), Some(cert.universe.clone()));
        assert_eq!(realizable(&cert.formula, &z2()).unwrap(), None);

        let e = FiniteAlgebra::trivial(s2().signature());
        assert!(locally_embeddable(&e, &ClassK::single(s2())).unwrap().holds);
        let eg = FiniteAlgebra::trivial(z2().signature());
        assert!(locally_embeddable(&eg, &ClassK::single(z3())).unwrap().holds);
    }

    #[test]
    fn existential_inclusion_examples() {
        let b = Budget::default();
        let v = exists_theory_included(&z2(), &z4(), &b).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness, Some(vec![0, 2]));
        assert!(!exists_theory_included(&z4(), &z2(), &b).unwrap().holds);
        let e = FiniteAlgebra::trivial(s2().signature());
        assert!(exists_theory_included(&e, &s2(), &b).unwrap().holds);
    }

    #[test]
    fn separation_and_discrimination_examples() {
        let k = ClassK::single(z2());
        assert!(separates(&k, &z2()).unwrap().holds);
        assert!(discriminates(&k, &z2()).unwrap().holds);
        assert!(!discriminates(&k, &z4()).unwrap().holds);
        assert!(separates(&k, &v4()).unwrap().holds);
        assert!(!discriminates(&k, &v4()).unwrap().holds);
        assert_eq!(separates(&k, &z4()).unwrap().inseparable, Some((0, 2)));
        assert!(separates(&ClassK::single(s2()), &z2()).is_err());
    }

    #[test]
    fn class_requires_members_over_one_language() {
        assert!(ClassK::new(Vec::new()).is_err());
        assert!(ClassK::new(vec![z2(), s2()]).is_err());
        let unary = Signature::build(&[("f", 1)], &[]).unwrap();
        assert!(ClassK::new(vec![FiniteAlgebra::trivial(&unary), n2()]).is_ok());
    }
}
