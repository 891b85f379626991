//! The seven conditions of the unification theorems, evaluated side by side.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::algebra::{filterproduct, first_homomorphism, CoefficientStructure, Filter, FiniteAlgebra, HomMode, Homomorphism};
use crate::error::{Budget, Error, Result};
use crate::geometry::{coordinate_algebra, is_irreducible, solve, EquationSystem, Irreducibility};
use crate::limits::{build_limit, limit_from_inclusion, InclusionLimit};
use crate::models::{discriminates, exists_theory_included, locally_embeddable, ClassK};
use crate::presentation::table_presentation;
use crate::syntax::{tuples, AtomicFormula, Term};

/// The complete atomic type of a tuple, presented by the subalgebra the
/// tuple generates. Variable `i` of every formula stands for `tuple[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicType {
    pub tuple: Vec<usize>,
    /// Sorted universe of the generated subalgebra, inside the ambient algebra.
    pub generated: Vec<usize>,
    /// The generated subalgebra relabelled to `0..generated.len()`.
    pub algebra: FiniteAlgebra,
    /// Image of each tuple position in `algebra`.
    pub generator_images: Vec<usize>,
    /// A term over the tuple for each element of `generated`.
    pub witnesses: BTreeMap<usize, Term>,
    /// Table entries, constant and coefficient bindings, and repeated
    /// positions, written over the witnesses. Their congruence closure is
    /// the kernel of `T(X) -> <tuple>`.
    pub positive: Vec<AtomicFormula>,
    /// `¬(w_e = w_f)` for distinct generated elements.
    pub negative: Vec<AtomicFormula>,
}

impl AtomicType {
    pub fn arity(&self) -> usize {
        self.tuple.len()
    }

    /// Membership of an atomic formula or its negation in the type.
    pub fn contains(&self, a: &AtomicFormula) -> Result<bool> {
        let l = self.algebra.eval(&a.lhs, &self.generator_images)?;
        let r = self.algebra.eval(&a.rhs, &self.generator_images)?;
        Ok((l == r) != a.negated)
    }

    /// Whether `point` in `b` satisfies every formula of the presentation,
    /// which happens exactly when it has the same type.
    pub fn realized_by(&self, b: &FiniteAlgebra, point: &[usize]) -> bool {
        point.len() == self.arity()
            && self.positive.iter().chain(&self.negative).all(|a| {
                (b.eval_fast(&a.lhs, point) == b.eval_fast(&a.rhs, point)) != a.negated
            })
    }
}

/// `atp(tuple)` in `b`. Coefficient constants take part when `b` has them.
pub fn atp_of(b: &FiniteAlgebra, tuple: &[usize]) -> Result<AtomicType> {
    let generated = if b.coefficient_count() > 0 {
        b.generated_a_subalgebra(tuple)?
    } else {
        b.generated_subalgebra(tuple)?
    };
    let mut seed: Vec<usize> = tuple.to_vec();
    seed.sort_unstable();
    seed.dedup();
    // Generation numbers its variables by the sorted seed; renumber by the
    // first position holding each value.
    let rename: Vec<Term> = seed
        .iter()
        .map(|m| Term::Var(tuple.iter().position(|t| t == m).expect("seed drawn from tuple")))
        .collect();
    let witnesses: BTreeMap<usize, Term> = generated
        .witness
        .iter()
        .map(|(&m, t)| (m, t.substitute(&rename)))
        .collect();
    let (algebra, inclusion) = b.subalgebra(&generated.universe)?;
    let local = |m: usize| inclusion.map.binary_search(&m).expect("generated element");
    let generator_images = tuple.iter().map(|&m| local(m)).collect();

    let sig = b.signature();
    let mut positive = Vec::new();
    for (i, &m) in tuple.iter().enumerate() {
        let first = tuple.iter().position(|&t| t == m).unwrap();
        if first < i {
            positive.push(AtomicFormula::eq(Term::Var(i), Term::Var(first)));
        }
    }
    for f in 0..sig.function_count() {
        for args in tuples(generated.universe.len(), sig.arity(f)) {
            let outer: Vec<usize> = args.iter().map(|&a| generated.universe[a]).collect();
            let lhs = Term::App(f, outer.iter().map(|m| witnesses[m].clone()).collect());
            positive.push(AtomicFormula::eq(lhs, witnesses[&b.apply(f, &outer)].clone()));
        }
    }
    for k in 0..sig.constant_count() {
        positive.push(AtomicFormula::eq(Term::Const(k), witnesses[&b.constant(k)].clone()));
    }
    for (a, &m) in b.coefficients().iter().enumerate() {
        positive.push(AtomicFormula::eq(Term::Coef(a), witnesses[&m].clone()));
    }
    let mut negative = Vec::new();
    for (x, &e) in generated.universe.iter().enumerate() {
        for &f in &generated.universe[x + 1..] {
            negative.push(AtomicFormula::neq(witnesses[&e].clone(), witnesses[&f].clone()));
        }
    }
    Ok(AtomicType {
        tuple: tuple.to_vec(),
        generated: generated.universe,
        algebra,
        generator_images,
        witnesses,
        positive,
        negative,
    })
}

/// One condition's outcome. `certificate` names the witness or the
/// obstruction in plain text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionVerdict {
    pub condition: usize,
    pub name: &'static str,
    pub holds: bool,
    pub certificate: String,
    pub elapsed: Duration,
}

/// Sharpened first two conditions when `A = B`: the theories coincide
/// instead of being included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemarkVerdicts {
    pub universal_equivalent: bool,
    pub existential_equivalent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnificationReport {
    pub verdicts: Vec<ConditionVerdict>,
    /// True iff every verdict (and the remark, when present) coincides.
    pub agreement: bool,
    /// When condition 7 holds: does its generic point realize the type
    /// used for condition 6?
    pub generic_point_consistent: Option<bool>,
    pub remark: Option<RemarkVerdicts>,
}

impl UnificationReport {
    pub fn holds(&self) -> Vec<bool> {
        self.verdicts.iter().map(|v| v.holds).collect()
    }

    pub fn all_true(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    pub fn all_false(&self) -> bool {
        self.verdicts.iter().all(|v| !v.holds)
    }
}

const NAMES: [&str; 7] = [
    "C ∈ Ucl(B)",
    "Th∃(B) ⊇ Th∃(C)",
    "C embeds into an ultrapower of B",
    "C is discriminated by B",
    "C is a limit algebra over B",
    "C is defined by a complete atomic type of Th∀(B)",
    "C is the coordinate algebra of an irreducible set over B",
];

fn timed(condition: usize, run: impl FnOnce() -> Result<(bool, String)>) -> Result<ConditionVerdict> {
    let start = Instant::now();
    let (holds, certificate) = run()?;
    Ok(ConditionVerdict {
        condition,
        name: NAMES[condition - 1],
        holds,
        certificate,
        elapsed: start.elapsed(),
    })
}

fn hom_mode(c: &FiniteAlgebra) -> HomMode {
    if c.coefficient_count() > 0 {
        HomMode::FixingInjective
    } else {
        HomMode::Injective
    }
}

/// An isomorphism honoring coefficients and the given pins.
fn isomorphism(c: &FiniteAlgebra, b: &FiniteAlgebra, fixed: &[Option<usize>]) -> Result<Option<Homomorphism>> {
    if c.size() != b.size() {
        return Ok(None);
    }
    first_homomorphism(c, b, hom_mode(c), fixed)
}

/// Greedy generating tuple: repeatedly add the least element not yet
/// generated. Sorted.
fn generating_tuple(c: &FiniteAlgebra) -> Result<Vec<usize>> {
    let mut seed: Vec<usize> = Vec::new();
    loop {
        let g = if c.coefficient_count() > 0 {
            c.generated_a_subalgebra(&seed)
        } else {
            c.generated_subalgebra(&seed)
        };
        let universe = match g {
            Ok(g) => g.universe,
            Err(Error::EmptyUniverse) => Vec::new(),
            Err(e) => return Err(e),
        };
        if universe.len() == c.size() {
            return Ok(seed);
        }
        let missing = (0..c.size()).find(|m| universe.binary_search(m).is_err()).unwrap();
        seed.push(missing);
        seed.sort_unstable();
    }
}

fn first_realization(p: &AtomicType, b: &FiniteAlgebra, budget: &Budget) -> Result<Option<Vec<usize>>> {
    let space = (b.size() as u128).checked_pow(p.arity() as u32).unwrap_or(u128::MAX);
    budget.check_universe("tuple space", space)?;
    Ok(tuples(b.size(), p.arity()).find(|t| p.realized_by(b, t)))
}

fn condition_one(c: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<(bool, String)> {
    let v = locally_embeddable(c, &ClassK::single(b.clone()))?;
    let cert = match &v.certificate {
        None => format!("all {} local submodels realizable in B", v.checked),
        Some(f) => format!(
            "submodel on {:?} not realizable: {}",
            f.universe,
            f.formula.display(c.signature())
        ),
    };
    Ok((v.holds, cert))
}

fn condition_two(c: &FiniteAlgebra, b: &FiniteAlgebra, budget: &Budget) -> Result<(bool, String)> {
    let v = exists_theory_included(c, b, budget)?;
    let cert = match &v.witness {
        Some(w) => format!("total diagram of C realized in B at {w:?}"),
        None => format!("B ⊭ {}", v.sentence.display(c.signature())),
    };
    Ok((v.holds, cert))
}

/// A principal ultrapower over two indices is `B` again; the embedding is
/// searched in the ultrapower itself.
fn condition_three(c: &FiniteAlgebra, b: &FiniteAlgebra, budget: &Budget) -> Result<(bool, String)> {
    let filter = Filter::ultra_at(2, 0)?;
    let u = filterproduct(&[b.clone(), b.clone()], &filter, budget)?;
    Ok(match first_homomorphism(c, &u.algebra, hom_mode(c), &[])? {
        Some(h) => (true, format!("embedding into B^2/D with D principal at 0: {:?}", h.map)),
        None => (false, format!("no injective map into the {}-element ultrapower", u.algebra.size())),
    })
}

fn condition_four(c: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<(bool, String)> {
    let v = discriminates(&ClassK::single(b.clone()), c)?;
    Ok(match &v.embedding {
        Some((_, h)) => (true, format!("embedding {:?}", h.map)),
        None => (false, "no homomorphism into B is injective".into()),
    })
}

fn condition_five(c: &FiniteAlgebra, b: &FiniteAlgebra, budget: &Budget) -> Result<(bool, String)> {
    match limit_from_inclusion(c, b, budget)? {
        InclusionLimit::Refused { label, formula, .. } => Ok((
            false,
            format!("formula at index {label} not realizable: {}", formula.display(c.signature())),
        )),
        InclusionLimit::Limit { system, .. } => {
            let limit = build_limit(&system, budget)?;
            Ok(match isomorphism(&limit.algebra, c, &[])? {
                Some(h) => (true, format!("limit of {} formulas ≅ C via {:?}", system.len(), h.map)),
                None => (false, format!("limit has {} elements and is not ≅ C", limit.algebra.size())),
            })
        }
    }
}

fn condition_six(c: &FiniteAlgebra, b: &FiniteAlgebra, budget: &Budget) -> Result<(bool, String)> {
    let gens = generating_tuple(c)?;
    let p = atp_of(c, &gens)?;
    Ok(match first_realization(&p, b, budget)? {
        Some(t) => {
            let q = atp_of(b, &t)?;
            debug_assert_eq!(q.generated.len(), c.size());
            (true, format!("type of {gens:?} realized by {t:?}, generating {:?}", q.generated))
        }
        None => (false, format!("type of generators {gens:?} not realized in B")),
    })
}

/// The defining system of `C` on one variable per element, with
/// coefficient equations `x_{λ(a)} = @a` when coefficients are present.
pub fn defining_system(c: &FiniteAlgebra) -> Result<EquationSystem> {
    let all: Vec<usize> = (0..c.size()).collect();
    let p = table_presentation(c, &all)?;
    let mut equations = p.relations;
    for (a, &m) in c.coefficients().iter().enumerate() {
        equations.push(AtomicFormula::eq(Term::Var(m), Term::Coef(a)));
    }
    EquationSystem::with_coefficients(p.sig, p.vars, equations, c.coefficient_count())
}

struct Seventh {
    holds: bool,
    certificate: String,
    generic_point: Option<Vec<usize>>,
}

fn condition_seven(c: &FiniteAlgebra, b: &FiniteAlgebra, budget: &Budget) -> Result<Seventh> {
    let y = solve(&defining_system(c)?, b, budget)?;
    if y.is_empty() {
        return Ok(Seventh {
            holds: false,
            certificate: "V_B(S_C) is empty".into(),
            generic_point: None,
        });
    }
    let generic = match is_irreducible(&y, budget)? {
        Irreducibility::Irreducible { generic_point } => generic_point,
        Irreducibility::Reducible { cover } => {
            return Ok(Seventh {
                holds: false,
                certificate: format!("V_B(S_C) has {} points, covered by {} proper equalizers", y.points.len(), cover.len()),
                generic_point: None,
            })
        }
    };
    let gamma = coordinate_algebra(&y, budget)?;
    let mut fixed = vec![None; gamma.algebra.size()];
    for (m, &g) in gamma.generators.iter().enumerate() {
        fixed[g] = Some(m);
    }
    Ok(match isomorphism(&gamma.algebra, c, &fixed)? {
        Some(_) => Seventh {
            holds: true,
            certificate: format!("irreducible with generic point {generic:?}; Γ(Y) ≅ C on generators"),
            generic_point: Some(generic),
        },
        None => Seventh {
            holds: false,
            certificate: format!("irreducible, but Γ(Y) has {} elements and is not ≅ C", gamma.algebra.size()),
            generic_point: None,
        },
    })
}

fn check(c: &FiniteAlgebra, b: &FiniteAlgebra, remark: bool, budget: &Budget) -> Result<UnificationReport> {
    if c.signature() != b.signature() {
        return Err(Error::SignatureMismatch(format!("{} vs {}", c.signature(), b.signature())));
    }
    if c.coefficient_count() != b.coefficient_count() {
        return Err(Error::Coefficients("C and B carry different coefficient constants".into()));
    }
    let mut verdicts = vec![
        timed(1, || condition_one(c, b))?,
        timed(2, || condition_two(c, b, budget))?,
        timed(3, || condition_three(c, b, budget))?,
        timed(4, || condition_four(c, b))?,
        timed(5, || condition_five(c, b, budget))?,
        timed(6, || condition_six(c, b, budget))?,
    ];
    let mut generic = None;
    verdicts.push(timed(7, || {
        let s = condition_seven(c, b, budget)?;
        generic = s.generic_point;
        Ok((s.holds, s.certificate))
    })?);
    let generic_point_consistent = match generic {
        Some(g) => {
            let all: Vec<usize> = (0..c.size()).collect();
            Some(atp_of(c, &all)?.realized_by(b, &g))
        }
        None => None,
    };
    let remark = if remark {
        Some(RemarkVerdicts {
            universal_equivalent: verdicts[0].holds
                && locally_embeddable(b, &ClassK::single(c.clone()))?.holds,
            existential_equivalent: verdicts[1].holds && exists_theory_included(b, c, budget)?.holds,
        })
    } else {
        None
    };
    let first = verdicts[0].holds;
    let agreement = verdicts.iter().all(|v| v.holds == first)
        && remark
            .as_ref()
            .is_none_or(|r| r.universal_equivalent == first && r.existential_equivalent == first)
        && generic_point_consistent != Some(false);
    Ok(UnificationReport {
        verdicts,
        agreement,
        generic_point_consistent,
        remark,
    })
}

/// All seven conditions for `C` over `B`, none skipped.
pub fn theorem_a_check(c: &FiniteAlgebra, b: &FiniteAlgebra, budget: &Budget) -> Result<UnificationReport> {
    if c.coefficient_count() > 0 || b.coefficient_count() > 0 {
        return Err(Error::Coefficients("use the coefficient variant for A-algebras".into()));
    }
    check(c, b, false, budget)
}

/// The coefficient variant: A-homomorphisms, diagrams over `L_A` and
/// equations with coefficients. When `B` is `A` itself (identity `λ_B`)
/// the report also carries the sharpened equivalences.
pub fn theorem_b_check(
    a: &FiniteAlgebra,
    c: &CoefficientStructure,
    b: &CoefficientStructure,
    budget: &Budget,
) -> Result<UnificationReport> {
    let a = a.without_coefficients();
    if c.coefficient != a || b.coefficient != a {
        return Err(Error::Coefficients("C and B must be A-algebras over the given A".into()));
    }
    let b_is_a = b.algebra.without_coefficients() == a && b.lambda().iter().enumerate().all(|(i, &m)| i == m);
    check(&c.algebra, &b.algebra, b_is_a, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::syntax::parse_atomic;

    fn atom(b: &FiniteAlgebra, vars: &[&str], text: &str) -> AtomicFormula {
        let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        parse_atomic(text, b.signature(), &vars, b.coefficient_count()).unwrap()
    }

    #[test]
    fn atp_examples() {
        let p = atp_of(&s2(), &[0, 1]).unwrap();
        assert_eq!(p.generated, vec![0, 1]);
        assert!(p.contains(&atom(&s2(), &["x1", "x2"], "meet(x1, x2) = x1")).unwrap());
        assert!(p.contains(&atom(&s2(), &["x1", "x2"], "x1 != x2")).unwrap());
        assert!(!p.contains(&atom(&s2(), &["x1", "x2"], "x1 = x2")).unwrap());

        let p = atp_of(&z2(), &[1]).unwrap();
        assert_eq!(p.generated, vec![0, 1]);
        assert!(p.contains(&atom(&z2(), &["x"], "mul(x, x) = e")).unwrap());
        assert!(p.contains(&atom(&z2(), &["x"], "x != e")).unwrap());

        let p = atp_of(&z4(), &[2]).unwrap();
        assert_eq!(p.generated, vec![0, 2]);
    }

    #[test]
    fn atp_with_repeats_and_realization() {
        let p = atp_of(&z4(), &[1, 1]).unwrap();
        assert!(p.contains(&atom(&z4(), &["x", "y"], "x = y")).unwrap());
        assert!(p.realized_by(&z4(), &[1, 1]));
        assert!(p.realized_by(&z4(), &[3, 3]));
        assert!(!p.realized_by(&z4(), &[1, 3]));
        assert!(!p.realized_by(&z4(), &[2, 2]));
        // Realizing tuples are exactly those with the same type.
        for t in tuples(4, 2) {
            let q = atp_of(&z4(), &t).unwrap();
            let same = (0..2).all(|i| q.generator_images[i] == p.generator_images[i]) && q.algebra == p.algebra;
            assert_eq!(p.realized_by(&z4(), &t), same || (t[0] == t[1] && t[0] % 2 == 1));
        }
    }

    #[test]
    fn theorem_a_examples() {
        let budget = Budget::default();
        let r = theorem_a_check(&z2(), &z2(), &budget).unwrap();
        assert!(r.all_true() && r.agreement);
        assert_eq!(r.generic_point_consistent, Some(true));

        let r = theorem_a_check(&z4(), &z2(), &budget).unwrap();
        assert!(r.all_false() && r.agreement);

        let e = FiniteAlgebra::trivial(s2().signature());
        let r = theorem_a_check(&e, &s2(), &budget).unwrap();
        assert!(r.all_true() && r.agreement);

        let r = theorem_a_check(&z2(), &z4(), &budget).unwrap();
        assert!(r.all_true() && r.agreement);
        let r = theorem_a_check(&v4(), &z4(), &budget).unwrap();
        assert!(r.all_false() && r.agreement);
    }

    #[test]
    fn theorem_a_on_all_fixture_pairs() {
        let budget = Budget::default();
        for (cn, c) in all() {
            for (bn, b) in all() {
                if c.signature() == b.signature() {
                    let r = theorem_a_check(&c, &b, &budget).unwrap();
                    assert!(r.agreement, "{cn} over {bn}: {:?}", r.holds());
                }
            }
        }
    }

    #[test]
    fn theorem_b_examples() {
        let budget = Budget::default();
        let z2a = CoefficientStructure::new(z2(), z2(), vec![0, 1]).unwrap();
        let r = theorem_b_check(&z2(), &z2a, &z2a, &budget).unwrap();
        assert!(r.all_true() && r.agreement);
        assert_eq!(
            r.remark,
            Some(RemarkVerdicts {
                universal_equivalent: true,
                existential_equivalent: true
            })
        );

        let z4a = CoefficientStructure::new(z2(), z4(), vec![0, 2]).unwrap();
        let r = theorem_b_check(&z2(), &z4a, &z4a, &budget).unwrap();
        assert!(r.all_true() && r.agreement);
        assert!(r.remark.is_none());

        let v4a = CoefficientStructure::new(z2(), v4(), vec![0, 1]).unwrap();
        let r = theorem_b_check(&z2(), &v4a, &z2a, &budget).unwrap();
        assert!(r.all_false() && r.agreement);
        assert_eq!(
            r.remark,
            Some(RemarkVerdicts {
                universal_equivalent: false,
                existential_equivalent: false
            })
        );

        // Z2 inside Z4 as an A-algebra is discriminated, Z4 inside Z2 is not.
        let r = theorem_b_check(&z2(), &z2a, &z4a, &budget).unwrap();
        assert!(r.all_true() && r.agreement);
        let r = theorem_b_check(&z2(), &z4a, &z2a, &budget).unwrap();
        assert!(r.all_false() && r.agreement);
    }

    #[test]
    fn trivial_coefficients_change_nothing() {
        let budget = Budget::default();
        let e = FiniteAlgebra::trivial(z2().signature());
        let groups = [z2(), z3(), z4(), v4()];
        for c in &groups {
            for b in &groups {
                let ca = CoefficientStructure::new(e.clone(), c.clone(), vec![0]).unwrap();
                let ba = CoefficientStructure::new(e.clone(), b.clone(), vec![0]).unwrap();
                let with = theorem_b_check(&e, &ca, &ba, &budget).unwrap();
                let without = theorem_a_check(c, b, &budget).unwrap();
                assert_eq!(with.holds(), without.holds());
            }
        }
    }

    #[test]
    fn mismatched_inputs_are_refused() {
        let budget = Budget::default();
        assert!(theorem_a_check(&z2(), &s2(), &budget).is_err());
        let z2a = CoefficientStructure::new(z2(), z2(), vec![0, 1]).unwrap();
        assert!(theorem_a_check(&z2a.algebra, &z2(), &budget).is_err());
        assert!(theorem_b_check(&z3(), &z2a, &z2a, &budget).is_err());
    }
}
