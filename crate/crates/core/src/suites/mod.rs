//! Property suites over the corpus, each checked against [`oracle`].
//! One suite per acceptance criterion plus a few secondary invariants.

pub mod oracle;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::fixtures::{constants_signature, group_signature, groupoid_signature, meet_signature, unary_signature};
use crate::algebra::{
    direct_product, enumerate_homomorphisms, filterproduct, find_isomorphism, first_homomorphism, is_a_algebra, kernel,
    quotient, Congruence, Filter, FiniteAlgebra, HomMode,
};
use crate::corpus::{CoefficientTriple, Corpus};
use crate::error::{Budget, Result};
use crate::geometry::{
    coordinate_algebra, decompose, decompose_with, is_irreducible, radical_member, solve, trace_subalgebra,
    AlgebraicSet, DecompositionOrder, EquationSystem,
};
use crate::limits::{audit_well_definedness, build_limit, canonical_system, embed_into_factors, formula_failures};
use crate::models::{
    discriminates, exists_theory_included, locally_embeddable, separates, shadow_pool, ucl_shadow, ClassK,
};
use crate::presentation::{congruent_closure_query, Presentation};
use crate::syntax::{AtomicFormula, Signature};
use crate::unify::{theorem_a_check, theorem_b_check};

/// Sizes and seed of a suite run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub systems: usize,
    pub presentations: usize,
    pub congruence_pairs: usize,
    pub pool_size: usize,
    pub budget: Budget,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> SuiteConfig {
        SuiteConfig {
            seed,
            systems: 200,
            presentations: 100,
            congruence_pairs: 50,
            pool_size: 40,
            budget: Budget::default(),
        }
    }
}

/// Failures are kept up to this many; the count is always exact.
const KEEP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    /// Acceptance criterion number, for the primary suites.
    pub criterion: Option<usize>,
    pub checks: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteOutcome {
    fn new(name: &'static str, criterion: Option<usize>) -> SuiteOutcome {
        SuiteOutcome {
            name,
            criterion,
            checks: 0,
            failed: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEEP {
                self.failures.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

fn timed(mut outcome: SuiteOutcome, start: Instant) -> SuiteOutcome {
    outcome.elapsed = start.elapsed();
    outcome
}

fn random_equation(rng: &mut ChaCha8Rng, sig: &Signature, n: usize, depth: usize) -> AtomicFormula {
    AtomicFormula::eq(
        oracle::random_term(rng, sig, n, depth),
        oracle::random_term(rng, sig, n, depth),
    )
}

fn vars(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// Random systems over the fixtures of the corpus: `n <= 3`, at most four
/// equations of depth at most 2.
pub fn random_systems(corpus: &Corpus, cfg: &SuiteConfig) -> Result<Vec<(String, EquationSystem, FiniteAlgebra)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let fixtures = corpus.fixtures();
    let mut out = Vec::with_capacity(cfg.systems);
    for _ in 0..cfg.systems {
        let (name, b) = &fixtures[rng.gen_range(0..fixtures.len())];
        let n = rng.gen_range(1..=3);
        let count = rng.gen_range(0..=4);
        let eqs = (0..count).map(|_| random_equation(&mut rng, b.signature(), n, 2)).collect();
        out.push((name.clone(), EquationSystem::new(b.signature().clone(), vars(n), eqs)?, b.clone()));
    }
    Ok(out)
}

/// Criterion 1. Returns the solved sets for the decomposition suite.
pub fn galois_suite(corpus: &Corpus, cfg: &SuiteConfig) -> Result<(SuiteOutcome, Vec<AlgebraicSet>)> {
    let start = Instant::now();
    let mut out = SuiteOutcome::new("galois-connection", Some(1));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9a10);
    let mut sets = Vec::new();
    for (name, sys, b) in random_systems(corpus, cfg)? {
        let y = solve(&sys, &b, &cfg.budget)?;
        let brute = oracle::solutions(&b, sys.len(), &sys.equations);
        out.check(y.points == brute, || format!("{name}: solve disagrees with enumeration"));
        let trace = if y.is_empty() { None } else { Some(trace_subalgebra(&y, &cfg.budget)?) };
        let mut queries: Vec<AtomicFormula> = sys.equations.clone();
        queries.extend((0..6).map(|_| random_equation(&mut rng, b.signature(), sys.len(), 2)));
        for q in &queries {
            let truth = oracle::in_radical(&b, &brute, q);
            let direct = radical_member(&y, q)?;
            let traced = trace.as_ref().map_or(true, |t| t.in_radical(q));
            let shown = || q.display(b.signature(), &sys.vars).to_string();
            out.check(direct == truth && traced == truth, || format!("{name}: radical membership of {}", shown()));
            if direct {
                let bigger = solve(&sys.extended([q.clone()]), &b, &cfg.budget)?;
                out.check(bigger.points == y.points, || format!("{name}: V(S ∪ {{{}}}) shrinks", shown()));
            }
        }
        sets.push(y);
    }
    Ok((timed(out, start), sets))
}

/// Criterion 2.
pub fn decomposition_suite(sets: &[AlgebraicSet], cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut out = SuiteOutcome::new("decomposition", Some(2));
    for y in sets.iter().filter(|y| !y.is_empty()) {
        let b = &y.algebra;
        let label = || format!("{} points in {}^{}", y.points.len(), b.size(), y.n());
        let forward = decompose_with(y, DecompositionOrder::Forward, &cfg.budget)?;
        let reverse = decompose_with(y, DecompositionOrder::Reverse, &cfg.budget)?;
        let canon = |parts: &[AlgebraicSet]| {
            let mut p: Vec<Vec<Vec<usize>>> = parts.iter().map(|c| c.points.clone()).collect();
            p.sort();
            p
        };
        out.check(canon(&forward) == canon(&reverse), || format!("{}: orders disagree", label()));
        let union: BTreeSet<Vec<usize>> = forward.iter().flat_map(|c| c.points.iter().cloned()).collect();
        out.check(union == y.point_set(), || format!("{}: union differs from Y", label()));
        for (i, c) in forward.iter().enumerate() {
            out.check(oracle::generic_point(b, y.n(), &c.points).is_some(), || {
                format!("{}: component {i} has no generic point", label())
            });
            out.check(c.recheck(&cfg.budget)?, || format!("{}: component {i} system does not re-solve", label()));
            for (j, d) in forward.iter().enumerate() {
                out.check(i == j || !c.is_subset(d), || format!("{}: component {i} inside {j}", label()));
            }
            let again = decompose(c, &cfg.budget)?;
            out.check(again.len() == 1 && again[0].points == c.points, || {
                format!("{}: component {i} decomposes further", label())
            });
        }
        let whole = is_irreducible(y, &cfg.budget)?.is_irreducible();
        out.check(whole == oracle::generic_point(b, y.n(), &y.points).is_some(), || {
            format!("{}: irreducibility disagrees with the oracle", label())
        });
        out.check(whole == (forward.len() == 1), || format!("{}: irreducible but split", label()));
    }
    Ok(timed(out, start))
}

/// Secondary: coordinate algebras are separated by point evaluations,
/// irreducibility matches discrimination, and generator-respecting
/// homomorphisms into `B` are the points.
pub fn coordinate_suite(sets: &[AlgebraicSet], cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut out = SuiteOutcome::new("coordinate-algebras", None);
    for y in sets.iter().filter(|y| !y.is_empty()) {
        let b = &y.algebra;
        let gamma = coordinate_algebra(y, &cfg.budget)?;
        if gamma.algebra.size() > 64 {
            continue;
        }
        let label = || format!("{} points in {}^{}", y.points.len(), b.size(), y.n());
        for p in 0..y.points.len() {
            let h = gamma.trace.evaluation(p);
            out.check(oracle::is_homomorphism(&h, &gamma.algebra, b, false), || {
                format!("{}: evaluation at point {p} is not a homomorphism", label())
            });
        }
        let k = gamma.algebra.size();
        let separated = (0..k).all(|e| {
            (e + 1..k).all(|f| (0..y.points.len()).any(|p| gamma.trace.values[e][p] != gamma.trace.values[f][p]))
        });
        out.check(separated, || format!("{}: Γ(Y) not separated", label()));
        let irreducible = is_irreducible(y, &cfg.budget)?.is_irreducible();
        let dis = discriminates(&ClassK::single(b.clone()), &gamma.algebra)?.holds;
        out.check(irreducible == dis, || format!("{}: irreducible {irreducible}, discriminated {dis}", label()));
        let homs = enumerate_homomorphisms(&gamma.algebra, b, HomMode::All)?;
        let images: BTreeSet<Vec<usize>> = homs
            .iter()
            .map(|h| gamma.generators.iter().map(|&g| h.apply(g)).collect())
            .collect();
        out.check(homs.len() == y.points.len() && images == y.point_set(), || {
            format!("{}: {} homomorphisms for {} points", label(), homs.len(), y.points.len())
        });
    }
    Ok(timed(out, start))
}

/// Criterion 3.
pub fn agreement_suite(corpus: &Corpus, cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut out = SuiteOutcome::new("theorem-a-agreement", Some(3));
    let (mut all_true, mut all_false) = (0, 0);
    let pairs = corpus.pairs();
    for &(c, b) in &pairs {
        let (cn, ca) = &corpus.algebras[c];
        let (bn, ba) = &corpus.algebras[b];
        let r = theorem_a_check(ca, ba, &cfg.budget)?;
        out.check(r.agreement, || format!("{cn} over {bn}: verdicts {:?}", r.holds()));
        out.check(r.generic_point_consistent != Some(false), || {
            format!("{cn} over {bn}: generic point does not realize the type")
        });
        all_true += usize::from(r.all_true());
        all_false += usize::from(r.all_false());
    }
    out.check(pairs.len() >= 40, || format!("only {} pairs", pairs.len()));
    out.check(all_true >= 5, || format!("only {all_true} all-true pairs"));
    out.check(all_false >= 5, || format!("only {all_false} all-false pairs"));
    out.notes.push(format!("{} pairs, {all_true} all-true, {all_false} all-false", pairs.len()));
    Ok(timed(out, start))
}

/// Criterion 4, plus the reduction to the plain check under a trivial
/// coefficient algebra.
pub fn coefficient_suite(corpus: &Corpus, triples: &[CoefficientTriple], cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut out = SuiteOutcome::new("theorem-b-agreement", Some(4));
    let mut remarks = 0;
    for t in triples {
        let r = theorem_b_check(&t.a, &t.c, &t.b, &cfg.budget)?;
        out.check(r.agreement, || format!("{}: verdicts {:?} remark {:?}", t.label, r.holds(), r.remark));
        out.check(r.remark.is_some() == t.b_is_a(), || format!("{}: remark presence", t.label));
        remarks += usize::from(r.remark.is_some());
    }
    out.check(triples.len() >= 10, || format!("only {} triples", triples.len()));
    out.check(remarks > 0, || "no triple with B = A".into());
    let groups: Vec<&FiniteAlgebra> = corpus
        .algebras
        .iter()
        .map(|(_, a)| a)
        .filter(|a| a.signature() == &group_signature())
        .collect();
    let e = FiniteAlgebra::trivial(&group_signature());
    for c in &groups {
        for b in &groups {
            let ca = crate::algebra::CoefficientStructure::new(e.clone(), (*c).clone(), vec![c.constant(0)])?;
            let ba = crate::algebra::CoefficientStructure::new(e.clone(), (*b).clone(), vec![b.constant(0)])?;
            let with = theorem_b_check(&e, &ca, &ba, &cfg.budget)?.holds();
            let without = theorem_a_check(c, b, &cfg.budget)?.holds();
            out.check(with == without, || format!("trivial coefficients change {without:?} to {with:?}"));
        }
    }
    out.notes.push(format!("{} triples, {remarks} with B = A", triples.len()));
    Ok(timed(out, start))
}

/// Criterion 5, with formula preservation, the representative audit and
/// the A-algebra property on the coefficient algebras of `triples`.
pub fn limit_suite(corpus: &Corpus, triples: &[CoefficientTriple], cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut out = SuiteOutcome::new("limit-round-trip", Some(5));
    let mut targets: Vec<(String, FiniteAlgebra, Option<FiniteAlgebra>)> =
        corpus.algebras.iter().map(|(n, a)| (n.clone(), a.clone(), None)).collect();
    for t in triples {
        targets.push((format!("{} (C)", t.label), t.c.algebra.clone(), Some(t.a.clone())));
    }
    for (name, b, a) in &targets {
        let sys = canonical_system(b, &cfg.budget)?;
        let limit = build_limit(&sys, &cfg.budget)?;
        let iso = if b.coefficient_count() > 0 {
            (limit.algebra.size() == b.size())
                .then(|| first_homomorphism(&limit.algebra, b, HomMode::FixingInjective, &[]))
                .transpose()?
                .flatten()
        } else {
            find_isomorphism(&limit.algebra, b)?
        };
        out.check(iso.is_some(), || format!("{name}: limit not isomorphic"));
        out.check(formula_failures(&sys, &limit).is_empty(), || format!("{name}: a formula fails in the limit"));
        let audited = audit_well_definedness(&sys, &limit, cfg.seed, 64);
        out.check(audited.is_ok(), || format!("{name}: representative audit failed"));
        let e = embed_into_factors(&sys, &limit, &vec![b.clone(); sys.len()])?;
        let map = &e.embedding.map;
        out.check(
            oracle::is_injective(map) && oracle::is_homomorphism(map, &limit.algebra, b, b.coefficient_count() > 0),
            || format!("{name}: factor embedding fails the table check"),
        );
        if let Some(a) = a {
            out.check(is_a_algebra(a, &limit.algebra).holds, || format!("{name}: limit is not an A-algebra"));
        }
    }
    Ok(timed(out, start))
}

/// Signatures and variable counts for random presentations, chosen so the
/// depth-3 term universe stays in the low thousands.
fn presentation_shapes() -> Vec<(Signature, usize)> {
    vec![
        (meet_signature(), 2),
        (group_signature(), 1),
        (unary_signature(), 2),
        (groupoid_signature(), 2),
        (constants_signature(), 2),
    ]
}

/// Criterion 6, plus monotonicity, stability and semantic soundness.
pub fn closure_suite(corpus: &Corpus, cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut out = SuiteOutcome::new("closure-oracle", Some(6));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xcc);
    let shapes = presentation_shapes();
    for k in 0..cfg.presentations {
        let (sig, n) = &shapes[k % shapes.len()];
        let count: usize = rng.gen_range(0..=3);
        let relations: Vec<AtomicFormula> = (0..count).map(|_| random_equation(&mut rng, sig, *n, 2)).collect();
        let p = Presentation::new(sig.clone(), vars(*n), relations.clone())?;
        let fewer = Presentation::new(sig.clone(), vars(*n), relations[..count.saturating_sub(1)].to_vec())?;
        let sat = oracle::Saturation::new(oracle::terms(sig, *n, 3), &relations);
        let mut queries: Vec<AtomicFormula> = (0..10).map(|_| random_equation(&mut rng, sig, *n, 2)).collect();
        for r in &relations {
            queries.push(AtomicFormula::eq(r.rhs.clone(), r.lhs.clone()));
        }
        let models: Vec<&FiniteAlgebra> = corpus
            .algebras
            .iter()
            .map(|(_, a)| a)
            .filter(|a| a.signature() == sig && a.size().pow(*n as u32) <= 64)
            .collect();
        for q in &queries {
            let need = p.max_depth().max(q.depth());
            let cc = congruent_closure_query(&p, q, need)?;
            let shown = || format!("presentation {k}: {}", q.display(sig, &p.vars));
            out.check(sat.related(&q.lhs, &q.rhs) == Some(cc), || format!("{} disagrees with saturation", shown()));
            out.check(congruent_closure_query(&p, q, need + 1)? == cc, || format!("{} changes with depth", shown()));
            if congruent_closure_query(&fewer, q, fewer.max_depth().max(q.depth()))? {
                out.check(cc, || format!("{} lost when adding a relation", shown()));
            }
            if cc {
                for b in &models {
                    let sound = oracle::solutions(b, *n, &relations).iter().all(|pt| oracle::holds(b, q, pt));
                    out.check(sound, || format!("{} fails in a model", shown()));
                }
            }
        }
    }
    Ok(timed(out, start))
}

/// Criterion 7.
pub fn ucl_suite(corpus: &Corpus, cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut out = SuiteOutcome::new("ucl-two-ways", Some(7));
    let pools: Vec<_> = corpus
        .algebras
        .iter()
        .enumerate()
        .map(|(i, (_, c))| shadow_pool(c, cfg.seed.wrapping_add(i as u64), cfg.pool_size))
        .collect();
    for (c, b) in corpus.pairs() {
        let (cn, ca) = &corpus.algebras[c];
        let (bn, ba) = &corpus.algebras[b];
        let v = locally_embeddable(ca, &ClassK::single(ba.clone()))?;
        let s = ucl_shadow(ca, ba, &pools[c], &cfg.budget)?;
        out.check(v.holds == s.holds, || format!("{cn} over {bn}: Ucl {} vs shadow {}", v.holds, s.holds));
        match &v.certificate {
            None => out.check(v.holds, || format!("{cn} over {bn}: false without certificate")),
            Some(cert) => {
                let phi = &cert.formula;
                let conj: Vec<&AtomicFormula> = phi.conjuncts.iter().collect();
                let in_c = conj.iter().all(|a| oracle::holds(ca, a, &cert.universe));
                let in_b = oracle::space(ba.size(), phi.vars.len())
                    .iter()
                    .any(|pt| conj.iter().all(|a| oracle::holds(ba, a, pt)));
                out.check(!v.holds && in_c && !in_b, || format!("{cn} over {bn}: certificate does not refute"));
            }
        }
    }
    Ok(timed(out, start))
}

/// Secondary: discrimination, ∃-inclusion and embeddability coincide,
/// discrimination implies local embeddability, separation matches
/// embeddability into a power of `B` of at most 64 elements.
pub fn class_suite(corpus: &Corpus, _cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut out = SuiteOutcome::new("class-operators", None);
    let budget = Budget::default();
    let mut beyond = 0;
    for (c, b) in corpus.pairs() {
        let (cn, ca) = &corpus.algebras[c];
        let (bn, ba) = &corpus.algebras[b];
        let k = ClassK::single(ba.clone());
        let dis = discriminates(&k, ca)?.holds;
        let inc = exists_theory_included(ca, ba, &budget)?.holds;
        let emb = first_homomorphism(ca, ba, HomMode::Injective, &[])?.is_some();
        out.check(dis == inc && inc == emb, || format!("{cn} over {bn}: dis {dis}, ∃ {inc}, embedding {emb}"));
        if dis {
            out.check(locally_embeddable(ca, &k)?.holds, || format!("{cn} over {bn}: Dis without Ucl"));
        }
        let res = separates(&k, ca)?.holds;
        let mut power = None;
        let mut e = 1;
        while power.is_none() && (e == 1 || (ba.size() > 1 && ba.size().pow(e) <= 64)) {
            let p = direct_product(&vec![ba.clone(); e as usize], &budget)?;
            power = first_homomorphism(ca, &p.algebra, HomMode::Injective, &[])?.map(|_| e);
            e += 1;
        }
        match power {
            Some(_) => out.check(res, || format!("{cn} over {bn}: embeds in a power but not separated")),
            None if res => beyond += 1,
            None => out.check(true, String::new),
        }
    }
    out.notes.push(format!("{beyond} separated pairs need a power beyond 64 elements"));
    Ok(timed(out, start))
}

/// Criterion 8.
pub fn operator_suite(corpus: &Corpus, cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut out = SuiteOutcome::new("operator-identities", Some(8));
    let by = |n: &str| corpus.get(n).cloned();
    let families: Vec<Vec<FiniteAlgebra>> = [
        vec!["Z2", "Z3"],
        vec!["Z2", "Z4", "V4"],
        vec!["S2", "E_meet"],
        vec!["N2", "U00", "U01"],
        vec!["C01", "E_const"],
        vec!["G0", "G1"],
    ]
    .iter()
    .map(|names| names.iter().filter_map(|n| by(n)).collect())
    .collect();
    for factors in families.iter().filter(|f| !f.is_empty()) {
        for i in 0..factors.len() {
            let d = Filter::ultra_at(factors.len(), i)?;
            out.check(d.is_ultrafilter() && d.ultra_index() == Some(i), || format!("ultrafilter at {i} misreported"));
            let u = filterproduct(factors, &d, &cfg.budget)?;
            out.check(find_isomorphism(&u.algebra, &factors[i])?.is_some(), || {
                format!("ultraproduct at {i} of {} factors not ≅ factor", factors.len())
            });
        }
        if factors.len() > 1 {
            let t = Filter::trivial(factors.len())?;
            out.check(!t.is_ultrafilter(), || "the trivial filter reported ultra".into());
        }
    }

    let small: Vec<&(String, FiniteAlgebra)> = corpus.algebras.iter().filter(|(_, a)| a.size() <= 4).collect();
    for (cn, c) in &small {
        for (bn, b) in &small {
            if c.signature() != b.signature() {
                continue;
            }
            for h in enumerate_homomorphisms(c, b, HomMode::All)? {
                let q = quotient(c, &kernel(&h))?;
                let (image, inclusion) = b.subalgebra(&h.image())?;
                // m/ker h ↦ h(m), read through the image's relabelling.
                let mut induced = vec![usize::MAX; q.algebra.size()];
                for m in 0..c.size() {
                    let at = inclusion.map.binary_search(&h.apply(m)).expect("image element");
                    induced[q.projection.apply(m)] = at;
                }
                out.check(
                    oracle::is_injective(&induced)
                        && induced.len() == image.size()
                        && oracle::is_homomorphism(&induced, &q.algebra, &image, false),
                    || format!("{cn} -> {bn}: first isomorphism fails for {:?}", h.map),
                );
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xd1a6);
    let pool: Vec<&FiniteAlgebra> = corpus.algebras.iter().map(|(_, a)| a).filter(|a| a.size() >= 2).collect();
    for k in 0..cfg.congruence_pairs {
        let m = pool[rng.gen_range(0..pool.len())];
        let random_pairs = |rng: &mut ChaCha8Rng| -> Vec<(usize, usize)> {
            (0..rng.gen_range(0..=2))
                .map(|_| (rng.gen_range(0..m.size()), rng.gen_range(0..m.size())))
                .collect()
        };
        let t1 = Congruence::generated(m, &random_pairs(&mut rng));
        let t2 = Congruence::generated(m, &random_pairs(&mut rng));
        let meet = t1.meet(&t2)?;
        let (q, q1, q2) = (quotient(m, &meet)?, quotient(m, &t1)?, quotient(m, &t2)?);
        let prod = direct_product(&[q1.algebra.clone(), q2.algebra.clone()], &cfg.budget)?;
        let mut diagonal = vec![usize::MAX; q.algebra.size()];
        let mut well_defined = true;
        for x in 0..m.size() {
            let v = prod.encode(&[q1.projection.apply(x), q2.projection.apply(x)]);
            let slot = &mut diagonal[q.projection.apply(x)];
            well_defined &= *slot == usize::MAX || *slot == v;
            *slot = v;
        }
        out.check(
            well_defined && oracle::is_injective(&diagonal) && oracle::is_homomorphism(&diagonal, &q.algebra, &prod.algebra, false),
            || format!("congruence pair {k}: diagonal map is not an embedding"),
        );
    }
    Ok(timed(out, start))
}

/// Every suite in criterion order, secondary suites last.
pub fn run_all(corpus: &Corpus, triples: &[CoefficientTriple], cfg: &SuiteConfig) -> Result<Vec<SuiteOutcome>> {
    let (galois, sets) = galois_suite(corpus, cfg)?;
    Ok(vec![
        galois,
        decomposition_suite(&sets, cfg)?,
        agreement_suite(corpus, cfg)?,
        coefficient_suite(corpus, triples, cfg)?,
        limit_suite(corpus, triples, cfg)?,
        closure_suite(corpus, cfg)?,
        ucl_suite(corpus, cfg)?,
        operator_suite(corpus, cfg)?,
        coordinate_suite(&sets, cfg)?,
        class_suite(corpus, cfg)?,
    ])
}
