use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unialg::algebra::fixtures::*;
use unialg::algebra::{
    enumerate_homomorphisms, filterproduct, find_isomorphism, kernel, quotient, Congruence, Filter, FiniteAlgebra, HomMode,
};
use unialg::corpus::random_groupoid;
use unialg::geometry::{closed_intersection, closed_union, decompose, radical_member, solve, ClosedSet, EquationSystem};
use unialg::limits::{build_limit, canonical_system, formula_failures};
use unialg::models::{check_existential_sentence, check_universal_sentence};
use unialg::presentation::{congruent_closure_query, Presentation};
use unialg::suites::oracle;
use unialg::syntax::{parse_term, AtomicFormula, Matrix, QuantifiedFormula};
use unialg::unify::{atp_of, theorem_a_check};
use unialg::Budget;

fn fixture(k: usize) -> FiniteAlgebra {
    let all = all();
    all[k % all.len()].1.clone()
}

fn vars(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn equation(rng: &mut ChaCha8Rng, b: &FiniteAlgebra, n: usize) -> AtomicFormula {
    AtomicFormula::eq(
        oracle::random_term(rng, b.signature(), n, 2),
        oracle::random_term(rng, b.signature(), n, 2),
    )
}

fn system(rng: &mut ChaCha8Rng, b: &FiniteAlgebra, n: usize, count: usize) -> EquationSystem {
    let eqs = (0..count).map(|_| equation(rng, b, n)).collect();
    EquationSystem::new(b.signature().clone(), vars(n), eqs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_terms_parse_back(k in 0usize..10, seed: u64, n in 1usize..4) {
        let b = fixture(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = oracle::random_term(&mut rng, b.signature(), n, 4);
        let v = vars(n);
        let text = t.display(b.signature(), &v).to_string();
        prop_assert_eq!(parse_term(&text, b.signature(), &v).unwrap(), t);
    }

    #[test]
    fn evaluation_is_compositional(k in 0usize..10, seed: u64, point in proptest::collection::vec(0usize..4, 3)) {
        let b = fixture(k);
        let point: Vec<usize> = point.iter().map(|&x| x % b.size()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = oracle::random_term(&mut rng, b.signature(), 3, 3);
        prop_assert_eq!(b.eval(&t, &point).unwrap(), oracle::eval(&b, &t, &point));
    }

    #[test]
    fn radical_members_do_not_shrink_the_set(k in 0usize..10, seed: u64, n in 1usize..4, count in 0usize..5) {
        let b = fixture(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = system(&mut rng, &b, n, count);
        let budget = Budget::default();
        let y = solve(&s, &b, &budget).unwrap();
        for _ in 0..4 {
            let q = equation(&mut rng, &b, n);
            if radical_member(&y, &q).unwrap() {
                prop_assert_eq!(&solve(&s.extended([q]), &b, &budget).unwrap().points, &y.points);
            }
        }
    }

    #[test]
    fn decomposition_covers_with_an_antichain(k in 0usize..10, seed: u64, n in 1usize..4, count in 0usize..4) {
        let b = fixture(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = solve(&system(&mut rng, &b, n, count), &b, &Budget::default()).unwrap();
        let parts = decompose(&y, &Budget::default()).unwrap();
        let mut union: Vec<Vec<usize>> = parts.iter().flat_map(|p| p.points.clone()).collect();
        union.sort();
        union.dedup();
        prop_assert_eq!(&union, &y.points);
        for (i, p) in parts.iter().enumerate() {
            for (j, q) in parts.iter().enumerate() {
                prop_assert!(i == j || !p.is_subset(q));
            }
        }
    }

    #[test]
    fn closed_sets_are_a_lattice_of_point_sets(k in 0usize..10, seed: u64, n in 1usize..3) {
        let b = fixture(k);
        let budget = Budget::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y1 = ClosedSet::from_set(solve(&system(&mut rng, &b, n, 1), &b, &budget).unwrap());
        let y2 = ClosedSet::from_set(solve(&system(&mut rng, &b, n, 1), &b, &budget).unwrap());
        let join = closed_union(&y1, &y2).unwrap();
        let meet = closed_intersection(&y1, &y2, &budget).unwrap();
        for p in oracle::space(b.size(), n) {
            prop_assert_eq!(join.contains(&p), y1.contains(&p) || y2.contains(&p));
            prop_assert_eq!(meet.contains(&p), y1.contains(&p) && y2.contains(&p));
        }
    }

    #[test]
    fn closure_queries_are_monotone(seed: u64, count in 1usize..4) {
        let b = s2();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let relations: Vec<AtomicFormula> = (0..count).map(|_| equation(&mut rng, &b, 2)).collect();
        let small = Presentation::new(b.signature().clone(), vars(2), relations[..count - 1].to_vec()).unwrap();
        let big = Presentation::new(b.signature().clone(), vars(2), relations).unwrap();
        for _ in 0..5 {
            let q = equation(&mut rng, &b, 2);
            if congruent_closure_query(&small, &q, 3).unwrap() {
                prop_assert!(congruent_closure_query(&big, &q, 3).unwrap());
            }
        }
    }

    #[test]
    fn universal_and_existential_checks_are_dual(k in 0usize..10, seed: u64, n in 1usize..3) {
        let b = fixture(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lits = (0..3).map(|i| {
            let a = equation(&mut rng, &b, n);
            Matrix::Literal(if i == 1 { a.negate() } else { a })
        }).collect();
        let s = QuantifiedFormula::universal(vars(n), Matrix::Or(lits));
        let budget = Budget::default();
        let u = check_universal_sentence(&b, &s, &budget).unwrap();
        let e = check_existential_sentence(&b, &s.negate(), &budget).unwrap();
        prop_assert_eq!(u.holds, !e.holds);
    }

    #[test]
    fn principal_ultrapowers_return_the_factor(i in 0usize..3, k in 0usize..5) {
        let factors = [z2(), z3(), fixture(k)];
        let factors: Vec<FiniteAlgebra> = factors.iter().filter(|f| f.signature() == z2().signature()).cloned().collect();
        let i = i % factors.len();
        let u = filterproduct(&factors, &Filter::ultra_at(factors.len(), i).unwrap(), &Budget::default()).unwrap();
        prop_assert!(find_isomorphism(&u.algebra, &factors[i]).unwrap().is_some());
    }

    #[test]
    fn kernels_give_the_image(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_groupoid(&mut rng);
        let b = random_groupoid(&mut rng);
        for h in enumerate_homomorphisms(&c, &b, HomMode::All).unwrap() {
            let q = quotient(&c, &kernel(&h)).unwrap();
            let (image, _) = b.subalgebra(&h.image()).unwrap();
            prop_assert!(find_isomorphism(&q.algebra, &image).unwrap().is_some());
        }
    }

    #[test]
    fn congruence_meet_is_below_both(seed: u64, pairs in proptest::collection::vec((0usize..3, 0usize..3), 0..3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_groupoid(&mut rng);
        let t1 = Congruence::generated(&m, &pairs);
        let t2 = Congruence::generated(&m, &[(0, 1)]);
        let meet = t1.meet(&t2).unwrap();
        prop_assert!(meet.is_below(&t1) && meet.is_below(&t2));
        prop_assert!(meet.check(&m).is_ok());
        let join = t1.join(&t2, &m).unwrap();
        prop_assert!(t1.is_below(&join) && t2.is_below(&join));
    }

    #[test]
    fn groupoid_limits_round_trip(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_groupoid(&mut rng);
        let budget = Budget::default();
        let sys = canonical_system(&b, &budget).unwrap();
        let l = build_limit(&sys, &budget).unwrap();
        prop_assert!(formula_failures(&sys, &l).is_empty());
        prop_assert!(find_isomorphism(&l.algebra, &b).unwrap().is_some());
    }

    #[test]
    fn seven_conditions_agree_on_random_groupoids(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_groupoid(&mut rng);
        let b = random_groupoid(&mut rng);
        let r = theorem_a_check(&c, &b, &Budget::default()).unwrap();
        prop_assert!(r.agreement, "{:?}", r.holds());
        prop_assert_ne!(r.generic_point_consistent, Some(false));
    }

    #[test]
    fn a_tuple_realizes_its_own_type(k in 0usize..10, raw in proptest::collection::vec(0usize..4, 1..4)) {
        let b = fixture(k);
        let tuple: Vec<usize> = raw.iter().map(|&x| x % b.size()).collect();
        let p = atp_of(&b, &tuple).unwrap();
        prop_assert!(p.realized_by(&b, &tuple));
        prop_assert_eq!(p.algebra.size(), p.generated.len());
    }
}
