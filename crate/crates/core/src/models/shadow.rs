use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_existential_sentence, check_universal_sentence, induced_diagram, subsets};
use crate::algebra::FiniteAlgebra;
use crate::error::{Budget, Result};
use crate::syntax::{AtomicFormula, Matrix, QuantifiedFormula, Reduct, Signature, Term};

/// Universal sentences used to compare universal theories from below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowPool {
    pub sentences: Vec<QuantifiedFormula>,
}

/// Seeded random clauses `∀x̄ (l1 | l2 | l3)` over terms of depth at most 2
/// in at most `min(|C|, 3)` variables, followed by the negated diagram
/// `∀x̄ ¬Diag(N)` of every local submodel `N` of `c` over its full language.
pub fn shadow_pool(c: &FiniteAlgebra, seed: u64, random: usize) -> ShadowPool {
    let sig = c.signature();
    let ncoef = c.coefficient_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sentences = Vec::new();
    let max_vars = c.size().clamp(1, 3);
    for _ in 0..random {
        let n = rng.gen_range(1..=max_vars);
        let width = rng.gen_range(1..=3);
        let lits = (0..width)
            .map(|_| {
                let a = AtomicFormula::eq(random_term(&mut rng, sig, n, ncoef, 2), random_term(&mut rng, sig, n, ncoef, 2));
                Matrix::Literal(if rng.gen_bool(0.3) { a.negate() } else { a })
            })
            .collect();
        let vars = (0..n).map(|i| format!("x{i}")).collect();
        sentences.push(QuantifiedFormula::universal(vars, Matrix::Or(lits)));
    }
    let full = Reduct::full(sig, ncoef);
    for size in 1..=c.size() {
        for universe in subsets(c.size(), size) {
            let phi = induced_diagram(c, &full, &universe).expect("full reduct fits");
            let matrix = Matrix::Or(phi.conjuncts.iter().map(|a| Matrix::Literal(a.negate())).collect());
            sentences.push(QuantifiedFormula::universal(phi.vars.clone(), matrix));
        }
    }
    ShadowPool { sentences }
}

fn random_term(rng: &mut ChaCha8Rng, sig: &Signature, n: usize, ncoef: usize, depth: usize) -> Term {
    let leaves = n + sig.constant_count() + ncoef;
    if depth == 0 || sig.function_count() == 0 || rng.gen_bool(0.4) {
        let k = rng.gen_range(0..leaves);
        return if k < n {
            Term::Var(k)
        } else if k < n + sig.constant_count() {
            Term::Const(k - n)
        } else {
            Term::Coef(k - n - sig.constant_count())
        };
    }
    let f = rng.gen_range(0..sig.function_count());
    let args = (0..sig.arity(f)).map(|_| random_term(rng, sig, n, ncoef, depth - 1)).collect();
    Term::App(f, args)
}

/// Truth of a universal sentence. When the negation is a conjunction it is
/// refuted by backtracking, which keeps wide diagram sentences cheap.
fn universal_holds(b: &FiniteAlgebra, s: &QuantifiedFormula, budget: &Budget) -> Result<bool> {
    let dual = s.negate();
    if let Matrix::And(parts) = &dual.matrix {
        if parts.iter().all(|p| matches!(p, Matrix::Literal(_))) {
            return Ok(!check_existential_sentence(b, &dual, budget)?.holds);
        }
    }
    Ok(check_universal_sentence(b, s, budget)?.holds)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowVerdict {
    pub holds: bool,
    /// A pool sentence true in `B` and false in `C`.
    pub separating: Option<QuantifiedFormula>,
    pub checked: usize,
}

/// `Th∀(B) ⊆ Th∀(C)` restricted to the pool.
pub fn ucl_shadow(c: &FiniteAlgebra, b: &FiniteAlgebra, pool: &ShadowPool, budget: &Budget) -> Result<ShadowVerdict> {
    for (i, s) in pool.sentences.iter().enumerate() {
        if universal_holds(b, s, budget)? && !universal_holds(c, s, budget)? {
            return Ok(ShadowVerdict {
                holds: false,
                separating: Some(s.clone()),
                checked: i + 1,
            });
        }
    }
    Ok(ShadowVerdict {
        holds: true,
        separating: None,
        checked: pool.sentences.len(),
    })
}
