//! Presentations `⟨X | S⟩` and the word problem for them.
//!
//! Membership of `t = s` in the congruent closure `[S]` is decided by ground
//! congruence closure: variables act as free constants, and since the
//! closure rules have no substitution rule the procedure is complete.

use std::collections::HashMap;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::syntax::{AtomicFormula, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub sig: Signature,
    pub vars: Vec<String>,
    pub relations: Vec<AtomicFormula>,
}

impl Presentation {
    pub fn new(sig: Signature, vars: Vec<String>, relations: Vec<AtomicFormula>) -> Result<Self> {
        for r in &relations {
            if r.negated {
                return Err(Error::Shape("defining relations are equations".into()));
            }
            if !r.fits(&sig, vars.len(), 0) {
                return Err(Error::ForeignVariable(format!(
                    "relation {} is not over the presentation's variables and signature",
                    r.display(&sig, &vars)
                )));
            }
        }
        Ok(Presentation { sig, vars, relations })
    }

    pub fn max_depth(&self) -> usize {
        self.relations.iter().map(AtomicFormula::depth).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Leaf(Term),
    App(usize, Vec<usize>),
}

/// Hash-consed term graph with union-find, use lists and a signature table.
#[derive(Debug, Clone, Default)]
pub struct CongruentClosure {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
    parent: Vec<usize>,
    uses: Vec<Vec<usize>>,
    signatures: HashMap<(usize, Vec<usize>), usize>,
    pending: Vec<(usize, usize)>,
}

impl CongruentClosure {
    pub fn new() -> Self {
        CongruentClosure::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn key(&mut self, id: usize) -> Option<(usize, Vec<usize>)> {
        match self.nodes[id].clone() {
            Node::App(f, args) => Some((f, args.into_iter().map(|a| self.find(a)).collect())),
            Node::Leaf(_) => None,
        }
    }

    /// Insert `t` and its subterms; returns the node of `t`.
    pub fn add(&mut self, t: &Term) -> usize {
        let node = match t {
            Term::App(f, args) => Node::App(*f, args.iter().map(|a| self.add(a)).collect()),
            leaf => Node::Leaf(leaf.clone()),
        };
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.index.insert(node.clone(), id);
        self.parent.push(id);
        self.uses.push(Vec::new());
        if let Node::App(..) = node {
            let key = self.key(id).expect("application");
            for &r in &key.1 {
                self.uses[r].push(id);
            }
            match self.signatures.get(&key) {
                Some(&other) => {
                    self.pending.push((id, other));
                    self.propagate();
                }
                None => {
                    self.signatures.insert(key, id);
                }
            }
        }
        id
    }

    /// Assert `t = s`.
    pub fn merge_terms(&mut self, t: &Term, s: &Term) {
        let a = self.add(t);
        let b = self.add(s);
        self.pending.push((a, b));
        self.propagate();
    }

    fn propagate(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (ra, rb) = (self.find(a), self.find(b));
            if ra == rb {
                continue;
            }
            let (keep, gone) = if self.uses[ra].len() >= self.uses[rb].len() { (ra, rb) } else { (rb, ra) };
            self.parent[gone] = keep;
            let moved = std::mem::take(&mut self.uses[gone]);
            for u in moved {
                let key = self.key(u).expect("use-list entries are applications");
                match self.signatures.get(&key).copied() {
                    Some(v) => {
                        if self.find(v) != self.find(u) {
                            self.pending.push((u, v));
                        }
                    }
                    None => {
                        self.signatures.insert(key, u);
                    }
                }
                self.uses[keep].push(u);
            }
        }
    }

    /// Whether `t = s` holds in the current closure. Adds both terms.
    pub fn equal(&mut self, t: &Term, s: &Term) -> bool {
        let a = self.add(t);
        let b = self.add(s);
        self.find(a) == self.find(b)
    }
}

/// Upper limit on the term universe built for a depth bound.
pub const MAX_CLOSURE_NODES: usize = 100_000;

/// Whether `q` belongs to `[S]`. The term universe is the subterm closure
/// of `S ∪ {q}`, extended by every term up to `depth_bound` over the
/// presentation's variables and constants.
pub fn congruent_closure_query(p: &Presentation, q: &AtomicFormula, depth_bound: usize) -> Result<bool> {
    if q.negated {
        return Err(Error::Shape("queries are equations".into()));
    }
    if !q.fits(&p.sig, p.vars.len(), 0) {
        return Err(Error::ForeignVariable(format!(
            "query mentions symbols or variables outside ⟨{}⟩",
            p.vars.join(", ")
        )));
    }
    let need = p.max_depth().max(q.depth());
    if depth_bound < need {
        return Err(Error::Shape(format!(
            "depth bound {depth_bound} is below the depth {need} of the relations and query"
        )));
    }
    let mut cc = CongruentClosure::new();
    if depth_bound > need {
        for t in terms_up_to(&p.sig, p.vars.len(), depth_bound, MAX_CLOSURE_NODES)? {
            cc.add(&t);
        }
    }
    for r in &p.relations {
        cc.merge_terms(&r.lhs, &r.rhs);
    }
    Ok(cc.equal(&q.lhs, &q.rhs))
}

/// Every term of depth at most `depth` over `var_count` variables and the
/// constants of `sig`, shallow first.
pub fn terms_up_to(sig: &Signature, var_count: usize, depth: usize, cap: usize) -> Result<Vec<Term>> {
    let mut all: Vec<Term> = (0..var_count)
        .map(Term::Var)
        .chain((0..sig.constant_count()).map(Term::Const))
        .collect();
    let mut level_start = 0;
    for _ in 0..depth {
        let previous = all.len();
        let mut next = Vec::new();
        for f in 0..sig.function_count() {
            let n = sig.arity(f);
            // At least one argument from the newest level keeps terms unique.
            for args in crate::syntax::tuples(previous, n) {
                if args.iter().all(|&a| a < level_start) {
                    continue;
                }
                if all.len() + next.len() >= cap {
                    return Err(Error::bound("closure term universe", (all.len() + next.len() + 1) as u128, cap));
                }
                next.push(Term::App(f, args.iter().map(|&a| all[a].clone()).collect()));
            }
        }
        level_start = previous;
        all.extend(next);
    }
    Ok(all)
}

/// The multiplication-table presentation of `c`: variable `x{m}` per
/// element, one relation per table entry and per constant.
pub fn table_presentation(c: &FiniteAlgebra, generators: &[usize]) -> Result<Presentation> {
    let generated = c.generated_subalgebra(generators)?;
    if generated.universe.len() != c.size() {
        return Err(Error::NotGenerating);
    }
    let sig = c.signature().clone();
    let vars: Vec<String> = (0..c.size()).map(|m| format!("x{m}")).collect();
    let mut relations = Vec::new();
    for f in 0..sig.function_count() {
        for args in crate::syntax::tuples(c.size(), sig.arity(f)) {
            let lhs = Term::App(f, args.iter().map(|&a| Term::Var(a)).collect());
            relations.push(AtomicFormula::eq(lhs, Term::Var(c.apply(f, &args))));
        }
    }
    for k in 0..sig.constant_count() {
        relations.push(AtomicFormula::eq(Term::Const(k), Term::Var(c.constant(k))));
    }
    Presentation::new(sig, vars, relations)
}

/// All assignments `X -> B` satisfying every relation, by backtracking over
/// the variables in order; lexicographic.
pub fn realize_presentation_in(p: &Presentation, b: &FiniteAlgebra) -> Result<Vec<Vec<usize>>> {
    if &p.sig != b.signature() {
        return Err(Error::SignatureMismatch(format!("{} vs {}", p.sig, b.signature())));
    }
    let n = p.vars.len();
    let mut due: Vec<Vec<&AtomicFormula>> = vec![Vec::new(); n + 1];
    for r in &p.relations {
        due[r.max_var().map_or(0, |v| v + 1)].push(r);
    }
    let holds = |r: &AtomicFormula, point: &[usize]| b.eval_fast(&r.lhs, point) == b.eval_fast(&r.rhs, point);
    if !due[0].iter().all(|r| holds(r, &[])) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut point = vec![0; n];
    fn go<'a>(
        i: usize,
        point: &mut Vec<usize>,
        due: &[Vec<&'a AtomicFormula>],
        size: usize,
        holds: &dyn Fn(&AtomicFormula, &[usize]) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == point.len() {
            out.push(point.clone());
            return;
        }
        for v in 0..size {
            point[i] = v;
            if due[i + 1].iter().all(|r| holds(r, point)) {
                go(i + 1, point, due, size, holds, out);
            }
        }
    }
    go(0, &mut point, &due, b.size(), &holds, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::syntax::parse_atomic;

    fn unary_xy(relations: &[&str]) -> Presentation {
        let sig = unary_signature();
        let vars = vec!["x".to_string(), "y".to_string()];
        let rels = relations.iter().map(|r| parse_atomic(r, &sig, &vars, 0).unwrap()).collect();
        Presentation::new(sig, vars, rels).unwrap()
    }

    #[test]
    fn closure_queries() {
        let p = unary_xy(&["x = y"]);
        let q = |s: &str| parse_atomic(s, &p.sig, &p.vars, 0).unwrap();
        assert!(congruent_closure_query(&p, &q("f(f(x)) = f(f(y))"), 2).unwrap());
        assert!(!congruent_closure_query(&p, &q("x = f(x)"), 1).unwrap());
        assert!(congruent_closure_query(&p, &q("f(y) = f(y)"), 1).unwrap());
        assert!(congruent_closure_query(&p, &q("f(x) = x"), 0).is_err());
        for bound in 2..6 {
            assert!(!congruent_closure_query(&p, &q("x = f(x)"), bound).unwrap());
        }
    }

    #[test]
    fn upward_propagation_through_use_lists() {
        let p = unary_xy(&["f(x) = x"]);
        let q = parse_atomic("f(f(f(x))) = x", &p.sig, &p.vars, 0).unwrap();
        assert!(congruent_closure_query(&p, &q, 3).unwrap());
        let q = parse_atomic("f(f(y)) = y", &p.sig, &p.vars, 0).unwrap();
        assert!(!congruent_closure_query(&p, &q, 4).unwrap());
    }

    #[test]
    fn table_presentations() {
        let p = table_presentation(&z2(), &[0, 1]).unwrap();
        assert_eq!(p.vars, vec!["x0", "x1"]);
        assert_eq!(p.relations.len(), 4 + 2 + 1);
        let shown: Vec<String> = p.relations.iter().map(|r| r.display(&p.sig, &p.vars).to_string()).collect();
        for r in ["mul(x0, x0) = x0", "mul(x0, x1) = x1", "mul(x1, x1) = x0", "inv(x1) = x1", "e = x0"] {
            assert!(shown.iter().any(|s| s == r), "{r}");
        }
        let e = table_presentation(&FiniteAlgebra::trivial(&group_signature()), &[]).unwrap();
        assert_eq!(e.vars.len(), 1);
        assert_eq!(table_presentation(&s2(), &[0, 1]).unwrap().relations.len(), 4);
        assert_eq!(table_presentation(&s2(), &[1]), Err(Error::NotGenerating));
    }

    #[test]
    fn realizations() {
        let p = table_presentation(&z2(), &[0, 1]).unwrap();
        // Brute force over Z2^2: 2x0 = x0 pins x0 = 0, and x1 is free.
        assert_eq!(realize_presentation_in(&p, &z2()).unwrap(), vec![vec![0, 0], vec![0, 1]]);

        let free = Presentation::new(s2().signature().clone(), vec!["a".into(), "b".into()], vec![]).unwrap();
        assert_eq!(realize_presentation_in(&free, &s2()).unwrap().len(), 4);

        let sig = unary_signature();
        let fixed = Presentation::new(
            sig.clone(),
            vec!["x".into()],
            vec![parse_atomic("x = f(x)", &sig, &["x".to_string()], 0).unwrap()],
        )
        .unwrap();
        assert!(realize_presentation_in(&fixed, &n2()).unwrap().is_empty());
    }

    #[test]
    fn term_universe_counts() {
        let terms = terms_up_to(&unary_signature(), 1, 3, 100).unwrap();
        assert_eq!(terms.len(), 4);
        let meet = terms_up_to(&meet_signature(), 2, 2, 1000).unwrap();
        // 2 atoms, then 4 new, then 36 - 4 new.
        assert_eq!(meet.len(), 2 + 4 + 32);
        assert!(terms_up_to(&meet_signature(), 2, 4, 1000).unwrap_err().is_resource_bound());
    }
}
