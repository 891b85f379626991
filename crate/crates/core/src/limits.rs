//! Direct systems of diagram formulas and their limit algebras.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FiniteAlgebra, Homomorphism};
use crate::error::{Budget, Error, Result};
use crate::models::{induced_diagram, realizable};
use crate::order::Poset;
use crate::syntax::{substitute, AtomicFormula, DiagramFormula, DiagramViolation, Reduct, Signature, Term, VariableMap};

/// `Λ = (I, φ_i, γ_ij)` with a finite explicit order. `maps` holds `γ_ij`
/// for every `i ≤ j`. `target` is the reduct the limit should interpret;
/// coverage is checked against it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaDirectSystem {
    pub sig: Signature,
    pub coefficient_count: usize,
    pub target: Reduct,
    pub labels: Vec<String>,
    pub order: Poset,
    pub formulas: Vec<DiagramFormula>,
    pub maps: BTreeMap<(usize, usize), VariableMap>,
}

impl FormulaDirectSystem {
    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// A chain `0 ≤ 1 ≤ ... ≤ m-1` from consecutive maps; longer maps are
    /// composed.
    pub fn chain(
        sig: Signature,
        coefficient_count: usize,
        formulas: Vec<DiagramFormula>,
        steps: Vec<VariableMap>,
    ) -> Result<FormulaDirectSystem> {
        let m = formulas.len();
        if steps.len() + 1 != m.max(1) {
            return Err(Error::DirectSystem(format!("{m} formulas need {} steps", m.saturating_sub(1))));
        }
        let mut maps = BTreeMap::new();
        for i in 0..m {
            let mut g = VariableMap::identity(formulas[i].vars.len());
            maps.insert((i, i), g.clone());
            for (j, step) in steps.iter().enumerate().skip(i) {
                g = g.then(step);
                maps.insert((i, j + 1), g.clone());
            }
        }
        Ok(FormulaDirectSystem {
            target: Reduct::full(&sig, coefficient_count),
            sig,
            coefficient_count,
            labels: (0..m).map(|i| i.to_string()).collect(),
            order: Poset::chain(m),
            formulas,
            maps,
        })
    }

    pub fn gamma(&self, i: usize, j: usize) -> &VariableMap {
        &self.maps[&(i, j)]
    }
}

/// One failed condition, with the indices and conjunct involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemViolation {
    NotDirected { i: usize, j: usize },
    InvalidFormula { index: usize, violations: Vec<DiagramViolation> },
    MissingMap { i: usize, j: usize },
    BadMap { i: usize, j: usize, reason: String },
    NotIdentity { index: usize },
    Cocycle { i: usize, j: usize, k: usize },
    Transport { i: usize, j: usize, conjunct: AtomicFormula },
    UncoveredConstant { constant: Term },
    UncoveredOperation { function: usize, index: usize, args: Vec<usize> },
}

impl SystemViolation {
    pub fn is_coverage(&self) -> bool {
        matches!(
            self,
            SystemViolation::UncoveredConstant { .. } | SystemViolation::UncoveredOperation { .. }
        )
    }

    pub fn describe(&self, sys: &FormulaDirectSystem) -> String {
        let label = |i: &usize| sys.labels.get(*i).cloned().unwrap_or_else(|| i.to_string());
        match self {
            SystemViolation::NotDirected { i, j } => {
                format!("indices {} and {} have no common upper bound", label(i), label(j))
            }
            SystemViolation::InvalidFormula { index, violations } => format!(
                "formula at {} is not a consistent diagram formula: {}",
                label(index),
                violations
                    .iter()
                    .map(|v| v.describe(&sys.sig, &sys.formulas[*index].vars))
                    .collect::<Vec<_>>()
                    .join("; ")
            ),
            SystemViolation::MissingMap { i, j } => format!("no map from {} to {}", label(i), label(j)),
            SystemViolation::BadMap { i, j, reason } => {
                format!("map from {} to {}: {reason}", label(i), label(j))
            }
            SystemViolation::NotIdentity { index } => format!("map at {} is not the identity", label(index)),
            SystemViolation::Cocycle { i, j, k } => format!(
                "maps {}->{}->{} do not compose to {}->{}",
                label(i),
                label(j),
                label(k),
                label(i),
                label(k)
            ),
            SystemViolation::Transport { i, j, conjunct } => format!(
                "conjunct {} transported from {} is missing at {}",
                conjunct.display(&sys.sig, &sys.formulas[*j].vars),
                label(i),
                label(j)
            ),
            SystemViolation::UncoveredConstant { constant } => {
                format!("no formula binds a variable to {}", constant.display(&sys.sig, &[]))
            }
            SystemViolation::UncoveredOperation { function, index, args } => {
                let vars = &sys.formulas[*index].vars;
                let args: Vec<&str> = args.iter().map(|&a| vars[a].as_str()).collect();
                format!(
                    "{}({}) at {} has no value at any later index",
                    sys.sig.function_name(*function),
                    args.join(", "),
                    label(index)
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SystemReport {
    pub violations: Vec<SystemViolation>,
}

impl SystemReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Positive table conjuncts `F(x̄) = x0` of one formula.
fn entries(phi: &DiagramFormula) -> HashMap<(usize, Vec<usize>), usize> {
    let mut out = HashMap::new();
    for a in phi.positive_conjuncts() {
        if let (Term::App(f, args), Term::Var(x0)) = (&a.lhs, &a.rhs) {
            let args: Option<Vec<usize>> = args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => Some(*v),
                    _ => None,
                })
                .collect();
            if let Some(args) = args {
                out.insert((*f, args), *x0);
            }
        }
    }
    out
}

/// Variable bound to a named constant (`x = c` or `x = @a`) in `φ`.
fn bound_to(phi: &DiagramFormula, c: &Term) -> Option<usize> {
    phi.positive_conjuncts().find_map(|a| match (&a.lhs, &a.rhs) {
        (Term::Var(x), t) if t == c => Some(*x),
        _ => None,
    })
}

fn named_constants(target: &Reduct) -> Vec<Term> {
    target
        .constants
        .iter()
        .map(|&c| Term::Const(c))
        .chain(target.coefficients.iter().map(|&a| Term::Coef(a)))
        .collect()
}

/// Check every defining condition of a direct system exhaustively.
pub fn validate_system(sys: &FormulaDirectSystem) -> SystemReport {
    let mut v = Vec::new();
    let n = sys.len();
    if sys.order.len() != n || sys.labels.len() != n {
        v.push(SystemViolation::BadMap {
            i: 0,
            j: 0,
            reason: format!("order on {} indices for {n} formulas", sys.order.len()),
        });
        return SystemReport { violations: v };
    }
    if n == 0 {
        v.push(SystemViolation::NotDirected { i: 0, j: 0 });
        return SystemReport { violations: v };
    }
    if let Some((i, j)) = sys.order.directedness_failure() {
        v.push(SystemViolation::NotDirected { i, j });
    }
    for (index, phi) in sys.formulas.iter().enumerate() {
        let report = phi.validate(&sys.sig, sys.coefficient_count);
        if !report.is_valid() {
            v.push(SystemViolation::InvalidFormula {
                index,
                violations: report.violations,
            });
        }
    }
    let mut maps_ok = true;
    for (i, j) in sys.order.pairs() {
        match sys.maps.get(&(i, j)) {
            None => {
                v.push(SystemViolation::MissingMap { i, j });
                maps_ok = false;
            }
            Some(g) => {
                if let Err(e) = g.check(sys.formulas[i].vars.len(), sys.formulas[j].vars.len()) {
                    v.push(SystemViolation::BadMap {
                        i,
                        j,
                        reason: e.to_string(),
                    });
                    maps_ok = false;
                }
            }
        }
    }
    for &(i, j) in sys.maps.keys() {
        if i >= n || j >= n || !sys.order.leq(i, j) {
            v.push(SystemViolation::BadMap {
                i,
                j,
                reason: "map between incomparable indices".into(),
            });
        }
    }
    if !maps_ok {
        return SystemReport { violations: v };
    }
    for i in 0..n {
        if !sys.gamma(i, i).is_identity() {
            v.push(SystemViolation::NotIdentity { index: i });
        }
    }
    for (i, j) in sys.order.pairs() {
        for k in 0..n {
            if sys.order.leq(j, k) && sys.gamma(i, j).then(sys.gamma(j, k)) != *sys.gamma(i, k) {
                v.push(SystemViolation::Cocycle { i, j, k });
            }
        }
        let moved = substitute(&sys.formulas[i], sys.gamma(i, j)).expect("maps checked");
        for conjunct in moved {
            if !sys.formulas[j].conjuncts.contains(&conjunct) {
                v.push(SystemViolation::Transport { i, j, conjunct });
            }
        }
    }
    for c in named_constants(&sys.target) {
        if !sys.formulas.iter().any(|phi| bound_to(phi, &c).is_some()) {
            v.push(SystemViolation::UncoveredConstant { constant: c });
        }
    }
    let tables: Vec<_> = sys.formulas.iter().map(entries).collect();
    for &f in &sys.target.functions {
        for i in 0..n {
            for args in crate::syntax::tuples(sys.formulas[i].vars.len(), sys.sig.arity(f)) {
                let covered = (0..n).filter(|&j| sys.order.leq(i, j)).any(|j| {
                    let g = sys.gamma(i, j);
                    let moved: Vec<usize> = args.iter().map(|&x| g.apply(x)).collect();
                    tables[j].contains_key(&(f, moved))
                });
                if !covered {
                    v.push(SystemViolation::UncoveredOperation { function: f, index: i, args });
                }
            }
        }
    }
    SystemReport { violations: v }
}

/// `L(Λ)`: classes of pairs `(x, i)`, in order of first appearance when
/// indices and then variables are scanned in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitAlgebra {
    pub algebra: FiniteAlgebra,
    /// `class_of[i][x]` is the element `⟨x, i⟩`.
    pub class_of: Vec<Vec<usize>>,
    /// Reduct the algebra interprets; the whole language unless the
    /// system's target was smaller.
    pub reduct: Reduct,
    pub full_language: bool,
}

fn fail_with(sys: &FormulaDirectSystem, report: SystemReport) -> Error {
    if report.violations.iter().all(SystemViolation::is_coverage) {
        let mut names: Vec<String> = Vec::new();
        for v in &report.violations {
            let name = match v {
                SystemViolation::UncoveredConstant { constant } => constant.display(&sys.sig, &[]).to_string(),
                SystemViolation::UncoveredOperation { function, .. } => sys.sig.function_name(*function).to_string(),
                _ => unreachable!(),
            };
            if !names.contains(&name) {
                names.push(name);
            }
        }
        Error::Uncovered(names)
    } else {
        let first = report.violations.iter().find(|v| !v.is_coverage()).unwrap();
        Error::DirectSystem(first.describe(sys))
    }
}

pub fn build_limit(sys: &FormulaDirectSystem, budget: &Budget) -> Result<LimitAlgebra> {
    budget.check_universe("index set", sys.len() as u128)?;
    let report = validate_system(sys);
    if !report.is_valid() {
        return Err(fail_with(sys, report));
    }
    let n = sys.len();
    let offsets: Vec<usize> = sys
        .formulas
        .iter()
        .scan(0, |acc, phi| {
            let o = *acc;
            *acc += phi.vars.len();
            Some(o)
        })
        .collect();
    let total = offsets.last().map_or(0, |o| o + sys.formulas[n - 1].vars.len());
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (&(i, j), g) in &sys.maps {
        for x in 0..sys.formulas[i].vars.len() {
            let a = find(&mut parent, offsets[i] + x);
            let b = find(&mut parent, offsets[j] + g.apply(x));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut label: HashMap<usize, usize> = HashMap::new();
    let mut class_of = Vec::with_capacity(n);
    let mut reps: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        let mut row = Vec::new();
        for x in 0..sys.formulas[i].vars.len() {
            let root = find(&mut parent, offsets[i] + x);
            let next = label.len();
            let e = *label.entry(root).or_insert(next);
            if e == reps.len() {
                reps.push((i, x));
            }
            row.push(e);
        }
        class_of.push(row);
    }
    let size = reps.len();
    if size == 0 {
        return Err(Error::EmptyUniverse);
    }
    budget.check_universe("limit algebra", size as u128)?;

    let mut constants = Vec::new();
    let mut coefficients = Vec::new();
    for c in named_constants(&sys.target) {
        let mut value = None;
        for (i, phi) in sys.formulas.iter().enumerate() {
            if let Some(x) = bound_to(phi, &c) {
                match value {
                    None => value = Some(class_of[i][x]),
                    Some(v) if v != class_of[i][x] => {
                        return Err(Error::DirectSystem(format!(
                            "{} names two different elements",
                            c.display(&sys.sig, &[])
                        )))
                    }
                    _ => {}
                }
            }
        }
        let value = value.expect("coverage validated");
        match c {
            Term::Const(_) => constants.push(value),
            _ => coefficients.push(value),
        }
    }

    let tables_by_index: Vec<_> = sys.formulas.iter().map(entries).collect();
    let mut tables = Vec::new();
    for &f in &sys.target.functions {
        let arity = sys.sig.arity(f);
        let mut table = Vec::with_capacity(size.pow(arity as u32));
        for args in crate::syntax::tuples(size, arity) {
            let reps_args: Vec<(usize, usize)> = args.iter().map(|&a| reps[a]).collect();
            table.push(apply_at(sys, &tables_by_index, &class_of, f, &reps_args).ok_or_else(|| {
                Error::Uncovered(vec![sys.sig.function_name(f).to_string()])
            })?);
        }
        tables.push(table);
    }
    let full_language = sys.target == Reduct::full(&sys.sig, sys.coefficient_count);
    let sig = if sys.target.functions.len() == sys.sig.function_count()
        && sys.target.constants.len() == sys.sig.constant_count()
    {
        sys.sig.clone()
    } else {
        sys.sig.restrict(&sys.target.functions, &sys.target.constants)
    };
    let mut algebra = FiniteAlgebra::new(sig, size, tables, constants)?;
    if sys.target.coefficients.len() == sys.coefficient_count && sys.coefficient_count > 0 {
        algebra = algebra.with_coefficients(coefficients)?;
    }
    let limit = LimitAlgebra {
        algebra,
        class_of,
        reduct: sys.target.clone(),
        full_language,
    };
    if full_language {
        if let Some((i, a)) = formula_failures(sys, &limit).into_iter().next() {
            return Err(Error::DirectSystem(format!(
                "formula at {} fails in the limit: {}",
                sys.labels[i],
                a.display(&sys.sig, &sys.formulas[i].vars)
            )));
        }
    }
    Ok(limit)
}

/// `F(⟨x1,i1⟩, ...)` from the given representatives: the first index `j`
/// above all of them, in index order, whose formula has the entry.
fn apply_at(
    sys: &FormulaDirectSystem,
    tables: &[HashMap<(usize, Vec<usize>), usize>],
    class_of: &[Vec<usize>],
    f: usize,
    reps: &[(usize, usize)],
) -> Option<usize> {
    (0..sys.len())
        .filter(|&j| reps.iter().all(|&(i, _)| sys.order.leq(i, j)))
        .find_map(|j| value_at(sys, tables, class_of, f, reps, j))
}

fn value_at(
    sys: &FormulaDirectSystem,
    tables: &[HashMap<(usize, Vec<usize>), usize>],
    class_of: &[Vec<usize>],
    f: usize,
    reps: &[(usize, usize)],
    j: usize,
) -> Option<usize> {
    let moved: Vec<usize> = reps.iter().map(|&(i, x)| sys.gamma(i, j).apply(x)).collect();
    tables[j].get(&(f, moved)).map(|&x0| class_of[j][x0])
}

/// Conjuncts of some `φ_i` that fail in the limit under `x ↦ ⟨x, i⟩`.
pub fn formula_failures(sys: &FormulaDirectSystem, limit: &LimitAlgebra) -> Vec<(usize, AtomicFormula)> {
    let mut out = Vec::new();
    for (i, phi) in sys.formulas.iter().enumerate() {
        for a in &phi.conjuncts {
            let p = &limit.class_of[i];
            let holds = (limit.algebra.eval_fast(&a.lhs, p) == limit.algebra.eval_fast(&a.rhs, p)) != a.negated;
            if !holds {
                out.push((i, a.clone()));
            }
        }
    }
    out
}

/// Recompute operation values from randomly chosen representatives and
/// admissible indices; returns how many applications were checked.
pub fn audit_well_definedness(sys: &FormulaDirectSystem, limit: &LimitAlgebra, seed: u64, samples: usize) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tables: Vec<_> = sys.formulas.iter().map(entries).collect();
    let mut members: Vec<Vec<(usize, usize)>> = vec![Vec::new(); limit.algebra.size()];
    for (i, row) in limit.class_of.iter().enumerate() {
        for (x, &e) in row.iter().enumerate() {
            members[e].push((i, x));
        }
    }
    let funcs: Vec<usize> = limit.reduct.functions.iter().copied().collect();
    if funcs.is_empty() {
        return Ok(0);
    }
    let mut checked = 0;
    for _ in 0..samples {
        let k = rng.gen_range(0..funcs.len());
        let f = funcs[k];
        let args: Vec<usize> = (0..sys.sig.arity(f)).map(|_| rng.gen_range(0..limit.algebra.size())).collect();
        let reps: Vec<(usize, usize)> = args
            .iter()
            .map(|&a| members[a][rng.gen_range(0..members[a].len())])
            .collect();
        let admissible: Vec<usize> = (0..sys.len())
            .filter(|&j| reps.iter().all(|&(i, _)| sys.order.leq(i, j)))
            .filter(|&j| value_at(sys, &tables, &limit.class_of, f, &reps, j).is_some())
            .collect();
        if admissible.is_empty() {
            continue;
        }
        let j = admissible[rng.gen_range(0..admissible.len())];
        let got = value_at(sys, &tables, &limit.class_of, f, &reps, j).unwrap();
        if got != limit.algebra.apply(k, &args) {
            return Err(Error::DirectSystem(format!(
                "{} depends on the representatives",
                sys.sig.function_name(f)
            )));
        }
        checked += 1;
    }
    Ok(checked)
}

/// `Λ^B`: indices are pairs (reduct, subset of `B`) ordered by inclusion,
/// reducts outer in mask order, subsets inner in bitmask order. Variable
/// `x_b` stands for `b`; all maps are inclusions.
pub fn canonical_system(b: &FiniteAlgebra, budget: &Budget) -> Result<FormulaDirectSystem> {
    let sig = b.signature();
    let ncoef = b.coefficient_count();
    let symbols = Reduct::symbol_count(sig, ncoef);
    if b.size() >= 64 || symbols >= 64 {
        return Err(Error::bound("canonical index set", u128::MAX, budget.max_indices));
    }
    let count = (1u128 << symbols) * (1u128 << b.size());
    if count > budget.max_indices as u128 {
        return Err(Error::bound("canonical index set", count, budget.max_indices));
    }
    let mut keys: Vec<(u64, u64)> = Vec::new();
    let mut formulas = Vec::new();
    let mut labels = Vec::new();
    for rmask in 0..1u64 << symbols {
        let reduct = Reduct::from_mask(sig, ncoef, rmask);
        for smask in 0..1u64 << b.size() {
            let universe: Vec<usize> = (0..b.size()).filter(|&x| smask >> x & 1 == 1).collect();
            formulas.push(induced_diagram(b, &reduct, &universe)?);
            let names: Vec<String> = universe.iter().map(|x| format!("x{x}")).collect();
            labels.push(format!("({}, {{{}}})", reduct.display(sig), names.join(", ")));
            keys.push((rmask, smask));
        }
    }
    let n = keys.len();
    let order = Poset::from_fn(n, |i, j| {
        let (ri, si) = keys[i];
        let (rj, sj) = keys[j];
        ri & !rj == 0 && si & !sj == 0
    });
    let mut maps = BTreeMap::new();
    for (i, j) in order.pairs() {
        let sj = keys[j].1;
        let targets = (0..b.size())
            .filter(|&x| keys[i].1 >> x & 1 == 1)
            .map(|x| (sj & ((1u64 << x) - 1)).count_ones() as usize)
            .collect();
        maps.insert((i, j), VariableMap::new(targets));
    }
    Ok(FormulaDirectSystem {
        sig: sig.clone(),
        coefficient_count: ncoef,
        target: Reduct::full(sig, ncoef),
        labels,
        order,
        formulas,
        maps,
    })
}

/// The embedding of `L(Λ)` into the ultraproduct of the targets. Over a
/// finite directed index set the filter base `{J_i}` of upper cones
/// generates the principal ultrafilter at the maximum, so the ultraproduct
/// is the target there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorEmbedding {
    pub realizations: Vec<Vec<usize>>,
    /// Generator of the principal ultrafilter.
    pub top: usize,
    pub embedding: Homomorphism,
}

pub fn embed_into_factors(
    sys: &FormulaDirectSystem,
    limit: &LimitAlgebra,
    targets: &[FiniteAlgebra],
) -> Result<FactorEmbedding> {
    if targets.len() != sys.len() {
        return Err(Error::DirectSystem(format!(
            "{} targets for {} indices",
            targets.len(),
            sys.len()
        )));
    }
    let mut realizations = Vec::with_capacity(sys.len());
    for (i, (phi, b)) in sys.formulas.iter().zip(targets).enumerate() {
        match realizable(phi, b)? {
            Some(h) => realizations.push(h),
            None => return Err(Error::Unrealizable(i)),
        }
    }
    let top = sys
        .order
        .maximum()
        .ok_or_else(|| Error::DirectSystem("a finite directed order has a maximum".into()))?;
    // Every cone J_i = {j : i <= j} contains the maximum.
    debug_assert!((0..sys.len()).all(|i| sys.order.leq(i, top)));
    let mut map = vec![usize::MAX; limit.algebra.size()];
    for (i, row) in limit.class_of.iter().enumerate() {
        for (x, &e) in row.iter().enumerate() {
            let value = realizations[top][sys.gamma(i, top).apply(x)];
            if map[e] == usize::MAX {
                map[e] = value;
            } else if map[e] != value {
                return Err(Error::DirectSystem("the factor map is not well defined".into()));
            }
        }
    }
    let embedding = Homomorphism::new(map);
    let b = &targets[top];
    let fixing = limit.algebra.coefficient_count() > 0 && b.coefficient_count() == limit.algebra.coefficient_count();
    let same_language = limit.algebra.signature() == b.signature();
    if !same_language || !embedding.is_injective() || !embedding.is_homomorphism(&limit.algebra, b, fixing) {
        return Err(Error::DirectSystem("the factor map is not an embedding".into()));
    }
    Ok(FactorEmbedding {
        realizations,
        top,
        embedding,
    })
}

/// `C` as a limit algebra over `B`: `Λ^C` with a realization of every
/// formula in `B`, or the first formula `B` cannot realize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InclusionLimit {
    Limit {
        system: FormulaDirectSystem,
        witnesses: Vec<Vec<usize>>,
    },
    Refused {
        index: usize,
        label: String,
        formula: DiagramFormula,
    },
}

pub fn limit_from_inclusion(c: &FiniteAlgebra, b: &FiniteAlgebra, budget: &Budget) -> Result<InclusionLimit> {
    c.same_signature(b)?;
    if c.coefficient_count() != b.coefficient_count() {
        return Err(Error::Coefficients("both algebras need the same coefficient constants".into()));
    }
    let system = canonical_system(c, budget)?;
    let mut witnesses = Vec::with_capacity(system.len());
    for (i, phi) in system.formulas.iter().enumerate() {
        match realizable(phi, b)? {
            Some(w) => witnesses.push(w),
            None => {
                return Ok(InclusionLimit::Refused {
                    index: i,
                    label: system.labels[i].clone(),
                    formula: phi.clone(),
                })
            }
        }
    }
    Ok(InclusionLimit::Limit { system, witnesses })
}
