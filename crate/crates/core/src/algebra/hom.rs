use super::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::syntax::tuples;

/// A map between universes, `map[m]` being the image of `m`. Whether it is
/// a homomorphism is a property checked against a source and a target.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Homomorphism {
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(map: Vec<usize>) -> Self {
        Homomorphism { map }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism { map: (0..n).collect() }
    }

    pub fn apply(&self, m: usize) -> usize {
        self.map[m]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.map.iter().all(|m| seen.insert(*m))
    }

    /// Sorted image.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &Homomorphism) -> Homomorphism {
        Homomorphism {
            map: self.map.iter().map(|&m| then.map[m]).collect(),
        }
    }

    /// Table-by-table check that the map is a homomorphism `src -> tgt`,
    /// also fixing coefficients when `fixing` is set.
    pub fn is_homomorphism(&self, src: &FiniteAlgebra, tgt: &FiniteAlgebra, fixing: bool) -> bool {
        if self.map.len() != src.size() || self.map.iter().any(|&v| v >= tgt.size()) || src.signature() != tgt.signature()
        {
            return false;
        }
        let sig = src.signature();
        for c in 0..sig.constant_count() {
            if self.map[src.constant(c)] != tgt.constant(c) {
                return false;
            }
        }
        if fixing {
            if src.coefficient_count() != tgt.coefficient_count() {
                return false;
            }
            for (a, &m) in src.coefficients().iter().enumerate() {
                if self.map[m] != tgt.coefficients()[a] {
                    return false;
                }
            }
        }
        for f in 0..sig.function_count() {
            for args in tuples(src.size(), sig.arity(f)) {
                let image: Vec<usize> = args.iter().map(|&a| self.map[a]).collect();
                if self.map[src.apply(f, &args)] != tgt.apply(f, &image) {
                    return false;
                }
            }
        }
        true
    }
}

/// Which homomorphisms to enumerate. The fixing modes require both algebras
/// to carry coefficients for the same coefficient algebra and keep only
/// maps with `h(c_a) = c_a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HomMode {
    All,
    Injective,
    Fixing,
    FixingInjective,
}

impl HomMode {
    pub fn injective(self) -> bool {
        matches!(self, HomMode::Injective | HomMode::FixingInjective)
    }

    pub fn fixing(self) -> bool {
        matches!(self, HomMode::Fixing | HomMode::FixingInjective)
    }
}

enum Source {
    Constant(usize),
    Coefficient(usize),
    Entry(usize, Vec<usize>),
}

struct Plan {
    /// How the image of each element is forced by earlier ones, if at all.
    forced: Vec<Option<Source>>,
    /// Constraints whose largest mentioned element is the key.
    checks: Vec<Vec<Source>>,
    /// Element each check constrains (the value side).
    values: Vec<Vec<usize>>,
}

fn plan(c: &FiniteAlgebra, fixing: bool) -> Plan {
    let k = c.size();
    let sig = c.signature();
    let mut forced: Vec<Option<Source>> = (0..k).map(|_| None).collect();
    let mut checks: Vec<Vec<Source>> = (0..k).map(|_| Vec::new()).collect();
    let mut values: Vec<Vec<usize>> = (0..k).map(|_| Vec::new()).collect();
    for (i, &m) in c.constants().iter().enumerate() {
        if forced[m].is_none() {
            forced[m] = Some(Source::Constant(i));
        }
        checks[m].push(Source::Constant(i));
        values[m].push(m);
    }
    if fixing {
        for (a, &m) in c.coefficients().iter().enumerate() {
            if forced[m].is_none() {
                forced[m] = Some(Source::Coefficient(a));
            }
            checks[m].push(Source::Coefficient(a));
            values[m].push(m);
        }
    }
    for f in 0..sig.function_count() {
        for args in tuples(k, sig.arity(f)) {
            let r = c.apply(f, &args);
            let top = args.iter().copied().max().unwrap_or(0).max(r);
            if forced[r].is_none() && args.iter().all(|&a| a < r) {
                forced[r] = Some(Source::Entry(f, args.clone()));
            }
            checks[top].push(Source::Entry(f, args));
            values[top].push(r);
        }
    }
    Plan { forced, checks, values }
}

fn target_of(src: &Source, b: &FiniteAlgebra, h: &[usize]) -> usize {
    match src {
        Source::Constant(i) => b.constant(*i),
        Source::Coefficient(a) => b.coefficients()[*a],
        Source::Entry(f, args) => {
            let image: Vec<usize> = args.iter().map(|&a| h[a]).collect();
            b.apply(*f, &image)
        }
    }
}

fn compatible(c: &FiniteAlgebra, b: &FiniteAlgebra, mode: HomMode) -> Result<()> {
    c.same_signature(b)?;
    if mode.fixing() && c.coefficient_count() != b.coefficient_count() {
        return Err(Error::Coefficients(format!(
            "{} vs {} coefficient constants",
            c.coefficient_count(),
            b.coefficient_count()
        )));
    }
    Ok(())
}

/// Visit homomorphisms `c -> b` in lexicographic order of the map; `fixed[m]`
/// pins the image of `m`. The visitor returns `false` to stop.
pub(crate) fn search(
    c: &FiniteAlgebra,
    b: &FiniteAlgebra,
    mode: HomMode,
    fixed: &[Option<usize>],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<()> {
    compatible(c, b, mode)?;
    if mode.injective() && c.size() > b.size() {
        return Ok(());
    }
    let plan = plan(c, mode.fixing());
    let mut h = vec![0; c.size()];
    let mut used = vec![false; b.size()];
    descend(c, b, mode, fixed, &plan, 0, &mut h, &mut used, visit);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn descend(
    c: &FiniteAlgebra,
    b: &FiniteAlgebra,
    mode: HomMode,
    fixed: &[Option<usize>],
    plan: &Plan,
    m: usize,
    h: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if m == c.size() {
        return visit(h);
    }
    let forced = plan.forced[m].as_ref().map(|s| target_of(s, b, h));
    let pinned = fixed.get(m).copied().flatten();
    let range: Vec<usize> = match (forced, pinned) {
        (Some(x), Some(y)) if x != y => return true,
        (Some(x), _) | (None, Some(x)) => {
            if x < b.size() {
                vec![x]
            } else {
                vec![]
            }
        }
        (None, None) => (0..b.size()).collect(),
    };
    for v in range {
        if mode.injective() && used[v] {
            continue;
        }
        h[m] = v;
        let ok = plan.checks[m]
            .iter()
            .zip(&plan.values[m])
            .all(|(s, &r)| target_of(s, b, h) == h[r]);
        if !ok {
            continue;
        }
        used[v] = true;
        let go_on = descend(c, b, mode, fixed, plan, m + 1, h, used, visit);
        used[v] = false;
        if !go_on {
            return false;
        }
    }
    true
}

/// All homomorphisms `c -> b` of the given kind, in lexicographic order.
pub fn enumerate_homomorphisms(c: &FiniteAlgebra, b: &FiniteAlgebra, mode: HomMode) -> Result<Vec<Homomorphism>> {
    let mut out = Vec::new();
    search(c, b, mode, &[], &mut |h| {
        out.push(Homomorphism::new(h.to_vec()));
        true
    })?;
    Ok(out)
}

/// First homomorphism of the given kind, honoring pinned images.
pub fn first_homomorphism(
    c: &FiniteAlgebra,
    b: &FiniteAlgebra,
    mode: HomMode,
    fixed: &[Option<usize>],
) -> Result<Option<Homomorphism>> {
    let mut found = None;
    search(c, b, mode, fixed, &mut |h| {
        found = Some(Homomorphism::new(h.to_vec()));
        false
    })?;
    Ok(found)
}

/// A bijective homomorphism `c -> b`, the lexicographically least one.
pub fn find_isomorphism(c: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Option<Homomorphism>> {
    if c.size() != b.size() {
        c.same_signature(b)?;
        return Ok(None);
    }
    first_homomorphism(c, b, HomMode::Injective, &[])
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn brute_force(c: &FiniteAlgebra, b: &FiniteAlgebra) -> usize {
        tuples(b.size(), c.size())
            .filter(|m| Homomorphism::new(m.clone()).is_homomorphism(c, b, false))
            .count()
    }

    #[test]
    fn spec_counts() {
        assert_eq!(enumerate_homomorphisms(&z2(), &z2(), HomMode::All).unwrap().len(), 2);
        assert!(enumerate_homomorphisms(&z4(), &z2(), HomMode::Injective).unwrap().is_empty());
        let s2_homs = enumerate_homomorphisms(&s2(), &s2(), HomMode::All).unwrap();
        let maps: Vec<_> = s2_homs.iter().map(|h| h.map.clone()).collect();
        assert_eq!(maps, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn enumeration_matches_brute_force_on_fixtures() {
        let fx = all();
        for (_, c) in &fx {
            for (_, b) in &fx {
                if c.signature() != b.signature() {
                    assert!(enumerate_homomorphisms(c, b, HomMode::All).is_err());
                    continue;
                }
                let homs = enumerate_homomorphisms(c, b, HomMode::All).unwrap();
                assert_eq!(homs.len(), brute_force(c, b));
                assert!(homs.windows(2).all(|w| w[0] < w[1]));
                assert!(homs.iter().all(|h| h.is_homomorphism(c, b, false)));
            }
        }
    }

    #[test]
    fn isomorphism_search() {
        assert!(find_isomorphism(&v4(), &z4()).unwrap().is_none());
        assert_eq!(find_isomorphism(&z4(), &z4()).unwrap(), Some(Homomorphism::identity(4)));
        assert!(find_isomorphism(&z2(), &s2()).is_err());
    }
}
