//! One function per subcommand, each returning the report's `result`.

use std::path::Path;

use serde_json::{json, Value};

use unialg::algebra::{
    direct_limit_algebras, direct_product, enumerate_homomorphisms, filterproduct, first_homomorphism, quotient,
    AlgebraDirectSystem, CoefficientStructure, Congruence, Filter, FiniteAlgebra, HomMode, Homomorphism,
};
use unialg::corpus::{coefficient_triples, random_groupoids, Corpus, DEFAULT_SEED};
use unialg::geometry::{
    coordinate_algebra, decompose_with, is_irreducible, radical_member, solve, AlgebraicSet, DecompositionOrder,
    Irreducibility,
};
use unialg::limits::{build_limit, canonical_system, embed_into_factors, validate_system};
use unialg::models::{
    check_quasi_identity, check_sentence, discriminates, locally_embeddable, separates, shadow_pool, ucl_shadow, ClassK,
};
use unialg::presentation::congruent_closure_query;
use unialg::suites::{run_all, SuiteConfig};
use unialg::syntax::{parse_atomic, Signature};
use unialg::unify::{atp_of, theorem_a_check, theorem_b_check, UnificationReport};
use unialg::Budget;

use crate::docs::{self, algebra_json, bad, diagram_json, direct_system_json, set_json, system_json, Workspace};
use crate::error::CliError;
use crate::report::{render_json, render_text, report};
use crate::{Cli, Command, Format};

/// Random clauses in the shadow pool next to the negated diagrams.
const SHADOW_RANDOM: usize = 40;

struct Ctx {
    ws: Workspace,
    budget: Budget,
    seed: u64,
}

/// Run the command and render its report. The second component is set
/// when the command ran but some suite failed.
pub fn execute(cli: &Cli) -> Result<(String, Option<String>), CliError> {
    let mut ctx = Ctx {
        ws: Workspace::default(),
        budget: Budget::with_max_universe(cli.max_universe),
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
    };
    for path in &cli.signatures {
        ctx.ws.load_signature(path)?;
    }
    let (name, result) = dispatch(&cli.command, &mut ctx, cli.seed)?;
    let failed = match &cli.command {
        Command::CorpusRun { .. } if result["passed"] != Value::Bool(true) => Some("some suite failed".to_string()),
        _ => None,
    };
    let seed = result.get("seed").and_then(Value::as_u64).unwrap_or(ctx.seed);
    let r = report(&ctx.ws, name, seed, result);
    let text = match cli.format {
        Format::Json => render_json(&r),
        Format::Text => render_text(&r),
    };
    Ok((text, failed))
}

fn dispatch(cmd: &Command, ctx: &mut Ctx, seed_flag: Option<u64>) -> Result<(&'static str, Value), CliError> {
    Ok(match cmd {
        Command::Solve(g) => {
            let y = load_set(ctx, &g.algebra, &g.system)?;
            ("solve", json!({"points": y.points, "count": y.points.len(), "system": system_json(&y.system)}))
        }
        Command::RadicalMember { geo, equation } => {
            let y = load_set(ctx, &geo.algebra, &geo.system)?;
            let s = &y.system;
            let q = parse_atomic(equation, &s.sig, &s.vars, y.algebra.coefficient_count())?;
            let holds = radical_member(&y, &q)?;
            let counterexample = y
                .points
                .iter()
                .find(|p| (y.algebra.eval(&q.lhs, p).ok() == y.algebra.eval(&q.rhs, p).ok()) == q.negated);
            (
                "radical-member",
                json!({"equation": q.display(&s.sig, &s.vars).to_string(), "holds": holds, "counterexample": counterexample}),
            )
        }
        Command::Coordinate(g) => {
            let y = load_set(ctx, &g.algebra, &g.system)?;
            let coord = coordinate_algebra(&y, &ctx.budget)?;
            let witnesses: Vec<String> = coord
                .trace
                .witnesses
                .iter()
                .map(|t| t.display(&y.system.sig, &y.system.vars).to_string())
                .collect();
            (
                "coordinate",
                json!({
                    "algebra": algebra_json(&coord.algebra, "coordinate"),
                    "generators": coord.generators,
                    "witnesses": witnesses,
                    "values": coord.trace.values,
                }),
            )
        }
        Command::Irreducible(g) => {
            let y = load_set(ctx, &g.algebra, &g.system)?;
            let result = match is_irreducible(&y, &ctx.budget)? {
                Irreducibility::Irreducible { generic_point } => {
                    json!({"irreducible": true, "generic_point": generic_point})
                }
                Irreducibility::Reducible { cover } => {
                    let cover: Vec<Value> = cover
                        .iter()
                        .map(|c| {
                            json!({
                                "equation": c.equation.display(&y.system.sig, &y.system.vars).to_string(),
                                "points": c.points,
                            })
                        })
                        .collect();
                    json!({"irreducible": false, "cover": cover})
                }
            };
            ("irreducible", result)
        }
        Command::Decompose { geo, reverse } => {
            let y = load_set(ctx, &geo.algebra, &geo.system)?;
            let order = if *reverse { DecompositionOrder::Reverse } else { DecompositionOrder::Forward };
            let parts = decompose_with(&y, order, &ctx.budget)?;
            let components: Vec<Value> = parts.iter().map(set_json).collect();
            ("decompose", json!({"count": components.len(), "components": components}))
        }
        Command::Homs { pair, injective, limit } => {
            let (c, b) = load_pair(ctx, &pair.c, &pair.b)?;
            let mode = hom_mode(&c, *injective);
            let homs = enumerate_homomorphisms(&c, &b, mode)?;
            let maps: Vec<&Vec<usize>> = homs.iter().take(*limit).map(|h| &h.map).collect();
            ("homs", json!({"count": homs.len(), "injective": injective, "maps": maps, "truncated": homs.len() > *limit}))
        }
        Command::Embed(pair) => {
            let (c, b) = load_pair(ctx, &pair.c, &pair.b)?;
            let h = first_homomorphism(&c, &b, hom_mode(&c, true), &vec![None; c.size()])?;
            ("embed", json!({"holds": h.is_some(), "embedding": h.map(|h| h.map)}))
        }
        Command::Separates(args) => {
            let (k, c) = load_class(ctx, &args.class, &args.c)?;
            let v = separates(&k, &c)?;
            ("separates", json!({"holds": v.holds, "inseparable": v.inseparable}))
        }
        Command::Discriminates(args) => {
            let (k, c) = load_class(ctx, &args.class, &args.c)?;
            let v = discriminates(&k, &c)?;
            let (member, embedding) = match v.embedding {
                Some((i, h)) => (Some(i), Some(h.map)),
                None => (None, None),
            };
            ("discriminates", json!({"holds": v.holds, "member": member, "embedding": embedding}))
        }
        Command::UclMember(args) => {
            let (k, c) = load_class(ctx, &args.class, &args.c)?;
            let v = locally_embeddable(&c, &k)?;
            let certificate = v.certificate.as_ref().map(|f| {
                json!({"universe": f.universe, "formula": diagram_json(&f.formula, c.signature())})
            });
            let mut result = json!({"holds": v.holds, "checked": v.checked, "certificate": certificate});
            if let [b] = k.members.as_slice() {
                let pool = shadow_pool(&c, ctx.seed, SHADOW_RANDOM);
                let s = ucl_shadow(&c, b, &pool, &ctx.budget)?;
                result["shadow"] = json!({
                    "holds": s.holds,
                    "checked": s.checked,
                    "separating": s.separating.as_ref().map(|q| q.display(c.signature()).to_string()),
                });
            }
            ("ucl-member", result)
        }
        Command::SentenceCheck(args) => {
            let b = ctx.ws.algebra("algebra", &args.algebra)?;
            let s = ctx.ws.sentence(&args.sentence, &b)?;
            let v = check_sentence(&b, &s, &ctx.budget)?;
            ("sentence-check", json!({"sentence": s.display(b.signature()).to_string(), "holds": v.holds, "witness": v.witness}))
        }
        Command::QiCheck(args) => {
            let b = ctx.ws.algebra("algebra", &args.algebra)?;
            let s = ctx.ws.sentence(&args.sentence, &b)?;
            let v = check_quasi_identity(&b, &s, &ctx.budget)?;
            ("qi-check", json!({"sentence": s.display(b.signature()).to_string(), "holds": v.holds, "counterexample": v.witness}))
        }
        Command::Product { factors } => {
            let fs = load_all(ctx, "factor", factors)?;
            let p = direct_product(&fs, &ctx.budget)?;
            ("product", json!({"algebra": algebra_json(&p.algebra, "product"), "sizes": p.sizes}))
        }
        Command::Quotient { algebra, pairs } => {
            let a = ctx.ws.algebra("algebra", algebra)?;
            let pairs = pairs
                .iter()
                .map(|p| match list(p, "pair")?.as_slice() {
                    [x, y] if *x < a.size() && *y < a.size() => Ok((*x, *y)),
                    _ => Err(bad(format!("`{p}` is not a pair of elements"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let theta = Congruence::generated(&a, &pairs);
            let q = quotient(&a, &theta)?;
            (
                "quotient",
                json!({
                    "algebra": algebra_json(&q.algebra, "quotient"),
                    "classes": theta.classes(),
                    "projection": q.projection.map,
                }),
            )
        }
        Command::Filterproduct { factors, generator } => {
            let fs = load_all(ctx, "factor", factors)?;
            let n = fs.len();
            let members = match generator {
                Some(g) => list(g, "generator")?,
                None => (0..n).collect(),
            };
            if members.iter().any(|&i| i >= n) {
                return Err(bad(format!("filter generator outside {n} indices")));
            }
            let mask = members.iter().fold(0u64, |m, &i| m | 1 << i);
            let filter = Filter::principal(n, mask)?;
            let fp = filterproduct(&fs, &filter, &ctx.budget)?;
            (
                "filterproduct",
                json!({
                    "algebra": algebra_json(&fp.algebra, "filterproduct"),
                    "generator": members,
                    "ultrafilter": filter.is_ultrafilter(),
                    "projection": fp.projection.map,
                }),
            )
        }
        Command::DirectLimit { algebras, maps } => {
            let algs = load_all(ctx, "algebra", algebras)?;
            let steps = maps.iter().map(|m| list(m, "map").map(Homomorphism::new)).collect::<Result<Vec<_>, _>>()?;
            let sys = AlgebraDirectSystem::chain(algs, steps)?;
            let l = direct_limit_algebras(&sys, &ctx.budget)?;
            ("direct-limit", json!({"algebra": algebra_json(&l.algebra, "limit"), "class_of": l.class_of, "top": l.top}))
        }
        Command::ClosureQuery { presentation, equation, depth } => {
            let p = ctx.ws.presentation(presentation)?;
            let q = parse_atomic(equation, &p.sig, &p.vars, 0)?;
            let depth = depth.unwrap_or_else(|| p.max_depth().max(q.depth()));
            let holds = congruent_closure_query(&p, &q, depth)?;
            ("closure-query", json!({"equation": q.display(&p.sig, &p.vars).to_string(), "depth": depth, "holds": holds}))
        }
        Command::LimitValidate { system } => {
            let sys = ctx.ws.direct_system(system)?;
            let r = validate_system(&sys);
            let violations: Vec<String> = r.violations.iter().map(|v| v.describe(&sys)).collect();
            ("limit-validate", json!({"valid": r.is_valid(), "violations": violations}))
        }
        Command::LimitBuild { system } => {
            let sys = ctx.ws.direct_system(system)?;
            let l = build_limit(&sys, &ctx.budget)?;
            (
                "limit-build",
                json!({
                    "algebra": algebra_json(&l.algebra, "limit"),
                    "class_of": l.class_of,
                    "full_language": l.full_language,
                    "reduct": l.reduct.display(&sys.sig).to_string(),
                }),
            )
        }
        Command::CanonicalSystem { algebra } => {
            let b = ctx.ws.algebra("algebra", algebra)?;
            let sys = canonical_system(&b, &ctx.budget)?;
            ("canonical-system", json!({"indices": sys.len(), "system": direct_system_json(&sys)}))
        }
        Command::LimitEmbed { system, targets } => {
            let sys = ctx.ws.direct_system(system)?;
            let mut ts = load_all(ctx, "target", targets)?;
            if ts.len() == 1 {
                ts = vec![ts[0].clone(); sys.len()];
            }
            let l = build_limit(&sys, &ctx.budget)?;
            let e = embed_into_factors(&sys, &l, &ts)?;
            (
                "limit-embed",
                json!({
                    "limit": algebra_json(&l.algebra, "limit"),
                    "realizations": e.realizations,
                    "top": e.top,
                    "embedding": e.embedding.map,
                }),
            )
        }
        Command::Atp { algebra, tuple } => {
            let b = ctx.ws.algebra("algebra", algebra)?;
            let tuple = list(tuple, "tuple")?;
            if let Some(&x) = tuple.iter().find(|&&x| x >= b.size()) {
                return Err(bad(format!("element {x} outside the algebra")));
            }
            let p = atp_of(&b, &tuple)?;
            let vars: Vec<String> = (0..tuple.len()).map(|i| format!("x{i}")).collect();
            let show = |atoms: &[unialg::syntax::AtomicFormula]| -> Vec<String> {
                atoms.iter().map(|a| a.display(b.signature(), &vars).to_string()).collect()
            };
            let witnesses: serde_json::Map<String, Value> = p
                .witnesses
                .iter()
                .map(|(e, t)| (e.to_string(), json!(t.display(b.signature(), &vars).to_string())))
                .collect();
            (
                "atp",
                json!({
                    "tuple": tuple,
                    "vars": vars,
                    "generated": p.generated,
                    "witnesses": witnesses,
                    "positive": show(&p.positive),
                    "negative": show(&p.negative),
                }),
            )
        }
        Command::UnifyA(pair) => {
            let (c, b) = load_pair(ctx, &pair.c, &pair.b)?;
            ("unify-a", unification_json(&theorem_a_check(&c, &b, &ctx.budget)?))
        }
        Command::UnifyB { a, c, b } => {
            let a = ctx.ws.algebra("a", a)?;
            let c = coefficient_structure(ctx, &a, "c", c)?;
            let b = coefficient_structure(ctx, &a, "b", b)?;
            ("unify-b", unification_json(&theorem_b_check(&a, &c, &b, &ctx.budget)?))
        }
        Command::CorpusRun { manifest } => ("corpus-run", corpus_run(ctx, manifest, seed_flag)?),
    })
}

fn list(text: &str, what: &str) -> Result<Vec<usize>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad(format!("{what}: `{x}` is not an element"))))
        .collect()
}

fn hom_mode(c: &FiniteAlgebra, injective: bool) -> HomMode {
    match (c.coefficient_count() > 0, injective) {
        (true, true) => HomMode::FixingInjective,
        (true, false) => HomMode::Fixing,
        (false, true) => HomMode::Injective,
        (false, false) => HomMode::All,
    }
}

fn load_set(ctx: &mut Ctx, algebra: &Path, system: &Path) -> Result<AlgebraicSet, CliError> {
    let b = ctx.ws.algebra("algebra", algebra)?;
    let s = ctx.ws.system(system, &b)?;
    Ok(solve(&s, &b, &ctx.budget)?)
}

fn load_pair(ctx: &mut Ctx, c: &Path, b: &Path) -> Result<(FiniteAlgebra, FiniteAlgebra), CliError> {
    let c = ctx.ws.algebra("c", c)?;
    let b = ctx.ws.algebra("b", b)?;
    same_language(c.signature(), b.signature())?;
    Ok((c, b))
}

fn load_class(ctx: &mut Ctx, class: &Path, c: &Path) -> Result<(ClassK, FiniteAlgebra), CliError> {
    let members = ctx.ws.class(class)?;
    let c = ctx.ws.algebra("c", c)?;
    same_language(c.signature(), members[0].signature())?;
    Ok((ClassK::new(members)?, c))
}

fn load_all(ctx: &mut Ctx, role: &str, paths: &[std::path::PathBuf]) -> Result<Vec<FiniteAlgebra>, CliError> {
    let algs = paths.iter().map(|p| ctx.ws.algebra(role, p)).collect::<Result<Vec<_>, _>>()?;
    for a in &algs[1..] {
        same_language(algs[0].signature(), a.signature())?;
    }
    Ok(algs)
}

fn same_language(x: &Signature, y: &Signature) -> Result<(), CliError> {
    if x == y {
        Ok(())
    } else {
        Err(bad(format!("signatures differ: {x} and {y}")))
    }
}

fn coefficient_structure(ctx: &mut Ctx, a: &FiniteAlgebra, role: &str, path: &Path) -> Result<CoefficientStructure, CliError> {
    let alg = ctx.ws.algebra(role, path)?;
    if alg.coefficient_count() != a.size() {
        return Err(bad(format!(
            "`{role}` needs {} coefficients, one per element of A, found {}",
            a.size(),
            alg.coefficient_count()
        )));
    }
    let lambda = alg.coefficients().to_vec();
    Ok(CoefficientStructure::new(a.clone(), alg.without_coefficients(), lambda)?)
}

fn unification_json(r: &UnificationReport) -> Value {
    let verdicts: Vec<Value> = r
        .verdicts
        .iter()
        .map(|v| json!({"condition": v.condition, "name": v.name, "holds": v.holds, "certificate": v.certificate}))
        .collect();
    json!({
        "verdicts": verdicts,
        "holds": r.holds(),
        "agreement": r.agreement,
        "all_true": r.all_true(),
        "all_false": r.all_false(),
        "generic_point_consistent": r.generic_point_consistent,
        "remark": r.remark.as_ref().map(|m| json!({
            "universal_equivalent": m.universal_equivalent,
            "existential_equivalent": m.existential_equivalent,
        })),
    })
}

fn corpus_run(ctx: &mut Ctx, path: &Path, seed_flag: Option<u64>) -> Result<Value, CliError> {
    let manifest = ctx.ws.read("manifest", path)?;
    docs::expect_kind(&manifest, "manifest")?;
    let entries = manifest.get("fixtures").and_then(Value::as_array).cloned().unwrap_or_default();
    if entries.is_empty() {
        return Err(bad("nothing to run: the manifest lists no fixtures"));
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let mut algebras = Vec::new();
    for entry in &entries {
        let rel = entry.as_str().ok_or_else(|| bad("fixture entries are paths"))?;
        let doc = ctx.ws.read("fixture", &docs::relative(base, rel))?;
        let a = ctx.ws.algebra_from(&doc).map_err(|e| bad(format!("fixture {rel}: {e}")))?;
        let name = doc.get("name").and_then(Value::as_str).unwrap_or(rel).to_string();
        if algebras.iter().any(|(n, _)| *n == name) {
            return Err(bad(format!("fixture name `{name}` appears twice")));
        }
        algebras.push((name, a));
    }
    let seed = seed_flag
        .or_else(|| manifest.get("seed").and_then(Value::as_u64))
        .ok_or_else(|| bad("the manifest names no seed"))?;
    let random = manifest.get("random_groupoids").and_then(Value::as_u64).unwrap_or(0) as usize;
    algebras.extend(random_groupoids(seed, random));
    let corpus = Corpus { algebras, random };
    let triples = if manifest.get("coefficient_triples").and_then(Value::as_bool).unwrap_or(true) {
        coefficient_triples()?
    } else {
        Vec::new()
    };
    let mut cfg = SuiteConfig::new(seed);
    cfg.budget = ctx.budget;
    let outcomes = run_all(&corpus, &triples, &cfg)?;
    let suites: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "name": o.name,
                "criterion": o.criterion,
                "checks": o.checks,
                "failed": o.failed,
                "passed": o.passed(),
                "failures": o.failures,
                "notes": o.notes,
            })
        })
        .collect();
    Ok(json!({
        "seed": seed,
        "corpus": {
            "algebras": corpus.algebras.len(),
            "random": corpus.random,
            "pairs": corpus.pairs().len(),
            "triples": triples.len(),
        },
        "suites": suites,
        "passed": outcomes.iter().all(|o| o.passed()),
    }))
}
