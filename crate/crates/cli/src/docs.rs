//! Reading and writing workspace documents.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use unialg::algebra::FiniteAlgebra;
use unialg::geometry::{AlgebraicSet, EquationSystem};
use unialg::limits::FormulaDirectSystem;
use unialg::order::Poset;
use unialg::presentation::Presentation;
use unialg::syntax::{
    parse_atomic, parse_sentence, parse_term_with_coefficients, AtomicFormula, DiagramFormula, QuantifiedFormula, Reduct,
    Signature, Term, VariableMap,
};

use crate::error::CliError;

pub const VERSION: u64 = 1;

pub fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Raw bytes of every document read during one invocation, hashed for the
/// report.
#[derive(Default)]
pub struct Workspace {
    pub inputs: Vec<(String, String)>,
    signatures: BTreeMap<String, Signature>,
}

impl Workspace {
    /// Read a JSON document from a path, or standard input for `-`.
    pub fn read(&mut self, role: &str, path: &Path) -> Result<Value, CliError> {
        let mut bytes = Vec::new();
        if path == Path::new("-") {
            std::io::stdin()
                .read_to_end(&mut bytes)
                .map_err(|e| bad(format!("reading standard input: {e}")))?;
        } else {
            bytes = std::fs::read(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        }
        self.inputs.push((role.to_string(), hex::encode(Sha256::digest(&bytes))));
        serde_json::from_slice(&bytes).map_err(|e| bad(format!("{}: not JSON: {e}", path.display())))
    }

    /// Register named signature documents for references by name.
    pub fn load_signature(&mut self, path: &Path) -> Result<(), CliError> {
        let doc = self.read("signature", path)?;
        expect_kind(&doc, "signature")?;
        let name = str_field(&doc, "name")?.to_string();
        let sig = signature_body(&doc)?;
        self.signatures.insert(name, sig);
        Ok(())
    }

    pub fn algebra(&mut self, role: &str, path: &Path) -> Result<FiniteAlgebra, CliError> {
        let doc = self.read(role, path)?;
        self.algebra_from(&doc)
    }

    /// An algebra document, or a report whose result carries one.
    pub fn algebra_from(&self, doc: &Value) -> Result<FiniteAlgebra, CliError> {
        if kind(doc) == Some("report") {
            let inner = doc
                .get("result")
                .and_then(|r| r.get("algebra"))
                .ok_or_else(|| bad("report carries no algebra"))?;
            return self.algebra_from(inner);
        }
        expect_kind(doc, "algebra")?;
        let sig = self.signature_of(doc)?;
        let size = usize_field(doc, "size")?;
        let ops = doc.get("operations").and_then(Value::as_object);
        let mut tables = Vec::new();
        for f in 0..sig.function_count() {
            let name = sig.function_name(f);
            let row = ops
                .and_then(|o| o.get(name))
                .ok_or_else(|| bad(format!("algebra lacks a table for `{name}`")))?;
            tables.push(usize_list(row, &format!("table of `{name}`"))?);
        }
        if let Some(o) = ops {
            if let Some(extra) = o.keys().find(|k| sig.function(k).is_none()) {
                return Err(bad(format!("table for unknown operation `{extra}`")));
            }
        }
        let consts = doc.get("constants").and_then(Value::as_object);
        let mut constants = Vec::new();
        for c in 0..sig.constant_count() {
            let name = sig.constant_name(c);
            let v = consts
                .and_then(|o| o.get(name))
                .and_then(Value::as_u64)
                .ok_or_else(|| bad(format!("algebra lacks a value for constant `{name}`")))?;
            constants.push(v as usize);
        }
        let a = FiniteAlgebra::new(sig, size, tables, constants)?;
        match doc.get("coefficients") {
            None | Some(Value::Null) => Ok(a),
            Some(v) => Ok(a.with_coefficients(usize_list(v, "coefficients")?)?),
        }
    }

    fn signature_of(&self, doc: &Value) -> Result<Signature, CliError> {
        match doc.get("signature") {
            Some(Value::String(name)) => self
                .signatures
                .get(name)
                .cloned()
                .ok_or_else(|| bad(format!("signature `{name}` is not among the loaded documents"))),
            Some(body @ Value::Object(_)) => signature_body(body),
            _ => Err(bad("missing `signature`")),
        }
    }

    pub fn class(&mut self, path: &Path) -> Result<Vec<FiniteAlgebra>, CliError> {
        let doc = self.read("class", path)?;
        expect_kind(&doc, "class")?;
        let members = doc
            .get("members")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("class lacks `members`"))?;
        if members.is_empty() {
            return Err(bad("a class needs at least one member"));
        }
        members.iter().map(|m| self.algebra_from(m)).collect()
    }

    pub fn system(&mut self, path: &Path, b: &FiniteAlgebra) -> Result<EquationSystem, CliError> {
        let doc = self.read("system", path)?;
        expect_kind(&doc, "system")?;
        let vars = string_list(doc.get("vars").ok_or_else(|| bad("system lacks `vars`"))?, "vars")?;
        let ncoef = b.coefficient_count();
        let eqs = doc
            .get("equations")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("system lacks `equations`"))?
            .iter()
            .map(|e| atomic(e, b.signature(), &vars, ncoef))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(n) = eqs.iter().find(|e| e.negated) {
            return Err(bad(format!("systems hold equations only: {}", n.display(b.signature(), &vars))));
        }
        Ok(EquationSystem::with_coefficients(b.signature().clone(), vars, eqs, ncoef)?)
    }

    pub fn presentation(&mut self, path: &Path) -> Result<Presentation, CliError> {
        let doc = self.read("presentation", path)?;
        expect_kind(&doc, "presentation")?;
        let sig = self.signature_of(&doc)?;
        let vars = string_list(doc.get("vars").ok_or_else(|| bad("presentation lacks `vars`"))?, "vars")?;
        let relations = doc
            .get("relations")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("presentation lacks `relations`"))?
            .iter()
            .map(|e| atomic(e, &sig, &vars, 0))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation::new(sig, vars, relations)?)
    }

    pub fn sentence(&mut self, path: &Path, b: &FiniteAlgebra) -> Result<QuantifiedFormula, CliError> {
        let doc = self.read("sentence", path)?;
        expect_kind(&doc, "sentence")?;
        Ok(parse_sentence(str_field(&doc, "text")?, b.signature(), b.coefficient_count())?)
    }

    pub fn direct_system(&mut self, path: &Path) -> Result<FormulaDirectSystem, CliError> {
        let mut doc = self.read("direct-system", path)?;
        if kind(&doc) == Some("report") {
            doc = doc
                .get("result")
                .and_then(|r| r.get("system"))
                .cloned()
                .ok_or_else(|| bad("report carries no direct system"))?;
        }
        expect_kind(&doc, "direct-system")?;
        let sig = self.signature_of(&doc)?;
        let ncoef = doc.get("coefficients").and_then(Value::as_u64).unwrap_or(0) as usize;
        let target = match doc.get("target") {
            None | Some(Value::Null) => Reduct::full(&sig, ncoef),
            Some(v) => reduct(v, &sig, ncoef)?,
        };
        let indices = doc
            .get("indices")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("direct system lacks `indices`"))?;
        let mut labels = Vec::new();
        let mut formulas = Vec::new();
        for (i, ix) in indices.iter().enumerate() {
            labels.push(ix.get("label").and_then(Value::as_str).map_or_else(|| i.to_string(), str::to_string));
            let vars = string_list(ix.get("vars").ok_or_else(|| bad(format!("index {i} lacks `vars`")))?, "vars")?;
            let r = reduct(ix.get("reduct").ok_or_else(|| bad(format!("index {i} lacks `reduct`")))?, &sig, ncoef)?;
            let conjuncts = ix
                .get("conjuncts")
                .and_then(Value::as_array)
                .ok_or_else(|| bad(format!("index {i} lacks `conjuncts`")))?
                .iter()
                .map(|c| atomic(c, &sig, &vars, ncoef))
                .collect::<Result<Vec<_>, _>>()?;
            formulas.push(DiagramFormula::new(r, vars, conjuncts));
        }
        let n = formulas.len();
        let pairs = match doc.get("order") {
            None => Vec::new(),
            Some(v) => v
                .as_array()
                .ok_or_else(|| bad("`order` is a list of pairs"))?
                .iter()
                .map(|p| {
                    let p = usize_list(p, "order pair")?;
                    if p.len() != 2 {
                        return Err(bad("order pairs have two entries"));
                    }
                    Ok((p[0], p[1]))
                })
                .collect::<Result<Vec<_>, CliError>>()?,
        };
        let order = Poset::from_pairs(n, pairs)?;
        let mut maps = BTreeMap::new();
        for (i, phi) in formulas.iter().enumerate() {
            maps.insert((i, i), VariableMap::identity(phi.vars.len()));
        }
        for m in doc.get("maps").and_then(Value::as_array).into_iter().flatten() {
            let from = usize_field(m, "from")?;
            let to = usize_field(m, "to")?;
            let targets = usize_list(m.get("targets").ok_or_else(|| bad("map lacks `targets`"))?, "targets")?;
            if from >= n || to >= n {
                return Err(bad(format!("map ({from}, {to}) outside {n} indices")));
            }
            maps.insert((from, to), VariableMap::new(targets));
        }
        Ok(FormulaDirectSystem {
            sig,
            coefficient_count: ncoef,
            target,
            labels,
            order,
            formulas,
            maps,
        })
    }
}

pub fn kind(doc: &Value) -> Option<&str> {
    doc.get("kind").and_then(Value::as_str)
}

pub fn expect_kind(doc: &Value, want: &str) -> Result<(), CliError> {
    match kind(doc) {
        Some(k) if k == want => {}
        Some(k) => return Err(bad(format!("expected a `{want}` document, found `{k}`"))),
        None => return Err(bad(format!("expected a `{want}` document without a `kind` field"))),
    }
    match doc.get("version").and_then(Value::as_u64) {
        Some(VERSION) => Ok(()),
        Some(v) => Err(bad(format!("unsupported version {v}"))),
        None => Err(bad("missing `version`")),
    }
}

fn str_field<'a>(doc: &'a Value, key: &str) -> Result<&'a str, CliError> {
    doc.get(key).and_then(Value::as_str).ok_or_else(|| bad(format!("missing string `{key}`")))
}

fn usize_field(doc: &Value, key: &str) -> Result<usize, CliError> {
    doc.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| bad(format!("missing integer `{key}`")))
}

pub fn usize_list(v: &Value, what: &str) -> Result<Vec<usize>, CliError> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} is not a list")))?
        .iter()
        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("{what} holds a non-integer"))))
        .collect()
}

fn string_list(v: &Value, what: &str) -> Result<Vec<String>, CliError> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} is not a list")))?
        .iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad(format!("{what} holds a non-string"))))
        .collect()
}

fn signature_body(doc: &Value) -> Result<Signature, CliError> {
    let mut functions: Vec<(String, usize)> = Vec::new();
    for f in doc.get("functions").and_then(Value::as_array).into_iter().flatten() {
        let name = str_field(f, "name")?.to_string();
        functions.push((name, usize_field(f, "arity")?));
    }
    let constants = match doc.get("constants") {
        None => Vec::new(),
        Some(v) => string_list(v, "constants")?,
    };
    let fs: Vec<(&str, usize)> = functions.iter().map(|(n, a)| (n.as_str(), *a)).collect();
    let cs: Vec<&str> = constants.iter().map(String::as_str).collect();
    Ok(Signature::build(&fs, &cs)?)
}

fn reduct(v: &Value, sig: &Signature, ncoef: usize) -> Result<Reduct, CliError> {
    let mut r = Reduct::empty();
    for name in string_list(v, "reduct")? {
        if let Some(a) = name.strip_prefix('@') {
            let a: usize = a.parse().map_err(|_| bad(format!("bad coefficient `{name}`")))?;
            if a >= ncoef {
                return Err(bad(format!("coefficient `{name}` out of range")));
            }
            r.coefficients.insert(a);
        } else if let Some(f) = sig.function(&name) {
            r.functions.insert(f);
        } else if let Some(c) = sig.constant(&name) {
            r.constants.insert(c);
        } else {
            return Err(bad(format!("unknown symbol `{name}` in reduct")));
        }
    }
    Ok(r)
}

/// A term as text or as a nested array `["mul", ["var", "x"], ["const", "e"]]`.
pub fn term(v: &Value, sig: &Signature, vars: &[String], ncoef: usize) -> Result<Term, CliError> {
    match v {
        Value::String(s) => Ok(parse_term_with_coefficients(s, sig, vars, ncoef)?),
        Value::Array(items) => {
            let head = items
                .first()
                .and_then(Value::as_str)
                .ok_or_else(|| bad("a term array starts with a symbol"))?;
            let rest = &items[1..];
            let leaf = |what: &str| -> Result<&Value, CliError> {
                match rest {
                    [x] => Ok(x),
                    _ => Err(bad(format!("`{what}` takes one argument"))),
                }
            };
            match head {
                "var" => {
                    let name = leaf("var")?.as_str().ok_or_else(|| bad("variable names are strings"))?;
                    let i = vars.iter().position(|v| v == name).ok_or_else(|| bad(format!("unknown variable `{name}`")))?;
                    Ok(Term::Var(i))
                }
                "const" => {
                    let name = leaf("const")?.as_str().ok_or_else(|| bad("constant names are strings"))?;
                    sig.constant(name).map(Term::Const).ok_or_else(|| bad(format!("unknown constant `{name}`")))
                }
                "coef" => {
                    let a = leaf("coef")?.as_u64().ok_or_else(|| bad("coefficients are integers"))? as usize;
                    if a >= ncoef {
                        return Err(bad(format!("coefficient @{a} out of range")));
                    }
                    Ok(Term::Coef(a))
                }
                f => {
                    let fi = sig.function(f).ok_or_else(|| bad(format!("unknown operation `{f}`")))?;
                    if sig.arity(fi) != rest.len() {
                        return Err(bad(format!("`{f}` expects {} arguments", sig.arity(fi))));
                    }
                    let args = rest.iter().map(|a| term(a, sig, vars, ncoef)).collect::<Result<_, _>>()?;
                    Ok(Term::App(fi, args))
                }
            }
        }
        _ => Err(bad("a term is a string or an array")),
    }
}

/// `"t = s"`, `"t != s"`, or `{"lhs": .., "rhs": .., "negated": bool}`.
pub fn atomic(v: &Value, sig: &Signature, vars: &[String], ncoef: usize) -> Result<AtomicFormula, CliError> {
    match v {
        Value::String(s) => Ok(parse_atomic(s, sig, vars, ncoef)?),
        Value::Object(o) => {
            let lhs = term(o.get("lhs").ok_or_else(|| bad("equation lacks `lhs`"))?, sig, vars, ncoef)?;
            let rhs = term(o.get("rhs").ok_or_else(|| bad("equation lacks `rhs`"))?, sig, vars, ncoef)?;
            let negated = o.get("negated").and_then(Value::as_bool).unwrap_or(false);
            Ok(if negated { AtomicFormula::neq(lhs, rhs) } else { AtomicFormula::eq(lhs, rhs) })
        }
        _ => Err(bad("an atomic formula is a string or an object")),
    }
}

pub fn signature_json(sig: &Signature) -> Value {
    let functions: Vec<Value> = (0..sig.function_count())
        .map(|f| json!({"name": sig.function_name(f), "arity": sig.arity(f)}))
        .collect();
    json!({"functions": functions, "constants": sig.constants()})
}

pub fn algebra_json(a: &FiniteAlgebra, name: &str) -> Value {
    let sig = a.signature();
    let mut ops = Map::new();
    for f in 0..sig.function_count() {
        ops.insert(sig.function_name(f).to_string(), json!(a.table(f)));
    }
    let mut consts = Map::new();
    for c in 0..sig.constant_count() {
        consts.insert(sig.constant_name(c).to_string(), json!(a.constant(c)));
    }
    let mut doc = json!({
        "kind": "algebra",
        "version": VERSION,
        "name": name,
        "signature": signature_json(sig),
        "size": a.size(),
        "operations": ops,
        "constants": consts,
    });
    if a.coefficient_count() > 0 {
        doc["coefficients"] = json!(a.coefficients());
    }
    doc
}

pub fn system_json(s: &EquationSystem) -> Value {
    json!({
        "kind": "system",
        "version": VERSION,
        "vars": s.vars,
        "equations": s.equations.iter().map(|e| e.display(&s.sig, &s.vars).to_string()).collect::<Vec<_>>(),
    })
}

pub fn set_json(y: &AlgebraicSet) -> Value {
    json!({"points": y.points, "system": system_json(&y.system)})
}

fn reduct_names(r: &Reduct, sig: &Signature) -> Vec<String> {
    let mut names: Vec<String> = r.functions.iter().map(|&f| sig.function_name(f).to_string()).collect();
    names.extend(r.constants.iter().map(|&c| sig.constant_name(c).to_string()));
    names.extend(r.coefficients.iter().map(|a| format!("@{a}")));
    names
}

pub fn diagram_json(phi: &DiagramFormula, sig: &Signature) -> Value {
    json!({
        "vars": phi.vars,
        "reduct": reduct_names(&phi.reduct, sig),
        "conjuncts": phi.conjuncts.iter().map(|a| a.display(sig, &phi.vars).to_string()).collect::<Vec<_>>(),
    })
}

pub fn direct_system_json(sys: &FormulaDirectSystem) -> Value {
    let indices: Vec<Value> = sys
        .formulas
        .iter()
        .zip(&sys.labels)
        .map(|(phi, label)| {
            let mut v = diagram_json(phi, &sys.sig);
            v["label"] = json!(label);
            v
        })
        .collect();
    let order: Vec<[usize; 2]> = sys.order.pairs().filter(|(i, j)| i != j).map(|(i, j)| [i, j]).collect();
    let maps: Vec<Value> = sys
        .maps
        .iter()
        .filter(|((i, j), _)| i != j)
        .map(|((i, j), g)| json!({"from": i, "to": j, "targets": g.targets}))
        .collect();
    json!({
        "kind": "direct-system",
        "version": VERSION,
        "signature": signature_json(&sys.sig),
        "coefficients": sys.coefficient_count,
        "target": reduct_names(&sys.target, &sys.sig),
        "indices": indices,
        "order": order,
        "maps": maps,
    })
}

/// Resolve a manifest entry relative to the manifest's directory.
pub fn relative(base: &Path, entry: &str) -> PathBuf {
    let p = Path::new(entry);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}
