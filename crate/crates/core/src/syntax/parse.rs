//! Concrete syntax.
//!
//! Terms use prefix application with comma-separated arguments:
//! `mul(x, inv(y))`, `e`, `@1` (the coefficient constant `c_1`).
//! Identifiers match `[a-zA-Z_][a-zA-Z0-9_]*`; whether one names a variable
//! or a symbol is decided by the declared variable list and signature.
//!
//! Sentences are prenex: `forall x y . (mul(x,x) = e)`, `exists x . x != e`,
//! or the quasi-identity shorthand `qi: mul(x,x)=e -> x=e` whose free
//! identifiers become universally quantified in order of appearance.
//! Matrix connectives, loosest first: `->`, `|`, `&`, prefix `!`.

use super::{AtomicFormula, Matrix, QuantifiedFormula, Quantifier, Signature, Symbol, Term};
use crate::error::{Error, ParseErrorKind, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Coef(usize),
    LParen,
    RParen,
    Comma,
    Eq,
    Neq,
    Not,
    And,
    Or,
    Arrow,
    Dot,
    Colon,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b':' => Tok::Colon,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'=' => Tok::Eq,
            b'!' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Neq
            }
            b'!' => Tok::Not,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'@' => {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(Error::parse(i, ParseErrorKind::Syntax("expected digits after `@`".into())));
                }
                let n = text[i + 1..j]
                    .parse()
                    .map_err(|_| Error::parse(i, ParseErrorKind::Syntax("coefficient index too large".into())))?;
                i = j;
                out.push((start, Tok::Coef(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                out.push((start, Tok::Ident(text[i..j].to_string())));
                i = j;
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::parse(i, ParseErrorKind::Syntax(format!("unexpected character `{ch}`"))));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    sig: &'a Signature,
    vars: Vec<String>,
    coefficients: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &str, sig: &'a Signature, vars: &[String], coefficients: usize) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            sig,
            vars: vars.to_vec(),
            coefficients,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}")))
        }
    }

    fn syntax(&self, msg: String) -> Error {
        Error::parse(self.pos(), ParseErrorKind::Syntax(msg))
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.syntax("unexpected trailing input".into()))
        }
    }

    fn term(&mut self) -> Result<Term> {
        let pos = self.pos();
        match self.bump() {
            Tok::Coef(a) => {
                if a >= self.coefficients {
                    return Err(Error::parse(pos, ParseErrorKind::UnknownSymbol(format!("@{a}"))));
                }
                Ok(Term::Coef(a))
            }
            Tok::Ident(name) => {
                let applied = *self.peek() == Tok::LParen;
                if !applied {
                    if let Some(v) = self.vars.iter().position(|x| *x == name) {
                        return Ok(Term::Var(v));
                    }
                }
                match self.sig.lookup(&name) {
                    None => Err(Error::parse(pos, ParseErrorKind::UnknownSymbol(name))),
                    Some(Symbol::Constant(c)) => {
                        if applied {
                            let found = self.arguments()?.len();
                            return Err(Error::parse(
                                pos,
                                ParseErrorKind::Arity {
                                    symbol: name,
                                    expected: 0,
                                    found,
                                },
                            ));
                        }
                        Ok(Term::Const(c))
                    }
                    Some(Symbol::Function(f)) => {
                        let args = if applied { self.arguments()? } else { Vec::new() };
                        let expected = self.sig.arity(f);
                        if args.len() != expected {
                            return Err(Error::parse(
                                pos,
                                ParseErrorKind::Arity {
                                    symbol: name,
                                    expected,
                                    found: args.len(),
                                },
                            ));
                        }
                        Ok(Term::App(f, args))
                    }
                }
            }
            _ => Err(Error::parse(pos, ParseErrorKind::Syntax("expected a term".into()))),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.bump() {
                Tok::Comma => continue,
                Tok::RParen => return Ok(args),
                _ => {
                    self.at -= 1;
                    return Err(self.syntax("expected `,` or `)`".into()));
                }
            }
        }
    }

    fn atom(&mut self) -> Result<AtomicFormula> {
        let lhs = self.term()?;
        let negated = match self.bump() {
            Tok::Eq => false,
            Tok::Neq => true,
            _ => {
                self.at -= 1;
                return Err(self.syntax("expected `=` or `!=`".into()));
            }
        };
        let rhs = self.term()?;
        Ok(AtomicFormula { lhs, rhs, negated })
    }

    fn implication(&mut self) -> Result<Matrix> {
        let premise = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let conclusion = self.disjunction()?;
            return Ok(Matrix::Implies(Box::new(premise), Box::new(conclusion)));
        }
        Ok(premise)
    }

    fn disjunction(&mut self) -> Result<Matrix> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Matrix::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Matrix> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Matrix::And(parts) })
    }

    fn unary(&mut self) -> Result<Matrix> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.negate())
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Ok(Matrix::Literal(self.atom()?)),
        }
    }
}

/// Parse a term over `sig` with the given ordered variable list.
pub fn parse_term(text: &str, sig: &Signature, vars: &[String]) -> Result<Term> {
    parse_term_with_coefficients(text, sig, vars, 0)
}

/// As [`parse_term`], also accepting coefficient leaves `@0 .. @(n-1)`.
pub fn parse_term_with_coefficients(text: &str, sig: &Signature, vars: &[String], coefficients: usize) -> Result<Term> {
    let mut p = Parser::new(text, sig, vars, coefficients)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parse `t = s` or `t != s`.
pub fn parse_atomic(text: &str, sig: &Signature, vars: &[String], coefficients: usize) -> Result<AtomicFormula> {
    let mut p = Parser::new(text, sig, vars, coefficients)?;
    let a = p.atom()?;
    p.finish()?;
    Ok(a)
}

/// Parse a prenex sentence or a `qi:` quasi-identity.
pub fn parse_sentence(text: &str, sig: &Signature, coefficients: usize) -> Result<QuantifiedFormula> {
    let toks = lex(text)?;
    if matches!(toks.first(), Some((_, Tok::Ident(k))) if k == "qi") && matches!(toks.get(1), Some((_, Tok::Colon))) {
        return parse_quasi_identity(text, toks, sig, coefficients);
    }
    let mut p = Parser {
        toks,
        at: 0,
        sig,
        vars: Vec::new(),
        coefficients,
    };
    let mut prefix = Vec::new();
    loop {
        let q = match p.peek() {
            Tok::Ident(k) if k == "forall" => Quantifier::Forall,
            Tok::Ident(k) if k == "exists" => Quantifier::Exists,
            _ => break,
        };
        p.bump();
        let mut any = false;
        while let Tok::Ident(name) = p.peek().clone() {
            if name == "forall" || name == "exists" {
                break;
            }
            if sig.lookup(&name).is_some() {
                return Err(p.syntax(format!("`{name}` is a signature symbol, not a variable")));
            }
            if p.vars.contains(&name) {
                return Err(p.syntax(format!("variable `{name}` bound twice")));
            }
            p.bump();
            p.vars.push(name);
            prefix.push((q, p.vars.len() - 1));
            any = true;
        }
        if !any {
            return Err(p.syntax("expected a variable after the quantifier".into()));
        }
    }
    if !prefix.is_empty() {
        p.expect(Tok::Dot, "`.` after the quantifier prefix")?;
    }
    let matrix = p.implication()?;
    p.finish()?;
    Ok(QuantifiedFormula {
        vars: p.vars,
        prefix,
        matrix,
    })
}

fn parse_quasi_identity(
    text: &str,
    toks: Vec<(usize, Tok)>,
    sig: &Signature,
    coefficients: usize,
) -> Result<QuantifiedFormula> {
    let mut vars: Vec<String> = Vec::new();
    for (i, (_, tok)) in toks.iter().enumerate().skip(2) {
        if let Tok::Ident(name) = tok {
            let applied = matches!(toks.get(i + 1), Some((_, Tok::LParen)));
            if !applied && sig.lookup(name).is_none() && !vars.contains(name) {
                vars.push(name.clone());
            }
        }
    }
    let mut p = Parser {
        toks,
        at: 2,
        sig,
        vars,
        coefficients,
    };
    let matrix = p.implication()?;
    p.finish()?;
    let sentence = QuantifiedFormula::universal(p.vars, matrix);
    if sentence.as_horn().is_none() {
        return Err(Error::parse(
            text.len(),
            ParseErrorKind::Syntax("a quasi-identity must have the shape `eq & ... & eq -> eq`".into()),
        ));
    }
    Ok(sentence)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group() -> Signature {
        Signature::build(&[("mul", 2), ("inv", 1)], &["e"]).unwrap()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_nested_applications() {
        let sig = Signature::build(&[("meet", 2)], &[]).unwrap();
        let vars = names(&["x", "y"]);
        let t = parse_term("meet(x,meet(y,x))", &sig, &vars).unwrap();
        assert_eq!(t.size(), 5);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.vars().into_iter().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(t.display(&sig, &vars).to_string(), "meet(x, meet(y, x))");
    }

    #[test]
    fn closed_term_has_no_variables() {
        let t = parse_term("e", &group(), &[]).unwrap();
        assert_eq!(t, Term::Const(0));
        assert!(t.vars().is_empty());
    }

    #[test]
    fn arity_mismatch_reports_position() {
        let vars = names(&["x"]);
        let err = parse_term("inv(mul(x))", &group(), &vars).unwrap_err();
        match err {
            Error::Parse {
                pos,
                kind: ParseErrorKind::Arity { symbol, expected, found },
            } => {
                assert_eq!((pos, symbol.as_str(), expected, found), (4, "mul", 2, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_symbols_and_junk() {
        let vars = names(&["x"]);
        assert!(matches!(
            parse_term("foo(x)", &group(), &vars),
            Err(Error::Parse { pos: 0, kind: ParseErrorKind::UnknownSymbol(_) })
        ));
        assert!(matches!(
            parse_term("mul(x, x", &group(), &vars),
            Err(Error::Parse { kind: ParseErrorKind::Syntax(_), .. })
        ));
        assert!(parse_term("x x", &group(), &vars).is_err());
        assert!(parse_term("e()", &group(), &vars).is_err());
        assert!(parse_term("@0", &group(), &vars).is_err());
        assert_eq!(parse_term_with_coefficients("@1", &group(), &vars, 2).unwrap(), Term::Coef(1));
    }

    #[test]
    fn sentences_and_quasi_identities() {
        let sig = group();
        let s = parse_sentence("forall x y . (mul(x,x) = e)", &sig, 0).unwrap();
        assert!(s.is_universal());
        assert_eq!(s.vars, names(&["x", "y"]));
        assert_eq!(s.display(&sig).to_string(), "forall x y . mul(x, x) = e");

        let q = parse_sentence("qi: mul(x,x)=e -> x=e", &sig, 0).unwrap();
        let (premises, conclusion) = q.as_horn().unwrap();
        assert_eq!(premises.len(), 1);
        assert_eq!(conclusion, AtomicFormula::eq(Term::Var(0), Term::Const(0)));

        let mixed = parse_sentence("forall x exists y . mul(x, y) = e & !(x = y)", &sig, 0).unwrap();
        assert!(!mixed.is_universal() && !mixed.is_existential());
        assert!(parse_sentence("qi: x = e | x != e", &sig, 0).is_err());
        assert!(parse_sentence("forall e . e = e", &sig, 0).is_err());
        assert!(parse_sentence("forall x . y = x", &sig, 0).is_err());
    }
}
