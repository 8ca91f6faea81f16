//! A small textual language for string diagrams over Hilb.
//!
//! ```text
//! expr   := tensor { ";" tensor }
//! tensor := unary { "@" unary }
//! unary  := atom { "'" }
//! atom   := name | builtin | scalar "*" atom | "(" expr ")" | "tr" "(" expr ")" | "tp" "(" expr ")"
//! builtin:= "id(" int ")" | "sw(" int "," int ")" | "cup(" int ")" | "cap(" int ")"
//! scalar := float [ ("+" | "-") float "i" ]
//! ```
//!
//! `f ; g` applies f first, `f @ g` is the tensor product, `f'` the dagger and
//! `tp(f)` the transpose.

use crate::error::{shape_err, Error, Result};
use crate::frobenius::{frob_cap, frob_cup, FrobeniusMonoid};
use crate::hilb::{c, compose, dagger, residual, swap, tensor, transpose, Morphism, Shape, C64};
use crate::qgraph::QuantumGraph;
use crate::qiso::QuantumIso;
use crate::report::Report;
use std::collections::BTreeMap;
use std::fmt;

const KEYWORDS: [&str; 6] = ["id", "sw", "cup", "cap", "tr", "tp"];

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Name(String),
    Id(usize),
    Swap(usize, usize),
    Cup(usize),
    Cap(usize),
    Dagger(Box<Ast>),
    Transpose(Box<Ast>),
    Scalar(C64, Box<Ast>),
    Compose(Box<Ast>, Box<Ast>),
    Tensor(Box<Ast>, Box<Ast>),
    Trace(Box<Ast>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Imag(String),
    LParen,
    RParen,
    Comma,
    Semi,
    At,
    Prime,
    Star,
    Plus,
    Minus,
    Other(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(s) => format!("number {s}"),
            Tok::Imag(s) => format!("imaginary {s}i"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::At => "`@`".into(),
            Tok::Prime => "`'`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Other(ch) => format!("`{ch}`"),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_start(ch: char) -> bool {
    ch.is_ascii_alphabetic() || ch == '_'
}

fn is_ident_char(ch: char) -> bool {
    ch.is_ascii_alphanumeric() || ch == '_' || ch == '.'
}

fn lex(text: &str) -> Vec<Spanned> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let ch = chars[i];
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = (line, col);
        let begin = i;
        let tok = if is_ident_start(ch) {
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            Tok::Ident(chars[begin..i].iter().collect())
        } else if ch.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let s: String = chars[begin..i].iter().collect();
            if i < chars.len() && chars[i] == 'i' && !chars.get(i + 1).is_some_and(|&n| is_ident_char(n)) {
                i += 1;
                Tok::Imag(s)
            } else {
                Tok::Num(s)
            }
        } else {
            i += 1;
            match ch {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '@' => Tok::At,
                '\'' => Tok::Prime,
                '*' => Tok::Star,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                other => Tok::Other(other),
            }
        };
        col += i - begin;
        out.push(Spanned { tok, line: start.0, col: start.1 });
    }
    out.push(Spanned { tok: Tok::End, line, col });
    out
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const ATOM_START: [&str; 9] = ["name", "id", "sw", "cup", "cap", "tr", "tp", "number", "("];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::Syntax {
            line: s.line,
            col: s.col,
            expected: expected.iter().map(|e| e.to_string()).collect(),
            found: s.tok.describe(),
        })
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&[name])
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.tensor()?;
        while *self.peek() == Tok::Semi {
            self.bump();
            let rhs = self.tensor()?;
            lhs = Ast::Compose(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn tensor(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::At {
            self.bump();
            let rhs = self.unary()?;
            lhs = Ast::Tensor(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast> {
        let mut a = self.atom()?;
        while *self.peek() == Tok::Prime {
            self.bump();
            a = Ast::Dagger(Box::new(a));
        }
        Ok(a)
    }

    fn int(&mut self) -> Result<usize> {
        if let Tok::Num(s) = self.peek() {
            if let Ok(n) = s.parse::<usize>() {
                self.bump();
                return Ok(n);
            }
        }
        self.fail(&["integer"])
    }

    fn float(&mut self) -> Result<f64> {
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                let v: f64 = s.parse().map_err(|_| Error::Invalid(format!("bad number {s}")))?;
                Ok(if neg { -v } else { v })
            }
            _ => self.fail(&["number"]),
        }
    }

    fn scalar(&mut self) -> Result<C64> {
        let re = self.float()?;
        let sign = match self.peek() {
            Tok::Plus => 1.0,
            Tok::Minus => -1.0,
            _ => return Ok(c(re, 0.0)),
        };
        self.bump();
        match self.peek().clone() {
            Tok::Imag(s) => {
                self.bump();
                let v: f64 = s.parse().map_err(|_| Error::Invalid(format!("bad number {s}")))?;
                Ok(c(re, sign * v))
            }
            _ => self.fail(&["imaginary part"]),
        }
    }

    fn wrapped(&mut self) -> Result<Ast> {
        self.expect(Tok::LParen, "(")?;
        let e = self.expr()?;
        self.expect(Tok::RParen, ")")?;
        Ok(e)
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "id" | "cup" | "cap" => {
                        self.expect(Tok::LParen, "(")?;
                        let n = self.int()?;
                        self.expect(Tok::RParen, ")")?;
                        Ok(match name.as_str() {
                            "id" => Ast::Id(n),
                            "cup" => Ast::Cup(n),
                            _ => Ast::Cap(n),
                        })
                    }
                    "sw" => {
                        self.expect(Tok::LParen, "(")?;
                        let m = self.int()?;
                        self.expect(Tok::Comma, ",")?;
                        let n = self.int()?;
                        self.expect(Tok::RParen, ")")?;
                        Ok(Ast::Swap(m, n))
                    }
                    "tr" => Ok(Ast::Trace(Box::new(self.wrapped()?))),
                    "tp" => Ok(Ast::Transpose(Box::new(self.wrapped()?))),
                    _ => Ok(Ast::Name(name)),
                }
            }
            Tok::LParen => self.wrapped(),
            Tok::Num(_) | Tok::Minus => {
                let z = self.scalar()?;
                self.expect(Tok::Star, "*")?;
                Ok(Ast::Scalar(z, Box::new(self.atom()?)))
            }
            _ => self.fail(&ATOM_START),
        }
    }
}

pub fn parse(text: &str) -> Result<Ast> {
    let mut p = Parser { toks: lex(text), pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&[";", "@", "'", "end of input"]);
    }
    Ok(e)
}

fn fmt_scalar(z: C64) -> String {
    let mut s = format!("{}", z.re);
    if z.im != 0.0 || z.im.is_sign_negative() {
        if z.im.is_sign_negative() {
            s.push_str(&format!("-{}i", -z.im));
        } else {
            s.push_str(&format!("+{}i", z.im));
        }
    }
    s
}

fn level(a: &Ast) -> u8 {
    match a {
        Ast::Compose(..) => 0,
        Ast::Tensor(..) => 1,
        Ast::Dagger(_) => 2,
        _ => 3,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, a: &Ast, min: u8) -> fmt::Result {
    if level(a) < min {
        write!(f, "({a})")
    } else {
        write!(f, "{a}")
    }
}

/// Canonical form: the shortest text that parses back to the same tree.
impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ast::Name(n) => write!(f, "{n}"),
            Ast::Id(n) => write!(f, "id({n})"),
            Ast::Swap(m, n) => write!(f, "sw({m},{n})"),
            Ast::Cup(n) => write!(f, "cup({n})"),
            Ast::Cap(n) => write!(f, "cap({n})"),
            Ast::Dagger(a) => {
                write_at(f, a, 2)?;
                write!(f, "'")
            }
            Ast::Transpose(a) => write!(f, "tp({a})"),
            Ast::Trace(a) => write!(f, "tr({a})"),
            Ast::Scalar(z, a) => {
                write!(f, "{}*", fmt_scalar(*z))?;
                write_at(f, a, 3)
            }
            Ast::Compose(l, r) => {
                write_at(f, l, 0)?;
                write!(f, " ; ")?;
                write_at(f, r, 1)
            }
            Ast::Tensor(l, r) => {
                write_at(f, l, 1)?;
                write!(f, " @ ")?;
                write_at(f, r, 2)
            }
        }
    }
}

/// Name → morphism bindings.
#[derive(Clone, Debug, Default)]
pub struct Env {
    bindings: BTreeMap<String, Morphism>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn bind(&mut self, name: &str, f: Morphism) -> Result<()> {
        let valid = name.chars().next().is_some_and(is_ident_start)
            && name.chars().all(is_ident_char)
            && !KEYWORDS.contains(&name);
        if !valid {
            return Err(Error::Invalid(format!("`{name}` is not a bindable name")));
        }
        if self.bindings.contains_key(name) {
            return Err(Error::Invalid(format!("`{name}` is already bound")));
        }
        self.bindings.insert(name.to_string(), f);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Morphism> {
        self.bindings.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = (&str, &Morphism)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Binds m, u, dm, du, fc, fk, i (carrier identity) and s (carrier swap) under a prefix.
    pub fn bind_monoid(&mut self, prefix: &str, a: &FrobeniusMonoid) -> Result<()> {
        self.bind(&format!("{prefix}m"), a.mult.clone())?;
        self.bind(&format!("{prefix}u"), a.unit.clone())?;
        self.bind(&format!("{prefix}dm"), a.comult())?;
        self.bind(&format!("{prefix}du"), a.counit())?;
        self.bind(&format!("{prefix}fc"), frob_cup(a))?;
        self.bind(&format!("{prefix}fk"), frob_cap(a))?;
        self.bind(&format!("{prefix}i"), a.id())?;
        self.bind(&format!("{prefix}s"), swap(a.dim, a.dim))
    }

    /// Monoid names plus g for the adjacency map.
    pub fn bind_graph(&mut self, prefix: &str, x: &QuantumGraph) -> Result<()> {
        self.bind_monoid(prefix, &x.monoid)?;
        self.bind(&format!("{prefix}g"), x.gamma.clone())
    }

    /// P and the identity h of its auxiliary space.
    pub fn bind_iso(&mut self, prefix: &str, q: &QuantumIso) -> Result<()> {
        self.bind(&format!("{prefix}P"), q.p.clone())?;
        self.bind(&format!("{prefix}h"), Morphism::id(q.h_dim))
    }
}

/// Shapes of an expression without evaluating it.
pub fn infer(a: &Ast, env: &Env) -> Result<(Shape, Shape)> {
    Ok(match a {
        Ast::Name(n) => {
            let f = env.get(n).ok_or_else(|| Error::Name(n.clone()))?;
            (f.dom().clone(), f.cod().clone())
        }
        Ast::Id(n) => (Shape::of(&[*n]), Shape::of(&[*n])),
        Ast::Swap(m, n) => (Shape::of(&[*m, *n]), Shape::of(&[*n, *m])),
        Ast::Cup(n) => (Shape::unit(), Shape::of(&[*n, *n])),
        Ast::Cap(n) => (Shape::of(&[*n, *n]), Shape::unit()),
        Ast::Dagger(x) | Ast::Transpose(x) => {
            let (d, c) = infer(x, env)?;
            (c, d)
        }
        Ast::Scalar(_, x) => infer(x, env)?,
        Ast::Compose(l, r) => {
            let (ld, lc) = infer(l, env)?;
            let (rd, rc) = infer(r, env)?;
            if lc != rd {
                return Err(shape_err(&format!("`{a}`"), format!("codomain {lc} of `{l}`"), format!("domain {rd} of `{r}`")));
            }
            (ld, rc)
        }
        Ast::Tensor(l, r) => {
            let (ld, lc) = infer(l, env)?;
            let (rd, rc) = infer(r, env)?;
            (ld.concat(&rd), lc.concat(&rc))
        }
        Ast::Trace(x) => {
            let (d, c) = infer(x, env)?;
            if d != c {
                return Err(shape_err(&format!("`{a}`"), format!("domain {d}"), format!("codomain {c}")));
            }
            (Shape::unit(), Shape::unit())
        }
    })
}

fn eval(a: &Ast, env: &Env) -> Result<Morphism> {
    Ok(match a {
        Ast::Name(n) => env.get(n).ok_or_else(|| Error::Name(n.clone()))?.clone(),
        Ast::Id(n) => Morphism::id(*n),
        Ast::Swap(m, n) => swap(*m, *n),
        Ast::Cup(n) => crate::hilb::cup(*n),
        Ast::Cap(n) => crate::hilb::cap(*n),
        Ast::Dagger(x) => dagger(&eval(x, env)?),
        Ast::Transpose(x) => transpose(&eval(x, env)?),
        Ast::Scalar(z, x) => eval(x, env)?.scale(*z),
        Ast::Compose(l, r) => compose(&eval(r, env)?, &eval(l, env)?)?,
        Ast::Tensor(l, r) => tensor(&eval(l, env)?, &eval(r, env)?),
        Ast::Trace(x) => Morphism::scalar(crate::hilb::trace(&eval(x, env)?)?),
    })
}

/// Type-checks, then contracts.
pub fn evaluate(a: &Ast, env: &Env) -> Result<Morphism> {
    infer(a, env)?;
    eval(a, env)
}

pub fn evaluate_str(text: &str, env: &Env) -> Result<Morphism> {
    evaluate(&parse(text)?, env)
}

/// Residual of lhs against rhs as a one-check report.
pub fn run_equation(lhs: &str, rhs: &str, env: &Env, tol: f64) -> Result<Report> {
    let l = evaluate_str(lhs, env)?;
    let r = evaluate_str(rhs, env)?;
    let mut rep = Report::new(tol);
    rep.push("equation", residual(&l, &r)?);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{check_frobenius_monoid, endo_monoid};

    fn rt(text: &str) {
        let a = parse(text).unwrap();
        assert_eq!(a.to_string(), text);
        assert_eq!(parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn snake() {
        let env = Env::new();
        let f = evaluate_str("(id(2) @ cup(2)) ; (cap(2) @ id(2))", &env).unwrap();
        assert!(residual(&f, &Morphism::id(2)).unwrap() < 1e-12);
        let t = evaluate_str("tr(id(5))", &env).unwrap();
        assert_eq!(t.as_scalar(), Some(c(5.0, 0.0)));
        let s = evaluate_str("sw(2,3) ; sw(3,2)", &env).unwrap();
        assert!(residual(&s, &Morphism::id(6).reshape(Shape::of(&[2, 3]), Shape::of(&[2, 3])).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn precedence() {
        let a = parse("f ; g @ h'").unwrap();
        let f = Box::new(Ast::Name("f".into()));
        let g = Box::new(Ast::Name("g".into()));
        let h = Box::new(Ast::Dagger(Box::new(Ast::Name("h".into()))));
        assert_eq!(a, Ast::Compose(f.clone(), Box::new(Ast::Tensor(g.clone(), h))));
        assert_eq!(parse("f'").unwrap(), Ast::Dagger(f.clone()));
        assert_eq!(parse("2*f'").unwrap(), Ast::Dagger(Box::new(Ast::Scalar(c(2.0, 0.0), f.clone()))));
        assert_eq!(parse("1.5-2i*f").unwrap(), Ast::Scalar(c(1.5, -2.0), f));
        for t in [
            "f ; g ; h",
            "f ; (g ; h)",
            "f @ g @ h",
            "f @ (g @ h)",
            "(f ; g)'",
            "f''",
            "2*(f')",
            "-0.5+0.0000001i*(f @ g)",
            "0-0i*f",
            "tr(tp(f) ; g)",
            "sw(2,3) @ cup(4)",
            "A.m ; A.fk",
        ] {
            rt(t);
        }
    }

    #[test]
    fn diagnostics() {
        match parse("cap(2) ; tr? ") {
            Err(Error::Syntax { line, col, expected, found }) => {
                assert_eq!((line, col), (1, 12));
                assert_eq!(expected, vec!["("]);
                assert_eq!(found, "`?`");
            }
            other => panic!("{other:?}"),
        }
        match parse("f ;\n  @ g") {
            Err(Error::Syntax { line, col, expected, .. }) => {
                assert_eq!((line, col), (2, 3));
                assert!(expected.contains(&"name".to_string()));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("f g"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("id(2.5)"), Err(Error::Syntax { .. })));
        assert!(matches!(evaluate_str("q", &Env::new()), Err(Error::Name(_))));
        let e = evaluate_str("id(2) ; id(3)", &Env::new()).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("[2]") && msg.contains("[3]"), "{msg}");
    }

    #[test]
    fn frobenius_equation_matches_module() {
        let a = endo_monoid(2);
        let mut env = Env::new();
        env.bind_monoid("", &a).unwrap();
        let rep = run_equation("(dm @ i) ; (i @ m)", "m ; dm", &env, 1e-12).unwrap();
        let module = check_frobenius_monoid(&a, 1e-12);
        assert!((rep.checks[0].residual - module.residual("frobenius_left").unwrap()).abs() < 1e-12);
        let bad = run_equation("m ; dm", "i @ i", &env, 1e-9).unwrap();
        assert!(!bad.all_pass());
        assert!(env.bind("m", a.mult.clone()).is_err());
        assert!(env.bind("tr", a.mult.clone()).is_err());
    }
}
