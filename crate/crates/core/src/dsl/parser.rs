use std::collections::{HashMap, HashSet};

use super::lexer::{lex, Tok, Token};
use super::{Binding, DslError, DslErrorKind, Expr, Mode, Relation, Suite};
use crate::gens::{is_known, Arg};
use crate::scalar::{Quarter, Rational, Scalar};

const MAX_DEPTH: usize = 200;
const MAX_EXPONENT: i64 = 64;
const RESERVED: &[&str] = &["t", "q", "i", "qcomm", "let", "assert", "modes", "suite"];

struct NameRef {
    name: String,
    with_args: bool,
    line: usize,
    col: usize,
    /// Index of the enclosing `let`, if any.
    owner: Option<usize>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
    refs: Vec<NameRef>,
    owner: Option<usize>,
}

type PResult<T> = Result<T, DslError>;

fn boxed(a: Expr, b: Expr) -> (Box<Expr>, Box<Expr>) {
    (Box::new(a), Box::new(b))
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if !matches!(t.tok, Tok::Eof) {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, kind: DslErrorKind, message: String) -> DslError {
        DslError {
            kind,
            line: t.line,
            col: t.col,
            message,
        }
    }

    fn syntax<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(self.error_at(self.peek(), DslErrorKind::Syntax, message.into()))
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Int(v) => format!("`{v}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn expect_sym(&mut self, s: &str) -> PResult<Token> {
        if self.is_sym(s) {
            Ok(self.next())
        } else {
            let found = Self::describe(&self.peek().tok);
            self.syntax(format!("expected `{s}`, found {found}"))
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<(String, Token)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.next()))
            }
            other => {
                let found = Self::describe(other);
                self.syntax(format!("expected {what}, found {found}"))
            }
        }
    }

    fn expect_int(&mut self, what: &str) -> PResult<i64> {
        match self.peek().tok {
            Tok::Int(v) => {
                self.next();
                Ok(v)
            }
            ref other => {
                let found = Self::describe(other);
                self.syntax(format!("expected {what}, found {found}"))
            }
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        match self.peek().tok {
            Tok::Newline => {
                self.next();
                Ok(())
            }
            Tok::Eof => Ok(()),
            ref other => {
                let found = Self::describe(other);
                self.syntax(format!("expected end of line, found {found}"))
            }
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.syntax("expression nested too deeply");
        }
        Ok(())
    }

    // expr := term { ('+' | '-') term }
    fn expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let mut acc = self.term()?;
        loop {
            if self.is_sym("+") {
                self.next();
                let rhs = self.term()?;
                acc = match (acc, rhs) {
                    (Expr::Scalar(a), Expr::Scalar(b)) => Expr::Scalar(a.add(&b)),
                    (a, b) => {
                        let (a, b) = boxed(a, b);
                        Expr::Add(a, b)
                    }
                };
            } else if self.is_sym("-") {
                self.next();
                let rhs = self.term()?;
                acc = match (acc, rhs) {
                    (Expr::Scalar(a), Expr::Scalar(b)) => Expr::Scalar(a.sub(&b)),
                    (a, b) => {
                        let (a, b) = boxed(a, b);
                        Expr::Sub(a, b)
                    }
                };
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        match &self.peek().tok {
            Tok::Int(_) | Tok::Ident(_) => true,
            Tok::Sym(s) => matches!(*s, "(" | "[" | "{"),
            _ => false,
        }
    }

    // term := unary { ('*' | '/' | juxtaposition) unary }
    fn term(&mut self) -> PResult<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.is_sym("/") {
                let at = self.next();
                let rhs = self.unary()?;
                acc = match (acc, rhs) {
                    (Expr::Scalar(a), Expr::Scalar(b)) => Expr::Scalar(a.div(&b).map_err(|_| {
                        self.error_at(&at, DslErrorKind::Syntax, "division by zero".into())
                    })?),
                    (a, b) => {
                        let (a, b) = boxed(a, b);
                        Expr::Div(a, b)
                    }
                };
                continue;
            }
            if self.is_sym("*") {
                self.next();
            } else if !self.starts_atom() {
                break;
            }
            let rhs = self.unary()?;
            acc = match (acc, rhs) {
                (Expr::Scalar(a), Expr::Scalar(b)) => Expr::Scalar(a.mul(&b)),
                (a, b) => {
                    let (a, b) = boxed(a, b);
                    Expr::Mul(a, b)
                }
            };
        }
        Ok(acc)
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> PResult<Expr> {
        if self.is_sym("-") {
            self.next();
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(match inner {
                Expr::Scalar(s) => Expr::Scalar(s.neg()),
                e => Expr::Neg(Box::new(e)),
            });
        }
        self.power()
    }

    // power := atom [ '^' ['-'] INT ]
    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if !self.is_sym("^") {
            return Ok(base);
        }
        let at = self.next();
        let negative = if self.is_sym("-") {
            self.next();
            true
        } else {
            false
        };
        let k = self.expect_int("an integer exponent")?;
        if k > MAX_EXPONENT {
            return Err(self.error_at(
                &at,
                DslErrorKind::Syntax,
                format!("exponent {k} exceeds {MAX_EXPONENT}"),
            ));
        }
        let k = if negative { -k } else { k };
        match base {
            Expr::Scalar(s) => s.pow(k).map(Expr::Scalar).map_err(|_| {
                self.error_at(&at, DslErrorKind::Syntax, "negative power of zero".into())
            }),
            e => Ok(Expr::Pow(Box::new(e), k)),
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(v) => {
                self.next();
                Ok(Expr::Scalar(Scalar::from_int(*v)))
            }
            Tok::Sym("(") => {
                self.next();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Sym("[") => {
                self.next();
                let a = self.expr()?;
                self.expect_sym(",")?;
                let b = self.expr()?;
                self.expect_sym("]")?;
                let (a, b) = boxed(a, b);
                Ok(Expr::Comm(a, b))
            }
            Tok::Sym("{") => {
                self.next();
                let a = self.expr()?;
                self.expect_sym(",")?;
                let b = self.expr()?;
                self.expect_sym("}")?;
                let (a, b) = boxed(a, b);
                Ok(Expr::AntiComm(a, b))
            }
            Tok::Ident(name) => {
                let name = name.clone();
                self.next();
                match name.as_str() {
                    "t" => return Ok(Expr::Scalar(Scalar::t_pow(1))),
                    "q" => return Ok(Expr::Scalar(Scalar::q())),
                    "i" => return Ok(Expr::Scalar(Scalar::i())),
                    "qcomm" => return self.qcomm(),
                    "let" | "assert" | "modes" | "suite" => {
                        return Err(self.error_at(
                            &t,
                            DslErrorKind::Syntax,
                            format!("keyword `{name}` cannot appear in an expression"),
                        ))
                    }
                    _ => {}
                }
                let (args, kwargs) = if self.is_sym("(") && !self.peek().spaced {
                    self.args()?
                } else {
                    (Vec::new(), Vec::new())
                };
                self.refs.push(NameRef {
                    name: name.clone(),
                    with_args: !(args.is_empty() && kwargs.is_empty()),
                    line: t.line,
                    col: t.col,
                    owner: self.owner,
                });
                Ok(Expr::Name { name, args, kwargs })
            }
            other => {
                let found = Self::describe(other);
                self.syntax(format!("expected an expression, found {found}"))
            }
        }
    }

    // qcomm '(' expr ',' expr ';' rational ')'
    fn qcomm(&mut self) -> PResult<Expr> {
        self.expect_sym("(")?;
        let a = self.expr()?;
        self.expect_sym(",")?;
        let b = self.expr()?;
        self.expect_sym(";")?;
        let at = self.peek().clone();
        let e = self.signed_rational()?;
        let e = Quarter::from_rational(&e).map_err(|_| {
            self.error_at(
                &at,
                DslErrorKind::Syntax,
                format!("q-commutator exponent {e} is not a multiple of 1/4"),
            )
        })?;
        self.expect_sym(")")?;
        let (a, b) = boxed(a, b);
        Ok(Expr::QComm(a, b, e))
    }

    fn signed_rational(&mut self) -> PResult<Rational> {
        let negative = if self.is_sym("-") {
            self.next();
            true
        } else {
            false
        };
        let at = self.peek().clone();
        let num = self.expect_int("a number")?;
        let den = if self.is_sym("/") {
            self.next();
            self.expect_int("a denominator")?
        } else {
            1
        };
        let r = Rational::new(if negative { -num } else { num }, den)
            .ok_or_else(|| self.error_at(&at, DslErrorKind::Syntax, "zero denominator".into()))?;
        Ok(r)
    }

    fn arg_value(&mut self) -> PResult<Arg> {
        if self.is_sym("(") {
            self.next();
            let mut xs = Vec::new();
            while !self.is_sym(")") {
                xs.push(self.signed_rational()?);
                if self.is_sym(",") {
                    self.next();
                } else {
                    break;
                }
            }
            self.expect_sym(")")?;
            Ok(Arg::Tuple(xs))
        } else {
            Ok(Arg::Num(self.signed_rational()?))
        }
    }

    #[allow(clippy::type_complexity)]
    fn args(&mut self) -> PResult<(Vec<Arg>, Vec<(String, Arg)>)> {
        self.expect_sym("(")?;
        let mut args = Vec::new();
        let mut kwargs = Vec::new();
        while !self.is_sym(")") {
            let keyword = matches!(self.peek().tok, Tok::Ident(_))
                && matches!(self.toks.get(self.pos + 1).map(|t| &t.tok), Some(Tok::Sym("=")));
            if keyword {
                let (k, _) = self.expect_ident("a keyword")?;
                self.expect_sym("=")?;
                kwargs.push((k, self.arg_value()?));
            } else {
                if !kwargs.is_empty() {
                    return self.syntax("positional argument after keyword argument");
                }
                args.push(self.arg_value()?);
            }
            if self.is_sym(",") {
                self.next();
            } else {
                break;
            }
        }
        self.expect_sym(")")?;
        Ok((args, kwargs))
    }

    fn attribute(&mut self, rel: &mut Relation) -> PResult<()> {
        self.expect_sym("@")?;
        let (key, at) = self.expect_ident("an attribute name")?;
        self.expect_sym("=")?;
        let bad = |p: &Self, msg: String| Err(p.error_at(&at, DslErrorKind::Syntax, msg));
        match key.as_str() {
            "margin" => match self.peek().tok.clone() {
                Tok::Ident(s) if s == "auto" => {
                    self.next();
                    rel.margin = None;
                }
                Tok::Int(v) if (0..=u32::MAX as i64).contains(&v) => {
                    self.next();
                    rel.margin = Some(v as u32);
                }
                _ => return self.syntax("expected `auto` or a nonnegative integer"),
            },
            "mode" => {
                let (v, vt) = self.expect_ident("exact, sample or limit")?;
                rel.mode = Some(v.parse::<Mode>().map_err(|m| {
                    self.error_at(&vt, DslErrorKind::Syntax, m)
                })?);
            }
            "samples" => {
                let v = self.expect_int("a sample count")?;
                if v < 1 {
                    return bad(self, "sample count must be positive".into());
                }
                rel.samples = Some(v as usize);
            }
            other => return bad(self, format!("unknown attribute `{other}`")),
        }
        Ok(())
    }
}

/// Parses one expression.
pub fn parse_expr(src: &str) -> Result<Expr, DslError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        depth: 0,
        refs: Vec::new(),
        owner: None,
    };
    while matches!(p.peek().tok, Tok::Newline) {
        p.next();
    }
    let e = p.expr()?;
    while matches!(p.peek().tok, Tok::Newline) {
        p.next();
    }
    if !matches!(p.peek().tok, Tok::Eof) {
        let found = Parser::describe(&p.peek().tok);
        return p.syntax(format!("unexpected {found} after expression"));
    }
    for r in &p.refs {
        if r.name != "I" && !is_known(&r.name) {
            return Err(DslError {
                kind: DslErrorKind::UnresolvedName,
                line: r.line,
                col: r.col,
                message: format!("unknown name `{}`", r.name),
            });
        }
    }
    Ok(e)
}

/// Parses a `.qsuite` text. The suite name defaults to `default_name`
/// unless a `suite` line gives one.
pub fn parse_suite(src: &str) -> Result<Suite, DslError> {
    parse_suite_named(src, "suite")
}

/// Like [`parse_suite`], with the name used when the source has no `suite` line.
pub fn parse_suite_named(src: &str, default_name: &str) -> Result<Suite, DslError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        depth: 0,
        refs: Vec::new(),
        owner: None,
    };
    let mut suite = Suite {
        name: default_name.to_string(),
        modes: 1,
        bindings: Vec::new(),
        relations: Vec::new(),
    };
    let mut let_pos: Vec<(usize, usize)> = Vec::new();
    let mut rel_names: HashSet<String> = HashSet::new();
    loop {
        let t = p.peek().clone();
        match &t.tok {
            Tok::Eof => break,
            Tok::Newline => {
                p.next();
                continue;
            }
            Tok::Ident(kw) if kw == "suite" => {
                p.next();
                let (name, _) = p.expect_ident("a suite name")?;
                suite.name = name;
            }
            Tok::Ident(kw) if kw == "modes" => {
                p.next();
                let at = p.peek().clone();
                let m = p.expect_int("a mode count")?;
                if !(1..=16).contains(&m) {
                    return Err(p.error_at(
                        &at,
                        DslErrorKind::Syntax,
                        format!("mode count {m} outside 1..=16"),
                    ));
                }
                suite.modes = m as usize;
            }
            Tok::Ident(kw) if kw == "let" => {
                p.next();
                let (name, nt) = p.expect_ident("a binding name")?;
                if RESERVED.contains(&name.as_str()) {
                    return Err(p.error_at(
                        &nt,
                        DslErrorKind::Syntax,
                        format!("`{name}` is reserved"),
                    ));
                }
                if suite.bindings.iter().any(|b| b.name == name) {
                    return Err(p.error_at(
                        &nt,
                        DslErrorKind::Duplicate,
                        format!("`{name}` is bound twice"),
                    ));
                }
                p.expect_sym("=")?;
                p.owner = Some(suite.bindings.len());
                let expr = p.expr()?;
                p.owner = None;
                suite.bindings.push(Binding { name, expr });
                let_pos.push((nt.line, nt.col));
            }
            Tok::Ident(kw) if kw == "assert" => {
                p.next();
                let (name, nt) = p.expect_ident("a relation name")?;
                if !rel_names.insert(name.clone()) {
                    return Err(p.error_at(
                        &nt,
                        DslErrorKind::Duplicate,
                        format!("relation `{name}` appears twice"),
                    ));
                }
                p.expect_sym(":")?;
                let lhs = p.expr()?;
                p.expect_sym("==")?;
                let rhs = p.expr()?;
                let mut rel = Relation {
                    name,
                    lhs,
                    rhs,
                    margin: None,
                    mode: None,
                    samples: None,
                };
                while p.is_sym("@") {
                    p.attribute(&mut rel)?;
                }
                suite.relations.push(rel);
            }
            other => {
                let found = Parser::describe(other);
                return p.syntax(format!(
                    "expected `suite`, `modes`, `let` or `assert`, found {found}"
                ));
            }
        }
        p.end_of_statement()?;
    }
    resolve(&suite, &p.refs, &let_pos)?;
    Ok(suite)
}

fn resolve(suite: &Suite, refs: &[NameRef], let_pos: &[(usize, usize)]) -> Result<(), DslError> {
    let lets: HashMap<&str, usize> = suite
        .bindings
        .iter()
        .enumerate()
        .map(|(k, b)| (b.name.as_str(), k))
        .collect();
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); suite.bindings.len()];
    for r in refs {
        if !r.with_args {
            if let Some(&target) = lets.get(r.name.as_str()) {
                if let Some(owner) = r.owner {
                    edges[owner].push(target);
                }
                continue;
            }
        }
        if !is_known(&r.name) {
            return Err(DslError {
                kind: DslErrorKind::UnresolvedName,
                line: r.line,
                col: r.col,
                message: format!("unknown name `{}`", r.name),
            });
        }
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; edges.len()];
    fn visit(k: usize, edges: &[Vec<usize>], state: &mut [u8]) -> Option<usize> {
        state[k] = 1;
        for &n in &edges[k] {
            match state[n] {
                1 => return Some(n),
                0 => {
                    if let Some(c) = visit(n, edges, state) {
                        return Some(c);
                    }
                }
                _ => {}
            }
        }
        state[k] = 2;
        None
    }
    for k in 0..edges.len() {
        if state[k] == 0 {
            if let Some(c) = visit(k, &edges, &mut state) {
                let (line, col) = let_pos[c];
                return Err(DslError {
                    kind: DslErrorKind::CyclicBinding,
                    line,
                    col,
                    message: format!("binding `{}` depends on itself", suite.bindings[c].name),
                });
            }
        }
    }
    Ok(())
}
