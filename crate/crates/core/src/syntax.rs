//! Surface syntax with named binders.
//!
//! ```text
//! term := '\' name '.' term | 'mu' name '.' term | atom+ [binder-term]
//! atom := '(' term ')' | 'bot' | '#' name | name
//! ```
//!
//! Application is left-associative and binds tighter than binder bodies,
//! which extend as far right as possible. `λ` and `μ` are accepted as
//! aliases for `\` and `mu`. Free names (when allowed) occupy a frame of
//! indices just outside the outermost binder, numbered by first use.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::term::{from_mu, Coterm, FiniteTerm, GuardednessError, MuExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceTerm {
    Var(String),
    Const(String),
    Bot,
    App(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Lam(String, Box<SurfaceTerm>),
    Mu(String, Box<SurfaceTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("parse error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error(transparent)]
    Guardedness(#[from] GuardednessError),
}

/// Result of [`parse`]: the compiled coterm plus the names of free variables
/// in frame order (index `k` of the free frame is `free_names[k]`).
#[derive(Clone, Debug)]
pub struct Parsed {
    pub term: Coterm,
    pub expr: MuExpr,
    pub free_names: Vec<String>,
}

pub fn parse(text: &str, allow_open: bool) -> Result<Parsed, ParseError> {
    let surface = parse_surface(text)?;
    let (expr, free_names) = resolve(&surface, allow_open)?;
    let term = from_mu(&expr)?;
    Ok(Parsed {
        term,
        expr,
        free_names,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Mu,
    Bot,
    Const(String),
    Ident(String),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    let syntax = |line, col, message: String| ParseError::Syntax { line, col, message };
    while let Some(&c) = chars.peek() {
        let (l, cpos) = (line, col);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let ch = chars.next();
            if ch == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            ch
        };
        let tok = match c {
            c if c.is_whitespace() => {
                advance(&mut chars);
                continue;
            }
            '\\' | 'λ' => {
                advance(&mut chars);
                Tok::Lambda
            }
            'μ' => {
                advance(&mut chars);
                Tok::Mu
            }
            '.' => {
                advance(&mut chars);
                Tok::Dot
            }
            '(' => {
                advance(&mut chars);
                Tok::LParen
            }
            ')' => {
                advance(&mut chars);
                Tok::RParen
            }
            '#' => {
                advance(&mut chars);
                let mut name = String::new();
                match chars.peek() {
                    Some(&c) if is_ident_start(c) => {}
                    _ => return Err(syntax(l, cpos, "expected constant name after `#`".into())),
                }
                while let Some(&c) = chars.peek() {
                    if !is_ident_continue(c) {
                        break;
                    }
                    name.push(c);
                    advance(&mut chars);
                }
                Tok::Const(name)
            }
            c if is_ident_start(c) => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_ident_continue(c) {
                        break;
                    }
                    name.push(c);
                    advance(&mut chars);
                }
                match name.as_str() {
                    "mu" => Tok::Mu,
                    "bot" => Tok::Bot,
                    _ => Tok::Ident(name),
                }
            }
            other => return Err(syntax(l, cpos, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned {
            tok,
            line: l,
            col: cpos,
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or(self.end);
        ParseError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            _ => Err(self.error("expected a variable name")),
        }
    }

    fn term(&mut self) -> Result<SurfaceTerm, ParseError> {
        match self.peek() {
            Some(Tok::Lambda) | Some(Tok::Mu) => self.binder(),
            _ => self.application(),
        }
    }

    fn binder(&mut self) -> Result<SurfaceTerm, ParseError> {
        let is_mu = self.peek() == Some(&Tok::Mu);
        self.pos += 1;
        let name = self.ident()?;
        self.expect(Tok::Dot, "`.` after binder")?;
        let body = Box::new(self.term()?);
        Ok(if is_mu {
            SurfaceTerm::Mu(name, body)
        } else {
            SurfaceTerm::Lam(name, body)
        })
    }

    fn application(&mut self) -> Result<SurfaceTerm, ParseError> {
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Lambda) | Some(Tok::Mu) => {
                    let arg = self.binder()?;
                    return Ok(SurfaceTerm::App(Box::new(acc), Box::new(arg)));
                }
                Some(Tok::LParen) | Some(Tok::Bot) | Some(Tok::Const(_)) | Some(Tok::Ident(_)) => {
                    let arg = self.atom()?;
                    acc = SurfaceTerm::App(Box::new(acc), Box::new(arg));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn atom(&mut self) -> Result<SurfaceTerm, ParseError> {
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(SurfaceTerm::Bot)
            }
            Some(Tok::Const(c)) => {
                self.pos += 1;
                Ok(SurfaceTerm::Const(c))
            }
            Some(Tok::Ident(x)) => {
                self.pos += 1;
                Ok(SurfaceTerm::Var(x))
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

pub fn parse_surface(text: &str) -> Result<SurfaceTerm, ParseError> {
    let toks = lex(text)?;
    let end = text
        .lines()
        .enumerate()
        .last()
        .map_or((1, 1), |(i, l)| (i + 1, l.chars().count() + 1));
    let mut p = Parser { toks, pos: 0, end };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

enum Binder<'a> {
    Lam(&'a str),
    Mu(&'a str),
}

/// Converts named syntax to de Bruijn form, returning the free-name frame.
pub fn resolve(t: &SurfaceTerm, allow_open: bool) -> Result<(MuExpr, Vec<String>), ParseError> {
    fn go<'a>(
        t: &'a SurfaceTerm,
        scope: &mut Vec<Binder<'a>>,
        free: &mut Vec<String>,
        allow_open: bool,
    ) -> Result<MuExpr, ParseError> {
        Ok(match t {
            SurfaceTerm::Var(x) => {
                let (mut lams, mut mus) = (0u32, 0u32);
                let mut found = None;
                for b in scope.iter().rev() {
                    match b {
                        Binder::Lam(n) if *n == x => {
                            found = Some(MuExpr::Var(lams));
                            break;
                        }
                        Binder::Mu(n) if *n == x => {
                            found = Some(MuExpr::MuVar(mus));
                            break;
                        }
                        Binder::Lam(_) => lams += 1,
                        Binder::Mu(_) => mus += 1,
                    }
                }
                match found {
                    Some(e) => e,
                    None if allow_open => {
                        let k = match free.iter().position(|n| n == x) {
                            Some(k) => k,
                            None => {
                                free.push(x.clone());
                                free.len() - 1
                            }
                        };
                        MuExpr::Var(lams + k as u32)
                    }
                    None => return Err(ParseError::UnboundVariable(x.clone())),
                }
            }
            SurfaceTerm::Const(c) => MuExpr::Const(Arc::from(c.as_str())),
            SurfaceTerm::Bot => MuExpr::Bot,
            SurfaceTerm::App(f, a) => MuExpr::app(
                go(f, scope, free, allow_open)?,
                go(a, scope, free, allow_open)?,
            ),
            SurfaceTerm::Lam(x, b) => {
                scope.push(Binder::Lam(x));
                let body = go(b, scope, free, allow_open);
                scope.pop();
                MuExpr::lam(body?)
            }
            SurfaceTerm::Mu(x, b) => {
                scope.push(Binder::Mu(x));
                let body = go(b, scope, free, allow_open);
                scope.pop();
                MuExpr::mu(body?)
            }
        })
    }
    let mut free = Vec::new();
    let e = go(t, &mut Vec::new(), &mut free, allow_open)?;
    Ok((e, free))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrintStyle {
    /// Binders named `x0, x1, ...` by λ-depth; free variables by the name
    /// table or `v0, v1, ...`.
    Named,
    /// `\.` binders and numeric indices; output only.
    DeBruijn,
}

/// Renders `truncate(t, n)`.
pub fn print_truncated(t: &Coterm, n: usize, style: PrintStyle) -> String {
    print_finite(&t.truncate(n), style, &[])
}

pub fn print_finite(t: &FiniteTerm, style: PrintStyle, free_names: &[String]) -> String {
    #[derive(Clone, Copy, PartialEq)]
    enum Ctx {
        Top,
        Fun,
        Arg,
    }
    fn go(
        t: &FiniteTerm,
        style: PrintStyle,
        names: &[String],
        depth: u32,
        ctx: Ctx,
        out: &mut String,
    ) {
        match t {
            FiniteTerm::Var { i } => match style {
                PrintStyle::DeBruijn => {
                    let _ = write!(out, "{i}");
                }
                PrintStyle::Named if *i < depth => {
                    let _ = write!(out, "x{}", depth - 1 - i);
                }
                PrintStyle::Named => {
                    let k = (i - depth) as usize;
                    match names.get(k) {
                        Some(name) => out.push_str(name),
                        None => {
                            let _ = write!(out, "v{k}");
                        }
                    }
                }
            },
            FiniteTerm::Const { n } => {
                let _ = write!(out, "#{n}");
            }
            FiniteTerm::Bot => out.push_str("bot"),
            FiniteTerm::Lam { b } => {
                let paren = ctx != Ctx::Top;
                if paren {
                    out.push('(');
                }
                match style {
                    PrintStyle::DeBruijn => out.push_str("\\."),
                    PrintStyle::Named => {
                        let _ = write!(out, "\\x{depth}. ");
                    }
                }
                go(b, style, names, depth + 1, Ctx::Top, out);
                if paren {
                    out.push(')');
                }
            }
            FiniteTerm::App { f, a } => {
                let paren = ctx == Ctx::Arg;
                if paren {
                    out.push('(');
                }
                go(f, style, names, depth, Ctx::Fun, out);
                out.push(' ');
                go(a, style, names, depth, Ctx::Arg, out);
                if paren {
                    out.push(')');
                }
            }
        }
    }
    let mut out = String::new();
    go(t, style, free_names, 0, Ctx::Top, &mut out);
    out
}
