//! A small expression language for coefficient and kernel definitions.
//!
//! Grammar (see `docs/expression-grammar.md`):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Parsing is Pratt style. Evaluation is IEEE double arithmetic; any domain
//! violation or non-finite intermediate result is reported as an error.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Maximum nesting depth accepted by the parser.
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("lex error at offset {offset}: unexpected character {ch:?}")]
    Lex { offset: usize, ch: char },

    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    #[error("expression nested deeper than {MAX_DEPTH} levels (offset {offset})")]
    TooDeep { offset: usize },

    #[error("unbound variable `{0}`")]
    Unbound(String),

    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

/// A token together with its byte offset in the source.
#[derive(Debug, Clone, PartialEq)]
pub struct Spanned {
    pub token: Token,
    pub offset: usize,
}

pub fn tokenize(source: &str) -> Result<Vec<Spanned>, ExprError> {
    let bytes = source.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'/' => Some(Token::Slash),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            b',' => Some(Token::Comma),
            _ => None,
        };
        if let Some(token) = single {
            out.push(Spanned {
                token,
                offset: start,
            });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // Exponent only if followed by digits, so `2e` lexes as `2` then `e`.
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &source[start..i];
            let value = text.parse::<f64>().map_err(|_| ExprError::Lex {
                offset: start,
                ch: c as char,
            })?;
            out.push(Spanned {
                token: Token::Num(value),
                offset: start,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Spanned {
                token: Token::Ident(source[start..i].to_string()),
                offset: start,
            });
            continue;
        }
        let ch = source[start..].chars().next().unwrap_or('\u{fffd}');
        return Err(ExprError::Lex { offset: start, ch });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    /// Left and right binding powers; `^` is right associative.
    fn binding_power(self) -> (u8, u8) {
        match self {
            BinOp::Add | BinOp::Sub => (1, 2),
            BinOp::Mul | BinOp::Div => (3, 4),
            BinOp::Pow => (8, 7),
        }
    }
}

/// Binding power of the operand of unary minus: looser than `^`, tighter than `*`.
const PREFIX_NEG_BP: u8 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
    Pow,
    Beta,
    Abs,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Exp,
        Func::Ln,
        Func::Sin,
        Func::Cos,
        Func::Sqrt,
        Func::Pow,
        Func::Beta,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Pow => "pow",
            Func::Beta => "beta",
            Func::Abs => "abs",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Pow | Func::Beta => 2,
            _ => 1,
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

/// Variable lookup used by [`Expr::eval`].
pub trait Scope {
    fn lookup(&self, name: &str) -> Option<f64>;
}

impl<S: Scope + ?Sized> Scope for &S {
    fn lookup(&self, name: &str) -> Option<f64> {
        (**self).lookup(name)
    }
}

impl Scope for HashMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Scope for HashMap<&str, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Scope for [(&str, f64)] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }
}

impl<const N: usize> Scope for [(&str, f64); N] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.as_slice().lookup(name)
    }
}

struct Parser<'a> {
    tokens: &'a [Spanned],
    pos: usize,
    depth: usize,
    end_offset: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos).map(|s| &s.token)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.end_offset, |s| s.offset)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse {
            offset: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: &Token, what: &str) -> Result<(), ExprError> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => self.error(format!("expected {what}, found {t:?}")),
            None => self.error(format!("expected {what}, found end of input")),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ExprError::TooDeep {
                offset: self.offset(),
            });
        }
        let mut lhs = self.prefix()?;
        loop {
            let op = match self.peek() {
                Some(Token::Plus) => BinOp::Add,
                Some(Token::Minus) => BinOp::Sub,
                Some(Token::Star) => BinOp::Mul,
                Some(Token::Slash) => BinOp::Div,
                Some(Token::Caret) => BinOp::Pow,
                _ => break,
            };
            let (l_bp, r_bp) = op.binding_power();
            if l_bp < min_bp {
                break;
            }
            self.pos += 1;
            let rhs = self.expr(r_bp)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr, ExprError> {
        let Some(tok) = self.peek() else {
            return self.error("unexpected end of input");
        };
        match tok {
            Token::Num(v) => {
                self.pos += 1;
                Ok(Expr::Num(*v))
            }
            Token::Minus => {
                self.pos += 1;
                let operand = self.expr(PREFIX_NEG_BP)?;
                Ok(Expr::Neg(Box::new(operand)))
            }
            Token::LParen => {
                self.pos += 1;
                let inner = self.expr(0)?;
                self.expect(&Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::Ident(name) => {
                let at = self.offset();
                self.pos += 1;
                if self.peek() != Some(&Token::LParen) {
                    return Ok(Expr::Var(name.clone()));
                }
                let Some(func) = Func::from_name(name) else {
                    return Err(ExprError::Parse {
                        offset: at,
                        msg: format!("unknown function `{name}`"),
                    });
                };
                self.pos += 1;
                let mut args = vec![self.expr(0)?];
                while self.peek() == Some(&Token::Comma) {
                    self.pos += 1;
                    args.push(self.expr(0)?);
                }
                self.expect(&Token::RParen, "`)` or `,`")?;
                if args.len() != func.arity() {
                    return Err(ExprError::Parse {
                        offset: at,
                        msg: format!(
                            "`{}` takes {} argument(s), got {}",
                            func.name(),
                            func.arity(),
                            args.len()
                        ),
                    });
                }
                Ok(Expr::Call(func, args))
            }
            other => self.error(format!("unexpected token {other:?}")),
        }
    }
}

/// Parses a token sequence produced by [`tokenize`].
pub fn parse(tokens: &[Spanned]) -> Result<Expr, ExprError> {
    let end_offset = tokens.last().map_or(0, |s| s.offset + 1);
    let mut p = Parser {
        tokens,
        pos: 0,
        depth: 0,
        end_offset,
    };
    let e = p.expr(0)?;
    if p.pos != tokens.len() {
        return p.error(format!(
            "unexpected trailing token {:?}",
            tokens[p.pos].token
        ));
    }
    Ok(e)
}

/// Tokenizes and parses `source`.
pub fn parse_str(source: &str) -> Result<Expr, ExprError> {
    if source.trim().is_empty() {
        return Err(ExprError::Parse {
            offset: 0,
            msg: "empty expression".into(),
        });
    }
    parse(&tokenize(source)?)
}

impl FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_str(s)
    }
}

/// Fully parenthesised rendering; re-parsing yields a structurally equal tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var(name) => f.write_str(name),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn finite(func: &'static str, v: f64) -> Result<f64, ExprError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ExprError::Domain {
            func,
            detail: format!("non-finite result {v}"),
        })
    }
}

impl Expr {
    /// Evaluates the expression; `pi` and `e` resolve to the constants unless bound.
    pub fn eval<S: Scope + ?Sized>(&self, scope: &S) -> Result<f64, ExprError> {
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::Var(name) => match scope.lookup(name) {
                Some(v) => Ok(v),
                None => match name.as_str() {
                    "pi" => Ok(std::f64::consts::PI),
                    "e" => Ok(std::f64::consts::E),
                    _ => Err(ExprError::Unbound(name.clone())),
                },
            },
            Expr::Neg(e) => Ok(-e.eval(scope)?),
            Expr::Binary(op, l, r) => {
                let a = l.eval(scope)?;
                let b = r.eval(scope)?;
                match op {
                    BinOp::Add => finite("+", a + b),
                    BinOp::Sub => finite("-", a - b),
                    BinOp::Mul => finite("*", a * b),
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(ExprError::Domain {
                                func: "/",
                                detail: format!("division of {a} by zero"),
                            });
                        }
                        finite("/", a / b)
                    }
                    BinOp::Pow => power(a, b),
                }
            }
            Expr::Call(func, args) => {
                let x = args[0].eval(scope)?;
                match func {
                    Func::Exp => finite("exp", x.exp()),
                    Func::Ln => {
                        if x <= 0.0 {
                            return Err(ExprError::Domain {
                                func: "ln",
                                detail: format!("argument must be positive, got {x}"),
                            });
                        }
                        Ok(x.ln())
                    }
                    Func::Sin => finite("sin", x.sin()),
                    Func::Cos => finite("cos", x.cos()),
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(ExprError::Domain {
                                func: "sqrt",
                                detail: format!("negative argument {x}"),
                            });
                        }
                        Ok(x.sqrt())
                    }
                    Func::Abs => Ok(x.abs()),
                    Func::Pow => power(x, args[1].eval(scope)?),
                    Func::Beta => {
                        let y = args[1].eval(scope)?;
                        crate::specfun::beta(x, y).map_err(|_| ExprError::Domain {
                            func: "beta",
                            detail: format!("arguments must be positive, got ({x}, {y})"),
                        })
                    }
                }
            }
        }
    }

    /// Names of all variables referenced by the expression, sorted and deduplicated.
    pub fn free_vars(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Num(_) => {}
                Expr::Var(n) => out.push(n.clone()),
                Expr::Neg(e) => walk(e, out),
                Expr::Binary(_, l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                Expr::Call(_, args) => args.iter().for_each(|a| walk(a, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

fn power(base: f64, exp: f64) -> Result<f64, ExprError> {
    if base == 0.0 && exp < 0.0 {
        return Err(ExprError::Domain {
            func: "^",
            detail: format!("zero raised to negative power {exp}"),
        });
    }
    if base < 0.0 && exp.fract() != 0.0 {
        return Err(ExprError::Domain {
            func: "^",
            detail: format!("negative base {base} with non-integer exponent {exp}"),
        });
    }
    finite("^", base.powf(exp))
}

/// Convenience: parse and evaluate in one step.
pub fn eval_str<S: Scope + ?Sized>(source: &str, scope: &S) -> Result<f64, ExprError> {
    parse_str(source)?.eval(scope)
}
