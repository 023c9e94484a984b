//! A small arithmetic expression language.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := unary (("*" | "/") unary)*
//! unary    := ("-" | "+") unary | power
//! power    := primary ("^" exponent)*
//! exponent := ["-" | "+"] INTEGER | "(" ["-" | "+"] INTEGER ")"
//! primary  := NUMBER | IDENT | FUNC "(" expr ")" | "(" expr ")"
//! FUNC     := "sin" | "cos" | "exp" | "sqrt"
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`. Identifiers must
//! be declared parameters; `pi` is available as a constant unless shadowed.

use std::fmt;

use crate::error::{EvalError, EvalErrorKind, ParseError};
use crate::jets::jet::Jet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(f64),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

/// Values an expression can be evaluated over: plain reals or Taylor jets.
pub trait Scalar: Copy {
    fn constant(v: f64) -> Self;
    fn value(&self) -> f64;
    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;
    fn neg(self) -> Self;
    fn recip(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn call(self, f: Func) -> Self;
    fn finite(&self) -> bool;
}

impl Scalar for f64 {
    fn constant(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    fn neg(self) -> Self {
        -self
    }
    fn recip(self) -> Self {
        1.0 / self
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn call(self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Exp => self.exp(),
            Func::Sqrt => self.sqrt(),
        }
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Jet {
    fn constant(v: f64) -> Self {
        Jet::constant(v)
    }
    fn value(&self) -> f64 {
        Jet::value(self)
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    fn neg(self) -> Self {
        -self
    }
    fn recip(self) -> Self {
        Jet::recip(&self)
    }
    fn powi(self, n: i32) -> Self {
        Jet::powi(&self, n)
    }
    fn call(self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Exp => self.exp(),
            Func::Sqrt => Jet::sqrt(&self),
        }
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

/// A parsed expression together with its declared parameter list.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    params: Vec<String>,
    root: Node,
}

impl Expr {
    pub fn parse(text: &str, params: &[&str]) -> Result<Expr, ParseError> {
        let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        let tokens = lex(text)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            params: &params,
            end: text.len(),
        };
        let root = p.expr()?;
        if let Some(t) = p.peek() {
            return Err(ParseError::Syntax {
                offset: t.offset,
                message: format!("unexpected {}", t.kind.describe()),
            });
        }
        Ok(Expr { params, root })
    }

    /// Builds an expression directly from a node tree.
    pub fn from_node(root: Node, params: &[&str]) -> Expr {
        Expr {
            params: params.iter().map(|s| s.to_string()).collect(),
            root,
        }
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Evaluates with one value per declared parameter.
    pub fn eval<T: Scalar>(&self, env: &[T]) -> Result<T, EvalError> {
        if env.len() != self.params.len() {
            return Err(EvalError {
                kind: EvalErrorKind::Arity,
                node: self.to_string(),
            });
        }
        eval_node(&self.root, env, &self.params)
    }

    pub fn eval_f64(&self, env: &[f64]) -> Result<f64, EvalError> {
        self.eval(env)
    }
}

fn fail(kind: EvalErrorKind, node: &Node, params: &[String]) -> EvalError {
    EvalError {
        kind,
        node: Render { node, params }.to_string(),
    }
}

fn eval_node<T: Scalar>(node: &Node, env: &[T], params: &[String]) -> Result<T, EvalError> {
    let out = match node {
        Node::Const(c) => T::constant(*c),
        Node::Var(i) => env[*i],
        Node::Neg(a) => eval_node(a, env, params)?.neg(),
        Node::Add(a, b) => eval_node(a, env, params)?.add(eval_node(b, env, params)?),
        Node::Sub(a, b) => eval_node(a, env, params)?.sub(eval_node(b, env, params)?),
        Node::Mul(a, b) => eval_node(a, env, params)?.mul(eval_node(b, env, params)?),
        Node::Div(a, b) => {
            let num = eval_node(a, env, params)?;
            let den = eval_node(b, env, params)?;
            if den.value() == 0.0 {
                return Err(fail(EvalErrorKind::DivisionByZero, node, params));
            }
            num.mul(den.recip())
        }
        Node::Pow(a, n) => {
            let base = eval_node(a, env, params)?;
            if *n < 0 && base.value() == 0.0 {
                return Err(fail(EvalErrorKind::DivisionByZero, node, params));
            }
            base.powi(*n)
        }
        Node::Call(f, a) => {
            let arg = eval_node(a, env, params)?;
            if *f == Func::Sqrt && arg.value() < 0.0 {
                return Err(fail(EvalErrorKind::SqrtDomain, node, params));
            }
            arg.call(*f)
        }
    };
    if !out.finite() {
        return Err(fail(EvalErrorKind::NonFinite, node, params));
    }
    Ok(out)
}

struct Render<'a> {
    node: &'a Node,
    params: &'a [String],
}

impl<'a> fmt::Display for Render<'a> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |n: &'a Node| Render {
            node: n,
            params: self.params,
        };
        match self.node {
            Node::Const(c) => {
                if *c < 0.0 {
                    write!(f, "({c:?})")
                } else {
                    write!(f, "{c:?}")
                }
            }
            Node::Var(i) => write!(f, "{}", self.params[*i]),
            Node::Neg(a) => write!(f, "(-{})", r(a)),
            Node::Add(a, b) => write!(f, "({} + {})", r(a), r(b)),
            Node::Sub(a, b) => write!(f, "({} - {})", r(a), r(b)),
            Node::Mul(a, b) => write!(f, "({} * {})", r(a), r(b)),
            Node::Div(a, b) => write!(f, "({} / {})", r(a), r(b)),
            Node::Pow(a, n) => {
                if *n < 0 {
                    write!(f, "{}^({n})", r(a))
                } else {
                    write!(f, "{}^{n}", r(a))
                }
            }
            Node::Call(func, a) => write!(f, "{}({})", func.name(), r(a)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Render {
            node: &self.root,
            params: &self.params,
        }
        .fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum TokenKind {
    Number(f64, bool),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number(v, _) => format!("number {v}"),
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Op(c) => format!("`{c}`"),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if ch.is_ascii_digit() || ch == '.' {
            let mut integral = true;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                if bytes[i] == b'.' {
                    integral = false;
                }
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    integral = false;
                    i = j;
                }
            }
            let s = &text[start..i];
            let v: f64 = s.parse().map_err(|_| ParseError::Syntax {
                offset: start,
                message: format!("malformed number `{s}`"),
            })?;
            out.push(Token {
                kind: TokenKind::Number(v, integral),
                offset: start,
            });
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                kind: TokenKind::Ident(text[start..i].to_string()),
                offset: start,
            });
            continue;
        }
        let kind = match ch {
            '+' | '-' | '*' | '/' | '^' => TokenKind::Op(ch),
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            _ => {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                })
            }
        };
        out.push(Token {
            kind,
            offset: start,
        });
        i += ch.len_utf8();
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    params: &'a [String],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map(|t| t.offset).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat_op(&mut self, op: char) -> bool {
        if matches!(self.peek(), Some(Token { kind: TokenKind::Op(c), .. }) if *c == op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.next() {
            Some(Token {
                kind: TokenKind::RParen,
                ..
            }) => Ok(()),
            Some(t) => Err(ParseError::Syntax {
                offset: t.offset,
                message: format!("expected `)`, found {}", t.kind.describe()),
            }),
            None => Err(ParseError::Syntax {
                offset: self.end,
                message: "expected `)`, found end of input".into(),
            }),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_op('+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_op('-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_op('*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat_op('/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.eat_op('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let mut base = self.primary()?;
        while self.eat_op('^') {
            let n = self.exponent()?;
            base = Node::Pow(Box::new(base), n);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let offset = self.offset();
        let paren = matches!(
            self.peek(),
            Some(Token {
                kind: TokenKind::LParen,
                ..
            })
        );
        if paren {
            self.pos += 1;
        }
        let negative = if self.eat_op('-') {
            true
        } else {
            self.eat_op('+');
            false
        };
        let n = match self.next() {
            Some(Token {
                kind: TokenKind::Number(v, integral),
                offset,
            }) => {
                if !integral || v.fract() != 0.0 || v.abs() > i32::MAX as f64 {
                    return Err(ParseError::NonIntegerExponent { offset });
                }
                v as i32
            }
            _ => return Err(ParseError::NonIntegerExponent { offset }),
        };
        if paren {
            self.expect_rparen()?;
        }
        Ok(if negative { -n } else { n })
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let offset = self.offset();
        match self.next() {
            Some(Token {
                kind: TokenKind::Number(v, _),
                ..
            }) => Ok(Node::Const(v)),
            Some(Token {
                kind: TokenKind::LParen,
                ..
            }) => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Some(Token {
                kind: TokenKind::Ident(name),
                offset,
            }) => {
                if let Some(i) = self.params.iter().position(|p| *p == name) {
                    return Ok(Node::Var(i));
                }
                if let Some(func) = Func::from_name(&name) {
                    match self.next() {
                        Some(Token {
                            kind: TokenKind::LParen,
                            ..
                        }) => {}
                        _ => {
                            return Err(ParseError::Syntax {
                                offset,
                                message: format!("expected `(` after `{name}`"),
                            })
                        }
                    }
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                if name == "pi" {
                    return Ok(Node::Const(std::f64::consts::PI));
                }
                Err(ParseError::UnknownIdentifier { name, offset })
            }
            Some(t) => Err(ParseError::Syntax {
                offset: t.offset,
                message: format!("unexpected {}", t.kind.describe()),
            }),
            None => Err(ParseError::Syntax {
                offset,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_polynomial() {
        let e = Expr::parse("x^2 - y^2", &["x", "y"]).unwrap();
        assert_eq!(e.eval_f64(&[1.0, 2.0]).unwrap(), -3.0);
    }

    #[test]
    fn rejects_undeclared_variable() {
        let err = Expr::parse("x*y*z", &["x", "y"]).unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownIdentifier {
                name: "z".into(),
                offset: 4
            }
        );
    }

    #[test]
    fn three_parameters() {
        let e = Expr::parse("1/(1+z^2)", &["x", "y", "z"]).unwrap();
        assert_eq!(e.eval_f64(&[0.0, 0.0, 1.0]).unwrap(), 0.5);
    }

    #[test]
    fn whitespace_insensitive_and_deterministic() {
        let a = Expr::parse("sin( x )*cos(y)+ 2 ^ 3", &["x", "y"]).unwrap();
        let b = Expr::parse("sin(x)*cos(y)+2^3", &["x", "y"]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn precedence() {
        let e = Expr::parse("-x^2", &["x"]).unwrap();
        assert_eq!(e.eval_f64(&[3.0]).unwrap(), -9.0);
        let e = Expr::parse("2*x^-1 + x^(-2)", &["x"]).unwrap();
        assert_eq!(e.eval_f64(&[2.0]).unwrap(), 1.25);
        let e = Expr::parse("1 - 2 - 3", &["x"]).unwrap();
        assert_eq!(e.eval_f64(&[0.0]).unwrap(), -4.0);
        let e = Expr::parse("8 / 4 / 2", &["x"]).unwrap();
        assert_eq!(e.eval_f64(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn exponent_must_be_integer() {
        assert!(matches!(
            Expr::parse("x^1.5", &["x"]),
            Err(ParseError::NonIntegerExponent { offset: 2 })
        ));
        assert!(matches!(
            Expr::parse("x^y", &["x", "y"]),
            Err(ParseError::NonIntegerExponent { .. })
        ));
        assert!(Expr::parse("x^2.0", &["x"]).is_err());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match Expr::parse("x + * y", &["x", "y"]) {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match Expr::parse("(x + y", &["x", "y"]) {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("{other:?}"),
        }
        assert!(Expr::parse("x $ y", &["x", "y"]).is_err());
        assert!(Expr::parse("", &["x"]).is_err());
    }

    #[test]
    fn evaluation_errors_name_the_node() {
        let e = Expr::parse("1/(x-1)", &["x"]).unwrap();
        let err = e.eval_f64(&[1.0]).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::DivisionByZero);
        assert!(err.node.contains('/'));
        let e = Expr::parse("sqrt(x)", &["x"]).unwrap();
        assert_eq!(e.eval_f64(&[-1.0]).unwrap_err().kind, EvalErrorKind::SqrtDomain);
    }

    #[test]
    fn display_round_trips() {
        let e = Expr::parse("sin(x)*y^3 - 2.5/(1+x^2) + exp(-y)", &["x", "y"]).unwrap();
        let again = Expr::parse(&e.to_string(), &["x", "y"]).unwrap();
        for &(x, y) in &[(0.1, 0.2), (-1.0, 3.0)] {
            assert_eq!(e.eval_f64(&[x, y]).unwrap(), again.eval_f64(&[x, y]).unwrap());
        }
    }

    #[test]
    fn pi_constant() {
        let e = Expr::parse("cos(pi)", &["x"]).unwrap();
        assert_eq!(e.eval_f64(&[0.0]).unwrap(), -1.0);
    }
}
