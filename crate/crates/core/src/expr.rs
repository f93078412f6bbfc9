//! Arithmetic expressions over the time `t` and state `y`.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := primary ("^" unary)?
//! primary := number | "t" | "y" | "pi" | "e"
//!          | func "(" expr ("," expr)* ")" | "(" expr ")"
//! func    := exp | log | sin | cos | sqrt | abs | pow
//! number  := digits ["." digits] [("e" | "E") ["+" | "-"] digits]
//! ```
//!
//! `^` binds tightest and is right-associative, so `2^3^2 = 2^9` and
//! `-2^2 = -(2^2)`. There is no implicit multiplication.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => " * ",
            BinOp::Div => " / ",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }

    fn apply(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            BinOp::Add => lhs + rhs,
            BinOp::Sub => lhs - rhs,
            BinOp::Mul => lhs * rhs,
            BinOp::Div => lhs / rhs,
            BinOp::Pow => libm::pow(lhs, rhs),
        }
    }
}

/// Built-in functions. `pow` takes two arguments, the rest one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Abs,
    Pow,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Exp,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Sqrt,
        Func::Abs,
        Func::Pow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Pow => "pow",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Pow => 2,
            _ => 1,
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree. Built by [`Expr::parse`]; every `Call` has the arity of its function.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    T,
    Y,
    Neg(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Call {
        func: Func,
        args: Vec<Expr>,
    },
}

impl Expr {
    pub fn parse(source: &str) -> Result<Expr, ParseError> {
        let tokens = lex(source)?;
        let mut parser = Parser {
            tokens: &tokens,
            pos: 0,
            end: source.len(),
        };
        let expr = parser.expr()?;
        match parser.peek() {
            None => Ok(expr),
            Some(tok) => Err(ParseError::new(
                tok.pos,
                ParseErrorKind::UnexpectedToken(tok.kind.describe()),
            )),
        }
    }

    /// IEEE-754 evaluation. Domain violations yield NaN or infinities, never panics.
    pub fn eval(&self, t: f64, y: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::T => t,
            Expr::Y => y,
            Expr::Neg(inner) => -inner.eval(t, y),
            Expr::Binary { op, lhs, rhs } => op.apply(lhs.eval(t, y), rhs.eval(t, y)),
            Expr::Call { func, args } => {
                let x = args[0].eval(t, y);
                match func {
                    Func::Exp => libm::exp(x),
                    Func::Log => libm::log(x),
                    Func::Sin => libm::sin(x),
                    Func::Cos => libm::cos(x),
                    Func::Sqrt => libm::sqrt(x),
                    Func::Abs => libm::fabs(x),
                    Func::Pow => libm::pow(x, args[1].eval(t, y)),
                }
            }
        }
    }

    pub fn depends_on_y(&self) -> bool {
        match self {
            Expr::Y => true,
            Expr::Const(_) | Expr::T => false,
            Expr::Neg(inner) => inner.depends_on_y(),
            Expr::Binary { lhs, rhs, .. } => lhs.depends_on_y() || rhs.depends_on_y(),
            Expr::Call { args, .. } => args.iter().any(Expr::depends_on_y),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary { op, .. } => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Const(c) if c.is_sign_negative() => 3,
            _ => 5,
        }
    }
}

impl core::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the minimum parentheses needed to reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{}` on f64 is the shortest representation that round-trips
            Expr::Const(c) if c.is_sign_negative() => write!(f, "-{}", -c),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::T => f.write_str("t"),
            Expr::Y => f.write_str("y"),
            Expr::Neg(inner) => {
                f.write_str("-")?;
                write_wrapped(f, inner, inner.precedence() < 3)
            }
            Expr::Binary { op, lhs, rhs } => {
                let p = op.precedence();
                let (wrap_l, wrap_r) = if *op == BinOp::Pow {
                    (lhs.precedence() <= p, rhs.precedence() < 3)
                } else {
                    (lhs.precedence() < p, rhs.precedence() <= p)
                };
                write_wrapped(f, lhs, wrap_l)?;
                f.write_str(op.symbol())?;
                write_wrapped(f, rhs, wrap_r)
            }
            Expr::Call { func, args } => {
                write!(f, "{}(", func.name())?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    InvalidNumber(String),
    UnknownIdentifier(String),
    MissingCallParens(String),
    Arity {
        name: &'static str,
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken(tok) => write!(f, "unexpected {tok}"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number {s:?}"),
            ParseErrorKind::UnknownIdentifier(s) => {
                write!(f, "unknown identifier {s:?} (only t and y are variables)")
            }
            ParseErrorKind::MissingCallParens(s) => write!(f, "function {s} must be called as {s}(...)"),
            ParseErrorKind::Arity {
                name,
                expected,
                found,
            } => write!(f, "{name} takes {expected} argument(s), got {found}"),
        }
    }
}

/// Parse failure at a byte offset into the source.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(position: usize, kind: ParseErrorKind) -> Self {
        ParseError { position, kind }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
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

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number(x) => alloc::format!("number {x}"),
            TokenKind::Ident(s) => alloc::format!("identifier {s:?}"),
            TokenKind::Plus => "'+'".to_string(),
            TokenKind::Minus => "'-'".to_string(),
            TokenKind::Star => "'*'".to_string(),
            TokenKind::Slash => "'/'".to_string(),
            TokenKind::Caret => "'^'".to_string(),
            TokenKind::LParen => "'('".to_string(),
            TokenKind::RParen => "')'".to_string(),
            TokenKind::Comma => "','".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn lex(source: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let simple = match c {
            b'+' => Some(TokenKind::Plus),
            b'-' => Some(TokenKind::Minus),
            b'*' => Some(TokenKind::Star),
            b'/' => Some(TokenKind::Slash),
            b'^' => Some(TokenKind::Caret),
            b'(' => Some(TokenKind::LParen),
            b')' => Some(TokenKind::RParen),
            b',' => Some(TokenKind::Comma),
            _ => None,
        };
        if let Some(kind) = simple {
            tokens.push(Token { kind, pos: start });
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            i = scan_number(bytes, i);
            let text = &source[start..i];
            let value: f64 = text
                .parse()
                .map_err(|_| ParseError::new(start, ParseErrorKind::InvalidNumber(text.into())))?;
            if !value.is_finite() {
                return Err(ParseError::new(start, ParseErrorKind::InvalidNumber(text.into())));
            }
            tokens.push(Token {
                kind: TokenKind::Number(value),
                pos: start,
            });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Ident(source[start..i].into()),
                pos: start,
            });
        } else {
            let ch = source[start..].chars().next().unwrap_or('\u{fffd}');
            return Err(ParseError::new(start, ParseErrorKind::UnexpectedChar(ch)));
        }
    }
    Ok(tokens)
}

fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    i = digits(i);
    if i < bytes.len() && bytes[i] == b'.' {
        i = digits(i + 1);
    }
    // exponent only if digits follow, otherwise `2e` leaves `e` as an identifier
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            i = digits(j);
        }
    }
    i
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Token> {
        let tok = self.tokens.get(self.pos);
        self.pos += 1;
        tok
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().is_some_and(|t| t.kind == *kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: &TokenKind) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.kind == *kind => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(ParseError::new(
                t.pos,
                ParseErrorKind::UnexpectedToken(t.kind.describe()),
            )),
            None => Err(ParseError::new(self.end, ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(&TokenKind::Plus) {
                BinOp::Add
            } else if self.eat(&TokenKind::Minus) {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(&TokenKind::Star) {
                BinOp::Mul
            } else if self.eat(&TokenKind::Slash) {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&TokenKind::Minus) {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat(&TokenKind::Caret) {
            let exponent = self.unary()?;
            Ok(binary(BinOp::Pow, base, exponent))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let end = self.end;
        let tok = self.bump().ok_or(ParseError::new(end, ParseErrorKind::UnexpectedEnd))?;
        let pos = tok.pos;
        match &tok.kind {
            TokenKind::Number(x) => Ok(Expr::Const(*x)),
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect(&TokenKind::RParen)?;
                Ok(inner)
            }
            TokenKind::Ident(name) => match name.as_str() {
                "t" => Ok(Expr::T),
                "y" => Ok(Expr::Y),
                "pi" => Ok(Expr::Const(core::f64::consts::PI)),
                "e" => Ok(Expr::Const(core::f64::consts::E)),
                other => match Func::from_name(other) {
                    Some(func) => self.call(func, pos),
                    None => Err(ParseError::new(
                        pos,
                        ParseErrorKind::UnknownIdentifier(other.into()),
                    )),
                },
            },
            other => Err(ParseError::new(
                pos,
                ParseErrorKind::UnexpectedToken(other.describe()),
            )),
        }
    }

    fn call(&mut self, func: Func, pos: usize) -> Result<Expr, ParseError> {
        if !self.eat(&TokenKind::LParen) {
            return Err(ParseError::new(
                pos,
                ParseErrorKind::MissingCallParens(func.name().into()),
            ));
        }
        let mut args = Vec::new();
        if !self.eat(&TokenKind::RParen) {
            loop {
                args.push(self.expr()?);
                if self.eat(&TokenKind::Comma) {
                    continue;
                }
                self.expect(&TokenKind::RParen)?;
                break;
            }
        }
        if args.len() != func.arity() {
            return Err(ParseError::new(
                pos,
                ParseErrorKind::Arity {
                    name: func.name(),
                    expected: func.arity(),
                    found: args.len(),
                },
            ));
        }
        Ok(Expr::Call { func, args })
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    Expr::Binary {
        op,
        lhs: Box::new(lhs),
        rhs: Box::new(rhs),
    }
}
