//! Arithmetic expressions for right-hand sides and exact solutions.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" unary ] ;          (* right-associative *)
//! primary = number | variable | func "(" expr ")" | "(" expr ")" ;
//! number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
//!         | "." digits [ exponent ] ;
//! variable = "x" | "y0" | "y1" | ... | "y9" ;
//! func    = "sin" | "cos" | "tan" | "sec" | "exp" | "ln" | "sqrt" | "abs" ;
//! ```
//!
//! `yk` is the `k`-th derivative argument, so `y0` is `y` itself and
//! `y''` is written `y2`. There is no implicit multiplication.

use std::fmt;

use thiserror::Error;

use crate::scalar::{from_f64, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("unknown identifier '{name}' at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{func} is undefined at {input}")]
    Domain { func: &'static str, input: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("argument y{index} requested but only {available} supplied")]
    MissingArgument { index: usize, available: usize },
    #[error("value is not finite")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sec,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sec" => Func::Sec,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sec => "sec",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
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
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    /// `y_k`, the `k`-th derivative argument.
    Y(usize),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn parse(source: &str) -> Result<Expr, ParseError> {
        let tokens = lex(source)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            end: source.len(),
        };
        let e = p.expr()?;
        match p.peek() {
            None => Ok(e),
            Some(t) => Err(ParseError::Syntax {
                offset: t.offset,
                expected: "operator or end of input".into(),
            }),
        }
    }

    /// Largest derivative index referenced, if any.
    pub fn max_derivative(&self) -> Option<usize> {
        match self {
            Expr::Num(_) | Expr::X => None,
            Expr::Y(k) => Some(*k),
            Expr::Neg(e) | Expr::Call(_, e) => e.max_derivative(),
            Expr::Binary(_, a, b) => match (a.max_derivative(), b.max_derivative()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    pub fn evaluate<T: Real>(&self, x: T, args: &[T]) -> Result<T, EvalError> {
        Ok(match self {
            Expr::Num(v) => from_f64(*v),
            Expr::X => x,
            Expr::Y(k) => *args.get(*k).ok_or(EvalError::MissingArgument {
                index: *k,
                available: args.len(),
            })?,
            Expr::Neg(e) => -e.evaluate(x, args)?,
            Expr::Binary(op, a, b) => {
                let a = a.evaluate(x, args)?;
                let b = b.evaluate(x, args)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.is_zero() {
                            return Err(EvalError::DivisionByZero);
                        }
                        a / b
                    }
                    BinOp::Pow => power(a, b)?,
                }
            }
            Expr::Call(f, e) => {
                let v = e.evaluate(x, args)?;
                let domain = |func| EvalError::Domain {
                    func,
                    input: v.to_f64_lossy(),
                };
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Tan => {
                        if v.cos().is_zero() {
                            return Err(domain("tan"));
                        }
                        v.tan()
                    }
                    Func::Sec => {
                        let c = v.cos();
                        if c.is_zero() {
                            return Err(domain("sec"));
                        }
                        T::one() / c
                    }
                    Func::Exp => v.exp(),
                    Func::Ln => {
                        if v <= T::zero() {
                            return Err(domain("ln"));
                        }
                        v.ln()
                    }
                    Func::Sqrt => {
                        if v < T::zero() {
                            return Err(domain("sqrt"));
                        }
                        v.sqrt()
                    }
                    Func::Abs => v.abs(),
                }
            }
        })
    }
}

fn power<T: Real>(base: T, exp: T) -> Result<T, EvalError> {
    let integral = exp.fract().is_zero() && exp.abs() <= from_f64(i32::MAX as f64);
    if base.is_zero() && exp < T::zero() {
        return Err(EvalError::DivisionByZero);
    }
    if integral {
        let n = exp.to_i32().expect("checked range");
        return Ok(base.powi(n));
    }
    if base < T::zero() {
        return Err(EvalError::Domain {
            func: "^",
            input: base.to_f64_lossy(),
        });
    }
    Ok(base.powf(exp))
}

/// Fully parenthesized; parsing the output yields an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) if *v < 0.0 => write!(f, "(-{:?})", -v),
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::X => f.write_str("x"),
            Expr::Y(k) => write!(f, "y{k}"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                out.push(Token {
                    tok: Tok::Op(c as char),
                    offset: start,
                });
                i += 1;
            }
            b'(' | b')' => {
                out.push(Token {
                    tok: if c == b'(' { Tok::LParen } else { Tok::RParen },
                    offset: start,
                });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let digits = |i: &mut usize| {
                    let s = *i;
                    while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                        *i += 1;
                    }
                    *i - s
                };
                let mut n = digits(&mut i);
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    n += digits(&mut i);
                }
                if n == 0 {
                    return Err(ParseError::Syntax {
                        offset: start,
                        expected: "digits".into(),
                    });
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if digits(&mut j) == 0 {
                        return Err(ParseError::Syntax {
                            offset: j,
                            expected: "exponent digits".into(),
                        });
                    }
                    i = j;
                }
                if i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                    return Err(ParseError::Syntax {
                        offset: i,
                        expected: "operator after number (no implicit multiplication)".into(),
                    });
                }
                let v: f64 = src[start..i].parse().map_err(|_| ParseError::Syntax {
                    offset: start,
                    expected: "number".into(),
                })?;
                out.push(Token {
                    tok: Tok::Num(v),
                    offset: start,
                });
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(src[start..i].to_string()),
                    offset: start,
                });
            }
            _ => {
                return Err(ParseError::Syntax {
                    offset: start,
                    expected: "number, identifier, operator or parenthesis".into(),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek() {
            Some(Token { tok: Tok::Op(c), .. }) if ops.contains(c) => {
                let c = *c;
                self.pos += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(c) = self.eat_op(&['+', '-']) {
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.eat_op(&['*', '/']) {
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_op(&['-']).is_some() {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat_op(&['^']).is_some() {
            let exp = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::RParen, .. }) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ParseError::Syntax {
                offset: self.offset(),
                expected: "')'".into(),
            }),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        let Some(tok) = self.peek().map(|t| t.tok.clone()) else {
            return Err(ParseError::Syntax {
                offset,
                expected: "operand".into(),
            });
        };
        match tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if name == "x" {
                    return Ok(Expr::X);
                }
                if let Some(k) = derivative_index(&name) {
                    return Ok(Expr::Y(k));
                }
                let Some(func) = Func::from_name(&name) else {
                    return Err(ParseError::UnknownIdentifier { offset, name });
                };
                match self.peek() {
                    Some(Token { tok: Tok::LParen, .. }) => self.pos += 1,
                    _ => {
                        return Err(ParseError::Syntax {
                            offset: self.offset(),
                            expected: format!("'(' after {name}"),
                        })
                    }
                }
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Tok::Op(_) | Tok::RParen => Err(ParseError::Syntax {
                offset,
                expected: "operand".into(),
            }),
        }
    }
}

fn derivative_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('y')?;
    if digits.len() == 1 {
        digits.parse().ok()
    } else {
        None
    }
}
