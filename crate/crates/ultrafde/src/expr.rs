//! A small expression language for problem definitions: coefficient
//! functions, right-hand sides, nonlinear terms and exact solutions.
//!
//! Grammar (highest precedence first): `^` (right-associative), unary minus,
//! `*` `/`, `+` `-`, with parentheses, the variables `x` and `u`, the
//! constants `pi` and `e`, decimal literals with an optional exponent, and
//! the call set `sin cos tan tanh exp ln sqrt abs gamma pow`. `pow(a, b)`
//! and `a^b` evaluate identically.
//!
//! Evaluation is forward-mode dual in the single seed `u`: every value
//! carries its derivative with respect to `u`, which is what the Newton
//! Jacobian of a nonlinear collocation row needs. `x` is a constant
//! parameter during differentiation.

use crate::special;
use crate::tolerances::INTEGER_SNAP_EPS;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("unbalanced parenthesis at offset {offset}")]
    UnbalancedParen { offset: usize },
    #[error("wrong arity for {name}: expected {expected} argument(s), got {got} at offset {offset}")]
    WrongArity {
        name: String,
        expected: usize,
        got: usize,
        offset: usize,
    },
    #[error("unexpected character `{ch}` at offset {offset}")]
    UnexpectedChar { ch: char, offset: usize },
    #[error("malformed number at offset {offset}")]
    MalformedNumber { offset: usize },
    #[error("unexpected end of input at offset {offset}")]
    UnexpectedEnd { offset: usize },
    #[error("unexpected token at offset {offset}")]
    UnexpectedToken { offset: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error in `{expr}`: {reason}")]
    Domain { expr: String, reason: String },
    #[error("cannot differentiate `{expr}` with respect to u")]
    DerivativeUnsupported { expr: String },
    #[error("`u` is not allowed in `{expr}` here")]
    UnexpectedU { expr: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Tanh,
    Exp,
    Ln,
    Sqrt,
    Abs,
    Gamma,
    Pow,
}

impl Func {
    fn name(&self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Gamma => "gamma",
            Func::Pow => "pow",
        }
    }

    fn arity(&self) -> usize {
        match self {
            Func::Pow => 2,
            _ => 1,
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "tan" => Some(Func::Tan),
            "tanh" => Some(Func::Tanh),
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sqrt" => Some(Func::Sqrt),
            "abs" => Some(Func::Abs),
            "gamma" => Some(Func::Gamma),
            "pow" => Some(Func::Pow),
            _ => None,
        }
    }
}

/// Abstract syntax tree of an expression in `x` and `u`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Number(f64),
    X,
    U,
    Pi,
    E,
    Neg(Box<ExprNode>),
    Binary(BinOp, Box<ExprNode>, Box<ExprNode>),
    Call(Func, Vec<ExprNode>),
}

/// A value together with its derivative with respect to `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualValue {
    pub value: f64,
    pub du: f64,
}

impl DualValue {
    /// A value that does not depend on `u`.
    pub fn constant(value: f64) -> Self {
        DualValue { value, du: 0.0 }
    }

    /// The seed: the value of `u` itself, with derivative 1.
    pub fn seed(value: f64) -> Self {
        DualValue { value, du: 1.0 }
    }
}

// --- tokenizer -------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

/// Tokens paired with 1-based byte offsets.
fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let offset = i + 1;
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'(' => {
                toks.push((Tok::LParen, offset));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, offset));
                i += 1;
            }
            b',' => {
                toks.push((Tok::Comma, offset));
                i += 1;
            }
            b'+' => {
                toks.push((Tok::Plus, offset));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, offset));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, offset));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, offset));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, offset));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // optional exponent part, only when followed by digits
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let lit = &text[start..i];
                let value: f64 = lit
                    .parse()
                    .map_err(|_| ParseError::MalformedNumber { offset })?;
                toks.push((Tok::Num(value), offset));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), offset));
            }
            _ => {
                return Err(ParseError::UnexpectedChar {
                    ch: text[i..].chars().next().unwrap_or('?'),
                    offset,
                })
            }
        }
    }
    Ok(toks)
}

// --- parser ----------------------------------------------------------------

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_offset: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, o)| o)
            .unwrap_or(self.end_offset)
    }

    fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ParseError::UnbalancedParen {
                offset: self.offset(),
            }),
        }
    }

    fn parse_sum(&mut self) -> Result<ExprNode, ParseError> {
        let mut node = self.parse_product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.parse_product()?;
                    node = ExprNode::Binary(BinOp::Add, Box::new(node), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.parse_product()?;
                    node = ExprNode::Binary(BinOp::Sub, Box::new(node), Box::new(rhs));
                }
                _ => return Ok(node),
            }
        }
    }

    fn parse_product(&mut self) -> Result<ExprNode, ParseError> {
        let mut node = self.parse_unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    node = ExprNode::Binary(BinOp::Mul, Box::new(node), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    node = ExprNode::Binary(BinOp::Div, Box::new(node), Box::new(rhs));
                }
                _ => return Ok(node),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<ExprNode, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            let inner = self.parse_unary()?;
            return Ok(ExprNode::Neg(Box::new(inner)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<ExprNode, ParseError> {
        let base = self.parse_atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            // the exponent may carry a unary minus; ^ is right-associative
            let expo = self.parse_unary()?;
            return Ok(ExprNode::Binary(
                BinOp::Pow,
                Box::new(base),
                Box::new(expo),
            ));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<ExprNode, ParseError> {
        let offset = self.offset();
        match self.advance() {
            Some(Tok::Num(v)) => Ok(ExprNode::Number(v)),
            Some(Tok::LParen) => {
                let inner = self.parse_sum()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(ExprNode::X),
                "u" => Ok(ExprNode::U),
                "pi" => Ok(ExprNode::Pi),
                "e" => Ok(ExprNode::E),
                _ => {
                    let func = Func::from_name(&name)
                        .ok_or(ParseError::UnknownIdentifier { name: name.clone(), offset })?;
                    match self.peek() {
                        Some(Tok::LParen) => {
                            self.pos += 1;
                            let mut args = vec![self.parse_sum()?];
                            while let Some(Tok::Comma) = self.peek() {
                                self.pos += 1;
                                args.push(self.parse_sum()?);
                            }
                            self.expect_rparen()?;
                            if args.len() != func.arity() {
                                return Err(ParseError::WrongArity {
                                    name: name.clone(),
                                    expected: func.arity(),
                                    got: args.len(),
                                    offset,
                                });
                            }
                            Ok(ExprNode::Call(func, args))
                        }
                        _ => Err(ParseError::UnexpectedToken {
                            offset: self.offset(),
                        }),
                    }
                }
            },
            Some(Tok::RParen) => Err(ParseError::UnbalancedParen { offset }),
            Some(_) => Err(ParseError::UnexpectedToken { offset }),
            None => Err(ParseError::UnexpectedEnd { offset }),
        }
    }
}

/// Parse an expression into its tree.
pub fn parse(text: &str) -> Result<ExprNode, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end_offset: text.len() + 1,
    };
    let node = parser.parse_sum()?;
    if parser.pos != parser.toks.len() {
        // a stray closing parenthesis is the common case here
        return match parser.peek() {
            Some(Tok::RParen) => Err(ParseError::UnbalancedParen {
                offset: parser.offset(),
            }),
            _ => Err(ParseError::UnexpectedToken {
                offset: parser.offset(),
            }),
        };
    }
    Ok(node)
}

// --- evaluation ------------------------------------------------------------

fn domain_error(node: &ExprNode, reason: impl Into<String>) -> EvalError {
    EvalError::Domain {
        expr: node.to_string(),
        reason: reason.into(),
    }
}

fn is_integer_valued(e: f64) -> bool {
    (e - e.round()).abs() <= INTEGER_SNAP_EPS && e.abs() < 2e9
}

fn pow_dual(node: &ExprNode, base: DualValue, expo: DualValue) -> Result<DualValue, EvalError> {
    if base.value > 0.0 {
        let v = base.value.powf(expo.value);
        let du = v * (expo.du * base.value.ln() + expo.value * base.du / base.value);
        return Ok(DualValue { value: v, du });
    }
    if base.value == 0.0 {
        // 0^b = 0 for b > 0 with zero derivative contribution; 0^0 = 1
        if expo.value > 0.0 {
            return Ok(DualValue::constant(0.0));
        }
        if expo.value == 0.0 {
            return Ok(DualValue::constant(1.0));
        }
        return Err(domain_error(node, "zero raised to a negative power"));
    }
    // negative base: only integer exponents with no u-dependence are real
    if expo.du == 0.0 && is_integer_valued(expo.value) {
        let n = expo.value.round();
        let v = base.value.powi(n as i32);
        let du = n * base.value.powi(n as i32 - 1) * base.du;
        return Ok(DualValue { value: v, du });
    }
    Err(domain_error(
        node,
        "negative base with a non-integer exponent",
    ))
}

impl ExprNode {
    /// Forward-mode evaluation: `x` is a constant parameter, `u` the seed.
    pub fn eval_dual(&self, x: f64, u: DualValue) -> Result<DualValue, EvalError> {
        match self {
            ExprNode::Number(v) => Ok(DualValue::constant(*v)),
            ExprNode::X => Ok(DualValue::constant(x)),
            ExprNode::U => Ok(u),
            ExprNode::Pi => Ok(DualValue::constant(std::f64::consts::PI)),
            ExprNode::E => Ok(DualValue::constant(std::f64::consts::E)),
            ExprNode::Neg(inner) => {
                let v = inner.eval_dual(x, u)?;
                Ok(DualValue {
                    value: -v.value,
                    du: -v.du,
                })
            }
            ExprNode::Binary(op, lhs, rhs) => {
                let a = lhs.eval_dual(x, u)?;
                let b = rhs.eval_dual(x, u)?;
                match op {
                    BinOp::Add => Ok(DualValue {
                        value: a.value + b.value,
                        du: a.du + b.du,
                    }),
                    BinOp::Sub => Ok(DualValue {
                        value: a.value - b.value,
                        du: a.du - b.du,
                    }),
                    BinOp::Mul => Ok(DualValue {
                        value: a.value * b.value,
                        du: a.du * b.value + a.value * b.du,
                    }),
                    BinOp::Div => {
                        if b.value == 0.0 {
                            return Err(domain_error(self, "division by zero"));
                        }
                        Ok(DualValue {
                            value: a.value / b.value,
                            du: (a.du * b.value - a.value * b.du) / (b.value * b.value),
                        })
                    }
                    BinOp::Pow => pow_dual(self, a, b),
                }
            }
            ExprNode::Call(func, args) => {
                let a = args[0].eval_dual(x, u)?;
                match func {
                    Func::Sin => Ok(DualValue {
                        value: a.value.sin(),
                        du: a.value.cos() * a.du,
                    }),
                    Func::Cos => Ok(DualValue {
                        value: a.value.cos(),
                        du: -a.value.sin() * a.du,
                    }),
                    Func::Tan => {
                        let c = a.value.cos();
                        Ok(DualValue {
                            value: a.value.tan(),
                            du: a.du / (c * c),
                        })
                    }
                    Func::Tanh => {
                        let t = a.value.tanh();
                        Ok(DualValue {
                            value: t,
                            du: (1.0 - t * t) * a.du,
                        })
                    }
                    Func::Exp => {
                        let v = a.value.exp();
                        Ok(DualValue {
                            value: v,
                            du: v * a.du,
                        })
                    }
                    Func::Ln => {
                        if a.value <= 0.0 {
                            return Err(domain_error(self, "log of a non-positive value"));
                        }
                        Ok(DualValue {
                            value: a.value.ln(),
                            du: a.du / a.value,
                        })
                    }
                    Func::Sqrt => {
                        if a.value < 0.0 {
                            return Err(domain_error(self, "square root of a negative value"));
                        }
                        if a.value == 0.0 {
                            if a.du != 0.0 {
                                return Err(domain_error(
                                    self,
                                    "derivative of sqrt is singular at zero",
                                ));
                            }
                            return Ok(DualValue::constant(0.0));
                        }
                        let v = a.value.sqrt();
                        Ok(DualValue {
                            value: v,
                            du: a.du / (2.0 * v),
                        })
                    }
                    Func::Abs => Ok(DualValue {
                        value: a.value.abs(),
                        du: a.value.signum() * a.du,
                    }),
                    Func::Gamma => {
                        if a.du != 0.0 {
                            return Err(EvalError::DerivativeUnsupported {
                                expr: self.to_string(),
                            });
                        }
                        let v = special::gamma(a.value)
                            .map_err(|e| domain_error(self, e.to_string()))?;
                        Ok(DualValue::constant(v))
                    }
                    Func::Pow => {
                        let b = args[1].eval_dual(x, u)?;
                        pow_dual(self, a, b)
                    }
                }
            }
        }
    }

    /// Evaluate an expression in `x` only; any occurrence of `u` is an error.
    pub fn eval_in_x(&self, x: f64) -> Result<f64, EvalError> {
        if self.contains_u() {
            return Err(EvalError::UnexpectedU {
                expr: self.to_string(),
            });
        }
        Ok(self.eval_dual(x, DualValue::constant(0.0))?.value)
    }

    pub fn contains_u(&self) -> bool {
        match self {
            ExprNode::U => true,
            ExprNode::Number(_) | ExprNode::X | ExprNode::Pi | ExprNode::E => false,
            ExprNode::Neg(inner) => inner.contains_u(),
            ExprNode::Binary(_, a, b) => a.contains_u() || b.contains_u(),
            ExprNode::Call(_, args) => args.iter().any(|a| a.contains_u()),
        }
    }
}

// --- printing --------------------------------------------------------------

fn precedence(node: &ExprNode) -> u8 {
    match node {
        ExprNode::Binary(BinOp::Add | BinOp::Sub, _, _) => 1,
        ExprNode::Binary(BinOp::Mul | BinOp::Div, _, _) => 2,
        ExprNode::Neg(_) => 3,
        ExprNode::Binary(BinOp::Pow, _, _) => 4,
        _ => 5,
    }
}

fn write_child(
    f: &mut fmt::Formatter<'_>,
    child: &ExprNode,
    min_prec: u8,
) -> fmt::Result {
    if precedence(child) < min_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprNode::Number(v) => write!(f, "{v}"),
            ExprNode::X => write!(f, "x"),
            ExprNode::U => write!(f, "u"),
            ExprNode::Pi => write!(f, "pi"),
            ExprNode::E => write!(f, "e"),
            ExprNode::Neg(inner) => {
                write!(f, "-")?;
                // parenthesize anything that binds looser than unary minus,
                // and nested negations for readability
                if precedence(inner) <= 3 {
                    write!(f, "({inner})")
                } else {
                    write!(f, "{inner}")
                }
            }
            ExprNode::Binary(op, a, b) => match op {
                BinOp::Add => {
                    write_child(f, a, 1)?;
                    write!(f, " + ")?;
                    write_child(f, b, 2)
                }
                BinOp::Sub => {
                    write_child(f, a, 1)?;
                    write!(f, " - ")?;
                    write_child(f, b, 2)
                }
                BinOp::Mul => {
                    write_child(f, a, 2)?;
                    write!(f, "*")?;
                    write_child(f, b, 3)
                }
                BinOp::Div => {
                    write_child(f, a, 2)?;
                    write!(f, "/")?;
                    write_child(f, b, 3)
                }
                BinOp::Pow => {
                    // left operand of ^ must be an atom-level expression
                    if precedence(a) <= 4 {
                        write!(f, "({a})")?;
                    } else {
                        write!(f, "{a}")?;
                    }
                    write!(f, "^")?;
                    if precedence(b) < 4 {
                        write!(f, "({b})")
                    } else {
                        write!(f, "{b}")
                    }
                }
            },
            ExprNode::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}
