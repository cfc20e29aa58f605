//! Closed-form multiplier expressions over complex λ.
//!
//! Grammar: sums and products of numbers, the variables `lambda`, `rho`,
//! `alpha`, `beta`, `i`, `pi`, right-associative `^`, unary minus,
//! parentheses and the functions exp, sqrt, sin, cos, sinh, cosh, tanh,
//! log, omega and c.

use super::omega;
use crate::error::{Error, Result};
use crate::jacobi_core::c_function;
use crate::params::JacobiParameters;
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Bin(Op, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Var {
    Lambda,
    Rho,
    Alpha,
    Beta,
    I,
    Pi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func {
    Exp,
    Sqrt,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Log,
    Omega,
    C,
}

/// A parsed expression in the spectral variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    source: String,
    root: Node,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent part, e.g. 1e-3
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{text}' in '{src}'")))?;
            out.push(Token::Num(v));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Token::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' in '{src}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in '{}'", self.pos, self.src))
    }

    fn sum(&mut self) -> Result<Node> {
        let mut lhs = self.product()?;
        loop {
            let op = if self.eat('+') {
                Op::Add
            } else if self.eat('-') {
                Op::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.product()?));
        }
    }

    fn product(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                Op::Mul
            } else if self.eat('/') {
                Op::Div
            } else {
                return Ok(lhs);
            };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    // -x^2 parses as -(x^2); the exponent may carry its own sign
    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Node::Bin(Op::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.peek().cloned() {
            Some(Token::Num(v)) => {
                self.pos += 1;
                Ok(Node::Num(v))
            }
            Some(Token::Sym('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if let Some(f) = func(&name) {
                    if !self.eat('(') {
                        return Err(self.err(&format!("expected '(' after {name}")));
                    }
                    let arg = self.sum()?;
                    if !self.eat(')') {
                        return Err(self.err("expected ')'"));
                    }
                    return Ok(Node::Call(f, Box::new(arg)));
                }
                let v = match name.as_str() {
                    "lambda" => Var::Lambda,
                    "rho" => Var::Rho,
                    "alpha" => Var::Alpha,
                    "beta" => Var::Beta,
                    "i" => Var::I,
                    "pi" => Var::Pi,
                    _ => return Err(self.err(&format!("unknown name '{name}'"))),
                };
                Ok(Node::Var(v))
            }
            _ => Err(self.err("expected a number, name or '('")),
        }
    }
}

fn func(name: &str) -> Option<Func> {
    Some(match name {
        "exp" => Func::Exp,
        "sqrt" => Func::Sqrt,
        "sin" => Func::Sin,
        "cos" => Func::Cos,
        "sinh" => Func::Sinh,
        "cosh" => Func::Cosh,
        "tanh" => Func::Tanh,
        "log" => Func::Log,
        "omega" => Func::Omega,
        "c" => Func::C,
        _ => return None,
    })
}

fn pow(z: C64, w: C64) -> C64 {
    // integer powers stay exact and branch free, so (-λ)^2 = λ^2
    if w.im == 0.0 && w.re.fract() == 0.0 && w.re.abs() <= 64.0 {
        return z.powi(w.re as i32);
    }
    if z == C64::new(0.0, 0.0) && w.re > 0.0 {
        return z;
    }
    z.powc(w)
}

// stays finite for large |Re z|, where sinh/cosh overflow
fn tanh(z: C64) -> C64 {
    if z.re < 0.0 {
        return -tanh(-z);
    }
    let e = (-2.0 * z).exp();
    (1.0 - e) / (1.0 + e)
}

impl Expression {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser {
            tokens: tokenize(src)?,
            pos: 0,
            src,
        };
        if p.tokens.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let root = p.sum()?;
        if p.pos != p.tokens.len() {
            return Err(p.err("trailing input"));
        }
        Ok(Expression {
            source: src.to_string(),
            root,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, params: &JacobiParameters, lambda: C64) -> Result<C64> {
        eval(&self.root, params, lambda)
    }
}

fn eval(node: &Node, params: &JacobiParameters, lambda: C64) -> Result<C64> {
    let re = |x: f64| C64::new(x, 0.0);
    Ok(match node {
        Node::Num(v) => re(*v),
        Node::Var(v) => match v {
            Var::Lambda => lambda,
            Var::Rho => re(params.rho()),
            Var::Alpha => re(params.alpha()),
            Var::Beta => re(params.beta()),
            Var::I => C64::i(),
            Var::Pi => re(std::f64::consts::PI),
        },
        Node::Neg(a) => -eval(a, params, lambda)?,
        Node::Bin(op, a, b) => {
            let (x, y) = (eval(a, params, lambda)?, eval(b, params, lambda)?);
            match op {
                Op::Add => x + y,
                Op::Sub => x - y,
                Op::Mul => x * y,
                Op::Div => x / y,
                Op::Pow => pow(x, y),
            }
        }
        Node::Call(f, a) => {
            let x = eval(a, params, lambda)?;
            match f {
                Func::Exp => x.exp(),
                Func::Sqrt => x.sqrt(),
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
                Func::Tanh => tanh(x),
                Func::Log => x.ln(),
                Func::Omega => omega(params, x)?,
                Func::C => c_function(params, x)?,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, l: C64) -> C64 {
        Expression::parse(src).unwrap().eval(&JacobiParameters::generic(), l).unwrap()
    }

    #[test]
    fn arithmetic_and_precedence() {
        let l = C64::new(2.0, 0.0);
        assert_eq!(ev("1 + 2*3", l), C64::new(7.0, 0.0));
        assert_eq!(ev("-lambda^2", l), C64::new(-4.0, 0.0));
        assert_eq!(ev("2^3^2", l), C64::new(512.0, 0.0));
        assert_eq!(ev("(1+2)/4", l), C64::new(0.75, 0.0));
        assert_eq!(ev("2e-1*10", l), C64::new(2.0, 0.0));
        assert_eq!(ev("i*i", l), C64::new(-1.0, 0.0));
        assert_eq!(ev("lambda^-1", l), C64::new(0.5, 0.0));
    }

    #[test]
    fn variables_and_functions() {
        let p = JacobiParameters::generic();
        let l = C64::new(0.7, 0.3);
        let want = (-(l * l + p.rho() * p.rho())).exp();
        assert!((ev("exp(-(lambda^2+rho^2))", l) - want).norm() < 1e-15);
        assert!((ev("alpha+beta+1", l) - p.rho()).norm() < 1e-15);
        let w = omega(&p, l).unwrap();
        assert!((ev("1/omega(lambda)", l) - 1.0 / w).norm() < 1e-15);
        let c = c_function(&p, l).unwrap();
        assert!((ev("c(lambda)", l) - c).norm() < 1e-15);
        assert!((ev("cos(pi)", l) + 1.0).norm() < 1e-15);
        assert!((ev("tanh(lambda)", l) - l.tanh()).norm() < 1e-15);
        assert_eq!(ev("tanh(lambda)", C64::new(2000.0, 0.0)), C64::new(1.0, 0.0));
        assert_eq!(ev("tanh(lambda)", C64::new(-2000.0, 0.0)), C64::new(-1.0, 0.0));
    }

    #[test]
    fn errors() {
        for bad in ["", "1 +", "foo", "exp 1", "(1", "1 2", "2 $ 3", "sin()"] {
            assert!(matches!(Expression::parse(bad), Err(Error::Parse(_))), "{bad}");
        }
    }
}
