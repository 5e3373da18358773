//! Tiny expression language for metric coefficients supplied in JSON chart
//! documents.
//!
//! Grammar: `+ - * / ^`, `pow(a, b)`, `sin cos exp log`, numeric literals,
//! the constants `pi` and `e`, and the coordinates `x0 x1 x2 x3`. Parse
//! failures carry a 1-based line and column. The parsed tree evaluates over
//! any [`ChartScalar`], so coefficient functions written once also produce
//! exact derivative jets.

use crate::error::{Error, Result};
use crate::scalar::ChartScalar;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Coord(usize),
    Pi,
    E,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        match p.peek() {
            Tok::End => Ok(e),
            other => Err(p.unexpected(&other)),
        }
    }

    pub fn eval<S: ChartScalar>(&self, x: &[S; 4]) -> S {
        match self {
            Expr::Num(v) => S::lit(*v),
            Expr::Coord(i) => x[*i],
            Expr::Pi => S::lit(std::f64::consts::PI),
            Expr::E => S::lit(std::f64::consts::E),
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => {
                // Integer exponents stay exact and avoid log() domain issues
                // for negative bases.
                if let Expr::Num(n) = **b {
                    if n.fract() == 0.0 && n.abs() <= 64.0 {
                        return a.eval(x).powi(n as i32);
                    }
                }
                a.eval(x).powf(b.eval(x))
            }
            Expr::Sin(a) => a.eval(x).sin(),
            Expr::Cos(a) => a.eval(x).cos(),
            Expr::Exp(a) => a.eval(x).exp(),
            Expr::Log(a) => a.eval(x).ln(),
        }
    }

    /// True when no coordinate symbol occurs (the expression is constant).
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Pi | Expr::E => true,
            Expr::Coord(_) => false,
            Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) | Expr::Log(a) => {
                a.is_constant()
            }
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.is_constant() && b.is_constant(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Coord(i) => write!(f, "x{i}"),
            Expr::Pi => write!(f, "pi"),
            Expr::E => write!(f, "e"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "pow({a}, {b})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Log(a) => write!(f, "log({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
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
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut push = |tok: Tok| out.push(Spanned { tok, line: tline, col: tcol });
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '+' => {
                chars.next();
                col += 1;
                push(Tok::Plus);
            }
            // ASCII minus and the typographic minus sign.
            '-' | '\u{2212}' => {
                chars.next();
                col += 1;
                push(Tok::Minus);
            }
            // ASCII star and the interpunct some documents use for products.
            '*' | '\u{00B7}' => {
                chars.next();
                col += 1;
                push(Tok::Star);
            }
            '/' => {
                chars.next();
                col += 1;
                push(Tok::Slash);
            }
            '^' => {
                chars.next();
                col += 1;
                push(Tok::Caret);
            }
            '(' => {
                chars.next();
                col += 1;
                push(Tok::LParen);
            }
            ')' => {
                chars.next();
                col += 1;
                push(Tok::RParen);
            }
            ',' => {
                chars.next();
                col += 1;
                push(Tok::Comma);
            }
            c if c.is_ascii_digit() || c == '.' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() || c == '.' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else if (c == 'e' || c == 'E') && !s.is_empty() {
                        // Scientific notation; the exponent may be signed.
                        let mut probe = chars.clone();
                        probe.next();
                        match probe.peek() {
                            Some(&d) if d.is_ascii_digit() || d == '+' || d == '-' => {
                                s.push('e');
                                chars.next();
                                col += 1;
                                if let Some(&sign) = chars.peek() {
                                    if sign == '+' || sign == '-' {
                                        s.push(sign);
                                        chars.next();
                                        col += 1;
                                    }
                                }
                            }
                            _ => break,
                        }
                    } else {
                        break;
                    }
                }
                let v: f64 = s.parse().map_err(|_| Error::Parse {
                    line: tline,
                    col: tcol,
                    message: format!("malformed number literal `{s}`"),
                })?;
                push(Tok::Num(v));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push(Tok::Ident(s));
            }
            other => {
                return Err(Error::Parse {
                    line,
                    col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Tok {
        self.tokens[self.pos].tok.clone()
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.tokens[self.pos.min(self.tokens.len() - 1)];
        (s.line, s.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, tok: &Tok) -> Error {
        let (line, col) = self.here();
        let what = match tok {
            Tok::End => "end of input".to_string(),
            other => format!("{other:?}"),
        };
        Error::Parse { line, col, message: format!("unexpected {what}") }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == want {
            self.bump();
            Ok(())
        } else {
            let (line, col) = self.here();
            Err(Error::Parse { line, col, message: format!("expected {what}") })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    /// Unary minus binds looser than `^`, so `-x0^2` is `-(x0^2)`.
    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek() == Tok::Caret {
            self.bump();
            // Right associative: a^b^c = a^(b^c); the exponent may carry its
            // own sign.
            let e = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(e)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let (line, col) = self.here();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "x0" => Ok(Expr::Coord(0)),
                "x1" => Ok(Expr::Coord(1)),
                "x2" => Ok(Expr::Coord(2)),
                "x3" => Ok(Expr::Coord(3)),
                "pi" => Ok(Expr::Pi),
                "e" => Ok(Expr::E),
                "sin" | "cos" | "exp" | "log" => {
                    self.expect(Tok::LParen, "`(` after function name")?;
                    let a = self.expr()?;
                    self.expect(Tok::RParen, "closing `)`")?;
                    let b = Box::new(a);
                    Ok(match name.as_str() {
                        "sin" => Expr::Sin(b),
                        "cos" => Expr::Cos(b),
                        "exp" => Expr::Exp(b),
                        _ => Expr::Log(b),
                    })
                }
                "pow" => {
                    self.expect(Tok::LParen, "`(` after function name")?;
                    let a = self.expr()?;
                    self.expect(Tok::Comma, "`,` between pow arguments")?;
                    let b = self.expr()?;
                    self.expect(Tok::RParen, "closing `)`")?;
                    Ok(Expr::Pow(Box::new(a), Box::new(b)))
                }
                other => Err(Error::Parse {
                    line,
                    col,
                    message: format!("unknown identifier `{other}`"),
                }),
            },
            tok => {
                let what = match tok {
                    Tok::End => "end of input".to_string(),
                    other => format!("{other:?}"),
                };
                Err(Error::Parse { line, col, message: format!("unexpected {what}") })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, x: [f64; 4]) -> f64 {
        Expr::parse(src).unwrap().eval(&x)
    }

    #[test]
    fn arithmetic_and_precedence() {
        assert_eq!(ev("1 + 2 * 3", [0.0; 4]), 7.0);
        assert_eq!(ev("(1 + 2) * 3", [0.0; 4]), 9.0);
        assert_eq!(ev("2 ^ 3 ^ 2", [0.0; 4]), 512.0);
        assert_eq!(ev("-x0 ^ 2", [3.0, 0.0, 0.0, 0.0]), -9.0);
        assert_eq!(ev("6 / 3 / 2", [0.0; 4]), 1.0);
    }

    #[test]
    fn functions_and_constants() {
        let x = [0.3, 0.0, 2.0, 0.0];
        assert!((ev("pow(x2, 2) - log(x2)", x) - (4.0 - 2.0_f64.ln())).abs() < 1e-15);
        assert!((ev("sin(pi * x0) + exp(x0)", x) - ((0.3 * std::f64::consts::PI).sin() + 0.3_f64.exp())).abs() < 1e-15);
        assert!((ev("1.5e2 + 2.5e-1", x) - 150.25).abs() < 1e-15);
    }

    #[test]
    fn parse_error_positions() {
        let err = Expr::parse("(x0 + ").unwrap_err();
        match err {
            crate::error::Error::Parse { line, col, .. } => {
                assert_eq!(line, 1);
                assert_eq!(col, 7);
            }
            other => panic!("wrong error kind: {other}"),
        }
        assert!(Expr::parse("x5 + 1").is_err());
        assert!(Expr::parse("pow(x0)").is_err());
        assert!(Expr::parse("1 + $").is_err());
    }

    #[test]
    fn display_round_trips() {
        for src in ["x0 * sin(x1) - pow(x2 + 1, 3) / (2 - x3)", "-x0 ^ 2 + pi * e"] {
            let e = Expr::parse(src).unwrap();
            let again = Expr::parse(&e.to_string()).unwrap();
            let x = [0.37, -0.8, 1.21, 0.04];
            assert!((e.eval(&x) - again.eval(&x)).abs() < 1e-15);
        }
    }
}
