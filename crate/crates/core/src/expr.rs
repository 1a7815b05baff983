//! Small arithmetic expression language for payoff formulas.
//!
//! Variables x1..xn name the coordinates of a strategy profile, 1-based.
//! Operators: + - * / with the usual precedence, unary minus, and ^ binding
//! tightest and associating to the right. Functions: abs(e), min(e, e, ...),
//! max(e, e, ...). Unknown names, out-of-range variables, and malformed
//! syntax fail at parse time; division by zero and non-finite intermediate
//! values fail at evaluation time.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Num(f64),
    /// 0-based variable slot.
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Abs(Box<Expr>),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
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
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                // exponent suffix like 1e-3
                if i < bytes.len() && matches!(bytes[i] as char, 'e' | 'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j] as char, '+' | '-') {
                        j += 1;
                    }
                    if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let v: f64 = text
                    .parse()
                    .map_err(|_| Error::input(format!("bad number '{}'", text)))?;
                if !v.is_finite() {
                    return Err(Error::input(format!("number '{}' overflows", text)));
                }
                toks.push(Tok::Num(v));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                toks.push(Tok::Ident(src[start..i].to_string()));
            }
            other => {
                return Err(Error::input(format!(
                    "unexpected character '{}' at byte {}",
                    other, i
                )))
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    n_vars: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        match self.bump() {
            Some(t) if t == want => Ok(()),
            other => Err(Error::input(format!(
                "expected {}, found {:?}",
                what, other
            ))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            // right associative, and the exponent may carry a sign
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn args(&mut self) -> Result<Vec<Expr>> {
        self.expect(Tok::LParen, "'('")?;
        let mut out = vec![self.expr()?];
        while matches!(self.peek(), Some(Tok::Comma)) {
            self.pos += 1;
            out.push(self.expr()?);
        }
        self.expect(Tok::RParen, "')'")?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "abs" => {
                    let mut a = self.args()?;
                    if a.len() != 1 {
                        return Err(Error::input("abs takes exactly one argument"));
                    }
                    Ok(Expr::Abs(Box::new(a.pop().unwrap())))
                }
                "min" => {
                    let a = self.args()?;
                    if a.len() < 2 {
                        return Err(Error::input("min takes at least two arguments"));
                    }
                    Ok(Expr::Min(a))
                }
                "max" => {
                    let a = self.args()?;
                    if a.len() < 2 {
                        return Err(Error::input("max takes at least two arguments"));
                    }
                    Ok(Expr::Max(a))
                }
                _ => {
                    if let Some(digits) = name.strip_prefix('x') {
                        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                            let idx: usize = digits
                                .parse()
                                .map_err(|_| Error::input(format!("bad variable '{}'", name)))?;
                            if idx == 0 || idx > self.n_vars {
                                return Err(Error::input(format!(
                                    "variable '{}' out of range, expected x1..x{}",
                                    name, self.n_vars
                                )));
                            }
                            return Ok(Expr::Var(idx - 1));
                        }
                    }
                    Err(Error::input(format!("unknown name '{}'", name)))
                }
            },
            other => Err(Error::input(format!(
                "expected a value, found {:?}",
                other
            ))),
        }
    }
}

/// A parsed formula over a fixed number of profile coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Formula {
    ast: Expr,
    n_vars: usize,
    src: String,
}

impl Formula {
    pub fn parse(src: &str, n_vars: usize) -> Result<Formula> {
        let toks = lex(src)?;
        let mut p = Parser {
            toks: &toks,
            pos: 0,
            n_vars,
        };
        let ast = p.expr()?;
        if p.pos != toks.len() {
            return Err(Error::input(format!(
                "trailing input after expression: {:?}",
                toks[p.pos]
            )));
        }
        Ok(Formula {
            ast,
            n_vars,
            src: src.to_string(),
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    pub fn eval(&self, vars: &[f64]) -> Result<f64> {
        if vars.len() != self.n_vars {
            return Err(Error::input(format!(
                "{} values supplied for {} variables",
                vars.len(),
                self.n_vars
            )));
        }
        eval_node(&self.ast, vars)
    }
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::eval("non-finite value"))
    }
}

fn eval_node(e: &Expr, vars: &[f64]) -> Result<f64> {
    match e {
        Expr::Num(v) => Ok(*v),
        Expr::Var(i) => Ok(vars[*i]),
        Expr::Neg(a) => Ok(-eval_node(a, vars)?),
        Expr::Add(a, b) => finite(eval_node(a, vars)? + eval_node(b, vars)?),
        Expr::Sub(a, b) => finite(eval_node(a, vars)? - eval_node(b, vars)?),
        Expr::Mul(a, b) => finite(eval_node(a, vars)? * eval_node(b, vars)?),
        Expr::Div(a, b) => {
            let num = eval_node(a, vars)?;
            let den = eval_node(b, vars)?;
            if den == 0.0 {
                return Err(Error::eval("division by zero"));
            }
            finite(num / den)
        }
        Expr::Pow(a, b) => {
            let base = eval_node(a, vars)?;
            let exp = eval_node(b, vars)?;
            finite(base.powf(exp))
        }
        Expr::Abs(a) => Ok(eval_node(a, vars)?.abs()),
        Expr::Min(items) => {
            let mut best = eval_node(&items[0], vars)?;
            for it in &items[1..] {
                let v = eval_node(it, vars)?;
                if v < best {
                    best = v;
                }
            }
            Ok(best)
        }
        Expr::Max(items) => {
            let mut best = eval_node(&items[0], vars)?;
            for it in &items[1..] {
                let v = eval_node(it, vars)?;
                if v > best {
                    best = v;
                }
            }
            Ok(best)
        }
    }
}
