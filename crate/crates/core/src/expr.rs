//! Noncommutative polynomial expressions such as `w(1,2)*w(2,1) + 3*a^2*w(1,3)`.
//!
//! The parser only builds a tree; each ring decides what its atoms mean.

use crate::error::{Error, Result};
use crate::linalg::Int;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(Int),
    /// A bare symbol such as `a`.
    Sym(String),
    /// An indexed generator such as `w(1,2)`.
    Gen(String, usize, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    /// Factors in order; multiplication need not commute.
    Mul(Vec<Expr>),
    Add(Vec<Expr>),
}

impl Expr {
    /// Evaluates the tree in any ring given the constants and atoms.
    pub fn eval<T, F>(&self, int: &dyn Fn(&Int) -> T, atom: &mut F, ops: &RingOps<T>) -> Result<T>
    where
        T: Clone,
        F: FnMut(&Expr) -> Result<T>,
    {
        Ok(match self {
            Expr::Int(n) => int(n),
            Expr::Sym(_) | Expr::Gen(..) => atom(self)?,
            Expr::Neg(e) => (ops.neg)(&e.eval(int, atom, ops)?),
            Expr::Pow(e, n) => {
                let b = e.eval(int, atom, ops)?;
                let mut acc = int(&Int::from(1));
                for _ in 0..*n {
                    acc = (ops.mul)(&acc, &b)?;
                }
                acc
            }
            Expr::Mul(fs) => {
                let mut acc = int(&Int::from(1));
                for f in fs {
                    acc = (ops.mul)(&acc, &f.eval(int, atom, ops)?)?;
                }
                acc
            }
            Expr::Add(ts) => {
                let mut acc = int(&Int::from(0));
                for t in ts {
                    acc = (ops.add)(&acc, &t.eval(int, atom, ops)?);
                }
                acc
            }
        })
    }
}

pub struct RingOps<T> {
    pub add: fn(&T, &T) -> T,
    pub neg: fn(&T) -> T,
    pub mul: fn(&T, &T) -> Result<T>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(Int),
    Ident(String),
    Ch(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::Parse(t.clone()))?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*^(),".contains(c) || c == '·' {
            out.push(Tok::Ch(if c == '·' { '*' } else { c }));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    src: String,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{what} at token {} of {:?}", self.pos + 1, self.src)))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Ch(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected '{c}'"))
        }
    }

    fn uint(&mut self) -> Result<usize> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                usize::try_from(&n).or_else(|_| self.err("index too large"))
            }
            _ => self.err("expected an index"),
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut terms = vec![self.product()?];
        loop {
            if self.eat('+') {
                terms.push(self.product()?);
            } else if self.eat('-') {
                terms.push(Expr::Neg(Box::new(self.product()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) })
    }

    fn product(&mut self) -> Result<Expr> {
        let mut fs = vec![self.unary()?];
        while self.eat('*') {
            fs.push(self.unary()?);
        }
        Ok(if fs.len() == 1 { fs.pop().unwrap() } else { Expr::Mul(fs) })
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let n = self.uint()?;
            let n = u32::try_from(n).or_else(|_| self.err("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let i = self.uint()?;
                    self.expect(',')?;
                    let j = self.uint()?;
                    self.expect(')')?;
                    Ok(Expr::Gen(name, i, j))
                } else {
                    Ok(Expr::Sym(name))
                }
            }
            Some(Tok::Ch('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.err("expected a term"),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(s)?, pos: 0, src: s.to_string() };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
