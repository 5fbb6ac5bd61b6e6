//! The cohomology ring of `OC_k(V)` for `V ⊇ 1` in degrees `*(V-1)`, as a
//! ring over `T = Z[a]/(d·a)` with `a = a_{V-1}` and `d = d(V-1)`.
//!
//! Generators `ω_ij` with `i < j` are kept in words sorted by column `j`
//! (then row `i`). Elements are reduced by the rewrite rules
//!
//! ```text
//! ω_ji        -> s·ω_ij + a                  s = (-1)^{|V|}
//! x·y         -> ε·y·x       (out of order)  ε = (-1)^{|V|-1}
//! ω_ij·ω_ij   -> a·ω_ij
//! ω_pr·ω_qr   -> ω_pq·ω_qr - ω_pq·ω_pr + a·ω_pr      (p < q < r)
//! ```
//!
//! The last rule is the Arnold relation solved for the repeated-column pair.
//! Normal forms have pairwise distinct columns, and their count in degree
//! `j` is `c(k, k-j)`.

use crate::error::{Error, Result};
use crate::expr::{self, Expr, RingOps};
use crate::group_rep::{GroupSpec, Representation};
use crate::linalg::Int;
use crate::varchenko_gelfand::{heaviside, SigmaFunction};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

pub const MAX_K: usize = 12;
const STEP_CAP: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u32) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn parse(s: &str) -> Result<Parity> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(Error::Parse(format!("parity must be even or odd, got {s:?}"))),
        }
    }

    /// `(-1)^{|V|}`, the sign in `ω_ji = s·ω_ij + a`.
    fn s(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RingParams {
    pub k: usize,
    pub parity: Parity,
    /// Additive order of `a`; 0 means infinite.
    pub d: u64,
    /// Additive order of an extra central class `a_W`, present only in
    /// targets of [`Restriction`].
    pub d_w: Option<u64>,
}

impl RingParams {
    pub fn new(k: usize, parity: Parity, d: u64) -> Result<RingParams> {
        if k == 0 || k > MAX_K {
            return Err(Error::Range(format!("k = {k} must lie in 1..={MAX_K}")));
        }
        if parity == Parity::Even && !(d == 1 || d == 2) {
            // |V-1| odd forces 2a = 0
            return Err(Error::Hypothesis(format!("|V| even requires d | 2, got d = {d}")));
        }
        Ok(RingParams { k, parity, d, d_w: None })
    }

    /// Parameters for an honest representation `V ⊇ 1` with `V ≠ 1`.
    pub fn for_rep(g: &GroupSpec, v: &Representation, k: usize) -> Result<RingParams> {
        if !v.contains_trivial() {
            return Err(Error::Hypothesis(format!("V = {} does not contain a trivial summand", g.format_rep(v))));
        }
        let w = v.checked_sub(&Representation::trivial(g, 1)).unwrap();
        if w.is_zero() {
            return Err(Error::ZeroRepresentation);
        }
        RingParams::new(k, Parity::of(g.dim(v)), g.d(&w)? as u64)
    }

    fn eps(&self) -> i64 {
        -self.parity.s()
    }

    fn modulus(&self, a: u32, b: u32) -> Int {
        let mut m = Int::zero();
        if a > 0 {
            m = m.gcd(&Int::from(self.d));
        }
        if b > 0 {
            m = m.gcd(&Int::from(self.d_w.unwrap_or(0)));
        }
        m
    }

    fn normalize(&self, c: &Int, a: u32, b: u32) -> Int {
        let m = self.modulus(a, b);
        if m.is_zero() {
            c.clone()
        } else {
            c.mod_floor(&m)
        }
    }
}

type Gen = (u8, u8);
type Key = (Vec<Gen>, u32, u32);

fn col_order(g: &Gen) -> (u8, u8) {
    (g.1, g.0)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct OmegaMonomial {
    pub factors: Vec<(usize, usize)>,
    pub a_exponent: u32,
    #[serde(skip_serializing_if = "is_zero_u32")]
    pub w_exponent: u32,
}

fn is_zero_u32(n: &u32) -> bool {
    *n == 0
}

impl OmegaMonomial {
    /// Degree as a multiple of `V - 1`.
    pub fn degree(&self) -> u32 {
        self.factors.len() as u32 + self.a_exponent
    }

    pub fn is_admissible(&self) -> bool {
        let mut cols = std::collections::BTreeSet::new();
        self.factors.iter().all(|&(i, j)| i < j && cols.insert(j))
            && self.factors.windows(2).all(|w| (w[0].1, w[0].0) < (w[1].1, w[1].0))
    }
}

impl fmt::Display for OmegaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.a_exponent {
            0 => {}
            1 => parts.push("a".to_string()),
            n => parts.push(format!("a^{n}")),
        }
        match self.w_exponent {
            0 => {}
            1 => parts.push("b".to_string()),
            n => parts.push(format!("b^{n}")),
        }
        parts.extend(self.factors.iter().map(|(i, j)| format!("w({i},{j})")));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    params: RingParams,
    terms: BTreeMap<Key, Int>,
}

impl RingElement {
    pub fn zero(p: RingParams) -> Self {
        RingElement { params: p, terms: BTreeMap::new() }
    }

    pub fn scalar(p: RingParams, n: impl Into<Int>) -> Self {
        Self::from_terms(p, [((vec![], 0, 0), n.into())])
    }

    pub fn one(p: RingParams) -> Self {
        Self::scalar(p, 1)
    }

    pub fn a(p: RingParams) -> Self {
        Self::from_terms(p, [((vec![], 1, 0), Int::one())])
    }

    /// The extra central class `a_W` of a restriction target, written `b`.
    pub fn b(p: RingParams) -> Result<Self> {
        if p.d_w.is_none() {
            return Err(Error::Other("this ring has no class b".into()));
        }
        Ok(Self::from_terms(p, [((vec![], 0, 1), Int::one())]))
    }

    /// `ω_ij` for any `i ≠ j`, already rewritten in terms of `i < j`.
    pub fn generator(p: RingParams, i: usize, j: usize) -> Result<Self> {
        if i == j || i == 0 || j == 0 || i > p.k || j > p.k {
            return Err(Error::Range(format!("ω_{i}{j} with k = {}", p.k)));
        }
        if i < j {
            return Ok(Self::from_terms(p, [((vec![(i as u8, j as u8)], 0, 0), Int::one())]));
        }
        Ok(Self::from_terms(
            p,
            [((vec![(j as u8, i as u8)], 0, 0), Int::from(p.parity.s())), ((vec![], 1, 0), Int::one())],
        ))
    }

    fn from_terms(p: RingParams, it: impl IntoIterator<Item = (Key, Int)>) -> Self {
        let mut out = RingElement::zero(p);
        for (k, c) in it {
            out.add_term(k, c);
        }
        out
    }

    fn add_term(&mut self, k: Key, c: Int) {
        let e = self.terms.entry(k.clone()).or_insert_with(Int::zero);
        *e += c;
        let r = self.params.normalize(e, k.1, k.2);
        if r.is_zero() {
            self.terms.remove(&k);
        } else {
            *e = r;
        }
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (OmegaMonomial, &Int)> {
        self.terms.iter().map(|((w, a, b), c)| {
            (
                OmegaMonomial {
                    factors: w.iter().map(|&(i, j)| (i as usize, j as usize)).collect(),
                    a_exponent: *a,
                    w_exponent: *b,
                },
                c,
            )
        })
    }

    /// Coefficients in the basis of admissible monomials of `degree`
    /// carrying no `a`, in [`basis_enumerate`] order.
    pub fn coordinates(&self, degree: usize) -> Result<Vec<Int>> {
        let basis = basis_enumerate(self.params.k, degree)?;
        Ok(basis
            .iter()
            .map(|m| {
                let w: Vec<Gen> = m.factors.iter().map(|&(i, j)| (i as u8, j as u8)).collect();
                self.terms.get(&(w, 0, 0)).cloned().unwrap_or_default()
            })
            .collect())
    }

    fn check(&self, other: &RingElement) -> Result<()> {
        if self.params != other.params {
            return Err(Error::Other(format!("mismatched rings {:?} and {:?}", self.params, other.params)));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> RingElement {
        self.scale(&Int::from(-1))
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: &Int) -> RingElement {
        Self::from_terms(self.params, self.terms.iter().map(|(k, c)| (k.clone(), c * n)))
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.mul_with(other, Strategy::Leftmost)
    }

    pub fn mul_with(&self, other: &RingElement, st: Strategy) -> Result<RingElement> {
        self.check(other)?;
        let mut words = BTreeMap::new();
        for ((w1, a1, b1), c1) in &self.terms {
            for ((w2, a2, b2), c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                *words.entry((w, a1 + a2, b1 + b2)).or_insert_with(Int::zero) += c1 * c2;
            }
        }
        rewrite(self.params, words, st)
    }

    /// Maps `ω_ij ↦ e_ij` and `a ↦ 1` into functions on `Σ_k` with values
    /// in `Z/d`.
    pub fn vg_specialize(&self) -> Result<SigmaFunction> {
        let p = self.params;
        if p.d_w.is_some() {
            return Err(Error::Other("specialization needs the unextended ring".into()));
        }
        let mut out = SigmaFunction::constant(p.k, 0, p.d)?;
        for ((w, _, _), c) in &self.terms {
            let mut f = SigmaFunction::constant(p.k, 1, p.d)?;
            for &(i, j) in w {
                f = f.mul(&heaviside(p.k, i as usize, j as usize, p.d)?)?;
            }
            out = out.add(&f.scale(c))?;
        }
        Ok(out)
    }
}

impl fmt::Display for RingElement {
    /// Prints in the syntax accepted by [`reduce`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms().enumerate() {
            let mag = c.abs();
            let sep = match (n, c.is_negative()) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            write!(f, "{sep}")?;
            let body = m.to_string();
            if mag.is_one() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{body}")?;
            }
        }
        Ok(())
    }
}

enum Redex {
    Square,
    Swap,
    Arnold,
}

fn redex_at(w: &[Gen], p: usize) -> Option<Redex> {
    let (x, y) = (w[p], w[p + 1]);
    if x == y {
        Some(Redex::Square)
    } else if col_order(&x) > col_order(&y) {
        Some(Redex::Swap)
    } else if x.1 == y.1 {
        Some(Redex::Arnold)
    } else {
        None
    }
}

fn find_redex(w: &[Gen], st: Strategy) -> Option<(usize, Redex)> {
    let n = w.len().saturating_sub(1);
    match st {
        Strategy::Leftmost => (0..n).find_map(|p| redex_at(w, p).map(|r| (p, r))),
        Strategy::Rightmost => (0..n).rev().find_map(|p| redex_at(w, p).map(|r| (p, r))),
    }
}

fn rewrite(p: RingParams, words: BTreeMap<Key, Int>, st: Strategy) -> Result<RingElement> {
    let mut out = RingElement::zero(p);
    let mut pending = words;
    let mut steps = 0usize;
    while !pending.is_empty() {
        let mut next: BTreeMap<Key, Int> = BTreeMap::new();
        let mut push = |k: Key, c: Int| {
            *next.entry(k).or_insert_with(Int::zero) += c;
        };
        for ((w, a, b), c) in pending {
            let c = p.normalize(&c, a, b);
            if c.is_zero() {
                continue;
            }
            steps += 1;
            if steps > STEP_CAP {
                return Err(Error::Cap(format!("rewriting exceeded {STEP_CAP} steps")));
            }
            let Some((i, r)) = find_redex(&w, st) else {
                out.add_term((w, a, b), c);
                continue;
            };
            let (x, y) = (w[i], w[i + 1]);
            let with = |mid: &[Gen]| {
                let mut v = w[..i].to_vec();
                v.extend_from_slice(mid);
                v.extend_from_slice(&w[i + 2..]);
                v
            };
            match r {
                Redex::Square => push((with(&[x]), a + 1, b), c),
                Redex::Swap => push((with(&[y, x]), a, b), c * p.eps()),
                Redex::Arnold => {
                    let (pp, q, r) = (x.0, y.0, x.1);
                    push((with(&[(pp, q), (q, r)]), a, b), c.clone());
                    push((with(&[(pp, q), (pp, r)]), a, b), -c.clone());
                    push((with(&[(pp, r)]), a + 1, b), c);
                }
            }
        }
        pending = next;
    }
    Ok(out)
}

fn ring_ops(st: Strategy) -> RingOps<RingElement> {
    RingOps {
        add: |x, y| x.add(y).expect("same ring"),
        neg: |x| x.neg(),
        mul: match st {
            Strategy::Leftmost => |x, y| x.mul_with(y, Strategy::Leftmost),
            Strategy::Rightmost => |x, y| x.mul_with(y, Strategy::Rightmost),
        },
    }
}

fn eval_in(p: RingParams, e: &Expr, atom: &mut dyn FnMut(&Expr) -> Result<RingElement>) -> Result<RingElement> {
    eval_in_with(p, e, atom, Strategy::Leftmost)
}

fn eval_in_with(p: RingParams, e: &Expr, atom: &mut dyn FnMut(&Expr) -> Result<RingElement>, st: Strategy) -> Result<RingElement> {
    let int = |n: &Int| RingElement::scalar(p, n.clone());
    let mut f = |x: &Expr| atom(x);
    e.eval(&int, &mut f, &ring_ops(st))
}

fn standard_atom(p: RingParams) -> impl FnMut(&Expr) -> Result<RingElement> {
    move |x: &Expr| match x {
        Expr::Gen(n, i, j) if n == "w" => RingElement::generator(p, *i, *j),
        Expr::Sym(n) if n == "a" => Ok(RingElement::a(p)),
        Expr::Sym(n) if n == "b" => RingElement::b(p),
        other => Err(Error::Parse(format!("unknown symbol {other:?}; expected w(i,j) or a"))),
    }
}

/// Parses and reduces a word such as `w(1,2)*w(2,1) + a*w(1,3)`.
pub fn reduce(p: RingParams, s: &str) -> Result<RingElement> {
    reduce_expr(p, &expr::parse(s)?)
}

pub fn reduce_expr(p: RingParams, e: &Expr) -> Result<RingElement> {
    eval_in(p, e, &mut standard_atom(p))
}

pub fn reduce_expr_with(p: RingParams, e: &Expr, st: Strategy) -> Result<RingElement> {
    eval_in_with(p, e, &mut standard_atom(p), st)
}

/// Reduces a formal word of generators (any orientation) with the given
/// redex order, without reducing intermediate products.
pub fn reduce_word(p: RingParams, word: &[(usize, usize)], st: Strategy) -> Result<RingElement> {
    let mut words: BTreeMap<Key, Int> = BTreeMap::new();
    words.insert((vec![], 0, 0), Int::one());
    for &(i, j) in word {
        let g = RingElement::generator(p, i, j)?;
        let mut next = BTreeMap::new();
        for ((w, a, b), c) in &words {
            for ((w2, a2, b2), c2) in &g.terms {
                let mut v = w.clone();
                v.extend_from_slice(w2);
                *next.entry((v, a + a2, b + b2)).or_insert_with(Int::zero) += c * c2;
            }
        }
        words = next;
    }
    rewrite(p, words, st)
}

/// Whether leftmost and rightmost rewriting agree on every word.
pub fn confluence_audit(p: RingParams, words: &[Vec<(usize, usize)>]) -> Result<bool> {
    for w in words {
        if reduce_word(p, w, Strategy::Leftmost)? != reduce_word(p, w, Strategy::Rightmost)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Admissible monomials of degree `j`: one optional row `i < c` per column `c`.
pub fn basis_enumerate(k: usize, j: usize) -> Result<Vec<OmegaMonomial>> {
    if k == 0 || k > MAX_K || j >= k {
        return Err(Error::Range(format!("degree {j} with k = {k}")));
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(c: usize, k: usize, left: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<OmegaMonomial>) {
        if left == 0 {
            out.push(OmegaMonomial { factors: cur.clone(), a_exponent: 0, w_exponent: 0 });
            return;
        }
        if c > k || k - c + 1 < left {
            return;
        }
        for i in 1..c {
            cur.push((i, c));
            go(c + 1, k, left - 1, cur, out);
            cur.pop();
        }
        go(c + 1, k, left, cur, out);
    }
    go(2, k, j, &mut cur, &mut out);
    out.sort_by(|x, y| {
        let key = |m: &OmegaMonomial| m.factors.iter().map(|&(i, j)| (j, i)).collect::<Vec<_>>();
        key(x).cmp(&key(y))
    });
    Ok(out)
}

/// The forgetful map to singular cohomology: kills `a` (and `a_W`), landing
/// in the classical ring, which is the `d = 1` slice.
pub fn forgetful_classical(x: &RingElement) -> RingElement {
    let p = x.params;
    let q = RingParams { k: p.k, parity: p.parity, d: 1, d_w: None };
    RingElement::from_terms(q, x.terms.iter().filter(|((_, a, b), _)| *a == 0 && *b == 0).map(|(k, c)| (k.clone(), c.clone())))
}

/// Restriction along the inclusion `V ⊆ V ⊕ W`.
///
/// Sends `ω_ij(V⊕W) ↦ a_W·ω_ij(V)` and `a_{V⊕W-1} ↦ a_{V-1}·a_W`; in the
/// target `a_W` is the symbol `b`.
#[derive(Clone, Copy, Debug)]
pub struct Restriction {
    pub source: RingParams,
    pub target: RingParams,
}

impl Restriction {
    pub fn new(g: &GroupSpec, v: &Representation, w: &Representation, k: usize) -> Result<Restriction> {
        if w.is_zero() {
            return Err(Error::ZeroRepresentation);
        }
        let source = RingParams::for_rep(g, &v.add(w), k)?;
        let mut target = RingParams::for_rep(g, v, k)?;
        target.d_w = Some(g.d(w)? as u64);
        Ok(Restriction { source, target })
    }

    pub fn apply(&self, x: &RingElement) -> Result<RingElement> {
        if x.params != self.source {
            return Err(Error::Other("element is not in the source ring".into()));
        }
        let t = self.target;
        Ok(RingElement::from_terms(
            t,
            x.terms.iter().map(|((w, a, b), c)| ((w.clone(), *a, b + a + w.len() as u32), c.clone())),
        ))
    }

    /// Applies the restriction to an unreduced expression over `V ⊕ W`,
    /// generator by generator.
    pub fn apply_expr(&self, e: &Expr) -> Result<RingElement> {
        let t = self.target;
        let b = RingElement::b(t)?;
        let s_src = self.source.parity.s();
        let mut atom = |x: &Expr| -> Result<RingElement> {
            match x {
                Expr::Gen(n, i, j) if n == "w" => {
                    let (lo, hi) = ((*i).min(*j), (*i).max(*j));
                    let up = b.mul(&RingElement::generator(t, lo, hi)?)?;
                    if i < j {
                        return Ok(up);
                    }
                    // the source relation ω_ji = s·ω_ij + a_{V⊕W-1}
                    up.scale(&Int::from(s_src)).add(&RingElement::a(t).mul(&b)?)
                }
                Expr::Sym(n) if n == "a" => RingElement::a(t).mul(&b),
                other => Err(Error::Parse(format!("unknown symbol {other:?}"))),
            }
        };
        if let Expr::Gen(_, i, j) = e {
            if *i == *j || *i == 0 || *j == 0 || *i > t.k || *j > t.k {
                return Err(Error::Range(format!("ω_{i}{j} with k = {}", t.k)));
            }
        }
        eval_in(t, e, &mut atom)
    }
}

pub fn restrict_to_subrep(g: &GroupSpec, v: &Representation, w: &Representation, x: &RingElement) -> Result<RingElement> {
    Restriction::new(g, v, w, x.params.k)?.apply(x)
}

pub const MAX_ARRANGEMENT_K: usize = 7;

/// Checks that every intersection of at most `r_max` diagonals `x_i = x_j`
/// is a copy of `V^s` with `s ≥ k - r`, where `s` is the number of blocks of
/// the set partition generated by the chosen pairs.
pub fn diagonal_arrangement_check(k: usize, r_max: usize) -> Result<bool> {
    if k > MAX_ARRANGEMENT_K {
        return Err(Error::Cap(format!("k = {k} exceeds {MAX_ARRANGEMENT_K}")));
    }
    let pairs: Vec<(usize, usize)> = (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect();
    let r_max = r_max.min(pairs.len());
    fn go(start: usize, pairs: &[(usize, usize)], k: usize, r_max: usize, chosen: &mut Vec<(usize, usize)>) -> bool {
        if diagonal_blocks(k, chosen).unwrap() + chosen.len() < k {
            return false;
        }
        if chosen.len() == r_max {
            return true;
        }
        (start..pairs.len()).all(|t| {
            chosen.push(pairs[t]);
            let ok = go(t + 1, pairs, k, r_max, chosen);
            chosen.pop();
            ok
        })
    }
    Ok(go(0, &pairs, k, r_max, &mut Vec::new()))
}

/// Block count of the partition generated by diagonal pairs (1-based).
pub fn diagonal_blocks(k: usize, pairs: &[(usize, usize)]) -> Result<usize> {
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut n = k;
    for &(i, j) in pairs {
        if i == 0 || j == 0 || i > k || j > k || i == j {
            return Err(Error::Range(format!("diagonal ({i},{j}) with k = {k}")));
        }
        let (a, b) = (find(&mut parent, i - 1), find(&mut parent, j - 1));
        if a != b {
            parent[a] = b;
            n -= 1;
        }
    }
    Ok(n)
}
