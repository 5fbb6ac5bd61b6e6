//! Integer-valued functions on `Σ_k` generated by the Heaviside functions
//! `e_ij(σ) = [σ(i) > σ(j)]`, and the filtration by monomial degree.

use crate::error::{Error, Result};
use crate::expr::{self, Expr, RingOps};
use crate::linalg::{determinant, smith, Int, IntMatrix, Lattice};
use crate::stirling::stirling_c;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

pub const MAX_K: usize = 8;
pub const MAX_FILTRATION_K: usize = 6;

/// All permutations of `1..=k` in lexicographic one-line order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (1..=k).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaFunction {
    pub k: usize,
    /// Indexed by [`permutations`]`(k)`.
    pub values: Vec<Int>,
    /// 0 for integer values, otherwise values lie in `[0, modulus)`.
    pub modulus: u64,
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_K {
        return Err(Error::Range(format!("k = {k} must lie in 1..={MAX_K}")));
    }
    Ok(())
}

impl SigmaFunction {
    pub fn from_values(k: usize, values: Vec<Int>, modulus: u64) -> Result<SigmaFunction> {
        check_k(k)?;
        let n: usize = (1..=k).product();
        if values.len() != n {
            return Err(Error::Range(format!("{} values for {n} permutations", values.len())));
        }
        let mut f = SigmaFunction { k, values, modulus };
        f.normalize();
        Ok(f)
    }

    pub fn constant(k: usize, c: impl Into<Int>, modulus: u64) -> Result<SigmaFunction> {
        check_k(k)?;
        let c = c.into();
        let n: usize = (1..=k).product();
        Self::from_values(k, vec![c; n], modulus)
    }

    /// The indicator function of a single permutation.
    pub fn delta(sigma: &[usize]) -> Result<SigmaFunction> {
        let k = sigma.len();
        check_perm(sigma)?;
        let values = permutations(k).iter().map(|p| Int::from((p == sigma) as u8)).collect();
        Self::from_values(k, values, 0)
    }

    fn normalize(&mut self) {
        if self.modulus != 0 {
            let m = Int::from(self.modulus);
            for v in &mut self.values {
                *v = v.mod_floor(&m);
            }
        }
    }

    fn zip(&self, o: &SigmaFunction, f: impl Fn(&Int, &Int) -> Int) -> Result<SigmaFunction> {
        if self.k != o.k || self.modulus != o.modulus {
            return Err(Error::Other("functions on different Σ_k or moduli".into()));
        }
        let values = self.values.iter().zip(&o.values).map(|(x, y)| f(x, y)).collect();
        Self::from_values(self.k, values, self.modulus)
    }

    pub fn add(&self, o: &SigmaFunction) -> Result<SigmaFunction> {
        self.zip(o, |x, y| x + y)
    }

    pub fn sub(&self, o: &SigmaFunction) -> Result<SigmaFunction> {
        self.zip(o, |x, y| x - y)
    }

    pub fn mul(&self, o: &SigmaFunction) -> Result<SigmaFunction> {
        self.zip(o, |x, y| x * y)
    }

    pub fn scale(&self, c: &Int) -> SigmaFunction {
        let mut f = self.clone();
        for v in &mut f.values {
            *v *= c;
        }
        f.normalize();
        f
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn is_constant(&self, c: i64) -> bool {
        let m = SigmaFunction::constant(self.k, c, self.modulus).unwrap();
        m.values == self.values
    }

    pub fn at(&self, sigma: &[usize]) -> Option<&Int> {
        permutations(self.k).iter().position(|p| p == sigma).map(|i| &self.values[i])
    }
}

fn check_perm(sigma: &[usize]) -> Result<()> {
    check_k(sigma.len())?;
    let seen: BTreeSet<usize> = sigma.iter().copied().collect();
    if seen.len() != sigma.len() || seen.iter().any(|&x| x == 0 || x > sigma.len()) {
        return Err(Error::Range(format!("{sigma:?} is not a permutation")));
    }
    Ok(())
}

pub fn heaviside(k: usize, i: usize, j: usize, modulus: u64) -> Result<SigmaFunction> {
    check_k(k)?;
    if i == j || i == 0 || j == 0 || i > k || j > k {
        return Err(Error::Range(format!("e_{i}{j} with k = {k}")));
    }
    let values = permutations(k).iter().map(|p| Int::from((p[i - 1] > p[j - 1]) as u8)).collect();
    SigmaFunction::from_values(k, values, modulus)
}

fn ops() -> RingOps<SigmaFunction> {
    RingOps {
        add: |x, y| x.add(y).expect("same shape"),
        neg: |x| x.scale(&Int::from(-1)),
        mul: |x, y| x.mul(y),
    }
}

/// Evaluates a polynomial in `e(i,j)` such as `e(2,1)*e(3,2)*e(1,3)`.
pub fn eval_poly(s: &str, k: usize, modulus: u64) -> Result<SigmaFunction> {
    eval_expr(&expr::parse(s)?, k, modulus)
}

pub fn eval_expr(e: &Expr, k: usize, modulus: u64) -> Result<SigmaFunction> {
    check_k(k)?;
    let int = |n: &Int| SigmaFunction::constant(k, n.clone(), modulus).unwrap();
    let mut atom = |x: &Expr| match x {
        Expr::Gen(n, i, j) if n == "e" => heaviside(k, *i, *j, modulus),
        other => Err(Error::Parse(format!("unknown symbol {other:?}; expected e(i,j)"))),
    };
    e.eval(&int, &mut atom, &ops())
}

/// `P_σ = Π_{i<j} (e_ij if σ(i) > σ(j) else 1 - e_ij)`, with its symbolic form.
pub fn p_sigma(sigma: &[usize]) -> Result<(String, SigmaFunction)> {
    check_perm(sigma)?;
    let k = sigma.len();
    let mut f = SigmaFunction::constant(k, 1, 0)?;
    let mut parts = Vec::new();
    for i in 1..=k {
        for j in i + 1..=k {
            let e = heaviside(k, i, j, 0)?;
            if sigma[i - 1] > sigma[j - 1] {
                parts.push(format!("e({i},{j})"));
                f = f.mul(&e)?;
            } else {
                parts.push(format!("(1-e({i},{j}))"));
                f = f.mul(&SigmaFunction::constant(k, 1, 0)?.sub(&e)?)?;
            }
        }
    }
    let sym = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
    Ok((sym, f))
}

/// Determinant of the matrix whose rows are the `P_σ`.
pub fn delta_basis_determinant(k: usize) -> Result<Int> {
    let rows: Vec<Vec<Int>> = permutations(k).iter().map(|s| p_sigma(s).map(|(_, f)| f.values)).collect::<Result<_>>()?;
    let n = rows.len();
    Ok(determinant(&IntMatrix::from_fn(n, n, |i, j| rows[i][j].clone())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub k: usize,
    /// Rank of `F_r / F_{r-1}` for `r = 0..k-1`.
    pub ranks: Vec<usize>,
    /// Monomials of degree `r` that extend a basis of `F_{r-1}` to one of `F_r`.
    pub bases: Vec<Vec<String>>,
    /// Whether every `F_r` is saturated in `Z^{k!}`, so each quotient is free.
    pub saturated: bool,
    pub matches_stirling: bool,
}

impl FiltrationReport {
    pub fn total(&self) -> usize {
        self.ranks.iter().sum()
    }
}

fn pairs(k: usize) -> Vec<(usize, usize)> {
    (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect()
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for t in start..n {
            cur.push(t);
            go(t + 1, n, r, cur, out);
            cur.pop();
        }
    }
    go(0, n, r, &mut cur, &mut out);
    out
}

fn is_saturated(l: &Lattice) -> bool {
    l.rank() == 0 || smith(l.basis()).diag.iter().all(One::is_one)
}

/// Ranks of the filtration `F_r` = span of monomials in the `e_ij` with at
/// most `r` factors.
///
/// Since `e_ji = 1 - e_ij` and `e_ij² = e_ij`, square-free monomials in the
/// `e_ij` with `i < j` span the same `F_r`.
pub fn filtration_ranks(k: usize) -> Result<FiltrationReport> {
    check_k(k)?;
    if k > MAX_FILTRATION_K {
        return Err(Error::Cap(format!("filtration needs k ≤ {MAX_FILTRATION_K}")));
    }
    let ps = pairs(k);
    let e: Vec<SigmaFunction> = ps.iter().map(|&(i, j)| heaviside(k, i, j, 0)).collect::<Result<_>>()?;
    let dim: usize = (1..=k).product();
    let mut lat = Lattice::new(dim);
    let mut seen = BTreeSet::new();
    let (mut ranks, mut bases) = (Vec::new(), Vec::new());
    let mut saturated = true;
    for r in 0..k {
        let before = lat.rank();
        let mut basis = Vec::new();
        for s in subsets(ps.len(), r) {
            let mut f = SigmaFunction::constant(k, 1, 0)?;
            for &t in &s {
                f = f.mul(&e[t])?;
            }
            if f.is_zero() || !seen.insert(f.values.clone()) {
                continue;
            }
            let n = lat.rank();
            lat.extend(&[f.values]);
            if lat.rank() > n {
                let name: Vec<String> = s.iter().map(|&t| format!("e({},{})", ps[t].0, ps[t].1)).collect();
                basis.push(if name.is_empty() { "1".into() } else { name.join("*") });
            }
        }
        saturated &= is_saturated(&lat);
        ranks.push(lat.rank() - before);
        bases.push(basis);
    }
    let matches_stirling = ranks.iter().enumerate().all(|(r, &n)| stirling_c(k, k - r) == n.into());
    Ok(FiltrationReport { k, ranks, bases, saturated, matches_stirling })
}

/// Checks the homogenized relations in the Rees ring `Σ t^r F_r`:
///
/// ```text
/// (t e_ij)^2 = t·(t e_ij)
/// t e_ij + t e_ji = t·1
/// Σ_cyc (t e_ij)(t e_jk) = t·Σ_cyc (t e_ij) - t^2
/// ```
///
/// Elements are kept as `t`-graded lists of functions; each generator
/// `t e_ij` must lie in `t F_1`, and both sides of each relation must agree
/// in every `t`-degree.
pub fn rees_relations_check(k: usize) -> Result<bool> {
    check_k(k)?;
    type Rees = Vec<SigmaFunction>;
    let zero = SigmaFunction::constant(k, 0, 0)?;
    let one = SigmaFunction::constant(k, 1, 0)?;
    let mono = |r: usize, f: &SigmaFunction| -> Rees {
        let mut v = vec![zero.clone(); r + 1];
        v[r] = f.clone();
        v
    };
    let add = |x: &Rees, y: &Rees| -> Rees {
        let n = x.len().max(y.len());
        (0..n)
            .map(|i| {
                let a = x.get(i).unwrap_or(&zero);
                let b = y.get(i).unwrap_or(&zero);
                a.add(b).unwrap()
            })
            .collect()
    };
    let neg = |x: &Rees| -> Rees { x.iter().map(|f| f.scale(&Int::from(-1))).collect() };
    let mul = |x: &Rees, y: &Rees| -> Rees {
        let mut out = vec![zero.clone(); x.len() + y.len()];
        for (i, a) in x.iter().enumerate() {
            for (j, b) in y.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b).unwrap()).unwrap();
            }
        }
        out
    };
    let is_zero = |x: &Rees| x.iter().all(SigmaFunction::is_zero);
    let t = mono(1, &one);
    let f1 = Lattice::from_rows(one.values.len(), &std::iter::once(one.values.clone()).chain(pairs(k).iter().map(|&(i, j)| heaviside(k, i, j, 0).unwrap().values)).collect::<Vec<_>>());
    let te = |i: usize, j: usize| mono(1, &heaviside(k, i, j, 0).unwrap());
    for i in 1..=k {
        for j in 1..=k {
            if i == j {
                continue;
            }
            if !f1.contains(&heaviside(k, i, j, 0)?.values) {
                return Ok(false);
            }
            let x = te(i, j);
            if !is_zero(&add(&mul(&x, &x), &neg(&mul(&t, &x)))) {
                return Ok(false);
            }
            if !is_zero(&add(&add(&x, &te(j, i)), &neg(&t))) {
                return Ok(false);
            }
            for l in 1..=k {
                if l == i || l == j {
                    continue;
                }
                let (a, b, c) = (te(i, j), te(j, l), te(l, i));
                let lhs = add(&add(&mul(&a, &b), &mul(&b, &c)), &mul(&c, &a));
                let rhs = add(&mul(&t, &add(&add(&a, &b), &c)), &neg(&mul(&t, &t)));
                if !is_zero(&add(&lhs, &neg(&rhs))) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
