//! The RO(G)-graded cohomology `M = H^★(pt; Z)` of a point, top level only.
//!
//! Groups with a chart table (`C_2`, `C_p`, `C_{p²}`, `C_4`, `Σ_3`) are
//! described by generator families whose degrees are affine in integer
//! parameters, plus rules for multiplying by the Euler class of one
//! irreducible. Every other catalogued group gets only what holds for all
//! finite groups: `M^0 = Z`, `M^W = Z/d(W)` on `a_W`, and cone vanishing.
//! Anything else is reported as unsupported rather than guessed.
//!
//! Chart tables are JSON (see `data/*.json`):
//!
//! ```text
//! { group, basis: [irreducible labels], region: "all" | "regular",
//!   families: [{ name, label: {form, coeff?, factors: [[symbol, exponent]]},
//!                params: [{name, min, max?}], degree: [affine per basis entry],
//!                order: int | "p" | "p^2", provenance }],
//!   rules: [{ family, irr, when?: {param: [min, max?]}, target,
//!             map: {target param: affine}, coeff?: int | "p" | "p^2" }] }
//! ```
//!
//! Affine expressions are strings such as `"1+2*r-s"`. The first rule whose
//! `when` box matches decides a product; no matching rule, or a target
//! outside its family, means the product is zero.

use crate::error::{Error, Result};
use crate::group_rep::{GroupKind, GroupSpec, IrrKind, Representation};
use crate::linalg::{invariant_factors, smith, to_i64, AbHom, Int, IntMatrix};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

/// An element of RO(G): integer coefficients over the ordered irreducible
/// basis of the group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degree {
    pub coeffs: Vec<i64>,
}

impl Degree {
    pub fn zero(g: &GroupSpec) -> Degree {
        Degree { coeffs: vec![0; g.rank()] }
    }

    /// `n·1`.
    pub fn trivial(g: &GroupSpec, n: i64) -> Degree {
        let mut d = Degree::zero(g);
        d.coeffs[trivial_index(g)] = n;
        d
    }

    pub fn from_rep(v: &Representation) -> Degree {
        Degree { coeffs: v.mult.iter().map(|&m| m as i64).collect() }
    }

    pub fn add(&self, o: &Degree) -> Degree {
        Degree { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Degree) -> Degree {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Degree {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Degree {
        Degree { coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn plus_rep(&self, v: &Representation) -> Degree {
        self.add(&Degree::from_rep(v))
    }

    pub fn minus_rep(&self, v: &Representation) -> Degree {
        self.sub(&Degree::from_rep(v))
    }

    /// The virtual dimension `|α|`.
    pub fn rank(&self, g: &GroupSpec) -> i64 {
        self.coeffs.iter().zip(g.irreducible_dims()).map(|(c, d)| c * d).sum()
    }

    /// The coefficient of the trivial representation.
    pub fn trivial_part(&self, g: &GroupSpec) -> i64 {
        self.coeffs[trivial_index(g)]
    }

    /// `Some(V)` when `α` is an honest representation.
    pub fn as_rep(&self) -> Option<Representation> {
        self.coeffs
            .iter()
            .map(|&c| u32::try_from(c).ok())
            .collect::<Option<Vec<u32>>>()
            .map(|mult| Representation { mult })
    }

    /// Parses signed sums such as `"2-lambda(1)+3*sigma"`.
    pub fn parse(g: &GroupSpec, s: &str) -> Result<Degree> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty degree".into()));
        }
        let mut out = Degree::zero(g);
        let mut depth = 0i32;
        let mut start = 0;
        let mut sign = 1;
        let bytes: Vec<char> = s.chars().collect();
        let flush = |from: usize, to: usize, sign: i64, out: &mut Degree| -> Result<()> {
            let term: String = bytes[from..to].iter().collect();
            if term.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            let r = g.parse_rep(&term)?;
            *out = out.add(&Degree::from_rep(&r).scale(sign));
            Ok(())
        };
        for (i, &c) in bytes.iter().enumerate() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 => {
                    if i > start {
                        flush(start, i, sign, &mut out)?;
                    } else if i > 0 {
                        return Err(Error::Parse(format!("dangling sign in {s:?}")));
                    }
                    sign = if c == '-' { -1 } else { 1 };
                    start = i + 1;
                }
                _ => {}
            }
        }
        flush(start, bytes.len(), sign, &mut out)?;
        Ok(out)
    }

    pub fn format(&self, g: &GroupSpec) -> String {
        let mut s = String::new();
        for (c, irr) in self.coeffs.iter().zip(&g.irreducibles) {
            if *c == 0 {
                continue;
            }
            let body = match (c.abs(), irr.kind) {
                (a, IrrKind::Trivial) => a.to_string(),
                (1, _) => irr.label.clone(),
                (a, _) => format!("{a}*{}", irr.label),
            };
            if *c < 0 {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            s.push_str(&body);
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }
}

fn trivial_index(g: &GroupSpec) -> usize {
    g.irreducible_index(IrrKind::Trivial).expect("every group has a trivial irreducible")
}

/// One cyclic summand; order 0 stands for `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub order: u64,
    pub label: String,
}

/// A finitely generated abelian group as a list of labelled cyclic summands.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GradedGroup {
    pub summands: Vec<Summand>,
}

impl GradedGroup {
    pub fn from_orders(orders: &[u64], prefix: &str) -> GradedGroup {
        GradedGroup {
            summands: orders
                .iter()
                .filter(|&&o| o != 1)
                .enumerate()
                .map(|(i, &o)| Summand { order: o, label: format!("{prefix}{i}") })
                .collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn orders(&self) -> Vec<u64> {
        self.summands.iter().map(|s| s.order).collect()
    }

    /// Isomorphism type: invariant factors, finite ones first, `0` for `Z`.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let o: Vec<Int> = self.summands.iter().map(|s| Int::from(s.order)).collect();
        invariant_factors(&o).iter().map(crate::linalg::to_u64).collect()
    }

    pub fn free_rank(&self) -> usize {
        self.summands.iter().filter(|s| s.order == 0).count()
    }

    /// Cardinality, or `None` for an infinite group.
    pub fn cardinality(&self) -> Option<BigUint> {
        self.summands.iter().try_fold(BigUint::from(1u32), |acc, s| (s.order != 0).then(|| acc * s.order))
    }

    pub fn isomorphic(&self, other: &GradedGroup) -> bool {
        self.invariant_factors() == other.invariant_factors()
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| if s.order == 0 { "Z".to_string() } else { format!("Z/{}", s.order) })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

// ---------------------------------------------------------------------------
// Chart file schema.

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Token {
    Int(i64),
    Sym(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelForm {
    /// A monomial `x`.
    Mono,
    /// `c/x`.
    Frac,
    /// `Σ¹(1/x)`.
    Susp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSpec {
    pub form: LabelForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff: Option<String>,
    pub factors: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub min: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: String,
    pub label: LabelSpec,
    pub params: Vec<ParamSpec>,
    pub degree: Vec<String>,
    pub order: Token,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub family: String,
    pub irr: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub when: BTreeMap<String, Vec<i64>>,
    pub target: String,
    pub map: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff: Option<Token>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub group: String,
    pub basis: Vec<String>,
    pub region: String,
    pub families: Vec<FamilySpec>,
    #[serde(default)]
    pub rules: Vec<RuleSpec>,
}

impl ChartSpec {
    pub fn from_json(s: &str) -> Result<ChartSpec> {
        serde_json::from_str(s).map_err(|e| Error::Chart(format!("malformed chart table: {e}")))
    }
}

// ---------------------------------------------------------------------------
// Compiled charts.

#[derive(Clone, Debug, PartialEq, Eq)]
struct Affine {
    c: i64,
    lin: Vec<i64>,
}

impl Affine {
    fn eval(&self, x: &[i64]) -> i64 {
        self.c + self.lin.iter().zip(x).map(|(a, b)| a * b).sum::<i64>()
    }
}

fn parse_affine(s: &str, params: &[String]) -> Result<Affine> {
    let bad = || Error::Chart(format!("bad affine expression {s:?}"));
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad());
    }
    let mut out = Affine { c: 0, lin: vec![0; params.len()] };
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => (-1, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let (k, name) = match term.split_once('*') {
            Some((k, n)) => (k.parse::<i64>().map_err(|_| bad())?, Some(n)),
            None => match term.parse::<i64>() {
                Ok(k) => (k, None),
                Err(_) => (1, Some(term)),
            },
        };
        match name {
            None => out.c += sign * k,
            Some(n) => {
                let i = params.iter().position(|p| p == n).ok_or_else(bad)?;
                out.lin[i] += sign * k;
            }
        }
    }
    Ok(out)
}

fn eval_token(t: &Token, p: Option<u64>) -> Result<i64> {
    match t {
        Token::Int(k) => Ok(*k),
        Token::Sym(s) => eval_symbol(s, p),
    }
}

fn eval_symbol(s: &str, p: Option<u64>) -> Result<i64> {
    if let Ok(k) = s.parse::<i64>() {
        return Ok(k);
    }
    let p = p.ok_or_else(|| Error::Chart(format!("token {s:?} needs a prime")))? as i64;
    match s {
        "p" => Ok(p),
        "p^2" => Ok(p * p),
        _ => Err(Error::Chart(format!("unknown order token {s:?}"))),
    }
}

/// A compiled generator family.
#[derive(Clone, Debug)]
pub struct Family {
    pub name: String,
    pub params: Vec<ParamSpec>,
    /// Cyclic order of every instance; 0 for `Z`.
    pub order: u64,
    pub provenance: String,
    form: LabelForm,
    label_coeff: i64,
    factors: Vec<(String, Affine)>,
    degree: Vec<Affine>,
    // Smith data of the linear part: u·A·v = diag
    su: Vec<Vec<i64>>,
    sdiag: Vec<i64>,
    sv: Vec<Vec<i64>>,
}

impl Family {
    fn in_box(&self, x: &[i64]) -> bool {
        self.params.iter().zip(x).all(|(p, &v)| v >= p.min && p.max.is_none_or(|m| v <= m))
    }

    fn degree_of(&self, x: &[i64]) -> Vec<i64> {
        self.degree.iter().map(|a| a.eval(x)).collect()
    }

    /// The unique parameter vector with the given degree, if integral.
    fn solve(&self, target: &[i64]) -> Option<Vec<i64>> {
        let b: Vec<i64> = target.iter().zip(&self.degree).map(|(t, a)| t - a.c).collect();
        let ub: Vec<i64> = self.su.iter().map(|row| row.iter().zip(&b).map(|(x, y)| x * y).sum()).collect();
        let n = self.params.len();
        let mut y = vec![0i64; n];
        for (i, &v) in ub.iter().enumerate() {
            let d = self.sdiag.get(i).copied().unwrap_or(0);
            if d == 0 {
                if v != 0 {
                    return None;
                }
            } else {
                if v % d != 0 {
                    return None;
                }
                y[i] = v / d;
            }
        }
        Some(self.sv.iter().map(|row| row.iter().zip(&y).map(|(a, b)| a * b).sum()).collect())
    }

    fn label(&self, x: &[i64]) -> String {
        let mut parts = Vec::new();
        for (sym, e) in &self.factors {
            match e.eval(x) {
                0 => {}
                1 => parts.push(sym.clone()),
                k => parts.push(format!("{sym}^{k}")),
            }
        }
        let mono = if parts.is_empty() { "1".to_string() } else { parts.join("·") };
        let wrapped = if parts.len() > 1 { format!("({mono})") } else { mono.clone() };
        match self.form {
            LabelForm::Mono if self.label_coeff == 1 => mono,
            LabelForm::Mono => format!("{}{}", self.label_coeff, wrapped),
            LabelForm::Frac => format!("{}/{}", self.label_coeff, wrapped),
            LabelForm::Susp => format!("Σ¹(1/{wrapped})"),
        }
    }

    /// The image under erasing `a`-classes and setting `u`-classes to 1.
    fn psi(&self) -> i64 {
        match (self.order, &self.form) {
            (0, LabelForm::Frac) => self.label_coeff,
            (0, LabelForm::Mono) => self.label_coeff,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug)]
struct Rule {
    family: usize,
    coord: usize,
    when: Vec<(usize, i64, Option<i64>)>,
    target: usize,
    map: Vec<Affine>,
    coeff: i64,
}

/// A chart compiled for a specific group.
#[derive(Clone, Debug)]
pub struct Chart {
    pub key: String,
    pub families: Vec<Family>,
    /// Group irreducible index of each chart coordinate.
    pub basis: Vec<usize>,
    coord_of: Vec<Option<usize>>,
    trivial_coord: usize,
    regular: bool,
    rules: Vec<Rule>,
}

/// A family member: family index and parameter values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instance {
    pub family: usize,
    pub params: Vec<i64>,
}

impl Chart {
    pub fn compile(spec: &ChartSpec, g: &GroupSpec, p: Option<u64>) -> Result<Chart> {
        let err = |m: String| Error::Chart(format!("{}: {m}", spec.group));
        let resolve = |label: &str| -> Result<usize> {
            let l = match p {
                Some(p) => label.replace("(p)", &format!("({p})")),
                None => label.to_string(),
            };
            g.irreducibles
                .iter()
                .position(|i| i.label == l)
                .ok_or_else(|| err(format!("basis entry {label:?} is not an irreducible of {}", g.name())))
        };
        let basis: Vec<usize> = spec.basis.iter().map(|b| resolve(b)).collect::<Result<_>>()?;
        let mut coord_of = vec![None; g.rank()];
        for (c, &i) in basis.iter().enumerate() {
            if coord_of[i].replace(c).is_some() {
                return Err(err("repeated basis entry".into()));
            }
        }
        let trivial_coord = coord_of[trivial_index(g)].ok_or_else(|| err("basis lacks the trivial irreducible".into()))?;
        let regular = match spec.region.as_str() {
            "all" => false,
            "regular" => true,
            r => return Err(err(format!("unknown region {r:?}"))),
        };
        let mut families = Vec::new();
        for f in &spec.families {
            let names: Vec<String> = f.params.iter().map(|q| q.name.clone()).collect();
            if f.degree.len() != basis.len() {
                return Err(err(format!("family {} has {} degree entries for {} basis entries", f.name, f.degree.len(), basis.len())));
            }
            let degree: Vec<Affine> = f.degree.iter().map(|d| parse_affine(d, &names)).collect::<Result<_>>()?;
            let a = IntMatrix::from_fn(basis.len(), names.len(), |r, c| Int::from(degree[r].lin[c]));
            let s = smith(&a);
            if s.rank() != names.len() {
                return Err(err(format!("family {} has a non-injective degree map", f.name)));
            }
            let order = eval_token(&f.order, p)?;
            if order < 0 || order == 1 {
                return Err(err(format!("family {} has order {order}", f.name)));
            }
            let label_coeff = match &f.label.coeff {
                Some(c) => eval_symbol(c, p)?,
                None => 1,
            };
            let factors = f
                .label
                .factors
                .iter()
                .map(|(sym, e)| Ok((sym.clone(), parse_affine(e, &names)?)))
                .collect::<Result<_>>()?;
            let to_rows = |m: &IntMatrix| -> Vec<Vec<i64>> {
                (0..m.rows()).map(|r| m.row(r).iter().map(to_i64).collect()).collect()
            };
            families.push(Family {
                name: f.name.clone(),
                params: f.params.clone(),
                order: order as u64,
                provenance: f.provenance.clone(),
                form: f.label.form.clone(),
                label_coeff,
                factors,
                degree,
                su: to_rows(&s.u),
                sdiag: s.diag.iter().map(to_i64).collect(),
                sv: to_rows(&s.v),
            });
        }
        let fam_index = |n: &str| families.iter().position(|f| f.name == n).ok_or_else(|| err(format!("unknown family {n:?}")));
        let mut rules = Vec::new();
        for r in &spec.rules {
            let fi = fam_index(&r.family)?;
            let ti = fam_index(&r.target)?;
            let coord = coord_of[resolve(&r.irr)?].ok_or_else(|| err(format!("rule irreducible {} not in basis", r.irr)))?;
            if coord == trivial_coord {
                return Err(err("rules for the trivial irreducible are not allowed (a_1 = 0)".into()));
            }
            let src = &families[fi];
            let tgt = &families[ti];
            let src_names: Vec<String> = src.params.iter().map(|q| q.name.clone()).collect();
            let mut when = Vec::new();
            for (k, b) in &r.when {
                let i = src_names.iter().position(|n| n == k).ok_or_else(|| err(format!("rule condition on unknown parameter {k}")))?;
                match b.as_slice() {
                    [lo] => when.push((i, *lo, None)),
                    [lo, hi] => when.push((i, *lo, Some(*hi))),
                    _ => return Err(err("a condition is [min] or [min, max]".into())),
                }
            }
            let mut map = Vec::new();
            for q in &tgt.params {
                let e = r.map.get(&q.name).ok_or_else(|| err(format!("rule into {} misses parameter {}", tgt.name, q.name)))?;
                map.push(parse_affine(e, &src_names)?);
            }
            if r.map.len() != tgt.params.len() {
                return Err(err(format!("rule into {} maps unknown parameters", tgt.name)));
            }
            // deg_T(map(x)) = deg_S(x) + e_coord for all x in the rule's box
            for (row, (dt, ds)) in tgt.degree.iter().zip(&src.degree).enumerate() {
                let mut c = dt.c;
                let mut lin = vec![0i64; src_names.len()];
                for (k, m) in map.iter().enumerate() {
                    c += dt.lin[k] * m.c;
                    for (j, l) in lin.iter_mut().enumerate() {
                        *l += dt.lin[k] * m.lin[j];
                    }
                }
                let mut c = c - ds.c - i64::from(row == coord);
                for (j, l) in lin.iter_mut().enumerate() {
                    *l -= ds.lin[j];
                    if let Some(&(_, lo, Some(hi))) = when.iter().find(|w| w.0 == j) {
                        if lo == hi {
                            c += *l * lo;
                            *l = 0;
                        }
                    }
                }
                if c != 0 || lin.iter().any(|&l| l != 0) {
                    return Err(err(format!("rule {} -> {} under {} has inconsistent degrees", src.name, tgt.name, r.irr)));
                }
            }
            let coeff = match &r.coeff {
                Some(t) => eval_token(t, p)?,
                None => 1,
            };
            let well_defined = match (src.order as i64, tgt.order as i64) {
                (0, _) => true,
                (_, 0) => coeff == 0,
                (a, b) => (coeff * a) % b == 0,
            };
            if !well_defined {
                return Err(err(format!("rule {} -> {} under {} is not well defined on Z/{}", src.name, tgt.name, r.irr, src.order)));
            }
            rules.push(Rule { family: fi, coord, when, target: ti, map, coeff });
        }
        Ok(Chart { key: spec.group.clone(), families, basis, coord_of, trivial_coord, regular, rules })
    }

    /// Chart coordinates of a (normalized) degree, or `None` if it involves
    /// irreducibles outside the chart basis.
    pub fn coordinates(&self, alpha: &Degree) -> Option<Vec<i64>> {
        let mut out = vec![0; self.basis.len()];
        for (i, &c) in alpha.coeffs.iter().enumerate() {
            match self.coord_of[i] {
                Some(k) => out[k] = c,
                None if c != 0 => return None,
                None => {}
            }
        }
        Some(out)
    }

    pub fn in_region(&self, x: &[i64]) -> bool {
        if !self.regular {
            return true;
        }
        let nt = x.iter().enumerate().filter(|(i, _)| *i != self.trivial_coord).map(|(_, v)| *v);
        nt.clone().all(|v| v >= 0) || nt.into_iter().all(|v| v <= 0)
    }

    fn valid(&self, inst: &Instance) -> bool {
        let f = &self.families[inst.family];
        f.in_box(&inst.params) && self.in_region(&f.degree_of(&inst.params))
    }

    /// All family instances in chart degree `x`, which must be in the region.
    pub fn instances(&self, x: &[i64]) -> Vec<Instance> {
        let mut out = Vec::new();
        for (fi, f) in self.families.iter().enumerate() {
            if let Some(params) = f.solve(x) {
                let inst = Instance { family: fi, params };
                if self.valid(&inst) {
                    out.push(inst);
                }
            }
        }
        out
    }

    pub fn degree_of(&self, inst: &Instance) -> Vec<i64> {
        self.families[inst.family].degree_of(&inst.params)
    }

    pub fn label(&self, inst: &Instance) -> String {
        self.families[inst.family].label(&inst.params)
    }

    /// `a_irr · inst` for the irreducible at chart coordinate `coord`.
    pub fn multiply(&self, inst: &Instance, coord: usize) -> Option<(i64, Instance)> {
        if coord == self.trivial_coord {
            return None;
        }
        let rule = self.rules.iter().find(|r| {
            r.family == inst.family
                && r.coord == coord
                && r.when.iter().all(|&(i, lo, hi)| inst.params[i] >= lo && hi.is_none_or(|h| inst.params[i] <= h))
        })?;
        let target = Instance { family: rule.target, params: rule.map.iter().map(|a| a.eval(&inst.params)).collect() };
        self.valid(&target).then_some((rule.coeff, target))
    }
}

// ---------------------------------------------------------------------------
// Chart registry.

const BUILTIN: [&str; 5] = [
    include_str!("../data/c2.json"),
    include_str!("../data/cp.json"),
    include_str!("../data/cp2.json"),
    include_str!("../data/c4.json"),
    include_str!("../data/sigma3.json"),
];

/// A set of chart tables keyed by group pattern (`C2`, `Cp`, `Cp2`, `C4`,
/// `Sigma3`).
#[derive(Clone, Debug)]
pub struct ChartSet {
    pub charts: Vec<ChartSpec>,
}

impl ChartSet {
    pub fn builtin() -> &'static ChartSet {
        static SET: OnceLock<ChartSet> = OnceLock::new();
        SET.get_or_init(|| ChartSet {
            charts: BUILTIN.iter().map(|s| ChartSpec::from_json(s).expect("builtin chart table parses")).collect(),
        })
    }

    /// Builtin tables, overridden by the tables found at `path` (a JSON file
    /// or a directory of them).
    pub fn with_overrides(path: &Path) -> Result<ChartSet> {
        let mut files = Vec::new();
        if path.is_dir() {
            let mut entries: Vec<_> = std::fs::read_dir(path)
                .map_err(|e| Error::Chart(format!("{}: {e}", path.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(path.to_path_buf());
        }
        let mut set = ChartSet::builtin().clone();
        for f in files {
            let text = std::fs::read_to_string(&f).map_err(|e| Error::Chart(format!("{}: {e}", f.display())))?;
            let spec = ChartSpec::from_json(&text)?;
            set.charts.retain(|c| c.group != spec.group);
            set.charts.push(spec);
        }
        Ok(set)
    }

    /// The chart key and prime used for a group, if it is a charted one.
    pub fn key_for(g: &GroupSpec) -> Option<(&'static str, Option<u64>)> {
        match g.kind {
            GroupKind::Sigma3 => Some(("Sigma3", None)),
            GroupKind::Cyclic(2) => Some(("C2", Some(2))),
            GroupKind::Cyclic(4) => Some(("C4", Some(2))),
            GroupKind::Cyclic(_) => match g.prime_power()? {
                (p, 1) if p > 2 => Some(("Cp", Some(p as u64))),
                (p, 2) if p > 2 => Some(("Cp2", Some(p as u64))),
                _ => None,
            },
        }
    }

    pub fn chart_for(&self, g: &GroupSpec) -> Result<Option<Chart>> {
        let Some((key, p)) = Self::key_for(g) else { return Ok(None) };
        match self.charts.iter().find(|c| c.group == key) {
            Some(spec) => Chart::compile(spec, g, p).map(Some),
            None => Ok(None),
        }
    }
}

// ---------------------------------------------------------------------------
// Queries.

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum ClassKey {
    Chart(Instance),
    Unit,
    Euler,
}

/// A named generator of a cyclic summand of `M^α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Class {
    pub order: u64,
    pub label: String,
    /// Image under erasing `a`-classes and sending `u`-classes to 1.
    pub psi: i64,
    #[serde(skip)]
    key: ClassKey,
}

/// `M^★` for one group, backed by its chart or by the universal part.
#[derive(Clone, Debug)]
pub struct PointCohomology {
    spec: GroupSpec,
    chart: Option<Chart>,
}

impl PointCohomology {
    pub fn new(g: &GroupSpec) -> Result<PointCohomology> {
        Self::with_charts(g, ChartSet::builtin())
    }

    pub fn with_charts(g: &GroupSpec, set: &ChartSet) -> Result<PointCohomology> {
        Ok(PointCohomology { spec: g.clone(), chart: set.chart_for(g)? })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn chart(&self) -> Option<&Chart> {
        self.chart.as_ref()
    }

    fn unsupported(&self, alpha: &Degree) -> Error {
        Error::Unsupported(format!("{} in degree {}", self.spec.name(), alpha.format(&self.spec)))
    }

    fn chart_coords(&self, chart: &Chart, alpha: &Degree) -> Result<Vec<i64>> {
        let n = normalize_degree(&self.spec, alpha);
        match chart.coordinates(&n) {
            Some(x) if chart.in_region(&x) => Ok(x),
            _ => Err(self.unsupported(alpha)),
        }
    }

    pub fn supports(&self, alpha: &Degree) -> bool {
        self.classes_at(alpha).is_ok()
    }

    /// Generators of `M^α`, one per cyclic summand.
    pub fn classes_at(&self, alpha: &Degree) -> Result<Vec<Class>> {
        if alpha.coeffs.len() != self.spec.rank() {
            return Err(Error::Parse(format!("degree has {} coefficients, {} expected", alpha.coeffs.len(), self.spec.rank())));
        }
        if let Some(chart) = &self.chart {
            let x = self.chart_coords(chart, alpha)?;
            return Ok(chart
                .instances(&x)
                .into_iter()
                .map(|inst| {
                    let f = &chart.families[inst.family];
                    Class { order: f.order, label: chart.label(&inst), psi: f.psi(), key: ClassKey::Chart(inst) }
                })
                .collect());
        }
        self.universal_classes(alpha)
    }

    fn universal_classes(&self, alpha: &Degree) -> Result<Vec<Class>> {
        let g = &self.spec;
        let ti = trivial_index(g);
        let t = alpha.coeffs[ti];
        let mut v = alpha.clone();
        v.coeffs[ti] = 0;
        let pos = v.coeffs.iter().all(|&c| c >= 0);
        let neg = v.coeffs.iter().all(|&c| c <= 0);
        if pos && neg {
            return Ok(if t == 0 { vec![Class { order: 0, label: "1".into(), psi: 1, key: ClassKey::Unit }] } else { vec![] });
        }
        if pos {
            let w = v.as_rep().expect("nonnegative");
            return match t {
                t if t > 0 => Ok(vec![]),
                0 => {
                    let d = g.d(&w)?;
                    Ok(if d == 1 {
                        vec![]
                    } else {
                        vec![Class { order: d as u64, label: format!("a_{{{}}}", g.format_rep(&w)), psi: 0, key: ClassKey::Euler }]
                    })
                }
                t if -t > g.dim(&w) as i64 => Ok(vec![]),
                _ => Err(self.unsupported(alpha)),
            };
        }
        if neg {
            let w = v.neg().as_rep().expect("nonnegative");
            return if t <= 1 || t > g.dim(&w) as i64 { Ok(vec![]) } else { Err(self.unsupported(alpha)) };
        }
        Err(self.unsupported(alpha))
    }

    pub fn group_at(&self, alpha: &Degree) -> Result<GradedGroup> {
        Ok(GradedGroup {
            summands: self.classes_at(alpha)?.into_iter().map(|c| Summand { order: c.order, label: c.label }).collect(),
        })
    }

    /// Multiplication by `a_W` from `M^α` to `M^{α+W}`.
    pub fn euler_mult(&self, alpha: &Degree, w: &Representation) -> Result<AbHom> {
        let src = self.classes_at(alpha)?;
        let beta = alpha.plus_rep(w);
        let tgt = self.classes_at(&beta)?;
        let orders = |c: &[Class]| c.iter().map(|x| Int::from(x.order)).collect::<Vec<_>>();
        let mut m = IntMatrix::zeros(tgt.len(), src.len());
        let kills = w.mult[trivial_index(&self.spec)] > 0;
        if !kills {
            for (j, s) in src.iter().enumerate() {
                if let Some((coeff, key)) = self.apply_euler(alpha, s, w)? {
                    let i = tgt
                        .iter()
                        .position(|t| t.key == key)
                        .ok_or_else(|| Error::Chart(format!("product of {} lands outside the listed classes", s.label)))?;
                    m[(i, j)] = Int::from(coeff);
                }
            }
        }
        Ok(AbHom::new(orders(&src), orders(&tgt), m))
    }

    fn apply_euler(&self, alpha: &Degree, s: &Class, w: &Representation) -> Result<Option<(i64, ClassKey)>> {
        match (&self.chart, &s.key) {
            (Some(chart), ClassKey::Chart(inst)) => {
                let x = self.chart_coords(chart, alpha)?;
                let wn = normalize_degree(&self.spec, &Degree::from_rep(w));
                let wx = chart.coordinates(&wn).ok_or_else(|| self.unsupported(&wn))?;
                // raise negative coordinates first so every step stays in the region
                let mut steps = Vec::new();
                for (c, (&a, &k)) in x.iter().zip(&wx).enumerate() {
                    let up = if a < 0 { k.min(-a) } else { 0 };
                    steps.extend(std::iter::repeat_n(c, up as usize));
                }
                for (c, (&a, &k)) in x.iter().zip(&wx).enumerate() {
                    let up = if a < 0 { k.min(-a) } else { 0 };
                    steps.extend(std::iter::repeat_n(c, (k - up) as usize));
                }
                let mut coeff = 1i64;
                let mut cur = inst.clone();
                for c in steps {
                    match chart.multiply(&cur, c) {
                        Some((k, next)) => {
                            coeff *= k;
                            cur = next;
                        }
                        None => return Ok(None),
                    }
                }
                Ok(Some((coeff, ClassKey::Chart(cur))))
            }
            (None, ClassKey::Unit) if !w.is_zero() => Ok(Some((1, ClassKey::Euler))),
            (None, ClassKey::Unit) => Ok(Some((1, ClassKey::Unit))),
            (None, ClassKey::Euler) => Ok(Some((1, ClassKey::Euler))),
            _ => Err(Error::Chart("class does not belong to this group's chart".into())),
        }
    }

    /// `ψ` on the basis of `M^α`.
    pub fn psi(&self, alpha: &Degree) -> Result<Vec<i64>> {
        Ok(self.classes_at(alpha)?.iter().map(|c| c.psi).collect())
    }
}

/// `M^α` as labelled cyclic summands.
pub fn group_at_degree(g: &GroupSpec, alpha: &Degree) -> Result<GradedGroup> {
    PointCohomology::new(g)?.group_at(alpha)
}

/// Matrix of multiplication by `a_W`: `M^α → M^{α+W}` in the class bases,
/// entries reduced modulo the target orders.
pub fn euler_mult_matrix(g: &GroupSpec, alpha: &Degree, w: &Representation) -> Result<IntMatrix> {
    Ok(PointCohomology::new(g)?.euler_mult(alpha, w)?.matrix)
}

/// For cyclic `p`-groups moves each `λ(k)` coefficient onto `λ(p^{v_p(k)})`.
/// Other groups are returned unchanged.
pub fn normalize_degree(g: &GroupSpec, alpha: &Degree) -> Degree {
    let Some((p, _)) = g.prime_power() else { return alpha.clone() };
    let mut out = Degree::zero(g);
    for (i, irr) in g.irreducibles.iter().enumerate() {
        let target = match irr.kind {
            IrrKind::Lambda(k) => {
                let mut q = 1;
                let mut k = k;
                while k % p == 0 {
                    k /= p;
                    q *= p;
                }
                g.irreducible_index(IrrKind::Lambda(q)).expect("λ(p^j) is canonical")
            }
            _ => i,
        };
        out.coeffs[target] += alpha.coeffs[i];
    }
    out
}
