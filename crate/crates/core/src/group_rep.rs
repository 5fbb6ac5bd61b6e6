//! The group catalog: cyclic groups `C_n` (n ≥ 2) and the symmetric group
//! `Σ_3`, with subgroup lattices up to conjugacy, real irreducible
//! representations, fixed-point dimensions, and the invariants `D`, `d`, `e`
//! and orientability.

use crate::error::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Cyclic(u32),
    Sigma3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    pub label: String,
    pub order: u32,
    pub index: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IrrKind {
    Trivial,
    /// Rotation by `2πk/n` on the plane (cyclic groups), or the
    /// two-dimensional reflection representation of `Σ_3` (`k = 1`).
    Lambda(u32),
    /// The sign representation.
    Sigma,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Irreducible {
    pub label: String,
    pub kind: IrrKind,
    pub dim: u32,
    /// Fixed dimension at each subgroup, in subgroup-list order.
    pub fixed: Vec<u32>,
}

/// A catalogued finite group with its ordered irreducible basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub subgroups: Vec<Subgroup>,
    pub irreducibles: Vec<Irreducible>,
}

/// An honest representation: multiplicities over the group's irreducible
/// basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Representation {
    pub mult: Vec<u32>,
}

impl Representation {
    pub fn zero(g: &GroupSpec) -> Self {
        Representation { mult: vec![0; g.irreducibles.len()] }
    }

    pub fn irreducible(g: &GroupSpec, i: usize) -> Self {
        let mut r = Self::zero(g);
        r.mult[i] = 1;
        r
    }

    pub fn trivial(g: &GroupSpec, n: u32) -> Self {
        let mut r = Self::zero(g);
        r.mult[0] = n;
        r
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    pub fn add(&self, other: &Representation) -> Representation {
        Representation { mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: u32) -> Representation {
        Representation { mult: self.mult.iter().map(|a| a * k).collect() }
    }

    /// `self ⊇ other` as representations.
    pub fn contains(&self, other: &Representation) -> bool {
        self.mult.iter().zip(&other.mult).all(|(a, b)| a >= b)
    }

    /// `self - other`, if `other ⊆ self`.
    pub fn checked_sub(&self, other: &Representation) -> Option<Representation> {
        if !self.contains(other) {
            return None;
        }
        Some(Representation { mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a - b).collect() })
    }

    pub fn contains_trivial(&self) -> bool {
        self.mult[0] > 0
    }
}

impl GroupSpec {
    pub fn cyclic(n: u32) -> Result<GroupSpec> {
        if n < 2 {
            return Err(Error::UnknownGroup(format!("C{n} (cyclic groups need n >= 2)")));
        }
        let divisors: Vec<u32> = (1..=n).filter(|m| n % m == 0).collect();
        let subgroups: Vec<Subgroup> = divisors
            .iter()
            .map(|&m| Subgroup { label: if m == 1 { "e".into() } else { format!("C{m}") }, order: m, index: n / m })
            .collect();
        let mut irreducibles = vec![Irreducible { label: "1".into(), kind: IrrKind::Trivial, dim: 1, fixed: vec![1; subgroups.len()] }];
        for k in 1..=(n - 1) / 2 {
            let fixed = divisors.iter().map(|&m| if k % m == 0 { 2 } else { 0 }).collect();
            irreducibles.push(Irreducible { label: format!("lambda({k})"), kind: IrrKind::Lambda(k), dim: 2, fixed });
        }
        if n % 2 == 0 {
            let fixed = divisors.iter().map(|&m| if (n / m) % 2 == 0 { 1 } else { 0 }).collect();
            irreducibles.push(Irreducible { label: "sigma".into(), kind: IrrKind::Sigma, dim: 1, fixed });
        }
        Ok(GroupSpec { kind: GroupKind::Cyclic(n), subgroups, irreducibles })
    }

    pub fn sigma3() -> GroupSpec {
        let subgroups = [("e", 1, 6), ("C2", 2, 3), ("C3", 3, 2), ("S3", 6, 1)]
            .iter()
            .map(|&(l, o, i)| Subgroup { label: l.into(), order: o, index: i })
            .collect();
        let irreducibles = vec![
            Irreducible { label: "1".into(), kind: IrrKind::Trivial, dim: 1, fixed: vec![1, 1, 1, 1] },
            Irreducible { label: "lambda".into(), kind: IrrKind::Lambda(1), dim: 2, fixed: vec![2, 1, 0, 0] },
            Irreducible { label: "sigma".into(), kind: IrrKind::Sigma, dim: 1, fixed: vec![1, 0, 1, 0] },
        ];
        GroupSpec { kind: GroupKind::Sigma3, subgroups, irreducibles }
    }

    /// Parses `C4`, `C_4`, `Sigma3`, `S3`, `Σ3`.
    pub fn parse(s: &str) -> Result<GroupSpec> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = t.to_lowercase();
        if matches!(lower.as_str(), "sigma3" | "sigma_3" | "s3" | "s_3" | "σ3" | "σ_3") {
            return Ok(Self::sigma3());
        }
        if let Some(rest) = lower.strip_prefix('c') {
            let rest = rest.strip_prefix('_').unwrap_or(rest);
            if let Ok(n) = rest.parse::<u32>() {
                return Self::cyclic(n);
            }
        }
        Err(Error::UnknownGroup(s.to_string()))
    }

    pub fn name(&self) -> String {
        match self.kind {
            GroupKind::Cyclic(n) => format!("C{n}"),
            GroupKind::Sigma3 => "Sigma3".into(),
        }
    }

    pub fn order(&self) -> u32 {
        match self.kind {
            GroupKind::Cyclic(n) => n,
            GroupKind::Sigma3 => 6,
        }
    }

    pub fn rank(&self) -> usize {
        self.irreducibles.len()
    }

    /// `Some((p, e))` when the group is cyclic of order `p^e`, `e >= 1`.
    pub fn prime_power(&self) -> Option<(u32, u32)> {
        let GroupKind::Cyclic(n) = self.kind else { return None };
        let p = (2..=n).find(|d| n % d == 0)?;
        let (mut m, mut e) = (n, 0);
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        (m == 1).then_some((p, e))
    }

    pub fn subgroup_index(&self, label: &str) -> Result<usize> {
        self.subgroups.iter().position(|h| h.label == label).ok_or_else(|| Error::NoSuchSubgroup(label.to_string()))
    }

    pub fn irreducible_index(&self, kind: IrrKind) -> Option<usize> {
        self.irreducibles.iter().position(|i| i.kind == kind)
    }

    pub fn irreducible_dims(&self) -> Vec<i64> {
        self.irreducibles.iter().map(|i| i.dim as i64).collect()
    }

    pub fn dim(&self, v: &Representation) -> u32 {
        v.mult.iter().zip(&self.irreducibles).map(|(m, i)| m * i.dim).sum()
    }

    /// `dim V^H`.
    pub fn fixed_dim(&self, v: &Representation, subgroup: &str) -> Result<u32> {
        let h = self.subgroup_index(subgroup)?;
        Ok(self.fixed_dim_at(v, h))
    }

    pub fn fixed_dim_at(&self, v: &Representation, h: usize) -> u32 {
        v.mult.iter().zip(&self.irreducibles).map(|(m, i)| m * i.fixed[h]).sum()
    }

    /// `(D(V), d(V))`: the indices of subgroups with nonzero fixed points and
    /// their gcd.
    pub fn d_invariant(&self, v: &Representation) -> Result<(Vec<u32>, u32)> {
        if v.is_zero() {
            return Err(Error::ZeroRepresentation);
        }
        let mut set: Vec<u32> = (0..self.subgroups.len())
            .filter(|&h| self.fixed_dim_at(v, h) > 0)
            .map(|h| self.subgroups[h].index)
            .collect();
        set.sort_unstable();
        set.dedup();
        let d = set.iter().fold(0u32, |a, &b| a.gcd(&b));
        Ok((set, d))
    }

    pub fn d(&self, v: &Representation) -> Result<u32> {
        Ok(self.d_invariant(v)?.1)
    }

    /// Index of the kernel of the action: the largest subgroup acting
    /// trivially on `V`.
    pub fn e_invariant(&self, v: &Representation) -> u32 {
        let dim = self.dim(v);
        (0..self.subgroups.len())
            .filter(|&h| self.fixed_dim_at(v, h) == dim)
            .map(|h| self.subgroups[h].index)
            .min()
            .unwrap_or(self.order())
    }

    /// Every generator acts with determinant +1.
    pub fn is_orientable(&self, v: &Representation) -> bool {
        let mut flips = 0;
        for (m, irr) in v.mult.iter().zip(&self.irreducibles) {
            match (self.kind, irr.kind) {
                (_, IrrKind::Sigma) => flips += m,
                (GroupKind::Sigma3, IrrKind::Lambda(_)) => flips += m,
                _ => {}
            }
        }
        flips % 2 == 0
    }

    /// Canonical basis position for `λ(k)` on a cyclic group, or the
    /// equivalent multiple of other irreducibles.
    fn lambda_terms(&self, k: i64) -> Result<Vec<(usize, u32)>> {
        match self.kind {
            GroupKind::Sigma3 => {
                if k == 1 {
                    Ok(vec![(1, 1)])
                } else {
                    Err(Error::Parse(format!("Sigma3 has a single lambda; got lambda({k})")))
                }
            }
            GroupKind::Cyclic(n) => {
                let n = n as i64;
                let mut r = k.rem_euclid(n);
                if r == 0 {
                    return Ok(vec![(0, 2)]);
                }
                if 2 * r == n {
                    return Ok(vec![(self.irreducible_index(IrrKind::Sigma).expect("sigma exists for even n"), 2)]);
                }
                if r > n / 2 {
                    r = n - r;
                }
                Ok(vec![(self.irreducible_index(IrrKind::Lambda(r as u32)).expect("canonical lambda"), 1)])
            }
        }
    }

    /// Parses `"2*1+3*lambda(1)+sigma"`; `L` and `s` abbreviate `lambda` and
    /// `sigma`; `0` is the zero representation.
    pub fn parse_rep(&self, s: &str) -> Result<Representation> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rep = Representation::zero(self);
        if t.is_empty() || t == "0" {
            return Ok(rep);
        }
        for term in t.split('+') {
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let (coef, body) = match term.split_once('*') {
                Some((c, b)) => (c.parse::<u32>().map_err(|_| Error::Parse(format!("bad multiplicity {c:?}")))?, b),
                None => {
                    let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
                    if !digits.is_empty() && digits.len() == term.len() {
                        (digits.parse::<u32>().map_err(|_| Error::Parse(term.into()))?, "1")
                    } else if !digits.is_empty() {
                        (digits.parse::<u32>().map_err(|_| Error::Parse(term.into()))?, &term[digits.len()..])
                    } else {
                        (1, term)
                    }
                }
            };
            let terms: Vec<(usize, u32)> = if body == "1" {
                vec![(0, 1)]
            } else if body == "sigma" || body == "s" || body == "σ" {
                let i = self
                    .irreducible_index(IrrKind::Sigma)
                    .ok_or_else(|| Error::Parse(format!("{} has no sign representation", self.name())))?;
                vec![(i, 1)]
            } else {
                let rest = body
                    .strip_prefix("lambda")
                    .or_else(|| body.strip_prefix("L"))
                    .or_else(|| body.strip_prefix("λ"))
                    .ok_or_else(|| Error::Parse(format!("unknown irreducible {body:?}")))?;
                let k = if rest.is_empty() {
                    1
                } else {
                    let inner = rest
                        .strip_prefix('(')
                        .and_then(|r| r.strip_suffix(')'))
                        .or_else(|| rest.strip_prefix('_'))
                        .unwrap_or(rest);
                    inner.parse::<i64>().map_err(|_| Error::Parse(format!("bad lambda index in {body:?}")))?
                };
                self.lambda_terms(k)?
            };
            for (i, m) in terms {
                rep.mult[i] += coef * m;
            }
        }
        Ok(rep)
    }

    pub fn format_rep(&self, v: &Representation) -> String {
        let parts: Vec<String> = v
            .mult
            .iter()
            .zip(&self.irreducibles)
            .filter(|(m, _)| **m > 0)
            .map(|(m, i)| if *m == 1 { i.label.clone() } else { format!("{m}*{}", i.label) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// All representations of dimension at most `max_dim`.
    pub fn representations_up_to(&self, max_dim: u32) -> Vec<Representation> {
        let dims: Vec<u32> = self.irreducibles.iter().map(|i| i.dim).collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; dims.len()];
        fn rec(i: usize, left: u32, dims: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Representation>) {
            if i == dims.len() {
                out.push(Representation { mult: cur.clone() });
                return;
            }
            let mut m = 0;
            while m * dims[i] <= left {
                cur[i] = m;
                rec(i + 1, left - m * dims[i], dims, cur, out);
                m += 1;
            }
            cur[i] = 0;
        }
        rec(0, max_dim, &dims, &mut cur, &mut out);
        out
    }

    /// An explicit model of the group by its multiplication table.
    pub fn elements(&self) -> FiniteGroup {
        match self.kind {
            GroupKind::Cyclic(n) => FiniteGroup::cyclic(n as usize),
            GroupKind::Sigma3 => FiniteGroup::sigma3(),
        }
    }

    /// Elements of a representative of the subgroup class `label`, as indices
    /// into [`GroupSpec::elements`].
    pub fn subgroup_elements(&self, label: &str) -> Result<Vec<usize>> {
        let h = self.subgroup_index(label)?;
        Ok(match self.kind {
            GroupKind::Cyclic(n) => {
                let order = self.subgroups[h].order;
                let step = (n / order) as usize;
                (0..order as usize).map(|i| i * step).collect()
            }
            GroupKind::Sigma3 => {
                let g = FiniteGroup::sigma3();
                let mut e: Vec<usize> = match label {
                    "e" => vec![g.identity],
                    "C2" => vec![g.identity, g.index_of_perm([1, 0, 2])],
                    "C3" => vec![g.identity, g.index_of_perm([1, 2, 0]), g.index_of_perm([2, 0, 1])],
                    _ => (0..6).collect(),
                };
                e.sort_unstable();
                e
            }
        })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub n: usize,
    /// `mul[a][b]` is the product `ab`.
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    pub identity: usize,
    pub generators: Vec<usize>,
    perms: Option<Vec<[usize; 3]>>,
}

impl FiniteGroup {
    /// `C_n` with element `g` standing for `t^g`.
    pub fn cyclic(n: usize) -> FiniteGroup {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inv = (0..n).map(|a| (n - a) % n).collect();
        FiniteGroup { n, mul, inv, identity: 0, generators: vec![1 % n], perms: None }
    }

    /// `Σ_3` as permutations of `{0,1,2}` in lexicographic order; `ab` means
    /// apply `b` first.
    pub fn sigma3() -> FiniteGroup {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mul: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        let inv = (0..6).map(|a| (0..6).find(|&b| mul[a][b] == 0).unwrap()).collect();
        let generators = vec![idx([1, 0, 2]), idx([1, 2, 0])];
        FiniteGroup { n: 6, mul, inv, identity: 0, generators, perms: Some(perms) }
    }

    /// The permutation of `{0,1,2}` for an element of `Σ_3`.
    pub fn perm(&self, g: usize) -> [usize; 3] {
        self.perms.as_ref().expect("not a permutation group")[g]
    }

    pub fn index_of_perm(&self, p: [usize; 3]) -> usize {
        self.perms.as_ref().expect("not a permutation group").iter().position(|q| *q == p).expect("not a permutation")
    }

    pub fn is_sigma3(&self) -> bool {
        self.perms.is_some()
    }

    /// Sign of a permutation element; always +1 for cyclic groups.
    pub fn sign(&self, g: usize) -> i64 {
        match &self.perms {
            None => 1,
            Some(p) => {
                let p = p[g];
                let mut s = 1;
                for i in 0..3 {
                    for j in i + 1..3 {
                        if p[i] > p[j] {
                            s = -s;
                        }
                    }
                }
                s
            }
        }
    }
}
