//! Chain complexes of permutation modules `Z[G/H]`, their fixed-point
//! levels, integer homology, and the sphere complexes used for Euler-class
//! computations.
//!
//! The [`SphereOracle`] builds equivariant cellular models of
//! representation spheres `S^W` directly from cell structures on the
//! irreducibles and computes the top level of `H^★(pt)` in the regular
//! portion, together with Euler-class maps. It shares no data with the chart
//! tables in [`crate::point_cohomology`] and serves as their cross-check.

use crate::error::{Error, Result};
use crate::group_rep::{FiniteGroup, GroupSpec, IrrKind, Representation};
use crate::linalg::{invariant_factors, to_u64, AbHom, Homology, Int, IntMatrix};
use crate::point_cohomology::{GradedGroup, Summand};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

/// `Z[G/H]` with the coset basis `g_0 H, g_1 H, ...` where `g_i` is the
/// smallest element of its coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationModule {
    pub subgroup: String,
    /// Coset representatives.
    pub transversal: Vec<usize>,
    /// `action[g][i]` is the basis index of `g · g_i H`.
    pub action: Vec<Vec<usize>>,
}

impl PermutationModule {
    pub fn new(spec: &GroupSpec, group: &FiniteGroup, subgroup: &str) -> Result<Self> {
        let h = spec.subgroup_elements(subgroup)?;
        let mut coset_of = vec![usize::MAX; group.n];
        let mut transversal = Vec::new();
        for g in 0..group.n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = transversal.len();
            transversal.push(g);
            for &x in &h {
                coset_of[group.mul[g][x]] = idx;
            }
        }
        let action = (0..group.n)
            .map(|g| transversal.iter().map(|&t| coset_of[group.mul[g][t]]).collect())
            .collect();
        Ok(PermutationModule { subgroup: subgroup.to_string(), transversal, action })
    }

    pub fn rank(&self) -> usize {
        self.transversal.len()
    }
}

/// A bounded chain complex of sums of permutation modules. Degree `n` lives
/// at `terms[n - min_degree]`; `boundaries[i]` maps degree
/// `min_degree + i` to degree `min_degree + i - 1` on underlying bases
/// (`boundaries[0]` is the zero map out of the lowest degree).
#[derive(Clone, Debug)]
pub struct GroupChainComplex {
    pub spec: GroupSpec,
    pub group: FiniteGroup,
    pub min_degree: i64,
    pub terms: Vec<Vec<PermutationModule>>,
    pub boundaries: Vec<IntMatrix>,
}

impl GroupChainComplex {
    /// Validates shapes, `∂∘∂ = 0` and equivariance against the group
    /// generators.
    pub fn new(
        spec: GroupSpec,
        min_degree: i64,
        terms: Vec<Vec<PermutationModule>>,
        boundaries: Vec<IntMatrix>,
    ) -> Result<Self> {
        let group = spec.elements();
        let c = GroupChainComplex { spec, group, min_degree, terms, boundaries };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if self.boundaries.len() != self.terms.len() {
            return Err(Error::Complex("one boundary matrix per degree is required".into()));
        }
        for i in 0..self.terms.len() {
            let src = self.rank_at(i);
            let tgt = if i == 0 { 0 } else { self.rank_at(i - 1) };
            let b = &self.boundaries[i];
            if b.rows() != tgt || b.cols() != src {
                return Err(Error::Complex(format!("boundary in degree {} has the wrong shape", self.min_degree + i as i64)));
            }
            if i >= 1 && !self.boundaries[i - 1].mul(b).is_zero() {
                return Err(Error::Complex(format!("boundary squares to a nonzero map at degree {}", self.min_degree + i as i64)));
            }
            for &g in &self.group.generators {
                let ps = self.permutation(i, g);
                let pt = if i == 0 { vec![] } else { self.permutation(i - 1, g) };
                for x in 0..src {
                    for y in 0..tgt {
                        if b[(pt[y], ps[x])] != b[(y, x)] {
                            return Err(Error::Complex(format!(
                                "boundary in degree {} is not equivariant",
                                self.min_degree + i as i64
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn rank_at(&self, i: usize) -> usize {
        self.terms[i].iter().map(|m| m.rank()).sum()
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.terms.len() as i64 - 1
    }

    /// Underlying rank in degree `n` (0 outside the range).
    pub fn rank(&self, n: i64) -> usize {
        self.slot(n).map_or(0, |i| self.rank_at(i))
    }

    fn slot(&self, n: i64) -> Option<usize> {
        let i = n - self.min_degree;
        (i >= 0 && (i as usize) < self.terms.len()).then_some(i as usize)
    }

    /// Action of `g` on the underlying basis in slot `i`.
    fn permutation(&self, i: usize, g: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut offset = 0;
        for m in &self.terms[i] {
            out.extend(m.action[g].iter().map(|&j| j + offset));
            offset += m.rank();
        }
        out
    }

    /// Appends the augmentation `C_lowest → Z` in one degree lower, sending
    /// every basis element to 1, so that homology becomes reduced homology.
    pub fn augmented(&self) -> Result<GroupChainComplex> {
        let top = PermutationModule::new(&self.spec, &self.group, &self.spec.subgroups.last().unwrap().label)?;
        let mut terms = vec![vec![top]];
        terms.extend(self.terms.iter().cloned());
        let r0 = self.rank_at(0);
        let eps = IntMatrix::from_fn(1, r0, |_, _| Int::one());
        let mut boundaries = vec![IntMatrix::zeros(0, 1), eps];
        boundaries.extend(self.boundaries.iter().skip(1).cloned());
        GroupChainComplex::new(self.spec.clone(), self.min_degree - 1, terms, boundaries)
    }
}

/// A bounded complex of free abelian groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntChainComplex {
    pub min_degree: i64,
    pub dims: Vec<usize>,
    /// `boundaries[i]`: degree `min_degree + i` → degree `min_degree + i - 1`.
    pub boundaries: Vec<IntMatrix>,
}

impl IntChainComplex {
    pub fn new(min_degree: i64, dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if dims.len() != boundaries.len() {
            return Err(Error::Complex("dimension and boundary lists differ in length".into()));
        }
        for i in 0..dims.len() {
            let tgt = if i == 0 { 0 } else { dims[i - 1] };
            if boundaries[i].rows() != tgt || boundaries[i].cols() != dims[i] {
                return Err(Error::Complex("boundary has the wrong shape".into()));
            }
            if i >= 1 && !boundaries[i - 1].mul(&boundaries[i]).is_zero() {
                return Err(Error::Complex("∂∘∂ ≠ 0".into()));
            }
        }
        Ok(IntChainComplex { min_degree, dims, boundaries })
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.dims.len() as i64 - 1
    }

    fn slot(&self, n: i64) -> Option<usize> {
        let i = n - self.min_degree;
        (i >= 0 && (i as usize) < self.dims.len()).then_some(i as usize)
    }

    /// Homology in degree `n` with generators.
    pub fn homology_data(&self, n: i64) -> Homology {
        let Some(i) = self.slot(n) else {
            return Homology::compute(0, None, None);
        };
        let d_out = if i == 0 { None } else { Some(&self.boundaries[i]) };
        let d_in = self.slot(n + 1).map(|j| &self.boundaries[j]);
        Homology::compute(self.dims[i], d_out, d_in)
    }

    /// Homology in degree `n` as cyclic summands.
    pub fn homology(&self, n: i64) -> GradedGroup {
        let h = self.homology_data(n);
        graded_from_orders(&h.orders, &format!("h{n}"))
    }

    /// `(degree, homology)` for every degree of the complex.
    pub fn all_homology(&self) -> Vec<(i64, GradedGroup)> {
        (self.min_degree..=self.max_degree()).map(|n| (n, self.homology(n))).collect()
    }
}

fn graded_from_orders(orders: &[Int], prefix: &str) -> GradedGroup {
    GradedGroup {
        summands: orders
            .iter()
            .enumerate()
            .map(|(i, o)| Summand { order: to_u64(o), label: format!("{prefix}.{i}") })
            .collect(),
    }
}

/// Level `G/J` of the fixed-point functor: each `Z[G/H]` is replaced by the
/// free module on `J`-orbits of `G/H` (orbit sums) and boundaries are
/// restricted.
pub fn fixed_point_level(c: &GroupChainComplex, subgroup: &str) -> Result<IntChainComplex> {
    let j = c.spec.subgroup_elements(subgroup)?;
    let mut orbit_data = Vec::new();
    for i in 0..c.terms.len() {
        let n = c.rank_at(i);
        let perms: Vec<Vec<usize>> = j.iter().map(|&g| c.permutation(i, g)).collect();
        let mut orbit_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if orbit_of[x] != usize::MAX {
                continue;
            }
            let o: BTreeSet<usize> = perms.iter().map(|p| p[x]).collect();
            for &y in &o {
                orbit_of[y] = reps.len();
            }
            reps.push(x);
            members.push(o.into_iter().collect());
        }
        orbit_data.push((reps, members));
    }
    let mut boundaries = Vec::new();
    let mut dims = Vec::new();
    for i in 0..c.terms.len() {
        let (_, members) = &orbit_data[i];
        dims.push(members.len());
        if i == 0 {
            boundaries.push(IntMatrix::zeros(0, members.len()));
            continue;
        }
        let (treps, _) = &orbit_data[i - 1];
        let b = &c.boundaries[i];
        let m = IntMatrix::from_fn(treps.len(), members.len(), |r, col| {
            let mut s = Int::zero();
            for &x in &members[col] {
                s += &b[(treps[r], x)];
            }
            s
        });
        boundaries.push(m);
    }
    IntChainComplex::new(c.min_degree, dims, boundaries)
}

/// Integer homology of a complex of free abelian groups, per degree.
pub fn homology(c: &IntChainComplex) -> Vec<(i64, GradedGroup)> {
    c.all_homology()
}

/// Reduced degree-≤1 skeleton of `S^W`: the origin, and for every subgroup
/// class `H` with `W^H ≠ 0` a pair of ray orbits `Z[G/H]`, each ray bounding
/// `-[0]`.
#[derive(Clone, Debug)]
pub struct SphereH0 {
    pub complex: GroupChainComplex,
    /// `H̃_0` at the top level `G/G`.
    pub h0: GradedGroup,
}

pub fn sphere_h0_complex(spec: &GroupSpec, w: &Representation) -> Result<SphereH0> {
    if w.is_zero() {
        return Err(Error::ZeroRepresentation);
    }
    let group = spec.elements();
    let top = &spec.subgroups.last().unwrap().label;
    let mut rays = Vec::new();
    for (h, sub) in spec.subgroups.iter().enumerate() {
        if spec.fixed_dim_at(w, h) > 0 {
            for _ in 0..2 {
                rays.push(PermutationModule::new(spec, &group, &sub.label)?);
            }
        }
    }
    let r: usize = rays.iter().map(|m| m.rank()).sum();
    let bd1 = IntMatrix::from_fn(1, r, |_, _| -Int::one());
    let complex = GroupChainComplex::new(
        spec.clone(),
        0,
        vec![vec![PermutationModule::new(spec, &group, top)?], rays],
        vec![IntMatrix::zeros(0, 1), bd1],
    )?;
    let level = fixed_point_level(&complex, top)?;
    let h0 = level.homology(0);
    Ok(SphereH0 { complex, h0 })
}

fn p_valuation(mut k: u64, p: u64) -> u32 {
    let mut v = 0;
    while k % p == 0 {
        k /= p;
        v += 1;
    }
    v
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn inverse_mod(a: i64, m: i64) -> Option<i64> {
    let e = Integer::extended_gcd(&a.rem_euclid(m), &m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// The cellular complex of `S^{λ(k)}` over `C_{p^e}`.
#[derive(Clone, Debug)]
pub struct LambdaSphere {
    pub p: u64,
    pub e: u32,
    pub k: u64,
    /// `v_p(k)`.
    pub j: u32,
    /// Solves `p^j ≡ m k (mod p^e)`; the 2-cell is attached by `1 - t^m`.
    pub m: u64,
    pub complex: GroupChainComplex,
}

impl LambdaSphere {
    /// Underlying homology `(H_0, H_1, H_2)`.
    pub fn underlying_homology(&self) -> Result<Vec<GradedGroup>> {
        let c = fixed_point_level(&self.complex, "e")?;
        Ok((0..=2).map(|n| c.homology(n)).collect())
    }

    /// Reduced `H̃_0` at the level `G/J`.
    pub fn reduced_h0(&self, subgroup: &str) -> Result<GradedGroup> {
        let c = fixed_point_level(&self.complex.augmented()?, subgroup)?;
        Ok(c.homology(0))
    }

    pub fn top_label(&self) -> String {
        self.complex.spec.subgroups.last().unwrap().label.clone()
    }
}

pub fn lambda_sphere_complex(p: u64, e: u32, k: u64) -> Result<LambdaSphere> {
    if !is_prime(p) || e == 0 {
        return Err(Error::Range(format!("need a prime p and e >= 1; got p={p}, e={e}")));
    }
    let n = p.pow(e);
    if k == 0 || k >= n {
        return Err(Error::Range(format!("need 1 <= k < p^e = {n}; got k={k}")));
    }
    let j = p_valuation(k, p);
    let pj = p.pow(j);
    let q = n / pj;
    // m k ≡ p^j (mod p^e)  ⇔  m (k/p^j) ≡ 1 (mod p^{e-j})
    let m = inverse_mod((k / pj) as i64, q as i64).expect("unit modulo p^(e-j)") as u64;
    let spec = GroupSpec::cyclic(n as u32)?;
    let group = spec.elements();
    let h = if pj == 1 { "e".to_string() } else { format!("C{pj}") };
    let top = spec.subgroups.last().unwrap().label.clone();
    let cells = PermutationModule::new(&spec, &group, &h)?;
    let qn = q as usize;
    // degree 0: origin and infinity; degree 1: rays; degree 2: sectors
    let bd1 = IntMatrix::from_fn(2, qn, |r, _| if r == 0 { -Int::one() } else { Int::one() });
    let bd2 = IntMatrix::from_fn(qn, qn, |r, c| {
        let mut v = Int::zero();
        if r == c {
            v += 1;
        }
        if r == (c + m as usize) % qn {
            v -= 1;
        }
        v
    });
    let origin = PermutationModule::new(&spec, &group, &top)?;
    let complex = GroupChainComplex::new(
        spec,
        0,
        vec![vec![origin.clone(), origin], vec![cells.clone()], vec![cells]],
        vec![IntMatrix::zeros(0, 2), bd1, bd2],
    )?;
    Ok(LambdaSphere { p, e, k, j, m, complex })
}

/// Outcome of comparing `S^{λ(kr)}` with `S^{λ(k)}`.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub p: u64,
    pub e: u32,
    pub k: u64,
    pub r: u64,
    /// `r s ≡ 1 (mod p^e)`, `1 ≤ s < p^e`.
    pub s: u64,
    pub is_chain_map: bool,
    /// The induced endomorphism of `H_2 ≅ Z`.
    pub h2_multiplier: i64,
    /// Whether the map is an isomorphism after inverting primes other than p.
    pub p_local_iso: bool,
}

pub fn comparison_check(p: u64, e: u32, k: u64, r: u64) -> Result<Comparison> {
    if r == 0 || r % p == 0 {
        return Err(Error::Range(format!("r = {r} is not coprime to p = {p}")));
    }
    let n = p.pow(e);
    let target = lambda_sphere_complex(p, e, k)?;
    let kr = (k * r) % n;
    let source = lambda_sphere_complex(p, e, kr)?;
    let s = inverse_mod(r as i64, n as i64).expect("r is a unit") as u64;
    let q = n / p.pow(target.j);
    let qn = q as usize;
    // f_2 = 1 + t^m + ... + t^{m(s-1)} on Z[G/H]; identity elsewhere
    let mut f2 = IntMatrix::zeros(qn, qn);
    for c in 0..qn {
        for i in 0..s {
            let row = (c as u64 + i * target.m) % q;
            f2[(row as usize, c)] += 1;
        }
    }
    let f1 = IntMatrix::identity(qn);
    let f0 = IntMatrix::identity(2);
    let sb = &source.complex.boundaries;
    let tb = &target.complex.boundaries;
    let mut is_chain_map = f1.mul(&sb[2]) == tb[2].mul(&f2) && f0.mul(&sb[1]) == tb[1].mul(&f1);
    // equivariance of f_2 (f_1, f_0 are identities)
    for &g in &source.complex.group.generators {
        let ps = source.complex.permutation(2, g);
        let pt = target.complex.permutation(2, g);
        for x in 0..qn {
            for y in 0..qn {
                if f2[(pt[y], ps[x])] != f2[(y, x)] {
                    is_chain_map = false;
                }
            }
        }
    }
    let src = fixed_point_level(&source.complex, "e")?;
    let tgt = fixed_point_level(&target.complex, "e")?;
    let hs = src.homology_data(2);
    let ht = tgt.homology_data(2);
    if hs.orders.len() != 1 || ht.orders.len() != 1 {
        return Err(Error::Complex("H_2 of a representation sphere should be Z".into()));
    }
    let image = f2.mul_vec(&hs.gens[0]);
    let coord = ht.express(&image);
    // both generators are norm elements of the same sign up to orientation
    let sign_s: Int = hs.gens[0].iter().sum::<Int>().signum();
    let sign_t: Int = ht.gens[0].iter().sum::<Int>().signum();
    let mult = crate::linalg::to_i64(&(&coord[0] * sign_s * sign_t));
    Ok(Comparison {
        p,
        e,
        k,
        r,
        s,
        is_chain_map,
        h2_multiplier: mult,
        p_local_iso: (mult.unsigned_abs() % p) != 0,
    })
}

// ---------------------------------------------------------------------------
// Cellular models of representation spheres.

#[derive(Clone, Debug)]
struct Cells {
    deg: Vec<u32>,
    bd: Vec<BTreeMap<usize, i64>>,
    /// `act[g][x]`
    act: Vec<Vec<usize>>,
}

impl Cells {
    fn len(&self) -> usize {
        self.deg.len()
    }

    fn point(n: usize) -> Cells {
        Cells { deg: vec![0], bd: vec![BTreeMap::new()], act: vec![vec![0]; n] }
    }
}

fn irreducible_cells(g: &FiniteGroup, kind: IrrKind) -> Cells {
    let n = g.n;
    let ray = || BTreeMap::from([(0usize, -1i64)]);
    match kind {
        IrrKind::Trivial => Cells { deg: vec![0, 1, 1], bd: vec![BTreeMap::new(), ray(), ray()], act: vec![vec![0, 1, 2]; n] },
        IrrKind::Sigma => {
            let act = (0..n)
                .map(|x| {
                    let flips = if g.is_sigma3() { g.sign(x) < 0 } else { x % 2 == 1 };
                    if flips {
                        vec![0, 2, 1]
                    } else {
                        vec![0, 1, 2]
                    }
                })
                .collect();
            Cells { deg: vec![0, 1, 1], bd: vec![BTreeMap::new(), ray(), ray()], act }
        }
        IrrKind::Lambda(_) if g.is_sigma3() => {
            // origin; vertex rays 1..=3; midpoint rays 4..=6; sectors 7.. indexed by group elements
            let mut deg = vec![0];
            let mut bd = vec![BTreeMap::new()];
            for _ in 0..6 {
                deg.push(1);
                bd.push(ray());
            }
            for pi in 0..6 {
                let p = g.perm(pi);
                deg.push(2);
                bd.push(BTreeMap::from([(4 + p[2], 1), (1 + p[0], -1)]));
            }
            let act = (0..6)
                .map(|x| {
                    let p = g.perm(x);
                    let mut a = vec![0];
                    a.extend((0..3).map(|i| 1 + p[i]));
                    a.extend((0..3).map(|i| 4 + p[i]));
                    a.extend((0..6).map(|pi| 7 + g.mul[x][pi]));
                    a
                })
                .collect();
            Cells { deg, bd, act }
        }
        IrrKind::Lambda(k) => {
            let k = k as usize;
            let gg = k.gcd(&n);
            let q = n / gg;
            let sh = k / gg;
            let mut deg = vec![0];
            let mut bd = vec![BTreeMap::new()];
            for _ in 0..q {
                deg.push(1);
                bd.push(ray());
            }
            for j in 0..q {
                deg.push(2);
                let mut b = BTreeMap::new();
                *b.entry(1 + (j + 1) % q).or_insert(0) += 1;
                *b.entry(1 + j).or_insert(0) -= 1;
                b.retain(|_, v| *v != 0);
                bd.push(b);
            }
            let act = (0..n)
                .map(|x| {
                    let mut a = vec![0];
                    a.extend((0..q).map(|j| 1 + (j + x * sh) % q));
                    a.extend((0..q).map(|j| 1 + q + (j + x * sh) % q));
                    a
                })
                .collect();
            Cells { deg, bd, act }
        }
    }
}

/// Reduced cellular model of `S^W` with the inclusion from the previous
/// model in the build sequence.
#[derive(Clone, Debug)]
struct SphereModel {
    cells: Cells,
    /// Image of each cell of the prefix model under `x ↦ x ⊗ [0]`.
    incl: Vec<Vec<(usize, i64)>>,
    /// Orbits per degree: sorted member lists; representative = first.
    orbits: BTreeMap<u32, Vec<Vec<usize>>>,
    orbit_of: Vec<usize>,
}

fn tensor_reduce(g: &FiniteGroup, a: &Cells, b: &Cells) -> (Cells, Vec<Vec<(usize, i64)>>) {
    let n = g.n;
    let (la, lb) = (a.len(), b.len());
    let id = |x: usize, y: usize| x * lb + y;
    let total = la * lb;
    let mut deg = vec![0u32; total];
    let mut bd: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); total];
    for x in 0..la {
        for y in 0..lb {
            let c = id(x, y);
            deg[c] = a.deg[x] + b.deg[y];
            let mut m = BTreeMap::new();
            for (&x2, &v) in &a.bd[x] {
                *m.entry(id(x2, y)).or_insert(0) += v;
            }
            let s = if a.deg[x] % 2 == 1 { -1 } else { 1 };
            for (&y2, &v) in &b.bd[y] {
                *m.entry(id(x, y2)).or_insert(0) += s * v;
            }
            m.retain(|_, v| *v != 0);
            bd[c] = m;
        }
    }
    let act: Vec<Vec<usize>> =
        (0..n).map(|gi| (0..total).map(|c| id(a.act[gi][c / lb], b.act[gi][c % lb])).collect()).collect();

    let stab = |c: usize| -> Vec<bool> { (0..n).map(|gi| act[gi][c] == c).collect() };
    let mut cob: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); total];
    for (x, m) in bd.iter().enumerate() {
        for (&y, &v) in m {
            cob[y].insert(x, v);
        }
    }
    let mut alive: BTreeSet<usize> = (0..total).collect();
    let mut repl: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
    let mut changed = true;
    while changed {
        changed = false;
        let mut order: Vec<usize> = alive.iter().copied().collect();
        order.sort_by_key(|&x| (std::cmp::Reverse(deg[x]), x));
        for x in order {
            if !alive.contains(&x) {
                continue;
            }
            let candidates: Vec<(usize, i64)> = bd[x].iter().map(|(&y, &v)| (y, v)).collect();
            for (y, v) in candidates {
                if v.abs() != 1 || stab(x) != stab(y) {
                    continue;
                }
                let orbit_y: BTreeSet<usize> = (0..n).map(|gi| act[gi][y]).collect();
                if bd[x].keys().any(|z| *z != y && orbit_y.contains(z)) {
                    continue;
                }
                let mut pairs: BTreeMap<usize, usize> = BTreeMap::new();
                for gi in 0..n {
                    pairs.insert(act[gi][x], act[gi][y]);
                }
                for (&xx, &yy) in &pairs {
                    let c = bd[xx][&yy];
                    repl.insert(xx, vec![]);
                    repl.insert(yy, bd[xx].iter().filter(|(t, _)| **t != yy).map(|(&t, &u)| (t, -c * u)).collect());
                    let hits: Vec<(usize, i64)> = cob[yy].iter().map(|(&z, &w)| (z, w)).collect();
                    let bxx: Vec<(usize, i64)> = bd[xx].iter().map(|(&t, &u)| (t, u)).collect();
                    for (z, w) in hits {
                        if z == xx {
                            continue;
                        }
                        let f = w * c;
                        for &(t, u) in &bxx {
                            let nv = bd[z].get(&t).copied().unwrap_or(0) - f * u;
                            if nv != 0 {
                                bd[z].insert(t, nv);
                                cob[t].insert(z, nv);
                            } else {
                                bd[z].remove(&t);
                                cob[t].remove(&z);
                            }
                        }
                    }
                    for cell in [xx, yy] {
                        let down: Vec<usize> = bd[cell].keys().copied().collect();
                        for t in down {
                            cob[t].remove(&cell);
                        }
                        let up: Vec<usize> = cob[cell].keys().copied().collect();
                        for z in up {
                            bd[z].remove(&cell);
                        }
                        bd[cell].clear();
                        cob[cell].clear();
                        alive.remove(&cell);
                    }
                }
                changed = true;
                break;
            }
        }
    }
    // relabel survivors by (degree, id)
    let mut survivors: Vec<usize> = alive.iter().copied().collect();
    survivors.sort_by_key(|&x| (deg[x], x));
    let mut new_id = vec![usize::MAX; total];
    for (i, &x) in survivors.iter().enumerate() {
        new_id[x] = i;
    }
    let project = |start: usize| -> Vec<(usize, i64)> {
        let mut out: BTreeMap<usize, i64> = BTreeMap::new();
        let mut stack = vec![(start, 1i64)];
        while let Some((z, v)) = stack.pop() {
            if new_id[z] != usize::MAX {
                *out.entry(new_id[z]).or_insert(0) += v;
            } else if let Some(r) = repl.get(&z) {
                for &(t, u) in r {
                    stack.push((t, v * u));
                }
            }
        }
        out.into_iter().filter(|(_, v)| *v != 0).collect()
    };
    // the origin of b is cell 0
    let incl: Vec<Vec<(usize, i64)>> = (0..la).map(|x| project(id(x, 0))).collect();
    let cells = Cells {
        deg: survivors.iter().map(|&x| deg[x]).collect(),
        bd: survivors
            .iter()
            .map(|&x| bd[x].iter().map(|(&t, &u)| (new_id[t], u)).collect())
            .collect(),
        act: (0..n).map(|gi| survivors.iter().map(|&x| new_id[act[gi][x]]).collect()).collect(),
    };
    (cells, incl)
}

impl SphereModel {
    fn new(g: &FiniteGroup, cells: Cells, incl: Vec<Vec<(usize, i64)>>) -> SphereModel {
        let mut orbit_of = vec![usize::MAX; cells.len()];
        let mut orbits: BTreeMap<u32, Vec<Vec<usize>>> = BTreeMap::new();
        for x in 0..cells.len() {
            if orbit_of[x] != usize::MAX {
                continue;
            }
            let o: BTreeSet<usize> = (0..g.n).map(|gi| cells.act[gi][x]).collect();
            let list = orbits.entry(cells.deg[x]).or_default();
            for &y in &o {
                orbit_of[y] = list.len();
            }
            list.push(o.into_iter().collect());
        }
        SphereModel { cells, incl, orbits, orbit_of }
    }

    fn orbits_at(&self, d: i64) -> &[Vec<usize>] {
        if d < 0 {
            return &[];
        }
        self.orbits.get(&(d as u32)).map_or(&[], |v| v.as_slice())
    }

    /// Boundary `d → d-1` of the invariant (orbit-sum) complex.
    fn invariant_boundary(&self, d: i64) -> IntMatrix {
        let src = self.orbits_at(d);
        let tgt = self.orbits_at(d - 1);
        let mut m = IntMatrix::zeros(tgt.len(), src.len());
        for (i, o) in src.iter().enumerate() {
            let mut tot: BTreeMap<usize, i64> = BTreeMap::new();
            for &x in o {
                for (&y, &v) in &self.cells.bd[x] {
                    *tot.entry(y).or_insert(0) += v;
                }
            }
            for (j, o2) in tgt.iter().enumerate() {
                m[(j, i)] = Int::from(tot.get(&o2[0]).copied().unwrap_or(0));
            }
        }
        m
    }

    /// Coboundary `d → d+1` of the orbit cochain complex.
    fn orbit_coboundary(&self, d: i64) -> IntMatrix {
        let src = self.orbits_at(d);
        let tgt = self.orbits_at(d + 1);
        let mut m = IntMatrix::zeros(tgt.len(), src.len());
        for (i, o) in tgt.iter().enumerate() {
            let y = o[0];
            for (j, o2) in src.iter().enumerate() {
                let s: i64 = o2.iter().map(|x| self.cells.bd[y].get(x).copied().unwrap_or(0)).sum();
                m[(i, j)] = Int::from(s);
            }
        }
        m
    }

    fn positive(&self, m: i64) -> Homology {
        let n = self.orbits_at(m).len();
        let out = self.invariant_boundary(m);
        let inn = self.invariant_boundary(m + 1);
        Homology::compute(n, Some(&out), Some(&inn))
    }

    fn negative(&self, m: i64) -> Homology {
        let n = self.orbits_at(m).len();
        let out = self.orbit_coboundary(m);
        let inn = self.orbit_coboundary(m - 1);
        Homology::compute(n, Some(&out), Some(&inn))
    }
}

/// Independent computation of `M^{W-m}` and `M^{n-W}` (top level) from
/// cellular models of representation spheres, with Euler-class maps.
pub struct SphereOracle {
    spec: GroupSpec,
    group: FiniteGroup,
    cache: HashMap<Vec<usize>, Rc<SphereModel>>,
}

impl SphereOracle {
    pub fn new(spec: &GroupSpec) -> SphereOracle {
        SphereOracle { spec: spec.clone(), group: spec.elements(), cache: HashMap::new() }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Build sequence for a representation: irreducible indices in basis
    /// order with multiplicity.
    pub fn sequence(w: &Representation) -> Vec<usize> {
        w.mult.iter().enumerate().flat_map(|(i, &m)| std::iter::repeat(i).take(m as usize)).collect()
    }

    fn model(&mut self, seq: &[usize]) -> Rc<SphereModel> {
        if let Some(m) = self.cache.get(seq) {
            return m.clone();
        }
        let model = if seq.is_empty() {
            SphereModel::new(&self.group, Cells::point(self.group.n), vec![])
        } else {
            let prev = self.model(&seq[..seq.len() - 1]);
            let irr = irreducible_cells(&self.group, self.spec.irreducibles[*seq.last().unwrap()].kind);
            let (cells, incl) = tensor_reduce(&self.group, &prev.cells, &irr);
            SphereModel::new(&self.group, cells, incl)
        };
        let rc = Rc::new(model);
        self.cache.insert(seq.to_vec(), rc.clone());
        rc
    }

    /// Number of cells per degree of the reduced model.
    pub fn model_size(&mut self, seq: &[usize]) -> Vec<usize> {
        let m = self.model(seq);
        let top = m.cells.deg.iter().copied().max().unwrap_or(0);
        (0..=top).map(|d| m.cells.deg.iter().filter(|&&x| x == d).count()).collect()
    }

    /// `M^{W-m}` as cyclic orders.
    pub fn positive_group(&mut self, seq: &[usize], m: i64) -> Vec<Int> {
        self.model(seq).positive(m).orders
    }

    /// `M^{n-W}` as cyclic orders.
    pub fn negative_group(&mut self, seq: &[usize], n: i64) -> Vec<Int> {
        self.model(seq).negative(n).orders
    }

    /// `a_irr : M^{W-m} → M^{W+irr-m}`.
    pub fn positive_step(&mut self, seq: &[usize], irr: usize, m: i64) -> AbHom {
        let c0 = self.model(seq);
        let mut ext = seq.to_vec();
        ext.push(irr);
        let c1 = self.model(&ext);
        let h0 = c0.positive(m);
        let h1 = c1.positive(m);
        let src_orbits = c0.orbits_at(m);
        let tgt_orbits = c1.orbits_at(m);
        let mut cols = Vec::new();
        for gen in &h0.gens {
            let mut vec: BTreeMap<usize, i64> = BTreeMap::new();
            for (i, o) in src_orbits.iter().enumerate() {
                let gi = crate::linalg::to_i64(&gen[i]);
                if gi == 0 {
                    continue;
                }
                for &x in o {
                    for &(t, u) in &c1.incl[x] {
                        *vec.entry(t).or_insert(0) += u * gi;
                    }
                }
            }
            let v: Vec<Int> = tgt_orbits.iter().map(|o| Int::from(vec.get(&o[0]).copied().unwrap_or(0))).collect();
            cols.push(h1.express(&v));
        }
        AbHom::new(h0.orders.clone(), h1.orders.clone(), IntMatrix::from_columns(h1.orders.len(), &cols))
    }

    /// `a_irr : M^{n-W-irr} → M^{n-W}`.
    pub fn negative_step(&mut self, seq: &[usize], irr: usize, n: i64) -> AbHom {
        let c0 = self.model(seq);
        let mut ext = seq.to_vec();
        ext.push(irr);
        let c1 = self.model(&ext);
        let h1 = c1.negative(n);
        let h0 = c0.negative(n);
        let tgt_orbits = c0.orbits_at(n);
        let mut cols = Vec::new();
        for gen in &h1.gens {
            let v: Vec<Int> = tgt_orbits
                .iter()
                .map(|o| {
                    let x = o[0];
                    let mut s = Int::zero();
                    for &(t, u) in &c1.incl[x] {
                        s += &gen[c1.orbit_of[t]] * u;
                    }
                    s
                })
                .collect();
            cols.push(h0.express(&v));
        }
        AbHom::new(h1.orders.clone(), h0.orders.clone(), IntMatrix::from_columns(h0.orders.len(), &cols))
    }

    /// The reduced model of `S^W` as a chain complex of permutation modules.
    pub fn sphere_complex(&mut self, seq: &[usize]) -> Result<GroupChainComplex> {
        let model = self.model(seq);
        let g = &self.group;
        let top = model.cells.deg.iter().copied().max().unwrap_or(0);
        let mut terms = Vec::new();
        let mut position = vec![usize::MAX; model.cells.len()];
        for d in 0..=top {
            let mut mods = Vec::new();
            let mut offset = 0;
            for o in model.orbits_at(d as i64) {
                let order = g.n / o.len();
                let label = self.subgroup_label_of_order(order)?;
                let h = self.spec.subgroup_elements(&label)?;
                // choose a representative whose stabilizer is exactly h
                let rep = *o
                    .iter()
                    .find(|&&x| h.iter().all(|&hh| model.cells.act[hh][x] == x))
                    .ok_or_else(|| Error::Complex("no representative with the catalog stabilizer".into()))?;
                let pm = PermutationModule::new(&self.spec, g, &label)?;
                for (i, &t) in pm.transversal.iter().enumerate() {
                    position[model.cells.act[t][rep]] = offset + i;
                }
                offset += pm.rank();
                mods.push(pm);
            }
            terms.push(mods);
        }
        let dims: Vec<usize> = terms.iter().map(|t| t.iter().map(|m| m.rank()).sum()).collect();
        let mut boundaries = vec![IntMatrix::zeros(0, dims[0])];
        for d in 1..=top as usize {
            let mut m = IntMatrix::zeros(dims[d - 1], dims[d]);
            for x in 0..model.cells.len() {
                if model.cells.deg[x] as usize != d {
                    continue;
                }
                for (&y, &v) in &model.cells.bd[x] {
                    m[(position[y], position[x])] += v;
                }
            }
            boundaries.push(m);
        }
        GroupChainComplex::new(self.spec.clone(), 0, terms, boundaries)
    }

    fn subgroup_label_of_order(&self, order: usize) -> Result<String> {
        self.spec
            .subgroups
            .iter()
            .find(|h| h.order as usize == order)
            .map(|h| h.label.clone())
            .ok_or_else(|| Error::Complex(format!("no subgroup of order {order}")))
    }
}

/// Invariant factors of a list of cyclic orders, as `u64`.
pub fn iso_type(orders: &[Int]) -> Vec<u64> {
    invariant_factors(orders).iter().map(to_u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders(g: &GradedGroup) -> Vec<u64> {
        g.summands.iter().map(|s| s.order).collect()
    }

    #[test]
    fn permutation_module_ranks() {
        let spec = GroupSpec::cyclic(4).unwrap();
        let g = spec.elements();
        let m = PermutationModule::new(&spec, &g, "C2").unwrap();
        assert_eq!(m.rank(), 2);
        let s3 = GroupSpec::sigma3();
        let m = PermutationModule::new(&s3, &s3.elements(), "C2").unwrap();
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn fixed_point_examples() {
        // Z[C_p] at level C_p has rank 1; Z[C_4/C_2] at level C_2 has rank 2
        let spec = GroupSpec::cyclic(5).unwrap();
        let g = spec.elements();
        let free = PermutationModule::new(&spec, &g, "e").unwrap();
        let c = GroupChainComplex::new(spec.clone(), 0, vec![vec![free]], vec![IntMatrix::zeros(0, 5)]).unwrap();
        assert_eq!(fixed_point_level(&c, "C5").unwrap().dims, vec![1]);
        assert_eq!(fixed_point_level(&c, "e").unwrap().dims, vec![5]);
        let spec = GroupSpec::cyclic(4).unwrap();
        let g = spec.elements();
        let m = PermutationModule::new(&spec, &g, "C2").unwrap();
        let c = GroupChainComplex::new(spec, 0, vec![vec![m]], vec![IntMatrix::zeros(0, 2)]).unwrap();
        assert_eq!(fixed_point_level(&c, "C2").unwrap().dims, vec![2]);
    }

    #[test]
    fn homology_examples() {
        let c = IntChainComplex::new(0, vec![1, 1], vec![IntMatrix::zeros(0, 1), IntMatrix::from_i64_rows(&[vec![2]])]).unwrap();
        assert_eq!(orders(&c.homology(0)), vec![2]);
        assert!(c.homology(1).summands.is_empty());
        let z = IntChainComplex::new(0, vec![0], vec![IntMatrix::zeros(0, 0)]).unwrap();
        assert!(z.homology(0).summands.is_empty());
    }

    #[test]
    fn non_equivariant_boundary_rejected() {
        let spec = GroupSpec::cyclic(3).unwrap();
        let g = spec.elements();
        let free = PermutationModule::new(&spec, &g, "e").unwrap();
        let pt = PermutationModule::new(&spec, &g, "C3").unwrap();
        let bd = IntMatrix::from_i64_rows(&[vec![1, 0, 0]]);
        let r = GroupChainComplex::new(spec, 0, vec![vec![pt], vec![free]], vec![IntMatrix::zeros(0, 1), bd]);
        assert!(matches!(r, Err(Error::Complex(_))));
    }

    #[test]
    fn lambda_sphere_examples() {
        let l = lambda_sphere_complex(3, 1, 1).unwrap();
        assert_eq!(l.m, 1);
        let h = l.underlying_homology().unwrap();
        assert_eq!(orders(&h[0]), vec![0]);
        assert!(h[1].summands.is_empty());
        assert_eq!(orders(&h[2]), vec![0]);
        assert_eq!(orders(&l.reduced_h0("C3").unwrap()), vec![3]);
        let l = lambda_sphere_complex(3, 2, 2).unwrap();
        assert_eq!((l.j, l.m), (0, 5));
        let l = lambda_sphere_complex(3, 2, 3).unwrap();
        assert_eq!(l.j, 1);
        assert_eq!(orders(&l.reduced_h0("C9").unwrap()), vec![3]);
        assert!(lambda_sphere_complex(4, 1, 1).is_err());
        assert!(lambda_sphere_complex(3, 1, 3).is_err());
    }

    #[test]
    fn comparison_examples() {
        let c = comparison_check(3, 1, 1, 2).unwrap();
        assert_eq!((c.s, c.h2_multiplier, c.is_chain_map, c.p_local_iso), (2, 2, true, true));
        let c = comparison_check(3, 2, 1, 4).unwrap();
        assert_eq!(c.s, 7);
        assert_eq!(c.h2_multiplier, 7);
        let c = comparison_check(5, 1, 2, 1).unwrap();
        assert_eq!((c.s, c.h2_multiplier), (1, 1));
        assert!(comparison_check(3, 1, 1, 3).is_err());
    }

    #[test]
    fn sphere_h0_examples() {
        let c5 = GroupSpec::cyclic(5).unwrap();
        let h = sphere_h0_complex(&c5, &c5.parse_rep("lambda(1)").unwrap()).unwrap();
        assert_eq!(orders(&h.h0), vec![5]);
        let s3 = GroupSpec::sigma3();
        let h = sphere_h0_complex(&s3, &s3.parse_rep("sigma+lambda").unwrap()).unwrap();
        assert!(h.h0.summands.is_empty());
        let h = sphere_h0_complex(&c5, &c5.parse_rep("1+lambda(2)").unwrap()).unwrap();
        assert!(h.h0.summands.is_empty());
        assert!(sphere_h0_complex(&c5, &Representation::zero(&c5)).is_err());
    }

    #[test]
    fn oracle_recovers_cp_point_groups() {
        // C_3: M^λ = Z/3 (a_λ), M^{λ-2} = Z (u_λ), M^{2-λ} = Z (3/u_λ)
        let spec = GroupSpec::cyclic(3).unwrap();
        let mut o = SphereOracle::new(&spec);
        let lam = vec![1];
        assert_eq!(iso_type(&o.positive_group(&lam, 0)), vec![3]);
        assert_eq!(iso_type(&o.positive_group(&lam, 2)), vec![0]);
        assert_eq!(iso_type(&o.negative_group(&lam, 2)), vec![0]);
        assert!(o.negative_group(&lam, 1).is_empty());
        // a_λ : M^0 = Z → M^λ = Z/3 is onto
        let step = o.positive_step(&[], 1, 0);
        assert!(step.is_surjective());
        // a_λ · 3/u_λ = 0
        let step = o.negative_step(&[], 1, 2);
        assert!(step.matrix.is_zero());
    }

    #[test]
    fn oracle_models_are_equivariant_complexes() {
        for spec in [GroupSpec::cyclic(4).unwrap(), GroupSpec::sigma3(), GroupSpec::cyclic(9).unwrap()] {
            let mut o = SphereOracle::new(&spec);
            for w in spec.representations_up_to(4) {
                let seq = SphereOracle::sequence(&w);
                let c = o.sphere_complex(&seq).unwrap();
                // underlying reduced homology is Z in degree dim W
                let e = fixed_point_level(&c, "e").unwrap();
                let dim = spec.dim(&w) as i64;
                for n in 0..=c.max_degree() {
                    let expect: Vec<u64> = if n == dim { vec![0] } else { vec![] };
                    assert_eq!(orders(&e.homology(n)), expect, "{} {:?} degree {n}", spec.name(), w);
                }
            }
        }
    }
}
