//! Cohomology of representation spheres and of unit spheres.
//!
//! `H^★(S^W)` is the free `M`-module on `1` and `ι_W`, with `ι_W² = a_W ι_W`.
//! An element in degree `α` is stored as `base + top·ι_W` with `base ∈ M^α`
//! and `top ∈ M^{α-W}`, both as coordinates in the class bases of
//! [`PointCohomology`]. Only Euler classes act on `M` here, so a product
//! needs one factor whose coefficients are multiples of Euler classes (that
//! is, lie in honest degrees).

use crate::error::{Error, Result};
use crate::group_rep::{GroupKind, GroupSpec, IrrKind, Representation};
use crate::linalg::{reduce_mod, Int, Presented};
use crate::point_cohomology::{Class, Degree, GradedGroup, PointCohomology, Summand};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereElement {
    pub ambient: Representation,
    pub degree: Degree,
    /// Coordinates in the classes of `M^α`.
    pub base: Vec<Int>,
    /// Coordinates in the classes of `M^{α-W}`, multiplying `ι_W`.
    pub top: Vec<Int>,
}

impl SphereElement {
    pub fn is_zero(&self) -> bool {
        self.base.iter().chain(&self.top).all(Zero::is_zero)
    }
}

/// `H^★(S^W)` for a fixed `W`.
#[derive(Clone, Debug)]
pub struct SphereCohomology {
    pc: PointCohomology,
    w: Representation,
}

fn orders(classes: &[Class]) -> Vec<Int> {
    classes.iter().map(|c| Int::from(c.order)).collect()
}

fn reduce(v: &[Int], ord: &[Int]) -> Vec<Int> {
    v.iter().zip(ord).map(|(x, o)| reduce_mod(x, o)).collect()
}

fn sign(e: i64) -> Int {
    if e.rem_euclid(2) == 0 {
        Int::one()
    } else {
        -Int::one()
    }
}

impl SphereCohomology {
    pub fn new(g: &GroupSpec, w: &Representation) -> Result<SphereCohomology> {
        Ok(SphereCohomology { pc: PointCohomology::new(g)?, w: w.clone() })
    }

    pub fn with_point(pc: &PointCohomology, w: &Representation) -> SphereCohomology {
        SphereCohomology { pc: pc.clone(), w: w.clone() }
    }

    pub fn point(&self) -> &PointCohomology {
        &self.pc
    }

    pub fn ambient(&self) -> &Representation {
        &self.w
    }

    fn g(&self) -> &GroupSpec {
        self.pc.spec()
    }

    fn w_rank(&self) -> i64 {
        self.g().dim(&self.w) as i64
    }

    /// Bases of `M^α` and `M^{α-W}`.
    pub fn bases(&self, alpha: &Degree) -> Result<(Vec<Class>, Vec<Class>)> {
        Ok((self.pc.classes_at(alpha)?, self.pc.classes_at(&alpha.minus_rep(&self.w))?))
    }

    pub fn element(&self, alpha: &Degree, base: Vec<Int>, top: Vec<Int>) -> Result<SphereElement> {
        let (b, t) = self.bases(alpha)?;
        if base.len() != b.len() || top.len() != t.len() {
            return Err(Error::Other(format!(
                "coordinate lengths ({}, {}) do not match M^α ⊕ M^(α-W) = ({}, {})",
                base.len(),
                top.len(),
                b.len(),
                t.len()
            )));
        }
        Ok(SphereElement {
            ambient: self.w.clone(),
            degree: alpha.clone(),
            base: reduce(&base, &orders(&b)),
            top: reduce(&top, &orders(&t)),
        })
    }

    pub fn one(&self) -> Result<SphereElement> {
        let z = Degree::zero(self.g());
        let (_, t) = self.bases(&z)?;
        self.element(&z, vec![Int::one()], vec![Int::zero(); t.len()])
    }

    pub fn iota(&self) -> Result<SphereElement> {
        let a = Degree::from_rep(&self.w);
        let (b, _) = self.bases(&a)?;
        self.element(&a, vec![Int::zero(); b.len()], vec![Int::one()])
    }

    /// `a_V` in the base part.
    pub fn euler(&self, v: &Representation) -> Result<SphereElement> {
        let a = Degree::from_rep(v);
        let gen = self.euler_generator(v)?;
        let (_, t) = self.bases(&a)?;
        self.element(&a, gen, vec![Int::zero(); t.len()])
    }

    /// Coordinates of `a_V` in the classes of `M^V`.
    fn euler_generator(&self, v: &Representation) -> Result<Vec<Int>> {
        let h = self.pc.euler_mult(&Degree::zero(self.g()), v)?;
        Ok(h.matrix.column(0))
    }

    /// `k·a_V · x` for `x ∈ M^β`.
    fn act(&self, beta: &Degree, k: &Int, v: &Representation, x: &[Int]) -> Result<Vec<Int>> {
        let h = self.pc.euler_mult(beta, v)?;
        let y: Vec<Int> = h.matrix.mul_vec(x).into_iter().map(|c| c * k).collect();
        Ok(reduce(&y, &h.tgt))
    }

    /// Writes `x ∈ M^α` as `k·a_V` when `α = V` is honest.
    fn euler_factor(&self, alpha: &Degree, x: &[Int]) -> Result<Option<(Int, Representation)>> {
        let Some(v) = alpha.as_rep() else {
            return Ok(x.iter().all(Zero::is_zero).then(|| (Int::zero(), Representation::zero(self.g()))));
        };
        let gen = self.euler_generator(&v)?;
        let ord = orders(&self.pc.classes_at(alpha)?);
        if ord.iter().any(Zero::is_zero) {
            // only M^0 = Z
            let k = &x[0] / &gen[0];
            return Ok((&k * &gen[0] == x[0]).then_some((k, v)));
        }
        let bound = ord.iter().fold(Int::one(), |a, o| a.lcm(o));
        let mut k = Int::zero();
        while k < bound {
            let cand: Vec<Int> = gen.iter().map(|g| g * &k).collect();
            if reduce(&cand, &ord) == x {
                return Ok(Some((k, v)));
            }
            k += 1;
        }
        Ok(None)
    }

    /// `x·y`, skew-commutative in the rank of the degrees.
    pub fn mult(&self, x: &SphereElement, y: &SphereElement) -> Result<SphereElement> {
        if let Some(z) = self.mult_euler_left(x, y)? {
            return Ok(z);
        }
        if let Some(z) = self.mult_euler_left(y, x)? {
            let s = sign(x.degree.rank(self.g()) * y.degree.rank(self.g()));
            let base = z.base.iter().map(|c| c * &s).collect();
            let top = z.top.iter().map(|c| c * &s).collect();
            return self.element(&z.degree, base, top);
        }
        Err(Error::Other("sphere products need a factor whose coefficients are Euler classes".into()))
    }

    fn mult_euler_left(&self, x: &SphereElement, y: &SphereElement) -> Result<Option<SphereElement>> {
        let g = self.g();
        let Some((k1, v1)) = self.euler_factor(&x.degree, &x.base)? else { return Ok(None) };
        let xt = x.degree.minus_rep(&self.w);
        let Some((k2, v2)) = self.euler_factor(&xt, &x.top)? else { return Ok(None) };
        let beta = &y.degree;
        let bt = beta.minus_rep(&self.w);
        let alpha = x.degree.add(beta);
        let (b, t) = self.bases(&alpha)?;
        let mut base = vec![Int::zero(); b.len()];
        let mut top = vec![Int::zero(); t.len()];
        let add = |acc: &mut Vec<Int>, v: Vec<Int>| acc.iter_mut().zip(v).for_each(|(a, c)| *a += c);
        if !k1.is_zero() {
            add(&mut base, self.act(beta, &k1, &v1, &y.base)?);
            add(&mut top, self.act(&bt, &k1, &v1, &y.top)?);
        }
        if !k2.is_zero() {
            // t1 ι b2 = ± t1 b2 ι and t1 ι t2 ι = ± t1 t2 a_W ι
            let s = sign(self.w_rank() * beta.rank(g));
            add(&mut top, self.act(beta, &(&k2 * &s), &v2, &y.base)?);
            let s = sign(self.w_rank() * bt.rank(g));
            add(&mut top, self.act(&bt, &(&k2 * &s), &v2.add(&self.w), &y.top)?);
        }
        Ok(Some(self.element(&alpha, base, top)?))
    }

    /// `A^*`: fixes `M` and sends `ι_W` to `(-1)^{|W|+1} ι_W + a_W`.
    pub fn antipodal(&self, x: &SphereElement) -> Result<SphereElement> {
        let xt = x.degree.minus_rep(&self.w);
        let mut base = x.base.clone();
        let extra = self.act(&xt, &Int::one(), &self.w, &x.top)?;
        base.iter_mut().zip(extra).for_each(|(a, c)| *a += c);
        let s = sign(self.w_rank() + 1);
        let top = x.top.iter().map(|c| c * &s).collect();
        self.element(&x.degree, base, top)
    }

    /// `(ψ(base), ψ(top))`: the underlying nonequivariant coefficients of
    /// `1` and of the fundamental class of `S^{|W|}`.
    pub fn psi(&self, x: &SphereElement) -> Result<(Int, Int)> {
        let (b, t) = self.bases(&x.degree)?;
        let dot = |v: &[Int], c: &[Class]| v.iter().zip(c).map(|(a, k)| a * k.psi).sum::<Int>();
        Ok((dot(&x.base, &b), dot(&x.top, &t)))
    }

    /// Pulls back along `S^K → S^W` for `W = K ⊕ L`: `ι_W ↦ ι_K·a_L`.
    pub fn restrict(&self, x: &SphereElement, k: &Representation) -> Result<(SphereCohomology, SphereElement)> {
        if !k.contains_trivial() {
            return Err(Error::Hypothesis(format!("K = {} must contain a trivial summand", self.g().format_rep(k))));
        }
        let l = self
            .w
            .checked_sub(k)
            .ok_or_else(|| Error::Hypothesis(format!("{} is not a summand of W", self.g().format_rep(k))))?;
        let small = SphereCohomology::with_point(&self.pc, k);
        let xt = x.degree.minus_rep(&self.w);
        let top = self.act(&xt, &Int::one(), &l, &x.top)?;
        let el = small.element(&x.degree, x.base.clone(), top)?;
        Ok((small, el))
    }

    /// Human-readable form, e.g. `a_σ + 2·ι`.
    pub fn describe(&self, x: &SphereElement) -> Result<String> {
        let (b, t) = self.bases(&x.degree)?;
        let mut labels: Vec<String> = b.iter().map(|c| c.label.clone()).collect();
        labels.extend(t.iter().map(|c| if c.label == "1" { "ι".to_string() } else { format!("{}·ι", c.label) }));
        let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
        let coords: Vec<Int> = x.base.iter().chain(&x.top).cloned().collect();
        Ok(combination_of(&coords, &labels).unwrap_or_else(|| "0".into()))
    }
}

/// `Σ c_i·label_i`, or `None` for the zero vector.
fn combination_of(v: &[Int], labels: &[&str]) -> Option<String> {
    let mut s = String::new();
    for (c, l) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let term = if c.is_one() {
            l.to_string()
        } else if *c == -Int::one() {
            format!("-{l}")
        } else {
            format!("{c}·{l}")
        };
        match (s.is_empty(), term.strip_prefix('-')) {
            (true, _) => s.push_str(&term),
            (false, Some(t)) => {
                s.push_str(" - ");
                s.push_str(t);
            }
            (false, None) => {
                s.push_str(" + ");
                s.push_str(&term);
            }
        }
    }
    (!s.is_empty()).then_some(s)
}

/// `x·y` in `H^★(S^W)` for the ambient of `x`.
pub fn sphere_mult(g: &GroupSpec, x: &SphereElement, y: &SphereElement) -> Result<SphereElement> {
    if x.ambient != y.ambient {
        return Err(Error::Other("factors live on different spheres".into()));
    }
    SphereCohomology::new(g, &x.ambient)?.mult(x, y)
}

pub fn antipodal_pullback(g: &GroupSpec, x: &SphereElement) -> Result<SphereElement> {
    SphereCohomology::new(g, &x.ambient)?.antipodal(x)
}

/// The image of `ι_{K⊕L}` in `H^{K+L}(S^K)`, namely `ι_K·a_L`.
pub fn iota_restrict(g: &GroupSpec, k: &Representation, l: &Representation) -> Result<SphereElement> {
    let big = SphereCohomology::new(g, &k.add(l))?;
    let (_, el) = big.restrict(&big.iota()?, k)?;
    Ok(el)
}

/// How much of `H^α(S(V))` is determined by its two pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extension {
    /// The extension is forced to split.
    SplitKnown,
    /// Only the two pieces are known.
    Unknown,
    /// The group is read off a known ring structure.
    ExactRingKnown,
}

/// `0 → sub → H^α(S(V)) → quot → 0` from the long exact sequence of the
/// cofibre sequence `S(V)_+ → S^0 → S^V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitSphereGroup {
    /// `coker(a_V : M^{α-V} → M^α)`.
    pub sub: GradedGroup,
    /// `ker(a_V : M^{α+1-V} → M^{α+1})`.
    pub quot: GradedGroup,
    pub extension: Extension,
    /// The whole group when the extension is resolved.
    pub total: Option<GradedGroup>,
}

impl UnitSphereGroup {
    pub fn is_zero(&self) -> bool {
        self.sub.is_trivial() && self.quot.is_trivial()
    }
}

fn presented_group(p: &Presented, labels: &[&str], wrap: impl Fn(String) -> String) -> GradedGroup {
    GradedGroup {
        summands: p
            .orders
            .iter()
            .zip(&p.gens)
            .map(|(o, gen)| {
                // positive generator: first nonzero coordinate positive
                let flip = gen.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
                let v: Vec<Int> = gen.iter().map(|c| if flip { -c } else { c.clone() }).collect();
                let v: Vec<Int> = if o.is_zero() { v } else { v.iter().map(|c| reduce_mod(c, o)).collect() };
                let name = combination_of(&v, labels).unwrap_or_else(|| "0".into());
                Summand { order: crate::linalg::to_u64(o), label: wrap(name) }
            })
            .collect(),
    }
}

pub fn unit_sphere_groups(g: &GroupSpec, v: &Representation, alpha: &Degree) -> Result<UnitSphereGroup> {
    unit_sphere_groups_with(&PointCohomology::new(g)?, v, alpha)
}

pub fn unit_sphere_groups_with(pc: &PointCohomology, v: &Representation, alpha: &Degree) -> Result<UnitSphereGroup> {
    let g = pc.spec();
    if v.is_zero() {
        return Err(Error::ZeroRepresentation);
    }
    let labels = |c: &[Class]| c.iter().map(|x| x.label.clone()).collect::<Vec<_>>();
    let a1 = alpha.add(&Degree::trivial(g, 1)).minus_rep(v);
    let (sub, quot) = if v.contains_trivial() {
        // a_V = 0: both maps vanish
        let s = pc.group_at(alpha)?;
        let q = pc.group_at(&a1)?;
        let q = GradedGroup {
            summands: q.summands.into_iter().map(|s| Summand { order: s.order, label: format!("ι[{}]", s.label) }).collect(),
        };
        (s, q)
    } else {
        let h1 = pc.euler_mult(&alpha.minus_rep(v), v)?;
        let tl = labels(&pc.classes_at(alpha)?);
        let tl: Vec<&str> = tl.iter().map(String::as_str).collect();
        let sub = presented_group(&h1.cokernel(), &tl, |s| s);
        let h2 = pc.euler_mult(&a1, v)?;
        let sl = labels(&pc.classes_at(&a1)?);
        let sl: Vec<&str> = sl.iter().map(String::as_str).collect();
        let quot = presented_group(&h2.kernel(), &sl, |s| format!("ι[{s}]"));
        (sub, quot)
    };
    let only_sigma = matches!(g.kind, GroupKind::Cyclic(2))
        && g.irreducibles.iter().zip(&v.mult).all(|(i, &m)| i.kind == IrrKind::Sigma || m == 0);
    if only_sigma {
        let q = v.mult[g.irreducible_index(IrrKind::Sigma).expect("C2 has sigma")];
        let total = c2_unit_sphere_ring(q, alpha)?;
        return Ok(UnitSphereGroup { sub, quot, extension: Extension::ExactRingKnown, total: Some(total) });
    }
    let split = sub.is_trivial()
        || quot.is_trivial()
        || quot.summands.iter().all(|s| s.order == 0)
        || sub.cardinality().is_some_and(|n| {
            let tors = quot.summands.iter().filter(|s| s.order != 0).fold(num_bigint::BigUint::one(), |a, s| a * s.order);
            n.gcd(&tors).is_one()
        });
    if split {
        let mut total = sub.clone();
        total.summands.extend(quot.summands.iter().cloned());
        Ok(UnitSphereGroup { sub, quot, extension: Extension::SplitKnown, total: Some(total) })
    } else {
        Ok(UnitSphereGroup { sub, quot, extension: Extension::Unknown, total: None })
    }
}

/// `H^α(S(qσ))` over `C_2` from the ring `E_q[ι]/(a_σ ι, ι²)`, where
/// `E_q = M[u^{-1}]/(a_σ^q)`, `u = u_{2σ}` and `|ι| = qσ - 1`.
pub fn c2_unit_sphere_ring(q: u32, alpha: &Degree) -> Result<GradedGroup> {
    if q == 0 {
        return Err(Error::Range("q must be at least 1".into()));
    }
    if alpha.coeffs.len() != 2 {
        return Err(Error::Parse("C2 degrees have two coefficients (1, σ)".into()));
    }
    let (a, b) = (alpha.coeffs[0], alpha.coeffs[1]);
    let mono = |x: i64, rest: &str| -> String {
        let u = match x {
            0 => String::new(),
            1 => "u".into(),
            x => format!("u^{x}"),
        };
        match (u.is_empty(), rest.is_empty()) {
            (true, true) => "1".into(),
            (true, false) => rest.into(),
            (false, true) => u,
            (false, false) => format!("{u}·{rest}"),
        }
    };
    let mut summands = Vec::new();
    if a % 2 == 0 {
        let x = -a / 2;
        let y = b + a;
        if (0..q as i64).contains(&y) {
            let rest = match y {
                0 => String::new(),
                1 => "a_σ".into(),
                y => format!("a_σ^{y}"),
            };
            summands.push(Summand { order: if y == 0 { 0 } else { 2 }, label: mono(x, &rest) });
        }
    } else {
        let x = (-a - 1) / 2;
        if 2 * x + q as i64 == b {
            summands.push(Summand { order: 0, label: mono(x, "ι") });
        }
    }
    Ok(GradedGroup { summands })
}
