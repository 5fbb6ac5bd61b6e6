//! Additive charts of `H^⋆(OC_k(V))` assembled from the two splittings:
//!
//! * `V ⊇ 1`: a free `M`-module on `c(k, k-j)` generators in degree `j(V-1)`;
//! * `V^G = 0` with the vanishing requirement: `⊕_j Σ^{j(V-1)} H^⋆(S(V))^{a(k,j)}`.
//!
//! Also the `C_2` ring description in degrees `*(nσ - 1)` and the motivic
//! grid rendering used by the CLI.

use crate::config_ring::{basis_enumerate, reduce_word, Parity, RingElement, RingParams, Strategy};
use crate::error::{Error, Result};
use crate::group_rep::{GroupSpec, Representation};
use crate::linalg::{hermite_rows, smith, to_u64, Int, Lattice};
use crate::point_cohomology::{Degree, GradedGroup, PointCohomology, Summand};
use crate::spheres::{unit_sphere_groups_with, UnitSphereGroup};
use crate::stirling::{a_multiplicity, stirling_c};
use crate::vanishing::{vanishing_sweep_with, DEFAULT_L_RANGE};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Pairs whose splitting holds although the vanishing requirement fails.
#[derive(Clone, Debug, Serialize)]
pub struct CertifiedException {
    pub group: &'static str,
    pub rep: &'static str,
    pub reason: &'static str,
}

pub const CERTIFIED_EXCEPTIONS: &[CertifiedException] = &[CertifiedException {
    group: "C2",
    rep: "2*sigma",
    reason: "obstruction groups are detected by the forgetful map and vanish there, as for 1+sigma",
}];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSummand {
    /// Splitting index: the summand is shifted by `j(V-1)`.
    pub j: usize,
    pub copies: u64,
    /// 0 for `Z`.
    pub order: u64,
    pub label: String,
}

/// A shifted sphere group whose extension is not determined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnresolvedPiece {
    pub j: usize,
    pub copies: u64,
    pub sub: GradedGroup,
    pub quot: GradedGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartEntry {
    pub degree: String,
    pub coeffs: Vec<i64>,
    pub rank: i64,
    /// Signed count of nontrivial irreducible summands.
    pub weight: i64,
    pub summands: Vec<ChartSummand>,
    pub unresolved: Vec<UnresolvedPiece>,
    pub error: Option<String>,
}

impl ChartEntry {
    /// The entry as a group, with every copy listed; `None` when some piece
    /// is unresolved or unsupported.
    pub fn group(&self) -> Option<GradedGroup> {
        if self.error.is_some() || !self.unresolved.is_empty() {
            return None;
        }
        let mut summands = Vec::new();
        for s in &self.summands {
            for _ in 0..s.copies {
                summands.push(Summand { order: s.order, label: s.label.clone() });
            }
        }
        Some(GradedGroup { summands })
    }

    pub fn free_rank(&self) -> u64 {
        self.summands.iter().filter(|s| s.order == 0).map(|s| s.copies).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartKind {
    Free,
    Sphere,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditiveChart {
    pub group: String,
    pub rep: String,
    pub k: usize,
    pub kind: ChartKind,
    /// Multiplicity of the `j`-th shifted summand.
    pub multiplicities: Vec<u64>,
    pub entries: Vec<ChartEntry>,
}

impl AdditiveChart {
    pub fn entry(&self, g: &GroupSpec, d: &Degree) -> Option<&ChartEntry> {
        let name = d.format(g);
        self.entries.iter().find(|e| e.degree == name)
    }
}

/// Every degree whose basis coordinates lie in the given ranges.
pub fn window_box(g: &GroupSpec, ranges: &[(i64, i64)]) -> Result<Vec<Degree>> {
    if ranges.len() != g.rank() {
        return Err(Error::Range(format!("{} ranges for {} basis coordinates", ranges.len(), g.rank())));
    }
    let mut out = vec![Degree::zero(g)];
    for (i, &(lo, hi)) in ranges.iter().enumerate() {
        out = out
            .into_iter()
            .flat_map(|d| {
                (lo..=hi).map(move |c| {
                    let mut d = d.clone();
                    d.coeffs[i] = c;
                    d
                })
            })
            .collect();
    }
    Ok(out)
}

/// `C_2` degrees `p + qσ` drawn at `(x, y) = (p + q, q)` within the ranges.
pub fn motivic_window(g: &GroupSpec, x: (i64, i64), y: (i64, i64)) -> Result<Vec<Degree>> {
    if g.name() != "C2" {
        return Err(Error::Other("motivic windows are defined for C2".into()));
    }
    Ok((y.0..=y.1).flat_map(|q| (x.0..=x.1).map(move |xx| Degree { coeffs: vec![xx - q, q] })).collect())
}

fn entry_shell(g: &GroupSpec, d: &Degree) -> ChartEntry {
    ChartEntry {
        degree: d.format(g),
        coeffs: d.coeffs.clone(),
        rank: d.rank(g),
        weight: d.coeffs.iter().skip(1).sum(),
        summands: Vec::new(),
        unresolved: Vec::new(),
        error: None,
    }
}

fn push_group(e: &mut ChartEntry, j: usize, copies: u64, grp: &GradedGroup) {
    for s in &grp.summands {
        e.summands.push(ChartSummand { j, copies, order: s.order, label: s.label.clone() });
    }
}

fn shift(g: &GroupSpec, v: &Representation) -> Degree {
    Degree::from_rep(v).sub(&Degree::trivial(g, 1))
}

fn to_u64_big(n: num_bigint::BigUint) -> Result<u64> {
    n.to_u64().ok_or_else(|| Error::Cap("multiplicity exceeds u64".into()))
}

pub fn additive_free_chart(g: &GroupSpec, v: &Representation, k: usize, window: &[Degree]) -> Result<AdditiveChart> {
    additive_free_chart_with(&PointCohomology::new(g)?, v, k, window)
}

pub fn additive_free_chart_with(pc: &PointCohomology, v: &Representation, k: usize, window: &[Degree]) -> Result<AdditiveChart> {
    let g = pc.spec();
    if !v.contains_trivial() {
        return Err(Error::Hypothesis(format!("{} does not contain a trivial summand", g.format_rep(v))));
    }
    check_k(k)?;
    let mults: Vec<u64> = (0..k).map(|j| to_u64_big(stirling_c(k, k - j))).collect::<Result<_>>()?;
    let sh = shift(g, v);
    let entries = window
        .iter()
        .map(|d| {
            let mut e = entry_shell(g, d);
            for (j, &m) in mults.iter().enumerate() {
                match pc.group_at(&d.sub(&sh.scale(j as i64))) {
                    Ok(grp) => push_group(&mut e, j, m, &grp),
                    Err(err) => {
                        e.error = Some(err.to_string());
                        break;
                    }
                }
            }
            e
        })
        .collect();
    Ok(AdditiveChart { group: g.name(), rep: g.format_rep(v), k, kind: ChartKind::Free, multiplicities: mults, entries })
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > crate::config_ring::MAX_K {
        return Err(Error::Range(format!("k = {k}")));
    }
    Ok(())
}

pub fn is_certified_exception(g: &GroupSpec, v: &Representation) -> bool {
    CERTIFIED_EXCEPTIONS
        .iter()
        .any(|c| c.group == g.name() && g.parse_rep(c.rep).map(|r| &r == v).unwrap_or(false))
}

pub fn additive_sphere_chart(g: &GroupSpec, v: &Representation, k: usize, window: &[Degree]) -> Result<AdditiveChart> {
    additive_sphere_chart_with(&PointCohomology::new(g)?, v, k, window)
}

pub fn additive_sphere_chart_with(pc: &PointCohomology, v: &Representation, k: usize, window: &[Degree]) -> Result<AdditiveChart> {
    let g = pc.spec();
    if v.contains_trivial() || v.is_zero() {
        return Err(Error::Hypothesis(format!("{} has nonzero fixed points", g.format_rep(v))));
    }
    check_k(k)?;
    if k == 1 {
        // OC_1(V) = V is contractible; the sphere splitting needs a(k, k-1) = 0
        let entries = window
            .iter()
            .map(|d| {
                let mut e = entry_shell(g, d);
                match pc.group_at(d) {
                    Ok(grp) => push_group(&mut e, 0, 1, &grp),
                    Err(err) => e.error = Some(err.to_string()),
                }
                e
            })
            .collect();
        return Ok(AdditiveChart { group: g.name(), rep: g.format_rep(v), k, kind: ChartKind::Sphere, multiplicities: vec![1], entries });
    }
    if !is_certified_exception(g, v) {
        let r = vanishing_sweep_with(pc, v, DEFAULT_L_RANGE.0, DEFAULT_L_RANGE.1)?;
        if !r.overall {
            return Err(Error::VanishingFails(format!("{} for {}: fails at ℓ = {:?}", g.name(), r.rep, r.failing_l)));
        }
    }
    let mults: Vec<u64> = (0..k).map(|j| a_multiplicity(k, j).and_then(to_u64_big)).collect::<Result<_>>()?;
    let sh = shift(g, v);
    let entries = window
        .iter()
        .map(|d| {
            let mut e = entry_shell(g, d);
            for (j, &m) in mults.iter().enumerate() {
                if m == 0 {
                    continue;
                }
                match unit_sphere_groups_with(pc, v, &d.sub(&sh.scale(j as i64))) {
                    Ok(UnitSphereGroup { total: Some(t), .. }) => push_group(&mut e, j, m, &t),
                    Ok(u) => e.unresolved.push(UnresolvedPiece { j, copies: m, sub: u.sub, quot: u.quot }),
                    Err(err) => {
                        e.error = Some(err.to_string());
                        break;
                    }
                }
            }
            e
        })
        .collect();
    Ok(AdditiveChart { group: g.name(), rep: g.format_rep(v), k, kind: ChartKind::Sphere, multiplicities: mults, entries })
}

/// Underlying Betti numbers of a `C_2` chart: `u_{2σ}` lives in motivic
/// position `(0, 2)` and maps to 1, so each `Z` line collapses to one class
/// in degree `x`. Counts `Z` summands in column `x` over the rows `y0, y0+1`.
pub fn c2_underlying_betti(chart: &AdditiveChart, y0: i64) -> Result<BTreeMap<i64, u64>> {
    if chart.group != "C2" {
        return Err(Error::Other("the collapse needs the periodicity class of C2".into()));
    }
    let mut out = BTreeMap::new();
    for e in &chart.entries {
        let y = e.coeffs[1];
        if y != y0 && y != y0 + 1 {
            continue;
        }
        if let Some(err) = &e.error {
            return Err(Error::Unsupported(err.clone()));
        }
        if !e.unresolved.is_empty() {
            return Err(Error::Other(format!("unresolved extension at {}", e.degree)));
        }
        let r = e.free_rank();
        if r > 0 {
            *out.entry(e.rank).or_insert(0) += r;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TLevel {
    pub degree: usize,
    pub rank: usize,
    /// Rank of `2ω_12·T^{degree-1}`, the part killed by `a_σ`.
    pub iota_rank: usize,
    /// Hermite basis of `T^j` in the admissible monomial basis.
    pub generators: Vec<String>,
    /// `H^j / T^j` as invariant factors (1s dropped).
    pub quotient: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct C2SigmaRing {
    pub k: usize,
    pub n: u32,
    pub levels: Vec<TLevel>,
    pub presentation: String,
}

pub const MAX_SIGMA_RING_K: usize = 5;

/// The subring `T` of the classical ring of `OC_k(R^n)` generated by the
/// differences `ω_ij - ω_kl` and the doubles `2ω_ij`, degree by degree.
pub fn c2_sigma_ring(k: usize, n: u32) -> Result<C2SigmaRing> {
    if n < 2 {
        return Err(Error::Range(format!("n = {n} must be at least 2")));
    }
    if k < 2 {
        return Err(Error::Range(format!("k = {k}: OC_1 is contractible")));
    }
    if k > MAX_SIGMA_RING_K {
        return Err(Error::Cap(format!("k = {k} exceeds {MAX_SIGMA_RING_K}")));
    }
    let p = RingParams::new(k, Parity::of(n), 1)?;
    let pairs: Vec<(usize, usize)> = (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect();
    let gen = |i: usize, j: usize| RingElement::generator(p, i, j).unwrap();
    // spanning set of T^1, all orientations
    let mut t1: Vec<RingElement> = Vec::new();
    let oriented: Vec<(usize, usize)> = pairs.iter().flat_map(|&(i, j)| [(i, j), (j, i)]).collect();
    for &(i, j) in &oriented {
        t1.push(gen(i, j).scale(&Int::from(2)));
        for &(kk, l) in &oriented {
            t1.push(gen(i, j).sub(&gen(kk, l))?);
        }
    }
    let d1 = basis_enumerate(k, 1)?.len();
    let t1 = lattice_elements(p, 1, &Lattice::from_rows(d1, &t1.iter().map(|x| x.coordinates(1)).collect::<Result<Vec<_>>>()?))?;
    let mut levels = Vec::new();
    let mut prev_basis: Vec<RingElement> = vec![RingElement::one(p)];
    for j in 0..k {
        let dim = basis_enumerate(k, j)?.len();
        let basis: Vec<RingElement> = if j == 0 {
            vec![RingElement::one(p)]
        } else {
            let mut span = Vec::new();
            for x in &prev_basis {
                for y in &t1 {
                    span.push(x.mul(y)?.coordinates(j)?);
                }
            }
            lattice_elements(p, j, &Lattice::from_rows(dim, &span))?
        };
        let lat = Lattice::from_rows(dim, &basis.iter().map(|b| b.coordinates(j)).collect::<Result<Vec<_>>>()?);
        let iota_rank = if j == 0 {
            0
        } else {
            let iota = gen(1, 2).scale(&Int::from(2));
            let rows: Vec<Vec<Int>> = prev_basis.iter().map(|x| iota.mul(x).and_then(|y| y.coordinates(j))).collect::<Result<_>>()?;
            Lattice::from_rows(dim, &rows).rank()
        };
        let quotient = if lat.rank() == 0 {
            vec![0; dim]
        } else {
            let mut q: Vec<u64> = smith(lat.basis()).diag.iter().filter(|d| !d.is_zero()).map(to_u64).filter(|&d| d != 1).collect();
            q.extend(std::iter::repeat(0).take(dim - lat.rank()));
            q
        };
        levels.push(TLevel {
            degree: j,
            rank: lat.rank(),
            iota_rank,
            generators: basis.iter().map(|b| b.to_string()).collect(),
            quotient,
        });
        prev_basis = basis;
    }
    let presentation = format!(
        "E_{n} ⊗ T with T^j free of ranks {:?}; a_σ kills the {:?} classes 2ω_12·T^(j-1) in each degree j",
        levels.iter().map(|l| l.rank).collect::<Vec<_>>(),
        levels.iter().map(|l| l.iota_rank).collect::<Vec<_>>()
    );
    Ok(C2SigmaRing { k, n, levels, presentation })
}

fn lattice_elements(p: RingParams, j: usize, lat: &Lattice) -> Result<Vec<RingElement>> {
    let h = hermite_rows(lat.basis());
    let basis = basis_enumerate(p.k, j)?;
    (0..h.rows())
        .map(|r| {
            let mut x = RingElement::zero(p);
            for (c, m) in basis.iter().enumerate() {
                if !h[(r, c)].is_zero() {
                    x = x.add(&reduce_word(p, &m.factors, Strategy::Leftmost)?.scale(&h[(r, c)]))?;
                }
            }
            Ok(x)
        })
        .collect()
}

/// `E_n = Z[u^±, a_σ]/(2a_σ, a_σ^n)` in motivic position `(x, y)`.
fn e_n_at(n: u32, x: i64, y: i64) -> Option<u64> {
    if x == 0 && y.rem_euclid(2) == 0 {
        Some(0)
    } else if x >= 1 && x < n as i64 && (y - x).rem_euclid(2) == 0 {
        Some(2)
    } else {
        None
    }
}

impl C2SigmaRing {
    /// Group orders at `p + qσ` predicted by the ring description: each
    /// `T^j` contributes `E_n` on its `a_σ`-free part and `Z[u^±]` on the
    /// classes killed by `a_σ`, shifted by `j(nσ - 1)`.
    pub fn predicted_orders(&self, p: i64, q: i64) -> Vec<u64> {
        let (x, y) = (p + q, q);
        let n = self.n as i64;
        let mut out = Vec::new();
        for l in &self.levels {
            let j = l.degree as i64;
            let (sx, sy) = (x - j * (n - 1), y - j * n);
            if let Some(o) = e_n_at(self.n, sx, sy) {
                out.extend(std::iter::repeat(o).take(l.rank - l.iota_rank));
            }
            if sx == 0 && sy.rem_euclid(2) == 0 {
                out.extend(std::iter::repeat(0).take(l.iota_rank));
            }
        }
        out.sort_unstable();
        out
    }
}

/// One cell of a motivic grid: counts of each summand order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GridCell {
    pub orders: BTreeMap<u64, u64>,
    pub unresolved: bool,
    pub unsupported: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartRendering {
    /// Keyed by `(rank, weight)`.
    pub cells: BTreeMap<(i64, i64), GridCell>,
    pub legend: Vec<(String, String)>,
}

pub fn glyph(order: u64) -> String {
    match order {
        0 => "■".into(),
        2 => "•".into(),
        3 => "▲".into(),
        4 => "⊙".into(),
        n => format!("[{n}]"),
    }
}

impl ChartRendering {
    pub fn from_entries<'a>(entries: impl IntoIterator<Item = (i64, i64, Option<&'a GradedGroup>, bool)>) -> Self {
        let mut cells: BTreeMap<(i64, i64), GridCell> = BTreeMap::new();
        for (x, y, grp, unresolved) in entries {
            let c = cells.entry((x, y)).or_default();
            match grp {
                Some(gr) => {
                    for s in &gr.summands {
                        *c.orders.entry(s.order).or_insert(0) += 1;
                    }
                }
                None if unresolved => c.unresolved = true,
                None => c.unsupported = true,
            }
        }
        let legend = [(0, "Z"), (2, "Z/2"), (3, "Z/3"), (4, "Z/4")]
            .iter()
            .map(|(o, s)| (glyph(*o), s.to_string()))
            .chain([("[n]".into(), "Z/n".into()), ("×m".into(), "m copies".into()), ("?".into(), "unresolved extension".into()), ("-".into(), "not covered by chart data".into())])
            .collect();
        ChartRendering { cells, legend }
    }

    pub fn from_chart(chart: &AdditiveChart) -> Self {
        let groups: Vec<_> = chart.entries.iter().map(|e| (e, e.group())).collect();
        Self::from_entries(groups.iter().map(|(e, g)| (e.rank, e.weight, g.as_ref(), !e.unresolved.is_empty())))
    }

    fn cell_text(c: &GridCell) -> String {
        if c.unsupported {
            return "-".into();
        }
        let mut s = String::new();
        for (o, m) in &c.orders {
            s.push_str(&glyph(*o));
            if *m > 1 {
                s.push_str(&format!("×{m}"));
            }
        }
        if c.unresolved {
            s.push('?');
        }
        if s.is_empty() {
            s.push('·');
        }
        s
    }

    /// Rows from the highest weight down; columns by rank.
    pub fn to_ascii(&self) -> String {
        if self.cells.is_empty() {
            return String::new();
        }
        let xs: Vec<i64> = self.cells.keys().map(|k| k.0).collect();
        let ys: Vec<i64> = self.cells.keys().map(|k| k.1).collect();
        let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
        let text = |x: i64, y: i64| self.cells.get(&(x, y)).map(Self::cell_text).unwrap_or_default();
        let width = (x0..=x1)
            .flat_map(|x| (y0..=y1).map(move |y| (x, y)))
            .map(|(x, y)| text(x, y).chars().count())
            .chain((x0..=x1).map(|x| x.to_string().len()))
            .max()
            .unwrap_or(1);
        let lab = y0.to_string().len().max(y1.to_string().len());
        let pad = |s: &str| format!("{s}{}", " ".repeat(width - s.chars().count()));
        let mut out = String::new();
        for y in (y0..=y1).rev() {
            let row: Vec<String> = (x0..=x1).map(|x| pad(&text(x, y))).collect();
            out.push_str(&format!("{y:>lab$} | {}\n", row.join(" ").trim_end()));
        }
        let cols: Vec<String> = (x0..=x1).map(|x| pad(&x.to_string())).collect();
        out.push_str(&format!("{} +-{}\n", " ".repeat(lab), "-".repeat(cols.len() * (width + 1))));
        out.push_str(&format!("{}   {}\n", " ".repeat(lab), cols.join(" ").trim_end()));
        let legend: Vec<String> = self.legend.iter().map(|(g, m)| format!("{g} {m}")).collect();
        out.push_str(&format!("{}\n", legend.join(", ")));
        out
    }
}

/// Text form of a chart: a header line and the motivic grid. Depends only
/// on the serialized chart.
pub fn render_chart(chart: &AdditiveChart) -> String {
    let kind = match chart.kind {
        ChartKind::Free => "free",
        ChartKind::Sphere => "sphere",
    };
    let mults: Vec<String> = chart.multiplicities.iter().map(|m| m.to_string()).collect();
    format!(
        "OC_{}({}) over {}, {kind} splitting, multiplicities ({})\n{}",
        chart.k,
        chart.rep,
        chart.group,
        mults.join(", "),
        ChartRendering::from_chart(chart).to_ascii()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> GroupSpec {
        GroupSpec::cyclic(2).unwrap()
    }

    fn orders_at(chart: &AdditiveChart, g: &GroupSpec, s: &str) -> Vec<u64> {
        let mut o = chart.entry(g, &Degree::parse(g, s).unwrap()).unwrap().group().unwrap().orders();
        o.sort_unstable();
        o
    }

    #[test]
    fn oc3_two_sigma_values() {
        let g = c2();
        let v = g.parse_rep("2*sigma").unwrap();
        let degs: Vec<Degree> = ["sigma-1", "2*sigma-1", "sigma", "2*sigma", "3*sigma-2", "4*sigma-2", "3*sigma-1"]
            .iter()
            .map(|s| Degree::parse(&g, s).unwrap())
            .collect();
        let ch = additive_sphere_chart(&g, &v, 3, &degs).unwrap();
        assert!(orders_at(&ch, &g, "sigma-1").is_empty());
        assert_eq!(orders_at(&ch, &g, "2*sigma-1"), vec![0, 0, 0]);
        assert_eq!(orders_at(&ch, &g, "sigma"), vec![2]);
        assert_eq!(orders_at(&ch, &g, "2*sigma"), vec![0, 0]);
        assert_eq!(orders_at(&ch, &g, "3*sigma-2"), vec![2]);
        assert_eq!(orders_at(&ch, &g, "4*sigma-2"), vec![0, 0]);
        assert_eq!(orders_at(&ch, &g, "3*sigma-1"), vec![2, 2]);
    }

    #[test]
    fn gate_refuses_failing_pairs() {
        let g = GroupSpec::cyclic(3).unwrap();
        let e = additive_sphere_chart(&g, &g.parse_rep("lambda(1)").unwrap(), 3, &[]).unwrap_err();
        assert!(matches!(e, Error::VanishingFails(ref m) if m.contains("-2")), "{e}");
        assert!(additive_sphere_chart(&g, &g.parse_rep("2*lambda(1)").unwrap(), 3, &[]).is_ok());
        assert!(additive_sphere_chart(&g, &g.parse_rep("1+lambda(1)").unwrap(), 3, &[]).is_err());
    }

    #[test]
    fn free_chart_examples() {
        let g = c2();
        let v = g.parse_rep("1+sigma").unwrap();
        let w = motivic_window(&g, (-3, 3), (-3, 3)).unwrap();
        let one = additive_free_chart(&g, &v, 1, &w).unwrap();
        let pc = PointCohomology::new(&g).unwrap();
        for (e, d) in one.entries.iter().zip(&w) {
            assert_eq!(e.group().unwrap().orders(), pc.group_at(d).unwrap().orders());
        }
        let ch = additive_free_chart(&g, &v, 3, &w).unwrap();
        assert_eq!(ch.multiplicities, vec![1, 3, 2]);
        let e = ch.entry(&g, &Degree::parse(&g, "2*sigma").unwrap()).unwrap();
        assert_eq!(e.free_rank(), 2);
        assert!(e.summands.iter().any(|s| s.j < 2 && s.order == 2));
    }

    #[test]
    fn sigma_ring_examples() {
        let r = c2_sigma_ring(3, 2).unwrap();
        assert_eq!(r.levels[1].rank, 3);
        assert_eq!(r.levels[1].quotient, vec![2]);
        assert_eq!(r.levels[2].generators, vec!["2*w(1,2)*w(1,3)", "2*w(1,2)*w(2,3)"]);
        assert_eq!(r.levels[2].quotient, vec![2, 2]);
        let r = c2_sigma_ring(2, 2).unwrap();
        assert_eq!(r.levels[1].generators, vec!["2*w(1,2)"]);
        assert!(c2_sigma_ring(6, 2).is_err());
        assert!(c2_sigma_ring(1, 2).is_err());
    }

    #[test]
    fn grid_rendering() {
        let g = c2();
        let v = g.parse_rep("2*sigma").unwrap();
        let ch = additive_sphere_chart(&g, &v, 3, &motivic_window(&g, (0, 2), (0, 1)).unwrap()).unwrap();
        let r = ChartRendering::from_chart(&ch);
        // degree 1 gets Z from j = 0 and two Z from j = 1
        assert_eq!(ChartRendering::cell_text(&r.cells[&(1, 0)]), "■×3");
        assert_eq!(ChartRendering::cell_text(&r.cells[&(0, 0)]), "■");
        let txt = r.to_ascii();
        assert!(txt.lines().next().unwrap().starts_with("1 |"), "{txt}");
    }
}
