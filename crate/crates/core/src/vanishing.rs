//! The vanishing requirement: for every integer `ℓ`,
//!
//! ```text
//! M^{ℓV-ℓ} --a_V--> M^{(ℓ+1)V-ℓ} --a_V--> M^{(ℓ+2)V-ℓ}
//! ```
//!
//! has a surjective first map and an injective second map.

use crate::error::{Error, Result};
use crate::group_rep::{GroupSpec, Representation};
use crate::point_cohomology::{normalize_degree, Degree, GradedGroup, PointCohomology};
use crate::spheres::unit_sphere_groups_with;
use serde::Serialize;

pub const DEFAULT_L_RANGE: (i64, i64) = (-12, 12);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingRecord {
    pub l: i64,
    pub first_map_surjective: bool,
    pub second_map_injective: bool,
    pub middle_group: GradedGroup,
}

impl VanishingRecord {
    pub fn passes(&self) -> bool {
        self.first_map_surjective && self.second_map_injective
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    pub group: String,
    pub rep: String,
    /// Set when chart lookup used a different but equivalent representation.
    pub normalized_rep: Option<String>,
    pub records: Vec<VanishingRecord>,
    pub overall: bool,
    pub failing_l: Vec<i64>,
}

/// `ℓV - ℓ + kV`.
fn degree(g: &GroupSpec, v: &Representation, l: i64, k: i64) -> Degree {
    Degree::from_rep(v).scale(l + k).sub(&Degree::trivial(g, l))
}

fn locate(which: &str, d: &Degree, g: &GroupSpec, e: Error) -> Error {
    match e {
        Error::Unsupported(m) => Error::Unsupported(format!("{which} degree {} ({m})", d.format(g))),
        e => e,
    }
}

pub fn vanishing_at(g: &GroupSpec, v: &Representation, l: i64) -> Result<VanishingRecord> {
    vanishing_at_with(&PointCohomology::new(g)?, v, l)
}

pub fn vanishing_at_with(pc: &PointCohomology, v: &Representation, l: i64) -> Result<VanishingRecord> {
    let g = pc.spec();
    if v.is_zero() {
        return Err(Error::ZeroRepresentation);
    }
    let d0 = degree(g, v, l, 0);
    let d1 = degree(g, v, l, 1);
    let middle = pc.group_at(&d1).map_err(|e| locate("middle", &d1, g, e))?;
    if v.contains_trivial() {
        // a_V = 0, so both conditions say the middle group vanishes
        let ok = middle.is_trivial();
        return Ok(VanishingRecord { l, first_map_surjective: ok, second_map_injective: ok, middle_group: middle });
    }
    let first = pc.euler_mult(&d0, v).map_err(|e| locate("first", &d0, g, e))?;
    let second = pc.euler_mult(&d1, v).map_err(|e| locate("last", &degree(g, v, l, 2), g, e))?;
    Ok(VanishingRecord {
        l,
        first_map_surjective: first.is_surjective(),
        second_map_injective: second.is_injective(),
        middle_group: middle,
    })
}

pub fn vanishing_sweep(g: &GroupSpec, v: &Representation, l_min: i64, l_max: i64) -> Result<VanishingReport> {
    vanishing_sweep_with(&PointCohomology::new(g)?, v, l_min, l_max)
}

pub fn vanishing_sweep_with(pc: &PointCohomology, v: &Representation, l_min: i64, l_max: i64) -> Result<VanishingReport> {
    let g = pc.spec();
    if l_min > l_max {
        return Err(Error::Range(format!("empty range [{l_min}, {l_max}]")));
    }
    let records = (l_min..=l_max).map(|l| vanishing_at_with(pc, v, l)).collect::<Result<Vec<_>>>()?;
    let failing_l: Vec<i64> = records.iter().filter(|r| !r.passes()).map(|r| r.l).collect();
    let n = normalize_degree(g, &Degree::from_rep(v));
    let normalized_rep = (n != Degree::from_rep(v)).then(|| n.format(g));
    Ok(VanishingReport {
        group: g.name(),
        rep: g.format_rep(v),
        normalized_rep,
        overall: failing_l.is_empty(),
        failing_l,
        records,
    })
}

/// Whether `H^{ℓ(V-1)+V}(S(V)) = 0`.
///
/// From the long exact sequence this holds exactly when the first map of
/// [`vanishing_at`] at `ℓ` is surjective and the second map at `ℓ - 1` is
/// injective; over all `ℓ` both formulations agree.
pub fn sphere_crosscheck(g: &GroupSpec, v: &Representation, l: i64) -> Result<bool> {
    sphere_crosscheck_with(&PointCohomology::new(g)?, v, l)
}

pub fn sphere_crosscheck_with(pc: &PointCohomology, v: &Representation, l: i64) -> Result<bool> {
    let alpha = degree(pc.spec(), v, l, 1);
    Ok(unit_sphere_groups_with(pc, v, &alpha)?.is_zero())
}
