//! One PASS/FAIL line per acceptance criterion. Each criterion is evaluated
//! in full and the outcome is compared with the expected-outcome table at the
//! bottom; a criterion that is known not to hold is reported as FAIL rather
//! than weakened.

mod common;

use std::io::Write;
use std::time::Instant;

use bredon::config_ring::{
    basis_enumerate, confluence_audit, forgetful_classical, reduce, reduce_word, Parity, RingElement, RingParams, Restriction, Strategy,
};
use bredon::group_rep::GroupSpec;
use bredon::linalg::Int;
use bredon::mackey_homology::{comparison_check, lambda_sphere_complex, sphere_h0_complex};
use bredon::oc_assembly::{additive_free_chart, additive_sphere_chart, c2_sigma_ring, c2_underlying_betti, motivic_window};
use bredon::point_cohomology::{group_at_degree, Degree, PointCohomology};
use bredon::spheres::unit_sphere_groups;
use bredon::stirling::{a_multiplicity, stirling_c};
use bredon::vanishing::{sphere_crosscheck_with, vanishing_at_with, vanishing_sweep_with};
use bredon::varchenko_gelfand::{delta_basis_determinant, eval_poly, filtration_ranks, p_sigma, permutations, SigmaFunction};
use common::*;
use num_traits::{Signed, ToPrimitive};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Collects the first few discrepancies of a criterion.
#[derive(Default)]
struct Check {
    failures: Vec<String>,
    count: usize,
    checked: usize,
}

impl Check {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.count += 1;
            if self.failures.len() < 4 {
                self.failures.push(what());
            }
        }
    }

    fn passed(&self) -> bool {
        self.count == 0
    }

    fn detail(&self) -> String {
        if self.passed() {
            format!("{} checks", self.checked)
        } else {
            format!("{} of {} checks failed: {}", self.count, self.checked, self.failures.join("; "))
        }
    }
}

fn c2() -> GroupSpec {
    GroupSpec::cyclic(2).unwrap()
}

fn criterion_1() -> Check {
    let mut c = Check::default();
    let s3 = GroupSpec::sigma3();
    for (rep, d, e) in [("sigma", 2, 2), ("lambda", 3, 6), ("sigma+lambda", 1, 6)] {
        let v = s3.parse_rep(rep).unwrap();
        let got = (s3.d(&v).unwrap(), s3.e_invariant(&v));
        c.expect(got == (d, e), || format!("Sigma3 {rep}: (d, e) = {got:?}"));
    }
    for n in 2..=12u32 {
        let g = GroupSpec::cyclic(n).unwrap();
        // C2 has no 2-dimensional irreducible; its rotation plane is 2σ
        let v = g.parse_rep(if n == 2 { "2*sigma" } else { "lambda(1)" }).unwrap();
        let d = g.d(&v).unwrap();
        c.expect(d == n, || format!("C{n}: d(lambda(1)) = {d}"));
    }
    for g in catalog() {
        let irr: Vec<_> = (0..g.rank()).map(|i| bredon::group_rep::Representation::irreducible(&g, i)).collect();
        for v in &irr {
            for w in &irr {
                let lhs = g.d(&v.add(w)).unwrap();
                let rhs = num_integer::gcd(g.d(v).unwrap(), g.d(w).unwrap());
                c.expect(lhs == rhs, || format!("{}: d({} + {}) = {lhs}, gcd = {rhs}", g.name(), g.format_rep(v), g.format_rep(w)));
            }
        }
    }
    c
}

fn criterion_2() -> Check {
    let mut c = Check::default();
    for g in catalog() {
        for v in g.representations_up_to(7).into_iter().filter(|v| g.dim(v) % 2 == 1) {
            let d = g.d(&v).unwrap();
            c.expect(d == 1 || d == 2, || format!("{} {}: d = {d}", g.name(), g.format_rep(&v)));
        }
    }
    c
}

fn criterion_3() -> Check {
    let mut c = Check::default();
    for g in catalog() {
        let one = g.parse_rep("1").unwrap();
        for w in g.representations_up_to(6).into_iter().filter(|w| !w.is_zero()) {
            let name = format!("{} {}", g.name(), g.format_rep(&w));
            let d = g.d(&w).unwrap() as u64;
            let at_w = group_at_degree(&g, &Degree::from_rep(&w)).unwrap();
            let order = at_w.invariant_factors().iter().product::<u64>();
            c.expect(at_w.free_rank() == 0 && order == d, || format!("{name}: M^W = {at_w}"));
            // a_W generates M^W, so (1 - (-1)^|W|) a_W = 0 says d(W) | 1 - (-1)^|W|
            let sign_factor = if g.dim(&w) % 2 == 1 { 2 } else { 0 };
            c.expect(sign_factor % d == 0, || format!("{name}: d = {d} does not divide {sign_factor}"));
            let minus = Degree::from_rep(&w).neg();
            if let Ok(h) = group_at_degree(&g, &minus) {
                c.expect(h.is_trivial(), || format!("{name}: M^(-W) = {h}"));
            }
            if w != one {
                if let Ok(h) = group_at_degree(&g, &minus.add(&Degree::trivial(&g, 1))) {
                    c.expect(h.is_trivial(), || format!("{name}: M^(1-W) = {h}"));
                }
            }
        }
    }
    c
}

fn criterion_4() -> Check {
    let mut c = Check::default();
    for g in charted() {
        let pc = PointCohomology::new(&g).unwrap();
        let two = g.parse_rep("2").unwrap();
        let plane = g.parse_rep(if g.name() == "C2" { "2*sigma" } else { "lambda" }).ok().filter(|v| g.is_orientable(v));
        for v in g.representations_up_to(6).into_iter().filter(|v| !v.is_zero()) {
            let name = format!("{} {}", g.name(), g.format_rep(&v));
            let dim = g.dim(&v);
            let report = vanishing_sweep_with(&pc, &v, -12, 12).unwrap();
            if v.contains_trivial() && v != two {
                c.expect(report.overall, || format!("{name} fails at {:?}", report.failing_l));
            }
            if !v.contains_trivial() && (3..=6).contains(&dim) {
                c.expect(report.overall, || format!("{name} fails at {:?}", report.failing_l));
            }
            if Some(&v) == plane.as_ref() {
                c.expect(report.failing_l == vec![-2], || format!("{name} fails at {:?}, not exactly at -2", report.failing_l));
            }
            if dim <= 4 {
                for l in -12..=12 {
                    let direct = vanishing_at_with(&pc, &v, l).unwrap().passes();
                    let sphere = sphere_crosscheck_with(&pc, &v, l).unwrap();
                    c.expect(direct == sphere, || format!("{name} at l = {l}: vanishing_at {direct}, sphere {sphere}"));
                }
            }
        }
    }
    c
}

fn ring_param_sets() -> [(Parity, u64); 4] {
    [(Parity::Even, 2), (Parity::Even, 1), (Parity::Odd, 1), (Parity::Odd, 3)]
}

fn criterion_5() -> Check {
    let mut c = Check::default();
    for k in 1..=5 {
        for (par, d) in ring_param_sets() {
            let p = RingParams::new(k, par, d).unwrap();
            for j in 0..k {
                let basis = basis_enumerate(k, j).unwrap();
                let expect = stirling_c(k, k - j).to_usize().unwrap();
                c.expect(basis.len() == expect, || format!("k={k} j={j}: {} basis monomials", basis.len()));
                for m in &basis {
                    let nf = reduce_word(p, &m.factors, Strategy::Leftmost).unwrap();
                    let coords = nf.coordinates(j).unwrap();
                    let unit = coords.iter().filter(|x| x.abs() == Int::from(1)).count() == 1
                        && coords.iter().filter(|x| **x != Int::from(0)).count() == 1;
                    c.expect(unit, || format!("k={k} {par:?}: basis monomial {m} is not a normal form"));
                }
            }
            if k >= 2 {
                let x = reduce(p, "w(1,2)*w(2,1)").unwrap();
                c.expect(x.is_zero(), || format!("k={k} {par:?} d={d}: w(1,2)*w(2,1) = {x}"));
            }
            if k >= 3 {
                let x = reduce(p, "(w(1,2) - w(1,3))*(w(2,1) - w(2,3))").unwrap();
                c.expect(x.is_zero(), || format!("k={k} {par:?} d={d}: (w12 - w13)(w21 - w23) = {x}"));
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(5);
    for k in 2..=4 {
        for (par, d) in ring_param_sets() {
            let p = RingParams::new(k, par, d).unwrap();
            let words: Vec<Vec<(usize, usize)>> = (0..1000)
                .map(|_| {
                    (0..rng.gen_range(1..=k + 1))
                        .map(|_| {
                            let i = rng.gen_range(1..=k);
                            let j = rng.gen_range(1..k);
                            (i, if j >= i { j + 1 } else { j })
                        })
                        .collect()
                })
                .collect();
            c.expect(confluence_audit(p, &words).unwrap(), || format!("confluence fails for k={k} {par:?} d={d}"));
        }
    }
    c
}

fn criterion_6() -> Check {
    let mut c = Check::default();
    for k in 2..=5 {
        for (par, d) in ring_param_sets() {
            let s = if par == Parity::Even { 1 } else { -1 };
            let p = RingParams::new(k, par, d).unwrap();
            let q = RingParams::new(k, par, 1).unwrap();
            for rel in relation_exprs(k, s, "w", "0") {
                let x = reduce(q, &rel).unwrap();
                c.expect(x.is_zero(), || format!("classical k={k} {par:?}: {rel} = {x}"));
            }
            // the a = 0 slice of each deformed relation is the classical one
            for rel in relation_exprs(k, s, "w", "a") {
                let x = forgetful_classical(&reduce(p, &rel).unwrap());
                c.expect(x.is_zero(), || format!("a=0 slice k={k} {par:?} d={d}: {rel} = {x}"));
            }
            let a = RingElement::a(p);
            c.expect(forgetful_classical(&a).is_zero(), || format!("k={k}: a survives the a = 0 slice"));
        }
        for (s, moduli) in [(1i64, vec![2u64]), (-1, vec![0, 2, 3, 4])] {
            for m in moduli {
                for rel in relation_exprs(k, s, "e", "1") {
                    let f = eval_poly(&rel, k, m).unwrap();
                    c.expect(f.is_zero(), || format!("k={k} mod {m}: {rel} evaluates to nonzero"));
                }
            }
        }
    }
    let cases = [("C2", "1+sigma", "sigma"), ("C2", "2", "2*sigma"), ("C3", "2", "lambda"), ("C4", "1+sigma", "lambda"), ("Sigma3", "2", "sigma"), ("Sigma3", "1+sigma", "lambda")];
    for (gname, v, w) in cases {
        let g = GroupSpec::parse(gname).unwrap();
        let (v, w) = (g.parse_rep(v).unwrap(), g.parse_rep(w).unwrap());
        for k in 2..=4 {
            let r = Restriction::new(&g, &v, &w, k).unwrap();
            let s = if r.source.parity == Parity::Even { 1 } else { -1 };
            for rel in relation_exprs(k, s, "w", "a") {
                let img = r.apply_expr(&bredon::expr::parse(&rel).unwrap()).unwrap();
                c.expect(img.is_zero(), || format!("{gname} k={k}: {rel} maps to {img}"));
            }
        }
    }
    c
}

fn criterion_7() -> Check {
    let mut c = Check::default();
    for k in 1..=5 {
        for sigma in permutations(k) {
            let (_, f) = p_sigma(&sigma).unwrap();
            let delta = SigmaFunction::delta(&sigma).unwrap();
            c.expect(f == delta, || format!("P_{sigma:?} is not delta"));
        }
        let det = delta_basis_determinant(k).unwrap();
        c.expect(det.abs() == Int::from(1), || format!("k={k}: determinant {det}"));
        let report = filtration_ranks(k).unwrap();
        let fact: usize = (1..=k).product();
        c.expect(report.total() == fact, || format!("k={k}: ranks {:?} sum to {}", report.ranks, report.total()));
    }
    for (k, expect) in [(3, vec![1, 3, 2]), (4, vec![1, 6, 11, 6])] {
        let got = filtration_ranks(k).unwrap().ranks;
        c.expect(got == expect, || format!("k={k}: filtration ranks {got:?}"));
    }
    c
}

fn criterion_8() -> Check {
    let mut c = Check::default();
    let g = c2();
    for q in [2u32, 3] {
        let v = g.parse_rep(&format!("{q}*sigma")).unwrap();
        for x in -6..=6i64 {
            for y in -6..=6i64 {
                let d = Degree { coeffs: vec![x - y, y] };
                let got = unit_sphere_groups(&g, &v, &d).unwrap().total.map(|t| sorted(t.orders()));
                c.expect(got.as_ref() == Some(&sphere_table(q, x, y)), || format!("S({q}σ) at ({x},{y}): {got:?}"));
            }
        }
    }
    let table: [(i64, i64, &[u64]); 7] = [
        (-1, 1, &[]),
        (-1, 2, &[0, 0, 0]),
        (0, 1, &[2]),
        (0, 2, &[0, 0]),
        (-2, 3, &[2]),
        (-2, 4, &[0, 0]),
        (-1, 3, &[2, 2]),
    ];
    let degs: Vec<Degree> = table.iter().map(|&(p, q, _)| Degree { coeffs: vec![p, q] }).collect();
    let chart = additive_sphere_chart(&g, &g.parse_rep("2*sigma").unwrap(), 3, &degs).unwrap();
    for (e, (_, _, expect)) in chart.entries.iter().zip(table) {
        let got = e.group().map(|h| sorted(h.orders()));
        c.expect(got.as_deref() == Some(expect), || format!("H^({}) of OC_3(2σ) = {got:?}", e.degree));
    }
    let ring = c2_sigma_ring(3, 2).unwrap();
    c.expect(ring.levels[1].quotient == vec![2], || format!("T^1 index {:?}", ring.levels[1].quotient));
    let gens = &ring.levels[2].generators;
    c.expect(gens == &["2*w(1,2)*w(1,3)", "2*w(1,2)*w(2,3)"], || format!("T^2 generators {gens:?}"));
    c
}

fn criterion_9() -> Check {
    let mut c = Check::default();
    for (k, expect) in [(3usize, vec![1u64, 2, 0]), (4, vec![1, 5, 6, 0])] {
        let got: Vec<u64> = (0..k).map(|j| a_multiplicity(k, j).unwrap().to_u64().unwrap()).collect();
        c.expect(got == expect, || format!("a({k}, ·) = {got:?}"));
    }
    let g = c2();
    let cases = [("1+sigma", true), ("1+2*sigma", true), ("2+sigma", true), ("1+3*sigma", true), ("2*sigma", false), ("3*sigma", false), ("4*sigma", false)];
    for (rep, free) in cases {
        let v = g.parse_rep(rep).unwrap();
        let m = g.dim(&v) as i64 - 1;
        for k in 1..=5usize {
            let w = motivic_window(&g, (-1, k as i64 * m + 1), (0, 1)).unwrap();
            let chart = if free { additive_free_chart(&g, &v, k, &w) } else { additive_sphere_chart(&g, &v, k, &w) }.unwrap();
            let betti = c2_underlying_betti(&chart, 0).unwrap();
            let expect: std::collections::BTreeMap<i64, u64> =
                (0..k).map(|i| (i as i64 * m, stirling_c(k, k - i).to_u64().unwrap())).collect();
            c.expect(betti == expect, || format!("{rep} k={k}: {betti:?}"));
        }
    }
    c
}

fn criterion_10() -> Check {
    let mut c = Check::default();
    for g in catalog() {
        for w in g.representations_up_to(6).into_iter().filter(|w| !w.is_zero()) {
            let h = sphere_h0_complex(&g, &w).unwrap().h0;
            let d = g.d(&w).unwrap() as u64;
            let expect = if d == 1 { vec![] } else { vec![d] };
            c.expect(h.free_rank() == 0 && h.invariant_factors() == expect, || format!("{} {}: H_0 = {h}", g.name(), g.format_rep(&w)));
        }
    }
    for (p, e) in [(2u64, 1u32), (3, 1), (3, 2), (5, 1), (2, 2), (2, 3)] {
        let n = p.pow(e);
        for k in 1..n {
            let ls = lambda_sphere_complex(p, e, k).unwrap();
            let under: Vec<String> = ls.underlying_homology().unwrap().iter().map(|x| x.to_string()).collect();
            c.expect(under == ["Z", "0", "Z"], || format!("p^e={n} k={k}: underlying {under:?}"));
            let top = ls.reduced_h0(&ls.top_label()).unwrap();
            let order: u64 = top.invariant_factors().iter().product();
            c.expect(top.free_rank() == 0 && order == p.pow(e - ls.j), || format!("p^e={n} k={k}: top H_0 = {top}"));
        }
    }
    for (p, e) in [(2u64, 1u32), (3, 1), (3, 2), (5, 1)] {
        let n = p.pow(e);
        for k in 1..n.min(9) {
            for r in (1..=8).filter(|r| r % p != 0) {
                match comparison_check(p, e, k, r) {
                    Ok(x) => c.expect(
                        x.is_chain_map && x.h2_multiplier == x.s as i64 && num_integer::gcd(x.s, p) == 1 && x.p_local_iso,
                        || format!("p^e={n} k={k} r={r}: ×{} with s = {}", x.h2_multiplier, x.s),
                    ),
                    Err(err) => c.expect(false, || format!("p^e={n} k={k} r={r}: {err}")),
                }
            }
        }
    }
    c
}

/// Expected outcomes. Criterion 4 does not hold as stated: every
/// two-dimensional orientable fixed-point-free V also fails one step lower,
/// and the sphere cross-check at ℓ agrees with the point criterion at ℓ only
/// after pairing surjectivity at ℓ with injectivity at ℓ - 1.
const EXPECTED: [bool; 10] = [true, true, true, false, true, true, true, true, true, true];

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("invariant tables", criterion_1),
        ("odd-dimension law", criterion_2),
        ("point-chart soundness", criterion_3),
        ("vanishing reproduction", criterion_4),
        ("ring presentation", criterion_5),
        ("specialization diagram", criterion_6),
        ("Varchenko-Gelfand", criterion_7),
        ("C2 assembly", criterion_8),
        ("splitting multiplicities", criterion_9),
        ("Mackey engine", criterion_10),
    ];
    let mut mismatches = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let check = run();
        let ms = start.elapsed().as_millis();
        let verdict = if check.passed() { "PASS" } else { "FAIL" };
        // written to the handle directly so the lines survive output capture
        writeln!(std::io::stderr(), "criterion {:>2} {verdict} {name} ({ms} ms): {}", i + 1, check.detail()).unwrap();
        if check.passed() != EXPECTED[i] {
            mismatches.push(i + 1);
        }
    }
    assert!(mismatches.is_empty(), "criteria with unexpected outcomes: {mismatches:?}");
}
