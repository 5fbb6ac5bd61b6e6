#![allow(dead_code)]

use bredon::group_rep::GroupSpec;

/// Every catalogued group: `C_2, …, C_12` and `Σ_3`.
pub fn catalog() -> Vec<GroupSpec> {
    let mut gs: Vec<GroupSpec> = (2..=12).map(|n| GroupSpec::cyclic(n).unwrap()).collect();
    gs.push(GroupSpec::sigma3());
    gs
}

/// The groups with full chart tables.
pub fn charted() -> Vec<GroupSpec> {
    ["C2", "C3", "C5", "C9", "C4", "Sigma3"].iter().map(|s| GroupSpec::parse(s).unwrap()).collect()
}

/// Lexicographic permutations of `0..k`.
pub fn perms(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// `c(a, b)` by counting permutations of `a` letters with `b` cycles.
pub fn cycle_count_stirling(a: usize, b: usize) -> u64 {
    perms(a)
        .iter()
        .filter(|p| {
            let mut seen = vec![false; a];
            let mut cycles = 0;
            for s in 0..a {
                if !seen[s] {
                    cycles += 1;
                    let mut t = s;
                    while !seen[t] {
                        seen[t] = true;
                        t = p[t];
                    }
                }
            }
            cycles == b
        })
        .count() as u64
}

/// Coefficients of `Π_{i<k} (1 + i t)`: Betti numbers of `Conf_k(R^n)`.
pub fn poincare_betti(k: usize) -> Vec<u64> {
    let mut poly = vec![1u64];
    for i in 1..k as u64 {
        let mut next = vec![0u64; poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d] += c;
            next[d + 1] += c * i;
        }
        poly = next;
    }
    poly
}

/// Defining relations of the deformed ring written with generator name `w`
/// (or `e`) and Euler symbol `a` (or `1`), with `s = (-1)^{|V|}`.
pub fn relation_exprs(k: usize, s: i64, gen: &str, a: &str) -> Vec<String> {
    let w = |i: usize, j: usize| format!("{gen}({i},{j})");
    let eps = -s;
    let mut out = Vec::new();
    let pairs: Vec<(usize, usize)> = (1..=k).flat_map(|i| (1..=k).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    for &(i, j) in &pairs {
        out.push(format!("{} - {s}*{} - {a}", w(j, i), w(i, j)));
        out.push(format!("{}*{} - {a}*{}", w(i, j), w(i, j), w(i, j)));
        out.push(format!("{}*{}", w(i, j), w(j, i)));
        for &(p, q) in &pairs {
            out.push(format!("{}*{} - {eps}*{}*{}", w(i, j), w(p, q), w(p, q), w(i, j)));
        }
        for l in (1..=k).filter(|&l| l != i && l != j) {
            out.push(format!("({} - {})*({} - {})", w(i, j), w(i, l), w(j, i), w(j, l)));
        }
    }
    for p in 1..=k {
        for q in p + 1..=k {
            for r in q + 1..=k {
                out.push(format!(
                    "{} * {} - {}*{} + {}*{} - {a}*{}",
                    w(p, r),
                    w(q, r),
                    w(p, q),
                    w(q, r),
                    w(p, q),
                    w(p, r),
                    w(p, r)
                ));
            }
        }
    }
    out
}

/// Cohomology of `RP^m` with untwisted (`twist = 0`) or sign-twisted
/// integer coefficients, from the cellular cochain complex with
/// `d^i = 1 + (-1)^{i+1+twist}`. Orders, 0 for `Z`.
pub fn rp_cohomology(m: i64, i: i64, twist: i64) -> Vec<u64> {
    if i < 0 || i > m {
        return vec![];
    }
    let d = |i: i64| if i < 0 || i >= m { 0 } else { 1 + (-1i64).pow(((i + 1 + twist).rem_euclid(2)) as u32) };
    let (out, inn) = (d(i), d(i - 1));
    match (out, inn) {
        (0, 0) => vec![0],
        (0, n) => vec![n as u64],
        _ => vec![],
    }
}

/// Tabulated `H^{p+qσ}(S(qσ))` at motivic spot `(x, y)` for
/// `q ∈ {2, 3}`.
pub fn sphere_table(q: u32, x: i64, y: i64) -> Vec<u64> {
    let even = y.rem_euclid(2) == 0;
    match (q, x, even) {
        (2, 0, true) | (2, 1, true) => vec![0],
        (2, 1, false) => vec![2],
        (3, 0, true) | (3, 2, false) => vec![0],
        (3, 1, false) | (3, 2, true) => vec![2],
        _ => vec![],
    }
}

/// Tabulated `H^⋆(OC_3(2σ))`: one copy of [`sphere_table`] for `q = 2`
/// plus two copies shifted by `2σ - 1` (spot `(1, 2)`).
pub fn oc3_table(x: i64, y: i64) -> Vec<u64> {
    let even = y.rem_euclid(2) == 0;
    let mut v = match (x, even) {
        (0, true) => vec![0],
        (1, true) => vec![0, 0, 0],
        (1, false) => vec![2],
        (2, true) => vec![0, 0],
        (2, false) => vec![2, 2],
        _ => vec![],
    };
    v.sort_unstable();
    v
}

pub fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v
}
