//! Derived values checked against computations that share no code with the
//! library routines they test.

mod common;

use bredon::config_ring::basis_enumerate;
use bredon::group_rep::GroupSpec;
use bredon::linalg::Int;
use bredon::point_cohomology::Degree;
use bredon::spheres::unit_sphere_groups;
use bredon::stirling::{a_multiplicity, stirling_c};
use bredon::varchenko_gelfand::{filtration_ranks, p_sigma, permutations};
use common::*;
use num_traits::ToPrimitive;

/// Rank over Q of integer rows by fraction-free elimination on i128.
fn rational_rank(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let (a, b) = (rows[rank][c], rows[r][c]);
                for x in 0..cols {
                    rows[r][x] = rows[r][x] * a - rows[rank][x] * b;
                }
                let g = rows[r].iter().fold(0i128, |g, &v| num_integer::gcd(g, v));
                if g > 1 {
                    rows[r].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the common fixed space of integer matrices.
fn fixed_dim(gens: &[[[i128; 3]; 3]], n: usize) -> usize {
    let rows: Vec<Vec<i128>> = gens
        .iter()
        .flat_map(|m| (0..n).map(move |i| (0..n).map(|j| m[i][j] - (i == j) as i128).collect()))
        .collect();
    n - rational_rank(rows)
}

#[test]
fn fixed_dimensions_by_linear_algebra() {
    let s3 = GroupSpec::sigma3();
    let lambda = s3.parse_rep("lambda").unwrap();
    // λ is the sum-zero plane of R^3; a transposition fixes the line spanned
    // by (1, 1, -2) inside it
    let transposition = [[0, 1, 0], [1, 0, 0], [0, 0, 1]];
    let three_cycle = [[0, 0, 1], [1, 0, 0], [0, 1, 0]];
    // permutation matrices fix the diagonal; subtract it
    assert_eq!(fixed_dim(&[transposition], 3) - 1, s3.fixed_dim(&lambda, "C2").unwrap() as usize);
    assert_eq!(fixed_dim(&[three_cycle], 3) - 1, s3.fixed_dim(&lambda, "C3").unwrap() as usize);
    assert_eq!(fixed_dim(&[transposition, three_cycle], 3) - 1, s3.fixed_dim(&lambda, "S3").unwrap() as usize);

    // rotation by π on R^2, padded to 3x3 with a fixed third axis
    let c4 = GroupSpec::cyclic(4).unwrap();
    let half_turn = [[-1, 0, 0], [0, -1, 0], [0, 0, 1]];
    let quarter_turn = [[0, -1, 0], [1, 0, 0], [0, 0, 1]];
    let l = c4.parse_rep("lambda").unwrap();
    assert_eq!(fixed_dim(&[half_turn], 3) - 1, c4.fixed_dim(&l, "C2").unwrap() as usize);
    assert_eq!(fixed_dim(&[quarter_turn], 3) - 1, c4.fixed_dim(&l, "C4").unwrap() as usize);
    assert_eq!(c4.fixed_dim(&l, "C2").unwrap(), 0);
}

#[test]
fn stirling_against_cycle_counts() {
    for a in 1..=7 {
        for b in 1..=a {
            assert_eq!(stirling_c(a, b).to_u64().unwrap(), cycle_count_stirling(a, b), "c({a},{b})");
        }
    }
}

#[test]
fn a_multiplicities_telescope() {
    // c(k, k-j) = a(k, j) + a(k, j-1), with a(k, k-1) = 0 once k >= 2
    for k in 2..=8 {
        for j in 0..k {
            let a = a_multiplicity(k, j).unwrap().to_u64().unwrap();
            let prev = if j == 0 { 0 } else { a_multiplicity(k, j - 1).unwrap().to_u64().unwrap() };
            assert_eq!(a + prev, cycle_count_stirling(k, k - j), "k={k} j={j}");
        }
        assert_eq!(a_multiplicity(k, k - 1).unwrap().to_u64().unwrap(), 0);
    }
}

#[test]
fn basis_counts_against_cycle_counts() {
    for k in 1..=6 {
        for j in 0..k {
            assert_eq!(basis_enumerate(k, j).unwrap().len() as u64, cycle_count_stirling(k, k - j), "k={k} j={j}");
        }
    }
}

#[test]
fn basis_counts_against_poincare_product() {
    for k in 1..=8 {
        let betti = poincare_betti(k);
        for (j, b) in betti.iter().enumerate() {
            assert_eq!(basis_enumerate(k, j).unwrap().len() as u64, *b, "k={k} j={j}");
        }
    }
}

/// `e_ij(σ) = [σ(i) > σ(j)]`, 1-based indices into a 0-based permutation.
fn heaviside_at(p: &[usize], i: usize, j: usize) -> i128 {
    (p[i - 1] > p[j - 1]) as i128
}

#[test]
fn p_sigma_is_delta_by_direct_evaluation() {
    for k in 1..=5 {
        let ps = perms(k);
        for sigma in &ps {
            let one_based: Vec<usize> = sigma.iter().map(|x| x + 1).collect();
            let (_, f) = p_sigma(&one_based).unwrap();
            for (t, tau) in ps.iter().enumerate() {
                let mut v = 1i128;
                for i in 1..=k {
                    for j in i + 1..=k {
                        let e = heaviside_at(tau, i, j);
                        v *= if sigma[i - 1] > sigma[j - 1] { e } else { 1 - e };
                    }
                }
                assert_eq!(f.values[t], Int::from(v));
                assert_eq!(v, (tau == sigma) as i128);
            }
        }
    }
}

#[test]
fn permutation_order_is_lexicographic() {
    for k in 1..=5 {
        let ours: Vec<Vec<usize>> = permutations(k);
        let theirs: Vec<Vec<usize>> = perms(k).into_iter().map(|p| p.into_iter().map(|x| x + 1).collect()).collect();
        assert_eq!(ours, theirs);
    }
}

/// Ranks of `F_r / F_{r-1}` from monomials in every `e_ij` (both orders),
/// which spans the same filtration.
fn filtration_oracle(k: usize) -> Vec<usize> {
    let ps = perms(k);
    let gens: Vec<(usize, usize)> = (1..=k).flat_map(|i| (1..=k).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut rows: Vec<Vec<i128>> = vec![vec![1; ps.len()]];
    let mut layer: Vec<Vec<i128>> = rows.clone();
    let mut ranks = vec![1];
    let mut prev = 1;
    for _ in 1..k {
        let mut next = Vec::new();
        for m in &layer {
            for &(i, j) in &gens {
                let v: Vec<i128> = ps.iter().zip(m).map(|(p, x)| x * heaviside_at(p, i, j)).collect();
                if !next.contains(&v) {
                    next.push(v);
                }
            }
        }
        rows.extend(next.iter().cloned());
        let r = rational_rank(rows.clone());
        ranks.push(r - prev);
        prev = r;
        layer = next;
    }
    ranks
}

#[test]
fn filtration_ranks_against_oracle() {
    for k in 1..=5 {
        let report = filtration_ranks(k).unwrap();
        assert_eq!(report.ranks, filtration_oracle(k), "k={k}");
        assert_eq!(report.total(), (1..=k).product::<usize>());
    }
}

#[test]
fn c2_unit_spheres_against_projective_spaces() {
    // S(qσ)/C_2 = RP^{q-1}, and the σ-weight parity selects the twist
    let g = GroupSpec::cyclic(2).unwrap();
    for q in 1..=6u32 {
        let v = g.parse_rep(&format!("{q}*sigma")).unwrap();
        for x in -3..=8i64 {
            for y in -6..=6i64 {
                let d = Degree { coeffs: vec![x - y, y] };
                let got = unit_sphere_groups(&g, &v, &d).unwrap().total.unwrap().orders();
                assert_eq!(sorted(got), rp_cohomology(q as i64 - 1, x, y.rem_euclid(2)), "q={q} at ({x},{y})");
            }
        }
    }
}

#[test]
fn modular_inverses_in_comparisons() {
    for (p, e) in [(2u64, 1u32), (3, 1), (3, 2), (5, 1)] {
        let n = p.pow(e);
        for k in 1..n.min(9) {
            for r in (1..=8).filter(|r| r % p != 0) {
                let c = bredon::mackey_homology::comparison_check(p, e, k, r).unwrap();
                assert_eq!((c.s * r) % n, 1 % n);
                assert!(c.s >= 1 && c.s < n.max(2));
            }
        }
    }
}
