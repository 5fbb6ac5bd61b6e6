//! Unsigned Stirling numbers of the first kind and the alternating partial
//! sums `a(k, j)` that count unit-sphere summands in the splitting.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// Largest `a` accepted by [`stirling_oracle`].
pub const ORACLE_CAP: usize = 9;

/// Triangular table `c(a, b)` for `0 ≤ b ≤ a ≤ cap`.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    pub fn new(cap: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for a in 0..cap {
            let prev = &rows[a];
            let mut next = vec![BigUint::zero(); a + 2];
            for b in 1..=a + 1 {
                let mut v = prev.get(b - 1).cloned().unwrap_or_default();
                if b <= a {
                    v += &prev[b] * BigUint::from(a);
                }
                next[b] = v;
            }
            rows.push(next);
        }
        StirlingTable { rows }
    }

    pub fn cap(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, a: usize, b: usize) -> BigUint {
        if b > a {
            return BigUint::zero();
        }
        self.rows[a][b].clone()
    }

    pub fn row(&self, a: usize) -> &[BigUint] {
        &self.rows[a]
    }
}

/// `c(a, b)`: permutations of `a` letters with exactly `b` cycles.
pub fn stirling_c(a: usize, b: usize) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    StirlingTable::new(a).get(a, b)
}

pub fn stirling_row(a: usize) -> Vec<BigUint> {
    StirlingTable::new(a).row(a).to_vec()
}

/// `a(k, j) = Σ_{i=0}^{j} (-1)^i c(k, k-(j-i))` for `0 ≤ j ≤ k-1`.
pub fn a_multiplicity(k: usize, j: usize) -> Result<BigUint> {
    if k == 0 || j >= k {
        return Err(Error::Range(format!("a(k, j) needs 0 <= j <= k-1; got k={k}, j={j}")));
    }
    let t = StirlingTable::new(k);
    let mut s = BigInt::zero();
    for i in 0..=j {
        let c = BigInt::from(t.get(k, k - (j - i)));
        if i % 2 == 0 {
            s += c;
        } else {
            s -= c;
        }
    }
    s.to_biguint().ok_or_else(|| Error::Other(format!("a({k},{j}) came out negative")))
}

/// Counts selections of `a - b` strictly upper-triangular positions of an
/// `a x a` matrix with pairwise distinct columns.
pub fn stirling_oracle(a: usize, b: usize) -> Result<BigUint> {
    if a > ORACLE_CAP {
        return Err(Error::Cap(format!("stirling oracle supports a <= {ORACLE_CAP}")));
    }
    if b > a {
        return Ok(BigUint::zero());
    }
    let want = a - b;
    // column c (1-based, 2..=a) can hold nothing or one of rows 1..c-1
    fn rec(col: usize, a: usize, left: usize) -> u64 {
        if col > a {
            return u64::from(left == 0);
        }
        let mut total = rec(col + 1, a, left);
        if left > 0 {
            for _row in 1..col {
                total += rec(col + 1, a, left - 1);
            }
        }
        total
    }
    Ok(BigUint::from(rec(2, a, want)))
}
