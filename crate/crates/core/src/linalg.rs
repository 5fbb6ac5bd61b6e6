//! Integer linear algebra: Smith and Hermite normal forms, lattice kernels,
//! exact solving, determinants, and kernels/cokernels of homomorphisms
//! between finitely generated abelian groups.
//!
//! Everything is over arbitrary-precision integers. The matrices involved
//! are small, so dense storage is used throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Int = BigInt;

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (r, c): (usize, usize)) -> &Int {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Int {
        &mut self.data[r * self.cols + c]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = Int::from(*v);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Int>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Int> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Int::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        s += &self[(i, j)] * x;
                    }
                }
                s
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Rows `r0..r1`, all columns.
    pub fn row_slice(&self, r0: usize, r1: usize) -> IntMatrix {
        Self::from_fn(r1 - r0, self.cols, |i, j| self[(r0 + i, j)].clone())
    }

    /// Columns `c0..c1`, all rows.
    pub fn col_slice(&self, c0: usize, c1: usize) -> IntMatrix {
        Self::from_fn(self.rows, c1 - c0, |i, j| self[(i, c0 + j)].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self.data[r * self.cols + j];
            self.data[r * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + c];
            self.data[i * self.cols + c] = v;
        }
    }
}

/// Smith normal form `u * a * v = d` with unimodular `u`, `v`.
///
/// `diag` has length `min(rows, cols)`; its entries are non-negative, the
/// nonzero ones come first and each divides the next.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<Int>,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !d.is_zero()).count()
    }
}

pub fn smith(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    let row_add = |d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, dst: usize, src: usize, q: &Int| {
        d.add_row(dst, src, q);
        u.add_row(dst, src, q);
        u_inv.add_col(src, dst, &-q);
    };
    let col_add = |d: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, dst: usize, src: usize, q: &Int| {
        d.add_col(dst, src, q);
        v.add_col(dst, src, q);
        v_inv.add_row(src, dst, &-q);
    };

    let steps = m.min(n);
    for t in 0..steps {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &d[(i, j)];
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            let mut changed = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                row_add(&mut d, &mut u, &mut u_inv, i, t, &-q);
                if !d[(i, t)].is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    u_inv.swap_cols(t, i);
                    changed = true;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                col_add(&mut d, &mut v, &mut v_inv, j, t, &-q);
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    v_inv.swap_rows(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility of the trailing block
            let mut fix = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !d[(i, j)].is_multiple_of(&d[(t, t)]) {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    row_add(&mut d, &mut u, &mut u_inv, t, i, &Int::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    let diag = (0..steps).map(|i| d[(i, i)].clone()).collect();
    Smith { diag, u, u_inv, v, v_inv }
}

pub fn rank(a: &IntMatrix) -> usize {
    if a.rows == 0 || a.cols == 0 {
        return 0;
    }
    hermite_rows(a).rows()
}

/// Row-style Hermite normal form of the row lattice of `a`; returns only the
/// nonzero rows. Pivots are positive and entries above a pivot are reduced
/// into `[0, pivot)`.
pub fn hermite_rows(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (m, n) = (h.rows, h.cols);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if !h[(i, c)].is_zero() && best.map_or(true, |b| h[(i, c)].abs() < h[(b, c)].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..m {
                if !h[(i, c)].is_zero() {
                    let q = h[(i, c)].div_floor(&h[(r, c)]);
                    h.add_row(i, r, &-q);
                    if !h[(i, c)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m && !h[(r, c)].is_zero() {
            if h[(r, c)].is_negative() {
                h.negate_row(r);
            }
            for i in 0..r {
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row(i, r, &-q);
            }
            r += 1;
        }
    }
    h.row_slice(0, r)
}

/// Incrementally maintained row lattice in Hermite form.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice { dim, basis: IntMatrix::zeros(0, dim) }
    }

    pub fn from_rows(dim: usize, rows: &[Vec<Int>]) -> Self {
        let mut l = Self::new(dim);
        l.extend(rows);
        l
    }

    pub fn extend(&mut self, rows: &[Vec<Int>]) {
        if rows.is_empty() {
            return;
        }
        let mut m = IntMatrix::zeros(self.basis.rows + rows.len(), self.dim);
        for i in 0..self.basis.rows {
            for j in 0..self.dim {
                m[(i, j)] = self.basis[(i, j)].clone();
            }
        }
        for (k, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), self.dim);
            for (j, x) in row.iter().enumerate() {
                m[(self.basis.rows + k, j)] = x.clone();
            }
        }
        self.basis = hermite_rows(&m);
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        solve(&self.basis.transpose(), v).is_some()
    }
}

/// A saturated basis of the integer kernel `{x : a x = 0}`, as columns.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    let r = s.rank();
    s.v.col_slice(r, a.cols)
}

/// Some integer solution of `a x = b`, if one exists.
pub fn solve(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(a.rows, b.len());
    let s = smith(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![Int::zero(); a.cols];
    for i in 0..a.rows {
        let di = if i < s.diag.len() { &s.diag[i] } else { &Int::zero() as &Int };
        if di.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub[i].div_rem(di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(a: &IntMatrix) -> Int {
    assert_eq!(a.rows, a.cols, "determinant of a non-square matrix");
    let n = a.rows;
    if n == 0 {
        return Int::one();
    }
    let mut m = a.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Int::zero();
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    sign * &m[(n - 1, n - 1)]
}

/// Reduce `x` into `[0, n)` when `n > 0`; leave it unchanged for `n = 0`.
pub fn reduce_mod(x: &Int, n: &Int) -> Int {
    if n.is_zero() {
        x.clone()
    } else {
        x.mod_floor(n)
    }
}

/// A subquotient presented by generators with cyclic orders. `gens[i]` is a
/// vector in the ambient coordinates; `orders[i]` is 0 for infinite order and
/// at least 2 otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presented {
    pub orders: Vec<Int>,
    pub gens: Vec<Vec<Int>>,
}

impl Presented {
    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }
}

/// Quotient `Z^n / span(relations)` where relations are the columns of `rel`.
pub fn quotient(rel: &IntMatrix) -> Presented {
    let n = rel.rows;
    let s = smith(rel);
    let mut orders = Vec::new();
    let mut gens = Vec::new();
    for i in 0..n {
        let d = if i < s.diag.len() { s.diag[i].clone() } else { Int::zero() };
        if d.is_one() {
            continue;
        }
        orders.push(d);
        gens.push(s.u_inv.column(i));
    }
    Presented { orders, gens }
}

/// A homomorphism between finitely generated abelian groups given as direct
/// sums of cyclic groups. `src[j]`/`tgt[i]` are the cyclic orders (0 = Z) and
/// `matrix` is `tgt.len() x src.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbHom {
    pub src: Vec<Int>,
    pub tgt: Vec<Int>,
    pub matrix: IntMatrix,
}

impl AbHom {
    pub fn new(src: Vec<Int>, tgt: Vec<Int>, matrix: IntMatrix) -> Self {
        assert_eq!(matrix.rows, tgt.len());
        assert_eq!(matrix.cols, src.len());
        let mut h = AbHom { src, tgt, matrix };
        h.normalize();
        h
    }

    fn normalize(&mut self) {
        for i in 0..self.tgt.len() {
            for j in 0..self.src.len() {
                let x = reduce_mod(&self.matrix[(i, j)], &self.tgt[i]);
                self.matrix[(i, j)] = x;
            }
        }
    }

    /// Whether every relation of the source maps into the relations of the
    /// target, i.e. whether the matrix defines a homomorphism.
    pub fn is_well_defined(&self) -> bool {
        for (j, s) in self.src.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for (i, t) in self.tgt.iter().enumerate() {
                let v = &self.matrix[(i, j)] * s;
                if !reduce_mod(&v, t).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    fn target_relations(&self) -> IntMatrix {
        let cols: Vec<Vec<Int>> = self
            .tgt
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_zero())
            .map(|(i, t)| {
                let mut c = vec![Int::zero(); self.tgt.len()];
                c[i] = t.clone();
                c
            })
            .collect();
        IntMatrix::from_columns(self.tgt.len(), &cols)
    }

    pub fn cokernel(&self) -> Presented {
        let rel = self.target_relations().hstack(&self.matrix);
        quotient(&rel)
    }

    pub fn kernel(&self) -> Presented {
        let n = self.src.len();
        if n == 0 {
            return Presented { orders: vec![], gens: vec![] };
        }
        // x in Z^n with M x in the target relation lattice
        let big = self.matrix.hstack(&self.target_relations());
        let k = kernel_basis(&big);
        let proj = k.row_slice(0, n);
        let hb = hermite_rows(&proj.transpose());
        let basis = hb.transpose(); // n x r, full column rank
        let r = basis.cols;
        let mut rels = Vec::new();
        for (j, s) in self.src.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let mut e = vec![Int::zero(); n];
            e[j] = s.clone();
            let c = solve(&basis, &e).expect("source relation outside the kernel lattice");
            rels.push(c);
        }
        let relm = IntMatrix::from_columns(r, &rels);
        let q = quotient(&relm);
        let gens = q.gens.iter().map(|c| basis.mul_vec(c)).collect();
        Presented { orders: q.orders, gens }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn compose(&self, first: &AbHom) -> AbHom {
        assert_eq!(first.tgt, self.src, "composition across different groups");
        AbHom::new(first.src.clone(), self.tgt.clone(), self.matrix.mul(&first.matrix))
    }
}

/// Canonical invariant factors of a direct sum of cyclic groups: finite
/// factors `d_1 | d_2 | ...` (all at least 2) followed by one 0 per free rank.
pub fn invariant_factors(orders: &[Int]) -> Vec<Int> {
    let n = orders.len();
    let rel = IntMatrix::from_fn(n, n, |i, j| if i == j { orders[i].clone() } else { Int::zero() });
    let q = quotient(&rel);
    let mut finite: Vec<Int> = q.orders.iter().filter(|d| !d.is_zero()).cloned().collect();
    finite.sort();
    let free = q.orders.iter().filter(|d| d.is_zero()).count();
    finite.extend(std::iter::repeat(Int::zero()).take(free));
    finite
}

/// Homology of `C_{n+1} -> C_n -> C_{n-1}` at `C_n`, with generators and a
/// coordinate map.
#[derive(Clone, Debug)]
pub struct Homology {
    pub dim: usize,
    pub orders: Vec<Int>,
    pub gens: Vec<Vec<Int>>,
    kernel: IntMatrix,
    kernel_coords: IntMatrix,
    to_gens: IntMatrix,
    keep: Vec<usize>,
}

impl Homology {
    /// `d_out`: `C_n -> C_{n-1}` (rows = dim C_{n-1}); `d_in`: `C_{n+1} -> C_n`.
    pub fn compute(dim: usize, d_out: Option<&IntMatrix>, d_in: Option<&IntMatrix>) -> Homology {
        let (kernel, kernel_coords) = match d_out {
            Some(d) if d.rows > 0 && dim > 0 => {
                let s = smith(d);
                let r = s.rank();
                (s.v.col_slice(r, dim), s.v_inv.row_slice(r, dim))
            }
            _ => (IntMatrix::identity(dim), IntMatrix::identity(dim)),
        };
        let r = kernel.cols;
        let boundaries = match d_in {
            Some(b) if b.cols > 0 => kernel_coords.mul(b),
            _ => IntMatrix::zeros(r, 0),
        };
        let s = smith(&boundaries);
        let mut orders = Vec::new();
        let mut gens = Vec::new();
        let mut keep = Vec::new();
        for i in 0..r {
            let d = if i < s.diag.len() { s.diag[i].clone() } else { Int::zero() };
            if d.is_one() {
                continue;
            }
            orders.push(d);
            gens.push(kernel.mul_vec(&s.u_inv.column(i)));
            keep.push(i);
        }
        Homology { dim, orders, gens, kernel, kernel_coords, to_gens: s.u, keep }
    }

    /// Coordinates of a cycle in terms of the homology generators, reduced
    /// modulo the generator orders. Panics if `v` is not a cycle.
    pub fn express(&self, v: &[Int]) -> Vec<Int> {
        let c = self.kernel_coords.mul_vec(v);
        debug_assert_eq!(self.kernel.mul_vec(&c), v.to_vec(), "not a cycle");
        let w = self.to_gens.mul_vec(&c);
        self.keep.iter().zip(&self.orders).map(|(&i, d)| reduce_mod(&w[i], d)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.orders.is_empty()
    }
}

pub fn to_i64(x: &Int) -> i64 {
    x.to_i64().expect("integer does not fit in i64")
}

pub fn to_u64(x: &Int) -> u64 {
    x.to_u64().expect("integer does not fit in u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn smith_of_small_matrix() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a);
        assert_eq!(s.diag, ints(&[2, 6, 12]));
        let d = s.u.mul(&a).mul(&s.v);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { s.diag[i].clone() } else { Int::zero() };
                assert_eq!(d[(i, j)], expect);
            }
        }
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(3));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(3));
    }

    #[test]
    fn homology_of_multiplication_by_two() {
        let d1 = m(&[&[2]]);
        let h0 = Homology::compute(1, None, Some(&d1));
        assert_eq!(h0.orders, ints(&[2]));
        let h1 = Homology::compute(1, Some(&d1), None);
        assert!(h1.is_zero());
    }

    #[test]
    fn kernel_and_cokernel_of_reduction() {
        // Z -> Z/2, 1 -> 1
        let h = AbHom::new(ints(&[0]), ints(&[2]), m(&[&[1]]));
        assert!(h.is_surjective());
        let k = h.kernel();
        assert_eq!(k.orders, ints(&[0]));
        assert_eq!(k.gens, vec![ints(&[2])]);
        // Z/4 -> Z/2 zero map
        let z = AbHom::new(ints(&[4]), ints(&[2]), m(&[&[0]]));
        assert_eq!(z.kernel().orders, ints(&[4]));
        assert_eq!(z.cokernel().orders, ints(&[2]));
        // Z/2 -> Z/4, 1 -> 2
        let i = AbHom::new(ints(&[2]), ints(&[4]), m(&[&[2]]));
        assert!(i.is_injective());
        assert_eq!(i.cokernel().orders, ints(&[2]));
    }

    #[test]
    fn invariant_factors_merge_coprime() {
        assert_eq!(invariant_factors(&ints(&[2, 3])), ints(&[6]));
        assert_eq!(invariant_factors(&ints(&[2, 0, 2])), ints(&[2, 2, 0]));
    }

    #[test]
    fn determinant_matches_cofactor() {
        let a = m(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0
        assert_eq!(determinant(&a), Int::from(2 * (-6 - 20) + (-2)));
    }

    #[test]
    fn solve_detects_non_integral() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve(&a, &ints(&[4, 9])), Some(ints(&[2, 3])));
        assert_eq!(solve(&a, &ints(&[1, 3])), None);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = m(&[&[4, 6], &[2, 3], &[0, 5]]);
        let h = hermite_rows(&a);
        assert_eq!(h, m(&[&[2, 3], &[0, 5]]));
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn smith_reconstructs(rows in 1usize..4, cols in 1usize..4, seed in proptest::collection::vec(-6i64..6, 16)) {
            let a = IntMatrix::from_fn(rows, cols, |i, j| Int::from(seed[i * 4 + j]));
            let s = smith(&a);
            let d = s.u.mul(&a).mul(&s.v);
            for i in 0..rows {
                for j in 0..cols {
                    let expect = if i == j { s.diag[i].clone() } else { Int::zero() };
                    prop_assert_eq!(&d[(i, j)], &expect);
                }
            }
            for w in s.diag.windows(2) {
                if !w[1].is_zero() {
                    prop_assert!(w[1].is_multiple_of(&w[0]));
                }
            }
            prop_assert_eq!(s.rank(), rank(&a));
        }

        #[test]
        fn kernel_cokernel_orders(src in proptest::collection::vec(0i64..5, 1..4), tgt in proptest::collection::vec(0i64..5, 1..4), seed in proptest::collection::vec(-4i64..4, 16)) {
            let src: Vec<Int> = src.into_iter().map(|x| Int::from(if x == 1 { 0 } else { x })).collect();
            let tgt: Vec<Int> = tgt.into_iter().map(|x| Int::from(if x == 1 { 0 } else { x })).collect();
            // build a well-defined matrix: column j must be killed by src[j]
            let mat = IntMatrix::from_fn(tgt.len(), src.len(), |i, j| {
                let raw = Int::from(seed[i * 4 + j]);
                let s = &src[j];
                let t = &tgt[i];
                if s.is_zero() { raw } else if t.is_zero() { Int::zero() } else {
                    let g = s.gcd(t);
                    raw * (t / g)
                }
            });
            let h = AbHom::new(src.clone(), tgt.clone(), mat);
            prop_assert!(h.is_well_defined());
            let k = h.kernel();
            let c = h.cokernel();
            // when everything is finite: |src| = |ker| * |im|, |tgt| = |im| * |coker|
            if src.iter().chain(tgt.iter()).all(|x| !x.is_zero()) {
                let prod = |v: &[Int]| v.iter().fold(Int::one(), |a, b| a * b);
                let im = prod(&src) / prod(&k.orders);
                prop_assert_eq!(prod(&tgt), im * prod(&c.orders));
            }
        }
    }
}
