//! Integer elimination modulo n.
//!
//! Linear questions over Z/n (kernels, images, solvability) are answered by
//! running the Smith elimination on integer representatives that are
//! rebalanced mod n after every operation. Rebalancing subtracts multiples
//! of n*e_i, which is harmless because every lattice in sight contains
//! n*Z^k; it keeps all entries in (-n/2, n/2], so nothing ever grows.
//!
//! The row transform is kept as an operation log instead of a dense matrix:
//! large systems need `U*b` for various `b`, never `U` itself.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactmath::matrix::IntMatrix;

/// Balanced representative of `x` mod `n`, in `(-n/2, n/2]`.
#[inline]
pub(crate) fn bal(x: i64, n: i64) -> i64 {
    let r = x.rem_euclid(n);
    if 2 * r > n {
        r - n
    } else {
        r
    }
}

#[inline]
fn bal128(x: i128, n: i64) -> i64 {
    let r = x.rem_euclid(n as i128) as i64;
    if 2 * r > n {
        r - n
    } else {
        r
    }
}

/// Rounded division: quotient minimizing |a - q*p|, ties toward even... no,
/// ties broken toward negative infinity for determinism.
#[inline]
fn div_round(a: i64, p: i64) -> i64 {
    let q = a.div_euclid(p);
    let r = a - q * p; // 0 <= r < |p|
    if 2 * r > p.abs() {
        q + p.signum()
    } else {
        q
    }
}

/// Dense row-major i64 matrix used for mod-n work.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ModMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl ModMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ModMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = ModMat::zeros(k, k);
        for i in 0..k {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_int(a: &IntMatrix, n: i64) -> Self {
        ModMat {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().map(|&x| bal128(x, n)).collect(),
        }
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec_mod(&self, v: &[i64], n: i64) -> Vec<i64> {
        (0..self.rows)
            .map(|i| {
                let mut acc: i128 = 0;
                for j in 0..self.cols {
                    acc += i128::from(self[(i, j)]) * i128::from(v[j]);
                }
                bal128(acc, n)
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for ModMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ModMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum RowOp {
    Swap(u32, u32),
    /// row[dst] += q * row[src]
    AddMul(u32, u32, i64),
}

/// Diagonalization of a matrix mod n: `U*A*V = diag` with the row transform
/// as an op log. `diag` entries are balanced; no divisibility chain is
/// enforced (callers needing canonical invariant factors normalize the
/// multiset themselves).
pub(crate) struct SmithMod {
    pub n: i64,
    pub rows: usize,
    pub diag: Vec<i64>,
    pub row_ops: Vec<RowOp>,
    pub v: Option<ModMat>,
    pub v_inv: Option<ModMat>,
}

impl SmithMod {
    /// Order of the cyclic constraint group at column `i`: gcd(d_i, n),
    /// with absent/zero diagonal entries counting as order n.
    pub fn col_order(&self, i: usize) -> i64 {
        let d = self.diag.get(i).copied().unwrap_or(0);
        if d == 0 {
            self.n
        } else {
            d.abs().gcd(&self.n)
        }
    }

    /// Apply the logged row transform to a vector (i.e. compute `U*b`).
    pub fn apply_row_ops(&self, b: &mut [i64]) {
        assert_eq!(b.len(), self.rows);
        for op in &self.row_ops {
            match *op {
                RowOp::Swap(i, j) => b.swap(i as usize, j as usize),
                RowOp::AddMul(dst, src, q) => {
                    let t = i128::from(b[src as usize]) * i128::from(q) + i128::from(b[dst as usize]);
                    b[dst as usize] = bal128(t, self.n);
                }
            }
        }
    }
}

pub(crate) fn smith_mod(mut m: ModMat, n: i64, track_v: bool) -> SmithMod {
    assert!(n >= 1);
    for x in m.data.iter_mut() {
        *x = bal(*x, n);
    }
    let (rows, cols) = (m.rows, m.cols);
    let mut row_ops: Vec<RowOp> = Vec::new();
    let mut v = track_v.then(|| ModMat::identity(cols));
    let mut v_inv = track_v.then(|| ModMat::identity(cols));

    let row_addmul = |m: &mut ModMat, ops: &mut Vec<RowOp>, dst: usize, src: usize, q: i64, n: i64| {
        if q == 0 {
            return;
        }
        for c in 0..m.cols {
            let t = i128::from(m[(dst, c)]) + i128::from(q) * i128::from(m[(src, c)]);
            m[(dst, c)] = bal128(t, n);
        }
        ops.push(RowOp::AddMul(dst as u32, src as u32, q));
    };

    let nmin = rows.min(cols);
    let mut t = 0;
    while t < nmin {
        // Deterministic pivot: smallest |nonzero|, row-major tie-break.
        let mut best: Option<(i64, usize, usize)> = None;
        'outer: for i in t..rows {
            for j in t..cols {
                let a = m[(i, j)].abs();
                if a != 0 && best.map_or(true, |(bv, _, _)| a < bv) {
                    best = Some((a, i, j));
                    if a == 1 {
                        break 'outer;
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        if pi != t {
            for c in 0..cols {
                m.data.swap(pi * cols + c, t * cols + c);
            }
            row_ops.push(RowOp::Swap(pi as u32, t as u32));
        }
        if pj != t {
            for r in 0..rows {
                m.data.swap(r * cols + pj, r * cols + t);
            }
            if let (Some(v), Some(vi)) = (v.as_mut(), v_inv.as_mut()) {
                for r in 0..cols {
                    v.data.swap(r * cols + pj, r * cols + t);
                }
                for c in 0..cols {
                    vi.data.swap(pj * cols + c, t * cols + c);
                }
            }
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let a = m[(i, t)];
                if a == 0 {
                    continue;
                }
                let p = m[(t, t)];
                let q = div_round(a, p);
                row_addmul(&mut m, &mut row_ops, i, t, -q, n);
                if m[(i, t)] != 0 {
                    for c in 0..cols {
                        m.data.swap(i * cols + c, t * cols + c);
                    }
                    row_ops.push(RowOp::Swap(i as u32, t as u32));
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let a = m[(t, j)];
                if a == 0 {
                    continue;
                }
                let p = m[(t, t)];
                let q = div_round(a, p);
                // col_j -= q * col_t
                if q != 0 {
                    for r in 0..rows {
                        let x = i128::from(m[(r, j)]) - i128::from(q) * i128::from(m[(r, t)]);
                        m[(r, j)] = bal128(x, n);
                    }
                    if let (Some(v), Some(vi)) = (v.as_mut(), v_inv.as_mut()) {
                        for r in 0..cols {
                            let x = i128::from(v[(r, j)]) - i128::from(q) * i128::from(v[(r, t)]);
                            v[(r, j)] = bal128(x, n);
                        }
                        for c in 0..cols {
                            let x = i128::from(vi[(t, c)]) + i128::from(q) * i128::from(vi[(j, c)]);
                            vi[(t, c)] = bal128(x, n);
                        }
                    }
                }
                if m[(t, j)] != 0 {
                    for r in 0..rows {
                        m.data.swap(r * cols + j, r * cols + t);
                    }
                    if let (Some(v), Some(vi)) = (v.as_mut(), v_inv.as_mut()) {
                        for r in 0..cols {
                            v.data.swap(r * cols + j, r * cols + t);
                        }
                        for c in 0..cols {
                            vi.data.swap(j * cols + c, t * cols + c);
                        }
                    }
                    dirty = true;
                }
            }
            if !dirty
                && (t + 1..rows).all(|i| m[(i, t)] == 0)
                && (t + 1..cols).all(|j| m[(t, j)] == 0)
            {
                break;
            }
        }
        t += 1;
    }
    let diag = (0..nmin).map(|i| m[(i, i)]).collect();
    SmithMod { n, rows, diag, row_ops, v, v_inv }
}

/// Sparse row of a constraint matrix: sorted (column, balanced value) pairs.
pub(crate) type SparseRow = Vec<(u32, i64)>;

/// Upper-triangular basis (one row per column) of the lattice spanned by
/// the given rows together with n*Z^cols. Rows are fed incrementally; the
/// accumulator never holds an entry outside (-n/2, n/2].
///
/// Insertion reduces against the accumulated pivots in a dense scratch row:
/// every value is bounded by n, so the arithmetic is plain i64 and the hot
/// path (an existing pivot dividing the scratch entry) is one fused
/// multiply-subtract sweep over the pivot's sparse support.
pub(crate) struct RowSpaceHnf {
    n: i64,
    cols: usize,
    acc: Vec<Option<SparseRow>>,
    scratch: Vec<i64>,
}

impl RowSpaceHnf {
    pub fn new(cols: usize, n: i64) -> Self {
        assert!(n >= 1);
        RowSpaceHnf { n, cols, acc: vec![None; cols], scratch: vec![0; cols] }
    }

    pub fn insert(&mut self, row: &[(u32, i64)]) {
        let n = self.n;
        let mut scratch = std::mem::take(&mut self.scratch);
        let mut lo = self.cols;
        for &(c, x) in row {
            let x = bal(x, n);
            scratch[c as usize] = x;
            if x != 0 {
                lo = lo.min(c as usize);
            }
        }
        let mut j = lo;
        while j < self.cols {
            let a = scratch[j];
            if a == 0 {
                j += 1;
                continue;
            }
            match &self.acc[j] {
                None => {
                    // Combine with the implicit generator n*e_j: the new
                    // pivot is x*row + y*(n e_j) with x a + y n = g, and the
                    // remainder (a/g)(n e_j) - (n/g) row continues.
                    let eg = i64::extended_gcd(&a, &n);
                    let (g, x) = (eg.gcd, eg.x);
                    let mut pivot: SparseRow = Vec::with_capacity(8);
                    pivot.push((j as u32, g));
                    let scale = n / g;
                    for c in j + 1..self.cols {
                        let val = scratch[c];
                        if val != 0 {
                            let t = bal(x.rem_euclid(n) * val, n);
                            if t != 0 {
                                pivot.push((c as u32, t));
                            }
                            scratch[c] = bal(-(scale % n) * val, n);
                        }
                    }
                    scratch[j] = 0;
                    self.acc[j] = Some(pivot);
                }
                Some(s) => {
                    let b = s[0].1;
                    if a % b == 0 {
                        // scratch -= (a/b) * pivot
                        let q = a / b;
                        for &(c, val) in s.iter() {
                            let cc = c as usize;
                            scratch[cc] = bal(scratch[cc] - q * val, n);
                        }
                        debug_assert_eq!(scratch[j], 0);
                    } else {
                        // general two-row step: replace the pivot by
                        // x*row + y*pivot (leading gcd) and continue with
                        // (a/g)*pivot - (b/g)*row.
                        let eg = i64::extended_gcd(&a, &b);
                        let (g, x, y) = (eg.gcd, eg.x, eg.y);
                        let (xr, yr) = (x.rem_euclid(n), y.rem_euclid(n));
                        let (ag, bg) = ((a / g).rem_euclid(n), (b / g).rem_euclid(n));
                        let mut pivot: SparseRow = Vec::with_capacity(s.len() + 4);
                        pivot.push((j as u32, g));
                        let mut si = s.iter().skip(1).peekable();
                        for c in j + 1..self.cols {
                            let sv = match si.peek() {
                                Some(&&(sc, sv)) if sc as usize == c => {
                                    si.next();
                                    sv
                                }
                                _ => 0,
                            };
                            let rv = scratch[c];
                            if sv == 0 && rv == 0 {
                                continue;
                            }
                            let new_pivot = bal(xr * rv + yr * sv, n);
                            if new_pivot != 0 {
                                pivot.push((c as u32, new_pivot));
                            }
                            scratch[c] = bal(ag * sv - bg * rv, n);
                        }
                        scratch[j] = 0;
                        self.acc[j] = Some(pivot);
                    }
                }
            }
        }
        self.scratch = scratch;
    }

    /// Materialize the square basis matrix (implicit rows become n*e_j).
    pub fn into_matrix(self) -> ModMat {
        let mut m = ModMat::zeros(self.cols, self.cols);
        for (j, row) in self.acc.into_iter().enumerate() {
            match row {
                None => m[(j, j)] = bal(self.n, self.n),
                Some(r) => {
                    for (c, v) in r {
                        m[(j, c as usize)] = v;
                    }
                }
            }
        }
        m
    }

    /// The diagonal of the triangular basis. Every entry divides n.
    ///
    /// Its product is `|Z^cols / R|` for the accumulated row lattice `R`,
    /// which by the annihilator pairing on `(Z/n)^cols` is exactly the
    /// order of `{x : r.x = 0 mod n for all r in R}` - the kernel order of
    /// the constraint system, with no diagonalization pass.
    pub fn diagonal(&self) -> Vec<i64> {
        self.acc
            .iter()
            .map(|row| match row {
                None => self.n,
                Some(r) => r[0].1,
            })
            .collect()
    }
}

/// Generators (with their additive orders) of `{x in (Z/n)^cols : A x = 0}`,
/// where the rows of `A` are supplied as an iterator of sparse rows.
pub(crate) struct KernelMod {
    pub gens: Vec<Vec<i64>>,
    pub orders: Vec<i64>,
    pub smith: SmithMod,
}

pub(crate) fn kernel_mod<I>(rows: I, cols: usize, n: i64) -> KernelMod
where
    I: IntoIterator<Item = SparseRow>,
{
    let mut hnf = RowSpaceHnf::new(cols, n);
    for r in rows {
        hnf.insert(&r);
    }
    let sm = smith_mod(hnf.into_matrix(), n, true);
    let v = sm.v.as_ref().unwrap();
    let mut gens = Vec::new();
    let mut orders = Vec::new();
    for i in 0..cols {
        let g = sm.col_order(i);
        if g > 1 {
            let scale = n / g;
            let gen: Vec<i64> =
                v.col(i).iter().map(|&x| (i128::from(x) * i128::from(scale)).rem_euclid(n as i128) as i64).collect();
            gens.push(gen);
            orders.push(g);
        }
    }
    KernelMod { gens, orders, smith: sm }
}

/// Solve `A x = b (mod n)`. Returns a solution with entries in `[0, n)`,
/// or `None` exactly when no solution exists.
pub fn solve_mod(a: &IntMatrix, b: &[i128], n: u64) -> Result<Option<Vec<i128>>> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be >= 1".into()));
    }
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch { expected: a.rows, got: b.len() });
    }
    let n = n as i64;
    let sm = smith_mod(ModMat::from_int(a, n), n, true);
    let mut c: Vec<i64> = b.iter().map(|&x| bal128(x, n)).collect();
    sm.apply_row_ops(&mut c);
    let mut y = vec![0i64; a.cols];
    for (i, &ci) in c.iter().enumerate() {
        let d = sm.diag.get(i).copied().unwrap_or(0);
        match solve_cyclic(d, ci, n) {
            Some(yi) => {
                if i < a.cols {
                    y[i] = yi;
                }
            }
            None => return Ok(None),
        }
    }
    let v = sm.v.as_ref().unwrap();
    let x = v.mul_vec_mod(&y, n);
    Ok(Some(x.into_iter().map(|t| i128::from(t.rem_euclid(n))).collect()))
}

/// Smallest non-negative y with d*y = c (mod n), if any.
fn solve_cyclic(d: i64, c: i64, n: i64) -> Option<i64> {
    let d = d.rem_euclid(n);
    let c = c.rem_euclid(n);
    if d == 0 {
        return (c == 0).then_some(0);
    }
    let g = d.gcd(&n);
    if c % g != 0 {
        return None;
    }
    let (d1, c1, n1) = (d / g, c / g, n / g);
    // d1 is a unit mod n1.
    let eg = i64::extended_gcd(&d1, &n1);
    debug_assert_eq!(eg.gcd, 1);
    Some((i128::from(eg.x) * i128::from(c1)).rem_euclid(i128::from(n1)) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: Vec<Vec<i128>>) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn insoluble_congruence() {
        let a = int(vec![vec![2]]);
        assert_eq!(solve_mod(&a, &[1], 4).unwrap(), None);
    }

    #[test]
    fn simple_congruence() {
        let a = int(vec![vec![2]]);
        let x = solve_mod(&a, &[2], 4).unwrap().unwrap();
        assert_eq!((2 * x[0]).rem_euclid(4), 2);
    }

    #[test]
    fn identity_system() {
        let a = IntMatrix::identity(5);
        let b = vec![3, 1, 4, 1, 5];
        for n in [2u64, 6, 7, 12] {
            let x = solve_mod(&a, &b, n).unwrap().unwrap();
            for (xi, bi) in x.iter().zip(&b) {
                assert_eq!(xi.rem_euclid(n as i128), bi.rem_euclid(n as i128));
            }
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = IntMatrix::identity(3);
        assert!(solve_mod(&a, &[1, 2], 5).is_err());
    }

    #[test]
    fn agrees_with_exhaustive_search() {
        // All systems with small dimensions, cols*log2(n) <= 16.
        let mut seed = 0xdeadbeefu64;
        let mut next = move |m: i128| {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed % (2 * m as u64 + 1)) as i128 - m
        };
        for n in [2i128, 3, 4, 6, 8] {
            for rows in 1..=3usize {
                for cols in 1..=3usize {
                    for _ in 0..40 {
                        let mut a = IntMatrix::zeros(rows, cols);
                        for i in 0..rows {
                            for j in 0..cols {
                                a[(i, j)] = next(n);
                            }
                        }
                        let b: Vec<i128> = (0..rows).map(|_| next(n)).collect();
                        let got = solve_mod(&a, &b, n as u64).unwrap();
                        // brute force
                        let mut found = None;
                        let total = (n as u64).pow(cols as u32);
                        'search: for t in 0..total {
                            let mut x = vec![0i128; cols];
                            let mut tt = t;
                            for xi in x.iter_mut() {
                                *xi = (tt % n as u64) as i128;
                                tt /= n as u64;
                            }
                            let ax = a.mul_vec(&x);
                            if ax.iter().zip(&b).all(|(l, r)| (l - r).rem_euclid(n) == 0) {
                                found = Some(x);
                                break 'search;
                            }
                        }
                        assert_eq!(got.is_some(), found.is_some(), "a={a:?} b={b:?} n={n}");
                        if let Some(x) = got {
                            let ax = a.mul_vec(&x);
                            assert!(ax.iter().zip(&b).all(|(l, r)| (l - r).rem_euclid(n) == 0));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_mod_generates_kernel() {
        // Kernel of [2 2; 0 4] mod 8, cross-checked by enumeration.
        let rows: Vec<SparseRow> = vec![vec![(0, 2), (1, 2)], vec![(1, 4)]];
        let k = kernel_mod(rows.clone(), 2, 8);
        let n = 8i64;
        // enumerate subgroup generated by gens
        let mut reached = std::collections::BTreeSet::new();
        reached.insert(vec![0i64, 0]);
        let mut frontier = vec![vec![0i64, 0]];
        while let Some(v) = frontier.pop() {
            for g in &k.gens {
                let w: Vec<i64> = v.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(n)).collect();
                if reached.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        // enumerate true kernel
        let mut truth = std::collections::BTreeSet::new();
        for x in 0..n {
            for y in 0..n {
                if (2 * x + 2 * y) % n == 0 && (4 * y) % n == 0 {
                    truth.insert(vec![x, y]);
                }
            }
        }
        assert_eq!(reached, truth);
        let order: u128 = k.orders.iter().map(|&o| o as u128).product();
        assert_eq!(order as usize, truth.len());
    }
}
