//! Dense integer matrices and Smith normal form.
//!
//! The SNF routine is the single integer linear-algebra kernel: cohomology
//! groups, coboundary witnesses, and solvability questions all reduce to it
//! (directly, or through the mod-n variant in [`super::modsolve`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i128>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn col(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == i128::from(i == j)))
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

/// Smith normal form `U * A * V = D` with unimodular `U`, `V`.
///
/// `diag` holds the invariant factors `d_1 | d_2 | ...` (non-negative,
/// zeros trailing). The tracked inverses witness unimodularity exactly:
/// `U * U^-1 = I` and `V * V^-1 = I` over the integers.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub diag: Vec<i128>,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|&&d| d != 0).count()
    }

    /// Re-multiply and confirm `U*A*V = D`, the divisibility chain, and
    /// that the tracked inverses really invert `U` and `V`.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let prod = self.u.mul(a).mul(&self.v);
        for i in 0..prod.rows {
            for j in 0..prod.cols {
                let want = if i == j && i < self.diag.len() { self.diag[i] } else { 0 };
                if prod[(i, j)] != want {
                    return false;
                }
            }
        }
        for w in self.diag.windows(2) {
            if w[0] == 0 && w[1] != 0 {
                return false;
            }
            if w[0] != 0 && w[1] % w[0] != 0 {
                return false;
            }
        }
        self.u.mul(&self.u_inv).is_identity() && self.v.mul(&self.v_inv).is_identity()
    }
}

struct SnfWork {
    m: IntMatrix,
    u: Option<(IntMatrix, IntMatrix)>,
    v: Option<(IntMatrix, IntMatrix)>,
}

impl SnfWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.m.cols {
            self.m.data.swap(i * self.m.cols + c, j * self.m.cols + c);
        }
        if let Some((u, u_inv)) = &mut self.u {
            for c in 0..u.cols {
                u.data.swap(i * u.cols + c, j * u.cols + c);
            }
            for r in 0..u_inv.rows {
                u_inv.data.swap(r * u_inv.cols + i, r * u_inv.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.m.rows {
            self.m.data.swap(r * self.m.cols + i, r * self.m.cols + j);
        }
        if let Some((v, v_inv)) = &mut self.v {
            for r in 0..v.rows {
                v.data.swap(r * v.cols + i, r * v.cols + j);
            }
            for c in 0..v_inv.cols {
                v_inv.data.swap(i * v_inv.cols + c, j * v_inv.cols + c);
            }
        }
    }

    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, j: usize, q: i128) {
        if q == 0 {
            return;
        }
        for c in 0..self.m.cols {
            let t = q * self.m[(j, c)];
            self.m[(i, c)] -= t;
        }
        if let Some((u, u_inv)) = &mut self.u {
            for c in 0..u.cols {
                let t = q * u[(j, c)];
                u[(i, c)] -= t;
            }
            for r in 0..u_inv.rows {
                let t = q * u_inv[(r, i)];
                u_inv[(r, j)] += t;
            }
        }
    }

    /// col_i -= q * col_j
    fn col_sub(&mut self, i: usize, j: usize, q: i128) {
        if q == 0 {
            return;
        }
        for r in 0..self.m.rows {
            let t = q * self.m[(r, j)];
            self.m[(r, i)] -= t;
        }
        if let Some((v, v_inv)) = &mut self.v {
            for r in 0..v.rows {
                let t = q * v[(r, j)];
                v[(r, i)] -= t;
            }
            for c in 0..v_inv.cols {
                let t = q * v_inv[(i, c)];
                v_inv[(j, c)] += t;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.m.cols {
            self.m[(i, c)] = -self.m[(i, c)];
        }
        if let Some((u, u_inv)) = &mut self.u {
            for c in 0..u.cols {
                u[(i, c)] = -u[(i, c)];
            }
            for r in 0..u_inv.rows {
                u_inv[(r, i)] = -u_inv[(r, i)];
            }
        }
    }
}

/// Smith normal form with full transform tracking.
///
/// Pivoting is deterministic: the nonzero entry of smallest absolute value
/// in the active block, ties broken row-major.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut w = SnfWork {
        m: a.clone(),
        u: Some((IntMatrix::identity(a.rows), IntMatrix::identity(a.rows))),
        v: Some((IntMatrix::identity(a.cols), IntMatrix::identity(a.cols))),
    };
    snf_in_place(&mut w);
    let n = a.rows.min(a.cols);
    let diag = (0..n).map(|i| w.m[(i, i)]).collect();
    let (u, u_inv) = w.u.unwrap();
    let (v, v_inv) = w.v.unwrap();
    SnfResult { diag, u, u_inv, v, v_inv }
}

/// SNF tracking only `V` (and its inverse); used where `U` would be large
/// and only the column transform is needed (kernel lattices).
pub(crate) fn smith_v_only(a: &IntMatrix) -> (Vec<i128>, IntMatrix, IntMatrix) {
    let mut w = SnfWork {
        m: a.clone(),
        u: None,
        v: Some((IntMatrix::identity(a.cols), IntMatrix::identity(a.cols))),
    };
    snf_in_place(&mut w);
    let n = a.rows.min(a.cols);
    let diag = (0..n).map(|i| w.m[(i, i)]).collect();
    let (v, v_inv) = w.v.unwrap();
    (diag, v, v_inv)
}

fn find_pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let v = m[(i, j)].abs();
            if v != 0 && best.map_or(true, |(bv, _, _)| v < bv) {
                best = Some((v, i, j));
                if v == 1 {
                    return Some((i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn snf_in_place(w: &mut SnfWork) {
    let n = w.m.rows.min(w.m.cols);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = find_pivot(&w.m, t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        // Clear row and column t by euclidean steps; a nonzero remainder
        // becomes the new, strictly smaller pivot.
        loop {
            let mut dirty = false;
            for i in t + 1..w.m.rows {
                let a = w.m[(i, t)];
                if a == 0 {
                    continue;
                }
                let p = w.m[(t, t)];
                let q = a.div_euclid(p);
                w.row_sub(i, t, q);
                if w.m[(i, t)] != 0 {
                    w.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..w.m.cols {
                let a = w.m[(t, j)];
                if a == 0 {
                    continue;
                }
                let p = w.m[(t, t)];
                let q = a.div_euclid(p);
                w.col_sub(j, t, q);
                if w.m[(t, j)] != 0 {
                    w.swap_cols(t, j);
                    dirty = true;
                }
            }
            if !dirty
                && (t + 1..w.m.rows).all(|i| w.m[(i, t)] == 0)
                && (t + 1..w.m.cols).all(|j| w.m[(t, j)] == 0)
            {
                break;
            }
        }
        // Divisibility: the pivot must divide the whole remaining block.
        let p = w.m[(t, t)];
        let mut offender = None;
        'scan: for i in t + 1..w.m.rows {
            for j in t + 1..w.m.cols {
                if w.m[(i, j)] % p != 0 {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            // Fold the offending row into the pivot row and redo this step.
            w.row_sub(t, i, -1);
            continue;
        }
        if w.m[(t, t)] < 0 {
            w.negate_row(t);
        }
        t += 1;
    }
}

/// Basis for the integer kernel lattice `{x : A x = 0}`, one basis vector
/// per column of the returned matrix.
pub(crate) fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let (diag, v, _) = smith_v_only(a);
    let rank = diag.iter().filter(|&&d| d != 0).count();
    let dim = a.cols - rank;
    let mut k = IntMatrix::zeros(a.cols, dim);
    for (out, j) in (rank..a.cols).enumerate() {
        for i in 0..a.cols {
            k[(i, out)] = v[(i, j)];
        }
    }
    k
}

/// Solve `A x = b` exactly over the integers.
pub(crate) fn solve_exact(a: &IntMatrix, b: &[i128]) -> Option<Vec<i128>> {
    assert_eq!(a.rows, b.len());
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let mut y = vec![0i128; a.cols];
    for (i, &ci) in c.iter().enumerate() {
        let d = if i < snf.diag.len() { snf.diag[i] } else { 0 };
        if d == 0 {
            if ci != 0 {
                return None;
            }
        } else {
            if ci % d != 0 {
                return None;
            }
            y[i] = ci / d;
        }
    }
    Some(snf.v.mul_vec(&y))
}
