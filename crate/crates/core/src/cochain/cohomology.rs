//! Cohomology groups of finite groups via Smith elimination.
//!
//! For finite coefficients (Q/Z at a level, or a finite module) everything
//! happens mod n: the kernel of the degree-k differential is extracted from
//! the row-space basis of its constraint lattice, and the quotient by the
//! image of the degree-(k-1) differential is put into canonical form by an
//! integer Smith step on the small relation matrix. For integral
//! coefficients the kernel lattice is computed over Z directly.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactmath::matrix::{kernel_basis, smith_normal_form, solve_exact, IntMatrix};
use crate::exactmath::modsolve::{kernel_mod, SparseRow};
use crate::exactmath::Qz;
use crate::fingroup::{FiniteGroup, GModule};

use super::{
    contains_identity, module_d_rows, nonid_tuple_index,
    scalar_d_rows, ModuleCochain, ScalarCochain,
};

/// Coefficients for a cohomology computation.
#[derive(Clone, Debug)]
pub enum CoefficientSystem {
    /// Q/Z with trivial action, restricted to denominators dividing the level.
    QzLevel(u64),
    /// A finite module over Z/n with a matrix action.
    Module(GModule),
    /// Z with trivial action.
    Integral,
}

/// A representative cocycle for one cyclic summand.
#[derive(Clone, Debug)]
pub enum CohomologyRep {
    Scalar(ScalarCochain),
    Module(ModuleCochain),
    /// Coordinates over the non-identity tuples, for integral coefficients.
    Integral(Vec<i128>),
}

/// A computed cohomology group: canonical invariant factors (each > 1; 0
/// denotes a free summand) paired with representative cocycles.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub invariant_factors: Vec<u64>,
    pub representatives: Vec<CohomologyRep>,
}

impl Cohomology {
    pub fn order(&self) -> u128 {
        self.invariant_factors.iter().map(|&d| d as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

/// Full-structure computations keep a square matrix of this side length;
/// larger instances must go through [`cohomology_order`].
const STRUCTURE_CAP: usize = 4096;

/// Compute `H^k(G, M)` with invariant factors and representative cocycles.
pub fn cohomology(
    group: &Arc<FiniteGroup>,
    coeffs: &CoefficientSystem,
    k: usize,
) -> Result<Cohomology> {
    match coeffs {
        CoefficientSystem::QzLevel(level) => {
            let (factors, reps) = finite_structure(group, *level, 1, None, k)?;
            let m = group.order();
            let representatives = reps
                .into_iter()
                .map(|coords| {
                    CohomologyRep::Scalar(
                        ScalarCochain::from_fn(group.clone(), k, *level, |t| {
                            if contains_identity(t) {
                                Qz::ZERO
                            } else {
                                let idx = if k == 0 { 0 } else { nonid_tuple_index(m, t) };
                                Qz::at_level(coords[idx] as i64, *level)
                            }
                        })
                        .expect("representative is normalized"),
                    )
                })
                .collect();
            Ok(Cohomology { invariant_factors: factors, representatives })
        }
        CoefficientSystem::Module(module) => {
            if !Arc::ptr_eq(module.group(), group) && module.group().order() != group.order() {
                return Err(Error::CoefficientMismatch("module is over a different group".into()));
            }
            let rank = module.rank();
            let (factors, reps) =
                finite_structure(group, module.modulus(), rank, Some(module), k)?;
            let m = group.order();
            let representatives = reps
                .into_iter()
                .map(|coords| {
                    CohomologyRep::Module(
                        ModuleCochain::from_fn(module.clone(), k, |t| {
                            if contains_identity(t) {
                                module.zero()
                            } else {
                                let base = if k == 0 { 0 } else { nonid_tuple_index(m, t) * rank };
                                (0..rank).map(|j| coords[base + j]).collect()
                            }
                        })
                        .expect("representative is normalized"),
                    )
                })
                .collect();
            Ok(Cohomology { invariant_factors: factors, representatives })
        }
        CoefficientSystem::Integral => integral_structure(group, k),
    }
}

/// Order of `H^k(G, M)` for finite coefficient systems. Handles sizes the
/// structure path cannot, by never forming transforms. Returns the order as
/// u128 (exact).
pub fn cohomology_order(
    group: &Arc<FiniteGroup>,
    coeffs: &CoefficientSystem,
    k: usize,
) -> Result<u128> {
    match coeffs {
        CoefficientSystem::QzLevel(level) => finite_order(group, *level, 1, None, k),
        CoefficientSystem::Module(module) => {
            finite_order(group, module.modulus(), module.rank(), Some(module), k)
        }
        CoefficientSystem::Integral => Ok(cohomology(group, coeffs, k)?.order()),
    }
}

/// The order of `H^3(G, Q/Z)` (full circle coefficients, trivial action),
/// computed at the finite level `N = |G|`.
///
/// From the coefficient sequence `0 -> Z/N -> Q/Z -N-> Q/Z -> 0` and the
/// fact that `N` kills `H^k(G, Q/Z)` for `k >= 1` while multiplication by
/// `N` is onto on the invariants, the level-`N` groups overshoot by exactly
/// the previous degree:
///
/// ```text
/// |H^1(Q/Z)| = |H^1(Z/N)|,    |H^k(Q/Z)| = |H^k(Z/N)| / |H^{k-1}(Q/Z)|.
/// ```
///
/// This also equals `|H^4(G, Z)|` (the integral Bockstein is an isomorphism
/// in these degrees because rational coefficients vanish for finite groups);
/// the direct integral computation cross-checks it on small groups.
pub fn h3_circle_order(group: &Arc<FiniteGroup>) -> Result<u128> {
    let n = group.order() as u64;
    if group.order() == 1 {
        return Ok(1);
    }
    let coeffs = CoefficientSystem::QzLevel(n);
    let h1 = cohomology_order(group, &coeffs, 1)?;
    let h2 = cohomology_order(group, &coeffs, 2)?;
    let h3 = cohomology_order(group, &coeffs, 3)?;
    let h2_circle = h2 / h1;
    if h2_circle * h1 != h2 || h3 % h2_circle != 0 {
        return Err(Error::Internal("level-N orders violate the exact sequence".into()));
    }
    Ok(h3 / h2_circle)
}

fn d_rows(
    group: &Arc<FiniteGroup>,
    module: Option<&GModule>,
    deg: usize,
) -> Vec<SparseRow> {
    match module {
        Some(md) => module_d_rows(md, deg),
        None => scalar_d_rows(group, deg),
    }
}

fn coords_count(group: &Arc<FiniteGroup>, rank: usize, deg: usize) -> usize {
    (group.order() - 1).pow(deg as u32) * rank
}

/// Multiplicative bookkeeping by prime factorization; the intermediate
/// orders (|Z^k| etc.) overflow any fixed-width integer long before the
/// final cohomology order does.
#[derive(Default)]
struct FactoredOrder {
    exps: BTreeMap<u64, i64>,
}

impl FactoredOrder {
    fn mul(&mut self, mut x: u64, count: i64) {
        let mut p = 2;
        while p * p <= x {
            while x % p == 0 {
                *self.exps.entry(p).or_default() += count;
                x /= p;
            }
            p += 1;
        }
        if x > 1 {
            *self.exps.entry(x).or_default() += count;
        }
    }

    fn value(&self) -> Result<u128> {
        let mut out: u128 = 1;
        for (&p, &e) in &self.exps {
            if e < 0 {
                return Err(Error::Internal("negative exponent in order computation".into()));
            }
            for _ in 0..e {
                out = out
                    .checked_mul(p as u128)
                    .ok_or_else(|| Error::Internal("order overflow".into()))?;
            }
        }
        Ok(out)
    }
}

/// |H^k| = |Z^k| * |Z^{k-1}| / n^(dim C^{k-1}).
fn finite_order(
    group: &Arc<FiniteGroup>,
    n: u64,
    rank: usize,
    module: Option<&GModule>,
    k: usize,
) -> Result<u128> {
    if n == 1 || group.order() == 1 {
        return Ok(1);
    }
    let mut acc = FactoredOrder::default();
    let zk = kernel_orders(group, n, rank, module, k);
    for g in zk {
        acc.mul(g as u64, 1);
    }
    if k > 0 {
        let zk1 = kernel_orders(group, n, rank, module, k - 1);
        for g in zk1 {
            acc.mul(g as u64, 1);
        }
        acc.mul(n, -(coords_count(group, rank, k - 1) as i64));
    }
    acc.value()
}

/// Cyclic factors whose product is the order of the kernel of d^k acting
/// on (Z/n)^coords: the diagonal of the triangular row-space basis of the
/// constraint lattice.
fn kernel_orders(
    group: &Arc<FiniteGroup>,
    n: u64,
    rank: usize,
    module: Option<&GModule>,
    k: usize,
) -> Vec<i64> {
    let cols = coords_count(group, rank, k);
    if cols == 0 {
        return Vec::new();
    }
    let rows = d_rows(group, module, k);
    let mut hnf = crate::exactmath::modsolve::RowSpaceHnf::new(cols, n as i64);
    for r in &rows {
        hnf.insert(r);
    }
    hnf.diagonal()
}

/// Canonicalize a multiset of cyclic orders into an invariant-factor chain
/// (divisibility ascending), dropping trivial factors.
fn canonical_chain(orders: &[u64]) -> Vec<u64> {
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &d in orders {
        let mut x = d;
        let mut p = 2;
        while p * p <= x {
            if x % p == 0 {
                let mut e = 0;
                while x % p == 0 {
                    e += 1;
                    x /= p;
                }
                by_prime.entry(p).or_default().push(e);
            }
            p += 1;
        }
        if x > 1 {
            by_prime.entry(x).or_default().push(1);
        }
    }
    let mut slots = 0usize;
    for exps in by_prime.values() {
        slots = slots.max(exps.len());
    }
    let mut chain = vec![1u64; slots];
    for (&p, exps) in &mut by_prime {
        exps.sort_unstable_by(|a, b| b.cmp(a)); // descending
        for (i, &e) in exps.iter().enumerate() {
            // largest exponents go to the last (largest) invariant factor
            chain[slots - 1 - i] *= p.pow(e);
        }
    }
    chain.retain(|&d| d > 1);
    chain
}

/// Shared structure path for Q/Z-level and module coefficients. Returns the
/// invariant factors and, per factor, the coordinate vector (over
/// non-identity tuples x rank) of a representative cocycle.
fn finite_structure(
    group: &Arc<FiniteGroup>,
    n: u64,
    rank: usize,
    module: Option<&GModule>,
    k: usize,
) -> Result<(Vec<u64>, Vec<Vec<i64>>)> {
    let cols = coords_count(group, rank, k);
    if n == 1 || cols == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    if cols > STRUCTURE_CAP {
        return Err(Error::SizeCap(format!(
            "cochain space has {cols} coordinates (cap {STRUCTURE_CAP}); use the order-only computation"
        )));
    }
    let ni = n as i64;
    let rows = d_rows(group, module, k);
    let km = kernel_mod(rows, cols, ni);
    if km.gens.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let w = km.gens.len();
    let v_inv = km.smith.v_inv.as_ref().expect("kernel tracks transforms");

    // Coordinates of the coboundary generators in the kernel-generator basis.
    let mut relation_cols: Vec<Vec<i64>> = Vec::new();
    if k > 0 {
        let prev = coords_count(group, rank, k - 1);
        // Column c of d^{k-1} = differential of the c-th basis cochain.
        let rows_prev = d_rows(group, module, k - 1);
        let mut cols_of_d = vec![vec![0i64; cols]; prev];
        for (r, row) in rows_prev.iter().enumerate() {
            for &(c, v) in row {
                cols_of_d[c as usize][r] = v.rem_euclid(ni);
            }
        }
        for b in &cols_of_d {
            let y = v_inv.mul_vec_mod(b, ni);
            let mut t = vec![0i64; w];
            let mut wi = 0;
            for i in 0..cols {
                let g = km.smith.col_order(i);
                if g > 1 {
                    let step = ni / g;
                    let yi = y[i].rem_euclid(ni);
                    if yi % step != 0 {
                        return Err(Error::Internal(
                            "coboundary does not lie in the cocycle lattice".into(),
                        ));
                    }
                    t[wi] = (yi / step).rem_euclid(g);
                    wi += 1;
                } else if y[i].rem_euclid(ni) != 0 {
                    return Err(Error::Internal(
                        "coboundary has a component along a trivial direction".into(),
                    ));
                }
            }
            relation_cols.push(t);
        }
    }

    // Present H = (sum Z/g_i) / <relations> as Z^w / [diag(g) | T].
    let mut rel = IntMatrix::zeros(w, w + relation_cols.len());
    for (i, &g) in km.orders.iter().enumerate() {
        rel[(i, i)] = i128::from(g);
    }
    for (j, t) in relation_cols.iter().enumerate() {
        for i in 0..w {
            rel[(i, w + j)] = i128::from(t[i]);
        }
    }
    let snf = smith_normal_form(&rel);
    debug_assert!(snf.verify(&rel));

    let mut factors_raw: Vec<u64> = Vec::new();
    let mut reps: Vec<Vec<i64>> = Vec::new();
    for i in 0..w {
        let d = snf.diag.get(i).copied().unwrap_or(0);
        debug_assert!(d != 0, "quotient of finite group cannot have free part");
        if d.unsigned_abs() > 1 {
            factors_raw.push(d.unsigned_abs() as u64);
            // generator: sum_s u_inv[s][i] * w_s, as a coordinate vector
            let mut vec = vec![0i64; cols];
            for s in 0..w {
                let coef = snf.u_inv[(s, i)];
                if coef == 0 {
                    continue;
                }
                let coef = (coef.rem_euclid(ni as i128)) as i64;
                for (c, x) in km.gens[s].iter().enumerate() {
                    vec[c] = (vec[c] + coef * x).rem_euclid(ni);
                }
            }
            reps.push(vec);
        }
    }
    // The integer SNF already yields a divisor chain; keep order ascending
    // alongside the factors.
    let chain = canonical_chain(&factors_raw);
    debug_assert_eq!(chain, factors_raw, "integer SNF should already be canonical");
    Ok((factors_raw, reps))
}

fn integral_structure(group: &Arc<FiniteGroup>, k: usize) -> Result<Cohomology> {
    let m = group.order();
    let cols = (m - 1).pow(k as u32);
    let rows_n = (m - 1).pow(k as u32 + 1);
    if cols == 0 {
        return Ok(Cohomology { invariant_factors: vec![], representatives: vec![] });
    }
    if cols * rows_n > 4_000_000 {
        return Err(Error::SizeCap(format!(
            "integral differential has {rows_n}x{cols} entries; too large for the dense kernel"
        )));
    }
    let rows = scalar_d_rows(group, k);
    let mut dk = IntMatrix::zeros(rows_n, cols);
    for (r, row) in rows.iter().enumerate() {
        for &(c, v) in row {
            dk[(r, c as usize)] = i128::from(v);
        }
    }
    let kernel = kernel_basis(&dk);
    let dim = kernel.cols;
    if dim == 0 {
        return Ok(Cohomology { invariant_factors: vec![], representatives: vec![] });
    }
    let mut t_cols: Vec<Vec<i128>> = Vec::new();
    if k > 0 {
        let prev = (m - 1).pow(k as u32 - 1);
        let rows_prev = scalar_d_rows(group, k - 1);
        for c in 0..prev {
            let mut b = vec![0i128; cols];
            for (r, row) in rows_prev.iter().enumerate() {
                for &(cc, v) in row {
                    if cc as usize == c {
                        b[r] = i128::from(v);
                    }
                }
            }
            let t = solve_exact(&kernel, &b)
                .ok_or_else(|| Error::Internal("image not inside kernel".into()))?;
            t_cols.push(t);
        }
    }
    let mut t_mat = IntMatrix::zeros(dim, t_cols.len());
    for (j, t) in t_cols.iter().enumerate() {
        for i in 0..dim {
            t_mat[(i, j)] = t[i];
        }
    }
    let snf = smith_normal_form(&t_mat);
    debug_assert!(snf.verify(&t_mat));
    let mut invariant_factors = Vec::new();
    let mut representatives = Vec::new();
    for i in 0..dim {
        let d = snf.diag.get(i).copied().unwrap_or(0).unsigned_abs();
        if d == 1 {
            continue;
        }
        invariant_factors.push(d as u64);
        let mut rep = vec![0i128; cols];
        for s in 0..dim {
            let coef = snf.u_inv[(s, i)];
            if coef == 0 {
                continue;
            }
            for c in 0..cols {
                rep[c] += coef * kernel[(c, s)];
            }
        }
        representatives.push(CohomologyRep::Integral(rep));
    }
    // free summands first would be unusual here; sort zeros (free) last
    Ok(Cohomology { invariant_factors, representatives })
}

/// Convenience: enumerate one scalar cocycle per cohomology class of
/// `H^k(G, Q/Z at level)`, the trivial class first. The enumeration is the
/// full set of coefficient combinations of the canonical representatives.
pub fn enumerate_classes(
    group: &Arc<FiniteGroup>,
    level: u64,
    k: usize,
) -> Result<Vec<ScalarCochain>> {
    let h = cohomology(group, &CoefficientSystem::QzLevel(level), k)?;
    let reps: Vec<&ScalarCochain> = h
        .representatives
        .iter()
        .map(|r| match r {
            CohomologyRep::Scalar(c) => c,
            _ => unreachable!("scalar coefficients"),
        })
        .collect();
    let mut out = Vec::with_capacity(h.order() as usize);
    let factors = &h.invariant_factors;
    let total: u64 = factors.iter().product();
    for mut code in 0..total {
        let mut acc = ScalarCochain::zero(group.clone(), k, level);
        for (rep, &f) in reps.iter().zip(factors) {
            let c = (code % f) as i64;
            code /= f;
            acc = acc.add(&rep.scale(c))?;
        }
        out.push(acc);
    }
    Ok(out)
}
