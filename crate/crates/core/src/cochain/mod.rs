//! Normalized cochain complexes for finite groups.
//!
//! A k-cochain is a function on k-tuples of group elements vanishing
//! whenever an argument is the identity. Tables store all `|G|^k` tuples
//! (identity-containing entries pinned to zero) so the differential stays
//! index arithmetic; normalization is a checked invariant.
//!
//! The differential follows the sign convention
//!
//! ```text
//! df(g1,...,g_{k+1}) = -g1.f(g2,...,g_{k+1})
//!                      + sum_{i=1..k} (-1)^{i+1} f(g1,...,g_i g_{i+1},...,g_{k+1})
//!                      + (-1)^k f(g1,...,g_k)
//! ```
//!
//! which is the negative of the textbook bar differential; kernels, images
//! and cohomology groups are unchanged, but individual trivialization
//! formulas depend on it, so it is fixed here once and used everywhere.

pub mod cohomology;

use std::sync::Arc;



use crate::error::{Error, Result};
use crate::exactmath::modsolve::{self, SparseRow};
use crate::exactmath::Qz;
use crate::fingroup::{DiagonalQuotient, Elt, FiniteGroup, GModule, GroupHom};
use crate::par;

pub use cohomology::{cohomology, cohomology_order, enumerate_classes, h3_circle_order, CoefficientSystem, Cohomology, CohomologyRep};

/// Index of a tuple in the row-major enumeration of `G^k`.
pub fn tuple_index(order: usize, tuple: &[Elt]) -> usize {
    tuple.iter().fold(0usize, |acc, &g| acc * order + g as usize)
}

/// Inverse of [`tuple_index`].
pub fn index_tuple(order: usize, degree: usize, mut idx: usize) -> Vec<Elt> {
    let mut t = vec![0 as Elt; degree];
    for slot in t.iter_mut().rev() {
        *slot = (idx % order) as Elt;
        idx /= order;
    }
    t
}

fn contains_identity(tuple: &[Elt]) -> bool {
    tuple.iter().any(|&g| g == 0)
}

/// Tuples over non-identity elements only, as used for matrix coordinates.
pub(crate) fn nonid_tuple_index(order: usize, tuple: &[Elt]) -> usize {
    tuple.iter().fold(0usize, |acc, &g| {
        debug_assert!(g != 0);
        acc * (order - 1) + (g as usize - 1)
    })
}

pub(crate) fn nonid_index_tuple(order: usize, degree: usize, mut idx: usize) -> Vec<Elt> {
    let mut t = vec![0 as Elt; degree];
    for slot in t.iter_mut().rev() {
        *slot = (idx % (order - 1) + 1) as Elt;
        idx /= order - 1;
    }
    t
}

/// A normalized cochain with values in Q/Z (trivial action), all
/// denominators dividing `level`.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarCochain {
    group: Arc<FiniteGroup>,
    degree: usize,
    level: u64,
    values: Vec<Qz>,
}

impl std::fmt::Debug for ScalarCochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ScalarCochain(deg={}, level={}, |G|={})",
            self.degree,
            self.level,
            self.group.order()
        )
    }
}

impl ScalarCochain {
    pub fn zero(group: Arc<FiniteGroup>, degree: usize, level: u64) -> Self {
        let len = group.order().pow(degree as u32);
        ScalarCochain { group, degree, level, values: vec![Qz::ZERO; len] }
    }

    /// Build from an evaluation function; checks normalization and level.
    pub fn from_fn(
        group: Arc<FiniteGroup>,
        degree: usize,
        level: u64,
        f: impl Fn(&[Elt]) -> Qz,
    ) -> Result<Self> {
        let m = group.order();
        let len = m.pow(degree as u32);
        let mut values = Vec::with_capacity(len);
        for idx in 0..len {
            let t = index_tuple(m, degree, idx);
            let v = f(&t);
            if contains_identity(&t) && !v.is_zero() {
                return Err(Error::InvalidCochain(format!("not normalized at {t:?}")));
            }
            if level % v.den() != 0 {
                return Err(Error::LevelMismatch { den: v.den(), level });
            }
            values.push(v);
        }
        Ok(ScalarCochain { group, degree, level, values })
    }

    pub fn from_values(
        group: Arc<FiniteGroup>,
        degree: usize,
        level: u64,
        values: Vec<Qz>,
    ) -> Result<Self> {
        let m = group.order();
        if values.len() != m.pow(degree as u32) {
            return Err(Error::DimensionMismatch {
                expected: m.pow(degree as u32),
                got: values.len(),
            });
        }
        ScalarCochain::from_fn(group, degree, level, |t| values[tuple_index(m, t)])
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn values(&self) -> &[Qz] {
        &self.values
    }

    #[inline]
    pub fn value(&self, tuple: &[Elt]) -> Qz {
        debug_assert_eq!(tuple.len(), self.degree);
        self.values[tuple_index(self.group.order(), tuple)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Qz::is_zero)
    }

    /// Pointwise evaluation of the differential at a (k+1)-tuple; does not
    /// materialize the next table.
    pub fn differential_value(&self, tuple: &[Elt]) -> Qz {
        debug_assert_eq!(tuple.len(), self.degree + 1);
        let k = self.degree;
        let g = &self.group;
        // trivial action on Q/Z, so the leading term is just -f(g2..)
        let mut acc = -self.value(&tuple[1..]);
        let mut merged = vec![0 as Elt; k];
        for i in 0..k {
            merged.clear();
            merged.extend_from_slice(&tuple[..i]);
            merged.push(g.mul(tuple[i], tuple[i + 1]));
            merged.extend_from_slice(&tuple[i + 2..]);
            let term = self.value(&merged);
            acc = if i % 2 == 0 { acc + term } else { acc - term };
        }
        let last = self.value(&tuple[..k]);
        if k % 2 == 0 {
            acc + last
        } else {
            acc - last
        }
    }

    /// The full differential table in degree k+1.
    pub fn differential(&self) -> ScalarCochain {
        let m = self.group.order();
        let len = m.pow(self.degree as u32 + 1);
        let values: Vec<Qz> = (0..len)
            .map(|idx| {
                let t = index_tuple(m, self.degree + 1, idx);
                if contains_identity(&t) {
                    Qz::ZERO
                } else {
                    self.differential_value(&t)
                }
            })
            .collect();
        ScalarCochain { group: self.group.clone(), degree: self.degree + 1, level: self.level, values }
    }

    /// First tuple where the differential is nonzero, if any.
    pub fn cocycle_defect(&self) -> Option<Vec<Elt>> {
        let m = self.group.order();
        let len = m.pow(self.degree as u32 + 1);
        let hits = par::scan(len, |idx| {
            let t = index_tuple(m, self.degree + 1, idx);
            if contains_identity(&t) {
                return None;
            }
            (!self.differential_value(&t).is_zero()).then_some(t)
        });
        hits.into_iter().next()
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_defect().is_none()
    }

    /// Search for `g` with `dg = self` among cochains at `search_level`.
    ///
    /// A `Some` answer is exact. A `None` answer is a proof of
    /// non-coboundariness *at that level only*: witnesses may exist at a
    /// higher level. (For a cocycle at level `l` over a group of order `m`,
    /// level `l * m` is conclusive for Q/Z.)
    pub fn coboundary_witness(&self, search_level: u64) -> Result<Option<ScalarCochain>> {
        if self.degree == 0 {
            return Ok(self.is_zero().then(|| ScalarCochain::zero(self.group.clone(), 0, search_level)));
        }
        if search_level % self.level != 0 {
            return Err(Error::LevelMismatch { den: self.level, level: search_level });
        }
        let m = self.group.order();
        let k = self.degree;
        let rows = scalar_d_rows(&self.group, k - 1);
        let ncols = (m - 1).pow(k as u32 - 1);
        let nrows = (m - 1).pow(k as u32);
        // dense system: rows of d^{k-1} as a matrix, rhs = values at level.
        let mut a = crate::exactmath::IntMatrix::zeros(nrows, ncols);
        for (r, row) in rows.iter().enumerate() {
            for &(c, v) in row {
                a[(r, c as usize)] = i128::from(v);
            }
        }
        let mut b = vec![0i128; nrows];
        for idx in 0..nrows {
            let t = nonid_index_tuple(m, k, idx);
            let v = self.value(&t);
            b[idx] = i128::from(v.numerator_at_level(search_level).unwrap());
        }
        let Some(x) = modsolve::solve_mod(&a, &b, search_level)? else {
            return Ok(None);
        };
        let witness = ScalarCochain::from_fn(self.group.clone(), k - 1, search_level, |t| {
            if contains_identity(t) {
                Qz::ZERO
            } else {
                Qz::at_level(x[nonid_tuple_index(m, t)] as i64, search_level)
            }
        })?;
        // dg = f exactly, not just mod the level
        debug_assert!(witness.differential() == self.raise_level(search_level).unwrap());
        Ok(Some(witness))
    }

    pub fn raise_level(&self, level: u64) -> Result<ScalarCochain> {
        if level % self.level != 0 {
            return Err(Error::LevelMismatch { den: self.level, level });
        }
        let mut c = self.clone();
        c.level = level;
        Ok(c)
    }

    pub fn add(&self, rhs: &ScalarCochain) -> Result<ScalarCochain> {
        self.combine(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &ScalarCochain) -> Result<ScalarCochain> {
        self.combine(rhs, |a, b| a - b)
    }

    fn combine(&self, rhs: &ScalarCochain, op: impl Fn(Qz, Qz) -> Qz) -> Result<ScalarCochain> {
        if self.degree != rhs.degree || self.group.order() != rhs.group.order() {
            return Err(Error::CoefficientMismatch("cochain shapes differ".into()));
        }
        let level = num_integer::lcm(self.level, rhs.level);
        let values = self.values.iter().zip(&rhs.values).map(|(&a, &b)| op(a, b)).collect();
        Ok(ScalarCochain { group: self.group.clone(), degree: self.degree, level, values })
    }

    pub fn neg(&self) -> ScalarCochain {
        ScalarCochain {
            group: self.group.clone(),
            degree: self.degree,
            level: self.level,
            values: self.values.iter().map(|&v| -v).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> ScalarCochain {
        ScalarCochain {
            group: self.group.clone(),
            degree: self.degree,
            level: self.level,
            values: self.values.iter().map(|v| v.scale(k)).collect(),
        }
    }
}

/// A normalized cochain with values in a finite G-module.
#[derive(Clone, PartialEq)]
pub struct ModuleCochain {
    module: GModule,
    degree: usize,
    values: Vec<Vec<i64>>,
}

impl std::fmt::Debug for ModuleCochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ModuleCochain(deg={}, {:?})", self.degree, self.module)
    }
}

impl ModuleCochain {
    pub fn zero(module: GModule, degree: usize) -> Self {
        let len = module.group().order().pow(degree as u32);
        let values = vec![module.zero(); len];
        ModuleCochain { module, degree, values }
    }

    pub fn from_fn(
        module: GModule,
        degree: usize,
        f: impl Fn(&[Elt]) -> Vec<i64>,
    ) -> Result<Self> {
        let m = module.group().order();
        let len = m.pow(degree as u32);
        let mut values = Vec::with_capacity(len);
        for idx in 0..len {
            let t = index_tuple(m, degree, idx);
            let v = module.reduce(&f(&t));
            if v.len() != module.rank() {
                return Err(Error::DimensionMismatch { expected: module.rank(), got: v.len() });
            }
            if contains_identity(&t) && v.iter().any(|&x| x != 0) {
                return Err(Error::InvalidCochain(format!("not normalized at {t:?}")));
            }
            values.push(v);
        }
        Ok(ModuleCochain { module, degree, values })
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn value(&self, tuple: &[Elt]) -> &[i64] {
        &self.values[tuple_index(self.module.group().order(), tuple)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    pub fn differential_value(&self, tuple: &[Elt]) -> Vec<i64> {
        debug_assert_eq!(tuple.len(), self.degree + 1);
        let k = self.degree;
        let md = &self.module;
        let g = md.group().clone();
        let mut acc = md.neg(&md.apply(tuple[0], self.value(&tuple[1..])));
        let mut merged: Vec<Elt>;
        for i in 0..k {
            merged = Vec::with_capacity(k);
            merged.extend_from_slice(&tuple[..i]);
            merged.push(g.mul(tuple[i], tuple[i + 1]));
            merged.extend_from_slice(&tuple[i + 2..]);
            let term = self.value(&merged);
            acc = if i % 2 == 0 { md.add(&acc, term) } else { md.sub(&acc, term) };
        }
        let last = self.value(&tuple[..k]);
        if k % 2 == 0 {
            md.add(&acc, last)
        } else {
            md.sub(&acc, last)
        }
    }

    pub fn differential(&self) -> ModuleCochain {
        let m = self.module.group().order();
        let len = m.pow(self.degree as u32 + 1);
        let values: Vec<Vec<i64>> = (0..len)
            .map(|idx| {
                let t = index_tuple(m, self.degree + 1, idx);
                if contains_identity(&t) {
                    self.module.zero()
                } else {
                    self.differential_value(&t)
                }
            })
            .collect();
        ModuleCochain { module: self.module.clone(), degree: self.degree + 1, values }
    }

    pub fn cocycle_defect(&self) -> Option<Vec<Elt>> {
        let m = self.module.group().order();
        let len = m.pow(self.degree as u32 + 1);
        let hits = par::scan(len, |idx| {
            let t = index_tuple(m, self.degree + 1, idx);
            if contains_identity(&t) {
                return None;
            }
            self.differential_value(&t).iter().any(|&x| x != 0).then_some(t)
        });
        hits.into_iter().next()
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_defect().is_none()
    }

    /// Witness `g` with `dg = self`, over the module's own modulus. Unlike
    /// the scalar case this is decided absolutely (the module is finite).
    pub fn coboundary_witness(&self) -> Result<Option<ModuleCochain>> {
        if self.degree == 0 {
            return Ok(self.is_zero().then(|| ModuleCochain::zero(self.module.clone(), 0)));
        }
        let m = self.module.group().order();
        let k = self.degree;
        let rank = self.module.rank();
        let n = self.module.modulus();
        let rows = module_d_rows(&self.module, k - 1);
        let ncols = (m - 1).pow(k as u32 - 1) * rank;
        let nrows = (m - 1).pow(k as u32) * rank;
        let mut a = crate::exactmath::IntMatrix::zeros(nrows, ncols);
        for (r, row) in rows.iter().enumerate() {
            for &(c, v) in row {
                a[(r, c as usize)] = i128::from(v);
            }
        }
        let mut b = vec![0i128; nrows];
        for idx in 0..(m - 1).pow(k as u32) {
            let t = nonid_index_tuple(m, k, idx);
            for (j, &x) in self.value(&t).iter().enumerate() {
                b[idx * rank + j] = i128::from(x);
            }
        }
        let Some(x) = modsolve::solve_mod(&a, &b, n)? else {
            return Ok(None);
        };
        let witness = ModuleCochain::from_fn(self.module.clone(), k - 1, |t| {
            if contains_identity(t) {
                self.module.zero()
            } else {
                let base = nonid_tuple_index(m, t) * rank;
                (0..rank).map(|j| x[base + j] as i64).collect()
            }
        })?;
        debug_assert!(witness.differential() == *self);
        Ok(Some(witness))
    }

    pub fn add(&self, rhs: &ModuleCochain) -> Result<ModuleCochain> {
        if self.degree != rhs.degree || self.module.rank() != rhs.module.rank() {
            return Err(Error::CoefficientMismatch("cochain shapes differ".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&rhs.values)
            .map(|(a, b)| self.module.add(a, b))
            .collect();
        Ok(ModuleCochain { module: self.module.clone(), degree: self.degree, values })
    }

    pub fn scale(&self, k: i64) -> ModuleCochain {
        let n = self.module.modulus() as i64;
        let values = self
            .values
            .iter()
            .map(|v| v.iter().map(|&x| (x * k).rem_euclid(n)).collect())
            .collect();
        ModuleCochain { module: self.module.clone(), degree: self.degree, values }
    }
}

/// Sparse rows of the degree-k differential matrix for scalar (trivial
/// action) coefficients: one row per non-identity (k+1)-tuple, columns
/// indexed by non-identity k-tuples.
pub(crate) fn scalar_d_rows(group: &FiniteGroup, k: usize) -> Vec<SparseRow> {
    let m = group.order();
    let nrows = (m - 1).pow(k as u32 + 1);
    let mut rows = Vec::with_capacity(nrows);
    for idx in 0..nrows {
        let t = nonid_index_tuple(m, k + 1, idx);
        let mut entries: Vec<(u32, i64)> = Vec::with_capacity(k + 2);
        let push = |tuple: &[Elt], sign: i64, entries: &mut Vec<(u32, i64)>| {
            if !contains_identity(tuple) {
                entries.push((nonid_tuple_index(m, tuple) as u32, sign));
            }
        };
        push(&t[1..], -1, &mut entries);
        let mut merged = Vec::with_capacity(k);
        for i in 0..k {
            merged.clear();
            merged.extend_from_slice(&t[..i]);
            merged.push(group.mul(t[i], t[i + 1]));
            merged.extend_from_slice(&t[i + 2..]);
            push(&merged, if i % 2 == 0 { 1 } else { -1 }, &mut entries);
        }
        push(&t[..k], if k % 2 == 0 { 1 } else { -1 }, &mut entries);
        entries.sort_by_key(|&(c, _)| c);
        // merge duplicate columns
        let mut out: SparseRow = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => out.push((c, v)),
            }
        }
        out.retain(|&(_, v)| v != 0);
        rows.push(out);
    }
    rows
}

/// Sparse rows of the degree-k differential for module coefficients;
/// coordinates are (tuple, module coordinate) pairs, `tuple * rank + j`.
pub(crate) fn module_d_rows(module: &GModule, k: usize) -> Vec<SparseRow> {
    let group = module.group().clone();
    let m = group.order();
    let rank = module.rank();
    let n = module.modulus() as i64;
    let ntuples = (m - 1).pow(k as u32 + 1);
    let mut rows = Vec::with_capacity(ntuples * rank);
    for idx in 0..ntuples {
        let t = nonid_index_tuple(m, k + 1, idx);
        for rho in 0..rank {
            let mut entries: Vec<(u32, i64)> = Vec::new();
            // -g1 . f(g2...): row rho of the action matrix spreads over columns
            if !contains_identity(&t[1..]) {
                let base = nonid_tuple_index(m, &t[1..]) * rank;
                let act = module.action_matrix(t[0]);
                for sigma in 0..rank {
                    let coef = act[rho * rank + sigma];
                    if coef % n != 0 {
                        entries.push(((base + sigma) as u32, -coef));
                    }
                }
            }
            let push_plain = |tuple: &[Elt], sign: i64, entries: &mut Vec<(u32, i64)>| {
                if !contains_identity(tuple) {
                    entries.push(((nonid_tuple_index(m, tuple) * rank + rho) as u32, sign));
                }
            };
            let mut merged = Vec::with_capacity(k);
            for i in 0..k {
                merged.clear();
                merged.extend_from_slice(&t[..i]);
                merged.push(group.mul(t[i], t[i + 1]));
                merged.extend_from_slice(&t[i + 2..]);
                push_plain(&merged, if i % 2 == 0 { 1 } else { -1 }, &mut entries);
            }
            push_plain(&t[..k], if k % 2 == 0 { 1 } else { -1 }, &mut entries);
            entries.sort_by_key(|&(c, _)| c);
            let mut out: SparseRow = Vec::with_capacity(entries.len());
            for (c, v) in entries {
                match out.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => out.push((c, v)),
                }
            }
            out.retain(|&(_, v)| v.rem_euclid(n) != 0);
            rows.push(out);
        }
    }
    rows
}

/// Pull a scalar cochain back along a homomorphism.
pub fn pullback_scalar(rho: &GroupHom, f: &ScalarCochain) -> Result<ScalarCochain> {
    if !Arc::ptr_eq(&rho.target, f.group()) && rho.target.order() != f.group().order() {
        return Err(Error::CoefficientMismatch("pullback target mismatch".into()));
    }
    ScalarCochain::from_fn(rho.source.clone(), f.degree(), f.level(), |t| {
        let image: Vec<Elt> = t.iter().map(|&h| rho.apply(h)).collect();
        f.value(&image)
    })
}

/// Pull a module cochain back along a homomorphism; the module is pulled
/// back with it (the source acts through `rho`).
pub fn pullback_module(rho: &GroupHom, f: &ModuleCochain) -> Result<ModuleCochain> {
    let source_module = pullback_gmodule(rho, f.module())?;
    let mv = f.clone();
    ModuleCochain::from_fn(source_module, f.degree(), |t| {
        let image: Vec<Elt> = t.iter().map(|&h| rho.apply(h)).collect();
        mv.value(&image).to_vec()
    })
}

pub fn pullback_gmodule(rho: &GroupHom, module: &GModule) -> Result<GModule> {
    let action = rho
        .source
        .elements()
        .map(|g| module.action_matrix(rho.apply(g)).to_vec())
        .collect();
    GModule::new(rho.source.clone(), module.modulus(), module.rank(), action)
}

/// Push a scalar cochain forward along multiplication by `k` on Q/Z.
pub fn pushforward_scale(f: &ScalarCochain, k: i64) -> ScalarCochain {
    f.scale(k)
}

/// Push a module cochain forward along an equivariant linear map given by
/// `matrix` (target_rank x source_rank, entries mod the target modulus).
pub fn pushforward_module(
    f: &ModuleCochain,
    target: &GModule,
    matrix: &[i64],
) -> Result<ModuleCochain> {
    let src = f.module();
    let (rs, rt) = (src.rank(), target.rank());
    if matrix.len() != rs * rt {
        return Err(Error::DimensionMismatch { expected: rs * rt, got: matrix.len() });
    }
    let nt = target.modulus() as i64;
    // well-defined on Z/n_s: n_s * L = 0 mod n_t
    for &x in matrix {
        if (x * src.modulus() as i64).rem_euclid(nt) != 0 {
            return Err(Error::NotEquivariant(
                "map not well-defined on source modulus".into(),
            ));
        }
    }
    let apply = |v: &[i64]| -> Vec<i64> {
        (0..rt)
            .map(|i| {
                let mut acc = 0i64;
                for (j, &vj) in v.iter().enumerate() {
                    acc = (acc + matrix[i * rs + j] * vj).rem_euclid(nt);
                }
                acc
            })
            .collect()
    };
    // equivariance: L . act_s(g) = act_t(g) . L on basis vectors
    for g in src.group().elements() {
        for j in 0..rs {
            let mut e = vec![0i64; rs];
            e[j] = 1;
            let lhs = apply(&src.apply(g, &e));
            let rhs = target.apply(g, &apply(&e));
            if lhs != rhs {
                return Err(Error::NotEquivariant(format!("fails at g={g}, basis {j}")));
            }
        }
    }
    let fv = f.clone();
    ModuleCochain::from_fn(target.clone(), f.degree(), |t| apply(fv.value(t)))
}

/// Push a rank-one cochain with trivial action into Q/Z, sending the
/// generator `1` to the phase `t` (so `j` goes to `j*t`).
pub fn embed_rank1_scalar(f: &ModuleCochain, t: Qz) -> Result<ScalarCochain> {
    let md = f.module();
    if md.rank() != 1 {
        return Err(Error::CoefficientMismatch("expected rank-1 module".into()));
    }
    for g in md.group().elements() {
        if md.action_matrix(g) != [1] {
            return Err(Error::NotEquivariant("expected trivial action".into()));
        }
    }
    let level = num_integer::lcm(t.den(), md.modulus());
    ScalarCochain::from_fn(md.group().clone(), f.degree(), level, |tu| {
        t.scale(f.value(tu)[0])
    })
}

/// Serialized form of a scalar cochain: nonzero values keyed by the
/// comma-separated element indices of their tuple.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct ScalarCochainData {
    pub degree: usize,
    pub level: u64,
    pub group_order: usize,
    pub values: std::collections::BTreeMap<String, Qz>,
}

impl ScalarCochainData {
    pub fn from_cochain(c: &ScalarCochain) -> Self {
        let m = c.group.order();
        let mut values = std::collections::BTreeMap::new();
        for (idx, v) in c.values.iter().enumerate() {
            if !v.is_zero() {
                let t = index_tuple(m, c.degree, idx);
                values.insert(tuple_key(&t), *v);
            }
        }
        ScalarCochainData { degree: c.degree, level: c.level, group_order: m, values }
    }

    pub fn bind(&self, group: Arc<FiniteGroup>) -> Result<ScalarCochain> {
        if group.order() != self.group_order {
            return Err(Error::InvalidCochain(format!(
                "cochain is over a group of order {}, got {}",
                self.group_order,
                group.order()
            )));
        }
        let mut c = ScalarCochain::zero(group.clone(), self.degree, self.level);
        let m = group.order();
        for (key, &v) in &self.values {
            let t = parse_tuple_key(key, self.degree, m)?;
            c.values[tuple_index(m, &t)] = v;
        }
        // re-validate normalization and level through the checked constructor
        ScalarCochain::from_values(group, self.degree, self.level, c.values)
    }
}

/// Serialized form of a module cochain.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct ModuleCochainData {
    pub degree: usize,
    pub modulus: u64,
    pub rank: usize,
    pub group_order: usize,
    pub values: std::collections::BTreeMap<String, Vec<i64>>,
}

impl ModuleCochainData {
    pub fn from_cochain(c: &ModuleCochain) -> Self {
        let m = c.module.group().order();
        let mut values = std::collections::BTreeMap::new();
        for (idx, v) in c.values.iter().enumerate() {
            if v.iter().any(|&x| x != 0) {
                let t = index_tuple(m, c.degree, idx);
                values.insert(tuple_key(&t), v.clone());
            }
        }
        ModuleCochainData {
            degree: c.degree,
            modulus: c.module.modulus(),
            rank: c.module.rank(),
            group_order: m,
            values,
        }
    }

    pub fn bind(&self, module: GModule) -> Result<ModuleCochain> {
        if module.rank() != self.rank || module.modulus() != self.modulus {
            return Err(Error::InvalidCochain("module shape mismatch".into()));
        }
        let m = module.group().order();
        if m != self.group_order {
            return Err(Error::InvalidCochain("group order mismatch".into()));
        }
        let len = m.pow(self.degree as u32);
        let mut values = vec![module.zero(); len];
        for (key, v) in &self.values {
            let t = parse_tuple_key(key, self.degree, m)?;
            values[tuple_index(m, &t)] = module.reduce(v);
        }
        ModuleCochain::from_fn(module, self.degree, |t| values[tuple_index(m, t)].clone())
    }
}

fn tuple_key(t: &[Elt]) -> String {
    t.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_tuple_key(key: &str, degree: usize, order: usize) -> Result<Vec<Elt>> {
    let t: std::result::Result<Vec<Elt>, _> =
        key.split(',').filter(|s| !s.is_empty()).map(|s| s.trim().parse::<Elt>()).collect();
    let t = t.map_err(|e| Error::InvalidCochain(format!("bad tuple key {key:?}: {e}")))?;
    if t.len() != degree {
        return Err(Error::InvalidCochain(format!("tuple {key:?} has wrong arity")));
    }
    if t.iter().any(|&g| g as usize >= order) {
        return Err(Error::InvalidCochain(format!("tuple {key:?} out of range")));
    }
    Ok(t)
}

/// The connecting map of the coinduced short exact sequence
/// `0 -> Z/n -> M -> A -> 0`: lift an A-valued cocycle through the additive
/// section, take the differential, and read off the diagonal value.
///
/// Because the section is additive, this map is linear over Z/n.
pub fn connecting_delta(dq: &DiagonalQuotient, f: &ModuleCochain) -> Result<ModuleCochain> {
    if f.module().rank() != dq.quotient.rank() {
        return Err(Error::CoefficientMismatch("cochain is not valued in the quotient".into()));
    }
    if let Some(t) = f.cocycle_defect() {
        return Err(Error::NotACocycle(format!("{t:?}")));
    }
    let m_mod = dq.coinduced.clone();
    let lifted = ModuleCochain::from_fn(m_mod.clone(), f.degree(), |t| dq.section(f.value(t)))?;
    let d = lifted.differential();
    let group = m_mod.group().clone();
    let out_mod = GModule::trivial(group.clone(), m_mod.modulus(), 1);
    let order = group.order();
    let len = order.pow(d.degree() as u32);
    let mut values = Vec::with_capacity(len);
    for idx in 0..len {
        let t = index_tuple(order, d.degree(), idx);
        let v = d.value(&t);
        let z = dq
            .diagonal_value(v)
            .ok_or_else(|| Error::Internal(format!("connecting value escapes the scalars at {t:?}")))?;
        values.push(vec![z]);
    }
    Ok(ModuleCochain { module: out_mod, degree: d.degree(), values })
}

#[cfg(test)]
mod tests;
