//! Finite G-modules over Z/n, the coinduced module, and its quotient by the
//! diagonal copy of Z/n.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingroup::{Elt, FiniteGroup};

/// A finitely generated module over Z/n with a G-action by matrices.
/// Elements are vectors in `(Z/n)^rank`, stored with entries in `[0, n)`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct GModule {
    #[serde(skip)]
    group: Option<Arc<FiniteGroup>>,
    modulus: u64,
    rank: usize,
    /// One `rank x rank` row-major matrix per group element.
    action: Vec<Vec<i64>>,
}

impl std::fmt::Debug for GModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GModule(Z/{}^{})", self.modulus, self.rank)
    }
}

impl GModule {
    pub fn new(
        group: Arc<FiniteGroup>,
        modulus: u64,
        rank: usize,
        action: Vec<Vec<i64>>,
    ) -> Result<GModule> {
        if modulus == 0 {
            return Err(Error::InvalidModule("modulus must be >= 1".into()));
        }
        if action.len() != group.order() {
            return Err(Error::DimensionMismatch { expected: group.order(), got: action.len() });
        }
        if action.iter().any(|m| m.len() != rank * rank) {
            return Err(Error::InvalidModule("action matrix has wrong shape".into()));
        }
        let mut m = GModule { group: Some(group.clone()), modulus, rank, action };
        m.normalize();
        // action(1) = I and action(g) action(h) = action(gh)
        let n = modulus as i64;
        for i in 0..rank {
            for j in 0..rank {
                let want = i64::from(i == j);
                if m.action[0][i * rank + j] != want {
                    return Err(Error::InvalidModule("action of identity is not I".into()));
                }
            }
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                let prod = mat_mul_mod(&m.action[g as usize], &m.action[h as usize], rank, n);
                if prod != m.action[gh as usize] {
                    return Err(Error::InvalidModule(format!(
                        "action is not a homomorphism at ({g},{h})"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// The trivial module (Z/n)^rank.
    pub fn trivial(group: Arc<FiniteGroup>, modulus: u64, rank: usize) -> GModule {
        let id: Vec<i64> = (0..rank * rank)
            .map(|k| i64::from(k % (rank + 1) == 0))
            .collect();
        GModule {
            group: Some(group.clone()),
            modulus,
            rank,
            action: vec![id; group.order()],
        }
    }

    fn normalize(&mut self) {
        let n = self.modulus as i64;
        for m in &mut self.action {
            for x in m.iter_mut() {
                *x = x.rem_euclid(n);
            }
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.group.as_ref().expect("module not bound to a group")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of elements, `n^rank`.
    pub fn size(&self) -> u64 {
        self.modulus.pow(self.rank as u32)
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank]
    }

    pub fn action_matrix(&self, g: Elt) -> &[i64] {
        &self.action[g as usize]
    }

    pub fn apply(&self, g: Elt, v: &[i64]) -> Vec<i64> {
        debug_assert_eq!(v.len(), self.rank);
        let n = self.modulus as i64;
        let m = &self.action[g as usize];
        (0..self.rank)
            .map(|i| {
                let mut acc: i64 = 0;
                for (j, &vj) in v.iter().enumerate() {
                    acc = (acc + m[i * self.rank + j] * vj).rem_euclid(n);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = self.modulus as i64;
        a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(n)).collect()
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = self.modulus as i64;
        a.iter().zip(b).map(|(x, y)| (x - y).rem_euclid(n)).collect()
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        let n = self.modulus as i64;
        a.iter().map(|x| (-x).rem_euclid(n)).collect()
    }

    pub fn reduce(&self, a: &[i64]) -> Vec<i64> {
        let n = self.modulus as i64;
        a.iter().map(|x| x.rem_euclid(n)).collect()
    }

    /// Index of a vector in the mixed-radix enumeration of all elements.
    pub fn index_of(&self, v: &[i64]) -> usize {
        let n = self.modulus as i64;
        let mut idx = 0usize;
        for &x in v.iter().rev() {
            idx = idx * self.modulus as usize + x.rem_euclid(n) as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Vec<i64> {
        let n = self.modulus as usize;
        (0..self.rank)
            .map(|_| {
                let x = (idx % n) as i64;
                idx /= n;
                x
            })
            .collect()
    }
}

fn mat_mul_mod(a: &[i64], b: &[i64], rank: usize, n: i64) -> Vec<i64> {
    let mut out = vec![0i64; rank * rank];
    for i in 0..rank {
        for k in 0..rank {
            let aik = a[i * rank + k];
            if aik == 0 {
                continue;
            }
            for j in 0..rank {
                out[i * rank + j] = (out[i * rank + j] + aik * b[k * rank + j]).rem_euclid(n);
            }
        }
    }
    out
}

/// The coinduced module Hom(Z[Q], Z/n): functions Q -> Z/n with Q permuting
/// coordinates by left translation, `(g.f)(x) = f(g^-1 x)`. Cohomologically
/// trivial, which is exactly why it is useful.
pub fn coinduced_module(q: &Arc<FiniteGroup>, n: u64) -> Result<GModule> {
    if n == 0 {
        return Err(Error::InvalidModule("modulus must be >= 1".into()));
    }
    let r = q.order();
    let mut action = Vec::with_capacity(r);
    for g in q.elements() {
        let ginv = q.inv(g);
        let mut m = vec![0i64; r * r];
        for x in q.elements() {
            let src = q.mul(ginv, x) as usize;
            m[x as usize * r + src] = 1;
        }
        action.push(m);
    }
    GModule::new(q.clone(), n, r, action)
}

/// The quotient `A = M / diag(Z/n)` of a coinduced module, realized on the
/// transversal of functions vanishing at the identity. On that transversal
/// the set-theoretic section is an additive homomorphism, which later makes
/// the symmetric correction cocycle vanish identically.
#[derive(Clone, Debug)]
pub struct DiagonalQuotient {
    pub coinduced: GModule,
    pub quotient: GModule,
}

/// Build the diagonal quotient of a coinduced module. Fails if `m` is not a
/// coinduced module (rank must equal the group order, action must be the
/// left-translation permutation).
pub fn quotient_by_diagonal(m: &GModule) -> Result<DiagonalQuotient> {
    let q = m.group().clone();
    let r = q.order();
    if m.rank() != r {
        return Err(Error::InvalidModule("not a coinduced module: wrong rank".into()));
    }
    let expect = coinduced_module(&q, m.modulus())?;
    if expect.action != m.action {
        return Err(Error::InvalidModule("not a coinduced module: wrong action".into()));
    }
    // Quotient coordinates: positions x != 1, index x-1.
    // (g.a)_x = a_{g^-1 x} - a_{g^-1}, reading a_1 = 0.
    let rank = r - 1;
    let mut action = Vec::with_capacity(r);
    for g in q.elements() {
        let ginv = q.inv(g);
        let mut mat = vec![0i64; rank * rank];
        for x in q.elements().skip(1) {
            let row = x as usize - 1;
            let src = q.mul(ginv, x);
            if src != 0 {
                mat[row * rank + (src as usize - 1)] += 1;
            }
            if ginv != 0 {
                mat[row * rank + (ginv as usize - 1)] -= 1;
            }
        }
        action.push(mat);
    }
    let quotient = GModule::new(q, m.modulus(), rank, action)?;
    Ok(DiagonalQuotient { coinduced: m.clone(), quotient })
}

impl DiagonalQuotient {
    /// Additive section A -> M onto the transversal `{f : f(1) = 0}`.
    pub fn section(&self, a: &[i64]) -> Vec<i64> {
        debug_assert_eq!(a.len(), self.quotient.rank());
        let mut out = Vec::with_capacity(a.len() + 1);
        out.push(0);
        out.extend_from_slice(a);
        out
    }

    /// Projection M -> A, `proj(f)_x = f(x) - f(1)`.
    pub fn project(&self, m: &[i64]) -> Vec<i64> {
        debug_assert_eq!(m.len(), self.coinduced.rank());
        let n = self.coinduced.modulus() as i64;
        m[1..].iter().map(|&x| (x - m[0]).rem_euclid(n)).collect()
    }

    /// The diagonal inclusion Z/n -> M.
    pub fn include_scalar(&self, z: i64) -> Vec<i64> {
        let n = self.coinduced.modulus() as i64;
        vec![z.rem_euclid(n); self.coinduced.rank()]
    }

    /// If `m` lies on the diagonal, its scalar; `None` otherwise.
    pub fn diagonal_value(&self, m: &[i64]) -> Option<i64> {
        let z = m[0];
        m.iter().all(|&x| x == z).then_some(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::FiniteGroup;

    #[test]
    fn coinduced_z2_swaps() {
        let q = Arc::new(FiniteGroup::cyclic(2));
        let m = coinduced_module(&q, 2).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.apply(1, &[1, 0]), vec![0, 1]);
        assert_eq!(m.apply(0, &[1, 0]), vec![1, 0]);
    }

    #[test]
    fn coinduced_z3_permutes_by_three_cycles() {
        let q = Arc::new(FiniteGroup::cyclic(3));
        let m = coinduced_module(&q, 3).unwrap();
        // Action homomorphism property is validated in the constructor;
        // check the permutation is fixed-point-free off the identity.
        for g in 1..3u16 {
            let mat = m.action_matrix(g);
            for x in 0..3 {
                assert_eq!(mat[x * 3 + x], 0);
            }
        }
    }

    #[test]
    fn diagonal_quotient_of_z2_is_trivial_module() {
        let q = Arc::new(FiniteGroup::cyclic(2));
        let m = coinduced_module(&q, 2).unwrap();
        let dq = quotient_by_diagonal(&m).unwrap();
        assert_eq!(dq.quotient.rank(), 1);
        // swap(x,y) - (x,y) is diagonal mod 2, so the induced action is trivial.
        for g in 0..2u16 {
            assert_eq!(dq.quotient.action_matrix(g), &[1]);
        }
    }

    #[test]
    fn section_projection_roundtrip() {
        let q = Arc::new(FiniteGroup::cyclic(4));
        let m = coinduced_module(&q, 4).unwrap();
        let dq = quotient_by_diagonal(&m).unwrap();
        for idx in 0..dq.quotient.size() {
            let a = dq.quotient.element(idx as usize);
            assert_eq!(dq.project(&dq.section(&a)), a);
        }
        assert_eq!(dq.section(&dq.quotient.zero()), m.zero());
        // the diagonal projects to zero
        for z in 0..4 {
            assert_eq!(dq.project(&dq.include_scalar(z)), dq.quotient.zero());
        }
    }

    #[test]
    fn section_is_additive_and_projection_equivariant() {
        let q = Arc::new(FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)));
        let m = coinduced_module(&q, 4).unwrap();
        let dq = quotient_by_diagonal(&m).unwrap();
        let a_mod = &dq.quotient;
        for i in 0..a_mod.size() {
            let a = a_mod.element(i as usize);
            for j in 0..a_mod.size() {
                let b = a_mod.element(j as usize);
                let lhs = dq.section(&a_mod.add(&a, &b));
                let rhs = m.add(&dq.section(&a), &dq.section(&b));
                assert_eq!(lhs, rhs, "section must be additive");
            }
        }
        for g in q.elements() {
            for i in 0..m.size().min(256) {
                let v = m.element(i as usize);
                let lhs = dq.project(&m.apply(g, &v));
                let rhs = a_mod.apply(g, &dq.project(&v));
                assert_eq!(lhs, rhs, "projection must be equivariant");
            }
        }
    }

    #[test]
    fn induced_action_is_a_module() {
        // Exhaustive check that the quotient action matrices multiply like Q.
        for spec in [3usize, 4, 5] {
            let q = Arc::new(FiniteGroup::cyclic(spec));
            let m = coinduced_module(&q, spec as u64).unwrap();
            // constructor of GModule::new inside quotient_by_diagonal validates
            quotient_by_diagonal(&m).unwrap();
        }
    }
}
