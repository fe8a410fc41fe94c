//! Finite groups as multiplication tables, homomorphisms between them, and
//! set-theoretic sections of surjections.
//!
//! Element 0 is always the identity. Tables are validated on construction:
//! identity law and unique inverses exactly, associativity exhaustively up
//! to order 64 and by deterministic sampling above that.

pub mod extension;
pub mod gmodule;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use extension::{twisted_extension, TwistedExtension};
pub use gmodule::{coinduced_module, quotient_by_diagonal, DiagonalQuotient, GModule};

/// Index of a group element in its table.
pub type Elt = u16;

const EXHAUSTIVE_ASSOC_CAP: usize = 64;
const SAMPLED_ASSOC_TRIALS: usize = 20_000;

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupTableJson", into = "GroupTableJson")]
pub struct FiniteGroup {
    order: usize,
    /// Flat row-major table: `mul[a * order + b] = a * b`.
    mul: Vec<Elt>,
    inv: Vec<Elt>,
}

#[derive(Serialize, Deserialize, Clone)]
struct GroupTableJson {
    mul: Vec<Vec<Elt>>,
}

impl From<FiniteGroup> for GroupTableJson {
    fn from(g: FiniteGroup) -> Self {
        let n = g.order;
        GroupTableJson {
            mul: (0..n).map(|i| g.mul[i * n..(i + 1) * n].to_vec()).collect(),
        }
    }
}

impl TryFrom<GroupTableJson> for FiniteGroup {
    type Error = Error;
    fn try_from(t: GroupTableJson) -> Result<FiniteGroup> {
        FiniteGroup::from_mul_table(t.mul)
    }
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order)
    }
}

impl FiniteGroup {
    /// Validate a multiplication table and wrap it. Element 0 must be the
    /// identity; every element must have a two-sided inverse.
    pub fn from_mul_table(table: Vec<Vec<Elt>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 || n > Elt::MAX as usize {
            return Err(Error::InvalidGroup(format!("order {n} out of range")));
        }
        if table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup("table is not square".into()));
        }
        let mul: Vec<Elt> = table.into_iter().flatten().collect();
        if mul.iter().any(|&x| x as usize >= n) {
            return Err(Error::InvalidGroup("entry out of range".into()));
        }
        for i in 0..n {
            if mul[i] as usize != i || mul[i * n] as usize != i {
                return Err(Error::InvalidGroup("element 0 is not the identity".into()));
            }
        }
        let mut inv = vec![Elt::MAX; n];
        for a in 0..n {
            let mut found = None;
            for b in 0..n {
                if mul[a * n + b] == 0 && mul[b * n + a] == 0 {
                    if found.is_some() {
                        return Err(Error::InvalidGroup(format!("element {a} has two inverses")));
                    }
                    found = Some(b as Elt);
                }
            }
            inv[a] = found
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        let g = FiniteGroup { order: n, mul, inv };
        if n <= EXHAUSTIVE_ASSOC_CAP {
            g.check_associativity_exhaustive()?;
        } else {
            g.check_associativity_sampled(SAMPLED_ASSOC_TRIALS)?;
        }
        Ok(g)
    }

    /// Cyclic group Z/n.
    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1 && n <= Elt::MAX as usize);
        let mut mul = vec![0 as Elt; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = ((a + b) % n) as Elt;
            }
        }
        let inv = (0..n).map(|a| ((n - a) % n) as Elt).collect();
        FiniteGroup { order: n, mul, inv }
    }

    /// Direct product; elements are pairs `(a, b) -> a * |H| + b`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
        let n = g.order * h.order;
        assert!(n <= Elt::MAX as usize);
        let mut mul = vec![0 as Elt; n * n];
        for a1 in 0..g.order {
            for b1 in 0..h.order {
                for a2 in 0..g.order {
                    for b2 in 0..h.order {
                        let x = a1 * h.order + b1;
                        let y = a2 * h.order + b2;
                        let p = g.mul(a1 as Elt, a2 as Elt) as usize * h.order
                            + h.mul(b1 as Elt, b2 as Elt) as usize;
                        mul[x * n + y] = p as Elt;
                    }
                }
            }
        }
        let inv = (0..n)
            .map(|x| {
                let (a, b) = (x / h.order, x % h.order);
                g.inv(a as Elt) as usize * h.order + h.inv(b as Elt) as usize
            })
            .map(|x| x as Elt)
            .collect();
        FiniteGroup { order: n, mul, inv }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elt) -> Elt {
        self.inv[a as usize]
    }

    pub fn identity(&self) -> Elt {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> + '_ {
        (0..self.order).map(|i| i as Elt)
    }

    pub fn element_order(&self, a: Elt) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements().any(|a| self.element_order(a) == self.order)
    }

    pub fn check_associativity_exhaustive(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n as Elt {
            for b in 0..n as Elt {
                let ab = self.mul(a, b);
                for c in 0..n as Elt {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_associativity_sampled(&self, trials: usize) -> Result<()> {
        let n = self.order as u64;
        let mut state = 0x853c49e6748fea9bu64 ^ (n << 16);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % n
        };
        for _ in 0..trials {
            let (a, b, c) = (next() as Elt, next() as Elt, next() as Elt);
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::InvalidGroup(format!(
                    "associativity fails at ({a},{b},{c})"
                )));
            }
        }
        Ok(())
    }
}

/// Declarative group description, the JSON input format.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Product { factors: Vec<GroupSpec> },
    Table { mul: Vec<Vec<Elt>> },
}

/// Build and validate a group from its description.
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Cyclic { n } => {
            if *n == 0 || *n > Elt::MAX as usize {
                return Err(Error::InvalidGroup(format!("cyclic order {n} out of range")));
            }
            Ok(FiniteGroup::cyclic(*n))
        }
        GroupSpec::Product { factors } => {
            let mut gs = factors.iter().map(build_group);
            let first = gs.next().ok_or_else(|| Error::InvalidGroup("empty product".into()))??;
            gs.try_fold(first, |acc, g| Ok(FiniteGroup::product(&acc, &g?)))
        }
        GroupSpec::Table { mul } => FiniteGroup::from_mul_table(mul.clone()),
    }
}

/// A homomorphism between table groups, stored pointwise.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    map: Vec<Elt>,
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<Elt>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(Error::DimensionMismatch { expected: source.order(), got: map.len() });
        }
        if map.iter().any(|&x| x as usize >= target.order()) {
            return Err(Error::InvalidHom("image out of range".into()));
        }
        if map[0] != 0 {
            return Err(Error::InvalidHom("identity must map to identity".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                if map[source.mul(a, b) as usize] != target.mul(map[a as usize], map[b as usize]) {
                    return Err(Error::InvalidHom(format!("not multiplicative at ({a},{b})")));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    #[inline]
    pub fn apply(&self, a: Elt) -> Elt {
        self.map[a as usize]
    }

    pub fn map(&self) -> &[Elt] {
        &self.map
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &x in &self.map {
            hit[x as usize] = true;
        }
        hit.into_iter().all(|b| b)
    }

    /// Elements of the kernel, in index order.
    pub fn kernel(&self) -> Vec<Elt> {
        self.source.elements().filter(|&a| self.map[a as usize] == 0).collect()
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let map = group.elements().collect();
        GroupHom { source: group.clone(), target: group, map }
    }
}

/// A set-theoretic section of a surjection `rho`, unital by construction:
/// the identity lifts to the identity, every other element to its
/// lowest-index preimage.
#[derive(Clone, Debug)]
pub struct Section {
    pub hom: GroupHom,
    lift: Vec<Elt>,
}

/// Choose the canonical section of a surjective homomorphism.
pub fn choose_section(hom: &GroupHom) -> Result<Section> {
    if !hom.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let mut lift = vec![Elt::MAX; hom.target.order()];
    for g in hom.source.elements() {
        let q = hom.apply(g) as usize;
        if lift[q] == Elt::MAX {
            lift[q] = g;
        }
    }
    lift[0] = 0;
    Ok(Section { hom: hom.clone(), lift })
}

impl Section {
    #[inline]
    pub fn lift(&self, q: Elt) -> Elt {
        self.lift[q as usize]
    }

    /// The failure of the section to be multiplicative:
    /// `gamma(q, r) = lift(q) * lift(r) * lift(q r)^-1`, always in the kernel.
    pub fn gamma(&self, q: Elt, r: Elt) -> Elt {
        let g = &self.hom.source;
        let qt = &self.hom.target;
        let qr = qt.mul(q, r);
        g.mul(g.mul(self.lift(q), self.lift(r)), g.inv(self.lift(qr)))
    }
}
