//! Extensions of a group Q by an abelian module A, twisted by a 2-cocycle.

use std::sync::Arc;

use crate::cochain::ModuleCochain;
use crate::error::{Error, Result};
use crate::fingroup::{Elt, FiniteGroup, GModule, GroupHom};

/// Exhaustive associativity verification is run up to this order; larger
/// extensions fall back to the sampled check in the table validator.
const EXHAUSTIVE_EXTENSION_CAP: usize = 4096;

/// The group `G = A x_alpha Q` built from a twisted product, with the
/// projection onto `Q` and the embedding of `A` as its kernel.
#[derive(Debug)]
pub struct TwistedExtension {
    pub group: Arc<FiniteGroup>,
    pub rho: GroupHom,
    /// Element index of `(a, 1)` for each module element index `a`.
    pub embed: Vec<Elt>,
}

/// Build `G = A x_alpha Q` with product
/// `(a, q) (a', q') = (a + q.a' + alpha(q, q'), q q')`.
///
/// `alpha` must be a normalized 2-cocycle; a non-cocycle is rejected with
/// the witness triple where associativity would fail.
pub fn twisted_extension(
    q: &Arc<FiniteGroup>,
    a: &GModule,
    alpha: &ModuleCochain,
) -> Result<TwistedExtension> {
    if alpha.degree() != 2 || alpha.module().rank() != a.rank() {
        return Err(Error::CoefficientMismatch("alpha must be a 2-cochain valued in A".into()));
    }
    if alpha.module().group().order() != q.order() {
        return Err(Error::CoefficientMismatch("alpha is over a different group".into()));
    }
    if let Some(t) = alpha.cocycle_defect() {
        return Err(Error::NotACocycle(format!("({},{},{})", t[0], t[1], t[2])));
    }
    let qn = q.order();
    let an = a.size() as usize;
    let order = an * qn;
    if order > Elt::MAX as usize {
        return Err(Error::SizeCap(format!("extension of order {order} exceeds table range")));
    }

    // element index = a_index * |Q| + q_index; identity = (0, 1) = 0.
    let mut mul = vec![0 as Elt; order * order];
    for ai in 0..an {
        let av = a.element(ai);
        for qi in q.elements() {
            let x = ai * qn + qi as usize;
            for bi in 0..an {
                let bv = a.element(bi);
                for ri in q.elements() {
                    let y = bi * qn + ri as usize;
                    let sum = a.add(&a.add(&av, &a.apply(qi, &bv)), alpha.value(&[qi, ri]));
                    let prod = a.index_of(&sum) * qn + q.mul(qi, ri) as usize;
                    mul[x * order + y] = prod as Elt;
                }
            }
        }
    }
    let table: Vec<Vec<Elt>> = (0..order).map(|i| mul[i * order..(i + 1) * order].to_vec()).collect();
    let group = Arc::new(FiniteGroup::from_mul_table(table)?);
    if order <= EXHAUSTIVE_EXTENSION_CAP {
        group.check_associativity_exhaustive()?;
    }

    let rho_map: Vec<Elt> = (0..order).map(|x| (x % qn) as Elt).collect();
    let rho = GroupHom::new(group.clone(), q.clone(), rho_map)?;
    let embed: Vec<Elt> = (0..an).map(|ai| (ai * qn) as Elt).collect();
    Ok(TwistedExtension { group, rho, embed })
}
