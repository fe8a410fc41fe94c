//! Desk-scale models of twisted crossed products carrying an anomalous
//! action, and the verifier for its defining identities.
//!
//! The algebra is `C(X) x_{pi,c} K` for a finite set `X` with a `G`-action
//! `pi` and `K` the kernel of `rho: G -> Q`: it is spanned by monomials
//! `delta_x u_k` with relations
//!
//! ```text
//! u_k u_l = c(k,l) u_{kl},        u_k delta_x = delta_{k.x} u_k.
//! ```
//!
//! For each `q` in `Q` (through a unital section `q -> qhat`) the model
//! carries an automorphism `alpha_q` and unitaries `m_{q,r}` satisfying the
//! intertwiner law `m_{q,r} alpha_q(alpha_r(.)) = alpha_{qr}(.) m_{q,r}`
//! and the pentagon `omega(q,r,s) m_{qr,s} m_{q,r} = m_{q,rs} alpha_q(m_{r,s})`.
//! Coefficients live in Q(zeta_N) so that sums of roots of unity compare
//! exactly; the bulk verification loops run on phases scaled to level N,
//! which is the same arithmetic without the allocation.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exactmath::{Cyclotomic, Qz};
use crate::fingroup::{choose_section, Elt, Section};
use crate::par;
use crate::report::{Check, Report};
use crate::resolve::ResolutionCertificate;

/// A finite model of the anomalous action: the certificate data plus the
/// chosen section, the kernel, the space `X`, and scaled phase tables.
pub struct AnomalousActionModel {
    pub cert: ResolutionCertificate,
    pub section: Section,
    /// Kernel elements in ascending element order; `u_k` indices refer here.
    pub kernel: Vec<Elt>,
    k_index: Vec<u16>,
    pub x_size: usize,
    /// `pi[g][x]` = action of the group element `g` on the point `x`.
    pi: Vec<Vec<Elt>>,
    /// Cyclotomic level: lcm of all phase denominators in the certificate.
    pub level: u64,
    c_scaled: Vec<i64>,
    omega_scaled: Vec<i64>,
}

/// Sparse element of the twisted crossed product: coefficients of the
/// monomials `delta_x u_k`, keyed by `(x, kernel index)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    terms: BTreeMap<(u16, u16), Cyclotomic>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u16, u16), &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, key: (u16, u16), coeff: Cyclotomic) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, coeff);
            }
            Some(old) => {
                let sum = &old + &coeff;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
        }
    }
}

impl AnomalousActionModel {
    /// Build a model over an explicit `G`-action on `X`. The certificate is
    /// taken as already verified; the action table is validated here.
    pub fn new(cert: ResolutionCertificate, x_size: usize, pi: Vec<Vec<Elt>>) -> Result<Self> {
        let g = cert.group.clone();
        let go = g.order();
        if pi.len() != go || x_size == 0 {
            return Err(Error::InvalidAction("action table has wrong shape".into()));
        }
        for row in &pi {
            if row.len() != x_size || row.iter().any(|&x| x as usize >= x_size) {
                return Err(Error::InvalidAction("action table entry out of range".into()));
            }
        }
        for x in 0..x_size {
            if pi[0][x] as usize != x {
                return Err(Error::InvalidAction("identity must act trivially".into()));
            }
        }
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                for x in 0..x_size {
                    if pi[a as usize][pi[b as usize][x] as usize] != pi[ab as usize][x] {
                        return Err(Error::InvalidAction(format!(
                            "not an action at (g={a}, h={b}, x={x})"
                        )));
                    }
                }
            }
        }
        let section = choose_section(&cert.rho)?;
        let kernel = cert.rho.kernel();
        let mut k_index = vec![u16::MAX; go];
        for (i, &k) in kernel.iter().enumerate() {
            k_index[k as usize] = i as u16;
        }
        let mut level = 1u64;
        for v in cert.c.values() {
            level = num_integer::lcm(level, v.den());
        }
        for v in cert.omega.values() {
            level = num_integer::lcm(level, v.den());
        }
        let scale = |c: &crate::cochain::ScalarCochain| -> Vec<i64> {
            c.values()
                .iter()
                .map(|v| v.numerator_at_level(level).expect("level is the lcm") as i64)
                .collect()
        };
        let c_scaled = scale(&cert.c);
        let omega_scaled = scale(&cert.omega);
        Ok(AnomalousActionModel {
            cert,
            section,
            kernel,
            k_index,
            x_size,
            pi,
            level,
            c_scaled,
            omega_scaled,
        })
    }

    /// `X = G` with left translation.
    pub fn with_left_translation(cert: ResolutionCertificate) -> Result<Self> {
        let g = cert.group.clone();
        let pi = g.elements().map(|a| g.elements().map(|x| g.mul(a, x)).collect()).collect();
        let n = g.order();
        AnomalousActionModel::new(cert, n, pi)
    }

    /// `X` a single point; the algebra is the twisted group algebra of `K`.
    pub fn on_point(cert: ResolutionCertificate) -> Result<Self> {
        let go = cert.group.order();
        AnomalousActionModel::new(cert, 1, vec![vec![0]; go])
    }

    pub fn dim(&self) -> usize {
        self.x_size * self.kernel.len()
    }

    #[inline]
    fn act(&self, g: Elt, x: u16) -> u16 {
        self.pi[g as usize][x as usize]
    }

    #[inline]
    fn c_at(&self, a: Elt, b: Elt) -> i64 {
        self.c_scaled[a as usize * self.cert.group.order() + b as usize]
    }

    #[inline]
    fn omega_at(&self, q: Elt, r: Elt, s: Elt) -> i64 {
        let qo = self.cert.q.order();
        self.omega_scaled[(q as usize * qo + r as usize) * qo + s as usize]
    }

    fn phase(&self, scaled: i64) -> Qz {
        Qz::at_level(scaled, self.level)
    }

    fn root(&self, scaled: i64) -> Cyclotomic {
        Cyclotomic::root_power(self.level, scaled)
    }

    /// Monomial product:
    /// `(delta_x u_k)(delta_y u_l) = [x = k.y] c(k,l) delta_x u_{kl}`.
    /// Returns the scaled phase and the resulting monomial, if nonzero.
    #[inline]
    pub fn mul_basis(&self, x: u16, ki: u16, y: u16, li: u16) -> Option<(i64, u16, u16)> {
        let k = self.kernel[ki as usize];
        let l = self.kernel[li as usize];
        if x != self.act(k, y) {
            return None;
        }
        let kl = self.cert.group.mul(k, l);
        Some((self.c_at(k, l), x, self.k_index[kl as usize]))
    }

    /// Monomial star:
    /// `(delta_x u_k)^* = conj(c(k, k^-1)) delta_{k^-1.x} u_{k^-1}`.
    #[inline]
    pub fn star_basis(&self, x: u16, ki: u16) -> (i64, u16, u16) {
        let g = &self.cert.group;
        let k = self.kernel[ki as usize];
        let kinv = g.inv(k);
        (-self.c_at(k, kinv), self.act(kinv, x), self.k_index[kinv as usize])
    }

    /// Monomial action of `alpha_q`:
    /// `alpha_q(delta_x u_k) = c(qhat k qhat^-1, qhat)^-1 c(qhat, k)
    ///                          delta_{qhat.x} u_{qhat k qhat^-1}`.
    #[inline]
    pub fn alpha_basis(&self, q: Elt, x: u16, ki: u16) -> (i64, u16, u16) {
        let g = &self.cert.group;
        let qh = self.section.lift(q);
        let k = self.kernel[ki as usize];
        let conj = g.mul(g.mul(qh, k), g.inv(qh));
        let phase = self.c_at(qh, k) - self.c_at(conj, qh);
        (phase, self.act(qh, x), self.k_index[conj as usize])
    }

    pub fn basis(&self, x: u16, ki: u16) -> AlgebraElement {
        let mut e = AlgebraElement::zero();
        e.insert((x, ki), Cyclotomic::one(self.level));
        e
    }

    /// The unit: `sum_x delta_x u_1`.
    pub fn one(&self) -> AlgebraElement {
        let mut e = AlgebraElement::zero();
        let k0 = self.k_index[0];
        for x in 0..self.x_size as u16 {
            e.insert((x, k0), Cyclotomic::one(self.level));
        }
        e
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = a.clone();
        for (&key, coeff) in &b.terms {
            out.insert(key, coeff.clone());
        }
        out
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = a.clone();
        for (&key, coeff) in &b.terms {
            out.insert(key, -coeff);
        }
        out
    }

    pub fn scale(&self, phase: Qz, a: &AlgebraElement) -> AlgebraElement {
        let root = Cyclotomic::from_phase(phase, self.level).expect("phase at model level");
        let mut out = AlgebraElement::zero();
        for (&key, coeff) in &a.terms {
            out.insert(key, coeff * &root);
        }
        out
    }

    /// Product by bilinear extension of the monomial rule. For each right
    /// term only the matching left monomials `(k.y, k)` can contribute, so
    /// the loop runs over the left factor's `u`-support.
    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let k_support: BTreeSet<u16> = a.terms.keys().map(|&(_, ki)| ki).collect();
        let mut out = AlgebraElement::zero();
        for (&(y, li), cb) in &b.terms {
            for &ki in &k_support {
                let k = self.kernel[ki as usize];
                let x = self.act(k, y);
                let Some(ca) = a.terms.get(&(x, ki)) else { continue };
                let (phase, x2, kli) =
                    self.mul_basis(x, ki, y, li).expect("x = k.y by construction");
                out.insert((x2, kli), &(ca * cb) * &self.root(phase));
            }
        }
        out
    }

    pub fn star(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (&(x, ki), coeff) in &a.terms {
            let (phase, x2, k2) = self.star_basis(x, ki);
            out.insert((x2, k2), &coeff.conj() * &self.root(phase));
        }
        out
    }

    /// The automorphism `alpha_q`, extended linearly.
    pub fn alpha_apply(&self, q: Elt, a: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (&(x, ki), coeff) in &a.terms {
            let (phase, x2, k2) = self.alpha_basis(q, x, ki);
            out.insert((x2, k2), coeff * &self.root(phase));
        }
        out
    }

    /// The intertwining unitary
    /// `m_{q,r} = c(qhat, rhat)^-1 c(gamma, (qr)hat) u*_gamma`, expanded
    /// over the point basis.
    pub fn m_unitary(&self, q: Elt, r: Elt) -> AlgebraElement {
        let (phase, ginv) = self.m_parts(q, r);
        let mut out = AlgebraElement::zero();
        let root = self.root(phase);
        let ki = self.k_index[ginv as usize];
        for x in 0..self.x_size as u16 {
            out.insert((x, ki), root.clone());
        }
        out
    }

    /// The scaled common phase of `m_{q,r}` and its single `u` index.
    fn m_parts(&self, q: Elt, r: Elt) -> (i64, Elt) {
        let g = &self.cert.group;
        let qt = &self.cert.q;
        let gamma = self.section.gamma(q, r);
        let ginv = g.inv(gamma);
        let qr_hat = self.section.lift(qt.mul(q, r));
        let phase = -self.c_at(self.section.lift(q), self.section.lift(r))
            + self.c_at(gamma, qr_hat)
            - self.c_at(gamma, ginv);
        (phase, ginv)
    }
}

/// Exhaustively verify the defining identities of the anomalous action on
/// the model. All checks are exact; the large scans run on phases scaled
/// to the cyclotomic level, the smaller ones (pentagon, unitarity, inner
/// correction) go through the full algebra arithmetic.
pub fn verify_definition(model: &AnomalousActionModel) -> Report {
    let mut report = Report::new(format!(
        "anomalous action model: |Q|={}, |G|={}, |K|={}, |X|={}, dim={}",
        model.cert.q.order(),
        model.cert.group.order(),
        model.kernel.len(),
        model.x_size,
        model.dim()
    ));
    let g = model.cert.group.clone();
    let q_group = model.cert.q.clone();
    let nk = model.kernel.len();
    let nx = model.x_size;
    let level = model.level as i64;

    // the action is by bijections of X
    {
        let mut fails = Vec::new();
        for a in g.elements() {
            let mut seen = vec![false; nx];
            for x in 0..nx {
                let y = model.pi[a as usize][x] as usize;
                if seen[y] {
                    fails.push(format!("pi({a}) is not injective at x={x}"));
                }
                seen[y] = true;
            }
        }
        report.push(Check::from_failures(
            "pi-acts-by-bijections",
            (g.order() * nx) as u64,
            fails,
        ));
    }

    // c(k, k^-1) = c(k^-1, k) on the kernel (used by the star structure)
    {
        let mut fails = Vec::new();
        for &k in &model.kernel {
            let kinv = g.inv(k);
            if model.c_at(k, kinv) != model.c_at(kinv, k) {
                fails.push(format!("c({k},{kinv}) != c({kinv},{k})"));
            }
        }
        report.push(Check::from_failures("c-symmetric-on-inverse-pairs", nk as u64, fails));
    }

    // associativity of the twisted product on all supported basis triples;
    // triples with a vanishing product are zero on both sides because the
    // action is by verified bijections.
    {
        let total = nk * nk * nk * nx;
        let fails: Vec<String> = par::scan(nk * nk, |kl| {
            let (ki, li) = ((kl / nk) as u16, (kl % nk) as u16);
            let mut local = Vec::new();
            for ji in 0..nk as u16 {
                for z in 0..nx as u16 {
                    let l = model.kernel[li as usize];
                    let k = model.kernel[ki as usize];
                    let y = model.act(l, z);
                    let x = model.act(k, y);
                    let (p1, x1, kli) = model.mul_basis(x, ki, y, li).expect("supported");
                    let (p2, x2, f1) = model.mul_basis(x1, kli, z, ji).expect("supported");
                    let (p3, y3, lji) = model.mul_basis(y, li, z, ji).expect("supported");
                    let (p4, x4, f2) = model.mul_basis(x, ki, y3, lji).expect("supported");
                    let lhs = (p1 + p2).rem_euclid(level);
                    let rhs = (p3 + p4).rem_euclid(level);
                    if lhs != rhs || x2 != x4 || f1 != f2 || x2 != x {
                        local.push(format!(
                            "associativity fails at (k={k},l={l},j={},z={z})",
                            model.kernel[ji as usize]
                        ));
                    }
                }
            }
            (!local.is_empty()).then_some(local)
        })
        .into_iter()
        .flatten()
        .collect();
        report.push(Check::from_failures(
            "product-associative-on-supported-triples",
            total as u64,
            fails,
        ));
    }

    // each alpha_q is a *-automorphism
    {
        let mut fails: Vec<String> = Vec::new();
        let mut checked: u64 = 0;
        for q in q_group.elements() {
            // bijectivity on the monomial basis
            let mut seen = vec![false; nx * nk];
            for x in 0..nx as u16 {
                for ki in 0..nk as u16 {
                    let (_, x2, k2) = model.alpha_basis(q, x, ki);
                    let idx = x2 as usize * nk + k2 as usize;
                    if seen[idx] {
                        fails.push(format!("alpha_{q} not injective on basis at ({x},{ki})"));
                    }
                    seen[idx] = true;
                }
            }
            checked += (nx * nk) as u64;
            // star compatibility on every basis monomial
            for x in 0..nx as u16 {
                for ki in 0..nk as u16 {
                    let (ps, xs, ks) = model.star_basis(x, ki);
                    let (pa, xa, ka) = model.alpha_basis(q, xs, ks);
                    let lhs = ((ps + pa).rem_euclid(level), xa, ka);
                    let (pb, xb, kb) = model.alpha_basis(q, x, ki);
                    let (pc, xc, kc) = model.star_basis(xb, kb);
                    let rhs = ((-pb + pc).rem_euclid(level), xc, kc);
                    if lhs != rhs {
                        fails.push(format!("alpha_{q} star fails at ({x},{ki})"));
                    }
                }
            }
            checked += (nx * nk) as u64;
        }
        // multiplicativity: exhaustive over all basis pairs when the
        // dimension is small, otherwise over every supported pair (pairs
        // with zero product match automatically: alpha permutes the basis
        // and pi acts by bijections, both verified above).
        let dim = model.dim();
        if dim <= 2048 {
            for q in q_group.elements() {
                let pair_fails: Vec<String> = par::scan(dim, |i| {
                    let (x, ki) = ((i / nk) as u16, (i % nk) as u16);
                    let mut local = Vec::new();
                    for y in 0..nx as u16 {
                        for li in 0..nk as u16 {
                            let prod = model.mul_basis(x, ki, y, li);
                            let (pa, xa, ka) = model.alpha_basis(q, x, ki);
                            let (pb, xb, kb) = model.alpha_basis(q, y, li);
                            let rhs = model
                                .mul_basis(xa, ka, xb, kb)
                                .map(|(p, x2, k2)| ((p + pa + pb).rem_euclid(level), x2, k2));
                            let lhs = prod.map(|(p, x2, k2)| {
                                let (pq, x3, k3) = model.alpha_basis(q, x2, k2);
                                ((p + pq).rem_euclid(level), x3, k3)
                            });
                            if lhs != rhs {
                                local.push(format!(
                                    "alpha_{q} not multiplicative at ({x},{ki})*({y},{li})"
                                ));
                            }
                        }
                    }
                    (!local.is_empty()).then_some(local)
                })
                .into_iter()
                .flatten()
                .collect();
                checked += (dim * dim) as u64;
                fails.extend(pair_fails);
            }
        } else {
            for q in q_group.elements() {
                let pair_fails: Vec<String> = par::scan(nk * nk, |kl| {
                    let (ki, li) = ((kl / nk) as u16, (kl % nk) as u16);
                    let k = model.kernel[ki as usize];
                    let mut local = Vec::new();
                    for y in 0..nx as u16 {
                        let x = model.act(k, y);
                        let (p, x2, k2) = model.mul_basis(x, ki, y, li).expect("supported");
                        let (pq, x3, k3) = model.alpha_basis(q, x2, k2);
                        let lhs = ((p + pq).rem_euclid(level), x3, k3);
                        let (pa, xa, ka) = model.alpha_basis(q, x, ki);
                        let (pb, xb, kb) = model.alpha_basis(q, y, li);
                        let rhs = model
                            .mul_basis(xa, ka, xb, kb)
                            .map(|(pp, xx, kk)| ((pp + pa + pb).rem_euclid(level), xx, kk));
                        if rhs != Some(lhs) {
                            local.push(format!(
                                "alpha_{q} not multiplicative at supported pair (k={k},y={y})"
                            ));
                        }
                    }
                    (!local.is_empty()).then_some(local)
                })
                .into_iter()
                .flatten()
                .collect();
                checked += (nk * nk * nx) as u64;
                fails.extend(pair_fails);
            }
        }
        let name = if dim <= 2048 {
            "alpha-star-automorphisms (all basis pairs)"
        } else {
            "alpha-star-automorphisms (supported pairs; zero pairs by bijectivity)"
        };
        report.push(Check::from_failures(name, checked, fails));
    }

    // alpha_1 is the identity and m_{1,r} = m_{q,1} = 1
    {
        let mut fails = Vec::new();
        for x in 0..nx as u16 {
            for ki in 0..nk as u16 {
                let (p, x2, k2) = model.alpha_basis(0, x, ki);
                if p.rem_euclid(level) != 0 || x2 != x || k2 != ki {
                    fails.push(format!("alpha_1 moves ({x},{ki})"));
                }
            }
        }
        let one = model.one();
        for q in q_group.elements() {
            if model.m_unitary(0, q) != one || model.m_unitary(q, 0) != one {
                fails.push(format!("m is not normalized at q={q}"));
            }
        }
        report.push(Check::from_failures(
            "unit-normalization",
            (nx * nk + 2 * q_group.order()) as u64,
            fails,
        ));
    }

    // every m_{q,r} is unitary
    {
        let one = model.one();
        let mut fails = Vec::new();
        for q in q_group.elements() {
            for r in q_group.elements() {
                let m = model.m_unitary(q, r);
                if model.mul(&m, &model.star(&m)) != one || model.mul(&model.star(&m), &m) != one
                {
                    fails.push(format!("m_({q},{r}) is not unitary"));
                }
            }
        }
        report.push(Check::from_failures(
            "m-unitary",
            (q_group.order() * q_group.order()) as u64,
            fails,
        ));
    }

    // intertwiner law on every basis monomial:
    // m_{q,r} alpha_q(alpha_r(e)) = alpha_{qr}(e) m_{q,r}
    {
        let qo = q_group.order();
        let fails: Vec<String> = par::scan(qo * qo, |qr| {
            let (q, r) = ((qr / qo) as Elt, (qr % qo) as Elt);
            let (mp, mg) = model.m_parts(q, r);
            let mki = model.k_index[mg as usize];
            let qr_elt = q_group.mul(q, r);
            let mut local = Vec::new();
            for x in 0..nx as u16 {
                for ki in 0..nk as u16 {
                    let (p1, x1, k1) = model.alpha_basis(r, x, ki);
                    let (p2, x2, k2) = model.alpha_basis(q, x1, k1);
                    let lhs = model
                        .mul_basis(model.act(mg, x2), mki, x2, k2)
                        .map(|(p, xx, kk)| ((p + mp + p1 + p2).rem_euclid(level), xx, kk))
                        .expect("row of m times a monomial is supported");
                    let (p3, x3, k3) = model.alpha_basis(qr_elt, x, ki);
                    let rhs = {
                        let kk = model.kernel[k3 as usize];
                        let y = model.act(g.inv(kk), x3);
                        model
                            .mul_basis(x3, k3, y, mki)
                            .map(|(p, xx, kk2)| ((p + p3 + mp).rem_euclid(level), xx, kk2))
                            .expect("supported")
                    };
                    if lhs != rhs {
                        local.push(format!(
                            "intertwiner fails at q={q}, r={r}, basis ({x},{ki})"
                        ));
                    }
                }
            }
            (!local.is_empty()).then_some(local)
        })
        .into_iter()
        .flatten()
        .collect();
        report.push(Check::from_failures(
            "intertwiner-law",
            (q_group.order() * q_group.order() * nx * nk) as u64,
            fails,
        ));
    }

    // the pentagon, through the full algebra arithmetic:
    // omega(q,r,s) m_{qr,s} m_{q,r} = m_{q,rs} alpha_q(m_{r,s})
    {
        let qo = q_group.order();
        let fails = par::scan(qo * qo * qo, |idx| {
            let q = (idx / (qo * qo)) as Elt;
            let r = ((idx / qo) % qo) as Elt;
            let s = (idx % qo) as Elt;
            let w = model.phase(model.omega_at(q, r, s));
            let lhs = model.scale(
                w,
                &model.mul(&model.m_unitary(q_group.mul(q, r), s), &model.m_unitary(q, r)),
            );
            let rhs = model.mul(
                &model.m_unitary(q, q_group.mul(r, s)),
                &model.alpha_apply(q, &model.m_unitary(r, s)),
            );
            (lhs != rhs).then(|| format!("pentagon fails at ({q},{r},{s})"))
        });
        report.push(Check::from_failures("pentagon", (qo * qo * qo) as u64, fails));
    }

    // inner correction: alpha_q . alpha_r = Ad(m^-1) . alpha_{qr}, with
    // m^-1 = m^* (unitarity is verified above). Both sides of the identity
    // are monomials: m and m^* have a single u-index and a constant
    // coefficient, so conjugation is plain phase bookkeeping.
    {
        let qo = q_group.order();
        let fails: Vec<String> = par::scan(qo * qo, |qr| {
            let (q, r) = ((qr / qo) as Elt, (qr % qo) as Elt);
            let (mp, mg) = model.m_parts(q, r); // m = phase mp, u-index mg
            let mgi = g.inv(mg);
            // m^* = phase (-mp - c(mg^-1, mg)), u-index mg^-1
            let msp = -mp - model.c_at(mgi, mg);
            let qr_elt = q_group.mul(q, r);
            let mut local = Vec::new();
            for x in 0..nx as u16 {
                for ki in 0..nk as u16 {
                    let (p1, x1, k1) = model.alpha_basis(r, x, ki);
                    let (p2, x2, k2) = model.alpha_basis(q, x1, k1);
                    let lhs = ((p1 + p2).rem_euclid(level), x2, k2);
                    // rhs = m^* (alpha_{qr}(e) m)
                    let (p3, x3, k3) = model.alpha_basis(qr_elt, x, ki);
                    let kk = model.kernel[k3 as usize];
                    // (monomial) * (constant u_mg): phase += c(k, mg)
                    let p4 = p3 + mp + model.c_at(kk, mg);
                    let k4 = g.mul(kk, mg);
                    // (constant u_{mg^-1}) * (monomial at x3): phase += c(mg^-1, k4)
                    let p5 = p4 + msp + model.c_at(mgi, k4);
                    let x5 = model.act(mgi, x3);
                    let k5 = g.mul(mgi, k4);
                    let rhs = (p5.rem_euclid(level), x5, model.k_index[k5 as usize]);
                    if lhs != rhs {
                        local.push(format!(
                            "inner correction fails at q={q}, r={r}, basis ({x},{ki})"
                        ));
                    }
                }
            }
            (!local.is_empty()).then_some(local)
        })
        .into_iter()
        .flatten()
        .collect();
        report.push(Check::from_failures(
            "alpha-homomorphism-up-to-inner-m",
            (q_group.order() * q_group.order() * nx * nk) as u64,
            fails,
        ));
    }

    report
}
