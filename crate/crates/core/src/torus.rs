//! Exact verification of the explicit anomalous rotation actions on the
//! 2-torus.
//!
//! For the group `Z/m x Z/n` the third cohomology with circle coefficients
//! is `Z/m x Z/(m,n) x Z/n`, with explicit unitary representatives
//!
//! ```text
//! omega_{a,b,c}(i,j,k) = e((a/m) i1 floor((j1+k1)/m))
//!                      * e((b/n) i2 floor((j1+k1)/m) + (c/n) i2 floor((j2+k2)/n))
//! ```
//!
//! where `e(t) = exp(2 pi i t)` and the floors are taken of true integer
//! sums of canonical representatives, never reduced first. The rotation
//! action of the group on Laurent polynomials in two unitary variables
//! trivializes every such cocycle through the explicit monomials
//!
//! ```text
//! mu_{i,j}(z,w) = (e(1/m) z)^(a floor((i1+j1)/m))
//!              * (e(1/n) w)^(b floor((i1+j1)/m) + c floor((i2+j2)/n)),
//! ```
//!
//! and everything in sight is a unitary Laurent monomial, so the cocycle
//! equation is a finite set of exact monomial identities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::modsolve::{smith_mod, ModMat, SmithMod};
use crate::exactmath::Qz;
use crate::par;
use crate::report::{Check, Report};

/// A unitary Laurent monomial `phase * z^zexp * w^wexp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LaurentMonomial {
    pub phase: Qz,
    pub zexp: i64,
    pub wexp: i64,
}

impl LaurentMonomial {
    pub const ONE: LaurentMonomial = LaurentMonomial { phase: Qz::ZERO, zexp: 0, wexp: 0 };

    pub fn mul(&self, rhs: &LaurentMonomial) -> LaurentMonomial {
        LaurentMonomial {
            phase: self.phase + rhs.phase,
            zexp: self.zexp + rhs.zexp,
            wexp: self.wexp + rhs.wexp,
        }
    }

    pub fn inv(&self) -> LaurentMonomial {
        LaurentMonomial { phase: -self.phase, zexp: -self.zexp, wexp: -self.wexp }
    }
}

/// Parameters `(m, n, a, b, c)` selecting the cocycle `omega_{a,b,c}` on
/// `Z/m x Z/n`, with `a` mod m, `b` mod gcd(m,n), `c` mod n.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TorusParams {
    pub m: i64,
    pub n: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl TorusParams {
    pub fn new(m: i64, n: i64, a: i64, b: i64, c: i64) -> Result<TorusParams> {
        if m < 1 || n < 1 {
            return Err(Error::InvalidInput("m and n must be positive".into()));
        }
        let g = num_integer::gcd(m, n);
        if a < 0 || a >= m || b < 0 || b >= g || c < 0 || c >= n {
            return Err(Error::InvalidInput(format!(
                "(a,b,c) must lie in [0,{m}) x [0,{g}) x [0,{n})"
            )));
        }
        Ok(TorusParams { m, n, a, b, c })
    }

    /// Group order `m * n`; elements are pairs `(i1, i2)` indexed `i1*n + i2`.
    pub fn order(&self) -> usize {
        (self.m * self.n) as usize
    }

    pub fn level(&self) -> u64 {
        num_integer::lcm(self.m, self.n) as u64
    }

    fn split(&self, idx: usize) -> (i64, i64) {
        ((idx as i64) / self.n, (idx as i64) % self.n)
    }

    fn join(&self, i1: i64, i2: i64) -> usize {
        (i1.rem_euclid(self.m) * self.n + i2.rem_euclid(self.n)) as usize
    }

    fn mul_elt(&self, x: usize, y: usize) -> usize {
        let (a1, a2) = self.split(x);
        let (b1, b2) = self.split(y);
        self.join(a1 + b1, a2 + b2)
    }
}

/// The cocycle `omega_{a,b,c}` at a triple of canonical representatives.
/// The inner sums are true integer sums; nothing is reduced before the
/// floor is taken.
pub fn omega_abc(p: &TorusParams, i: (i64, i64), j: (i64, i64), k: (i64, i64)) -> Qz {
    debug_assert!(i.0 < p.m && i.1 < p.n && j.0 < p.m && j.1 < p.n && k.0 < p.m && k.1 < p.n);
    let f1 = (j.0 + k.0) / p.m;
    let f2 = (j.1 + k.1) / p.n;
    Qz::new(p.a * i.0 * f1, p.m) + Qz::new(p.b * i.1 * f1 + p.c * i.1 * f2, p.n)
}

/// The trivializing monomial `mu_{i,j}`.
pub fn mu(p: &TorusParams, i: (i64, i64), j: (i64, i64)) -> LaurentMonomial {
    let f1 = (i.0 + j.0) / p.m;
    let f2 = (i.1 + j.1) / p.n;
    let zexp = p.a * f1;
    let wexp = p.b * f1 + p.c * f2;
    LaurentMonomial { phase: Qz::new(zexp, p.m) + Qz::new(wexp, p.n), zexp, wexp }
}

/// The rotation action on monomials: `z -> e(i1/m) z`, `w -> e(i2/n) w`.
pub fn rotate(p: &TorusParams, i: (i64, i64), mon: &LaurentMonomial) -> LaurentMonomial {
    LaurentMonomial {
        phase: mon.phase + Qz::new(i.0 * mon.zexp, p.m) + Qz::new(i.1 * mon.wexp, p.n),
        zexp: mon.zexp,
        wexp: mon.wexp,
    }
}

/// The full table of trivializing monomials, indexed by `x * order + y`.
pub fn mu_table(p: &TorusParams) -> Vec<LaurentMonomial> {
    let o = p.order();
    (0..o * o)
        .map(|idx| mu(p, p.split(idx / o), p.split(idx % o)))
        .collect()
}

/// Exhaustive check of the floor identity
/// `floor((i + (j mod m))/m) = floor((i+j)/m) - floor(j/m)`
/// over `0 <= i < m`, `0 <= j < range`.
pub fn verify_floor_lemma(m: i64, range: i64) -> Report {
    let mut report = Report::new(format!("floor lemma: m={m}, j < {range}"));
    let mut fails = Vec::new();
    for i in 0..m {
        for j in 0..range {
            let lhs = (i + j.rem_euclid(m)) / m;
            let rhs = (i + j) / m - j / m;
            if lhs != rhs {
                fails.push(format!("floor identity fails at (i={i}, j={j})"));
            }
        }
    }
    report.push(Check::from_failures("floor-identity", (m * range) as u64, fails));
    report
}

/// Verify that `omega_{a,b,c}` is a normalized 3-cocycle and that the
/// monomials `mu` satisfy the trivialization equation
/// `omega(i,j,k) mu_{ij,k} mu_{i,j} = mu_{i,jk} alpha_i(mu_{j,k})`
/// over all `(m n)^3` triples, as exact monomial identities.
pub fn verify_torus(p: &TorusParams) -> Report {
    let mus = mu_table(p);
    verify_torus_with(p, &mus)
}

/// Same as [`verify_torus`] but over a caller-supplied monomial table;
/// lets fault-injection tests perturb a single entry.
pub fn verify_torus_with(p: &TorusParams, mus: &[LaurentMonomial]) -> Report {
    let mut report = Report::new(format!(
        "torus cocycle: m={}, n={}, (a,b,c)=({},{},{})",
        p.m, p.n, p.a, p.b, p.c
    ));
    let o = p.order();
    let level = p.level() as i64;

    // scaled table of omega over all triples
    let omega_scaled: Vec<i64> = (0..o * o * o)
        .map(|idx| {
            let (i, j, k) = (p.split(idx / (o * o)), p.split((idx / o) % o), p.split(idx % o));
            omega_abc(p, i, j, k).numerator_at_level(level as u64).expect("level divides") as i64
        })
        .collect();

    // normalization
    {
        let mut fails = Vec::new();
        for idx in 0..o * o * o {
            let (ti, tj, tk) = (idx / (o * o), (idx / o) % o, idx % o);
            if (ti == 0 || tj == 0 || tk == 0) && omega_scaled[idx] != 0 {
                fails.push(format!("omega not normalized at ({ti},{tj},{tk})"));
            }
        }
        report.push(Check::from_failures("omega-normalized", (o * o * o) as u64, fails));
    }

    // cocycle identity d(omega) = 0 over all quadruples, on scaled phases
    {
        let fails: Vec<String> = par::scan(o * o, |xy| {
            let (x, y) = (xy / o, xy % o);
            let xy_elt = p.mul_elt(x, y);
            let mut local = Vec::new();
            for z in 0..o {
                let yz = p.mul_elt(y, z);
                for w in 0..o {
                    let zw = p.mul_elt(z, w);
                    // d omega (x,y,z,w) = -omega(y,z,w) + omega(xy,z,w)
                    //   - omega(x,yz,w) + omega(x,y,zw) - omega(x,y,z)
                    let v = -omega_scaled[(y * o + z) * o + w]
                        + omega_scaled[(xy_elt * o + z) * o + w]
                        - omega_scaled[(x * o + yz) * o + w]
                        + omega_scaled[(x * o + y) * o + zw]
                        - omega_scaled[(x * o + y) * o + z];
                    if v.rem_euclid(level) != 0 {
                        local.push(format!("d(omega) != 0 at ({x},{y},{z},{w})"));
                    }
                }
            }
            (!local.is_empty()).then_some(local)
        })
        .into_iter()
        .flatten()
        .collect();
        report.push(Check::from_failures(
            "omega-is-a-cocycle",
            (o as u64).pow(4),
            fails,
        ));
    }

    // the trivialization equation, monomial by monomial
    {
        let fails: Vec<String> = par::scan(o * o, |ij| {
            let (i, j) = (ij / o, ij % o);
            let iv = p.split(i);
            let ij_elt = p.mul_elt(i, j);
            let mut local = Vec::new();
            for k in 0..o {
                let jk = p.mul_elt(j, k);
                let w = Qz::at_level(omega_scaled[(i * o + j) * o + k], level as u64);
                let lhs = LaurentMonomial { phase: w, zexp: 0, wexp: 0 }
                    .mul(&mus[ij_elt * o + k])
                    .mul(&mus[i * o + j]);
                let rhs = mus[i * o + jk].mul(&rotate(p, iv, &mus[j * o + k]));
                if lhs != rhs {
                    local.push(format!(
                        "cocycle equation fails at (i={:?}, j={:?}, k={:?})",
                        p.split(i),
                        p.split(j),
                        p.split(k)
                    ));
                }
            }
            (!local.is_empty()).then_some(local)
        })
        .into_iter()
        .flatten()
        .collect();
        report.push(Check::from_failures(
            "mu-trivializes-omega",
            (o as u64).pow(3),
            fails,
        ));
    }
    report
}

/// The cocycle table of `omega_{a,b,c}` scaled to `level`, over non-identity
/// triples only (the layout used by the coboundary decision systems).
fn omega_scaled_nonid(p: &TorusParams, level: i64) -> Vec<i64> {
    let o = p.order();
    let w = o - 1;
    let mut out = vec![0i64; w * w * w];
    for ti in 0..w {
        for tj in 0..w {
            for tk in 0..w {
                let v = omega_abc(p, p.split(ti + 1), p.split(tj + 1), p.split(tk + 1));
                out[(ti * w + tj) * w + tk] =
                    v.numerator_at_level(level as u64).expect("level divides") as i64;
            }
        }
    }
    out
}

/// Decision machinery for "are two torus cocycles cohomologous over Q/Z":
/// one Smith pass on the degree-2 differential at the conclusive level
/// `lcm(m,n) * m * n`, then each candidate is a vector whose transformed
/// image decides membership in the coboundary lattice.
pub struct TorusClassifier {
    m: i64,
    n: i64,
    level: i64,
    smith: SmithMod,
    /// Transformed scaled tables, one per (a,b,c) in lexicographic order.
    transformed: Vec<Vec<i64>>,
    labels: Vec<(i64, i64, i64)>,
}

impl TorusClassifier {
    /// Prepare the classifier for all `m * (m,n) * n` candidates.
    pub fn new(m: i64, n: i64) -> Result<TorusClassifier> {
        let base = TorusParams::new(m, n, 0, 0, 0)?;
        let o = base.order();
        // Conclusive level for Q/Z-cohomologousness of level-lcm(m,n)
        // cocycles over a group of order m*n: lcm(m,n) * m * n. A witness
        // at any level embeds into one at this level; none here means none
        // anywhere.
        let level = num_integer::lcm(m, n) * m * n;
        let group = std::sync::Arc::new(crate::fingroup::FiniteGroup::product(
            &crate::fingroup::FiniteGroup::cyclic(m as usize),
            &crate::fingroup::FiniteGroup::cyclic(n as usize),
        ));
        let rows = crate::cochain::scalar_d_rows(&group, 2);
        let w = o - 1;
        let mut mat = ModMat::zeros(w * w * w, w * w);
        for (r, row) in rows.iter().enumerate() {
            for &(c, v) in row {
                mat[(r, c as usize)] = v;
            }
        }
        let smith = smith_mod(mat, level, false);
        let g = num_integer::gcd(m, n);
        let mut transformed = Vec::new();
        let mut labels = Vec::new();
        for a in 0..m {
            for b in 0..g {
                for c in 0..n {
                    let p = TorusParams::new(m, n, a, b, c)?;
                    let mut vec = omega_scaled_nonid(&p, level);
                    smith.apply_row_ops(&mut vec);
                    transformed.push(vec);
                    labels.push((a, b, c));
                }
            }
        }
        Ok(TorusClassifier { m, n, level, smith, transformed, labels })
    }

    pub fn candidates(&self) -> usize {
        self.transformed.len()
    }

    pub fn label(&self, i: usize) -> (i64, i64, i64) {
        self.labels[i]
    }

    /// Whether candidates `i` and `j` are cohomologous over Q/Z.
    pub fn cohomologous(&self, i: usize, j: usize) -> bool {
        let diff: Vec<i64> = self.transformed[i]
            .iter()
            .zip(&self.transformed[j])
            .map(|(x, y)| (x - y).rem_euclid(self.level))
            .collect();
        self.solvable(&diff)
    }

    fn solvable(&self, transformed_rhs: &[i64]) -> bool {
        // After the row transform, the system is diagonal: coordinate r is
        // solvable iff gcd(d_r, level) divides the transformed right side.
        for (r, &v) in transformed_rhs.iter().enumerate() {
            let d = if r < self.smith.diag.len() { self.smith.diag[r].abs() } else { 0 };
            let g = if d == 0 { self.level } else { num_integer::gcd(d, self.level) };
            if v.rem_euclid(self.level) % g != 0 {
                return false;
            }
        }
        true
    }

    /// Number of pairwise distinct classes among all candidates.
    pub fn distinct_classes(&self) -> usize {
        let nc = self.candidates();
        let mut representative: Vec<usize> = Vec::new();
        for i in 0..nc {
            if !representative.iter().any(|&j| self.cohomologous(i, j)) {
                representative.push(i);
            }
        }
        representative.len()
    }

    /// Check that the class map is additive: `omega_{a,b,c} + omega_{a',b',c'}`
    /// is cohomologous to `omega_{(a+a') mod m, (b+b') mod (m,n), (c+c') mod n}`.
    pub fn additive(&self, i: usize, j: usize) -> bool {
        let (a1, b1, c1) = self.labels[i];
        let (a2, b2, c2) = self.labels[j];
        let g = num_integer::gcd(self.m, self.n);
        let target = (
            (a1 + a2).rem_euclid(self.m),
            (b1 + b2).rem_euclid(g),
            (c1 + c2).rem_euclid(self.n),
        );
        let t = self.labels.iter().position(|&l| l == target).expect("label exists");
        let sum: Vec<i64> = self.transformed[i]
            .iter()
            .zip(&self.transformed[j])
            .zip(&self.transformed[t])
            .map(|((x, y), z)| (x + y - z).rem_euclid(self.level))
            .collect();
        self.solvable(&sum)
    }
}
