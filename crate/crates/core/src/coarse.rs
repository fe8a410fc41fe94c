//! Finite truncations of coarse geometry: wedge spaces, band operators with
//! propagation, the Hausdorff orbit metric, and exact support checks for
//! the diagonal intertwiners living on a wedge.
//!
//! A wedge over a group `G` glues `|G|` rays of length `L` at a basepoint.
//! `G` permutes the rays, fixing only the basepoint, so the displacement
//! `d(x, g x) = 2 depth(x)` grows without bound: the action is coarsely
//! discontinuous. For a normalized 3-cocycle `omega` on `G` the diagonal
//! phase operators
//!
//! ```text
//! m_{g,h}(x) = omega(g, h, h^-1 g^-1 k)^-1   for x on ray k,   1 at the basepoint
//! ```
//!
//! commute with every band operator of propagation at most `R` except on
//! the ball of radius `R+1` around the basepoint, and the pentagon defect
//! `omega(g,h,k) m_{gh,k} m_{g,h} - m_{g,hk} alpha_g(m_{h,k})` is supported
//! at the basepoint alone. At finite truncation scale both statements are
//! exact matrix identities, checked entry by entry.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cochain::ScalarCochain;
use crate::error::{Error, Result};
use crate::exactmath::{Cyclotomic, Qz};
use crate::fingroup::{Elt, FiniteGroup};
use crate::par;
use crate::report::{Check, Report};

/// A finite metric space with integer distances, validated on construction.
#[derive(Clone)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<u32>,
}

impl FiniteMetricSpace {
    pub fn new(dist_rows: Vec<Vec<u32>>) -> Result<FiniteMetricSpace> {
        let n = dist_rows.len();
        if dist_rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMetric("matrix is not square".into()));
        }
        let dist: Vec<u32> = dist_rows.into_iter().flatten().collect();
        let space = FiniteMetricSpace { n, dist };
        for x in 0..n {
            if space.d(x, x) != 0 {
                return Err(Error::InvalidMetric(format!("d({x},{x}) != 0")));
            }
            for y in 0..x {
                if space.d(x, y) != space.d(y, x) {
                    return Err(Error::InvalidMetric(format!("d({x},{y}) not symmetric")));
                }
                if space.d(x, y) == 0 {
                    return Err(Error::InvalidMetric(format!("d({x},{y}) = 0 for x != y")));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let dxy = space.d(x, y);
                for z in 0..n {
                    if dxy > space.d(x, z) + space.d(z, y) {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn d(&self, x: usize, y: usize) -> u32 {
        self.dist[x * self.n + y]
    }

    /// Bounded-geometry witness: the largest number of points in any ball
    /// of radius `r`.
    pub fn max_ball_size(&self, r: u32) -> usize {
        (0..self.n)
            .map(|x| (0..self.n).filter(|&y| self.d(x, y) <= r).count())
            .max()
            .unwrap_or(0)
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }
}

/// A wedge of `|G|` rays of length `L` glued at a basepoint (index 0).
/// Point `1 + g*L + (depth-1)` is the depth-`depth` point on ray `g`.
pub struct WedgeSpace {
    pub group: Arc<FiniteGroup>,
    pub branch_len: usize,
    pub space: FiniteMetricSpace,
    /// Permutation action: `action[g][x]` relabels the rays by left
    /// translation and fixes the basepoint.
    pub action: Vec<Vec<u16>>,
}

impl WedgeSpace {
    pub fn basepoint(&self) -> usize {
        0
    }

    pub fn point(&self, ray: Elt, depth: usize) -> usize {
        debug_assert!(depth >= 1 && depth <= self.branch_len);
        1 + ray as usize * self.branch_len + (depth - 1)
    }

    /// The ray a point sits on; `None` at the basepoint.
    pub fn ray_of(&self, x: usize) -> Option<Elt> {
        (x > 0).then(|| ((x - 1) / self.branch_len) as Elt)
    }

    pub fn depth(&self, x: usize) -> usize {
        if x == 0 {
            0
        } else {
            (x - 1) % self.branch_len + 1
        }
    }
}

/// Build the wedge of `|G|` rays of length `L`: distances are `|i-j|` on a
/// common ray and `i+j` across rays (every path crosses the basepoint).
pub fn build_wedge(group: &Arc<FiniteGroup>, branch_len: usize) -> Result<WedgeSpace> {
    if branch_len < 1 {
        return Err(Error::InvalidInput("branch length must be >= 1".into()));
    }
    let g = group.order();
    let n = g * branch_len + 1;
    let dist = |x: usize, y: usize| -> u32 {
        if x == y {
            return 0;
        }
        let (dx, dy) = (
            if x == 0 { 0 } else { (x - 1) % branch_len + 1 },
            if y == 0 { 0 } else { (y - 1) % branch_len + 1 },
        );
        let (rx, ry) = (
            if x == 0 { usize::MAX } else { (x - 1) / branch_len },
            if y == 0 { usize::MAX } else { (y - 1) / branch_len },
        );
        if x == 0 || y == 0 || rx == ry {
            (dx as i64 - dy as i64).unsigned_abs() as u32
        } else {
            (dx + dy) as u32
        }
    };
    let rows: Vec<Vec<u32>> = (0..n).map(|x| (0..n).map(|y| dist(x, y)).collect()).collect();
    let space = FiniteMetricSpace::new(rows)?;
    let mut action = Vec::with_capacity(g);
    for a in group.elements() {
        let mut perm = vec![0u16; n];
        for x in 1..n {
            let ray = ((x - 1) / branch_len) as Elt;
            let depth = (x - 1) % branch_len;
            let target = group.mul(a, ray) as usize;
            perm[x] = (1 + target * branch_len + depth) as u16;
        }
        action.push(perm);
    }
    Ok(WedgeSpace { group: group.clone(), branch_len, space, action })
}

/// The Hausdorff metric on the orbit space:
/// `d([x],[y]) = max(max_h min_g d(hx, gy), max_h min_g d(hy, gx))`.
/// Returns the quotient space and the orbit index of every point.
pub fn hausdorff_quotient_metric(
    space: &FiniteMetricSpace,
    action: &[Vec<u16>],
) -> Result<(FiniteMetricSpace, Vec<usize>)> {
    let n = space.len();
    for perm in action {
        if perm.len() != n {
            return Err(Error::InvalidAction("permutation has wrong length".into()));
        }
        for x in 0..n {
            for y in 0..n {
                if space.d(perm[x] as usize, perm[y] as usize) != space.d(x, y) {
                    return Err(Error::InvalidAction(format!(
                        "not an isometry at ({x},{y})"
                    )));
                }
            }
        }
    }
    // orbits
    let mut orbit = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for x in 0..n {
        if orbit[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        for perm in action {
            orbit[perm[x] as usize] = id;
        }
        orbit[x] = id;
        reps.push(x);
    }
    let one_sided = |x: usize, y: usize| -> u32 {
        action
            .iter()
            .map(|h| {
                action
                    .iter()
                    .map(|g| space.d(h[x] as usize, g[y] as usize))
                    .min()
                    .unwrap()
            })
            .max()
            .unwrap()
    };
    let k = reps.len();
    let mut rows = vec![vec![0u32; k]; k];
    for (i, &x) in reps.iter().enumerate() {
        for (j, &y) in reps.iter().enumerate() {
            rows[i][j] = one_sided(x, y).max(one_sided(y, x));
        }
    }
    let q = FiniteMetricSpace::new(rows)?;
    // the quotient map does not increase distances
    for x in 0..n {
        for y in 0..n {
            debug_assert!(q.d(orbit[x], orbit[y]) <= space.d(x, y));
        }
    }
    Ok((q, orbit))
}

/// Per-element coarse discontinuity data: for each non-identity `g`, the
/// smallest radius `rho` around the basepoint such that every point outside
/// the ball of radius `rho` is displaced by at least `R`; `None` when some
/// point beyond every radius moves less than `R` (cannot happen on finite
/// truncations of genuinely discontinuous actions, but reported honestly).
pub fn coarse_discontinuity_check(
    space: &FiniteMetricSpace,
    action: &[Vec<u16>],
    displacement: u32,
    basepoint: usize,
) -> Vec<(usize, Option<u32>)> {
    let n = space.len();
    (1..action.len())
        .map(|gi| {
            let perm = &action[gi];
            let rho = (0..n)
                .filter(|&x| space.d(x, perm[x] as usize) < displacement)
                .map(|x| space.d(basepoint, x))
                .max();
            match rho {
                None => (gi, Some(0)),
                Some(r) => {
                    // every offender sits inside radius r; that is the witness
                    // unless offenders reach the boundary of the truncation
                    let max_r = (0..n).map(|x| space.d(basepoint, x)).max().unwrap_or(0);
                    if r >= max_r {
                        (gi, None)
                    } else {
                        (gi, Some(r))
                    }
                }
            }
        })
        .collect()
}

/// Reduced words of length at most `len` in the free group on one generator
/// per element of `labels`, with the word metric `d(v, w) = |v^-1 w|` and
/// the action of the label group permuting generators by left translation.
/// Returns the metric space, the action, and the word lengths.
pub fn free_group_ball(
    labels: &Arc<FiniteGroup>,
    len: usize,
) -> Result<(FiniteMetricSpace, Vec<Vec<u16>>, Vec<usize>)> {
    type Letter = (Elt, bool); // generator label, inverted?
    let gens = labels.order();
    let mut words: Vec<Vec<Letter>> = vec![vec![]];
    let mut frontier: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in 0..gens as Elt {
                for inv in [false, true] {
                    if let Some(&(la, linv)) = w.last() {
                        if la == a && linv != inv {
                            continue; // would cancel
                        }
                    }
                    let mut nw = w.clone();
                    nw.push((a, inv));
                    next.push(nw);
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let index: BTreeMap<Vec<Letter>, usize> =
        words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let n = words.len();
    if n > u16::MAX as usize {
        return Err(Error::SizeCap(format!("free-group ball has {n} words")));
    }
    let reduce_concat = |v: &[Letter], w: &[Letter]| -> Vec<Letter> {
        // v^-1 w reduced
        let mut out: Vec<Letter> = v.iter().rev().map(|&(a, i)| (a, !i)).collect();
        for &l in w {
            if out.last() == Some(&(l.0, !l.1)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    };
    let mut rows = vec![vec![0u32; n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = reduce_concat(&words[i], &words[j]).len() as u32;
        }
    }
    let space = FiniteMetricSpace::new(rows)?;
    let mut action = Vec::with_capacity(gens);
    for b in labels.elements() {
        let perm: Vec<u16> = words
            .iter()
            .map(|w| {
                let moved: Vec<Letter> = w.iter().map(|&(a, i)| (labels.mul(b, a), i)).collect();
                index[&moved] as u16
            })
            .collect();
        action.push(perm);
    }
    let lengths = words.iter().map(Vec::len).collect();
    Ok((space, action, lengths))
}

/// A band operator: a sparse matrix over Q(zeta_N) indexed by points.
#[derive(Clone, Debug, PartialEq)]
pub struct BandOperator {
    pub level: u64,
    entries: BTreeMap<(u16, u16), Cyclotomic>,
}

impl BandOperator {
    pub fn zero(level: u64) -> Self {
        BandOperator { level, entries: BTreeMap::new() }
    }

    pub fn matrix_unit(level: u64, x: u16, y: u16, phase: Qz) -> Result<Self> {
        let mut entries = BTreeMap::new();
        entries.insert((x, y), Cyclotomic::from_phase(phase, level)?);
        Ok(BandOperator { level, entries })
    }

    pub fn insert(&mut self, x: u16, y: u16, coeff: Cyclotomic) {
        if !coeff.is_zero() {
            self.entries.insert((x, y), coeff);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u16, u16), &Cyclotomic)> {
        self.entries.iter()
    }

    pub fn propagation(&self, space: &FiniteMetricSpace) -> u32 {
        self.entries
            .keys()
            .map(|&(x, y)| space.d(x as usize, y as usize))
            .max()
            .unwrap_or(0)
    }

    pub fn mul(&self, rhs: &BandOperator) -> BandOperator {
        assert_eq!(self.level, rhs.level);
        let mut out: BTreeMap<(u16, u16), Cyclotomic> = BTreeMap::new();
        for (&(x, z), a) in &self.entries {
            for (&(z2, y), b) in rhs.entries.range((z, 0)..=(z, u16::MAX)) {
                debug_assert_eq!(z, z2);
                let prod = a * b;
                match out.get_mut(&(x, y)) {
                    Some(acc) => *acc = &*acc + &prod,
                    None => {
                        out.insert((x, y), prod);
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        BandOperator { level: self.level, entries: out }
    }

    /// Seeded random band operator: every ordered pair within the given
    /// propagation carries a root-of-unity phase with probability 1/2.
    pub fn random(
        space: &FiniteMetricSpace,
        max_prop: u32,
        level: u64,
        phase_den: u64,
        rng: &mut ChaCha8Rng,
    ) -> BandOperator {
        let mut op = BandOperator::zero(level);
        for x in 0..space.len() {
            for y in 0..space.len() {
                if space.d(x, y) <= max_prop && rng.random_bool(0.5) {
                    let num = rng.random_range(0..phase_den) as i64;
                    let phase = Qz::new(num, phase_den as i64);
                    let root = Cyclotomic::from_phase(phase, level).expect("den divides level");
                    op.insert(x as u16, y as u16, root);
                }
            }
        }
        op
    }
}

/// The diagonal intertwiner `m_{g,h}` on a wedge, as exact phases per point:
/// `-omega(g, h, h^-1 g^-1 k)` on ray `k`, zero at the basepoint.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalPhase {
    pub values: Vec<Qz>,
}

pub fn m_diagonal(w: &WedgeSpace, omega: &ScalarCochain, g: Elt, h: Elt) -> DiagonalPhase {
    let group = &w.group;
    let n = w.space.len();
    let mut values = vec![Qz::ZERO; n];
    for x in 1..n {
        let k = w.ray_of(x).unwrap();
        let arg = group.mul(group.mul(group.inv(h), group.inv(g)), k);
        values[x] = -omega.value(&[g, h, arg]);
    }
    DiagonalPhase { values }
}

/// Options for the wedge verification run.
pub struct WedgeCheckOptions {
    pub propagation: u32,
    pub trials: usize,
    pub seed: u64,
}

/// Verify, at truncation scale, the two support claims for the diagonal
/// intertwiners on a wedge:
///
/// 1. for every band operator `a` of propagation at most `R` (seeded random
///    ones and every elementary matrix unit), the commutator `[a, m_{g,h}]`
///    is supported inside the ball of radius `R+1` around the basepoint,
///    in both indices;
/// 2. the pentagon defect
///    `omega(g,h,k) m_{gh,k} m_{g,h} - m_{g,hk} alpha_g(m_{h,k})`
///    is supported at the basepoint alone, where `alpha_g` conjugates by
///    the permutation unitary of the action.
///
/// Because the `m` are diagonal, `[a, m][x][y] = a[x][y] (m[y] - m[x])`
/// exactly, and the defect is diagonal with entries that are differences of
/// two explicit phases; all comparisons are exact.
pub fn verify_wedge_proposition(
    w: &WedgeSpace,
    omega: &ScalarCochain,
    opts: &WedgeCheckOptions,
) -> Result<Report> {
    if let Some(t) = omega.cocycle_defect() {
        return Err(Error::NotACocycle(format!("{t:?}")));
    }
    let go = w.group.order();
    let diagonals: Vec<DiagonalPhase> = (0..go * go)
        .map(|gh| m_diagonal(w, omega, (gh / go) as Elt, (gh % go) as Elt))
        .collect();
    verify_wedge_with_diagonals(w, omega, &diagonals, opts)
}

/// The support checks over an explicit family of diagonals (normally the
/// ones from [`m_diagonal`]; fault-injection tests pass corrupted copies).
pub fn verify_wedge_with_diagonals(
    w: &WedgeSpace,
    omega: &ScalarCochain,
    diagonals: &[DiagonalPhase],
    opts: &WedgeCheckOptions,
) -> Result<Report> {
    let r = opts.propagation;
    if (r + 1) as usize >= w.branch_len {
        return Err(Error::InvalidInput(format!(
            "propagation {r} too close to the branch length {}; need R + 1 < L",
            w.branch_len
        )));
    }
    if omega.group().order() != w.group.order() {
        return Err(Error::CoefficientMismatch("omega is over a different group".into()));
    }
    if diagonals.len() != w.group.order() * w.group.order() {
        return Err(Error::DimensionMismatch {
            expected: w.group.order() * w.group.order(),
            got: diagonals.len(),
        });
    }
    let mut report = Report::new(format!(
        "wedge proposition: |G|={}, L={}, R={}, trials={}, seed={}",
        w.group.order(),
        w.branch_len,
        r,
        opts.trials,
        opts.seed
    ));
    let group = w.group.clone();
    let n = w.space.len();
    let level = num_integer::lcm(12, omega.level());

    // the wedge action is by isometries and a strict homomorphism of
    // permutations U_g U_h = U_{gh}
    {
        let mut fails = Vec::new();
        for (gi, perm) in w.action.iter().enumerate() {
            for x in 0..n {
                for y in 0..n {
                    if w.space.d(perm[x] as usize, perm[y] as usize) != w.space.d(x, y) {
                        fails.push(format!("g={gi} is not an isometry at ({x},{y})"));
                    }
                }
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                for x in 0..n {
                    let lhs = w.action[a as usize][w.action[b as usize][x] as usize];
                    if lhs != w.action[ab as usize][x] {
                        fails.push(format!("U_{a} U_{b} != U_{ab} at x={x}"));
                    }
                }
            }
        }
        let checked = (w.action.len() * n * n + group.order() * group.order() * n) as u64;
        report.push(Check::from_failures("isometric-strict-action", checked, fails));
    }

    // fixed points: only the basepoint is fixed by non-identity elements
    {
        let mut fails = Vec::new();
        for a in group.elements().skip(1) {
            for x in 0..n {
                let fixed = w.action[a as usize][x] as usize == x;
                if fixed != (x == w.basepoint()) {
                    fails.push(format!("fixed-point structure wrong at g={a}, x={x}"));
                }
            }
        }
        report.push(Check::from_failures(
            "basepoint-is-the-only-fixed-point",
            ((group.order() - 1) * n) as u64,
            fails,
        ));
    }

    // displacement: d(x, g x) = 2 depth(x) for g != 1
    {
        let mut fails = Vec::new();
        for a in group.elements().skip(1) {
            for x in 0..n {
                let want = 2 * w.depth(x) as u32;
                let got = w.space.d(x, w.action[a as usize][x] as usize);
                if got != want {
                    fails.push(format!("displacement at g={a}, x={x}: {got} != {want}"));
                }
            }
        }
        report.push(Check::from_failures(
            "displacement-is-twice-the-depth",
            ((group.order() - 1) * n) as u64,
            fails,
        ));
    }

    // m-diagonals as phases; the cyclotomic embedding is injective (checked
    // exhaustively in the cyclotomic tests), so a commutator entry
    // a[x][y] * (m[y] - m[x]) vanishes exactly when the phases agree; the
    // cyclotomic arithmetic only runs to exhibit a nonzero counterexample.
    let go = group.order();
    let m_phase = diagonals;
    let in_ball: Vec<bool> =
        (0..n).map(|x| w.space.d(w.basepoint(), x) <= r + 1).collect();
    let entry_if_nonzero = |a: &Cyclotomic, py: Qz, px: Qz| -> Option<Cyclotomic> {
        if py == px {
            return None;
        }
        let diff = &Cyclotomic::from_phase(py, level).expect("level lcm")
            - &Cyclotomic::from_phase(px, level).expect("level lcm");
        let entry = a * &diff;
        (!entry.is_zero()).then_some(entry)
    };

    // commutator support for seeded random band operators
    {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let ops: Vec<BandOperator> = (0..opts.trials)
            .map(|_| BandOperator::random(&w.space, r, level, 12, &mut rng))
            .collect();
        let fails: Vec<String> = par::scan(go * go, |gh| {
            let mp = &m_phase[gh];
            let mut local = Vec::new();
            for (t, op) in ops.iter().enumerate() {
                for (&(x, y), a) in op.entries() {
                    let (xi, yi) = (x as usize, y as usize);
                    if in_ball[xi] && in_ball[yi] {
                        continue;
                    }
                    if entry_if_nonzero(a, mp.values[yi], mp.values[xi]).is_some() {
                        local.push(format!(
                            "commutator [a_{t}, m_({},{})] nonzero at ({x},{y}) outside ball({})",
                            gh / go,
                            gh % go,
                            r + 1
                        ));
                    }
                }
            }
            (!local.is_empty()).then_some(local)
        })
        .into_iter()
        .flatten()
        .collect();
        let checked: u64 = (go * go) as u64
            * ops.iter().map(|o| o.entries.len() as u64).sum::<u64>();
        report.push(Check::from_failures(
            "commutator-support-in-ball (random band operators)",
            checked,
            fails,
        ));
    }

    // commutator support for every elementary matrix unit within range
    {
        let one = Cyclotomic::one(level);
        let mut units: Vec<(u16, u16)> = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if w.space.d(x, y) <= r as u32 {
                    units.push((x as u16, y as u16));
                }
            }
        }
        let fails: Vec<String> = par::scan(go * go, |gh| {
            let mp = &m_phase[gh];
            let mut local = Vec::new();
            for &(x, y) in &units {
                let (xi, yi) = (x as usize, y as usize);
                if in_ball[xi] && in_ball[yi] {
                    continue;
                }
                if entry_if_nonzero(&one, mp.values[yi], mp.values[xi]).is_some() {
                    local.push(format!(
                        "commutator [E_({x},{y}), m_({},{})] nonzero outside ball({})",
                        gh / go,
                        gh % go,
                        r + 1
                    ));
                }
            }
            (!local.is_empty()).then_some(local)
        })
        .into_iter()
        .flatten()
        .collect();
        report.push(Check::from_failures(
            "commutator-support-in-ball (all elementary units)",
            (go * go * units.len()) as u64,
            fails,
        ));
    }

    // pentagon defect supported at the basepoint only; off the basepoint the
    // two diagonal phases agree pointwise by the cocycle identity
    {
        let fails: Vec<String> = par::scan(go * go * go, |idx| {
            let g = (idx / (go * go)) as Elt;
            let h = ((idx / go) % go) as Elt;
            let k = (idx % go) as Elt;
            let gh = group.mul(g, h);
            let hk = group.mul(h, k);
            let m1 = &m_phase[gh as usize * go + k as usize]; // m_{gh,k}
            let m2 = &m_phase[g as usize * go + h as usize]; // m_{g,h}
            let m3 = &m_phase[g as usize * go + hk as usize]; // m_{g,hk}
            let m4 = &m_phase[h as usize * go + k as usize]; // m_{h,k}
            let ginv = group.inv(g);
            let w_phase = omega.value(&[g, h, k]);
            let mut local = Vec::new();
            for x in 1..n {
                let lhs = w_phase + m1.values[x] + m2.values[x];
                // alpha_g(m)[x] = m[g^-1 x]
                let gx = w.action[ginv as usize][x] as usize;
                let rhs = m3.values[x] + m4.values[gx];
                if lhs != rhs {
                    local.push(format!(
                        "pentagon defect off basepoint at (g={g},h={h},k={k}), x={x}"
                    ));
                }
            }
            (!local.is_empty()).then_some(local)
        })
        .into_iter()
        .flatten()
        .collect();
        report.push(Check::from_failures(
            "pentagon-defect-supported-at-basepoint",
            (go * go * go * (n - 1)) as u64,
            fails,
        ));
    }

    Ok(report)
}
