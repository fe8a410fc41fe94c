//! Acceptance suite: every verification the library promises, run end to
//! end at its stated size with exact arithmetic, one summary line per
//! criterion (use `--nocapture` to see them on success).

use std::sync::Arc;
use std::time::{Duration, Instant};

use anomaly_core::coarse::{
    build_wedge, m_diagonal, verify_wedge_proposition, verify_wedge_with_diagonals,
    WedgeCheckOptions,
};
use anomaly_core::cochain::{
    cohomology, cohomology_order, enumerate_classes, h3_circle_order, pullback_scalar,
    pushforward_scale, CoefficientSystem, ScalarCochain,
};
use anomaly_core::exactmath::{smith_normal_form, Cyclotomic, IntMatrix, Qz};
use anomaly_core::fingroup::{choose_section, FiniteGroup, GroupHom};
use anomaly_core::resolve::{resolve_anomaly, verify_resolution, ResolutionCertificate};
use anomaly_core::torus::{mu_table, verify_floor_lemma, verify_torus, verify_torus_with, TorusParams};
use anomaly_core::twisted::{verify_definition, AnomalousActionModel};

fn cyclic(n: usize) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(n))
}

fn klein() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)))
}

fn report_line(criterion: u32, what: &str, pass: bool, elapsed: Duration) {
    println!(
        "criterion {criterion}: {} - {what} [{:.2?}]",
        if pass { "PASS" } else { "FAIL" },
        elapsed
    );
    assert!(pass, "criterion {criterion} failed: {what}");
}

/// The standard nontrivial 3-cocycle on Z/2.
fn omega_c2() -> ScalarCochain {
    ScalarCochain::from_fn(cyclic(2), 3, 2, |t| {
        if t == [1, 1, 1] {
            Qz::new(1, 2)
        } else {
            Qz::ZERO
        }
    })
    .unwrap()
}

#[test]
fn criterion_1_order_two_worked_example() {
    let start = Instant::now();
    let cert = resolve_anomaly(&cyclic(2), &omega_c2(), None).unwrap();
    let report = verify_resolution(&cert);
    let pass = cert.group.order() == 4
        && cert.group.is_cyclic()
        && report.all_passed()
        && cert.c.values().iter().all(|v| v.den() <= 2);
    let elapsed = start.elapsed();
    report_line(
        1,
        "resolving the nontrivial order-two anomaly yields cyclic Z/4 with dc = rho*omega and c|_K = 0",
        pass && elapsed < Duration::from_secs(1),
        elapsed,
    );
}

#[test]
fn criterion_2_full_pipeline_sweep() {
    let start = Instant::now();
    let mut all = true;
    let mut cases = 0usize;
    for q in [cyclic(2), cyclic(3), cyclic(4), klein()] {
        let n = q.order() as u64;
        let classes = enumerate_classes(&q, n, 3).unwrap();
        for omega0 in &classes {
            let cert = resolve_anomaly(&q, omega0, None).unwrap();
            let res = verify_resolution(&cert);
            let model = AnomalousActionModel::with_left_translation(cert).unwrap();
            let def = verify_definition(&model);
            if !res.all_passed() || !def.all_passed() {
                eprintln!(
                    "sweep failure: |Q|={} class:\n{}\n{}",
                    q.order(),
                    res.render_text(),
                    def.render_text()
                );
                all = false;
            }
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    report_line(
        2,
        &format!(
            "resolution + crossed-product model + identity verification over {cases} cohomology classes (Q up to Z/2 x Z/2, |G| up to 256)"
        ),
        all && elapsed < Duration::from_secs(600),
        elapsed,
    );
}

#[test]
fn criterion_3_cohomology_orders() {
    let start = Instant::now();
    let mut all = true;
    // |H^3(Z/n, Q/Z at level n)| = n for n <= 8
    for n in 1..=8usize {
        let got = cohomology_order(&cyclic(n), &CoefficientSystem::QzLevel(n as u64), 3).unwrap();
        if got != n as u128 {
            eprintln!("H^3(Z/{n}) at level {n}: got {got}");
            all = false;
        }
    }
    // |H^3(Z/m x Z/n, Q/Z)| = m (m,n) n for m, n <= 4, through the
    // integral degree-4 identification
    for m in 1..=4i64 {
        for n in 1..=4i64 {
            let g = Arc::new(FiniteGroup::product(
                &FiniteGroup::cyclic(m as usize),
                &FiniteGroup::cyclic(n as usize),
            ));
            let got = h3_circle_order(&g).unwrap();
            let want = (m * num_integer::gcd(m, n) * n) as u128;
            if got != want {
                eprintln!("H^3(Z/{m} x Z/{n}, Q/Z): got {got}, want {want}");
                all = false;
            }
        }
    }
    // cross-check the identification against a direct integral H^4 where
    // the dense kernel is feasible
    for (m, n) in [(1usize, 2usize), (1, 3), (2, 2), (1, 4), (1, 5), (2, 3)] {
        let g = Arc::new(FiniteGroup::product(
            &FiniteGroup::cyclic(m),
            &FiniteGroup::cyclic(n),
        ));
        let h4 = cohomology(&g, &CoefficientSystem::Integral, 4).unwrap();
        let viaq = h3_circle_order(&g).unwrap();
        if h4.order() != viaq {
            eprintln!("H^4(Z/{m} x Z/{n}, Z) = {} but H^3(-,Q/Z) = {viaq}", h4.order());
            all = false;
        }
    }
    // the hand-computed structure for the Klein group
    let h4 = cohomology(&klein(), &CoefficientSystem::Integral, 4).unwrap();
    if h4.invariant_factors != vec![2, 2, 2] {
        eprintln!("H^4(Klein, Z) factors: {:?}", h4.invariant_factors);
        all = false;
    }
    // third route: the explicit representatives are pairwise distinct over
    // Q/Z (decided at the conclusive level) and the class map is additive
    for m in 1..=4i64 {
        for n in 1..=4i64 {
            let cl = anomaly_core::torus::TorusClassifier::new(m, n).unwrap();
            let want = (m * num_integer::gcd(m, n) * n) as usize;
            if cl.distinct_classes() != want {
                eprintln!("({m},{n}): {} distinct classes, want {want}", cl.distinct_classes());
                all = false;
            }
            for i in 0..cl.candidates() {
                for j in 0..cl.candidates() {
                    if !cl.additive(i, j) {
                        eprintln!("({m},{n}): class map not additive at {i},{j}");
                        all = false;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    report_line(
        3,
        "cohomology orders: |H^3(Z/n)| = n (n <= 8), |H^3(Z/m x Z/n, Q/Z)| = m(m,n)n (m,n <= 4), integral degree-4 and explicit-representative cross-checks",
        all && elapsed < Duration::from_secs(600),
        elapsed,
    );
}

#[test]
fn criterion_4_torus_trivializations() {
    let start = Instant::now();
    let mut all = true;
    let mut cases = 0usize;
    for m in 1..=6i64 {
        for n in 1..=6i64 {
            let g = num_integer::gcd(m, n);
            for a in 0..m {
                for b in 0..g {
                    for c in 0..n {
                        let p = TorusParams::new(m, n, a, b, c).unwrap();
                        let rep = verify_torus(&p);
                        if !rep.all_passed() {
                            eprintln!("{}", rep.render_text());
                            all = false;
                        }
                        cases += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    report_line(
        4,
        &format!("torus cocycle equation: exact monomial identities for all m,n <= 6, all {cases} parameter triples"),
        all && elapsed < Duration::from_secs(60),
        elapsed,
    );
}

#[test]
fn criterion_5_floor_lemma() {
    let start = Instant::now();
    let mut all = true;
    for m in 1..=12i64 {
        let rep = verify_floor_lemma(m, 10 * m);
        if !rep.all_passed() {
            eprintln!("{}", rep.render_text());
            all = false;
        }
    }
    let elapsed = start.elapsed();
    report_line(
        5,
        "floor identity exhaustive for m <= 12, j < 10m",
        all && elapsed < Duration::from_secs(1),
        elapsed,
    );
}

#[test]
fn criterion_6_coarse_wedge() {
    let start = Instant::now();
    let mut all = true;
    for order in [2usize, 3, 4] {
        let g = cyclic(order);
        let wedge = build_wedge(&g, 32).unwrap();
        // the generator class: a = 1 in the explicit cyclic formula
        let m = order as i64;
        let omega = ScalarCochain::from_fn(g.clone(), 3, order as u64, |t| {
            Qz::new(t[0] as i64 * ((t[1] as i64 + t[2] as i64) / m), m)
        })
        .unwrap();
        for r in [4u32, 8] {
            let rep = verify_wedge_proposition(
                &wedge,
                &omega,
                &WedgeCheckOptions { propagation: r, trials: 100, seed: 7 },
            )
            .unwrap();
            if !rep.all_passed() {
                eprintln!("{}", rep.render_text());
                all = false;
            }
        }
    }
    let elapsed = start.elapsed();
    report_line(
        6,
        "wedge support claims (G in {Z/2, Z/3, Z/4}, L=32, R in {4,8}, 100 seeded + all elementary band operators)",
        all && elapsed < Duration::from_secs(60),
        elapsed,
    );
}

#[test]
fn criterion_7_property_suites() {
    let start = Instant::now();
    let mut all = true;

    // d after d vanishes: randomized cochains over small cyclic groups
    let state = std::cell::Cell::new(0xfeedface_u64);
    let next = |m: u64| {
        let mut s = state.get();
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        state.set(s);
        s % m
    };
    for order in 2..=6usize {
        for level in [2u64, 4, 6] {
            for k in 0..=3usize {
                let g = cyclic(order);
                let f = ScalarCochain::from_fn(g, k, level, |t| {
                    if t.iter().any(|&x| x == 0) {
                        Qz::ZERO
                    } else {
                        Qz::at_level(next(level) as i64, level)
                    }
                })
                .unwrap();
                if !f.differential().is_cocycle() {
                    eprintln!("d(d f) != 0 for |G|={order}, level {level}, degree {k}");
                    all = false;
                }
            }
        }
    }

    // chain maps commute with the differential
    {
        let z4 = cyclic(4);
        let z2 = cyclic(2);
        let rho = GroupHom::new(z4, z2.clone(), vec![0, 1, 0, 1]).unwrap();
        for k in 1..=2usize {
            let f = ScalarCochain::from_fn(z2.clone(), k, 4, |t| {
                if t.iter().any(|&x| x == 0) {
                    Qz::ZERO
                } else {
                    Qz::at_level(next(4) as i64 + 1, 4)
                }
            })
            .unwrap();
            if pullback_scalar(&rho, &f).unwrap().differential()
                != pullback_scalar(&rho, &f.differential()).unwrap()
            {
                eprintln!("pullback does not commute with d at degree {k}");
                all = false;
            }
            if pushforward_scale(&f, 3).differential() != pushforward_scale(&f.differential(), 3) {
                eprintln!("pushforward does not commute with d at degree {k}");
                all = false;
            }
        }
    }

    // Smith postcondition re-multiplied on random matrices
    for trial in 0..60 {
        let rows = 1 + (trial % 5);
        let cols = 1 + (trial / 5 % 5);
        let mut a = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                a[(i, j)] = next(17) as i128 - 8;
            }
        }
        let snf = smith_normal_form(&a);
        if !snf.verify(&a) {
            eprintln!("SNF postcondition fails on {a:?}");
            all = false;
        }
    }

    // cyclotomic embedding is a homomorphism, exhaustively to level 24
    for level in 1..=24u64 {
        for x in 0..level {
            for y in 0..level {
                let px = Qz::new(x as i64, level as i64);
                let py = Qz::new(y as i64, level as i64);
                let ex = Cyclotomic::from_phase(px, level).unwrap();
                let ey = Cyclotomic::from_phase(py, level).unwrap();
                if &ex * &ey != Cyclotomic::from_phase(px + py, level).unwrap() {
                    eprintln!("embedding not multiplicative at {x}/{level}, {y}/{level}");
                    all = false;
                }
            }
        }
    }

    // the section defect identity from expanding a triple product two ways
    {
        let z8 = cyclic(8);
        let z4 = cyclic(4);
        let rho = GroupHom::new(z8.clone(), z4.clone(), vec![0, 1, 2, 3, 0, 1, 2, 3]).unwrap();
        let s = choose_section(&rho).unwrap();
        for q in z4.elements() {
            for r in z4.elements() {
                for t in z4.elements() {
                    let lhs = z8.mul(
                        z8.mul(z8.mul(s.lift(q), s.gamma(r, t)), z8.inv(s.lift(q))),
                        s.gamma(q, z4.mul(r, t)),
                    );
                    let rhs = z8.mul(s.gamma(q, r), s.gamma(z4.mul(q, r), t));
                    if lhs != rhs {
                        eprintln!("section defect identity fails at ({q},{r},{t})");
                        all = false;
                    }
                }
            }
        }
    }

    let elapsed = start.elapsed();
    report_line(
        7,
        "property suites: d.d = 0, chain-map commutation, Smith postconditions, cyclotomic homomorphy, section defect identity",
        all && elapsed < Duration::from_secs(120),
        elapsed,
    );
}

struct Lcg(u64);

impl Lcg {
    fn next(&mut self, m: u64) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 33) % m
    }
}

#[test]
fn criterion_8_fault_injection() {
    let start = Instant::now();
    let mut rng = Lcg(0x5eed_0008);
    let mut detected = 0usize;
    let mut total = 0usize;
    let mut failures: Vec<String> = Vec::new();

    // resolution certificates: corrupt one non-identity c value
    {
        let certs: Vec<ResolutionCertificate> = vec![
            resolve_anomaly(&cyclic(2), &omega_c2(), None).unwrap(),
            resolve_anomaly(&cyclic(3), &enumerate_classes(&cyclic(3), 3, 3).unwrap()[1], None)
                .unwrap(),
            resolve_anomaly(&cyclic(4), &enumerate_classes(&cyclic(4), 4, 3).unwrap()[2], None)
                .unwrap(),
        ];
        for i in 0..25 {
            let cert = &certs[i % certs.len()];
            let go = cert.group.order();
            let n = cert.modulus;
            let (x, y) = (1 + rng.next(go as u64 - 1), 1 + rng.next(go as u64 - 1));
            let delta = 1 + rng.next(n - 1);
            let mut vals = cert.c.values().to_vec();
            let idx = x as usize * go + y as usize;
            vals[idx] = vals[idx] + Qz::new(delta as i64, n as i64);
            let c = ScalarCochain::from_values(cert.group.clone(), 2, n, vals).unwrap();
            let bad = ResolutionCertificate { c, ..cert.clone() };
            let report = verify_resolution(&bad);
            total += 1;
            let named = report
                .checks
                .iter()
                .any(|c| !c.passed() && c.counterexamples.iter().any(|ce| ce.contains('(')));
            if !report.all_passed() && named {
                detected += 1;
            } else {
                failures.push(format!("resolution corruption {i} at ({x},{y}) undetected"));
            }
        }
    }

    // action models: corrupt c on a slot the automorphisms read
    {
        let certs: Vec<ResolutionCertificate> = vec![
            resolve_anomaly(&cyclic(2), &omega_c2(), None).unwrap(),
            resolve_anomaly(&cyclic(3), &enumerate_classes(&cyclic(3), 3, 3).unwrap()[1], None)
                .unwrap(),
            resolve_anomaly(&cyclic(4), &enumerate_classes(&cyclic(4), 4, 3).unwrap()[1], None)
                .unwrap(),
        ];
        for i in 0..25 {
            let cert = &certs[i % certs.len()];
            let go = cert.group.order();
            let n = cert.modulus;
            let section = choose_section(&cert.rho).unwrap();
            let kernel = cert.rho.kernel();
            // slot (qhat, k) with q != 1, k != 1: feeds alpha's phase
            let q = 1 + rng.next(cert.q.order() as u64 - 1);
            let k = kernel[1 + rng.next(kernel.len() as u64 - 1) as usize % kernel.len()];
            let qh = section.lift(q as u16);
            let delta = 1 + rng.next(n - 1);
            let mut vals = cert.c.values().to_vec();
            let idx = qh as usize * go + k as usize;
            vals[idx] = vals[idx] + Qz::new(delta as i64, n as i64);
            let c = ScalarCochain::from_values(cert.group.clone(), 2, n, vals).unwrap();
            let bad = ResolutionCertificate { c, ..cert.clone() };
            let model = AnomalousActionModel::on_point(bad).unwrap();
            let report = verify_definition(&model);
            total += 1;
            let named = report
                .checks
                .iter()
                .any(|c| !c.passed() && !c.counterexamples.is_empty());
            if !report.all_passed() && named {
                detected += 1;
            } else {
                failures.push(format!(
                    "action corruption {i} at (qhat={qh},k={k}) delta {delta}/{n} undetected"
                ));
            }
        }
    }

    // torus tables: corrupt one non-identity monomial phase
    {
        let params = [
            TorusParams::new(3, 1, 1, 0, 0).unwrap(),
            TorusParams::new(2, 2, 1, 1, 1).unwrap(),
            TorusParams::new(3, 2, 2, 0, 1).unwrap(),
            TorusParams::new(4, 4, 1, 2, 3).unwrap(),
            TorusParams::new(4, 2, 3, 1, 1).unwrap(),
        ];
        for i in 0..25 {
            let p = &params[i % params.len()];
            let o = p.order();
            let mut mus = mu_table(p);
            let (x, y) = (
                1 + rng.next(o as u64 - 1) as usize,
                1 + rng.next(o as u64 - 1) as usize,
            );
            let level = p.level();
            let delta = 1 + rng.next(level - 1);
            mus[x * o + y].phase = mus[x * o + y].phase + Qz::new(delta as i64, level as i64);
            let report = verify_torus_with(p, &mus);
            total += 1;
            let named = report
                .checks
                .iter()
                .any(|c| !c.passed() && c.counterexamples.iter().any(|ce| ce.contains("i=")));
            if !report.all_passed() && named {
                detected += 1;
            } else {
                failures.push(format!(
                    "torus corruption {i} at mu({x},{y}) on {:?} undetected",
                    (p.m, p.n, p.a, p.b, p.c)
                ));
            }
        }
    }

    // wedge diagonals: corrupt one off-basepoint value of one m_{g,h}
    {
        for i in 0..25 {
            let order = [2usize, 3, 4][i % 3];
            let g = cyclic(order);
            let wedge = build_wedge(&g, 16).unwrap();
            let m = order as i64;
            let omega = ScalarCochain::from_fn(g.clone(), 3, order as u64, |t| {
                Qz::new(t[0] as i64 * ((t[1] as i64 + t[2] as i64) / m), m)
            })
            .unwrap();
            let go = g.order();
            let mut diagonals: Vec<_> = (0..go * go)
                .map(|gh| m_diagonal(&wedge, &omega, (gh / go) as u16, (gh % go) as u16))
                .collect();
            let gi = 1 + rng.next(go as u64 - 1) as usize;
            let hi = 1 + rng.next(go as u64 - 1) as usize;
            let x = 1 + rng.next(wedge.space.len() as u64 - 1) as usize;
            let delta = 1 + rng.next(11);
            diagonals[gi * go + hi].values[x] =
                diagonals[gi * go + hi].values[x] + Qz::new(delta as i64, 12);
            let report = verify_wedge_with_diagonals(
                &wedge,
                &omega,
                &diagonals,
                &WedgeCheckOptions { propagation: 4, trials: 5, seed: 11 },
            )
            .unwrap();
            total += 1;
            let named = report
                .checks
                .iter()
                .any(|c| !c.passed() && !c.counterexamples.is_empty());
            if !report.all_passed() && named {
                detected += 1;
            } else {
                failures.push(format!(
                    "wedge corruption {i} at m_({gi},{hi})[{x}] += {delta}/12 undetected"
                ));
            }
        }
    }

    for f in &failures {
        eprintln!("{f}");
    }
    let elapsed = start.elapsed();
    report_line(
        8,
        &format!("fault injection: {detected}/{total} seeded single-value corruptions detected with named tuples"),
        detected == total && total == 100,
        elapsed,
    );
}
