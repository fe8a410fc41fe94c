//! Command-line front end: parse group and cochain descriptions, dispatch
//! to the computation pipelines, and emit deterministic reports.
//!
//! Exit codes: 0 = computation succeeded / all verifications passed,
//! 1 = a verification failed (the report names counterexamples),
//! 2 = input or usage error.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use anomaly_core::cochain::{self, CoefficientSystem, CohomologyRep, ScalarCochainData};
use anomaly_core::coarse;
use anomaly_core::report::{Check, Report};
use anomaly_core::resolve::{self, CertificateFile};
use anomaly_core::torus::{self, TorusParams};
use anomaly_core::twisted::{verify_definition, AnomalousActionModel};

use input::{load_cochain, parse_group, parse_omega};
use output::ReportDoc;

#[derive(Parser)]
#[command(name = "anomaly", version, about = "Exact finite-group cohomology and anomalous-action verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceKind {
    /// One point: the twisted group algebra of the kernel.
    Point,
    /// The group itself with left translation.
    Group,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a cohomology group H^k(G, M).
    Cohomology {
        /// Group: `cyclic:N`, `product:MxN`, inline JSON, or `@file`.
        #[arg(long)]
        group: String,
        /// Coefficients: `qz:N` (phases at level N) or `int`.
        #[arg(long, default_value = "int")]
        coefficients: String,
        #[arg(long)]
        degree: usize,
        /// Only compute the group order (handles sizes the full structure
        /// computation cannot).
        #[arg(long)]
        order_only: bool,
        /// Write a JSON result document here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check a cochain file: normalization, cocycle condition, and
    /// optionally a coboundary witness search.
    CocycleVerify {
        #[arg(long)]
        group: String,
        /// Cochain file (JSON, sparse value map).
        #[arg(long)]
        cochain: PathBuf,
        /// Search for a coboundary witness at this level.
        #[arg(long)]
        witness_level: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the anomaly-resolution pipeline on (Q, omega).
    Resolve {
        #[arg(long)]
        group: String,
        /// Cocycle: `trivial`, `nontrivial`, `a,b,c` (product of two cyclic
        /// groups), `class:I`, or `@file`.
        #[arg(long)]
        omega: String,
        /// Coefficient modulus (defaults to |Q|).
        #[arg(long)]
        modulus: Option<u64>,
        /// Write the certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Re-verify a serialized resolution certificate.
    CertificateVerify {
        cert: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build a twisted crossed-product model from a certificate and verify
    /// the anomalous-action identities.
    ActionVerify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, value_enum, default_value = "group")]
        space: SpaceKind,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Verify the rotation-action trivialization on the 2-torus.
    Torus {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Verify the wedge support claims for a diagonal intertwiner family.
    Coarse {
        #[arg(long)]
        group: String,
        /// Cocycle on the group (same formats as `resolve --omega`).
        #[arg(long, default_value = "nontrivial")]
        omega: String,
        /// Ray length of the wedge (truncation scale).
        #[arg(long, default_value_t = 32)]
        length: usize,
        /// Band-operator propagation bound R (requires R + 1 < length).
        #[arg(long, default_value_t = 8)]
        propagation: u32,
        /// Number of seeded random band operators.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Cohomology { group, coefficients, degree, order_only, json } => {
            let g = parse_group(&group)?;
            let coeffs = parse_coefficients(&coefficients)?;
            if order_only {
                let order = cochain::cohomology_order(&g, &coeffs, degree)
                    .context("order computation failed")?;
                println!("|H^{degree}| = {order}");
                if let Some(path) = json {
                    let doc = serde_json::json!({
                        "command": "cohomology",
                        "group": group,
                        "coefficients": coefficients,
                        "degree": degree,
                        "order": order.to_string(),
                    });
                    output::write_json(&path, &doc)?;
                }
                return Ok(true);
            }
            let h = cochain::cohomology(&g, &coeffs, degree).context("cohomology failed")?;
            if h.invariant_factors.is_empty() {
                println!("H^{degree} = 0");
            } else {
                let desc: Vec<String> = h
                    .invariant_factors
                    .iter()
                    .map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
                    .collect();
                println!("H^{degree} = {}   (order {})", desc.join(" x "), h.order());
            }
            if let Some(path) = json {
                let reps: Vec<serde_json::Value> = h
                    .representatives
                    .iter()
                    .map(|r| match r {
                        CohomologyRep::Scalar(c) => {
                            serde_json::to_value(ScalarCochainData::from_cochain(c)).unwrap()
                        }
                        CohomologyRep::Module(c) => serde_json::to_value(
                            anomaly_core::cochain::ModuleCochainData::from_cochain(c),
                        )
                        .unwrap(),
                        CohomologyRep::Integral(v) => serde_json::json!({
                            "integral": v.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                        }),
                    })
                    .collect();
                let doc = serde_json::json!({
                    "command": "cohomology",
                    "group": group,
                    "coefficients": coefficients,
                    "degree": degree,
                    "invariant_factors": h.invariant_factors,
                    "order": h.order().to_string(),
                    "representatives": reps,
                });
                output::write_json(&path, &doc)?;
            }
            Ok(true)
        }
        Command::CocycleVerify { group, cochain: path, witness_level, json } => {
            let g = parse_group(&group)?;
            let f = load_cochain(&path, &g)?;
            let mut report = Report::new(format!("cochain {} over |G|={}", path.display(), g.order()));
            let defect = f.cocycle_defect();
            report.push(match &defect {
                None => Check::pass("is-a-cocycle", g.order().pow(f.degree() as u32 + 1) as u64),
                Some(t) => Check::from_failures(
                    "is-a-cocycle",
                    g.order().pow(f.degree() as u32 + 1) as u64,
                    vec![format!("differential nonzero at {t:?}")],
                ),
            });
            if let Some(level) = witness_level {
                if defect.is_none() {
                    let witness = f.coboundary_witness(level)?;
                    match witness {
                        Some(w) => {
                            println!("coboundary witness found at level {level}");
                            report.push(Check::pass(
                                &format!("coboundary-witness-at-level-{level}"),
                                1,
                            ));
                            let _ = w;
                        }
                        None => {
                            println!("no coboundary witness at level {level} (conclusive for that level)");
                            report.push(Check::from_failures(
                                &format!("coboundary-witness-at-level-{level}"),
                                1,
                                vec!["no witness at this level".into()],
                            ));
                        }
                    }
                }
            }
            finish(report, "cocycle-verify", json)
        }
        Command::Resolve { group, omega, modulus, out, json } => {
            let q = parse_group(&group)?;
            let n = modulus.unwrap_or(q.order() as u64);
            let omega0 = parse_omega(&omega, &q, n)?;
            let cert = resolve::resolve_anomaly(&q, &omega0, modulus)
                .context("resolution pipeline failed")?;
            println!(
                "resolved: |Q| = {}, |G| = {}, modulus = {}",
                cert.q.order(),
                cert.group.order(),
                cert.modulus
            );
            if let Some(path) = out {
                let file = CertificateFile::from_certificate(&cert);
                output::write_json(&path, &file)?;
                println!("certificate written to {}", path.display());
            }
            let report = resolve::verify_resolution(&cert);
            finish(report, "resolve", json)
        }
        Command::CertificateVerify { cert, json } => {
            let text = std::fs::read_to_string(&cert)
                .with_context(|| format!("cannot read {}", cert.display()))?;
            let file: CertificateFile =
                serde_json::from_str(&text).context("certificate JSON is malformed")?;
            match file.into_certificate() {
                Err(err) => {
                    // structurally invalid: report as a failed verification
                    let mut report = Report::new(format!("certificate {}", cert.display()));
                    report.push(Check::from_failures(
                        "certificate-structure",
                        1,
                        vec![err.to_string()],
                    ));
                    finish(report, "certificate-verify", json)
                }
                Ok(c) => {
                    let report = resolve::verify_resolution(&c);
                    finish(report, "certificate-verify", json)
                }
            }
        }
        Command::ActionVerify { cert, space, json } => {
            let text = std::fs::read_to_string(&cert)
                .with_context(|| format!("cannot read {}", cert.display()))?;
            let file: CertificateFile =
                serde_json::from_str(&text).context("certificate JSON is malformed")?;
            let c = match file.into_certificate() {
                Ok(c) => c,
                Err(err) => {
                    let mut report = Report::new(format!("certificate {}", cert.display()));
                    report.push(Check::from_failures(
                        "certificate-structure",
                        1,
                        vec![err.to_string()],
                    ));
                    return finish(report, "action-verify", json);
                }
            };
            let model = match space {
                SpaceKind::Point => AnomalousActionModel::on_point(c),
                SpaceKind::Group => AnomalousActionModel::with_left_translation(c),
            }?;
            let report = verify_definition(&model);
            finish(report, "action-verify", json)
        }
        Command::Torus { m, n, a, b, c, json } => {
            let params = TorusParams::new(m, n, a, b, c)?;
            let report = torus::verify_torus(&params);
            finish(report, "torus", json)
        }
        Command::Coarse { group, omega, length, propagation, trials, seed, json } => {
            let g = parse_group(&group)?;
            let omega = parse_omega(&omega, &g, g.order() as u64)?;
            let wedge = coarse::build_wedge(&g, length)?;
            let mut report = coarse::verify_wedge_proposition(
                &wedge,
                &omega,
                &coarse::WedgeCheckOptions { propagation, trials, seed },
            )?;
            // displacement radii: every non-identity element must clear the
            // required displacement outside a finite ball
            let radii = coarse::coarse_discontinuity_check(
                &wedge.space,
                &wedge.action,
                2 * propagation,
                wedge.basepoint(),
            );
            let fails: Vec<String> = radii
                .iter()
                .filter(|(_, r)| r.is_none())
                .map(|(g, _)| format!("element {g} has displacement below 2R at the boundary"))
                .collect();
            report.push(Check::from_failures(
                "coarse-discontinuity-witness",
                radii.len() as u64,
                fails,
            ));
            finish(report, "coarse", json)
        }
    }
}

fn parse_coefficients(s: &str) -> anyhow::Result<CoefficientSystem> {
    if s == "int" {
        return Ok(CoefficientSystem::Integral);
    }
    if let Some(level) = s.strip_prefix("qz:") {
        let level: u64 = level.parse().context("bad level in qz:N")?;
        if level == 0 {
            bail!("level must be positive");
        }
        return Ok(CoefficientSystem::QzLevel(level));
    }
    bail!("unknown coefficient system {s:?}; use `int` or `qz:N`")
}

fn finish(report: Report, command: &str, json: Option<PathBuf>) -> anyhow::Result<bool> {
    print!("{}", report.render_text());
    let passed = report.all_passed();
    if let Some(path) = json {
        let doc = ReportDoc { command: command.to_string(), passed, report: &report };
        output::write_json(&path, &doc)?;
    }
    Ok(passed)
}
