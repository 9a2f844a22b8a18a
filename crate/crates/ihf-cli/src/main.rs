//! Command-line front end: ingest complexes, cochains, fluxes, and bundles;
//! run the decision procedures; emit certified reports.
//!
//! Exit codes: 0 = a verdict was computed (whatever it is), 1 = input or
//! usage error, 2 = internal verification failure (a certificate failed its
//! re-check; this must never happen).

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ihf::bundles::{
    flatness_report, gysin_betti, named_euler, nonorientable_check, product_torus_instance,
    CircleBundle,
};
use ihf::complex::{dual_structure, generate, Generator, SimplicialComplex};
use ihf::dec::{hodge_split, is_harmonic, DiagonalStar};
use ihf::dynamics::{cross_section, flux_from_form, total_asymptotic_cycle, SectionOutcome};
use ihf::error::Error;
use ihf::harmonic::{
    duality_bridge, ih_by_weights, ih_weight_system, IhVerdict, NonvanishingRule,
    TransversalOutcome,
};
use ihf::homology::{Coefficients, Homology};
use ihf::io as wire;
use ihf::num::q_to_string;
use ihf::Cochain;

#[derive(Parser)]
#[command(
    name = "ihf",
    about = "Exact decision procedures on triangulated closed manifolds",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    /// Emit the machine-readable report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Reserved; every procedure is deterministic, so the seed is ignored.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a built-in complex as JSON (sphere2, torus2, rp2, klein, torus3,
    /// lens(p,q), product-torus).
    Gen { name: String },
    /// Inspect complexes.
    Complex {
        #[command(subcommand)]
        action: ComplexAction,
    },
    /// Homology groups of a complex.
    Homology {
        /// Degree.
        #[arg(long)]
        k: usize,
        /// Coefficients: z (integers) or r (reals, realized exactly).
        #[arg(long, default_value = "z")]
        coefficients: String,
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Hodge decomposition of a cochain under unit star weights.
    Hodge {
        #[arg(long)]
        cochain: PathBuf,
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Decide intrinsic harmonicity of a closed cochain.
    IhCheck {
        #[arg(long)]
        cochain: PathBuf,
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Decide cross-section existence for a flux file.
    CrossSection {
        #[arg(long)]
        flux: PathBuf,
    },
    /// Circle-bundle questions.
    Bundle {
        #[command(subcommand)]
        action: BundleAction,
    },
}

#[derive(Subcommand)]
enum ComplexAction {
    /// Counts, Euler characteristic, and validity flags.
    Info {
        #[arg(long, default_value = "-")]
        input: String,
    },
}

#[derive(Args)]
struct BundleSource {
    /// Bundle file {"base": ..., "euler": {...}}.
    #[arg(long, conflicts_with_all = ["base", "euler"])]
    bundle: Option<PathBuf>,
    /// Base complex: a generator name, product-torus, or a complex file.
    #[arg(long, requires = "euler")]
    base: Option<String>,
    /// Euler cocycle: zero, gen, <k>*gen, torsion-gen, or a cochain file.
    #[arg(long, requires = "base")]
    euler: Option<String>,
}

#[derive(Subcommand)]
enum BundleAction {
    /// The flatness decision with the four-condition report.
    Flatness {
        #[command(flatten)]
        source: BundleSource,
    },
    /// Betti numbers of the total space from the Gysin sequence.
    Gysin {
        #[command(flatten)]
        source: BundleSource,
    },
    /// Double-cover criterion over a non-orientable base.
    Nonorientable {
        #[command(flatten)]
        source: BundleSource,
    },
}

/// Accumulated run report. The JSON form is deterministic for fixed inputs;
/// timing appears in the human rendering only.
struct RunReport {
    command: String,
    verdicts: BTreeMap<String, String>,
    certificates: Value,
    verification: Vec<(String, bool)>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            verdicts: BTreeMap::new(),
            certificates: Value::Null,
            verification: Vec::new(),
        }
    }

    fn verdict(&mut self, key: &str, value: impl ToString) {
        self.verdicts.insert(key.to_string(), value.to_string());
    }

    fn check(&mut self, name: &str, ok: bool) {
        self.verification.push((name.to_string(), ok));
    }

    fn all_checks_pass(&self) -> bool {
        self.verification.iter().all(|(_, ok)| *ok)
    }

    fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "verdicts": self.verdicts,
            "certificates": self.certificates,
            "verification": self.verification
                .iter()
                .map(|(name, ok)| json!({ "check": name, "ok": ok }))
                .collect::<Vec<_>>(),
        })
    }

    fn render_human(&self, elapsed_ms: u128) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for (k, v) in &self.verdicts {
            out.push_str(&format!("{k}: {v}\n"));
        }
        if !self.verification.is_empty() {
            out.push_str("verification:\n");
            for (name, ok) in &self.verification {
                out.push_str(&format!("  [{}] {name}\n", if *ok { "ok" } else { "FAIL" }));
            }
        }
        out.push_str(&format!("elapsed: {elapsed_ms} ms\n"));
        out
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(1);
        }
    };
    let started = Instant::now();
    match run(&cli) {
        Ok(Output::Report(report)) => {
            if !report.all_checks_pass() {
                eprintln!("internal verification failure");
                std::process::exit(2);
            }
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report"));
            } else {
                print!("{}", report.render_human(started.elapsed().as_millis()));
            }
            std::process::exit(0);
        }
        Ok(Output::Raw(text)) => {
            println!("{text}");
            std::process::exit(0);
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = if matches!(e, Error::VerificationFailed(_)) { 2 } else { 1 };
            std::process::exit(code);
        }
    }
}

enum Output {
    Report(RunReport),
    /// Plain payload (generated complexes).
    Raw(String),
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Gen { name } => {
            let c = named_complex(name)?;
            Ok(Output::Raw(serde_json::to_string(&wire::complex_to_json(&c)).expect("json")))
        }
        Command::Complex { action: ComplexAction::Info { input } } => complex_info(input),
        Command::Homology { k, coefficients, input } => homology_cmd(*k, coefficients, input),
        Command::Hodge { cochain, input } => hodge_cmd(cochain, input),
        Command::IhCheck { cochain, input } => ih_check_cmd(cochain, input),
        Command::CrossSection { flux } => cross_section_cmd(flux),
        Command::Bundle { action } => bundle_cmd(action),
    }
}

fn named_complex(name: &str) -> Result<SimplicialComplex, Error> {
    if name == "product-torus" {
        let (bundle, _) = product_torus_instance()?;
        return Ok(bundle.base().clone());
    }
    let g: Generator = name.parse()?;
    generate(&g)
}

fn read_input(path_or_dash: &str) -> Result<String, Error> {
    if path_or_dash == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path_or_dash)
            .map_err(|e| Error::Parse(format!("cannot read {path_or_dash}: {e}")))
    }
}

fn load_complex(input: &str) -> Result<SimplicialComplex, Error> {
    let text = read_input(input)?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
    wire::complex_from_json(&v)
}

fn load_cochain(c: &SimplicialComplex, path: &PathBuf) -> Result<Cochain, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
    wire::cochain_from_json(c, &v)
}

fn complex_info(input: &str) -> Result<Output, Error> {
    let c = load_complex(input)?;
    let mut report = RunReport::new("complex info");
    report.verdict("dimension", c.dimension());
    for k in 0..=c.dimension() {
        report.verdict(&format!("simplices[{k}]"), c.simplex_count(k));
    }
    report.verdict("euler_characteristic", c.euler_characteristic());
    report.verdict("closed", c.is_closed());
    report.verdict("pseudomanifold", c.is_pseudomanifold());
    report.verdict("orientable", c.is_orientable());
    report.verdict(
        "manifold",
        match c.links_ok() {
            Some(_) => c.is_manifold().to_string(),
            None => "unchecked (dimension above three)".to_string(),
        },
    );
    report.verdict("connected", c.is_connected());
    report.check("boundary of boundary vanishes", ihf::complex::boundary_squares_to_zero(&c));
    Ok(Output::Report(report))
}

fn homology_cmd(k: usize, coefficients: &str, input: &str) -> Result<Output, Error> {
    let c = load_complex(input)?;
    let coeff = match coefficients {
        "z" | "Z" => Coefficients::Integer,
        "r" | "R" => Coefficients::Real,
        other => return Err(Error::BadParameters(format!("unknown coefficients {other:?}"))),
    };
    let hom = Homology::new(&c);
    let group = hom.group(k, coeff)?;
    let mut report = RunReport::new(&format!("homology --k {k}"));
    report.verdict("group", group.describe());
    report.verdict("betti", group.betti);
    report.verdict(
        "torsion",
        if group.torsion.is_empty() {
            "none".to_string()
        } else {
            group.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
        },
    );
    report.check(
        "free basis consists of cycles",
        group.basis.iter().all(|b| b.is_cycle(&c)),
    );
    Ok(Output::Report(report))
}

fn hodge_cmd(cochain_path: &PathBuf, input: &str) -> Result<Output, Error> {
    let c = load_complex(input)?;
    let omega = load_cochain(&c, cochain_path)?;
    let star = DiagonalStar::unit(&c);
    let hom = Homology::new(&c);
    let split = hodge_split(&c, &star, &omega)?;
    let mut report = RunReport::new("hodge");
    report.verdict("degree", omega.degree());
    report.verdict("closed", omega.is_closed(&c));
    report.verdict("harmonic_under_unit_star", is_harmonic(&c, &star, &omega));
    report.verdict("betti_of_degree", hom.group(omega.degree(), Coefficients::Real)?.betti);
    report.verdict("harmonic_part_zero", split.harmonic_part.is_zero());
    report.check(
        "split re-sums to the input",
        split.exact_part.add(&split.coexact_part).add(&split.harmonic_part) == omega,
    );
    report.check("harmonic part is closed", split.harmonic_part.is_closed(&c));
    report.check(
        "parts are mutually orthogonal",
        num_traits::Zero::is_zero(&star.inner_product(&split.exact_part, &split.coexact_part))
            && num_traits::Zero::is_zero(
                &star.inner_product(&split.exact_part, &split.harmonic_part),
            )
            && num_traits::Zero::is_zero(
                &star.inner_product(&split.coexact_part, &split.harmonic_part),
            ),
    );
    report.certificates = json!({
        "harmonic_part": wire::cochain_to_json(&c, &split.harmonic_part),
    });
    Ok(Output::Report(report))
}

fn ih_check_cmd(cochain_path: &PathBuf, input: &str) -> Result<Output, Error> {
    let c = load_complex(input)?;
    let omega = load_cochain(&c, cochain_path)?;
    let k = omega.degree();
    let n = c.dimension();
    let mut report = RunReport::new("ih-check");
    if n >= 2 && k == n - 1 {
        let ds = dual_structure(&c)?;
        let bridge = duality_bridge(&c, &ds, &omega)?;
        report.verdict("intrinsically_harmonic", bridge.weight_verdict.is_harmonic());
        report.verdict("transversal_certificate", bridge.transversal_verdict.is_found());
        report.check("weight and transversal verdicts agree", bridge.agree);
        match &bridge.weight_verdict {
            IhVerdict::IntrinsicallyHarmonic(star) => {
                report.check("weights make the cochain harmonic", is_harmonic(&c, star, &omega));
                report.certificates = json!({
                    "weights": wire::weights_to_json(&c, k, star.weights(k)),
                });
            }
            IhVerdict::NotIh(cert) => {
                let sys = ih_weight_system(&c, &omega)?;
                report.check(
                    "infeasibility certificate re-verifies",
                    ihf::linalg::verify_farkas(&sys, cert),
                );
                report.certificates = json!({
                    "farkas_eq": cert.eq_multipliers.iter().map(q_to_string).collect::<Vec<_>>(),
                    "farkas_ineq":
                        cert.ineq_multipliers.iter().map(q_to_string).collect::<Vec<_>>(),
                });
            }
        }
        if let TransversalOutcome::Found(cert) = &bridge.transversal_verdict {
            report.check(
                "transversal certificate re-verifies",
                cert.verify(&ds, &omega).is_ok(),
            );
        }
        if let Some(eta) = &bridge.eta_from_weights {
            report.check(
                "weights convert to a transversal certificate",
                eta.verify(&ds, &omega).is_ok(),
            );
        }
    } else {
        let rule = NonvanishingRule::for_degree(k, n)?;
        let verdict = ih_by_weights(&c, &omega, rule)?;
        report.verdict("intrinsically_harmonic", verdict.is_harmonic());
        match &verdict {
            IhVerdict::IntrinsicallyHarmonic(star) => {
                report.check("weights make the cochain harmonic", is_harmonic(&c, star, &omega));
                report.certificates = json!({
                    "weights": wire::weights_to_json(&c, k, star.weights(k)),
                });
            }
            IhVerdict::NotIh(cert) => {
                let sys = ih_weight_system(&c, &omega)?;
                report.check(
                    "infeasibility certificate re-verifies",
                    ihf::linalg::verify_farkas(&sys, cert),
                );
            }
        }
    }
    Ok(Output::Report(report))
}

fn cross_section_cmd(flux_path: &PathBuf) -> Result<Output, Error> {
    let text = std::fs::read_to_string(flux_path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", flux_path.display())))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
    let (c, omega) = wire::flux_from_json(&v, flux_path.parent())?;
    let ds = dual_structure(&c)?;
    let hom = Homology::new(&c);
    let flux = flux_from_form(&c, &ds, &omega)?;
    let mut report = RunReport::new("cross-section");
    let total = total_asymptotic_cycle(&c, &ds, &hom, &flux)?;
    report.verdict(
        "asymptotic_cycle",
        format!("({})", total.iter().map(q_to_string).collect::<Vec<_>>().join(", ")),
    );
    match cross_section(&c, &ds, &hom, &flux)? {
        SectionOutcome::Section(section) => {
            report.verdict("cross_section", "found");
            report.verdict(
                "min_margin",
                section
                    .margins
                    .iter()
                    .map(|(_, m)| m.clone())
                    .min()
                    .map(|m| q_to_string(&m))
                    .unwrap_or_else(|| "none".into()),
            );
            report.check(
                "section is integral, dual-closed, with unit margins",
                section.verify(&ds, &flux).is_ok(),
            );
            report.certificates = json!({
                "theta": section
                    .theta
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| !num_traits::Zero::is_zero(*z))
                    .map(|(e, z)| (c.simplex_name(c.dimension() - 1, e), z.to_string()))
                    .collect::<BTreeMap<_, _>>(),
            });
        }
        SectionOutcome::NoSection(witness) => {
            report.verdict("cross_section", "none");
            report.check(
                "zero-class circulation witness re-verifies",
                witness.verify(&c, &ds, &hom, &flux).is_ok(),
            );
            report.certificates = json!({
                "circulation": witness
                    .values()
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| !num_traits::Zero::is_zero(*q))
                    .map(|(e, q)| (c.simplex_name(c.dimension() - 1, e), q_to_string(q)))
                    .collect::<BTreeMap<_, _>>(),
            });
        }
    }
    Ok(Output::Report(report))
}

fn load_bundle(source: &BundleSource) -> Result<(CircleBundle, bool), Error> {
    if let Some(path) = &source.bundle {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        let v: Value =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
        return Ok((wire::bundle_from_json(&v, path.parent())?, false));
    }
    let (Some(base_name), Some(euler_name)) = (&source.base, &source.euler) else {
        return Err(Error::BadParameters(
            "provide either --bundle FILE or --base and --euler".into(),
        ));
    };
    let base = if std::path::Path::new(base_name).exists() {
        load_complex(base_name)?
    } else {
        named_complex(base_name)?
    };
    let hom = Homology::new(&base);
    let euler = if std::path::Path::new(euler_name).exists() {
        load_cochain(&base, &PathBuf::from(euler_name))?
    } else {
        named_euler(&hom, euler_name)?
    };
    drop(hom);
    let with_total = base_name == "product-torus" && euler_name == "zero";
    Ok((CircleBundle::new(base, euler)?, with_total))
}

fn bundle_cmd(action: &BundleAction) -> Result<Output, Error> {
    match action {
        BundleAction::Flatness { source } => {
            let (bundle, with_total) = load_bundle(source)?;
            let hom = Homology::new(bundle.base());
            let total_data = if with_total { Some(product_torus_instance()?.1) } else { None };
            let fr = flatness_report(&bundle, &hom, total_data.as_ref())?;
            let mut report = RunReport::new("bundle flatness");
            report.verdict("flat", fr.flat);
            for cond in &fr.conditions {
                report.verdict(
                    &format!("condition_{}", cond.number),
                    format!("{} ({})", cond.verdict, cond.provenance),
                );
            }
            if let Some(w) = &fr.witness {
                report.verdict("torsion_order", w.order.to_string());
                report
                    .check("witness m e = d c re-verifies with minimal m", w.verify(&bundle).is_ok());
                report.certificates = json!({
                    "order": w.order.to_string(),
                    "cochain": w
                        .cochain
                        .iter()
                        .enumerate()
                        .filter(|(_, z)| !num_traits::Zero::is_zero(*z))
                        .map(|(e, z)| (bundle.base().simplex_name(1, e), z.to_string()))
                        .collect::<BTreeMap<_, _>>(),
                });
            }
            if let Some(coords) = &fr.refutation {
                report.verdict(
                    "free_coordinates",
                    format!(
                        "({})",
                        coords.iter().map(q_to_string).collect::<Vec<_>>().join(", ")
                    ),
                );
            }
            report.check(
                "all four conditions share one verdict",
                fr.conditions.iter().all(|c| c.verdict == fr.flat),
            );
            Ok(Output::Report(report))
        }
        BundleAction::Gysin { source } => {
            let (bundle, _) = load_bundle(source)?;
            let hom = Homology::new(bundle.base());
            let table = gysin_betti(&bundle, &hom)?;
            let mut report = RunReport::new("bundle gysin");
            report.verdict(
                "total_space_betti",
                format!(
                    "({})",
                    table.total_betti.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
                ),
            );
            report.verdict(
                "cup_ranks",
                format!(
                    "({})",
                    table.cup_ranks.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
                ),
            );
            let chi: i64 = table
                .total_betti
                .iter()
                .enumerate()
                .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
                .sum();
            report.check("alternating sum of total-space Betti numbers vanishes", chi == 0);
            Ok(Output::Report(report))
        }
        BundleAction::Nonorientable { source } => {
            let (bundle, _) = load_bundle(source)?;
            let nr = nonorientable_check(&bundle)?;
            let mut report = RunReport::new("bundle nonorientable");
            report.verdict("foliated", if nr.foliated { "yes" } else { "criterion fails" });
            report.verdict("provenance", &nr.provenance);
            report.verdict(
                "pullback_free_coordinates",
                format!(
                    "({})",
                    nr.pullback_free_coords.iter().map(q_to_string).collect::<Vec<_>>().join(", ")
                ),
            );
            report.check(
                "criterion consistent with the pullback class",
                nr.foliated
                    == nr.pullback_free_coords.iter().all(num_traits::Zero::is_zero),
            );
            Ok(Output::Report(report))
        }
    }
}
