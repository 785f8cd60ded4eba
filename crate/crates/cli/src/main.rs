mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopf_core::io::{self, read_json};
use hopf_core::{
    build_double, compare_with_oracle, dualize, element_operator_norm, function_algebra, gns_build, group_algebra,
    hilbert_norms, pairing, verify_actions, verify_cstar, verify_cstar_identity, verify_double, verify_galois,
    verify_hopf_star, verify_isometry, verify_pairing, verify_theta, CTensor, Error, HopfSpec, PairingSpec, Tolerance,
};
use serde_json::{json, Value};

use output::Doc;

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_GROUP: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;
const EXIT_GRAM: u8 = 5;

#[derive(Parser)]
#[command(name = "hopf", version, about = "Build and verify finite Hopf C*-algebras, pairings and quantum doubles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the Hopf spec of a group-derived algebra
    Make {
        group_file: PathBuf,
        #[arg(long, value_enum)]
        kind: MakeKind,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Write a pairing file
    Pairing {
        /// Group table (canonical kinds) or Hopf spec (dual)
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: PairingKind,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Verify a Hopf spec, double export or pairing file
    Verify {
        file: PathBuf,
        #[command(flatten)]
        opts: ReportOpts,
    },
    /// Build the quantum double of a pairing
    Double {
        pairing_file: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        /// Run the full double report
        #[arg(long)]
        verify: bool,
        /// Compare the multiplication with the classical double of this group
        #[arg(long, value_name = "GROUP_FILE")]
        oracle: Option<PathBuf>,
        /// Build even when the pairing fails verification
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        opts: ReportOpts,
    },
    /// GNS representation, C*-identity and norms
    Gns {
        spec_file: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON list of elements, each a coordinate array or {"name", "coords"}
        #[arg(long, value_name = "FILE")]
        norms: Option<PathBuf>,
        #[command(flatten)]
        opts: ReportOpts,
    },
}

#[derive(Args)]
struct ReportOpts {
    /// Absolute tolerance; defaults to 1e-9 (1 + largest structure constant)
    #[arg(long)]
    tolerance: Option<f64>,
    /// Relative tolerance
    #[arg(long)]
    rel: Option<f64>,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MakeKind {
    GroupAlgebra,
    FunctionAlgebra,
    Dual,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairingKind {
    /// ℂ[G] paired with F(G)
    Canonical,
    /// F(G) paired with ℂ[G]
    CanonicalSwapped,
    /// a spec paired with its dual
    Dual,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn classify(e: Error) -> Failure {
    let code = match &e {
        Error::Format(_) | Error::Json(_) | Error::Io(_) | Error::ShapeMismatch(_) | Error::NonFinite(_) => {
            EXIT_PARSE
        }
        Error::InvalidGroup(_) => EXIT_GROUP,
        Error::DegeneratePairing { .. } => EXIT_DEGENERATE,
        Error::GramNotPositive { .. }
        | Error::NotHermitian { .. }
        | Error::NoIntegral { .. }
        | Error::AmbiguousIntegral { .. }
        | Error::NormalizationFailure
        | Error::MissingIntegral => EXIT_GRAM,
        _ => EXIT_FAIL,
    };
    Failure::new(code, e.to_string())
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Make { group_file, kind, out } => cmd_make(&group_file, kind, &out),
        Command::Pairing { input, kind, out } => cmd_pairing(&input, kind, &out),
        Command::Verify { file, opts } => cmd_verify(&file, &opts),
        Command::Double {
            pairing_file,
            out,
            verify,
            oracle,
            force,
            opts,
        } => cmd_double(&pairing_file, &out, verify, oracle.as_deref(), force, &opts),
        Command::Gns {
            spec_file,
            samples,
            seed,
            norms,
            opts,
        } => cmd_gns(&spec_file, samples, seed, norms.as_deref(), &opts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("hopf: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn load_group(path: &Path) -> Result<hopf_core::GroupTable, Error> {
    io::group_from_json(&read_json(path)?)
}

fn cmd_make(group_file: &Path, kind: MakeKind, out: &Path) -> Outcome {
    let g = load_group(group_file).map_err(classify)?;
    let h = match kind {
        MakeKind::GroupAlgebra => group_algebra(&g),
        MakeKind::FunctionAlgebra => function_algebra(&g),
        MakeKind::Dual => dualize(&group_algebra(&g)).map_err(classify)?,
    };
    io::write_json(out, &io::hopf_to_json(&h)).map_err(classify)
}

fn cmd_pairing(input: &Path, kind: PairingKind, out: &Path) -> Outcome {
    let pr = match kind {
        PairingKind::Canonical => pairing::canonical_pairing(&load_group(input).map_err(classify)?),
        PairingKind::CanonicalSwapped => pairing::canonical_pairing(&load_group(input).map_err(classify)?).swapped(),
        PairingKind::Dual => {
            let h = io::hopf_from_json(&read_json(input).map_err(classify)?).map_err(classify)?;
            pairing::dual_pairing(&h.ensure_integral().map_err(classify)?).map_err(classify)?
        }
    };
    io::write_json(out, &io::pairing_to_json(&pr)).map_err(classify)
}

fn tolerance(opts: &ReportOpts, specs: &[&HopfSpec]) -> Result<Tolerance, Failure> {
    let default = HopfSpec::tolerance_for(specs);
    Tolerance::new(opts.tolerance.unwrap_or(default.abs), opts.rel.unwrap_or(default.rel))
        .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))
}

fn emit(doc: &Doc, opts: &ReportOpts) -> Outcome {
    print!("{}", doc.render(opts.json));
    if doc.passed() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_FAIL, ""))
    }
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn is_pairing(v: &Value) -> bool {
    v.get("P").is_some() && v.get("A").is_some() && v.get("B").is_some()
}

/// Attaches a solved integral, or records why none could be found.
fn with_integral(doc: &mut Doc, name: &str, h: HopfSpec) -> Option<HopfSpec> {
    match h.ensure_integral() {
        Ok(h) => Some(h),
        Err(e) => {
            doc.info(&format!("{name}integral_error"), json!(e.to_string()));
            doc.push(&format!("{name}integral_solvable"), f64::INFINITY, false);
            None
        }
    }
}

fn verify_spec_into(doc: &mut Doc, prefix: &str, h: HopfSpec, tol: &Tolerance) -> Option<HopfSpec> {
    doc.merge(&format!("{prefix}hopf"), verify_hopf_star(&h, tol));
    let h = with_integral(doc, prefix, h)?;
    match verify_cstar(&h, tol) {
        Ok(r) => doc.merge(&format!("{prefix}cstar"), r),
        Err(e) => doc.push(&format!("{prefix}cstar: {e}"), f64::INFINITY, false),
    }
    Some(h)
}

fn verify_pairing_into(doc: &mut Doc, pr: &PairingSpec, tol: &Tolerance) {
    doc.merge("pairing", verify_pairing(pr, tol));
    doc.merge("actions", verify_actions(pr, tol));
    match verify_galois(pr, tol) {
        Ok(r) => doc.merge("galois", r),
        Err(e) => doc.push(&format!("galois: {e}"), f64::INFINITY, false),
    }
    let nd = pairing::nondegeneracy(pr, tol);
    doc.info(
        "nondegeneracy",
        json!({"rank": nd.rank, "min_singular": nd.min_singular, "nondegenerate": nd.nondegenerate}),
    );
    let shortfall = if nd.nondegenerate { 0.0 } else { (pr.a().dim().max(pr.b().dim()) - nd.rank) as f64 };
    doc.push("pairing.nondegenerate", shortfall, nd.nondegenerate);
}

fn cmd_verify(file: &Path, opts: &ReportOpts) -> Outcome {
    let v = read_json(file).map_err(classify)?;
    if is_pairing(&v) {
        let pr = io::pairing_from_json(&v, file.parent()).map_err(classify)?;
        let tol = tolerance(opts, &[pr.a(), pr.b()])?;
        let mut doc = Doc::new("verify", &display(file), tol);
        doc.info("kind", json!("pairing"));
        doc.info("dims", json!([pr.a().dim(), pr.b().dim()]));
        let (a, b, _) = pr.clone().into_parts();
        verify_spec_into(&mut doc, "A.", a, &tol);
        verify_spec_into(&mut doc, "B.", b, &tol);
        verify_pairing_into(&mut doc, &pr, &tol);
        return emit(&doc, opts);
    }
    let h = io::hopf_from_json(&v).map_err(classify)?;
    let double = io::double_from_json(&v).map_err(classify)?;
    let tol = tolerance(opts, &[&h])?;
    let mut doc = Doc::new("verify", &display(file), tol);
    doc.info("kind", json!(if double.is_some() { "double" } else { "spec" }));
    doc.info("dim", json!(h.dim()));
    if let Some(label) = h.label() {
        doc.info("label", json!(label));
    }
    match double {
        Some(d) => {
            doc.merge("double", verify_double(&d, &tol));
            doc.merge("theta", verify_theta(&d, &tol));
        }
        None => {
            verify_spec_into(&mut doc, "", h, &tol);
        }
    }
    emit(&doc, opts)
}

fn cmd_double(
    pairing_file: &Path,
    out: &Path,
    verify: bool,
    oracle: Option<&Path>,
    force: bool,
    opts: &ReportOpts,
) -> Outcome {
    let v = read_json(pairing_file).map_err(classify)?;
    let pr = io::pairing_from_json(&v, pairing_file.parent()).map_err(classify)?;
    let tol = tolerance(opts, &[pr.a(), pr.b()])?;
    let mut doc = Doc::new("double", &display(pairing_file), tol);
    verify_pairing_into(&mut doc, &pr, &tol);
    if !doc.passed() && !force {
        let nd = pairing::nondegeneracy(&pr, &tol);
        if !nd.nondegenerate {
            print!("{}", doc.render(opts.json));
            return Err(classify(Error::DegeneratePairing {
                rank: nd.rank,
                n_a: pr.a().dim(),
                n_b: pr.b().dim(),
            }));
        }
        return emit(&doc, opts);
    }
    let pr = pr.ensure_integrals().map_err(|e| Failure::new(EXIT_FAIL, e.to_string()))?;
    let d = build_double(&pr, &tol).map_err(classify)?;
    io::write_json(out, &io::double_to_json(&d)).map_err(classify)?;
    doc.info("output", json!(display(out)));
    doc.info("dim", json!(d.hopf().dim()));
    if verify {
        let dtol = Tolerance::new(tol.abs.max(HopfSpec::tolerance_for(&[d.hopf()]).abs), tol.rel)
            .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
        doc.merge("double", verify_double(&d, &dtol));
        doc.merge("theta", verify_theta(&d, &dtol));
    }
    if let Some(group_file) = oracle {
        let g = load_group(group_file).map_err(classify)?;
        match compare_with_oracle(&d, &g, &tol) {
            Ok(dev) => {
                doc.info("oracle_deviation", json!(dev));
                doc.push("oracle", dev, dev <= tol.abs);
            }
            Err(e) => {
                doc.info("oracle_error", json!(e.to_string()));
                doc.push("oracle", f64::INFINITY, false);
            }
        }
    }
    emit(&doc, opts)
}

fn parse_elements(v: &Value, dim: usize) -> Result<Vec<(String, CTensor)>, Error> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Format("norms file must hold a JSON array".into()))?;
    items
        .iter()
        .enumerate()
        .map(|(k, item)| {
            let (name, coords) = match item {
                Value::Object(obj) => (
                    obj.get("name").and_then(Value::as_str).map(str::to_string).unwrap_or(format!("x{k}")),
                    obj.get("coords")
                        .ok_or_else(|| Error::Format(format!("element {k} has no \"coords\"")))?,
                ),
                other => (format!("x{k}"), other),
            };
            let x = io::tensor_from_json(coords, 1, &name)?;
            if x.shape() != [dim] {
                return Err(Error::Format(format!("element {name} must have {dim} coordinates")));
            }
            Ok((name, x))
        })
        .collect()
}

fn cmd_gns(spec_file: &Path, samples: usize, seed: u64, norms: Option<&Path>, opts: &ReportOpts) -> Outcome {
    let v = read_json(spec_file).map_err(classify)?;
    let h = io::hopf_from_json(&v).map_err(classify)?;
    let double = io::double_from_json(&v).map_err(classify)?;
    let elements = match norms {
        Some(path) => parse_elements(&read_json(path).map_err(classify)?, h.dim()).map_err(classify)?,
        None => Vec::new(),
    };
    let tol = tolerance(opts, &[&h])?;
    let h = h.ensure_integral().map_err(classify)?;
    let g = gns_build(&h, &tol).map_err(classify)?;
    let mut doc = Doc::new("gns", &display(spec_file), tol);
    doc.info("dim", json!(h.dim()));
    doc.info("samples", json!(samples));
    doc.info("seed", json!(seed));
    let eig = g.gram_eigenvalues();
    doc.info(
        "gram_eigenvalues",
        json!({"min": eig.first().copied().unwrap_or(0.0), "max": eig.last().copied().unwrap_or(0.0)}),
    );
    doc.merge("gns", verify_cstar_identity(&g, samples, seed, &tol));
    if !elements.is_empty() {
        let mut table = Vec::new();
        for (name, x) in &elements {
            let hn = hilbert_norms(&g, x).map_err(classify)?;
            let op = element_operator_norm(&g, x).map_err(classify)?;
            table.push(json!({
                "name": name,
                "vector_norm": hn.star_last,
                "star_first_norm": hn.star_first,
                "discrepancy": hn.discrepancy,
                "operator_norm": op,
            }));
        }
        doc.info("norms", Value::Array(table));
    }
    if let Some(d) = double {
        let pr = d.source();
        let ga = pr.a().clone().ensure_integral().and_then(|a| gns_build(&a, &tol));
        let gb = pr.b().clone().ensure_integral().and_then(|b| gns_build(&b, &tol));
        match (ga, gb) {
            (Ok(ga), Ok(gb)) => doc.merge("isometry", verify_isometry(&d, &ga, &gb, &g, &tol)),
            (Err(e), _) | (_, Err(e)) => return Err(classify(e)),
        }
    }
    emit(&doc, opts)
}
