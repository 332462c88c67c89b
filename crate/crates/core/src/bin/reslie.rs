use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use reslie::catalog::{self, classify};
use reslie::complex::Regime;
use reslie::deform::{self, check_deformation, equivalence_solve, extend_order, infinitesimal, obstruction, TruncatedDeformation};
use reslie::doc::{AlgebraDocument, JetDocument};
use reslie::field::{FpMatrix, FpVector};
use reslie::lie::{ce_cohomology, CeCochain, CohomologyResult, LModule};
use reslie::morphdef::{Flavor, MorphComplex};
use reslie::rescoh_2::{restricted_cohomology_2, RC2n};
use reslie::rescoh_p::{restricted_cohomology_p, Setting, RC2};
use reslie::restricted::{pmap_compat_failure, RestrictedAlgebra};
use reslie::tuples;

const DEFAULT_MAX_P: u32 = 7;

#[derive(Parser)]
#[command(name = "reslie", version, about = "Restricted Lie algebra cohomology and deformations over F_p")]
struct Cli {
    /// Machine-readable output with sorted keys.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coefficients {
    Adjoint,
    Trivial,
    Module,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Restricted,
    Ce,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Jacobi identity, the p-map axioms and any attached module or morphism.
    Verify { file: PathBuf },
    /// Dimension and representatives of a cohomology group.
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value = "adjoint")]
        coefficients: Coefficients,
        /// Ordinary Chevalley-Eilenberg cohomology instead of the restricted one.
        #[arg(long)]
        ordinary: bool,
    },
    /// Deformation checks on jet files.
    Deform {
        file: PathBuf,
        /// Check that a jet is a deformation.
        #[arg(long, value_name = "JET", group = "action")]
        check: Option<PathBuf>,
        /// Try to extend a deformation by one order.
        #[arg(long, value_name = "JET", group = "action")]
        extend: Option<PathBuf>,
        /// Search for an equivalence between two deformations.
        #[arg(long, value_names = ["JET", "JET"], num_args = 2, group = "action")]
        equiv: Option<Vec<PathBuf>>,
    },
    /// Isomorphism classes of p-structures on the Heisenberg algebra.
    Classify {
        #[arg(long, value_name = "P")]
        heisenberg: u32,
    },
    /// Morphism complex of the morphism attached to an algebra file.
    Morph {
        file: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, value_enum, default_value = "restricted")]
        flavor: FlavorArg,
        /// Solve for the degree-2 mixed slot given order-1 jets on source and target.
        #[arg(long, value_names = ["SRC_JET", "TGT_JET"], num_args = 2)]
        kernel: Option<Vec<PathBuf>>,
    },
    /// Fixture files.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    /// Write the catalog algebras and example jets to a directory.
    Export {
        dir: PathBuf,
        #[arg(long, default_value_t = 5)]
        p: u32,
    },
}

/// Result of a command: whether it passed and what to print.
struct Report {
    pass: bool,
    text: Vec<String>,
    json: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = emit(&report, cli.json);
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(report: &Report, json: bool) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("json value"))?;
    } else {
        for line in &report.text {
            writeln!(out, "{line}")?;
        }
    }
    out.flush()
}

fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Verify { file } => cmd_verify(file),
        Command::Cohomology {
            file,
            degree,
            coefficients,
            ordinary,
        } => cmd_cohomology(file, *degree, *coefficients, *ordinary),
        Command::Deform { file, check, extend, equiv } => {
            let alg = load(file)?;
            match (check, extend, equiv) {
                (Some(j), None, None) => cmd_deform_check(&alg, j),
                (None, Some(j), None) => cmd_deform_extend(&alg, j),
                (None, None, Some(js)) => cmd_deform_equiv(&alg, &js[0], &js[1]),
                _ => bail!("choose exactly one of --check, --extend, --equiv"),
            }
        }
        Command::Classify { heisenberg } => cmd_classify(*heisenberg),
        Command::Morph {
            file,
            degree,
            flavor,
            kernel,
        } => cmd_morph(file, *degree, *flavor, kernel.as_deref()),
        Command::Fixtures {
            action: FixtureAction::Export { dir, p },
        } => cmd_export(dir, *p),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_doc(path: &Path) -> Result<(AlgebraDocument, String)> {
    let text = read(path)?;
    let doc = AlgebraDocument::parse(&text).map_err(|d| anyhow!("{}:{d}", path.display()))?;
    Ok((doc, text))
}

fn load(path: &Path) -> Result<RestrictedAlgebra> {
    let (doc, text) = parse_doc(path)?;
    doc.algebra(Some(&text)).map_err(|d| anyhow!("{}:{d}", path.display()))
}

fn load_jet(path: &Path, base: &RestrictedAlgebra) -> Result<TruncatedDeformation> {
    let text = read(path)?;
    let jet = JetDocument::parse(&text).map_err(|d| anyhow!("{}:{d}", path.display()))?;
    jet.deformation(base, Some(&text)).map_err(|d| anyhow!("{}:{d}", path.display()))
}

fn cmd_verify(path: &Path) -> Result<Report> {
    let (doc, text) = parse_doc(path)?;
    let raw = doc.raw(Some(&text)).map_err(|d| anyhow!("{}:{d}", path.display()))?;
    let mut text_out = vec![format!("algebra of dimension {} over F_{}", raw.lie.dim(), doc.characteristic)];
    if let Some(fail) = raw.first_failure() {
        text_out.push(format!("FAIL: {fail}"));
        return Ok(Report {
            pass: false,
            text: text_out,
            json: json!({"pass": false, "failure": fail.to_string()}),
        });
    }
    text_out.push("Jacobi identity: ok".into());
    text_out.push("p-map axioms: ok".into());
    let alg = RestrictedAlgebra::new_unchecked(raw.lie, raw.pmap);
    let mut extra = serde_json::Map::new();
    let mut pass = true;
    if doc.module.is_some() {
        match doc.module(&alg, Some(&text)) {
            Ok(_) => text_out.push("restricted module: ok".into()),
            Err(d) => {
                pass = false;
                text_out.push(format!("FAIL: module: {d}"));
                extra.insert("module_failure".into(), json!(d.to_string()));
            }
        }
    }
    if doc.morphism.is_some() {
        match doc.morphism(&alg, Some(&text)) {
            Ok(Some((tgt, m))) => match pmap_compat_failure(&alg, &tgt, &m) {
                None => text_out.push("restricted morphism: ok".into()),
                Some(i) => {
                    pass = false;
                    let label = &alg.lie.labels()[i];
                    text_out.push(format!("FAIL: morphism is a Lie morphism but φ({label}^[p]) != φ({label})^[p]"));
                    extra.insert("morphism_failure".into(), json!(format!("p-map compatibility at {label}")));
                }
            },
            Ok(None) => {}
            Err(d) => {
                pass = false;
                text_out.push(format!("FAIL: morphism: {d}"));
                extra.insert("morphism_failure".into(), json!(d.to_string()));
            }
        }
    }
    extra.insert("pass".into(), json!(pass));
    Ok(Report {
        pass,
        text: text_out,
        json: Value::Object(extra),
    })
}

fn term(c: u32, label: &str) -> String {
    if c == 1 {
        label.to_string()
    } else {
        format!("{c}{label}")
    }
}

fn combination(v: &FpVector, labels: &[String]) -> String {
    let parts: Vec<String> = v.support().map(|(i, c)| term(c, &labels[i])).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn tuple_label(t: &[usize], labels: &[String]) -> String {
    t.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join(",")
}

fn cochain_lines(name: &str, c: &CeCochain, alg_labels: &[String], mod_labels: &[String]) -> Vec<String> {
    tuples::all(c.alg_dim(), c.degree())
        .into_iter()
        .filter_map(|t| {
            let v = c.value(&t);
            (!v.is_zero()).then(|| format!("{name}({}) = {}", tuple_label(&t, alg_labels), combination(&v, mod_labels)))
        })
        .collect()
}

fn pmap_lines(name: &str, w: &[FpVector], alg_labels: &[String], mod_labels: &[String]) -> Vec<String> {
    w.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| format!("{name}({}) = {}", alg_labels[i], combination(v, mod_labels)))
        .collect()
}

/// Nonzero values of a cochain given in complex coordinates.
fn describe(s: &Setting, q: usize, ordinary: bool, coords: &FpVector, alg_labels: &[String], mod_labels: &[String]) -> Result<Vec<String>> {
    let (n, m) = (s.n(), s.m());
    let lines = if q == 0 {
        vec![combination(coords, mod_labels)]
    } else if ordinary || (s.field().p() != 2 && q < 2) {
        cochain_lines("φ", &CeCochain::from_coords(n, m, q, coords)?, alg_labels, mod_labels)
    } else if s.field().p() != 2 {
        let c = RC2::from_coords(n, m, coords)?;
        let mut l = cochain_lines("φ", &c.phi, alg_labels, mod_labels);
        l.extend(pmap_lines("ω", &c.omega, alg_labels, mod_labels));
        l
    } else {
        let c = RC2n::from_coords(n, m, q, coords)?;
        let mut l = cochain_lines("φ", &c.phi, alg_labels, mod_labels);
        if q >= 2 {
            for i in 0..n {
                for z in tuples::all(n, q - 2) {
                    let v = c.omega_basis(i, &z);
                    if !v.is_zero() {
                        let mut args = vec![i];
                        args.extend(&z);
                        l.push(format!("ω({}) = {}", tuple_label(&args, alg_labels), combination(&v, mod_labels)));
                    }
                }
            }
        }
        l
    };
    Ok(lines)
}

fn cmd_cohomology(path: &Path, q: usize, coeff: Coefficients, ordinary: bool) -> Result<Report> {
    let (doc, text) = parse_doc(path)?;
    let alg = doc.algebra(Some(&text)).map_err(|d| anyhow!("{}:{d}", path.display()))?;
    let (module, coeff_name) = match coeff {
        Coefficients::Adjoint => (LModule::adjoint(&alg.lie), "adjoint"),
        Coefficients::Trivial => (LModule::trivial(&alg.lie), "trivial"),
        Coefficients::Module => (
            doc.module(&alg, Some(&text))
                .map_err(|d| anyhow!("{}:{d}", path.display()))?
                .ok_or_else(|| anyhow!("{} has no module block", path.display()))?,
            "module",
        ),
    };
    let s = Setting::new(&alg, &module);
    let res: CohomologyResult = if ordinary {
        ce_cohomology(&alg.lie, &module, q)?
    } else if alg.p() == 2 {
        restricted_cohomology_2(&s, q)?
    } else {
        restricted_cohomology_p(&s, q)?
    };
    let alg_labels = alg.lie.labels().to_vec();
    let mod_labels: Vec<String> = match coeff {
        Coefficients::Adjoint => alg_labels.clone(),
        _ => (0..module.dim()).map(|i| format!("v{i}")).collect(),
    };
    let kind = if ordinary { "H" } else { "H_*" };
    let mut text_out = vec![format!("dim {kind}^{q} = {}", res.dim)];
    text_out.push(format!(
        "cochains {}, cocycles {}, coboundaries {}",
        res.cochain_dim, res.cocycle_dim, res.coboundary_dim
    ));
    let mut reps = Vec::new();
    for (k, b) in res.basis.iter().enumerate() {
        let lines = describe(&s, q, ordinary, b, &alg_labels, &mod_labels)?;
        text_out.push(format!("[{}] {}", k + 1, lines.join("; ")));
        reps.push(json!({"coords": b.to_i64(), "values": lines}));
    }
    Ok(Report {
        pass: true,
        text: text_out,
        json: json!({
            "characteristic": alg.p(),
            "coefficients": coeff_name,
            "degree": q,
            "restricted": !ordinary,
            "dim": res.dim,
            "cochain_dim": res.cochain_dim,
            "cocycle_dim": res.cocycle_dim,
            "coboundary_dim": res.coboundary_dim,
            "basis": reps,
        }),
    })
}

fn identity_text(id: &deform::Identity, labels: &[String]) -> String {
    match *id {
        deform::Identity::Jacobi(i, j, k) => format!("Jacobi identity on ({}, {}, {})", labels[i], labels[j], labels[k]),
        deform::Identity::PMap(i, j) => format!("p-map compatibility [{}, {}^[p]]", labels[i], labels[j]),
    }
}

fn cmd_deform_check(alg: &RestrictedAlgebra, jet: &Path) -> Result<Report> {
    let d = load_jet(jet, alg)?;
    let chk = check_deformation(&d);
    let inf = infinitesimal(&d)?;
    let labels = alg.lie.labels();
    let mut text_out = vec![format!("jet of order {}", d.order())];
    text_out.push(format!("infinitesimal is a restricted cocycle: {}", inf.is_cocycle()));
    let failure = chk.failure.map(|(k, id)| format!("degree {k}: {}", identity_text(&id, labels)));
    match &failure {
        None => text_out.push(format!("deformation identities hold up to t^{}: pass", d.order())),
        Some(f) => text_out.push(format!("FAIL at {f}")),
    }
    Ok(Report {
        pass: chk.passed(),
        text: text_out,
        json: json!({
            "order": d.order(),
            "pass": chk.passed(),
            "failure": failure,
            "infinitesimal_cocycle": inf.is_cocycle(),
        }),
    })
}

fn cmd_deform_extend(alg: &RestrictedAlgebra, jet: &Path) -> Result<Report> {
    let d = load_jet(jet, alg)?;
    let chk = check_deformation(&d);
    if !chk.passed() {
        return Ok(Report {
            pass: false,
            text: vec!["jet is not a deformation; run --check".into()],
            json: json!({"pass": false, "failure": "not a deformation"}),
        });
    }
    let obs = obstruction(&d)?;
    let obs_zero = obs.coords().is_zero();
    match extend_order(&d)? {
        Some(ext) => {
            let doc = JetDocument::from_deformation(&ext);
            let mut text_out = vec![format!("extension to order {} exists (obstruction cochain zero: {obs_zero})", ext.order())];
            text_out.push(doc.to_json());
            Ok(Report {
                pass: true,
                text: text_out,
                json: json!({"extendable": true, "obstruction_zero": obs_zero, "jet": serde_json::to_value(&doc)?}),
            })
        }
        None => Ok(Report {
            pass: false,
            text: vec![format!(
                "extension obstructed; class nonzero (order {} obstruction is not a restricted coboundary)",
                d.order() + 1
            )],
            json: json!({"extendable": false, "obstruction": obs.coords().to_i64()}),
        }),
    }
}

fn matrix_text(m: &FpMatrix) -> String {
    (0..m.rows()).map(|i| format!("{:?}", m.row(i).to_i64())).collect::<Vec<_>>().join(" ")
}

fn cmd_deform_equiv(alg: &RestrictedAlgebra, a: &Path, b: &Path) -> Result<Report> {
    let d1 = load_jet(a, alg)?;
    let d2 = load_jet(b, alg)?;
    match equivalence_solve(&d1, &d2)? {
        Some(eq) => {
            let mut text_out = vec![format!("equivalence found (gauge freedom {} per order)", eq.gauge_dim)];
            for (k, m) in eq.maps.iter().enumerate().skip(1) {
                text_out.push(format!("φ_{k} = {}", matrix_text(m)));
            }
            let maps: Vec<Value> = eq.maps.iter().skip(1).map(|m| json!(reslie::doc::matrix_rows(m))).collect();
            Ok(Report {
                pass: true,
                text: text_out,
                json: json!({"equivalent": true, "gauge_dim": eq.gauge_dim, "maps": maps}),
            })
        }
        None => Ok(Report {
            pass: false,
            text: vec!["no equivalence: the jets differ by a nontrivial class".into()],
            json: json!({"equivalent": false}),
        }),
    }
}

fn max_p() -> Result<u32> {
    match std::env::var("RESLIE_MAX_P") {
        Ok(v) => v.trim().parse().with_context(|| format!("RESLIE_MAX_P={v:?} is not an integer")),
        Err(_) => Ok(DEFAULT_MAX_P),
    }
}

fn theta_name(t: &classify::Theta) -> String {
    let parts: Vec<String> = ["x*", "y*", "z*"]
        .iter()
        .zip(t)
        .filter(|(_, &c)| c != 0)
        .map(|(l, &c)| term(c, l))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn cmd_classify(p: u32) -> Result<Report> {
    let cl = classify::classify_heisenberg_pstructures(p, max_p()?)?;
    let mut text_out = vec![format!("p = {p}: {} classes over the algebraic closure", cl.classes.len())];
    text_out.push(format!("{:<12} {:>8} {:>16}", "theta", "members", "witness degree"));
    let mut rows = Vec::new();
    for c in &cl.classes {
        let deg = c.witnesses.iter().map(|w| w.field_degree()).max().unwrap_or(1);
        text_out.push(format!("{:<12} {:>8} {:>16}", theta_name(&c.representative), c.members.len(), deg));
        rows.push(json!({
            "representative": c.representative,
            "members": c.members.len(),
            "max_witness_degree": deg,
        }));
    }
    text_out.push(format!("classes over F_{p}: {}", cl.fp_class_count));
    let x_to_y = classify::x_to_y_witness(p)?;
    let ok = classify::verify_as_morphism(p, &x_to_y)?;
    text_out.push(format!("(h, x*) -> (h, y*) witness verifies: {ok}"));
    Ok(Report {
        pass: ok,
        text: text_out,
        json: json!({"p": p, "classes": rows, "fp_class_count": cl.fp_class_count, "x_to_y_witness": ok}),
    })
}

fn cmd_morph(path: &Path, degree: Option<usize>, flavor: FlavorArg, kernel: Option<&[PathBuf]>) -> Result<Report> {
    let (doc, text) = parse_doc(path)?;
    let alg = doc.algebra(Some(&text)).map_err(|d| anyhow!("{}:{d}", path.display()))?;
    let (tgt, phi) = doc
        .morphism(&alg, Some(&text))
        .map_err(|d| anyhow!("{}:{d}", path.display()))?
        .ok_or_else(|| anyhow!("{} has no morphism block", path.display()))?;
    let cx = MorphComplex::new(&alg, &tgt, &phi)?;
    let flavor = match flavor {
        FlavorArg::Restricted => Flavor::Restricted,
        FlavorArg::Ce => Flavor::Ce,
    };
    let mut out = serde_json::Map::new();
    let restricted = pmap_compat_failure(&alg, &tgt, &phi);
    let mut text_out = vec![match restricted {
        None => "restricted morphism: ok".to_string(),
        Some(i) => format!("Lie morphism; not compatible with the p-maps at {}", alg.lie.labels()[i]),
    }];
    out.insert("restricted_morphism".into(), json!(restricted.is_none()));
    let mut pass = true;
    if let Some(q) = degree {
        if let (Flavor::Restricted, true, Some(i)) = (flavor, q >= 2, restricted) {
            bail!(
                "the restricted complex in degree {q} needs a restricted morphism (fails at {}); use --flavor ce",
                alg.lie.labels()[i]
            );
        }
        let res = cx.cohomology(flavor, q)?;
        text_out.push(format!("dim H^{q} of the morphism complex = {}", res.dim));
        out.insert("degree".into(), json!(q));
        out.insert("dim".into(), json!(res.dim));
    }
    if let Some(jets) = kernel {
        let src = load_jet(&jets[0], &alg)?;
        let tgt_jet = load_jet(&jets[1], &tgt)?;
        if src.order() < 1 || tgt_jet.order() < 1 {
            bail!("kernel jets need order at least 1");
        }
        let mu = deform::join_c2(&alg, &src.brackets[0], &src.pmaps[0]);
        let nu = deform::join_c2(&tgt, &tgt_jet.brackets[0], &tgt_jet.pmaps[0]);
        let sol = cx.alpha_beta_kernel(&mu, &nu)?;
        match sol.dim() {
            Some(d) => {
                text_out.push(format!("solution space of the mixed equations: affine, dimension {d}"));
                let labels = alg.lie.labels();
                let tl = tgt.lie.labels();
                let n = alg.dim();
                let show = |v: &FpVector| -> Result<String> {
                    Ok(cochain_lines("θ", &CeCochain::from_coords(n, tgt.dim(), 1, v)?, labels, tl).join("; "))
                };
                let particular = sol.particular.as_ref().expect("consistent system");
                text_out.push(format!("particular: {}", show(particular)?));
                for (k, h) in sol.homogeneous.iter().enumerate() {
                    text_out.push(format!("direction {}: {}", k + 1, show(h)?));
                }
                out.insert("consistent".into(), json!(true));
                out.insert("dim".into(), json!(d));
                out.insert("particular".into(), json!(particular.to_i64()));
                out.insert(
                    "homogeneous".into(),
                    json!(sol.homogeneous.iter().map(|h| h.to_i64()).collect::<Vec<_>>()),
                );
            }
            None => {
                pass = false;
                text_out.push(format!(
                    "mixed equations inconsistent (homogeneous solutions: {})",
                    sol.homogeneous.len()
                ));
                out.insert("consistent".into(), json!(false));
                out.insert("homogeneous_dim".into(), json!(sol.homogeneous.len()));
            }
        }
    }
    out.insert("regime".into(), json!(if cx.regime() == Regime::Two { "two" } else { "odd" }));
    out.insert("pass".into(), json!(pass));
    Ok(Report {
        pass,
        text: text_out,
        json: Value::Object(out),
    })
}

fn cmd_export(dir: &Path, p: u32) -> Result<Report> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let files = catalog::fixture_files(p)?;
    let mut names = Vec::new();
    for (name, body) in &files {
        let path = dir.join(name);
        fs::write(&path, format!("{body}\n")).with_context(|| format!("writing {}", path.display()))?;
        names.push(name.clone());
    }
    Ok(Report {
        pass: true,
        text: names.iter().map(|n| format!("wrote {}", dir.join(n).display())).collect(),
        json: json!({"p": p, "files": names}),
    })
}
