//! The `modext` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cohomology::{analytic_h3_order, h3_classes, restrict_cocycle};
use crate::condensation::{break_symmetry, condense};
use crate::constructors::{mext_svect_catalog, mext_svect_toric_catalog, twisted_doubles_cyclic};
use crate::data::{central_charge, deligne_product, is_modular, PreModularData};
use crate::equivalence::find_equivalence;
use crate::error::{Error, Result};
use crate::extensions::{extension_equivalence, group_table, stack, torsor_check, validate_extension, ExtensionWitness};
use crate::io::{self, Document};
use crate::symmetric::{classify_symmetric, transparent_objects};

#[derive(Parser, Debug)]
#[command(name = "modext", version, about = "Modular data, modular extensions and their stacking group")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CatalogKind {
    Svect,
    Repzn,
    SvectToric,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Modularity report for data, extension report for a witness.
    Validate { file: PathBuf },
    /// Rank, dimensions, twists, central charge and Müger center.
    Info { file: PathBuf },
    /// Deligne product of two data files (witnesses contribute their bulk).
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Condense a group of invertible bosons (labels or indices) in data or a witness bulk.
    Condense {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        bosons: Vec<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Stack two extensions of the same base.
    Stack {
        w1: PathBuf,
        w2: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write a family of extension witnesses.
    Catalog {
        kind: CatalogKind,
        /// Cyclic order for `repzn`.
        n: Option<u64>,
        #[arg(long)]
        dir: PathBuf,
    },
    /// Find the entry of a directory equivalent to FILE.
    Identify {
        file: PathBuf,
        #[arg(long)]
        against: PathBuf,
    },
    /// Stacking table of the witnesses in a directory.
    GroupTable { dir: PathBuf },
    /// Check that stacking makes extC a torsor over extE.
    TorsorCheck {
        #[arg(long = "extC")]
        ext_c: PathBuf,
        #[arg(long = "extE")]
        ext_e: PathBuf,
    },
    /// H³(G, U(1)) for G = ⊕ Z_n (comma-separated orders).
    Cohomology {
        #[arg(long)]
        group: String,
        /// Subgroup generators, `;`-separated, coordinates `,`-separated.
        #[arg(long)]
        restrict: Option<String>,
    },
    /// Break the base symmetry of a witness to a subgroup.
    BreakSymmetry {
        w: PathBuf,
        #[arg(long)]
        subgroup: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// Data file, or the bulk of a witness.
fn read_bulk(path: &Path) -> Result<PreModularData> {
    Ok(match io::read_document(path)? {
        Document::Data(d) => d,
        Document::Witness(w) => w.bulk,
    })
}

/// Outcome of a command: text and JSON carry the same content.
pub struct Report {
    pub passed: bool,
    pub text: String,
    pub json: Value,
}

impl Report {
    fn pass(text: String, json: Value) -> Self {
        Self { passed: true, text, json }
    }
}

/// Exit code for an error: 2 for bad input, 1 for a failed check.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Io(_)
        | Error::InvalidArgument(_)
        | Error::InvalidPinned(_)
        | Error::InvalidRing(_)
        | Error::InvalidData(_)
        | Error::BaseMismatch(_)
        | Error::SizeBound(_) => 2,
        _ => 1,
    }
}

pub fn parse_orders(text: &str) -> Result<Vec<u64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|e| Error::InvalidArgument(format!("bad order {s:?}: {e}"))))
        .collect()
}

/// `"1,0;0,1"` → `[[1,0],[0,1]]`; the empty string is the trivial subgroup.
pub fn parse_subgroup(text: &str) -> Result<Vec<Vec<u64>>> {
    text.split(';').filter(|g| !g.trim().is_empty()).map(parse_orders).collect()
}

fn emit(doc: Document, out: Option<&Path>, what: &str) -> Result<Report> {
    let text = io::document_to_string(&doc);
    match out {
        Some(path) => {
            io::write_document(path, &doc)?;
            Ok(Report::pass(format!("wrote {what} to {}", path.display()), json!({ "written": path })))
        }
        None => {
            let value: Value = serde_json::from_str(&text).expect("own output is JSON");
            Ok(Report::pass(text, value))
        }
    }
}

fn info_lines(data: &PreModularData, text: &mut String) -> Value {
    let center = transparent_objects(data);
    let class = classify_symmetric(data, &center).ok();
    let charge = central_charge(data).ok().map(|c| c.c.to_string());
    let _ = write!(text, "{data}");
    let _ = writeln!(text, "central charge: {}", charge.as_deref().unwrap_or("undefined"));
    let names: Vec<&str> = center.iter().map(|&a| data.label(a)).collect();
    let kind = class.as_ref().map(|c| format!("{:?}", c.kind));
    let _ = writeln!(text, "Müger center: {{{}}} ({})", names.join(", "), kind.as_deref().unwrap_or("inconsistent"));
    json!({
        "rank": data.rank(),
        "total_dim": data.total_dim(),
        "labels": data.labels(),
        "dims": data.dims(),
        "twists": data.twists().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "central_charge": charge,
        "center": names,
        "center_kind": kind,
    })
}

fn resolve_label(data: &PreModularData, name: &str) -> Result<usize> {
    data.index_of(name)
        .or_else(|| name.parse::<usize>().ok().filter(|&i| i < data.rank()))
        .ok_or_else(|| Error::InvalidArgument(format!("unknown label {name:?}")))
}

fn witnesses(dir: &Path) -> Result<(Vec<PathBuf>, Vec<ExtensionWitness>)> {
    let entries = io::read_witness_dir(dir)?;
    if entries.is_empty() {
        return Err(Error::InvalidArgument(format!("no witness files in {}", dir.display())));
    }
    Ok(entries.into_iter().unzip())
}

fn file_names(paths: &[PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned())).collect()
}

/// Runs one parsed command.
pub fn execute(command: &Command) -> Result<Report> {
    match command {
        Command::Validate { file } => match io::read_document(file)? {
            Document::Data(d) => {
                let rep = is_modular(&d);
                let checks: Vec<Value> = rep
                    .checks
                    .iter()
                    .map(|c| json!({"name": c.name, "residual": c.residual, "tolerance": c.tolerance, "passed": c.passed()}))
                    .collect();
                Ok(Report { passed: rep.is_modular, text: rep.to_string(), json: json!({"modular": rep.is_modular, "checks": checks}) })
            }
            Document::Witness(w) => {
                let rep = validate_extension(&w);
                let checks: Vec<Value> =
                    rep.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect();
                Ok(Report { passed: rep.passed, text: rep.to_string(), json: json!({"valid": rep.passed, "checks": checks}) })
            }
        },
        Command::Info { file } => {
            let mut text = String::new();
            let value = match io::read_document(file)? {
                Document::Data(d) => info_lines(&d, &mut text),
                Document::Witness(w) => {
                    text.push_str("bulk:\n");
                    let bulk = info_lines(&w.bulk, &mut text);
                    text.push_str("base:\n");
                    let base = info_lines(&w.base, &mut text);
                    let emb: Vec<&str> = w.embedding.iter().map(|&x| w.bulk.label(x)).collect();
                    let _ = writeln!(text, "embedding: {}", emb.join(", "));
                    json!({"bulk": bulk, "base": base, "embedding": emb})
                }
            };
            Ok(Report::pass(text.trim_end().to_string(), value))
        }
        Command::Product { a, b, out } => {
            let p = deligne_product(&read_bulk(a)?, &read_bulk(b)?);
            emit(Document::Data(p), out.as_deref(), "product")
        }
        Command::Condense { file, bosons, out } => {
            let host = read_bulk(file)?;
            let idx = bosons.iter().map(|b| resolve_label(&host, b)).collect::<Result<Vec<_>>>()?;
            let result = condense(&host, &idx)?;
            emit(Document::Data(result.data), out.as_deref(), "condensed data")
        }
        Command::Stack { w1, w2, out } => {
            let s = stack(&io::read_witness(w1)?, &io::read_witness(w2)?)?;
            emit(Document::Witness(s), out.as_deref(), "stacked witness")
        }
        Command::Catalog { kind, n, dir } => {
            let list = match kind {
                CatalogKind::Svect => mext_svect_catalog(),
                CatalogKind::SvectToric => mext_svect_toric_catalog(),
                CatalogKind::Repzn => {
                    let n = n.ok_or_else(|| Error::InvalidArgument("repzn needs N".into()))?;
                    twisted_doubles_cyclic(n)?
                }
            };
            let paths = io::write_witness_dir(dir, &list)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut passed = true;
            for (p, w) in paths.iter().zip(&list) {
                let ok = validate_extension(w).passed;
                passed &= ok;
                let c = w.central_charge()?.c.to_string();
                let _ = writeln!(text, "{}  rank {:>3}  c = {c:<5} valid: {ok}", p.display(), w.bulk.rank());
                rows.push(json!({"file": p, "rank": w.bulk.rank(), "central_charge": c, "valid": ok}));
            }
            Ok(Report { passed, text: text.trim_end().to_string(), json: json!({"count": list.len(), "entries": rows}) })
        }
        Command::Identify { file, against } => {
            let paths = io::json_files(against)?;
            match io::read_document(file)? {
                Document::Witness(w) => {
                    for p in &paths {
                        let other = io::read_witness(p)?;
                        if let Some(perm) = extension_equivalence(&w, &other)? {
                            let text = format!("match: {}\npermutation: {perm:?}", p.display());
                            return Ok(Report::pass(text, json!({"match": p, "permutation": perm})));
                        }
                    }
                }
                Document::Data(d) => {
                    for p in &paths {
                        let other = io::read_data(p)?;
                        if let Some(perm) = find_equivalence(&d, &other, &[])? {
                            let text = format!("match: {}\npermutation: {perm:?}", p.display());
                            return Ok(Report::pass(text, json!({"match": p, "permutation": perm})));
                        }
                    }
                }
            }
            Ok(Report { passed: false, text: "no match".into(), json: json!({"match": null}) })
        }
        Command::GroupTable { dir } => {
            let (paths, list) = witnesses(dir)?;
            let t = group_table(&list)?;
            let names = file_names(&paths);
            let text = format!("elements: {}\n{t}", names.join(" "));
            let json = json!({
                "elements": names,
                "table": t.table,
                "identity": t.identity,
                "commutative": t.commutative,
                "associative": t.associative,
                "inverses": t.has_inverses,
                "invariant_factors": t.invariant_factors,
            });
            Ok(Report { passed: t.is_group() && t.commutative, text, json })
        }
        Command::TorsorCheck { ext_c, ext_e } => {
            let (_, c) = witnesses(ext_c)?;
            let (_, e) = witnesses(ext_e)?;
            let rep = torsor_check(&c, &e)?;
            let json = json!({"action": rep.action, "closed": rep.closed, "free": rep.free, "transitive": rep.transitive});
            Ok(Report { passed: rep.passed(), text: rep.to_string(), json })
        }
        Command::Cohomology { group, restrict } => {
            let orders = parse_orders(group)?;
            let h = h3_classes(&orders)?;
            let analytic = analytic_h3_order(&orders);
            let mut text = format!(
                "H^3(G, U(1)) = {}\norder: {} (analytic count {analytic})",
                if h.invariant_factors.is_empty() {
                    "0".to_string()
                } else {
                    h.invariant_factors.iter().map(|d| format!("Z_{d}")).collect::<Vec<_>>().join(" + ")
                },
                h.order()
            );
            let mut json = json!({"invariant_factors": h.invariant_factors, "order": h.order(), "analytic_order": analytic});
            let mut passed = h.order() == analytic;
            if let Some(gens_text) = restrict {
                let gens = parse_subgroup(gens_text)?;
                let images = h
                    .representatives
                    .iter()
                    .map(|r| restrict_cocycle(r, &gens))
                    .collect::<Result<Vec<_>>>()?;
                let sub_orders = images
                    .first()
                    .map(|c| c.group_orders.clone())
                    .unwrap_or(restrict_cocycle(&crate::cohomology::Cocycle3::zero(&orders)?, &gens)?.group_orders);
                let hs = h3_classes(&sub_orders)?;
                let classes = images.iter().map(|c| hs.class_of(c)).collect::<Result<Vec<_>>>()?;
                passed &= hs.order() == analytic_h3_order(&sub_orders);
                let _ = write!(text, "\nrestriction to H = {sub_orders:?} (H^3 invariant factors {:?}):", hs.invariant_factors);
                for (i, c) in classes.iter().enumerate() {
                    let _ = write!(text, "\n  generator {i} -> {c:?}");
                }
                json["restriction"] = json!({"subgroup_orders": sub_orders, "invariant_factors": hs.invariant_factors, "images": classes});
            }
            Ok(Report { passed, text, json })
        }
        Command::BreakSymmetry { w, subgroup, out } => {
            let broken = break_symmetry(&io::read_witness(w)?, &parse_subgroup(subgroup)?)?;
            emit(Document::Witness(broken), out.as_deref(), "broken witness")
        }
    }
}

/// Parses arguments, runs the command, prints the report and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&json!({"passed": report.passed, "report": report.json})).expect("json")
            } else {
                report.text
            };
            let _ = writeln!(std::io::stdout(), "{body}");
            i32::from(!report.passed)
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.json {
                let _ = writeln!(std::io::stdout(), "{}", json!({"passed": false, "error": e.to_string(), "exit_code": code}));
            } else {
                let _ = writeln!(std::io::stderr(), "error: {e}");
            }
            code
        }
    }
}
