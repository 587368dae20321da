//! Command-line surface: catalog browsing, ad-hoc computations, theorem
//! verification and certificate emission.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog::{
    load_entry, load_entry_over, run_script, script_certificates, table_rows, theorem_script, theorem_scripts,
    CatalogEntry, CheckReport,
};
use crate::error::{Error, Result};
use crate::gmodule::set_monomial_guard;
use crate::invariants::{generator_profile, trivial_character, weight_space_basis, Grade};
use crate::scalar::Field;
use crate::separation::{finite_field_beta_sep, SeparationCertificate};
use crate::zerosum::{davenport_with_witness, AbelianGroupTable};

pub const REPORT_SCHEMA: &str = "sepinv-report/1";

#[derive(Parser, Debug)]
#[command(name = "sepinv", version, about = "Exact separating-invariant computations for small finite groups")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Coefficient field, `cyclotomic:n` or `gf:q`; defaults to the entry's own field.
    #[arg(long, global = true)]
    pub field: Option<Field>,
    /// Degree cap for profile and finite-field searches.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_degree: Option<u32>,
    /// Largest number of monomials a single computation may enumerate.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub guard: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for parallel verification (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
    /// Output file, or directory for `certificate emit`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Noether numbers and separating Noether numbers per group.
    List {
        /// Substring of the id or group name.
        filter: Option<String>,
    },
    /// Basis of a (relative) invariant space in one degree.
    Invariants {
        gap_id: String,
        #[arg(long)]
        module: String,
        #[arg(long)]
        degree: u32,
        /// Character label; the trivial character when omitted.
        #[arg(long)]
        weight: Option<String>,
    },
    /// Numbers of minimal generators per degree up to `--max-degree`.
    Profile {
        gap_id: String,
        #[arg(long)]
        module: String,
    },
    /// Runs theorem check scripts.
    Verify {
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        theorem: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Davenport constant of a finite abelian group such as `C3xC3`.
    Davenport { spec: String },
    /// Exhaustive separating Noether number of a module over a finite field.
    FiniteSep {
        gap_id: String,
        #[arg(long)]
        module: String,
    },
    /// Emits or checks witness-pair separation certificates.
    Certificate {
        #[command(subcommand)]
        action: CertificateAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CertificateAction {
    /// Writes every scripted certificate as `<name>.json` into `--out` (default `certificates`).
    Emit,
    /// Recomputes a certificate file and checks that it re-serializes byte for byte.
    Check { path: PathBuf },
}

/// Result of one command: rendered output and whether every check passed.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

impl Outcome {
    fn ok(output: String) -> Outcome {
        Outcome { output, passed: true }
    }
}

/// Canonical certificate file contents.
pub fn certificate_text(cert: &SeparationCertificate) -> String {
    let mut s = serde_json::to_string_pretty(&cert.to_json()).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn entry_for(id: &str, config: &RunConfig) -> Result<CatalogEntry> {
    match &config.field {
        None => load_entry(id),
        Some(f) => {
            let order = load_entry(id)?.group().order();
            let p = f.characteristic();
            if p != 0 && order as u64 % p == 0 {
                return Err(Error::ModularCharacteristic { p, order });
            }
            load_entry_over(id, f)
        }
    }
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let config = &cli.config;
    if let Some(g) = config.guard {
        set_monomial_guard(g);
    }
    let run = || dispatch(&cli.command, config);
    let outcome = match config.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j as usize)
            .build()
            .map_err(|e| Error::Unsupported(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    if let (Some(path), false) = (&config.out, matches!(cli.command, Command::Certificate { .. })) {
        fs::write(path, &outcome.output)?;
        return Ok(Outcome { output: String::new(), passed: outcome.passed });
    }
    Ok(outcome)
}

fn dispatch(command: &Command, config: &RunConfig) -> Result<Outcome> {
    match command {
        Command::List { filter } => cmd_list(filter.as_deref(), config.format),
        Command::Invariants { gap_id, module, degree, weight } => {
            cmd_invariants(gap_id, module, *degree, weight.as_deref(), config)
        }
        Command::Profile { gap_id, module } => cmd_profile(gap_id, module, config),
        Command::Verify { theorem, all } => cmd_verify(if *all { None } else { theorem.as_deref() }, config.format),
        Command::Davenport { spec } => cmd_davenport(spec, config.format),
        Command::FiniteSep { gap_id, module } => cmd_finite_sep(gap_id, module, config),
        Command::Certificate { action: CertificateAction::Emit } => {
            let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("certificates"));
            cmd_certificate_emit(&dir, config.format)
        }
        Command::Certificate { action: CertificateAction::Check { path } } => cmd_certificate_check(path, config.format),
    }
}

pub fn cmd_list(filter: Option<&str>, format: Format) -> Result<Outcome> {
    let rows: Vec<_> = table_rows()?
        .into_iter()
        .filter(|r| filter.map_or(true, |f| r.gap_id.contains(f) || r.name.contains(f)))
        .collect();
    let output = match format {
        Format::Json => json_text(&json!({ "schema": REPORT_SCHEMA, "rows": rows })),
        Format::Text => {
            let mut s = format!("{:<8} {:<16} {:>4} {:>8}  {}\n", "id", "group", "β", "β_sep", "reference");
            for r in &rows {
                let reference = match &r.assumption {
                    Some(a) => format!("{} ({a})", r.status),
                    None => r.status.clone(),
                };
                let _ = writeln!(s, "{:<8} {:<16} {:>4} {:>8}  {}", r.gap_id, r.name, r.beta, r.beta_sep, reference);
            }
            s
        }
    };
    Ok(Outcome::ok(output))
}

pub fn cmd_invariants(id: &str, module: &str, degree: u32, weight: Option<&str>, config: &RunConfig) -> Result<Outcome> {
    let e = entry_for(id, config)?;
    let m = e.module(module)?;
    let chi = match weight {
        Some(w) => e.character(w)?,
        None => trivial_character(&m),
    };
    let basis = weight_space_basis(&m, &Grade::Total(degree), &chi)?;
    let names = m.var_names();
    let output = match config.format {
        Format::Json => json_text(&json!({
            "schema": REPORT_SCHEMA,
            "entry": e.id(),
            "module": m.labels(),
            "field": m.field().to_string(),
            "weight": chi.label,
            "degree": degree,
            "dim": basis.dim(),
            "basis": basis.basis.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!(
                "{} {} over {}, weight {}, degree {}: dim {}\n",
                e.id(),
                module,
                m.field(),
                chi.label,
                degree,
                basis.dim()
            );
            for f in &basis.basis {
                let _ = writeln!(s, "  {}", f.display_with(&names));
            }
            s
        }
    };
    Ok(Outcome::ok(output))
}

pub fn cmd_profile(id: &str, module: &str, config: &RunConfig) -> Result<Outcome> {
    let e = entry_for(id, config)?;
    let m = e.module(module)?;
    let cap = config.max_degree.unwrap_or(8);
    let p = generator_profile(&m, cap)?;
    let output = match config.format {
        Format::Json => json_text(&json!({
            "schema": REPORT_SCHEMA,
            "entry": e.id(),
            "module": m.labels(),
            "field": m.field().to_string(),
            "cap": cap,
            "counts": p.counts.iter().map(|(d, c)| (d.to_string(), json!(c))).collect::<serde_json::Map<_, _>>(),
            "max_degree": p.max_degree(),
        })),
        Format::Text => {
            let counts: Vec<String> = p.counts.iter().map(|(d, c)| format!("{d}:{c}")).collect();
            format!(
                "{} {} up to degree {cap}: generators {{{}}}, largest degree {}\n",
                e.id(),
                module,
                counts.join(", "),
                p.max_degree().map_or("none".to_string(), |d| d.to_string())
            )
        }
    };
    Ok(Outcome::ok(output))
}

/// Runs one theorem script, or all of them in parallel with reports in id order.
pub fn verify_reports(theorem: Option<&str>) -> Result<Vec<CheckReport>> {
    use rayon::prelude::*;
    let scripts = match theorem {
        Some(id) => vec![theorem_script(id)?],
        None => theorem_scripts()?,
    };
    scripts.par_iter().map(run_script).collect()
}

pub fn cmd_verify(theorem: Option<&str>, format: Format) -> Result<Outcome> {
    let reports = verify_reports(theorem)?;
    let passed = reports.iter().all(|r| r.passed);
    let output = match format {
        Format::Json => json_text(&json!({ "schema": REPORT_SCHEMA, "passed": passed, "theorems": reports })),
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(s, "{} {} [{}] {}", if r.passed { "PASS" } else { "FAIL" }, r.theorem, r.entry, r.title);
                for c in &r.checks {
                    let mark = if c.passed { "ok  " } else { "FAIL" };
                    let _ = writeln!(s, "  {mark} {:>2} {:<14} ({}) {}", c.index, c.op, c.source, c.detail);
                }
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            let _ = writeln!(s, "{} of {} theorem checks passed", reports.len() - failed, reports.len());
            s
        }
    };
    Ok(Outcome { output, passed })
}

pub fn cmd_davenport(spec: &str, format: Format) -> Result<Outcome> {
    let t = AbelianGroupTable::parse(spec)?;
    let (d, witness) = davenport_with_witness(&t)?;
    let labels: Vec<&str> = witness.iter().map(|&a| t.label(a)).collect();
    let output = match format {
        Format::Json => json_text(&json!({
            "schema": REPORT_SCHEMA,
            "group": spec,
            "davenport": d,
            "witness": labels,
        })),
        Format::Text => format!("D({spec}) = {d}, longest minimal product-one sequence [{}]\n", labels.join(", ")),
    };
    Ok(Outcome::ok(output))
}

pub fn cmd_finite_sep(id: &str, module: &str, config: &RunConfig) -> Result<Outcome> {
    let field = config.field.as_ref().filter(|f| f.is_finite()).ok_or_else(|| {
        Error::BadField("finite-sep needs --field gf:q".into())
    })?;
    let e = entry_for(id, &RunConfig { field: Some(field.clone()), ..config.clone() })?;
    let m = e.module(module)?;
    let d_max = config.max_degree.unwrap_or(8);
    let r = finite_field_beta_sep(&m, d_max)?;
    let output = match config.format {
        Format::Json => json_text(&json!({
            "schema": REPORT_SCHEMA,
            "entry": e.id(),
            "module": m.labels(),
            "field": field.to_string(),
            "points": r.points,
            "orbits": r.orbits,
            "classes_by_degree": r.classes_by_degree,
            "beta_sep": r.beta_sep,
        })),
        Format::Text => format!(
            "{} {} over {}: {} points in {} orbits, β_sep = {}\n",
            e.id(),
            module,
            field,
            r.points,
            r.orbits,
            r.beta_sep.map_or(format!("> {d_max}"), |b| b.to_string())
        ),
    };
    Ok(Outcome::ok(output))
}

/// Every scripted certificate, keyed by file stem, in script order.
pub fn shipped_certificates() -> Result<Vec<(String, SeparationCertificate)>> {
    let mut out = Vec::new();
    for script in theorem_scripts()? {
        out.extend(script_certificates(&script)?);
    }
    Ok(out)
}

pub fn cmd_certificate_emit(dir: &Path, format: Format) -> Result<Outcome> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, cert) in shipped_certificates()? {
        let path = dir.join(format!("{name}.json"));
        fs::write(&path, certificate_text(&cert))?;
        written.push(path.display().to_string());
    }
    let output = match format {
        Format::Json => json_text(&json!({ "schema": REPORT_SCHEMA, "written": written })),
        Format::Text => written.iter().map(|p| format!("wrote {p}\n")).collect(),
    };
    Ok(Outcome::ok(output))
}

/// Parses, recomputes and re-serializes a certificate file.
pub fn check_certificate_file(path: &Path) -> Result<SeparationCertificate> {
    let text = fs::read_to_string(path)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let cert = SeparationCertificate::from_json(&value).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let field: Field = cert.field.parse()?;
    let entry = load_entry_over(&cert.group, &field)?;
    let module = entry.module_from_labels(&cert.module)?;
    cert.verify(&module).map_err(|e| Error::CheckFailure(format!("{}: {e}", path.display())))?;
    if certificate_text(&cert) != text {
        return Err(Error::CheckFailure(format!("{}: file is not in canonical form", path.display())));
    }
    Ok(cert)
}

pub fn cmd_certificate_check(path: &Path, format: Format) -> Result<Outcome> {
    let (passed, detail) = match check_certificate_file(path) {
        Ok(cert) => (
            true,
            format!(
                "{} {} agree through degree {}, separator values {} vs {}",
                cert.group,
                cert.module.join("+"),
                cert.agree_bound,
                cert.values[0],
                cert.values[1]
            ),
        ),
        Err(Error::Io(e)) => return Err(Error::Io(e)),
        Err(e) => (false, e.to_string()),
    };
    let output = match format {
        Format::Json => json_text(&json!({
            "schema": REPORT_SCHEMA,
            "path": path.display().to_string(),
            "passed": passed,
            "detail": detail,
        })),
        Format::Text => format!("{} {}: {detail}\n", if passed { "PASS" } else { "FAIL" }, path.display()),
    };
    Ok(Outcome { output, passed })
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            print!("{}", o.output);
            i32::from(!o.passed)
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
