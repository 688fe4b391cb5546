//! Command-line surface. [`run`] is the whole program, minus process exit.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arrangement::Arrangement;
use crate::discrete::bernoulli_table;
use crate::error::{Error, Result};
use crate::family::{verify_family, BasisRegistry, FieldRegistry};
use crate::field::DerivationField;
use crate::serial::{
    arrangement_to_json, field_to_json, poly_to_json, report_to_json, ArrangementJson, FieldJson,
    PolyJson, ReportJson, SCHEMA,
};
use crate::verify::{VerificationReport, Witness};

/// Caps the worker threads used by verification.
pub const THREADS_ENV: &str = "CATALOG_DERIVATIONS_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "catalog-derivations",
    version,
    about = "Explicit bases of logarithmic derivation modules for braid, Catalan and Shi arrangements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(value_parser = PossibleValuesParser::new(BasisRegistry::builtin().names()))]
    pub kind: String,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub m: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the arrangement and its basis.
    Basis {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Certify the basis and print the verification reports.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Emit the Bernoulli polynomials B_0 .. B_n.
    Bernoulli {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Emit a single vector field of a named family.
    Field {
        #[arg(value_parser = PossibleValuesParser::new(FieldRegistry::builtin().names()))]
        family: String,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Serialize)]
struct BasisDoc {
    schema: &'static str,
    kind: String,
    l: usize,
    m: usize,
    arrangement: ArrangementJson,
    fields: Vec<FieldJson>,
}

#[derive(Serialize)]
struct VerifyDoc {
    schema: &'static str,
    kind: String,
    l: usize,
    m: usize,
    overall: bool,
    reports: Vec<ReportJson>,
}

#[derive(Serialize)]
struct BernoulliDoc {
    schema: &'static str,
    n: usize,
    polynomials: Vec<PolyJson>,
}

#[derive(Serialize)]
struct FieldDoc {
    schema: &'static str,
    family: String,
    l: usize,
    m: usize,
    k: usize,
    field: FieldJson,
}

struct Rendered {
    body: String,
    verdict: bool,
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

fn field_text(out: &mut String, f: &DerivationField) {
    for (v, c) in f.coords().iter().zip(f.coeffs()) {
        let _ = writeln!(out, "    d/d{v}: {c}");
    }
}

fn arrangement_text(out: &mut String, a: &Arrangement) {
    let _ = writeln!(out, "arrangement {}", a.label());
    for h in a.hyperplanes() {
        let _ = writeln!(out, "  ({})^{}", h.form(), h.multiplicity());
    }
}

fn report_text(out: &mut String, r: &VerificationReport) {
    let _ = writeln!(
        out,
        "{} [{}]",
        r.subject,
        if r.overall { "verified" } else { "rejected" }
    );
    for c in &r.checks {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        match &c.witness {
            Witness::None => {
                let _ = writeln!(out, "  {mark} {}", c.name);
            }
            Witness::Poly(p) => {
                let _ = writeln!(out, "  {mark} {}: {p}", c.name);
            }
            Witness::Text(s) => {
                let _ = writeln!(out, "  {mark} {}: {s}", c.name);
            }
        }
    }
}

fn render(command: &Command) -> Result<Rendered> {
    match command {
        Command::Basis { family, out } => {
            let registry = BasisRegistry::builtin();
            let fam = registry
                .get(&family.kind)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown kind {}", family.kind)))?;
            fam.check_params(family.l, family.m)?;
            let a = fam.arrangement(family.l, family.m)?;
            let fields = fam.basis(family.l, family.m)?;
            let body = match out.format {
                Format::Json => to_json(&BasisDoc {
                    schema: SCHEMA,
                    kind: family.kind.clone(),
                    l: family.l,
                    m: family.m,
                    arrangement: arrangement_to_json(&a),
                    fields: fields.iter().map(field_to_json).collect(),
                }),
                Format::Text => {
                    let mut s = String::new();
                    arrangement_text(&mut s, &a);
                    for (i, f) in fields.iter().enumerate() {
                        let deg = f
                            .homogeneous_degree()
                            .map_or("-".to_string(), |d| d.to_string());
                        let _ = writeln!(s, "field {i} (degree {deg})");
                        field_text(&mut s, f);
                    }
                    s
                }
            };
            Ok(Rendered {
                body,
                verdict: true,
            })
        }
        Command::Verify { family, out } => {
            let registry = BasisRegistry::builtin();
            let fam = registry
                .get(&family.kind)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown kind {}", family.kind)))?;
            let reports = verify_family(fam, family.l, family.m)?;
            let overall = reports.iter().all(|r| r.overall);
            let body = match out.format {
                Format::Json => to_json(&VerifyDoc {
                    schema: SCHEMA,
                    kind: family.kind.clone(),
                    l: family.l,
                    m: family.m,
                    overall,
                    reports: reports.iter().map(report_to_json).collect(),
                }),
                Format::Text => {
                    let mut s = String::new();
                    for r in &reports {
                        report_text(&mut s, r);
                    }
                    let _ = writeln!(s, "overall: {overall}");
                    s
                }
            };
            Ok(Rendered {
                body,
                verdict: overall,
            })
        }
        Command::Bernoulli { n, out } => {
            let table = bernoulli_table(*n);
            let body = match out.format {
                Format::Json => to_json(&BernoulliDoc {
                    schema: SCHEMA,
                    n: *n,
                    polynomials: table.iter().map(poly_to_json).collect(),
                }),
                Format::Text => table
                    .iter()
                    .enumerate()
                    .map(|(i, b)| format!("B{i} = {b}\n"))
                    .collect(),
            };
            Ok(Rendered {
                body,
                verdict: true,
            })
        }
        Command::Field {
            family,
            l,
            m,
            k,
            out,
        } => {
            let registry = FieldRegistry::builtin();
            let fam = registry
                .get(family)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown field family {family}")))?;
            let f = fam.build(*l, *m, *k)?;
            let body = match out.format {
                Format::Json => to_json(&FieldDoc {
                    schema: SCHEMA,
                    family: family.clone(),
                    l: *l,
                    m: *m,
                    k: *k,
                    field: field_to_json(&f),
                }),
                Format::Text => {
                    let mut s = format!("{family}(l={l}, m={m}, k={k})\n");
                    field_text(&mut s, &f);
                    s
                }
            };
            Ok(Rendered {
                body,
                verdict: true,
            })
        }
    }
}

fn output_target(command: &Command) -> Option<&Path> {
    let out = match command {
        Command::Basis { out, .. }
        | Command::Verify { out, .. }
        | Command::Bernoulli { out, .. }
        | Command::Field { out, .. } => out,
    };
    out.output.as_deref()
}

/// Write via a sibling temporary file and a rename, so readers never see a
/// partial document.
fn write_atomically(path: &Path, body: &str) -> std::io::Result<()> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, body)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

fn thread_pool() -> std::result::Result<Option<rayon::ThreadPool>, String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| e.to_string())
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_ERROR;
        }
    };
    let rendered = match &pool {
        Some(pool) => pool.install(|| render(&cli.command)),
        None => render(&cli.command),
    };
    let rendered = match rendered {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    };
    let written = match output_target(&cli.command) {
        Some(path) => write_atomically(path, &rendered.body),
        None => out
            .write_all(rendered.body.as_bytes())
            .and_then(|_| out.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_ERROR;
    }
    if rendered.verdict {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("catalog-derivations").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn verify_catalan() {
        let (code, out, _) = run_capture(&["verify", "cat", "--l", "3", "--m", "1"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["overall"], true);
    }

    #[test]
    fn bernoulli_text() {
        let (code, out, _) = run_capture(&["bernoulli", "--n", "4", "--format", "text"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().last().unwrap(), "B4 = t^4 - 2*t^3 + t^2 - 1/30");
    }

    #[test]
    fn usage_errors_exit_one() {
        let (code, out, err) = run_capture(&["basis", "shi", "--l", "2", "--m", "0"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(out.is_empty());
        assert!(!err.is_empty());
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_ERROR);
        assert_eq!(
            run_capture(&["basis", "nope", "--l", "2", "--m", "1"]).0,
            EXIT_ERROR
        );
        assert_eq!(
            run_capture(&["field", "eta", "--l", "2", "--m", "1"]).0,
            EXIT_ERROR
        );
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }
}
