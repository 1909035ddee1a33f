//! Command-line front end: `validate`, `classify`, `verify` and `amalgamate`.
//!
//! Exit codes: 0 success, 1 property or classification failure, 2 usage or
//! parse error.

pub mod doc;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::classify::{is_c1ap_m_closed, maximal_disjoint_submodules, Class, ClassReport};
use crate::construct::AmalgamModule;
use crate::error::Error;
use crate::lab::{self, Caps, CorpusConfig};
use crate::module::{FiniteModule, Submodule};

pub use doc::{LoadError, StructureDoc, Workspace, DOC_SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "c1abs",
    version,
    about = "Classify submodules of finite modules and check results over a corpus"
)]
struct Cli {
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

/// Size and work caps. Every flag can also be set through the environment.
#[derive(Debug, Args)]
struct CapArgs {
    /// Largest ring order accepted.
    #[arg(long, global = true, env = "C1ABS_MAX_RING")]
    max_ring: Option<usize>,
    /// Largest module order accepted.
    #[arg(long, global = true, env = "C1ABS_MAX_MODULE")]
    max_module: Option<usize>,
    /// Largest submodule lattice enumerated.
    #[arg(long, global = true, env = "C1ABS_MAX_SUBMODULES")]
    max_submodules: Option<usize>,
    /// Largest duplication M⋈I built.
    #[arg(long, global = true, env = "C1ABS_MAX_AMALGAM_MODULE")]
    max_amalgam_module: Option<usize>,
    /// Largest free module M^k built.
    #[arg(long, global = true, env = "C1ABS_MAX_TENSOR_MODULE")]
    max_tensor_module: Option<usize>,
    /// Work budget for each quantified characterization.
    #[arg(long, global = true, env = "C1ABS_ORACLE_WORK")]
    oracle_work: Option<u64>,
    /// Work budget for one classification sweep.
    #[arg(long, global = true, env = "C1ABS_SWEEP_WORK")]
    sweep_work: Option<u64>,
    /// Lift every cap. Runs may take very long or exhaust memory.
    #[arg(long, global = true)]
    force: bool,
}

impl CapArgs {
    fn apply(&self, mut caps: Caps, err: &mut dyn Write) -> Caps {
        if self.force {
            let _ = writeln!(
                err,
                "WARNING: --force lifts all size and work caps; this run may take very long or exhaust memory"
            );
            caps.max_ring = crate::ring::MAX_ENUM_RING;
            caps.max_module = usize::MAX;
            caps.max_submodules = usize::MAX;
            caps.max_amalgam_module = usize::MAX;
            caps.max_tensor_module = usize::MAX;
            caps.max_direct_sum_ring = usize::MAX;
            caps.mclosed_module = usize::MAX;
            caps.mclosed_ideals = usize::MAX;
            caps.oracle_work = u64::MAX;
            caps.sweep_work = u64::MAX;
            caps.max_chains = usize::MAX;
        }
        if let Some(x) = self.max_ring {
            caps.max_ring = x;
        }
        if let Some(x) = self.max_module {
            caps.max_module = x;
        }
        if let Some(x) = self.max_submodules {
            caps.max_submodules = x;
        }
        if let Some(x) = self.max_amalgam_module {
            caps.max_amalgam_module = x;
        }
        if let Some(x) = self.max_tensor_module {
            caps.max_tensor_module = x;
        }
        if let Some(x) = self.oracle_work {
            caps.oracle_work = x;
        }
        if let Some(x) = self.sweep_work {
            caps.sweep_work = x;
        }
        caps
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a structure file and check every declared structure.
    Validate {
        file: PathBuf,
        /// Write the loaded structures back out as explicit tables.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Classify one submodule, or every proper submodule, of a module.
    Classify {
        file: PathBuf,
        module: String,
        submodule: Option<String>,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Also test a named set for m-closedness and list the maximal
        /// submodules disjoint from it.
        #[arg(long)]
        set: Option<String>,
    },
    /// Run theorem checkers over a corpus.
    Verify {
        /// Corpus configuration (JSON).
        config: Option<PathBuf>,
        /// Use the built-in corpus instead of a configuration file.
        #[arg(long)]
        default_corpus: bool,
        /// Comma-separated theorem ids, or `all`.
        #[arg(long, value_delimiter = ',')]
        theorems: Vec<String>,
        /// Write the machine-readable report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write per-theorem wall times here.
        #[arg(long)]
        timings: Option<PathBuf>,
        /// Print every verdict with its note.
        #[arg(long)]
        details: bool,
    },
    /// Build M⋈I over A⋈I and compare classifications.
    Amalgamate {
        file: PathBuf,
        module: String,
        ideal: String,
        #[arg(long)]
        classify: bool,
    },
}

/// Runs the tool and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Validate { file, export } => validate(file, export.as_deref(), &cli.caps, out, err),
        Command::Classify {
            file,
            module,
            submodule,
            json,
            set,
        } => classify(
            file,
            module,
            submodule.as_deref(),
            *json,
            set.as_deref(),
            &cli.caps,
            out,
            err,
        ),
        Command::Verify {
            config,
            default_corpus,
            theorems,
            out: report,
            timings,
            details,
        } => verify(
            config.as_deref(),
            *default_corpus,
            theorems,
            report.as_deref(),
            timings.as_deref(),
            *details,
            &cli.caps,
            out,
            err,
        ),
        Command::Amalgamate {
            file,
            module,
            ideal,
            classify,
        } => amalgamate(file, module, ideal, *classify, &cli.caps, out, err),
    };
    match result {
        Ok(code) => code,
        Err((code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

type CmdResult = Result<i32, (i32, String)>;

fn usage(message: impl Into<String>) -> (i32, String) {
    (EXIT_USAGE, message.into())
}

fn read(path: &Path) -> Result<String, (i32, String)> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), (i32, String)> {
    std::fs::write(path, text).map_err(|e| (EXIT_FAILURE, format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path, caps: &Caps) -> Result<Workspace, (i32, String)> {
    let doc = StructureDoc::parse(&read(path)?).map_err(|e| (e.exit_code(), e.to_string()))?;
    Workspace::load(&doc, caps).map_err(|e| (e.exit_code(), e.to_string()))
}

fn validate(
    file: &Path,
    export: Option<&Path>,
    cap_args: &CapArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let caps = cap_args.apply(Caps::default(), err);
    let ws = load(file, &caps)?;
    let _ = writeln!(
        out,
        "ok: {} rings, {} ideals, {} modules, {} submodules, {} homs, {} sets",
        ws.rings.len(),
        ws.ideals.len(),
        ws.modules.len(),
        ws.submodules.len(),
        ws.homs.len(),
        ws.sets.len()
    );
    if let Some(path) = export {
        write_file(path, &ws.export().to_json())?;
    }
    Ok(EXIT_OK)
}

/// The fixed column order of classification tables.
pub const COLUMNS: [&str; 9] = [
    "submodule",
    "popcount",
    "prime",
    "classical_prime",
    "semiprime",
    "1abs_prime",
    "classical_1abs_prime",
    "classical_2abs",
    "witness",
];

/// One classified row, or the reason it was skipped.
#[derive(Debug, Clone)]
pub struct Row {
    pub id: String,
    pub popcount: usize,
    pub result: Result<ClassReport, String>,
}

/// Triples visited by the slowest predicate (all of `A³`) times `|M|`.
fn classify_work(m: &FiniteModule) -> u64 {
    let n = m.ring().size() as u64;
    n.saturating_pow(3).saturating_mul(m.size() as u64)
}

fn classify_row(id: String, p: &Submodule, caps: &Caps) -> Row {
    let work = classify_work(p.module());
    let result = if work > caps.sweep_work {
        Err(format!("skipped: work {work} exceeds sweep_work {}", caps.sweep_work))
    } else {
        ClassReport::new(p).map_err(|e| e.to_string())
    };
    Row {
        id,
        popcount: p.len(),
        result,
    }
}

fn witnesses(r: &ClassReport, module: &FiniteModule) -> Vec<(String, String)> {
    Class::ALL
        .iter()
        .filter_map(|&c| r.witness(c).map(|w| (c.column().to_string(), w.render(module))))
        .collect()
}

/// Renders rows as a fixed-width table in [`COLUMNS`] order.
pub fn render_table(rows: &[Row], module: &FiniteModule) -> String {
    let mut cells: Vec<Vec<String>> = vec![COLUMNS.iter().map(|s| s.to_string()).collect()];
    for row in rows {
        let mut line = vec![row.id.clone(), row.popcount.to_string()];
        match &row.result {
            Ok(r) => {
                line.extend(Class::ALL.iter().map(|&c| r.holds(c).to_string()));
                let w: Vec<String> = witnesses(r, module)
                    .into_iter()
                    .map(|(c, w)| format!("{c} {w}"))
                    .collect();
                line.push(w.join("; "));
            }
            Err(reason) => {
                line.extend(Class::ALL.iter().map(|_| "-".to_string()));
                line.push(reason.clone());
            }
        }
        cells.push(line);
    }
    let widths: Vec<usize> = (0..COLUMNS.len() - 1)
        .map(|j| cells.iter().map(|l| l[j].chars().count()).max().unwrap_or(0))
        .collect();
    let mut s = String::new();
    for line in &cells {
        let mut text = String::new();
        for (j, cell) in line.iter().enumerate() {
            if j + 1 < line.len() {
                text.push_str(&format!("{cell:<w$}  ", w = widths[j]));
            } else {
                text.push_str(cell);
            }
        }
        s.push_str(text.trim_end());
        s.push('\n');
    }
    s
}

/// Rows as JSON with sorted keys.
pub fn rows_json(rows: &[Row], module: &FiniteModule) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| match &row.result {
                Ok(r) => {
                    let flags: serde_json::Map<String, Value> = Class::ALL
                        .iter()
                        .map(|&c| (c.column().to_string(), Value::Bool(r.holds(c))))
                        .collect();
                    let w: serde_json::Map<String, Value> = witnesses(r, module)
                        .into_iter()
                        .map(|(c, w)| (c, Value::String(w)))
                        .collect();
                    json!({"submodule": row.id, "popcount": row.popcount, "flags": flags, "witnesses": w})
                }
                Err(reason) => json!({"submodule": row.id, "popcount": row.popcount, "skipped": reason}),
            })
            .collect(),
    )
}

#[allow(clippy::too_many_arguments)]
fn classify(
    file: &Path,
    module: &str,
    submodule: Option<&str>,
    as_json: bool,
    set: Option<&str>,
    cap_args: &CapArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let caps = cap_args.apply(Caps::default(), err);
    let ws = load(file, &caps)?;
    let m = ws
        .modules
        .get(module)
        .ok_or_else(|| usage(format!("unknown module `{module}`")))?;
    let rows = match submodule {
        Some(name) => {
            let p = ws
                .submodules
                .get(name)
                .ok_or_else(|| usage(format!("unknown submodule `{name}`")))?;
            if p.module() != m {
                return Err(usage(format!("submodule `{name}` does not belong to `{module}`")));
            }
            if !p.is_proper() {
                return Err(usage(Error::ImproperArgument("submodule").to_string()));
            }
            vec![classify_row(name.to_string(), p, &caps)]
        }
        None => {
            if m.size() > caps.max_module {
                return Err((
                    EXIT_FAILURE,
                    Error::TooLarge {
                        what: "module",
                        size: m.size(),
                        cap: caps.max_module,
                    }
                    .to_string(),
                ));
            }
            let lattice = m
                .all_submodules_capped(caps.max_module, caps.max_submodules)
                .map_err(|e| (EXIT_FAILURE, e.to_string()))?;
            lattice
                .iter()
                .filter(|p| p.is_proper())
                .map(|p| {
                    let id = ws
                        .submodules
                        .iter()
                        .find(|(_, s)| s.module() == m && s.members() == p.members())
                        .map_or_else(|| p.short_name(), |(n, _)| n.clone());
                    classify_row(id, p, &caps)
                })
                .collect()
        }
    };
    let set_report = match set {
        Some(name) => Some(set_query(&ws, m, name)?),
        None => None,
    };
    if as_json {
        let mut v = json!({"module": module, "rows": rows_json(&rows, m)});
        if let Some(s) = &set_report {
            v["set"] = s.clone();
        }
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        let _ = write!(out, "{}", render_table(&rows, m));
        if let Some(s) = &set_report {
            let _ = writeln!(
                out,
                "set {}: m-closed {}",
                s["name"].as_str().unwrap_or(""),
                s["m_closed"]
            );
            if let Some(w) = s.get("witness") {
                let _ = writeln!(out, "  witness {}", w.as_str().unwrap_or(""));
            }
            for d in s["maximal_disjoint"].as_array().into_iter().flatten() {
                let _ = writeln!(
                    out,
                    "  maximal disjoint {} classical_1abs_prime {}",
                    d["submodule"].as_str().unwrap_or(""),
                    d["classical_1abs_prime"]
                );
            }
        }
    }
    Ok(EXIT_OK)
}

fn set_query(ws: &Workspace, m: &Arc<FiniteModule>, name: &str) -> Result<Value, (i32, String)> {
    let (owner, s) = ws
        .sets
        .get(name)
        .ok_or_else(|| usage(format!("unknown set `{name}`")))?;
    if owner != m {
        return Err(usage(format!("set `{name}` does not belong to this module")));
    }
    let fail = |e: Error| (EXIT_FAILURE, e.to_string());
    let d = is_c1ap_m_closed(m, s).map_err(fail)?;
    let mut maximal = Vec::new();
    for p in maximal_disjoint_submodules(m, s).map_err(fail)? {
        let c1 = if p.is_proper() {
            Value::Bool(Class::ClassicalOneAbsorbingPrime.decide(&p).map_err(fail)?.holds())
        } else {
            Value::Null
        };
        maximal.push(json!({"submodule": p.short_name(), "classical_1abs_prime": c1}));
    }
    let mut v = json!({"name": name, "m_closed": d.holds(), "maximal_disjoint": maximal});
    if let Some(w) = d.witness() {
        v["witness"] = Value::String(w.to_string());
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    config: Option<&Path>,
    default_corpus: bool,
    theorems: &[String],
    report_path: Option<&Path>,
    timings_path: Option<&Path>,
    details: bool,
    cap_args: &CapArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let mut cfg = match (config, default_corpus) {
        (Some(_), true) => return Err(usage("give either a config file or --default-corpus, not both")),
        (None, false) => return Err(usage("give a config file or --default-corpus")),
        (None, true) => CorpusConfig::default(),
        (Some(path), false) => serde_json::from_str::<CorpusConfig>(&read(path)?)
            .map_err(|e| usage(format!("parse error at line {}, column {}: {e}", e.line(), e.column())))?,
    };
    if !theorems.is_empty() {
        cfg.theorems = theorems.to_vec();
    }
    cfg.caps = cap_args.apply(cfg.caps, err);
    lab::select(&cfg.theorems).map_err(|e| usage(e.to_string()))?;
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let report = lab::run_suite(&cfg).map_err(|e| (EXIT_FAILURE, e.to_string()))?;
    let _ = write!(out, "{}", report.table());
    for v in &report.verdicts {
        if details || v.is_failure() {
            let status = if v.is_holds() {
                "holds".to_string()
            } else if let Some(cx) = v.counterexample() {
                match &cx.rendered {
                    Some(r) => format!("FAILS {} {r}", cx.summary),
                    None => format!("FAILS {}", cx.summary),
                }
            } else {
                "skipped".to_string()
            };
            let note = v.note.as_deref().map(|n| format!(" [{n}]")).unwrap_or_default();
            let _ = writeln!(out, "{} {}: {status}{note}", v.theorem, v.instance);
        }
    }
    if let Some(path) = report_path {
        write_file(path, &report.to_json())?;
    }
    if let Some(path) = timings_path {
        write_file(path, &report.timings_json())?;
    }
    Ok(if report.failures() == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn amalgamate(
    file: &Path,
    module: &str,
    ideal: &str,
    with_classes: bool,
    cap_args: &CapArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let caps = cap_args.apply(Caps::default(), err);
    let ws = load(file, &caps)?;
    let m = ws
        .modules
        .get(module)
        .ok_or_else(|| usage(format!("unknown module `{module}`")))?;
    let i = ws
        .ideals
        .get(ideal)
        .ok_or_else(|| usage(format!("unknown ideal `{ideal}`")))?;
    if i.ring() != m.ring() {
        return Err(usage(format!(
            "ideal `{ideal}` is not an ideal of the ring of `{module}`"
        )));
    }
    let am = AmalgamModule::with_cap(m, i, caps.max_amalgam_module).map_err(|e| (EXIT_FAILURE, e.to_string()))?;
    let _ = writeln!(out, "|A⋈I| = {}", am.amalgam_ring().ring().size());
    let _ = writeln!(out, "|M⋈I| = {}", am.module().size());
    if !with_classes {
        return Ok(EXIT_OK);
    }
    let lattice = m
        .all_submodules_capped(caps.max_module, caps.max_submodules)
        .map_err(|e| (EXIT_FAILURE, e.to_string()))?;
    let mut header: Vec<String> = vec!["submodule".into(), "lifted".into()];
    header.extend(Class::ALL.iter().map(|c| c.column().to_string()));
    header.push("transfer".into());
    let mut cells = vec![header];
    let mut all_equal = true;
    for p in lattice.iter().filter(|p| p.is_proper()) {
        let lifted = am.submodule(p).map_err(|e| (EXIT_FAILURE, e.to_string()))?;
        let a = ClassReport::new(p).map_err(|e| (EXIT_FAILURE, e.to_string()))?;
        let b = ClassReport::new(&lifted).map_err(|e| (EXIT_FAILURE, e.to_string()))?;
        let mut line = vec![p.short_name(), lifted.short_name()];
        line.extend(Class::ALL.iter().map(|&c| format!("{}/{}", a.holds(c), b.holds(c))));
        let same = [
            Class::ClassicalPrime,
            Class::ClassicalOneAbsorbingPrime,
            Class::ClassicalTwoAbsorbing,
        ]
        .iter()
        .all(|&c| a.holds(c) == b.holds(c));
        all_equal &= same;
        line.push(if same { "equal" } else { "DIFFERS" }.to_string());
        cells.push(line);
    }
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|j| cells.iter().map(|l| l[j].chars().count()).max().unwrap_or(0))
        .collect();
    for line in &cells {
        let s: Vec<String> = line
            .iter()
            .enumerate()
            .map(|(j, c)| format!("{c:<w$}", w = widths[j]))
            .collect();
        let _ = writeln!(out, "{}", s.join("  ").trim_end());
    }
    Ok(if all_equal { EXIT_OK } else { EXIT_FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/basic.json");

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("c1abs").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn validate_reports_counts() {
        let (code, out, _) = call(&["validate", BASIC]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("ok: 6 rings"), "{out}");
        let (code, _, err) = call(&["validate", "/nonexistent.json"]);
        assert_eq!(code, EXIT_USAGE, "{err}");
    }

    #[test]
    fn classify_rows_and_errors() {
        let (code, out, _) = call(&["classify", BASIC, "M8"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 4);
        let (code, out, _) = call(&["classify", BASIC, "M4", "zero4", "--json"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rows"][0]["flags"]["classical_1abs_prime"], true);
        assert_eq!(v["rows"][0]["witnesses"]["classical_prime"], "(2,2;1)");
        let (code, _, err) = call(&["classify", BASIC, "M8", "whole8"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("proper submodule required"));
        assert_eq!(call(&["classify", BASIC, "nope"]).0, EXIT_USAGE);
    }

    #[test]
    fn verify_argument_rules() {
        assert_eq!(call(&["verify"]).0, EXIT_USAGE);
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        std::fs::write(&cfg, r#"{"zmods": [4, 6], "recipes": {"fixtures": false}}"#).unwrap();
        let cfg = cfg.to_str().unwrap();
        assert_eq!(call(&["verify", cfg, "--default-corpus"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", cfg, "--theorems", "bogus"]).0, EXIT_USAGE);
        let report = dir.path().join("r.json");
        let (code, out, _) = call(&[
            "verify",
            cfg,
            "--theorems",
            "p1,tmain",
            "--out",
            report.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK, "{out}");
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
        assert_eq!(v["summary"]["failures"], 0);
        assert_eq!(v["theorem_order"], serde_json::json!(["p1", "tmain"]));
    }

    #[test]
    fn amalgamate_compares_classifications() {
        let (code, out, _) = call(&["amalgamate", BASIC, "M4", "two", "--classify"]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("|A⋈I| = 8") && out.contains("|M⋈I| = 8"));
        assert!(!out.contains("DIFFERS"));
    }

    #[test]
    fn bad_usage_is_exit_two() {
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }
}
