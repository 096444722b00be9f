//! The `lda` command line: argument parsing, dispatch, and report output.
//!
//! Exit codes: 0 all checks pass, 1 some check failed, 2 usage or input
//! error, 3 a table or grid budget was exceeded.

pub mod suite;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use lda_core::construction::{audit_grid, run_grid, GridConfig, GridError, COLUMNS};
use lda_core::critcalc::{parse_ord, parse_scripts, CalcError, Corpus, Session, MAIN_CHAIN, TAIL_CHAIN};
use lda_core::growth::{parse_bound, Growth, GrowthError, DEFAULT_BUDGET_BITS};
use lda_core::laver::{
    build_table, CritIndex, LaverError, TableConfig, TableSet,
};
use lda_core::report::{Record, Report, Status};
use lda_core::term::{parse_term, NameTable, Term, TermError};
use serde_json::json;
use thiserror::Error;

use suite::SuiteConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Laver(#[from] LaverError),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Laver(LaverError::BudgetExceeded { .. } | LaverError::CapExceeded { .. })
            | CliError::Calc(CalcError::Laver(
                LaverError::BudgetExceeded { .. } | LaverError::CapExceeded { .. },
            ))
            | CliError::Grid(GridError::Budget { .. }) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lda", version, about = "Laver tables, critical-point scripts and growth bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    /// Deepest table consulted.
    #[arg(long, global = true)]
    pub max_n: Option<u32>,
    /// Column caps for the grid: twelve comma-separated values, or one for all.
    #[arg(long, global = true, value_parser = parse_caps)]
    pub caps: Option<Caps>,
    /// Bit budget for exact growth values.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET_BITS)]
    pub budget_bits: u64,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Read the script corpus from this directory instead of the bundled copy.
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
    /// Zero the timestamp and runtimes in the JSON report.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps(pub [usize; COLUMNS]);

fn parse_caps(s: &str) -> Result<Caps, String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    match v.len() {
        1 => Ok(Caps([v[0]; COLUMNS])),
        COLUMNS => Ok(Caps(v.try_into().expect("length checked"))),
        k => Err(format!("expected 1 or {COLUMNS} caps, got {k}")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Print the rows of A_n, or check it with --verify.
    Table {
        n: u32,
        #[arg(long)]
        verify: bool,
        /// Random triples when A_n is too large for an exhaustive check.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Image of a term in A_n.
    Eval {
        term: String,
        #[arg(long)]
        n: u32,
    },
    /// Critical-point index of a term.
    Crit { term: String },
    /// First table in which two terms have different images.
    Compare { t1: String, t2: String },
    /// Check proof scripts, after the corpus files they depend on.
    Check {
        #[arg(required = true)]
        scripts: Vec<PathBuf>,
    },
    /// Order matrix of ordinals from the checked corpus; the printed chains by default.
    Order {
        ordinals: Vec<String>,
        /// Also use claimed facts.
        #[arg(long)]
        include_claimed: bool,
    },
    /// Evaluate one growth expression, or compare two.
    Growth {
        #[arg(num_args = 1..=2, required = true)]
        exprs: Vec<String>,
    },
    /// Run the column construction and audit it.
    Grid {
        /// Print the grid as JSON.
        #[arg(long)]
        dump: bool,
    },
    /// Run the full verification suite.
    VerifyAll {
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
}

/// Parses `args` (program name first), runs the command, writes its text
/// output to `out`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(io::stderr(), "{e}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(report) => {
            if let Some(path) = &cli.json {
                let r = if cli.no_timing { report.canonical() } else { report.clone() };
                if let Err(e) = std::fs::write(path, r.to_json() + "\n") {
                    let _ = writeln!(io::stderr(), "lda: {}: {e}", path.display());
                    return 2;
                }
            }
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(io::stderr(), "lda: {e}");
            e.exit_code()
        }
    }
}

fn term(text: &str) -> Result<Term, CliError> {
    Ok(parse_term(text, &NameTable::prelude())?)
}

fn corpus(cli: &Cli) -> Result<Corpus, CliError> {
    match &cli.corpus {
        Some(dir) => Ok(Corpus::from_dir(dir)?),
        None => Ok(Corpus::bundled()),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Report, CliError> {
    let max_n = cli.max_n.unwrap_or(8);
    let tables = || TableSet::new(TableConfig::stretch(TableConfig::default().budget_bytes));
    match &cli.cmd {
        Cmd::Table { n, verify, samples } => {
            let stretch = TableConfig::stretch(TableConfig::default().budget_bytes);
            let t = build_table(*n, &stretch)?;
            if !verify {
                for a in 1..=t.size() {
                    let row = t.row(a)?;
                    let cells: Vec<String> = row.iter().map(u32::to_string).collect();
                    emit(out, format!("{a}: {}", cells.join(" ")))?;
                }
                let rec = Record::new(format!("table.A{n:02}"), Status::Pass, json!({ "size": t.size() }));
                return Ok(Report::new("table", vec![rec]));
            }
            let mut recs = vec![suite::ld_record(&t, *samples, cli.seed)];
            if *n > 0 {
                recs.push(suite::projection_record(&build_table(n - 1, &stretch)?, &t));
            }
            for r in &recs {
                emit(out, format!("{:<8} {}  {}", r.status.as_str(), r.id, r.witness))?;
            }
            Ok(Report::new("table", recs))
        }
        Cmd::Eval { term: t, n } => {
            let x = term(t)?;
            let v = tables().eval(&x, *n)?;
            emit(out, v)?;
            let rec = Record::new("eval", Status::Pass, json!({ "term": t, "n": n, "value": v }));
            Ok(Report::new("eval", vec![rec]))
        }
        Cmd::Crit { term: t } => {
            let c = tables().crit_index(&term(t)?, max_n)?;
            emit(out, c)?;
            let rec = Record::new(
                "crit",
                Status::Pass,
                json!({ "term": t, "max_n": max_n, "crit": c.to_string(), "index": c.exact() }),
            );
            Ok(Report::new("crit", vec![rec]))
        }
        Cmd::Compare { t1, t2 } => {
            let r = tables().equiv_index(&term(t1)?, &term(t2)?, max_n)?;
            let text = match r {
                CritIndex::AtLeast(_) => format!("equal images through A_{max_n}"),
                CritIndex::Exactly(n) => format!("images differ in A_{n}"),
            };
            emit(out, &text)?;
            let rec = Record::new("compare", Status::Pass, json!({ "t1": t1, "t2": t2, "result": text }));
            Ok(Report::new("compare", vec![rec]))
        }
        Cmd::Check { scripts } => check(cli, scripts, out),
        Cmd::Order { ordinals, include_claimed } => order(cli, ordinals, *include_claimed, out),
        Cmd::Growth { exprs } => {
            let g = Growth::new(cli.budget_bits);
            let es = exprs.iter().map(|e| parse_bound(e)).collect::<Result<Vec<_>, _>>()?;
            let rec = if let [e] = &es[..] {
                let v = g.eval(e)?;
                emit(out, &v)?;
                Record::new("growth.eval", Status::Pass, json!({ "expr": e.to_string(), "value": v.to_string() }))
            } else {
                let v = g.compare(&es[0], &es[1]);
                emit(out, format!("{:?}", v.kind))?;
                for line in &v.trace {
                    emit(out, format!("  {line}"))?;
                }
                Record::new(
                    "growth.compare",
                    Status::Pass,
                    json!({ "lhs": es[0].to_string(), "rhs": es[1].to_string(), "verdict": v.kind, "trace": v.trace }),
                )
            };
            Ok(Report::new("growth", vec![rec]))
        }
        Cmd::Grid { dump } => {
            let caps = cli.caps.map_or([3; COLUMNS], |c| c.0);
            let st = run_grid(GridConfig::with_caps(caps))?;
            if *dump {
                emit(out, serde_json::to_string_pretty(&st.dump_json()).expect("json"))?;
            }
            let audit = audit_grid(&st, &tables(), max_n)?;
            for n in 0..COLUMNS {
                emit(out, format!("column {n:2}: {} entries", st.len(n)))?;
            }
            for f in audit.failures() {
                emit(out, format!("FAIL {f}"))?;
            }
            emit(out, if audit.passed() { "audit: pass" } else { "audit: fail" })?;
            let rec = Record::new(
                "grid.audit",
                Status::from_ok(audit.passed()),
                json!({ "caps": caps, "failures": audit.failures() }),
            );
            Ok(Report::new("grid", vec![rec]))
        }
        Cmd::VerifyAll { samples } => {
            let mut cfg = SuiteConfig {
                seed: cli.seed,
                samples: *samples,
                budget_bits: cli.budget_bits,
                corpus: corpus(cli)?,
                ..SuiteConfig::default()
            };
            if let Some(n) = cli.max_n {
                cfg.max_n = n;
            }
            if let Some(c) = cli.caps {
                cfg.caps = c.0;
            }
            let report = suite::verify_all(&cfg);
            for r in &report.records {
                emit(out, format!("{:<8} {}  ({:.1} ms)", r.status.as_str(), r.id, r.runtime_ms))?;
            }
            let c = report.counts;
            emit(
                out,
                format!("{} pass, {} fail, {} claimed, {} skipped", c.pass, c.fail, c.claimed, c.skipped),
            )?;
            for r in report.claimed() {
                emit(out, format!("claimed: {}", r.id))?;
            }
            Ok(report)
        }
    }
}

/// The corpus file a path names, matched on its trailing components.
fn corpus_name<'c>(corpus: &'c Corpus, path: &Path) -> Option<&'c str> {
    let p = path.to_string_lossy().replace('\\', "/");
    corpus
        .files
        .iter()
        .map(|(n, _)| n.as_str())
        .find(|n| p == *n || p.ends_with(&format!("/{n}")))
}

fn check(cli: &Cli, paths: &[PathBuf], out: &mut dyn Write) -> Result<Report, CliError> {
    // Each given file replaces its corpus namesake; other files run after the
    // whole corpus. Nothing past the last given file is loaded.
    let base = corpus(cli)?;
    let mut plan: Vec<(String, String, bool)> =
        base.files.iter().map(|(n, t)| (n.clone(), t.clone(), false)).collect();
    for p in paths {
        let text = read(p)?;
        match corpus_name(&base, p) {
            Some(n) => {
                let slot = plan.iter_mut().find(|f| f.0 == n).expect("named file");
                slot.1 = text;
                slot.2 = true;
            }
            None => plan.push((p.display().to_string(), text, true)),
        }
    }
    let last = plan.iter().rposition(|f| f.2).expect("at least one script");
    plan.truncate(last + 1);

    let mut session = Session::new();
    let mut records = Vec::new();
    for (name, text, shown) in &plan {
        let scripts = match parse_scripts(text, session.names()) {
            Ok(s) => s,
            Err(e) => {
                emit(out, format!("FAIL {name}: {e}"))?;
                records.push(Record::new(format!("check.{name}"), Status::Fail, json!({ "error": e.to_string() })));
                break;
            }
        };
        let mut failed = false;
        for sc in &scripts {
            match session.check_script(sc) {
                Ok(rep) => {
                    if !shown {
                        continue;
                    }
                    emit(out, format!("script {}", rep.name))?;
                    for t in &rep.trace {
                        emit(out, format!("  {:<8} {:<8} {:<14} {}", t.status, t.id, t.by, t.relation))?;
                    }
                    for g in &rep.goals {
                        emit(out, format!("goal {}: {} [{}]", g.id, g.relation, g.status))?;
                    }
                    let claimed = rep.goals.iter().any(|g| g.status == "claimed");
                    let mut rec = Record::new(
                        format!("check.{}", rep.name),
                        if claimed { Status::Claimed } else { Status::Pass },
                        json!({ "file": name, "trace": rep.trace, "goals": rep.goals }),
                    );
                    rec.runtime_ms = rep.runtime_ms;
                    records.push(rec);
                }
                Err(e) => {
                    emit(out, format!("FAIL {}: {e}", sc.name))?;
                    records.push(Record::new(
                        format!("check.{}", sc.name),
                        Status::Fail,
                        json!({ "file": name, "error": e.to_string() }),
                    ));
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            break;
        }
    }
    Ok(Report::new("check", records))
}

fn order(cli: &Cli, ordinals: &[String], include_claimed: bool, out: &mut dyn Write) -> Result<Report, CliError> {
    let (session, _) = lda_core::critcalc::load_corpus(&corpus(cli)?)?;
    let lists: Vec<(String, Vec<String>)> = if ordinals.is_empty() {
        vec![
            ("main".into(), MAIN_CHAIN.iter().map(|s| s.to_string()).collect()),
            ("tail".into(), TAIL_CHAIN.iter().map(|s| s.to_string()).collect()),
        ]
    } else {
        vec![("given".into(), ordinals.to_vec())]
    };
    let mut records = Vec::new();
    for (name, list) in lists {
        let ords = list
            .iter()
            .map(|t| parse_ord(t, session.names()).map_err(|e| CliError::Usage(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let m = session.derive_order(&ords, include_claimed);
        let width = list.iter().map(String::len).max().unwrap_or(0);
        emit(out, format!("{name}:"))?;
        for (i, row) in m.cells.iter().enumerate() {
            let cells: Vec<&str> = row.iter().map(|c| c.symbol()).collect();
            emit(out, format!("  {:<width$}  {}", list[i], cells.join(" ")))?;
        }
        emit(out, format!("  strict chain: {}, unknown pairs: {}", m.is_strict_chain(), m.unknown_pairs()))?;
        let status = if name == "given" || m.is_strict_chain() { Status::Pass } else { Status::Fail };
        records.push(Record::new(format!("order.{name}"), status, json!(m)));
    }
    Ok(Report::new("order", records))
}
