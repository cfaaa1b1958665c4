//! The `kllab` command line.

use std::ffi::OsString;
use std::io::Write;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterMatrix, ElementId, GeneratorSet, GroupTable, DEFAULT_MAX_ELEMENTS};
use crate::error::{Error, Result};
use crate::hecke::{BarTable, KlTable};
use crate::laurent::LaurentPoly;
use crate::parabolic::{Flavor, ParabolicContext, ParabolicKlTable};
use crate::verify::{self, CheckRecord, Expectation, SuiteConfig, SuiteReport};

pub const MAX_ELEMENTS_VAR: &str = "KLLAB_MAX_ELEMENTS";

#[derive(Parser, Debug)]
#[command(
    name = "kllab",
    version,
    about = "Kazhdan-Lusztig polynomials and monotonicity checks for Coxeter groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Group spec: A3, B4, D5, E6, F4, G2, H3, I2(5), I2(inf), Aff-A2, file:PATH.
    #[arg(long, global = true)]
    pub group: Option<String>,

    /// Parabolic subset as 1-based generators, e.g. "1,3". Empty or "none"
    /// is the empty set. Repeat for several subsets.
    #[arg(long, global = true)]
    pub parabolic: Vec<String>,

    /// Largest element length to enumerate. Required for infinite groups.
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = FlavorArg::Antispherical)]
    pub flavor: FlavorArg,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,

    /// Worker threads for scans and suites.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Treat violations as expected rather than as failures. Defaults to
    /// true for the spherical scan.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub expect_violations: Option<bool>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group order and length distribution.
    Info,
    /// Kazhdan-Lusztig polynomials h_{y,x}.
    Kl {
        /// Emit the nonzero mu(y,x) instead.
        #[arg(long)]
        mu: bool,
    },
    /// Inverse Kazhdan-Lusztig polynomials h^{y,x}.
    Invkl,
    /// Parabolic polynomials for one subset.
    Parabolic {
        /// Emit the inverse family.
        #[arg(long)]
        inverse: bool,
    },
    /// Graded multiplicities of Rouquier complexes.
    Rouquier {
        /// One element as a comma separated word; all elements if omitted.
        #[arg(long)]
        element: Option<String>,
    },
    /// One monotonicity scan.
    Scan {
        #[arg(long, value_enum)]
        name: ScanName,
    },
    /// Every identity check and every scan.
    Suite,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlavorArg {
    Spherical,
    Antispherical,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Spherical => Flavor::Spherical,
            FlavorArg::Antispherical => Flavor::Antispherical,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanName {
    Inverse,
    Classical,
    Antispherical,
    Spherical,
}

/// Group summary as emitted by `info`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInfo {
    pub group: String,
    pub rank: usize,
    pub finite: bool,
    pub cap: Option<usize>,
    pub elements: usize,
    pub longest_length: usize,
    pub length_counts: Vec<usize>,
}

/// A polynomial table as emitted by `kl`, `invkl` and `parabolic`.
/// Entries are keyed `"y|x"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTable {
    pub group: String,
    pub table: String,
    #[serde(rename = "I", default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavor: Option<Flavor>,
    pub cap: Option<usize>,
    pub entries: IndexMap<String, LaurentPoly>,
}

/// `μ(y,x)` values as emitted by `kl --mu`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuTable {
    pub group: String,
    pub cap: Option<usize>,
    pub mu: IndexMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouquierEntry {
    pub y: String,
    pub degree: i32,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouquierRecord {
    pub x: String,
    pub entries: Vec<RouquierEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouquierReport {
    pub group: String,
    pub cap: Option<usize>,
    pub complexes: Vec<RouquierRecord>,
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(Outcome { text, success }) => {
            if let Err(e) = emit(&cli, &text) {
                report_error(&cli, &e);
                return 1;
            }
            if success {
                0
            } else {
                1
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            report_error(&cli, &e);
            1
        }
    }
}

fn report_error(cli: &Cli, e: &Error) {
    if cli.format == Format::Json {
        eprintln!("{}", serde_json::json!({ "error": e.to_string() }));
    } else {
        eprintln!("error: {e}");
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

struct Outcome {
    text: String,
    success: bool,
}

fn ok(text: String) -> std::result::Result<Outcome, Failure> {
    Ok(Outcome { text, success: true })
}

fn max_elements() -> std::result::Result<usize, Failure> {
    match std::env::var(MAX_ELEMENTS_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{MAX_ELEMENTS_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_ELEMENTS),
    }
}

fn execute(cli: &Cli) -> std::result::Result<Outcome, Failure> {
    let Some(spec) = cli.group.clone() else {
        return Err(Failure::Usage("--group is required".into()));
    };
    let limit = max_elements()?;
    let matrix = CoxeterMatrix::parse_spec(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
    let subsets = cli
        .parabolic
        .iter()
        .map(|p| GeneratorSet::parse(p, matrix.rank()))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
    }
    let work = || -> std::result::Result<Outcome, Failure> {
        if let Command::Suite = cli.command {
            let subsets = if cli.parabolic.is_empty() {
                GeneratorSet::all_subsets(matrix.rank())
            } else {
                subsets.clone()
            };
            let mut config = SuiteConfig::new(spec.clone()).subsets(subsets).cap(cli.cap);
            config.max_elements = limit;
            let report = verify::run_suite(&config);
            let success = report.passed;
            return Ok(Outcome {
                text: render_report(cli.format, &report)?,
                success,
            });
        }
        let group = Arc::new(GroupTable::enumerate_with_limit(matrix.clone(), cli.cap, limit)?);
        match &cli.command {
            Command::Info => ok(info(cli.format, &spec, &group)?),
            Command::Kl { mu } => {
                let kl = KlTable::build(group.clone())?;
                if *mu {
                    ok(render_mu(cli.format, &spec, &kl)?)
                } else {
                    let table = classical_table(&spec, &kl, false);
                    ok(render_table(cli.format, &table)?)
                }
            }
            Command::Invkl => {
                let kl = KlTable::build(group.clone())?;
                ok(render_table(cli.format, &classical_table(&spec, &kl, true))?)
            }
            Command::Parabolic { inverse } => {
                if subsets.len() > 1 {
                    return Err(Failure::Usage("parabolic takes a single --parabolic subset".into()));
                }
                let subset = subsets.first().copied().unwrap_or_default();
                let bars = BarTable::build(group.clone())?;
                let ctx = ParabolicContext::new(group.clone(), subset, cli.flavor.into())?;
                let table = ParabolicKlTable::build(ctx, &bars)?;
                ok(render_table(cli.format, &parabolic_table(&spec, &table, *inverse)?)?)
            }
            Command::Rouquier { element } => {
                let kl = KlTable::build(group.clone())?;
                let xs: Vec<ElementId> = match element {
                    Some(w) => vec![group.parse_element(w).map_err(|e| Failure::Usage(e.to_string()))?],
                    None => group.elements().collect(),
                };
                ok(render_rouquier(cli.format, &spec, &kl, &xs)?)
            }
            Command::Scan { name } => scan(cli, &spec, group, &subsets, *name),
            Command::Suite => unreachable!(),
        }
    };
    match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Compute(Error::Io(e.to_string())))?
            .install(work),
        None => work(),
    }
}

fn info(format: Format, spec: &str, g: &GroupTable) -> Result<String> {
    let info = GroupInfo {
        group: spec.to_string(),
        rank: g.rank(),
        finite: g.matrix().is_finite(),
        cap: g.cap(),
        elements: g.len(),
        longest_length: g.max_length(),
        length_counts: g.length_counts(),
    };
    Ok(match format {
        Format::Json => to_json(&info)?,
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["length", "count"]).map_err(csv_err)?;
            for (l, c) in info.length_counts.iter().enumerate() {
                w.write_record([l.to_string(), c.to_string()]).map_err(csv_err)?;
            }
            csv_finish(w)?
        }
        Format::Text => {
            let counts = info
                .length_counts
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            let head = if g.is_complete() {
                format!("order {}, longest length {}", info.elements, info.longest_length)
            } else {
                format!(
                    "infinite group, {} elements up to length {}",
                    info.elements, info.longest_length
                )
            };
            format!("{head}\nrank {}\nelements by length: {counts}\n", info.rank)
        }
    })
}

fn pair_key(g: &GroupTable, y: ElementId, x: ElementId) -> String {
    format!("{}|{}", g.display(y), g.display(x))
}

/// Every comparable pair `y ≤ x`, ordered by `x` then `y`.
fn classical_table(spec: &str, kl: &KlTable, inverse: bool) -> PolyTable {
    let g = kl.group();
    let mut entries = IndexMap::new();
    for x in g.elements() {
        for y in g.lower_interval(x) {
            let p = if inverse {
                kl.inverse_kl_poly(y, x)
            } else {
                kl.kl_poly(y, x)
            };
            entries.insert(pair_key(g, y, x), p);
        }
    }
    PolyTable {
        group: spec.to_string(),
        table: if inverse { "invkl" } else { "kl" }.to_string(),
        subset: None,
        flavor: None,
        cap: g.cap(),
        entries,
    }
}

fn parabolic_table(spec: &str, table: &ParabolicKlTable, inverse: bool) -> Result<PolyTable> {
    let ctx = table.context();
    let g = ctx.group();
    let mut entries = IndexMap::new();
    for &x in ctx.reps() {
        for &y in ctx.reps().iter().filter(|&&y| g.bruhat_leq(y, x)) {
            let p = if inverse {
                table.parabolic_inverse_kl_poly(y, x)?
            } else {
                table.parabolic_kl_poly(y, x)?
            };
            entries.insert(pair_key(g, y, x), p);
        }
    }
    let name = match (ctx.flavor(), inverse) {
        (Flavor::Spherical, false) => "m",
        (Flavor::Spherical, true) => "m-inverse",
        (Flavor::Antispherical, false) => "n",
        (Flavor::Antispherical, true) => "n-inverse",
    };
    Ok(PolyTable {
        group: spec.to_string(),
        table: name.to_string(),
        subset: Some(ctx.subset().to_one_based()),
        flavor: Some(ctx.flavor()),
        cap: g.cap(),
        entries,
    })
}

fn split_key(key: &str) -> (&str, &str) {
    key.split_once('|').unwrap_or((key, ""))
}

fn word_length(word: &str) -> usize {
    if word == "e" {
        0
    } else {
        word.split(',').count()
    }
}

fn subset_text(s: &[usize]) -> String {
    format!("[{}]", s.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(","))
}

fn render_table(format: Format, t: &PolyTable) -> Result<String> {
    Ok(match format {
        Format::Json => to_json(t)?,
        Format::Csv => {
            let mut w = csv_writer();
            let mut header = vec!["y", "x", "len_y", "len_x", "poly"];
            if t.flavor.is_some() {
                header.splice(0..0, ["flavor", "I"]);
            }
            w.write_record(&header).map_err(csv_err)?;
            for (key, p) in &t.entries {
                let (y, x) = split_key(key);
                let mut row = vec![
                    y.to_string(),
                    x.to_string(),
                    word_length(y).to_string(),
                    word_length(x).to_string(),
                    p.to_term_string(),
                ];
                if let (Some(f), Some(s)) = (t.flavor, &t.subset) {
                    row.splice(0..0, [f.to_string(), subset_text(s)]);
                }
                w.write_record(&row).map_err(csv_err)?;
            }
            csv_finish(w)?
        }
        Format::Text => {
            let mut out = format!("# {} {}", t.table, t.group);
            if let (Some(f), Some(s)) = (t.flavor, &t.subset) {
                out.push_str(&format!(" I={} {f}", subset_text(s)));
            }
            out.push('\n');
            for (key, p) in &t.entries {
                let (y, x) = split_key(key);
                out.push_str(&format!("{y:>12}  {x:>12}  {p}\n"));
            }
            out
        }
    })
}

fn render_mu(format: Format, spec: &str, kl: &KlTable) -> Result<String> {
    let g = kl.group();
    let mut mu = IndexMap::new();
    for x in g.elements() {
        for &(y, m) in kl.mu_column(x) {
            mu.insert(pair_key(g, y, x), m);
        }
    }
    let table = MuTable {
        group: spec.to_string(),
        cap: g.cap(),
        mu,
    };
    Ok(match format {
        Format::Json => to_json(&table)?,
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["y", "x", "len_y", "len_x", "mu"]).map_err(csv_err)?;
            for (key, m) in &table.mu {
                let (y, x) = split_key(key);
                w.write_record([
                    y.to_string(),
                    x.to_string(),
                    word_length(y).to_string(),
                    word_length(x).to_string(),
                    m.to_string(),
                ])
                .map_err(csv_err)?;
            }
            csv_finish(w)?
        }
        Format::Text => {
            let mut out = format!("# mu {spec}\n");
            for (key, m) in &table.mu {
                let (y, x) = split_key(key);
                out.push_str(&format!("{y:>12}  {x:>12}  {m}\n"));
            }
            out
        }
    })
}

fn render_rouquier(format: Format, spec: &str, kl: &KlTable, xs: &[ElementId]) -> Result<String> {
    let g = kl.group();
    let mut complexes = Vec::new();
    for &x in xs {
        let r = verify::rouquier_multiplicities(kl, x)?;
        let entries = r
            .mult
            .iter()
            .map(|(&(y, degree), &multiplicity)| RouquierEntry {
                y: g.display(y),
                degree,
                multiplicity,
            })
            .collect();
        complexes.push(RouquierRecord {
            x: g.display(x),
            entries,
        });
    }
    let report = RouquierReport {
        group: spec.to_string(),
        cap: g.cap(),
        complexes,
    };
    Ok(match format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["x", "y", "degree", "multiplicity"]).map_err(csv_err)?;
            for c in &report.complexes {
                for e in &c.entries {
                    w.write_record([
                        c.x.clone(),
                        e.y.clone(),
                        e.degree.to_string(),
                        e.multiplicity.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
            csv_finish(w)?
        }
        Format::Text => {
            let mut out = String::new();
            for c in &report.complexes {
                let parts: Vec<String> = c
                    .entries
                    .iter()
                    .map(|e| format!("{}({}) x{}", e.y, e.degree, e.multiplicity))
                    .collect();
                out.push_str(&format!("Delta_{}: {}\n", c.x, parts.join(", ")));
            }
            out
        }
    })
}

fn scan(
    cli: &Cli,
    spec: &str,
    group: Arc<GroupTable>,
    subsets: &[GeneratorSet],
    name: ScanName,
) -> std::result::Result<Outcome, Failure> {
    let g = &*group;
    let mut checks = Vec::new();
    let plain = |check: &str, outcome: Result<verify::ScanOutcome>| -> Result<CheckRecord> {
        let outcome = outcome?;
        let mut rec = base_record(check, spec, cli.cap);
        rec.pairs_checked = outcome.triples_checked;
        rec.violation_count = outcome.violations.len();
        rec.violations = outcome
            .violations
            .iter()
            .map(|v| verify::Finding::from_violation(g, v))
            .collect();
        Ok(rec)
    };
    match name {
        ScanName::Inverse | ScanName::Classical => {
            let kl = KlTable::build(group.clone())?;
            checks.push(if name == ScanName::Inverse {
                plain("monotonicity-inverse", verify::scan_monotonicity_inverse(&kl))?
            } else {
                plain("monotonicity-classical", verify::scan_monotonicity_classical(&kl))?
            });
        }
        ScanName::Antispherical | ScanName::Spherical => {
            if subsets.is_empty() {
                return Err(Failure::Usage("this scan needs at least one --parabolic subset".into()));
            }
            let bars = BarTable::build(group.clone())?;
            for &subset in subsets {
                if name == ScanName::Antispherical {
                    let ctx = ParabolicContext::new(group.clone(), subset, Flavor::Antispherical)?;
                    let table = ParabolicKlTable::build(ctx, &bars)?;
                    let mut rec = plain(
                        "monotonicity-antispherical",
                        verify::scan_monotonicity_antispherical(&table),
                    )?;
                    rec.subset = Some(subset.to_one_based());
                    rec.flavor = Some(Flavor::Antispherical);
                    checks.push(rec);
                } else {
                    let ctx = ParabolicContext::new(group.clone(), subset, Flavor::Spherical)?;
                    let table = ParabolicKlTable::build(ctx, &bars)?;
                    let rec = verify::spherical_scan_record(&table, spec, cli.cap);
                    if let Some(e) = &rec.error {
                        return Err(Failure::Compute(Error::Invariant(e.clone())));
                    }
                    checks.push(rec);
                }
            }
        }
    }
    for rec in &mut checks {
        apply_expectation(rec, cli.expect_violations);
    }
    let report = SuiteReport {
        group: spec.to_string(),
        cap: cli.cap,
        passed: checks.iter().all(|c| c.passed),
        checks,
    };
    let success = report.passed;
    Ok(Outcome {
        text: render_report(cli.format, &report)?,
        success,
    })
}

fn base_record(check: &str, spec: &str, cap: Option<usize>) -> CheckRecord {
    CheckRecord {
        check: check.to_string(),
        group: spec.to_string(),
        subset: None,
        flavor: None,
        cap,
        pairs_checked: 0,
        expectation: Expectation::Pass,
        passed: true,
        violation_count: 0,
        violations: Vec::new(),
        missing: Vec::new(),
        error: None,
    }
}

/// An explicit `--expect-violations` overrides the default expectation of
/// a scan; mandated spherical triples are still required when it is true.
fn apply_expectation(rec: &mut CheckRecord, flag: Option<bool>) {
    match flag {
        Some(false) => rec.expectation = Expectation::Pass,
        Some(true) if rec.expectation == Expectation::Pass => rec.expectation = Expectation::Violations,
        _ => {}
    }
    rec.passed = rec.error.is_none()
        && rec.missing.is_empty()
        && (rec.expectation != Expectation::Pass || rec.violation_count == 0);
}

fn render_report(format: Format, report: &SuiteReport) -> Result<String> {
    Ok(match format {
        Format::Json => to_json(report)?,
        Format::Text => report.to_text(),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record([
                "check",
                "group",
                "I",
                "flavor",
                "cap",
                "pairs_checked",
                "expectation",
                "passed",
                "violation_count",
                "missing",
            ])
            .map_err(csv_err)?;
            for c in &report.checks {
                w.write_record([
                    c.check.clone(),
                    c.group.clone(),
                    c.subset.as_deref().map(subset_text).unwrap_or_default(),
                    c.flavor.map(|f| f.to_string()).unwrap_or_default(),
                    c.cap.map(|c| c.to_string()).unwrap_or_default(),
                    c.pairs_checked.to_string(),
                    serde_json::to_value(c.expectation)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default(),
                    c.passed.to_string(),
                    c.violation_count.to_string(),
                    c.missing.len().to_string(),
                ])
                .map_err(csv_err)?;
            }
            csv_finish(w)?
        }
    })
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}
