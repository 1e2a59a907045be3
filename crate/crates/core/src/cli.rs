//! The `gwalk` command line.
//!
//! Exit codes: 0 success, 2 usage, 3 formula mismatch, 4 not avoidable,
//! 5 budget exhausted, 6 fixture mismatch.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analytics::{
    cardinality_breakdown, q2_classify, q4_classify, q5_classify, AnalyticsError,
    ClassificationReport, Verdict, Witness,
};
use crate::arith::{balanced_division, require_positive, ArithError};
use crate::construction::{avoiding_walk, ConstructionError};
use crate::fixtures;
use crate::membership::{is_unavoidable, obstruction_set};
use crate::oracle::{default_box, search_with_report, OracleError, SearchBox, DEFAULT_BUDGET};
use crate::walks::{positive_real_differences, render, RenderFormat, Walk, WalkDocument};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FORMULA_MISMATCH: i32 = 3;
pub const EXIT_NOT_AVOIDABLE: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;
pub const EXIT_FIXTURE_MISMATCH: i32 = 6;

/// Environment variable overriding the oracle's default budget.
pub const BUDGET_ENV: &str = "GW_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
    Ascii,
}

#[derive(Debug, Parser)]
#[command(name = "gwalk", version, about = "Unavoidable differences in Gaussian-integer walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Oracle search box as x0:x1:y0:y1.
    #[arg(long = "box", global = true, allow_hyphen_values = true)]
    pub search_box: Option<SearchBox>,
    /// Oracle node budget; overrides GW_BUDGET.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Window half-width for q5.
    #[arg(long = "k", global = true, allow_hyphen_values = true)]
    pub k: Option<i64>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership of d in A_n with its balanced division.
    Member {
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        d: i64,
    },
    /// One row per d = 1..n.
    Table {
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// The members of A_n.
    Set {
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// The summands of |A_n|, cross-checked against enumeration.
    Card {
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// A walk containing n that never realises d.
    Walk {
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        d: i64,
    },
    /// Exhaustive path search compared with the theorem.
    Oracle {
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        d: i64,
    },
    /// Classify each n of an inclusive range a..b (or a single n).
    Classify { question: QuestionArg, range: String },
    /// Check the three example walks against their published difference sets.
    Fixtures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuestionArg {
    Q2,
    Q4,
    Q5,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<ArithError> for CliError {
    fn from(e: ArithError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<AnalyticsError> for CliError {
    fn from(e: AnalyticsError) -> Self {
        let code = match e {
            AnalyticsError::Arith(_) => EXIT_USAGE,
            _ => EXIT_FORMULA_MISMATCH,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        let code = match e {
            ConstructionError::NotAvoidable { .. } => EXIT_NOT_AVOIDABLE,
            ConstructionError::Arith(_) | ConstructionError::StrideTooSmall(_) => EXIT_USAGE,
            _ => EXIT_FORMULA_MISMATCH,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Successful command output, plus a failure to report after printing it.
struct Output {
    body: String,
    failure: Option<CliError>,
}

impl From<String> for Output {
    fn from(body: String) -> Self {
        Output { body, failure: None }
    }
}

/// Parses `args` (program name first), runs the command, and returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let result = execute(&cli);
    let (body, failure) = match result {
        Ok(out) => (out.body, out.failure),
        Err(e) => (String::new(), Some(e)),
    };
    if !body.is_empty() {
        let written = match &cli.out {
            Some(path) => std::fs::write(path, &body),
            None => stdout.write_all(body.as_bytes()),
        };
        if let Err(e) = written {
            let _ = writeln!(stderr, "error: cannot write output: {e}");
            return 1;
        }
    }
    match failure {
        None => 0,
        Some(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let allowed: &[Format] = match cli.command {
        Command::Walk { .. } | Command::Oracle { .. } => {
            &[Format::Text, Format::Json, Format::Csv, Format::Svg, Format::Ascii]
        }
        Command::Fixtures => &[Format::Text, Format::Json],
        _ => &[Format::Text, Format::Json, Format::Csv],
    };
    if !allowed.contains(&cli.format) {
        let name = cli.format.to_possible_value().expect("no skipped variants");
        return Err(CliError::usage(format!(
            "--format {} is not available for this command",
            name.get_name()
        )));
    }
    let f = cli.format;
    match &cli.command {
        Command::Member { n, d } => cmd_member(pos("n", *n)?, pos("d", *d)?, f).map(Into::into),
        Command::Table { n } => cmd_table(pos("n", *n)?, f).map(Into::into),
        Command::Set { n } => cmd_set(pos("n", *n)?, f).map(Into::into),
        Command::Card { n } => cmd_card(pos("n", *n)?, f).map(Into::into),
        Command::Walk { n, d } => cmd_walk(pos("n", *n)?, pos("d", *d)?, f).map(Into::into),
        Command::Oracle { n, d } => {
            let (n, d) = (pos("n", *n)?, pos("d", *d)?);
            let budget = match cli.budget {
                Some(b) => b,
                None => budget_from_env()?,
            };
            let bx = cli.search_box.unwrap_or_else(|| default_box(n, d));
            cmd_oracle(n, d, bx, budget, f)
        }
        Command::Classify { question, range } => {
            let (a, b) = parse_range(range)?;
            let k = match (question, cli.k) {
                (QuestionArg::Q5, None) => return Err(CliError::usage("q5 needs --k")),
                (_, Some(k)) => Some(pos("K", k)?),
                (_, None) => None,
            };
            cmd_classify(*question, a, b, k, f).map(Into::into)
        }
        Command::Fixtures => cmd_fixtures(f),
    }
}

fn pos(name: &'static str, v: i64) -> Result<u64, CliError> {
    Ok(require_positive(name, v)?)
}

fn budget_from_env() -> Result<u64, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{BUDGET_ENV} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// `a..b` (inclusive) or a single `n`.
pub fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let bound = |t: &str| -> Result<u64, CliError> {
        let v: i64 = t
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad range bound {t:?}")))?;
        pos("range bound", v)
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (bound(a)?, bound(b)?),
        None => {
            let v = bound(s)?;
            (v, v)
        }
    };
    if a > b {
        return Err(CliError::usage(format!("empty range {s}")));
    }
    Ok((a, b))
}

fn braces(values: impl IntoIterator<Item = u64>) -> String {
    let items: Vec<String> = values.into_iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

struct Row {
    d: u64,
    k: u64,
    r: i64,
    member: bool,
    margin: i64,
}

fn row(n: u64, d: u64) -> Result<Row, CliError> {
    let bd = balanced_division(n, d)?;
    Ok(Row {
        d,
        k: bd.k,
        r: bd.r,
        member: is_unavoidable(n, d)?,
        margin: bd.margin(),
    })
}

const TABLE_HEADER: &str = "d,k,r,member,k_minus_abs_r";

fn csv_row(r: &Row) -> String {
    format!("{},{},{},{},{}\n", r.d, r.k, r.r, r.member, r.margin)
}

fn json_row(n: u64, r: &Row) -> serde_json::Value {
    json!({"n": n, "d": r.d, "k": r.k, "r": r.r, "member": r.member, "k_minus_abs_r": r.margin})
}

fn text_row(n: u64, r: &Row) -> String {
    format!(
        "{n} {} k={} r={} member={} k_minus_abs_r={}\n",
        r.d, r.k, r.r, r.member, r.margin
    )
}

pub fn cmd_member(n: u64, d: u64, f: Format) -> Result<String, CliError> {
    let r = row(n, d)?;
    Ok(match f {
        Format::Json => to_json(&json_row(n, &r)),
        Format::Csv => format!("{TABLE_HEADER}\n{}", csv_row(&r)),
        _ => text_row(n, &r),
    })
}

pub fn cmd_table(n: u64, f: Format) -> Result<String, CliError> {
    let rows = (1..=n).map(|d| row(n, d)).collect::<Result<Vec<_>, _>>()?;
    Ok(match f {
        Format::Json => to_json(&rows.iter().map(|r| json_row(n, r)).collect::<Vec<_>>()),
        Format::Csv => {
            let mut s = format!("{TABLE_HEADER}\n");
            rows.iter().for_each(|r| s.push_str(&csv_row(r)));
            s
        }
        _ => rows.iter().map(|r| text_row(n, r)).collect(),
    })
}

pub fn cmd_set(n: u64, f: Format) -> Result<String, CliError> {
    let set = obstruction_set(n)?;
    Ok(match f {
        Format::Json => to_json(&set),
        Format::Csv => {
            let mut s = String::from("d\n");
            set.members.iter().for_each(|d| {
                let _ = writeln!(s, "{d}");
            });
            s
        }
        _ => format!("{}\n", braces(set.members.iter().copied())),
    })
}

pub fn cmd_card(n: u64, f: Format) -> Result<String, CliError> {
    let b = cardinality_breakdown(n)?;
    Ok(match f {
        Format::Json => {
            let mut v = serde_json::to_value(b).expect("serialisable");
            v["cross_check"] = json!("ok");
            to_json(&v)
        }
        Format::Csv => format!(
            "n,floor_sqrt2n,twice_floor_ratio,small_divisor_count,theta,total,cross_check\n{},{},{},{},{},{},ok\n",
            b.n, b.floor_sqrt2n, b.twice_floor_ratio, b.small_divisor_count, b.theta, b.total
        ),
        _ => format!(
            "{} + {} - {} + {} = {}, cross-check ok\n",
            b.floor_sqrt2n, b.twice_floor_ratio, b.small_divisor_count, b.theta, b.total
        ),
    })
}

fn points_csv(w: &Walk) -> String {
    let mut s = String::from("x,y\n");
    for p in w.points() {
        let _ = writeln!(s, "{},{}", p.x, p.y);
    }
    s
}

fn points_text(w: &Walk) -> String {
    w.points().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn cmd_walk(n: u64, d: u64, f: Format) -> Result<String, CliError> {
    let cert = avoiding_walk(n, d)?;
    let anchors = Some((cert.anchor_a, cert.anchor_b));
    Ok(match f {
        Format::Json => to_json(&cert.to_document()),
        Format::Csv => points_csv(&cert.walk),
        Format::Svg => render(&cert.walk, RenderFormat::Svg, anchors),
        Format::Ascii => render(&cert.walk, RenderFormat::Ascii, anchors),
        Format::Text => {
            let pts = cert.walk.points();
            format!(
                "n={n} d={d} path={} points={} anchors=[{}, {}] {} - {} = ({n},0)\n{}\n",
                cert.path,
                pts.len(),
                cert.anchor_a,
                cert.anchor_b,
                pts[cert.anchor_a],
                pts[cert.anchor_b],
                points_text(&cert.walk)
            )
        }
    })
}

fn cmd_oracle(n: u64, d: u64, bx: SearchBox, budget: u64, f: Format) -> Result<Output, CliError> {
    if !bx.admits(n) {
        return Err(CliError::usage(format!(
            "box {bx} must contain x in [0, {n}] and y = 0"
        )));
    }
    let predicted = !is_unavoidable(n, d)?;
    let theorem = if predicted { "avoidable" } else { "unavoidable" };
    let report = match search_with_report(n, d, bx, Some(budget)) {
        Ok(r) => r,
        Err(OracleError::BudgetExceeded { budget }) => {
            let body = match f {
                Format::Json => to_json(&json!({
                    "n": n, "d": d, "box": bx.to_string(), "result": "budget-exceeded",
                    "budget": budget, "theorem": theorem,
                })),
                _ => format!("oracle n={n} d={d} box={bx}: budget-exceeded ({budget} expansions)\ntheorem: {theorem}\n"),
            };
            return Ok(Output {
                body,
                failure: Some(CliError {
                    code: EXIT_BUDGET,
                    message: format!("node budget of {budget} expansions exhausted"),
                }),
            });
        }
        Err(e) => return Err(CliError::usage(e.to_string())),
    };
    let found = report.path.is_some();
    let verdict = if found == predicted { "AGREE" } else { "DISAGREE" };
    let result = if found { "found" } else { "none" };
    let body = match (f, &report.path) {
        (Format::Json, path) => to_json(&json!({
            "n": n, "d": d, "box": bx.to_string(), "result": result,
            "path": path.as_ref().map(|w| WalkDocument::from_walk(w, None)),
            "expansions": report.expansions, "theorem": theorem, "agreement": verdict,
        })),
        (Format::Csv, Some(w)) => points_csv(w),
        (Format::Svg, Some(w)) => render(w, RenderFormat::Svg, None),
        (Format::Ascii, Some(w)) => render(w, RenderFormat::Ascii, None),
        (_, path) => {
            let mut s = format!(
                "oracle n={n} d={d} box={bx}: {result} ({} expansions)\n",
                report.expansions
            );
            if let Some(w) = path {
                let _ = writeln!(s, "path: {}", points_text(w));
            }
            let _ = writeln!(s, "theorem: {theorem}\n{verdict}");
            s
        }
    };
    Ok(body.into())
}

fn witness_summary(r: &ClassificationReport) -> String {
    match (&r.witness, &r.obstruction) {
        (Some(Witness::Straight { .. }), _) => "straight walk".into(),
        (Some(Witness::Certificate { avoids, .. }), _) => format!("avoids {avoids}"),
        (None, Some(o)) => format!(
            "obstruction d={} blocking={} non-divisors={}",
            o.d,
            braces(o.blocking.iter().copied()),
            braces(o.non_divisors.iter().copied())
        ),
        (None, None) => "-".into(),
    }
}

pub fn cmd_classify(
    q: QuestionArg,
    a: u64,
    b: u64,
    k: Option<u64>,
    f: Format,
) -> Result<String, CliError> {
    let mut reports = Vec::new();
    for n in a..=b {
        reports.push(match q {
            QuestionArg::Q2 => q2_classify(n)?,
            QuestionArg::Q4 => q4_classify(n)?,
            QuestionArg::Q5 => q5_classify(n, k.expect("checked by caller"))?,
        });
    }
    let members: Vec<u64> = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Member)
        .map(|r| r.n)
        .collect();
    let case3: Vec<u64> = reports.iter().filter(|r| r.case == Some(3)).map(|r| r.n).collect();
    Ok(match f {
        Format::Json => to_json(&json!({"reports": reports, "members": members})),
        Format::Csv => {
            let mut s = String::from("n,K,case,verdict,detail\n");
            for r in &reports {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.n,
                    r.k.map(|k| k.to_string()).unwrap_or_default(),
                    r.case.map(|c| c.to_string()).unwrap_or_default(),
                    r.verdict,
                    witness_summary(r)
                );
            }
            s
        }
        _ => {
            let mut s = String::new();
            for r in &reports {
                let _ = write!(s, "n={}", r.n);
                if let Some(k) = r.k {
                    let _ = write!(s, " K={k}");
                }
                if let Some(c) = r.case {
                    let _ = write!(s, " case={c}");
                }
                let _ = write!(s, " verdict={} {}", r.verdict, witness_summary(r));
                if !r.failed_thresholds.is_empty() {
                    let t: String = r.failed_thresholds.iter().collect();
                    let _ = write!(s, " failed={t}");
                }
                s.push('\n');
            }
            let _ = writeln!(s, "members: {}", braces(members));
            if q == QuestionArg::Q5 {
                let _ = writeln!(s, "case 3: {}", braces(case3));
            }
            s
        }
    })
}

fn cmd_fixtures(f: Format) -> Result<Output, CliError> {
    let mut mismatches = Vec::new();
    let mut entries = Vec::new();
    let mut inter: Option<BTreeSet<u64>> = None;
    for (name, walk, published) in fixtures::all() {
        let diffs = positive_real_differences(&walk);
        if diffs != published {
            mismatches.push(name.to_string());
        }
        inter = Some(match inter {
            None => diffs.clone(),
            Some(acc) => acc.intersection(&diffs).copied().collect(),
        });
        entries.push((name, walk.len(), diffs, published));
    }
    let inter = inter.unwrap_or_default();
    let expected = fixtures::intersection_published();
    if inter != expected {
        mismatches.push("intersection".into());
    }
    let body = match f {
        Format::Json => to_json(&json!({
            "fixtures": entries.iter().map(|(name, len, diffs, published)| json!({
                "name": name, "points": len, "differences": diffs, "ok": diffs == published,
            })).collect::<Vec<_>>(),
            "intersection": inter,
            "ok": mismatches.is_empty(),
        })),
        _ => {
            let mut s = String::new();
            for (name, len, diffs, published) in &entries {
                let status = if diffs == published { "ok" } else { "MISMATCH" };
                let _ = writeln!(s, "{name} ({len} points): {} {status}", braces(diffs.iter().copied()));
            }
            let status = if inter == expected { "ok" } else { "MISMATCH" };
            let _ = writeln!(s, "intersection: {} {status}", braces(inter.iter().copied()));
            s
        }
    };
    let failure = (!mismatches.is_empty()).then(|| CliError {
        code: EXIT_FIXTURE_MISMATCH,
        message: format!("fixture mismatch: {}", mismatches.join(", ")),
    });
    Ok(Output { body, failure })
}
