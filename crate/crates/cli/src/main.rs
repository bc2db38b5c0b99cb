//! `digit-sigma`: evaluate the digit-product sum sequences a, b, c, verify
//! them against a brute-force oracle, scan the bounds f, g, h and the
//! ratio/linear inequalities, work with OEIS b-files, and benchmark the
//! closed forms against direct accumulation.
//!
//! Exit codes: 0 success/confirmed, 1 certified violation or disagreement,
//! 2 usage or input error, 3 indeterminate (precision cap reached).

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use digit_sigma::bounds::{
    self, BoundKind, ScanKind, ScanReport, MAX_BITS, START_BITS,
};
use digit_sigma::bfile::{compare_bfile, emit_bfile, parse_bfile};
use digit_sigma::oracle::{self, DEFAULT_LIMIT};
use digit_sigma::{sequence_value, Error, Natural, SequenceId};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INDETERMINATE: u8 = 3;

#[derive(Parser)]
#[command(name = "digit-sigma", version, about = "Digit-product sum sequences: evaluation, verification, scanning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqArg {
    A,
    B,
    C,
}

impl From<SeqArg> for SequenceId {
    fn from(s: SeqArg) -> Self {
        match s {
            SeqArg::A => SequenceId::Even,
            SeqArg::B => SequenceId::Odd,
            SeqArg::C => SequenceId::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    #[value(name = "bound-f")]
    BoundF,
    #[value(name = "bound-g")]
    BoundG,
    #[value(name = "bound-h")]
    BoundH,
    Ratio,
    Linear,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a sequence at one index via the closed form.
    Eval {
        #[arg(long, value_enum)]
        seq: SeqArg,
        /// Index, as a decimal string of any length.
        #[arg(long)]
        n: String,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Cross-check the closed forms against direct accumulation over a range.
    Oracle {
        #[arg(long, value_enum)]
        seq: SeqArg,
        #[arg(long)]
        lo: String,
        #[arg(long)]
        hi: String,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Scan a bound or inequality over [1, hi].
    Scan {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        hi: String,
        #[arg(long)]
        workers: Option<usize>,
        /// Starting precision for interval comparisons (bits).
        #[arg(long, default_value_t = START_BITS)]
        precision_bits: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Emit or compare OEIS b-files.
    Bfile {
        #[command(subcommand)]
        action: BfileAction,
    },
    /// Time closed-form evaluation against the oracle.
    Bench {
        /// Index to benchmark; repeatable.
        #[arg(long, required = true)]
        n: Vec<String>,
        #[arg(long, value_enum, default_value = "a")]
        seq: SeqArg,
        #[arg(long, default_value_t = 5)]
        repetitions: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
}

#[derive(Subcommand)]
enum BfileAction {
    /// Print `index value` lines for lo..=hi to stdout.
    Emit {
        #[arg(long, value_enum)]
        seq: SeqArg,
        #[arg(long)]
        lo: i64,
        #[arg(long)]
        hi: i64,
    },
    /// Compare a reference b-file against computed values.
    Compare {
        #[arg(long, value_enum)]
        seq: SeqArg,
        #[arg(long)]
        file: std::path::PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Eval { seq, n, format } => cmd_eval(seq.into(), &n, format),
        Command::Oracle { seq, lo, hi, workers, format } => {
            cmd_oracle(seq.into(), &lo, &hi, workers, format)
        }
        Command::Scan { kind, hi, workers, precision_bits, format } => {
            cmd_scan(kind, &hi, workers, precision_bits, format)
        }
        Command::Bfile { action } => match action {
            BfileAction::Emit { seq, lo, hi } => cmd_bfile_emit(seq.into(), lo, hi),
            BfileAction::Compare { seq, file, format } => {
                cmd_bfile_compare(seq.into(), &file, format)
            }
        },
        Command::Bench { n, seq, repetitions, format } => {
            cmd_bench(&n, seq.into(), repetitions.max(1), format)
        }
    };
    ExitCode::from(code)
}

fn usage_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn error_exit(e: &Error) -> u8 {
    eprintln!("error: {e}");
    match e {
        Error::Indeterminate { .. } => EXIT_INDETERMINATE,
        _ => EXIT_USAGE,
    }
}

fn parse_natural(text: &str, what: &str) -> Result<Natural, u8> {
    let trimmed = text.trim();
    if trimmed.is_empty() || !trimmed.bytes().all(|b| b.is_ascii_digit()) {
        return Err(usage_error(&format!("{what} must be a nonnegative decimal integer, got {text:?}")));
    }
    trimmed.parse().map_err(|_| usage_error(&format!("cannot parse {what} {text:?}")))
}

fn parse_u64(text: &str, what: &str) -> Result<u64, u8> {
    parse_natural(text, what)?
        .to_u64()
        .ok_or_else(|| usage_error(&format!("{what} {text:?} exceeds the supported range")))
}

fn oracle_limit() -> u64 {
    match std::env::var("DIGIT_SIGMA_MAX_ORACLE") {
        Ok(v) => match v.trim().parse() {
            Ok(limit) => limit,
            Err(_) => {
                eprintln!("warning: ignoring unparseable DIGIT_SIGMA_MAX_ORACLE={v:?}");
                DEFAULT_LIMIT
            }
        },
        Err(_) => DEFAULT_LIMIT,
    }
}

fn workers_or_default(workers: Option<usize>) -> usize {
    workers.unwrap_or_else(bounds::default_workers).max(1)
}

fn cmd_eval(seq: SequenceId, n: &str, format: FormatArg) -> u8 {
    let n = match parse_natural(n, "--n") {
        Ok(n) => n,
        Err(code) => return code,
    };
    let value = sequence_value(seq, &n);
    match format {
        FormatArg::Text => println!("{value}"),
        FormatArg::Csv => {
            println!("seq,n,value");
            println!("{},{},{}", seq.letter(), n, value);
        }
        FormatArg::Jsonl => println!(
            "{}",
            serde_json::json!({
                "seq": seq.letter().to_string(),
                "n": n.to_string(),
                "value": value.to_string(),
            })
        ),
    }
    0
}

fn cmd_oracle(
    seq: SequenceId,
    lo: &str,
    hi: &str,
    workers: Option<usize>,
    format: FormatArg,
) -> u8 {
    let (lo, hi) = match (parse_u64(lo, "--lo"), parse_u64(hi, "--hi")) {
        (Ok(lo), Ok(hi)) => (lo, hi),
        (Err(code), _) | (_, Err(code)) => return code,
    };
    let workers = workers_or_default(workers);
    eprintln!("oracle: checking {}(n) for n in [{lo}, {hi}] with {workers} workers", seq.letter());
    let report = match oracle::verify_range_limited(seq, lo, hi, workers, oracle_limit()) {
        Ok(r) => r,
        Err(e) => return error_exit(&e),
    };
    match format {
        FormatArg::Text => {
            println!(
                "checked {} values of {}(n), {} mismatches",
                report.checked,
                seq.letter(),
                report.mismatches.len()
            );
            for m in &report.mismatches {
                println!("mismatch at n={}: closed={} oracle={}", m.n, m.closed, m.oracle);
            }
        }
        FormatArg::Csv => {
            println!("n,closed,oracle");
            for m in &report.mismatches {
                println!("{},{},{}", m.n, m.closed, m.oracle);
            }
        }
        FormatArg::Jsonl => {
            println!(
                "{}",
                serde_json::json!({
                    "seq": seq.letter().to_string(),
                    "lo": report.range_lo,
                    "hi": report.range_hi,
                    "checked": report.checked,
                    "mismatches": report.mismatches.iter().map(|m| serde_json::json!({
                        "n": m.n,
                        "closed": m.closed.to_string(),
                        "oracle": m.oracle.to_string(),
                    })).collect::<Vec<_>>(),
                })
            );
        }
    }
    if report.is_clean() {
        0
    } else {
        EXIT_VIOLATION
    }
}

fn scan_kind_name(kind: ScanKind) -> &'static str {
    match kind {
        ScanKind::BoundF => "bound-f",
        ScanKind::BoundG => "bound-g",
        ScanKind::BoundH => "bound-h",
        ScanKind::Ratio => "ratio",
        ScanKind::Linear => "linear",
    }
}

/// For bound-h, the report's violations are the observed exceptions; the
/// scan confirms expectations only when those are exactly the all-nines
/// family {10^k − 1 ≤ hi}.
fn h_exceptions_as_expected(report: &ScanReport) -> bool {
    let mut expected = Vec::new();
    let mut v = 9u64;
    while v <= report.range_hi {
        expected.push(v);
        match v.checked_mul(10) {
            Some(next) => v = next + 9,
            None => break,
        }
    }
    let observed: Vec<u64> = report.violations.iter().map(|x| x.n).collect();
    observed == expected
}

fn render_scan(report: &ScanReport, format: FormatArg) {
    match format {
        FormatArg::Text => {
            println!(
                "scan {} over [1, {}]: {} violations, {} equalities",
                scan_kind_name(report.kind),
                report.range_hi,
                report.violations.len(),
                report.equality_count
            );
            if !report.equalities.is_empty() {
                let sample: Vec<String> =
                    report.equalities.iter().map(u64::to_string).collect();
                let suffix = if report.equality_count > report.equalities.len() as u64 {
                    " ..."
                } else {
                    ""
                };
                println!("equalities: {}{}", sample.join(" "), suffix);
            }
            if report.kind == ScanKind::BoundH && !report.violations.is_empty() {
                let list: Vec<String> =
                    report.violations.iter().map(|v| v.n.to_string()).collect();
                println!("exceptions: {}", list.join(" "));
            } else {
                for v in &report.violations {
                    println!("violation at n={}: {}", v.n, v.detail);
                }
            }
            if let Some(ex) = &report.extremes {
                println!(
                    "ratio extremes: min a/b ~ {:.9} at n={}, max a/b ~ {:.9} at n={}",
                    ex.min.midpoint_f64(),
                    ex.argmin,
                    ex.max.midpoint_f64(),
                    ex.argmax
                );
            }
        }
        FormatArg::Csv => {
            println!("event,n,detail");
            for v in &report.violations {
                println!("violation,{},{}", v.n, v.detail.replace(',', ";"));
            }
            for n in &report.equalities {
                println!("equality,{n},");
            }
        }
        FormatArg::Jsonl => {
            println!(
                "{}",
                serde_json::json!({
                    "kind": scan_kind_name(report.kind),
                    "hi": report.range_hi,
                    "violations": report.violations.iter().map(|v| serde_json::json!({
                        "n": v.n,
                        "detail": v.detail,
                    })).collect::<Vec<_>>(),
                    "equalities": report.equalities,
                    "equality_count": report.equality_count,
                })
            );
        }
    }
}

fn cmd_scan(
    kind: KindArg,
    hi: &str,
    workers: Option<usize>,
    precision_bits: u32,
    format: FormatArg,
) -> u8 {
    let hi = match parse_u64(hi, "--hi") {
        Ok(hi) if hi >= 1 => hi,
        Ok(_) => return usage_error("--hi must be at least 1"),
        Err(code) => return code,
    };
    if precision_bits > MAX_BITS {
        return usage_error(&format!("--precision-bits capped at {MAX_BITS}"));
    }
    let workers = workers_or_default(workers);
    let label = match kind {
        KindArg::BoundF => "bound-f",
        KindArg::BoundG => "bound-g",
        KindArg::BoundH => "bound-h",
        KindArg::Ratio => "ratio",
        KindArg::Linear => "linear",
    };
    eprintln!("scan: {label} over [1, {hi}] with {workers} workers");
    let result = match kind {
        KindArg::BoundF => bounds::scan_bound(BoundKind::F, hi, workers, precision_bits),
        KindArg::BoundG => bounds::scan_bound(BoundKind::G, hi, workers, precision_bits),
        KindArg::BoundH => bounds::scan_h_exceptions(hi, workers, precision_bits),
        KindArg::Ratio => bounds::scan_ratio(hi, workers),
        KindArg::Linear => bounds::scan_linear(hi, workers),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => return error_exit(&e),
    };
    render_scan(&report, format);
    let confirmed = match report.kind {
        ScanKind::BoundH => h_exceptions_as_expected(&report),
        _ => report.is_clean(),
    };
    if confirmed {
        0
    } else {
        EXIT_VIOLATION
    }
}

fn cmd_bfile_emit(seq: SequenceId, lo: i64, hi: i64) -> u8 {
    match emit_bfile(seq, lo, hi) {
        Ok(text) => {
            // One write: emission is byte-exact and may be piped to a file.
            if std::io::stdout().write_all(text.as_bytes()).is_err() {
                return EXIT_USAGE;
            }
            0
        }
        Err(e) => error_exit(&e),
    }
}

fn cmd_bfile_compare(seq: SequenceId, file: &std::path::Path, format: FormatArg) -> u8 {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return usage_error(&format!("cannot read {}: {e}", file.display())),
    };
    let parsed = match parse_bfile(&text, &file.display().to_string()) {
        Ok(p) => p,
        Err(e) => return error_exit(&e),
    };
    let cmp = match compare_bfile(&parsed, seq) {
        Ok(c) => c,
        Err(e @ Error::AlignmentFailed { .. }) => {
            eprintln!("error: {e}");
            return EXIT_VIOLATION;
        }
        Err(e) => return error_exit(&e),
    };
    match format {
        FormatArg::Text => {
            println!(
                "compared {} entries against {}(n) at shift {}: {} disagreements",
                cmp.checked,
                seq.letter(),
                cmp.shift,
                cmp.diffs.len()
            );
            for d in &cmp.diffs {
                println!("disagreement at index {}: reference={} computed={}", d.index, d.reference, d.computed);
            }
        }
        FormatArg::Csv => {
            println!("index,reference,computed");
            for d in &cmp.diffs {
                println!("{},{},{}", d.index, d.reference, d.computed);
            }
        }
        FormatArg::Jsonl => {
            println!(
                "{}",
                serde_json::json!({
                    "seq": seq.letter().to_string(),
                    "shift": cmp.shift,
                    "checked": cmp.checked,
                    "diffs": cmp.diffs.iter().map(|d| serde_json::json!({
                        "index": d.index,
                        "reference": d.reference.to_string(),
                        "computed": d.computed.to_string(),
                    })).collect::<Vec<_>>(),
                })
            );
        }
    }
    if cmp.agrees() {
        0
    } else {
        EXIT_VIOLATION
    }
}

struct BenchRow {
    n_display: String,
    closed_ns: u128,
    oracle_ns: Option<u128>,
    agree: Option<bool>,
    value_digits: usize,
}

fn time_reps<F: FnMut()>(repetitions: u32, mut f: F) -> u128 {
    let start = Instant::now();
    for _ in 0..repetitions {
        f();
    }
    start.elapsed().as_nanos() / repetitions as u128
}

fn cmd_bench(ns: &[String], seq: SequenceId, repetitions: u32, format: FormatArg) -> u8 {
    let limit = oracle_limit();
    let mut rows = Vec::new();
    for raw in ns {
        let n = match parse_natural(raw, "--n") {
            Ok(n) => n,
            Err(code) => return code,
        };
        let n_display = if raw.len() > 24 {
            format!("<{} digits>", raw.trim().len())
        } else {
            raw.trim().to_string()
        };
        eprintln!("bench: {}(n) for n = {n_display}, {repetitions} repetitions", seq.letter());
        let mut closed_value = Natural::from(0u8);
        let closed_ns = time_reps(repetitions, || {
            closed_value = sequence_value(seq, &n);
        });
        let (oracle_ns, agree) = if n.to_u64().is_some_and(|v| v <= limit) {
            let mut oracle_value = Natural::from(0u8);
            let ns = time_reps(repetitions, || {
                oracle_value = oracle::oracle_sum_limited(seq, &n, limit)
                    .expect("feasibility checked above");
            });
            (Some(ns), Some(oracle_value == closed_value))
        } else {
            (None, None)
        };
        rows.push(BenchRow {
            n_display,
            closed_ns,
            oracle_ns,
            agree,
            value_digits: closed_value.to_string().len(),
        });
    }
    match format {
        FormatArg::Text => {
            for r in &rows {
                let oracle = match r.oracle_ns {
                    Some(ns) => format!("{ns} ns"),
                    None => "infeasible".to_string(),
                };
                let agree = match r.agree {
                    Some(true) => ", values agree",
                    Some(false) => ", VALUES DISAGREE",
                    None => "",
                };
                println!(
                    "n={}: closed form {} ns, oracle {}{} (value has {} digits)",
                    r.n_display, r.closed_ns, oracle, agree, r.value_digits
                );
            }
        }
        FormatArg::Csv => {
            println!("n,closed_ns,oracle_ns,agree,value_digits");
            for r in &rows {
                println!(
                    "{},{},{},{},{}",
                    r.n_display,
                    r.closed_ns,
                    r.oracle_ns.map(|v| v.to_string()).unwrap_or_default(),
                    r.agree.map(|v| v.to_string()).unwrap_or_default(),
                    r.value_digits
                );
            }
        }
        FormatArg::Jsonl => {
            for r in &rows {
                println!(
                    "{}",
                    serde_json::json!({
                        "n": r.n_display,
                        "closed_ns": r.closed_ns as u64,
                        "oracle_ns": r.oracle_ns.map(|v| v as u64),
                        "agree": r.agree,
                        "value_digits": r.value_digits,
                    })
                );
            }
        }
    }
    if rows.iter().any(|r| r.agree == Some(false)) {
        EXIT_VIOLATION
    } else {
        0
    }
}
