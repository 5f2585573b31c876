//! Command-line frontend. Every command is deterministic: identical
//! invocations produce identical bytes. Exit codes: 0 success, 1
//! verification failure, 2 usage error.

use crate::discriminator::{disc_brute, disc_closed, disc_table, RunLengthTable};
use crate::indices::{is_in_p, universal_index};
use crate::modarith::sieve_primes;
use crate::primeclass::{
    classification_rows, classify, density_from_rows, read_classification_csv,
    write_classification_csv, ClosedFormCase, DensityReport, PrimeClassification,
};
use crate::sequence::SequenceSpec;
use crate::verify;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum DiscMode {
    #[default]
    Closed,
    Brute,
    /// Compute both and fail on mismatch.
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Oracle,
    Period,
    Index,
    Iota2,
    Charsum,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "bsdisc", version, about = "Discriminators of the Browkin-Salajan sequences")]
pub struct Cli {
    /// Worker threads for the parallel sweeps (also env BSDISC_THREADS).
    /// Results never depend on this.
    #[arg(long, global = true, env = "BSDISC_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// D_q(n), the smallest modulus discriminating u_q(1..n)
    Disc {
        q: u64,
        n: u64,
        #[arg(long, value_enum, default_value_t)]
        mode: DiscMode,
    },
    /// Run-length table of D_q(n) for n = 1..n_max
    Table {
        q: u64,
        n_max: u64,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Universal incongruence indices h(p) for p in P, p <= p_max
    Htable {
        p_max: u64,
        /// Exit nonzero unless h(p) <= (p+1)/2 for every p in P with
        /// 31 <= p < p_max.
        #[arg(long)]
        assert_bound: bool,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify one prime, or the first N primes >= 5 with --scan
    Classify {
        q: Option<u64>,
        #[arg(long, conflicts_with = "q")]
        scan: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV cache for scan results; reused when it already covers N.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Eight-class density report over the first N primes >= 5
    Density {
        count: u64,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Consistency sweeps (closed forms vs oracles)
    Verify { suite: Suite },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Run a parsed command, writing to `out`. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> std::io::Result<i32> {
    if let Some(threads) = cli.threads {
        // ignore failure: the pool may already be initialized (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match cli.command {
        Command::Disc { q, n, mode } => cmd_disc(q, n, mode, out),
        Command::Table { q, n_max, format, out: path } => {
            with_sink(out, path, |sink| cmd_table(q, n_max, format, sink))
        }
        Command::Htable { p_max, assert_bound, format, out: path } => {
            with_sink(out, path, |sink| cmd_htable(p_max, assert_bound, format, sink))
        }
        Command::Classify { q, scan, format, out: path, cache } => {
            with_sink(out, path, |sink| cmd_classify(q, scan, format, cache, sink))
        }
        Command::Density { count, format, out: path, cache } => {
            with_sink(out, path, |sink| cmd_density(count, format, cache, sink))
        }
        Command::Verify { suite } => cmd_verify(suite, out),
    }
}

fn with_sink(
    stdout: &mut dyn Write,
    path: Option<PathBuf>,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<i32>,
) -> std::io::Result<i32> {
    match path {
        Some(p) => {
            let mut file = BufWriter::new(File::create(p)?);
            let code = body(&mut file)?;
            file.flush()?;
            Ok(code)
        }
        None => body(stdout),
    }
}

fn usage(out: &mut dyn Write, message: &str) -> std::io::Result<i32> {
    writeln!(out, "error: {message}")?;
    Ok(EXIT_USAGE)
}

fn parse_spec(q: u64, out: &mut dyn Write) -> std::io::Result<std::result::Result<SequenceSpec, i32>> {
    match SequenceSpec::new(q) {
        Ok(spec) => Ok(Ok(spec)),
        Err(e) => {
            writeln!(out, "error: {e}")?;
            Ok(Err(EXIT_USAGE))
        }
    }
}

fn cmd_disc(q: u64, n: u64, mode: DiscMode, out: &mut dyn Write) -> std::io::Result<i32> {
    let spec = match parse_spec(q, out)? {
        Ok(s) => s,
        Err(code) => return Ok(code),
    };
    if n < 1 {
        return usage(out, "n must be >= 1");
    }
    match mode {
        DiscMode::Closed => writeln!(out, "{}", disc_closed(&spec, n).value)?,
        DiscMode::Brute => writeln!(out, "{}", disc_brute(&spec, n))?,
        DiscMode::Check => {
            let closed = disc_closed(&spec, n).value;
            let brute = disc_brute(&spec, n);
            if closed == brute {
                writeln!(out, "{closed} OK")?;
            } else {
                writeln!(out, "closed {closed} != brute {brute} MISMATCH")?;
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TableDoc<'a> {
    q: u64,
    n_max: u64,
    rows: &'a [crate::discriminator::TableRow],
}

fn cmd_table(q: u64, n_max: u64, format: OutputFormat, out: &mut dyn Write) -> std::io::Result<i32> {
    let spec = match parse_spec(q, out)? {
        Ok(s) => s,
        Err(code) => return Ok(code),
    };
    if n_max < 1 {
        return usage(out, "n_max must be >= 1");
    }
    let table: RunLengthTable = disc_table(&spec, n_max);
    match format {
        OutputFormat::Plain => {
            for row in &table.rows {
                writeln!(out, "{}-{} {}", row.n_low, row.n_high, row.value)?;
            }
        }
        OutputFormat::Csv => {
            for row in &table.rows {
                writeln!(out, "{},{},{}", row.n_low, row.n_high, row.value)?;
            }
        }
        OutputFormat::Json => {
            serde_json::to_writer(
                &mut *out,
                &TableDoc { q, n_max, rows: &table.rows },
            )?;
            writeln!(out)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct HtableDoc<'a> {
    p_max: u64,
    rows: &'a [HRow],
}

#[derive(Serialize)]
struct HRow {
    p: u64,
    h: u64,
}

fn cmd_htable(
    p_max: u64,
    assert_bound: bool,
    format: OutputFormat,
    out: &mut dyn Write,
) -> std::io::Result<i32> {
    let rows: Vec<HRow> = sieve_primes(p_max)
        .into_iter()
        .filter(|&p| is_in_p(p))
        .map(|p| HRow { p, h: universal_index(p).expect("member of P") })
        .collect();
    match format {
        OutputFormat::Plain => {
            for r in &rows {
                writeln!(out, "{} {}", r.p, r.h)?;
            }
        }
        OutputFormat::Csv => {
            for r in &rows {
                writeln!(out, "{},{}", r.p, r.h)?;
            }
        }
        OutputFormat::Json => {
            serde_json::to_writer(&mut *out, &HtableDoc { p_max, rows: &rows })?;
            writeln!(out)?;
        }
    }
    if assert_bound {
        let violations: Vec<&HRow> =
            rows.iter().filter(|r| r.p >= 31 && r.p < p_max && r.h > (r.p + 1) / 2).collect();
        if !violations.is_empty() {
            for v in violations {
                writeln!(out, "bound violated: h({}) = {}", v.p, v.h)?;
            }
            return Ok(EXIT_VERIFY_FAILED);
        }
        writeln!(out, "h(p) <= (p+1)/2 for all p in P with 31 <= p < {p_max}")?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ClassifyDoc {
    q: u64,
    artin: bool,
    fermat: bool,
    mirimanoff: bool,
    mod28: bool,
    class: u8,
    closed_form_case: ClosedFormCase,
}

impl From<&PrimeClassification> for ClassifyDoc {
    fn from(c: &PrimeClassification) -> Self {
        ClassifyDoc {
            q: c.q,
            artin: c.artin,
            fermat: c.fermat,
            mirimanoff: c.mirimanoff,
            mod28: c.mod28_exceptional,
            class: c.eight_class,
            closed_form_case: c.closed_form_case,
        }
    }
}

fn case_name(case: ClosedFormCase) -> &'static str {
    match case {
        ClosedFormCase::ArtinNotMirimanoff => "artin_not_mirimanoff",
        ClosedFormCase::ArtinMirimanoffNotFermat => "artin_mirimanoff_not_fermat",
        ClosedFormCase::ArtinMirimanoffFermat => "artin_mirimanoff_fermat",
        ClosedFormCase::NotArtin => "not_artin",
    }
}

fn load_or_compute_rows(count: u64, cache: Option<&PathBuf>) -> Vec<PrimeClassification> {
    if let Some(path) = cache {
        if let Ok(file) = File::open(path) {
            if let Some(rows) = read_classification_csv(&mut BufReader::new(file)) {
                if rows.len() as u64 >= count {
                    let mut rows = rows;
                    rows.truncate(count as usize);
                    return rows;
                }
            }
        }
    }
    let rows = classification_rows(count);
    if let Some(path) = cache {
        if let Ok(file) = File::create(path) {
            let mut writer = BufWriter::new(file);
            let _ = write_classification_csv(&mut writer, &rows);
            let _ = writer.flush();
        }
    }
    rows
}

fn cmd_classify(
    q: Option<u64>,
    scan: Option<u64>,
    format: OutputFormat,
    cache: Option<PathBuf>,
    out: &mut dyn Write,
) -> std::io::Result<i32> {
    let rows: Vec<PrimeClassification> = match (q, scan) {
        (Some(q), None) => match classify(q) {
            Ok(c) => vec![c],
            Err(e) => return usage(out, &e.to_string()),
        },
        (None, Some(count)) => {
            if count < 1 {
                return usage(out, "--scan needs N >= 1");
            }
            load_or_compute_rows(count, cache.as_ref())
        }
        _ => return usage(out, "give a prime q or --scan N"),
    };
    match format {
        OutputFormat::Plain => {
            for c in &rows {
                writeln!(
                    out,
                    "q={} artin={} fermat={} mirimanoff={} mod28={} class={} case={}",
                    c.q,
                    c.artin as u8,
                    c.fermat as u8,
                    c.mirimanoff as u8,
                    c.mod28_exceptional as u8,
                    c.eight_class,
                    case_name(c.closed_form_case),
                )?;
            }
        }
        OutputFormat::Csv => write_classification_csv(out, &rows)?,
        OutputFormat::Json => {
            let docs: Vec<ClassifyDoc> = rows.iter().map(ClassifyDoc::from).collect();
            serde_json::to_writer(&mut *out, &docs)?;
            writeln!(out)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_density(
    count: u64,
    format: OutputFormat,
    cache: Option<PathBuf>,
    out: &mut dyn Write,
) -> std::io::Result<i32> {
    if count < 1 {
        return usage(out, "N must be >= 1");
    }
    let rows = load_or_compute_rows(count, cache.as_ref());
    let report: DensityReport = density_from_rows(&rows);
    match format {
        OutputFormat::Plain => {
            writeln!(out, "primes {}", report.prime_count)?;
            writeln!(out, "class count empirical conjectural")?;
            for i in 0..8 {
                writeln!(
                    out,
                    "{} {} {:.6} {:.6}",
                    i + 1,
                    report.counts[i],
                    report.empirical[i],
                    report.conjectural[i],
                )?;
            }
        }
        OutputFormat::Csv => {
            writeln!(out, "class,count,empirical,conjectural")?;
            for i in 0..8 {
                writeln!(
                    out,
                    "{},{},{:.6},{:.6}",
                    i + 1,
                    report.counts[i],
                    report.empirical[i],
                    report.conjectural[i],
                )?;
            }
        }
        OutputFormat::Json => {
            serde_json::to_writer(&mut *out, &report)?;
            writeln!(out)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(suite: Suite, out: &mut dyn Write) -> std::io::Result<i32> {
    let outcomes = match suite {
        Suite::Oracle => verify::oracle_checks(),
        Suite::Period => verify::period_checks(),
        Suite::Index => verify::index_checks(),
        Suite::Iota2 => verify::iota2_checks(),
        Suite::Charsum => verify::charsum_checks(),
        Suite::All => verify::all_checks(),
    };
    let mut all_ok = true;
    for outcome in &outcomes {
        if outcome.passed() {
            writeln!(out, "{}: PASS ({} cases)", outcome.name, outcome.cases)?;
        } else {
            all_ok = false;
            writeln!(
                out,
                "{}: FAIL ({} of {} cases)",
                outcome.name, outcome.failure_count, outcome.cases
            )?;
            for f in &outcome.failures {
                writeln!(out, "  {f}")?;
            }
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
