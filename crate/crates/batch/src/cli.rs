//! Command-line interface. [`run`] returns the process exit code.

use std::io::{self, Write};
use std::path::PathBuf;

use bubble_core::classify::{analyze, AnalysisReport};
use bubble_core::oracle::{oracle_bubbles, DEFAULT_BOX_CAP};
use bubble_core::primes::{
    extend_tuple, family_graded, family_rees, find_lex_smallest, kp, verify_family, DEFAULT_P1_CEILING,
    DEFAULT_SCAN_BUDGET,
};
use bubble_core::{bubbles, Low};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::stats::{delorme_stats, density_exact};
use crate::sweep::{run_sweep, SweepConfig, SweepSink, DEFAULT_SHARD_BITS};
use crate::tables::{check_table1, check_tuples, table1_entries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "bubbles", version, about = "Bubble enumeration for weighted polynomial rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bubbles, colours, generation and very-ampleness verdicts for one weight vector.
    Analyze(AnalyzeArgs),
    /// Exhaustive search over strictly increasing vectors, written as JSON Lines.
    Sweep(SweepArgs),
    /// Compare against the bundled tables (1: bubbles, 2 and 3: prime tuples).
    Tables(TablesArgs),
    /// Population statistics.
    #[command(subcommand)]
    Stats(StatsCommand),
    /// Prime tuples and the families built from them.
    #[command(subcommand)]
    Primes(PrimesCommand),
    /// Brute-force cross-checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(required = true)]
    pub weights: Vec<u64>,
    /// Lower bound on every bubble coordinate.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub low: u8,
    /// Multiplier `l` in the very-ampleness condition.
    #[arg(long, default_value_t = 1)]
    pub l: u64,
    /// Largest number of parts tried; defaults to `4k`.
    #[arg(long)]
    pub m_cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub max_entry: u32,
    #[arg(long, default_value_t = 3)]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, env = "BUBBLES_JOBS", default_value_t = 1)]
    pub jobs: usize,
    /// Checkpoint file; an existing one is validated and resumed. Requires `--out`.
    #[arg(long, requires = "out")]
    pub checkpoint: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Keep only blue and orange bubbles.
    #[arg(long)]
    pub only_colored: bool,
    #[arg(long, default_value_t = DEFAULT_SHARD_BITS)]
    pub shard_bits: u32,
    /// Record per-vector timing in every line (output is then not reproducible).
    #[arg(long)]
    pub timing: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TablesArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
    pub which: u8,
    /// Reproduce lexicographic minimality up to this tuple length.
    #[arg(long, default_value_t = 7)]
    pub limit: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum StatsCommand {
    /// How often the a-priori bounds beat Delorme's bound.
    Delorme {
        #[arg(long, default_value_t = 15)]
        max_entry: u32,
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 15)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact share of `{1..M}^n` without bubbles.
    Density {
        #[arg(long)]
        n: usize,
        #[arg(long = "m", required = true, value_delimiter = ',')]
        m: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
pub enum PrimesCommand {
    /// Lexicographically smallest tuple of `m` primes with a given invariant.
    Find {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = DEFAULT_P1_CEILING)]
        ceiling: u64,
    },
    /// Add one prime to a tail keeping the residues `u`.
    Extend {
        #[arg(long, required = true, num_args = 1..)]
        tail: Vec<u64>,
        #[arg(long, required = true, num_args = 1..)]
        u: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_SCAN_BUDGET)]
        budget: u64,
    },
    /// Invariant of a tuple and verification of the families it defines.
    Verify {
        #[arg(required = true)]
        p: Vec<u64>,
        /// Length of the family vectors; the smallest admissible length by default.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m_cap: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Compare the enumerator with exhaustive search over the bounding box.
    Compare {
        #[arg(required = true)]
        weights: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_BOX_CAP)]
        box_cap: u128,
    },
}

type Out<'a> = &'a mut dyn Write;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_MISMATCH
        }
    }
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<bubble_core::Error> for Failure {
    fn from(e: bubble_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn json_line<T: serde::Serialize>(out: Out, v: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)
}

fn tuple<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn spaced<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn dispatch(cmd: Command, out: Out, err: Out) -> Result<i32, Failure> {
    match cmd {
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Sweep(a) => cmd_sweep(a, out, err),
        Command::Tables(a) => cmd_tables(a, out),
        Command::Stats(s) => cmd_stats(s, out),
        Command::Primes(p) => cmd_primes(p, out),
        Command::Oracle(OracleCommand::Compare { weights, box_cap }) => cmd_oracle(&weights, box_cap, out),
    }
}

fn cmd_analyze(a: AnalyzeArgs, out: Out) -> Result<i32, Failure> {
    let low = if a.low == 0 { Low::Zero } else { Low::One };
    let report = analyze(&a.weights, low, a.l, a.m_cap)?;
    match a.format {
        Format::Json => json_line(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["w", "u", "dot", "color"]).map_err(csv_io)?;
            for b in &report.bubbles {
                w.write_record([spaced(&report.weights), spaced(&b.bubble.u), b.bubble.dot.to_string(), b.color.as_str().into()])
                    .map_err(csv_io)?;
            }
            w.flush()?;
        }
        Format::Text => write_analysis(out, &report)?,
    }
    Ok(EXIT_OK)
}

fn csv_io(e: csv::Error) -> Failure {
    Failure::Io(io::Error::other(e))
}

fn write_analysis(out: Out, r: &AnalysisReport) -> io::Result<()> {
    writeln!(out, "w = {}  d = {}  low = {}", tuple(&r.weights), r.d, r.low)?;
    writeln!(out, "search stopped at: {}", r.stage.label())?;
    if r.bubbles.is_empty() {
        writeln!(out, "no bubbles")?;
    } else {
        writeln!(out, "bubbles: {}", r.bubbles.len())?;
    }
    for b in &r.bubbles {
        writeln!(
            out,
            "  u = {}  w.u = {}  k = {}  color = {}  very-ampleness condition (l = {}): {}",
            tuple(&b.bubble.u),
            b.bubble.dot,
            b.bubble.k,
            b.color.as_str(),
            b.condition_2_2.l,
            b.condition_2_2.label()
        )?;
    }
    let labels: Vec<String> = r.certificates.iter().map(|c| c.label()).collect();
    if !labels.is_empty() {
        writeln!(out, "certificate: {}", labels.join("; "))?;
    }
    let g = &r.generation;
    let exact = |e: bool| if e { "" } else { " (upper bound)" };
    writeln!(out, "graded_at_d = {}  rees_at_d = {}", g.graded_at_d, g.rees_at_d)?;
    writeln!(
        out,
        "graded_min_k = {}{}  rees_min_k = {}{}",
        g.graded_min_k,
        exact(g.graded_min_k_exact),
        g.rees_min_k,
        exact(g.rees_min_k_exact)
    )?;
    if !r.fraction_field_sufficient {
        writeln!(out, "note: verdicts describe the combinatorial condition only")?;
    }
    Ok(())
}

fn cmd_sweep(a: SweepArgs, out: Out, err: Out) -> Result<i32, Failure> {
    if a.format != Format::Json {
        return Err(Failure::Usage("sweep writes JSON Lines only".into()));
    }
    let cfg = SweepConfig {
        max_entry: a.max_entry,
        n_min: a.n_min,
        n_max: a.n_max.unwrap_or(a.max_entry.max(3) as usize),
        shard_bits: a.shard_bits,
        jobs: a.jobs,
        only_colored: a.only_colored,
        timing: a.timing,
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let result = match (&a.checkpoint, &a.out) {
        (Some(ck), Some(path)) => run_sweep(&cfg, SweepSink::Files { out: path.clone(), checkpoint: ck.clone() }, None),
        (None, Some(path)) => {
            let mut f = io::BufWriter::new(std::fs::File::create(path)?);
            run_sweep(&cfg, SweepSink::Writer(&mut f), None)
        }
        _ => run_sweep(&cfg, SweepSink::Writer(out), None),
    };
    match result {
        Ok(st) => {
            writeln!(
                err,
                "vectors {}  screened in {}  rows {}  shards run {}  resumed {}  {} ms  per-vector mean {:.1} ns, median {} ns",
                st.vectors,
                st.survivors,
                st.rows,
                st.shards_run,
                st.shards_resumed,
                st.elapsed_ms,
                st.cost.mean_ns(),
                st.cost.median_ns()
            )?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "error: {e}")?;
            Ok(EXIT_MISMATCH)
        }
    }
}

fn cmd_tables(a: TablesArgs, out: Out) -> Result<i32, Failure> {
    if a.which == 1 {
        let r = check_table1();
        match a.format {
            Format::Json => json_line(out, &r)?,
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["w", "u", "dot", "color"]).map_err(csv_io)?;
                for row in crate::golden::table1() {
                    for (u, dot, c) in table1_entries(&row.w)? {
                        w.write_record([spaced(&row.w), spaced(&u), dot.to_string(), c.as_str().into()]).map_err(csv_io)?;
                    }
                }
                w.flush()?;
            }
            Format::Text => {
                for m in &r.mismatches {
                    writeln!(out, "mismatch at w = {}", tuple(&m.w))?;
                    for (u, dot, c) in &m.expected {
                        writeln!(out, "  - {} {} {}", tuple(u), dot, c)?;
                    }
                    for (u, dot, c) in &m.found {
                        writeln!(out, "  + {} {} {}", tuple(u), dot, c)?;
                    }
                }
                writeln!(out, "table 1: {} rows, {} bubbles, {} mismatches ({} ms)", r.rows, r.bubbles, r.mismatches.len(), r.elapsed_ms)?;
            }
        }
        return Ok(if r.ok() { EXIT_OK } else { EXIT_MISMATCH });
    }
    let r = check_tuples(a.which, a.limit);
    match a.format {
        Format::Json => json_line(out, &r)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["m", "p", "k", "k_ok", "minimal"]).map_err(csv_io)?;
            for row in &r.rows {
                let k = row.k.map_or(String::new(), |k| k.to_string());
                let minimal = row.minimal.map_or(String::new(), |b| b.to_string());
                w.write_record([row.m.to_string(), spaced(&row.p), k, row.k_ok.to_string(), minimal]).map_err(csv_io)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for row in &r.rows {
                let minimal = match (row.minimal, &row.found) {
                    (None, _) => "minimality not checked".to_string(),
                    (Some(true), _) => "minimal".to_string(),
                    (Some(false), Some(f)) => format!("NOT minimal, smallest is {}", tuple(f)),
                    (Some(false), None) => "NOT minimal, no tuple below the ceiling".to_string(),
                };
                let k = row.k.map_or("invalid".to_string(), |k| k.to_string());
                let mark = if row.k_ok { "ok" } else { "MISMATCH" };
                writeln!(out, "m = {:2}  p = {}  k_p = {} {}  {}", row.m, tuple(&row.p), k, mark, minimal)?;
            }
            writeln!(out, "table {}: {} rows, minimality up to m = {}, {} ({} ms)", r.table, r.rows.len(), r.limit, if r.ok() { "ok" } else { "mismatch" }, r.elapsed_ms)?;
        }
    }
    Ok(if r.ok() { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_stats(s: StatsCommand, out: Out) -> Result<i32, Failure> {
    match s {
        StatsCommand::Delorme { max_entry, n_min, n_max, format } => {
            if max_entry == 0 || max_entry > 30 || n_min > n_max {
                return Err(Failure::Usage("need 1 <= max-entry <= 30 and n-min <= n-max".into()));
            }
            let r = delorme_stats(max_entry, n_min, n_max)?;
            match format {
                Format::Json => json_line(out, &r)?,
                _ => {
                    writeln!(out, "vectors: {}", r.vectors)?;
                    writeln!(out, "all-positive estimate below G(w): {} ({:.4}%)", r.estimate_wins, 100.0 * r.estimate_fraction())?;
                    writeln!(out, "search box bound below G(w): {} ({:.4}%)", r.gamma_wins, 100.0 * r.gamma_fraction())?;
                }
            }
        }
        StatsCommand::Density { n, m, format } => {
            if n == 0 || m.contains(&0) {
                return Err(Failure::Usage("n and M must be positive".into()));
            }
            let points = m.iter().map(|&m| density_exact(n, m)).collect::<bubble_core::Result<Vec<_>>>()?;
            match format {
                Format::Json => json_line(out, &points)?,
                Format::Csv => {
                    writeln!(out, "n,M,total,bubble_free,fraction")?;
                    for p in &points {
                        writeln!(out, "{},{},{},{},{:.8}", p.n, p.m, p.total, p.bubble_free, p.fraction())?;
                    }
                }
                Format::Text => {
                    for p in &points {
                        writeln!(out, "p({}, {}) = {}/{} = {:.8}", p.n, p.m, p.bubble_free, p.total, p.fraction())?;
                    }
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_primes(p: PrimesCommand, out: Out) -> Result<i32, Failure> {
    match p {
        PrimesCommand::Find { m, k, ceiling } => {
            let t = find_lex_smallest(m, k, ceiling)?;
            writeln!(out, "p = {}  alpha = {}  k_p = {}", tuple(&t.p), tuple(&t.alpha), t.k)?;
        }
        PrimesCommand::Extend { tail, u, budget } => {
            let t = extend_tuple(&tail, &u, budget)?;
            writeln!(out, "p = {}  alpha = {}  k_p = {}", tuple(&t.p), tuple(&t.alpha), t.k)?;
        }
        PrimesCommand::Verify { p, n, m_cap } => {
            let t = kp(&p)?;
            writeln!(out, "p = {}  alpha = {}  k_p = {}", tuple(&t.p), tuple(&t.alpha), t.k)?;
            let mut ok = t.ceiling_identity_holds();
            writeln!(out, "ceiling identity: {}", if ok { "holds" } else { "FAILS" })?;
            let len = t.p.len();
            let mut families = Vec::new();
            if t.k == 1 && len >= 3 {
                families.push(("graded", family_graded(&t, n.unwrap_or(len + 1))?));
            }
            if t.k >= 2 && t.k as usize == len - 1 {
                families.push(("rees", family_rees(&t, n.unwrap_or(len))?));
            }
            for (name, f) in families {
                let r = verify_family(&f, m_cap)?;
                writeln!(out, "{name} family: w = {}  u = {}  w.u = {}  d = {}", tuple(&f.w), tuple(&f.u), f.dot, f.d)?;
                writeln!(
                    out,
                    "  bubble {}  weight {}  condition (l = {}) {}  upper bound via {} {}  well-formed {}",
                    r.is_bubble,
                    r.dot_ok,
                    r.condition_2_2.l,
                    r.condition_2_2.label(),
                    r.upper_bound_method,
                    r.upper_bound_ok,
                    r.well_formed
                )?;
                ok &= r.passes();
            }
            return Ok(if ok { EXIT_OK } else { EXIT_MISMATCH });
        }
    }
    Ok(EXIT_OK)
}

fn cmd_oracle(weights: &[u64], box_cap: u128, out: Out) -> Result<i32, Failure> {
    let key = |b: &bubble_core::Bubble| (b.dot, b.u.clone());
    let mut fast = bubbles(weights, Low::Zero)?;
    let mut slow = oracle_bubbles(weights, box_cap)?;
    fast.sort_by_key(key);
    slow.sort_by_key(key);
    let same = fast == slow;
    writeln!(out, "w = {}  enumerator {}  oracle {}  {}", tuple(weights), fast.len(), slow.len(), if same { "agree" } else { "DISAGREE" })?;
    if !same {
        for b in fast.iter().filter(|b| !slow.contains(b)) {
            writeln!(out, "  only enumerator: {}", tuple(&b.u))?;
        }
        for b in slow.iter().filter(|b| !fast.contains(b)) {
            writeln!(out, "  only oracle: {}", tuple(&b.u))?;
        }
    }
    Ok(if same { EXIT_OK } else { EXIT_MISMATCH })
}
