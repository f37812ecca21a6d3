//! Exhaustive sweeps over strictly increasing weight vectors with checkpointing.
//!
//! Vectors with entries in `1..=B` correspond to nonempty subsets of `{1..B}`, i.e. to masks
//! `1..2^B`. The canonical order is increasing mask (colexicographic on subsets) and the rank of
//! a vector is `mask - 1`. Shard `s` holds the masks whose high bits equal `s`.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use bubble_core::arith::{gcd_u64, lcm};
use bubble_core::classify::{table1_color, Color};
use bubble_core::enumeration::{bubbles_sorted, Stage};
use bubble_core::Low;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Entries above this make `lcm(1..=B)` overflow `u64`.
pub const MAX_SWEEP_ENTRY: u32 = 46;
pub const DEFAULT_SHARD_BITS: u32 = 20;
pub const SCHEMA_VERSION: u32 = 1;
const LOW_BITS: u32 = 20;

pub fn mask_to_vector(mut mask: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        v.push(mask.trailing_zeros() as u64 + 1);
        mask &= mask - 1;
    }
    v
}

/// Inverse of [`mask_to_vector`]; `None` unless `w` is strictly increasing within `1..=63`.
pub fn vector_to_mask(w: &[u64]) -> Option<u64> {
    let mut mask = 0u64;
    let mut prev = 0;
    for &x in w {
        if x <= prev || x > 63 {
            return None;
        }
        mask |= 1 << (x - 1);
        prev = x;
    }
    (mask != 0).then_some(mask)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub max_entry: u32,
    pub n_min: usize,
    pub n_max: usize,
    pub shard_bits: u32,
    pub jobs: usize,
    pub only_colored: bool,
    /// Adds `timing_ns` to every record, which makes the output nondeterministic.
    pub timing: bool,
}

impl SweepConfig {
    pub fn new(max_entry: u32) -> Self {
        SweepConfig {
            max_entry,
            n_min: 3,
            n_max: max_entry.max(3) as usize,
            shard_bits: DEFAULT_SHARD_BITS,
            jobs: 1,
            only_colored: false,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.max_entry == 0 || self.max_entry > MAX_SWEEP_ENTRY {
            return Err(SweepError::Config(format!("max entry must lie in 1..={MAX_SWEEP_ENTRY}")));
        }
        if self.shard_bits == 0 || self.shard_bits > 40 {
            return Err(SweepError::Config("shard bits must lie in 1..=40".into()));
        }
        if self.n_min > self.n_max {
            return Err(SweepError::Config("n_min exceeds n_max".into()));
        }
        if self.jobs == 0 {
            return Err(SweepError::Config("jobs must be positive".into()));
        }
        Ok(())
    }

    /// Number of vectors enumerated before the arity filter, `2^B - 1`.
    pub fn total(&self) -> u64 {
        (1u64 << self.max_entry) - 1
    }

    pub fn shard_count(&self) -> usize {
        let bits = self.shard_bits.min(self.max_entry);
        (1usize << (self.max_entry - bits)).max(1)
    }

    fn effective_shard_bits(&self) -> u32 {
        self.shard_bits.min(self.max_entry)
    }

    /// Rank range `[start, end)` of shard `s`.
    pub fn shard_range(&self, s: usize) -> (u64, u64) {
        let bits = self.effective_shard_bits();
        let lo = (s as u64) << bits;
        let hi = ((s as u64 + 1) << bits).min(1u64 << self.max_entry);
        (lo.max(1) - 1, hi - 1)
    }

    pub fn shard_of_mask(&self, mask: u64) -> usize {
        (mask >> self.effective_shard_bits()) as usize
    }

    pub fn header(&self) -> String {
        format!(
            "# bubbles-sweep v{SCHEMA_VERSION} max_entry={} n_min={} n_max={} shard_bits={} only_colored={} timing={}",
            self.max_entry, self.n_min, self.n_max, self.shard_bits, self.only_colored, self.timing
        )
    }
}

#[derive(Debug)]
pub enum SweepError {
    Config(String),
    Io(io::Error),
    /// The checkpoint or output does not match what this configuration would produce.
    Corrupt(String),
}

impl std::fmt::Display for SweepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepError::Config(m) => write!(f, "invalid sweep configuration: {m}"),
            SweepError::Io(e) => write!(f, "i/o error: {e}"),
            SweepError::Corrupt(m) => write!(f, "refusing to resume, checkpoint corrupt: {m}"),
        }
    }
}

impl std::error::Error for SweepError {}

impl From<io::Error> for SweepError {
    fn from(e: io::Error) -> Self {
        SweepError::Io(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordBubble {
    pub u: Vec<i64>,
    pub dot: u128,
    pub k: u128,
    pub color: String,
}

/// One output line of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordLine {
    pub schema_version: u32,
    pub w: Vec<u64>,
    pub d: u128,
    pub stage: String,
    pub bubbles: Vec<RecordBubble>,
    /// Structural no-bubble criteria that apply; empty whenever bubbles were found.
    pub certificates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ns: Option<u64>,
}

/// Committed state of one shard as stored in the checkpoint file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepShard {
    pub shard_id: usize,
    /// Rank of the next vector to process.
    pub cursor: u64,
    pub completed: bool,
    pub checksum: String,
}

impl SweepShard {
    fn line(&self) -> String {
        format!("{} {} {} {}", self.shard_id, self.cursor, self.completed as u8, self.checksum)
    }

    fn parse(line: &str) -> Option<SweepShard> {
        let mut it = line.split_whitespace();
        let shard_id = it.next()?.parse().ok()?;
        let cursor = it.next()?.parse().ok()?;
        let completed = match it.next()? {
            "0" => false,
            "1" => true,
            _ => return None,
        };
        let checksum = it.next()?.to_string();
        if it.next().is_some() || checksum.len() != 16 || !checksum.bytes().all(|b| b.is_ascii_hexdigit()) {
            return None;
        }
        Some(SweepShard { shard_id, cursor, completed, checksum })
    }
}

pub fn checksum(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Log-bucketed histogram of per-vector costs in nanoseconds.
#[derive(Clone, Debug, Default)]
pub struct CostHistogram {
    buckets: BTreeMap<u32, u64>,
    count: u64,
    total_ns: u128,
}

impl CostHistogram {
    fn bucket(ns: u64) -> u32 {
        if ns < 16 {
            return ns as u32;
        }
        let e = 63 - ns.leading_zeros();
        16 + (e - 4) * 8 + ((ns >> (e - 3)) & 7) as u32
    }

    fn bucket_floor(b: u32) -> u64 {
        if b < 16 {
            return b as u64;
        }
        let e = (b - 16) / 8 + 4;
        (8 + ((b - 16) % 8) as u64) << (e - 3)
    }

    pub fn add(&mut self, ns: u64, times: u64) {
        if times == 0 {
            return;
        }
        *self.buckets.entry(Self::bucket(ns)).or_default() += times;
        self.count += times;
        self.total_ns += ns as u128 * times as u128;
    }

    pub fn merge(&mut self, other: &CostHistogram) {
        for (&b, &c) in &other.buckets {
            *self.buckets.entry(b).or_default() += c;
        }
        self.count += other.count;
        self.total_ns += other.total_ns;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean_ns(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.total_ns as f64 / self.count as f64
        }
    }

    /// Lower edge of the bucket holding the median; buckets are 1/8 of an octave wide.
    pub fn median_ns(&self) -> u64 {
        let half = self.count.div_ceil(2);
        let mut seen = 0;
        for (&b, &c) in &self.buckets {
            seen += c;
            if seen >= half {
                return Self::bucket_floor(b);
            }
        }
        0
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepStats {
    /// Vectors with arity in range.
    pub vectors: u64,
    /// Vectors that passed the maximum-one-weight screen.
    pub survivors: u64,
    pub rows: u64,
    pub shards_run: usize,
    pub shards_resumed: usize,
    pub cost: CostHistogram,
    pub elapsed_ms: u128,
}

impl SweepStats {
    fn merge(&mut self, o: &SweepStats) {
        self.vectors += o.vectors;
        self.survivors += o.survivors;
        self.rows += o.rows;
        self.cost.merge(&o.cost);
    }
}

#[derive(Clone, Copy, Default)]
struct PartStats {
    lcm: u64,
    sum: u64,
    gcd: u64,
    count: u32,
    top: u64,
    next: u64,
}

fn part_stats(mask: u64, offset: u64) -> PartStats {
    let mut p = PartStats { lcm: 1, ..Default::default() };
    let mut m = mask;
    while m != 0 {
        let x = m.trailing_zeros() as u64 + 1 + offset;
        p.lcm = lcm(p.lcm as u128, x as u128).expect("bounded entries") as u64;
        p.sum += x;
        p.gcd = gcd_u64(p.gcd, x);
        p.count += 1;
        p.next = p.top;
        p.top = x;
        m &= m - 1;
    }
    p
}

/// Statistics of every mask below `2^bits`, built incrementally from the mask without its top bit.
fn low_table(bits: u32) -> Vec<PartStats> {
    let size = 1usize << bits;
    let mut t = vec![PartStats { lcm: 1, ..Default::default() }; size];
    for m in 1..size {
        let hb = 63 - (m as u64).leading_zeros();
        let x = hb as u64 + 1;
        let p = t[m ^ (1 << hb)];
        t[m] = PartStats {
            lcm: lcm(p.lcm as u128, x as u128).expect("bounded entries") as u64,
            sum: p.sum + x,
            gcd: gcd_u64(p.gcd, x),
            count: p.count + 1,
            top: x,
            next: p.top,
        };
    }
    t
}

/// Maximum-one-weight screen on the combined statistics; false means no bubble.
fn screen(lo: &PartStats, hi: &PartStats) -> bool {
    let d = lcm(lo.lcm as u128, hi.lcm as u128).expect("bounded entries");
    let g = gcd_u64(lo.gcd, hi.gcd) as u128;
    let (top, next) = match hi.count {
        0 => (lo.top, lo.next),
        1 => (hi.top, lo.top),
        _ => (hi.top, hi.next),
    };
    let (top, next) = (top as u128 / g, next as u128 / g);
    let sum = (lo.sum + hi.sum) as u128 / g;
    let d = d / g;
    // w·α with α_i = top - 2 below the last index and next - 2 at it; entries are >= 1.
    let lhs = (top as i128 - 2) * (sum - top) as i128 + (next as i128 - 2) * top as i128;
    lhs >= 2 * d as i128
}

fn record_for(w: Vec<u64>, cfg: &SweepConfig, ns: Option<u64>) -> Option<RecordLine> {
    let run = bubbles_sorted(&w, Low::One).expect("valid sweep vector");
    if run.bubbles.is_empty() {
        return None;
    }
    let d = lcm_of(&w);
    let bubbles: Vec<RecordBubble> = run
        .bubbles
        .iter()
        .map(|b| (b, table1_color(&w, b)))
        .filter(|(_, c)| !cfg.only_colored || *c != Color::None)
        .map(|(b, c)| RecordBubble { u: b.u.clone(), dot: b.dot, k: b.k, color: c.as_str().to_string() })
        .collect();
    if bubbles.is_empty() {
        return None;
    }
    Some(RecordLine {
        schema_version: SCHEMA_VERSION,
        w,
        d,
        stage: stage_name(run.stage).to_string(),
        bubbles,
        certificates: Vec::new(),
        timing_ns: ns,
    })
}

fn lcm_of(w: &[u64]) -> u128 {
    w.iter().fold(1u128, |a, &x| lcm(a, x as u128).expect("bounded entries"))
}

fn stage_name(s: Stage) -> &'static str {
    match s {
        Stage::ArityBelowThree => "arity_below_three",
        Stage::MaxOneWeight => "max_one_weight",
        Stage::DivisorStep => "divisor_step",
        Stage::PositiveNonpositive => "positive_nonpositive",
        Stage::PositiveBound => "positive_bound",
        Stage::Probe => "probe",
        Stage::Enumerated => "enumerated",
    }
}

/// Runs one shard and returns its JSONL bytes and statistics.
pub fn run_shard(cfg: &SweepConfig, table: &[PartStatsHandle], s: usize) -> (Vec<u8>, SweepStats) {
    let bits = cfg.effective_shard_bits();
    let low_bits = LOW_BITS.min(cfg.max_entry);
    let low_mask = (1u64 << low_bits) - 1;
    let start = (s as u64) << bits;
    let end = ((s as u64 + 1) << bits).min(1u64 << cfg.max_entry);
    let mut out = Vec::new();
    let mut st = SweepStats::default();
    let mut screened = 0u64;
    let clock = Instant::now();
    let mut survivor_ns = 0u64;
    let mut hi_mask = u64::MAX;
    let mut hi = PartStats::default();
    for mask in start.max(1)..end {
        if mask >> low_bits != hi_mask {
            hi_mask = mask >> low_bits;
            hi = part_stats(hi_mask, low_bits as u64);
        }
        let lo = &table[(mask & low_mask) as usize].0;
        let n = (lo.count + hi.count) as usize;
        if n < cfg.n_min.max(3) || n > cfg.n_max {
            continue;
        }
        st.vectors += 1;
        if !screen(lo, &hi) {
            screened += 1;
            continue;
        }
        st.survivors += 1;
        let t = Instant::now();
        let rec = record_for(mask_to_vector(mask), cfg, None);
        let ns = t.elapsed().as_nanos() as u64;
        survivor_ns += ns;
        st.cost.add(ns, 1);
        if let Some(mut rec) = rec {
            if cfg.timing {
                rec.timing_ns = Some(ns);
            }
            serde_json::to_writer(&mut out, &rec).expect("serializable record");
            out.push(b'\n');
            st.rows += 1;
        }
    }
    let total_ns = clock.elapsed().as_nanos() as u64;
    if screened > 0 {
        st.cost.add(total_ns.saturating_sub(survivor_ns) / screened, screened);
    }
    (out, st)
}

/// Precomputed statistics of the low bits of a mask.
#[derive(Clone, Copy)]
pub struct PartStatsHandle(PartStats);

pub fn build_table(cfg: &SweepConfig) -> Vec<PartStatsHandle> {
    low_table(LOW_BITS.min(cfg.max_entry)).into_iter().map(PartStatsHandle).collect()
}

/// Where a sweep writes its records and progress.
pub enum SweepSink<'a> {
    Writer(&'a mut dyn Write),
    /// Output file plus checkpoint file; resumes when the checkpoint exists.
    Files { out: PathBuf, checkpoint: PathBuf },
}

/// Runs the full sweep. `stop_after` limits how many new shards are committed, which
/// simulates an interrupted run.
pub fn run_sweep(cfg: &SweepConfig, sink: SweepSink, stop_after: Option<usize>) -> Result<SweepStats, SweepError> {
    cfg.validate()?;
    let clock = Instant::now();
    let mut stats = SweepStats::default();
    match sink {
        SweepSink::Writer(w) => {
            drive(cfg, 0, stop_after, &mut stats, |_, bytes| {
                w.write_all(bytes)?;
                Ok(())
            })?;
            w.flush()?;
        }
        SweepSink::Files { out, checkpoint } => {
            let start = prepare_resume(cfg, &out, &checkpoint)?;
            stats.shards_resumed = start;
            let mut out_f = OpenOptions::new().append(true).open(&out)?;
            let mut ck = OpenOptions::new().append(true).open(&checkpoint)?;
            drive(cfg, start, stop_after, &mut stats, |s, bytes| {
                out_f.write_all(bytes)?;
                out_f.sync_data()?;
                let shard = SweepShard { shard_id: s, cursor: cfg.shard_range(s).1, completed: true, checksum: checksum(bytes) };
                writeln!(ck, "{}", shard.line())?;
                ck.sync_data()?;
                Ok(())
            })?;
        }
    }
    stats.elapsed_ms = clock.elapsed().as_millis();
    Ok(stats)
}

/// Runs shards `start..` on the worker pool and commits them in order.
fn drive(
    cfg: &SweepConfig,
    start: usize,
    stop_after: Option<usize>,
    stats: &mut SweepStats,
    mut commit: impl FnMut(usize, &[u8]) -> Result<(), SweepError>,
) -> Result<(), SweepError> {
    let count = cfg.shard_count();
    let end = stop_after.map_or(count, |k| (start + k).min(count));
    if start >= end {
        return Ok(());
    }
    let table = build_table(cfg);
    let next = AtomicUsize::new(start);
    let (tx, rx) = mpsc::channel::<(usize, Vec<u8>, SweepStats)>();
    std::thread::scope(|scope| {
        for _ in 0..cfg.jobs.min(end - start) {
            let tx = tx.clone();
            let (next, table) = (&next, &table);
            scope.spawn(move || loop {
                let s = next.fetch_add(1, Ordering::Relaxed);
                if s >= end {
                    break;
                }
                let (bytes, st) = run_shard(cfg, table, s);
                if tx.send((s, bytes, st)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending: BTreeMap<usize, (Vec<u8>, SweepStats)> = BTreeMap::new();
        let mut want = start;
        for (s, bytes, st) in rx {
            pending.insert(s, (bytes, st));
            while let Some((bytes, st)) = pending.remove(&want) {
                commit(want, &bytes)?;
                stats.merge(&st);
                stats.shards_run += 1;
                want += 1;
            }
        }
        Ok(())
    })
}

/// Validates existing files and returns the first shard still to run. Creates fresh files
/// when no checkpoint exists.
fn prepare_resume(cfg: &SweepConfig, out: &Path, checkpoint: &Path) -> Result<usize, SweepError> {
    let header = cfg.header();
    if !checkpoint.exists() {
        File::create(out)?;
        let mut ck = File::create(checkpoint)?;
        writeln!(ck, "{header}")?;
        ck.sync_data()?;
        return Ok(0);
    }
    let corrupt = |m: String| SweepError::Corrupt(m);
    let ck = BufReader::new(File::open(checkpoint)?);
    let mut lines = ck.lines();
    match lines.next().transpose()? {
        Some(h) if h == header => {}
        Some(h) => return Err(corrupt(format!("header {h:?} does not match {header:?}"))),
        None => return Err(corrupt("empty checkpoint file".into())),
    }
    let mut committed: Vec<SweepShard> = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let shard = SweepShard::parse(&line).ok_or_else(|| corrupt(format!("malformed checkpoint line {:?}", line)))?;
        if shard.shard_id != i || !shard.completed || shard.cursor != cfg.shard_range(i).1 {
            return Err(corrupt(format!("unexpected checkpoint entry {:?} at position {i}", line)));
        }
        committed.push(shard);
    }
    if committed.len() > cfg.shard_count() {
        return Err(corrupt("more shards committed than exist".into()));
    }
    // Recompute the per-shard checksums of the committed prefix of the output.
    let mut f = BufReader::new(File::open(out).map_err(|e| corrupt(format!("output file unreadable: {e}")))?);
    let mut hashers: Vec<Vec<u8>> = vec![Vec::new(); committed.len()];
    let mut keep = 0u64;
    let mut last_shard = 0usize;
    let mut buf = Vec::new();
    loop {
        buf.clear();
        let n = f.read_until(b'\n', &mut buf)?;
        if n == 0 {
            break;
        }
        let complete = buf.last() == Some(&b'\n');
        let rec: Option<RecordLine> = if complete { serde_json::from_slice(&buf).ok() } else { None };
        // Unreadable bytes end the scan; a committed shard missing them fails its checksum.
        let Some(rec) = rec else { break };
        let mask = vector_to_mask(&rec.w).ok_or_else(|| corrupt(format!("record with invalid w {:?}", rec.w)))?;
        let s = cfg.shard_of_mask(mask);
        if s < last_shard {
            return Err(corrupt(format!("record for shard {s} after shard {last_shard}")));
        }
        last_shard = s;
        if s >= committed.len() {
            break;
        }
        hashers[s].extend_from_slice(&buf);
        keep += n as u64;
    }
    for (s, bytes) in hashers.iter().enumerate() {
        if checksum(bytes) != committed[s].checksum {
            return Err(corrupt(format!("checksum mismatch for shard {s}")));
        }
    }
    OpenOptions::new().write(true).open(out)?.set_len(keep)?;
    Ok(committed.len())
}
