//! Exhaustive enumeration of representable and circularly representable
//! sets of order `n`.
//!
//! The search graph has nodes `(S, u, v)`: a set `S` of length-`n` words
//! together with the length-`n` prefix `u` and suffix `v` of a word whose
//! factor set is `S`. Appending a letter moves `(S, u, v)` to
//! `(S ∪ {x}, u, x)` where `x` overlaps `v` in `n - 1` letters. Breadth-first
//! search from the nodes `({u}, u, u)` visits every valid node; depth `d`
//! corresponds to a witness of length `n + d`.
//!
//! The prefix `u` never changes along an edge, so the search splits into
//! `2^n` independent shards, one per `u`. A walk of length `d >= 1` that
//! ends at `(S, u, u)` closes up into a circular witness of length `d`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write as _};
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Deadline};
use crate::error::{Error, Progress, Result};
use crate::factor_set::{shortest_circular_witness, shortest_witness, FactorSet};
use crate::word::{factors, Word};

const NONE: u8 = u8::MAX;

/// A node `(S, u, v)` of the search graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchNode {
    pub set: FactorSet,
    pub prefix: Word,
    pub suffix: Word,
}

/// Summary of one order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub schema_version: u32,
    pub n: usize,
    pub circ_count: u64,
    pub rep_count: u64,
    pub nu: usize,
    pub mu: usize,
    pub longest_circ_witness: Word,
    pub longest_witness: Word,
    /// shortest-witness length -> number of representable sets
    pub sw_histogram: BTreeMap<usize, u64>,
    /// shortest-circular-witness length -> number of circularly representable sets
    pub scw_histogram: BTreeMap<usize, u64>,
}

/// Reference values `(n, |C_n|, |R_n|, nu_n, mu_n)` for orders 1 to 5.
pub const KNOWN_ROWS: [(usize, u64, u64, usize, usize); 5] = [
    (1, 3, 3, 2, 2),
    (2, 6, 14, 4, 5),
    (3, 27, 121, 9, 10),
    (4, 973, 5921, 24, 24),
    (5, 2466131, 20020315, 82, 77),
];

/// Runtime figures kept apart from the result so the result stays
/// byte-identical across runs.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunStats {
    pub elapsed_ms: u128,
    pub states_visited: u64,
    pub max_depth: u32,
    pub shards_searched: usize,
    pub shards_resumed: usize,
    pub table_bytes_per_worker: u64,
}

#[derive(Debug, Clone, Default)]
pub struct EnumerateOptions {
    pub budget: Budget,
    /// Orders above 4 are refused unless this is set.
    pub allow_order_five: bool,
    /// Use hash-based visited sets even where dense tables would fit.
    pub sparse: bool,
    /// Completed shards are appended here and skipped on a later run.
    pub checkpoint: Option<PathBuf>,
}

impl EnumerateOptions {
    pub fn with_budget(budget: Budget) -> EnumerateOptions {
        EnumerateOptions {
            budget,
            ..EnumerateOptions::default()
        }
    }
}

fn check_order(n: usize, allow_order_five: bool) -> Result<()> {
    match n {
        1..=4 => Ok(()),
        5 if allow_order_five => Ok(()),
        5 => Err(Error::Precondition(
            "order 5 enumeration must be enabled explicitly".into(),
        )),
        _ => Err(Error::OutOfRange {
            what: "enumeration order",
            value: n,
            allowed: "1..=4, or 5 with opt-in",
        }),
    }
}

/// Per-set minimum depths: `sw` is the first depth at which a set appears,
/// `scw` the shortest closing walk.
enum SetTable {
    Dense { sw: Vec<u8>, scw: Vec<u8> },
    Sparse(HashMap<u64, (u8, u8)>),
}

impl SetTable {
    fn new(n: usize, sparse: bool) -> SetTable {
        if sparse || n > 4 {
            SetTable::Sparse(HashMap::new())
        } else {
            let size = 1usize << (1 << n);
            SetTable::Dense {
                sw: vec![NONE; size],
                scw: vec![NONE; size],
            }
        }
    }

    fn record(&mut self, set: u64, sw: u8, scw: u8) {
        match self {
            SetTable::Dense { sw: a, scw: b } => {
                let i = set as usize;
                a[i] = a[i].min(sw);
                b[i] = b[i].min(scw);
            }
            SetTable::Sparse(map) => {
                let e = map.entry(set).or_insert((NONE, NONE));
                e.0 = e.0.min(sw);
                e.1 = e.1.min(scw);
            }
        }
    }

    /// Entries with at least one finite value, ascending by set.
    fn entries(&self) -> Vec<(u64, u8, u8)> {
        match self {
            SetTable::Dense { sw, scw } => sw
                .iter()
                .zip(scw)
                .enumerate()
                .filter(|(_, (&a, &b))| a != NONE || b != NONE)
                .map(|(i, (&a, &b))| (i as u64, a, b))
                .collect(),
            SetTable::Sparse(map) => {
                let mut v: Vec<_> = map.iter().map(|(&s, &(a, b))| (s, a, b)).collect();
                v.sort_unstable();
                v
            }
        }
    }

    fn merge(&mut self, other: &SetTable) {
        for (s, a, b) in other.entries() {
            self.record(s, a, b);
        }
    }

    fn approx_bytes(&self) -> u64 {
        match self {
            SetTable::Dense { sw, .. } => 2 * sw.len() as u64,
            SetTable::Sparse(map) => 24 * map.capacity() as u64,
        }
    }
}

trait Visited {
    fn visit(&mut self, key: u64, depth: u8) -> bool;
    fn approx_bytes(&self) -> u64;
}

/// Depth per `(S, v)` state, `NONE` when unvisited.
struct DenseVisited(Vec<u8>);

impl Visited for DenseVisited {
    fn visit(&mut self, key: u64, depth: u8) -> bool {
        let slot = &mut self.0[key as usize];
        if *slot == NONE {
            *slot = depth;
            true
        } else {
            false
        }
    }

    fn approx_bytes(&self) -> u64 {
        self.0.len() as u64
    }
}

struct SparseVisited(HashSet<u64>);

impl Visited for SparseVisited {
    fn visit(&mut self, key: u64, _depth: u8) -> bool {
        self.0.insert(key)
    }

    fn approx_bytes(&self) -> u64 {
        16 * self.0.capacity() as u64
    }
}

fn dense_state_count(n: usize) -> u64 {
    1u64 << ((1 << n) + n)
}

struct ShardOutcome {
    states: u64,
    max_depth: u32,
}

struct Limits<'a> {
    deadline: Deadline,
    bytes: u64,
    progress: &'a ProgressCounters,
}

#[derive(Default)]
struct ProgressCounters {
    shards_done: AtomicUsize,
    shards_total: AtomicUsize,
    states: AtomicU64,
}

impl ProgressCounters {
    fn snapshot(&self, depth: u32) -> Progress {
        Progress {
            shards_done: self.shards_done.load(Ordering::Relaxed),
            shards_total: self.shards_total.load(Ordering::Relaxed),
            states_visited: self.states.load(Ordering::Relaxed),
            max_depth: depth,
        }
    }
}

/// Breadth-first search of the shard with prefix `u`.
fn search_shard(
    n: usize,
    u: u64,
    visited: &mut impl Visited,
    sets: &mut SetTable,
    limits: &Limits<'_>,
) -> Result<ShardOutcome> {
    let nm = (1u64 << n) - 1;
    let start = (1u64 << u) << n | u;
    visited.visit(start, 0);
    sets.record(1 << u, 0, NONE);
    let mut frontier = vec![start];
    let mut states = 1u64;
    let mut depth = 0u32;
    while !frontier.is_empty() {
        if depth + 1 >= NONE as u32 {
            return Err(Error::BudgetExhausted {
                what: "search depth exceeds depth table range".into(),
                progress: limits.progress.snapshot(depth),
            });
        }
        let next_depth = (depth + 1) as u8;
        let mut next = Vec::new();
        for &key in &frontier {
            let set = key >> n;
            let v = key & nm;
            for b in 0..2 {
                let x = ((v << 1) | b) & nm;
                let grown = set | 1 << x;
                if x == u {
                    sets.record(grown, NONE, next_depth);
                }
                let nkey = grown << n | x;
                if visited.visit(nkey, next_depth) {
                    sets.record(grown, next_depth, NONE);
                    next.push(nkey);
                }
            }
        }
        states += next.len() as u64;
        limits
            .progress
            .states
            .fetch_add(next.len() as u64, Ordering::Relaxed);
        depth += 1;
        let bytes = visited.approx_bytes()
            + sets.approx_bytes()
            + 8 * (frontier.capacity() + next.capacity()) as u64;
        if bytes > limits.bytes {
            return Err(Error::BudgetExhausted {
                what: format!("shard {u} needs more than {} bytes", limits.bytes),
                progress: limits.progress.snapshot(depth),
            });
        }
        if limits.deadline.expired() {
            return Err(Error::BudgetExhausted {
                what: "wall-clock limit reached".into(),
                progress: limits.progress.snapshot(depth),
            });
        }
        frontier = next;
    }
    Ok(ShardOutcome {
        states,
        max_depth: depth.saturating_sub(1),
    })
}

fn worker_count(budget: &Budget) -> u64 {
    if budget.workers == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get()) as u64
    } else {
        budget.workers as u64
    }
}

/// Breadth-first enumeration of every valid node.
pub fn enumerate(n: usize, opts: &EnumerateOptions) -> Result<EnumerationResult> {
    enumerate_with_stats(n, opts).map(|(r, _)| r)
}

pub fn enumerate_with_stats(
    n: usize,
    opts: &EnumerateOptions,
) -> Result<(EnumerationResult, RunStats)> {
    let (table, stats) = search_all(n, opts)?;
    Ok((summarize(n, &table)?, stats))
}

/// Shortest witness lengths of one set as found by the search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetRecord {
    pub set: FactorSet,
    pub sw: Option<usize>,
    pub scw: Option<usize>,
}

/// Every set reached by the search, ascending by bitmap.
pub fn set_records(n: usize, opts: &EnumerateOptions) -> Result<Vec<SetRecord>> {
    let (table, _) = search_all(n, opts)?;
    table
        .entries()
        .into_iter()
        .map(|(bits, sw, scw)| {
            Ok(SetRecord {
                set: set_from_bits(n, bits)?,
                sw: (sw != NONE).then_some(n + sw as usize),
                scw: (scw != NONE).then_some(scw as usize),
            })
        })
        .collect()
}

fn search_all(n: usize, opts: &EnumerateOptions) -> Result<(SetTable, RunStats)> {
    check_order(n, opts.allow_order_five)?;
    let started = Instant::now();
    let budget = &opts.budget;
    let sparse = opts.sparse || n > 4;
    let workers = worker_count(budget);
    let per_worker = budget.max_memory_bytes / workers.max(1);
    if !sparse {
        let need = dense_state_count(n) + 2 * (1u64 << (1 << n));
        budget.check_memory(
            need * workers + 2 * (1u64 << (1 << n)),
            "dense shard tables",
        )?;
    }

    let mut checkpoint = match &opts.checkpoint {
        Some(path) => Some(Checkpoint::open(path, n)?),
        None => None,
    };
    let global = Mutex::new(SetTable::new(n, sparse));
    let mut done: Vec<u64> = Vec::new();
    if let Some(cp) = &checkpoint {
        let mut g = global.lock().expect("lock");
        for rec in &cp.completed {
            done.push(rec.shard);
            for &(s, a, b) in &rec.sets {
                g.record(s, a.unwrap_or(NONE), b.unwrap_or(NONE));
            }
        }
    }
    let todo: Vec<u64> = (0..1u64 << n).filter(|u| !done.contains(u)).collect();

    let counters = ProgressCounters::default();
    counters.shards_total.store(1 << n, Ordering::Relaxed);
    counters.shards_done.store(done.len(), Ordering::Relaxed);
    let limits = Limits {
        deadline: budget.start(),
        bytes: per_worker,
        progress: &counters,
    };
    let max_depth = AtomicU64::new(0);
    let writer = checkpoint.as_mut().map(|cp| Mutex::new(&mut cp.file));

    budget.install(|| {
        todo.par_iter().try_for_each(|&u| -> Result<()> {
            let mut sets = SetTable::new(n, sparse);
            let outcome = if sparse {
                search_shard(n, u, &mut SparseVisited(HashSet::new()), &mut sets, &limits)?
            } else {
                let mut table = DenseVisited(vec![NONE; dense_state_count(n) as usize]);
                search_shard(n, u, &mut table, &mut sets, &limits)?
            };
            max_depth.fetch_max(outcome.max_depth as u64, Ordering::Relaxed);
            let mut g = global.lock().expect("lock");
            g.merge(&sets);
            if let Some(w) = &writer {
                let rec = ShardRecord::from_table(u, &outcome, &sets);
                let mut file = w.lock().expect("lock");
                serde_json::to_writer(&mut **file, &rec)?;
                file.write_all(b"\n")?;
                file.flush()?;
            }
            drop(g);
            counters.shards_done.fetch_add(1, Ordering::Relaxed);
            Ok(())
        })
    })?;

    let table = global.into_inner().expect("lock");
    let stats = RunStats {
        elapsed_ms: started.elapsed().as_millis(),
        states_visited: counters.states.load(Ordering::Relaxed),
        max_depth: max_depth.load(Ordering::Relaxed) as u32,
        shards_searched: todo.len(),
        shards_resumed: done.len(),
        table_bytes_per_worker: if sparse { 0 } else { dense_state_count(n) },
    };
    Ok((table, stats))
}

/// Builds the summary from per-set depths, picking the lexicographically
/// least shortest witness among the extremal sets.
fn summarize(n: usize, table: &SetTable) -> Result<EnumerationResult> {
    let entries = table.entries();
    let mut sw_histogram = BTreeMap::new();
    let mut scw_histogram = BTreeMap::new();
    let (mut rep_count, mut circ_count) = (0u64, 0u64);
    let (mut max_sw, mut max_scw) = (0u8, 0u8);
    for &(_, sw, scw) in &entries {
        if sw != NONE {
            rep_count += 1;
            *sw_histogram.entry(n + sw as usize).or_insert(0) += 1;
            max_sw = max_sw.max(sw);
        }
        if scw != NONE {
            circ_count += 1;
            *scw_histogram.entry(scw as usize).or_insert(0) += 1;
            max_scw = max_scw.max(scw);
        }
    }
    let longest_witness = entries
        .iter()
        .filter(|e| e.1 == max_sw)
        .map(|e| {
            let set = set_from_bits(n, e.0)?;
            shortest_witness(&set)?.witness.ok_or(Error::UnknownNode)
        })
        .collect::<Result<Vec<Word>>>()?
        .into_iter()
        .min()
        .ok_or(Error::EmptySet)?;
    let longest_circ_witness = entries
        .iter()
        .filter(|e| e.2 == max_scw)
        .map(|e| {
            let set = set_from_bits(n, e.0)?;
            shortest_circular_witness(&set)?
                .witness
                .ok_or(Error::UnknownNode)
        })
        .collect::<Result<Vec<Word>>>()?
        .into_iter()
        .min()
        .ok_or(Error::EmptySet)?;
    Ok(EnumerationResult {
        schema_version: crate::SCHEMA_VERSION,
        n,
        circ_count,
        rep_count,
        nu: max_scw as usize,
        mu: n + max_sw as usize,
        longest_circ_witness,
        longest_witness,
        sw_histogram,
        scw_histogram,
    })
}

fn set_from_bits(n: usize, bits: u64) -> Result<FactorSet> {
    FactorSet::from_codes(n, (0..1u64 << n).filter(|c| bits >> c & 1 == 1))
}

fn set_bits(set: &FactorSet) -> u64 {
    set.codes().fold(0, |acc, c| acc | 1 << c)
}

/// One completed shard as stored in a checkpoint file.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ShardRecord {
    shard: u64,
    max_depth: u32,
    states: u64,
    /// `[set bitmap, first depth, shortest closing walk]`
    sets: Vec<(u64, Option<u8>, Option<u8>)>,
}

impl ShardRecord {
    fn from_table(shard: u64, outcome: &ShardOutcome, table: &SetTable) -> ShardRecord {
        let opt = |d: u8| (d != NONE).then_some(d);
        ShardRecord {
            shard,
            max_depth: outcome.max_depth,
            states: outcome.states,
            sets: table
                .entries()
                .into_iter()
                .map(|(s, a, b)| (s, opt(a), opt(b)))
                .collect(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointHeader {
    format: String,
    version: u32,
    n: usize,
}

const CHECKPOINT_FORMAT: &str = "factorsets-enumeration-checkpoint";
const CHECKPOINT_VERSION: u32 = 1;

/// Line-delimited JSON: a header line, then one [`ShardRecord`] per
/// completed shard. A truncated final line is ignored on resume.
struct Checkpoint {
    file: File,
    completed: Vec<ShardRecord>,
}

impl Checkpoint {
    fn open(path: &PathBuf, n: usize) -> Result<Checkpoint> {
        let mut completed: Vec<ShardRecord> = Vec::new();
        let mut torn = false;
        let exists = path.exists() && std::fs::metadata(path)?.len() > 0;
        if exists {
            let reader = BufReader::new(File::open(path)?);
            let mut lines = reader.lines();
            let header: CheckpointHeader = match lines.next() {
                Some(line) => serde_json::from_str(&line?)?,
                None => return Err(Error::Parse("empty checkpoint".into())),
            };
            if header.format != CHECKPOINT_FORMAT
                || header.version != CHECKPOINT_VERSION
                || header.n != n
            {
                return Err(Error::Parse(format!(
                    "checkpoint {} is for {} v{} n={}, expected n={n}",
                    path.display(),
                    header.format,
                    header.version,
                    header.n
                )));
            }
            for line in lines {
                match serde_json::from_str::<ShardRecord>(&line?) {
                    Ok(rec) if !completed.iter().any(|r| r.shard == rec.shard) => {
                        completed.push(rec)
                    }
                    Ok(_) => {}
                    Err(_) => {
                        torn = true;
                        break;
                    }
                }
            }
        }
        let file = if exists && !torn {
            OpenOptions::new().append(true).open(path)?
        } else {
            // fresh file, or rewrite without the damaged tail
            let mut file = File::create(path)?;
            let header = CheckpointHeader {
                format: CHECKPOINT_FORMAT.into(),
                version: CHECKPOINT_VERSION,
                n,
            };
            serde_json::to_writer(&mut file, &header)?;
            file.write_all(b"\n")?;
            for rec in &completed {
                serde_json::to_writer(&mut file, rec)?;
                file.write_all(b"\n")?;
            }
            file.flush()?;
            file
        };
        Ok(Checkpoint { file, completed })
    }
}

/// Every valid node of the search graph for `n <= 4`, with its distance
/// from the start nodes. Depth tables double as back-pointers.
pub struct ValidNodes {
    n: usize,
    /// one depth table per prefix, indexed by `S << n | v`
    shards: Vec<Vec<u8>>,
}

pub fn bfs_valid_nodes(n: usize, budget: &Budget) -> Result<ValidNodes> {
    check_order(n, false)?;
    let total = dense_state_count(n) << n;
    budget.check_memory(total, "valid-node tables")?;
    let counters = ProgressCounters::default();
    counters.shards_total.store(1 << n, Ordering::Relaxed);
    let limits = Limits {
        deadline: budget.start(),
        bytes: budget.max_memory_bytes,
        progress: &counters,
    };
    let shards = budget.install(|| {
        (0..1u64 << n)
            .into_par_iter()
            .map(|u| {
                let mut table = DenseVisited(vec![NONE; dense_state_count(n) as usize]);
                let mut sets = SetTable::new(n, true);
                search_shard(n, u, &mut table, &mut sets, &limits)?;
                Ok(table.0)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(ValidNodes { n, shards })
}

impl ValidNodes {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.shards
            .iter()
            .map(|t| t.iter().filter(|&&d| d != NONE).count())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Valid nodes with their depths, by prefix, then set, then suffix.
    pub fn iter(&self) -> impl Iterator<Item = (SearchNode, u32)> + '_ {
        let n = self.n;
        self.shards.iter().enumerate().flat_map(move |(u, table)| {
            table
                .iter()
                .enumerate()
                .filter(|(_, &d)| d != NONE)
                .map(move |(key, &d)| {
                    let key = key as u64;
                    let node = SearchNode {
                        set: set_from_bits(n, key >> n).expect("valid order"),
                        prefix: Word::from_code(u as u64, n),
                        suffix: Word::from_code(key & ((1 << n) - 1), n),
                    };
                    (node, d as u32)
                })
        })
    }

    fn key(&self, node: &SearchNode) -> Option<(usize, u64)> {
        let n = self.n;
        if node.set.order() != n || node.prefix.len() != n || node.suffix.len() != n {
            return None;
        }
        let u = node.prefix.code()? as usize;
        Some((u, set_bits(&node.set) << n | node.suffix.code()?))
    }

    pub fn depth(&self, node: &SearchNode) -> Option<u32> {
        let (u, key) = self.key(node)?;
        let d = self.shards[u][key as usize];
        (d != NONE).then_some(d as u32)
    }

    /// Rebuilds a word of length `n + depth` with the node's prefix, suffix
    /// and factor set by walking depth tables back to the start node.
    pub fn witness_at_depth(&self, node: &SearchNode) -> Result<Word> {
        let n = self.n;
        let (u, mut key) = self.key(node).ok_or(Error::UnknownNode)?;
        let table = &self.shards[u];
        let mut depth = table[key as usize];
        if depth == NONE {
            return Err(Error::UnknownNode);
        }
        let nm = (1u64 << n) - 1;
        let mut tail = Vec::new();
        while depth > 0 {
            let set = key >> n;
            let v = key & nm;
            let prev_v = [v >> 1, 1 << (n - 1) | v >> 1];
            let prev_sets = [set, set & !(1 << v)];
            let prev = prev_v
                .iter()
                .flat_map(|&pv| prev_sets.iter().map(move |&ps| ps << n | pv))
                .find(|&k| table[k as usize] == depth - 1 && (k >> n) | 1 << v == set)
                .ok_or(Error::UnknownNode)?;
            tail.push((v & 1) as u8);
            key = prev;
            depth -= 1;
        }
        let mut letters = Word::from_code(u as u64, n).letters().to_vec();
        letters.extend(tail.iter().rev());
        Word::new(letters)
    }
}

/// Per-set bests found by plain enumeration: (length, code) of the
/// lexicographically least shortest witness.
struct BruteTable {
    linear: Vec<(u8, u64)>,
    circular: Vec<(u8, u64)>,
}

impl BruteTable {
    fn new(n: usize) -> BruteTable {
        let size = 1usize << (1 << n);
        BruteTable {
            linear: vec![(NONE, 0); size],
            circular: vec![(NONE, 0); size],
        }
    }

    fn merge(mut self, other: BruteTable) -> BruteTable {
        for (a, b) in self.linear.iter_mut().zip(other.linear) {
            *a = (*a).min(b);
        }
        for (a, b) in self.circular.iter_mut().zip(other.circular) {
            *a = (*a).min(b);
        }
        self
    }
}

const BRUTE_SPLIT: usize = 10;
pub const MAX_BRUTE_LENGTH: usize = 34;

/// Tabulates the same statistics as [`enumerate`] by running through every
/// word of length `n..=max_len` and every circular word of length
/// `1..=max_len`. Exact only when `max_len` is at least `mu_n` and `nu_n`.
pub fn brute_force_enumerate(
    n: usize,
    max_len: usize,
    budget: &Budget,
) -> Result<EnumerationResult> {
    check_order(n, false)?;
    if max_len < n || max_len > MAX_BRUTE_LENGTH {
        return Err(Error::OutOfRange {
            what: "brute-force max length",
            value: max_len,
            allowed: "n..=34",
        });
    }
    let table_bytes = 18u64 << (1 << n);
    budget.check_memory(
        table_bytes * (2 * worker_count(budget) + 1),
        "brute-force tables",
    )?;
    let deadline = budget.start();
    let split = max_len.min(BRUTE_SPLIT);

    let mut table = BruteTable::new(n);
    for len in 1..split {
        for code in 0..1u64 << len {
            visit_word(n, code, len, &mut table);
        }
    }
    let expired = AtomicUsize::new(0);
    let rest = budget.install(|| {
        (0..1u64 << split)
            .into_par_iter()
            .fold(
                || BruteTable::new(n),
                |mut t, prefix| {
                    if deadline.expired() {
                        expired.store(1, Ordering::Relaxed);
                        return t;
                    }
                    extend_all(n, prefix, split, max_len, &mut t);
                    t
                },
            )
            .reduce(|| BruteTable::new(n), BruteTable::merge)
    });
    if expired.load(Ordering::Relaxed) != 0 {
        return Err(Error::BudgetExhausted {
            what: "wall-clock limit reached during brute-force enumeration".into(),
            progress: Progress::default(),
        });
    }
    let table = table.merge(rest);
    let mut sets = SetTable::new(n, false);
    for (s, (&(ll, _), &(cl, _))) in table.linear.iter().zip(&table.circular).enumerate() {
        let sw = if ll == NONE { NONE } else { ll - n as u8 };
        sets.record(s as u64, sw, cl);
    }
    let mut result = summarize_counts(n, &sets);
    let pick = |entries: &[(u8, u64)], len: usize| {
        entries
            .iter()
            .filter(|&&(l, _)| l as usize == len)
            .map(|&(_, c)| c)
            .min()
            .map(|c| Word::from_code(c, len))
            .ok_or(Error::EmptySet)
    };
    result.longest_witness = pick(&table.linear, result.mu)?;
    result.longest_circ_witness = pick(&table.circular, result.nu)?;
    Ok(result)
}

fn summarize_counts(n: usize, table: &SetTable) -> EnumerationResult {
    let mut r = EnumerationResult {
        schema_version: crate::SCHEMA_VERSION,
        n,
        circ_count: 0,
        rep_count: 0,
        nu: 0,
        mu: 0,
        longest_circ_witness: Word::zeros(1),
        longest_witness: Word::zeros(1),
        sw_histogram: BTreeMap::new(),
        scw_histogram: BTreeMap::new(),
    };
    for (_, sw, scw) in table.entries() {
        if sw != NONE {
            r.rep_count += 1;
            *r.sw_histogram.entry(n + sw as usize).or_insert(0) += 1;
            r.mu = r.mu.max(n + sw as usize);
        }
        if scw != NONE {
            r.circ_count += 1;
            *r.scw_histogram.entry(scw as usize).or_insert(0) += 1;
            r.nu = r.nu.max(scw as usize);
        }
    }
    r
}

/// Records the ordinary and circular factor sets of one word.
fn visit_word(n: usize, code: u64, len: usize, t: &mut BruteTable) {
    let fmask = if len >= n {
        let mut m = 0u64;
        for i in 0..=len - n {
            m |= 1 << ((code >> (len - n - i)) & ((1 << n) - 1));
        }
        t.linear[m as usize] = t.linear[m as usize].min((len as u8, code));
        m
    } else {
        0
    };
    let cmask = fmask | wrap_factors(n, code, len);
    t.circular[cmask as usize] = t.circular[cmask as usize].min((len as u8, code));
}

/// Factor bits of the circular windows that cross the end of the word.
fn wrap_factors(n: usize, code: u64, len: usize) -> u64 {
    let letter = |i: usize| (code >> (len - 1 - i % len)) & 1;
    let first = if len >= n { len - n + 1 } else { 0 };
    let mut m = 0u64;
    for i in first..len {
        let f = (0..n).fold(0u64, |acc, j| acc << 1 | letter(i + j));
        m |= 1 << f;
    }
    m
}

/// Depth-first walk over all extensions of `prefix` (of length `len`) up
/// to `max_len` letters.
fn extend_all(n: usize, prefix: u64, len: usize, max_len: usize, t: &mut BruteTable) {
    let nm = (1u64 << n) - 1;
    let mut fmask = 0u64;
    if len >= n {
        for i in 0..=len - n {
            fmask |= 1 << ((prefix >> (len - n - i)) & nm);
        }
    }
    let mut stack = vec![(prefix, len, fmask)];
    while let Some((code, l, m)) = stack.pop() {
        if l >= n {
            t.linear[m as usize] = t.linear[m as usize].min((l as u8, code));
        }
        let cm = m | wrap_factors(n, code, l);
        t.circular[cm as usize] = t.circular[cm as usize].min((l as u8, code));
        if l < max_len {
            for b in [1u64, 0] {
                let c = code << 1 | b;
                let nm2 = if l + 1 >= n { m | 1 << (c & nm) } else { m };
                stack.push((c, l + 1, nm2));
            }
        }
    }
}

/// Check a reported extremal witness: it witnesses some set whose shortest
/// (circular) witness has exactly the reported length.
pub fn confirms_extremal(n: usize, witness: &Word, circular: bool) -> Result<bool> {
    if circular {
        let set = crate::word::circular_factors(witness, n)?;
        Ok(shortest_circular_witness(&set)?.length == witness.len())
    } else {
        let set = factors(witness, n)?;
        Ok(shortest_witness(&set)?.length == witness.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::circular_factors;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn opts() -> EnumerateOptions {
        EnumerateOptions::with_budget(Budget::default().with_workers(2))
    }

    #[test]
    fn table_rows_one_to_three() {
        for (n, circ, rep, nu, mu) in [(1, 3, 3, 2, 2), (2, 6, 14, 4, 5), (3, 27, 121, 9, 10)] {
            let r = enumerate(n, &opts()).unwrap();
            assert_eq!(
                (r.circ_count, r.rep_count, r.nu, r.mu),
                (circ, rep, nu, mu),
                "n={n}"
            );
            assert!(confirms_extremal(n, &r.longest_witness, false).unwrap());
            assert!(confirms_extremal(n, &r.longest_circ_witness, true).unwrap());
            assert_eq!(r.longest_witness.len(), mu);
            assert_eq!(r.longest_circ_witness.len(), nu);
        }
    }

    #[test]
    fn brute_force_agrees_for_small_orders() {
        let budget = Budget::default().with_workers(2);
        for (n, max_len) in [(1, 3), (2, 6), (3, 11)] {
            let bfs = enumerate(n, &opts()).unwrap();
            let brute = brute_force_enumerate(n, max_len, &budget).unwrap();
            assert_eq!(bfs, brute, "n={n}");
        }
        let r = brute_force_enumerate(1, 3, &budget).unwrap();
        assert_eq!(r.circ_count, 3);
    }

    #[test]
    fn sparse_tables_agree_with_dense() {
        for n in 1..=3 {
            let dense = enumerate(n, &opts()).unwrap();
            let sparse = enumerate(
                n,
                &EnumerateOptions {
                    sparse: true,
                    ..opts()
                },
            )
            .unwrap();
            assert_eq!(dense, sparse);
        }
    }

    #[test]
    fn order_limits() {
        assert!(enumerate(0, &opts()).is_err());
        assert!(matches!(enumerate(5, &opts()), Err(Error::Precondition(_))));
        assert!(enumerate(
            6,
            &EnumerateOptions {
                allow_order_five: true,
                ..opts()
            }
        )
        .is_err());
    }

    #[test]
    fn memory_budget_is_enforced() {
        let tight =
            EnumerateOptions::with_budget(Budget::default().with_workers(1).with_memory_mb(0));
        assert!(matches!(
            enumerate(4, &tight),
            Err(Error::BudgetExhausted { .. })
        ));
        let tight_sparse = EnumerateOptions {
            sparse: true,
            budget: Budget {
                max_memory_bytes: 4096,
                ..Budget::default().with_workers(1)
            },
            ..EnumerateOptions::default()
        };
        match enumerate(4, &tight_sparse) {
            Err(Error::BudgetExhausted { progress, .. }) => assert_eq!(progress.shards_total, 16),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn valid_node_examples() {
        let nodes = bfs_valid_nodes(1, &Budget::default()).unwrap();
        let node = |s: &[&str], u: &str, v: &str, n: usize| SearchNode {
            set: FactorSet::parse_list(n, &s.join(",")).unwrap(),
            prefix: w(u),
            suffix: w(v),
        };
        assert_eq!(nodes.depth(&node(&["0"], "0", "0", 1)), Some(0));
        assert_eq!(nodes.depth(&node(&["0", "1"], "0", "1", 1)), Some(1));

        let nodes = bfs_valid_nodes(2, &Budget::default()).unwrap();
        let n001 = node(&["00", "01"], "00", "01", 2);
        assert_eq!(nodes.depth(&n001), Some(1));
        assert_eq!(nodes.witness_at_depth(&n001).unwrap(), w("001"));
        assert_eq!(
            nodes
                .witness_at_depth(&node(&["10"], "10", "10", 2))
                .unwrap(),
            w("10")
        );
        let distinct: HashSet<FactorSet> = nodes.iter().map(|(n, _)| n.set).collect();
        assert_eq!(distinct.len(), 14);
        assert!(matches!(
            nodes.witness_at_depth(&node(&["00", "11"], "00", "11", 2)),
            Err(Error::UnknownNode)
        ));
    }

    #[test]
    fn reconstructed_witnesses_match_nodes() {
        for n in 1..=3 {
            let nodes = bfs_valid_nodes(n, &Budget::default()).unwrap();
            let mut count = 0;
            for (node, depth) in nodes.iter() {
                assert!(
                    node.set.contains_word(&node.prefix) && node.set.contains_word(&node.suffix)
                );
                let wit = nodes.witness_at_depth(&node).unwrap();
                assert_eq!(wit.len(), n + depth as usize);
                assert_eq!(wit.slice(0, n), node.prefix);
                assert_eq!(wit.slice(wit.len() - n, n), node.suffix);
                assert_eq!(factors(&wit, n).unwrap(), node.set);
                count += 1;
            }
            assert_eq!(count, nodes.len());
        }
    }

    #[test]
    fn closing_walks_give_circular_witnesses() {
        // (S, u, u) at depth d >= 1 means the first d letters witness S circularly
        let nodes = bfs_valid_nodes(3, &Budget::default()).unwrap();
        for (node, depth) in nodes.iter() {
            if node.prefix == node.suffix && depth >= 1 {
                let wit = nodes.witness_at_depth(&node).unwrap();
                let circ = wit.slice(0, depth as usize);
                assert_eq!(circular_factors(&circ, 3).unwrap(), node.set);
            }
        }
    }

    #[test]
    fn checkpoint_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.jsonl");
        let with_cp = EnumerateOptions {
            checkpoint: Some(path.clone()),
            ..opts()
        };
        let first = enumerate(3, &with_cp).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert!(
            text.starts_with(r#"{"format":"factorsets-enumeration-checkpoint","version":1,"n":3}"#)
        );

        // keep the header and three shards plus a torn line, then resume
        let kept: Vec<&str> = text.lines().take(4).collect();
        std::fs::write(&path, format!("{}\n{{\"shard\":7,\"max", kept.join("\n"))).unwrap();
        let (resumed, stats) = enumerate_with_stats(3, &with_cp).unwrap();
        assert_eq!(resumed, first);
        assert_eq!(stats.shards_resumed, 3);
        assert_eq!(stats.shards_searched, 5);

        let wrong_order = EnumerateOptions {
            checkpoint: Some(path),
            ..opts()
        };
        assert!(enumerate(2, &wrong_order).is_err());
    }
}
