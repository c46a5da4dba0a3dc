//! Representability and shortest witness lengths through edge covers.
//!
//! A set `S` of length-`n` words is an edge set of the de Bruijn graph on
//! length-`(n-1)` words (edge `c` runs from `c >> 1` to `c mod 2^(n-1)`). A
//! witness of length `m` is a walk of `m - n + 1` edges using every edge of
//! `S` and no other; a circular witness of length `m` is a closed walk of
//! `m` edges. Shortest covers add the cheapest extra traversals that
//! balance in- and out-degrees, a transportation problem solved exactly.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::budget::Budget;
use crate::enumeration::EnumerationResult;
use crate::error::{Error, Progress, Result};
use crate::factor_set::{
    shortest_circular_witness_bounded, shortest_witness_bounded, FactorSet, WitnessResult,
};
use crate::word::{least_rotation, Word};

/// Largest order handled: 32 vertices, 64 edges.
pub const MAX_COVER_ORDER: usize = 6;
/// Largest order [`enumerate_by_edge_covers`] accepts (2^32 subsets).
pub const MAX_COVER_ENUMERATION_ORDER: usize = 5;

const INF: i64 = 1 << 40;

/// Shortest witness and shortest circular witness lengths; `None` when no
/// such witness exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverLengths {
    pub sw: Option<usize>,
    pub scw: Option<usize>,
}

/// Edge subgraph of one set, vertices numbered as in the de Bruijn graph.
struct Subgraph {
    vertices: usize,
    edges: u64,
    succ: [u32; 32],
    incident: u32,
}

impl Subgraph {
    fn new(n: usize, edges: u64) -> Subgraph {
        let vertices = 1usize << (n - 1);
        let vm = vertices as u64 - 1;
        let mut succ = [0u32; 32];
        let mut incident = 0u32;
        let mut rest = edges;
        while rest != 0 {
            let c = rest.trailing_zeros() as u64;
            rest &= rest - 1;
            let (from, to) = ((c >> 1) as usize, (c & vm) as usize);
            succ[from] |= 1 << to;
            incident |= 1 << from | 1 << to;
        }
        Subgraph {
            vertices,
            edges,
            succ,
            incident,
        }
    }

    fn out_degree(&self, v: usize) -> i64 {
        (self.edges >> (2 * v) & 3).count_ones() as i64
    }

    fn in_degree(&self, v: usize) -> i64 {
        let vs = self.vertices;
        ((self.edges >> v & 1) + (self.edges >> (v + vs) & 1)) as i64
    }

    /// Strongly connected components of the incident vertices as bitmasks,
    /// sinks first.
    fn components(&self) -> Vec<u32> {
        const UNSEEN: u8 = u8::MAX;
        let mut index = [UNSEEN; 32];
        let mut low = [0u8; 32];
        let mut stack: Vec<usize> = Vec::with_capacity(32);
        let mut on_stack = 0u32;
        let mut comps = Vec::new();
        let mut next = 0u8;
        let mut call: Vec<(usize, u32)> = Vec::with_capacity(32);
        let mut roots = self.incident;
        while roots != 0 {
            let root = roots.trailing_zeros() as usize;
            roots &= roots - 1;
            if index[root] != UNSEEN {
                continue;
            }
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack |= 1 << root;
            call.push((root, self.succ[root]));
            while let Some(&mut (v, ref mut pending)) = call.last_mut() {
                if *pending != 0 {
                    let w = pending.trailing_zeros() as usize;
                    *pending &= *pending - 1;
                    if index[w] == UNSEEN {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack |= 1 << w;
                        call.push((w, self.succ[w]));
                    } else if on_stack >> w & 1 == 1 {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = 0u32;
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack &= !(1 << w);
                        comp |= 1 << w;
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
        comps
    }

    /// Representable iff the condensation is a chain joined by exactly one
    /// edge between consecutive components and no others.
    fn classify(&self) -> (bool, bool) {
        let comps = self.components();
        if comps.len() == 1 {
            return (true, true);
        }
        let mut comp_of = [0usize; 32];
        for (i, &c) in comps.iter().enumerate() {
            let mut m = c;
            while m != 0 {
                comp_of[m.trailing_zeros() as usize] = i;
                m &= m - 1;
            }
        }
        let mut between = vec![0usize; comps.len()];
        let mut crossing = 0;
        let mut rest = self.incident;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut out = self.succ[v];
            while out != 0 {
                let w = out.trailing_zeros() as usize;
                out &= out - 1;
                let (a, b) = (comp_of[v], comp_of[w]);
                if a != b {
                    crossing += 1;
                    if a == b + 1 {
                        between[b] += 1;
                    }
                }
            }
        }
        let chain =
            crossing == comps.len() - 1 && between[..comps.len() - 1].iter().all(|&k| k == 1);
        (chain, false)
    }

    /// Distances from `from` to every vertex, `INF` when unreachable.
    fn distances(&self, from: usize) -> [i64; 32] {
        let mut dist = [INF; 32];
        dist[from] = 0;
        let mut seen = 1u32 << from;
        let mut frontier = seen;
        let mut d = 0;
        while frontier != 0 {
            d += 1;
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.succ[v];
            }
            next &= !seen;
            seen |= next;
            let mut m = next;
            while m != 0 {
                dist[m.trailing_zeros() as usize] = d;
                m &= m - 1;
            }
            frontier = next;
        }
        dist
    }

    /// Vertices with surplus in-degree (one entry per unit) and surplus
    /// out-degree; extra traversals run from the first kind to the second.
    fn imbalance(&self) -> (Vec<usize>, Vec<usize>) {
        let (mut ends, mut starts) = (Vec::new(), Vec::new());
        let mut rest = self.incident;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = self.in_degree(v) - self.out_degree(v);
            for _ in 0..d.max(0) {
                ends.push(v);
            }
            for _ in 0..(-d).max(0) {
                starts.push(v);
            }
        }
        (ends, starts)
    }

    fn cost_matrix(&self, ends: &[usize], starts: &[usize], open: bool) -> Vec<Vec<i64>> {
        let k = ends.len();
        let size = if open { k + 1 } else { k };
        let mut cost = vec![vec![0i64; size]; size];
        let mut cache: BTreeMap<usize, [i64; 32]> = BTreeMap::new();
        for (i, &a) in ends.iter().enumerate() {
            let dist = *cache.entry(a).or_insert_with(|| self.distances(a));
            for (j, &b) in starts.iter().enumerate() {
                cost[i][j] = dist[b];
            }
        }
        cost
    }
}

/// Minimum-cost perfect assignment (rows to columns) and its row matches.
fn assignment(cost: &[Vec<i64>]) -> (i64, Vec<usize>) {
    let n = cost.len();
    if n == 0 {
        return (0, Vec::new());
    }
    // potentials, 1-based with a sentinel column 0
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        row_to_col[p[j] - 1] = j - 1;
    }
    let total = (0..n).map(|i| cost[i][row_to_col[i]]).sum();
    (total, row_to_col)
}

fn lengths_of(n: usize, g: &Subgraph) -> CoverLengths {
    let (rep, circ) = g.classify();
    if !rep {
        return CoverLengths {
            sw: None,
            scw: None,
        };
    }
    let size = g.edges.count_ones() as usize;
    let (ends, starts) = g.imbalance();
    let (open_cost, _) = assignment(&g.cost_matrix(&ends, &starts, true));
    debug_assert!(open_cost < INF);
    let scw = circ.then(|| {
        let (closed, _) = assignment(&g.cost_matrix(&ends, &starts, false));
        size + closed as usize
    });
    CoverLengths {
        sw: Some(n - 1 + size + open_cost as usize),
        scw,
    }
}

fn check_cover_order(set: &FactorSet) -> Result<()> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if set.order() > MAX_COVER_ORDER {
        return Err(Error::OutOfRange {
            what: "edge-cover order",
            value: set.order(),
            allowed: "1..=6",
        });
    }
    Ok(())
}

fn edge_bits(set: &FactorSet) -> u64 {
    set.mask().expect("order at most 6")
}

/// Shortest witness lengths of `set` (order at most 6).
pub fn cover_lengths(set: &FactorSet) -> Result<CoverLengths> {
    check_cover_order(set)?;
    Ok(lengths_of(
        set.order(),
        &Subgraph::new(set.order(), edge_bits(set)),
    ))
}

/// A shortest (circular) witness read off an Eulerian walk of the cheapest
/// balanced cover. Not necessarily the lexicographically least one.
pub fn cover_witness(set: &FactorSet, circular: bool) -> Result<WitnessResult> {
    check_cover_order(set)?;
    let n = set.order();
    let g = Subgraph::new(n, edge_bits(set));
    let (rep, circ) = g.classify();
    if !rep || (circular && !circ) {
        return Ok(WitnessResult {
            found: false,
            length: 0,
            witness: None,
        });
    }
    let vm = g.vertices as u64 - 1;
    let (ends, starts) = g.imbalance();
    let (cost, matching) = assignment(&g.cost_matrix(&ends, &starts, !circular));
    debug_assert!(cost < INF);
    // edge multiplicities: each edge once, plus the matched shortest paths
    let mut count = [0u32; 64];
    let mut rest = g.edges;
    while rest != 0 {
        count[rest.trailing_zeros() as usize] += 1;
        rest &= rest - 1;
    }
    let mut walk_start = None;
    for (i, &j) in matching.iter().enumerate() {
        if i == ends.len() || j == starts.len() {
            if i < ends.len() || j < starts.len() {
                // the pair left open: the walk starts at `starts[j]`
                if j < starts.len() {
                    walk_start = Some(starts[j]);
                }
            }
            continue;
        }
        for c in shortest_edge_path(&g, ends[i], starts[j]) {
            count[c as usize] += 1;
        }
    }
    let start = walk_start.unwrap_or(g.incident.trailing_zeros() as usize);
    // Hierholzer, trying the 0-edge before the 1-edge
    let mut stack = vec![(start, None::<u64>)];
    let mut edges_out: Vec<u64> = Vec::new();
    while let Some(&(v, via)) = stack.last() {
        let next = (0..2u64)
            .map(|b| (v as u64) << 1 | b)
            .find(|&c| count[c as usize] > 0);
        match next {
            Some(c) => {
                count[c as usize] -= 1;
                stack.push(((c & vm) as usize, Some(c)));
            }
            None => {
                stack.pop();
                if let Some(c) = via {
                    edges_out.push(c);
                }
            }
        }
    }
    edges_out.reverse();
    let last_letters = edges_out.iter().map(|&c| (c & 1) as u8);
    let word = if circular {
        least_rotation(&Word::new(last_letters.collect())?)
    } else {
        let mut letters: Vec<u8> = (0..n - 1).rev().map(|i| ((start >> i) & 1) as u8).collect();
        letters.extend(last_letters);
        Word::new(letters)?
    };
    Ok(WitnessResult {
        found: true,
        length: word.len(),
        witness: Some(word),
    })
}

fn shortest_edge_path(g: &Subgraph, from: usize, to: usize) -> Vec<u64> {
    let dist_to: Vec<i64> = (0..g.vertices).map(|v| g.distances(v)[to]).collect();
    let mut path = Vec::new();
    let mut v = from;
    while v != to {
        let c = (0..2u64)
            .map(|b| (v as u64) << 1 | b)
            .find(|&c| {
                g.edges >> c & 1 == 1
                    && dist_to[(c & (g.vertices as u64 - 1)) as usize] == dist_to[v] - 1
            })
            .expect("a shortest path exists");
        path.push(c);
        v = (c & (g.vertices as u64 - 1)) as usize;
    }
    path
}

/// Bits `2v` and `2v + 1` or-ed into bit `v`.
fn compress_pairs(x: u64) -> u64 {
    let mut x = (x | x >> 1) & 0x5555_5555_5555_5555;
    x = (x | x >> 1) & 0x3333_3333_3333_3333;
    x = (x | x >> 2) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | x >> 4) & 0x00ff_00ff_00ff_00ff;
    x = (x | x >> 8) & 0x0000_ffff_0000_ffff;
    (x | x >> 16) & 0x0000_0000_ffff_ffff
}

#[derive(Default)]
struct Tally {
    rep: u64,
    circ: u64,
    sw: BTreeMap<usize, u64>,
    scw: BTreeMap<usize, u64>,
    /// longest shortest witness and the sets attaining it
    max_sw: (usize, Vec<u64>),
    max_scw: (usize, Vec<u64>),
}

fn keep_max(slot: &mut (usize, Vec<u64>), len: usize, set: u64) {
    if len > slot.0 {
        *slot = (len, vec![set]);
    } else if len == slot.0 {
        slot.1.push(set);
    }
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.rep += other.rep;
        self.circ += other.circ;
        for (k, v) in other.sw {
            *self.sw.entry(k).or_default() += v;
        }
        for (k, v) in other.scw {
            *self.scw.entry(k).or_default() += v;
        }
        for (mine, theirs) in [
            (&mut self.max_sw, other.max_sw),
            (&mut self.max_scw, other.max_scw),
        ] {
            if theirs.0 > mine.0 {
                *mine = theirs;
            } else if theirs.0 == mine.0 {
                mine.1.extend(theirs.1);
            }
        }
        self
    }
}

fn tally_range(n: usize, lo: u64, hi: u64) -> Tally {
    let vertices = 1u32 << (n - 1);
    let vmask = if vertices == 32 {
        u64::from(u32::MAX)
    } else {
        (1u64 << vertices) - 1
    };
    let mut t = Tally::default();
    for s in lo..hi {
        let into = (s & vmask) | (s >> vertices);
        let out = compress_pairs(s);
        let sources = out & !into;
        let sinks = into & !out;
        if sources.count_ones() > 1 || sinks.count_ones() > 1 {
            continue;
        }
        let g = Subgraph::new(n, s);
        let lengths = lengths_of(n, &g);
        if let Some(sw) = lengths.sw {
            t.rep += 1;
            *t.sw.entry(sw).or_default() += 1;
            keep_max(&mut t.max_sw, sw, s);
        }
        if let Some(scw) = lengths.scw {
            t.circ += 1;
            *t.scw.entry(scw).or_default() += 1;
            keep_max(&mut t.max_scw, scw, s);
        }
    }
    t
}

const COVER_CHUNK: u64 = 1 << 20;

/// Counts every (circularly) representable subset of `{0,1}^n` by testing
/// all `2^(2^n) - 1` non-empty edge sets. Extremal witnesses are the
/// lexicographically least shortest witnesses when the exact search fits
/// in `witness_states`, and a shortest cover otherwise.
pub fn enumerate_by_edge_covers(
    n: usize,
    budget: &Budget,
    witness_states: u64,
) -> Result<EnumerationResult> {
    if n == 0 || n > MAX_COVER_ENUMERATION_ORDER {
        return Err(Error::OutOfRange {
            what: "edge-cover enumeration order",
            value: n,
            allowed: "1..=5",
        });
    }
    let total = 1u64 << (1 << n);
    let chunks = total.div_ceil(COVER_CHUNK);
    let deadline = budget.start();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let tally = budget.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                if deadline.expired() {
                    return Err(Error::BudgetExhausted {
                        what: "wall-clock limit reached".into(),
                        progress: Progress {
                            shards_done: done.load(std::sync::atomic::Ordering::Relaxed),
                            shards_total: chunks as usize,
                            ..Progress::default()
                        },
                    });
                }
                let lo = (c * COVER_CHUNK).max(1);
                let t = tally_range(n, lo, ((c + 1) * COVER_CHUNK).min(total));
                done.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                Ok(t)
            })
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
    })?;

    let pick = |sets: &[u64], circular: bool| -> Result<Word> {
        let mut best: Option<Word> = None;
        for &s in sets {
            let set = FactorSet::from_mask(n, s);
            let exact = if circular {
                shortest_circular_witness_bounded(&set, witness_states)
            } else {
                shortest_witness_bounded(&set, witness_states)
            };
            let w = match exact {
                Ok(r) => r.witness,
                Err(Error::BudgetExhausted { .. }) => cover_witness(&set, circular)?.witness,
                Err(e) => return Err(e),
            }
            .ok_or(Error::UnknownNode)?;
            if best.as_ref().is_none_or(|b| w < *b) {
                best = Some(w);
            }
        }
        best.ok_or(Error::EmptySet)
    };
    Ok(EnumerationResult {
        schema_version: crate::SCHEMA_VERSION,
        n,
        circ_count: tally.circ,
        rep_count: tally.rep,
        nu: tally.max_scw.0,
        mu: tally.max_sw.0,
        longest_circ_witness: pick(&tally.max_scw.1, true)?,
        longest_witness: pick(&tally.max_sw.1, false)?,
        sw_histogram: tally.sw,
        scw_histogram: tally.scw,
    })
}
