//! Lower and upper bounds on the number of circularly representable sets,
//! and the Hamiltonian-walk bound on shortest witness length.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph;
use crate::word::{circular_factors, Word};

fn check_debruijn(b: &Word) -> Result<usize> {
    let n = b.len().trailing_zeros() as usize;
    if !b.len().is_power_of_two() || n == 0 || !circular_factors(b, n)?.is_full() {
        return Err(Error::NotDeBruijn(b.to_string()));
    }
    Ok(n)
}

/// 1-based first occurrence of `y[1..n]` and last occurrence of
/// `y[2..n+1]` in `bbbb`.
pub fn ty_indices(b: &Word, y: &Word) -> Result<(usize, usize)> {
    let n = check_debruijn(b)?;
    if y.len() != n + 1 {
        return Err(Error::OrderMismatch {
            expected: n + 1,
            found: y.len(),
        });
    }
    let t = b.repeat(4);
    let head = &y.letters()[..n];
    let tail = &y.letters()[1..];
    let windows: Vec<&[u8]> = t.letters().windows(n).collect();
    let i1 = windows
        .iter()
        .position(|w| *w == head)
        .expect("de Bruijn word contains every factor");
    let i2 = windows
        .iter()
        .rposition(|w| *w == tail)
        .expect("de Bruijn word contains every factor");
    Ok((i1 + 1, i2 + 1))
}

/// Circular word whose length-`(n+1)` factors are those of `b` plus `y`,
/// starting and ending with `b`.
pub fn construct_ty(b: &Word, y: &Word) -> Result<Word> {
    let n = check_debruijn(b)?;
    if y.len() == n + 1 && circular_factors(b, n + 1)?.contains_word(y) {
        return Err(Error::AlreadyPresent(y.to_string()));
    }
    let (i1, i2) = ty_indices(b, y)?;
    let t = b.repeat(4);
    let t = t.letters();
    let mut letters = b.repeat(2).letters().to_vec();
    letters.extend_from_slice(&t[..i1 - 1 + n]);
    letters.extend_from_slice(&t[i2 + n - 2..]);
    letters.extend_from_slice(b.repeat(2).letters());
    Word::new(letters)
}

/// Concatenation of the single-word constructions; `b b` for an empty list.
pub fn construct_ts(b: &Word, ys: &[Word]) -> Result<Word> {
    check_debruijn(b)?;
    if ys.is_empty() {
        return Ok(b.repeat(2));
    }
    let mut letters = Vec::new();
    for y in ys {
        letters.extend_from_slice(construct_ty(b, y)?.letters());
    }
    Word::new(letters)
}

/// `2^(2^n)`: how many distinct circularly representable subsets of
/// `{0,1}^(n+1)` the concatenation construction produces.
pub fn lower_bound(n: usize) -> BigUint {
    assert!(n >= 1);
    BigUint::one() << (1usize << n)
}

/// `10^(2^(n-1))`, an upper bound on the number of circularly
/// representable subsets of `{0,1}^(n+1)`.
pub fn upper_bound(n: usize) -> BigUint {
    assert!(n >= 1);
    BigUint::from(10u32).pow(1u32 << (n - 1))
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exact audit of the upper bound: `L[k][i]` counts subsets of
/// `{0,1}^n` with `k` elements containing exactly `i` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperBoundAudit {
    pub schema_version: u32,
    pub n: usize,
    /// `l_table[k][i]` as decimal strings, `k = 0..=2^n`, `i = 0..=2^(n-1)`
    pub l_table: Vec<Vec<String>>,
    /// `sum_k sum_i L[k][i] * 7^i`
    pub weighted_sum: String,
    /// `sum_i C(2^(n-1), i) 7^i 3^(2^(n-1)-i)`
    pub binomial_sum: String,
    pub bound: String,
    /// `sum_k C(2^(n-1)-i, k-2i) 2^(k-2i) = 3^(2^(n-1)-i)` for every `i`
    pub inner_identity_holds: bool,
    pub telescopes: bool,
}

pub fn pair_count_table(n: usize) -> Vec<Vec<BigUint>> {
    let half = 1usize << (n - 1);
    (0..=2 * half)
        .map(|k| {
            (0..=half)
                .map(|i| {
                    if k < 2 * i || k - 2 * i > half - i {
                        BigUint::zero()
                    } else {
                        (binomial(half, i) * binomial(half - i, k - 2 * i)) << (k - 2 * i)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn upper_bound_audit(n: usize) -> UpperBoundAudit {
    assert!(n >= 1);
    let half = 1usize << (n - 1);
    let table = pair_count_table(n);
    let seven = BigUint::from(7u32);
    let three = BigUint::from(3u32);
    let weighted: BigUint = table
        .iter()
        .flat_map(|row| row.iter().enumerate().map(|(i, l)| l * seven.pow(i as u32)))
        .sum();
    let binomial_sum: BigUint = (0..=half)
        .map(|i| binomial(half, i) * seven.pow(i as u32) * three.pow((half - i) as u32))
        .sum();
    let inner_identity_holds = (0..=half).all(|i| {
        let inner: BigUint = (2 * i..=2 * half)
            .map(|k| binomial(half - i, k - 2 * i) << (k - 2 * i))
            .sum();
        inner == three.pow((half - i) as u32)
    });
    let bound = upper_bound(n);
    UpperBoundAudit {
        schema_version: crate::SCHEMA_VERSION,
        n,
        l_table: table
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect(),
        telescopes: weighted == binomial_sum && binomial_sum == bound,
        weighted_sum: weighted.to_string(),
        binomial_sum: binomial_sum.to_string(),
        bound: bound.to_string(),
        inner_identity_holds,
    }
}

/// `2^(2n-2) + 2^(n-1)`, an upper bound on shortest (circular) witness
/// lengths for order `n`.
pub fn witness_length_bound(n: usize) -> BigUint {
    assert!(n >= 1);
    (BigUint::one() << (2 * n - 2)) + (BigUint::one() << (n - 1))
}

/// `lower_bound(n-1) <= |C_n| <= upper_bound(n-1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    pub n: usize,
    pub lower: String,
    pub count: u64,
    pub upper: String,
    pub holds: bool,
    pub growth_rate: f64,
}

pub fn sandwich(n: usize, circ_count: u64) -> Result<Sandwich> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "sandwich order",
            value: n,
            allowed: "at least 2",
        });
    }
    let lower = lower_bound(n - 1);
    let upper = upper_bound(n - 1);
    let c = BigUint::from(circ_count);
    Ok(Sandwich {
        n,
        holds: lower <= c && c <= upper,
        lower: lower.to_string(),
        count: circ_count,
        upper: upper.to_string(),
        growth_rate: growth_rate(n, circ_count),
    })
}

/// `count^(1 / 2^n)`.
pub fn growth_rate(n: usize, count: u64) -> f64 {
    (count as f64).powf(1.0 / (1u64 << n) as f64)
}

/// A directed graph without parallel edges; self-loops allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    adj: Vec<BTreeSet<usize>>,
}

impl Digraph {
    pub fn new(vertex_count: usize) -> Digraph {
        Digraph {
            adj: vec![BTreeSet::new(); vertex_count],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum()
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        assert!(from < self.adj.len() && to < self.adj.len());
        self.adj[from].insert(to);
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.adj[from].contains(&to)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
    }

    fn lists(&self) -> Vec<Vec<usize>> {
        self.adj
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect()
    }

    /// Strongly connected with at least one edge, so a closed walk of
    /// positive length through every vertex exists.
    pub fn is_strongly_connected(&self) -> bool {
        graph::has_closed_covering_walk(&self.lists())
    }
}

/// First line: vertex count. Then one `u -> v` edge per line.
impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.vertex_count())?;
        for (u, v) in self.edges() {
            writeln!(f, "{u} -> {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Digraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Digraph> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let count: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("missing vertex count".into()))?
            .parse()
            .map_err(|_| Error::Parse("vertex count is not a number".into()))?;
        let mut g = Digraph::new(count);
        for line in lines {
            let (a, b) = line
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("expected `u -> v`, got {line:?}")))?;
            let parse = |x: &str| -> Result<usize> {
                let v: usize = x
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad vertex in {line:?}")))?;
                if v >= count {
                    return Err(Error::Parse(format!("vertex {v} out of range in {line:?}")));
                }
                Ok(v)
            };
            g.add_edge(parse(a)?, parse(b)?);
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkReport {
    /// Closed walk built from a longest simple path; first = last.
    pub walk: Vec<usize>,
    pub length: usize,
    pub covers_all: bool,
    /// `floor((V + 1)^2 / 4)`
    pub bound: usize,
    /// A shortest closed walk through every vertex; first = last.
    pub optimal_walk: Vec<usize>,
    pub optimal_length: usize,
}

pub const MAX_WALK_VERTICES: usize = 15;

pub fn hamiltonian_bound(vertices: usize) -> usize {
    (vertices + 1) * (vertices + 1) / 4
}

/// Longest simple path by dynamic programming over (visited set, end).
fn longest_simple_path(adj: &[Vec<usize>]) -> Vec<usize> {
    let m = adj.len();
    const UNSET: u8 = u8::MAX;
    const ROOT: u8 = u8::MAX - 1;
    let mut pred = vec![UNSET; (1usize << m) * m];
    for v in 0..m {
        pred[(1 << v) * m + v] = ROOT;
    }
    let mut best = (1usize, 0usize);
    for mask in 1usize..1 << m {
        for v in 0..m {
            if pred[mask * m + v] == UNSET {
                continue;
            }
            let size = mask.count_ones() as usize;
            if size > best.0.count_ones() as usize {
                best = (mask, v);
            }
            for &w in &adj[v] {
                if mask >> w & 1 == 0 {
                    let slot = &mut pred[(mask | 1 << w) * m + w];
                    if *slot == UNSET {
                        *slot = v as u8;
                    }
                }
            }
        }
    }
    let (mut mask, mut v) = best;
    let mut path = vec![v];
    while pred[mask * m + v] != ROOT {
        let p = pred[mask * m + v] as usize;
        mask &= !(1 << v);
        v = p;
        path.push(v);
    }
    path.reverse();
    path
}

fn closed_path(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    if from != to {
        return graph::shortest_path(adj, from, to).expect("strongly connected");
    }
    // shortest cycle through `from`
    adj[from]
        .iter()
        .filter_map(|&w| graph::shortest_path(adj, w, from))
        .min_by_key(Vec::len)
        .map(|mut p| {
            p.insert(0, from);
            p
        })
        .expect("strongly connected")
}

/// Builds a Hamiltonian walk from a longest simple path `L`: shortest paths
/// from the end of `L` through each vertex off `L` (ascending id) back to
/// the start of `L`, then `L` itself. Also finds an optimal walk.
pub fn hamiltonian_walk(g: &Digraph) -> Result<WalkReport> {
    let m = g.vertex_count();
    if m == 0 || m > MAX_WALK_VERTICES {
        return Err(Error::OutOfRange {
            what: "Hamiltonian-walk vertex count",
            value: m,
            allowed: "1..=15",
        });
    }
    if !g.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let adj = g.lists();
    let path = longest_simple_path(&adj);
    let on_path: BTreeSet<usize> = path.iter().copied().collect();
    let mut stops = vec![*path.last().expect("non-empty")];
    stops.extend((0..m).filter(|v| !on_path.contains(v)));
    stops.push(path[0]);

    let mut walk = vec![stops[0]];
    for pair in stops.windows(2) {
        walk.extend_from_slice(&closed_path(&adj, pair[0], pair[1])[1..]);
    }
    walk.extend_from_slice(&path[1..]);
    if walk.len() == 1 {
        // single-vertex path back onto itself
        walk = closed_path(&adj, path[0], path[0]);
    }

    let optimal_walk = graph::shortest_closed_covering_walk(&adj, 0, None, u64::MAX)?
        .expect("strongly connected graph has a closed covering walk");
    let covers_all = (0..m).all(|v| walk.contains(&v));
    Ok(WalkReport {
        length: walk.len() - 1,
        walk,
        covers_all,
        bound: hamiltonian_bound(m),
        optimal_length: optimal_walk.len() - 1,
        optimal_walk,
    })
}

/// True iff `walk` is closed, follows edges of `g`, and visits every vertex.
pub fn is_valid_closed_walk(g: &Digraph, walk: &[usize]) -> bool {
    walk.len() >= 2
        && walk.first() == walk.last()
        && walk.windows(2).all(|p| g.has_edge(p[0], p[1]))
        && (0..g.vertex_count()).all(|v| walk.contains(&v))
}

/// A chain of `floor(n/2)` vertices whose last vertex fans out to
/// `ceil(n/2)` leaves, each leaf pointing back to the head of the chain.
pub fn chain_fan(n: usize) -> Digraph {
    assert!(n >= 2);
    let chain = n / 2;
    let mut g = Digraph::new(n);
    for v in 1..chain {
        g.add_edge(v - 1, v);
    }
    for leaf in chain..n {
        g.add_edge(chain - 1, leaf);
        g.add_edge(leaf, 0);
    }
    g
}

/// A random strongly connected digraph on `1..=max_vertices` vertices,
/// sampled by rejection at a random edge density.
pub fn random_strongly_connected(rng: &mut impl Rng, max_vertices: usize) -> Digraph {
    let m = rng.gen_range(1..=max_vertices);
    let p: f64 = rng.gen_range(0.05..0.6);
    loop {
        let mut g = Digraph::new(m);
        for u in 0..m {
            for v in 0..m {
                if rng.gen_bool(p) {
                    g.add_edge(u, v);
                }
            }
        }
        if g.is_strongly_connected() {
            return g;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkTrial {
    pub vertices: usize,
    pub edges: usize,
    pub constructed_length: usize,
    pub optimal_length: usize,
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkTrials {
    pub schema_version: u32,
    pub seed: u64,
    pub max_vertices: usize,
    pub trials: Vec<WalkTrial>,
    pub passed: bool,
}

/// Runs `count` seeded random trials; trial `i` draws from stream `i` so
/// the outcome does not depend on scheduling.
pub fn hamiltonian_trials(
    count: usize,
    seed: u64,
    max_vertices: usize,
    budget: &Budget,
) -> Result<WalkTrials> {
    let trials = budget.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let g = random_strongly_connected(&mut rng, max_vertices);
                let r = hamiltonian_walk(&g)?;
                let valid =
                    is_valid_closed_walk(&g, &r.walk) && is_valid_closed_walk(&g, &r.optimal_walk);
                if !valid {
                    return Err(Error::Precondition(format!(
                        "trial {i} produced an invalid walk"
                    )));
                }
                Ok(WalkTrial {
                    vertices: g.vertex_count(),
                    edges: g.edge_count(),
                    constructed_length: r.length,
                    optimal_length: r.optimal_length,
                    bound: r.bound,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let passed = trials
        .iter()
        .all(|t| t.optimal_length <= t.bound && t.constructed_length >= t.optimal_length);
    Ok(WalkTrials {
        schema_version: crate::SCHEMA_VERSION,
        seed,
        max_vertices,
        trials,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor_set::{count_pairs, FactorSet};
    use crate::word::debruijn;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn single_word_construction_example() {
        let b = w("0011");
        let t = construct_ty(&b, &w("010")).unwrap();
        assert_eq!(
            t.to_string(),
            ["00110011", "0", "01", "0", "011", "00110011"].concat()
        );
        assert_eq!(t.len(), 23);
        assert_eq!(ty_indices(&b, &w("010")).unwrap(), (2, 12));
    }

    #[test]
    fn construction_adds_exactly_one_factor() {
        for n in 1..=6 {
            let b = debruijn(n).unwrap();
            let base = circular_factors(&b, n + 1).unwrap();
            for code in 0..1u64 << (n + 1) {
                let y = Word::from_code(code, n + 1);
                if base.contains(code) {
                    assert!(matches!(
                        construct_ty(&b, &y),
                        Err(Error::AlreadyPresent(_))
                    ));
                    continue;
                }
                let (i1, i2) = ty_indices(&b, &y).unwrap();
                assert!(i1 + n - 1 < i2);
                let t = construct_ty(&b, &y).unwrap();
                let mut expected = base.clone();
                expected.insert(code);
                assert_eq!(circular_factors(&t, n + 1).unwrap(), expected);
                assert_eq!(t.slice(0, 1 << n), b);
                assert_eq!(t.slice(t.len() - (1 << n), 1 << n), b);
            }
        }
    }

    #[test]
    fn concatenation_cases() {
        let b = w("0011");
        assert_eq!(construct_ts(&b, &[]).unwrap(), w("00110011"));
        assert_eq!(
            circular_factors(&construct_ts(&b, &[]).unwrap(), 3).unwrap(),
            circular_factors(&b, 3).unwrap()
        );
        assert_eq!(
            construct_ts(&b, &[w("010")]).unwrap(),
            construct_ty(&b, &w("010")).unwrap()
        );
        let all: Vec<Word> = ["000", "010", "101", "111"].iter().map(|s| w(s)).collect();
        assert!(circular_factors(&construct_ts(&b, &all).unwrap(), 3)
            .unwrap()
            .is_full());
    }

    #[test]
    fn rejects_non_debruijn_scaffolds() {
        assert!(matches!(
            construct_ty(&w("0101"), &w("000")),
            Err(Error::NotDeBruijn(_))
        ));
        assert!(matches!(
            construct_ty(&w("001"), &w("000")),
            Err(Error::NotDeBruijn(_))
        ));
        assert!(construct_ty(&w("0011"), &w("0000")).is_err());
    }

    #[test]
    fn bounds_values() {
        assert_eq!(lower_bound(1), BigUint::from(4u32));
        assert_eq!(lower_bound(2), BigUint::from(16u32));
        assert_eq!(upper_bound(2), BigUint::from(100u32));
        assert_eq!(upper_bound(3), BigUint::from(10000u32));
        assert_eq!(witness_length_bound(1), BigUint::from(2u32));
        assert_eq!(witness_length_bound(3), BigUint::from(20u32));
        assert_eq!(witness_length_bound(4), BigUint::from(72u32));
        for n in 1..=10usize {
            let v = (1u128 << n) + 1;
            assert_eq!(witness_length_bound(n), BigUint::from(v * v / 4));
        }
        assert!(sandwich(3, 27).unwrap().holds);
        assert!(!sandwich(3, 101).unwrap().holds);
        assert!(sandwich(1, 3).is_err());
    }

    #[test]
    fn audit_telescopes() {
        for n in 1..=6 {
            let audit = upper_bound_audit(n);
            assert!(audit.inner_identity_holds && audit.telescopes, "n={n}");
            assert_eq!(audit.bound, upper_bound(n).to_string());
        }
        let audit = upper_bound_audit(2);
        assert_eq!(audit.l_table.len(), 5);
        assert_eq!(audit.l_table[2], vec!["4", "2", "0"]);
    }

    #[test]
    fn pair_table_counts_subsets() {
        for n in 1..=4usize {
            let table = pair_count_table(n);
            let mut counts = vec![vec![0u64; (1 << (n - 1)) + 1]; (1 << n) + 1];
            for mask in 0u64..1 << (1 << n) {
                let t =
                    FactorSet::from_codes(n, (0..1 << n).filter(|c| mask >> c & 1 == 1)).unwrap();
                counts[t.len()][count_pairs(&t)] += 1;
            }
            for (k, row) in counts.iter().enumerate() {
                for (i, &c) in row.iter().enumerate() {
                    assert_eq!(table[k][i], BigUint::from(c), "n={n} k={k} i={i}");
                }
            }
        }
    }

    #[test]
    fn digraph_text_format() {
        let g: Digraph = "3\n0 -> 1\n1 -> 2\n2 -> 0\n".parse().unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.to_string(), "3\n0 -> 1\n1 -> 2\n2 -> 0\n");
        assert!(g.is_strongly_connected());
        assert!("2\n0 -> 2\n".parse::<Digraph>().is_err());
        assert!("x\n".parse::<Digraph>().is_err());
        assert!("2\n0 1\n".parse::<Digraph>().is_err());
    }

    #[test]
    fn walk_examples() {
        let mut g = Digraph::new(1);
        g.add_edge(0, 0);
        let r = hamiltonian_walk(&g).unwrap();
        assert_eq!((r.length, r.optimal_length, r.bound), (1, 1, 1));
        assert!(is_valid_closed_walk(&g, &r.walk));

        assert!(matches!(
            hamiltonian_walk(&Digraph::new(1)),
            Err(Error::NotStronglyConnected)
        ));
        let mut path = Digraph::new(2);
        path.add_edge(0, 1);
        assert!(matches!(
            hamiltonian_walk(&path),
            Err(Error::NotStronglyConnected)
        ));

        for n in 2..=12 {
            let g = chain_fan(n);
            let r = hamiltonian_walk(&g).unwrap();
            assert_eq!(r.optimal_length, (n / 2 + 1) * n.div_ceil(2));
            assert_eq!(r.optimal_length, hamiltonian_bound(n), "n={n}");
            assert!(is_valid_closed_walk(&g, &r.walk) && r.covers_all);
            assert!(r.length >= r.optimal_length);
        }
    }

    #[test]
    fn random_trials_respect_bound() {
        let budget = Budget::default().with_workers(2);
        let report = hamiltonian_trials(60, 7, 9, &budget).unwrap();
        assert!(report.passed);
        assert_eq!(
            report,
            hamiltonian_trials(60, 7, 9, &Budget::default().with_workers(1)).unwrap()
        );
    }
}
