//! Sets of length-`n` binary words, the overlap digraph they induce, and
//! the representability questions asked about them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph;
use crate::word::{order_mask, Word};

/// Largest order whose membership table we are willing to allocate.
pub const MAX_ORDER: usize = 26;

/// Upper limit on (covered, vertex) states explored by witness searches.
pub const DEFAULT_MAX_SEARCH_STATES: u64 = 1 << 26;

/// A subset of `{0,1}^n` stored as a `2^n`-bit membership table; bit
/// `code(x)` is set iff `x` is a member.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorSet {
    order: usize,
    blocks: Vec<u64>,
}

impl FactorSet {
    pub fn empty(order: usize) -> Result<FactorSet> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::OutOfRange {
                what: "factor order",
                value: order,
                allowed: "1..=26",
            });
        }
        let blocks = vec![0; (1usize << order).div_ceil(64)];
        Ok(FactorSet { order, blocks })
    }

    /// All of `{0,1}^order`.
    pub fn full(order: usize) -> Result<FactorSet> {
        let mut set = FactorSet::empty(order)?;
        let size = 1u64 << order;
        for (i, block) in set.blocks.iter_mut().enumerate() {
            let lo = i as u64 * 64;
            let bits = (size - lo).min(64);
            *block = if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            };
        }
        Ok(set)
    }

    pub fn from_codes(order: usize, codes: impl IntoIterator<Item = u64>) -> Result<FactorSet> {
        let mut set = FactorSet::empty(order)?;
        for code in codes {
            if code >> order != 0 {
                return Err(Error::Parse(format!("code {code} exceeds order {order}")));
            }
            set.insert(code);
        }
        Ok(set)
    }

    pub fn from_words(order: usize, words: impl IntoIterator<Item = Word>) -> Result<FactorSet> {
        let mut set = FactorSet::empty(order)?;
        for w in words {
            if w.len() != order {
                return Err(Error::OrderMismatch {
                    expected: order,
                    found: w.len(),
                });
            }
            set.insert(w.code().expect("order <= 26"));
        }
        Ok(set)
    }

    /// From a membership mask, for orders up to 6.
    pub fn from_mask(order: usize, mask: u64) -> FactorSet {
        assert!(order <= 6, "masks hold at most 64 members");
        let mut set = FactorSet::empty(order).expect("order in range");
        set.blocks[0] = mask & FactorSet::full(order).expect("order in range").blocks[0];
        set
    }

    /// Membership mask, for orders up to 6.
    pub fn mask(&self) -> Option<u64> {
        (self.order <= 6).then(|| self.blocks[0])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == 1usize << self.order
    }

    pub fn contains(&self, code: u64) -> bool {
        code >> self.order == 0 && self.blocks[(code / 64) as usize] >> (code % 64) & 1 == 1
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        w.len() == self.order && self.contains(w.code().expect("order <= 26"))
    }

    pub fn insert(&mut self, code: u64) {
        debug_assert!(code >> self.order == 0);
        self.blocks[(code / 64) as usize] |= 1 << (code % 64);
    }

    pub fn remove(&mut self, code: u64) {
        self.blocks[(code / 64) as usize] &= !(1 << (code % 64));
    }

    /// Member codes in ascending (= lexicographic) order.
    pub fn codes(&self) -> impl Iterator<Item = u64> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &block)| {
            let mut rest = block;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as u64;
                rest &= rest - 1;
                Some(i as u64 * 64 + bit)
            })
        })
    }

    pub fn words(&self) -> Vec<Word> {
        self.codes()
            .map(|c| Word::from_code(c, self.order))
            .collect()
    }

    pub fn is_subset(&self, other: &FactorSet) -> bool {
        self.order == other.order
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &FactorSet) -> FactorSet {
        assert_eq!(self.order, other.order);
        FactorSet {
            order: self.order,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    /// Hex bitmap of `2^n` bits, most significant digit first, zero-padded
    /// to `max(1, 2^n / 4)` lowercase digits. Bit `code(x)` marks `x`.
    pub fn to_hex(&self) -> String {
        let digits = hex_digits(self.order);
        (0..digits)
            .rev()
            .map(|d| {
                let bit = d as u64 * 4;
                let nibble = (self.blocks[(bit / 64) as usize] >> (bit % 64)) & 0xf;
                char::from_digit(nibble as u32, 16).expect("nibble")
            })
            .collect()
    }

    pub fn from_hex(order: usize, hex: &str) -> Result<FactorSet> {
        let mut set = FactorSet::empty(order)?;
        let body = hex.trim();
        let body = body
            .strip_prefix("0x")
            .or_else(|| body.strip_prefix("0X"))
            .unwrap_or(body);
        if body.is_empty() || body.len() > hex_digits(order) {
            return Err(Error::Parse(format!(
                "hex bitmap for order {order} needs 1..={} digits, got {:?}",
                hex_digits(order),
                hex
            )));
        }
        for (d, c) in body.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {c:?}")))?
                as u64;
            for j in 0..4 {
                if nibble >> j & 1 == 1 {
                    let code = d as u64 * 4 + j;
                    if code >> order != 0 {
                        return Err(Error::Parse(format!(
                            "hex bitmap sets bit {code}, beyond order {order}"
                        )));
                    }
                    set.insert(code);
                }
            }
        }
        Ok(set)
    }

    /// Parses a comma-separated list of words of length `order`.
    pub fn parse_list(order: usize, list: &str) -> Result<FactorSet> {
        let words = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Word>>>()?;
        FactorSet::from_words(order, words)
    }
}

fn hex_digits(order: usize) -> usize {
    ((1usize << order) / 4).max(1)
}

/// Comma-separated members in lexicographic order.
impl fmt::Display for FactorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.words().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FactorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactorSet[{}]{{{self}}}", self.order)
    }
}

#[derive(Serialize, Deserialize)]
struct FactorSetRepr {
    order: usize,
    members: Vec<Word>,
}

impl Serialize for FactorSet {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        FactorSetRepr {
            order: self.order,
            members: self.words(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FactorSet {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = FactorSetRepr::deserialize(deserializer)?;
        FactorSet::from_words(repr.order, repr.members).map_err(serde::de::Error::custom)
    }
}

/// Overlap digraph on the members of a factor set: `x -> y` iff
/// `x[2..n] = y[1..n-1]`.
#[derive(Debug, Clone)]
pub struct OverlapGraph {
    order: usize,
    vertices: Vec<u64>,
    successors: Vec<Vec<usize>>,
}

impl OverlapGraph {
    pub fn new(set: &FactorSet) -> OverlapGraph {
        let order = set.order();
        let vertices: Vec<u64> = set.codes().collect();
        let mask = order_mask(order);
        let successors = vertices
            .iter()
            .map(|&x| {
                (0..2)
                    .map(|b| ((x << 1) | b) & mask)
                    .filter_map(|y| vertices.binary_search(&y).ok())
                    .collect()
            })
            .collect();
        OverlapGraph {
            order,
            vertices,
            successors,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Member codes, ascending; vertex `i` is `vertices()[i]`.
    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.successors[i]
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, from: u64, to: u64) -> bool {
        match (
            self.vertices.binary_search(&from),
            self.vertices.binary_search(&to),
        ) {
            (Ok(i), Ok(j)) => self.successors[i].contains(&j),
            _ => false,
        }
    }

    pub fn is_strongly_connected(&self) -> bool {
        graph::strongly_connected_components(&self.successors).len() == 1
    }

    fn first_letter(&self, i: usize) -> u8 {
        (self.vertices[i] >> (self.order - 1) & 1) as u8
    }

    fn last_letter(&self, i: usize) -> u8 {
        (self.vertices[i] & 1) as u8
    }
}

/// Outcome of a shortest-witness search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub found: bool,
    pub length: usize,
    pub witness: Option<Word>,
}

impl WitnessResult {
    fn none() -> WitnessResult {
        WitnessResult {
            found: false,
            length: 0,
            witness: None,
        }
    }

    fn of(w: Word) -> WitnessResult {
        WitnessResult {
            found: true,
            length: w.len(),
            witness: Some(w),
        }
    }
}

fn non_empty(set: &FactorSet) -> Result<()> {
    if set.is_empty() {
        Err(Error::EmptySet)
    } else {
        Ok(())
    }
}

/// True iff some word has exactly `set` as its length-`n` factors.
pub fn is_representable(set: &FactorSet) -> Result<bool> {
    non_empty(set)?;
    Ok(graph::has_covering_walk(&OverlapGraph::new(set).successors))
}

/// True iff some circular word has exactly `set` as its length-`n`
/// circular factors: the overlap graph is strongly connected and has at
/// least one edge.
pub fn is_circ_representable(set: &FactorSet) -> Result<bool> {
    non_empty(set)?;
    Ok(graph::has_closed_covering_walk(
        &OverlapGraph::new(set).successors,
    ))
}

/// Shortest ordinary witness; the lexicographically least one among those
/// of minimal length.
pub fn shortest_witness(set: &FactorSet) -> Result<WitnessResult> {
    shortest_witness_bounded(set, DEFAULT_MAX_SEARCH_STATES)
}

pub fn shortest_witness_bounded(set: &FactorSet, max_states: u64) -> Result<WitnessResult> {
    if !is_representable(set)? {
        return Ok(WitnessResult::none());
    }
    let g = OverlapGraph::new(set);
    let Some(walk) = graph::shortest_covering_walk(&g.successors, max_states)? else {
        return Ok(WitnessResult::none());
    };
    let mut letters = Word::from_code(g.vertices[walk[0]], g.order)
        .letters()
        .to_vec();
    letters.extend(walk[1..].iter().map(|&i| g.last_letter(i)));
    Ok(WitnessResult::of(Word::new(letters)?))
}

/// Shortest circular witness (counted as the length of the circular word);
/// the lexicographically least one among those of minimal length.
pub fn shortest_circular_witness(set: &FactorSet) -> Result<WitnessResult> {
    shortest_circular_witness_bounded(set, DEFAULT_MAX_SEARCH_STATES)
}

pub fn shortest_circular_witness_bounded(
    set: &FactorSet,
    max_states: u64,
) -> Result<WitnessResult> {
    if !is_circ_representable(set)? {
        return Ok(WitnessResult::none());
    }
    let g = OverlapGraph::new(set);
    let mut best: Option<Vec<usize>> = None;
    // With equal lengths, a smaller start vertex gives a smaller word, so
    // later starts must be strictly shorter to win.
    for start in 0..g.vertices.len() {
        let limit = best.as_ref().map(|w| w.len() - 2);
        if limit == Some(0) {
            break;
        }
        if let Some(walk) =
            graph::shortest_closed_covering_walk(&g.successors, start, limit, max_states)?
        {
            best = Some(walk);
        }
    }
    let walk = best.expect("strongly connected graph with an edge has a closed covering walk");
    let letters = walk[..walk.len() - 1]
        .iter()
        .map(|&i| g.first_letter(i))
        .collect();
    Ok(WitnessResult::of(Word::new(letters)?))
}

/// The order-`n` set of length-`n` prefixes and suffixes of the members of
/// an order-`(n+1)` set.
pub fn incident(set: &FactorSet) -> Result<FactorSet> {
    non_empty(set)?;
    let n = set.order() - 1;
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "order of incident source",
            value: set.order(),
            allowed: "at least 2",
        });
    }
    let mask = order_mask(n);
    FactorSet::from_codes(n, set.codes().flat_map(|c| [c >> 1, c & mask]))
}

fn pair_codes(order: usize, x: u64) -> [u64; 2] {
    [x, 1 << (order - 1) | x]
}

fn skeleton_codes(order: usize, x: u64) -> [u64; 4] {
    let [zx, ox] = pair_codes(order, x);
    [zx, ox, x << 1, x << 1 | 1]
}

/// Number of pairs `{0x, 1x}` contained in `set`.
pub fn count_pairs(set: &FactorSet) -> usize {
    let n = set.order();
    (0..1u64 << (n - 1))
        .filter(|&x| pair_codes(n, x).iter().all(|&c| set.contains(c)))
        .count()
}

/// Number of skeletons `{0x, 1x, x0, x1}` contained in `set`.
pub fn count_skeletons(set: &FactorSet) -> usize {
    let n = set.order();
    (0..1u64 << (n - 1))
        .filter(|&x| skeleton_codes(n, x).iter().all(|&c| set.contains(c)))
        .count()
}

/// Candidate intersections of an order-`(n+1)` circularly representable set
/// with the net `{0x0, 0x1, 1x0, 1x1}`, given the order-`n` set it is
/// incident on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetFeasibility {
    /// The skeleton of `x` lies in the set: seven candidates.
    Skeleton(Vec<FactorSet>),
    /// The intersection is determined by membership of 0x, 1x, x0, x1.
    Forced(FactorSet),
    /// The memberships contradict each other; no candidate exists.
    Infeasible,
}

impl NetFeasibility {
    pub fn subsets(&self) -> Vec<FactorSet> {
        match self {
            NetFeasibility::Skeleton(all) => all.clone(),
            NetFeasibility::Forced(one) => vec![one.clone()],
            NetFeasibility::Infeasible => Vec::new(),
        }
    }
}

/// `x` has `n - 1` letters (possibly none) where `n` is the order of `set`.
pub fn feasible_net_subsets(x: &[u8], set: &FactorSet) -> Result<NetFeasibility> {
    let n = set.order();
    if x.len() + 1 != n || x.iter().any(|&b| b > 1) {
        return Err(Error::OrderMismatch {
            expected: n - 1,
            found: x.len(),
        });
    }
    let xc = crate::word::code_of(x);
    let net = |a: u64, b: u64| a << n | xc << 1 | b;
    let [zx, ox, xz, xo] = skeleton_codes(n, xc);
    let in_set = |c: u64| set.contains(c);

    if [zx, ox, xz, xo].into_iter().all(in_set) {
        let (x0_0, x0_1, x1_0, x1_1) = (net(0, 0), net(0, 1), net(1, 0), net(1, 1));
        let listed: [&[u64]; 7] = [
            &[x0_0, x1_1],
            &[x0_0, x0_1, x1_1],
            &[x0_0, x1_0, x1_1],
            &[x0_0, x0_1, x1_0, x1_1],
            &[x0_0, x0_1, x1_0],
            &[x0_1, x1_0],
            &[x0_1, x1_0, x1_1],
        ];
        return Ok(NetFeasibility::Skeleton(
            listed
                .iter()
                .map(|codes| FactorSet::from_codes(n + 1, codes.iter().copied()))
                .collect::<Result<_>>()?,
        ));
    }

    let left = [zx, ox];
    let right = [xz, xo];
    let mut forced = FactorSet::empty(n + 1)?;
    for a in 0..2 {
        for b in 0..2 {
            if in_set(left[a as usize]) && in_set(right[b as usize]) {
                forced.insert(net(a, b));
            }
        }
    }
    // every present length-n word must extend on the side facing the net
    let left_ok =
        (0..2).all(|a| !in_set(left[a as usize]) || (0..2).any(|b| forced.contains(net(a, b))));
    let right_ok =
        (0..2).all(|b| !in_set(right[b as usize]) || (0..2).any(|a| forced.contains(net(a, b))));
    Ok(if left_ok && right_ok {
        NetFeasibility::Forced(forced)
    } else {
        NetFeasibility::Infeasible
    })
}
