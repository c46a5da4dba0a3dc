//! Binary words and the primitives built on them: factors, periods,
//! conjugacy, Lyndon words, the Möbius function and de Bruijn words.
//!
//! Words are written as ASCII strings of `0`/`1`; the leftmost character is
//! the first letter. The integer code of a word treats the first letter as
//! the most significant bit, so numeric order on codes of equal length is
//! lexicographic order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::factor_set::FactorSet;

/// A non-empty finite word over `{0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Word> {
        if letters.is_empty() || letters.iter().any(|&b| b > 1) {
            return Err(Error::InvalidWord(
                letters.iter().map(|b| b.to_string()).collect(),
            ));
        }
        Ok(Word { letters })
    }

    /// The word of length `len` whose code is `code`.
    pub fn from_code(code: u64, len: usize) -> Word {
        assert!((1..=64).contains(&len), "code words have 1..=64 letters");
        let letters = (0..len)
            .map(|i| ((code >> (len - 1 - i)) & 1) as u8)
            .collect();
        Word { letters }
    }

    pub fn zeros(len: usize) -> Word {
        assert!(len > 0);
        Word {
            letters: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Letter at 0-based position `i`.
    pub fn get(&self, i: usize) -> u8 {
        self.letters[i]
    }

    /// Letter at position `i` taken modulo the length.
    pub fn cyclic(&self, i: usize) -> u8 {
        self.letters[i % self.letters.len()]
    }

    /// Integer code, available for words of at most 64 letters.
    pub fn code(&self) -> Option<u64> {
        (self.len() <= 64).then(|| code_of(&self.letters))
    }

    /// The factor starting at 0-based `start` with `len` letters.
    pub fn slice(&self, start: usize, len: usize) -> Word {
        Word {
            letters: self.letters[start..start + len].to_vec(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn repeat(&self, times: usize) -> Word {
        assert!(times > 0);
        Word {
            letters: self.letters.repeat(times),
        }
    }

    pub fn reversed(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word { letters }
    }

    pub fn is_palindrome(&self) -> bool {
        self.letters.iter().eq(self.letters.iter().rev())
    }

    pub fn rotate_left(&self, by: usize) -> Word {
        let mut letters = self.letters.clone();
        letters.rotate_left(by % self.len());
        Word { letters }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let letters = s
            .bytes()
            .map(|c| match c {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(Error::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<u8>>>()?;
        if letters.is_empty() {
            return Err(Error::InvalidWord(s.to_string()));
        }
        Ok(Word { letters })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.letters {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn code_of(letters: &[u8]) -> u64 {
    letters.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

/// The set of length-`n` factors of `w`.
pub fn factors(w: &Word, n: usize) -> Result<FactorSet> {
    if n == 0 || w.len() < n {
        return Err(Error::InvalidLength { len: w.len(), n });
    }
    let mut set = FactorSet::empty(n)?;
    let mask = order_mask(n);
    let mut code = code_of(&w.letters[..n - 1]);
    for &b in &w.letters[n - 1..] {
        code = ((code << 1) | b as u64) & mask;
        set.insert(code);
    }
    Ok(set)
}

/// The set of length-`n` factors of `w` read as a circular word. Words
/// shorter than `n` wrap around as many times as needed.
pub fn circular_factors(w: &Word, n: usize) -> Result<FactorSet> {
    if n == 0 {
        return Err(Error::InvalidLength { len: w.len(), n });
    }
    let mut set = FactorSet::empty(n)?;
    let mask = order_mask(n);
    let len = w.len();
    let mut code = (0..n).fold(0u64, |acc, j| (acc << 1) | w.cyclic(j) as u64);
    set.insert(code);
    for i in 1..len {
        code = ((code << 1) | w.cyclic(i + n - 1) as u64) & mask;
        set.insert(code);
    }
    Ok(set)
}

pub(crate) fn order_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Minimal period of a word together with its root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodInfo {
    pub period: usize,
    pub root: Word,
}

/// Minimal period of a letter slice from the longest proper border.
pub(crate) fn minimal_period(letters: &[u8]) -> usize {
    let len = letters.len();
    let mut fail = vec![0usize; len];
    let mut k = 0;
    for i in 1..len {
        while k > 0 && letters[i] != letters[k] {
            k = fail[k - 1];
        }
        if letters[i] == letters[k] {
            k += 1;
        }
        fail[i] = k;
    }
    len - fail[len - 1]
}

pub fn period(w: &Word) -> PeriodInfo {
    let p = minimal_period(&w.letters);
    PeriodInfo {
        period: p,
        root: w.slice(0, p),
    }
}

pub fn root(w: &Word) -> Word {
    period(w).root
}

/// True iff `w2` is a rotation of `w`.
pub fn are_conjugate(w: &Word, w2: &Word) -> bool {
    if w.len() != w2.len() {
        return false;
    }
    let doubled = w.concat(w);
    doubled
        .letters
        .windows(w.len())
        .any(|win| win == w2.letters())
}

pub fn are_root_conjugate(w: &Word, w2: &Word) -> bool {
    are_conjugate(&root(w), &root(w2))
}

/// The lexicographically least rotation of `w`.
pub fn least_rotation(w: &Word) -> Word {
    (0..w.len())
        .map(|i| w.rotate_left(i))
        .min()
        .expect("words are non-empty")
}

pub fn mobius(m: u64) -> i8 {
    assert!(m >= 1, "mobius is defined for m >= 1");
    let mut m = m;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

pub(crate) fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// Number of binary Lyndon words of length `i` (for `1 <= i <= 126`).
pub fn lyndon_count(i: usize) -> u128 {
    assert!((1..=126).contains(&i), "lyndon_count supports 1..=126");
    let sum: i128 = divisors(i as u64)
        .into_iter()
        .map(|d| mobius(i as u64 / d) as i128 * (1i128 << d))
        .sum();
    (sum / i as i128) as u128
}

/// Calls `visit` on every binary Lyndon word of length at most `max_len`,
/// in lexicographic order.
fn for_each_lyndon_up_to(max_len: usize, mut visit: impl FnMut(&[u8])) {
    let mut w: Vec<u8> = vec![0];
    loop {
        visit(&w);
        let m = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last = 1,
            None => break,
        }
    }
}

/// All binary Lyndon words of length `i` in lexicographic order.
pub fn lyndon_words(i: usize) -> Vec<Word> {
    assert!(i >= 1);
    let mut out = Vec::new();
    for_each_lyndon_up_to(i, |w| {
        if w.len() == i {
            out.push(Word {
                letters: w.to_vec(),
            });
        }
    });
    out
}

pub const MAX_DEBRUIJN_ORDER: usize = 24;

/// The lexicographically least binary de Bruijn word of order `n`.
pub fn debruijn(n: usize) -> Result<Word> {
    if !(1..=MAX_DEBRUIJN_ORDER).contains(&n) {
        return Err(Error::OutOfRange {
            what: "de Bruijn order",
            value: n,
            allowed: "1..=24",
        });
    }
    let mut letters = Vec::with_capacity(1 << n);
    for_each_lyndon_up_to(n, |w| {
        if n.is_multiple_of(w.len()) {
            letters.extend_from_slice(w);
        }
    });
    Ok(Word { letters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn set(n: usize, words: &[&str]) -> FactorSet {
        FactorSet::from_words(n, words.iter().map(|s| w(s))).unwrap()
    }

    fn all_words(len: usize) -> impl Iterator<Item = Word> {
        (0..1u64 << len).map(move |c| Word::from_code(c, len))
    }

    /// Minimal period straight from the definition w = s^k s'.
    fn period_by_definition(w: &Word) -> usize {
        let l = w.letters();
        (1..=l.len())
            .find(|&p| (p..l.len()).all(|i| l[i] == l[i - p]))
            .unwrap()
    }

    fn is_lyndon_by_definition(w: &Word) -> bool {
        (1..w.len()).all(|i| w < &w.rotate_left(i))
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("0011").to_string(), "0011");
        assert_eq!(w("0011").code(), Some(3));
        assert_eq!(Word::from_code(3, 4), w("0011"));
        assert!("".parse::<Word>().is_err());
        assert!("012".parse::<Word>().is_err());
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factors(&w("001"), 2).unwrap(), set(2, &["00", "01"]));
        assert_eq!(factors(&w("0110"), 4).unwrap(), set(4, &["0110"]));
        // Window of width 3 over 0001011100 by hand:
        // 000 001 010 101 011 111 110 100
        let f = factors(&w("0001011100"), 3).unwrap();
        assert_eq!(f.len(), 8);
        assert_eq!(
            f,
            set(3, &["000", "001", "010", "101", "011", "111", "110", "100"])
        );
        assert!(matches!(
            factors(&w("0"), 3),
            Err(Error::InvalidLength { len: 1, n: 3 })
        ));
    }

    #[test]
    fn circular_factor_examples() {
        assert_eq!(
            circular_factors(&w("001"), 2).unwrap(),
            set(2, &["00", "01", "10"])
        );
        assert_eq!(
            circular_factors(&w("0011"), 3).unwrap(),
            set(3, &["001", "011", "110", "100"])
        );
        for n in 1..8 {
            let c = circular_factors(&w("0"), n).unwrap();
            assert_eq!(c.len(), 1);
            assert!(c.contains(0));
        }
        // 01 wraps: 0101..., 1010...
        assert_eq!(
            circular_factors(&w("01"), 4).unwrap(),
            set(4, &["0101", "1010"])
        );
    }

    #[test]
    fn factors_within_circular_factors() {
        for len in 1..=12 {
            for word in all_words(len) {
                for n in 1..=len.min(6) {
                    let f = factors(&word, n).unwrap();
                    let c = circular_factors(&word, n).unwrap();
                    assert!(f.is_subset(&c));
                    // the n-1 wrap-around windows decide equality
                    let ext = word.concat(&word).slice(0, len + n - 1);
                    let wraps: Vec<u64> = (len - n + 1..len)
                        .map(|i| ext.slice(i, n).code().unwrap())
                        .collect();
                    assert_eq!(f == c, wraps.iter().all(|&x| f.contains(x)));
                }
            }
        }
    }

    #[test]
    fn period_examples() {
        assert_eq!(period(&w("010110")).period, 5);
        assert_eq!(period(&w("010110")).root, w("01011"));
        assert_eq!(period(&w("0000")).period, 1);
        assert_eq!(period(&w("0")).period, 1);
        assert_eq!(period_by_definition(&w("00110")), 4);
        assert_eq!(period(&w("00110")).period, 4);
    }

    #[test]
    fn period_matches_definition() {
        for len in 1..=16 {
            for word in all_words(len) {
                let info = period(&word);
                assert_eq!(info.period, period_by_definition(&word), "{word}");
                let rebuilt = info.root.repeat(len.div_ceil(info.period)).slice(0, len);
                assert_eq!(rebuilt, word);
            }
        }
    }

    #[test]
    fn conjugacy_examples() {
        assert!(are_conjugate(&w("0011"), &w("1100")));
        assert!(are_conjugate(&w("01"), &w("01")));
        assert!(!are_conjugate(&w("0011"), &w("0101")));
        assert!(!are_conjugate(&w("01"), &w("010")));
        assert!(are_root_conjugate(&w("010110"), &w("011010")));
        assert!(are_root_conjugate(&w("0110"), &w("0110")));
        assert!(!are_root_conjugate(&w("000"), &w("111")));
    }

    #[test]
    fn root_conjugacy_is_equivalence() {
        let sample: Vec<Word> = (1..=6).flat_map(all_words).collect();
        for a in &sample {
            assert!(are_root_conjugate(a, a));
        }
        for a in &sample {
            for b in &sample {
                let ab = are_root_conjugate(a, b);
                assert_eq!(ab, are_root_conjugate(b, a));
                if !ab {
                    continue;
                }
                for c in sample.iter().filter(|c| c.len() <= 4) {
                    if are_root_conjugate(b, c) {
                        assert!(are_root_conjugate(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn fine_wilf() {
        let sample: Vec<Word> = (1..=8).flat_map(all_words).collect();
        for a in &sample {
            let pa = period(a).period;
            for b in &sample {
                let pb = period(b).period;
                let need = pa + pb - 1;
                let common = a
                    .letters()
                    .iter()
                    .zip(b.letters())
                    .take_while(|(x, y)| x == y)
                    .count();
                if common >= need {
                    assert_eq!(root(a), root(b), "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn fine_wilf_longer_words() {
        // extend random-ish prefixes of length <= 14 with one of two letters
        for len in 9..=14 {
            for a in all_words(len).step_by(7) {
                let pa = period(&a).period;
                for cut in 1..len {
                    let mut letters = a.letters()[..cut].to_vec();
                    letters.push(1 - a.get(cut));
                    let b = Word::new(letters).unwrap();
                    let pb = period(&b).period;
                    if cut >= pa + pb - 1 {
                        assert_eq!(root(&a), root(&b));
                    }
                }
            }
        }
    }

    #[test]
    fn lyndon_schutzenberger_consequence() {
        for len in 3..=14 {
            for word in all_words(len) {
                let l = word.letters();
                for x in 1..len {
                    for z in 1..len - x {
                        let y = len - x - z;
                        if y == 0 || x != z {
                            continue;
                        }
                        // xy = yz with |x| = |z|
                        if l[..x + y] == l[x..] {
                            assert!(period(&word).period <= x, "{word} x={x}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (m, &mu) in (1..=12).zip(expected.iter()) {
            assert_eq!(mobius(m), mu, "mu({m})");
        }
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn lyndon_counts_and_words() {
        assert_eq!(lyndon_count(1), 2);
        assert_eq!(lyndon_count(2), 1);
        assert_eq!(lyndon_count(6), 9);
        assert_eq!(lyndon_words(1), vec![w("0"), w("1")]);
        assert_eq!(lyndon_words(2), vec![w("01")]);
        assert_eq!(lyndon_words(3), vec![w("001"), w("011")]);
        for i in 1..=16 {
            let by_filter: Vec<Word> = all_words(i).filter(is_lyndon_by_definition).collect();
            let generated = lyndon_words(i);
            assert_eq!(generated, by_filter, "length {i}");
            assert_eq!(lyndon_count(i), generated.len() as u128);
        }
    }

    #[test]
    fn necklace_identity() {
        for n in 1..=16u64 {
            let total: u128 = divisors(n)
                .into_iter()
                .map(|d| d as u128 * lyndon_count(d as usize))
                .sum();
            assert_eq!(total, 1u128 << n);
        }
    }

    #[test]
    fn debruijn_words() {
        assert_eq!(debruijn(1).unwrap(), w("01"));
        assert_eq!(debruijn(2).unwrap(), w("0011"));
        assert_eq!(debruijn(3).unwrap(), w("00010111"));
        for n in 1..=12 {
            let b = debruijn(n).unwrap();
            assert_eq!(b.len(), 1 << n);
            let mut seen = vec![0u32; 1 << n];
            for i in 0..b.len() {
                let code = (0..n).fold(0usize, |acc, j| (acc << 1) | b.cyclic(i + j) as usize);
                seen[code] += 1;
            }
            assert!(seen.iter().all(|&c| c == 1), "order {n}");
            assert!(circular_factors(&b, n).unwrap().is_full());
        }
        assert!(debruijn(0).is_err());
        assert!(debruijn(25).is_err());
    }

    #[test]
    fn debruijn_is_lexicographically_least() {
        for n in 1..=4 {
            let len = 1 << n;
            let least = all_words(len)
                .find(|c| circular_factors(c, n).unwrap().is_full())
                .unwrap();
            assert_eq!(debruijn(n).unwrap(), least);
        }
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(bits in proptest::collection::vec(0u8..2, 1..80)) {
            let word = Word::new(bits).unwrap();
            prop_assert_eq!(word.to_string().parse::<Word>().unwrap(), word);
        }

        #[test]
        fn conjugate_iff_some_rotation(bits in proptest::collection::vec(0u8..2, 1..12), by in 0usize..12) {
            let word = Word::new(bits).unwrap();
            let rot = word.rotate_left(by);
            prop_assert!(are_conjugate(&word, &rot));
            prop_assert_eq!(least_rotation(&word), least_rotation(&rot));
        }
    }
}
