//! `T(t, n)`: how many distinct factor sets `F_n(w)` arise from binary
//! words of length `t`, counted exhaustively and by closed form, plus the
//! equal-factor-set characterization and the `t = 2n` explorer.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::word::{
    are_root_conjugate, lyndon_count, lyndon_words, minimal_period, order_mask, Word,
};

pub const MAX_BRUTE_T: usize = 24;
pub const MAX_CLOSED_T: usize = 63;

/// Sorted distinct factor codes; canonical and collision-free.
type Key = Box<[u32]>;

fn factor_key(code: u64, t: usize, n: usize) -> Key {
    let mask = order_mask(n);
    let mut codes: Vec<u32> = (0..=t - n)
        .map(|i| ((code >> (t - n - i)) & mask) as u32)
        .collect();
    codes.sort_unstable();
    codes.dedup();
    codes.into_boxed_slice()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Closed,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TCell {
    pub t: usize,
    pub n: usize,
    pub value: u64,
    pub method: Method,
}

fn check_brute(t: usize, n: usize, budget: &Budget) -> Result<()> {
    if n == 0 || t < n {
        return Err(Error::Precondition(format!(
            "need 1 <= n <= t, got t={t} n={n}"
        )));
    }
    if t > MAX_BRUTE_T {
        return Err(Error::OutOfRange {
            what: "brute-force word length",
            value: t,
            allowed: "at most 24",
        });
    }
    // one key per word in the worst case, plus hash-table slack
    let per_word = 48 + 4 * (t - n + 1) as u64;
    budget.check_memory((1u64 << t) * per_word, "factor-set table")
}

const CHUNK: u64 = 1 << 14;

pub fn count_t_bruteforce(t: usize, n: usize, budget: &Budget) -> Result<TCell> {
    check_brute(t, n, budget)?;
    let total = 1u64 << t;
    let chunks = total.div_ceil(CHUNK);
    let set = budget.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                (c * CHUNK..((c + 1) * CHUNK).min(total))
                    .map(|code| factor_key(code, t, n))
                    .collect::<HashSet<Key>>()
            })
            .reduce(HashSet::new, |a, b| {
                let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
                big.extend(small);
                big
            })
    });
    Ok(TCell {
        t,
        n,
        value: set.len() as u64,
        method: Method::Brute,
    })
}

/// `2^t - sum_{i=1}^{t-n+1} (i-1) L(i)`, valid for `n <= t < 2n`.
pub fn count_t_closed(t: usize, n: usize) -> Result<TCell> {
    if n == 0 || t < n || t >= 2 * n {
        return Err(Error::OutOfValidityRegion { t, n });
    }
    if t > MAX_CLOSED_T {
        return Err(Error::OutOfRange {
            what: "closed-form word length",
            value: t,
            allowed: "at most 63",
        });
    }
    let repeats: u128 = (1..=t - n + 1)
        .map(|i| (i as u128 - 1) * lyndon_count(i))
        .sum();
    Ok(TCell {
        t,
        n,
        value: ((1u128 << t) - repeats) as u64,
        method: Method::Closed,
    })
}

/// Words of length `t` grouped by `F_n`, non-singleton groups only.
/// Members ascend; groups are ordered by their least member.
pub fn factor_classes(t: usize, n: usize, budget: &Budget) -> Result<Vec<Vec<u64>>> {
    check_brute(t, n, budget)?;
    let mut keyed: Vec<(Key, u64)> = budget.install(|| {
        let mut v: Vec<(Key, u64)> = (0..1u64 << t)
            .into_par_iter()
            .map(|code| (factor_key(code, t, n), code))
            .collect();
        v.par_sort_unstable();
        v
    });
    let mut classes = Vec::new();
    let mut i = 0;
    while i < keyed.len() {
        let mut j = i + 1;
        while j < keyed.len() && keyed[j].0 == keyed[i].0 {
            j += 1;
        }
        if j - i > 1 {
            classes.push(keyed[i..j].iter().map(|(_, c)| *c).collect::<Vec<u64>>());
        }
        i = j;
    }
    keyed.clear();
    classes.sort_unstable_by_key(|c| c[0]);
    Ok(classes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualFactorPair {
    pub w: Word,
    pub w2: Word,
    pub n: usize,
    pub period_w: usize,
    pub period_w2: usize,
    pub root_conjugate: bool,
}

impl EqualFactorPair {
    fn new(w: Word, w2: Word, n: usize) -> EqualFactorPair {
        EqualFactorPair {
            period_w: minimal_period(w.letters()),
            period_w2: minimal_period(w2.letters()),
            root_conjugate: are_root_conjugate(&w, &w2),
            w,
            w2,
            n,
        }
    }
}

fn class_pairs(class: &[u64], t: usize, n: usize) -> Vec<EqualFactorPair> {
    let words: Vec<Word> = class.iter().map(|&c| Word::from_code(c, t)).collect();
    let mut out = Vec::new();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            out.push(EqualFactorPair::new(words[i].clone(), words[j].clone(), n));
        }
    }
    out
}

/// Every unordered pair of distinct length-`t` words with equal `F_n`.
pub fn equal_factor_pairs(t: usize, n: usize, budget: &Budget) -> Result<Vec<EqualFactorPair>> {
    Ok(factor_classes(t, n, budget)?
        .iter()
        .flat_map(|c| class_pairs(c, t, n))
        .collect())
}

/// The distinct length-`t` windows of `root^infinity`.
pub fn periodic_windows(root: &Word, t: usize) -> Vec<Word> {
    let p = root.len();
    let long = root.repeat(t.div_ceil(p) + 1);
    let mut out: Vec<Word> = (0..p).map(|j| long.slice(j, t)).collect();
    out.sort();
    out.dedup();
    out
}

const MAX_REPORTED: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub schema_version: u32,
    pub t: usize,
    pub n: usize,
    pub k: usize,
    /// `n >= k + 1`, where the characterization is claimed.
    pub in_region: bool,
    pub classes_checked: usize,
    pub pairs_checked: usize,
    pub periodic_classes_checked: usize,
    pub forward_violations: usize,
    pub reverse_violations: usize,
    /// First few violations, verbatim.
    pub examples: Vec<String>,
    pub passed: bool,
}

/// Checks both directions of: `F_n(w) = F_n(w')` for distinct `w, w'` iff
/// they have one period `p <= k + 1` and are root-conjugate, with classes
/// of exactly `p` words. Runs whether or not `(t, n)` is in the region.
pub fn theorem1_scan(t: usize, n: usize, budget: &Budget) -> Result<Theorem1Report> {
    let classes = factor_classes(t, n, budget)?;
    let k = t - n;
    let mut examples = Vec::new();
    let note = |s: String, examples: &mut Vec<String>| {
        if examples.len() < MAX_REPORTED {
            examples.push(s);
        }
    };

    let mut forward = 0;
    let mut pairs_checked = 0;
    let mut class_of: HashMap<u64, usize> = HashMap::new();
    for (ci, class) in classes.iter().enumerate() {
        for &c in class {
            class_of.insert(c, ci);
        }
        let first = Word::from_code(class[0], t);
        let p = minimal_period(first.letters());
        pairs_checked += class.len() * (class.len() - 1) / 2;
        let mut bad = class.len() != p || p > k + 1;
        for &c in &class[1..] {
            let w = Word::from_code(c, t);
            if minimal_period(w.letters()) != p || !are_root_conjugate(&first, &w) {
                bad = true;
                let pair = EqualFactorPair::new(first.clone(), w, n);
                note(
                    format!(
                        "forward: {} (period {}) and {} (period {}) share F_{n}, root-conjugate: {}",
                        pair.w, pair.period_w, pair.w2, pair.period_w2, pair.root_conjugate
                    ),
                    &mut examples,
                );
            }
        }
        if bad {
            forward += 1;
            if class.len() != p || p > k + 1 {
                note(
                    format!(
                        "forward: class of {first} has {} members, period {p}, k + 1 = {}",
                        class.len(),
                        k + 1
                    ),
                    &mut examples,
                );
            }
        }
    }

    let mut reverse = 0;
    let mut periodic = 0;
    for p in 1..=(k + 1).min(t) {
        for lw in lyndon_words(p) {
            periodic += 1;
            let windows = periodic_windows(&lw, t);
            let periods_ok = windows.iter().all(|w| minimal_period(w.letters()) == p);
            let key = factor_key(windows[0].code().expect("t <= 24"), t, n);
            let same = windows
                .iter()
                .all(|w| factor_key(w.code().expect("t <= 24"), t, n) == key);
            let size = class_of
                .get(&windows[0].code().expect("t <= 24"))
                .map_or(1, |&ci| classes[ci].len());
            if !(periods_ok && same && windows.len() == p && size == p) {
                reverse += 1;
                note(
                    format!(
                        "reverse: root {lw}, {} windows, equal F_{n}: {same}, class size {size}, expected {p}",
                        windows.len()
                    ),
                    &mut examples,
                );
            }
        }
    }

    Ok(Theorem1Report {
        schema_version: crate::SCHEMA_VERSION,
        t,
        n,
        k,
        in_region: n > k,
        classes_checked: classes.len(),
        pairs_checked,
        periodic_classes_checked: periodic,
        forward_violations: forward,
        reverse_violations: reverse,
        examples,
        passed: forward == 0 && reverse == 0,
    })
}

/// [`theorem1_scan`] restricted to `t = n + k` with `n >= k + 1`.
pub fn check_theorem1(t: usize, n: usize, budget: &Budget) -> Result<Theorem1Report> {
    if n == 0 || t < n || n < t - n + 1 {
        return Err(Error::Precondition(format!(
            "characterization needs n >= k + 1 with k = t - n; got t={t} n={n}"
        )));
    }
    theorem1_scan(t, n, budget)
}

/// The words `x = 0^k 1 0^(k-2)` and `y = 0^(k-1) 1 0^(k-1)`: equal `F_(k-1)`
/// at length `2k - 1` with periods `k + 1` and `k`.
pub fn unequal_period_family(k: usize) -> (Word, Word) {
    assert!(k >= 2);
    let mut x = vec![0u8; k];
    x.push(1);
    x.extend(vec![0u8; k - 2]);
    let mut y = vec![0u8; k - 1];
    y.push(1);
    y.extend(vec![0u8; k - 1]);
    (Word::new(x).expect("binary"), Word::new(y).expect("binary"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub u: Word,
    pub v: Word,
}

/// Every factorization `{x, y} = {u v 01 v^R u, u v 10 v^R u}` with `u` a
/// non-empty palindrome and `v` non-empty, shortest `u` first.
pub fn find_shapes(x: &Word, y: &Word) -> Vec<Shape> {
    let len = x.len();
    if len != y.len() || !len.is_multiple_of(2) || len < 6 {
        return Vec::new();
    }
    let half = len / 2 - 1;
    let build = |u: &Word, v: &Word, mid: &str| -> Word {
        let mid: Word = mid.parse().expect("binary");
        u.concat(v).concat(&mid).concat(&v.reversed()).concat(u)
    };
    let mut out = Vec::new();
    for ul in 1..half {
        let u = x.slice(0, ul);
        let v = x.slice(ul, half - ul);
        if !u.is_palindrome() {
            continue;
        }
        let a = build(&u, &v, "01");
        let b = build(&u, &v, "10");
        if (*x == a && *y == b) || (*x == b && *y == a) {
            out.push(Shape { u, v });
        }
    }
    out
}

fn complement(w: &Word) -> Word {
    Word::new(w.letters().iter().map(|b| 1 - b).collect()).expect("binary")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjecturePair {
    pub x: Word,
    pub y: Word,
    pub period: usize,
    pub shapes: Vec<Shape>,
    /// `period == n + |u|` for some shape
    pub period_is_n_plus_u: bool,
    /// `period == 2n - |u|` for some shape
    pub period_is_2n_minus_u: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub schema_version: u32,
    pub n: usize,
    pub words_scanned: u64,
    pub pairs: usize,
    /// Pairs with period above `n + 1`.
    pub nontrivial: Vec<ConjecturePair>,
    /// Nontrivial pairs counted once per complement orbit.
    pub nontrivial_up_to_complement: usize,
    /// Pairs with unequal periods or roots that are not conjugate.
    pub period_violations: Vec<EqualFactorPair>,
    pub shape_violations: usize,
    pub passed: bool,
}

/// At `t = 2n`, checks that equal-`F_n` pairs have equal periods and
/// conjugate roots, and that pairs with period above `n + 1` have the
/// palindromic `u v 01 v^R u` shape.
pub fn check_conjecture_2n(n: usize, budget: &Budget) -> Result<ConjectureReport> {
    if n == 0 || 2 * n > 22 {
        return Err(Error::OutOfRange {
            what: "conjecture order",
            value: n,
            allowed: "1..=11",
        });
    }
    let pairs = equal_factor_pairs(2 * n, n, budget)?;
    let mut nontrivial = Vec::new();
    let mut period_violations = Vec::new();
    let mut shape_violations = 0;
    for pair in &pairs {
        if pair.period_w != pair.period_w2 || !pair.root_conjugate {
            period_violations.push(pair.clone());
            continue;
        }
        let p = pair.period_w;
        if p > n + 1 {
            let shapes = find_shapes(&pair.w, &pair.w2);
            if shapes.is_empty() {
                shape_violations += 1;
            }
            nontrivial.push(ConjecturePair {
                x: pair.w.clone(),
                y: pair.w2.clone(),
                period: p,
                period_is_n_plus_u: shapes.iter().any(|s| p == n + s.u.len()),
                period_is_2n_minus_u: shapes.iter().any(|s| p == 2 * n - s.u.len()),
                shapes,
            });
        }
    }
    let orbits: HashSet<(Word, Word)> = nontrivial
        .iter()
        .map(|p| {
            let (cx, cy) = (complement(&p.x), complement(&p.y));
            let flipped = if cx < cy { (cx, cy) } else { (cy, cx) };
            flipped.min((p.x.clone(), p.y.clone()))
        })
        .collect();
    Ok(ConjectureReport {
        schema_version: crate::SCHEMA_VERSION,
        n,
        nontrivial_up_to_complement: orbits.len(),
        words_scanned: 1 << (2 * n),
        pairs: pairs.len(),
        passed: period_violations.is_empty() && shape_violations == 0,
        nontrivial,
        period_violations,
        shape_violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub t: usize,
    pub n: usize,
    /// Absent when neither method was feasible.
    pub value: Option<u64>,
    pub method: Option<Method>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TTable {
    pub schema_version: u32,
    pub t_max: usize,
    pub n_max: usize,
    /// Row-major: `n` ascending, then `t` ascending from `n`.
    pub cells: Vec<TableCell>,
}

/// Fills `T(t, n)` for `1 <= n <= n_max`, `n <= t <= t_max`. Cells where both
/// methods apply must agree; a cell whose brute force exceeds the budget
/// falls back to the closed form or stays empty.
pub fn t_table(t_max: usize, n_max: usize, budget: &Budget) -> Result<TTable> {
    let mut cells = Vec::new();
    for n in 1..=n_max {
        for t in n..=t_max {
            let brute = match count_t_bruteforce(t, n, budget) {
                Ok(c) => Some(c.value),
                Err(Error::BudgetExhausted { .. } | Error::OutOfRange { .. }) => None,
                Err(e) => return Err(e),
            };
            let closed = count_t_closed(t, n).ok().map(|c| c.value);
            let (value, method) = match (brute, closed) {
                (Some(b), Some(c)) if b != c => {
                    return Err(Error::Mismatch {
                        t,
                        n,
                        closed: c as u128,
                        brute: b as u128,
                    })
                }
                (Some(b), Some(_)) => (Some(b), Some(Method::Both)),
                (Some(b), None) => (Some(b), Some(Method::Brute)),
                (None, Some(c)) => (Some(c), Some(Method::Closed)),
                (None, None) => (None, None),
            };
            cells.push(TableCell {
                t,
                n,
                value,
                method,
            });
        }
    }
    Ok(TTable {
        schema_version: crate::SCHEMA_VERSION,
        t_max,
        n_max,
        cells,
    })
}

impl TTable {
    pub fn get(&self, t: usize, n: usize) -> Option<u64> {
        self.cells
            .iter()
            .find(|c| c.t == t && c.n == n)
            .and_then(|c| c.value)
    }

    fn row(&self, n: usize) -> Vec<String> {
        (1..=self.t_max)
            .map(|t| self.get(t, n).map(|v| v.to_string()).unwrap_or_default())
            .collect()
    }

    /// Rows `n`, columns `t`; empty field where not computed.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n");
        for t in 1..=self.t_max {
            let _ = write!(out, ",{t}");
        }
        out.push('\n');
        for n in 1..=self.n_max {
            let _ = writeln!(out, "{n},{}", self.row(n).join(","));
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| n \\ t |");
        for t in 1..=self.t_max {
            let _ = write!(out, " {t} |");
        }
        out.push_str("\n|---|");
        out.push_str(&"---:|".repeat(self.t_max));
        out.push('\n');
        for n in 1..=self.n_max {
            let _ = writeln!(out, "| {n} | {} |", self.row(n).join(" | "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::factors;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn budget() -> Budget {
        Budget::default()
    }

    fn brute(t: usize, n: usize) -> u64 {
        count_t_bruteforce(t, n, &budget()).unwrap().value
    }

    // Independent count through the public factor-set API.
    fn naive(t: usize, n: usize) -> usize {
        (0..1u64 << t)
            .map(|c| factors(&Word::from_code(c, t), n).unwrap().to_hex())
            .collect::<HashSet<_>>()
            .len()
    }

    #[test]
    fn published_cells() {
        assert_eq!(brute(5, 3), 27);
        assert_eq!(brute(8, 4), 216);
        assert_eq!(brute(4, 4), 16);
        for n in 1..=8 {
            assert_eq!(brute(n, n), 1 << n);
        }
        assert_eq!(count_t_closed(7, 4).unwrap().value, 114);
        assert_eq!(count_t_closed(9, 5).unwrap().value, 474);
        for t in 1..=20 {
            assert_eq!(count_t_closed(t, t).unwrap().value, 1 << t);
        }
    }

    #[test]
    fn matches_naive_count() {
        for n in 1..=4 {
            for t in n..=11 {
                assert_eq!(brute(t, n) as usize, naive(t, n), "t={t} n={n}");
            }
        }
    }

    #[test]
    fn closed_form_region() {
        assert!(matches!(
            count_t_closed(8, 4),
            Err(Error::OutOfValidityRegion { .. })
        ));
        assert!(matches!(
            count_t_closed(3, 4),
            Err(Error::OutOfValidityRegion { .. })
        ));
        for n in 1..=7 {
            for t in n..2 * n {
                assert_eq!(
                    count_t_closed(t, n).unwrap().value,
                    brute(t, n),
                    "t={t} n={n}"
                );
            }
        }
        assert!(count_t_bruteforce(3, 4, &budget()).is_err());
    }

    #[test]
    fn classes_sum_to_deficit_and_are_root_conjugates() {
        for n in 1..=8 {
            for t in n..=12 {
                let classes = factor_classes(t, n, &budget()).unwrap();
                let excess: u64 = classes.iter().map(|c| c.len() as u64 - 1).sum();
                assert_eq!(excess, (1 << t) - brute(t, n), "t={t} n={n}");
                if t >= 2 * n {
                    continue;
                }
                for class in &classes {
                    let first = Word::from_code(class[0], t);
                    assert_eq!(class.len(), minimal_period(first.letters()));
                    let root = first.slice(0, class.len());
                    let expected: Vec<u64> = periodic_windows(&root, t)
                        .iter()
                        .map(|x| x.code().unwrap())
                        .collect();
                    assert_eq!(class, &expected);
                }
            }
        }
    }

    #[test]
    fn pair_examples() {
        let pairs = equal_factor_pairs(6, 3, &budget()).unwrap();
        let p = pairs
            .iter()
            .find(|p| p.w == w("010110") && p.w2 == w("011010"))
            .unwrap();
        assert_eq!((p.period_w, p.period_w2, p.root_conjugate), (5, 5, true));
        for n in 1..=6 {
            assert!(equal_factor_pairs(n, n, &budget()).unwrap().is_empty());
        }
        for k in 3..=6 {
            let (x, y) = unequal_period_family(k);
            assert_eq!(minimal_period(x.letters()), k + 1);
            assert_eq!(minimal_period(y.letters()), k);
            let pairs = equal_factor_pairs(2 * k - 1, k - 1, &budget()).unwrap();
            assert!(pairs
                .iter()
                .any(|p| (p.w == y && p.w2 == x) || (p.w == x && p.w2 == y)));
        }
    }

    #[test]
    fn theorem1() {
        let r = check_theorem1(7, 4, &budget()).unwrap();
        assert!(r.passed && r.in_region, "{r:?}");
        for n in 1..=10 {
            assert!(check_theorem1(n, n, &budget()).unwrap().passed);
        }
        assert!(check_theorem1(7, 3, &budget()).is_err());
        let scan = theorem1_scan(7, 3, &budget()).unwrap();
        assert!(!scan.passed && !scan.in_region && scan.forward_violations > 0);
    }

    #[test]
    fn conjecture_small() {
        let r = check_conjecture_2n(3, &budget()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.nontrivial.len(), 2);
        assert_eq!(r.nontrivial_up_to_complement, 1);
        let p = &r.nontrivial[0];
        assert_eq!(
            (p.x.to_string().as_str(), p.y.to_string().as_str()),
            ("010110", "011010")
        );
        assert_eq!(
            p.shapes,
            vec![Shape {
                u: w("0"),
                v: w("1")
            }]
        );
        assert_eq!(p.period, 5);
        assert!(p.period_is_2n_minus_u && !p.period_is_n_plus_u);
        let r = check_conjecture_2n(1, &budget()).unwrap();
        assert_eq!(r.words_scanned, 4);
        // several shapes can fit one pair
        let shapes = find_shapes(&w("0010010100"), &w("0010100100"));
        assert_eq!(shapes.len(), 2);
    }

    #[test]
    fn table_rows() {
        let table = t_table(4, 1, &budget()).unwrap();
        assert_eq!(table.to_csv(), "n,1,2,3,4\n1,2,3,3,3\n");
        let table = t_table(8, 3, &budget()).unwrap();
        assert_eq!(
            table
                .cells
                .iter()
                .find(|c| c.t == 5 && c.n == 3)
                .unwrap()
                .method,
            Some(Method::Both)
        );
        assert_eq!(
            table
                .cells
                .iter()
                .find(|c| c.t == 6 && c.n == 3)
                .unwrap()
                .method,
            Some(Method::Brute)
        );
        assert!(table
            .to_markdown()
            .contains("| 3 |  |  | 8 | 15 | 27 | 48 | 72 | 94 |"));
        let tiny = Budget::default().with_memory_mb(0);
        let closed_only = t_table(5, 3, &tiny).unwrap();
        assert_eq!(closed_only.get(5, 3), Some(27));
        assert_eq!(
            closed_only
                .cells
                .iter()
                .find(|c| c.t == 5 && c.n == 3)
                .unwrap()
                .method,
            Some(Method::Closed)
        );
        assert_eq!(closed_only.get(5, 2), None);
    }
}
