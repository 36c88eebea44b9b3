//! Posets from monoid presentations with homogeneous relations.
//!
//! Words over a finite alphabet are identified by the two-sided congruence
//! closure of length-preserving relations (`A = B` implies `XAY = XBY`).
//! Because substitutions preserve length, the classes are graded by word
//! length and closure per length is a finite union-find computation. The
//! associated poset has the congruence classes as vertices, with `class(w)`
//! covered by `class(wa)` for every letter `a`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{RankedPoset, Vertex};

/// Total number of words enumerated per run unless overridden.
pub const DEFAULT_BUDGET: usize = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonoidError {
    #[error("enumerating {required} words exceeds the budget of {budget}")]
    BudgetExceeded { required: usize, budget: usize },
    #[error("t_{0} is not defined: indices start at 2")]
    IndexTooSmall(usize),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("relation t_{index} has length {len}, beyond the requested maximum {max}")]
    RelationTooLong { index: usize, len: usize, max: usize },
    #[error("cannot parse presentation: {0}")]
    Parse(String),
    #[error("word length {len} exceeds the table maximum {max}")]
    WordTooLong { len: usize, max: usize },
}

/// A finite alphabet with homogeneous relations (both sides of every
/// relation have the same length, at least 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidPresentation {
    alphabet: Vec<char>,
    relations: Vec<(Vec<u8>, Vec<u8>)>,
}

impl MonoidPresentation {
    pub fn new(alphabet: &str, relations: &[(&str, &str)]) -> Result<Self, MonoidError> {
        let alphabet: Vec<char> = alphabet.chars().filter(|c| !c.is_whitespace()).collect();
        if alphabet.is_empty() {
            return Err(MonoidError::Parse("empty alphabet".into()));
        }
        let mut seen = BTreeSet::new();
        for &c in &alphabet {
            if !seen.insert(c) {
                return Err(MonoidError::Parse(format!("duplicate symbol {c:?}")));
            }
        }
        let mut pres = MonoidPresentation {
            alphabet,
            relations: Vec::new(),
        };
        for (lhs, rhs) in relations {
            let l = pres.encode(lhs)?;
            let r = pres.encode(rhs)?;
            if l.len() != r.len() {
                return Err(MonoidError::InvalidRelation(format!(
                    "{lhs} = {rhs} is not homogeneous"
                )));
            }
            if l.len() < 2 {
                return Err(MonoidError::InvalidRelation(format!(
                    "{lhs} = {rhs} involves strings of length < 2"
                )));
            }
            pres.relations.push((l, r));
        }
        Ok(pres)
    }

    /// Parses the presentation file format: first line the alphabet symbols
    /// separated by spaces, each following non-empty line `LHS = RHS`.
    pub fn parse(text: &str) -> Result<Self, MonoidError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let alphabet_line = lines.next().ok_or_else(|| {
            MonoidError::Parse("missing alphabet line".into())
        })?;
        for sym in alphabet_line.split_whitespace() {
            if sym.chars().count() != 1 {
                return Err(MonoidError::Parse(format!(
                    "alphabet symbols must be single characters, got {sym:?}"
                )));
            }
        }
        let alphabet: String = alphabet_line.split_whitespace().collect();
        let mut relations = Vec::new();
        for line in lines {
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| {
                MonoidError::Parse(format!("expected 'LHS = RHS', got {line:?}"))
            })?;
            relations.push((lhs.trim().to_string(), rhs.trim().to_string()));
        }
        let refs: Vec<(&str, &str)> = relations
            .iter()
            .map(|(l, r)| (l.as_str(), r.as_str()))
            .collect();
        MonoidPresentation::new(&alphabet, &refs)
    }

    /// The Stern presentation: alphabet {a, b, c} with ac = ba and bc = ca.
    pub fn stern() -> Self {
        MonoidPresentation::new("abc", &[("ac", "ba"), ("bc", "ca")])
            .expect("the Stern presentation is valid")
    }

    /// The free monoid on the given alphabet.
    pub fn free(alphabet: &str) -> Result<Self, MonoidError> {
        MonoidPresentation::new(alphabet, &[])
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn relations(&self) -> Vec<(String, String)> {
        self.relations
            .iter()
            .map(|(l, r)| (self.decode(l), self.decode(r)))
            .collect()
    }

    fn encode(&self, word: &str) -> Result<Vec<u8>, MonoidError> {
        word.chars()
            .map(|c| {
                self.alphabet
                    .iter()
                    .position(|&s| s == c)
                    .map(|i| i as u8)
                    .ok_or(MonoidError::UnknownSymbol(c))
            })
            .collect()
    }

    fn decode(&self, word: &[u8]) -> String {
        word.iter().map(|&i| self.alphabet[i as usize]).collect()
    }
}

/// The relation family t_n over {L, R}: n copies of LR followed by LL on
/// the left, RR followed by 2(n-1) copies of L and RL on the right. Both
/// sides have length 2n + 2.
pub fn s_family(indices: &BTreeSet<usize>) -> Result<MonoidPresentation, MonoidError> {
    if let Some(&n) = indices.iter().find(|&&n| n < 2) {
        return Err(MonoidError::IndexTooSmall(n));
    }
    let relations: Vec<(String, String)> = indices
        .iter()
        .map(|&n| {
            let lhs = format!("{}LL", "LR".repeat(n));
            let rhs = format!("RR{}RL", "L".repeat(2 * (n - 1)));
            (lhs, rhs)
        })
        .collect();
    let refs: Vec<(&str, &str)> = relations
        .iter()
        .map(|(l, r)| (l.as_str(), r.as_str()))
        .collect();
    MonoidPresentation::new("LR", &refs)
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // The smaller index wins, so the root is the minimal word of the
        // class and representatives are canonical.
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        true
    }
}

// One level of the table: words of a fixed length, their class ids, and the
// minimal (canonical) word of each class.
#[derive(Debug)]
struct Level {
    class_of: Vec<u32>,
    reps: Vec<usize>,
}

/// Per-length congruence classes of a presentation, for word lengths 0..=N.
#[derive(Debug)]
pub struct CongruenceTable {
    alphabet: Vec<char>,
    levels: Vec<Level>,
}

impl CongruenceTable {
    pub fn max_len(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn class_count(&self, len: usize) -> usize {
        self.levels[len].reps.len()
    }

    /// Class counts for lengths 0..=max_len; the rank sizes of the
    /// associated poset.
    pub fn class_counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.reps.len()).collect()
    }

    /// The canonical (minimal) representative word of a class.
    pub fn rep(&self, len: usize, class: usize) -> String {
        self.decode(len, self.levels[len].reps[class])
    }

    pub fn class_of_word(&self, word: &str) -> Result<usize, MonoidError> {
        let len = word.chars().count();
        if len >= self.levels.len() {
            return Err(MonoidError::WordTooLong {
                len,
                max: self.max_len(),
            });
        }
        let mut idx = 0usize;
        for c in word.chars() {
            let d = self
                .alphabet
                .iter()
                .position(|&s| s == c)
                .ok_or(MonoidError::UnknownSymbol(c))?;
            idx = idx * self.alphabet.len() + d;
        }
        Ok(self.levels[len].class_of[idx] as usize)
    }

    /// All classes of a given length as sorted member lists; intended for
    /// small lengths.
    pub fn classes_at(&self, len: usize) -> Vec<Vec<String>> {
        let level = &self.levels[len];
        let mut classes = vec![Vec::new(); level.reps.len()];
        for (idx, &c) in level.class_of.iter().enumerate() {
            classes[c as usize].push(self.decode(len, idx));
        }
        classes
    }

    fn decode(&self, len: usize, mut idx: usize) -> String {
        let k = self.alphabet.len();
        let mut out = vec![' '; len];
        for slot in out.iter_mut().rev() {
            *slot = self.alphabet[idx % k];
            idx /= k;
        }
        out.into_iter().collect()
    }
}

fn words_required(k: usize, max_len: usize) -> Option<usize> {
    let mut total = 0usize;
    let mut level = 1usize;
    for _ in 0..=max_len {
        total = total.checked_add(level)?;
        level = level.checked_mul(k)?;
    }
    Some(total)
}

// Runs the single-substitution union pass over one level. Returns the
// number of successful unions so a fixed-point check can re-run it.
fn close_level(
    pres: &MonoidPresentation,
    len: usize,
    uf: &mut UnionFind,
) -> usize {
    let k = pres.alphabet.len();
    let nwords = k.pow(len as u32);
    let mut pow = vec![1usize; len + 1];
    for i in 1..=len {
        pow[i] = pow[i - 1] * k;
    }
    let mut digits = vec![0u8; len];
    let mut merges = 0;
    for idx in 0..nwords {
        let mut rest = idx;
        for slot in digits.iter_mut().rev() {
            *slot = (rest % k) as u8;
            rest /= k;
        }
        for (lhs, rhs) in &pres.relations {
            if lhs.len() > len {
                continue;
            }
            for pos in 0..=len - lhs.len() {
                for (from, to) in [(lhs, rhs), (rhs, lhs)] {
                    if digits[pos..pos + from.len()] == from[..] {
                        let mut other = idx;
                        for (j, (&f, &t)) in from.iter().zip(to.iter()).enumerate() {
                            let weight = pow[len - 1 - pos - j];
                            other = other - (f as usize) * weight + (t as usize) * weight;
                        }
                        if uf.union(idx as u32, other as u32) {
                            merges += 1;
                        }
                    }
                }
            }
        }
    }
    merges
}

/// Computes the congruence classes of all words of length 0..=`max_len`
/// under the two-sided closure of the relations, with the default word
/// budget.
pub fn congruence_classes(
    pres: &MonoidPresentation,
    max_len: usize,
) -> Result<CongruenceTable, MonoidError> {
    congruence_classes_with_budget(pres, max_len, DEFAULT_BUDGET)
}

/// Same as [`congruence_classes`] with an explicit word budget.
///
/// Substitutions preserve length, so one union pass per length reaches the
/// fixed point: every single-substitution neighbor of every word is merged
/// directly.
pub fn congruence_classes_with_budget(
    pres: &MonoidPresentation,
    max_len: usize,
    budget: usize,
) -> Result<CongruenceTable, MonoidError> {
    let k = pres.alphabet.len();
    match words_required(k, max_len) {
        Some(required) if required <= budget => {}
        got => {
            return Err(MonoidError::BudgetExceeded {
                required: got.unwrap_or(usize::MAX),
                budget,
            })
        }
    }
    let mut levels = Vec::with_capacity(max_len + 1);
    for len in 0..=max_len {
        let nwords = k.pow(len as u32);
        let mut uf = UnionFind::new(nwords);
        close_level(pres, len, &mut uf);
        let mut class_ids: BTreeMap<u32, u32> = BTreeMap::new();
        let mut reps = Vec::new();
        let mut class_of = vec![0u32; nwords];
        for idx in 0..nwords {
            let root = uf.find(idx as u32);
            let next = class_ids.len() as u32;
            let id = *class_ids.entry(root).or_insert_with(|| {
                reps.push(root as usize);
                next
            });
            class_of[idx] = id;
        }
        levels.push(Level { class_of, reps });
    }
    Ok(CongruenceTable {
        alphabet: pres.alphabet.clone(),
        levels,
    })
}

/// The poset of congruence classes graded by word length: `class(w)` is
/// covered by `class(wa)` for every letter `a`. Vertex ids are rank-major
/// in class-id order.
pub fn monoid_poset(pres: &MonoidPresentation, max_len: usize) -> Result<RankedPoset, MonoidError> {
    monoid_poset_with_budget(pres, max_len, DEFAULT_BUDGET)
}

pub fn monoid_poset_with_budget(
    pres: &MonoidPresentation,
    max_len: usize,
    budget: usize,
) -> Result<RankedPoset, MonoidError> {
    let table = congruence_classes_with_budget(pres, max_len, budget)?;
    let k = pres.alphabet.len();
    let counts = table.class_counts();
    let mut rank_start = Vec::with_capacity(counts.len());
    let mut next = 0;
    for &c in &counts {
        rank_start.push(next);
        next += c;
    }
    let ranks: Vec<Vec<Vertex>> = counts
        .iter()
        .zip(&rank_start)
        .map(|(&c, &start)| (start..start + c).collect())
        .collect();

    // class(w) = class(w') implies class(wa) = class(w'a), so following one
    // representative per class produces every cover edge.
    let mut covers = BTreeSet::new();
    for len in 0..max_len {
        let level = &table.levels[len];
        let next_level = &table.levels[len + 1];
        for (class, &rep) in level.reps.iter().enumerate() {
            for letter in 0..k {
                let extended = rep * k + letter;
                let target = next_level.class_of[extended] as usize;
                covers.insert((rank_start[len] + class, rank_start[len + 1] + target));
            }
        }
    }
    Ok(RankedPoset::new(ranks, covers.into_iter().collect(), None)
        .expect("congruence posets are always valid"))
}

/// Result of the left-cancellation scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationReport {
    pub cancellative: bool,
    /// `(a, x, y)` with class(a x) = class(a y) but class(x) != class(y).
    pub counterexample: Option<(char, String, String)>,
}

/// Checks that prepending any single letter is injective on classes at
/// every length below `max_len`. Single-letter prefixes suffice: peeling
/// letters one at a time extends the property to arbitrary prefixes, which
/// is the sufficient condition for the class poset to be upho.
pub fn left_cancellation_check(
    pres: &MonoidPresentation,
    max_len: usize,
) -> Result<CancellationReport, MonoidError> {
    left_cancellation_check_with_budget(pres, max_len, DEFAULT_BUDGET)
}

pub fn left_cancellation_check_with_budget(
    pres: &MonoidPresentation,
    max_len: usize,
    budget: usize,
) -> Result<CancellationReport, MonoidError> {
    let table = congruence_classes_with_budget(pres, max_len, budget)?;
    let k = pres.alphabet.len();
    for len in 0..max_len {
        let level = &table.levels[len];
        let next_level = &table.levels[len + 1];
        for letter in 0..k {
            let weight = k.pow(len as u32);
            let mut seen: BTreeMap<u32, usize> = BTreeMap::new();
            for (class, &rep) in level.reps.iter().enumerate() {
                let prefixed = letter * weight + rep;
                let image = next_level.class_of[prefixed];
                if let Some(&earlier) = seen.get(&image) {
                    return Ok(CancellationReport {
                        cancellative: false,
                        counterexample: Some((
                            pres.alphabet[letter],
                            table.rep(len, earlier),
                            table.rep(len, class),
                        )),
                    });
                }
                seen.insert(image, class);
            }
        }
    }
    Ok(CancellationReport {
        cancellative: true,
        counterexample: None,
    })
}

/// Divergence data for one pair of relation subsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDivergence {
    pub pair: (usize, usize),
    /// First word length where the class counts differ.
    pub first_divergence: Option<usize>,
    /// 2n+2 for the smallest index n in the symmetric difference.
    pub expected_divergence: Option<usize>,
    /// Count difference (second minus first) at the expected length.
    pub delta_at_expected: Option<i64>,
}

/// Result of comparing the class-count vectors of several subsets of the
/// t_n family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub subsets: Vec<Vec<usize>>,
    pub class_counts: Vec<Vec<usize>>,
    pub all_distinct: bool,
    pub first_coincidence: Option<(usize, usize)>,
    pub pair_checks: Vec<PairDivergence>,
}

/// Verifies that distinct subsets of the t_n family produce distinct
/// class-count vectors through `max_len`, and that two subsets whose first
/// difference is t_n diverge at length 2n+2 (by exactly one when they agree
/// below).
pub fn distinct_rgf_check(
    subsets: &[BTreeSet<usize>],
    max_len: usize,
) -> Result<SeparationReport, MonoidError> {
    distinct_rgf_check_with_budget(subsets, max_len, DEFAULT_BUDGET)
}

pub fn distinct_rgf_check_with_budget(
    subsets: &[BTreeSet<usize>],
    max_len: usize,
    budget: usize,
) -> Result<SeparationReport, MonoidError> {
    for set in subsets {
        for &n in set {
            if n < 2 {
                return Err(MonoidError::IndexTooSmall(n));
            }
            if 2 * n + 2 > max_len {
                return Err(MonoidError::RelationTooLong {
                    index: n,
                    len: 2 * n + 2,
                    max: max_len,
                });
            }
        }
    }
    let mut class_counts = Vec::with_capacity(subsets.len());
    for set in subsets {
        let pres = s_family(set)?;
        let table = congruence_classes_with_budget(&pres, max_len, budget)?;
        class_counts.push(table.class_counts());
    }

    let mut all_distinct = true;
    let mut first_coincidence = None;
    let mut pair_checks = Vec::new();
    for i in 0..subsets.len() {
        for j in i + 1..subsets.len() {
            let first_divergence = (0..=max_len)
                .find(|&l| class_counts[i][l] != class_counts[j][l]);
            if first_divergence.is_none() && subsets[i] != subsets[j] {
                all_distinct = false;
                if first_coincidence.is_none() {
                    first_coincidence = Some((i, j));
                }
            }
            if subsets[i] == subsets[j] && first_coincidence.is_none() {
                all_distinct = false;
                first_coincidence = Some((i, j));
            }
            let expected_divergence = subsets[i]
                .symmetric_difference(&subsets[j])
                .min()
                .map(|&n| 2 * n + 2);
            let delta_at_expected = expected_divergence.map(|l| {
                class_counts[j][l] as i64 - class_counts[i][l] as i64
            });
            pair_checks.push(PairDivergence {
                pair: (i, j),
                first_divergence,
                expected_divergence,
                delta_at_expected,
            });
        }
    }
    Ok(SeparationReport {
        subsets: subsets.iter().map(|s| s.iter().copied().collect()).collect(),
        class_counts,
        all_distinct,
        first_coincidence,
        pair_checks,
    })
}
