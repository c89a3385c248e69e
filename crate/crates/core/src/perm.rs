//! Permutations in one-line notation, left-to-right maxima, pattern
//! containment and the right-jump move.
//!
//! Values and positions are one-based throughout: position `i` holds `σ_i`,
//! a value in `1..=n`.
//!
//! # Composition convention
//!
//! `σ.compose(&τ)` is the permutation whose value at position `i` is
//! `σ(τ_i)`, i.e. `τ` is applied first and `σ` relabels its values. Under
//! this convention a right-jump commutes with relabelling: if `β` is one
//! right-jump away from `α`, then `γ·β` is one right-jump away from `γ·α`,
//! which is what makes [`jump_distance`] a function of `σ⁻¹·π` alone.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest `n` for which [`reachable_set`] runs its breadth-first search
/// unless a different cap is passed explicitly.
pub const DEFAULT_BFS_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("empty input")]
    Empty,
    #[error("malformed token {0:?}")]
    Malformed(String),
    #[error("value {0} appears more than once")]
    DuplicateValue(u32),
    #[error("value {0} is missing")]
    MissingValue(u32),
    #[error("value {value} is outside 1..={len}")]
    ValueOutOfRange { value: u32, len: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid jump {from}->{to} for length {len}")]
    InvalidJump { from: usize, to: usize, len: usize },
    #[error("n={n} exceeds the exhaustive-search cap {cap}")]
    TooLarge { n: usize, cap: usize },
}

/// A permutation of `1..=n` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    values: Vec<u32>,
}

/// A right-jump: the element at `from` is removed and reinserted so that it
/// ends up at position `to` (`from < to`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Jump {
    from: usize,
    to: usize,
}

impl Jump {
    pub fn new(from: usize, to: usize) -> Result<Self, PermError> {
        if from == 0 || from >= to {
            return Err(PermError::InvalidJump { from, to, len: to });
        }
        Ok(Jump { from, to })
    }

    pub fn from_pos(&self) -> usize {
        self.from
    }

    pub fn to_pos(&self) -> usize {
        self.to
    }
}

impl fmt::Display for Jump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

impl Permutation {
    /// Validates that `values` is a bijection of `1..=n`.
    pub fn new(values: Vec<u32>) -> Result<Self, PermError> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v as usize > n {
                return Err(PermError::ValueOutOfRange { value: v, len: n });
            }
            if std::mem::replace(&mut seen[v as usize - 1], true) {
                return Err(PermError::DuplicateValue(v));
            }
        }
        // With n values in range and no duplicates nothing can be missing,
        // but keep the check in case the loop above changes.
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(PermError::MissingValue(missing as u32 + 1));
        }
        Ok(Permutation { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation { values }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (1..=n as u32).collect(),
        }
    }

    /// The permutation order-isomorphic to `seq` (the "pattern" of a sequence
    /// of distinct integers).
    pub fn standardize(seq: &[u32]) -> Self {
        let mut order: Vec<usize> = (0..seq.len()).collect();
        order.sort_by_key(|&i| seq[i]);
        let mut values = vec![0u32; seq.len()];
        for (rank, &i) in order.iter().enumerate() {
            values[i] = rank as u32 + 1;
        }
        Permutation { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    /// `σ_pos`, one-based.
    pub fn at(&self, pos: usize) -> u32 {
        self.values[pos - 1]
    }

    /// One-based position of value `v`.
    pub fn position_of(&self, v: u32) -> Option<usize> {
        self.values.iter().position(|&x| x == v).map(|i| i + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i + 1)
    }

    /// `mask[i]` is true when `σ_{i+1}` is a left-to-right maximum.
    pub fn ltr_max_mask(&self) -> Vec<bool> {
        ltr_mask(&self.values)
    }

    /// Positions (one-based) of the left-to-right maxima, increasing.
    pub fn left_to_right_maxima(&self) -> Vec<usize> {
        self.ltr_max_mask()
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Number of non-left-to-right-maxima; also the right-jump distance from
    /// the identity.
    pub fn non_ltr_count(&self) -> usize {
        non_ltr_count(&self.values)
    }

    /// Exhaustive search for an index subsequence order-isomorphic to
    /// `pattern`.
    pub fn contains_pattern(&self, pattern: &Permutation) -> bool {
        let k = pattern.len();
        if k > self.len() {
            return false;
        }
        let mut chosen = Vec::with_capacity(k);
        extend_occurrence(&self.values, &pattern.values, 0, &mut chosen)
    }

    pub fn avoids_all(&self, patterns: &[Permutation]) -> bool {
        patterns.iter().all(|p| !self.contains_pattern(p))
    }

    pub fn right_jump(&self, jump: Jump) -> Result<Permutation, PermError> {
        let n = self.len();
        if jump.to > n {
            return Err(PermError::InvalidJump {
                from: jump.from,
                to: jump.to,
                len: n,
            });
        }
        let mut values = self.values.clone();
        let v = values.remove(jump.from - 1);
        values.insert(jump.to - 1, v);
        Ok(Permutation { values })
    }

    /// `(σ·τ)_i = σ(τ_i)`; see the module docs for why this convention.
    pub fn compose(&self, tau: &Permutation) -> Result<Permutation, PermError> {
        if self.len() != tau.len() {
            return Err(PermError::LengthMismatch {
                left: self.len(),
                right: tau.len(),
            });
        }
        Ok(Permutation {
            values: tau.values.iter().map(|&t| self.at(t as usize)).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut values = vec![0u32; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            values[v as usize - 1] = i as u32 + 1;
        }
        Permutation { values }
    }

    /// Deletes value `v` and renormalizes: values above `v` drop by one.
    pub fn delete_value(&self, v: u32) -> Permutation {
        Permutation {
            values: self
                .values
                .iter()
                .filter(|&&x| x != v)
                .map(|&x| if x > v { x - 1 } else { x })
                .collect(),
        }
    }

    /// Deletes the entry at one-based `pos` and renormalizes.
    pub fn delete_position(&self, pos: usize) -> Permutation {
        self.delete_value(self.at(pos))
    }

    /// Compact digit string, only meaningful for `n ≤ 9`.
    pub fn to_compact(&self) -> Option<String> {
        if self.len() > 9 {
            return None;
        }
        Some(self.values.iter().map(|v| v.to_string()).collect())
    }
}

pub(crate) fn ltr_mask(values: &[u32]) -> Vec<bool> {
    let mut best = 0;
    values
        .iter()
        .map(|&v| {
            if v > best {
                best = v;
                true
            } else {
                false
            }
        })
        .collect()
}

pub(crate) fn non_ltr_count(values: &[u32]) -> usize {
    let mut best = 0;
    let mut count = 0;
    for &v in values {
        if v > best {
            best = v;
        } else {
            count += 1;
        }
    }
    count
}

fn extend_occurrence(text: &[u32], pattern: &[u32], start: usize, chosen: &mut Vec<usize>) -> bool {
    let j = chosen.len();
    if j == pattern.len() {
        return true;
    }
    // Leave room for the remaining pattern letters.
    let last = text.len() - (pattern.len() - j);
    for idx in start..=last {
        let consistent = chosen
            .iter()
            .enumerate()
            .all(|(a, &ia)| text[ia].cmp(&text[idx]) == pattern[a].cmp(&pattern[j]));
        if consistent {
            chosen.push(idx);
            if extend_occurrence(text, pattern, idx + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts whitespace- or comma-separated values ("5 3 6 2 1 4 8 7",
    /// "5,3,6") or a single run of digits ("53621487") for `n ≤ 9`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.is_empty() {
            if text.trim().is_empty() {
                return Err(PermError::Empty);
            }
            return Err(PermError::Malformed(text.to_string()));
        }
        let values: Vec<u32> = if tokens.len() == 1 && tokens[0].len() > 1 {
            let tok = tokens[0];
            if !tok.bytes().all(|b| b.is_ascii_digit()) {
                return Err(PermError::Malformed(tok.to_string()));
            }
            tok.bytes().map(|b| (b - b'0') as u32).collect()
        } else {
            tokens
                .iter()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| PermError::Malformed(t.to_string()))
                })
                .collect::<Result<_, _>>()?
        };
        Permutation::new(values)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Parses a permutation; thin wrapper over [`FromStr`].
pub fn parse_permutation(text: &str) -> Result<Permutation, PermError> {
    text.parse()
}

/// Shortest number of right-jumps turning `sigma` into `pi`.
pub fn jump_distance(sigma: &Permutation, pi: &Permutation) -> Result<usize, PermError> {
    Ok(sigma.inverse().compose(pi)?.non_ltr_count())
}

/// Right-jumps needed to sort `sigma` into the identity (insertion sort).
pub fn sort_distance(sigma: &Permutation) -> usize {
    sigma.inverse().non_ltr_count()
}

/// A shortest sequence of right-jumps that turns the identity into `sigma`.
///
/// Built backwards: the leftmost non-maximum `σ_i` is moved back in front of
/// the smallest left-to-right maximum `σ_j > σ_i`, which makes it a maximum
/// and lowers the count by exactly one; the forward move is `j -> i`.
pub fn witness_jumps(sigma: &Permutation) -> Vec<Jump> {
    let mut cur = sigma.values.clone();
    let mut jumps = Vec::with_capacity(non_ltr_count(&cur));
    loop {
        let mask = ltr_mask(&cur);
        let Some(i) = mask.iter().position(|&m| !m) else {
            break;
        };
        // Everything left of i is a maximum, hence increasing.
        let j = cur[..i]
            .iter()
            .position(|&v| v > cur[i])
            .expect("a non-maximum has a larger value to its left");
        let v = cur.remove(i);
        cur.insert(j, v);
        jumps.push(Jump {
            from: j + 1,
            to: i + 1,
        });
    }
    jumps.reverse();
    jumps
}

/// Applies `jumps` in order, starting from `start`.
pub fn replay(start: &Permutation, jumps: &[Jump]) -> Result<Permutation, PermError> {
    jumps
        .iter()
        .try_fold(start.clone(), |acc, &j| acc.right_jump(j))
}

/// All permutations one right-jump away from `sigma`.
pub fn right_jump_neighbors(sigma: &Permutation) -> impl Iterator<Item = Permutation> + '_ {
    let n = sigma.len();
    (1..n).flat_map(move |from| {
        (from + 1..=n).map(move |to| {
            sigma
                .right_jump(Jump { from, to })
                .expect("positions are in range")
        })
    })
}

/// Breadth-first layers `D_0, D_1, …, D_p` of the right-jump graph rooted at
/// the identity of length `n`, each sorted lexicographically.
pub fn reachable_layers(
    n: usize,
    p: usize,
    cap: usize,
) -> Result<Vec<Vec<Permutation>>, PermError> {
    if n > cap {
        return Err(PermError::TooLarge { n, cap });
    }
    let start = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([start.clone()]);
    let mut layers = vec![vec![start]];
    for _ in 0..p {
        let mut next = BTreeSet::new();
        for sigma in layers.last().unwrap() {
            for tau in right_jump_neighbors(sigma) {
                if seen.insert(tau.clone()) {
                    next.insert(tau);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layers.push(next.into_iter().collect());
    }
    Ok(layers)
}

/// `C_p`: permutations of length `n` reachable from the identity with at
/// most `p` right-jumps, found by exhaustive search (`n ≤` [`DEFAULT_BFS_CAP`]).
pub fn reachable_set(n: usize, p: usize) -> Result<BTreeSet<Permutation>, PermError> {
    reachable_set_with_cap(n, p, DEFAULT_BFS_CAP)
}

pub fn reachable_set_with_cap(
    n: usize,
    p: usize,
    cap: usize,
) -> Result<BTreeSet<Permutation>, PermError> {
    Ok(reachable_layers(n, p, cap)?.into_iter().flatten().collect())
}

/// In-place lexicographic successor. Returns `false` (leaving the slice
/// sorted ascending) once the last permutation has been passed.
pub fn next_permutation(values: &mut [u32]) -> bool {
    let n = values.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && values[i - 1] >= values[i] {
        i -= 1;
    }
    if i == 0 {
        values.reverse();
        return false;
    }
    let mut j = n - 1;
    while values[j] <= values[i - 1] {
        j -= 1;
    }
    values.swap(i - 1, j);
    values[i..].reverse();
    true
}

/// Lexicographic iterator over `S_n`.
#[derive(Debug, Clone)]
pub struct Permutations {
    current: Option<Vec<u32>>,
}

impl Permutations {
    pub fn new(n: usize) -> Self {
        Permutations {
            current: Some((1..=n as u32).collect()),
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.current.as_mut()?;
        let out = Permutation {
            values: cur.clone(),
        };
        if !next_permutation(cur) {
            self.current = None;
        }
        Some(out)
    }
}

/// Calls `f` on every permutation of length `n` whose first value is
/// `first`, in lexicographic order, without allocating per permutation.
pub(crate) fn for_each_with_first(n: usize, first: u32, mut f: impl FnMut(&[u32])) {
    let mut values: Vec<u32> = std::iter::once(first)
        .chain((1..=n as u32).filter(|&v| v != first))
        .collect();
    loop {
        f(&values);
        if !next_permutation(&mut values[1..]) {
            break;
        }
    }
}

/// Shortlex order: by length, then lexicographically.
pub fn shortlex(a: &Permutation, b: &Permutation) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}
