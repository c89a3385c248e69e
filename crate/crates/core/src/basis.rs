//! Basis permutations: the minimal permutations that cannot be reached from
//! the identity with `p` right-jumps.
//!
//! [`check_basis`] tests the structural characterization directly in `O(n)`.
//! [`check_basis_oracle`] goes back to the definition and inspects every
//! one-point deletion; the two must agree on every permutation.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::perm::{for_each_with_first, ltr_mask, shortlex, Permutation};

/// Largest length accepted by [`enumerate_basis`].
pub const MAX_ENUMERATION_LEN: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("basis permutations have length at least 2, got {0}")]
    TooShort(usize),
    #[error("exhaustive enumeration is limited to n <= {cap}, got {n}")]
    TooLarge { n: usize, cap: usize },
}

/// The structural conditions; `I` is the count condition and never fails
/// recognition because `p` is read off as `t_σ - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    I,
    Ii,
    Iii,
    Iv,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::I => "i",
            Condition::Ii => "ii",
            Condition::Iii => "iii",
            Condition::Iv => "iv",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BasisMembership {
    pub is_member: bool,
    pub p: Option<usize>,
    pub failed_condition: Option<Condition>,
}

impl BasisMembership {
    fn member(p: usize) -> Self {
        BasisMembership {
            is_member: true,
            p: Some(p),
            failed_condition: None,
        }
    }

    fn rejected(cond: Condition) -> Self {
        BasisMembership {
            is_member: false,
            p: None,
            failed_condition: Some(cond),
        }
    }
}

/// Recognizes `σ ∈ B_p` from the left-to-right-maxima structure.
///
/// Conditions are checked in the order (ii), (iii), (iv) and the first
/// failure is reported:
///
/// * (ii) the value `n-1` is not a left-to-right maximum;
/// * (iii) `σ_2` is not a left-to-right maximum;
/// * (iv) for every three consecutive left-to-right maxima at positions
///   `i < j < k`, some `σ_t` with `j < t < k` exceeds `σ_i`. Entries strictly
///   between two consecutive maxima are non-maxima by definition.
pub fn check_basis(sigma: &Permutation) -> Result<BasisMembership, BasisError> {
    let n = sigma.len();
    if n < 2 {
        return Err(BasisError::TooShort(n));
    }
    Ok(check_values(sigma.values()))
}

fn check_values(values: &[u32]) -> BasisMembership {
    let n = values.len();
    let mask = ltr_mask(values);
    let pos_of_second = values
        .iter()
        .position(|&v| v as usize == n - 1)
        .expect("bijection");
    if mask[pos_of_second] {
        return BasisMembership::rejected(Condition::Ii);
    }
    if mask[1] {
        return BasisMembership::rejected(Condition::Iii);
    }
    let maxima: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
    for w in maxima.windows(3) {
        let (i, j, k) = (w[0], w[1], w[2]);
        if !values[j + 1..k].iter().any(|&v| v > values[i]) {
            return BasisMembership::rejected(Condition::Iv);
        }
    }
    let t = n - maxima.len();
    // (ii) forces at least one non-maximum.
    BasisMembership::member(t - 1)
}

/// Recognizes `σ ∈ B_p` from the definition: `σ` needs `t_σ = p + 1` jumps,
/// and every proper pattern needs at most `p`. Every proper pattern is a
/// pattern of some one-point deletion and the reachable sets are closed under
/// patterns, so only the `n` deletions are inspected.
///
/// A failing deletion is tagged with the condition it witnesses: deleting the
/// value `n` (ii), deleting `σ_1` (iii), deleting any other left-to-right
/// maximum (iv). Deleting a non-maximum always lowers `t` by one.
pub fn check_basis_oracle(sigma: &Permutation) -> Result<BasisMembership, BasisError> {
    let n = sigma.len();
    if n < 2 {
        return Err(BasisError::TooShort(n));
    }
    let t = sigma.non_ltr_count();
    let keeps_count = |pos: usize| sigma.delete_position(pos).non_ltr_count() >= t;

    let pos_n = sigma.position_of(n as u32).expect("bijection");
    if keeps_count(pos_n) {
        return Ok(BasisMembership::rejected(Condition::Ii));
    }
    if keeps_count(1) {
        return Ok(BasisMembership::rejected(Condition::Iii));
    }
    if (2..=n).any(keeps_count) {
        return Ok(BasisMembership::rejected(Condition::Iv));
    }
    Ok(BasisMembership::member(t - 1))
}

/// Every basis permutation of length `n`, grouped by `p`, each group in
/// lexicographic order.
pub fn enumerate_basis(n: usize) -> Result<BTreeMap<usize, Vec<Permutation>>, BasisError> {
    if n > MAX_ENUMERATION_LEN {
        return Err(BasisError::TooLarge {
            n,
            cap: MAX_ENUMERATION_LEN,
        });
    }
    let mut groups: BTreeMap<usize, Vec<Permutation>> = BTreeMap::new();
    if n < 2 {
        return Ok(groups);
    }
    // One shard per leading value; shards are concatenated in order, which
    // keeps the overall lexicographic order.
    let shards: Vec<Vec<(usize, Permutation)>> = (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut found = Vec::new();
            for_each_with_first(n, first, |values| {
                let m = check_values(values);
                if let Some(p) = m.p {
                    found.push((p, Permutation::from_vec_unchecked(values.to_vec())));
                }
            });
            found
        })
        .collect();
    for (p, sigma) in shards.into_iter().flatten() {
        groups.entry(p).or_default().push(sigma);
    }
    Ok(groups)
}

/// The whole of `B_p`, gathered over lengths `p+2 ..= 2p+2`, in shortlex
/// order.
pub fn enumerate_basis_for_p(p: usize) -> Result<Vec<Permutation>, BasisError> {
    let max_len = 2 * p + 2;
    if max_len > MAX_ENUMERATION_LEN {
        return Err(BasisError::TooLarge {
            n: max_len,
            cap: MAX_ENUMERATION_LEN,
        });
    }
    let mut out = Vec::new();
    for n in p + 2..=max_len {
        if let Some(group) = enumerate_basis(n)?.remove(&p) {
            out.extend(group);
        }
    }
    out.sort_by(shortlex);
    Ok(out)
}

/// `σ = α n β` split at the position of its largest value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Pattern of `α`.
    pub prefix: Permutation,
    /// Pattern of `β`.
    pub suffix: Permutation,
    /// `|β| - 1`, or `None` when `n` is the last entry.
    pub ell: Option<usize>,
    /// The values of `β` as they appear in `σ`.
    pub suffix_values: Vec<u32>,
}

pub fn decompose(sigma: &Permutation) -> Decomposition {
    let values = sigma.values();
    let n = values.len();
    let split = values.iter().position(|&v| v as usize == n).unwrap_or(0);
    let (alpha, rest) = values.split_at(split);
    let beta = if rest.is_empty() { rest } else { &rest[1..] };
    Decomposition {
        prefix: Permutation::standardize(alpha),
        suffix: Permutation::standardize(beta),
        ell: beta.len().checked_sub(1),
        suffix_values: beta.to_vec(),
    }
}
