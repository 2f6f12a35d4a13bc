//! Finite permutations in one-line notation and their primitive operations.
//!
//! Values are stored zero-based internally; every public accessor, the text
//! notation and the serde representation are one-based.

use std::borrow::Borrow;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest order a [`Perm`] can have.
pub const MAX_ORDER: usize = u8::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("incompatible orders {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("not a permutation of 1..={len}: {values:?}")]
    NotAPermutation { len: usize, values: Vec<usize> },
    #[error("order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLong(usize),
    #[error("bad permutation literal {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// A permutation of `{1, …, n}`; `n = 0` is the empty permutation.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

/// Positions (one-based, strictly increasing) of a pattern occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub positions: Vec<usize>,
}

impl Perm {
    pub fn empty() -> Self {
        Perm(Vec::new())
    }

    /// The increasing permutation `12…n`.
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_ORDER, "order {n} too large");
        Perm((0..n as u8).collect())
    }

    /// The decreasing permutation `n…21`.
    pub fn decreasing(n: usize) -> Self {
        assert!(n <= MAX_ORDER, "order {n} too large");
        Perm((0..n as u8).rev().collect())
    }

    /// Builds a permutation from one-based values.
    pub fn from_one_based(values: &[usize]) -> Result<Self, PermError> {
        let n = values.len();
        if n > MAX_ORDER {
            return Err(PermError::TooLong(n));
        }
        let mut seen = vec![false; n];
        for &v in values {
            if v == 0 || v > n || seen[v - 1] {
                return Err(PermError::NotAPermutation { len: n, values: values.to_vec() });
            }
            seen[v - 1] = true;
        }
        Ok(Perm(values.iter().map(|&v| (v - 1) as u8).collect()))
    }

    /// Wraps zero-based images that are known to form a permutation.
    pub(crate) fn from_zero_based(values: Vec<u8>) -> Self {
        debug_assert!(is_zero_based_perm(&values), "{values:?}");
        Perm(values)
    }

    /// The permutation order-isomorphic to a sequence of distinct values.
    pub fn standardize<T: Ord + Copy>(seq: &[T]) -> Self {
        let mut idx: Vec<usize> = (0..seq.len()).collect();
        idx.sort_by_key(|&i| seq[i]);
        let mut out = vec![0u8; seq.len()];
        for (rank, &i) in idx.iter().enumerate() {
            out[i] = rank as u8;
        }
        Perm(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `π(i)` for one-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1] as usize + 1
    }

    /// One-based values, left to right.
    pub fn values(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.0.iter().map(|&v| v as usize + 1)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.values().collect()
    }

    /// Zero-based images, for tight loops inside the crate and its tests.
    pub fn as_zero_based(&self) -> &[u8] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn is_decreasing(&self) -> bool {
        let n = self.0.len();
        self.0.iter().enumerate().all(|(i, &v)| v as usize == n - 1 - i)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.len() != other.len() {
            return Err(PermError::LengthMismatch { left: self.len(), right: other.len() });
        }
        Ok(Perm(other.0.iter().map(|&j| self.0[j as usize]).collect()))
    }

    /// Writes `self ∘ other` into `buf`; lengths must agree.
    pub(crate) fn compose_into(&self, other: &Perm, buf: &mut Vec<u8>) {
        debug_assert_eq!(self.len(), other.len());
        buf.clear();
        buf.extend(other.0.iter().map(|&j| self.0[j as usize]));
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u8; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            out[v as usize] = i as u8;
        }
        Perm(out)
    }

    pub fn reverse(&self) -> Perm {
        Perm(self.0.iter().rev().copied().collect())
    }

    pub fn complement(&self) -> Perm {
        let top = self.len() as u8;
        Perm(self.0.iter().map(|&v| top - 1 - v).collect())
    }

    /// `self ⊕ other`: `other` shifted above and to the right.
    pub fn direct_sum(&self, other: &Perm) -> Perm {
        let k = self.len() as u8;
        let mut out = self.0.clone();
        out.extend(other.0.iter().map(|&v| v + k));
        Perm::checked(out)
    }

    /// `self ⊖ other`: `self` shifted above and to the left.
    pub fn skew_sum(&self, other: &Perm) -> Perm {
        let l = other.len() as u8;
        let mut out: Vec<u8> = self.0.iter().map(|&v| v + l).collect();
        out.extend_from_slice(&other.0);
        Perm::checked(out)
    }

    fn checked(values: Vec<u8>) -> Perm {
        assert!(values.len() <= MAX_ORDER, "order {} too large", values.len());
        Perm(values)
    }

    /// Pattern formed by the entries at the given zero-based positions.
    pub(crate) fn pattern_at(&self, positions: &[usize]) -> Perm {
        let seq: Vec<u8> = positions.iter().map(|&i| self.0[i]).collect();
        Perm::standardize(&seq)
    }

    /// Pattern left after deleting the given zero-based positions.
    pub fn delete_positions(&self, positions: &[usize]) -> Perm {
        let seq: Vec<u8> = (0..self.len())
            .filter(|i| !positions.contains(i))
            .map(|i| self.0[i])
            .collect();
        Perm::standardize(&seq)
    }

    /// Inserts the new maximum `n + 1` before zero-based position `at`.
    pub(crate) fn insert_max(&self, at: usize) -> Perm {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.extend_from_slice(&self.0[..at]);
        out.push(self.len() as u8);
        out.extend_from_slice(&self.0[at..]);
        Perm::checked(out)
    }

    /// Lexicographically smallest occurrence of `pattern`, if any.
    pub fn contains(&self, pattern: &Perm) -> Option<Occurrence> {
        find_occurrence(&self.0, &pattern.0)
            .map(|pos| Occurrence { positions: pos.into_iter().map(|i| i + 1).collect() })
    }

    pub fn avoids(&self, pattern: &Perm) -> bool {
        find_occurrence(&self.0, &pattern.0).is_none()
    }

    /// Length of a longest increasing subsequence.
    pub fn lis(&self) -> usize {
        longest_chain(self.0.iter().copied())
    }

    /// Length of a longest decreasing subsequence.
    pub fn lds(&self) -> usize {
        longest_chain(self.0.iter().map(|&v| u8::MAX - v))
    }

    /// Greedy cover by increasing chains, as zero-based position lists.
    ///
    /// Each entry joins the leftmost chain whose last value is smaller,
    /// otherwise opens a new chain. The number of chains equals `lds`.
    pub(crate) fn chain_positions(&self) -> Vec<Vec<usize>> {
        let mut chains: Vec<Vec<usize>> = Vec::new();
        for (i, &v) in self.0.iter().enumerate() {
            match chains.iter_mut().find(|c| self.0[*c.last().unwrap()] < v) {
                Some(chain) => chain.push(i),
                None => chains.push(vec![i]),
            }
        }
        chains
    }

    /// The canonical increasing cover, as one-based positions.
    pub fn increasing_chains(&self) -> Vec<Vec<usize>> {
        self.chain_positions()
            .into_iter()
            .map(|c| c.into_iter().map(|i| i + 1).collect())
            .collect()
    }

    /// Number of maximal ascending runs (`0` for the empty permutation).
    pub fn ascending_runs(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        1 + self.0.windows(2).filter(|w| w[0] > w[1]).count()
    }

    /// All permutations of order `n` in lexicographic order.
    pub fn all(n: usize) -> AllPerms {
        AllPerms { next: Some(Perm::identity(n)) }
    }

    /// Compact digits for `1 ≤ n ≤ 9`, otherwise space-separated; `e` if empty.
    pub fn to_compact(&self) -> String {
        self.to_string()
    }

    /// Space-separated one-based values; `e` if empty.
    pub fn to_spaced(&self) -> String {
        if self.is_empty() {
            return "e".to_string();
        }
        self.values().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn is_zero_based_perm(values: &[u8]) -> bool {
    let mut seen = vec![false; values.len()];
    values.iter().all(|&v| {
        let v = v as usize;
        v < seen.len() && !std::mem::replace(&mut seen[v], true)
    })
}

fn longest_chain(seq: impl Iterator<Item = u8>) -> usize {
    let mut tails: Vec<u8> = Vec::new();
    for v in seq {
        match tails.binary_search(&v) {
            Ok(_) => {}
            Err(i) if i == tails.len() => tails.push(v),
            Err(i) => tails[i] = v,
        }
    }
    tails.len()
}

/// Backtracking search over host positions. For each pattern index the host
/// value must fall strictly between the hosts of its nearest already-matched
/// pattern neighbours by value.
fn find_occurrence(host: &[u8], pattern: &[u8]) -> Option<Vec<usize>> {
    let k = pattern.len();
    if k > host.len() {
        return None;
    }
    if k == 0 {
        return Some(Vec::new());
    }
    // For pattern index j: the earlier index with the largest smaller value
    // and the earlier index with the smallest larger value.
    let mut below = vec![None; k];
    let mut above = vec![None; k];
    for j in 0..k {
        for i in 0..j {
            if pattern[i] < pattern[j] && below[j].is_none_or(|b: usize| pattern[b] < pattern[i]) {
                below[j] = Some(i);
            }
            if pattern[i] > pattern[j] && above[j].is_none_or(|a: usize| pattern[a] > pattern[i]) {
                above[j] = Some(i);
            }
        }
    }
    let mut chosen = Vec::with_capacity(k);
    if extend_occurrence(host, pattern, &below, &above, 0, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn extend_occurrence(
    host: &[u8],
    pattern: &[u8],
    below: &[Option<usize>],
    above: &[Option<usize>],
    start: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    let j = chosen.len();
    if j == pattern.len() {
        return true;
    }
    let lo = below[j].map(|b| host[chosen[b]]);
    let hi = above[j].map(|a| host[chosen[a]]);
    let last_start = host.len() - (pattern.len() - j);
    for pos in start..=last_start {
        let v = host[pos];
        if lo.is_some_and(|lo| v <= lo) || hi.is_some_and(|hi| v >= hi) {
            continue;
        }
        chosen.push(pos);
        if extend_occurrence(host, pattern, below, above, pos + 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Lexicographic iterator over `S_n`.
pub struct AllPerms {
    next: Option<Perm>,
}

impl Iterator for AllPerms {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        let current = self.next.take()?;
        let mut succ = current.0.clone();
        if next_permutation(&mut succ) {
            self.next = Some(Perm(succ));
        }
        Some(current)
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl Borrow<[u8]> for Perm {
    fn borrow(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.len() {
            0 => f.write_str("e"),
            1..=9 => {
                for v in self.values() {
                    write!(f, "{v}")?;
                }
                Ok(())
            }
            _ => f.write_str(&self.to_spaced()),
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

impl FromStr for Perm {
    type Err = PermError;

    /// Accepts `e`, compact digits (`3127645`), and space- or
    /// comma-separated integers, optionally in brackets (`[10 2 1 …]`).
    fn from_str(text: &str) -> Result<Self, PermError> {
        let err = |reason: &str| PermError::Parse { text: text.to_string(), reason: reason.to_string() };
        let mut body = text.trim();
        if let Some(inner) = body.strip_prefix('[') {
            body = inner.strip_suffix(']').ok_or_else(|| err("unclosed bracket"))?.trim();
        }
        if body == "e" || (body.is_empty() && text.trim().starts_with('[')) {
            return Ok(Perm::empty());
        }
        if body.is_empty() {
            return Err(err("empty literal"));
        }
        let values: Vec<usize> = if body.contains(|c: char| c.is_whitespace() || c == ',') {
            body.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| err("expected integers")))
                .collect::<Result<_, _>>()?
        } else {
            body.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| err("expected digits")))
                .collect::<Result<_, _>>()?
        };
        Perm::from_one_based(&values).map_err(|e| match e {
            PermError::TooLong(_) => e,
            _ => err("values are not a permutation of 1..n"),
        })
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for v in self.values() {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PermVisitor;

        impl<'de> Visitor<'de> for PermVisitor {
            type Value = Perm;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of one-based permutation values")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Perm, A::Error> {
                let mut values = Vec::new();
                while let Some(v) = seq.next_element::<usize>()? {
                    values.push(v);
                }
                Perm::from_one_based(&values).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_seq(PermVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    /// Definition-level oracle: evaluate `p(q(i))` on one-based values.
    fn compose_oracle(a: &[usize], b: &[usize]) -> Vec<usize> {
        b.iter().map(|&j| a[j - 1]).collect()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(p("312").compose(&p("231")).unwrap(), p("123"));
        assert_eq!(p("21").compose(&p("21")).unwrap(), p("12"));
        assert_eq!(compose_oracle(&[3, 2, 1], &[2, 1, 3]), vec![2, 3, 1]);
        assert_eq!(p("321").compose(&p("213")).unwrap(), p("231"));
    }

    #[test]
    fn compose_length_mismatch() {
        assert_eq!(
            p("12").compose(&p("123")),
            Err(PermError::LengthMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn symmetries_of_14352() {
        let x = p("14352");
        assert_eq!(x.inverse(), p("15324"));
        assert_eq!(x.reverse(), p("25341"));
        assert_eq!(x.complement(), p("52314"));
        assert_eq!(p("231").inverse(), p("312"));
        assert_eq!(Perm::identity(5).inverse(), Perm::identity(5));
        assert_eq!(Perm::identity(4).reverse(), Perm::decreasing(4));
    }

    #[test]
    fn sums() {
        assert_eq!(p("312").direct_sum(&p("4312")), p("3127645"));
        assert_eq!(p("3214").skew_sum(&p("123")), p("6547123"));
        assert_eq!(p("1").direct_sum(&p("1")), p("12"));
        assert_eq!(Perm::empty().direct_sum(&p("21")), p("21"));
        assert_eq!(p("21").skew_sum(&Perm::empty()), p("21"));
    }

    #[test]
    fn containment_examples() {
        let host = p("143625");
        assert_eq!(host.contains(&p("213")).unwrap().positions, vec![2, 3, 4]);
        assert_eq!(host.pattern_at(&[1, 2, 5]), p("213"));
        assert!(p("123").contains(&p("321")).is_none());
        assert_eq!(p("2143").contains(&p("21")).unwrap().positions, vec![1, 2]);
        assert_eq!(p("21").contains(&Perm::empty()).unwrap().positions, Vec::<usize>::new());
    }

    #[test]
    fn chain_statistics() {
        assert_eq!(p("3127645").lds(), 3);
        assert_eq!(Perm::decreasing(6).lds(), 6);
        assert_eq!(p("14352").lis(), 3);
        assert_eq!(Perm::empty().lis(), 0);
        assert_eq!(p("2143").increasing_chains(), vec![vec![1, 3], vec![2, 4]]);
    }

    #[test]
    fn text_notation() {
        assert_eq!(p("e"), Perm::empty());
        assert_eq!(p("[]"), Perm::empty());
        assert_eq!(p("3 1 2"), p("312"));
        assert_eq!(p("[10 9 8 7 6 5 4 3 2 1]"), Perm::decreasing(10));
        assert_eq!(Perm::decreasing(10).to_string(), "10 9 8 7 6 5 4 3 2 1");
        assert_eq!(p("312").to_spaced(), "3 1 2");
        assert_eq!(Perm::empty().to_string(), "e");
        assert!("112".parse::<Perm>().is_err());
        assert!("10".parse::<Perm>().is_err());
        assert!("".parse::<Perm>().is_err());
        assert!("1 x".parse::<Perm>().is_err());
    }

    #[test]
    fn serde_uses_one_based_arrays() {
        let json = serde_json::to_string(&p("312")).unwrap();
        assert_eq!(json, "[3,1,2]");
        assert_eq!(serde_json::from_str::<Perm>(&json).unwrap(), p("312"));
        assert!(serde_json::from_str::<Perm>("[1,1]").is_err());
    }

    #[test]
    fn all_is_lexicographic() {
        let s3: Vec<String> = Perm::all(3).map(|q| q.to_string()).collect();
        assert_eq!(s3, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(Perm::all(0).count(), 1);
        assert_eq!(Perm::all(6).count(), 720);
    }

    #[test]
    fn standardize_and_delete() {
        assert_eq!(Perm::standardize(&[40, 10, 30]), p("312"));
        assert_eq!(p("35142").delete_positions(&[0, 3]), p("312"));
        assert_eq!(p("21").insert_max(1), p("231"));
    }
}
