//! Structural decompositions and the exhaustive split searches.

use serde::{Deserialize, Serialize};

use crate::class::Engine;
use crate::error::{Error, Result};
use crate::expr::ClassExpr;
use crate::perm::Perm;

/// Layer lengths, left to right, of a layered (or co-layered) permutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LayerShape(pub Vec<usize>);

impl LayerShape {
    /// `δ_{l_1} ⊕ δ_{l_2} ⊕ …`
    pub fn realize(&self) -> Perm {
        self.0.iter().fold(Perm::empty(), |acc, &l| acc.direct_sum(&Perm::decreasing(l)))
    }

    /// `ι_{l_1} ⊖ ι_{l_2} ⊖ …`
    pub fn realize_colayered(&self) -> Perm {
        self.0.iter().fold(Perm::empty(), |acc, &l| acc.skew_sum(&Perm::identity(l)))
    }

    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Inc,
    Dec,
}

/// A run of consecutive positions holding consecutive values, monotone in
/// `dir`. `start` is one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub start: usize,
    pub len: usize,
    pub dir: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockDecomposition(pub Vec<Block>);

/// Part index (one-based) of every position of a permutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub assignment: Vec<usize>,
}

impl Coloring {
    /// One-based positions carrying part `part` (one-based).
    pub fn part(&self, part: usize) -> Vec<usize> {
        (1..=self.assignment.len()).filter(|&i| self.assignment[i - 1] == part).collect()
    }
}

/// The unique layer shape of `p`, if `p` is layered.
pub fn layers(p: &Perm) -> Option<LayerShape> {
    let v = p.as_zero_based();
    let mut shape = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let top = v[i] as usize;
        if top < i {
            return None;
        }
        let len = top - i + 1;
        if i + len > v.len() || (0..len).any(|j| v[i + j] as usize != top - j) {
            return None;
        }
        shape.push(len);
        i += len;
    }
    Some(LayerShape(shape))
}

/// The shape of `p` as a skew sum of increasing runs, if co-layered.
pub fn colayers(p: &Perm) -> Option<LayerShape> {
    layers(&p.complement())
}

/// Minimum number of blocks; greedily takes the longest block starting at
/// the leftmost uncovered position (single entries count as increasing).
pub fn min_blocks(p: &Perm) -> (usize, BlockDecomposition) {
    let v = p.as_zero_based();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let run = |step: i16| {
            let mut j = i;
            while j + 1 < v.len() && v[j + 1] as i16 == v[j] as i16 + step {
                j += 1;
            }
            j - i + 1
        };
        let (inc, dec) = (run(1), run(-1));
        let (len, dir) = if dec > inc { (dec, Direction::Dec) } else { (inc, Direction::Inc) };
        blocks.push(Block { start: i + 1, len, dir });
        i += len;
    }
    (blocks.len(), BlockDecomposition(blocks))
}

/// `2143…(2c+2)(2c+1)`, the sum of `c + 1` copies of `21`.
pub fn gamma_pattern(c: usize) -> Perm {
    LayerShape(vec![2; c + 1]).realize()
}

/// Replaces every layer of length at most `threshold` by the increasing run
/// on the same values.
pub fn normalize_short_layers(p: &Perm, threshold: usize) -> Result<Perm> {
    let shape = layers(p).ok_or_else(|| Error::Precondition(format!("{p} is not layered")))?;
    Ok(shape.0.iter().fold(Perm::empty(), |acc, &l| {
        let layer = if l <= threshold { Perm::identity(l) } else { Perm::decreasing(l) };
        acc.direct_sum(&layer)
    }))
}

/// `|a(i) − b(i)| ≤ c` at all but at most `l` positions.
pub fn is_close(a: &Perm, b: &Perm, c: usize, l: usize) -> Result<bool> {
    if a.len() != b.len() {
        return Err(crate::perm::PermError::LengthMismatch { left: a.len(), right: b.len() }.into());
    }
    let exceptions = a
        .as_zero_based()
        .iter()
        .zip(b.as_zero_based())
        .filter(|(&x, &y)| (x as usize).abs_diff(y as usize) > c)
        .count();
    Ok(exceptions <= l)
}

/// First (lexicographic) assignment of positions to `parts` parts such
/// that every part is accepted by `accepts(part_index, pattern)`.
///
/// Partial parts are tested as they grow, which is exact for classes
/// closed under taking patterns.
pub fn search_coloring(
    p: &Perm,
    parts: usize,
    mut accepts: impl FnMut(usize, &Perm) -> Result<bool>,
) -> Result<Option<Coloring>> {
    if parts == 0 {
        return Ok(p.is_empty().then(|| Coloring { assignment: vec![] }));
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); parts];
    let mut assignment = Vec::with_capacity(p.len());
    if color_rec(p, &mut members, &mut assignment, &mut accepts)? {
        Ok(Some(Coloring { assignment: assignment.into_iter().map(|c| c + 1).collect() }))
    } else {
        Ok(None)
    }
}

fn color_rec(
    p: &Perm,
    members: &mut [Vec<usize>],
    assignment: &mut Vec<usize>,
    accepts: &mut impl FnMut(usize, &Perm) -> Result<bool>,
) -> Result<bool> {
    let pos = assignment.len();
    if pos == p.len() {
        // Parts never touched must still admit the empty permutation.
        for (i, m) in members.iter().enumerate() {
            if m.is_empty() && !accepts(i, &Perm::empty())? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    for part in 0..members.len() {
        members[part].push(pos);
        if accepts(part, &p.pattern_at(&members[part]))? {
            assignment.push(part);
            if color_rec(p, members, assignment, accepts)? {
                return Ok(true);
            }
            assignment.pop();
        }
        members[part].pop();
    }
    Ok(false)
}

/// First (lexicographic) cut vector `c_1 ≤ … ≤ c_{k−1}` splitting `p` into
/// position segments `(c_{i−1}, c_i]` accepted part by part.
pub fn search_vertical(
    p: &Perm,
    parts: usize,
    mut accepts: impl FnMut(usize, &Perm) -> Result<bool>,
) -> Result<Option<Vec<usize>>> {
    let segment = |lo: usize, hi: usize| -> Perm { p.pattern_at(&(lo..hi).collect::<Vec<_>>()) };
    search_cuts(p.len(), parts, &mut |i, lo, hi| accepts(i, &segment(lo, hi)))
}

/// First (lexicographic) value-threshold vector splitting `p` into parts of
/// consecutive values, bottom part first, accepted part by part.
pub fn search_horizontal(
    p: &Perm,
    parts: usize,
    mut accepts: impl FnMut(usize, &Perm) -> Result<bool>,
) -> Result<Option<Vec<usize>>> {
    let v = p.as_zero_based();
    let band = |lo: usize, hi: usize| -> Perm {
        let positions: Vec<usize> = (0..v.len()).filter(|&i| (lo..hi).contains(&(v[i] as usize))).collect();
        p.pattern_at(&positions)
    };
    search_cuts(p.len(), parts, &mut |i, lo, hi| accepts(i, &band(lo, hi)))
}

fn search_cuts(
    n: usize,
    parts: usize,
    accepts: &mut impl FnMut(usize, usize, usize) -> Result<bool>,
) -> Result<Option<Vec<usize>>> {
    if parts == 0 {
        return Ok((n == 0).then(Vec::new));
    }
    let mut cuts = Vec::with_capacity(parts - 1);
    Ok(cuts_rec(n, parts, 0, &mut cuts, accepts)?.then_some(cuts))
}

fn cuts_rec(
    n: usize,
    parts: usize,
    start: usize,
    cuts: &mut Vec<usize>,
    accepts: &mut impl FnMut(usize, usize, usize) -> Result<bool>,
) -> Result<bool> {
    let part = cuts.len();
    if part == parts - 1 {
        return accepts(part, start, n);
    }
    for end in start..=n {
        if accepts(part, start, end)? {
            cuts.push(end);
            if cuts_rec(n, parts, end, cuts, accepts)? {
                return Ok(true);
            }
            cuts.pop();
        }
    }
    Ok(false)
}

/// A coloring witnessing `p ∈ C_1 ⊙ … ⊙ C_k`.
pub fn merge_split(engine: &Engine, p: &Perm, constraints: &[ClassExpr]) -> Result<Option<Coloring>> {
    if p.len() > engine.config().search_cap {
        return Err(Error::ResourceLimit(format!(
            "merge split at order {} exceeds cap {}",
            p.len(),
            engine.config().search_cap
        )));
    }
    search_coloring(p, constraints.len(), |i, part| engine.member(&constraints[i], part))
}

/// Cut positions (a part is the positions after the previous cut up to and
/// including this one) witnessing `p ∈ V(C_1, …, C_k)`.
pub fn vertical_split(engine: &Engine, p: &Perm, constraints: &[ClassExpr]) -> Result<Option<Vec<usize>>> {
    search_vertical(p, constraints.len(), |i, part| engine.member(&constraints[i], part))
}

/// Value thresholds (part `i` holds the values above the previous threshold
/// up to this one) witnessing `p ∈ H(C_1, …, C_k)`.
pub fn horizontal_split(engine: &Engine, p: &Perm, constraints: &[ClassExpr]) -> Result<Option<Vec<usize>>> {
    search_horizontal(p, constraints.len(), |i, part| engine.member(&constraints[i], part))
}

/// Values of the two subsequences found by [`jv_split`], in position order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JvSplit {
    pub a: Vec<usize>,
    pub c: Vec<usize>,
}

/// Splits `p ∈ Av(α ⊕ β ⊕ γ)` into `a` avoiding `α ⊕ β` and `c` avoiding
/// `β ⊕ γ` such that no entry of `a` lies both right of and above an entry
/// of `c`.
///
/// Exhaustive: entries are offered to `c` before `a`, so the first witness
/// found is the smallest in that order.
pub fn jv_split(p: &Perm, alpha: &Perm, beta: &Perm, gamma: &Perm) -> Result<JvSplit> {
    if alpha.is_empty() || beta.is_empty() || gamma.is_empty() {
        return Err(Error::Precondition("alpha, beta and gamma must be nonempty".into()));
    }
    let whole = alpha.direct_sum(beta).direct_sum(gamma);
    if let Some(occ) = p.contains(&whole) {
        return Err(Error::Precondition(format!("{p} contains {whole} at {:?}", occ.positions)));
    }
    let left = alpha.direct_sum(beta);
    let right = beta.direct_sum(gamma);
    let mut state = JvState { p: p.as_zero_based(), left, right, a: Vec::new(), c: Vec::new() };
    if state.search(0) {
        let values = |seq: &[u8]| seq.iter().map(|&v| v as usize + 1).collect();
        Ok(JvSplit { a: values(&state.a), c: values(&state.c) })
    } else {
        Err(Error::ContractViolation(format!("no split of {p} for ({alpha}, {beta}, {gamma})")))
    }
}

struct JvState<'a> {
    p: &'a [u8],
    left: Perm,
    right: Perm,
    a: Vec<u8>,
    c: Vec<u8>,
}

impl JvState<'_> {
    fn search(&mut self, pos: usize) -> bool {
        if pos == self.p.len() {
            return true;
        }
        let x = self.p[pos];
        self.c.push(x);
        if Perm::standardize(&self.c).avoids(&self.right) && self.search(pos + 1) {
            return true;
        }
        self.c.pop();
        // An `a` entry must lie below every earlier `c` entry.
        if self.c.iter().all(|&y| x < y) {
            self.a.push(x);
            if Perm::standardize(&self.a).avoids(&self.left) && self.search(pos + 1) {
                return true;
            }
            self.a.pop();
        }
        false
    }
}

/// `η(1) < η(2) > η(3) < η(4) > …`
pub fn is_alternating(p: &Perm) -> bool {
    p.as_zero_based()
        .windows(2)
        .enumerate()
        .all(|(i, w)| if i % 2 == 0 { w[0] < w[1] } else { w[0] > w[1] })
}

/// An alternating member of `H_2` containing `p ∈ H_2`, of length at most
/// `2|p| + 1`.
///
/// Labels each entry low or high by a value threshold, embeds the label word
/// into `low high low high …` and realises that template; the shortest
/// result over all valid thresholds wins. The result is checked for
/// containment and falls back to exhaustive search if the check fails.
pub fn alternating_superpattern(p: &Perm) -> Result<Perm> {
    if p.inverse().ascending_runs() > 2 {
        return Err(Error::Precondition(format!("{p} is not in H_2")));
    }
    let n = p.len();
    let v = p.as_zero_based();
    let pos_of = p.inverse();
    let mut best: Option<Perm> = None;
    for t in 0..=n {
        let increasing = |range: std::ops::Range<usize>| {
            range.clone().zip(range.skip(1)).all(|(a, b)| pos_of.as_zero_based()[a] < pos_of.as_zero_based()[b])
        };
        if !(increasing(0..t) && increasing(t..n)) {
            continue;
        }
        // Template slot 1, 3, 5, … is low; 2, 4, … is high.
        let mut last = 0;
        for &x in v {
            let want_odd = (x as usize) < t;
            last += 1;
            if (last % 2 == 1) != want_odd {
                last += 1;
            }
        }
        let candidate = alternating_template(last);
        if best.as_ref().is_none_or(|b| candidate.len() < b.len()) {
            best = Some(candidate);
        }
    }
    let best = best.expect("a member of H_2 has a valid threshold");
    if best.contains(p).is_some() {
        return Ok(best);
    }
    exhaustive_alternating_superpattern(p)
        .ok_or_else(|| Error::ContractViolation(format!("no alternating superpattern of {p} found")))
}

/// `1 (h+1) 2 (h+2) …` of length `m`, with `h = ⌈m/2⌉`.
pub fn alternating_template(m: usize) -> Perm {
    let low = m.div_ceil(2);
    let values: Vec<usize> = (0..m).map(|i| if i % 2 == 0 { i / 2 + 1 } else { low + i / 2 + 1 }).collect();
    Perm::from_one_based(&values).expect("template is a permutation")
}

fn exhaustive_alternating_superpattern(p: &Perm) -> Option<Perm> {
    (p.len()..=2 * p.len() + 1).find_map(|m| {
        Perm::all(m).find(|q| is_alternating(q) && q.inverse().ascending_runs() <= 2 && q.contains(p).is_some())
    })
}

/// Smallest `d ≤ max_del` such that deleting some `d` entries of `p` leaves
/// a member of `expr`.
pub fn deletion_distance_to(engine: &Engine, p: &Perm, expr: &ClassExpr, max_del: usize) -> Result<Option<usize>> {
    for d in 0..=max_del.min(p.len()) {
        if d > engine.config().max_deletions {
            return Err(Error::ResourceLimit(format!(
                "deletion search beyond {} entries",
                engine.config().max_deletions
            )));
        }
        let mut found = false;
        for_each_subset(p.len(), d, &mut |subset| {
            if found {
                return Ok(());
            }
            found = engine.member(expr, &p.delete_positions(subset))?;
            Ok(())
        })?;
        if found {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Visits the `size`-subsets of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, size: usize, visit: &mut impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    fn rec(
        n: usize,
        size: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if chosen.len() == size {
            return visit(chosen);
        }
        for i in start..=n - (size - chosen.len()) {
            chosen.push(i);
            rec(n, size, i + 1, chosen, visit)?;
            chosen.pop();
        }
        Ok(())
    }
    rec(n, size, 0, &mut Vec::with_capacity(size), visit)
}
