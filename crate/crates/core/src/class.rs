//! Membership, enumeration, counting and basis computation for
//! [`ClassExpr`] values.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::expr::ClassExpr;
use crate::perm::Perm;
use crate::structure;

/// Environment variable overriding every order cap.
pub const MAX_N_ENV: &str = "PERMCLASS_MAX_N";

/// How slices of classes without a dedicated generator are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Test every one-point extension (insert the new maximum) of the
    /// previous order's slice. Exact because every class is closed under
    /// taking patterns.
    Extend,
    /// Test every permutation of the order.
    FilterAll,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Largest order for composition and merge searches.
    pub search_cap: usize,
    /// Largest order for any enumeration.
    pub enum_cap: usize,
    pub strategy: Strategy,
    /// Use the combinatorial generators for I, D, L, Lk, F2, Vk, Hk and All.
    pub use_generators: bool,
    /// For a two-factor composition of atoms, enumerate whichever factor
    /// slice is smaller instead of always the rightmost one.
    pub compose_smaller_side: bool,
    /// Largest deletion count tried by `deletion_distance_to`.
    pub max_deletions: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            search_cap: 9,
            enum_cap: 11,
            strategy: Strategy::Extend,
            use_generators: true,
            compose_smaller_side: false,
            max_deletions: 4,
        }
    }
}

impl Config {
    /// Replaces both order caps.
    pub fn with_global_cap(mut self, cap: usize) -> Self {
        self.search_cap = cap;
        self.enum_cap = cap;
        self
    }

    /// Applies `PERMCLASS_MAX_N` when it is set to a positive integer.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_N_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n >= 1 => Ok(Config::default().with_global_cap(n)),
                _ => Err(Error::Precondition(format!("{MAX_N_ENV} must be a positive integer, got {v:?}"))),
            },
            Err(_) => Ok(Config::default()),
        }
    }
}

/// All members of a class at one order, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSlice {
    pub expr: ClassExpr,
    pub order: usize,
    pub members: Vec<Perm>,
}

impl ClassSlice {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.members.binary_search(p).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Perm> {
        self.members.iter()
    }
}

type SliceCell = Arc<OnceLock<Result<Arc<ClassSlice>>>>;

/// Slices keyed by canonical rendering and order. Readers share the map;
/// a missing slice is computed exactly once while other requesters wait on
/// its cell rather than on the map.
#[derive(Default)]
struct SliceCache {
    cells: RwLock<HashMap<(String, usize), SliceCell>>,
}

impl SliceCache {
    fn cell(&self, key: (String, usize)) -> SliceCell {
        if let Some(cell) = self.cells.read().unwrap().get(&key) {
            return cell.clone();
        }
        self.cells.write().unwrap().entry(key).or_default().clone()
    }

    fn peek(&self, key: &(String, usize)) -> Option<Arc<ClassSlice>> {
        let cells = self.cells.read().unwrap();
        match cells.get(key)?.get()? {
            Ok(slice) => Some(slice.clone()),
            Err(_) => None,
        }
    }

    fn len(&self) -> usize {
        self.cells.read().unwrap().len()
    }
}

/// Decides membership and enumerates classes.
///
/// The engine is `Sync`; share one instance across threads to share its
/// slice cache.
#[derive(Default)]
pub struct Engine {
    config: Config,
    cache: SliceCache,
}

impl Engine {
    pub fn new(config: Config) -> Self {
        Engine { config, cache: SliceCache::default() }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    /// An engine with the same configuration and an empty cache.
    pub fn fresh(&self) -> Engine {
        Engine::new(self.config.clone())
    }

    /// Number of cached slices (including ones that failed).
    pub fn cached_slices(&self) -> usize {
        self.cache.len()
    }

    fn search_guard(&self, what: &str, n: usize) -> Result<()> {
        if n > self.config.search_cap {
            return Err(Error::ResourceLimit(format!("{what} at order {n} exceeds cap {}", self.config.search_cap)));
        }
        Ok(())
    }

    fn enum_guard(&self, expr: &ClassExpr, n: usize) -> Result<()> {
        if n > self.config.enum_cap {
            return Err(Error::ResourceLimit(format!(
                "enumerating {expr} at order {n} exceeds cap {}",
                self.config.enum_cap
            )));
        }
        Ok(())
    }

    /// Decides whether `p` belongs to the class denoted by `expr`.
    pub fn member(&self, expr: &ClassExpr, p: &Perm) -> Result<bool> {
        use ClassExpr::*;
        let n = p.len();
        Ok(match expr {
            Inc => p.is_identity(),
            Dec => p.is_decreasing(),
            Ik(k) => p.lds() <= *k,
            Dk(k) => p.lis() <= *k,
            All => true,
            Layered => structure::layers(p).is_some(),
            Lk(k) => structure::layers(p).is_some_and(|s| s.0.len() <= *k),
            F2 => structure::layers(p).is_some_and(|s| s.0.iter().all(|&l| l <= 2)),
            Vk(k) => p.ascending_runs() <= *k,
            Hk(k) => p.inverse().ascending_runs() <= *k,
            Av(patterns) => patterns.iter().all(|q| p.avoids(q)),
            Intersect(cs) => {
                for c in cs {
                    if !self.member(c, p)? {
                        return Ok(false);
                    }
                }
                true
            }
            Union(cs) => {
                for c in cs {
                    if self.member(c, p)? {
                        return Ok(true);
                    }
                }
                false
            }
            Rev(c) => self.member(c, &p.reverse())?,
            Cpl(c) => self.member(c, &p.complement())?,
            Inv(c) => self.member(c, &p.inverse())?,
            Compose(cs) => {
                if let Some(slice) = self.cache.peek(&(expr.canonical(), n)) {
                    return Ok(slice.contains(p));
                }
                self.member_compose(cs, p)?
            }
            Merge(cs) => {
                if let Some(slice) = self.cache.peek(&(expr.canonical(), n)) {
                    return Ok(slice.contains(p));
                }
                self.search_guard("merge membership", n)?;
                structure::search_coloring(p, cs.len(), |i, part| self.member(&cs[i], part))?.is_some()
            }
            VerticalMerge(cs) => {
                structure::search_vertical(p, cs.len(), |i, part| self.member(&cs[i], part))?.is_some()
            }
            HorizontalMerge(cs) => {
                structure::search_horizontal(p, cs.len(), |i, part| self.member(&cs[i], part))?.is_some()
            }
        })
    }

    /// `p ∈ A_1 ∘ … ∘ A_k` iff some `q` in the slice of `A_k` has
    /// `p ∘ q⁻¹ ∈ A_1 ∘ … ∘ A_{k−1}`.
    fn member_compose(&self, cs: &[ClassExpr], p: &Perm) -> Result<bool> {
        let n = p.len();
        match cs {
            [] => return Ok(p.is_identity()),
            [only] => return self.member(only, p),
            _ => {}
        }
        self.search_guard("composition membership", n)?;
        if let [left, right] = cs {
            if self.config.compose_smaller_side && left.is_atom() && right.is_atom() {
                let ls = self.enumerate(left, n)?;
                let rs = self.enumerate(right, n)?;
                if ls.len() < rs.len() {
                    for a in ls.iter() {
                        if self.member(right, &a.inverse().compose(p)?)? {
                            return Ok(true);
                        }
                    }
                    return Ok(false);
                }
            }
        }
        let (right, rest) = cs.split_last().unwrap();
        let rest_expr = match rest {
            [single] => single.clone(),
            _ => ClassExpr::Compose(rest.to_vec()),
        };
        let slice = self.enumerate(right, n)?;
        for q in slice.iter() {
            if self.member(&rest_expr, &p.compose(&q.inverse())?)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The exact slice of `expr` at order `n`, computed once per engine.
    pub fn enumerate(&self, expr: &ClassExpr, n: usize) -> Result<Arc<ClassSlice>> {
        self.enum_guard(expr, n)?;
        let cell = self.cache.cell((expr.canonical(), n));
        cell.get_or_init(|| self.compute_slice(expr, n).map(Arc::new)).clone()
    }

    /// Slice sizes for orders `1..=n_max`.
    pub fn count(&self, expr: &ClassExpr, n_max: usize) -> Result<Vec<usize>> {
        (1..=n_max).map(|n| self.enumerate(expr, n).map(|s| s.len())).collect()
    }

    /// All minimal non-members of length at most `max_len`, sorted by
    /// length then lexicographically.
    pub fn basis_up_to(&self, expr: &ClassExpr, max_len: usize) -> Result<Vec<Perm>> {
        let mut basis = Vec::new();
        for n in 1..=max_len {
            let below = self.enumerate(expr, n - 1)?;
            let here = self.enumerate(expr, n)?;
            // A minimal non-member loses its maximum to a member of order n−1.
            let mut found: Vec<Perm> = below
                .iter()
                .flat_map(|q| (0..n).map(move |at| q.insert_max(at)))
                .filter(|p| !here.contains(p))
                .filter(|p| (0..n).all(|i| below.contains(&p.delete_positions(&[i]))))
                .collect();
            found.sort();
            basis.extend(found);
        }
        Ok(basis)
    }

    fn compute_slice(&self, expr: &ClassExpr, n: usize) -> Result<ClassSlice> {
        use ClassExpr::*;
        let generated = if self.config.use_generators { generate(expr, n) } else { None };
        let mut members = match generated {
            Some(members) => members,
            None => match expr {
                Compose(cs) => self.compose_product(cs, n)?,
                Union(cs) => {
                    let mut all = Vec::new();
                    for c in cs {
                        all.extend(self.enumerate(c, n)?.iter().cloned());
                    }
                    all
                }
                Intersect(cs) => {
                    let (first, others) = cs.split_first().unwrap();
                    let mut kept = Vec::new();
                    for p in self.enumerate(first, n)?.iter() {
                        if self.all_members(others, p)? {
                            kept.push(p.clone());
                        }
                    }
                    kept
                }
                Rev(c) => self.enumerate(c, n)?.iter().map(Perm::reverse).collect(),
                Cpl(c) => self.enumerate(c, n)?.iter().map(Perm::complement).collect(),
                Inv(c) => self.enumerate(c, n)?.iter().map(Perm::inverse).collect(),
                _ => {
                    if matches!(expr, Merge(_)) {
                        self.search_guard("merge enumeration", n)?;
                    }
                    self.filter_slice(expr, n)?
                }
            },
        };
        members.sort();
        members.dedup();
        Ok(ClassSlice { expr: expr.clone(), order: n, members })
    }

    fn all_members(&self, exprs: &[ClassExpr], p: &Perm) -> Result<bool> {
        for e in exprs {
            if !self.member(e, p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn filter_slice(&self, expr: &ClassExpr, n: usize) -> Result<Vec<Perm>> {
        let mut kept = Vec::new();
        match self.config.strategy {
            Strategy::FilterAll => {
                for p in Perm::all(n) {
                    if self.member(expr, &p)? {
                        kept.push(p);
                    }
                }
            }
            Strategy::Extend => {
                if n == 0 {
                    return Ok(if self.member(expr, &Perm::empty())? { vec![Perm::empty()] } else { vec![] });
                }
                let below = self.enumerate(expr, n - 1)?;
                for q in below.iter() {
                    for at in 0..n {
                        let p = q.insert_max(at);
                        if self.member(expr, &p)? {
                            kept.push(p);
                        }
                    }
                }
            }
        }
        Ok(kept)
    }

    /// `{a_1 ∘ … ∘ a_k}` over the factor slices, folded left to right.
    fn compose_product(&self, cs: &[ClassExpr], n: usize) -> Result<Vec<Perm>> {
        self.search_guard("composition enumeration", n)?;
        let (first, rest) = cs.split_first().unwrap();
        let mut acc: Vec<Perm> = self.enumerate(first, n)?.members.clone();
        let mut buf = Vec::with_capacity(n);
        for c in rest {
            let right = self.enumerate(c, n)?;
            let mut seen: HashSet<Perm> = HashSet::new();
            for a in &acc {
                for b in right.iter() {
                    a.compose_into(b, &mut buf);
                    if !seen.contains(&buf[..]) {
                        seen.insert(Perm::from_zero_based(buf.clone()));
                    }
                }
            }
            acc = seen.into_iter().collect();
        }
        Ok(acc)
    }
}

/// Dedicated generators for atoms with a direct combinatorial encoding.
fn generate(expr: &ClassExpr, n: usize) -> Option<Vec<Perm>> {
    use ClassExpr::*;
    Some(match expr {
        Inc => vec![Perm::identity(n)],
        Dec => vec![Perm::decreasing(n)],
        All => Perm::all(n).collect(),
        Layered => layered_with(n, |_| true),
        Lk(k) => layered_with(n, |shape| shape.len() <= *k),
        F2 => layered_with(n, |shape| shape.iter().all(|&l| l <= 2)),
        Vk(k) => runs_concatenations(n, *k),
        Hk(k) => runs_concatenations(n, *k).iter().map(Perm::inverse).collect(),
        _ => return None,
    })
}

fn layered_with(n: usize, keep: impl Fn(&[usize]) -> bool) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut parts = Vec::new();
    compositions(n, &mut parts, &mut |shape| {
        if keep(shape) {
            out.push(structure::LayerShape(shape.to_vec()).realize());
        }
    });
    out
}

/// Calls `visit` on every composition of `n` into positive parts.
pub(crate) fn compositions(n: usize, parts: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if n == 0 {
        visit(parts);
        return;
    }
    for first in 1..=n {
        parts.push(first);
        compositions(n - first, parts, visit);
        parts.pop();
    }
}

/// Permutations with at most `k` ascending runs: each is the concatenation
/// of its runs, so we emit ordered set partitions of the values into at most
/// `k` blocks whose adjacent blocks meet at a descent.
fn runs_concatenations(n: usize, k: usize) -> Vec<Perm> {
    if k >= n {
        return Perm::all(n).collect();
    }
    assert!(n <= 64, "run generator supports orders up to 64");
    let mut out = Vec::new();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut seq = Vec::with_capacity(n);
    runs_rec(n, k, full, None, &mut seq, &mut out);
    out
}

fn runs_rec(n: usize, k: usize, remaining: u64, prev_max: Option<u8>, seq: &mut Vec<u8>, out: &mut Vec<Perm>) {
    if remaining == 0 {
        out.push(Perm::from_zero_based(seq.clone()));
        return;
    }
    if k == 0 {
        return;
    }
    // Enumerate nonempty subsets of `remaining` as the next run.
    let mut block = remaining;
    loop {
        let min = block.trailing_zeros() as u8;
        if prev_max.is_none_or(|m| m > min) {
            let len = seq.len();
            let mut max = 0u8;
            for v in 0..n as u8 {
                if block & (1 << v) != 0 {
                    seq.push(v);
                    max = v;
                }
            }
            runs_rec(n, k - 1, remaining & !block, Some(max), seq, out);
            seq.truncate(len);
        }
        block = (block - 1) & remaining;
        if block == 0 {
            break;
        }
    }
}
