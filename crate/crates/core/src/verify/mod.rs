//! Exhaustive finite-order checks: inclusions, equalities, group closure,
//! the `m(k, l)` search and the named suite.

mod suite;

use std::collections::BTreeSet;
use std::ops::RangeInclusive;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::class::{Config, Engine};
use crate::error::{Error, Result};
use crate::expr::ClassExpr;
use crate::perm::Perm;

pub use suite::{is_registered, CheckStatus, SuiteResult, MANIFEST};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails { witness: Perm },
    Skipped { reason: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Perm> {
        match self {
            Verdict::Fails { witness } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderResult {
    pub n: usize,
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Subset,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub lhs: ClassExpr,
    pub rhs: ClassExpr,
    pub relation: Relation,
    pub results: Vec<OrderResult>,
}

impl InclusionReport {
    pub fn holds(&self) -> bool {
        self.results.iter().all(|r| r.verdict.holds())
    }

    /// The witness at the smallest failing order.
    pub fn first_failure(&self) -> Option<(usize, &Perm)> {
        self.results.iter().find_map(|r| r.verdict.witness().map(|w| (r.n, w)))
    }

    pub fn any_skipped(&self) -> bool {
        self.results.iter().any(|r| matches!(r.verdict, Verdict::Skipped { .. }))
    }

    /// Largest `n` such that every order up to `n` holds.
    pub fn verified_up_to(&self) -> Option<usize> {
        self.results.iter().take_while(|r| r.verdict.holds()).last().map(|r| r.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClosureVerdict {
    Closed,
    NotClosed { left: Perm, right: Perm, product: Perm },
    MissingIdentity,
    NotInverseClosed { witness: Perm },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureOrder {
    pub n: usize,
    #[serde(flatten)]
    pub verdict: ClosureVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub class: ClassExpr,
    pub results: Vec<ClosureOrder>,
}

impl ClosureReport {
    pub fn closed(&self) -> bool {
        self.results.iter().all(|r| r.verdict == ClosureVerdict::Closed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MEntry {
    pub m: usize,
    /// Largest order up to which every order was checked and holds.
    pub verified_up_to: Option<usize>,
    pub counterexample: Option<Perm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MSearchReport {
    pub k: usize,
    pub l: usize,
    pub n_max: usize,
    pub entries: Vec<MEntry>,
    /// Whether each counterexample order is at most the previous `m`'s.
    pub monotone: bool,
}

impl MSearchReport {
    pub fn entry(&self, m: usize) -> Option<&MEntry> {
        self.entries.iter().find(|e| e.m == m)
    }
}

/// How the behaviour closure splits and recombines a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Behaviour {
    /// Contiguous pieces, interleaved arbitrarily (`∘ H_k`).
    H,
    /// Arbitrary pieces, concatenated (`∘ V_k`).
    V,
    /// Arbitrary pieces, interleaved arbitrarily (`∘ I_k`).
    I,
}

impl Behaviour {
    pub fn atom(self, k: usize) -> ClassExpr {
        match self {
            Behaviour::H => ClassExpr::Hk(k),
            Behaviour::V => ClassExpr::Vk(k),
            Behaviour::I => ClassExpr::Ik(k),
        }
    }
}

/// Runs checks on a shared engine inside a dedicated thread pool.
pub struct Harness {
    engine: Engine,
    pool: rayon::ThreadPool,
    timings: bool,
}

impl Harness {
    /// `jobs = 0` uses every available core.
    pub fn new(config: Config, jobs: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
        Ok(Harness { engine: Engine::new(config), pool, timings: false })
    }

    /// Record wall-clock time per order and per check.
    pub fn with_timings(mut self, on: bool) -> Self {
        self.timings = on;
        self
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn jobs(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub(crate) fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }

    fn elapsed(&self, start: Instant) -> Option<f64> {
        self.timings.then(|| start.elapsed().as_secs_f64() * 1e3)
    }

    /// `lhs ∩ S_n ⊆ rhs` for each `n`; the witness is the lexicographically
    /// smallest member of `lhs` outside `rhs`.
    pub fn check_inclusion(&self, lhs: &ClassExpr, rhs: &ClassExpr, orders: RangeInclusive<usize>) -> InclusionReport {
        let results = orders
            .map(|n| {
                let start = Instant::now();
                let verdict = self.inclusion_at(lhs, rhs, n).unwrap_or_else(skip_or_panic);
                OrderResult { n, verdict, elapsed_ms: self.elapsed(start) }
            })
            .collect();
        InclusionReport { lhs: lhs.clone(), rhs: rhs.clone(), relation: Relation::Subset, results }
    }

    fn inclusion_at(&self, lhs: &ClassExpr, rhs: &ClassExpr, n: usize) -> Result<Verdict> {
        let left = self.engine.enumerate(lhs, n)?;
        if matches!(rhs, ClassExpr::Compose(_) | ClassExpr::Merge(_)) {
            // Materialising the slice turns each membership test into a lookup.
            match self.engine.enumerate(rhs, n) {
                Err(e) if e.is_resource_limit() => {}
                other => {
                    other?;
                }
            }
        }
        let found = self.install(|| {
            left.members.par_iter().find_map_first(|p| match self.engine.member(rhs, p) {
                Ok(true) => None,
                Ok(false) => Some(Ok(p.clone())),
                Err(e) => Some(Err(e)),
            })
        });
        match found {
            None => Ok(Verdict::Holds),
            Some(Err(e)) => Err(e),
            Some(Ok(w)) => {
                let fresh = self.engine.fresh();
                if fresh.member(lhs, &w)? && !fresh.member(rhs, &w)? {
                    Ok(Verdict::Fails { witness: w })
                } else {
                    Err(Error::ContractViolation(format!("witness {w} did not re-verify")))
                }
            }
        }
    }

    /// Slice equality per order; the witness is the smallest element of the
    /// symmetric difference.
    pub fn check_equality(&self, a: &ClassExpr, b: &ClassExpr, orders: RangeInclusive<usize>) -> InclusionReport {
        let results = orders
            .map(|n| {
                let start = Instant::now();
                let verdict = self.equality_at(a, b, n).unwrap_or_else(skip_or_panic);
                OrderResult { n, verdict, elapsed_ms: self.elapsed(start) }
            })
            .collect();
        InclusionReport { lhs: a.clone(), rhs: b.clone(), relation: Relation::Equal, results }
    }

    fn equality_at(&self, a: &ClassExpr, b: &ClassExpr, n: usize) -> Result<Verdict> {
        let (sa, sb) = self.install(|| rayon::join(|| self.engine.enumerate(a, n), || self.engine.enumerate(b, n)));
        let (sa, sb) = (sa?, sb?);
        let only_a = sa.iter().find(|p| !sb.contains(p));
        let only_b = sb.iter().find(|p| !sa.contains(p));
        let witness = match (only_a, only_b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        let Some(w) = witness.cloned() else {
            return Ok(Verdict::Holds);
        };
        let fresh = self.engine.fresh();
        if fresh.member(a, &w)? != fresh.member(b, &w)? {
            Ok(Verdict::Fails { witness: w })
        } else {
            Err(Error::ContractViolation(format!("witness {w} did not re-verify")))
        }
    }

    /// Closure of each slice under composition, then presence of the
    /// identity, then closure under inverses.
    pub fn check_group_closure(&self, expr: &ClassExpr, orders: RangeInclusive<usize>) -> ClosureReport {
        let results = orders
            .map(|n| {
                let start = Instant::now();
                let verdict = match self.closure_at(expr, n) {
                    Ok(v) => v,
                    Err(e) if e.is_resource_limit() => ClosureVerdict::Skipped { reason: e.to_string() },
                    Err(e) => panic!("{e}"),
                };
                ClosureOrder { n, verdict, elapsed_ms: self.elapsed(start) }
            })
            .collect();
        ClosureReport { class: expr.clone(), results }
    }

    fn closure_at(&self, expr: &ClassExpr, n: usize) -> Result<ClosureVerdict> {
        let slice = self.engine.enumerate(expr, n)?;
        let failure = self.install(|| {
            slice.members.par_iter().find_map_first(|a| {
                slice.iter().find_map(|b| {
                    let product = a.compose(b).expect("equal orders");
                    (!slice.contains(&product)).then(|| (a.clone(), b.clone(), product))
                })
            })
        });
        if let Some((left, right, product)) = failure {
            let fresh = self.engine.fresh();
            if fresh.member(expr, &left)? && fresh.member(expr, &right)? && !fresh.member(expr, &product)? {
                return Ok(ClosureVerdict::NotClosed { left, right, product });
            }
            return Err(Error::ContractViolation(format!("closure witness {left}, {right} did not re-verify")));
        }
        if !slice.contains(&Perm::identity(n)) {
            return Ok(ClosureVerdict::MissingIdentity);
        }
        if let Some(p) = slice.iter().find(|p| !slice.contains(&p.inverse())) {
            return Ok(ClosureVerdict::NotInverseClosed { witness: p.clone() });
        }
        Ok(ClosureVerdict::Closed)
    }

    /// Evidence about the largest `m` with `I_m ⊆ I_k ∘ I_l`, for
    /// `m = k + l − 1, …, kl` and orders up to `n_max`.
    pub fn search_m(&self, k: usize, l: usize, n_max: usize) -> MSearchReport {
        let rhs = ClassExpr::comp([ClassExpr::Ik(k), ClassExpr::Ik(l)]);
        let lo = (k + l).saturating_sub(1).max(1);
        let mut entries = Vec::new();
        for m in lo..=(k * l).max(lo) {
            let mut entry = MEntry { m, verified_up_to: None, counterexample: None, skipped: None };
            for n in 1..=n_max {
                match self.inclusion_at(&ClassExpr::Ik(m), &rhs, n) {
                    Ok(Verdict::Holds) => entry.verified_up_to = Some(n),
                    Ok(Verdict::Fails { witness }) => {
                        entry.counterexample = Some(witness);
                        break;
                    }
                    Ok(Verdict::Skipped { reason }) => {
                        entry.skipped = Some(reason);
                        break;
                    }
                    Err(e) if e.is_resource_limit() => {
                        entry.skipped = Some(e.to_string());
                        break;
                    }
                    Err(e) => panic!("{e}"),
                }
            }
            entries.push(entry);
        }
        let orders: Vec<Option<usize>> = entries.iter().map(|e| e.counterexample.as_ref().map(Perm::len)).collect();
        let monotone = orders.windows(2).all(|w| match w {
            [Some(a), b] => b.is_some_and(|b| b <= *a),
            _ => true,
        });
        MSearchReport { k, l, n_max, entries, monotone }
    }

    /// Compares the slice of `a ∘ X_k` with the set obtained directly from
    /// members of `a` by the splitting rule of `variant`.
    pub fn check_behaviour(
        &self,
        a: &ClassExpr,
        k: usize,
        variant: Behaviour,
        orders: RangeInclusive<usize>,
    ) -> InclusionReport {
        let composed = ClassExpr::comp([a.clone(), variant.atom(k)]);
        let results = orders
            .map(|n| {
                let start = Instant::now();
                let verdict = self.behaviour_at(a, &composed, k, variant, n).unwrap_or_else(skip_or_panic);
                OrderResult { n, verdict, elapsed_ms: self.elapsed(start) }
            })
            .collect();
        InclusionReport { lhs: a.clone(), rhs: composed, relation: Relation::Equal, results }
    }

    fn behaviour_at(&self, a: &ClassExpr, composed: &ClassExpr, k: usize, variant: Behaviour, n: usize) -> Result<Verdict> {
        let members = self.engine.enumerate(a, n)?;
        let direct: BTreeSet<Perm> = self.install(|| {
            members
                .members
                .par_iter()
                .map(|alpha| behaviour_images(alpha, k, variant))
                .reduce(BTreeSet::new, |mut x, y| {
                    x.extend(y);
                    x
                })
        });
        let slice = self.engine.enumerate(composed, n)?;
        let only_direct = direct.iter().find(|p| !slice.contains(p));
        let only_slice = slice.iter().find(|p| !direct.contains(*p));
        let witness = match (only_direct, only_slice) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        Ok(match witness {
            None => Verdict::Holds,
            Some(w) => Verdict::Fails { witness: w.clone() },
        })
    }
}

fn skip_or_panic(e: Error) -> Verdict {
    if e.is_resource_limit() {
        Verdict::Skipped { reason: e.to_string() }
    } else {
        panic!("{e}")
    }
}

/// Every permutation obtained from `alpha` by the splitting rule.
pub fn behaviour_images(alpha: &Perm, k: usize, variant: Behaviour) -> BTreeSet<Perm> {
    let n = alpha.len();
    let v = alpha.as_zero_based();
    let mut out = BTreeSet::new();
    let mut pieces_of = |pieces: Vec<Vec<u8>>| match variant {
        Behaviour::V => {
            out.insert(Perm::from_zero_based(pieces.concat()));
        }
        Behaviour::H | Behaviour::I => shuffles(&pieces, &mut |s| {
            out.insert(Perm::from_zero_based(s.to_vec()));
        }),
    };
    if k == 0 {
        if n == 0 {
            out.insert(Perm::empty());
        }
        return out;
    }
    match variant {
        Behaviour::H => {
            // Cut points between contiguous pieces, as a multiset of positions.
            let mut cuts = Vec::new();
            contiguous_cuts(n, k - 1, 0, &mut cuts, &mut |cuts| {
                let mut bounds = vec![0];
                bounds.extend_from_slice(cuts);
                bounds.push(n);
                pieces_of(bounds.windows(2).map(|w| v[w[0]..w[1]].to_vec()).collect());
            });
        }
        Behaviour::V | Behaviour::I => {
            let mut colour = vec![0usize; n];
            loop {
                let mut pieces = vec![Vec::new(); k];
                for (i, &c) in colour.iter().enumerate() {
                    pieces[c].push(v[i]);
                }
                pieces_of(pieces);
                // Next colouring in odometer order.
                let Some(i) = colour.iter().rposition(|&c| c + 1 < k) else {
                    break;
                };
                colour[i] += 1;
                colour[i + 1..].fill(0);
            }
        }
    }
    out
}

fn contiguous_cuts(n: usize, left: usize, from: usize, cuts: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if left == 0 {
        visit(cuts);
        return;
    }
    for c in from..=n {
        cuts.push(c);
        contiguous_cuts(n, left - 1, c, cuts, visit);
        cuts.pop();
    }
}

/// All interleavings of `pieces` that keep each piece in order.
fn shuffles(pieces: &[Vec<u8>], visit: &mut impl FnMut(&[u8])) {
    fn rec(pieces: &[Vec<u8>], next: &mut [usize], out: &mut Vec<u8>, total: usize, visit: &mut impl FnMut(&[u8])) {
        if out.len() == total {
            visit(out);
            return;
        }
        for i in 0..pieces.len() {
            if next[i] < pieces[i].len() {
                out.push(pieces[i][next[i]]);
                next[i] += 1;
                rec(pieces, next, out, total, visit);
                next[i] -= 1;
                out.pop();
            }
        }
    }
    let total = pieces.iter().map(Vec::len).sum();
    rec(pieces, &mut vec![0; pieces.len()], &mut Vec::with_capacity(total), total, visit);
}
