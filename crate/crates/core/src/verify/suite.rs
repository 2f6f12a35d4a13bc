//! The named checks run by [`Harness::run_suite`].

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Behaviour, ClosureVerdict, Harness, InclusionReport, Verdict};
use crate::class::{Config, Engine, Strategy};
use crate::decompose;
use crate::error::{Error, Result};
use crate::expr::ClassExpr;
use crate::perm::Perm;
use crate::structure;

/// Every registered check, in reporting order.
pub const MANIFEST: &[&str] = &[
    "fact-basic-equiv",
    "lemma-kl",
    "lemma-extrakl",
    "lemma-basicsym",
    "lemma-VH-invert",
    "lemma-behaviour-H",
    "lemma-behaviour-V",
    "lemma-behaviour-I",
    "lemma-important",
    "thm-Ik-VkHk",
    "thm-k+l-1",
    "search-m-2-2",
    "thm-L4",
    "thm-L4-k5",
    "lemma-L2-group",
    "count-L2",
    "count-F2",
    "thm52-111",
    "thm52-21-1-21",
    "basis-H-size3",
    "lemma-blocks",
    "close-N-sigma",
    "thm-L-gamma-far",
    "prop-VH-blockbound",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Nothing could be checked within the caps.
    Skipped,
    /// No failure, but part of the check was skipped or is open-ended.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub params: Value,
    pub status: CheckStatus,
    pub counterexamples: Vec<Value>,
    pub details: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

type CheckFn = fn(&mut Ctx) -> Result<()>;

fn lookup(name: &str) -> Option<CheckFn> {
    Some(match name {
        "fact-basic-equiv" => fact_basic_equiv,
        "lemma-kl" => lemma_kl,
        "lemma-extrakl" => lemma_extrakl,
        "lemma-basicsym" => lemma_basicsym,
        "lemma-VH-invert" => lemma_vh_invert,
        "lemma-behaviour-H" => |c| lemma_behaviour(c, Behaviour::H),
        "lemma-behaviour-V" => |c| lemma_behaviour(c, Behaviour::V),
        "lemma-behaviour-I" => |c| lemma_behaviour(c, Behaviour::I),
        "lemma-important" => lemma_important,
        "thm-Ik-VkHk" => thm_ik_vkhk,
        "thm-k+l-1" => thm_k_l_1,
        "search-m-2-2" => search_m_2_2,
        "thm-L4" => |c| thm_l4(c, 4),
        "thm-L4-k5" => |c| thm_l4(c, 5),
        "lemma-L2-group" => lemma_l2_group,
        "count-L2" => count_l2,
        "count-F2" => count_f2,
        "thm52-111" => |c| thm52(c, "1", 1, "1", "Av(123)", 7),
        "thm52-21-1-21" => |c| thm52(c, "21", 1, "21", "Av(21354)", 6),
        "basis-H-size3" => basis_h_size3,
        "lemma-blocks" => lemma_blocks,
        "close-N-sigma" => close_n_sigma,
        "thm-L-gamma-far" => thm_l_gamma_far,
        "prop-VH-blockbound" => prop_vh_blockbound,
        _ => return None,
    })
}

/// Whether `name` is a registered check.
pub fn is_registered(name: &str) -> bool {
    lookup(name).is_some()
}

impl Harness {
    /// Runs the named checks (`"all"` expands to the manifest) in the order
    /// given, each order cap clamped to `max_n`.
    pub fn run_suite(&self, names: &[&str], max_n: Option<usize>) -> Result<Vec<SuiteResult>> {
        let mut expanded: Vec<&str> = Vec::new();
        for &name in names {
            let batch: Vec<&str> = if name == "all" { MANIFEST.to_vec() } else { vec![name] };
            for n in batch {
                if lookup(n).is_none() {
                    return Err(Error::UnknownCheck(n.to_string()));
                }
                if !expanded.contains(&n) {
                    expanded.push(n);
                }
            }
        }
        expanded.into_iter().map(|name| self.run_check(name, max_n)).collect()
    }

    fn run_check(&self, name: &str, max_n: Option<usize>) -> Result<SuiteResult> {
        let check = lookup(name).ok_or_else(|| Error::UnknownCheck(name.to_string()))?;
        let start = Instant::now();
        let mut ctx = Ctx {
            h: self,
            max_n,
            params: serde_json::Map::new(),
            details: serde_json::Map::new(),
            counterexamples: Vec::new(),
            skipped: Vec::new(),
            ran: 0,
            open: false,
        };
        match check(&mut ctx) {
            Ok(()) => {}
            Err(e) if e.is_resource_limit() => ctx.skip(e.to_string()),
            Err(e) => ctx.fail(json!({ "error": e.to_string() })),
        }
        let status = if !ctx.counterexamples.is_empty() {
            CheckStatus::Fail
        } else if ctx.ran == 0 {
            CheckStatus::Skipped
        } else if !ctx.skipped.is_empty() || ctx.open {
            CheckStatus::Inconclusive
        } else {
            CheckStatus::Pass
        };
        if !ctx.skipped.is_empty() {
            ctx.details.insert("skipped".into(), json!(ctx.skipped));
        }
        Ok(SuiteResult {
            name: name.to_string(),
            params: Value::Object(ctx.params),
            status,
            counterexamples: ctx.counterexamples,
            details: Value::Object(ctx.details),
            elapsed_ms: self.elapsed(start),
        })
    }
}

/// Upper bound on stored counterexamples per check.
const MAX_RECORDED: usize = 20;

struct Ctx<'a> {
    h: &'a Harness,
    max_n: Option<usize>,
    params: serde_json::Map<String, Value>,
    details: serde_json::Map<String, Value>,
    counterexamples: Vec<Value>,
    skipped: Vec<String>,
    ran: usize,
    open: bool,
}

impl Ctx<'_> {
    fn engine(&self) -> &Engine {
        self.h.engine()
    }

    /// The check's default order cap, clamped by `--max-n`.
    fn cap(&self, default: usize) -> usize {
        self.max_n.map_or(default, |m| m.min(default))
    }

    /// False (and recorded as skipped) when a fixed order exceeds `--max-n`.
    fn allows(&mut self, order: usize) -> bool {
        if self.max_n.is_some_and(|m| order > m) {
            self.skip(format!("fixed order {order} exceeds --max-n"));
            false
        } else {
            true
        }
    }

    fn param(&mut self, key: &str, value: Value) {
        self.params.insert(key.into(), value);
    }

    fn detail(&mut self, key: &str, value: Value) {
        self.details.insert(key.into(), value);
    }

    fn fail(&mut self, counterexample: Value) {
        if self.counterexamples.len() < MAX_RECORDED {
            self.counterexamples.push(counterexample);
        }
    }

    fn skip(&mut self, reason: String) {
        if !self.skipped.contains(&reason) {
            self.skipped.push(reason);
        }
    }

    /// Folds an inclusion or equality report into the check.
    fn absorb(&mut self, report: &InclusionReport) {
        for r in &report.results {
            match &r.verdict {
                Verdict::Holds => self.ran += 1,
                Verdict::Fails { witness } => {
                    self.ran += 1;
                    self.fail(json!({ "lhs": report.lhs, "rhs": report.rhs, "n": r.n, "witness": witness }));
                }
                Verdict::Skipped { reason } => self.skip(reason.clone()),
            }
        }
    }

    /// Runs `f` on every member of `expr ∩ S_n` for `n ≤ max`, recording
    /// each returned counterexample.
    fn over_slices(
        &mut self,
        expr: &ClassExpr,
        orders: std::ops::RangeInclusive<usize>,
        f: impl Fn(&Engine, &Perm) -> Option<Value> + Sync,
    ) -> Result<usize> {
        let mut members = 0;
        for n in orders {
            let slice = match self.engine().enumerate(expr, n) {
                Ok(s) => s,
                Err(e) if e.is_resource_limit() => {
                    self.skip(e.to_string());
                    continue;
                }
                Err(e) => return Err(e),
            };
            let engine = self.engine();
            let bad: Vec<Value> = self.h.install(|| slice.members.par_iter().filter_map(|p| f(engine, p)).collect());
            members += slice.len();
            self.ran += 1;
            for b in bad {
                self.fail(b);
            }
        }
        Ok(members)
    }
}

fn e(text: &str) -> ClassExpr {
    text.parse().expect("registry expressions parse")
}

fn perm(text: &str) -> Perm {
    text.parse().expect("registry permutations parse")
}

/// Reports a decomposition failure for `p`, if any.
fn decomposition_failure(p: &Perm, outcome: Result<decompose::Factorization>) -> Option<Value> {
    outcome.err().map(|err| json!({ "perm": p, "error": err.to_string() }))
}

fn fact_basic_equiv(c: &mut Ctx) -> Result<()> {
    let max = c.cap(8);
    c.param("k", json!([2, 3]));
    c.param("max_n", json!(max));
    for k in [2usize, 3] {
        let avoid = ClassExpr::av([Perm::decreasing(k + 1)]);
        for n in 1..=max {
            let all: Vec<Perm> = Perm::all(n).collect();
            let engine = c.engine();
            let bad: Vec<Value> = c.h.install(|| {
                all.par_iter()
                    .filter_map(|p| {
                        let by_pattern = engine.member(&avoid, p).ok()?;
                        let by_lds = p.lds() <= k;
                        let by_colouring = structure::search_coloring(p, k, |_, part| Ok(part.is_identity()))
                            .ok()?
                            .is_some();
                        (by_pattern != by_lds || by_lds != by_colouring).then(|| {
                            json!({ "k": k, "perm": p, "avoids": by_pattern, "lds_ok": by_lds, "colourable": by_colouring })
                        })
                    })
                    .collect()
            });
            c.ran += 1;
            for b in bad {
                c.fail(b);
            }
        }
    }
    Ok(())
}

fn lemma_kl(c: &mut Ctx) -> Result<()> {
    let max = c.cap(6);
    c.param("max_n", json!(max));
    let r = c.h.check_inclusion(&e("comp(Ik(2),Ik(2))"), &e("Ik(4)"), 1..=max);
    c.absorb(&r);
    Ok(())
}

fn lemma_extrakl(c: &mut Ctx) -> Result<()> {
    let max = c.cap(6);
    c.param("max_n", json!(max));
    let r = c.h.check_inclusion(&e("comp(merge(I,D),merge(I,D))"), &e("merge(Ik(2),Dk(2))"), 1..=max);
    c.absorb(&r);
    Ok(())
}

const SYM_CORPUS: [&str; 6] = ["I", "Ik(2)", "Av(231)", "Lk(2)", "merge(I,D)", "Vk(2)"];

fn lemma_basicsym(c: &mut Ctx) -> Result<()> {
    let max = c.cap(6);
    c.param("corpus", json!(SYM_CORPUS));
    c.param("max_n", json!(max));
    let d = ClassExpr::Dec;
    for (i, text) in SYM_CORPUS.iter().enumerate() {
        let a = e(text);
        let b = e(SYM_CORPUS[(i + 1) % SYM_CORPUS.len()]);
        let pairs = [
            (
                ClassExpr::comp([a.clone(), b.clone()]).inv(),
                ClassExpr::comp([b.clone().inv(), a.clone().inv()]),
            ),
            (a.clone().rev(), ClassExpr::comp([a.clone(), d.clone()])),
            (a.clone().cpl(), ClassExpr::comp([d.clone(), a.clone()])),
            (a.clone().rev().cpl(), ClassExpr::comp([d.clone(), a.clone(), d.clone()])),
            (a.clone().cpl().rev(), ClassExpr::comp([d.clone(), a.clone(), d.clone()])),
        ];
        for (lhs, rhs) in pairs {
            let r = c.h.check_equality(&lhs, &rhs, 1..=max);
            c.absorb(&r);
        }
    }
    Ok(())
}

const VH_CORPUS: [&[&str]; 6] = [
    &["I", "I"],
    &["I", "D"],
    &["Av(231)", "I"],
    &["D", "Av(132)", "I"],
    &["Lk(2)", "D"],
    &["Av(321)", "Av(12)"],
];

fn lemma_vh_invert(c: &mut Ctx) -> Result<()> {
    let max = c.cap(6);
    c.param("corpus", json!(VH_CORPUS));
    c.param("max_n", json!(max));
    for parts in VH_CORPUS {
        let cs: Vec<ClassExpr> = parts.iter().map(|t| e(t)).collect();
        let lhs = ClassExpr::horizontal(cs.clone());
        let rhs = ClassExpr::vertical(cs.into_iter().map(ClassExpr::inv)).inv();
        let r = c.h.check_equality(&lhs, &rhs, 1..=max);
        c.absorb(&r);
    }
    Ok(())
}

fn lemma_behaviour(c: &mut Ctx, variant: Behaviour) -> Result<()> {
    const CORPUS: [&str; 4] = ["Av(21)", "Lk(1)", "Av(231)", "Lk(2)"];
    let max = c.cap(5);
    c.param("classes", json!(CORPUS));
    c.param("k", json!([1, 2, 3]));
    c.param("max_n", json!(max));
    for text in CORPUS {
        for k in 1..=3 {
            let r = c.h.check_behaviour(&e(text), k, variant, 1..=max);
            c.absorb(&r);
        }
    }
    Ok(())
}

fn lemma_important(c: &mut Ctx) -> Result<()> {
    const PAIRS: [(&str, &str); 4] = [("I", "I"), ("I", "D"), ("Av(231)", "D"), ("Av(21)", "Av(312)")];
    let max = c.cap(6);
    c.param("pairs", json!(PAIRS));
    c.param("max_n", json!(max));
    for (a, b) in PAIRS {
        let (a, b) = (e(a), e(b));
        let lhs = ClassExpr::merge([a.clone(), b.clone()]);
        let rhs = ClassExpr::comp([ClassExpr::vertical([a, b]), ClassExpr::Hk(2)]);
        let r = c.h.check_inclusion(&lhs, &rhs, 1..=max);
        c.absorb(&r);
    }
    Ok(())
}

fn thm_ik_vkhk(c: &mut Ctx) -> Result<()> {
    let max = c.cap(7);
    c.param("k", json!([2, 3]));
    c.param("max_n", json!(max));
    let mut strict = Vec::new();
    for k in [2usize, 3] {
        let members = c.over_slices(&ClassExpr::Ik(k), 1..=max, |engine, p| {
            decomposition_failure(p, decompose::decompose_vk_hk(engine, p, k))
        })?;
        c.detail(&format!("decomposed_k{k}"), json!(members));
        let rhs = ClassExpr::comp([ClassExpr::Vk(k), ClassExpr::Hk(k)]);
        let r = c.h.check_inclusion(&ClassExpr::Ik(k), &rhs, 1..=max);
        c.absorb(&r);
        for part in [ClassExpr::Vk(k), ClassExpr::Hk(k)] {
            match first_strict_order(c.engine(), &part, &ClassExpr::Ik(k), max)? {
                Some(n) => strict.push(json!({ "class": part, "strict_at": n })),
                None => c.fail(json!({ "class": part, "error": format!("not a proper subset of Ik({k}) up to {max}") })),
            }
        }
    }
    c.detail("strictness", json!(strict));
    Ok(())
}

/// First order at which `small`'s slice is a proper subset of `big`'s.
fn first_strict_order(engine: &Engine, small: &ClassExpr, big: &ClassExpr, max: usize) -> Result<Option<usize>> {
    for n in 1..=max {
        let (s, b) = (engine.enumerate(small, n)?, engine.enumerate(big, n)?);
        if let Some(p) = s.iter().find(|p| !b.contains(p)) {
            return Err(Error::ContractViolation(format!("{p} is in {small} but not in {big}")));
        }
        if s.len() < b.len() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

fn thm_k_l_1(c: &mut Ctx) -> Result<()> {
    const PAIRS: [(usize, usize); 3] = [(2, 2), (2, 3), (3, 2)];
    let max = c.cap(7);
    c.param("pairs", json!(PAIRS));
    c.param("max_n", json!(max));
    for (k, l) in PAIRS {
        let members = c.over_slices(&ClassExpr::Ik(k + l - 1), 1..=max, |engine, p| {
            decomposition_failure(p, decompose::decompose_ik_il(engine, p, k, l))
        })?;
        c.detail(&format!("decomposed_{k}_{l}"), json!(members));
    }
    Ok(())
}

fn search_m_2_2(c: &mut Ctx) -> Result<()> {
    let max = c.cap(9);
    c.param("k", json!(2));
    c.param("l", json!(2));
    c.param("max_n", json!(max));
    let report = c.h.search_m(2, 2, max);
    c.ran += 1;
    for entry in &report.entries {
        if let Some(reason) = &entry.skipped {
            c.skip(format!("m = {}: {reason}", entry.m));
        }
    }
    let m3 = report.entry(3).expect("m = 3 is searched");
    if let Some(w) = &m3.counterexample {
        c.fail(json!({ "m": 3, "witness": w }));
    }
    if !report.monotone {
        c.fail(json!({ "error": "counterexample orders are not monotone in m" }));
    }
    if report.entry(4).is_some_and(|e| e.counterexample.is_none()) {
        c.open = true;
    }
    c.detail("report", serde_json::to_value(&report).expect("report serialises"));
    Ok(())
}

fn thm_l4(c: &mut Ctx, k: usize) -> Result<()> {
    let max = c.cap(10);
    let slice_max = c.cap(7);
    c.param("k", json!(k));
    c.param("max_n", json!(max));
    c.param("slice_max_n", json!(slice_max));
    let members = c.over_slices(&ClassExpr::Lk(k), 1..=max, |engine, p| {
        decomposition_failure(p, decompose::decompose_l4(engine, p, k))
    })?;
    c.detail("decomposed", json!(members));
    let rhs = ClassExpr::comp([ClassExpr::Lk(k - 1), ClassExpr::Lk(k - 2), ClassExpr::Lk(k - 1)]);
    let r = c.h.check_inclusion(&ClassExpr::Lk(k), &rhs, 1..=slice_max);
    c.absorb(&r);
    Ok(())
}

fn lemma_l2_group(c: &mut Ctx) -> Result<()> {
    let max = c.cap(8);
    c.param("class", json!("or(Lk(2),rev(Lk(2)))"));
    c.param("max_n", json!(max));
    let report = c.h.check_group_closure(&e("or(Lk(2),rev(Lk(2)))"), 1..=max);
    for r in &report.results {
        match &r.verdict {
            ClosureVerdict::Closed => c.ran += 1,
            ClosureVerdict::Skipped { reason } => c.skip(reason.clone()),
            other => {
                c.ran += 1;
                c.fail(json!({ "n": r.n, "verdict": other }));
            }
        }
    }
    if c.allows(3) {
        let lone = c.h.check_group_closure(&ClassExpr::Lk(2), 3..=3);
        match &lone.results[0].verdict {
            v @ ClosureVerdict::NotClosed { .. } => {
                c.ran += 1;
                c.detail("lk2_order3", json!(v));
            }
            ClosureVerdict::Skipped { reason } => c.skip(reason.clone()),
            other => {
                c.ran += 1;
                c.fail(json!({ "class": "Lk(2)", "n": 3, "expected": "not closed", "verdict": other }));
            }
        }
    }
    Ok(())
}

/// An engine for checks whose orders exceed the shared engine's caps.
fn dedicated(base: &Config, enum_cap: usize, use_generators: bool, strategy: Strategy) -> Engine {
    Engine::new(Config { enum_cap, use_generators, strategy, ..base.clone() })
}

fn count_l2(c: &mut Ctx) -> Result<()> {
    let max = c.cap(12);
    let filter_max = c.cap(8);
    c.param("max_n", json!(max));
    c.param("filter_max_n", json!(filter_max));
    let generated = dedicated(c.engine().config(), max, true, Strategy::Extend);
    let filtered = dedicated(c.engine().config(), filter_max, false, Strategy::FilterAll);
    let l2 = ClassExpr::Lk(2);
    let counts = generated.count(&l2, max)?;
    for n in 2..=max {
        c.ran += 1;
        if counts[n - 1] != n {
            c.fail(json!({ "n": n, "count": counts[n - 1], "expected": n }));
        }
    }
    let brute = filtered.count(&l2, filter_max)?;
    for n in 1..=filter_max {
        c.ran += 1;
        if brute[n - 1] != counts[n - 1] {
            c.fail(json!({ "n": n, "generator": counts[n - 1], "filter": brute[n - 1] }));
        }
    }
    c.detail("counts", json!(counts));
    Ok(())
}

fn count_f2(c: &mut Ctx) -> Result<()> {
    let max = c.cap(20);
    let brute_max = c.cap(12);
    c.param("max_n", json!(max));
    c.param("brute_max_n", json!(brute_max));
    let mut expected = vec![1usize, 2];
    while expected.len() < max {
        let k = expected.len();
        expected.push(expected[k - 1] + expected[k - 2]);
    }
    expected.truncate(max);
    let generated = dedicated(c.engine().config(), max, true, Strategy::Extend);
    let brute = dedicated(c.engine().config(), brute_max, false, Strategy::Extend);
    let counts = generated.count(&ClassExpr::F2, max)?;
    let brute_counts = brute.count(&ClassExpr::F2, brute_max)?;
    for n in 1..=max {
        c.ran += 1;
        if counts[n - 1] != expected[n - 1] {
            c.fail(json!({ "n": n, "count": counts[n - 1], "expected": expected[n - 1] }));
        }
        if n <= brute_max && brute_counts[n - 1] != counts[n - 1] {
            c.fail(json!({ "n": n, "generator": counts[n - 1], "brute": brute_counts[n - 1] }));
        }
    }
    c.detail("counts", json!(counts));
    Ok(())
}

fn thm52(c: &mut Ctx, alpha: &str, beta_len: usize, gamma: &str, class: &str, default_max: usize) -> Result<()> {
    let max = c.cap(default_max);
    let (alpha, gamma) = (perm(alpha), perm(gamma));
    c.param("alpha", json!(alpha));
    c.param("beta_len", json!(beta_len));
    c.param("gamma", json!(gamma));
    c.param("class", json!(class));
    c.param("max_n", json!(max));
    let members = c.over_slices(&e(class), 0..=max, |engine, p| {
        decomposition_failure(p, decompose::decompose_thm52(engine, p, &alpha, beta_len, &gamma))
    })?;
    c.detail("decomposed", json!(members));
    Ok(())
}

fn basis_h_size3(c: &mut Ctx) -> Result<()> {
    c.param("class", json!("Hk(2)"));
    c.param("max_len", json!(6));
    if !c.allows(6) {
        return Ok(());
    }
    let basis = c.engine().basis_up_to(&ClassExpr::Hk(2), 6)?;
    c.ran += 1;
    let required = [perm("321"), perm("2413")];
    if basis.len() != 3 || !required.iter().all(|r| basis.contains(r)) {
        c.fail(json!({ "basis": basis }));
    }
    c.detail("basis", json!(basis));
    Ok(())
}

fn lemma_blocks(c: &mut Ctx) -> Result<()> {
    let max = c.cap(6);
    c.param("max_n", json!(max));
    for n in 1..=max {
        let all: Vec<Perm> = Perm::all(n).collect();
        let blocks: Vec<usize> = all.iter().map(|p| structure::min_blocks(p).0).collect();
        let bad: Vec<Value> = c.h.install(|| {
            (0..all.len())
                .into_par_iter()
                .flat_map_iter(|i| {
                    let (all, blocks) = (&all, &blocks);
                    (0..all.len()).filter_map(move |j| {
                        let product = all[i].compose(&all[j]).expect("equal orders");
                        let got = structure::min_blocks(&product).0;
                        (got > blocks[i] * blocks[j])
                            .then(|| json!({ "p": all[i], "q": all[j], "product_blocks": got }))
                    })
                })
                .collect()
        });
        c.ran += 1;
        for b in bad {
            c.fail(b);
        }
    }
    Ok(())
}

fn close_n_sigma(c: &mut Ctx) -> Result<()> {
    let max = c.cap(8);
    c.param("thresholds", json!([2, 3]));
    c.param("max_n", json!(max));
    for t in [2usize, 3] {
        c.over_slices(&ClassExpr::Layered, 0..=max, |_, p| {
            let normalised = normalize(p, t);
            match normalised {
                Ok(q) if structure::is_close(p, &q, t, 0).unwrap_or(false) => None,
                Ok(q) => Some(json!({ "perm": p, "threshold": t, "normalised": q })),
                Err(err) => Some(json!({ "perm": p, "threshold": t, "error": err.to_string() })),
            }
        })?;
    }
    Ok(())
}

fn normalize(p: &Perm, t: usize) -> Result<Perm> {
    structure::normalize_short_layers(p, t)
}

fn thm_l_gamma_far(c: &mut Ctx) -> Result<()> {
    let target = structure::LayerShape(vec![4, 4]).realize();
    let gamma = structure::gamma_pattern(1);
    c.param("target", json!(target));
    c.param("class", json!(ClassExpr::av([gamma.clone()])));
    c.param("c", json!(1));
    c.param("l", json!(1));
    if !c.allows(8) {
        return Ok(());
    }
    let far = dedicated(c.engine().config(), 8, true, Strategy::Extend);
    let slice = far.enumerate(&ClassExpr::av([gamma]), 8)?;
    let close: Vec<Value> = c.h.install(|| {
        slice
            .members
            .par_iter()
            .filter(|q| structure::is_close(&target, q, 1, 1).unwrap_or(false))
            .map(|q| json!({ "close_member": q }))
            .collect()
    });
    c.ran += 1;
    for x in close {
        c.fail(x);
    }
    c.detail("scanned", json!(slice.len()));
    Ok(())
}

fn prop_vh_blockbound(c: &mut Ctx) -> Result<()> {
    let max = c.cap(8);
    let etas = [perm("14253"), perm("132")];
    c.param("etas", json!(etas));
    c.param("max_n", json!(max));
    for eta in etas {
        if !structure::is_alternating(&eta) || eta.inverse().ascending_runs() > 2 {
            return Err(Error::ContractViolation(format!("{eta} is not an alternating member of H_2")));
        }
        let bound = eta.len() + 1;
        let class = ClassExpr::and([ClassExpr::av([eta.clone()]), ClassExpr::Hk(2)]);
        c.over_slices(&class, 0..=max, |_, p| {
            let blocks = structure::min_blocks(p).0;
            (blocks > bound).then(|| json!({ "eta": eta, "perm": p, "blocks": blocks, "bound": bound }))
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_matches_manifest() {
        assert_eq!(MANIFEST.len(), 24);
        for name in MANIFEST {
            assert!(is_registered(name), "{name} missing from the registry");
        }
        let mut sorted = MANIFEST.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), MANIFEST.len());
        assert!(!is_registered("bogus"));
    }

    #[test]
    fn unknown_names_are_rejected() {
        let h = Harness::new(Config::default(), 1).unwrap();
        assert_eq!(h.run_suite(&["bogus"], None), Err(Error::UnknownCheck("bogus".into())));
    }

    #[test]
    fn small_caps_clamp_and_skip() {
        let h = Harness::new(Config::default(), 2).unwrap();
        let r = h.run_suite(&["count-L2", "basis-H-size3"], Some(5)).unwrap();
        assert_eq!(r[0].status, CheckStatus::Pass);
        assert_eq!(r[0].details["counts"], json!([1, 2, 3, 4, 5]));
        assert_eq!(r[1].status, CheckStatus::Skipped);
    }

    #[test]
    fn runs_a_quick_check() {
        let h = Harness::new(Config::default(), 2).unwrap();
        let r = h.run_suite(&["thm-Ik-VkHk"], Some(5)).unwrap();
        assert_eq!(r[0].status, CheckStatus::Pass, "{:?}", r[0]);
        assert_eq!(r[0].details["strictness"][0]["strict_at"], json!(4));
    }
}
