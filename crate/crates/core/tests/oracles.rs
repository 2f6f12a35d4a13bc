//! Exhaustive comparisons against independent brute-force oracles.

use std::collections::BTreeSet;

use permclass::decompose;
use permclass::structure::{self, LayerShape};
use permclass::{ClassExpr, Config, Engine, Perm, Strategy};

fn p(s: &str) -> Perm {
    s.parse().unwrap()
}

fn e(s: &str) -> ClassExpr {
    s.parse().unwrap()
}

fn from_values(values: &[usize]) -> Perm {
    Perm::from_one_based(values).unwrap()
}

/// Order-isomorphic pattern of the one-based values at `positions`.
fn pattern(q: &Perm, positions: &[usize]) -> Perm {
    let seq: Vec<usize> = positions.iter().map(|&i| q.at(i)).collect();
    Perm::standardize(&seq)
}

/// Every `k`-subset of `1..=n`, lexicographically.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 1, &mut Vec::new(), &mut out);
    out
}

fn brute_engine() -> Engine {
    Engine::new(Config { use_generators: false, strategy: Strategy::FilterAll, ..Config::default() })
}

/// Members of `S_n` accepted by `pred`.
fn filter(n: usize, pred: impl Fn(&Perm) -> bool) -> Vec<Perm> {
    Perm::all(n).filter(|q| pred(q)).collect()
}

/// Length of a longest subsequence whose consecutive entries satisfy `rel`.
fn longest(q: &Perm, rel: impl Fn(usize, usize) -> bool) -> usize {
    let v = q.to_vec();
    let mut best = vec![1; v.len()];
    for j in 0..v.len() {
        for i in 0..j {
            if rel(v[i], v[j]) {
                best[j] = best[j].max(best[i] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// Fewest increasing subsequences covering `q`, by dynamic programming over
/// position subsets.
fn min_increasing_cover(q: &Perm) -> usize {
    let n = q.len();
    let full = (1usize << n) - 1;
    let increasing = |mask: usize| {
        let vals: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| q.at(i + 1)).collect();
        vals.windows(2).all(|w| w[0] < w[1])
    };
    let ok: Vec<bool> = (0..=full).map(increasing).collect();
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let mut sub = mask;
        while sub > 0 {
            if sub & low != 0 && ok[sub] && best[mask ^ sub] != usize::MAX {
                best[mask] = best[mask].min(best[mask ^ sub] + 1);
            }
            sub = (sub - 1) & mask;
        }
    }
    best[full]
}

#[test]
fn containment_finds_the_first_occurrence() {
    let patterns: Vec<Perm> = (1..=4).flat_map(Perm::all).collect();
    for n in 0..=6 {
        for host in Perm::all(n) {
            for pat in &patterns {
                let first = subsets(n, pat.len()).into_iter().find(|s| pattern(&host, s) == *pat);
                assert_eq!(host.contains(pat).map(|o| o.positions), first, "{host} / {pat}");
            }
        }
    }
}

#[test]
fn containment_is_transitive() {
    let all4: Vec<Perm> = Perm::all(4).collect();
    let all3: Vec<Perm> = Perm::all(3).collect();
    for h in Perm::all(5) {
        for mid in all4.iter().filter(|m| h.contains(m).is_some()) {
            for q in all3.iter().filter(|q| mid.contains(q).is_some()) {
                assert!(h.contains(q).is_some(), "{q} <= {mid} <= {h}");
            }
        }
    }
}

#[test]
fn chain_statistics_match_oracles() {
    for n in 0..=7 {
        for q in Perm::all(n) {
            let lis = longest(&q, |a, b| a < b);
            let lds = longest(&q, |a, b| a > b);
            assert_eq!(q.lis(), lis, "{q}");
            assert_eq!(q.lds(), lds, "{q}");
            assert_eq!(min_increasing_cover(&q), lds, "{q}");
            let chains = q.increasing_chains();
            assert_eq!(chains.len(), lds, "{q}");
            let mut covered: Vec<usize> = chains.iter().flatten().copied().collect();
            covered.sort();
            assert_eq!(covered, (1..=n).collect::<Vec<_>>());
            for c in &chains {
                assert!(c.windows(2).all(|w| w[0] < w[1] && q.at(w[0]) < q.at(w[1])));
            }
        }
    }
}

#[test]
fn group_laws() {
    for n in 0..=5 {
        let all: Vec<Perm> = Perm::all(n).collect();
        for a in &all {
            for b in &all {
                let ab = a.compose(b).unwrap();
                for c in &all {
                    assert_eq!(ab.compose(c).unwrap(), a.compose(&b.compose(c).unwrap()).unwrap());
                }
            }
        }
    }
    for n in 0..=6 {
        let id = Perm::identity(n);
        let d = Perm::decreasing(n);
        for q in Perm::all(n) {
            assert_eq!(q.compose(&id).unwrap(), q);
            assert_eq!(q.compose(&q.inverse()).unwrap(), id);
            assert_eq!(q.inverse().compose(&q).unwrap(), id);
            assert_eq!(q.reverse(), q.compose(&d).unwrap());
            assert_eq!(q.complement(), d.compose(&q).unwrap());
            assert_eq!(q.reverse().reverse(), q);
            assert_eq!(q.complement().complement(), q);
            assert_eq!(q.inverse().inverse(), q);
            for i in 1..=n {
                assert_eq!(q.inverse().at(q.at(i)), i);
            }
        }
    }
}

#[test]
fn atom_membership_matches_definitions() {
    let engine = Engine::default();
    for n in 0..=7 {
        for q in Perm::all(n) {
            let lds = longest(&q, |a, b| a > b);
            let lis = longest(&q, |a, b| a < b);
            for k in 0..=3 {
                assert_eq!(engine.member(&ClassExpr::Ik(k), &q).unwrap(), lds <= k);
                assert_eq!(engine.member(&ClassExpr::Dk(k), &q).unwrap(), lis <= k);
            }
            let descents = q.to_vec().windows(2).filter(|w| w[0] > w[1]).count();
            let inv_descents = q.inverse().to_vec().windows(2).filter(|w| w[0] > w[1]).count();
            for k in 1..=3 {
                assert_eq!(engine.member(&ClassExpr::Vk(k), &q).unwrap(), n == 0 || descents < k);
                assert_eq!(engine.member(&ClassExpr::Hk(k), &q).unwrap(), n == 0 || inv_descents < k);
            }
        }
    }
}

#[test]
fn layered_classes_match_shape_oracle() {
    let engine = Engine::default();
    for n in 0..=8 {
        // Every composition of n, realised directly.
        let mut shapes: Vec<Vec<usize>> = Vec::new();
        for mask in 0..(1usize << (n as usize).saturating_sub(1)) {
            if n == 0 {
                shapes.push(vec![]);
                break;
            }
            let mut shape = vec![1];
            for i in 0..n - 1 {
                if mask & (1 << i) != 0 {
                    shape.push(1);
                } else {
                    *shape.last_mut().unwrap() += 1;
                }
            }
            shapes.push(shape);
        }
        let realise = |shape: &[usize]| {
            let mut values = Vec::new();
            let mut base = 0;
            for &l in shape {
                values.extend((1..=l).rev().map(|v| base + v));
                base += l;
            }
            from_values(&values)
        };
        let layered: BTreeSet<Perm> = shapes.iter().map(|s| realise(s)).collect();
        let with = |keep: &dyn Fn(&[usize]) -> bool| -> Vec<Perm> {
            let set: BTreeSet<Perm> = shapes.iter().filter(|s| keep(s)).map(|s| realise(s)).collect();
            set.into_iter().collect()
        };
        assert_eq!(engine.enumerate(&ClassExpr::Layered, n).unwrap().members, with(&|_| true));
        for k in 1..=4 {
            assert_eq!(engine.enumerate(&ClassExpr::Lk(k), n).unwrap().members, with(&|s| s.len() <= k));
        }
        assert_eq!(engine.enumerate(&ClassExpr::F2, n).unwrap().members, with(&|s| s.iter().all(|&l| l <= 2)));
        for q in Perm::all(n) {
            assert_eq!(structure::layers(&q).is_some(), layered.contains(&q));
            assert_eq!(structure::colayers(&q).is_some(), layered.contains(&q.complement()));
            if let Some(shape) = structure::layers(&q) {
                assert_eq!(realise(&shape.0), q);
                assert_eq!(LayerShape(shape.0.clone()).realize(), q);
            }
        }
    }
}

#[test]
fn generators_match_filtering() {
    let fast = Engine::default();
    let slow = brute_engine();
    let corpus = ["I", "D", "L", "Lk(2)", "Lk(3)", "F2", "Vk(2)", "Vk(3)", "Hk(2)", "Hk(3)", "All"];
    for text in corpus {
        for n in 0..=6 {
            let expr = e(text);
            assert_eq!(fast.enumerate(&expr, n).unwrap(), slow.enumerate(&expr, n).unwrap(), "{text} n={n}");
        }
    }
}

#[test]
fn hk2_is_the_avoider_of_its_basis() {
    let engine = Engine::default();
    let basis = engine.basis_up_to(&ClassExpr::Hk(2), 6).unwrap();
    assert_eq!(basis, [p("321"), p("2143"), p("2413")]);
    for n in 0..=7 {
        let avoiders = filter(n, |q| basis.iter().all(|b| q.contains(b).is_none()));
        assert_eq!(engine.enumerate(&ClassExpr::Hk(2), n).unwrap().members, avoiders);
    }
}

#[test]
fn bases_are_minimal_non_members() {
    let engine = Engine::default();
    for (text, max, expected) in [
        ("Ik(2)", 4, vec![p("321")]),
        ("D", 3, vec![p("12")]),
        ("Av(231,4123)", 5, vec![p("231"), p("4123")]),
        ("Lk(2)", 5, vec![p("123"), p("231"), p("312")]),
    ] {
        let expr = e(text);
        let mut got = engine.basis_up_to(&expr, max).unwrap();
        // Oracle: non-members all of whose one-point deletions are members.
        let mut brute = Vec::new();
        for n in 1..=max {
            for q in Perm::all(n) {
                if !engine.member(&expr, &q).unwrap()
                    && (0..n).all(|i| engine.member(&expr, &q.delete_positions(&[i])).unwrap())
                {
                    brute.push(q);
                }
            }
        }
        assert_eq!(got, brute, "{text}");
        got.sort();
        let mut expected = expected;
        expected.sort();
        assert_eq!(got, expected, "{text}");
    }
}

fn corpus() -> Vec<ClassExpr> {
    [
        "I",
        "Ik(2)",
        "Av(231)",
        "Lk(2)",
        "merge(I,D)",
        "Vk(2)",
        "comp(Lk(2),Lk(2))",
        "comp(I,Hk(2))",
        "or(Lk(2),rev(Lk(2)))",
        "and(Av(123),Hk(2))",
        "V(D,I)",
        "H(Av(21),D)",
        "inv(V(I,Av(12)))",
        "cpl(Av(132))",
    ]
    .iter()
    .map(|t| e(t))
    .collect()
}

#[test]
fn slices_are_downward_closed() {
    let engine = Engine::default();
    for expr in corpus() {
        for n in 1..=6 {
            let here = engine.enumerate(&expr, n).unwrap();
            let below = engine.enumerate(&expr, n - 1).unwrap();
            for q in here.iter() {
                for i in 0..n {
                    assert!(below.contains(&q.delete_positions(&[i])), "{expr}: {q}");
                }
            }
        }
    }
}

#[test]
fn slices_match_membership_on_all_permutations() {
    let engine = Engine::default();
    let brute = brute_engine();
    for expr in corpus() {
        for n in 0..=6 {
            let slice = engine.enumerate(&expr, n).unwrap();
            let filtered = filter(n, |q| brute.member(&expr, q).unwrap());
            assert_eq!(slice.members, filtered, "{expr} n={n}");
        }
    }
}

#[test]
fn composition_matches_pairwise_products() {
    let engine = Engine::default();
    let factors = ["I", "D", "Lk(2)", "Av(231)", "Vk(2)", "merge(I,D)"];
    for a in factors {
        for b in factors {
            let expr = ClassExpr::comp([e(a), e(b)]);
            for n in 0..=5 {
                let left = filter(n, |q| engine.member(&e(a), q).unwrap());
                let right = filter(n, |q| engine.member(&e(b), q).unwrap());
                let products: BTreeSet<Perm> =
                    left.iter().flat_map(|x| right.iter().map(move |y| x.compose(y).unwrap())).collect();
                let products: Vec<Perm> = products.into_iter().collect();
                assert_eq!(engine.enumerate(&expr, n).unwrap().members, products, "{expr} n={n}");
                let fresh = Engine::default();
                for q in Perm::all(n) {
                    assert_eq!(fresh.member(&expr, &q).unwrap(), products.binary_search(&q).is_ok());
                }
            }
        }
    }
    assert_eq!(
        engine.enumerate(&e("comp(Lk(2),Lk(2))"), 3).unwrap().members,
        [p("123"), p("231"), p("312")]
    );
}

#[test]
fn merges_and_splits_match_brute_force() {
    let engine = Engine::default();
    let pairs = [("I", "D"), ("Av(231)", "I"), ("Lk(2)", "D"), ("I", "I")];
    for (a, b) in pairs {
        let (ea, eb) = (e(a), e(b));
        for n in 0..=6 {
            for q in Perm::all(n) {
                let member = |x: &ClassExpr, part: &[usize]| engine.member(x, &pattern(&q, part)).unwrap();
                let positions: Vec<usize> = (1..=n).collect();
                let merged = (0..1usize << n).any(|mask| {
                    let (red, blue): (Vec<usize>, Vec<usize>) =
                        positions.iter().partition(|&&i| mask & (1 << (i - 1)) != 0);
                    member(&ea, &red) && member(&eb, &blue)
                });
                let vertical = (0..=n).any(|c| member(&ea, &positions[..c]) && member(&eb, &positions[c..]));
                let horizontal = (0..=n).any(|t| {
                    let low: Vec<usize> = positions.iter().copied().filter(|&i| q.at(i) <= t).collect();
                    let high: Vec<usize> = positions.iter().copied().filter(|&i| q.at(i) > t).collect();
                    member(&ea, &low) && member(&eb, &high)
                });
                let m = ClassExpr::merge([ea.clone(), eb.clone()]);
                let v = ClassExpr::vertical([ea.clone(), eb.clone()]);
                let h = ClassExpr::horizontal([ea.clone(), eb.clone()]);
                assert_eq!(engine.member(&m, &q).unwrap(), merged, "{m} {q}");
                assert_eq!(engine.member(&v, &q).unwrap(), vertical, "{v} {q}");
                assert_eq!(engine.member(&h, &q).unwrap(), horizontal, "{h} {q}");
            }
        }
    }
}

#[test]
fn merge_split_with_increasing_parts_is_lds() {
    let engine = Engine::default();
    for k in 1..=3 {
        let parts = vec![ClassExpr::Inc; k];
        for n in 0..=7 {
            for q in Perm::all(n) {
                let split = structure::merge_split(&engine, &q, &parts).unwrap();
                assert_eq!(split.is_some(), q.lds() <= k, "{q}");
                if let Some(c) = split {
                    for part in 1..=k {
                        assert!(pattern(&q, &c.part(part)).is_identity());
                    }
                }
            }
        }
    }
}

#[test]
fn slice_level_laws() {
    let engine = Engine::default();
    let samples = ["Lk(2)", "Av(231)", "Vk(2)"];
    let d = ClassExpr::Dec;
    for a in samples {
        for b in samples {
            let (a, b) = (e(a), e(b));
            for n in 0..=5 {
                let slice = |x: ClassExpr| engine.enumerate(&x, n).unwrap().members.clone();
                let c = e("Hk(2)");
                assert_eq!(
                    slice(ClassExpr::comp([ClassExpr::comp([a.clone(), b.clone()]), c.clone()])),
                    slice(ClassExpr::comp([a.clone(), ClassExpr::comp([b.clone(), c])]))
                );
                assert_eq!(
                    slice(ClassExpr::comp([a.clone(), b.clone()]).inv()),
                    slice(ClassExpr::comp([b.clone().inv(), a.clone().inv()]))
                );
                assert_eq!(slice(a.clone().rev()), slice(ClassExpr::comp([a.clone(), d.clone()])));
                assert_eq!(slice(a.clone().cpl()), slice(ClassExpr::comp([d.clone(), a.clone()])));
            }
        }
    }
}

#[test]
fn composition_bounds_on_increasing_covers() {
    let engine = Engine::default();
    for k in 2..=3 {
        for l in 2..=3 {
            for n in 0..=6 {
                let prod = engine.enumerate(&ClassExpr::comp([ClassExpr::Ik(k), ClassExpr::Ik(l)]), n).unwrap();
                assert!(prod.iter().all(|q| q.lds() <= k * l));
                let lower = engine.enumerate(&ClassExpr::Ik(k + l - 1), n).unwrap();
                assert!(lower.iter().all(|q| prod.contains(q)));
            }
        }
    }
    for n in 0..=6 {
        let prod = engine.enumerate(&e("comp(merge(Ik(1),Dk(1)),merge(Ik(1),Dk(1)))"), n).unwrap();
        let target = e("merge(Ik(2),Dk(2))");
        assert!(prod.iter().all(|q| engine.member(&target, q).unwrap()));
    }
}

#[test]
fn counts_match_known_sequences() {
    let engine = Engine::default();
    let catalan = [1, 2, 5, 14, 42, 132, 429, 1430];
    assert_eq!(engine.count(&e("Av(231)"), 8).unwrap(), catalan);
    assert_eq!(engine.count(&ClassExpr::Ik(2), 8).unwrap(), catalan);
    assert_eq!(engine.count(&ClassExpr::Layered, 10).unwrap(), (0..10).map(|i| 1 << i).collect::<Vec<usize>>());
    // Permutations with at most two ascending runs: 2^n − n.
    assert_eq!(engine.count(&ClassExpr::Vk(2), 9).unwrap(), (1..=9).map(|n| (1 << n) - n).collect::<Vec<usize>>());
    assert_eq!(engine.count(&ClassExpr::Dec, 4).unwrap(), [1, 1, 1, 1]);
    assert_eq!(engine.count(&ClassExpr::F2, 5).unwrap(), [1, 2, 3, 5, 8]);
    assert_eq!(engine.count(&ClassExpr::Lk(2), 6).unwrap(), [1, 2, 3, 4, 5, 6]);
}

#[test]
fn decompositions_are_total_on_small_slices() {
    let engine = Engine::default();
    for k in 2..=3 {
        for n in 0..=7 {
            for q in engine.enumerate(&ClassExpr::Ik(k), n).unwrap().iter() {
                let f = decompose::decompose_vk_hk(&engine, q, k).unwrap();
                assert_eq!(f.product().unwrap(), *q);
            }
        }
    }
    for (k, l) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        for n in 0..=7 {
            for q in engine.enumerate(&ClassExpr::Ik(k + l - 1), n).unwrap().iter() {
                let f = decompose::decompose_ik_il(&engine, q, k, l).unwrap();
                assert!(f.factors[0].perm.lds() <= k && f.factors[1].perm.lds() <= l);
            }
        }
    }
    for k in 4..=6 {
        for n in 0..=10 {
            for q in engine.enumerate(&ClassExpr::Lk(k), n).unwrap().iter() {
                decompose::decompose_l4(&engine, q, k).unwrap();
            }
        }
    }
    for (alpha, beta, gamma, class, max) in
        [("1", 1, "1", "Av(123)", 7), ("21", 1, "21", "Av(21354)", 6), ("1", 2, "1", "Av(1324)", 7)]
    {
        for n in 0..=max {
            for q in engine.enumerate(&e(class), n).unwrap().iter() {
                decompose::decompose_thm52(&engine, q, &p(alpha), beta, &p(gamma)).unwrap();
            }
        }
    }
}

#[test]
fn jv_split_guarantee_holds() {
    for (alpha, beta, gamma) in [("1", "1", "1"), ("21", "1", "21"), ("1", "21", "1")] {
        let (alpha, beta, gamma) = (p(alpha), p(beta), p(gamma));
        let whole = alpha.direct_sum(&beta).direct_sum(&gamma);
        for n in 0..=7 {
            for q in filter(n, |q| q.contains(&whole).is_none()) {
                let split = structure::jv_split(&q, &alpha, &beta, &gamma).unwrap();
                let pos = |v: usize| q.inverse().at(v);
                let a = Perm::standardize(&split.a);
                let c = Perm::standardize(&split.c);
                assert!(a.contains(&alpha.direct_sum(&beta)).is_none());
                assert!(c.contains(&beta.direct_sum(&gamma)).is_none());
                assert_eq!(split.a.len() + split.c.len(), n);
                for &x in &split.a {
                    for &y in &split.c {
                        assert!(pos(x) < pos(y) || x < y, "{q}: a {x}, c {y}");
                    }
                }
            }
        }
    }
}

#[test]
fn deletion_distance_matches_brute_force() {
    let engine = Engine::default();
    for text in ["Av(21)", "Lk(2)", "or(Lk(2),rev(Lk(2)))"] {
        let expr = e(text);
        for n in 0..=6 {
            for q in Perm::all(n) {
                let brute = (0..=3.min(n)).find(|&d| {
                    subsets(n, d).iter().any(|s| {
                        let zero: Vec<usize> = s.iter().map(|i| i - 1).collect();
                        engine.member(&expr, &q.delete_positions(&zero)).unwrap()
                    })
                });
                assert_eq!(structure::deletion_distance_to(&engine, &q, &expr, 3).unwrap(), brute, "{text} {q}");
            }
        }
    }
}

#[test]
fn block_bounds() {
    for n in 0..=6 {
        let all: Vec<Perm> = Perm::all(n).collect();
        let blocks: Vec<usize> = all.iter().map(|q| structure::min_blocks(q).0).collect();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                assert!(structure::min_blocks(&a.compose(b).unwrap()).0 <= blocks[i] * blocks[j]);
            }
        }
    }
    let engine = Engine::default();
    for eta in [p("132"), p("14253")] {
        let class = ClassExpr::and([ClassExpr::av([eta.clone()]), ClassExpr::Hk(2)]);
        for n in 0..=8 {
            for q in engine.enumerate(&class, n).unwrap().iter() {
                assert!(structure::min_blocks(q).0 <= eta.len() + 1, "{eta}: {q}");
            }
        }
    }
}

#[test]
fn short_layers_normalise_close() {
    let engine = Engine::default();
    for n in 0..=8 {
        for q in engine.enumerate(&ClassExpr::Layered, n).unwrap().iter() {
            for t in 1..=4 {
                let normal = structure::normalize_short_layers(q, t).unwrap();
                assert!(structure::is_close(q, &normal, t, 0).unwrap());
                assert!(structure::layers(q).unwrap().0.iter().all(|&l| l <= t) == normal.is_identity());
            }
        }
    }
}

#[test]
fn gamma_target_is_far_from_avoiders() {
    let target = LayerShape(vec![4, 4]).realize();
    assert_eq!(target, p("43218765"));
    let gamma = structure::gamma_pattern(1);
    let close: Vec<Perm> =
        filter(8, |q| structure::is_close(&target, q, 1, 1).unwrap() && q.contains(&gamma).is_none());
    assert!(close.is_empty(), "{close:?}");
}
