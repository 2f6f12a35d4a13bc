//! Constructive factorizations of permutations into members of smaller
//! classes. Every factorization is verified before it is returned.

use serde::{Deserialize, Serialize};

use crate::class::Engine;
use crate::error::{Error, Result};
use crate::expr::ClassExpr;
use crate::perm::Perm;
use crate::structure;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub perm: Perm,
    pub class: ClassExpr,
}

/// `target = factors[0] ∘ factors[1] ∘ …`, each factor a member of its class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub target: Perm,
    pub factors: Vec<Factor>,
}

impl Factorization {
    fn new(target: &Perm, factors: impl IntoIterator<Item = (Perm, ClassExpr)>) -> Self {
        Factorization {
            target: target.clone(),
            factors: factors.into_iter().map(|(perm, class)| Factor { perm, class }).collect(),
        }
    }

    /// Left-to-right composition of the factors; the identity of the
    /// target's order when there are none.
    pub fn product(&self) -> Result<Perm> {
        let mut acc = Perm::identity(self.target.len());
        for f in &self.factors {
            acc = acc.compose(&f.perm)?;
        }
        Ok(acc)
    }

    /// Checks recomposition and every factor's membership.
    pub fn verify(&self, engine: &Engine) -> Result<()> {
        let product = self.product()?;
        if product != self.target {
            return Err(Error::ContractViolation(format!(
                "factors of {} recompose to {product}",
                self.target
            )));
        }
        for f in &self.factors {
            if !engine.member(&f.class, &f.perm)? {
                return Err(Error::ContractViolation(format!(
                    "factor {} of {} is not in {}",
                    f.perm, self.target, f.class
                )));
            }
        }
        Ok(())
    }

    fn verified(self, engine: &Engine) -> Result<Self> {
        self.verify(engine)?;
        Ok(self)
    }
}

/// `p = ν ∘ η` with `ν ∈ V_k`, `η ∈ H_k`.
///
/// `ν` lists the values of the canonical increasing chains of `p` chain by
/// chain.
pub fn decompose_vk_hk(engine: &Engine, p: &Perm, k: usize) -> Result<Factorization> {
    if p.lds() > k {
        return Err(Error::Precondition(format!("{p} has lds {} > {k}", p.lds())));
    }
    let values: Vec<u8> = p
        .chain_positions()
        .iter()
        .flatten()
        .map(|&i| p.as_zero_based()[i])
        .collect();
    let nu = Perm::from_zero_based(values);
    let eta = nu.inverse().compose(p)?;
    Factorization::new(p, [(nu, ClassExpr::Vk(k)), (eta, ClassExpr::Hk(k))]).verified(engine)
}

/// `p = σ ∘ τ` with `σ ∈ I_k`, `τ ∈ I_l`, for `lds(p) ≤ k + l − 1`.
///
/// `σ` keeps the first `k` canonical chains of `p` in place and merges the
/// sorted remaining values into the `k`-th chain.
pub fn decompose_ik_il(engine: &Engine, p: &Perm, k: usize, l: usize) -> Result<Factorization> {
    if k == 0 || l == 0 {
        return Err(Error::Precondition("k and l must be positive".into()));
    }
    if p.lds() > k + l - 1 {
        return Err(Error::Precondition(format!("{p} has lds {} > {}", p.lds(), k + l - 1)));
    }
    let v = p.as_zero_based();
    let chains = p.chain_positions();
    let mut in_a = vec![false; v.len()];
    let mut in_last = vec![false; v.len()];
    for (ci, chain) in chains.iter().enumerate().take(k) {
        for &i in chain {
            in_a[i] = true;
            in_last[i] = ci == k - 1;
        }
    }
    let mut rest: Vec<u8> = (0..v.len()).filter(|&i| !in_a[i]).map(|i| v[i]).collect();
    rest.sort_unstable();

    let mut sigma = Vec::with_capacity(v.len());
    let mut pending = rest.into_iter().peekable();
    for i in (0..v.len()).filter(|&i| in_a[i]) {
        if in_last[i] {
            while let Some(x) = pending.next_if(|&x| x < v[i]) {
                sigma.push(x);
            }
        }
        sigma.push(v[i]);
    }
    sigma.extend(pending);
    let sigma = Perm::from_zero_based(sigma);
    let tau = sigma.inverse().compose(p)?;
    Factorization::new(p, [(sigma, ClassExpr::Ik(k)), (tau, ClassExpr::Ik(l))]).verified(engine)
}

/// `p = α ∘ β ∘ γ` with `α, γ ∈ L_{k−1}` and `β ∈ L_{k−2}`, for `p ∈ L_k`,
/// `k ≥ 4`.
pub fn decompose_l4(engine: &Engine, p: &Perm, k: usize) -> Result<Factorization> {
    if k < 4 {
        return Err(Error::Precondition(format!("k must be at least 4, got {k}")));
    }
    let shape = structure::layers(p).ok_or_else(|| Error::Precondition(format!("{p} is not layered")))?;
    if shape.0.len() > k {
        return Err(Error::Precondition(format!("{p} has {} layers, more than {k}", shape.0.len())));
    }
    let classes = [ClassExpr::Lk(k - 1), ClassExpr::Lk(k - 2), ClassExpr::Lk(k - 1)];
    let perms = if shape.0.len() < k {
        let d = Perm::decreasing(p.len());
        [p.clone(), d.clone(), d]
    } else {
        let (a, b, c, d) = (shape.0[0], shape.0[1], shape.0[2], shape.0[3]);
        let tail = structure::LayerShape(shape.0[4..].to_vec());
        let build = |lens: &[usize]| {
            let mut all = lens.to_vec();
            all.extend(&tail.0);
            structure::LayerShape(all).realize()
        };
        [build(&[a + b, c, d]), build(&[a + b, c + d]), build(&[a, b, c + d])]
    };
    Factorization::new(p, perms.into_iter().zip(classes)).verified(engine)
}

/// The class of the first factor produced by [`decompose_thm52`].
pub fn thm52_first_class(alpha: &Perm, beta_len: usize, gamma: &Perm) -> ClassExpr {
    let beta = Perm::decreasing(beta_len);
    let left = ClassExpr::av([alpha.direct_sum(&beta)]);
    let right = ClassExpr::av([beta.direct_sum(gamma)]);
    let split = ClassExpr::vertical([left, right]);
    if beta_len == 1 {
        split
    } else {
        ClassExpr::and([split, ClassExpr::av([alpha.direct_sum(&beta).direct_sum(gamma)])])
    }
}

/// `p = ν ∘ η` with `η ∈ H_2` and `ν` the concatenation of the two halves
/// found by [`structure::jv_split`], for `p` avoiding `α ⊕ δ_β ⊕ γ`.
pub fn decompose_thm52(
    engine: &Engine,
    p: &Perm,
    alpha: &Perm,
    beta_len: usize,
    gamma: &Perm,
) -> Result<Factorization> {
    if beta_len == 0 {
        return Err(Error::Precondition("beta length must be positive".into()));
    }
    let split = structure::jv_split(p, alpha, &Perm::decreasing(beta_len), gamma)?;
    let values: Vec<usize> = split.a.iter().chain(&split.c).copied().collect();
    let nu = Perm::from_one_based(&values)?;
    let eta = nu.inverse().compose(p)?;
    Factorization::new(p, [(nu, thm52_first_class(alpha, beta_len, gamma)), (eta, ClassExpr::Hk(2))])
        .verified(engine)
}

/// From `p = σ_1 ∘ … ∘ σ_k` builds
/// `p^r = σ_1^r ∘ δ ∘ σ_2^r ∘ δ ∘ … ∘ σ_k^r`.
pub fn rewrite_reverse_factorization(engine: &Engine, f: &Factorization) -> Result<Factorization> {
    rewrite_symmetric(engine, f, Perm::reverse, ClassExpr::rev, f.target.reverse())
}

/// From `p = σ_1 ∘ … ∘ σ_k` builds
/// `p^c = σ_1^c ∘ δ ∘ σ_2^c ∘ δ ∘ … ∘ σ_k^c`.
pub fn rewrite_complement_factorization(engine: &Engine, f: &Factorization) -> Result<Factorization> {
    rewrite_symmetric(engine, f, Perm::complement, ClassExpr::cpl, f.target.complement())
}

fn rewrite_symmetric(
    engine: &Engine,
    f: &Factorization,
    flip: fn(&Perm) -> Perm,
    flip_class: fn(ClassExpr) -> ClassExpr,
    target: Perm,
) -> Result<Factorization> {
    if f.factors.is_empty() {
        return Err(Error::Precondition("factorization has no factors".into()));
    }
    f.verify(engine)?;
    let d = Perm::decreasing(target.len());
    let mut factors = Vec::with_capacity(2 * f.factors.len() - 1);
    for (i, factor) in f.factors.iter().enumerate() {
        if i > 0 {
            factors.push((d.clone(), ClassExpr::Dec));
        }
        factors.push((flip(&factor.perm), flip_class(factor.class.clone())));
    }
    Factorization::new(&target, factors).verified(engine)
}
