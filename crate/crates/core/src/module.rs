//! Finite abelian groups `A = ⊕ Z/d_i` with an action of a finite group.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{FiniteGroup, MixedRadix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("invariant factors must be > 1 and form a divisor chain: {0:?}")]
    BadFactors(Vec<u64>),
    #[error("expected {expected} action matrices, got {got}")]
    WrongActionCount { expected: usize, got: usize },
    #[error("action matrix of element {0} does not respect the cyclic orders")]
    IllDefined(usize),
    #[error("action is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("identity acts nontrivially")]
    IdentityNontrivial,
}

/// `A = Z/d_1 ⊕ … ⊕ Z/d_r` with a left action `g·a = M_g a` of a group of
/// order `acting_order`. Matrices are row-major `r × r` integer matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteModule {
    pub factors: Vec<u64>,
    pub acting_order: usize,
    pub action: Vec<Vec<i64>>,
}

impl FiniteModule {
    pub fn new(group: &FiniteGroup, factors: Vec<u64>, action: Vec<Vec<i64>>) -> Result<Self, ModuleError> {
        if factors.iter().any(|&d| d < 2) || factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(ModuleError::BadFactors(factors));
        }
        if action.len() != group.order() {
            return Err(ModuleError::WrongActionCount { expected: group.order(), got: action.len() });
        }
        let m = FiniteModule { factors, acting_order: group.order(), action };
        m.validate(group)?;
        Ok(m)
    }

    /// Trivial action of `group` on `⊕ Z/d_i`.
    pub fn trivial(group: &FiniteGroup, factors: Vec<u64>) -> Self {
        let r = factors.len();
        let mut id = vec![0i64; r * r];
        for i in 0..r {
            id[i * r + i] = 1;
        }
        FiniteModule { factors, acting_order: group.order(), action: vec![id; group.order()] }
    }

    fn validate(&self, group: &FiniteGroup) -> Result<(), ModuleError> {
        let r = self.rank();
        for (g, m) in self.action.iter().enumerate() {
            if m.len() != r * r {
                return Err(ModuleError::IllDefined(g));
            }
            // image of d_j e_j must vanish
            for i in 0..r {
                for j in 0..r {
                    if (m[i * r + j] * self.factors[j] as i64).rem_euclid(self.factors[i] as i64) != 0 {
                        return Err(ModuleError::IllDefined(g));
                    }
                }
            }
        }
        for e in 0..self.size() {
            let a = self.decode(e);
            if self.act(0, &a) != a {
                return Err(ModuleError::IdentityNontrivial);
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                for j in 0..r {
                    let mut ej = vec![0u64; r];
                    ej[j] = 1;
                    if self.act(g, &self.act(h, &ej)) != self.act(group.mul(g, h), &ej) {
                        return Err(ModuleError::NotHomomorphism(g, h));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// `|A|`.
    pub fn size(&self) -> usize {
        self.factors.iter().product::<u64>() as usize
    }

    /// Exponent of `A` as a power of two, if `A` is a 2-group.
    pub fn exponent_log2(&self) -> Option<u32> {
        let e = self.factors.last().copied().unwrap_or(1);
        e.is_power_of_two().then(|| e.trailing_zeros())
    }

    pub fn radix(&self) -> MixedRadix {
        MixedRadix::new(self.factors.clone())
    }

    pub fn encode(&self, a: &[u64]) -> usize {
        self.radix().encode(a)
    }

    pub fn decode(&self, idx: usize) -> Vec<u64> {
        self.radix().decode(idx)
    }

    pub fn reduce(&self, a: &[i64]) -> Vec<u64> {
        a.iter().zip(&self.factors).map(|(&x, &d)| x.rem_euclid(d as i64) as u64).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.factors).map(|((&x, &y), &d)| (x + y) % d).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.factors).map(|(&x, &d)| (d - x % d) % d).collect()
    }

    pub fn is_trivial_action(&self) -> bool {
        let r = self.rank();
        self.action.iter().all(|m| (0..r).all(|i| (0..r).all(|j| m[i * r + j] == (i == j) as i64)))
    }

    /// `g · a`.
    pub fn act(&self, g: usize, a: &[u64]) -> Vec<u64> {
        let r = self.rank();
        let m = &self.action[g];
        let v: Vec<i64> = (0..r).map(|i| (0..r).map(|j| m[i * r + j] * a[j] as i64).sum()).collect();
        self.reduce(&v)
    }

    /// The pairing `⟨ρ, a⟩ = Σ ρ_i a_i / d_i ∈ Q/Z`, as a numerator over `2^exp`.
    /// Requires every `d_i` to divide `2^exp`.
    pub fn pairing(&self, rho: &[u64], a: &[u64], exp: u32) -> u64 {
        let modulus = 1u64 << exp;
        let mut acc = 0u64;
        for ((&r, &x), &d) in rho.iter().zip(a).zip(&self.factors) {
            assert!(modulus.is_multiple_of(d), "pairing denominator {d} exceeds 2^{exp}");
            acc = (acc + (r * x % d) * (modulus / d)) % modulus;
        }
        acc
    }

    /// Matrices of the right action `ρ^k(a) := ρ(k·a)` on the dual group
    /// `Â = Hom(A, Q/Z)` in the dual coordinates of [`FiniteModule::pairing`].
    pub fn right_dual_action(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        self.action
            .iter()
            .map(|m| {
                let mut out = vec![0i64; r * r];
                for j in 0..r {
                    for i in 0..r {
                        let dj = self.factors[j] as i64;
                        let di = self.factors[i] as i64;
                        let num = m[i * r + j] * dj;
                        debug_assert_eq!(num.rem_euclid(di), 0);
                        out[j * r + i] = num.div_euclid(di);
                    }
                }
                out
            })
            .collect()
    }

    /// `ρ^k` for the right dual action.
    pub fn dual_right_act(&self, k: usize, rho: &[u64]) -> Vec<u64> {
        let r = self.rank();
        let m = &self.right_dual_action()[k];
        let v: Vec<i64> = (0..r).map(|j| (0..r).map(|i| m[j * r + i] * rho[i] as i64).sum()).collect();
        self.reduce(&v)
    }
}

/// The dual module `Â`, made a left module by `k·ρ := ρ^{k⁻¹}` so that
/// ordinary (left) cohomology applies. Same invariant factors as `A`.
pub fn dual_module(group: &FiniteGroup, a: &FiniteModule) -> FiniteModule {
    let right = a.right_dual_action();
    let action = (0..group.order()).map(|k| right[group.inv(k)].clone()).collect();
    FiniteModule { factors: a.factors.clone(), acting_order: a.acting_order, action }
}

/// Invariant-factor basis of an abelian subgroup `sub` of `group`: generators
/// `g_1, …, g_r` of orders `d_1 | … | d_r` such that `Σ x_i g_i` enumerates
/// `sub` bijectively. Found by exhaustive search (subgroups are tiny).
pub fn abelian_basis(group: &FiniteGroup, sub: &[usize]) -> (Vec<u64>, Vec<usize>) {
    assert!(group.is_abelian_subset(sub), "subgroup is not abelian");
    let n = sub.len() as u64;
    if n == 1 {
        return (vec![], vec![]);
    }
    for factors in divisor_chains(n) {
        let mut chosen = Vec::new();
        if search_basis(group, sub, &factors, &mut chosen) {
            return (factors, chosen);
        }
    }
    unreachable!("every finite abelian group has an invariant-factor basis")
}

/// Divisor chains `d_1 | … | d_r` with product `n`, fewest factors first.
fn divisor_chains(n: u64) -> Vec<Vec<u64>> {
    fn rec(rem: u64, min: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rem == 1 {
            out.push(cur.clone());
            return;
        }
        for d in 2..=rem {
            if rem.is_multiple_of(d) && d % min == 0 {
                cur.push(d);
                rec(rem / d, d, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut out);
    out.sort_by_key(|c| c.len());
    out
}

fn search_basis(group: &FiniteGroup, sub: &[usize], factors: &[u64], chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == factors.len() {
        let radix = MixedRadix::new(factors.to_vec());
        let mut seen = std::collections::BTreeSet::new();
        for x in radix.iter() {
            seen.insert(element_of(group, chosen, &x));
        }
        return seen.len() == sub.len();
    }
    let d = factors[chosen.len()];
    for &g in sub {
        if group.element_order(g) as u64 == d {
            chosen.push(g);
            if search_basis(group, sub, factors, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// `Π g_i^{x_i}` in `group` (the generators commute).
pub fn element_of(group: &FiniteGroup, gens: &[usize], x: &[u64]) -> usize {
    let mut acc = 0;
    for (&g, &e) in gens.iter().zip(x) {
        for _ in 0..e {
            acc = group.mul(acc, g);
        }
    }
    acc
}
