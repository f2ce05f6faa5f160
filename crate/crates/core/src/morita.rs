//! Weak Morita equivalence of pointed fusion categories of dimension 8.
//!
//! `Vect(H, η)` and `Vect(Ĥ, η̂)` are weakly Morita equivalent iff there are
//! a group `K`, a `K`-module `A`, cocycles `F ∈ Z²(K, A)`, `F̂ ∈ Z²(K, Â)` and
//! `ε: K³ → C*` such that `H ≅ A ⋊_F K`, `Ĥ ≅ K ⋉_F̂ Â`, and `η`, `η̂` are
//! cohomologous to the transported
//!
//! ```text
//! ω((a1,k1),(a2,k2),(a3,k3)) = ⟨F̂(k1,k2), a3⟩ + ε(k1,k2,k3)
//! ω̂((k1,ρ1),(k2,ρ2),(k3,ρ3)) = ε(k1,k2,k3) + ⟨ρ1, F(k2,k3)⟩
//! ```
//!
//! The condition on `ε` is imposed operationally: `ω` must be a cocycle.
//! Different solutions `ε` differ by 3-cocycles `κ` of `K`, which are
//! enumerated class by class.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{self, coboundary, inflation, pullback, Coefficients, Cochain, CohomologyError, CohomologyGroup, DEFAULT_K};
use crate::extension::{build_dual_group, build_extension, decompose, left_to_right, ExtensionDatum, ExtensionError};
use crate::groups::{find_isomorphism, FiniteGroup, GroupMap, Order8};
use crate::linalg::{self, ModMatrix};
use crate::module::{dual_module, FiniteModule};
use crate::orbits::Census;

#[derive(Debug, Error)]
pub enum MoritaError {
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error("δω₀ depends on more than the quotient components at tuple {0:?}")]
    NotInflated(Vec<usize>),
    #[error("{0} is not a cocycle (ε/κ contract violation)")]
    NotACocycle(&'static str),
    #[error("extension is not isomorphic to a catalog group")]
    NotInCatalog,
    #[error("unknown quotient group {0}")]
    UnknownQuotient(String),
    #[error("witness does not reproduce its edge")]
    WitnessMismatch,
}

pub type Result<T> = std::result::Result<T, MoritaError>;

/// `ω₀((a1,k1),(a2,k2),(a3,k3)) = ⟨F̂(k1,k2), a3⟩` on `G = A ⋊_F K`, as a
/// torus cochain over `2^exp`. `f_hat` is the right cocycle of the dual group.
pub fn omega_zero(ext: &ExtensionDatum, f_hat: &Cochain, exp: u32) -> Cochain {
    let a = &ext.module;
    let n = ext.module_size;
    let elems: Vec<Vec<u64>> = (0..n).map(|i| a.decode(i)).collect();
    Cochain::from_fn(ext.group.order(), 3, Coefficients::Torus { exp }, |t| {
        let (k1, k2, a3) = (t[0] / n, t[1] / n, t[2] % n);
        let rho = a.reduce(&f_hat.get(&[k1, k2]));
        vec![a.pairing(&rho, &elems[a3], exp) as i64]
    })
}

/// Some `ε ∈ C³(K, C*)` with `ω₀ + inflation(ε)` a cocycle on `G`, or `None`.
pub fn solve_epsilon(ext: &ExtensionDatum, omega0: &Cochain) -> Result<Option<Cochain>> {
    let Coefficients::Torus { exp } = omega0.coeffs else { unreachable!("torus cochain") };
    let k = &ext.quotient;
    let g = &ext.group;
    let d = coboundary(g, omega0);
    // δω₀ must be inflated from K: read it off on K-tuples and compare everywhere
    let mut target = Cochain::zeros(k.order(), 4, omega0.coeffs.clone());
    let mut seen = vec![false; target.values.len()];
    let mut t = [0usize; 4];
    for idx in 0..d.tuples() {
        cohomology::tuple_at(g.order(), 4, idx, &mut t);
        let kt: Vec<usize> = t.iter().map(|&x| ext.projection.apply(x)).collect();
        let v = d.values[idx];
        match cohomology::tuple_index(k.order(), &kt) {
            None if v != 0 => return Err(MoritaError::NotInflated(t.to_vec())),
            None => {}
            Some(j) => {
                if seen[j] && target.values[j] != v {
                    return Err(MoritaError::NotInflated(t.to_vec()));
                }
                seen[j] = true;
                target.values[j] = v;
            }
        }
    }
    if target.is_zero() {
        return Ok(Some(Cochain::zeros(k.order(), 3, omega0.coeffs.clone())));
    }
    // δ_K ε = −target
    let (rows, cols, ent) = cohomology::coboundary_matrix(k, 3, &Coefficients::Integer);
    let mut m = ModMatrix::zeros(rows, cols, exp);
    for (i, j, v) in ent {
        m.add_at(i, j, v);
    }
    let b: Vec<u64> = target.neg().values.iter().map(|&v| v as u64).collect();
    let Some(x) = linalg::solve_mod(&m, &b) else { return Ok(None) };
    let eps = Cochain { degree: 3, group_order: k.order(), coeffs: omega0.coeffs.clone(), values: x.iter().map(|&v| v as i64).collect() };
    let omega = omega0.add(&inflation(&ext.projection, &eps));
    if !omega.is_cocycle(g) {
        return Err(MoritaError::NotACocycle("ω after solving for ε"));
    }
    Ok(Some(eps))
}

/// `(ω, ω̂)` for the twist `τ = ε + κ`; both verified to be cocycles.
pub fn omega_pair(ext: &ExtensionDatum, dual: &ExtensionDatum, omega0: &Cochain, tau: &Cochain) -> Result<(Cochain, Cochain)> {
    let omega = omega0.add(&inflation(&ext.projection, tau));
    let Coefficients::Torus { exp } = omega0.coeffs else { unreachable!("torus cochain") };
    let a = &ext.module;
    let n = dual.module_size;
    let rhos: Vec<Vec<u64>> = (0..n).map(|i| dual.module.decode(i)).collect();
    let omega_hat = Cochain::from_fn(dual.group.order(), 3, omega0.coeffs.clone(), |t| {
        let (k1, k2, k3) = (t[0] / n, t[1] / n, t[2] / n);
        let rho1 = &rhos[t[0] % n];
        let f = a.reduce(&ext.cocycle.get(&[k2, k3]));
        vec![tau.value(&[k1, k2, k3]) + a.pairing(rho1, &f, exp) as i64]
    });
    if !omega.is_cocycle(&ext.group) {
        return Err(MoritaError::NotACocycle("ω"));
    }
    if !omega_hat.is_cocycle(&dual.group) {
        return Err(MoritaError::NotACocycle("ω̂"));
    }
    Ok((omega, omega_hat))
}

/// Groups that occur as quotients `K` (with `|A|·|K| = 8`).
pub fn quotient_groups() -> Vec<FiniteGroup> {
    let mut v = vec![
        FiniteGroup::trivial().with_name("1"),
        FiniteGroup::cyclic(2).with_name("Z2"),
        FiniteGroup::cyclic(4).with_name("Z4"),
        FiniteGroup::abelian(&[2, 2]).with_name("Z2xZ2"),
    ];
    v.extend(Order8::ALL.iter().map(|g| g.group()));
    v
}

pub fn quotient_by_name(name: &str) -> Result<FiniteGroup> {
    quotient_groups().into_iter().find(|g| g.name() == name).ok_or_else(|| MoritaError::UnknownQuotient(name.into()))
}

/// Abelian groups of the given order in invariant-factor form.
fn abelian_types(order: usize) -> Vec<Vec<u64>> {
    match order {
        1 => vec![vec![]],
        2 => vec![vec![2]],
        4 => vec![vec![4], vec![2, 2]],
        8 => vec![vec![8], vec![2, 4], vec![2, 2, 2]],
        _ => unreachable!("orders dividing 8"),
    }
}

/// All automorphisms of `⊕ Z/d_i` as integer matrices (entry `(i,j)` in `0..d_i`).
fn automorphism_matrices(factors: &[u64]) -> Vec<Vec<i64>> {
    let r = factors.len();
    if r == 0 {
        return vec![vec![]];
    }
    let one = FiniteGroup::trivial();
    let radix: Vec<u64> = (0..r * r).map(|p| factors[p / r]).collect();
    let radix = crate::groups::MixedRadix::new(radix);
    let probe = FiniteModule::trivial(&one, factors.to_vec());
    let mut out = Vec::new();
    for entries in radix.iter() {
        let mat: Vec<i64> = entries.iter().map(|&x| x as i64).collect();
        let m = FiniteModule { factors: factors.to_vec(), acting_order: 1, action: vec![mat.clone()] };
        let well_defined = (0..r).all(|i| (0..r).all(|j| (mat[i * r + j] * factors[j] as i64) % factors[i] as i64 == 0));
        if !well_defined {
            continue;
        }
        let images: BTreeSet<Vec<u64>> = (0..probe.size()).map(|x| m.act(0, &probe.decode(x))).collect();
        if images.len() == probe.size() {
            out.push(mat);
        }
    }
    out
}

/// All `K`-module structures on `⊕ Z/d_i` (homomorphisms `K → Aut(A)`).
pub fn module_structures(k: &FiniteGroup, factors: &[u64]) -> Vec<FiniteModule> {
    let auts = automorphism_matrices(factors);
    let gens = k.generators();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        if let Some(m) = module_from_generators(k, factors, &gens, &choice.iter().map(|&c| auts[c].clone()).collect::<Vec<_>>()) {
            if !out.contains(&m) {
                out.push(m);
            }
        }
        // next choice
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < auts.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn module_from_generators(k: &FiniteGroup, factors: &[u64], gens: &[usize], mats: &[Vec<i64>]) -> Option<FiniteModule> {
    let r = factors.len();
    let reduce = |m: Vec<i64>| -> Vec<i64> { m.iter().enumerate().map(|(p, &x)| x.rem_euclid(factors[p / r] as i64)).collect() };
    let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
        reduce((0..r * r).map(|p| (0..r).map(|l| a[(p / r) * r + l] * b[l * r + p % r]).sum()).collect())
    };
    let mut id = vec![0i64; r * r];
    for i in 0..r {
        id[i * r + i] = 1;
    }
    let mut action: Vec<Option<Vec<i64>>> = vec![None; k.order()];
    action[0] = Some(reduce(id));
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&g, m) in gens.iter().zip(mats) {
            let y = k.mul(x, g);
            let img = mul(action[x].as_ref().unwrap(), m);
            match &action[y] {
                None => {
                    action[y] = Some(img);
                    queue.push_back(y);
                }
                Some(existing) if *existing != img => return None,
                _ => {}
            }
        }
    }
    FiniteModule::new(k, factors.to_vec(), action.into_iter().map(Option::unwrap).collect()).ok()
}

/// Catalog identification of a group of order 8.
pub fn identify(g: &FiniteGroup) -> Result<(Order8, GroupMap)> {
    for h in Order8::ALL {
        let hg = h.group();
        if hg.order_statistics() != g.order_statistics() || hg.is_abelian() != g.is_abelian() {
            continue;
        }
        if let Some(phi) = find_isomorphism(g, &hg) {
            return Ok((h, phi));
        }
    }
    Err(MoritaError::NotInCatalog)
}

/// Self-contained description of one realization of the criterion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MoritaWitness {
    pub quotient: String,
    pub factors: Vec<u64>,
    pub action: Vec<Vec<i64>>,
    /// Coordinates of `[F]` in `H²(K, A)`.
    pub f: Vec<u64>,
    /// Coordinates of `[F̂]` in `H²(K, Â)` (left-module convention).
    pub f_hat: Vec<u64>,
    /// Coordinates of `[κ]` in `H³(K, C*)`.
    pub kappa: Vec<u64>,
    pub group: Order8,
    pub dual_group: Order8,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MoritaEdge {
    pub class_a: usize,
    pub class_b: usize,
    pub witness: MoritaWitness,
}

/// Classes `([φ⁻¹*ω], [φ̂⁻¹*ω̂])` as coordinates on the catalog groups.
#[derive(Debug, Clone)]
pub struct RealizedPair {
    pub group: Order8,
    pub coords: Vec<u64>,
    pub dual_group: Order8,
    pub dual_coords: Vec<u64>,
}

/// Realized pairs keyed by the coordinates of `[κ]`.
pub type RealizedPairs = Vec<(Vec<u64>, RealizedPair)>;

/// Transports a cocycle on `G` to the catalog group via `φ: G → H`.
pub fn catalog_coords(h: Order8, phi: &GroupMap, omega: &Cochain) -> Result<Vec<u64>> {
    let hg = h.group();
    let h3 = cohomology::torus_h3(&hg)?;
    let inv = phi.inverse().expect("isomorphism");
    Ok(h3.class_coordinates(&hg, &pullback(&inv, omega))?)
}

fn h2(k: &FiniteGroup, m: &FiniteModule) -> Result<std::sync::Arc<CohomologyGroup>> {
    Ok(cohomology::cohomology_group(k, 2, &Coefficients::Module(m.clone()), DEFAULT_K)?)
}

/// Everything derived from `(K, A, F)`.
struct Side {
    ext: ExtensionDatum,
    group: Order8,
    phi: GroupMap,
}

fn side(k: &FiniteGroup, a: &FiniteModule, f: &Cochain) -> Result<Side> {
    let ext = build_extension(k, a, f)?;
    let (group, phi) = identify(&ext.group)?;
    Ok(Side { ext, group, phi })
}

/// Realized pairs for fixed `(K, A, F)` and `F̂` (left cocycle), over all `[κ]`.
/// Returns `None` when no `ε` exists.
fn realize(k: &FiniteGroup, a: &FiniteModule, left: &Side, f_hat_left: &Cochain, exp: u32) -> Result<Option<RealizedPairs>> {
    let f_hat = left_to_right(k, f_hat_left);
    let dual_ext = build_dual_group(k, a, &f_hat)?;
    let (dual_group, phi_hat) = identify(&dual_ext.group)?;
    let omega0 = omega_zero(&left.ext, &f_hat, exp);
    let Some(eps) = solve_epsilon(&left.ext, &omega0)? else { return Ok(None) };
    let h3k = cohomology::cohomology_group(k, 3, &Coefficients::Torus { exp }, DEFAULT_K)?;
    let mut out = Vec::new();
    for idx in 0..h3k.order() as usize {
        let kappa_coords = h3k.radix().decode(idx);
        let tau = eps.add(&h3k.representative(&kappa_coords));
        let (omega, omega_hat) = omega_pair(&left.ext, &dual_ext, &omega0, &tau)?;
        let pair = RealizedPair {
            group: left.group,
            coords: catalog_coords(left.group, &left.phi, &omega)?,
            dual_group,
            dual_coords: catalog_coords(dual_group, &phi_hat, &omega_hat)?,
        };
        out.push((kappa_coords, pair));
    }
    Ok(Some(out))
}

/// Realized pairs for arbitrary cocycle representatives `F ∈ Z²(K, A)` and
/// `F̂ ∈ Z²(K, Â)` (left convention), indexed by `[κ]`; `None` when no `ε` exists.
pub fn realize_cochains(k: &FiniteGroup, a: &FiniteModule, f: &Cochain, f_hat_left: &Cochain) -> Result<Option<RealizedPairs>> {
    let left = side(k, a, f)?;
    realize(k, a, &left, f_hat_left, DEFAULT_K)
}

/// Every `(K, A)` module structure with `|K|·|A| = 8`.
pub fn extension_shapes() -> Vec<(FiniteGroup, FiniteModule)> {
    let mut out = Vec::new();
    for k in quotient_groups() {
        for factors in abelian_types(8 / k.order()) {
            for m in module_structures(&k, &factors) {
                out.push((k.clone(), m));
            }
        }
    }
    out
}

/// All Morita edges between tensor classes, sorted.
pub fn enumerate_edges(census: &Census) -> Result<Vec<MoritaEdge>> {
    let exp = DEFAULT_K;
    // work items: (K, A, [F], [F̂])
    let mut items = Vec::new();
    for (k, a) in extension_shapes() {
        let ha = h2(&k, &a)?;
        let dual = dual_module(&k, &a);
        let hd = h2(&k, &dual)?;
        for fi in 0..ha.order() as usize {
            for di in 0..hd.order() as usize {
                items.push((k.clone(), a.clone(), ha.clone(), hd.clone(), ha.radix().decode(fi), hd.radix().decode(di)));
            }
        }
    }
    let nested: Vec<Vec<MoritaEdge>> = items
        .par_iter()
        .map(|(k, a, ha, hd, fc, dc)| -> Result<Vec<MoritaEdge>> {
            let left = side(k, a, &ha.representative(fc))?;
            let Some(pairs) = realize(k, a, &left, &hd.representative(dc), exp)? else { return Ok(vec![]) };
            Ok(pairs
                .into_iter()
                .map(|(kappa, p)| MoritaEdge {
                    class_a: census.class_of_coords(p.group, &p.coords),
                    class_b: census.class_of_coords(p.dual_group, &p.dual_coords),
                    witness: MoritaWitness {
                        quotient: k.name().to_string(),
                        factors: a.factors.clone(),
                        action: a.action.clone(),
                        f: fc.clone(),
                        f_hat: dc.clone(),
                        kappa,
                        group: p.group,
                        dual_group: p.dual_group,
                    },
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut edges: Vec<MoritaEdge> = nested.into_iter().flatten().collect();
    edges.sort();
    Ok(edges)
}

/// Re-derives an edge from its witness alone.
pub fn validate_edge(census: &Census, edge: &MoritaEdge) -> Result<()> {
    let w = &edge.witness;
    let k = quotient_by_name(&w.quotient)?;
    let a = if w.factors.is_empty() {
        FiniteModule::trivial(&k, vec![])
    } else {
        FiniteModule::new(&k, w.factors.clone(), w.action.clone()).map_err(|_| MoritaError::WitnessMismatch)?
    };
    let ha = h2(&k, &a)?;
    let hd = h2(&k, &dual_module(&k, &a))?;
    let left = side(&k, &a, &ha.representative(&w.f))?;
    let pairs = realize(&k, &a, &left, &hd.representative(&w.f_hat), DEFAULT_K)?.ok_or(MoritaError::WitnessMismatch)?;
    let (_, p) = pairs.into_iter().find(|(kap, _)| *kap == w.kappa).ok_or(MoritaError::WitnessMismatch)?;
    if census.class_of_coords(p.group, &p.coords) != edge.class_a || census.class_of_coords(p.dual_group, &p.dual_coords) != edge.class_b {
        return Err(MoritaError::WitnessMismatch);
    }
    Ok(())
}

/// `Ω(H; A)`: classes of `H³(H, C*)` realized as `[φ⁻¹*ω]` from the
/// extension data of `H` along `A`, over all `[F̂]` and `[κ]`. Returned as
/// sorted coordinate vectors; asserted to form a subgroup.
pub fn omega_subgroup(h: Order8, subgroup: &[usize]) -> Result<Vec<Vec<u64>>> {
    let hg = h.group();
    let na = decompose(&hg, subgroup);
    let k = &na.quotient;
    let a = &na.module;
    let left = Side { ext: na.extension.clone(), group: h, phi: na.iso.clone() };
    let hd = h2(k, &dual_module(k, a))?;
    let mut set = BTreeSet::new();
    for di in 0..hd.order() as usize {
        if let Some(pairs) = realize(k, a, &left, &hd.representative(&hd.radix().decode(di)), DEFAULT_K)? {
            set.extend(pairs.into_iter().map(|(_, p)| p.coords));
        }
    }
    let h3 = cohomology::torus_h3(&hg)?;
    assert!(set.contains(&vec![0u64; h3.invariant_factors.len()]), "Ω contains the trivial class");
    for x in &set {
        for y in &set {
            assert!(set.contains(&h3.add_coords(x, y)), "Ω(H;A) is closed under addition");
        }
    }
    Ok(set.into_iter().collect())
}

/// Disjoint-set forest with the smallest element as representative.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut y = x;
        while self.parent[y] != root {
            let next = self.parent[y];
            self.parent[y] = root;
            y = next;
        }
        root
    }

    /// Returns `true` if two different sets were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoritaClass {
    pub id: usize,
    pub members: Vec<usize>,
    /// One edge per merge performed inside this class.
    pub witnesses: Vec<MoritaEdge>,
}

impl MoritaClass {
    /// Sorted catalog groups of the members.
    pub fn signature(&self, census: &Census) -> Vec<Order8> {
        let mut s: Vec<Order8> = self.members.iter().map(|&m| census.classes[m].group).collect();
        s.sort();
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoritaPartition {
    pub classes: Vec<MoritaClass>,
    pub edge_count: usize,
}

impl MoritaPartition {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, tensor_class: usize) -> usize {
        self.classes.iter().position(|c| c.members.contains(&tensor_class)).expect("every tensor class is placed")
    }
}

pub fn morita_partition(census: &Census, edges: &[MoritaEdge]) -> MoritaPartition {
    let n = census.classes.len();
    let mut uf = UnionFind::new(n);
    let mut merges: Vec<&MoritaEdge> = Vec::new();
    for e in edges {
        if uf.union(e.class_a, e.class_b) {
            merges.push(e);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        groups.entry(uf.find(x)).or_default().push(x);
    }
    let classes = groups
        .into_values()
        .enumerate()
        .map(|(id, members)| {
            let witnesses = merges.iter().filter(|e| members.contains(&e.class_a)).map(|&e| e.clone()).collect();
            MoritaClass { id, members, witnesses }
        })
        .collect();
    MoritaPartition { classes, edge_count: edges.len() }
}
