//! Group extensions `A ⋊_F K`, their duals `K ⋉_F̂ Â`, and the decomposition
//! of a group along a normal abelian subgroup.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cohomology::{Coefficients, Cochain};
use crate::groups::{FiniteGroup, GroupError, GroupMap};
use crate::module::{abelian_basis, dual_module, element_of, FiniteModule};

#[derive(Debug, Error)]
pub enum ExtensionError {
    #[error("2-cochain is not a normalized cocycle")]
    NotACocycle,
    #[error("cochain coefficients do not match the module")]
    WrongCoefficients,
    #[error("group construction failed: {0}")]
    Group(#[from] GroupError),
}

/// `(K, A, F)` together with the group `G = A ⋊_F K` on the set `A × K`.
#[derive(Debug, Clone)]
pub struct ExtensionDatum {
    pub quotient: FiniteGroup,
    pub module: FiniteModule,
    pub cocycle: Cochain,
    pub group: FiniteGroup,
    /// `G → K`, `(a, k) ↦ k`.
    pub projection: GroupMap,
    /// Element index in `G` of the pair (module element index, quotient element).
    pub module_size: usize,
}

impl ExtensionDatum {
    /// Index of the pair `(a, k)` in `G`.
    #[inline]
    pub fn pair(&self, a: usize, k: usize) -> usize {
        k * self.module_size + a
    }

    /// `(a, k)` of an element of `G`.
    #[inline]
    pub fn split(&self, g: usize) -> (usize, usize) {
        (g % self.module_size, g / self.module_size)
    }
}

fn cocycle_value(m: &FiniteModule, f: &Cochain, k1: usize, k2: usize) -> Vec<u64> {
    m.reduce(&f.get(&[k1, k2]))
}

/// `G = A ⋊_F K` with law `(a1, k1)(a2, k2) = (a1 + k1·a2 + F(k1,k2), k1k2)`,
/// element `(a, k)` at index `k·|A| + a`.
pub fn build_extension(k: &FiniteGroup, a: &FiniteModule, f: &Cochain) -> Result<ExtensionDatum, ExtensionError> {
    if f.degree != 2 || f.coeffs != Coefficients::Module(a.clone()) || f.group_order != k.order() {
        return Err(ExtensionError::WrongCoefficients);
    }
    if !f.is_cocycle(k) {
        return Err(ExtensionError::NotACocycle);
    }
    let n = a.size();
    let elems: Vec<Vec<u64>> = (0..n).map(|i| a.decode(i)).collect();
    let mut fv = vec![vec![Vec::new(); k.order()]; k.order()];
    for k1 in 0..k.order() {
        for k2 in 0..k.order() {
            fv[k1][k2] = cocycle_value(a, f, k1, k2);
        }
    }
    let group = FiniteGroup::from_fn(format!("ext[{}]", k.name()), n * k.order(), |x, y| {
        let (a1, k1) = (x % n, x / n);
        let (a2, k2) = (y % n, y / n);
        let s = a.add(&a.add(&elems[a1], &a.act(k1, &elems[a2])), &fv[k1][k2]);
        k.mul(k1, k2) * n + a.encode(&s)
    })
    .map_err(|_| ExtensionError::NotACocycle)?;
    let projection = GroupMap { images: (0..group.order()).map(|g| g / n).collect() };
    Ok(ExtensionDatum { quotient: k.clone(), module: a.clone(), cocycle: f.clone(), group, projection, module_size: n })
}

/// Converts a cocycle for the left module `Â` (with `k·ρ = ρ^{k⁻¹}`) into the
/// right cocycle `F̂_R(k1,k2) = F̂_L(k2⁻¹, k1⁻¹)` used by the dual group law.
pub fn left_to_right(k: &FiniteGroup, f_left: &Cochain) -> Cochain {
    Cochain::from_fn(k.order(), 2, f_left.coeffs.clone(), |t| f_left.get(&[k.inv(t[1]), k.inv(t[0])]))
}

/// The dual group `Ĝ = K ⋉_F̂ Â` with law
/// `(k1, ρ1)(k2, ρ2) = (k1k2, ρ1^{k2} + ρ2 + F̂(k1,k2))`, element `(k, ρ)` at
/// index `k·|Â| + ρ`. `f_hat` is a right cocycle (see [`left_to_right`]) with
/// values in the coordinates of `Â`; `a` is the original module `A`.
pub fn build_dual_group(k: &FiniteGroup, a: &FiniteModule, f_hat: &Cochain) -> Result<ExtensionDatum, ExtensionError> {
    let dual = dual_module(k, a);
    if f_hat.degree != 2 || f_hat.coeffs != Coefficients::Module(dual.clone()) {
        return Err(ExtensionError::WrongCoefficients);
    }
    let n = dual.size();
    let elems: Vec<Vec<u64>> = (0..n).map(|i| dual.decode(i)).collect();
    let right = a.right_dual_action();
    let r = a.rank();
    let right_act = |kk: usize, rho: &[u64]| -> Vec<u64> {
        let m = &right[kk];
        dual.reduce(&(0..r).map(|j| (0..r).map(|i| m[j * r + i] * rho[i] as i64).sum()).collect::<Vec<i64>>())
    };
    let group = FiniteGroup::from_fn(format!("dual[{}]", k.name()), n * k.order(), |x, y| {
        let (r1, k1) = (x % n, x / n);
        let (r2, k2) = (y % n, y / n);
        let s = dual.add(&dual.add(&right_act(k2, &elems[r1]), &elems[r2]), &cocycle_value(&dual, f_hat, k1, k2));
        k.mul(k1, k2) * n + dual.encode(&s)
    })
    .map_err(|_| ExtensionError::NotACocycle)?;
    let projection = GroupMap { images: (0..group.order()).map(|g| g / n).collect() };
    Ok(ExtensionDatum { quotient: k.clone(), module: dual, cocycle: f_hat.clone(), group, projection, module_size: n })
}

/// A normal abelian subgroup `A ⊴ H` with everything needed to rebuild `H`
/// as an extension of `K = H/A` by `A`.
#[derive(Debug, Clone)]
pub struct NormalAbelian {
    pub subgroup: Vec<usize>,
    pub quotient: FiniteGroup,
    /// `H → K`.
    pub projection: GroupMap,
    /// Normalized section `K → H` (least element of each coset).
    pub section: Vec<usize>,
    /// Invariant-factor basis of `A` inside `H`.
    pub generators: Vec<usize>,
    /// `A` with the conjugation action of `K`.
    pub module: FiniteModule,
    /// `F(k1,k2) = s(k1)s(k2)s(k1k2)⁻¹`.
    pub cocycle: Cochain,
    /// The extension built from `(K, A, F)`.
    pub extension: ExtensionDatum,
    /// Isomorphism `G → H`, `(a, k) ↦ a·s(k)`.
    pub iso: GroupMap,
}

/// Quotient `H/N` for a normal subgroup; cosets are numbered by their least
/// element, so the identity coset is 0.
pub fn quotient(h: &FiniteGroup, normal: &[usize]) -> (FiniteGroup, GroupMap, Vec<usize>) {
    assert!(h.is_normal(normal));
    let mut coset_of = vec![usize::MAX; h.order()];
    let mut reps = Vec::new();
    for x in 0..h.order() {
        if coset_of[x] == usize::MAX {
            let id = reps.len();
            reps.push(x);
            for &n in normal {
                coset_of[h.mul(x, n)] = id;
            }
        }
    }
    let k = FiniteGroup::from_fn(format!("{}/{}", h.name(), normal.len()), reps.len(), |a, b| coset_of[h.mul(reps[a], reps[b])])
        .expect("quotient of a group by a normal subgroup");
    (k, GroupMap { images: coset_of }, reps)
}

/// Decomposes `H` along the normal abelian subgroup `sub`.
pub fn decompose(h: &FiniteGroup, sub: &[usize]) -> NormalAbelian {
    let mut subgroup = sub.to_vec();
    subgroup.sort_unstable();
    let (k, projection, section) = quotient(h, &subgroup);
    let (factors, generators) = abelian_basis(h, &subgroup);
    let radix = crate::groups::MixedRadix::new(factors.clone());
    let mut coords: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for x in radix.iter() {
        coords.insert(element_of(h, &generators, &x), x);
    }
    let r = factors.len();
    let action: Vec<Vec<i64>> = (0..k.order())
        .map(|kk| {
            let mut m = vec![0i64; r * r];
            for (j, &g) in generators.iter().enumerate() {
                let c = &coords[&h.conj(section[kk], g)];
                for i in 0..r {
                    m[i * r + j] = c[i] as i64;
                }
            }
            m
        })
        .collect();
    let module = if r == 0 {
        FiniteModule::trivial(&k, vec![])
    } else {
        FiniteModule::new(&k, factors, action).expect("conjugation action is a module")
    };
    let coeffs = Coefficients::Module(module.clone());
    let cocycle = Cochain::from_fn(k.order(), 2, coeffs, |t| {
        let x = h.mul(h.mul(section[t[0]], section[t[1]]), h.inv(section[k.mul(t[0], t[1])]));
        coords[&x].iter().map(|&v| v as i64).collect()
    });
    let extension = build_extension(&k, &module, &cocycle).expect("conjugation data defines an extension");
    let n = module.size();
    let iso = GroupMap {
        images: (0..extension.group.order())
            .map(|g| {
                let (a, kk) = (g % n, g / n);
                h.mul(element_of(h, &generators, &module.decode(a)), section[kk])
            })
            .collect(),
    };
    assert!(iso.is_bijective() && iso.is_homomorphism(&extension.group, h), "extension does not reproduce the group");
    NormalAbelian { subgroup, quotient: k, projection, section, generators, module, cocycle, extension, iso }
}

/// All normal abelian subgroups of `H` (trivial included; the full group
/// when `H` is abelian), each decomposed as an extension.
pub fn normal_abelian_subgroups(h: &FiniteGroup) -> Vec<NormalAbelian> {
    h.subgroups()
        .into_iter()
        .filter(|s| h.is_normal(s) && h.is_abelian_subset(s))
        .map(|s| decompose(h, &s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{cohomology_group, DEFAULT_K};
    use crate::groups::{find_isomorphism, Order8};

    fn h2(k: &FiniteGroup, m: &FiniteModule) -> std::sync::Arc<crate::cohomology::CohomologyGroup> {
        cohomology_group(k, 2, &Coefficients::Module(m.clone()), DEFAULT_K).unwrap()
    }

    #[test]
    fn zero_cocycle_gives_direct_product() {
        let k = FiniteGroup::cyclic(2);
        let m = FiniteModule::trivial(&k, vec![4]);
        let f = Cochain::zeros(2, 2, Coefficients::Module(m.clone()));
        let e = build_extension(&k, &m, &f).unwrap();
        assert!(find_isomorphism(&e.group, &Order8::Z4xZ2.group()).is_some());
    }

    #[test]
    fn nontrivial_extensions_of_z2_by_z4() {
        let k = FiniteGroup::cyclic(2);
        let triv = FiniteModule::trivial(&k, vec![4]);
        let f = h2(&k, &triv).representative(&[1]);
        let e = build_extension(&k, &triv, &f).unwrap();
        assert!(find_isomorphism(&e.group, &Order8::Z8.group()).is_some());
        let inv = FiniteModule::new(&k, vec![4], vec![vec![1], vec![-1]]).unwrap();
        let f = h2(&k, &inv).representative(&[1]);
        let e = build_extension(&k, &inv, &f).unwrap();
        assert!(find_isomorphism(&e.group, &Order8::Q8.group()).is_some());
    }

    #[test]
    fn dual_group_examples() {
        let k = FiniteGroup::cyclic(2);
        let a = FiniteModule::trivial(&k, vec![2, 2]);
        let dual = dual_module(&k, &a);
        let zero = Cochain::zeros(2, 2, Coefficients::Module(dual.clone()));
        let g = build_dual_group(&k, &a, &zero).unwrap();
        assert!(find_isomorphism(&g.group, &Order8::Z2Cubed.group()).is_some());
        let fl = h2(&k, &dual).representative(&[1, 0]);
        let g = build_dual_group(&k, &a, &left_to_right(&k, &fl)).unwrap();
        assert!(find_isomorphism(&g.group, &Order8::Z4xZ2.group()).is_some());
        // trivial K: the dual group is Â itself
        let one = FiniteGroup::trivial();
        let a = FiniteModule::trivial(&one, vec![2, 4]);
        let zero = Cochain::zeros(1, 2, Coefficients::Module(dual_module(&one, &a)));
        let g = build_dual_group(&one, &a, &zero).unwrap();
        assert!(find_isomorphism(&g.group, &Order8::Z4xZ2.group()).is_some());
    }

    #[test]
    fn right_cocycles_from_left_ones_are_associative() {
        // nontrivial action: Z/2 swapping the factors of Z2×Z2
        let k = FiniteGroup::cyclic(2);
        let a = FiniteModule::new(&k, vec![2, 2], vec![vec![1, 0, 0, 1], vec![0, 1, 1, 0]]).unwrap();
        let dual = dual_module(&k, &a);
        let h = h2(&k, &dual);
        for idx in 0..h.order() as usize {
            let fl = h.representative(&h.radix().decode(idx));
            assert!(build_dual_group(&k, &a, &left_to_right(&k, &fl)).is_ok());
        }
    }

    #[test]
    fn normal_abelian_subgroup_lists() {
        let q8 = Order8::Q8.group();
        let subs: Vec<Vec<usize>> = normal_abelian_subgroups(&q8).into_iter().map(|n| n.subgroup).collect();
        // trivial, <−1>, <i>, <j>, <k>; Q8 itself is not abelian
        assert_eq!(subs, vec![vec![0], vec![0, 1], vec![0, 1, 2, 3], vec![0, 1, 4, 5], vec![0, 1, 6, 7]]);
        let d8 = Order8::D8.group();
        let subs: Vec<Vec<usize>> = normal_abelian_subgroups(&d8).into_iter().map(|n| n.subgroup).collect();
        assert_eq!(subs, vec![vec![0], vec![0, 2], vec![0, 1, 2, 3], vec![0, 2, 4, 6], vec![0, 2, 5, 7]]);
        assert_eq!(normal_abelian_subgroups(&Order8::Z2Cubed.group()).len(), 16);
    }

    #[test]
    fn decomposition_recovers_module() {
        for g in Order8::ALL {
            let h = g.group();
            for na in normal_abelian_subgroups(&h) {
                let inv = na.iso.inverse().unwrap();
                let pre: Vec<usize> = na.subgroup.iter().map(|&x| inv.apply(x)).collect();
                let again = decompose(&na.extension.group, &pre);
                assert_eq!(again.module.factors, na.module.factors);
                assert_eq!(again.module.is_trivial_action(), na.module.is_trivial_action());
            }
        }
    }
}
