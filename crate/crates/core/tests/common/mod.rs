//! Shared fixtures and seeded invariant checks for the acceptance and
//! property-test targets. Every check takes a seed and returns `Err` with a
//! description on violation.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pfc_core::cohomology::{coboundary, cohomology_group, pullback, torus_h3, Cochain, Coefficients, DEFAULT_K};
use pfc_core::extension::{build_dual_group, build_extension, left_to_right};
use pfc_core::groups::{automorphisms, FiniteGroup, GroupMap, Order8};
use pfc_core::linalg::{smith_mod, smith_normal_form, verify_smith_full, IntMatrix, ModMatrix};
use pfc_core::module::{dual_module, FiniteModule};
use pfc_core::morita::{extension_shapes, omega_pair, omega_zero, quotient_groups, realize_cochains, solve_epsilon};
use pfc_core::report::{compute_all, Computation};

pub fn computation() -> &'static Computation {
    static C: OnceLock<Computation> = OnceLock::new();
    C.get_or_init(|| compute_all().expect("full classification succeeds"))
}

pub fn shapes() -> &'static [(FiniteGroup, FiniteModule)] {
    static S: OnceLock<Vec<(FiniteGroup, FiniteModule)>> = OnceLock::new();
    S.get_or_init(extension_shapes)
}

pub fn catalog_automorphisms() -> &'static [Vec<GroupMap>] {
    static A: OnceLock<Vec<Vec<GroupMap>>> = OnceLock::new();
    A.get_or_init(|| Order8::ALL.iter().map(|g| automorphisms(&g.group())).collect())
}

/// Catalog groups plus the small quotient groups.
pub fn all_groups() -> Vec<FiniteGroup> {
    let mut v: Vec<FiniteGroup> = quotient_groups().into_iter().filter(|g| g.order() > 1).collect();
    for g in Order8::ALL {
        if !v.iter().any(|h| h.table_hash() == g.group().table_hash()) {
            v.push(g.group());
        }
    }
    v
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_cochain(rng: &mut ChaCha8Rng, order: usize, degree: usize, coeffs: Coefficients) -> Cochain {
    let rank = coeffs.rank();
    Cochain::from_fn(order, degree, coeffs, |_| (0..rank).map(|_| rng.gen_range(-1000..1000)).collect())
}

fn random_coeffs(rng: &mut ChaCha8Rng) -> (FiniteGroup, Coefficients) {
    match rng.gen_range(0..3) {
        0 => {
            let gs = all_groups();
            (gs[rng.gen_range(0..gs.len())].clone(), Coefficients::Integer)
        }
        1 => {
            let gs = all_groups();
            (gs[rng.gen_range(0..gs.len())].clone(), Coefficients::Torus { exp: rng.gen_range(1..=DEFAULT_K) })
        }
        _ => {
            let nontrivial: Vec<_> = shapes().iter().filter(|(k, a)| k.order() > 1 && a.size() > 1).collect();
            let (k, a) = nontrivial[rng.gen_range(0..nontrivial.len())];
            let m = if rng.gen_bool(0.5) { a.clone() } else { dual_module(k, a) };
            (k.clone(), Coefficients::Module(m))
        }
    }
}

/// `δ∘δ = 0` on a random cochain.
pub fn check_dd_zero(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (g, coeffs) = random_coeffs(&mut r);
    let degree = r.gen_range(0..=3);
    let f = random_cochain(&mut r, g.order(), degree, coeffs.clone());
    let dd = coboundary(&g, &coboundary(&g, &f));
    if dd.is_zero() {
        Ok(())
    } else {
        Err(format!("δδ ≠ 0 on {} degree {degree} coefficients {}", g.name(), coeffs.label()))
    }
}

/// `(φ∘ψ)* = ψ*∘φ*` on cochains and on cohomology coordinates.
pub fn check_pullback_functoriality(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let gi = r.gen_range(0..Order8::ALL.len());
    let g = Order8::ALL[gi].group();
    let auts = &catalog_automorphisms()[gi];
    let phi = &auts[r.gen_range(0..auts.len())];
    let psi = &auts[r.gen_range(0..auts.len())];
    let degree = r.gen_range(1..=3);
    let eta = random_cochain(&mut r, 8, degree, Coefficients::torus());
    if pullback(&phi.compose(psi), &eta) != pullback(psi, &pullback(phi, &eta)) {
        return Err(format!("pullback not functorial on {} cochains", g.name()));
    }
    let h3 = torus_h3(&g).map_err(|e| e.to_string())?;
    let coords: Vec<u64> = h3.invariant_factors.iter().map(|&d| r.gen_range(0..d)).collect();
    let rep = h3.representative(&coords);
    let lhs = h3.class_coordinates(&g, &pullback(&phi.compose(psi), &rep)).map_err(|e| e.to_string())?;
    let rhs = h3.class_coordinates(&g, &pullback(psi, &pullback(phi, &rep))).map_err(|e| e.to_string())?;
    if lhs != rhs {
        return Err(format!("pullback not functorial on H³({})", g.name()));
    }
    Ok(())
}

/// `class_coordinates(η + δβ) = class_coordinates(η)`.
pub fn check_coboundary_invariance(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (g, coeffs) = loop {
        let c = random_coeffs(&mut r);
        if !matches!(c.1, Coefficients::Integer) {
            break c;
        }
    };
    let degree = r.gen_range(2..=3);
    let coeffs = match coeffs {
        Coefficients::Torus { .. } => Coefficients::torus(),
        c => c,
    };
    let h = cohomology_group(&g, degree, &coeffs, DEFAULT_K).map_err(|e| e.to_string())?;
    let coords: Vec<u64> = h.invariant_factors.iter().map(|&d| r.gen_range(0..d)).collect();
    let eta = h.representative(&coords);
    let beta = random_cochain(&mut r, g.order(), degree - 1, coeffs.clone());
    let shifted = eta.add(&coboundary(&g, &beta));
    let got = h.class_coordinates(&g, &shifted).map_err(|e| e.to_string())?;
    if got != coords {
        return Err(format!("coordinates moved under a coboundary on {} H^{degree}({})", g.name(), coeffs.label()));
    }
    Ok(())
}

fn class_pairs(k: &FiniteGroup, a: &FiniteModule, f: &Cochain, f_hat: &Cochain) -> Result<Option<BTreeSet<(usize, usize)>>, String> {
    let census = &computation().census;
    let Some(pairs) = realize_cochains(k, a, f, f_hat).map_err(|e| e.to_string())? else { return Ok(None) };
    Ok(Some(
        pairs
            .into_iter()
            .map(|(_, p)| (census.class_of_coords(p.group, &p.coords), census.class_of_coords(p.dual_group, &p.dual_coords)))
            .collect(),
    ))
}

fn random_extension_data(r: &mut ChaCha8Rng) -> Result<(FiniteGroup, FiniteModule, FiniteModule, Cochain, Cochain), String> {
    let (k, a) = shapes()[r.gen_range(0..shapes().len())].clone();
    let dual = dual_module(&k, &a);
    let ha = cohomology_group(&k, 2, &Coefficients::Module(a.clone()), DEFAULT_K).map_err(|e| e.to_string())?;
    let hd = cohomology_group(&k, 2, &Coefficients::Module(dual.clone()), DEFAULT_K).map_err(|e| e.to_string())?;
    let fc: Vec<u64> = ha.invariant_factors.iter().map(|&d| r.gen_range(0..d)).collect();
    let dc: Vec<u64> = hd.invariant_factors.iter().map(|&d| r.gen_range(0..d)).collect();
    Ok((k, a, dual, ha.representative(&fc), hd.representative(&dc)))
}

/// The realized set `{([ω], [ω̂])}` over `[κ]` is unchanged by `F̂ ↦ F̂ + δλ`
/// and `F ↦ F + δλ'` (with `ε` re-solved).
pub fn check_f_hat_shift(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (k, a, dual, f, f_hat) = random_extension_data(&mut r)?;
    let lambda = random_cochain(&mut r, k.order(), 1, Coefficients::Module(dual));
    let lambda_a = random_cochain(&mut r, k.order(), 1, Coefficients::Module(a.clone()));
    let base = class_pairs(&k, &a, &f, &f_hat)?;
    let shifted_hat = class_pairs(&k, &a, &f, &f_hat.add(&coboundary(&k, &lambda)))?;
    let shifted_f = class_pairs(&k, &a, &f.add(&coboundary(&k, &lambda_a)), &f_hat)?;
    if base != shifted_hat || base != shifted_f {
        return Err(format!("realized classes moved under a coboundary shift for K = {}, A = {:?}", k.name(), a.factors));
    }
    Ok(())
}

/// `[ω]`, `[ω̂]` are unchanged by `ε ↦ ε + δμ`, for every `[κ]`.
pub fn check_epsilon_shift(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (k, a, _, f, f_hat_left) = random_extension_data(&mut r)?;
    let f_hat = left_to_right(&k, &f_hat_left);
    let ext = build_extension(&k, &a, &f).map_err(|e| e.to_string())?;
    let dual = build_dual_group(&k, &a, &f_hat).map_err(|e| e.to_string())?;
    let omega0 = omega_zero(&ext, &f_hat, DEFAULT_K);
    let Some(eps) = solve_epsilon(&ext, &omega0).map_err(|e| e.to_string())? else { return Ok(()) };
    let mu = random_cochain(&mut r, k.order(), 2, Coefficients::torus());
    let eps2 = eps.add(&coboundary(&k, &mu));
    let h3k = torus_h3(&k).map_err(|e| e.to_string())?;
    let h3g = torus_h3(&ext.group).map_err(|e| e.to_string())?;
    let h3d = torus_h3(&dual.group).map_err(|e| e.to_string())?;
    let kc: Vec<u64> = h3k.invariant_factors.iter().map(|&d| r.gen_range(0..d)).collect();
    let kappa = h3k.representative(&kc);
    let (w1, wh1) = omega_pair(&ext, &dual, &omega0, &eps.add(&kappa)).map_err(|e| e.to_string())?;
    let (w2, wh2) = omega_pair(&ext, &dual, &omega0, &eps2.add(&kappa)).map_err(|e| e.to_string())?;
    let c = |h: &pfc_core::cohomology::CohomologyGroup, g: &FiniteGroup, w: &Cochain| h.class_coordinates(g, w).map_err(|e| e.to_string());
    if c(&h3g, &ext.group, &w1)? != c(&h3g, &ext.group, &w2)? || c(&h3d, &dual.group, &wh1)? != c(&h3d, &dual.group, &wh2)? {
        return Err(format!("ε-shift changed a class for K = {}, A = {:?}", k.name(), a.factors));
    }
    Ok(())
}

/// `U·A·V = D` for random integer and mod-`2^k` matrices, and invariant
/// factors stable under row/column permutation.
pub fn check_smith(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (rows, cols) = (r.gen_range(1..7), r.gen_range(1..7));
    let entries: Vec<i64> = (0..rows * cols).map(|_| r.gen_range(-12..=12)).collect();
    let a = IntMatrix::from_i64(rows, cols, &entries);
    let s = smith_normal_form(&a);
    if !s.verify(&a) {
        return Err("integer SNF does not reconstruct".into());
    }
    let rp: Vec<usize> = {
        let mut p: Vec<usize> = (0..rows).collect();
        p.sort_by_key(|_| r.gen::<u32>());
        p
    };
    let cp: Vec<usize> = {
        let mut p: Vec<usize> = (0..cols).collect();
        p.sort_by_key(|_| r.gen::<u32>());
        p
    };
    let permuted: Vec<i64> = (0..rows).flat_map(|i| cp.iter().map(move |&j| (i, j))).map(|(i, j)| entries[rp[i] * cols + j]).collect();
    if smith_normal_form(&IntMatrix::from_i64(rows, cols, &permuted)).invariant_factors != s.invariant_factors {
        return Err("invariant factors depend on row/column order".into());
    }
    let exp = r.gen_range(1..=16);
    let m = ModMatrix::from_i64(rows, cols, exp, &entries);
    let ms = smith_mod(&m, true);
    if !verify_smith_full(&m, &ms) {
        return Err(format!("mod-2^{exp} SNF does not reconstruct"));
    }
    Ok(())
}

/// Invariant factors agree at precision `k` and `k + 1`.
pub fn check_stabilization() -> Result<usize, String> {
    let mut n = 0;
    for g in all_groups() {
        for degree in 1..=4 {
            let mut coeffs = vec![Coefficients::Integer];
            if degree <= 3 {
                coeffs.push(Coefficients::torus());
            }
            for c in coeffs {
                let a = cohomology_group(&g, degree, &c, DEFAULT_K).map_err(|e| e.to_string())?;
                let b = cohomology_group(&g, degree, &c, DEFAULT_K + 1).map_err(|e| e.to_string())?;
                if a.invariant_factors != b.invariant_factors {
                    return Err(format!("H^{degree}({}, {}) unstable", g.name(), c.label()));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Runs `check` on seeds `0..count`, returning the first failure.
pub fn run_seeds(count: u64, salt: u64, check: impl Fn(u64) -> Result<(), String>) -> Result<(), String> {
    (0..count).try_for_each(|i| check(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ i).map_err(|e| format!("seed {i}: {e}")))
}
