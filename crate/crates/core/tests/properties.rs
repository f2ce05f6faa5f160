//! Property tests for the algebraic invariants the engine relies on.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use pfc_core::cohomology::{coboundary, cohomology_group, pullback, Coefficients, DEFAULT_K};
use pfc_core::doubles::{build_double, Convention};
use pfc_core::extension::build_extension;
use pfc_core::groups::Order8;
use pfc_core::module::dual_module;
use pfc_core::morita::{identify, realize_cochains, validate_edge};
use pfc_core::orbits::restriction_signature;

fn check(r: Result<(), String>) -> Result<(), TestCaseError> {
    r.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn coboundary_squares_to_zero(seed in any::<u64>()) {
        check(common::check_dd_zero(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn pullback_is_functorial(seed in any::<u64>()) {
        check(common::check_pullback_functoriality(seed))?;
    }

    #[test]
    fn smith_forms_reconstruct_and_ignore_ordering(seed in any::<u64>()) {
        check(common::check_smith(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn class_coordinates_ignore_coboundaries(seed in any::<u64>()) {
        check(common::check_coboundary_invariance(seed))?;
    }

    #[test]
    fn realized_classes_ignore_cocycle_representatives(seed in any::<u64>()) {
        check(common::check_f_hat_shift(seed))?;
    }

    #[test]
    fn realized_classes_ignore_epsilon_choice(seed in any::<u64>()) {
        check(common::check_epsilon_shift(seed))?;
    }

    #[test]
    fn cohomologous_extension_cocycles_give_isomorphic_groups(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let shapes = common::shapes();
        let (k, a) = &shapes[r.gen_range(0..shapes.len())];
        let h2 = cohomology_group(k, 2, &Coefficients::Module(a.clone()), DEFAULT_K).unwrap();
        let coords: Vec<u64> = h2.invariant_factors.iter().map(|&d| r.gen_range(0..d)).collect();
        let f = h2.representative(&coords);
        let lambda = common::random_cochain(&mut r, k.order(), 1, Coefficients::Module(a.clone()));
        let g1 = build_extension(k, a, &f).unwrap();
        let g2 = build_extension(k, a, &f.add(&coboundary(k, &lambda))).unwrap();
        prop_assert_eq!(identify(&g1.group).unwrap().0, identify(&g2.group).unwrap().0);
    }

    #[test]
    fn morita_data_is_symmetric(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let shapes = common::shapes();
        let (k, a) = &shapes[r.gen_range(0..shapes.len())];
        let dual = dual_module(k, a);
        prop_assume!(dual_module(k, &dual) == *a);
        let ha = cohomology_group(k, 2, &Coefficients::Module(a.clone()), DEFAULT_K).unwrap();
        let hd = cohomology_group(k, 2, &Coefficients::Module(dual.clone()), DEFAULT_K).unwrap();
        let f = ha.representative(&ha.invariant_factors.iter().map(|&d| r.gen_range(0..d)).collect::<Vec<_>>());
        let f_hat = hd.representative(&hd.invariant_factors.iter().map(|&d| r.gen_range(0..d)).collect::<Vec<_>>());
        let census = &common::computation().census;
        let classes = |pairs: Option<pfc_core::morita::RealizedPairs>| -> Option<BTreeSet<(usize, usize)>> {
            pairs.map(|ps| ps.into_iter().map(|(_, p)| (census.class_of_coords(p.group, &p.coords), census.class_of_coords(p.dual_group, &p.dual_coords))).collect())
        };
        let forward = classes(realize_cochains(k, a, &f, &f_hat).unwrap());
        let backward = classes(realize_cochains(k, &dual, &f_hat, &f).unwrap());
        prop_assert_eq!(forward.is_some(), backward.is_some());
        if let (Some(fw), Some(bw)) = (forward, backward) {
            let partition = &common::computation().partition;
            // the mirrored data realizes the mirrored pairs up to Morita class
            let fw: BTreeSet<(usize, usize)> = fw.into_iter().map(|(x, y)| (partition.class_of(y), partition.class_of(x))).collect();
            let bw: BTreeSet<(usize, usize)> = bw.into_iter().map(|(x, y)| (partition.class_of(x), partition.class_of(y))).collect();
            prop_assert_eq!(fw, bw);
        }
    }

    #[test]
    fn double_commutativity_is_a_class_invariant(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let census = &common::computation().census;
        let c = &census.classes[r.gen_range(0..census.classes.len())];
        let t = census.table(c.group);
        let eta = t.h3.representative(&c.canonical);
        let auts = &common::catalog_automorphisms()[c.group.index()];
        let phi = &auts[r.gen_range(0..auts.len())];
        let beta = common::random_cochain(&mut r, 8, 2, Coefficients::torus());
        let moved = pullback(phi, &eta).add(&coboundary(&t.group, &beta));
        let base = build_double(&t.group, &eta, Convention::Standard).unwrap().is_commutative();
        prop_assert_eq!(build_double(&t.group, &moved, Convention::Standard).unwrap().is_commutative(), base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn orbit_fingerprints_are_orbit_invariants(gi in 0..5usize, pick in any::<u64>()) {
        let g = Order8::ALL[gi];
        let t = common::computation().census.table(g);
        let orbit = &t.orbits[(pick as usize) % t.orbits.len()];
        prop_assert_eq!(t.aut_order % orbit.size(), 0);
        let member = &orbit.members[(pick as usize / 7) % orbit.size()];
        prop_assert_eq!(t.h3.class_order(member), orbit.class_order);
        prop_assert_eq!(&restriction_signature(&t.group, &t.h3, member).unwrap(), &orbit.fingerprint.restriction_signature);
    }

    #[test]
    fn edge_witnesses_revalidate(pick in any::<u64>()) {
        let comp = common::computation();
        let edge = &comp.edges[(pick as usize) % comp.edges.len()];
        prop_assert!(validate_edge(&comp.census, edge).is_ok());
    }
}

#[test]
fn every_edge_witness_revalidates() {
    let comp = common::computation();
    for e in &comp.edges {
        validate_edge(&comp.census, e).unwrap();
    }
}

#[test]
fn cohomology_is_stable_in_precision() {
    assert!(common::check_stabilization().unwrap() > 0);
}
