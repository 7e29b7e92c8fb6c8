//! Independent oracles: brute-force recomputation of quantities the library
//! derives through structured algorithms. These tests deliberately avoid the
//! code paths they check.

use std::collections::BTreeSet;

use cocfg::*;

/// Brute-force path counts over all point pairs must equal the tensor built
/// from one representative pair per color.
#[test]
fn tensor_matches_brute_force_path_counts() {
    let b = build_paper_group(5).unwrap();
    let sch = cayley_scheme(&b.group, &paper_partition(&b));
    let tensor = IntersectionTensor::from_scheme(&sch).unwrap();
    let n = sch.degree();
    let r = sch.rank();
    let mut counts = vec![0u64; r * r];
    for a in 0..n {
        for bpt in 0..n {
            let u = sch.color(a, bpt) as usize;
            counts.iter_mut().for_each(|c| *c = 0);
            for g in 0..n {
                let s = sch.color(a, g) as usize;
                let t = sch.color(g, bpt) as usize;
                counts[s * r + t] += 1;
            }
            for s in 0..r {
                for t in 0..r {
                    assert_eq!(
                        tensor.get(s, t, u),
                        counts[s * r + t],
                        "pair ({a}, {bpt}), colors ({s}, {t}, {u})"
                    );
                }
            }
        }
    }
}

/// Stabilizer-chain orders must equal plain closure enumeration for every
/// group of order ≤ 10⁴ exercised here.
#[test]
fn chain_orders_match_closure_enumeration() {
    let b = build_paper_group(5).unwrap();
    let seeds = right_translation_group(&b.group).unwrap();
    let limits = SearchLimits::default();

    let closure_order = |gens: &[Perm], degree: usize| -> usize {
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        seen.insert(Perm::identity(degree).images().to_vec());
        loop {
            let mut added = false;
            for imgs in seen.clone() {
                let p = Perm::from_images(imgs).unwrap();
                for g in gens {
                    if seen.insert(p.then(g).images().to_vec()) {
                        added = true;
                    }
                }
            }
            if !added {
                return seen.len();
            }
        }
    };

    // the translation group itself
    assert_eq!(closure_order(seeds.generators(), 100), 100);

    // Aut of the base scheme: order 100
    let sch = cayley_scheme(&b.group, &paper_partition(&b));
    let aut = automorphism_group(&sch, seeds.generators(), &limits).unwrap();
    assert_eq!(
        closure_order(&aut.strong_generators(), 100).to_string(),
        aut.order().to_string()
    );

    // Aut of the first one-coset fusion: order 2500
    let s1 = cayley_scheme(&b.group, &fusion_partition(&b, FusionLevel::Single(1)));
    let aut1 = automorphism_group(&s1, seeds.generators(), &limits).unwrap();
    assert_eq!(aut1.order().to_string(), "2500");
    assert_eq!(closure_order(&aut1.strong_generators(), 100), 2500);
}

/// Algebraic automorphisms of a regular group scheme's tensor correspond to
/// group automorphisms; the count is checked against a brute-force count of
/// generating pairs.
#[test]
fn regular_tensor_automorphism_count_matches_group_automorphisms() {
    let c10 = group::cyclic(10, "C10");
    let g = group::direct_product(&c10, &c10, "C10xC10");
    let sets: Vec<Vec<usize>> = (0..100).map(|x| vec![x]).collect();
    let part = BasicSetPartition::new(&g, sets).unwrap();
    let sch = cayley_scheme(&g, &part);
    let tensor = IntersectionTensor::from_scheme(&sch).unwrap();

    // brute force: G is generated by (g1, g2) = (10·1, 1); an endomorphism
    // is any pair of images, an automorphism one whose images generate
    let g1 = 10usize;
    let g2 = 1usize;
    assert_eq!(g.closure(&[g1, g2]).len(), 100);
    let mut auto_count = 0u64;
    for h1 in 0..100 {
        for h2 in 0..100 {
            if g.closure(&[h1, h2]).len() == 100 {
                auto_count += 1;
            }
        }
    }
    assert_eq!(auto_count, 2880);

    let phis = enumerate_algebraic_isos(&tensor, &tensor);
    assert_eq!(phis.len() as u64, auto_count);
}

/// The structure constant of two distinct generating cosets onto each
/// translate of the third is 1: recomputed by elementwise counting.
#[test]
fn coset_product_counts_are_one() {
    for p in [5u64, 7] {
        let b = build_paper_group(p).unwrap();
        let g = &b.group;
        let mut hits = vec![0u64; g.order()];
        for &x in &b.x_sets[0] {
            for &y in &b.x_sets[1] {
                hits[g.mul(x, y)] += 1;
            }
        }
        for &z in &b.y_sets[2] {
            assert_eq!(hits[z], 1, "p={p}, element {z}");
        }
        let total: u64 = hits.iter().sum();
        assert_eq!(total, p * p);
    }
}

/// Every non-identity automorphism of the base scheme is fixed-point-free
/// (semiregularity), checked by explicit enumeration of all 100 elements.
#[test]
fn base_scheme_automorphisms_are_fixed_point_free() {
    let b = build_paper_group(5).unwrap();
    let sch = cayley_scheme(&b.group, &paper_partition(&b));
    let seeds = right_translation_group(&b.group).unwrap();
    let aut = automorphism_group(&sch, seeds.generators(), &SearchLimits::default()).unwrap();
    let elements = aut.elements().unwrap();
    assert_eq!(elements.len(), 100);
    for e in &elements {
        if !e.is_identity() {
            assert_eq!(e.fixed_point_count(), 0);
        }
    }
}

/// 2-orbit partitions are coherent whatever the group.
#[test]
fn orbital_partitions_are_stable() {
    let b = build_paper_group(5).unwrap();
    let translations = right_translation_group(&b.group).unwrap();
    assert!(two_orbit_partition(&translations).is_stable());

    let table = build_candidate_group(CandidateKind::D2pXD2p, 5).unwrap();
    let g = right_translation_group(&table).unwrap();
    assert!(two_orbit_partition(&g).is_stable());
}

/// The group recovered from a regular scheme of a known group matches its
/// census and Sylow data.
#[test]
fn recovery_round_trip_census_and_sylow() {
    for kind in [CandidateKind::C2pXD2p, CandidateKind::Cp2SemidirectC2XC2] {
        let table = build_candidate_group(kind, 5).unwrap();
        let translations = right_translation_group(&table).unwrap();
        let sch = two_orbit_partition(&translations);
        let rec = recover_group_of_regular_scheme(
            &sch,
            translations.generators(),
            &SearchLimits::default(),
        )
        .unwrap();
        assert_eq!(rec.table.order_census(), table.order_census());
        let (m_orig, subs_orig) = table.sylow_subgroups(5).unwrap();
        let (m_rec, subs_rec) = rec.table.sylow_subgroups(5).unwrap();
        assert_eq!(m_orig, m_rec);
        assert_eq!(subs_orig[0].order(), subs_rec[0].order());
    }
}
