//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its measured runtime (visible under `--nocapture`).
//! All checks are exact; the runtime bounds are asserted.

use std::time::Instant;

use cocfg::*;
use num_bigint::BigUint;

fn base_scheme(p: u64) -> (PaperGroupBundle, Scheme) {
    let b = build_paper_group(p).unwrap();
    let sch = cayley_scheme(&b.group, &paper_partition(&b));
    (b, sch)
}

fn fusion_scheme(b: &PaperGroupBundle, level: FusionLevel) -> Scheme {
    cayley_scheme(&b.group, &fusion_partition(b, level))
}

fn seeds_of(b: &PaperGroupBundle) -> PermGroup {
    right_translation_group(&b.group).unwrap()
}

#[test]
fn criterion_01_construction_and_coherence() {
    let start = Instant::now();
    let (_, sch) = base_scheme(5);
    assert_eq!(sch.degree(), 100);
    assert_eq!(sch.rank(), 40);
    let valencies = sch.valencies().unwrap();
    assert_eq!(valencies.iter().filter(|&&v| v == 1).count(), 25);
    assert_eq!(valencies.iter().filter(|&&v| v == 5).count(), 15);
    let out = wl_stabilize(sch.degree(), sch.colors()).unwrap();
    assert!(out.was_fixpoint());
    assert_eq!(out.scheme, sch);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "took {elapsed:?}");
    println!(
        "criterion 01 PASS ({elapsed:?}): degree 100, rank 40, valencies 25x1 + 15x5, WL fixpoint"
    );
}

#[test]
fn criterion_02_ring_and_scheme_properties() {
    let start = Instant::now();
    for p in [5u64, 7] {
        let b = build_paper_group(p).unwrap();
        b.verify().unwrap();
        let s = paper_partition(&b);
        let report = validate_schur(&b.group, &s);
        assert!(report.is_schur_partition(), "p={p}");
        assert!(report.commutative, "p={p}");

        // positivity pattern over all eligible triples
        let family = |i: usize| -> Vec<usize> {
            let g = &b.group;
            let mut fam = Vec::new();
            for &q in &b.p_set {
                let mut t: Vec<u32> =
                    b.x_sets[i].iter().map(|&x| g.mul(x, q) as u32).collect();
                t.sort_unstable();
                let idx = s.find_set(&t).unwrap();
                if !fam.contains(&idx) {
                    fam.push(idx);
                }
            }
            fam.sort_unstable();
            fam
        };
        let families = [family(0), family(1), family(2)];
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let k = 3 - i - j;
                for &ti in &families[i] {
                    for &tj in &families[j] {
                        for t in 0..s.len() {
                            assert_eq!(
                                report.constants.get(ti, tj, t) > 0,
                                families[k].binary_search(&t).is_ok(),
                                "p={p} ({ti},{tj},{t})"
                            );
                        }
                    }
                }
            }
        }

        let sch = cayley_scheme(&b.group, &s);
        let breport = verify_b_properties(&sch).unwrap();
        assert!(breport.all_pass(), "p={p}: {breport:?}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    println!("criterion 02 PASS ({elapsed:?}): A- and B-properties exhaustive at p = 5, 7");
}

#[test]
fn criterion_03_meet_identities() {
    let start = Instant::now();
    for p in [5u64, 7] {
        let b = build_paper_group(p).unwrap();
        let s = paper_partition(&b);
        let s1 = fusion_partition(&b, FusionLevel::Single(1));
        let s2 = fusion_partition(&b, FusionLevel::Single(2));
        assert_eq!(meet_partitions(&s1, &s2).unwrap(), s);
        let s12 = fusion_partition(&b, FusionLevel::Pair(1, 2));
        let s13 = fusion_partition(&b, FusionLevel::Pair(1, 3));
        assert_eq!(meet_partitions(&s12, &s13).unwrap(), s1);

        let x = cayley_scheme(&b.group, &s);
        let x1 = cayley_scheme(&b.group, &s1);
        let x2 = cayley_scheme(&b.group, &s2);
        assert_eq!(x1.meet(&x2).unwrap(), x);
        let x12 = cayley_scheme(&b.group, &s12);
        let x13 = cayley_scheme(&b.group, &s13);
        assert_eq!(x12.meet(&x13).unwrap(), x1);
    }
    let elapsed = start.elapsed();
    println!("criterion 03 PASS ({elapsed:?}): meet identities exact at p = 5, 7");
}

#[test]
fn criterion_04_automorphism_orders() {
    let start = Instant::now();
    let (b, sch) = base_scheme(5);
    let seeds = seeds_of(&b);
    let limits = SearchLimits::default();

    let aut = automorphism_group(&sch, seeds.generators(), &limits).unwrap();
    assert_eq!(aut.order(), BigUint::from(100u32));
    assert_eq!(aut.regularity_class(), RegularityClass::Regular);

    let singles: Vec<PermGroup> = (1..=3)
        .map(|i| {
            let s = fusion_scheme(&b, FusionLevel::Single(i));
            automorphism_group(&s, seeds.generators(), &limits).unwrap()
        })
        .collect();
    for a in &singles {
        assert_eq!(a.order(), BigUint::from(2500u32));
    }

    let zero = {
        let s = fusion_scheme(&b, FusionLevel::Zero);
        automorphism_group(&s, seeds.generators(), &limits).unwrap()
    };
    assert_eq!(zero.order(), BigUint::from(1_562_500u64));

    let i12 = PermGroup::intersection(&singles[0], &singles[1]).unwrap();
    assert_eq!(i12.order(), BigUint::from(100u32));

    let a12 = {
        let s = fusion_scheme(&b, FusionLevel::Pair(1, 2));
        automorphism_group(&s, seeds.generators(), &limits).unwrap()
    };
    let a13 = {
        let s = fusion_scheme(&b, FusionLevel::Pair(1, 3));
        automorphism_group(&s, seeds.generators(), &limits).unwrap()
    };
    let ipairs = PermGroup::intersection(&a12, &a13).unwrap();
    assert_eq!(ipairs.order(), BigUint::from(2500u32));

    // the chain inequality behind regularity
    let bound = BigUint::from(16u64) * BigUint::from(5u64).pow(12);
    assert!(a12.order() * a13.order() <= bound);
    let lower = singles[0].order() * singles[1].order() / i12.order();
    assert!(lower >= BigUint::from(100u32));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}");
    println!(
        "criterion 04 PASS ({elapsed:?}): orders 100 (regular), 2500, 1562500; intersections 100, 2500"
    );
}

#[test]
fn criterion_05_nonschurity() {
    let start = Instant::now();
    for p in [5u64, 7] {
        let (b, sch) = base_scheme(p);
        let seeds = seeds_of(&b);
        let report = is_schurian(&sch, seeds.generators(), &SearchLimits::default()).unwrap();
        assert!(!report.schurian, "p={p}");
        let (_, size) = report.witness.unwrap();
        assert_eq!(size, 4 * p * p * p, "p={p}");
        assert_eq!(report.orbital_rank as u64, 4 * p * p, "p={p}");
        assert_ne!(report.orbital_rank as u64, p * p + 3 * p, "p={p}");
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 05 PASS ({elapsed:?}): nonschurian at p = 5, 7 with witness sizes 500, 1372"
    );
}

#[test]
fn criterion_06_separability_audit() {
    let start = Instant::now();
    let (_, sch) = base_scheme(5);
    let report = separability_audit(&sch, &SearchLimits::default()).unwrap();
    assert!(report.algebraic_automorphism_count > 0);
    assert_eq!(report.inconclusive_count, 0);
    assert!(report.failures.is_empty());
    assert!(report.all_induced());
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}");
    println!(
        "criterion 06 PASS ({elapsed:?}): {} algebraic automorphisms, all induced, none inconclusive",
        report.algebraic_automorphism_count
    );
}

#[test]
fn criterion_07_candidate_group_census() {
    let start = Instant::now();
    let p = 5u64;
    let rows = candidate_census(p).unwrap();
    let k2: Vec<u64> = rows.iter().map(|r| r.involutions).collect();
    assert_eq!(k2, vec![3, 11, 35, 51]);
    assert_eq!(k2[1], 2 * p + 1);
    assert!(k2[2] >= p * p && k2[3] >= p * p);
    for row in &rows {
        assert_eq!(row.sylow_count, 1, "{:?}", row.kind);
        assert!(row.sylow_elementary_abelian, "{:?}", row.kind);
        assert!(row.quotient_klein, "{:?}", row.kind);
    }
    assert!(dihedral_pairs_share_rotations(p).unwrap());
    let elapsed = start.elapsed();
    println!("criterion 07 PASS ({elapsed:?}): census 3, 11, 35, 51 with unique elementary Sylow");
}

#[test]
fn criterion_08_cayley_isomorphism_roundtrip() {
    let start = Instant::now();
    let b = build_paper_group(5).unwrap();
    let s = paper_partition(&b);
    let autos = schur_automorphisms(&b);
    assert!(autos.len() >= 20);
    for sigma in autos.iter().take(20) {
        let psi = sigma
            .induced_set_bijection(&s, &s)
            .expect("partition-preserving automorphism");
        let f = cayley_iso_from_algebraic(&b.group, &s, &b.group, &s, &psi).unwrap();
        let induced = f
            .induced_set_bijection(&s, &s)
            .expect("constructed isomorphism maps basic sets to basic sets");
        assert_eq!(induced, psi);
    }
    let elapsed = start.elapsed();
    println!("criterion 08 PASS ({elapsed:?}): 20 reconstructed isomorphisms reproduce their set actions");
}

#[test]
fn criterion_09_oracle_cross_checks() {
    let start = Instant::now();
    let (b, sch) = base_scheme(5);
    let seeds = seeds_of(&b);

    // chain order vs explicit closure for every order-100 group used here
    let closure_count = |gens: &[Perm]| -> usize {
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(Perm::identity(100).images().to_vec());
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
    assert_eq!(closure_count(seeds.generators()), 100);
    let aut = automorphism_group(&sch, seeds.generators(), &SearchLimits::default()).unwrap();
    assert_eq!(BigUint::from(closure_count(&aut.strong_generators())), aut.order());

    // tensor vs brute-force path counts over all 10⁴ point pairs
    let tensor = IntersectionTensor::from_scheme(&sch).unwrap();
    let n = sch.degree();
    let r = sch.rank();
    let mut counts = vec![0u64; r * r];
    for a in 0..n {
        for bp in 0..n {
            let u = sch.color(a, bp) as usize;
            counts.iter_mut().for_each(|c| *c = 0);
            for g in 0..n {
                counts[sch.color(a, g) as usize * r + sch.color(g, bp) as usize] += 1;
            }
            for s in 0..r {
                for t in 0..r {
                    assert_eq!(tensor.get(s, t, u), counts[s * r + t]);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    println!("criterion 09 PASS ({elapsed:?}): chain orders and tensor entries match brute force");
}

#[test]
fn criterion_10_scale_probe_p13() {
    let start = Instant::now();
    let b = build_paper_group(13).unwrap();
    b.verify().unwrap();
    let s = paper_partition(&b);
    assert_eq!(s.len(), 13 * 13 + 3 * 13);
    let report = validate_schur(&b.group, &s);
    assert!(report.is_schur_partition());
    assert!(report.commutative);

    // positivity pattern at scale
    let family = |i: usize| -> Vec<usize> {
        let g = &b.group;
        let mut fam = Vec::new();
        for &q in &b.p_set {
            let mut t: Vec<u32> = b.x_sets[i].iter().map(|&x| g.mul(x, q) as u32).collect();
            t.sort_unstable();
            let idx = s.find_set(&t).unwrap();
            if !fam.contains(&idx) {
                fam.push(idx);
            }
        }
        fam.sort_unstable();
        fam
    };
    let families = [family(0), family(1), family(2)];
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let k = 3 - i - j;
            for &ti in &families[i] {
                for &tj in &families[j] {
                    for t in 0..s.len() {
                        assert_eq!(
                            report.constants.get(ti, tj, t) > 0,
                            families[k].binary_search(&t).is_ok()
                        );
                    }
                }
            }
        }
    }

    let sch = cayley_scheme(&b.group, &s);
    assert_eq!(sch.degree(), 676);
    assert_eq!(sch.rank(), 208);
    let out = wl_stabilize(sch.degree(), sch.colors()).unwrap();
    assert!(out.was_fixpoint());

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
    println!("criterion 10 PASS ({elapsed:?}): degree 676 built, coherent, and WL-stable");
}
