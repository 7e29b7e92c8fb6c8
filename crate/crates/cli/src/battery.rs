//! The verification battery: every structural fact the construction is
//! supposed to satisfy, staged and reported. Stage names accept aliases so
//! single checks can be re-run in isolation.

use std::fs;
use std::path::Path;

use cocfg::io::to_json_pretty;
use cocfg::*;
use num_bigint::BigUint;

use crate::report::{check, fail, pass, Report, ReportConfig, StageOutcome};
use crate::{Outcome, RunConfig, SchemeArgs};

const STAGES: &[(&str, &[&str])] = &[
    ("group", &[]),
    ("schur", &["sring"]),
    ("ring-properties", &["propertyring"]),
    ("ring-meets", &["orderring"]),
    ("ring-fusions", &["fusionring"]),
    ("scheme", &[]),
    ("scheme-properties", &["propertyscheme"]),
    ("scheme-meets", &["orderscheme"]),
    ("scheme-fusions", &["fusionscheme"]),
    ("aut-orders", &["autchain"]),
    ("fixed-point", &["aux"]),
    ("nonschurity", &[]),
    ("census", &["groups"]),
    ("cayley-iso", &["cayleyiso"]),
    ("separability", &["audit"]),
];

/// Search-driven stages run by default only up to this p; beyond it they
/// need an explicit --budget (or --lemma selection) to opt in.
const SEARCH_DEFAULT_MAX_P: u64 = 7;

fn resolve_stage(token: &str) -> Option<&'static str> {
    if token == "list" {
        return None;
    }
    STAGES
        .iter()
        .find(|(name, aliases)| *name == token || aliases.contains(&token))
        .map(|(name, _)| *name)
}

pub fn verify(args: &SchemeArgs, lemma: Option<&str>, out: Option<&Path>) -> Outcome {
    let cfg = match RunConfig::from_args(args) {
        Ok(cfg) => cfg,
        Err(e) => return Outcome::UsageError(e),
    };
    let selected = match lemma {
        None => None,
        Some(token) => match resolve_stage(token) {
            Some(name) => Some(name),
            None => {
                let names: Vec<&str> = STAGES.iter().map(|(n, _)| *n).collect();
                return Outcome::UsageError(format!(
                    "unknown stage {token:?}; available: {}",
                    names.join(", ")
                ));
            }
        },
    };

    let mut report = Report::new(ReportConfig {
        p: cfg.p,
        fusion: cfg.fusion.map(|f| f.token()),
        lemma: selected.map(str::to_string),
        budget: cfg.budget,
        override_max_p: cfg.max_p > DEFAULT_MAX_P,
    });

    match cfg.fusion {
        Some(level) => verify_fusion(&cfg, level, &mut report),
        None => verify_full(&cfg, selected, &mut report),
    }

    if let Some(dir) = out {
        if let Err(e) = fs::create_dir_all(dir)
            .and_then(|_| fs::write(dir.join("report.json"), render(&report)))
        {
            return Outcome::UsageError(format!("writing report: {e}"));
        }
    }
    if report.inconclusive {
        println!("verdict: INCONCLUSIVE (raise --budget)");
        Outcome::Inconclusive
    } else if report.passed {
        println!("verdict: PASS");
        Outcome::Pass
    } else {
        println!("verdict: FAIL");
        Outcome::VerifyFailure
    }
}

fn render(report: &Report) -> String {
    to_json_pretty(report).expect("report serializes")
}

fn translate_families(b: &PaperGroupBundle, s: &BasicSetPartition) -> [Vec<usize>; 3] {
    let g = &b.group;
    let mut out: [Vec<usize>; 3] = Default::default();
    for i in 0..3 {
        for &q in &b.p_set {
            let mut t: Vec<u32> = b.x_sets[i].iter().map(|&x| g.mul(x, q) as u32).collect();
            t.sort_unstable();
            if let Some(idx) = s.find_set(&t) {
                if !out[i].contains(&idx) {
                    out[i].push(idx);
                }
            }
        }
        out[i].sort_unstable();
    }
    out
}

fn verify_full(cfg: &RunConfig, selected: Option<&str>, report: &mut Report) {
    let p = cfg.p;
    let opts = BundleOptions {
        max_p: cfg.max_p,
        ..BundleOptions::default()
    };
    let bundle = match build_paper_group_with(p, &opts) {
        Ok(b) => b,
        Err(e) => {
            report.stage("group", || fail(e.to_string()));
            return;
        }
    };
    let part = paper_partition(&bundle);
    let schur = validate_schur(&bundle.group, &part);
    let scheme = cayley_scheme(&bundle.group, &part);
    let limits = cfg.limits();

    let wants = |name: &str| selected.is_none() || selected == Some(name);
    let search_allowed = p <= SEARCH_DEFAULT_MAX_P || cfg.budget.is_some();
    let run_search = |name: &str| {
        wants(name) && (search_allowed || selected == Some(name))
    };

    if wants("group") {
        report.stage("group", || match bundle.verify() {
            Ok(()) => pass(format!(
                "group of order {} with verified axioms and bundle invariants",
                bundle.group.order()
            )),
            Err(e) => fail(e.to_string()),
        });
    }

    if wants("schur") {
        report.stage("schur", || {
            let mut ok = schur.is_schur_partition() && schur.commutative;
            let mut details = format!(
                "{} basic sets, commutative {}",
                part.len(),
                schur.commutative
            );
            for level in FusionLevel::ALL {
                let f = fusion_partition(&bundle, level);
                let r = validate_schur(&bundle.group, &f);
                if !r.is_schur_partition() || !f.refines(&part) {
                    ok = false;
                    details = format!("fusion {} fails validation", level.token());
                }
            }
            check(ok, details)
        });
    }

    if wants("ring-properties") {
        report.stage("ring-properties", || {
            let mut singles: Vec<usize> = part
                .sets()
                .iter()
                .filter(|x| x.len() == 1)
                .map(|x| x[0] as usize)
                .collect();
            singles.sort_unstable();
            if singles != bundle.p_set {
                return fail("thin part differs from the p-part".to_string());
            }
            for i in 0..3 {
                if bundle.radical_of_set(&bundle.x_sets[i]) != bundle.p_subs[i] {
                    return fail(format!("radical of X{} is not P{}", i + 1, i + 1));
                }
            }
            let families = translate_families(&bundle, &part);
            for i in 0..3 {
                for j in 0..3 {
                    if i == j {
                        continue;
                    }
                    let k = 3 - i - j;
                    for &ti in &families[i] {
                        for &tj in &families[j] {
                            for t in 0..part.len() {
                                if (schur.constants.get(ti, tj, t) > 0)
                                    != families[k].binary_search(&t).is_ok()
                                {
                                    return fail(format!(
                                        "positivity pattern broken at ({ti}, {tj}, {t})"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            pass("thin part, radicals, and positivity pattern all exact")
        });
    }

    if wants("ring-meets") {
        report.stage("ring-meets", || {
            let s1 = fusion_partition(&bundle, FusionLevel::Single(1));
            let s2 = fusion_partition(&bundle, FusionLevel::Single(2));
            if meet_partitions(&s1, &s2).unwrap() != part {
                return fail("meet of one-coset fusions is not the base partition".to_string());
            }
            let s12 = fusion_partition(&bundle, FusionLevel::Pair(1, 2));
            let s13 = fusion_partition(&bundle, FusionLevel::Pair(1, 3));
            if meet_partitions(&s12, &s13).unwrap() != s1 {
                return fail("meet of two-coset fusions is not the one-coset fusion".to_string());
            }
            pass("both meet identities hold with exact partition equality")
        });
    }

    if wants("ring-fusions") {
        report.stage("ring-fusions", || {
            for i in 1..=3 {
                let s = fusion_partition(&bundle, FusionLevel::Single(i));
                match recognize_products(&bundle.group, &bundle, &s) {
                    FusionStructure::TensorOfWreaths {
                        factors,
                        tensor_product_matches,
                    } if tensor_product_matches
                        && factors.iter().all(|f| f.is_rank_p_wreath_rank_2(p)) => {}
                    other => return fail(format!("fusion {i}: {other:?}")),
                }
            }
            let s0 = fusion_partition(&bundle, FusionLevel::Zero);
            match recognize_products(&bundle.group, &bundle, &s0) {
                FusionStructure::WreathOverBase {
                    base_is_full_group_ring: true,
                    quotient_rank: 4,
                    quotient_is_full_group_ring: true,
                    ..
                } => {}
                other => return fail(format!("all-coset fusion: {other:?}")),
            }
            let r0 = validate_schur(&bundle.group, &s0);
            let ys: Vec<usize> = (0..3)
                .map(|i| {
                    let set: Vec<u32> = bundle.y_sets[i].iter().map(|&x| x as u32).collect();
                    s0.find_set(&set).unwrap()
                })
                .collect();
            if r0.constants.get(ys[0], ys[1], ys[2]) != p * p {
                return fail("coset product constant differs from p²".to_string());
            }
            pass("tensor-of-wreaths and wreath-over-base structure verified")
        });
    }

    if wants("scheme") {
        report.stage("scheme", || {
            let expected_rank = (p * p + 3 * p) as usize;
            if scheme.degree() as u64 != 4 * p * p || scheme.rank() != expected_rank {
                return fail(format!(
                    "degree {} rank {}",
                    scheme.degree(),
                    scheme.rank()
                ));
            }
            let out = wl_stabilize(scheme.degree(), scheme.colors()).unwrap();
            check(
                out.was_fixpoint() && out.scheme == scheme,
                format!(
                    "degree {}, rank {}, stabilization is a fixpoint",
                    scheme.degree(),
                    scheme.rank()
                ),
            )
        });
    }

    if wants("scheme-properties") {
        report.stage("scheme-properties", || match verify_b_properties(&scheme) {
            Ok(r) if r.all_pass() => pass("commutativity and all three structural properties hold"),
            Ok(r) => fail(format!("{r:?}")),
            Err(e) => fail(e.to_string()),
        });
    }

    if wants("scheme-meets") {
        report.stage("scheme-meets", || {
            let mk = |lvl| cayley_scheme(&bundle.group, &fusion_partition(&bundle, lvl));
            let x1 = mk(FusionLevel::Single(1));
            let x2 = mk(FusionLevel::Single(2));
            if x1.meet(&x2).unwrap() != scheme {
                return fail("scheme meet of one-coset fusions differs".to_string());
            }
            let x12 = mk(FusionLevel::Pair(1, 2));
            let x13 = mk(FusionLevel::Pair(1, 3));
            if x12.meet(&x13).unwrap() != x1 {
                return fail("scheme meet of two-coset fusions differs".to_string());
            }
            pass("both meet identities hold")
        });
    }

    if wants("scheme-fusions") {
        report.stage("scheme-fusions", || {
            let mk = |lvl| cayley_scheme(&bundle.group, &fusion_partition(&bundle, lvl));
            let zero = mk(FusionLevel::Zero);
            for i in 1..=3usize {
                let xi = mk(FusionLevel::Single(i));
                if !xi.is_fusion_of(&scheme).unwrap() {
                    return fail(format!("one-coset fusion {i} is not a fusion"));
                }
                for (a, bb) in [(1, 2), (1, 3), (2, 3)] {
                    if a != i && bb != i {
                        continue;
                    }
                    let xab = mk(FusionLevel::Pair(a, bb));
                    if !xab.is_fusion_of(&xi).unwrap() {
                        return fail(format!("fusion {a}{bb} not below fusion {i}"));
                    }
                    if !zero.is_fusion_of(&xab).unwrap() {
                        return fail(format!("all-coset fusion not below {a}{bb}"));
                    }
                }
            }
            check(
                !scheme.is_fusion_of(&zero).unwrap(),
                "fusion chain ordered correctly, strictness confirmed",
            )
        });
    }

    let seeds = right_translation_group(&bundle.group).unwrap();

    if run_search("aut-orders") {
        report.stage("aut-orders", || {
            aut_chain(p, &bundle, &scheme, &seeds, &limits)
        });
    } else if wants("aut-orders") {
        report.skip("aut-orders", "needs --budget at this p");
    }

    if run_search("fixed-point") {
        report.stage("fixed-point", || {
            let thin = thin_radical(&scheme).unwrap();
            let aut = match automorphism_group(&scheme, seeds.generators(), &limits) {
                Ok(a) => a,
                Err(SearchError::Budget(n)) => {
                    return StageOutcome::Inconclusive(format!("budget {n}"))
                }
                Err(e) => return fail(e.to_string()),
            };
            match aut.elements() {
                Ok(elements) => {
                    for f in &elements {
                        if verify_fixed_point_lemma(&scheme, &thin.parabolic, f)
                            != Ok(FixedPointOutcome::HypothesisFails)
                            && !f.is_identity()
                        {
                            return fail("a nonidentity automorphism fixes a point per class".to_string());
                        }
                    }
                    pass(format!(
                        "all {} automorphisms checked against the thin parabolic",
                        elements.len()
                    ))
                }
                Err(e) => fail(e.to_string()),
            }
        });
    } else if wants("fixed-point") {
        report.skip("fixed-point", "needs --budget at this p");
    }

    if run_search("nonschurity") {
        report.stage("nonschurity", || {
            match is_schurian(&scheme, seeds.generators(), &limits) {
                Ok(r) => {
                    let witness_ok = r
                        .witness
                        .map(|(_, size)| size == 4 * p * p * p)
                        .unwrap_or(false);
                    check(
                        !r.schurian && witness_ok && r.orbital_rank as u64 == 4 * p * p,
                        format!(
                            "nonschurian, witness of {} pairs, orbital rank {}",
                            4 * p * p * p,
                            r.orbital_rank
                        ),
                    )
                }
                Err(SearchError::Budget(n)) => StageOutcome::Inconclusive(format!("budget {n}")),
                Err(e) => fail(e.to_string()),
            }
        });
    } else if wants("nonschurity") {
        report.skip("nonschurity", "needs --budget at this p");
    }

    if wants("census") {
        report.stage("census", || {
            let rows = match candidate_census(p) {
                Ok(r) => r,
                Err(e) => return fail(e.to_string()),
            };
            let k2: Vec<u64> = rows.iter().map(|r| r.involutions).collect();
            let expected = vec![3, 2 * p + 1, p * p + 2 * p, 2 * p * p + 1];
            if k2 != expected {
                return fail(format!("involution counts {k2:?}"));
            }
            if !rows.iter().all(|r| {
                r.sylow_count == 1 && r.sylow_elementary_abelian && r.quotient_klein
            }) {
                return fail("a candidate group misses the Sylow or quotient shape".to_string());
            }
            if rows[2].involutions < p * p || rows[3].involutions < p * p {
                return fail("involution bound does not eliminate the two large cases".to_string());
            }
            match dihedral_pairs_share_rotations(p) {
                Ok(true) => pass(format!("involutions {k2:?}; eliminations verified")),
                Ok(false) => fail("two dihedral subgroups intersect trivially".to_string()),
                Err(e) => fail(e.to_string()),
            }
        });
    }

    if wants("cayley-iso") {
        report.stage("cayley-iso", || {
            let autos = schur_automorphisms(&bundle);
            let take = autos.len().min(20);
            for sigma in autos.iter().take(take) {
                let psi = match sigma.induced_set_bijection(&part, &part) {
                    Some(psi) => psi,
                    None => return fail("automorphism does not preserve the partition".to_string()),
                };
                match cayley_iso_from_algebraic(&bundle.group, &part, &bundle.group, &part, &psi)
                {
                    Ok(f) => {
                        if f.induced_set_bijection(&part, &part) != Some(psi) {
                            return fail("reconstruction does not reproduce the set action".to_string());
                        }
                    }
                    Err(e) => return fail(e.to_string()),
                }
            }
            pass(format!("{take} isomorphisms reconstructed and matched"))
        });
    }

    if run_search("separability") {
        report.stage("separability", || match separability_audit(&scheme, &limits) {
            Ok(r) if r.inconclusive_count > 0 => {
                StageOutcome::Inconclusive(format!("{} searches hit the budget", r.inconclusive_count))
            }
            Ok(r) => check(
                r.all_induced(),
                format!(
                    "{} algebraic automorphisms, {} induced, {} failures",
                    r.algebraic_automorphism_count,
                    r.induced_count,
                    r.failures.len()
                ),
            ),
            Err(e) => fail(e.to_string()),
        });
    } else if wants("separability") {
        report.skip("separability", "needs --budget at this p");
    }
}

fn aut_chain(
    p: u64,
    bundle: &PaperGroupBundle,
    scheme: &Scheme,
    seeds: &PermGroup,
    limits: &SearchLimits,
) -> StageOutcome {
    let mk = |lvl| cayley_scheme(&bundle.group, &fusion_partition(bundle, lvl));
    let aut = |s: &Scheme| automorphism_group(s, seeds.generators(), limits);
    let big = BigUint::from(p);

    let base = match aut(scheme) {
        Ok(a) => a,
        Err(SearchError::Budget(n)) => return StageOutcome::Inconclusive(format!("budget {n}")),
        Err(e) => return fail(e.to_string()),
    };
    if base.order() != BigUint::from(4u32) * big.pow(2)
        || base.regularity_class() != RegularityClass::Regular
    {
        return fail(format!("base group order {} ({})", base.order(), base.regularity_class()));
    }

    let mut singles = Vec::new();
    for i in 1..=3 {
        let a = match aut(&mk(FusionLevel::Single(i))) {
            Ok(a) => a,
            Err(SearchError::Budget(n)) => {
                return StageOutcome::Inconclusive(format!("budget {n}"))
            }
            Err(e) => return fail(e.to_string()),
        };
        if a.order() != BigUint::from(4u32) * big.pow(4) {
            return fail(format!("one-coset fusion {i} has order {}", a.order()));
        }
        singles.push(a);
    }

    let zero = match aut(&mk(FusionLevel::Zero)) {
        Ok(a) => a,
        Err(SearchError::Budget(n)) => return StageOutcome::Inconclusive(format!("budget {n}")),
        Err(e) => return fail(e.to_string()),
    };
    if zero.order() != BigUint::from(4u32) * big.pow(8) {
        return fail(format!("all-coset fusion has order {}", zero.order()));
    }

    let mut pairs = Vec::new();
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        let a = match aut(&mk(FusionLevel::Pair(i, j))) {
            Ok(a) => a,
            Err(SearchError::Budget(n)) => {
                return StageOutcome::Inconclusive(format!("budget {n}"))
            }
            Err(e) => return fail(e.to_string()),
        };
        if !a.is_subgroup_of(&zero) {
            return fail(format!("two-coset fusion {i}{j} not inside the all-coset group"));
        }
        pairs.push(a);
    }

    let i12 = PermGroup::intersection(&singles[0], &singles[1]).unwrap();
    if i12.order() != base.order() {
        return fail(format!("intersection of one-coset groups has order {}", i12.order()));
    }
    let ip = PermGroup::intersection(&pairs[0], &pairs[1]).unwrap();
    if ip.order() != singles[0].order() {
        return fail(format!("intersection of two-coset groups has order {}", ip.order()));
    }

    let chain_bound = BigUint::from(16u32) * big.pow(12);
    if pairs[0].order() * pairs[1].order() > chain_bound {
        return fail("chain inequality violated".to_string());
    }
    let lower = singles[0].order() * singles[1].order() / i12.order();
    if lower < BigUint::from(4u32) * big.pow(2) {
        return fail("lower bound on the base group violated".to_string());
    }

    pass(format!(
        "orders 4p²={}, 4p⁴ (three), 4p⁸={}, intersections match, chain inequality holds",
        base.order(),
        zero.order()
    ))
}

fn verify_fusion(cfg: &RunConfig, level: FusionLevel, report: &mut Report) {
    let p = cfg.p;
    let opts = BundleOptions {
        max_p: cfg.max_p,
        ..BundleOptions::default()
    };
    let bundle = match build_paper_group_with(p, &opts) {
        Ok(b) => b,
        Err(e) => {
            report.stage("group", || fail(e.to_string()));
            return;
        }
    };
    let part = fusion_partition(&bundle, level);
    let scheme = cayley_scheme(&bundle.group, &part);
    let limits = cfg.limits();

    report.stage("schur", || {
        let r = validate_schur(&bundle.group, &part);
        check(
            r.is_schur_partition() && r.commutative,
            format!("{} basic sets", part.len()),
        )
    });

    report.stage("scheme", || {
        let expected = match level {
            FusionLevel::Single(_) => p * p + 2 * p + 1,
            FusionLevel::Pair(_, _) => p * p + p + 2,
            FusionLevel::Zero => p * p + 3,
        };
        let out = wl_stabilize(scheme.degree(), scheme.colors()).unwrap();
        check(
            scheme.rank() as u64 == expected && out.was_fixpoint(),
            format!("rank {}, WL fixpoint", scheme.rank()),
        )
    });

    let seeds = right_translation_group(&bundle.group).unwrap();
    let search_allowed = p <= SEARCH_DEFAULT_MAX_P || cfg.budget.is_some();
    if !search_allowed {
        report.skip("aut-orders", "needs --budget at this p");
        report.skip("schurity", "needs --budget at this p");
        return;
    }

    report.stage("aut-orders", || {
        let a = match automorphism_group(&scheme, seeds.generators(), &limits) {
            Ok(a) => a,
            Err(SearchError::Budget(n)) => return StageOutcome::Inconclusive(format!("budget {n}")),
            Err(e) => return fail(e.to_string()),
        };
        let big = BigUint::from(p);
        let ok = match level {
            FusionLevel::Single(_) => a.order() == BigUint::from(4u32) * big.pow(4),
            FusionLevel::Zero => a.order() == BigUint::from(4u32) * big.pow(8),
            FusionLevel::Pair(_, _) => a.order() <= BigUint::from(4u32) * big.pow(6),
        };
        check(ok, format!("order {}", a.order()))
    });

    report.stage("schurity", || {
        match is_schurian(&scheme, seeds.generators(), &limits) {
            Ok(r) => {
                let details = format!("schurian={}, orbital rank {}", r.schurian, r.orbital_rank);
                match level {
                    // the all-coset fusion is a wreath of regular schemes
                    FusionLevel::Zero => check(r.schurian, details),
                    _ => pass(details),
                }
            }
            Err(SearchError::Budget(n)) => StageOutcome::Inconclusive(format!("budget {n}")),
            Err(e) => fail(e.to_string()),
        }
    });
}
