//! 2-orbit partitions, schurity, and the fixed-point property of thin
//! parabolics.

use crate::parabolic::Parabolic;
use crate::perm::Perm;
use crate::permgroup::PermGroup;
use crate::scheme::Scheme;
use crate::search::{automorphism_group, is_color_preserving, SearchError, SearchLimits};

/// The partition of Ω×Ω into orbits of the diagonal action of a permutation
/// group: always a coherent configuration.
pub fn two_orbit_partition(group: &PermGroup) -> Scheme {
    let n = group.degree();
    let gens = group.generators();
    let mut colors = vec![u32::MAX; n * n];
    let mut next = 0u32;
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if colors[a * n + b] != u32::MAX {
                continue;
            }
            colors[a * n + b] = next;
            queue.clear();
            queue.push((a, b));
            while let Some((x, y)) = queue.pop() {
                for g in gens {
                    let (gx, gy) = (g.apply(x), g.apply(y));
                    if colors[gx * n + gy] == u32::MAX {
                        colors[gx * n + gy] = next;
                        queue.push((gx, gy));
                    }
                }
            }
            next += 1;
        }
    }
    Scheme::canonicalize(n, &colors)
}

/// Outcome of the schurity test: a scheme is schurian when it equals the
/// 2-orbit partition of its own automorphism group.
#[derive(Clone, Debug)]
pub struct SchurityReport {
    pub schurian: bool,
    pub orbital_rank: usize,
    /// When nonschurian: a color that is not a 2-orbit, with its pair count.
    pub witness: Option<(u32, u64)>,
}

pub fn is_schurian(
    sch: &Scheme,
    seeds: &[Perm],
    limits: &SearchLimits,
) -> Result<SchurityReport, SearchError> {
    let aut = automorphism_group(sch, seeds, limits)?;
    let orbitals = two_orbit_partition(&aut);
    let schurian = orbitals == *sch;
    let witness = if schurian {
        None
    } else {
        // orbitals refine the scheme, so a color fails to be a 2-orbit
        // exactly when it outsizes the orbital through one of its pairs
        let n = sch.degree();
        let mut witness = None;
        'outer: for a in 0..n {
            for b in 0..n {
                let c = sch.color(a, b) as usize;
                let o = orbitals.color(a, b) as usize;
                if sch.class_sizes()[c] != orbitals.class_sizes()[o] {
                    witness = Some((c as u32, sch.class_sizes()[c]));
                    break 'outer;
                }
            }
        }
        witness
    };
    Ok(SchurityReport {
        schurian,
        orbital_rank: orbitals.rank(),
        witness,
    })
}

/// How an automorphism relates to the fixed-point hypothesis on a thin
/// parabolic: if it fixes a point in every class, it must be the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedPointOutcome {
    /// Some class contains no fixed point; the implication is vacuous.
    HypothesisFails,
    /// Every class contains a fixed point and the map is the identity.
    IdentityConfirmed,
    /// Every class contains a fixed point yet the map is not the identity:
    /// this would contradict the fixed-point property.
    Violation,
}

pub fn verify_fixed_point_lemma(
    sch: &Scheme,
    par: &Parabolic,
    f: &Perm,
) -> Result<FixedPointOutcome, SearchError> {
    if !is_color_preserving(sch, sch, f) {
        return Err(SearchError::SeedNotAutomorphism(0));
    }
    let hypothesis = par
        .classes
        .iter()
        .all(|class| class.iter().any(|&d| f.apply(d as usize) == d as usize));
    Ok(if !hypothesis {
        FixedPointOutcome::HypothesisFails
    } else if f.is_identity() {
        FixedPointOutcome::IdentityConfirmed
    } else {
        FixedPointOutcome::Violation
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::build_paper_group;
    use crate::cayley::cayley_scheme;
    use crate::parabolic::thin_radical;
    use crate::permgroup::right_translation_group;
    use crate::sring::{fusion_partition, paper_partition, FusionLevel};

    #[test]
    fn translation_group_orbitals_form_regular_scheme() {
        let b = build_paper_group(5).unwrap();
        let g = right_translation_group(&b.group).unwrap();
        let sch = two_orbit_partition(&g);
        assert_eq!(sch.rank(), 100);
        assert!(sch.is_stable());
        assert!(sch.valencies().unwrap().iter().all(|&v| v == 1));
    }

    #[test]
    fn symmetric_group_orbitals_have_rank_two() {
        let c = Perm::from_images(vec![1, 2, 3, 4, 0]).unwrap();
        let t = Perm::from_images(vec![1, 0, 2, 3, 4]).unwrap();
        let g = PermGroup::from_generators(5, &[c, t]).unwrap();
        assert_eq!(two_orbit_partition(&g).rank(), 2);
    }

    #[test]
    fn base_scheme_is_nonschurian_with_witness() {
        let b = build_paper_group(5).unwrap();
        let sch = cayley_scheme(&b.group, &paper_partition(&b));
        let seeds = right_translation_group(&b.group).unwrap();
        let report = is_schurian(&sch, seeds.generators(), &SearchLimits::default()).unwrap();
        assert!(!report.schurian);
        assert_eq!(report.orbital_rank, 100);
        let (color, size) = report.witness.unwrap();
        assert_eq!(size, 500);
        assert_eq!(sch.valencies().unwrap()[color as usize], 5);
    }

    #[test]
    fn zero_fusion_is_schurian() {
        let b = build_paper_group(5).unwrap();
        let sch = cayley_scheme(&b.group, &fusion_partition(&b, FusionLevel::Zero));
        let seeds = right_translation_group(&b.group).unwrap();
        let report = is_schurian(&sch, seeds.generators(), &SearchLimits::default()).unwrap();
        assert!(report.schurian);
        assert_eq!(report.orbital_rank, 28);
    }

    #[test]
    fn regular_scheme_is_schurian() {
        let b = build_paper_group(5).unwrap();
        let sets: Vec<Vec<usize>> = (0..100).map(|x| vec![x]).collect();
        let part = crate::sring::BasicSetPartition::new(&b.group, sets).unwrap();
        let sch = cayley_scheme(&b.group, &part);
        let seeds = right_translation_group(&b.group).unwrap();
        let report = is_schurian(&sch, seeds.generators(), &SearchLimits::default()).unwrap();
        assert!(report.schurian);
    }

    #[test]
    fn fixed_point_lemma_on_translations() {
        let b = build_paper_group(5).unwrap();
        let sch = cayley_scheme(&b.group, &paper_partition(&b));
        let thin = thin_radical(&sch).unwrap();
        let id = Perm::identity(100);
        assert_eq!(
            verify_fixed_point_lemma(&sch, &thin.parabolic, &id).unwrap(),
            FixedPointOutcome::IdentityConfirmed
        );
        let t = b.group.right_translation(7);
        assert_eq!(
            verify_fixed_point_lemma(&sch, &thin.parabolic, &t).unwrap(),
            FixedPointOutcome::HypothesisFails
        );
    }

    #[test]
    fn non_automorphism_is_rejected() {
        let b = build_paper_group(5).unwrap();
        let sch = cayley_scheme(&b.group, &paper_partition(&b));
        let thin = thin_radical(&sch).unwrap();
        let mut images: Vec<u32> = (0..100).collect();
        images.swap(0, 1);
        let not_auto = Perm::from_images(images).unwrap();
        assert!(verify_fixed_point_lemma(&sch, &thin.parabolic, &not_auto).is_err());
    }
}
