//! Recognition of the tensor/wreath structure of the fusion partitions.

use crate::bundle::PaperGroupBundle;
use crate::group::GroupTable;
use crate::sring::BasicSetPartition;

/// One tensor factor: the partition restricted to a subgroup U of order 2p
/// is a wreath product of the full group ring on a subgroup W of order p
/// with the rank-2 ring on the order-2 quotient.
#[derive(Clone, Debug)]
pub struct WreathFactor {
    pub carrier: Vec<usize>,
    pub base_subgroup: Vec<usize>,
    /// Restriction to the base subgroup consists of singletons only.
    pub base_is_full_group_ring: bool,
    /// Every basic set inside the carrier but outside the base is a union of
    /// base-subgroup cosets.
    pub outside_sets_are_coset_unions: bool,
    pub quotient_order: usize,
}

impl WreathFactor {
    pub fn is_rank_p_wreath_rank_2(&self, p: u64) -> bool {
        self.base_is_full_group_ring
            && self.outside_sets_are_coset_unions
            && self.base_subgroup.len() as u64 == p
            && self.quotient_order == 2
    }
}

/// Structure report for a fusion partition.
#[derive(Clone, Debug)]
pub enum FusionStructure {
    /// G = U_j × U_k and the partition is the tensor product of its
    /// restrictions, each a wreath of a rank-p ring with a rank-2 ring.
    TensorOfWreaths {
        factors: [WreathFactor; 2],
        tensor_product_matches: bool,
    },
    /// Every set outside the base subgroup is a union of its cosets and the
    /// restriction to the base is the full group ring; the quotient ring is
    /// the full group ring of the quotient.
    WreathOverBase {
        base_subgroup: Vec<usize>,
        base_is_full_group_ring: bool,
        quotient_rank: usize,
        quotient_is_full_group_ring: bool,
    },
    Unrecognized {
        reason: String,
    },
}

impl FusionStructure {
    pub fn recognized(&self) -> bool {
        !matches!(self, FusionStructure::Unrecognized { .. })
    }
}

/// Classify a fusion partition of the bundle group. Partitions with exactly
/// one full coset set decompose as a tensor of two wreath products; the one
/// with all three cosets fused is a wreath over the p-part.
pub fn recognize_products(
    group: &GroupTable,
    bundle: &PaperGroupBundle,
    part: &BasicSetPartition,
) -> FusionStructure {
    let p = bundle.p as usize;
    let coset_sets: Vec<usize> = (0..part.len())
        .filter(|&i| part.set(i).len() == p * p)
        .collect();
    match coset_sets.len() {
        1 => recognize_tensor(group, bundle, part),
        3 => recognize_wreath_over_p(group, bundle, part),
        k => FusionStructure::Unrecognized {
            reason: format!("{k} sets of size p²; no tensor or wreath decomposition applies"),
        },
    }
}

fn recognize_tensor(
    group: &GroupTable,
    bundle: &PaperGroupBundle,
    part: &BasicSetPartition,
) -> FusionStructure {
    // the two X-type translate families still present identify the factors
    let mut factor_indices = Vec::new();
    for i in 0..3 {
        let xs: Vec<u32> = bundle.x_sets[i].iter().map(|&x| x as u32).collect();
        if part.find_set(&xs).is_some() {
            factor_indices.push(i);
        }
    }
    if factor_indices.len() != 2 {
        return FusionStructure::Unrecognized {
            reason: "could not locate two generating sets X_j, X_k".into(),
        };
    }

    let carriers: Vec<Vec<usize>> = factor_indices
        .iter()
        .map(|&i| group.closure(&bundle.x_sets[i]))
        .collect();
    let meet: Vec<&usize> = carriers[0]
        .iter()
        .filter(|x| carriers[1].binary_search(x).is_ok())
        .collect();
    let direct = meet.len() == 1 && carriers[0].len() * carriers[1].len() == group.order();
    if !direct {
        return FusionStructure::Unrecognized {
            reason: "generated subgroups do not decompose the group directly".into(),
        };
    }

    let factors: Vec<WreathFactor> = factor_indices
        .iter()
        .zip(&carriers)
        .map(|(&i, carrier)| wreath_factor(group, part, carrier, &bundle.p_subs[i]))
        .collect();

    // tensor check: the products B·C of basic sets inside the two carriers
    // must reproduce the partition exactly
    let mut produced: Vec<Vec<u32>> = Vec::new();
    let inside = |carrier: &[usize]| -> Vec<usize> {
        (0..part.len())
            .filter(|&s| {
                part.set(s)
                    .iter()
                    .all(|&x| carrier.binary_search(&(x as usize)).is_ok())
            })
            .collect()
    };
    for &b in &inside(&carriers[0]) {
        for &c in &inside(&carriers[1]) {
            let mut prod: Vec<u32> = part
                .set(b)
                .iter()
                .flat_map(|&x| {
                    part.set(c)
                        .iter()
                        .map(move |&y| group.mul(x as usize, y as usize) as u32)
                })
                .collect();
            prod.sort_unstable();
            prod.dedup();
            produced.push(prod);
        }
    }
    produced.sort_unstable_by(|a, b| (a.len(), a[0]).cmp(&(b.len(), b[0])));
    let expected: Vec<Vec<u32>> = part.sets().to_vec();
    let tensor_product_matches = produced == expected;

    FusionStructure::TensorOfWreaths {
        factors: [factors[0].clone(), factors[1].clone()],
        tensor_product_matches,
    }
}

fn wreath_factor(
    group: &GroupTable,
    part: &BasicSetPartition,
    carrier: &[usize],
    base: &[usize],
) -> WreathFactor {
    let base_is_full_group_ring = base
        .iter()
        .all(|&x| part.set(part.set_of(x)).len() == 1);
    let outside_sets_are_coset_unions = carrier
        .iter()
        .filter(|x| base.binary_search(x).is_err())
        .all(|&x| {
            let s = part.set(part.set_of(x));
            base.iter().all(|&w| {
                let y = group.mul(w, x);
                s.binary_search(&(y as u32)).is_ok()
            })
        });
    WreathFactor {
        carrier: carrier.to_vec(),
        base_subgroup: base.to_vec(),
        base_is_full_group_ring,
        outside_sets_are_coset_unions,
        quotient_order: carrier.len() / base.len(),
    }
}

fn recognize_wreath_over_p(
    group: &GroupTable,
    bundle: &PaperGroupBundle,
    part: &BasicSetPartition,
) -> FusionStructure {
    let base = &bundle.p_set;
    let base_is_full_group_ring = base
        .iter()
        .all(|&x| part.set(part.set_of(x)).len() == 1);
    // every set outside P must be a union of P-cosets; quotient classes are
    // then single cosets, i.e., the quotient ring is the full group ring
    let mut outside_ok = true;
    let mut quotient_sets = std::collections::BTreeSet::new();
    for x in 0..group.order() {
        if base.binary_search(&x).is_ok() {
            continue;
        }
        let s = part.set(part.set_of(x));
        let coset_closed = base.iter().all(|&w| {
            s.binary_search(&(group.mul(w, x) as u32)).is_ok()
        });
        if !coset_closed {
            outside_ok = false;
        }
        quotient_sets.insert(s[0]);
    }
    let quotient_rank = quotient_sets.len() + 1;
    let quotient_is_full_group_ring =
        outside_ok && quotient_rank == group.order() / base.len();
    if !outside_ok {
        return FusionStructure::Unrecognized {
            reason: "a set outside the p-part is not a union of its cosets".into(),
        };
    }
    FusionStructure::WreathOverBase {
        base_subgroup: base.clone(),
        base_is_full_group_ring,
        quotient_rank,
        quotient_is_full_group_ring,
    }
}
