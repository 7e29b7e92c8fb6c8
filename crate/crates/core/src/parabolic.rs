//! Parabolics, thin radicals, quotient schemes, and the structural battery
//! checked on every scheme algebraically isomorphic to the constructed one.

use std::collections::BTreeSet;

use crate::group::{is_prime, GroupTable};
use crate::scheme::{Scheme, SchemeError};
use crate::tensor::IntersectionTensor;

/// A union of colors forming an equivalence relation on the points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parabolic {
    pub colors: Vec<u32>,
    pub class_of: Vec<u32>,
    pub classes: Vec<Vec<u32>>,
    /// All member colors have valency 1.
    pub thin: bool,
}

/// Build a parabolic from a color subset, verifying reflexivity, symmetry,
/// and transitivity of the union.
pub fn parabolic_from_colors(sch: &Scheme, colors: &[u32]) -> Result<Parabolic, SchemeError> {
    let n = sch.degree();
    let set: BTreeSet<u32> = colors.iter().copied().collect();
    let member = |a: usize, b: usize| set.contains(&sch.color(a, b));
    for a in 0..n {
        if !member(a, a) {
            return Err(SchemeError::NotParabolic(format!(
                "point {a} not related to itself"
            )));
        }
    }
    // classes by breadth-first sweep, then symmetry/transitivity check
    let mut class_of = vec![u32::MAX; n];
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for a in 0..n {
        if class_of[a] != u32::MAX {
            continue;
        }
        let id = classes.len() as u32;
        let members: Vec<u32> = (0..n)
            .filter(|&b| member(a, b))
            .map(|b| b as u32)
            .collect();
        for &b in &members {
            if class_of[b as usize] != u32::MAX {
                return Err(SchemeError::NotParabolic(
                    "classes overlap without coinciding".into(),
                ));
            }
            class_of[b as usize] = id;
        }
        classes.push(members);
    }
    for a in 0..n {
        for b in 0..n {
            if member(a, b) != (class_of[a] == class_of[b]) {
                return Err(SchemeError::NotParabolic(format!(
                    "relation at ({a}, {b}) disagrees with its classes"
                )));
            }
        }
    }
    let valencies = sch.valencies()?;
    let thin = set.iter().all(|&c| valencies[c as usize] == 1);
    Ok(Parabolic {
        colors: set.into_iter().collect(),
        class_of,
        classes,
        thin,
    })
}

/// The diagonal as a (thin) parabolic of an association scheme.
pub fn diagonal_parabolic(sch: &Scheme) -> Result<Parabolic, SchemeError> {
    let diag: Vec<u32> = (0..sch.rank() as u32)
        .filter(|&c| sch.is_diagonal_color(c))
        .collect();
    parabolic_from_colors(sch, &diag)
}

/// The thin radical of an association scheme: all valency-1 colors, their
/// closure as a parabolic, and the group they form under composition.
#[derive(Clone, Debug)]
pub struct ThinRadical {
    pub colors: Vec<u32>,
    pub parabolic: Parabolic,
    pub group: GroupTable,
    /// The permutation each thin color induces on points (α ↦ its unique
    /// s-neighbour), indexed like `colors`.
    pub translations: Vec<Vec<u32>>,
}

pub fn thin_radical(sch: &Scheme) -> Result<ThinRadical, SchemeError> {
    if !sch.is_association_scheme() {
        return Err(SchemeError::NotAssociation(sch.diagonal_color_count()));
    }
    let n = sch.degree();
    let valencies = sch.valencies()?;
    let colors: Vec<u32> = (0..sch.rank() as u32)
        .filter(|&c| valencies[c as usize] == 1)
        .collect();
    let e = colors.len();

    let mut translations: Vec<Vec<u32>> = Vec::with_capacity(e);
    for &c in &colors {
        let mut img = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if sch.color(a, b) == c {
                    if img[a] != u32::MAX {
                        return Err(SchemeError::ValencyNotConstant(c));
                    }
                    img[a] = b as u32;
                }
            }
        }
        if img.iter().any(|&b| b == u32::MAX) {
            return Err(SchemeError::ValencyNotConstant(c));
        }
        translations.push(img);
    }

    // composition: s∘t is the color of (α, t(s(α))), constant over α
    let mut table = vec![0u32; e * e];
    for (i, si) in translations.iter().enumerate() {
        for (j, sj) in translations.iter().enumerate() {
            let composed = sch.color(0, sj[si[0] as usize] as usize);
            let k = colors
                .binary_search(&composed)
                .map_err(|_| SchemeError::Other("thin colors do not compose".into()))?;
            for a in 1..n {
                if sch.color(a, sj[si[a] as usize] as usize) != composed {
                    return Err(SchemeError::Other(
                        "thin composition is not a single color".into(),
                    ));
                }
            }
            table[i * e + j] = k as u32;
        }
    }
    let group = GroupTable::from_table(e, "thin radical", table)
        .map_err(|err| SchemeError::Other(format!("thin colors do not form a group: {err}")))?;
    let parabolic = parabolic_from_colors(sch, &colors)?;
    Ok(ThinRadical {
        colors,
        parabolic,
        group,
        translations,
    })
}

/// Quotient scheme on the classes of a parabolic. Class pairs are colored by
/// the multiset of fine colors between them; coherence of the result is
/// asserted rather than assumed.
pub fn quotient_scheme(sch: &Scheme, par: &Parabolic) -> Result<Scheme, SchemeError> {
    let m = par.classes.len();
    let mut signatures: Vec<Vec<u32>> = Vec::with_capacity(m * m);
    for ci in &par.classes {
        for cj in &par.classes {
            let mut sig: Vec<u32> = ci
                .iter()
                .flat_map(|&a| cj.iter().map(move |&b| sch.color(a as usize, b as usize)))
                .collect();
            sig.sort_unstable();
            signatures.push(sig);
        }
    }
    let mut distinct: Vec<&Vec<u32>> = signatures.iter().collect();
    distinct.sort_unstable();
    distinct.dedup();
    let colors: Vec<u32> = signatures
        .iter()
        .map(|s| distinct.binary_search(&s).unwrap() as u32)
        .collect();
    let quotient = Scheme::from_color_matrix(m, &colors)?;
    if !quotient.is_stable() {
        return Err(SchemeError::QuotientNotCoherent);
    }
    Ok(quotient)
}

/// The largest thin parabolic e' ⊆ e with e'∘s = s∘e' = s: the stabilizer of
/// the color s in the thin-radical group.
pub fn radical_of_color(sch: &Scheme, s: u32) -> Result<Parabolic, SchemeError> {
    let thin = thin_radical(sch)?;
    let tensor = IntersectionTensor::from_scheme(sch)?;
    radical_of_color_with(sch, &tensor, &thin, s)
}

pub fn radical_of_color_with(
    sch: &Scheme,
    tensor: &IntersectionTensor,
    thin: &ThinRadical,
    s: u32,
) -> Result<Parabolic, SchemeError> {
    let fixes = |t: u32| -> bool {
        // t∘s = s exactly when s is the only positive entry of row (t, s),
        // and symmetrically
        tensor.row(t as usize, s as usize) == vec![(s as usize, 1)]
            && tensor.row(s as usize, t as usize) == vec![(s as usize, 1)]
    };
    let stab: Vec<u32> = thin.colors.iter().copied().filter(|&t| fixes(t)).collect();
    // the stabilizer is automatically closed; verify anyway
    for &a in &stab {
        for &b in &stab {
            let i = thin.colors.binary_search(&a).unwrap();
            let j = thin.colors.binary_search(&b).unwrap();
            let composed = thin.colors[thin.group.mul(i, j)];
            if stab.binary_search(&composed).is_err() {
                return Err(SchemeError::Other(
                    "color stabilizer is not closed under composition".into(),
                ));
            }
        }
    }
    parabolic_from_colors(sch, &stab)
}

/// Per-property outcome of the structural battery.
#[derive(Clone, Debug)]
pub struct BReport {
    pub p: u64,
    pub commutative: bool,
    /// Thin radical has order p², exponent p, and is abelian; the quotient
    /// modulo its closure is regular of rank 4 with three involutions.
    pub b1_thin_radical_elementary: bool,
    pub b1_quotient_klein: bool,
    /// Exactly three nontrivial symmetric colors, each of valency p with a
    /// radical of order p, pairwise intersecting trivially.
    pub b2: bool,
    pub symmetric_colors: Vec<u32>,
    /// Positivity pattern: translates of two distinct symmetric colors
    /// multiply onto exactly the translates of the third.
    pub b3: bool,
}

impl BReport {
    pub fn all_pass(&self) -> bool {
        self.commutative
            && self.b1_thin_radical_elementary
            && self.b1_quotient_klein
            && self.b2
            && self.b3
    }
}

/// Run the full structural battery on an association scheme of degree 4p².
pub fn verify_b_properties(sch: &Scheme) -> Result<BReport, SchemeError> {
    let n = sch.degree() as u64;
    let p = integer_sqrt(n / 4);
    if 4 * p * p != n || !is_prime(p) {
        return Err(SchemeError::Other(format!(
            "degree {n} is not 4p² for a prime p"
        )));
    }
    let tensor = IntersectionTensor::from_scheme(sch)?;
    let thin = thin_radical(sch)?;
    let commutative = tensor.is_commutative();

    let census = thin.group.order_census();
    let b1_thin_radical_elementary = thin.group.order() as u64 == p * p
        && census.get(&p).copied().unwrap_or(0) == p * p - 1
        && thin.group.is_abelian();
    let quotient = quotient_scheme(sch, &thin.parabolic)?;
    let b1_quotient_klein = quotient.rank() == 4
        && quotient.degree() == 4
        && quotient
            .valencies()
            .map(|v| v.iter().all(|&x| x == 1))
            .unwrap_or(false)
        && thin_radical(&quotient)
            .map(|t| t.group.order_census().get(&2).copied() == Some(3))
            .unwrap_or(false);

    // the symmetric colors and their radicals
    let transpose = tensor.transpose_map();
    let symmetric_colors: Vec<u32> = (0..sch.rank() as u32)
        .filter(|&c| {
            !sch.is_diagonal_color(c)
                && transpose[c as usize] == c
                && tensor.valencies()[c as usize] > 1
        })
        .collect();
    let mut b2 = symmetric_colors.len() == 3;
    let mut radicals = Vec::new();
    if b2 {
        for &c in &symmetric_colors {
            if tensor.valencies()[c as usize] != p {
                b2 = false;
            }
            let rad = radical_of_color_with(sch, &tensor, &thin, c)?;
            if rad.colors.len() as u64 != p {
                b2 = false;
            }
            radicals.push(rad);
        }
        for i in 0..radicals.len() {
            for j in (i + 1)..radicals.len() {
                let common = radicals[i]
                    .colors
                    .iter()
                    .filter(|c| radicals[j].colors.binary_search(c).is_ok())
                    .count();
                // only the diagonal color is shared
                if common != 1 {
                    b2 = false;
                }
            }
        }
    }

    // positivity pattern over all eligible triples
    let mut b3 = b2;
    if b2 {
        let translate_family = |r: u32| -> Vec<u32> {
            let mut fam = BTreeSet::new();
            for &u in &thin.colors {
                for (t, _) in tensor.row(r as usize, u as usize) {
                    fam.insert(t as u32);
                }
            }
            fam.into_iter().collect()
        };
        let families: Vec<Vec<u32>> = symmetric_colors
            .iter()
            .map(|&r| translate_family(r))
            .collect();
        'outer: for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let k = 3 - i - j;
                for &ti in &families[i] {
                    for &tj in &families[j] {
                        for t in 0..sch.rank() {
                            let positive = tensor.get(ti as usize, tj as usize, t) > 0;
                            let in_family = families[k].binary_search(&(t as u32)).is_ok();
                            if positive != in_family {
                                b3 = false;
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(BReport {
        p,
        commutative,
        b1_thin_radical_elementary,
        b1_quotient_klein,
        b2,
        symmetric_colors,
        b3,
    })
}

fn integer_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::build_paper_group;
    use crate::cayley::cayley_scheme;
    use crate::group::cyclic;
    use crate::sring::{fusion_partition, paper_partition, BasicSetPartition, FusionLevel};

    fn base_scheme(p: u64) -> Scheme {
        let b = build_paper_group(p).unwrap();
        cayley_scheme(&b.group, &paper_partition(&b))
    }

    #[test]
    fn thin_radical_of_base_scheme() {
        let sch = base_scheme(5);
        let thin = thin_radical(&sch).unwrap();
        assert_eq!(thin.colors.len(), 25);
        let census = thin.group.order_census();
        assert_eq!(census[&5], 24);
        assert!(thin.group.is_abelian());
        assert_eq!(thin.parabolic.classes.len(), 4);
    }

    #[test]
    fn thin_radical_of_regular_scheme_is_everything() {
        let g = cyclic(8, "C8");
        let sets: Vec<Vec<usize>> = (0..8).map(|x| vec![x]).collect();
        let part = BasicSetPartition::new(&g, sets).unwrap();
        let sch = cayley_scheme(&g, &part);
        let thin = thin_radical(&sch).unwrap();
        assert_eq!(thin.colors.len(), 8);
        assert_eq!(thin.group.order_census()[&8], 4);
    }

    #[test]
    fn thin_radical_of_rank_two_scheme_is_diagonal() {
        let n = 6;
        let colors: Vec<u32> = (0..n * n)
            .map(|i| if i / n == i % n { 0 } else { 1 })
            .collect();
        let sch = Scheme::from_color_matrix(n, &colors).unwrap();
        let thin = thin_radical(&sch).unwrap();
        assert_eq!(thin.colors.len(), 1);
    }

    #[test]
    fn quotient_by_thin_closure_is_klein() {
        let sch = base_scheme(5);
        let thin = thin_radical(&sch).unwrap();
        let q = quotient_scheme(&sch, &thin.parabolic).unwrap();
        assert_eq!(q.degree(), 4);
        assert_eq!(q.rank(), 4);
        let qthin = thin_radical(&q).unwrap();
        assert_eq!(qthin.group.order_census()[&2], 3);
    }

    #[test]
    fn quotient_by_diagonal_is_the_scheme_itself() {
        let sch = base_scheme(5);
        let diag = diagonal_parabolic(&sch).unwrap();
        let q = quotient_scheme(&sch, &diag).unwrap();
        assert_eq!(q, sch);
    }

    #[test]
    fn radical_of_symmetric_color_has_order_p() {
        let b = build_paper_group(5).unwrap();
        let s = paper_partition(&b);
        let sch = cayley_scheme(&b.group, &s);
        let c = sch.color(b.group.identity(), b.x_sets[0][0]);
        let rad = radical_of_color(&sch, c).unwrap();
        assert_eq!(rad.colors.len(), 5);
        assert!(rad.thin);
        assert!(rad.classes.iter().all(|cl| cl.len() == 5));
    }

    #[test]
    fn radical_of_thin_color_is_diagonal() {
        let sch = base_scheme(5);
        let rad = radical_of_color(&sch, 1).unwrap();
        assert_eq!(rad.colors, vec![0]);
    }

    #[test]
    fn radical_of_coset_color_in_zero_fusion_is_whole_thin_part() {
        let b = build_paper_group(5).unwrap();
        let s0 = fusion_partition(&b, FusionLevel::Zero);
        let sch = cayley_scheme(&b.group, &s0);
        let c = sch.color(b.group.identity(), b.y_sets[0][0]);
        let rad = radical_of_color(&sch, c).unwrap();
        assert_eq!(rad.colors.len(), 25);
    }

    #[test]
    fn b_properties_hold_for_base_scheme() {
        let report = verify_b_properties(&base_scheme(5)).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn b2_fails_for_zero_fusion() {
        let b = build_paper_group(5).unwrap();
        let s0 = fusion_partition(&b, FusionLevel::Zero);
        let sch = cayley_scheme(&b.group, &s0);
        let report = verify_b_properties(&sch).unwrap();
        assert!(!report.b2);
        assert!(report.b1_thin_radical_elementary);
    }

    #[test]
    fn b1_fails_for_regular_scheme() {
        let b = build_paper_group(5).unwrap();
        let sets: Vec<Vec<usize>> = (0..100).map(|x| vec![x]).collect();
        let part = BasicSetPartition::new(&b.group, sets).unwrap();
        let sch = cayley_scheme(&b.group, &part);
        let report = verify_b_properties(&sch).unwrap();
        assert!(!report.b1_thin_radical_elementary);
    }
}
