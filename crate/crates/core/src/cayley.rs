//! Cayley schemes of Schur partitions and the reconstruction of group
//! isomorphisms from algebraic isomorphisms of such partitions.

use thiserror::Error;

use crate::bundle::PaperGroupBundle;
use crate::group::GroupTable;
use crate::scheme::Scheme;
use crate::sring::{validate_schur, BasicSetPartition, StructureConstants};

/// The scheme on the group whose color classes are {(g, xg) : x ∈ X, g ∈ G}
/// for the basic sets X. Right translations are automorphisms.
pub fn cayley_scheme(group: &GroupTable, part: &BasicSetPartition) -> Scheme {
    let n = group.order();
    let mut colors = vec![0u32; n * n];
    for a in 0..n {
        let ai = group.inv(a);
        for b in 0..n {
            // (a, b) gets the basic set of b·a⁻¹
            colors[a * n + b] = part.set_of(group.mul(b, ai)) as u32;
        }
    }
    Scheme::canonicalize(n, &colors)
}

/// The basic set {x : color(identity, x) = s} of every color, indexed by
/// color id. Inverts [`cayley_scheme`] up to canonical numbering.
pub fn color_basic_sets(sch: &Scheme, identity: usize) -> Vec<Vec<u32>> {
    let mut sets = vec![Vec::new(); sch.rank()];
    for x in 0..sch.degree() {
        sets[sch.color(identity, x) as usize].push(x as u32);
    }
    sets
}

/// A bijection between the basic sets of two partitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetBijection {
    pub images: Vec<u32>,
}

impl SetBijection {
    pub fn identity(rank: usize) -> Self {
        SetBijection {
            images: (0..rank as u32).collect(),
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// Check that every structure constant is preserved.
    pub fn preserves_constants(&self, src: &StructureConstants, dst: &StructureConstants) -> bool {
        if src.rank() != self.images.len() || dst.rank() != self.images.len() {
            return false;
        }
        let mut seen = vec![false; self.images.len()];
        for &i in &self.images {
            if seen[i as usize] {
                return false;
            }
            seen[i as usize] = true;
        }
        src.entries().count() == dst.entries().count()
            && src.entries().all(|(x, y, z, c)| {
                dst.get(self.apply(x), self.apply(y), self.apply(z)) == c
            })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CayleyIsoError {
    #[error("the set bijection does not preserve structure constants")]
    ConstantsNotPreserved,
    #[error("source partition has {0} inverse-closed non-singleton sets, expected 3")]
    WrongSymmetricSetCount(usize),
    #[error("image of symmetric set {0} has {1} involutions, expected exactly 1")]
    NoUniqueInvolution(usize, usize),
    #[error("thin parts have different sizes")]
    ThinPartMismatch,
    #[error("extension is not multiplicative at ({0}, {1})")]
    NotMultiplicative(usize, usize),
    #[error("extension is not a bijection")]
    NotBijective,
    #[error("image of basic set {0} disagrees with the set bijection")]
    ImageMismatch(usize),
    #[error("source partition is not a valid Schur partition")]
    SourceNotSchur,
    #[error("target partition is not a valid Schur partition")]
    TargetNotSchur,
}

/// A group isomorphism recovered from an algebraic isomorphism: the map on
/// element indices from the source group to the target group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyIso {
    pub map: Vec<u32>,
}

impl CayleyIso {
    /// The basic-set bijection this element map induces, if its set images
    /// are basic sets of `dst`.
    pub fn induced_set_bijection(
        &self,
        src: &BasicSetPartition,
        dst: &BasicSetPartition,
    ) -> Option<SetBijection> {
        induced_set_bijection_of_map(&self.map, src, dst)
    }
}

pub fn induced_set_bijection_of_map(
    map: &[u32],
    src: &BasicSetPartition,
    dst: &BasicSetPartition,
) -> Option<SetBijection> {
    let mut images = vec![u32::MAX; src.len()];
    for (i, set) in src.sets().iter().enumerate() {
        let mut img: Vec<u32> = set.iter().map(|&x| map[x as usize]).collect();
        img.sort_unstable();
        images[i] = dst.find_set(&img)? as u32;
    }
    let mut seen = vec![false; src.len()];
    for &i in &images {
        if seen[i as usize] {
            return None;
        }
        seen[i as usize] = true;
    }
    Some(SetBijection { images })
}

/// Reconstruct a group isomorphism f: G → H inducing a constant-preserving
/// bijection ψ between the basic sets of `src` (the distinguished partition
/// over G) and `dst` (a Schur partition over H).
///
/// The construction: the singleton images define f on the thin part; each of
/// the three inverse-closed non-singleton sets of `src` maps to a set whose
/// unique involution is the image of the involution of the source set; the
/// rest is forced by multiplicativity. Every step is verified exhaustively,
/// and failure is a diagnostic, never a silent fallback.
pub fn cayley_iso_from_algebraic(
    src_group: &GroupTable,
    src: &BasicSetPartition,
    dst_group: &GroupTable,
    dst: &BasicSetPartition,
    psi: &SetBijection,
) -> Result<CayleyIso, CayleyIsoError> {
    let src_report = validate_schur(src_group, src);
    if !src_report.is_schur_partition() {
        return Err(CayleyIsoError::SourceNotSchur);
    }
    let dst_report = validate_schur(dst_group, dst);
    if !dst_report.is_schur_partition() {
        return Err(CayleyIsoError::TargetNotSchur);
    }
    if !psi.preserves_constants(&src_report.constants, &dst_report.constants) {
        return Err(CayleyIsoError::ConstantsNotPreserved);
    }

    let n = src_group.order();
    let mut f = vec![u32::MAX; n];

    // thin part: {g}^ψ = {g^f}
    for (i, set) in src.sets().iter().enumerate() {
        if set.len() == 1 {
            let img = dst.set(psi.apply(i));
            if img.len() != 1 {
                return Err(CayleyIsoError::ThinPartMismatch);
            }
            f[set[0] as usize] = img[0];
        }
    }

    // locate the inverse-closed non-singleton sets and their image involutions
    let mut symmetric = Vec::new();
    for i in 0..src.len() {
        if src.set(i).len() > 1 && src.inverse_set(src_group, i) == Some(i) {
            symmetric.push(i);
        }
    }
    if symmetric.len() != 3 {
        return Err(CayleyIsoError::WrongSymmetricSetCount(symmetric.len()));
    }
    for &i in &symmetric {
        let invs: Vec<u32> = src
            .set(i)
            .iter()
            .copied()
            .filter(|&x| src_group.element_order(x as usize) == 2)
            .collect();
        if invs.len() != 1 {
            return Err(CayleyIsoError::NoUniqueInvolution(i, invs.len()));
        }
        let img_invs: Vec<u32> = dst
            .set(psi.apply(i))
            .iter()
            .copied()
            .filter(|&x| dst_group.element_order(x as usize) == 2)
            .collect();
        if img_invs.len() != 1 {
            return Err(CayleyIsoError::NoUniqueInvolution(i, img_invs.len()));
        }
        f[invs[0] as usize] = img_invs[0];
    }

    // extend multiplicatively: x lies in a translate of some symmetric set,
    // recognized by equal radicals, so x = q·a with q thin and a its involution
    let thin_elements: Vec<usize> = src
        .sets()
        .iter()
        .filter(|s| s.len() == 1)
        .map(|s| s[0] as usize)
        .collect();
    let radical = |set: &[u32]| -> Vec<u32> {
        thin_elements
            .iter()
            .copied()
            .filter(|&h| {
                set.iter().all(|&x| {
                    let y = src_group.mul(x as usize, h) as u32;
                    set.binary_search(&y).is_ok()
                })
            })
            .map(|h| h as u32)
            .collect()
    };
    let sym_radicals: Vec<Vec<u32>> = symmetric.iter().map(|&i| radical(src.set(i))).collect();
    for x in 0..n {
        if f[x] != u32::MAX {
            continue;
        }
        let set = src.set(src.set_of(x));
        let rad = radical(set);
        let which = sym_radicals
            .iter()
            .position(|r| *r == rad)
            .ok_or(CayleyIsoError::ImageMismatch(src.set_of(x)))?;
        let a = src
            .set(symmetric[which])
            .iter()
            .copied()
            .find(|&v| src_group.element_order(v as usize) == 2)
            .expect("checked above");
        let q = src_group.mul(x, src_group.inv(a as usize));
        if f[q] == u32::MAX || f[a as usize] == u32::MAX {
            return Err(CayleyIsoError::ImageMismatch(src.set_of(x)));
        }
        f[x] = dst_group.mul(f[q] as usize, f[a as usize] as usize) as u32;
    }

    // verify bijectivity and multiplicativity on all pairs
    let mut seen = vec![false; n];
    for &y in &f {
        if y == u32::MAX || seen[y as usize] {
            return Err(CayleyIsoError::NotBijective);
        }
        seen[y as usize] = true;
    }
    for x in 0..n {
        for y in 0..n {
            let lhs = f[src_group.mul(x, y)] as usize;
            let rhs = dst_group.mul(f[x] as usize, f[y] as usize);
            if lhs != rhs {
                return Err(CayleyIsoError::NotMultiplicative(x, y));
            }
        }
    }

    // verify X^f = X^ψ for every basic set
    for (i, set) in src.sets().iter().enumerate() {
        let mut img: Vec<u32> = set.iter().map(|&x| f[x as usize]).collect();
        img.sort_unstable();
        if dst.set(psi.apply(i)) != img.as_slice() {
            return Err(CayleyIsoError::ImageMismatch(i));
        }
    }

    Ok(CayleyIso { map: f })
}

/// All group automorphisms of the bundle group that permute the basic sets
/// of the distinguished partition: the Klein part permutes the involutions
/// the same way the linear part permutes the three subgroups. There are
/// 6(p−1) of them, listed deterministically.
pub fn schur_automorphisms(bundle: &PaperGroupBundle) -> Vec<CayleyIso> {
    let p = bundle.p;
    let pu = p as usize;
    let pp = pu * pu;
    let g = &bundle.group;

    // direction of each subgroup: its generator as a vector in Z_p²
    let dir = |i: usize| -> (u64, u64) {
        let q = *bundle.p_subs[i]
            .iter()
            .find(|&&x| x != g.identity())
            .expect("order-p subgroup has a generator");
        ((q / pu) as u64, (q % pu) as u64)
    };
    let dirs: Vec<(u64, u64)> = (0..3).map(dir).collect();
    let a_codes: Vec<usize> = (0..3).map(|i| bundle.a[i] / pp).collect();

    let perms3: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut result = Vec::new();
    for pi in perms3 {
        for lambda in 1..p {
            for mu in 1..p {
                // the matrix sending dir(0) ↦ λ·dir(π0), dir(1) ↦ μ·dir(π1)
                let img0 = (lambda * dirs[pi[0]].0 % p, lambda * dirs[pi[0]].1 % p);
                let img1 = (mu * dirs[pi[1]].0 % p, mu * dirs[pi[1]].1 % p);
                let mat = match matrix_from_basis_images(p, dirs[0], dirs[1], img0, img1) {
                    Some(m) => m,
                    None => continue,
                };
                // third direction must land on the third subgroup's line
                let t = apply_matrix(p, mat, dirs[2]);
                if !parallel(p, t, dirs[pi[2]]) || t == (0, 0) {
                    continue;
                }
                // Klein part: a_i ↦ a_{π(i)}
                let mut a_map = [0usize; 4];
                for i in 0..3 {
                    a_map[a_codes[i]] = a_codes[pi[i]];
                }
                let mut map = vec![0u32; g.order()];
                for x in 0..g.order() {
                    let (ax, qx) = (x / pp, x % pp);
                    let v = ((qx / pu) as u64, (qx % pu) as u64);
                    let w = apply_matrix(p, mat, v);
                    map[x] = (a_map[ax] * pp + (w.0 as usize) * pu + w.1 as usize) as u32;
                }
                debug_assert!((0..g.order()).all(|x| (0..g.order())
                    .all(|y| map[g.mul(x, y)] as usize
                        == g.mul(map[x] as usize, map[y] as usize))));
                result.push(CayleyIso { map });
            }
        }
    }
    result
}

type Mat2 = [[u64; 2]; 2];

fn matrix_from_basis_images(
    p: u64,
    b0: (u64, u64),
    b1: (u64, u64),
    i0: (u64, u64),
    i1: (u64, u64),
) -> Option<Mat2> {
    // solve M·b0 = i0, M·b1 = i1 over F_p
    let det = (b0.0 * b1.1 + p * p - b0.1 * b1.0) % p;
    let det_inv = mod_inverse(det, p)?;
    // B⁻¹ = det⁻¹ · [[b1.1, −b1.0], [−b0.1, b0.0]] (columns are b0, b1)
    let binv: Mat2 = [
        [b1.1 * det_inv % p, (p - b1.0 % p) % p * det_inv % p],
        [(p - b0.1 % p) % p * det_inv % p, b0.0 * det_inv % p],
    ];
    // M = [i0 | i1] · B⁻¹
    let cols: Mat2 = [[i0.0, i1.0], [i0.1, i1.1]];
    let mut m: Mat2 = [[0; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            m[r][c] = (cols[r][0] * binv[0][c] + cols[r][1] * binv[1][c]) % p;
        }
    }
    Some(m)
}

fn apply_matrix(p: u64, m: Mat2, v: (u64, u64)) -> (u64, u64) {
    (
        (m[0][0] * v.0 + m[0][1] * v.1) % p,
        (m[1][0] * v.0 + m[1][1] * v.1) % p,
    )
}

fn parallel(p: u64, a: (u64, u64), b: (u64, u64)) -> bool {
    (a.0 * b.1) % p == (a.1 * b.0) % p
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    // p is prime: a^(p−2)
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    Some(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::build_paper_group;
    use crate::group::cyclic;
    use crate::sring::{fusion_partition, paper_partition, FusionLevel};

    #[test]
    fn cayley_scheme_dimensions() {
        let b = build_paper_group(5).unwrap();
        let s = paper_partition(&b);
        let sch = cayley_scheme(&b.group, &s);
        assert_eq!(sch.degree(), 100);
        assert_eq!(sch.rank(), 40);

        let s0 = fusion_partition(&b, FusionLevel::Zero);
        assert_eq!(cayley_scheme(&b.group, &s0).rank(), 28);
    }

    #[test]
    fn singleton_partition_gives_regular_scheme() {
        let g = cyclic(6, "C6");
        let sets: Vec<Vec<usize>> = (0..6).map(|x| vec![x]).collect();
        let part = BasicSetPartition::new(&g, sets).unwrap();
        let sch = cayley_scheme(&g, &part);
        assert_eq!(sch.rank(), 6);
        assert_eq!(sch.valencies().unwrap(), vec![1; 6]);
    }

    #[test]
    fn translations_are_automorphisms() {
        let b = build_paper_group(5).unwrap();
        let s = paper_partition(&b);
        let sch = cayley_scheme(&b.group, &s);
        for h in [1usize, 30, 77] {
            let t = b.group.right_translation(h);
            for a in 0..100 {
                for c in 0..100 {
                    assert_eq!(sch.color(t.apply(a), t.apply(c)), sch.color(a, c));
                }
            }
        }
    }

    #[test]
    fn color_sets_invert_the_construction() {
        let b = build_paper_group(5).unwrap();
        let s = paper_partition(&b);
        let sch = cayley_scheme(&b.group, &s);
        let sets = color_basic_sets(&sch, b.group.identity());
        let mut recovered: Vec<Vec<u32>> = sets;
        recovered.sort_unstable_by(|a, x| (a.len(), a[0]).cmp(&(x.len(), x[0])));
        assert_eq!(recovered.as_slice(), s.sets());
    }

    #[test]
    fn identity_psi_recovers_identity_iso() {
        let b = build_paper_group(5).unwrap();
        let s = paper_partition(&b);
        let psi = SetBijection::identity(s.len());
        let f = cayley_iso_from_algebraic(&b.group, &s, &b.group, &s, &psi).unwrap();
        assert!(f.map.iter().enumerate().all(|(i, &y)| i as u32 == y));
    }

    #[test]
    fn schur_automorphism_count_and_roundtrip() {
        let b = build_paper_group(5).unwrap();
        let autos = schur_automorphisms(&b);
        assert_eq!(autos.len(), 24);
        let s = paper_partition(&b);
        for sigma in autos.iter().take(8) {
            let psi = sigma.induced_set_bijection(&s, &s).expect("preserves the partition");
            let f = cayley_iso_from_algebraic(&b.group, &s, &b.group, &s, &psi).unwrap();
            // the reconstruction recovers σ itself
            assert_eq!(f.map, sigma.map);
        }
    }

    #[test]
    fn broken_psi_is_rejected() {
        let b = build_paper_group(5).unwrap();
        let s = paper_partition(&b);
        // swap two singleton images without a matching automorphism
        let mut images: Vec<u32> = (0..s.len() as u32).collect();
        images.swap(1, 2);
        let psi = SetBijection { images };
        assert!(matches!(
            cayley_iso_from_algebraic(&b.group, &s, &b.group, &s, &psi),
            Err(CayleyIsoError::ConstantsNotPreserved)
        ));
    }
}
