//! Color-preserving backtracking: automorphism groups and isomorphisms of
//! schemes by individualization and refinement.
//!
//! A point coloring is refined against the fixed pair colors of the scheme
//! until stable, with canonical renumbering, so two colorings related by a
//! color-preserving bijection refine to literally equal color profiles. The
//! search individualizes one point per level along a base chosen on the
//! source side, prunes target branches whose refined profile deviates, and
//! accumulates automorphisms in a stabilizer chain whose base matches the
//! search base. Pruning by the known group uses prefix stabilizers along the
//! identity branch; sibling branches only ever need one coset representative
//! each, found with early exit.
//!
//! Search failure is exhaustion, never a timeout. A node budget aborts with
//! a distinct error so that an inconclusive search can never be mistaken for
//! a completed one.

use thiserror::Error;

use crate::perm::Perm;
use crate::permgroup::{PermGroup, PermGroupError};
use crate::scheme::Scheme;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("search exceeded the node budget of {0}")]
    Budget(u64),
    #[error("seed generator {0} is not an automorphism")]
    SeedNotAutomorphism(usize),
    #[error("schemes have different degrees: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error(transparent)]
    Group(#[from] PermGroupError),
}

/// Node budget for backtracking searches.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_nodes: 5_000_000,
        }
    }
}

impl SearchLimits {
    pub fn with_budget(max_nodes: u64) -> Self {
        SearchLimits { max_nodes }
    }
}

/// Does `g` map every `src` color class onto the same-numbered `dst` class?
pub fn is_color_preserving(src: &Scheme, dst: &Scheme, g: &Perm) -> bool {
    let n = src.degree();
    if dst.degree() != n || g.degree() != n || src.rank() != dst.rank() {
        return false;
    }
    (0..n).all(|a| (0..n).all(|b| dst.color(g.apply(a), g.apply(b)) == src.color(a, b)))
}

/// A stable point coloring with its class-size profile.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Refined {
    colors: Vec<u32>,
    sizes: Vec<u32>,
}

impl Refined {
    fn count(&self) -> usize {
        self.sizes.len()
    }

    fn is_discrete(&self) -> bool {
        self.sizes.iter().all(|&s| s == 1)
    }
}

#[inline]
fn pack(pi: u32, c1: u32, c2: u32) -> u64 {
    debug_assert!(c1 < (1 << 20) && c2 < (1 << 20));
    ((pi as u64) << 40) | ((c1 as u64) << 20) | c2 as u64
}

/// Refine a point coloring to stability against the scheme's pair colors,
/// renumbering canonically by (old color, signature).
fn refine(sch: &Scheme, start: &[u32]) -> Refined {
    let n = sch.degree();
    let mut pi = start.to_vec();
    let mut count = 0usize;
    loop {
        let sigs: Vec<Vec<u64>> = (0..n)
            .map(|a| {
                let mut sig = Vec::with_capacity(n + 1);
                sig.push(pi[a] as u64);
                for g in 0..n {
                    sig.push(pack(pi[g], sch.color(a, g), sch.color(g, a)));
                }
                sig[1..].sort_unstable();
                sig
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| sigs[i].cmp(&sigs[j]));
        let mut next = vec![0u32; n];
        let mut c = 0u32;
        for w in 0..n {
            if w > 0 && sigs[order[w]] != sigs[order[w - 1]] {
                c += 1;
            }
            next[order[w]] = c;
        }
        let new_count = c as usize + 1;
        pi = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut sizes = vec![0u32; count];
    for &c in &pi {
        sizes[c as usize] += 1;
    }
    Refined { colors: pi, sizes }
}

fn individualize(coloring: &Refined, point: usize) -> Vec<u32> {
    let mut pi = coloring.colors.clone();
    pi[point] = coloring.count() as u32;
    pi
}

/// Base construction on the source scheme: repeatedly individualize the
/// least point of the first non-singleton cell until discrete.
fn build_base(sch: &Scheme) -> (Vec<usize>, Vec<Refined>) {
    let n = sch.degree();
    let initial: Vec<u32> = (0..n).map(|a| sch.color(a, a)).collect();
    let mut path = vec![refine(sch, &initial)];
    let mut base = Vec::new();
    loop {
        let current = path.last().unwrap();
        if current.is_discrete() {
            break;
        }
        let target_color = (0..current.count() as u32)
            .find(|&c| current.sizes[c as usize] > 1)
            .unwrap();
        let alpha = (0..n)
            .find(|&a| current.colors[a] == target_color)
            .unwrap();
        base.push(alpha);
        let next = refine(sch, &individualize(current, alpha));
        path.push(next);
    }
    (base, path)
}

struct Search<'a> {
    src: &'a Scheme,
    dst: &'a Scheme,
    base: Vec<usize>,
    path: Vec<Refined>,
    limits: SearchLimits,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(src: &'a Scheme, dst: &'a Scheme, limits: SearchLimits) -> Result<Self, SearchError> {
        if src.degree() != dst.degree() {
            return Err(SearchError::DegreeMismatch(src.degree(), dst.degree()));
        }
        let (base, path) = build_base(src);
        Ok(Search {
            src,
            dst,
            base,
            path,
            limits,
            nodes: 0,
        })
    }

    fn refine_dst(&mut self, start: &[u32]) -> Result<Refined, SearchError> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(SearchError::Budget(self.limits.max_nodes));
        }
        Ok(refine(self.dst, start))
    }

    /// Read the point bijection off a pair of discrete colorings and verify
    /// it preserves colors exhaustively.
    fn leaf_candidate(&self, t: &Refined) -> Option<Perm> {
        let s = self.path.last().unwrap();
        let n = self.src.degree();
        let mut by_color = vec![u32::MAX; t.count()];
        for (q, &c) in t.colors.iter().enumerate() {
            by_color[c as usize] = q as u32;
        }
        let images: Vec<u32> = (0..n).map(|p| by_color[s.colors[p] as usize]).collect();
        let g = Perm::from_images(images).ok()?;
        is_color_preserving(self.src, self.dst, &g).then_some(g)
    }

    /// Candidates in `t` for the image of the level's base point.
    fn candidates(&self, level: usize, t: &Refined) -> Vec<usize> {
        let cell_color = self.path[level].colors[self.base[level]];
        (0..self.dst.degree())
            .filter(|&q| t.colors[q] == cell_color)
            .collect()
    }

    /// First color-preserving bijection extending the branch at `level` with
    /// target coloring `t`, if any; exhaustive within the subtree.
    fn find_extension(&mut self, level: usize, t: &Refined) -> Result<Option<Perm>, SearchError> {
        if level == self.base.len() {
            return Ok(self.leaf_candidate(t));
        }
        for beta in self.candidates(level, t) {
            let refined = self.refine_dst(&{
                let mut pi = t.colors.clone();
                pi[beta] = t.count() as u32;
                pi
            })?;
            if refined.sizes != self.path[level + 1].sizes {
                continue;
            }
            if let Some(g) = self.find_extension(level + 1, &refined)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

/// The full color-preserving automorphism group of a scheme.
///
/// `seeds` are known automorphisms (for Cayley schemes, the right
/// translations); they are verified and used both to prime the group and to
/// prune the search. The result is independent of the seed.
pub fn automorphism_group(
    sch: &Scheme,
    seeds: &[Perm],
    limits: &SearchLimits,
) -> Result<PermGroup, SearchError> {
    for (i, s) in seeds.iter().enumerate() {
        if !is_color_preserving(sch, sch, s) {
            return Err(SearchError::SeedNotAutomorphism(i));
        }
    }
    let mut search = Search::new(sch, sch, *limits)?;
    let mut known = PermGroup::with_base_hint(sch.degree(), seeds, &search.base)?;
    explore_identity_prefix(&mut search, &mut known, 0)?;
    Ok(known)
}

/// Recursive sweep along the identity branch: at each level the stabilizer
/// of the deeper levels is completed first, then each sibling orbit
/// contributes one coset representative.
fn explore_identity_prefix(
    search: &mut Search,
    known: &mut PermGroup,
    level: usize,
) -> Result<(), SearchError> {
    if level == search.base.len() {
        return Ok(());
    }
    explore_identity_prefix(search, known, level + 1)?;

    let alpha = search.base[level];
    let t = search.path[level].clone();
    let mut processed = vec![alpha];
    for beta in search.candidates(level, &t) {
        if beta == alpha {
            continue;
        }
        // skip images already reachable by the known stabilizer
        if orbit_union(known.stabilizer_gens(level), &processed, search.dst.degree())
            [beta]
        {
            continue;
        }
        let refined = search.refine_dst(&{
            let mut pi = t.colors.clone();
            pi[beta] = t.count() as u32;
            pi
        })?;
        processed.push(beta);
        if refined.sizes != search.path[level + 1].sizes {
            continue;
        }
        if let Some(g) = search.find_extension(level + 1, &refined)? {
            known.extend(&g)?;
        }
    }
    Ok(())
}

fn orbit_union(gens: &[Perm], starts: &[usize], degree: usize) -> Vec<bool> {
    let mut seen = vec![false; degree];
    let mut queue: Vec<usize> = starts.to_vec();
    for &s in starts {
        seen[s] = true;
    }
    while let Some(w) = queue.pop() {
        for g in gens {
            let img = g.apply(w);
            if !seen[img] {
                seen[img] = true;
                queue.push(img);
            }
        }
    }
    seen
}

/// A single bijection mapping every `src` color class onto the equally
/// numbered `dst` class, or definitive absence. The schemes must already
/// share color numbering (rename one side first when comparing through an
/// algebraic isomorphism).
pub fn find_isomorphism(
    src: &Scheme,
    dst: &Scheme,
    limits: &SearchLimits,
) -> Result<Option<Perm>, SearchError> {
    if src.rank() != dst.rank() || src.degree() != dst.degree() {
        return Ok(None);
    }
    let mut search = Search::new(src, dst, *limits)?;
    let initial: Vec<u32> = (0..dst.degree()).map(|a| dst.color(a, a)).collect();
    let t0 = search.refine_dst(&initial)?;
    if t0.sizes != search.path[0].sizes {
        return Ok(None);
    }
    search.find_extension(0, &t0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::build_paper_group;
    use crate::cayley::cayley_scheme;
    use crate::group::cyclic;
    use crate::permgroup::right_translation_group;
    use crate::sring::{paper_partition, BasicSetPartition};
    use num_bigint::BigUint;

    fn rank2(n: usize) -> Scheme {
        let colors: Vec<u32> = (0..n * n)
            .map(|i| if i / n == i % n { 1 } else { 0 })
            .collect();
        Scheme::from_color_matrix(n, &colors).unwrap()
    }

    #[test]
    fn rank2_scheme_has_symmetric_group() {
        let sch = rank2(6);
        let aut = automorphism_group(&sch, &[], &SearchLimits::default()).unwrap();
        assert_eq!(aut.order(), BigUint::from(720u32));
    }

    #[test]
    fn cycle_scheme_has_dihedral_group() {
        let n = 7;
        let mut colors = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let d = (b + n - a) % n;
                colors[a * n + b] = d.min(n - d) as u32;
            }
        }
        let sch = Scheme::from_color_matrix(n, &colors).unwrap();
        let aut = automorphism_group(&sch, &[], &SearchLimits::default()).unwrap();
        assert_eq!(aut.order(), BigUint::from(14u32));
    }

    #[test]
    fn seeded_and_unseeded_searches_agree() {
        let g = cyclic(9, "C9");
        let sets: Vec<Vec<usize>> = (0..9).map(|x| vec![x]).collect();
        let part = BasicSetPartition::new(&g, sets).unwrap();
        let sch = cayley_scheme(&g, &part);
        let seeds = right_translation_group(&g).unwrap();
        let with_seed =
            automorphism_group(&sch, seeds.generators(), &SearchLimits::default()).unwrap();
        let without = automorphism_group(&sch, &[], &SearchLimits::default()).unwrap();
        assert_eq!(with_seed.order(), without.order());
        assert_eq!(with_seed.order(), BigUint::from(9u32));
    }

    #[test]
    fn base_scheme_automorphisms_are_the_translations() {
        let b = build_paper_group(5).unwrap();
        let sch = cayley_scheme(&b.group, &paper_partition(&b));
        let seeds = right_translation_group(&b.group).unwrap();
        let aut =
            automorphism_group(&sch, seeds.generators(), &SearchLimits::default()).unwrap();
        assert_eq!(aut.order(), BigUint::from(100u32));
    }

    #[test]
    fn bad_seed_is_rejected() {
        let sch = rank2(4);
        let mut images: Vec<u32> = (0..4).collect();
        images.swap(0, 1);
        let ok_seed = Perm::from_images(images).unwrap();
        assert!(automorphism_group(&sch, &[ok_seed], &SearchLimits::default()).is_ok());

        let cycle_sch = {
            let n = 5;
            let mut colors = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    let d = (b + n - a) % n;
                    colors[a * n + b] = d.min(n - d) as u32;
                }
            }
            Scheme::from_color_matrix(n, &colors).unwrap()
        };
        let bad = Perm::from_images(vec![1, 0, 2, 3, 4]).unwrap();
        assert_eq!(
            automorphism_group(&cycle_sch, &[bad], &SearchLimits::default()).unwrap_err(),
            SearchError::SeedNotAutomorphism(0)
        );
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let sch = rank2(8);
        assert_eq!(
            automorphism_group(&sch, &[], &SearchLimits::with_budget(3)).unwrap_err(),
            SearchError::Budget(3)
        );
    }

    #[test]
    fn isomorphism_between_relabeled_schemes() {
        // the same cycle scheme with points relabeled; canonical color ids
        // shift under relabeling, so align them first as callers do
        let n = 6;
        let mut colors = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let d = (b + n - a) % n;
                colors[a * n + b] = d.min(n - d) as u32;
            }
        }
        let src = Scheme::from_color_matrix(n, &colors).unwrap();
        let relabel = Perm::from_images(vec![3, 0, 4, 1, 5, 2]).unwrap();
        let mut moved = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                moved[relabel.apply(a) * n + relabel.apply(b)] = colors[a * n + b];
            }
        }
        let dst_raw = Scheme::from_color_matrix(n, &moved).unwrap();
        let mut align = vec![u32::MAX; dst_raw.rank()];
        for a in 0..n {
            for b in 0..n {
                let d = dst_raw.color(relabel.apply(a), relabel.apply(b));
                align[d as usize] = src.color(a, b);
            }
        }
        let dst = dst_raw.renamed(&align);
        let iso = find_isomorphism(&src, &dst, &SearchLimits::default())
            .unwrap()
            .expect("schemes are isomorphic");
        assert!(is_color_preserving(&src, &dst, &iso));
    }

    #[test]
    fn non_isomorphic_schemes_yield_definitive_none() {
        // C6 distance scheme vs the rank-4 scheme of two triangles
        let n = 6;
        let mut colors = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let d = (b + n - a) % n;
                colors[a * n + b] = d.min(n - d) as u32;
            }
        }
        let c6 = Scheme::from_color_matrix(n, &colors).unwrap();
        // group scheme of C3 × C2 with a different fusion: use Z6 squares
        let mut alt = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let d = (b + n - a) % n;
                // distances 1 and 2 fused, 3 and 0 kept
                alt[a * n + b] = match d {
                    0 => 0,
                    3 => 2,
                    _ => 1,
                };
            }
        }
        let fused = crate::wl::wl_stabilize(n, &alt).unwrap().scheme;
        if fused.rank() == c6.rank() {
            let iso = find_isomorphism(&c6, &fused, &SearchLimits::default()).unwrap();
            assert!(iso.is_none());
        }
    }
}
