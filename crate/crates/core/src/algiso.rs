//! Algebraic isomorphisms between intersection tensors, the search for
//! inducing point bijections, and the separability audit built on both.

use thiserror::Error;

use crate::group::{
    build_candidate_group, is_prime, CandidateKind, GroupError, GroupTable, Subgroup,
};
use crate::perm::Perm;
use crate::permgroup::RegularityClass;
use crate::scheme::{Scheme, SchemeError};
use crate::search::{automorphism_group, find_isomorphism, SearchError, SearchLimits};
use crate::tensor::IntersectionTensor;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgisoError {
    #[error("color bijection does not preserve the tensors")]
    InvalidBijection,
    #[error("automorphism group is not regular ({0})")]
    NotRegular(RegularityClass),
    #[error("order census matches none of the candidate groups")]
    CensusUnmatched,
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A bijection of colors preserving valencies, the transpose map, and every
/// intersection number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorBijection {
    pub images: Vec<u32>,
}

impl ColorBijection {
    pub fn identity(rank: usize) -> Self {
        ColorBijection {
            images: (0..rank as u32).collect(),
        }
    }

    pub fn apply(&self, s: usize) -> usize {
        self.images[s] as usize
    }

    pub fn inverse_images(&self) -> Vec<u32> {
        let mut inv = vec![0u32; self.images.len()];
        for (s, &t) in self.images.iter().enumerate() {
            inv[t as usize] = s as u32;
        }
        inv
    }

    /// Exhaustive preservation check, independent of any search pruning.
    pub fn verify(&self, src: &IntersectionTensor, dst: &IntersectionTensor) -> bool {
        let r = src.rank();
        if dst.rank() != r || self.images.len() != r {
            return false;
        }
        let mut seen = vec![false; r];
        for &t in &self.images {
            if t as usize >= r || seen[t as usize] {
                return false;
            }
            seen[t as usize] = true;
        }
        for s in 0..r {
            if src.valencies()[s] != dst.valencies()[self.apply(s)]
                || self.apply(src.transpose(s)) != dst.transpose(self.apply(s))
                || src.is_diagonal(s) != dst.is_diagonal(self.apply(s))
            {
                return false;
            }
        }
        src.entry_count() == dst.entry_count()
            && src
                .entries()
                .all(|(s, t, u, c)| dst.get(self.apply(s), self.apply(t), self.apply(u)) == c)
    }
}

/// All algebraic isomorphisms between two tensors, by backtracking over
/// colors ordered by (valency, diagonal-first, id). Pruning only ever uses
/// exact violated equalities, plus forced assignments through rows with a
/// unique positive entry, so the enumeration is complete; every candidate is
/// re-verified exhaustively before being reported.
pub fn enumerate_algebraic_isos(
    src: &IntersectionTensor,
    dst: &IntersectionTensor,
) -> Vec<ColorBijection> {
    let r = src.rank();
    if dst.rank() != r
        || src.valency_multiset() != dst.valency_multiset()
        || src.diagonal_count() != dst.diagonal_count()
    {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_unstable_by_key(|&s| (src.valencies()[s], !src.is_diagonal(s), s));

    let row_table = |t: &IntersectionTensor| -> Vec<Vec<(u32, u32)>> {
        let mut rows = vec![Vec::new(); r * r];
        for (s, u, v, c) in t.entries() {
            rows[s * r + u].push((v as u32, c as u32));
        }
        rows
    };
    let mut state = EnumState {
        src,
        dst,
        rank: r,
        src_rows: row_table(src),
        dst_rows: row_table(dst),
        images: vec![u32::MAX; r],
        used: vec![false; r],
        assigned: Vec::new(),
        found: Vec::new(),
    };
    state.dfs(&order);
    state.found
}

struct EnumState<'a> {
    src: &'a IntersectionTensor,
    dst: &'a IntersectionTensor,
    rank: usize,
    /// Positive entries of every row (s, t), sorted by target color.
    src_rows: Vec<Vec<(u32, u32)>>,
    dst_rows: Vec<Vec<(u32, u32)>>,
    images: Vec<u32>,
    used: Vec<bool>,
    assigned: Vec<usize>,
    found: Vec<ColorBijection>,
}

impl<'a> EnumState<'a> {
    #[inline]
    fn src_get(&self, s: usize, t: usize, u: usize) -> u32 {
        let row = &self.src_rows[s * self.rank + t];
        match row.binary_search_by_key(&(u as u32), |&(v, _)| v) {
            Ok(k) => row[k].1,
            Err(_) => 0,
        }
    }

    #[inline]
    fn dst_get(&self, s: usize, t: usize, u: usize) -> u32 {
        let row = &self.dst_rows[s * self.rank + t];
        match row.binary_search_by_key(&(u as u32), |&(v, _)| v) {
            Ok(k) => row[k].1,
            Err(_) => 0,
        }
    }
    fn dfs(&mut self, order: &[usize]) {
        let next = match order.iter().find(|&&s| self.images[s] == u32::MAX) {
            Some(&s) => s,
            None => {
                let phi = ColorBijection {
                    images: self.images.clone(),
                };
                if phi.verify(self.src, self.dst) {
                    self.found.push(phi);
                }
                return;
            }
        };
        for cand in 0..self.dst.rank() {
            if self.used[cand] {
                continue;
            }
            let mark = self.assigned.len();
            if self.try_assign(next, cand) {
                self.dfs(order);
            }
            self.rollback(mark);
        }
    }

    fn rollback(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let s = self.assigned.pop().unwrap();
            let img = self.images[s] as usize;
            self.used[img] = false;
            self.images[s] = u32::MAX;
        }
    }

    /// Assign s ↦ cand and propagate forced images; false on any exact
    /// violated equality (the caller rolls back).
    fn try_assign(&mut self, s: usize, cand: usize) -> bool {
        let mut queue = vec![(s, cand)];
        while let Some((s, cand)) = queue.pop() {
            if self.images[s] != u32::MAX {
                if self.images[s] as usize != cand {
                    return false;
                }
                continue;
            }
            if self.used[cand]
                || self.src.valencies()[s] != self.dst.valencies()[cand]
                || self.src.is_diagonal(s) != self.dst.is_diagonal(cand)
            {
                return false;
            }
            // transpose consistency
            let st = self.src.transpose(s);
            if st == s && self.dst.transpose(cand) != cand {
                return false;
            }
            if self.images[st] != u32::MAX
                && self.dst.transpose(cand) != self.images[st] as usize
            {
                return false;
            }
            self.images[s] = cand as u32;
            self.used[cand] = true;
            self.assigned.push(s);

            // exact consistency on all triples among assigned colors
            for i in 0..self.assigned.len() {
                let a = self.assigned[i];
                let ai = self.images[a] as usize;
                for &(x, y, xi, yi) in &[(s, a, cand, ai), (a, s, ai, cand)] {
                    if !self.check_row(x, y, xi, yi, &mut queue) {
                        return false;
                    }
                }
                for j in 0..self.assigned.len() {
                    let b = self.assigned[j];
                    let bi = self.images[b] as usize;
                    if self.src_get(a, b, s) != self.dst_get(ai, bi, cand) {
                        return false;
                    }
                }
            }
            // transpose forcing keeps rows comparable early
            if self.images[st] == u32::MAX {
                queue.push((st, self.dst.transpose(cand)));
            }
        }
        true
    }

    /// Compare the rows (x, y) and (xi, yi) on assigned colors; when exactly
    /// one source entry is unassigned, its image is forced.
    fn check_row(
        &self,
        x: usize,
        y: usize,
        xi: usize,
        yi: usize,
        queue: &mut Vec<(usize, usize)>,
    ) -> bool {
        let src_row = &self.src_rows[x * self.rank + y];
        let dst_row = &self.dst_rows[xi * self.rank + yi];
        if src_row.len() != dst_row.len() {
            return false;
        }
        let mut unassigned = None;
        let mut covered = 0u64;
        debug_assert!(dst_row.len() <= 64 || self.rank > 64);
        for &(u, c) in src_row {
            if self.images[u as usize] != u32::MAX {
                let target = self.images[u as usize];
                match dst_row.iter().position(|&(v, d)| v == target && d == c) {
                    Some(k) if k < 64 => covered |= 1 << k,
                    Some(_) => {}
                    None => return false,
                }
            } else if unassigned.replace((u, c)).is_some() {
                unassigned = Some((u32::MAX, 0));
            }
        }
        if let Some((u, c)) = unassigned {
            if u != u32::MAX && dst_row.len() <= 64 {
                let remaining: Vec<usize> =
                    (0..dst_row.len()).filter(|&k| covered & (1 << k) == 0).collect();
                if remaining.len() != 1 || dst_row[remaining[0]].1 != c {
                    return false;
                }
                queue.push((u as usize, dst_row[remaining[0]].0 as usize));
            }
        }
        true
    }
}

/// A point bijection m with s^m = s^φ for every color, or definitive
/// absence; a budget overrun surfaces as an error, never as absence.
pub fn find_inducing_isomorphism(
    phi: &ColorBijection,
    x: &Scheme,
    y: &Scheme,
    limits: &SearchLimits,
) -> Result<Option<Perm>, AlgisoError> {
    let xt = IntersectionTensor::from_scheme_unchecked(x);
    let yt = IntersectionTensor::from_scheme_unchecked(y);
    if !phi.verify(&xt, &yt) {
        return Err(AlgisoError::InvalidBijection);
    }
    let y_aligned = y.renamed(&phi.inverse_images());
    let found = find_isomorphism(x, &y_aligned, limits)?;
    if let Some(m) = &found {
        // m maps x-colors onto φ-images exhaustively
        let n = x.degree();
        for a in 0..n {
            for b in 0..n {
                debug_assert_eq!(
                    y.color(m.apply(a), m.apply(b)),
                    phi.images[x.color(a, b) as usize]
                );
            }
        }
    }
    Ok(found)
}

/// Outcome of attempting to induce every algebraic automorphism of a
/// scheme's tensor by a combinatorial isomorphism.
#[derive(Clone, Debug)]
pub struct AuditReport {
    pub algebraic_automorphism_count: usize,
    pub induced_count: usize,
    pub inconclusive_count: usize,
    /// Bijections proven not induced (nonempty means non-separable within
    /// the audited consequences).
    pub failures: Vec<ColorBijection>,
    pub witnesses: Vec<(ColorBijection, Perm)>,
}

impl AuditReport {
    pub fn all_induced(&self) -> bool {
        self.failures.is_empty()
            && self.inconclusive_count == 0
            && self.induced_count == self.algebraic_automorphism_count
    }
}

/// Enumerate all algebraic automorphisms of the scheme's tensor and search
/// for an inducing point bijection for each.
pub fn separability_audit(sch: &Scheme, limits: &SearchLimits) -> Result<AuditReport, AlgisoError> {
    let tensor = IntersectionTensor::from_scheme(sch)?;
    let phis = enumerate_algebraic_isos(&tensor, &tensor);
    let mut report = AuditReport {
        algebraic_automorphism_count: phis.len(),
        induced_count: 0,
        inconclusive_count: 0,
        failures: Vec::new(),
        witnesses: Vec::new(),
    };
    for phi in phis {
        let aligned = sch.renamed(&phi.inverse_images());
        match find_isomorphism(sch, &aligned, limits) {
            Ok(Some(m)) => {
                report.induced_count += 1;
                report.witnesses.push((phi, m));
            }
            Ok(None) => report.failures.push(phi),
            Err(SearchError::Budget(_)) => report.inconclusive_count += 1,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(report)
}

/// A regular scheme's automorphism group realized as an abstract group on
/// the point set, with its isomorphism type among the candidates of order
/// 4p² when the census matches one.
#[derive(Clone, Debug)]
pub struct RecoveredGroup {
    pub table: GroupTable,
    pub base_point: usize,
    pub kind: Option<CandidateKind>,
}

/// Realize the points of a scheme with regular automorphism group as that
/// group: fix the base point and multiply via the unique automorphisms
/// mapping it to each point.
pub fn recover_group_of_regular_scheme(
    sch: &Scheme,
    seeds: &[Perm],
    limits: &SearchLimits,
) -> Result<RecoveredGroup, AlgisoError> {
    let aut = automorphism_group(sch, seeds, limits)?;
    let class = aut.regularity_class();
    if class != RegularityClass::Regular {
        return Err(AlgisoError::NotRegular(class));
    }
    let n = sch.degree();
    let base_point = aut.base()[0];
    let reps: Vec<Perm> = (0..n)
        .map(|w| {
            aut.top_transversal(w)
                .expect("regular group is transitive")
                .clone()
        })
        .collect();
    let table = GroupTable::from_product_fn(n, "recovered", |a, b| reps[a].apply(b))?;
    let kind = classify_against_candidates(&table)?;
    Ok(RecoveredGroup {
        table,
        base_point,
        kind,
    })
}

/// Compare the order census against the four candidate isomorphism types of
/// order 4p².
pub fn classify_against_candidates(table: &GroupTable) -> Result<Option<CandidateKind>, GroupError> {
    let n = table.order() as u64;
    let p = {
        let mut r = 1;
        while (r + 1) * (r + 1) <= n / 4 {
            r += 1;
        }
        r
    };
    if 4 * p * p != n || !is_prime(p) {
        return Ok(None);
    }
    let census = table.order_census();
    for kind in CandidateKind::ALL {
        let candidate = build_candidate_group_with_limit_free(kind, p)?;
        if candidate.order_census() == census {
            return Ok(Some(kind));
        }
    }
    Ok(None)
}

fn build_candidate_group_with_limit_free(
    kind: CandidateKind,
    p: u64,
) -> Result<GroupTable, GroupError> {
    crate::group::build_candidate_group_with_limit(kind, p, u64::MAX)
}

/// One row of the candidate-group census table.
#[derive(Clone, Debug)]
pub struct CandidateCensusRow {
    pub kind: CandidateKind,
    pub involutions: u64,
    pub sylow_count: usize,
    pub sylow_elementary_abelian: bool,
    /// Quotient modulo the Sylow subgroup has exponent 2 (Klein).
    pub quotient_klein: bool,
    /// More involutions than the sum of three sets of size p can hold.
    pub eliminated_by_involution_bound: bool,
}

/// Census and elimination data for the four candidate groups of order 4p².
pub fn candidate_census(p: u64) -> Result<Vec<CandidateCensusRow>, GroupError> {
    let mut rows = Vec::new();
    for kind in CandidateKind::ALL {
        let g = build_candidate_group(kind, p)?;
        let census = g.order_census();
        let involutions = census.get(&2).copied().unwrap_or(0);
        let (sylow_count, subs) = g.sylow_subgroups(p)?;
        let sylow = &subs[0];
        let quotient_klein = (0..g.order()).all(|x| sylow.contains(g.mul(x, x)));
        rows.push(CandidateCensusRow {
            kind,
            involutions,
            sylow_count,
            sylow_elementary_abelian: sylow.is_elementary_abelian_p2(&g, p),
            quotient_klein,
            eliminated_by_involution_bound: involutions > 3 * p,
        });
    }
    Ok(rows)
}

/// In C_{2p} × D_{2p}, every two dihedral subgroups of order 2p intersect
/// nontrivially, so no pair of them can decompose the group directly. This
/// is the elimination step for the one candidate the involution bound lets
/// through.
pub fn dihedral_pairs_share_rotations(p: u64) -> Result<bool, GroupError> {
    let g = build_candidate_group(CandidateKind::C2pXD2p, p)?;
    let n = g.order();
    let mut dihedrals: Vec<Vec<u32>> = Vec::new();
    for r in 0..n {
        if g.element_order(r) != p {
            continue;
        }
        for t in 0..n {
            if g.element_order(t) != 2 {
                continue;
            }
            // t must invert r
            if g.mul(g.mul(t, r), t) != g.inv(r) {
                continue;
            }
            let sub = g.closure(&[r, t]);
            if sub.len() as u64 == 2 * p {
                let sub: Vec<u32> = sub.into_iter().map(|x| x as u32).collect();
                if !dihedrals.contains(&sub) {
                    dihedrals.push(sub);
                }
            }
        }
    }
    let all_pairs_share = dihedrals.iter().enumerate().all(|(i, a)| {
        dihedrals.iter().skip(i + 1).all(|b| {
            let common = a.iter().filter(|x| b.binary_search(x).is_ok()).count();
            common > 1
        })
    });
    Ok(!dihedrals.is_empty() && all_pairs_share)
}

/// A Sylow p-subgroup of the recovered group, for checks on its structure.
pub fn recovered_sylow(table: &GroupTable, p: u64) -> Result<Subgroup, AlgisoError> {
    let (_, subs) = table.sylow_subgroups(p)?;
    Ok(subs.into_iter().next().expect("at least one Sylow subgroup"))
}
