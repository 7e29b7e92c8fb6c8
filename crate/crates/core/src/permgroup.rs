//! Permutation groups with verified stabilizer chains (Schreier-Sims).
//!
//! Chains are built deterministically: orbits are swept in point order with
//! generators in insertion order, base points can be prescribed (needed for
//! prefix-stabilizer pruning in the backtracking searches), and closure is
//! re-established after every insertion by exhausting all Schreier
//! generators. Orders are kept as arbitrary-precision integers.

use num_bigint::BigUint;
use thiserror::Error;

use crate::perm::Perm;

/// Groups up to this order may be enumerated explicitly; the intersection
/// routine falls back to enumeration below it.
pub const ENUMERATION_LIMIT: u64 = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermGroupError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("group of order {0} is too large to enumerate (limit {1})")]
    TooLargeToEnumerate(BigUint, u64),
}

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(degree: usize, point: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[point] = Some(Perm::identity(degree));
        Level {
            point,
            gens: Vec::new(),
            orbit: vec![point],
            transversal,
        }
    }

    /// Deterministic BFS orbit and transversal from the level's generators.
    fn rebuild(&mut self, degree: usize) {
        self.orbit.clear();
        self.transversal = vec![None; degree];
        self.transversal[self.point] = Some(Perm::identity(degree));
        self.orbit.push(self.point);
        let mut head = 0;
        while head < self.orbit.len() {
            let w = self.orbit[head];
            head += 1;
            for g in &self.gens {
                let img = g.apply(w);
                if self.transversal[img].is_none() {
                    let rep = self.transversal[w].as_ref().unwrap().then(g);
                    self.transversal[img] = Some(rep);
                    self.orbit.push(img);
                }
            }
        }
    }
}

/// A permutation group with a stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    levels: Vec<Level>,
    gens: Vec<Perm>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            levels: Vec::new(),
            gens: Vec::new(),
        }
    }

    pub fn from_generators(degree: usize, gens: &[Perm]) -> Result<Self, PermGroupError> {
        Self::with_base_hint(degree, gens, &[])
    }

    /// Build a chain whose base starts with `hint` (levels are created for
    /// every hint point up front, even when their orbits stay trivial).
    pub fn with_base_hint(
        degree: usize,
        gens: &[Perm],
        hint: &[usize],
    ) -> Result<Self, PermGroupError> {
        let mut g = PermGroup {
            degree,
            levels: hint.iter().map(|&b| Level::new(degree, b)).collect(),
            gens: Vec::new(),
        };
        for gen in gens {
            g.extend(gen)?;
        }
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    /// All strong generators across the chain.
    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut all = self.gens.clone();
        for level in &self.levels {
            for g in &level.gens {
                if !all.contains(g) {
                    all.push(g.clone());
                }
            }
        }
        all
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * l.orbit.len())
    }

    /// Generators of the pointwise stabilizer of the first `prefix_len` base
    /// points.
    pub fn stabilizer_gens(&self, prefix_len: usize) -> &[Perm] {
        if prefix_len >= self.levels.len() {
            return &[];
        }
        &self.levels[prefix_len].gens
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift_from(0, g.clone()).0.is_identity()
    }

    /// Add a generator; returns true when the group grew.
    pub fn extend(&mut self, g: &Perm) -> Result<bool, PermGroupError> {
        if g.degree() != self.degree {
            return Err(PermGroupError::DegreeMismatch(g.degree(), self.degree));
        }
        if g.is_identity() || self.contains(g) {
            return Ok(false);
        }
        self.gens.push(g.clone());
        let (residue, stuck) = self.sift_from(0, g.clone());
        self.place_residue(residue, stuck);
        self.ensure_closed();
        Ok(true)
    }

    /// Sift through levels `from..`; returns the residue and the level index
    /// where it stopped (`levels.len()` when it fixed the whole base).
    fn sift_from(&self, from: usize, mut g: Perm) -> (Perm, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let img = g.apply(level.point);
            match &level.transversal[img] {
                Some(t) => g = g.then(&t.inverse()),
                None => return (g, i),
            }
        }
        let stuck = self.levels.len();
        (g, stuck)
    }

    /// A residue fixing base[0..stuck] is a strong generator for every level
    /// up to and including `stuck`.
    fn place_residue(&mut self, residue: Perm, stuck: usize) {
        debug_assert!(!residue.is_identity());
        if stuck == self.levels.len() {
            let point = residue
                .longest_cycle_point()
                .expect("non-identity residue moves a point");
            self.levels.push(Level::new(self.degree, point));
        }
        for level in &mut self.levels[..=stuck] {
            level.gens.push(residue.clone());
        }
    }

    /// Re-establish closure: every Schreier generator of every level must
    /// sift to the identity. Restarts after each insertion; terminates
    /// because each insertion grows a stabilizer subgroup.
    fn ensure_closed(&mut self) {
        'outer: loop {
            let degree = self.degree;
            for level in &mut self.levels {
                level.rebuild(degree);
            }
            for i in 0..self.levels.len() {
                for oi in 0..self.levels[i].orbit.len() {
                    for gi in 0..self.levels[i].gens.len() {
                        let level = &self.levels[i];
                        let w = level.orbit[oi];
                        let s = &level.gens[gi];
                        let t_w = level.transversal[w].as_ref().unwrap();
                        let target = s.apply(w);
                        let t_img = level.transversal[target].as_ref().unwrap();
                        let schreier = t_w.then(s).then(&t_img.inverse());
                        if schreier.is_identity() {
                            continue;
                        }
                        let (residue, stuck) = self.sift_from(i + 1, schreier);
                        if !residue.is_identity() {
                            self.place_residue(residue, stuck);
                            continue 'outer;
                        }
                    }
                }
            }
            return;
        }
    }

    /// Orbits of the group on points, in order of least member.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut orbits = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut head = 0;
            while head < orbit.len() {
                let w = orbit[head];
                head += 1;
                for g in &self.gens {
                    let img = g.apply(w);
                    if !seen[img] {
                        seen[img] = true;
                        orbit.push(img);
                    }
                }
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn is_transitive(&self) -> bool {
        self.point_orbits().len() == 1
    }

    /// All point stabilizers are trivial: every orbit has full group size.
    pub fn is_semiregular(&self) -> bool {
        let order = self.order();
        self.point_orbits()
            .iter()
            .all(|o| BigUint::from(o.len()) == order)
    }

    pub fn regularity_class(&self) -> RegularityClass {
        match (self.is_transitive(), self.is_semiregular()) {
            (true, true) => RegularityClass::Regular,
            (false, true) => RegularityClass::SemiregularIntransitive,
            (true, false) => RegularityClass::TransitiveNonregular,
            (false, false) => RegularityClass::Other,
        }
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.contains(g))
    }

    /// Explicit element list, as products over the transversals.
    pub fn elements(&self) -> Result<Vec<Perm>, PermGroupError> {
        let order = self.order();
        if order > BigUint::from(ENUMERATION_LIMIT) {
            return Err(PermGroupError::TooLargeToEnumerate(
                order,
                ENUMERATION_LIMIT,
            ));
        }
        let mut out = vec![Perm::identity(self.degree)];
        // deepest level first keeps the outermost transversal leftmost
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for &w in &level.orbit {
                let t = level.transversal[w].as_ref().unwrap();
                for g in &out {
                    next.push(g.then(t));
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// The unique transversal element at the top level mapping the first
    /// base point to `target`, when `target` lies in its orbit.
    pub fn top_transversal(&self, target: usize) -> Option<&Perm> {
        self.levels.first()?.transversal[target].as_ref()
    }

    /// Exact intersection. Small groups are intersected by enumeration;
    /// otherwise the chain of `a` is searched with feasibility pruning
    /// against a chain of `b` rebased to `a`'s base.
    pub fn intersection(a: &PermGroup, b: &PermGroup) -> Result<PermGroup, PermGroupError> {
        if a.degree != b.degree {
            return Err(PermGroupError::DegreeMismatch(a.degree, b.degree));
        }
        let limit = BigUint::from(ENUMERATION_LIMIT);
        if a.order() <= limit || b.order() <= limit {
            let (small, big) = if a.order() <= b.order() { (a, b) } else { (b, a) };
            let mut result = PermGroup::trivial(a.degree);
            for e in small.elements()? {
                if big.contains(&e) {
                    result.extend(&e)?;
                }
            }
            return Ok(result);
        }

        let base = a.base();
        let b_rebased = PermGroup::with_base_hint(b.degree, &b.strong_generators(), &base)?;
        let mut result = PermGroup::with_base_hint(a.degree, &[], &base)?;
        let acc = Perm::identity(a.degree);
        let inv_acc = Perm::identity(a.degree);
        intersect_dfs(a, b, &b_rebased, 0, &acc, &inv_acc, &mut result)?;
        Ok(result)
    }
}

fn intersect_dfs(
    a: &PermGroup,
    b: &PermGroup,
    b_rebased: &PermGroup,
    level: usize,
    acc: &Perm,
    b_inv_acc: &Perm,
    result: &mut PermGroup,
) -> Result<(), PermGroupError> {
    if level == a.levels.len() {
        if b.contains(acc) {
            result.extend(acc)?;
        }
        return Ok(());
    }
    let a_level = &a.levels[level];
    for &w in &a_level.orbit {
        let t = a_level.transversal[w].as_ref().unwrap();
        // image of this base point under any completion of the product
        let beta = acc.apply(w);
        // feasibility in b: some element of b must take the base prefix to
        // the same images
        let adjusted = b_inv_acc.apply(beta);
        let b_level = &b_rebased.levels[level];
        debug_assert_eq!(b_level.point, a_level.point);
        let bt = match &b_level.transversal[adjusted] {
            Some(bt) => bt,
            None => continue,
        };
        let next_acc = t.then(acc);
        let next_inv = b_inv_acc.then(&bt.inverse());
        intersect_dfs(a, b, b_rebased, level + 1, &next_acc, &next_inv, result)?;
    }
    Ok(())
}

/// Classification of a permutation group by transitivity and stabilizers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularityClass {
    Regular,
    SemiregularIntransitive,
    TransitiveNonregular,
    Other,
}

impl std::fmt::Display for RegularityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegularityClass::Regular => "regular",
            RegularityClass::SemiregularIntransitive => "semiregular-intransitive",
            RegularityClass::TransitiveNonregular => "transitive-nonregular",
            RegularityClass::Other => "other",
        };
        f.write_str(s)
    }
}

/// The right-translation group of a multiplication table, acting on element
/// indices, generated by translations of a small generating set.
pub fn right_translation_group(
    table: &crate::group::GroupTable,
) -> Result<PermGroup, PermGroupError> {
    let gens: Vec<Perm> = table
        .generating_set()
        .into_iter()
        .map(|h| table.right_translation(h))
        .collect();
    PermGroup::from_generators(table.order(), &gens)
}
