//! Finite groups given by explicit multiplication tables.
//!
//! Every group handled here has order at most a few hundred, so the whole
//! Cayley table is stored and the group axioms are verified exhaustively:
//! associativity over all triples, identity and inverse laws for every
//! element, and the Latin-square property of the table.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use thiserror::Error;

use crate::perm::Perm;

/// Largest prime accepted without an explicit override (degree 4·13² = 676).
pub const DEFAULT_MAX_P: u64 = 13;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} is below the minimum 5")]
    TooSmall(u64),
    #[error("p = {0} exceeds the configured maximum {1}")]
    OverMax(u64, u64),
    #[error("associativity fails at triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("identity law fails at element {0}")]
    BadIdentity(usize),
    #[error("inverse law fails at element {0}")]
    BadInverse(usize),
    #[error("product table is not a Latin square at row/column {0}")]
    NotLatinSquare(usize),
    #[error("{0} does not divide the group order {1}")]
    NotADivisor(u64, u64),
    #[error("no identity element in the table")]
    NoIdentity,
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("subgroup choice invalid: {0}")]
    BadSubgroupChoice(String),
    #[error("involution choice invalid: {0}")]
    BadInvolutionChoice(String),
    #[error("set {0:?} is not a subgroup")]
    NotASubgroup(Vec<u32>),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Check that `p` is a prime in `5..=max_p`.
pub fn check_prime_parameter(p: u64, max_p: u64) -> Result<(), GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    if p < 5 {
        return Err(GroupError::TooSmall(p));
    }
    if p > max_p {
        return Err(GroupError::OverMax(p, max_p));
    }
    Ok(())
}

/// A finite group as an exact multiplication structure on `0..order`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    identity: u32,
    table: Vec<u32>,
    inverse: Vec<u32>,
    label: String,
}

impl GroupTable {
    /// Build a table from a product function and verify all group axioms.
    pub fn from_product_fn(
        order: usize,
        label: impl Into<String>,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupError> {
        let mut table = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                let c = f(a, b);
                if c >= order {
                    return Err(GroupError::Malformed(format!(
                        "product {a}*{b} = {c} out of range"
                    )));
                }
                table[a * order + b] = c as u32;
            }
        }
        Self::from_table(order, label, table)
    }

    /// Build from a row-major product table and verify all group axioms.
    pub fn from_table(
        order: usize,
        label: impl Into<String>,
        table: Vec<u32>,
    ) -> Result<Self, GroupError> {
        if order == 0 || table.len() != order * order {
            return Err(GroupError::Malformed(format!(
                "table length {} does not match order {}",
                table.len(),
                order
            )));
        }
        if let Some(&v) = table.iter().find(|&&v| v as usize >= order) {
            return Err(GroupError::Malformed(format!("entry {v} out of range")));
        }
        // locate the identity
        let mut identity = None;
        'outer: for e in 0..order {
            for a in 0..order {
                if table[e * order + a] as usize != a || table[a * order + e] as usize != a {
                    continue 'outer;
                }
            }
            identity = Some(e as u32);
            break;
        }
        let identity = identity.ok_or(GroupError::NoIdentity)?;
        let mut inverse = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == identity && table[b * order + a] == identity {
                    inverse[a] = b as u32;
                    break;
                }
            }
            if inverse[a] == u32::MAX {
                return Err(GroupError::BadInverse(a));
            }
        }
        let g = GroupTable {
            order,
            identity,
            table,
            inverse,
            label: label.into(),
        };
        g.verify()?;
        Ok(g)
    }

    /// Exhaustive verification: associativity on all triples, identity and
    /// inverse laws for every element, Latin-square rows and columns.
    pub fn verify(&self) -> Result<(), GroupError> {
        let n = self.order;
        let e = self.identity as usize;
        for a in 0..n {
            if self.mul(a, e) != a || self.mul(e, a) != a {
                return Err(GroupError::BadIdentity(a));
            }
            let ai = self.inv(a);
            if self.mul(a, ai) != e || self.mul(ai, a) != e {
                return Err(GroupError::BadInverse(a));
            }
        }
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let c = self.mul(a, b);
                if seen[c] {
                    return Err(GroupError::NotLatinSquare(a));
                }
                seen[c] = true;
            }
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let c = self.mul(b, a);
                if seen[c] {
                    return Err(GroupError::NotLatinSquare(a));
                }
                seen[c] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn identity(&self) -> usize {
        self.identity as usize
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn inverses(&self) -> &[u32] {
        &self.inverse
    }

    pub fn element_order(&self, x: usize) -> u64 {
        let mut y = x;
        let mut k = 1u64;
        while y != self.identity as usize {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order).fold(1u64, |acc, x| lcm(acc, self.element_order(x)))
    }

    /// Number of elements of each order `m`, for every `m` dividing the
    /// exponent (zero counts included).
    pub fn order_census(&self) -> BTreeMap<u64, u64> {
        let mut census = BTreeMap::new();
        for x in 0..self.order {
            *census.entry(self.element_order(x)).or_insert(0u64) += 1;
        }
        let exp = self.exponent();
        for m in 1..=exp {
            if exp % m == 0 {
                census.entry(m).or_insert(0);
            }
        }
        census
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|a| self.mul(z, a) == self.mul(a, z)))
            .collect()
    }

    /// Subgroup generated by `seed`, as a sorted element list.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        in_set[self.identity as usize] = true;
        let mut elems = vec![self.identity as usize];
        let mut frontier: Vec<usize> = seed
            .iter()
            .copied()
            .filter(|&x| !in_set[x])
            .collect();
        for &x in &frontier {
            in_set[x] = true;
        }
        elems.extend(frontier.iter().copied());
        while let Some(x) = frontier.pop() {
            // closure under left products with everything collected so far
            for i in 0..elems.len() {
                for &(a, b) in &[(x, elems[i]), (elems[i], x)] {
                    let y = self.mul(a, b);
                    if !in_set[y] {
                        in_set[y] = true;
                        elems.push(y);
                        frontier.push(y);
                    }
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Right-translation action x ↦ x·h as a permutation of element indices.
    pub fn right_translation(&self, h: usize) -> Perm {
        Perm::from_images((0..self.order).map(|x| self.mul(x, h) as u32).collect())
            .expect("translations are bijections")
    }

    /// A small generating set found greedily, for the regular representation.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut generated = vec![self.identity as usize];
        for x in 0..self.order {
            if generated.len() == self.order {
                break;
            }
            if generated.binary_search(&x).is_err() {
                gens.push(x);
                generated = self.closure(&gens);
            }
        }
        gens
    }

    /// Sylow p-subgroups: the exact count and the subgroups themselves.
    pub fn sylow_subgroups(&self, p: u64) -> Result<(usize, Vec<Subgroup>), GroupError> {
        let order = self.order as u64;
        if p < 2 || order % p != 0 {
            return Err(GroupError::NotADivisor(p, order));
        }
        let mut target = 1u64;
        let mut rest = order;
        while rest % p == 0 {
            rest /= p;
            target *= p;
        }
        let p_elements: Vec<usize> = (0..self.order)
            .filter(|&x| {
                let o = self.element_order(x);
                o > 1 && target % o == 0 && is_power_of(o, p)
            })
            .collect();
        // Grow one Sylow subgroup: a proper p-subgroup always has a p-element
        // of the normalizer outside itself.
        let mut sub = vec![self.identity as usize];
        while (sub.len() as u64) < target {
            let mut grew = false;
            for &y in &p_elements {
                if sub.binary_search(&y).is_ok() {
                    continue;
                }
                let yi = self.inv(y);
                let normalizes = sub
                    .iter()
                    .all(|&h| sub.binary_search(&self.mul(self.mul(y, h), yi)).is_ok());
                if normalizes {
                    let mut seed = sub.clone();
                    seed.push(y);
                    let next = self.closure(&seed);
                    if next.len() as u64 <= target {
                        sub = next;
                        grew = true;
                        break;
                    }
                }
            }
            if !grew {
                return Err(GroupError::Malformed(
                    "Sylow subgroup search stalled; table is not a group".into(),
                ));
            }
        }
        // All Sylow subgroups are conjugate.
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for g in 0..self.order {
            let gi = self.inv(g);
            let mut conj: Vec<usize> = sub.iter().map(|&h| self.mul(self.mul(g, h), gi)).collect();
            conj.sort_unstable();
            all.insert(conj);
        }
        let m = all.len();
        debug_assert!(m as u64 % p == 1 % p && order % m as u64 == 0);
        let subs = all
            .into_iter()
            .map(|elements| Subgroup::new(self, &elements))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((m, subs))
    }
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupTable({}, order {})", self.label, self.order)
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A verified subgroup of a parent table, stored as a sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<u32>,
}

impl Subgroup {
    pub fn new(parent: &GroupTable, elements: &[usize]) -> Result<Self, GroupError> {
        let mut sorted: Vec<u32> = elements.iter().map(|&x| x as u32).collect();
        sorted.sort_unstable();
        sorted.dedup();
        let as_err = || GroupError::NotASubgroup(sorted.clone());
        if sorted.binary_search(&(parent.identity() as u32)).is_err() {
            return Err(as_err());
        }
        for &a in &sorted {
            if parent.order() <= a as usize {
                return Err(as_err());
            }
            if sorted
                .binary_search(&(parent.inv(a as usize) as u32))
                .is_err()
            {
                return Err(as_err());
            }
            for &b in &sorted {
                let c = parent.mul(a as usize, b as usize) as u32;
                if sorted.binary_search(&c).is_err() {
                    return Err(as_err());
                }
            }
        }
        Ok(Subgroup { elements: sorted })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&(x as u32)).is_ok()
    }

    /// True when the subgroup is elementary abelian of order p²,
    /// i.e. isomorphic to C_p × C_p.
    pub fn is_elementary_abelian_p2(&self, parent: &GroupTable, p: u64) -> bool {
        if self.elements.len() as u64 != p * p {
            return false;
        }
        let abelian = self.elements.iter().all(|&a| {
            self.elements
                .iter()
                .all(|&b| parent.mul(a as usize, b as usize) == parent.mul(b as usize, a as usize))
        });
        abelian
            && self
                .elements
                .iter()
                .all(|&a| parent.element_order(a as usize) <= p)
    }
}

/// The four isomorphism types of order 4p² with an elementary abelian
/// Sylow p-subgroup and Klein quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CandidateKind {
    C2pXC2p,
    C2pXD2p,
    D2pXD2p,
    Cp2SemidirectC2XC2,
}

impl CandidateKind {
    pub const ALL: [CandidateKind; 4] = [
        CandidateKind::C2pXC2p,
        CandidateKind::C2pXD2p,
        CandidateKind::D2pXD2p,
        CandidateKind::Cp2SemidirectC2XC2,
    ];

    pub fn label(&self, p: u64) -> String {
        match self {
            CandidateKind::C2pXC2p => format!("C{0}xC{0}", 2 * p),
            CandidateKind::C2pXD2p => format!("C{0}xD{0}", 2 * p),
            CandidateKind::D2pXD2p => format!("D{0}xD{0}", 2 * p),
            CandidateKind::Cp2SemidirectC2XC2 => format!("(C{p}^2:C2)xC2"),
        }
    }
}

impl FromStr for CandidateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "C2pxC2p" => Ok(CandidateKind::C2pXC2p),
            "C2pxD2p" => Ok(CandidateKind::C2pXD2p),
            "D2pxD2p" => Ok(CandidateKind::D2pXD2p),
            "Cp2_semidirect_C2_x_C2" => Ok(CandidateKind::Cp2SemidirectC2XC2),
            other => Err(format!("unknown group kind {other:?}")),
        }
    }
}

pub fn cyclic(n: usize, label: impl Into<String>) -> GroupTable {
    GroupTable::from_product_fn(n, label, |a, b| (a + b) % n).expect("cyclic group")
}

/// Dihedral group of order 2p: index r + p·s for rotation r and flip flag s.
pub fn dihedral(p: usize, label: impl Into<String>) -> GroupTable {
    GroupTable::from_product_fn(2 * p, label, |x, y| {
        let (r1, s1) = (x % p, x / p);
        let (r2, s2) = (y % p, y / p);
        let r = if s1 == 0 { (r1 + r2) % p } else { (r1 + p - r2) % p };
        r + p * ((s1 + s2) % 2)
    })
    .expect("dihedral group")
}

pub fn direct_product(a: &GroupTable, b: &GroupTable, label: impl Into<String>) -> GroupTable {
    let (na, nb) = (a.order(), b.order());
    GroupTable::from_product_fn(na * nb, label, |x, y| {
        let (xa, xb) = (x / nb, x % nb);
        let (ya, yb) = (y / nb, y % nb);
        a.mul(xa, ya) * nb + b.mul(xb, yb)
    })
    .expect("direct product")
}

pub fn build_candidate_group(kind: CandidateKind, p: u64) -> Result<GroupTable, GroupError> {
    build_candidate_group_with_limit(kind, p, DEFAULT_MAX_P)
}

pub fn build_candidate_group_with_limit(
    kind: CandidateKind,
    p: u64,
    max_p: u64,
) -> Result<GroupTable, GroupError> {
    check_prime_parameter(p, max_p)?;
    let pu = p as usize;
    let label = kind.label(p);
    let table = match kind {
        CandidateKind::C2pXC2p => {
            let c = cyclic(2 * pu, "C2p");
            direct_product(&c, &c, label)
        }
        CandidateKind::C2pXD2p => {
            let c = cyclic(2 * pu, "C2p");
            let d = dihedral(pu, "D2p");
            direct_product(&c, &d, label)
        }
        CandidateKind::D2pXD2p => {
            let d = dihedral(pu, "D2p");
            direct_product(&d, &d, label)
        }
        CandidateKind::Cp2SemidirectC2XC2 => {
            // (v, s, t) with v ∈ Z_p², s the inverting flag, t central:
            // index = ((v1·p + v2)·2 + s)·2 + t.
            GroupTable::from_product_fn(4 * pu * pu, label, |x, y| {
                let (t1, x) = (x % 2, x / 2);
                let (s1, v1) = (x % 2, x / 2);
                let (t2, y) = (y % 2, y / 2);
                let (s2, v2) = (y % 2, y / 2);
                let (a1, b1) = (v1 / pu, v1 % pu);
                let (a2, b2) = (v2 / pu, v2 % pu);
                let (a, b) = if s1 == 0 {
                    ((a1 + a2) % pu, (b1 + b2) % pu)
                } else {
                    ((a1 + pu - a2) % pu, (b1 + pu - b2) % pu)
                };
                (((a * pu + b) * 2) + (s1 + s2) % 2) * 2 + (t1 + t2) % 2
            })?
        }
    };
    Ok(table)
}
