//! Schur partitions of a group: validation, structure constants, the
//! distinguished partition of C₂² × C_p², its fusions, and meets.

use std::collections::BTreeMap;
use std::str::FromStr;

use thiserror::Error;

use crate::bundle::PaperGroupBundle;
use crate::group::GroupTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("sets do not partition the group: {0}")]
    NotAPartition(String),
    #[error("partitions live over different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("element {0} out of range for group of order {1}")]
    OutOfRange(usize, usize),
    #[error("unknown fusion level {0:?}")]
    UnknownLevel(String),
}

/// A partition of a group into basic sets, canonically ordered by
/// (size, least element). Equality of partitions is representation equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicSetPartition {
    sets: Vec<Vec<u32>>,
    set_of: Vec<u32>,
}

impl BasicSetPartition {
    pub fn new(group: &GroupTable, sets: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let n = group.order();
        let mut canonical: Vec<Vec<u32>> = Vec::with_capacity(sets.len());
        for set in sets {
            let mut s: Vec<u32> = set.iter().map(|&x| x as u32).collect();
            s.sort_unstable();
            s.dedup();
            if s.len() != set.len() {
                return Err(PartitionError::NotAPartition("repeated element".into()));
            }
            if s.is_empty() {
                return Err(PartitionError::NotAPartition("empty set".into()));
            }
            if *s.last().unwrap() as usize >= n {
                return Err(PartitionError::OutOfRange(*s.last().unwrap() as usize, n));
            }
            canonical.push(s);
        }
        canonical.sort_unstable_by(|a, b| (a.len(), a[0]).cmp(&(b.len(), b[0])));
        let mut set_of = vec![u32::MAX; n];
        for (i, s) in canonical.iter().enumerate() {
            for &x in s {
                if set_of[x as usize] != u32::MAX {
                    return Err(PartitionError::NotAPartition(format!(
                        "element {x} covered twice"
                    )));
                }
                set_of[x as usize] = i as u32;
            }
        }
        if set_of.iter().any(|&s| s == u32::MAX) {
            return Err(PartitionError::NotAPartition("not covering".into()));
        }
        Ok(BasicSetPartition {
            sets: canonical,
            set_of,
        })
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.set_of.len()
    }

    #[inline]
    pub fn set_of(&self, x: usize) -> usize {
        self.set_of[x] as usize
    }

    pub fn set(&self, i: usize) -> &[u32] {
        &self.sets[i]
    }

    /// Index of the set equal to `sorted`, if present.
    pub fn find_set(&self, sorted: &[u32]) -> Option<usize> {
        let i = self.set_of(sorted[0] as usize);
        (self.sets[i] == sorted).then_some(i)
    }

    /// Index of the image set under elementwise inversion, if it is a set.
    pub fn inverse_set(&self, group: &GroupTable, i: usize) -> Option<usize> {
        let mut inv: Vec<u32> = self.sets[i]
            .iter()
            .map(|&x| group.inv(x as usize) as u32)
            .collect();
        inv.sort_unstable();
        self.find_set(&inv)
    }

    /// Every set of `self` is a union of sets of `finer`.
    pub fn refines(&self, finer: &BasicSetPartition) -> bool {
        self.degree() == finer.degree()
            && (0..finer.degree()).all(|x| {
                finer.set(finer.set_of(x)).iter().all(|&y| {
                    self.set_of(y as usize) == self.set_of(x)
                })
            })
    }
}

/// Exact structure constants c_{XY}^Z of a partition, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    rank: usize,
    entries: BTreeMap<(u32, u32, u32), u64>,
}

impl StructureConstants {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> u64 {
        self.entries
            .get(&(x as u32, y as u32, z as u32))
            .copied()
            .unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, u64)> + '_ {
        self.entries
            .iter()
            .map(|(&(x, y, z), &c)| (x as usize, y as usize, z as usize, c))
    }

    /// Positive entries of the row (x, y).
    pub fn row(&self, x: usize, y: usize) -> Vec<(usize, u64)> {
        let lo = (x as u32, y as u32, 0);
        let hi = (x as u32, y as u32, u32::MAX);
        self.entries
            .range(lo..=hi)
            .map(|(&(_, _, z), &c)| (z as usize, c))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchurViolation {
    MissingIdentitySingleton,
    NotInverseClosed { set: usize },
    ProductNotConstant { x: usize, y: usize, set: usize },
    NonCommutative { x: usize, y: usize, z: usize },
}

/// Outcome of validating a partition against the Schur-partition axioms.
/// Failures are report entries, not errors.
#[derive(Clone, Debug)]
pub struct SchurReport {
    pub violations: Vec<SchurViolation>,
    pub commutative: bool,
    pub constants: StructureConstants,
}

impl SchurReport {
    /// Identity singleton, inverse closure, and product closure all hold.
    pub fn is_schur_partition(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Validate the Schur-partition axioms and compute the structure constants
/// as a witness. Product closure is checked by direct counting: for each
/// pair of sets the product multiplicities must be constant on every set.
pub fn validate_schur(group: &GroupTable, part: &BasicSetPartition) -> SchurReport {
    let r = part.len();
    let mut violations = Vec::new();

    let id_set = part.set_of(group.identity());
    if part.set(id_set).len() != 1 {
        violations.push(SchurViolation::MissingIdentitySingleton);
    }

    for i in 0..r {
        if part.inverse_set(group, i).is_none() {
            violations.push(SchurViolation::NotInverseClosed { set: i });
        }
    }

    let mut entries = BTreeMap::new();
    let mut counts = vec![0u64; group.order()];
    for x in 0..r {
        for y in 0..r {
            let mut touched = Vec::new();
            for &a in part.set(x) {
                for &b in part.set(y) {
                    let c = group.mul(a as usize, b as usize);
                    if counts[c] == 0 {
                        touched.push(c);
                    }
                    counts[c] += 1;
                }
            }
            let mut by_set: BTreeMap<u32, u64> = BTreeMap::new();
            for &c in &touched {
                by_set.insert(part.set_of(c) as u32, counts[c]);
            }
            for (&z, &mult) in &by_set {
                let constant = part
                    .set(z as usize)
                    .iter()
                    .all(|&e| counts[e as usize] == mult);
                if !constant {
                    violations.push(SchurViolation::ProductNotConstant {
                        x,
                        y,
                        set: z as usize,
                    });
                } else {
                    entries.insert((x as u32, y as u32, z), mult);
                }
            }
            for c in touched {
                counts[c] = 0;
            }
        }
    }

    let constants = StructureConstants { rank: r, entries };
    let mut commutative = true;
    'outer: for x in 0..r {
        for y in (x + 1)..r {
            for z in 0..r {
                if constants.get(x, y, z) != constants.get(y, x, z) {
                    violations.push(SchurViolation::NonCommutative { x, y, z });
                    commutative = false;
                    break 'outer;
                }
            }
        }
    }

    SchurReport {
        violations,
        commutative,
        constants,
    }
}

/// The partition {{g}, X_i·g : g ∈ P, i ∈ I} of the bundle group:
/// p² singletons and 3p translated cosets.
pub fn paper_partition(bundle: &PaperGroupBundle) -> BasicSetPartition {
    let g = &bundle.group;
    let mut sets: Vec<Vec<usize>> = bundle.p_set.iter().map(|&q| vec![q]).collect();
    for i in 0..3 {
        sets.extend(translates(g, &bundle.x_sets[i], &bundle.p_set));
    }
    BasicSetPartition::new(g, sets).expect("basic sets partition the group")
}

/// Which sets get fused together.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FusionLevel {
    /// S_i: keep X_j, X_k translates, fuse Y_i. Index in 1..=3.
    Single(usize),
    /// S_ij: keep X_k translates, fuse Y_i and Y_j.
    Pair(usize, usize),
    /// S_0: fuse all three cosets Y_1, Y_2, Y_3.
    Zero,
}

impl FusionLevel {
    pub const ALL: [FusionLevel; 7] = [
        FusionLevel::Single(1),
        FusionLevel::Single(2),
        FusionLevel::Single(3),
        FusionLevel::Pair(1, 2),
        FusionLevel::Pair(1, 3),
        FusionLevel::Pair(2, 3),
        FusionLevel::Zero,
    ];

    pub fn token(&self) -> String {
        match self {
            FusionLevel::Single(i) => i.to_string(),
            FusionLevel::Pair(i, j) => format!("{i}{j}"),
            FusionLevel::Zero => "0".into(),
        }
    }
}

impl FromStr for FusionLevel {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" => Ok(FusionLevel::Single(1)),
            "2" => Ok(FusionLevel::Single(2)),
            "3" => Ok(FusionLevel::Single(3)),
            "12" => Ok(FusionLevel::Pair(1, 2)),
            "13" => Ok(FusionLevel::Pair(1, 3)),
            "23" => Ok(FusionLevel::Pair(2, 3)),
            "0" => Ok(FusionLevel::Zero),
            other => Err(PartitionError::UnknownLevel(other.into())),
        }
    }
}

/// The named fusion of the distinguished partition.
pub fn fusion_partition(bundle: &PaperGroupBundle, level: FusionLevel) -> BasicSetPartition {
    let g = &bundle.group;
    let mut sets: Vec<Vec<usize>> = bundle.p_set.iter().map(|&q| vec![q]).collect();
    let keep_translates: Vec<usize> = match level {
        FusionLevel::Single(i) => (0..3).filter(|&k| k != i - 1).collect(),
        FusionLevel::Pair(i, j) => (0..3).filter(|&k| k != i - 1 && k != j - 1).collect(),
        FusionLevel::Zero => vec![],
    };
    let fused: Vec<usize> = (0..3).filter(|k| !keep_translates.contains(k)).collect();
    for k in keep_translates {
        sets.extend(translates(g, &bundle.x_sets[k], &bundle.p_set));
    }
    for k in fused {
        sets.push(bundle.y_sets[k].clone());
    }
    BasicSetPartition::new(g, sets).expect("fusion sets partition the group")
}

fn translates(g: &GroupTable, base: &[usize], by: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = std::collections::BTreeSet::new();
    for &q in by {
        let mut t: Vec<usize> = base.iter().map(|&x| g.mul(x, q)).collect();
        t.sort_unstable();
        seen.insert(t);
    }
    seen.into_iter().collect()
}

/// Common refinement by pairwise intersections of basic sets.
pub fn meet_partitions(
    a: &BasicSetPartition,
    b: &BasicSetPartition,
) -> Result<BasicSetPartition, PartitionError> {
    if a.degree() != b.degree() {
        return Err(PartitionError::GroupMismatch(
            format!("order {}", a.degree()),
            format!("order {}", b.degree()),
        ));
    }
    let mut cells: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
    for x in 0..a.degree() {
        cells
            .entry((a.set_of(x) as u32, b.set_of(x) as u32))
            .or_default()
            .push(x);
    }
    let sets: Vec<Vec<usize>> = cells.into_values().collect();
    // the result partitions the same index set; reuse canonical ordering
    let mut set_of = vec![u32::MAX; a.degree()];
    let mut canonical: Vec<Vec<u32>> = sets
        .into_iter()
        .map(|s| s.into_iter().map(|x| x as u32).collect())
        .collect();
    canonical.sort_unstable_by(|x, y| (x.len(), x[0]).cmp(&(y.len(), y[0])));
    for (i, s) in canonical.iter().enumerate() {
        for &x in s {
            set_of[x as usize] = i as u32;
        }
    }
    Ok(BasicSetPartition {
        sets: canonical,
        set_of,
    })
}
