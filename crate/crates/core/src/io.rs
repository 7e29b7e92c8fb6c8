//! File formats: JSON schemas for groups, partitions, constants, schemes,
//! tensors, permutation groups, and audit reports. All writers are
//! deterministic; readers validate before constructing.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algiso::AuditReport;
use crate::group::{GroupError, GroupTable};
use crate::perm::Perm;
use crate::permgroup::{PermGroup, PermGroupError};
use crate::scheme::{Scheme, SchemeError};
use crate::sring::{BasicSetPartition, PartitionError, StructureConstants};
use crate::tensor::IntersectionTensor;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("group: {0}")]
    Group(#[from] GroupError),
    #[error("partition: {0}")]
    Partition(#[from] PartitionError),
    #[error("scheme: {0}")]
    Scheme(#[from] SchemeError),
    #[error("permutation group: {0}")]
    PermGroup(#[from] PermGroupError),
    #[error("invalid file: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub label: String,
    pub table: Vec<u32>,
    pub inverse: Vec<u32>,
}

impl GroupFile {
    pub fn from_table(g: &GroupTable) -> Self {
        GroupFile {
            order: g.order(),
            label: g.label().to_string(),
            table: g.table().to_vec(),
            inverse: g.inverses().to_vec(),
        }
    }

    pub fn into_table(self) -> Result<GroupTable, FormatError> {
        let g = GroupTable::from_table(self.order, self.label, self.table)?;
        if g.inverses() != self.inverse.as_slice() {
            return Err(FormatError::Invalid(
                "inverse array disagrees with the table".into(),
            ));
        }
        Ok(g)
    }
}

#[derive(Serialize, Deserialize)]
pub struct PartitionFile {
    pub group_ref: String,
    pub sets: Vec<Vec<u32>>,
}

impl PartitionFile {
    pub fn from_partition(group: &GroupTable, part: &BasicSetPartition) -> Self {
        PartitionFile {
            group_ref: group.label().to_string(),
            sets: part.sets().to_vec(),
        }
    }

    pub fn into_partition(self, group: &GroupTable) -> Result<BasicSetPartition, FormatError> {
        let sets = self
            .sets
            .into_iter()
            .map(|s| s.into_iter().map(|x| x as usize).collect())
            .collect();
        Ok(BasicSetPartition::new(group, sets)?)
    }
}

/// Structure constants as lexicographically sorted [X, Y, Z, c] quadruples.
pub fn constants_to_quadruples(c: &StructureConstants) -> Vec<[u64; 4]> {
    c.entries()
        .map(|(x, y, z, v)| [x as u64, y as u64, z as u64, v])
        .collect()
}

#[derive(Serialize, Deserialize)]
pub struct SchemeFile {
    pub degree: usize,
    /// Optional on input; raw matrices for stabilization may omit it.
    #[serde(default)]
    pub rank: usize,
    pub colors: Vec<u32>,
}

impl SchemeFile {
    pub fn from_scheme(s: &Scheme) -> Self {
        SchemeFile {
            degree: s.degree(),
            rank: s.rank(),
            colors: s.colors().to_vec(),
        }
    }

    pub fn into_scheme(self) -> Result<Scheme, FormatError> {
        let s = Scheme::from_color_matrix(self.degree, &self.colors)?;
        if self.rank != 0 && s.rank() != self.rank {
            return Err(FormatError::Invalid(format!(
                "declared rank {} but matrix has {} colors",
                self.rank,
                s.rank()
            )));
        }
        Ok(s)
    }

    /// Raw color matrix without coherence requirements, for stabilization
    /// input. The rank field is ignored.
    pub fn into_raw(self) -> Result<(usize, Vec<u32>), FormatError> {
        if self.colors.len() != self.degree * self.degree {
            return Err(FormatError::Invalid(format!(
                "{} colors for degree {}",
                self.colors.len(),
                self.degree
            )));
        }
        Ok((self.degree, self.colors))
    }
}

#[derive(Serialize, Deserialize)]
pub struct TensorFile {
    pub rank: usize,
    pub valencies: Vec<u64>,
    pub transpose: Vec<u32>,
    /// Sorted [s, t, u, c] quadruples.
    pub entries: Vec<[u64; 4]>,
}

impl TensorFile {
    pub fn from_tensor(t: &IntersectionTensor) -> Self {
        TensorFile {
            rank: t.rank(),
            valencies: t.valencies().to_vec(),
            transpose: t.transpose_map().to_vec(),
            entries: t
                .entries()
                .map(|(s, u, v, c)| [s as u64, u as u64, v as u64, c])
                .collect(),
        }
    }

    pub fn into_tensor(self) -> Result<IntersectionTensor, FormatError> {
        let mut entries = BTreeMap::new();
        for [s, t, u, c] in self.entries {
            entries.insert((s as u32, t as u32, u as u32), c);
        }
        Ok(IntersectionTensor::from_parts(
            self.rank,
            self.valencies,
            self.transpose,
            entries,
        )?)
    }
}

#[derive(Serialize, Deserialize)]
pub struct PermGroupFile {
    pub degree: usize,
    /// Decimal string: orders overflow machine words quickly.
    pub order: String,
    pub generators: Vec<Vec<u32>>,
}

impl PermGroupFile {
    pub fn from_group(g: &PermGroup) -> Self {
        PermGroupFile {
            degree: g.degree(),
            order: g.order().to_string(),
            generators: g.generators().iter().map(|p| p.images().to_vec()).collect(),
        }
    }

    pub fn into_group(self) -> Result<PermGroup, FormatError> {
        let gens = self
            .generators
            .into_iter()
            .map(Perm::from_images)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| FormatError::Invalid(e.to_string()))?;
        let g = PermGroup::from_generators(self.degree, &gens)?;
        let declared: BigUint = self
            .order
            .parse()
            .map_err(|_| FormatError::Invalid(format!("bad order string {:?}", self.order)))?;
        if g.order() != declared {
            return Err(FormatError::Invalid(format!(
                "declared order {} but generators span order {}",
                declared,
                g.order()
            )));
        }
        Ok(g)
    }
}

#[derive(Serialize, Deserialize)]
pub struct AuditWitness {
    pub phi: Vec<u32>,
    pub point_map: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
pub struct AuditFile {
    pub scheme_ref: String,
    pub algebraic_automorphism_count: usize,
    pub induced_count: usize,
    pub inconclusive_count: usize,
    pub witnesses: Vec<AuditWitness>,
}

impl AuditFile {
    pub fn from_report(scheme_ref: &str, report: &AuditReport) -> Self {
        AuditFile {
            scheme_ref: scheme_ref.to_string(),
            algebraic_automorphism_count: report.algebraic_automorphism_count,
            induced_count: report.induced_count,
            inconclusive_count: report.inconclusive_count,
            witnesses: report
                .witnesses
                .iter()
                .map(|(phi, m)| AuditWitness {
                    phi: phi.images.clone(),
                    point_map: m.images().to_vec(),
                })
                .collect(),
        }
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String, FormatError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::build_paper_group;
    use crate::cayley::cayley_scheme;
    use crate::sring::paper_partition;

    #[test]
    fn group_file_roundtrip() {
        let b = build_paper_group(5).unwrap();
        let text = to_json_pretty(&GroupFile::from_table(&b.group)).unwrap();
        let file: GroupFile = from_json(&text).unwrap();
        let g = file.into_table().unwrap();
        assert_eq!(g.order(), 100);
        assert_eq!(g.table(), b.group.table());
    }

    #[test]
    fn scheme_and_tensor_roundtrip() {
        let b = build_paper_group(5).unwrap();
        let sch = cayley_scheme(&b.group, &paper_partition(&b));
        let text = to_json_pretty(&SchemeFile::from_scheme(&sch)).unwrap();
        let again: SchemeFile = from_json(&text).unwrap();
        assert_eq!(again.into_scheme().unwrap(), sch);

        let t = IntersectionTensor::from_scheme(&sch).unwrap();
        let ttext = to_json_pretty(&TensorFile::from_tensor(&t)).unwrap();
        let tfile: TensorFile = from_json(&ttext).unwrap();
        assert_eq!(tfile.into_tensor().unwrap(), t);
    }

    #[test]
    fn partition_roundtrip() {
        let b = build_paper_group(5).unwrap();
        let part = paper_partition(&b);
        let text = to_json_pretty(&PartitionFile::from_partition(&b.group, &part)).unwrap();
        let file: PartitionFile = from_json(&text).unwrap();
        assert_eq!(file.into_partition(&b.group).unwrap(), part);
    }

    #[test]
    fn malformed_files_are_rejected() {
        let bad_scheme = SchemeFile {
            degree: 3,
            rank: 2,
            colors: vec![0; 8],
        };
        assert!(bad_scheme.into_scheme().is_err());

        let bad_group = GroupFile {
            order: 2,
            label: "broken".into(),
            table: vec![0, 1, 1, 0],
            inverse: vec![1, 0],
        };
        assert!(bad_group.into_table().is_err());
    }

    #[test]
    fn permgroup_file_checks_order() {
        let g = PermGroup::from_generators(
            4,
            &[Perm::from_images(vec![1, 2, 3, 0]).unwrap()],
        )
        .unwrap();
        let mut file = PermGroupFile::from_group(&g);
        assert_eq!(file.order, "4");
        file.order = "5".into();
        assert!(file.into_group().is_err());
    }
}
