//! Exact intersection-number tensors of stable schemes.

use std::collections::BTreeMap;

use crate::scheme::{Scheme, SchemeError};

/// The sparse tensor c_{st}^u together with valencies and the transpose map.
/// This is the complete algebraic-isomorphism invariant of a scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionTensor {
    rank: usize,
    valencies: Vec<u64>,
    transpose: Vec<u32>,
    diagonal: Vec<bool>,
    entries: BTreeMap<(u32, u32, u32), u64>,
}

impl IntersectionTensor {
    /// Compute the tensor of a stable scheme. Stability is checked first;
    /// counts are then read off one representative pair per color.
    pub fn from_scheme(sch: &Scheme) -> Result<Self, SchemeError> {
        if !sch.is_stable() {
            return Err(SchemeError::NotStable);
        }
        Ok(Self::from_scheme_unchecked(sch))
    }

    /// Same as [`from_scheme`](Self::from_scheme) but trusting stability.
    /// For schemes produced by WL stabilization or color renaming.
    pub fn from_scheme_unchecked(sch: &Scheme) -> Self {
        let n = sch.degree();
        let r = sch.rank();
        let valencies = sch.valencies().expect("stable scheme has valencies");
        let transpose = sch.transpose_map().expect("stable scheme is transpose-closed");
        let diagonal: Vec<bool> = (0..r).map(|c| sch.is_diagonal_color(c as u32)).collect();

        let mut rep = vec![usize::MAX; r];
        for a in 0..n {
            for b in 0..n {
                let c = sch.color(a, b) as usize;
                if rep[c] == usize::MAX {
                    rep[c] = a * n + b;
                }
            }
        }
        let mut entries = BTreeMap::new();
        let mut counts = vec![0u64; r * r];
        for u in 0..r {
            let (a, b) = (rep[u] / n, rep[u] % n);
            counts.iter_mut().for_each(|c| *c = 0);
            for g in 0..n {
                let s = sch.color(a, g) as usize;
                let t = sch.color(g, b) as usize;
                counts[s * r + t] += 1;
            }
            for s in 0..r {
                for t in 0..r {
                    let c = counts[s * r + t];
                    if c > 0 {
                        entries.insert((s as u32, t as u32, u as u32), c);
                    }
                }
            }
        }
        let tensor = IntersectionTensor {
            rank: r,
            valencies,
            transpose,
            diagonal,
            entries,
        };
        debug_assert_eq!(tensor.verify_identities(), Ok(()));
        tensor
    }

    /// Rebuild from serialized parts; diagonal colors are inferred as the
    /// valency-1 colors u with c_{uu}^u = 1.
    pub fn from_parts(
        rank: usize,
        valencies: Vec<u64>,
        transpose: Vec<u32>,
        entries: BTreeMap<(u32, u32, u32), u64>,
    ) -> Result<Self, SchemeError> {
        if valencies.len() != rank || transpose.len() != rank {
            return Err(SchemeError::Other(
                "tensor parts have inconsistent rank".into(),
            ));
        }
        if transpose.iter().any(|&t| t as usize >= rank) {
            return Err(SchemeError::Other("transpose map out of range".into()));
        }
        if entries
            .keys()
            .any(|&(s, t, u)| s as usize >= rank || t as usize >= rank || u as usize >= rank)
        {
            return Err(SchemeError::Other("tensor entry out of range".into()));
        }
        let diagonal: Vec<bool> = (0..rank)
            .map(|u| {
                valencies[u] == 1
                    && entries.get(&(u as u32, u as u32, u as u32)) == Some(&1)
            })
            .collect();
        let t = IntersectionTensor {
            rank,
            valencies,
            transpose,
            diagonal,
            entries,
        };
        t.verify_identities()?;
        Ok(t)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn valencies(&self) -> &[u64] {
        &self.valencies
    }

    pub fn transpose(&self, s: usize) -> usize {
        self.transpose[s] as usize
    }

    pub fn transpose_map(&self) -> &[u32] {
        &self.transpose
    }

    pub fn is_diagonal(&self, s: usize) -> bool {
        self.diagonal[s]
    }

    pub fn diagonal_count(&self) -> usize {
        self.diagonal.iter().filter(|&&d| d).count()
    }

    pub fn get(&self, s: usize, t: usize, u: usize) -> u64 {
        self.entries
            .get(&(s as u32, t as u32, u as u32))
            .copied()
            .unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, u64)> + '_ {
        self.entries
            .iter()
            .map(|(&(s, t, u), &c)| (s as usize, t as usize, u as usize, c))
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    /// Positive entries of the row (s, t): all u with c_{st}^u > 0.
    pub fn row(&self, s: usize, t: usize) -> Vec<(usize, u64)> {
        let lo = (s as u32, t as u32, 0);
        let hi = (s as u32, t as u32, u32::MAX);
        self.entries
            .range(lo..=hi)
            .map(|(&(_, _, u), &c)| (u as usize, c))
            .collect()
    }

    /// Σ_u c_{st}^u·n_u = n_s·n_t for all s,t, and c_{st}^u = c_{t*s*}^{u*}.
    pub fn verify_identities(&self) -> Result<(), SchemeError> {
        let r = self.rank;
        let mut sums = vec![0u64; r * r];
        for (&(s, t, u), &c) in &self.entries {
            sums[s as usize * r + t as usize] += c * self.valencies[u as usize];
            let st = self.transpose(s as usize);
            let tt = self.transpose(t as usize);
            let ut = self.transpose(u as usize);
            if self.get(tt, st, ut) != c {
                return Err(SchemeError::Other(format!(
                    "transpose identity fails at ({s}, {t}, {u})"
                )));
            }
        }
        for s in 0..r {
            for t in 0..r {
                // colors on different fibres multiply to zero
                if sums[s * r + t] != self.valencies[s] * self.valencies[t]
                    && sums[s * r + t] != 0
                {
                    return Err(SchemeError::Other(format!(
                        "valency identity fails at ({s}, {t})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// c_{st}^u = c_{ts}^u for all triples.
    pub fn is_commutative(&self) -> bool {
        self.entries
            .iter()
            .all(|(&(s, t, u), &c)| self.get(t as usize, s as usize, u as usize) == c)
    }

    pub fn valency_multiset(&self) -> Vec<u64> {
        let mut v = self.valencies.clone();
        v.sort_unstable();
        v
    }
}
