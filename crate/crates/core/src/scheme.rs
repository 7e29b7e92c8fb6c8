//! Color partitions of Ω×Ω with canonical numbering.
//!
//! Colors are canonically renumbered at construction: diagonal colors first,
//! ordered by least point, then off-diagonal colors by (class size, least
//! pair). Class size is degree·valency for stable homogeneous schemes, so
//! this agrees with valency order there. Partition equality is therefore
//! plain equality of the color matrices.

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemeError {
    #[error("color matrix length {0} is not a square of the degree {1}")]
    BadShape(usize, usize),
    #[error("color {0} appears both on and off the diagonal")]
    DiagonalMixed(u32),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("scheme is not stable under pair refinement")]
    NotStable,
    #[error("scheme is not an association scheme (diagonal is {0} classes)")]
    NotAssociation(usize),
    #[error("valency of color {0} is not constant across rows")]
    ValencyNotConstant(u32),
    #[error("color set is not transpose-closed at color {0}")]
    NotTransposeClosed(u32),
    #[error("color union is not an equivalence relation: {0}")]
    NotParabolic(String),
    #[error("quotient by the given parabolic is not coherent")]
    QuotientNotCoherent,
    #[error("{0}")]
    Other(String),
}

/// A coherent-configuration candidate: a color partition of Ω×Ω whose
/// diagonal is a union of classes.
#[derive(Clone, PartialEq, Eq)]
pub struct Scheme {
    degree: usize,
    rank: usize,
    colors: Vec<u32>,
    sizes: Vec<u64>,
    diagonal: Vec<bool>,
}

impl Scheme {
    /// Canonicalize an arbitrary color matrix. Fails if a color appears both
    /// on and off the diagonal.
    pub fn from_color_matrix(degree: usize, colors: &[u32]) -> Result<Self, SchemeError> {
        if colors.len() != degree * degree || degree == 0 {
            return Err(SchemeError::BadShape(colors.len(), degree));
        }
        let max = *colors.iter().max().unwrap() as usize;
        let mut on_diag = vec![false; max + 1];
        let mut off_diag = vec![false; max + 1];
        for a in 0..degree {
            for b in 0..degree {
                let c = colors[a * degree + b] as usize;
                if a == b {
                    on_diag[c] = true;
                } else {
                    off_diag[c] = true;
                }
            }
        }
        if let Some(c) = (0..=max).find(|&c| on_diag[c] && off_diag[c]) {
            return Err(SchemeError::DiagonalMixed(c as u32));
        }
        Ok(Self::canonicalize(degree, colors))
    }

    /// Renumber colors canonically. The input must already keep diagonal and
    /// off-diagonal colors apart.
    pub(crate) fn canonicalize(degree: usize, colors: &[u32]) -> Self {
        let max = *colors.iter().max().unwrap() as usize;
        let mut size = vec![0u64; max + 1];
        let mut least_pair = vec![(u32::MAX, u32::MAX); max + 1];
        let mut on_diag = vec![false; max + 1];
        for a in 0..degree {
            for b in 0..degree {
                let c = colors[a * degree + b] as usize;
                size[c] += 1;
                if least_pair[c] == (u32::MAX, u32::MAX) {
                    least_pair[c] = (a as u32, b as u32);
                }
                if a == b {
                    on_diag[c] = true;
                }
            }
        }
        let mut present: Vec<usize> = (0..=max).filter(|&c| size[c] > 0).collect();
        // diagonal colors first by least point, off-diagonal by (size, least pair)
        present.sort_unstable_by_key(|&c| {
            (
                !on_diag[c],
                if on_diag[c] { 0 } else { size[c] },
                least_pair[c],
            )
        });
        let mut renumber = vec![u32::MAX; max + 1];
        for (new, &old) in present.iter().enumerate() {
            renumber[old] = new as u32;
        }
        let new_colors: Vec<u32> = colors.iter().map(|&c| renumber[c as usize]).collect();
        let rank = present.len();
        let mut sizes = vec![0u64; rank];
        let mut diagonal = vec![false; rank];
        for (i, &old) in present.iter().enumerate() {
            sizes[i] = size[old];
            diagonal[i] = on_diag[old];
        }
        Scheme {
            degree,
            rank,
            colors: new_colors,
            sizes,
            diagonal,
        }
    }

    /// Rename colors by `map` (a bijection on 0..rank) without renumbering.
    /// Used to compare a scheme against another one's color names.
    pub(crate) fn renamed(&self, map: &[u32]) -> Scheme {
        assert_eq!(map.len(), self.rank);
        let colors: Vec<u32> = self.colors.iter().map(|&c| map[c as usize]).collect();
        let mut sizes = vec![0u64; self.rank];
        let mut diagonal = vec![false; self.rank];
        for c in 0..self.rank {
            sizes[map[c] as usize] = self.sizes[c];
            diagonal[map[c] as usize] = self.diagonal[c];
        }
        Scheme {
            degree: self.degree,
            rank: self.rank,
            colors,
            sizes,
            diagonal,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn color(&self, a: usize, b: usize) -> u32 {
        self.colors[a * self.degree + b]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Number of pairs of each color.
    pub fn class_sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn is_diagonal_color(&self, c: u32) -> bool {
        self.diagonal[c as usize]
    }

    pub fn diagonal_color_count(&self) -> usize {
        self.diagonal.iter().filter(|&&d| d).count()
    }

    pub fn is_association_scheme(&self) -> bool {
        self.diagonal_color_count() == 1
    }

    /// Valency (out-degree) of every color, checking row-constancy.
    pub fn valencies(&self) -> Result<Vec<u64>, SchemeError> {
        let n = self.degree;
        let mut val = vec![0u64; self.rank];
        let mut row = vec![0u64; self.rank];
        for a in 0..n {
            row.iter_mut().for_each(|v| *v = 0);
            for b in 0..n {
                row[self.color(a, b) as usize] += 1;
            }
            for c in 0..self.rank {
                // colors absent from a row belong to another fibre
                if row[c] == 0 {
                    continue;
                }
                if val[c] == 0 {
                    val[c] = row[c];
                } else if val[c] != row[c] {
                    return Err(SchemeError::ValencyNotConstant(c as u32));
                }
            }
        }
        Ok(val)
    }

    /// The map s ↦ s*, checking transpose closure.
    pub fn transpose_map(&self) -> Result<Vec<u32>, SchemeError> {
        let n = self.degree;
        let mut map = vec![u32::MAX; self.rank];
        for a in 0..n {
            for b in 0..n {
                let c = self.color(a, b) as usize;
                let ct = self.color(b, a);
                if map[c] == u32::MAX {
                    map[c] = ct;
                } else if map[c] != ct {
                    return Err(SchemeError::NotTransposeClosed(c as u32));
                }
            }
        }
        Ok(map)
    }

    /// One exact refinement round: true when no color class would split.
    /// This is the definition of coherence, checked pair by pair.
    pub fn is_stable(&self) -> bool {
        let n = self.degree;
        // representative signature per color
        let mut rep_sig: Vec<Option<Vec<u64>>> = vec![None; self.rank];
        for a in 0..n {
            for b in 0..n {
                let c = self.color(a, b) as usize;
                if rep_sig[c].is_none() {
                    rep_sig[c] = Some(self.pair_signature(a, b));
                }
            }
        }
        (0..n).into_par_iter().all(|a| {
            (0..n).all(|b| {
                let c = self.color(a, b) as usize;
                rep_sig[c].as_ref().unwrap() == &self.pair_signature(a, b)
            })
        })
    }

    /// Exact signature of a pair: its transpose color and the sorted list of
    /// color pairs over all intermediate points.
    pub(crate) fn pair_signature(&self, a: usize, b: usize) -> Vec<u64> {
        let n = self.degree;
        let mut sig = Vec::with_capacity(n + 1);
        sig.push(self.color(b, a) as u64);
        for c in 0..n {
            sig.push(((self.color(a, c) as u64) << 32) | self.color(c, b) as u64);
        }
        sig[1..].sort_unstable();
        sig
    }

    /// Common refinement by color-pair intersection.
    pub fn meet(&self, other: &Scheme) -> Result<Scheme, SchemeError> {
        if self.degree != other.degree {
            return Err(SchemeError::DegreeMismatch(self.degree, other.degree));
        }
        let pairs: Vec<u64> = self
            .colors
            .iter()
            .zip(&other.colors)
            .map(|(&a, &b)| ((a as u64) << 32) | b as u64)
            .collect();
        let mut distinct: Vec<u64> = pairs.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let colors: Vec<u32> = pairs
            .iter()
            .map(|p| distinct.binary_search(p).unwrap() as u32)
            .collect();
        Ok(Scheme::canonicalize(self.degree, &colors))
    }

    /// Every color of `self` is a union of colors of `finer`.
    pub fn is_fusion_of(&self, finer: &Scheme) -> Result<bool, SchemeError> {
        if self.degree != finer.degree {
            return Err(SchemeError::DegreeMismatch(self.degree, finer.degree));
        }
        let mut map = vec![u32::MAX; finer.rank];
        for (coarse, fine) in self.colors.iter().zip(&finer.colors) {
            let f = *fine as usize;
            if map[f] == u32::MAX {
                map[f] = *coarse;
            } else if map[f] != *coarse {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Points β with color(base, β) = c.
    pub fn row_class(&self, base: usize, c: u32) -> Vec<usize> {
        (0..self.degree)
            .filter(|&b| self.color(base, b) == c)
            .collect()
    }
}

impl std::fmt::Debug for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Scheme(degree {}, rank {})", self.degree, self.rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_scheme(n: usize) -> Vec<u32> {
        // distance coloring of the n-cycle
        let mut colors = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let d = (b + n - a) % n;
                let d = d.min(n - d);
                colors[a * n + b] = d as u32;
            }
        }
        colors
    }

    #[test]
    fn canonical_puts_diagonal_first() {
        let colors = cycle_scheme(5);
        let s = Scheme::from_color_matrix(5, &colors).unwrap();
        assert_eq!(s.rank(), 3);
        assert!(s.is_diagonal_color(0));
        assert!(s.is_association_scheme());
        assert_eq!(s.class_sizes(), &[5, 10, 10]);
    }

    #[test]
    fn rejects_mixed_diagonal() {
        // 2×2 all-zero matrix: color 0 on and off the diagonal
        let colors = vec![0u32; 4];
        assert_eq!(
            Scheme::from_color_matrix(2, &colors).unwrap_err(),
            SchemeError::DiagonalMixed(0)
        );
    }

    #[test]
    fn cycle_scheme_is_stable() {
        let s = Scheme::from_color_matrix(7, &cycle_scheme(7)).unwrap();
        assert!(s.is_stable());
        assert_eq!(s.valencies().unwrap(), vec![1, 2, 2, 2]);
        assert_eq!(s.transpose_map().unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn meet_with_self_is_identity() {
        let s = Scheme::from_color_matrix(6, &cycle_scheme(6)).unwrap();
        assert_eq!(s.meet(&s).unwrap(), s);
        assert!(s.is_fusion_of(&s).unwrap());
    }
}
