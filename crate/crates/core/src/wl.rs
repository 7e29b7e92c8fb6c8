//! Weisfeiler-Leman pair refinement to the coarsest coherent fixpoint.
//!
//! Each round recolors every pair by the exact sorted vector of color pairs
//! over all intermediate points (plus the transpose color); no hashing is
//! involved, so distinct signatures can never collide. New color ids are
//! assigned canonically per round by ordering classes by (old color,
//! signature), which keeps runs deterministic.

use rayon::prelude::*;

use crate::scheme::{Scheme, SchemeError};

/// Result of stabilizing a color matrix.
#[derive(Clone, Debug)]
pub struct WlOutcome {
    pub scheme: Scheme,
    pub rounds: usize,
    pub input_rank: usize,
}

impl WlOutcome {
    pub fn rank_delta(&self) -> usize {
        self.scheme.rank() - self.input_rank
    }

    /// The input was already coherent (no refinement happened).
    pub fn was_fixpoint(&self) -> bool {
        self.rank_delta() == 0
    }
}

/// Stabilize an arbitrary color matrix. Diagonal and off-diagonal entries
/// sharing a color are split apart first, so any square matrix is accepted.
pub fn wl_stabilize(degree: usize, colors: &[u32]) -> Result<WlOutcome, SchemeError> {
    if colors.len() != degree * degree || degree == 0 {
        return Err(SchemeError::BadShape(colors.len(), degree));
    }

    // initial split: (diagonal?, input color)
    let max = *colors.iter().max().unwrap() as u64;
    let mut keys: Vec<u64> = Vec::with_capacity(colors.len());
    for a in 0..degree {
        for b in 0..degree {
            let c = colors[a * degree + b] as u64;
            keys.push(if a == b { c } else { c + max + 1 });
        }
    }
    let mut current = compress(&keys);
    let input_rank = count_colors(&current);

    let mut rounds = 0;
    loop {
        let next = refine_round(degree, &current);
        rounds += 1;
        if count_colors(&next) == count_colors(&current) {
            break;
        }
        current = next;
    }

    Ok(WlOutcome {
        scheme: Scheme::canonicalize(degree, &current),
        rounds,
        input_rank,
    })
}

/// One refinement round with canonical renumbering by (old color, signature).
/// Signatures are merged row by row into a map of distinct signatures, so
/// memory scales with the number of classes rather than the number of pairs.
fn refine_round(n: usize, colors: &[u32]) -> Vec<u32> {
    let mut distinct: std::collections::BTreeMap<Vec<u64>, u32> = std::collections::BTreeMap::new();
    let mut provisional = vec![0u32; n * n];
    for a in 0..n {
        let row_sigs: Vec<Vec<u64>> = (0..n)
            .into_par_iter()
            .map(|b| {
                let mut sig = Vec::with_capacity(n + 2);
                sig.push(colors[a * n + b] as u64);
                sig.push(colors[b * n + a] as u64);
                for c in 0..n {
                    sig.push(((colors[a * n + c] as u64) << 32) | colors[c * n + b] as u64);
                }
                sig[2..].sort_unstable();
                sig
            })
            .collect();
        for (b, sig) in row_sigs.into_iter().enumerate() {
            let id = match distinct.get(&sig) {
                Some(&id) => id,
                None => {
                    let id = distinct.len() as u32;
                    distinct.insert(sig, id);
                    id
                }
            };
            provisional[a * n + b] = id;
        }
    }
    // the map iterates in signature order, whose leading entry is the old
    // color: classes split canonically within each old class
    let mut final_of = vec![0u32; distinct.len()];
    for (i, (_, &prov)) in distinct.iter().enumerate() {
        final_of[prov as usize] = i as u32;
    }
    provisional.iter().map(|&p| final_of[p as usize]).collect()
}

fn compress(keys: &[u64]) -> Vec<u32> {
    let mut distinct: Vec<u64> = keys.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    keys.iter()
        .map(|k| distinct.binary_search(k).unwrap() as u32)
        .collect()
}

fn count_colors(colors: &[u32]) -> usize {
    (*colors.iter().max().unwrap() + 1) as usize
}
