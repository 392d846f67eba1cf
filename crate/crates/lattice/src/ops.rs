//! Complements, completions and the lattice operations.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{LatticeError, Result};
use crate::grid::{interval, IntegerGrid, SeparationMode};
use crate::region::Region;

/// All grid events separated from every member of `s`.
///
/// Uses the cached neighbourhood masks when the grid has them; the result is
/// bit-identical to [`complement_brute`].
pub fn complement(s: &Region, mode: SeparationMode) -> Region {
    let grid = s.grid();
    if !grid.uses_masks() {
        return complement_brute(s, mode);
    }
    let w = grid.words();
    let members: Vec<usize> = s.iter().collect();
    let touched = members
        .par_iter()
        .fold(
            || vec![0u64; w],
            |mut acc, &p| {
                let mask = grid.unseparated_mask(p, mode).expect("masks enabled");
                acc.iter_mut().zip(mask).for_each(|(a, m)| *a |= m);
                acc
            },
        )
        .reduce(
            || vec![0u64; w],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x |= y);
                a
            },
        );
    Region::from_bits(grid, touched.into_iter().map(|x| !x).collect())
}

/// Reference implementation: O(|grid| |S|) pairwise tests.
pub fn complement_brute(s: &Region, mode: SeparationMode) -> Region {
    let grid = s.grid();
    let members: Vec<usize> = s.iter().collect();
    let n = grid.len();
    let bits: Vec<u64> = (0..grid.words())
        .into_par_iter()
        .map(|w| {
            let mut word = 0u64;
            for b in 0..64 {
                let q = w * 64 + b;
                if q >= n {
                    break;
                }
                if members.iter().all(|&p| grid.separated(p, q, mode)) {
                    word |= 1 << b;
                }
            }
            word
        })
        .collect();
    Region::from_bits(grid, bits)
}

/// S'' = (S')'.
pub fn completion(s: &Region, mode: SeparationMode) -> Region {
    complement(&complement(s, mode), mode)
}

pub fn is_complete(s: &Region, mode: SeparationMode) -> bool {
    completion(s, mode) == *s
}

/// Greatest lower bound: intersection of the completions.
pub fn meet(a: &Region, b: &Region, mode: SeparationMode) -> Result<Region> {
    completion(a, mode).intersection(&completion(b, mode))
}

/// Least upper bound (a' n b')'.
pub fn join(a: &Region, b: &Region, mode: SeparationMode) -> Result<Region> {
    Ok(complement(&complement(a, mode).intersection(&complement(b, mode))?, mode))
}

/// Whether every cross pair of events is separated.
pub fn separated_sets(a: &Region, b: &Region, mode: SeparationMode) -> Result<bool> {
    b.is_subset(&complement(a, mode))
}

/// Events x with x - p and q - x both future causal (closed) or both future
/// timelike (open).
pub fn diamond(grid: &Arc<IntegerGrid>, p: &[i64], q: &[i64], open: bool) -> Result<Region> {
    for e in [p, q] {
        if grid.index_of(e).is_none() {
            return Err(LatticeError::OutOfGrid(e.to_vec()));
        }
    }
    let future = |from: &[i64], to: &[i64]| {
        let s = interval(to, from);
        let dt = to[0] - from[0];
        if open {
            s > 0 && dt > 0
        } else {
            s >= 0 && dt >= 0
        }
    };
    Ok(Region::from_fn(grid, |x| future(p, x) && future(x, q)))
}
