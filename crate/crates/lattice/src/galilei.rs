//! Chronological complements for the Galilean causal structure, where two
//! events are chronologically disjoint iff they are distinct and simultaneous.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LatticeError, Result};
use crate::grid::IntegerGrid;
use crate::region::Region;

/// Events simultaneous with, and different from, every member of `s`.
pub fn galilei_chron_complement(s: &Region) -> Region {
    let grid = s.grid();
    let mut times = s.iter().map(|i| grid.coords(i)[0]);
    let Some(t0) = times.next() else {
        return Region::full(grid);
    };
    if times.any(|t| t != t0) {
        return Region::empty(grid);
    }
    let slice = Region::from_fn(grid, |p| p[0] == t0);
    slice.difference(s).expect("same grid")
}

pub fn galilei_completion(s: &Region) -> Region {
    galilei_chron_complement(&galilei_chron_complement(s))
}

pub fn galilei_join(a: &Region, b: &Region) -> Result<Region> {
    Ok(galilei_chron_complement(&galilei_chron_complement(a).intersection(&galilei_chron_complement(b))?))
}

pub fn galilei_meet(a: &Region, b: &Region) -> Result<Region> {
    galilei_completion(a).intersection(&galilei_completion(b))
}

/// Checks a ^ (b v c) = (a ^ b) v (a ^ c) on random triples of subsets of a
/// single time slice; returns the number of failures.
pub fn galilei_slice_distributivity(grid: &Arc<IntegerGrid>, t: i64, triples: usize, seed: u64) -> Result<usize> {
    if t < grid.lo()[0] || t > grid.hi()[0] {
        return Err(LatticeError::OutOfGrid(vec![t]));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slice: Vec<usize> = (0..grid.len()).filter(|&i| grid.coords(i)[0] == t).collect();
    let subset = |rng: &mut ChaCha8Rng| {
        let d = rng.random_range(0.1..0.9);
        Region::from_indices(grid, slice.iter().copied().filter(|_| rng.random_bool(d)))
    };
    let mut failures = 0;
    for _ in 0..triples {
        let (a, b, c) = (subset(&mut rng), subset(&mut rng), subset(&mut rng));
        let lhs = galilei_meet(&a, &galilei_join(&b, &c)?)?;
        let rhs = galilei_join(&galilei_meet(&a, &b)?, &galilei_meet(&a, &c)?)?;
        if lhs != rhs {
            failures += 1;
        }
    }
    Ok(failures)
}
