use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LatticeError, Result};

/// Grids up to this many cells cache one neighbourhood mask per cell and mode.
pub const MASK_CELL_LIMIT: usize = 16_384;

/// Which pairs of events count as separated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeparationMode {
    /// (p - q)^2 < 0
    Causal,
    /// p != q and (p - q)^2 <= 0
    Chronological,
}

impl SeparationMode {
    pub const ALL: [SeparationMode; 2] = [SeparationMode::Causal, SeparationMode::Chronological];

    /// Decides separation from the exact squared interval of p - q.
    pub fn separated(self, interval: i64, same_event: bool) -> bool {
        match self {
            SeparationMode::Causal => interval < 0,
            SeparationMode::Chronological => !same_event && interval <= 0,
        }
    }

    fn slot(self) -> usize {
        match self {
            SeparationMode::Causal => 0,
            SeparationMode::Chronological => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SeparationMode::Causal => "causal",
            SeparationMode::Chronological => "chronological",
        }
    }
}

/// Box of integer events, axis 0 being time. Cells are stored row-major with
/// the last axis fastest.
#[derive(Debug)]
pub struct IntegerGrid {
    lo: Vec<i64>,
    hi: Vec<i64>,
    len: usize,
    coords: Vec<i64>,
    masks: [OnceLock<Vec<u64>>; 2],
}

impl PartialEq for IntegerGrid {
    fn eq(&self, other: &Self) -> bool {
        self.lo == other.lo && self.hi == other.hi
    }
}

impl IntegerGrid {
    /// Grid over the inclusive ranges lo..=hi, one per axis.
    pub fn new(ranges: &[(i64, i64)]) -> Result<Self> {
        if !(2..=3).contains(&ranges.len()) {
            return Err(LatticeError::UnsupportedDimension(ranges.len()));
        }
        let mut len = 1usize;
        for &(lo, hi) in ranges {
            if hi < lo {
                return Err(LatticeError::BadExtents(format!("empty range {lo}..={hi}")));
            }
            len = len
                .checked_mul((hi - lo + 1) as usize)
                .filter(|&l| l <= 1 << 26)
                .ok_or_else(|| LatticeError::BadExtents("grid too large".into()))?;
        }
        let lo: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        let hi: Vec<i64> = ranges.iter().map(|r| r.1).collect();
        let dim = lo.len();
        let mut coords = vec![0i64; len * dim];
        for idx in 0..len {
            let mut rest = idx;
            for a in (0..dim).rev() {
                let size = (hi[a] - lo[a] + 1) as usize;
                coords[idx * dim + a] = lo[a] + (rest % size) as i64;
                rest /= size;
            }
        }
        Ok(Self { lo, hi, len, coords, masks: [OnceLock::new(), OnceLock::new()] })
    }

    /// Grid with the given number of cells per axis, centred on the origin
    /// (odd sizes are symmetric).
    pub fn centered(sizes: &[usize]) -> Result<Self> {
        let ranges: Vec<(i64, i64)> = sizes
            .iter()
            .map(|&s| {
                let s = s as i64;
                (-(s - 1) / 2, s / 2)
            })
            .collect();
        if sizes.contains(&0) {
            return Err(LatticeError::BadExtents("zero-sized axis".into()));
        }
        Self::new(&ranges)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of u64 words in a region bitset.
    pub fn words(&self) -> usize {
        self.len.div_ceil(64)
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn size(&self, axis: usize) -> usize {
        (self.hi[axis] - self.lo[axis] + 1) as usize
    }

    pub fn coords(&self, idx: usize) -> &[i64] {
        let d = self.dim();
        &self.coords[idx * d..(idx + 1) * d]
    }

    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        if p.len() != self.dim() {
            return None;
        }
        let mut idx = 0usize;
        for (a, &x) in p.iter().enumerate() {
            if x < self.lo[a] || x > self.hi[a] {
                return None;
            }
            idx = idx * self.size(a) + (x - self.lo[a]) as usize;
        }
        Some(idx)
    }

    /// Exact squared interval (p_i - p_j)^2 = dt^2 - |dx|^2.
    pub fn interval(&self, i: usize, j: usize) -> i64 {
        interval(self.coords(i), self.coords(j))
    }

    pub fn separated(&self, i: usize, j: usize, mode: SeparationMode) -> bool {
        mode.separated(self.interval(i, j), i == j)
    }

    /// Largest axis extent.
    pub fn diameter(&self) -> i64 {
        (0..self.dim()).map(|a| self.hi[a] - self.lo[a]).max().unwrap_or(0)
    }

    /// Default distance from the boundary inside which results are flagged.
    pub fn guard_margin(&self) -> i64 {
        self.diameter() / 4
    }

    /// Whether the cell is at least `margin` steps from every face.
    pub fn is_interior(&self, idx: usize, margin: i64) -> bool {
        self.coords(idx)
            .iter()
            .enumerate()
            .all(|(a, &x)| x - self.lo[a] >= margin && self.hi[a] - x >= margin)
    }

    pub fn uses_masks(&self) -> bool {
        self.len <= MASK_CELL_LIMIT
    }

    /// Bitset of cells not separated from `idx`, if masks are enabled for this grid.
    pub fn unseparated_mask(&self, idx: usize, mode: SeparationMode) -> Option<&[u64]> {
        if !self.uses_masks() {
            return None;
        }
        let w = self.words();
        let all = self.masks[mode.slot()].get_or_init(|| {
            let mut flat = vec![0u64; self.len * w];
            flat.par_chunks_mut(w).enumerate().for_each(|(i, row)| {
                for j in 0..self.len {
                    if !self.separated(i, j, mode) {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
            });
            flat
        });
        Some(&all[idx * w..(idx + 1) * w])
    }
}

pub fn interval(p: &[i64], q: &[i64]) -> i64 {
    let dt = p[0] - q[0];
    let space: i64 = p[1..].iter().zip(&q[1..]).map(|(a, b)| (a - b) * (a - b)).sum();
    dt * dt - space
}
