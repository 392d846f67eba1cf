use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{LatticeError, Result};
use crate::grid::IntegerGrid;

/// A set of grid events, stored as a bitset over cell indices.
#[derive(Clone)]
pub struct Region {
    grid: Arc<IntegerGrid>,
    bits: Vec<u64>,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        same_grid(&self.grid, &other.grid) && self.bits == other.bits
    }
}

impl Eq for Region {}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<&[i64]> = self.iter().take(8).map(|i| self.grid.coords(i)).collect();
        write!(f, "Region(|S|={}, first={:?})", self.len(), pts)
    }
}

pub(crate) fn same_grid(a: &Arc<IntegerGrid>, b: &Arc<IntegerGrid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Region {
    pub fn empty(grid: &Arc<IntegerGrid>) -> Self {
        Self { grid: grid.clone(), bits: vec![0; grid.words()] }
    }

    pub fn full(grid: &Arc<IntegerGrid>) -> Self {
        let mut r = Self { grid: grid.clone(), bits: vec![!0; grid.words()] };
        r.clear_tail();
        r
    }

    pub(crate) fn from_bits(grid: &Arc<IntegerGrid>, mut bits: Vec<u64>) -> Self {
        debug_assert_eq!(bits.len(), grid.words());
        bits.resize(grid.words(), 0);
        let mut r = Self { grid: grid.clone(), bits };
        r.clear_tail();
        r
    }

    pub fn from_indices(grid: &Arc<IntegerGrid>, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut r = Self::empty(grid);
        for i in indices {
            r.insert(i);
        }
        r
    }

    pub fn from_points(grid: &Arc<IntegerGrid>, points: &[Vec<i64>]) -> Result<Self> {
        let mut r = Self::empty(grid);
        for p in points {
            let i = grid.index_of(p).ok_or_else(|| LatticeError::OutOfGrid(p.clone()))?;
            r.insert(i);
        }
        Ok(r)
    }

    pub fn from_fn(grid: &Arc<IntegerGrid>, f: impl Fn(&[i64]) -> bool) -> Self {
        Self::from_indices(grid, (0..grid.len()).filter(|&i| f(grid.coords(i))))
    }

    /// Bernoulli(density) cells.
    pub fn random<R: Rng + ?Sized>(grid: &Arc<IntegerGrid>, density: f64, rng: &mut R) -> Self {
        Self::from_indices(grid, (0..grid.len()).filter(|_| rng.random_bool(density)))
    }

    pub fn grid(&self) -> &Arc<IntegerGrid> {
        &self.grid
    }

    pub fn bits(&self) -> &[u64] {
        &self.bits
    }

    fn clear_tail(&mut self) {
        let rem = self.grid.len() % 64;
        if rem != 0 {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn contains(&self, idx: usize) -> bool {
        idx < self.grid.len() && self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn contains_point(&self, p: &[i64]) -> bool {
        self.grid.index_of(p).is_some_and(|i| self.contains(i))
    }

    pub fn insert(&mut self, idx: usize) {
        assert!(idx < self.grid.len(), "cell {idx} outside grid");
        self.bits[idx / 64] |= 1 << (idx % 64);
    }

    pub fn remove(&mut self, idx: usize) {
        if idx < self.grid.len() {
            self.bits[idx / 64] &= !(1 << (idx % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(&self.grid)
    }

    /// Member cell indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn points(&self) -> Vec<Vec<i64>> {
        self.iter().map(|i| self.grid.coords(i).to_vec()).collect()
    }

    fn check(&self, other: &Region) -> Result<()> {
        if same_grid(&self.grid, &other.grid) {
            Ok(())
        } else {
            Err(LatticeError::GridMismatch)
        }
    }

    fn zip(&self, other: &Region, f: impl Fn(u64, u64) -> u64) -> Result<Region> {
        self.check(other)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect();
        Ok(Region::from_bits(&self.grid, bits))
    }

    pub fn union(&self, other: &Region) -> Result<Region> {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Region) -> Result<Region> {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Region) -> Result<Region> {
        self.zip(other, |a, b| a & !b)
    }

    /// Set-theoretic complement within the grid.
    pub fn set_complement(&self) -> Region {
        Region::from_bits(&self.grid, self.bits.iter().map(|w| !w).collect())
    }

    pub fn is_subset(&self, other: &Region) -> Result<bool> {
        self.check(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & !b == 0))
    }

    pub fn is_disjoint(&self, other: &Region) -> Result<bool> {
        self.check(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & b == 0))
    }

    /// Whether some member lies within `margin` steps of the grid boundary.
    pub fn touches_guard(&self, margin: i64) -> bool {
        self.iter().any(|i| !self.grid.is_interior(i, margin))
    }
}
