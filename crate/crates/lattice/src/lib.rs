//! Causally and chronologically complete sets on integer grids.
//!
//! Intervals are computed exactly in `i64`, so every lattice law is checked
//! bit for bit. Complements are relative to the finite grid; results near the
//! boundary differ from the unbounded case, see [`IntegerGrid::guard_margin`].

pub mod error;
pub mod export;
pub mod galilei;
pub mod grid;
pub mod laws;
pub mod ops;
pub mod region;

pub use error::{LatticeError, Result};
pub use grid::{IntegerGrid, SeparationMode};
pub use ops::{complement, complement_brute, completion, diamond, is_complete, join, meet};
pub use region::Region;
