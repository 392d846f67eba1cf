//! Region serialisation.
//!
//! JSON schema `minklab.region.v1`:
//!
//! ```text
//! { "schema": "minklab.region.v1",
//!   "lo": [t_lo, x_lo, ...], "hi": [t_hi, x_hi, ...],
//!   "count": <members>,
//!   "rows": [ { "at": [t, ...], "runs": [[start, len], ...] }, ... ] }
//! ```
//!
//! A row fixes every coordinate but the last; `at` lists those fixed
//! coordinates and each run covers last-axis coordinates start..start+len.
//! Rows without members are omitted; rows and runs are in increasing order.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{LatticeError, Result};
use crate::grid::IntegerGrid;
use crate::region::Region;

pub const REGION_SCHEMA: &str = "minklab.region.v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowRuns {
    pub at: Vec<i64>,
    pub runs: Vec<[i64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionExport {
    pub schema: String,
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub count: usize,
    pub rows: Vec<RowRuns>,
}

pub fn export_region(r: &Region) -> RegionExport {
    let g = r.grid();
    let d = g.dim();
    let row_len = g.size(d - 1);
    let mut rows = Vec::new();
    for start in (0..g.len()).step_by(row_len) {
        let mut runs: Vec<[i64; 2]> = Vec::new();
        for i in start..start + row_len {
            if !r.contains(i) {
                continue;
            }
            let x = g.coords(i)[d - 1];
            match runs.last_mut() {
                Some(run) if run[0] + run[1] == x => run[1] += 1,
                _ => runs.push([x, 1]),
            }
        }
        if !runs.is_empty() {
            rows.push(RowRuns { at: g.coords(start)[..d - 1].to_vec(), runs });
        }
    }
    RegionExport { schema: REGION_SCHEMA.into(), lo: g.lo().to_vec(), hi: g.hi().to_vec(), count: r.len(), rows }
}

pub fn region_to_json(r: &Region) -> String {
    serde_json::to_string(&export_region(r)).expect("plain data serialises")
}

/// Rebuilds a region; the grid is reused when its extents match.
pub fn region_from_export(e: &RegionExport, grid: Option<&Arc<IntegerGrid>>) -> Result<Region> {
    if e.schema != REGION_SCHEMA {
        return Err(LatticeError::Format(format!("unknown schema {}", e.schema)));
    }
    if e.lo.len() != e.hi.len() {
        return Err(LatticeError::Format("lo and hi differ in length".into()));
    }
    let grid = match grid {
        Some(g) if g.lo() == e.lo.as_slice() && g.hi() == e.hi.as_slice() => g.clone(),
        Some(_) => return Err(LatticeError::GridMismatch),
        None => {
            let ranges: Vec<(i64, i64)> = e.lo.iter().copied().zip(e.hi.iter().copied()).collect();
            Arc::new(IntegerGrid::new(&ranges)?)
        }
    };
    let mut r = Region::empty(&grid);
    for row in &e.rows {
        for &[start, len] in &row.runs {
            if len < 0 {
                return Err(LatticeError::Format("negative run length".into()));
            }
            for x in start..start + len {
                let mut p = row.at.clone();
                p.push(x);
                let i = grid.index_of(&p).ok_or(LatticeError::OutOfGrid(p))?;
                r.insert(i);
            }
        }
    }
    if r.len() != e.count {
        return Err(LatticeError::Format(format!("count {} but {} members decoded", e.count, r.len())));
    }
    Ok(r)
}

pub fn region_from_json(s: &str, grid: Option<&Arc<IntegerGrid>>) -> Result<Region> {
    let e: RegionExport = serde_json::from_str(s).map_err(|e| LatticeError::Format(e.to_string()))?;
    region_from_export(&e, grid)
}

/// Plain PBM (P1) of a 2-dimensional region: x runs left to right, the top
/// row is the latest time, 1 marks a member.
pub fn region_to_pbm(r: &Region) -> Result<String> {
    let g = r.grid();
    if g.dim() != 2 {
        return Err(LatticeError::UnsupportedDimension(g.dim()));
    }
    let (w, h) = (g.size(1), g.size(0));
    let mut out = format!("P1\n{w} {h}\n");
    for t in (g.lo()[0]..=g.hi()[0]).rev() {
        let row: Vec<&str> = (g.lo()[1]..=g.hi()[1])
            .map(|x| if r.contains_point(&[t, x]) { "1" } else { "0" })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}
