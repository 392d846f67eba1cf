//! Lattice-law checks, the orthomodularity counterexample and counterexample searches.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LatticeError, Result};
use crate::grid::{IntegerGrid, SeparationMode};
use crate::ops::{complement, completion, diamond, is_complete, join, meet};
use crate::region::Region;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeMorganViolation {
    pub i: usize,
    pub j: usize,
    /// "meet" for (a^b)' = a' v b', "join" for (a v b)' = a' ^ b'.
    pub law: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeMorganReport {
    pub pairs_checked: usize,
    pub violations: Vec<DeMorganViolation>,
}

/// Both De Morgan laws on every unordered pair (including i = j) of a family
/// of complete regions.
pub fn de_morgan_check(family: &[Region], mode: SeparationMode) -> Result<DeMorganReport> {
    for (i, s) in family.iter().enumerate() {
        if !is_complete(s, mode) {
            return Err(LatticeError::Precondition(format!("family member {i} is not complete")));
        }
    }
    let comps: Vec<Region> = family.iter().map(|s| complement(s, mode)).collect();
    let mut report = DeMorganReport::default();
    for i in 0..family.len() {
        for j in i..family.len() {
            report.pairs_checked += 1;
            let (a, b) = (&family[i], &family[j]);
            if complement(&meet(a, b, mode)?, mode) != join(&comps[i], &comps[j], mode)? {
                report.violations.push(DeMorganViolation { i, j, law: "meet".into() });
            }
            if complement(&join(a, b, mode)?, mode) != meet(&comps[i], &comps[j], mode)? {
                report.violations.push(DeMorganViolation { i, j, law: "join".into() });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrthomodularityReport {
    pub holds: bool,
    /// (b ^ (a v b')) \ a, empty when the law holds.
    pub witness: Region,
}

/// Tests a = b ^ (a v b') for complete a <= b.
pub fn orthomodularity_check(a: &Region, b: &Region, mode: SeparationMode) -> Result<OrthomodularityReport> {
    if !a.is_subset(b)? {
        return Err(LatticeError::Precondition("a must be contained in b".into()));
    }
    if !is_complete(a, mode) || !is_complete(b, mode) {
        return Err(LatticeError::Precondition("a and b must be complete".into()));
    }
    let rhs = meet(b, &join(a, &complement(b, mode), mode)?, mode)?;
    let witness = rhs.difference(a)?;
    Ok(OrthomodularityReport { holds: rhs == *a, witness })
}

/// The two-diamond configuration and its orthomodularity witnesses.
#[derive(Debug, Clone)]
pub struct Fig2Report {
    pub scale: i64,
    /// Small closed diamond inside the left wedge, touching its lightlike edge.
    pub a: Region,
    /// Large open diamond; on the grid this equals the closed diamond one step inside.
    pub b_prime: Region,
    /// Causal complement of b_prime: the closed double wedge.
    pub b: Region,
    pub witness: Region,
    /// Chronological analogue: closed large diamond and its chronological complement.
    pub chron_b: Region,
    /// Same a against chron_b. The lattice has no events inside the half-open
    /// strip next to the corner of a, so this can fail on the grid.
    pub chron_holds: bool,
    pub chron_witness: Region,
    /// Closed diamond from (-2, -12) to (2, -12), two lattice steps clear of the lightlike edge.
    pub curated_a: Region,
    pub curated_chron_holds: bool,
    pub curated_causal_holds: bool,
}

impl Fig2Report {
    pub fn witness_size(&self) -> usize {
        self.witness.len()
    }
}

/// Half-extent required for scale 1.
pub const FIG2_MIN_HALF_EXTENT: i64 = 20;

/// Builds the configuration at the largest integer scale the grid allows.
///
/// At scale s (times every coordinate below): a is the closed diamond from
/// (-1, -11) to (3, -11), b' the open diamond from (-8, 0) to (8, 0). The
/// upper-right edge of a lies on the lightlike line t + x = -8 bounding b'.
pub fn fig2_counterexample(grid: &Arc<IntegerGrid>) -> Result<Fig2Report> {
    if grid.dim() != 2 {
        return Err(LatticeError::UnsupportedDimension(grid.dim()));
    }
    let half = (0..2).map(|k| (-grid.lo()[k]).min(grid.hi()[k])).min().unwrap_or(0);
    let scale = half / FIG2_MIN_HALF_EXTENT;
    if scale < 1 {
        return Err(LatticeError::GridTooSmall { needed: FIG2_MIN_HALF_EXTENT, got: half });
    }
    let s = scale;
    let a = diamond(grid, &[-s, -11 * s], &[3 * s, -11 * s], false)?;
    let b_prime = diamond(grid, &[-8 * s, 0], &[8 * s, 0], true)?;
    let b = complement(&b_prime, SeparationMode::Causal);
    let causal = orthomodularity_check(&a, &b, SeparationMode::Causal)?;

    let big_closed = diamond(grid, &[-8 * s, 0], &[8 * s, 0], false)?;
    let chron_b = complement(&big_closed, SeparationMode::Chronological);
    let chron = orthomodularity_check(&a, &chron_b, SeparationMode::Chronological)?;
    let curated_a = diamond(grid, &[-2 * s, -12 * s], &[2 * s, -12 * s], false)?;
    let curated_chron = orthomodularity_check(&curated_a, &chron_b, SeparationMode::Chronological)?;
    let curated_causal = orthomodularity_check(&curated_a, &b, SeparationMode::Causal)?;
    Ok(Fig2Report {
        scale,
        a,
        b_prime,
        b,
        witness: causal.witness,
        chron_b,
        chron_holds: chron.holds,
        chron_witness: chron.witness,
        curated_a,
        curated_chron_holds: curated_chron.holds,
        curated_causal_holds: curated_causal.holds,
    })
}

/// A random complete region built from a few interior seed events.
pub fn random_complete_region<R: Rng + ?Sized>(grid: &Arc<IntegerGrid>, mode: SeparationMode, rng: &mut R) -> Region {
    let margin = grid.guard_margin();
    let interior: Vec<usize> = (0..grid.len()).filter(|&i| grid.is_interior(i, margin)).collect();
    let pick = |rng: &mut R| interior[rng.random_range(0..interior.len())];
    match rng.random_range(0..4) {
        0 => {
            let k = rng.random_range(1..=4);
            let seeds = Region::from_indices(grid, (0..k).map(|_| pick(rng)));
            completion(&seeds, mode)
        }
        1 => {
            let (p, q) = (pick(rng), pick(rng));
            let (p, q) = if grid.coords(p)[0] <= grid.coords(q)[0] { (p, q) } else { (q, p) };
            let d = diamond(grid, grid.coords(p), grid.coords(q), false).expect("cells are in the grid");
            completion(&d, mode)
        }
        2 => {
            let k = rng.random_range(1..=3);
            let seeds = Region::from_indices(grid, (0..k).map(|_| pick(rng)));
            complement(&seeds, mode)
        }
        _ => {
            let seeds = Region::random(grid, rng.random_range(0.001..0.02), rng);
            completion(&seeds, mode)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringWitness {
    pub p: Vec<i64>,
    pub q: Vec<i64>,
    /// An event r such that {p} < {p} v {r} < {p} v {q}.
    pub r: Vec<i64>,
    pub intermediate_size: usize,
    pub join_size: usize,
}

/// Searches for an element strictly between {p} and {p} v {q}.
pub fn covering_counterexample(grid: &Arc<IntegerGrid>, p: &[i64], q: &[i64], mode: SeparationMode) -> Result<Option<CoveringWitness>> {
    let single = |x: &[i64]| Region::from_points(grid, &[x.to_vec()]);
    let sp = single(p)?;
    let top = join(&sp, &single(q)?, mode)?;
    let pi = grid.index_of(p).expect("checked by from_points");
    // Timelike candidates first: they give diamonds rather than null pairs.
    let mut candidates: Vec<usize> = top.iter().collect();
    candidates.sort_by_key(|&r| grid.interval(pi, r) <= 0);
    for r in candidates {
        let mid = join(&sp, &Region::from_indices(grid, [r]), mode)?;
        if mid != sp && mid != top && sp.is_subset(&mid)? && mid.is_subset(&top)? {
            return Ok(Some(CoveringWitness {
                p: p.to_vec(),
                q: q.to_vec(),
                r: grid.coords(r).to_vec(),
                intermediate_size: mid.len(),
                join_size: top.len(),
            }));
        }
    }
    Ok(None)
}

/// Complete regions generated by single events and by timelike pairs of
/// events at least `margin` steps from the boundary, deduplicated.
pub fn small_family(grid: &Arc<IntegerGrid>, mode: SeparationMode, margin: i64) -> Vec<Region> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let cells: Vec<usize> = (0..grid.len()).filter(|&i| grid.is_interior(i, margin)).collect();
    let mut push = |r: Region| {
        if seen.insert(r.bits().to_vec()) {
            out.push(r);
        }
    };
    for &i in &cells {
        push(completion(&Region::from_indices(grid, [i]), mode));
    }
    for (k, &i) in cells.iter().enumerate() {
        for &j in &cells[k + 1..] {
            if grid.interval(i, j) > 0 {
                push(completion(&Region::from_indices(grid, [i, j]), mode));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleWitness {
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
    pub c: Vec<Vec<i64>>,
    pub lhs_size: usize,
    pub rhs_size: usize,
}

fn triple(a: &Region, b: &Region, c: &Region, lhs: &Region, rhs: &Region) -> TripleWitness {
    TripleWitness { a: a.points(), b: b.points(), c: c.points(), lhs_size: lhs.len(), rhs_size: rhs.len() }
}

/// First triple with a <= c and a v (b ^ c) != (a v b) ^ c.
pub fn modularity_counterexample(family: &[Region], mode: SeparationMode) -> Result<Option<TripleWitness>> {
    for c in family {
        for a in family {
            if a == c || !a.is_subset(c)? {
                continue;
            }
            for b in family {
                let lhs = join(a, &meet(b, c, mode)?, mode)?;
                let rhs = meet(&join(a, b, mode)?, c, mode)?;
                if lhs != rhs {
                    return Ok(Some(triple(a, b, c, &lhs, &rhs)));
                }
            }
        }
    }
    Ok(None)
}

/// First triple with a ^ (b v c) != (a ^ b) v (a ^ c).
pub fn distributivity_counterexample(family: &[Region], mode: SeparationMode) -> Result<Option<TripleWitness>> {
    for a in family {
        for b in family {
            for c in family {
                let lhs = meet(a, &join(b, c, mode)?, mode)?;
                let rhs = join(&meet(a, b, mode)?, &meet(a, c, mode)?, mode)?;
                if lhs != rhs {
                    return Ok(Some(triple(a, b, c, &lhs, &rhs)));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertySuiteReport {
    pub mode: SeparationMode,
    pub seed: u64,
    pub samples: usize,
    pub triple_prime_failures: usize,
    pub idempotence_failures: usize,
    pub involution_failures: usize,
    pub order_reversal_failures: usize,
    pub orthocomplement_failures: usize,
    pub de_morgan_violations: usize,
    pub atoms_checked: usize,
    pub atom_failures: usize,
    /// Sampled elements with a member inside the guard margin.
    pub guard_flagged: usize,
    pub covering: Option<CoveringWitness>,
    pub modularity: Option<TripleWitness>,
    pub distributivity: Option<TripleWitness>,
}

impl PropertySuiteReport {
    /// All law checks clean and all three counterexamples found.
    pub fn passed(&self) -> bool {
        self.triple_prime_failures
            + self.idempotence_failures
            + self.involution_failures
            + self.order_reversal_failures
            + self.orthocomplement_failures
            + self.de_morgan_violations
            + self.atom_failures
            == 0
            && self.covering.is_some()
            && self.modularity.is_some()
            && self.distributivity.is_some()
    }
}

/// Side of the small grid used by the exhaustive counterexample searches.
pub const SEARCH_GRID: usize = 11;
/// Seeds of the search family stay this far from the search grid boundary.
pub const SEARCH_MARGIN: i64 = 3;

/// Orthocomplemented-lattice laws on sampled complete regions plus atom,
/// covering, modularity and distributivity checks.
pub fn lattice_property_suite(grid: &Arc<IntegerGrid>, mode: SeparationMode, seed: u64, samples: usize) -> Result<PropertySuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = grid.guard_margin();
    let mut report = PropertySuiteReport {
        mode,
        seed,
        samples,
        triple_prime_failures: 0,
        idempotence_failures: 0,
        involution_failures: 0,
        order_reversal_failures: 0,
        orthocomplement_failures: 0,
        de_morgan_violations: 0,
        atoms_checked: 0,
        atom_failures: 0,
        guard_flagged: 0,
        covering: None,
        modularity: None,
        distributivity: None,
    };
    let full = Region::full(grid);
    let empty = Region::empty(grid);
    let mut elements = Vec::with_capacity(samples);
    for _ in 0..samples {
        let raw = Region::random(grid, rng.random_range(0.0..0.05), &mut rng);
        let c1 = complement(&raw, mode);
        let c2 = complement(&c1, mode);
        if complement(&c2, mode) != c1 {
            report.triple_prime_failures += 1;
        }
        if completion(&c2, mode) != c2 {
            report.idempotence_failures += 1;
        }
        let a = random_complete_region(grid, mode, &mut rng);
        if a.touches_guard(margin) {
            report.guard_flagged += 1;
        }
        let ac = complement(&a, mode);
        if complement(&ac, mode) != a {
            report.involution_failures += 1;
        }
        if !meet(&a, &ac, mode)?.is_empty() || join(&a, &ac, mode)? != full || join(&a, &empty, mode)? != a {
            report.orthocomplement_failures += 1;
        }
        elements.push(a);
    }
    for pair in elements.chunks(2) {
        if let [a, b] = pair {
            let ab = join(a, b, mode)?;
            // a <= a v b, so (a v b)' <= a'.
            if !a.is_subset(&ab)? || !complement(&ab, mode).is_subset(&complement(a, mode))? {
                report.order_reversal_failures += 1;
            }
            report.de_morgan_violations += de_morgan_check(&[a.clone(), b.clone()], mode)?.violations.len();
        }
    }
    for i in (0..grid.len()).filter(|&i| grid.is_interior(i, margin)) {
        report.atoms_checked += 1;
        let atom = Region::from_indices(grid, [i]);
        if completion(&atom, mode) != atom {
            report.atom_failures += 1;
        }
    }
    let p = vec![0i64; grid.dim()];
    let mut q = p.clone();
    q[0] = 4.min(grid.hi()[0]);
    report.covering = covering_counterexample(grid, &p, &q, mode)?;
    let small = Arc::new(IntegerGrid::centered(&vec![SEARCH_GRID; grid.dim().min(2)])?);
    let family = small_family(&small, mode, SEARCH_MARGIN);
    report.modularity = modularity_counterexample(&family, mode)?;
    report.distributivity = distributivity_counterexample(&family, mode)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentreReport {
    pub tested: usize,
    /// Indices of elements other than the empty set and the grid found central.
    pub nontrivial_central: Vec<usize>,
    /// Of those, how many touch the guard margin.
    pub near_boundary: usize,
}

/// Experiment: which family members c satisfy a = (a ^ c) v (a ^ c') for all
/// members a. On a finite grid boundary effects can make elements look central.
pub fn centre_experiment(family: &[Region], mode: SeparationMode) -> Result<CentreReport> {
    let mut report = CentreReport { tested: family.len(), nontrivial_central: Vec::new(), near_boundary: 0 };
    for (k, c) in family.iter().enumerate() {
        if c.is_empty() || c.is_full() {
            continue;
        }
        let cc = complement(c, mode);
        let mut central = true;
        for a in family {
            if join(&meet(a, c, mode)?, &meet(a, &cc, mode)?, mode)? != *a {
                central = false;
                break;
            }
        }
        if central {
            report.nontrivial_central.push(k);
            if c.touches_guard(c.grid().guard_margin()) {
                report.near_boundary += 1;
            }
        }
    }
    Ok(report)
}
