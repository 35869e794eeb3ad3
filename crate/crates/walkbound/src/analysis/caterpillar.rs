//! Pass structure of LFV-v on the caterpillar and the symbolic degree table.
//!
//! A pass ends where the walker's movement along the path reverses. The
//! snapshot of a pass is the path frequencies just before the walker leaves
//! the turning node, so pass 1 ends at the last path node after the first
//! sweep down.

use std::collections::BTreeMap;

use serde::Serialize;

use super::fit::{fit_growth, GrowthModel};
use crate::generators::{caterpillar, CaterpillarParams, GeneratorError};
use crate::walk::{Policy, Walk, WalkError, WalkState};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PassSnapshot {
    /// 1-based pass number.
    pub pass: usize,
    pub t: u64,
    /// Path node at which the direction reversed.
    pub turn: u32,
    /// Frequencies of path nodes `0..=l+1`.
    pub freq: Vec<u64>,
}

/// Watches path moves and records a snapshot at every reversal.
#[derive(Debug, Clone)]
pub struct PassTracker {
    path_len: u32,
    last: Option<u32>,
    rising: Option<bool>,
    pub snapshots: Vec<PassSnapshot>,
}

impl PassTracker {
    pub fn new(path_len: u32) -> Self {
        PassTracker {
            path_len,
            last: None,
            rising: None,
            snapshots: Vec::new(),
        }
    }

    /// Call after every step. Returns true when a pass just ended.
    pub fn observe(&mut self, state: &WalkState) -> bool {
        let cur = state.current.0;
        if cur >= self.path_len {
            return false;
        }
        let Some(last) = self.last else {
            self.last = Some(cur);
            return false;
        };
        if cur == last {
            return false;
        }
        let rising = cur > last;
        let mut ended = false;
        if self.rising.is_some_and(|r| r != rising) {
            let mut freq = state.node_freq[..self.path_len as usize].to_vec();
            freq[cur as usize] -= 1;
            self.snapshots.push(PassSnapshot {
                pass: self.snapshots.len() + 1,
                t: state.t - 1,
                turn: last,
                freq,
            });
            ended = true;
        }
        self.rising = Some(rising);
        self.last = Some(cur);
        ended
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PassRun {
    pub snapshots: Vec<PassSnapshot>,
    pub steps: u64,
    pub cover_time: Option<u64>,
    /// True when the step budget ran out before the requested passes.
    pub truncated: bool,
}

/// Runs LFV-v with the bundled priorities until `passes` passes are complete,
/// or until coverage when `passes` is `None`.
pub fn caterpillar_passes(
    p: CaterpillarParams,
    passes: Option<usize>,
    step_cap: u64,
) -> Result<PassRun, CaterpillarError> {
    let inst = caterpillar(p)?;
    let mut w = Walk::new(&inst.graph, Policy::LfvV, inst.tiebreaker(), inst.start)?;
    let mut tracker = PassTracker::new(p.path_len() as u32);
    let done = |tr: &PassTracker, w: &Walk| match passes {
        Some(k) => tr.snapshots.len() >= k,
        None => w.is_covered(),
    };
    while !done(&tracker, &w) && w.state().t < step_cap {
        w.step()?;
        tracker.observe(w.state());
    }
    Ok(PassRun {
        truncated: !done(&tracker, &w),
        snapshots: tracker.snapshots,
        steps: w.state().t,
        cover_time: w.cover_time(),
    })
}

#[derive(Debug, thiserror::Error)]
pub enum CaterpillarError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("l must be odd and at least 3, got {0}")]
    BadL(u64),
}

/// Polynomial degree in `b` of path node `i`'s frequency at pass `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeTable {
    pub l: u64,
    /// Keyed by `(i, j)` for `i` in `1..=l+1` and `j` in `3..=l-2`.
    pub entries: BTreeMap<(u64, u64), i64>,
}

impl DegreeTable {
    pub fn get(&self, i: u64, j: u64) -> Option<i64> {
        self.entries.get(&(i, j)).copied()
    }
}

/// The eight-case piecewise degree formula, evaluated literally. Some cases
/// evaluate to negative numbers; they are kept as-is so a comparison can flag
/// them.
pub fn degree_formula(l: u64, i: u64, j: u64) -> i64 {
    let (l, i, j) = (l as i64, i as i64, j as i64);
    if i == l + 1 {
        return if j % 2 == 1 { j } else { j - 1 };
    }
    let even = i % 2 == 0;
    if j < l - i {
        return if even { 2 } else { 3 };
    }
    match (even, j % 2 == 1) {
        (true, true) => j - l - i,
        (true, false) => j - l - i + 1,
        (false, true) => j - l - i + 2,
        (false, false) => j - l - i + 1,
    }
}

pub fn degree_table(l: u64) -> Result<DegreeTable, CaterpillarError> {
    if l < 3 || l % 2 == 0 {
        return Err(CaterpillarError::BadL(l));
    }
    let mut entries = BTreeMap::new();
    for j in 3..=l.saturating_sub(2) {
        for i in 1..=l + 1 {
            entries.insert((i, j), degree_formula(l, i, j));
        }
    }
    Ok(DegreeTable { l, entries })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeFitRow {
    pub i: u64,
    pub pass: u64,
    pub slope: f64,
    pub residual: f64,
    pub freqs: Vec<u64>,
    pub table: Option<i64>,
    /// Fitted slope within `tolerance` of the table entry, where one exists.
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeFitReport {
    pub l: u64,
    pub c: u64,
    pub b_values: Vec<u64>,
    pub tolerance: f64,
    pub rows: Vec<DegreeFitRow>,
    /// Passes completed for every `b` within the budget.
    pub passes: usize,
    pub truncated: bool,
}

impl DegreeFitReport {
    pub fn row(&self, i: u64, pass: u64) -> Option<&DegreeFitRow> {
        self.rows.iter().find(|r| r.i == i && r.pass == pass)
    }
}

/// Fits `log freq` against `log b` for every path node at every pass up to
/// `passes`, and compares against the degree table where it is defined.
pub fn fit_caterpillar_degrees(
    l: u64,
    c: u64,
    b_values: &[u64],
    passes: usize,
    step_cap: u64,
    tolerance: f64,
) -> Result<DegreeFitReport, CaterpillarError> {
    let table = degree_table(l)?;
    let mut runs = Vec::with_capacity(b_values.len());
    for &b in b_values {
        runs.push(caterpillar_passes(
            CaterpillarParams { b, c, l },
            Some(passes),
            step_cap,
        )?);
    }
    let reached = runs.iter().map(|r| r.snapshots.len()).min().unwrap_or(0);
    let mut rows = Vec::new();
    for pass in 1..=reached {
        for i in 0..=l + 1 {
            let freqs: Vec<u64> = runs
                .iter()
                .map(|r| r.snapshots[pass - 1].freq[i as usize])
                .collect();
            let pts: Vec<(f64, f64)> = b_values
                .iter()
                .zip(&freqs)
                .map(|(&b, &f)| (b as f64, f as f64))
                .collect();
            let Ok(fit) = fit_growth(&pts, GrowthModel::Power) else {
                continue;
            };
            let table_deg = table.get(i, pass as u64);
            rows.push(DegreeFitRow {
                i,
                pass: pass as u64,
                slope: fit.slope,
                residual: fit.residual,
                freqs,
                table: table_deg,
                agrees: table_deg.map(|d| (fit.slope - d as f64).abs() <= tolerance),
            });
        }
    }
    Ok(DegreeFitReport {
        l,
        c,
        b_values: b_values.to_vec(),
        tolerance,
        rows,
        passes: reached,
        truncated: reached < passes,
    })
}
