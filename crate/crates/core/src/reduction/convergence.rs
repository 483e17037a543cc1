use serde::Serialize;

use super::trace::Trace;
use super::ReductionError;
use crate::term::FiniteTerm;

/// Stabilization data for one depth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthEntry {
    pub depth: usize,
    /// Index of the last step at depth `<= depth`, if any.
    pub last_step: Option<usize>,
    /// Truncation at `depth` of the term after `last_step` (the start if none).
    pub limit: FiniteTerm,
    /// Some later step shows the prefix survives further reduction.
    pub witnessed: bool,
}

/// What a finite prefix says about strong convergence up to a depth.
///
/// A finite prefix cannot certify a limit; `consistent` only says that every
/// term after each stabilization point agrees with the reported limit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub max_depth: usize,
    pub steps: usize,
    pub entries: Vec<DepthEntry>,
    pub consistent: bool,
    /// Largest `d` such that every depth up to `d` is witnessed.
    pub stabilized_up_to: Option<usize>,
}

impl ConvergenceReport {
    pub fn entry(&self, depth: usize) -> Option<&DepthEntry> {
        self.entries.get(depth)
    }
}

/// Checks the trace step by step, then tabulates for each `d <= max_depth`
/// where the truncation at `d` stops changing.
pub fn check_strong_convergence(
    tr: &Trace,
    max_depth: usize,
) -> Result<ConvergenceReport, ReductionError> {
    tr.validate(max_depth + 2)?;
    let n = tr.len();
    let mut entries = Vec::with_capacity(max_depth + 1);
    let mut consistent = true;
    for d in 0..=max_depth {
        let last_step = tr.steps.iter().rposition(|s| s.depth <= d);
        let from = last_step.map_or(0, |i| i + 1);
        let limit = tr.term(from).truncate(d);
        for j in from + 1..=n {
            if tr.term(j).truncate(d) != limit {
                consistent = false;
            }
        }
        let witnessed = d == 0 || last_step.is_none_or(|i| i + 1 < n);
        entries.push(DepthEntry {
            depth: d,
            last_step,
            limit,
            witnessed,
        });
    }
    let stabilized_up_to = entries
        .iter()
        .take_while(|e| e.witnessed)
        .last()
        .map(|e| e.depth);
    Ok(ConvergenceReport {
        max_depth,
        steps: n,
        entries,
        consistent,
        stabilized_up_to,
    })
}
