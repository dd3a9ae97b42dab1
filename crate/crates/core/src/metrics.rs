//! Makespan, equivalent speed and speedup of an allocation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow_matrix::{FlowMatrix, Scenario};
use crate::solver::LevelAllocation;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    /// Finish time of the whole network for a unit load.
    pub makespan: f64,
    /// Inverse speed of the single processor equivalent to the network.
    pub w_eq: f64,
    /// Root-only finish time over network finish time, `1 / alpha_0`.
    pub speedup: f64,
    /// `|det A| / |det A*_0|`.
    pub speedup_det: f64,
}

impl Metrics {
    /// Metrics for a load of `load` units instead of one. Only the makespan
    /// scales, since costs are linear in load size.
    pub fn with_load(&self, load: f64) -> Metrics {
        Metrics {
            makespan: self.makespan * load,
            ..*self
        }
    }
}

pub fn compute_metrics(
    alloc: &LevelAllocation,
    scenario: &Scenario,
    fm: &FlowMatrix,
) -> Result<Metrics> {
    let root = alloc.root_fraction();
    if !(root > 0.0) {
        return Err(Error::UndefinedMetrics(root));
    }
    let det = fm.determinant();
    let det0 = fm.replaced_determinant(0)?;
    Ok(Metrics {
        makespan: root * scenario.compute_time(),
        w_eq: root * scenario.omega,
        speedup: 1.0 / root,
        speedup_det: det.abs() / det0.abs(),
    })
}
