//! Replay of the switching model from the fractions alone.
//!
//! Nothing here reads the flow matrix: start times come straight from the
//! link model, so agreement of the finish times with the makespan is an
//! independent check that the matrix encodes that model.
//!
//! With `T = z * tcm` per unit load over one link:
//!
//! * cut-through: levels 0 and 1 start at `0`, level `d >= 2` starts at
//!   `T * (a_1 + .. + a_{d-1})`, when the links stop carrying the shares
//!   of nearer levels;
//! * store-and-forward: level `d >= 1` starts at `T * (a_1 + .. + a_d)`,
//!   once its own share has fully arrived.
//!
//! Link occupancy is reported per level, not per physical link.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow_matrix::{Protocol, Scenario};
use crate::format::fmt_sig;
use crate::solver::LevelAllocation;
use crate::topology::{DistributionTree, LevelProfile, NodeId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timeline {
    pub protocol: Protocol,
    pub start: Vec<f64>,
    pub finish: Vec<f64>,
    /// Window in which level `d`'s share travels over the links.
    pub receive_start: Vec<f64>,
    pub receive_end: Vec<f64>,
    /// Levels with a nonzero share. Idle levels (dropped by truncation)
    /// take no part in the makespan.
    pub active: Vec<bool>,
    pub makespan: f64,
}

impl Timeline {
    pub fn levels(&self) -> usize {
        self.start.len()
    }
}

pub fn evaluate(
    protocol: Protocol,
    alloc: &LevelAllocation,
    profile: &LevelProfile,
    scenario: &Scenario,
) -> Result<Timeline> {
    let k = profile.levels();
    if alloc.levels() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            found: alloc.levels(),
        });
    }
    let link = scenario.transfer_time();
    let cpu = scenario.compute_time();

    let mut start = Vec::with_capacity(k);
    let mut receive_start = Vec::with_capacity(k);
    let mut receive_end = Vec::with_capacity(k);
    // volume already pushed through the links before level d's share
    let mut streamed = 0.0;
    for (d, &a) in alloc.fractions.iter().enumerate() {
        if d == 0 {
            start.push(0.0);
            receive_start.push(0.0);
            receive_end.push(0.0);
            continue;
        }
        let rx_start = link * streamed;
        streamed += a;
        let rx_end = link * streamed;
        start.push(match protocol {
            Protocol::CutThrough => rx_start,
            Protocol::StoreAndForward => rx_end,
        });
        receive_start.push(rx_start);
        receive_end.push(rx_end);
    }
    let finish: Vec<f64> = start
        .iter()
        .zip(&alloc.fractions)
        .map(|(t, a)| t + a * cpu)
        .collect();
    let active: Vec<bool> = alloc.fractions.iter().map(|&a| a != 0.0).collect();
    let makespan = finish
        .iter()
        .zip(&active)
        .filter(|(_, &on)| on)
        .map(|(&f, _)| f)
        .fold(0.0, f64::max);
    Ok(Timeline {
        protocol,
        start,
        finish,
        receive_start,
        receive_end,
        active,
        makespan,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimultaneousCheck {
    pub ok: bool,
    /// `max_d |finish_d - makespan| / makespan`.
    pub max_deviation: f64,
}

/// Whether every active level finishes within `tol * makespan` of the
/// makespan.
pub fn verify_simultaneous(tl: &Timeline, tol: f64) -> SimultaneousCheck {
    let abs = tl
        .finish
        .iter()
        .zip(&tl.active)
        .filter(|(_, &on)| on)
        .map(|(f, _)| (f - tl.makespan).abs())
        .fold(0.0, f64::max);
    let max_deviation = if tl.makespan > 0.0 { abs / tl.makespan } else { abs };
    SimultaneousCheck {
        ok: abs <= tol * tl.makespan.abs(),
        max_deviation,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GanttRecord {
    pub node: NodeId,
    pub level: usize,
    /// Tree parent feeding this node; `None` for the injection node.
    pub parent: Option<NodeId>,
    pub compute_start: f64,
    pub compute_end: f64,
    pub receive_start: f64,
    pub receive_end: f64,
}

/// One record per node, ordered by node id.
pub fn expand_gantt(
    tl: &Timeline,
    tree: &DistributionTree,
    profile: &LevelProfile,
) -> Result<Vec<GanttRecord>> {
    if tree.node_count() != profile.node_count() {
        return Err(Error::LengthMismatch {
            expected: profile.node_count(),
            found: tree.node_count(),
        });
    }
    if tl.levels() != profile.levels() {
        return Err(Error::LengthMismatch {
            expected: profile.levels(),
            found: tl.levels(),
        });
    }
    Ok(profile
        .distance_map()
        .iter()
        .enumerate()
        .map(|(node, &d)| GanttRecord {
            node,
            level: d,
            parent: tree.parent(node),
            compute_start: tl.start[d],
            compute_end: tl.finish[d],
            receive_start: tl.receive_start[d],
            receive_end: tl.receive_end[d],
        })
        .collect())
}

pub const GANTT_HEADER: &str =
    "node_id,level,compute_start,compute_end,receive_start,receive_end";

pub fn write_gantt_csv<W: Write>(records: &[GanttRecord], mut out: W) -> Result<()> {
    writeln!(out, "{GANTT_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.node,
            r.level,
            fmt_sig(r.compute_start),
            fmt_sig(r.compute_end),
            fmt_sig(r.receive_start),
            fmt_sig(r.receive_end)
        )?;
    }
    Ok(())
}
