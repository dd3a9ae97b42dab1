//! Sigma sweeps and their CSV / JSON renderings.
//!
//! Column order is fixed: `sigma`, then `level_0 .. level_{k-1}`, then one
//! `node_<id>` column per level representative (its smallest node id),
//! then `speedup`, `makespan`, `feasible`, `levels_used`. Numbers carry 12
//! significant digits.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::flow_matrix::{self, check_sigma, Protocol, Scenario};
use crate::format::{fmt_sig, round_sig};
use crate::solver::{self, check_feasibility, solve_with_truncation};
use crate::topology::{self, InjectionSpec, NodeId, Topology};

/// Strictly increasing, nonempty list of sigma values.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaGrid(Vec<f64>);

impl SigmaGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        for &s in &points {
            check_sigma(s).map_err(|_| Error::InvalidGrid(format!("bad sigma {s}")))?;
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
        }
        Ok(SigmaGrid(points))
    }

    /// `start, start + step, ..` up to and including `stop` (within a
    /// rounding margin). Points are rounded to 12 significant digits so
    /// `0.01:0.99:0.01` yields clean decimals.
    pub fn range(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() || !start.is_finite() || !stop.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "need finite start/stop and a positive step, got {start}:{stop}:{step}"
            )));
        }
        if stop < start {
            return Err(Error::InvalidGrid(format!("stop {stop} is below start {start}")));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Self::new((0..n).map(|i| round_sig(start + i as f64 * step)).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }
}

impl FromStr for SigmaGrid {
    type Err = Error;

    /// Parses `start:stop:step`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(Error::InvalidGrid(format!("expected start:stop:step, got `{s}`")));
        };
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidGrid(format!("`{v}` is not a number")))
        };
        Self::range(num(start)?, num(stop)?, num(step)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    /// Keep the full system and mark infeasible points.
    #[default]
    Flag,
    /// Drop deepest levels until feasible.
    Truncate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub fractions: Vec<f64>,
    /// `(representative node, its fraction)` per level.
    pub nodes: Vec<(NodeId, f64)>,
    pub speedup: f64,
    pub makespan: f64,
    pub feasible: bool,
    pub levels_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub representatives: Vec<NodeId>,
    pub rows: Vec<SweepRow>,
}

impl Sweep {
    pub fn levels(&self) -> usize {
        self.representatives.len()
    }

    pub fn feasible_only(&self) -> Sweep {
        Sweep {
            representatives: self.representatives.clone(),
            rows: self.rows.iter().filter(|r| r.feasible).cloned().collect(),
        }
    }

    /// Values of one level's fraction over the grid.
    pub fn level_column(&self, level: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.fractions[level]).collect()
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec!["sigma".to_string()];
        cols.extend((0..self.levels()).map(|d| format!("level_{d}")));
        cols.extend(self.representatives.iter().map(|n| format!("node_{n}")));
        cols.extend(["speedup", "makespan", "feasible", "levels_used"].map(String::from));
        cols
    }
}

/// Solves every grid point. Rows come back in grid order; points are
/// independent and solved in parallel.
///
/// `base` supplies `omega`, `tcp` and `tcm`; `z` follows from each sigma.
/// In [`SweepMode::Flag`] a point whose system is singular gets NaN
/// fractions and is marked infeasible.
pub fn sweep_sigma(
    topology: &Topology,
    injection: &InjectionSpec,
    protocol: Protocol,
    grid: &SigmaGrid,
    base: &Scenario,
    mode: SweepMode,
) -> Result<Sweep> {
    let profile = topology::level_profile(topology, injection)?;
    let representatives = profile.representatives();
    let k = profile.levels();
    let rows = grid
        .points()
        .par_iter()
        .map(|&sigma| {
            let scenario = base.with_sigma(sigma)?;
            let (fractions, feasible, levels_used) = match mode {
                SweepMode::Flag => {
                    let fm = flow_matrix::build(protocol, &profile, sigma)?;
                    match solver::solve(&fm) {
                        Ok(alloc) => {
                            let feasible = check_feasibility(&alloc, &fm).feasible;
                            (alloc.fractions, feasible, k)
                        }
                        Err(Error::Singular { .. }) => (vec![f64::NAN; k], false, k),
                        Err(e) => return Err(e),
                    }
                }
                SweepMode::Truncate => {
                    let (alloc, used) = solve_with_truncation(&profile, sigma, protocol)?;
                    (alloc.fractions, true, used)
                }
            };
            let root = fractions[0];
            Ok(SweepRow {
                sigma,
                nodes: representatives
                    .iter()
                    .zip(&fractions)
                    .map(|(&n, &a)| (n, a))
                    .collect(),
                speedup: 1.0 / root,
                makespan: root * scenario.compute_time(),
                fractions,
                feasible,
                levels_used,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep {
        representatives,
        rows,
    })
}

fn row_cells(row: &SweepRow) -> Vec<String> {
    let mut cells = vec![fmt_sig(row.sigma)];
    cells.extend(row.fractions.iter().map(|&a| fmt_sig(a)));
    cells.extend(row.nodes.iter().map(|&(_, a)| fmt_sig(a)));
    cells.push(fmt_sig(row.speedup));
    cells.push(fmt_sig(row.makespan));
    cells.push(row.feasible.to_string());
    cells.push(row.levels_used.to_string());
    cells
}

pub fn emit_csv<W: Write>(sweep: &Sweep, mut out: W) -> Result<()> {
    writeln!(out, "{}", sweep.columns().join(","))?;
    for row in &sweep.rows {
        writeln!(out, "{}", row_cells(row).join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// JSON array with one object per row, keys named and ordered like the CSV
/// columns. NaN becomes `null`.
pub fn emit_json<W: Write>(sweep: &Sweep, mut out: W) -> Result<()> {
    let columns = sweep.columns();
    let num = |x: f64| Value::from(round_sig(x));
    let rows: Vec<Value> = sweep
        .rows
        .iter()
        .map(|row| {
            let mut values = vec![num(row.sigma)];
            values.extend(row.fractions.iter().map(|&a| num(a)));
            values.extend(row.nodes.iter().map(|&(_, a)| num(a)));
            values.push(num(row.speedup));
            values.push(num(row.makespan));
            values.push(Value::Bool(row.feasible));
            values.push(Value::from(row.levels_used));
            Value::Object(columns.iter().cloned().zip(values).collect::<Map<_, _>>())
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &rows)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// `<topology>_<injection>_<protocol>_sweep.<ext>`, e.g.
/// `mesh2x2_corner0_vct_sweep.csv`.
pub fn sweep_file_name(
    topology: &Topology,
    injection: &InjectionSpec,
    protocol: Protocol,
    extension: &str,
) -> String {
    format!(
        "{}_{}{}_{}_sweep.{extension}",
        topology.slug(),
        injection.class,
        injection.node,
        protocol
    )
}
