//! Solving the flow matrix for per-level load fractions.
//!
//! The main path is partial-pivoting elimination. Cramer's rule is kept as
//! an independent cross-check since the speedup identity
//! `speedup = |det A| / |det A*_0|` is determinant based.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow_matrix::{self, sigma_in_regime, FlowMatrix, Protocol};
use crate::linalg;
use crate::topology::LevelProfile;

/// Relative pivot threshold: a pivot `<= PIVOT_TOL * max|A|` is singular.
pub const PIVOT_TOL: f64 = 1e-12;
/// Residual bound per level: `max|A x - b| <= RESIDUAL_TOL * k`.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Fractions in `[-FEASIBILITY_TOL, 0)` are treated as rounding noise.
pub const FEASIBILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelAllocation {
    /// Load fraction for each node on level `d`.
    pub fractions: Vec<f64>,
    /// `max|A x - b|`.
    pub residual_norm: f64,
    /// No pivot fell under tolerance and the residual is within bound.
    pub rank_ok: bool,
}

impl LevelAllocation {
    pub fn levels(&self) -> usize {
        self.fractions.len()
    }

    pub fn root_fraction(&self) -> f64 {
        self.fractions[0]
    }

    /// `sum_d c_d * alpha_d`, which must be 1.
    pub fn total_load(&self, profile: &LevelProfile) -> f64 {
        profile
            .counts()
            .iter()
            .zip(&self.fractions)
            .map(|(&c, &a)| c as f64 * a)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub level: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub sigma_in_regime: bool,
}

pub fn solve(fm: &FlowMatrix) -> Result<LevelAllocation> {
    solve_with_tolerance(fm, PIVOT_TOL)
}

/// [`solve`] with a caller-chosen relative pivot tolerance.
pub fn solve_with_tolerance(fm: &FlowMatrix, pivot_tol: f64) -> Result<LevelAllocation> {
    let k = fm.levels();
    let lu = linalg::decompose(fm.entries(), k, pivot_tol * fm.max_abs())
        .map_err(|column| Error::Singular { column })?;
    let fractions = lu.solve(fm.rhs());
    let residual_norm = residual(fm, &fractions);
    Ok(LevelAllocation {
        rank_ok: residual_norm <= RESIDUAL_TOL * k as f64,
        fractions,
        residual_norm,
    })
}

fn residual(fm: &FlowMatrix, x: &[f64]) -> f64 {
    (0..fm.levels())
        .map(|r| {
            let ax: f64 = fm.row(r).iter().zip(x).map(|(a, x)| a * x).sum();
            (ax - fm.rhs()[r]).abs()
        })
        .fold(0.0, f64::max)
}

/// `alpha_i = det A*_i / det A`.
///
/// The ratio is signed, so infeasible systems show their negative
/// fractions instead of having them folded back to positive values.
pub fn cramer_fraction(fm: &FlowMatrix, level: usize) -> Result<f64> {
    let replaced = fm.replaced_determinant(level)?;
    let det = fm.determinant();
    if !(det.abs() > PIVOT_TOL * fm.max_abs()) {
        return Err(Error::Singular { column: level });
    }
    Ok(replaced / det)
}

/// Numerical rank of the flow matrix.
pub fn rank(fm: &FlowMatrix) -> usize {
    linalg::rank(fm.entries(), fm.levels(), PIVOT_TOL * fm.max_abs())
}

pub fn check_feasibility(alloc: &LevelAllocation, fm: &FlowMatrix) -> FeasibilityReport {
    let violations: Vec<Violation> = alloc
        .fractions
        .iter()
        .enumerate()
        .filter(|&(level, &value)| {
            if level == 0 {
                !(value > 0.0 && value <= 1.0 + FEASIBILITY_TOL)
            } else {
                value < -FEASIBILITY_TOL || value.is_nan()
            }
        })
        .map(|(level, &value)| Violation { level, value })
        .collect();
    FeasibilityReport {
        feasible: violations.is_empty(),
        violations,
        sigma_in_regime: sigma_in_regime(fm.sigma()),
    }
}

/// Solves, and while the result is infeasible drops the deepest level
/// (giving it nothing) and solves again. A single level is always feasible.
///
/// The returned allocation has one entry per level of `profile`; the
/// dropped levels hold zero.
pub fn solve_with_truncation(
    profile: &LevelProfile,
    sigma: f64,
    protocol: Protocol,
) -> Result<(LevelAllocation, usize)> {
    let k = profile.levels();
    for used in (1..=k).rev() {
        let fm = flow_matrix::build(protocol, &profile.prefix(used)?, sigma)?;
        let alloc = match solve(&fm) {
            Ok(a) => a,
            Err(Error::Singular { .. }) if used > 1 => continue,
            Err(e) => return Err(e),
        };
        if check_feasibility(&alloc, &fm).feasible {
            let mut fractions = alloc.fractions;
            fractions.resize(k, 0.0);
            return Ok((LevelAllocation { fractions, ..alloc }, used));
        }
    }
    Err(Error::InvalidProfile("no levels".into()))
}

/// The explicit 2x2 mesh, corner injection solutions, per level
/// `(alpha_0, alpha_1, alpha_3)` over counts `(1, 2, 1)`.
///
/// * cut-through: `alpha_0 = alpha_1 = 1 / (4 - s)`, `alpha_3 = (1 - s) / (4 - s)`
/// * store-and-forward: `alpha_0 = ((s + 1) / (s + 2))^2`,
///   `alpha_1 = (s + 1) / (s + 2)^2`, `alpha_3 = 1 / (s + 2)^2`
pub fn closed_form_2x2(protocol: Protocol, sigma: f64) -> LevelAllocation {
    let fractions = match protocol {
        Protocol::CutThrough => {
            let a = 1.0 / (4.0 - sigma);
            vec![a, a, (1.0 - sigma) / (4.0 - sigma)]
        }
        Protocol::StoreAndForward => {
            let q = (sigma + 2.0) * (sigma + 2.0);
            vec![(sigma + 1.0) * (sigma + 1.0) / q, (sigma + 1.0) / q, 1.0 / q]
        }
    };
    LevelAllocation {
        fractions,
        residual_norm: 0.0,
        rank_ok: true,
    }
}
