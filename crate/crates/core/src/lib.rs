//! Optimal single-source divisible load distribution on homogeneous
//! interconnects.
//!
//! A load injected at one node of a mesh, torus or hypercube is split into
//! per-hop-level fractions by solving a small linear system, the *flow
//! matrix*, built for either virtual cut-through or modified
//! store-and-forward switching. Every participating processor then finishes
//! at the same instant, which is what makes the split makespan-optimal.
//!
//! The pipeline is:
//!
//! 1. [`topology`]: BFS level profile and a shortest-path distribution tree.
//! 2. [`flow_matrix`]: the `k x k` system `A * alpha = (1, 0, .., 0)`.
//! 3. [`solver`]: partial-pivoting elimination, Cramer cross-check,
//!    feasibility and level truncation.
//! 4. [`metrics`]: makespan, equivalent inverse speed, speedup.
//! 5. [`timeline`]: an independent replay of the switching model used to
//!    check the simultaneous-finish property, plus per-node Gantt records.
//! 6. [`report`]: sigma sweeps emitted as CSV or JSON.
//!
//! ```
//! use noc_flow::{flow_matrix, solver, topology};
//! use noc_flow::{InjectionSpec, Protocol, Topology};
//!
//! let mesh = Topology::mesh(2, 2).unwrap();
//! let corner = InjectionSpec::new(&mesh, 0).unwrap();
//! let profile = topology::level_profile(&mesh, &corner).unwrap();
//! let fm = flow_matrix::build(Protocol::CutThrough, &profile, 0.5).unwrap();
//! let alloc = solver::solve(&fm).unwrap();
//! assert!((1.0 / alloc.fractions[0] - 3.5).abs() < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod flow_matrix;
pub mod format;
mod linalg;
pub mod metrics;
pub mod report;
pub mod solver;
pub mod timeline;
pub mod topology;

pub use error::{Error, Result};
pub use flow_matrix::{FlowMatrix, Protocol, Scenario};
pub use metrics::Metrics;
pub use report::{SigmaGrid, SweepMode, SweepRow};
pub use solver::{FeasibilityReport, LevelAllocation};
pub use timeline::{GanttRecord, Timeline};
pub use topology::{
    DistributionTree, InjectionClass, InjectionSpec, LevelProfile, NodeId, Topology,
};
