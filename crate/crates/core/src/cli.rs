//! Command-line front end.
//!
//! Every subcommand reads a TOML scenario file:
//!
//! ```toml
//! protocol = "vct"          # or "snf"
//! sigma = 0.5               # or a [constants] table, not both
//! injection = [0, 0]        # optional, defaults to node 0
//!
//! [topology]
//! kind = "mesh"             # "mesh", "torus" or "hypercube"
//! dims = [2, 2]             # [rows, cols], or [q] for a hypercube
//!
//! [constants]               # omega, z, tcp, tcm; sigma is derived
//! omega = 1.0
//! z = 0.5
//! tcp = 1.0
//! tcm = 1.0
//!
//! [options]                 # all optional
//! truncate = false
//! pivot_tol = 1e-12
//! simultaneous_tol = 1e-9
//! load = 1.0
//! ```
//!
//! Hypercube injections list coordinate bits, `[bit_0, .., bit_{q-1}]`.
//! Unknown keys are rejected.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 infeasible
//! allocation without truncation, 4 failed verification.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::Error;
use crate::flow_matrix::{self, FlowMatrix, Protocol, Scenario};
use crate::format::fmt_sig;
use crate::metrics::{compute_metrics, Metrics};
use crate::report::{self, SigmaGrid, SweepMode};
use crate::solver::{self, FeasibilityReport, LevelAllocation};
use crate::timeline;
use crate::topology::{self, InjectionSpec, LevelProfile, Topology};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Environment variable naming the default directory for sweep output.
pub const OUT_DIR_ENV: &str = "NOC_FLOW_OUT_DIR";

/// Default relative tolerance for the simultaneous-finish check.
pub const SIMULTANEOUS_TOL: f64 = 1e-9;
/// Relative tolerance for Cramer and determinant cross-checks.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "noc-flow", version, about = "Optimal divisible load distribution on mesh, torus and hypercube interconnects")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print per-level fractions, metrics and feasibility
    Solve {
        #[command(flatten)]
        common: Common,
        /// Also print the flow matrix
        #[arg(long)]
        matrix: bool,
    },
    /// Sweep sigma and write a CSV or JSON table
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Sigma grid as start:stop:step
        #[arg(long, default_value = "0.01:0.99:0.01")]
        grid: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file; defaults to a generated name in $NOC_FLOW_OUT_DIR, else the working directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the solve and every cross-check; exit 4 if any fails
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Write the per-node Gantt table as CSV
    Gantt {
        #[command(flatten)]
        common: Common,
        /// Output file; defaults to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the hop-level profile and injection class
    Profile {
        /// Scenario file
        file: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file
    pub file: PathBuf,
    /// Drop the deepest levels until the allocation is feasible
    #[arg(long)]
    pub truncate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub topology: TopologySection,
    pub protocol: Protocol,
    pub injection: Option<Vec<usize>>,
    pub sigma: Option<f64>,
    pub constants: Option<Constants>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySection {
    pub kind: TopologyKind,
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Mesh,
    Torus,
    Hypercube,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub omega: f64,
    pub z: f64,
    pub tcp: f64,
    pub tcm: f64,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub truncate: bool,
    pub pivot_tol: Option<f64>,
    pub simultaneous_tol: Option<f64>,
    pub load: Option<f64>,
}

/// A validated scenario file.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub topology: Topology,
    pub injection: InjectionSpec,
    pub protocol: Protocol,
    pub scenario: Scenario,
    /// Sigma came from the constants rather than being given directly.
    pub sigma_derived: bool,
    pub truncate: bool,
    pub pivot_tol: f64,
    pub simultaneous_tol: f64,
    pub load: f64,
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Infeasible(String),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) => CliError::Io(e),
            Error::Singular { .. } => CliError::Infeasible(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl ScenarioFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Invalid(e.to_string().trim_end().to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Invalid(m) => CliError::Invalid(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> CliResult<Experiment> {
        let dims = &self.topology.dims;
        let topology = match (self.topology.kind, dims.as_slice()) {
            (TopologyKind::Mesh, &[r, c]) => Topology::mesh(r, c)?,
            (TopologyKind::Torus, &[r, c]) => Topology::torus(r, c)?,
            (TopologyKind::Hypercube, &[q]) => Topology::hypercube(q.try_into().map_err(
                |_| CliError::Invalid(format!("topology.dims: hypercube dimension {q} too large")),
            )?)?,
            (kind, _) => {
                let want = if kind == TopologyKind::Hypercube { 1 } else { 2 };
                return Err(CliError::Invalid(format!(
                    "topology.dims: expected {want} value(s) for {kind:?}, got {dims:?}"
                )));
            }
        };
        let injection = match &self.injection {
            Some(coords) => InjectionSpec::at(&topology, coords)
                .map_err(|e| CliError::Invalid(format!("injection: {e}")))?,
            None => InjectionSpec::new(&topology, 0)?,
        };
        let (scenario, sigma_derived) = match (self.sigma, self.constants) {
            (Some(s), None) => (Scenario::from_sigma(s)?, false),
            (None, Some(c)) => (Scenario::new(c.omega, c.z, c.tcp, c.tcm)?, true),
            (Some(_), Some(_)) => {
                return Err(CliError::Invalid(
                    "give either `sigma` or a [constants] table, not both".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Invalid(
                    "missing `sigma` or a [constants] table".into(),
                ))
            }
        };
        let opts = self.options;
        let positive = |name: &str, v: Option<f64>, default: f64| match v {
            None => Ok(default),
            Some(v) if v.is_finite() && v > 0.0 => Ok(v),
            Some(v) => Err(CliError::Invalid(format!("options.{name} must be > 0, got {v}"))),
        };
        Ok(Experiment {
            topology,
            injection,
            protocol: self.protocol,
            scenario,
            sigma_derived,
            truncate: opts.truncate,
            pivot_tol: positive("pivot_tol", opts.pivot_tol, solver::PIVOT_TOL)?,
            simultaneous_tol: positive(
                "simultaneous_tol",
                opts.simultaneous_tol,
                SIMULTANEOUS_TOL,
            )?,
            load: positive("load", opts.load, 1.0)?,
        })
    }
}

/// Result of running an experiment through the solver.
#[derive(Debug, Clone)]
pub struct Solved {
    pub profile: LevelProfile,
    /// The system actually solved; smaller than the profile when truncated.
    pub matrix: FlowMatrix,
    pub allocation: LevelAllocation,
    pub levels_used: usize,
    pub feasibility: FeasibilityReport,
    pub metrics: Option<Metrics>,
}

impl Experiment {
    pub fn solve(&self) -> CliResult<Solved> {
        let profile = topology::level_profile(&self.topology, &self.injection)?;
        let sigma = self.scenario.sigma();
        let (matrix, allocation, levels_used) = if self.truncate {
            let (alloc, used) = solver::solve_with_truncation(&profile, sigma, self.protocol)?;
            let fm = flow_matrix::build(self.protocol, &profile.prefix(used)?, sigma)?;
            (fm, alloc, used)
        } else {
            let fm = flow_matrix::build(self.protocol, &profile, sigma)?;
            let alloc = solver::solve_with_tolerance(&fm, self.pivot_tol)?;
            (fm, alloc, profile.levels())
        };
        let feasibility = solver::check_feasibility(&allocation, &matrix);
        let metrics = compute_metrics(&allocation, &self.scenario, &matrix)
            .ok()
            .map(|m| m.with_load(self.load));
        Ok(Solved {
            profile,
            matrix,
            allocation,
            levels_used,
            feasibility,
            metrics,
        })
    }

    /// Is this outside the mesh-corner case the row patterns come from?
    pub fn is_extension(&self) -> bool {
        !self.injection.is_mesh_corner(&self.topology)
    }

    fn write_header(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(
            out,
            "topology     {} ({} nodes)",
            self.topology,
            self.topology.node_count()
        )?;
        writeln!(
            out,
            "injection    node {} {:?} ({})",
            self.injection.node,
            self.topology.coords(self.injection.node),
            self.injection.class
        )?;
        writeln!(out, "protocol     {}", self.protocol)?;
        let s = &self.scenario;
        if self.sigma_derived {
            writeln!(
                out,
                "sigma        {} (derived from omega={} z={} tcp={} tcm={})",
                fmt_sig(s.sigma()),
                fmt_sig(s.omega),
                fmt_sig(s.z),
                fmt_sig(s.tcp),
                fmt_sig(s.tcm)
            )?;
        } else {
            writeln!(out, "sigma        {}", fmt_sig(s.sigma()))?;
        }
        if !s.in_regime() {
            writeln!(out, "note: sigma is outside the nominal regime 0 < sigma < 1")?;
        }
        if self.is_extension() {
            writeln!(
                out,
                "note: only mesh corner injection matches the derived row patterns; \
                 this result extends them through the level profile"
            )?;
        }
        Ok(())
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_INVALID
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn experiment(common: &Common) -> CliResult<Experiment> {
    let mut exp = ScenarioFile::load(&common.file)?.validate()?;
    exp.truncate |= common.truncate;
    Ok(exp)
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Solve { common, matrix } => cmd_solve(&experiment(&common)?, matrix, out),
        Command::Sweep {
            common,
            grid,
            format,
            out: path,
        } => {
            let grid: SigmaGrid = grid.parse()?;
            cmd_sweep(&experiment(&common)?, &grid, format, path, out)
        }
        Command::Verify { common } => cmd_verify(&experiment(&common)?, out),
        Command::Gantt { common, out: path } => cmd_gantt(&experiment(&common)?, path, out),
        Command::Profile { file } => {
            cmd_profile(&ScenarioFile::load(&file)?.validate()?, out)
        }
    }
}

fn infeasible_error(solved: &Solved) -> CliError {
    let detail: Vec<String> = solved
        .feasibility
        .violations
        .iter()
        .map(|v| format!("level {} = {}", v.level, fmt_sig(v.value)))
        .collect();
    CliError::Infeasible(format!(
        "{}; rerun with --truncate to drop unprofitable levels",
        detail.join(", ")
    ))
}

pub fn cmd_solve(exp: &Experiment, show_matrix: bool, out: &mut dyn Write) -> CliResult<i32> {
    let solved = exp.solve()?;
    exp.write_header(out)?;
    writeln!(
        out,
        "levels       {} ({} used)",
        solved.profile.levels(),
        solved.levels_used
    )?;
    writeln!(out)?;
    writeln!(out, "level  nodes  representative  fraction")?;
    let reps = solved.profile.representatives();
    for (d, (&c, &a)) in solved
        .profile
        .counts()
        .iter()
        .zip(&solved.allocation.fractions)
        .enumerate()
    {
        writeln!(out, "{d:<5}  {c:<5}  {:<14}  {}", format!("P{}", reps[d]), fmt_sig(a))?;
    }
    writeln!(out)?;
    if let Some(m) = &solved.metrics {
        writeln!(out, "makespan     {}", fmt_sig(m.makespan))?;
        writeln!(out, "w_eq         {}", fmt_sig(m.w_eq))?;
        writeln!(out, "speedup      {}", fmt_sig(m.speedup))?;
        writeln!(out, "speedup_det  {}", fmt_sig(m.speedup_det))?;
    } else {
        writeln!(out, "metrics      undefined (root fraction not positive)")?;
    }
    writeln!(out, "residual     {:e}", solved.allocation.residual_norm)?;
    writeln!(
        out,
        "feasible     {}",
        if solved.feasibility.feasible { "yes" } else { "no" }
    )?;
    for v in &solved.feasibility.violations {
        writeln!(out, "violation    level {} = {}", v.level, fmt_sig(v.value))?;
    }
    if show_matrix {
        writeln!(out)?;
        write!(out, "{}", solved.matrix.dump())?;
    }
    if !solved.feasibility.feasible {
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(EXIT_OK)
}

pub fn cmd_sweep(
    exp: &Experiment,
    grid: &SigmaGrid,
    format: Format,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let mode = if exp.truncate {
        SweepMode::Truncate
    } else {
        SweepMode::Flag
    };
    let sweep = report::sweep_sigma(
        &exp.topology,
        &exp.injection,
        exp.protocol,
        grid,
        &exp.scenario,
        mode,
    )?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let path = path.unwrap_or_else(|| {
        let dir = std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from);
        dir.join(report::sweep_file_name(
            &exp.topology,
            &exp.injection,
            exp.protocol,
            ext,
        ))
    });
    let file = BufWriter::new(File::create(&path)?);
    match format {
        Format::Csv => report::emit_csv(&sweep, file)?,
        Format::Json => report::emit_json(&sweep, file)?,
    }
    let flagged = sweep.rows.iter().filter(|r| !r.feasible).count();
    writeln!(
        out,
        "wrote {} rows to {} ({} infeasible)",
        sweep.rows.len(),
        path.display(),
        flagged
    )?;
    Ok(EXIT_OK)
}

struct Check {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn cmd_verify(exp: &Experiment, out: &mut dyn Write) -> CliResult<i32> {
    let solved = exp.solve()?;
    let fm = &solved.matrix;
    let used = solved.levels_used;
    let mut checks = Vec::new();

    let k = fm.levels() as f64;
    checks.push(Check {
        name: "residual",
        ok: solved.allocation.residual_norm <= solver::RESIDUAL_TOL * k,
        detail: format!("max|Ax-b| = {:e}", solved.allocation.residual_norm),
    });

    let total = solved.allocation.total_load(&solved.profile);
    checks.push(Check {
        name: "normalization",
        ok: (total - 1.0).abs() <= 1e-12,
        detail: format!("sum c_d a_d - 1 = {:e}", total - 1.0),
    });

    let rank = solver::rank(fm);
    checks.push(Check {
        name: "full-rank",
        ok: rank == used && fm.determinant() != 0.0,
        detail: format!("rank {rank} of {used}, det A = {}", fmt_sig(fm.determinant())),
    });

    let mut worst = 0.0f64;
    let mut cramer_ok = true;
    for level in 0..used {
        match solver::cramer_fraction(fm, level) {
            Ok(c) => {
                let a = solved.allocation.fractions[level];
                let gap = relative_gap(c, a);
                worst = worst.max(gap);
                cramer_ok &= (c - a).abs() <= CROSS_CHECK_TOL * a.abs().max(c.abs()) + 1e-15;
            }
            Err(_) => cramer_ok = false,
        }
    }
    checks.push(Check {
        name: "cramer",
        ok: cramer_ok,
        detail: format!("max relative gap {worst:e}"),
    });

    match &solved.metrics {
        Some(m) => {
            checks.push(Check {
                name: "speedup-det",
                ok: (m.speedup - m.speedup_det).abs() <= CROSS_CHECK_TOL * m.speedup,
                detail: format!(
                    "1/a_0 = {}, |det A|/|det A*_0| = {}",
                    fmt_sig(m.speedup),
                    fmt_sig(m.speedup_det)
                ),
            });
        }
        None => checks.push(Check {
            name: "speedup-det",
            ok: false,
            detail: "root fraction not positive".into(),
        }),
    }

    let tl = timeline::evaluate(exp.protocol, &solved.allocation, &solved.profile, &exp.scenario)?;
    let sim = timeline::verify_simultaneous(&tl, exp.simultaneous_tol);
    checks.push(Check {
        name: "simultaneous-finish",
        ok: sim.ok,
        detail: format!(
            "max deviation {:e} (tol {:e})",
            sim.max_deviation, exp.simultaneous_tol
        ),
    });

    if let Some(m) = &solved.metrics {
        let makespan = m.makespan / exp.load;
        checks.push(Check {
            name: "makespan",
            ok: (tl.makespan - makespan).abs() <= 1e-12 * makespan.max(1.0),
            detail: format!(
                "timeline {} vs metrics {}",
                fmt_sig(tl.makespan),
                fmt_sig(makespan)
            ),
        });
    }

    exp.write_header(out)?;
    for c in &checks {
        writeln!(
            out,
            "{}  {:<20} {}",
            if c.ok { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        )?;
    }
    if !solved.feasibility.feasible {
        return Err(infeasible_error(&solved));
    }
    if checks.iter().all(|c| c.ok) {
        writeln!(out, "all checks passed")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "verification failed")?;
        Ok(EXIT_VERIFY)
    }
}

pub fn cmd_gantt(exp: &Experiment, path: Option<PathBuf>, out: &mut dyn Write) -> CliResult<i32> {
    let solved = exp.solve()?;
    if !solved.feasibility.feasible {
        return Err(infeasible_error(&solved));
    }
    let tl = timeline::evaluate(exp.protocol, &solved.allocation, &solved.profile, &exp.scenario)?;
    let tree = topology::distribution_tree(&exp.topology, &exp.injection)?;
    let records = timeline::expand_gantt(&tl, &tree, &solved.profile)?;
    match path {
        Some(p) => {
            let mut file = BufWriter::new(File::create(&p)?);
            timeline::write_gantt_csv(&records, &mut file)?;
            file.flush()?;
            writeln!(out, "wrote {} records to {}", records.len(), p.display())?;
        }
        None => timeline::write_gantt_csv(&records, out)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_profile(exp: &Experiment, out: &mut dyn Write) -> CliResult<i32> {
    let profile = topology::level_profile(&exp.topology, &exp.injection)?;
    writeln!(
        out,
        "topology     {} ({} nodes)",
        exp.topology,
        exp.topology.node_count()
    )?;
    writeln!(
        out,
        "injection    node {} {:?} ({})",
        exp.injection.node,
        exp.topology.coords(exp.injection.node),
        exp.injection.class
    )?;
    writeln!(out, "levels       {}", profile.levels())?;
    let counts: Vec<String> = profile.counts().iter().map(usize::to_string).collect();
    writeln!(out, "counts       {}", counts.join(" "))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MESH_2X2: &str = r#"
protocol = "vct"
sigma = 0.5

[topology]
kind = "mesh"
dims = [2, 2]
"#;

    #[test]
    fn parses_minimal_file() {
        let exp = ScenarioFile::parse(MESH_2X2).unwrap().validate().unwrap();
        assert_eq!(exp.topology, Topology::mesh(2, 2).unwrap());
        assert_eq!(exp.injection.node, 0);
        assert_eq!(exp.scenario.sigma(), 0.5);
        assert!(!exp.sigma_derived);
        assert!(!exp.is_extension());
    }

    #[test]
    fn derives_sigma_from_constants() {
        let text = r#"
protocol = "snf"
injection = [1, 1, 0]
[topology]
kind = "hypercube"
dims = [3]
[constants]
omega = 2.0
z = 1.0
tcp = 1.0
tcm = 0.5
"#;
        let exp = ScenarioFile::parse(text).unwrap().validate().unwrap();
        assert_eq!(exp.scenario.sigma(), 0.25);
        assert!(exp.sigma_derived);
        assert_eq!(exp.injection.node, 3);
        assert!(exp.is_extension());
    }

    fn invalid(text: &str) -> String {
        match ScenarioFile::parse(text).and_then(|f| f.validate()) {
            Err(CliError::Invalid(m)) => m,
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_files() {
        let m = invalid(&format!("{MESH_2X2}\ncolour = 3\n"));
        assert!(m.contains("colour"), "{m}");
        let m = invalid(&MESH_2X2.replace("sigma = 0.5", ""));
        assert!(m.contains("sigma"), "{m}");
        let both = format!("{MESH_2X2}\n[constants]\nomega = 1.0\nz = 1.0\ntcp = 1.0\ntcm = 1.0\n");
        assert!(invalid(&both).contains("not both"));
        assert!(invalid(&MESH_2X2.replace("[2, 2]", "[2]")).contains("dims"));
        assert!(invalid(&MESH_2X2.replace("sigma = 0.5", "sigma = -1.0")).contains("sigma"));
        let bad_node = MESH_2X2.replace("sigma = 0.5", "sigma = 0.5\ninjection = [2, 0]");
        assert!(invalid(&bad_node).contains("injection"));
        // toml diagnostics carry the line number
        let m = invalid(&MESH_2X2.replace("dims = [2, 2]", "dims = [2, 2"));
        assert!(m.contains("line"), "{m}");
    }

    #[test]
    fn truncation_switch() {
        let text = MESH_2X2.replace("sigma = 0.5", "sigma = 1.2");
        let exp = ScenarioFile::parse(&text).unwrap().validate().unwrap();
        let mut out = Vec::new();
        assert_eq!(cmd_solve(&exp, false, &mut out).unwrap(), EXIT_INFEASIBLE);
        let exp = Experiment { truncate: true, ..exp };
        let solved = exp.solve().unwrap();
        assert_eq!(solved.levels_used, 2);
        assert!(solved.feasibility.feasible);
        let mut out = Vec::new();
        assert_eq!(cmd_verify(&exp, &mut out).unwrap(), EXIT_OK);
    }
}
