//! Flow matrix construction.
//!
//! One unknown per hop level: every node at distance `d` receives the same
//! fraction `alpha_d`. Row 0 is always the normalization row (the level
//! counts), the remaining rows equate each level's finish time with the
//! root's. The right-hand side is `(1, 0, .., 0)`.
//!
//! With communication-to-computation ratio `s`:
//!
//! ```text
//! cut-through            modified store-and-forward
//! [ c0  c1  c2  c3 ]     [ c0   c1     c2     c3   ]
//! [ 1   -1  0   0  ]     [ 1  -(s+1)   0      0    ]
//! [ 0  s-1  1   0  ]     [ 1   -s   -(s+1)    0    ]
//! [ 0  s-1  s   1  ]     [ 1   -s     -s   -(s+1)  ]
//! ```
//!
//! The cut-through pattern is applied to every profile, including tori,
//! hypercubes and non-corner mesh injections where a level may be wider
//! than the one feeding it. That assumes each level can be fed in parallel
//! at full link rate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::fmt_plain;
use crate::linalg;
use crate::topology::LevelProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Protocol {
    /// Virtual cut-through: a node relays the head of a message before the
    /// tail arrives, and one-hop neighbours start computing at `t = 0`.
    #[serde(rename = "vct")]
    CutThrough,
    /// Modified store-and-forward: a node computes only after its whole
    /// share arrived, but relays other nodes' shares with zero delay.
    #[serde(rename = "snf")]
    StoreAndForward,
}

impl Protocol {
    pub fn as_str(&self) -> &'static str {
        match self {
            Protocol::CutThrough => "vct",
            Protocol::StoreAndForward => "snf",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vct" | "cut-through" => Ok(Protocol::CutThrough),
            "snf" | "store-and-forward" => Ok(Protocol::StoreAndForward),
            other => Err(Error::InvalidScenario(format!("unknown protocol `{other}`"))),
        }
    }
}

/// Homogeneous processor and link constants.
///
/// `omega * tcp` is the time one processor needs for the whole load and
/// `z * tcm` the time one link needs to carry it. `sigma` is their ratio,
/// computed once at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub omega: f64,
    pub z: f64,
    pub tcp: f64,
    pub tcm: f64,
    sigma: f64,
}

impl Scenario {
    pub fn new(omega: f64, z: f64, tcp: f64, tcm: f64) -> Result<Self> {
        let check = |name: &str, v: f64, allow_zero: bool| {
            if !v.is_finite() || v < 0.0 || (!allow_zero && v == 0.0) {
                let bound = if allow_zero { ">= 0" } else { "> 0" };
                return Err(Error::InvalidScenario(format!(
                    "{name} must be finite and {bound}, got {v}"
                )));
            }
            Ok(())
        };
        check("omega", omega, false)?;
        check("z", z, true)?;
        check("tcp", tcp, false)?;
        check("tcm", tcm, false)?;
        let sigma = z * tcm / (omega * tcp);
        check("sigma", sigma, true)?;
        Ok(Scenario { omega, z, tcp, tcm, sigma })
    }

    /// Unit compute constants with `z = sigma`.
    pub fn from_sigma(sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(Scenario { omega: 1.0, z: sigma, tcp: 1.0, tcm: 1.0, sigma })
    }

    /// Keeps `omega`, `tcp` and `tcm` and picks `z` so the ratio is `sigma`.
    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(Scenario {
            z: sigma * self.omega * self.tcp / self.tcm,
            sigma,
            ..*self
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Time to compute the whole load on one processor.
    pub fn compute_time(&self) -> f64 {
        self.omega * self.tcp
    }

    /// Time to move the whole load across one link.
    pub fn transfer_time(&self) -> f64 {
        self.z * self.tcm
    }

    /// `0 < sigma < 1`, the regime the row patterns were derived for.
    pub fn in_regime(&self) -> bool {
        sigma_in_regime(self.sigma)
    }
}

pub fn sigma_in_regime(sigma: f64) -> bool {
    sigma > 0.0 && sigma < 1.0
}

pub(crate) fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidScenario(format!(
            "sigma must be finite and >= 0, got {sigma}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowMatrix {
    k: usize,
    entries: Vec<f64>,
    rhs: Vec<f64>,
    protocol: Protocol,
    sigma: f64,
    profile: LevelProfile,
}

pub fn build(protocol: Protocol, profile: &LevelProfile, sigma: f64) -> Result<FlowMatrix> {
    match protocol {
        Protocol::CutThrough => build_vct(profile, sigma),
        Protocol::StoreAndForward => build_snf(profile, sigma),
    }
}

/// Cut-through rows: level `d >= 2` starts once levels `1..d` have been
/// streamed, `s * (a_1 + .. + a_{d-1}) + a_d = a_1`.
pub fn build_vct(profile: &LevelProfile, sigma: f64) -> Result<FlowMatrix> {
    FlowMatrix::with_rows(Protocol::CutThrough, profile, sigma, |d, j| {
        match (d, j) {
            (1, 0) => 1.0,
            (1, 1) => -1.0,
            (_, 1) if d >= 2 => sigma - 1.0,
            _ if j == d => 1.0,
            _ if j >= 2 && j < d => sigma,
            _ => 0.0,
        }
    })
}

/// Store-and-forward rows: level `d >= 1` starts once levels `1..=d` have
/// been streamed, `a_0 = s * (a_1 + .. + a_{d-1}) + (s + 1) * a_d`.
pub fn build_snf(profile: &LevelProfile, sigma: f64) -> Result<FlowMatrix> {
    FlowMatrix::with_rows(Protocol::StoreAndForward, profile, sigma, |d, j| {
        if j == 0 {
            1.0
        } else if j < d {
            -sigma
        } else if j == d {
            -(sigma + 1.0)
        } else {
            0.0
        }
    })
}

impl FlowMatrix {
    fn with_rows(
        protocol: Protocol,
        profile: &LevelProfile,
        sigma: f64,
        entry: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        check_sigma(sigma)?;
        let k = profile.levels();
        if k == 0 {
            return Err(Error::InvalidProfile("no levels".into()));
        }
        let mut entries = vec![0.0; k * k];
        for (j, &c) in profile.counts().iter().enumerate() {
            entries[j] = c as f64;
        }
        for d in 1..k {
            for j in 0..k {
                entries[d * k + j] = entry(d, j);
            }
        }
        let mut rhs = vec![0.0; k];
        rhs[0] = 1.0;
        Ok(FlowMatrix {
            k,
            entries,
            rhs,
            protocol,
            sigma,
            profile: profile.clone(),
        })
    }

    pub fn levels(&self) -> usize {
        self.k
    }

    /// Row-major `k x k` coefficients.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.k + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.k..(row + 1) * self.k]
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn protocol(&self) -> Protocol {
        self.protocol
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn profile(&self) -> &LevelProfile {
        &self.profile
    }

    /// Largest coefficient magnitude, the scale for pivot tolerances.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `det A` by partial-pivoting elimination.
    pub fn determinant(&self) -> f64 {
        linalg::determinant(&self.entries, self.k)
    }

    /// `det A*_i`: the determinant with column `i` replaced by the
    /// right-hand side.
    pub fn replaced_determinant(&self, column: usize) -> Result<f64> {
        Ok(linalg::determinant(&self.replaced(column)?, self.k))
    }

    pub(crate) fn replaced(&self, column: usize) -> Result<Vec<f64>> {
        if column >= self.k {
            return Err(Error::LevelOutOfRange {
                index: column,
                levels: self.k,
            });
        }
        let mut m = self.entries.clone();
        for (r, b) in self.rhs.iter().enumerate() {
            m[r * self.k + column] = *b;
        }
        Ok(m)
    }

    /// Plain-text dump: one row per line, entries as shortest round-trip
    /// decimals separated by single spaces.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for r in 0..self.k {
            let row: Vec<String> = self.row(r).iter().map(|&v| fmt_plain(v)).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}
