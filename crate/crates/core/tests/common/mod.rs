//! Test-only oracles, kept independent of the library's solve path.
#![allow(dead_code)]

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use noc_flow::{Protocol, Topology};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().expect("finite rational")
}

/// Flow matrix written out in exact arithmetic straight from the row
/// patterns, without going through the library builders.
pub fn rational_matrix(protocol: Protocol, counts: &[usize], sigma: &Q) -> Vec<Vec<Q>> {
    let k = counts.len();
    let mut a = vec![vec![Q::zero(); k]; k];
    for (j, &c) in counts.iter().enumerate() {
        a[0][j] = Q::from_integer(BigInt::from(c));
    }
    for d in 1..k {
        match protocol {
            Protocol::CutThrough => {
                if d == 1 {
                    a[1][0] = Q::one();
                    a[1][1] = -Q::one();
                } else {
                    a[d][1] = sigma - Q::one();
                    for j in 2..d {
                        a[d][j] = sigma.clone();
                    }
                    a[d][d] = Q::one();
                }
            }
            Protocol::StoreAndForward => {
                a[d][0] = Q::one();
                for j in 1..d {
                    a[d][j] = -sigma.clone();
                }
                a[d][d] = -(sigma + Q::one());
            }
        }
    }
    a
}

/// Exact Gauss-Jordan solve of `a x = e_0`. `None` if singular.
pub fn rational_solve(mut a: Vec<Vec<Q>>) -> Option<Vec<Q>> {
    let k = a.len();
    let mut b: Vec<Q> = (0..k).map(|i| if i == 0 { Q::one() } else { Q::zero() }).collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for j in col..k {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..k {
                    let v = &f * &a[col][j];
                    a[r][j] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some(b)
}

/// Exact determinant by fraction-preserving elimination.
pub fn rational_det(mut a: Vec<Vec<Q>>) -> Q {
    let k = a.len();
    let mut det = Q::one();
    for col in 0..k {
        let Some(pivot) = (col..k).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col].clone();
        for r in col + 1..k {
            let f = &a[r][col] / &a[col][col];
            for j in col..k {
                let v = &f * &a[col][j];
                a[r][j] -= v;
            }
        }
    }
    det
}

pub fn rational_fractions(protocol: Protocol, counts: &[usize], sigma: &Q) -> Vec<Q> {
    rational_solve(rational_matrix(protocol, counts, sigma)).expect("nonsingular")
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// Hop distance from closed-form metrics: Manhattan on meshes, per-axis
/// wraparound on tori, Hamming on hypercubes.
pub fn hop_distance(topology: &Topology, a: usize, b: usize) -> usize {
    match *topology {
        Topology::Mesh { cols, .. } => {
            (a / cols).abs_diff(b / cols) + (a % cols).abs_diff(b % cols)
        }
        Topology::Torus { rows, cols } => {
            let wrap = |x: usize, y: usize, n: usize| {
                let d = x.abs_diff(y);
                d.min(n - d)
            };
            wrap(a / cols, b / cols, rows) + wrap(a % cols, b % cols, cols)
        }
        Topology::Hypercube { .. } => (a ^ b).count_ones() as usize,
    }
}

/// Level counts by enumerating every node's distance.
pub fn brute_force_counts(topology: &Topology, source: usize) -> Vec<usize> {
    let mut counts = Vec::new();
    for node in 0..topology.node_count() {
        let d = hop_distance(topology, source, node);
        if counts.len() <= d {
            counts.resize(d + 1, 0);
        }
        counts[d] += 1;
    }
    counts
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Topologies exercised by the oracle sweeps, with the injection node.
pub fn oracle_instances() -> Vec<(Topology, usize)> {
    let mut out = Vec::new();
    for m in 1..=6 {
        for n in 1..=6 {
            out.push((Topology::mesh(m, n).unwrap(), 0));
        }
    }
    for m in 1..=5 {
        for n in 1..=5 {
            out.push((Topology::torus(m, n).unwrap(), 0));
        }
    }
    for dim in 0..=5 {
        out.push((Topology::hypercube(dim).unwrap(), 0));
    }
    out
}
