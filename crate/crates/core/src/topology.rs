//! Homogeneous interconnects and hop-distance structure.
//!
//! Nodes are identified by a dense integer index. Meshes and tori use
//! row-major numbering (`id = row * cols + col`), so the `(0, 0)` corner is
//! node 0. Hypercube node `id` has coordinate bit `i` equal to bit `i` of
//! `id`.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Upper bound on node count, keeps BFS allocations sane.
pub const MAX_NODES: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    /// `rows x cols` grid without wraparound links.
    Mesh { rows: usize, cols: usize },
    /// `rows x cols` grid with wraparound links on both axes.
    Torus { rows: usize, cols: usize },
    /// Binary `dim`-cube with `2^dim` nodes.
    Hypercube { dim: u32 },
}

impl Topology {
    pub fn mesh(rows: usize, cols: usize) -> Result<Self> {
        check_grid("mesh", rows, cols)?;
        Ok(Topology::Mesh { rows, cols })
    }

    pub fn torus(rows: usize, cols: usize) -> Result<Self> {
        check_grid("torus", rows, cols)?;
        Ok(Topology::Torus { rows, cols })
    }

    pub fn hypercube(dim: u32) -> Result<Self> {
        if dim as usize >= usize::BITS as usize || (1usize << dim) > MAX_NODES {
            return Err(Error::InvalidTopology(format!(
                "hypercube dimension {dim} exceeds the supported size"
            )));
        }
        Ok(Topology::Hypercube { dim })
    }

    pub fn node_count(&self) -> usize {
        match *self {
            Topology::Mesh { rows, cols } | Topology::Torus { rows, cols } => rows * cols,
            Topology::Hypercube { dim } => 1 << dim,
        }
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node < self.node_count()
    }

    /// Coordinates of `node`: `[row, col]` for grids, `[bit_0, .., bit_{q-1}]`
    /// for hypercubes.
    pub fn coords(&self, node: NodeId) -> Vec<usize> {
        match *self {
            Topology::Mesh { cols, .. } | Topology::Torus { cols, .. } => {
                vec![node / cols, node % cols]
            }
            Topology::Hypercube { dim } => (0..dim).map(|b| (node >> b) & 1).collect(),
        }
    }

    /// Inverse of [`Topology::coords`].
    pub fn node_at(&self, coords: &[usize]) -> Result<NodeId> {
        let invalid = || Error::InvalidNode {
            node: format!("{coords:?}"),
            topology: self.to_string(),
        };
        match *self {
            Topology::Mesh { rows, cols } | Topology::Torus { rows, cols } => match coords {
                &[r, c] if r < rows && c < cols => Ok(r * cols + c),
                _ => Err(invalid()),
            },
            Topology::Hypercube { dim } => {
                if coords.len() != dim as usize || coords.iter().any(|&b| b > 1) {
                    return Err(invalid());
                }
                Ok(coords.iter().enumerate().map(|(i, &b)| b << i).sum())
            }
        }
    }

    /// Distinct neighbours of `node` in ascending id order. Self loops and
    /// parallel wraparound links (tori with a side of 1 or 2) are collapsed.
    pub fn neighbors(&self, node: NodeId) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(4);
        match *self {
            Topology::Mesh { rows, cols } => {
                let (r, c) = (node / cols, node % cols);
                if r > 0 {
                    out.push(node - cols);
                }
                if r + 1 < rows {
                    out.push(node + cols);
                }
                if c > 0 {
                    out.push(node - 1);
                }
                if c + 1 < cols {
                    out.push(node + 1);
                }
            }
            Topology::Torus { rows, cols } => {
                let (r, c) = (node / cols, node % cols);
                out.push(((r + rows - 1) % rows) * cols + c);
                out.push(((r + 1) % rows) * cols + c);
                out.push(r * cols + (c + cols - 1) % cols);
                out.push(r * cols + (c + 1) % cols);
            }
            Topology::Hypercube { dim } => out.extend((0..dim).map(|b| node ^ (1 << b))),
        }
        out.retain(|&n| n != node);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Short identifier used in output file names, e.g. `mesh2x2`.
    pub fn slug(&self) -> String {
        match *self {
            Topology::Mesh { rows, cols } => format!("mesh{rows}x{cols}"),
            Topology::Torus { rows, cols } => format!("torus{rows}x{cols}"),
            Topology::Hypercube { dim } => format!("hypercube{dim}"),
        }
    }
}

fn check_grid(kind: &str, rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidTopology(format!(
            "{kind} dimensions must be positive, got {rows}x{cols}"
        )));
    }
    match rows.checked_mul(cols) {
        Some(n) if n <= MAX_NODES => Ok(()),
        _ => Err(Error::InvalidTopology(format!(
            "{kind} {rows}x{cols} exceeds the supported size"
        ))),
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Topology::Mesh { rows, cols } => write!(f, "mesh {rows}x{cols}"),
            Topology::Torus { rows, cols } => write!(f, "torus {rows}x{cols}"),
            Topology::Hypercube { dim } => write!(f, "hypercube q={dim}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InjectionClass {
    Corner,
    Boundary,
    Interior,
    /// Vertex-transitive networks, where every node looks the same.
    Any,
}

impl InjectionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            InjectionClass::Corner => "corner",
            InjectionClass::Boundary => "boundary",
            InjectionClass::Interior => "interior",
            InjectionClass::Any => "any",
        }
    }
}

impl fmt::Display for InjectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The node where the whole load enters the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InjectionSpec {
    pub node: NodeId,
    pub class: InjectionClass,
}

impl InjectionSpec {
    pub fn new(topology: &Topology, node: NodeId) -> Result<Self> {
        if !topology.contains(node) {
            return Err(Error::InvalidNode {
                node: node.to_string(),
                topology: topology.to_string(),
            });
        }
        let class = match *topology {
            Topology::Mesh { rows, cols } => {
                let (r, c) = (node / cols, node % cols);
                let row_edge = r == 0 || r + 1 == rows;
                let col_edge = c == 0 || c + 1 == cols;
                match (row_edge, col_edge) {
                    (true, true) => InjectionClass::Corner,
                    (true, false) | (false, true) => InjectionClass::Boundary,
                    (false, false) => InjectionClass::Interior,
                }
            }
            Topology::Torus { .. } | Topology::Hypercube { .. } => InjectionClass::Any,
        };
        Ok(InjectionSpec { node, class })
    }

    pub fn at(topology: &Topology, coords: &[usize]) -> Result<Self> {
        Self::new(topology, topology.node_at(coords)?)
    }

    /// Whether this is a corner injection on a mesh, the case the flow
    /// matrix row patterns were derived for. Everything else is an
    /// extension through the level profile.
    pub fn is_mesh_corner(&self, topology: &Topology) -> bool {
        matches!(topology, Topology::Mesh { .. }) && self.class == InjectionClass::Corner
    }
}

/// Node counts per hop distance from the injection node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelProfile {
    counts: Vec<usize>,
    distance: Vec<usize>,
}

impl LevelProfile {
    /// Profile over a synthetic node set numbered level by level. Used when
    /// only the counts matter, e.g. to build a flow matrix directly.
    pub fn from_counts(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidProfile("no levels".into()));
        }
        if counts[0] != 1 {
            return Err(Error::InvalidProfile(format!(
                "level 0 must hold exactly the injection node, got {}",
                counts[0]
            )));
        }
        if let Some(d) = counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidProfile(format!("level {d} is empty")));
        }
        let distance = counts
            .iter()
            .enumerate()
            .flat_map(|(d, &c)| std::iter::repeat(d).take(c))
            .collect();
        Ok(LevelProfile { counts, distance })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of levels `k`.
    pub fn levels(&self) -> usize {
        self.counts.len()
    }

    pub fn node_count(&self) -> usize {
        self.distance.len()
    }

    /// Hop distance of `node` from the injection node.
    pub fn distance(&self, node: NodeId) -> Option<usize> {
        self.distance.get(node).copied()
    }

    pub fn distance_map(&self) -> &[usize] {
        &self.distance
    }

    /// Smallest node id on each level.
    pub fn representatives(&self) -> Vec<NodeId> {
        let mut reps = vec![usize::MAX; self.levels()];
        for (node, &d) in self.distance.iter().enumerate() {
            if reps[d] == usize::MAX {
                reps[d] = node;
            }
        }
        reps
    }

    /// The first `levels` levels as a standalone (synthetic) profile.
    pub fn prefix(&self, levels: usize) -> Result<Self> {
        let levels = levels.min(self.levels());
        Self::from_counts(self.counts[..levels].to_vec())
    }
}

/// BFS level sizes from the injection node.
pub fn level_profile(topology: &Topology, injection: &InjectionSpec) -> Result<LevelProfile> {
    let distance = bfs_distances(topology, injection.node)?;
    let levels = distance.iter().max().map_or(0, |&d| d + 1);
    let mut counts = vec![0usize; levels];
    for &d in &distance {
        counts[d] += 1;
    }
    Ok(LevelProfile { counts, distance })
}

fn bfs_distances(topology: &Topology, source: NodeId) -> Result<Vec<usize>> {
    if !topology.contains(source) {
        return Err(Error::InvalidNode {
            node: source.to_string(),
            topology: topology.to_string(),
        });
    }
    let mut distance = vec![usize::MAX; topology.node_count()];
    let mut queue = VecDeque::new();
    distance[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for v in topology.neighbors(u) {
            if distance[v] == usize::MAX {
                distance[v] = distance[u] + 1;
                queue.push_back(v);
            }
        }
    }
    // all supported topologies are connected
    debug_assert!(distance.iter().all(|&d| d != usize::MAX));
    Ok(distance)
}

/// Shortest-path tree rooted at the injection node. Each node's parent is
/// the lexicographically smallest (by coordinates) neighbour one hop closer
/// to the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionTree {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
}

impl DistributionTree {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.parent.get(node).copied().flatten()
    }

    pub fn children(&self, node: NodeId) -> &[NodeId] {
        self.children.get(node).map_or(&[], Vec::as_slice)
    }

    pub fn parents(&self) -> &[Option<NodeId>] {
        &self.parent
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Number of tree edges.
    pub fn edge_count(&self) -> usize {
        self.parent.iter().flatten().count()
    }
}

pub fn distribution_tree(
    topology: &Topology,
    injection: &InjectionSpec,
) -> Result<DistributionTree> {
    let distance = bfs_distances(topology, injection.node)?;
    let n = topology.node_count();
    let mut parent = vec![None; n];
    let mut children = vec![Vec::new(); n];
    for node in 0..n {
        if node == injection.node {
            continue;
        }
        let p = topology
            .neighbors(node)
            .into_iter()
            .filter(|&v| distance[v] + 1 == distance[node])
            .min_by_key(|&v| topology.coords(v))
            .expect("BFS guarantees a predecessor");
        parent[node] = Some(p);
        children[p].push(node);
    }
    Ok(DistributionTree {
        root: injection.node,
        parent,
        children,
    })
}
