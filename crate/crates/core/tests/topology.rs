mod common;

use common::*;
use noc_flow::topology::{distribution_tree, level_profile};
use noc_flow::{InjectionClass, InjectionSpec, Topology};
use proptest::prelude::*;

fn counts(topology: &Topology, node: usize) -> Vec<usize> {
    let inj = InjectionSpec::new(topology, node).unwrap();
    level_profile(topology, &inj).unwrap().counts().to_vec()
}

#[test]
fn mesh_corner_counts_follow_closed_form() {
    for m in 1..=8usize {
        for n in 1..=8usize {
            let mesh = Topology::mesh(m, n).unwrap();
            let (lo, hi) = (m.min(n), m.max(n));
            let want: Vec<usize> = (0..lo + hi - 1)
                .map(|d| (d + 1).min(lo).min(lo + hi - 1 - d))
                .collect();
            assert_eq!(counts(&mesh, 0), want, "mesh {m}x{n}");
            assert_eq!(brute_force_counts(&mesh, 0), want);
        }
    }
}

#[test]
fn bfs_matches_metric_distance_everywhere() {
    let mut topologies = Vec::new();
    for m in 1..=6 {
        for n in 1..=6 {
            topologies.push(Topology::mesh(m, n).unwrap());
            topologies.push(Topology::torus(m, n).unwrap());
        }
    }
    for q in 0..=6 {
        topologies.push(Topology::hypercube(q).unwrap());
    }
    for t in &topologies {
        for node in 0..t.node_count() {
            let inj = InjectionSpec::new(t, node).unwrap();
            let p = level_profile(t, &inj).unwrap();
            assert_eq!(p.counts(), brute_force_counts(t, node), "{t} from {node}");
            for other in 0..t.node_count() {
                assert_eq!(p.distance(other), Some(hop_distance(t, node, other)));
            }
        }
    }
}

#[test]
fn hypercube_levels_are_binomial() {
    for q in 0..=6u32 {
        let cube = Topology::hypercube(q).unwrap();
        let want: Vec<usize> = (0..=q as u64).map(|d| binomial(q as u64, d) as usize).collect();
        for node in [0, cube.node_count() - 1] {
            assert_eq!(counts(&cube, node), want);
        }
    }
}

#[test]
fn torus_3x3() {
    let t = Topology::torus(3, 3).unwrap();
    for node in 0..9 {
        assert_eq!(counts(&t, node), [1, 4, 4]);
    }
}

#[test]
fn interior_and_boundary_injection() {
    let mesh = Topology::mesh(5, 5).unwrap();
    let centre = InjectionSpec::at(&mesh, &[2, 2]).unwrap();
    assert_eq!(centre.class, InjectionClass::Interior);
    assert_eq!(level_profile(&mesh, &centre).unwrap().counts(), [1, 4, 8, 8, 4]);
    let edge = InjectionSpec::at(&mesh, &[0, 2]).unwrap();
    assert_eq!(edge.class, InjectionClass::Boundary);
    assert_eq!(
        level_profile(&mesh, &edge).unwrap().counts(),
        brute_force_counts(&mesh, 2)
    );
}

#[test]
fn trees_are_shortest_path_spanning_trees() {
    for (t, _) in oracle_instances() {
        for node in 0..t.node_count() {
            let inj = InjectionSpec::new(&t, node).unwrap();
            let p = level_profile(&t, &inj).unwrap();
            let tree = distribution_tree(&t, &inj).unwrap();
            assert_eq!(tree.root(), node);
            assert_eq!(tree.edge_count(), t.node_count() - 1);
            for v in 0..t.node_count() {
                match tree.parent(v) {
                    None => assert_eq!(v, node),
                    Some(u) => {
                        assert!(t.neighbors(v).contains(&u));
                        assert_eq!(p.distance(u).unwrap() + 1, p.distance(v).unwrap());
                        assert!(tree.children(u).contains(&v));
                    }
                }
            }
            assert_eq!(tree, distribution_tree(&t, &inj).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn profiles_cover_every_node(rows in 1usize..12, cols in 1usize..12, torus in any::<bool>(), pick in any::<prop::sample::Index>()) {
        let t = if torus { Topology::torus(rows, cols) } else { Topology::mesh(rows, cols) }.unwrap();
        let node = pick.index(t.node_count());
        let c = counts(&t, node);
        prop_assert_eq!(c[0], 1);
        prop_assert!(c.iter().all(|&x| x >= 1));
        prop_assert_eq!(c.iter().sum::<usize>(), t.node_count());
    }
}
