mod common;

use common::oracle_instances;
use noc_flow::flow_matrix::build;
use noc_flow::metrics::compute_metrics;
use noc_flow::report::{emit_csv, emit_json, sweep_sigma, SigmaGrid, SweepMode};
use noc_flow::solver::{closed_form_2x2, solve};
use noc_flow::timeline::{evaluate, expand_gantt};
use noc_flow::topology::{distribution_tree, level_profile};
use noc_flow::{InjectionSpec, LevelProfile, Protocol, Scenario, Topology};

const PROTOCOLS: [Protocol; 2] = [Protocol::CutThrough, Protocol::StoreAndForward];

fn sigma_grid(step: f64) -> Vec<f64> {
    let n = (1.0 / step).round() as usize;
    (1..n).map(|i| i as f64 * step).collect()
}

fn profiles() -> Vec<LevelProfile> {
    oracle_instances()
        .into_iter()
        .map(|(t, node)| level_profile(&t, &InjectionSpec::new(&t, node).unwrap()).unwrap())
        .collect()
}

#[test]
fn row_sparsity() {
    for p in profiles() {
        for s in sigma_grid(0.05) {
            let vct = build(Protocol::CutThrough, &p, s).unwrap();
            for d in 2..p.levels() {
                let nz: Vec<usize> = (0..p.levels()).filter(|&j| vct.get(d, j) != 0.0).collect();
                assert_eq!(nz, (1..=d).collect::<Vec<_>>());
            }
            let snf = build(Protocol::StoreAndForward, &p, s).unwrap();
            for d in 1..p.levels() {
                let nz: Vec<usize> = (0..p.levels()).filter(|&j| snf.get(d, j) != 0.0).collect();
                assert_eq!(nz, (0..=d).collect::<Vec<_>>());
            }
            for fm in [&vct, &snf] {
                let counts: Vec<f64> = p.counts().iter().map(|&c| c as f64).collect();
                assert_eq!(fm.row(0), counts.as_slice());
                assert_eq!(fm.rhs()[0], 1.0);
                assert!(fm.rhs()[1..].iter().all(|&b| b == 0.0));
            }
        }
    }
}

#[test]
fn determinants_in_regime() {
    for p in profiles() {
        for s in sigma_grid(0.05) {
            for protocol in PROTOCOLS {
                let fm = build(protocol, &p, s).unwrap();
                assert!(fm.determinant().abs() > 0.0, "{protocol} {:?} {s}", p.counts());
            }
            let vct = build(Protocol::CutThrough, &p, s).unwrap();
            assert!((vct.replaced_determinant(0).unwrap().abs() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn closed_forms_agree_with_solver() {
    let p = LevelProfile::from_counts(vec![1, 2, 1]).unwrap();
    for s in sigma_grid(0.01) {
        for protocol in PROTOCOLS {
            let got = solve(&build(protocol, &p, s).unwrap()).unwrap();
            let want = closed_form_2x2(protocol, s);
            for (g, w) in got.fractions.iter().zip(&want.fractions) {
                assert!((g - w).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn fraction_trends_on_2x2() {
    let p = LevelProfile::from_counts(vec![1, 2, 1]).unwrap();
    let run = |protocol| -> Vec<Vec<f64>> {
        sigma_grid(0.01)
            .into_iter()
            .map(|s| solve(&build(protocol, &p, s).unwrap()).unwrap().fractions)
            .collect()
    };
    let snf = run(Protocol::StoreAndForward);
    for w in snf.windows(2) {
        assert!(w[1][0] >= w[0][0]);
        assert!(w[1][1] <= w[0][1]);
        assert!(w[1][2] <= w[0][2]);
    }
    let vct = run(Protocol::CutThrough);
    for w in vct.windows(2) {
        assert!(w[1][2] <= w[0][2]);
    }
}

#[test]
fn speedup_never_improves_with_slower_links() {
    for p in profiles() {
        for protocol in PROTOCOLS {
            let speedups: Vec<f64> = sigma_grid(0.05)
                .into_iter()
                .map(|s| {
                    let fm = build(protocol, &p, s).unwrap();
                    let a = solve(&fm).unwrap();
                    compute_metrics(&a, &Scenario::from_sigma(s).unwrap(), &fm)
                        .unwrap()
                        .speedup
                })
                .collect();
            for w in speedups.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12), "{protocol} {:?}", p.counts());
            }
        }
    }
}

#[test]
fn timeline_start_structure() {
    for (t, node) in oracle_instances() {
        let inj = InjectionSpec::new(&t, node).unwrap();
        let p = level_profile(&t, &inj).unwrap();
        let tree = distribution_tree(&t, &inj).unwrap();
        for protocol in PROTOCOLS {
            let scenario = Scenario::new(1.5, 1.0, 2.0, 0.6).unwrap();
            let fm = build(protocol, &p, scenario.sigma()).unwrap();
            let a = solve(&fm).unwrap();
            let tl = evaluate(protocol, &a, &p, &scenario).unwrap();
            assert_eq!(tl.start[0], 0.0);
            if p.levels() > 1 {
                match protocol {
                    Protocol::CutThrough => assert_eq!(tl.start[1], 0.0),
                    Protocol::StoreAndForward => assert!(tl.start[1] > 0.0),
                }
            }
            assert!(tl.start.windows(2).all(|w| w[0] <= w[1]));
            let m = compute_metrics(&a, &scenario, &fm).unwrap();
            assert!((tl.makespan - m.makespan).abs() <= 1e-12);

            let gantt = expand_gantt(&tl, &tree, &p).unwrap();
            assert_eq!(gantt.len(), t.node_count());
            for r in &gantt {
                assert_eq!(r.compute_start, tl.start[r.level]);
                assert_eq!(r.compute_end, tl.finish[r.level]);
                assert_eq!(r.parent, tree.parent(r.node));
                if protocol == Protocol::StoreAndForward {
                    assert!(r.receive_end <= r.compute_start);
                }
            }
        }
    }
}

#[test]
fn sweeps_are_byte_identical() {
    let mesh = Topology::mesh(3, 4).unwrap();
    let inj = InjectionSpec::new(&mesh, 0).unwrap();
    let grid: SigmaGrid = "0.01:1.5:0.01".parse().unwrap();
    let base = Scenario::new(1.0, 1.0, 2.0, 3.0).unwrap();
    let render = |mode| {
        let s = sweep_sigma(&mesh, &inj, Protocol::CutThrough, &grid, &base, mode).unwrap();
        let (mut csv, mut json) = (Vec::new(), Vec::new());
        emit_csv(&s, &mut csv).unwrap();
        emit_json(&s, &mut json).unwrap();
        for r in &s.rows {
            assert!((r.speedup - 1.0 / r.fractions[0]).abs() <= 1e-12);
        }
        (csv, json)
    };
    for mode in [SweepMode::Flag, SweepMode::Truncate] {
        assert_eq!(render(mode), render(mode));
    }
}
