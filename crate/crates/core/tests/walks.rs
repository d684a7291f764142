//! Tree-to-walk pipeline against brute-force MGPF optima.

mod common;

use std::sync::Arc;

use common::*;
use mgpf_core::graph::{shortest_path_oracle, Graph};
use mgpf_core::heuristic::{HeuristicKind, HeuristicProvider, Weight};
use mgpf_core::pipeline::{tree_to_walk, validate_solution, SolutionRecord};
use mgpf_core::steiner::{solve, Solver, SolverConfig};
use mgpf_core::{Cost, Instance};
use num_rational::Ratio;

fn check_all(instance: &Instance, optimum: Cost, label: &str) {
    let mst = metric_mst_cost(instance);
    assert!(mst <= optimum, "{label}: mst {mst} above optimum {optimum}");
    let provider = HeuristicProvider::new(instance, HeuristicKind::Exact, Weight::ONE, None).unwrap();
    for solver in Solver::ALL {
        for reprioritize in [false, true] {
            let config = SolverConfig::new(solver).reprioritize(reprioritize);
            let out = solve(instance, &provider, &config).unwrap();
            let sol = tree_to_walk(&out.forest, instance).unwrap();
            let (ok, why) = validate_solution(&sol, instance);
            assert!(ok, "{label} {solver}: {why:?}");
            assert!(sol.tree_edge_cost <= sol.tree_path_total, "{label} {solver}");
            assert!(
                sol.cost.value() <= 2 * optimum.value(),
                "{label} {solver}: {} > 2 x {optimum}",
                sol.cost
            );
            assert!(sol.cost >= optimum, "{label} {solver}: walk beats the optimum");
            assert!(sol.ratio >= Ratio::from_integer(1) && sol.ratio <= Ratio::from_integer(2));
            let text = SolutionRecord::from(&sol).to_text();
            assert_eq!(SolutionRecord::from_text(&text).unwrap(), SolutionRecord::from(&sol));
        }
    }
}

#[test]
fn tiny_instances_within_twice_the_optimum() {
    let mut done = 0;
    for seed in 0..50u64 {
        let n = 6 + (seed as usize % 7);
        let graph = random_sparse(n, n / 2, 7, seed);
        let goals = 1 + seed as usize % 4;
        let inst = random_instance(&graph, goals + 2, seed).unwrap();
        check_all(&inst, brute_force_mgpf(&inst), &format!("tiny seed={seed}"));
        done += 1;
    }
    assert_eq!(done, 50);
}

#[test]
fn tiny_grids_within_twice_the_optimum() {
    for seed in 0..30u64 {
        let graph = random_grid(4, 3, 0.15, seed);
        let Some(inst) = random_instance(&graph, 2 + 1 + seed as usize % 4, seed) else {
            continue;
        };
        check_all(&inst, brute_force_mgpf(&inst), &format!("grid seed={seed}"));
    }
}

#[test]
fn no_goals_gives_a_shortest_path() {
    for seed in 0..50u64 {
        let graph = random_grid(20, 20, 0.3, seed);
        let inst = random_instance(&graph, 2, seed).unwrap();
        let best = shortest_path_oracle(inst.graph(), inst.origin()).dist[inst.destination()];
        for solver in Solver::ALL {
            let provider = HeuristicProvider::new(&inst, HeuristicKind::Octile, Weight::ONE, None).unwrap();
            let out = solve(&inst, &provider, &SolverConfig::new(solver)).unwrap();
            let sol = tree_to_walk(&out.forest, &inst).unwrap();
            assert_eq!(sol.cost, best, "seed={seed} {solver}");
            assert_eq!(sol.ratio, Ratio::from_integer(1), "seed={seed} {solver}");
        }
    }
}

fn unit_graph(n: usize, edges: &[(usize, usize)]) -> Arc<Graph> {
    Arc::new(Graph::from_edges(n, edges.iter().map(|&(u, v)| (u, v, Cost(1000)))).unwrap())
}

#[test]
fn line_of_five_with_goal_in_the_middle() {
    // a-b-c-d-e, s=a, d=e, goal c
    let g = unit_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
    let inst = Instance::new(g, 0, 4, vec![2]).unwrap();
    for solver in Solver::ALL {
        let out = solve(&inst, &HeuristicProvider::zero(&inst), &SolverConfig::new(solver)).unwrap();
        let mut pairs: Vec<_> = out.forest.accepted().iter().map(|p| (p.endpoints, p.cost)).collect();
        pairs.sort();
        // terminal order is s=0, d=1, goal=2
        assert_eq!(pairs, vec![((0, 2), Cost(2000)), ((1, 2), Cost(2000))], "{solver}");
        let sol = tree_to_walk(&out.forest, &inst).unwrap();
        assert_eq!(sol.walk, vec![0, 1, 2, 3, 4]);
        assert_eq!(sol.ratio, Ratio::from_integer(1));
    }
}

#[test]
fn star_shares_the_centre() {
    // centre 0, leaves 1, 2, 3; s=1, d=2, goal 3
    let g = unit_graph(4, &[(0, 1), (0, 2), (0, 3)]);
    let inst = Instance::new(g, 1, 2, vec![3]).unwrap();
    for solver in Solver::ALL {
        let out = solve(&inst, &HeuristicProvider::zero(&inst), &SolverConfig::new(solver)).unwrap();
        assert_eq!(out.forest.path_total(), Cost(4000), "{solver}");
        assert_eq!(out.forest.edge_cost(), Cost(3000), "{solver}");
        let sol = tree_to_walk(&out.forest, &inst).unwrap();
        assert_eq!(sol.cost, Cost(4000));
        assert_eq!(sol.ratio, Ratio::new(4, 3));
        assert_eq!(sol.walk, vec![1, 0, 3, 0, 2]);
    }
}
