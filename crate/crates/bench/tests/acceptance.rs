//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::HashMap;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use itertools::Itertools;
use mgpf_bench::fixtures::load_fixture;
use mgpf_bench::instances::generate_instance;
use mgpf_bench::maps::load_map;
use mgpf_core::graph::{parse_edge_list, shortest_path_oracle};
use mgpf_core::heuristic::{HeuristicKind, HeuristicProvider, Weight};
use mgpf_core::pipeline::{tree_to_walk, validate_solution, MgpfSolution};
use mgpf_core::steiner::{solve, Criterion, SolveOutput, Solver, SolverConfig};
use mgpf_core::{Cost, Graph, Instance};
use num_rational::Ratio;
use petgraph::algo::min_spanning_tree;
use petgraph::data::Element;
use petgraph::graph::UnGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SWEEP_MAPS: [&str; 3] = ["open-32", "maze-32", "random-32"];
const SWEEP_NS: [usize; 3] = [2, 4, 8];
const SWEEP_SEEDS: u64 = 23;
const SWEEP_BUDGET: Duration = Duration::from_secs(120);
const TREND_BUDGET: Duration = Duration::from_secs(300);
const TREND_FACTOR: u64 = 5;

const BS: Solver = Solver::Merged(Criterion::Bs);
const MM: Solver = Solver::Merged(Criterion::Mm);
const HS: Solver = Solver::Merged(Criterion::Hs);

#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn merge(&mut self, other: Outcome) {
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }
}

fn weights(list: &[(u64, u64)]) -> Vec<Weight> {
    list.iter().map(|&(p, q)| Weight::new(p, q).unwrap()).collect()
}

fn distances(instance: &Instance) -> Vec<Vec<Cost>> {
    instance
        .terminals()
        .iter()
        .map(|&t| {
            let sp = shortest_path_oracle(instance.graph(), t);
            instance.terminals().iter().map(|&u| sp.dist[u]).collect()
        })
        .collect()
}

fn mst_oracle(d: &[Vec<Cost>]) -> Cost {
    let mut g = UnGraph::<(), u64>::new_undirected();
    let nodes: Vec<_> = d.iter().map(|_| g.add_node(())).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            g.add_edge(nodes[i], nodes[j], d[i][j].value());
        }
    }
    Cost(
        min_spanning_tree(&g)
            .filter_map(|e| match e {
                Element::Edge { weight, .. } => Some(weight),
                _ => None,
            })
            .sum(),
    )
}

/// Cheapest walk visiting the goals in some order along least-cost links.
fn brute_force_optimum(d: &[Vec<Cost>]) -> Cost {
    let goals: Vec<usize> = (2..d.len()).collect();
    let k = goals.len();
    goals
        .into_iter()
        .permutations(k)
        .map(|order| {
            let (mut at, mut total) = (0, Cost::ZERO);
            for g in order {
                total += d[at][g];
                at = g;
            }
            total + d[at][1]
        })
        .min()
        .unwrap()
}

fn check_walk(out: &mut Outcome, instance: &Instance, sol: &MgpfSolution, optimum: Cost, tag: &str) {
    let (valid, violations) = validate_solution(sol, instance);
    out.check(valid, || format!("{tag}: {violations:?}"));
    out.check(sol.cost <= optimum.double(), || {
        format!("{tag}: cost {} > 2 x {optimum}", sol.cost)
    });
    out.check(
        sol.ratio >= Ratio::from_integer(1) && sol.ratio <= Ratio::from_integer(2),
        || format!("{tag}: ratio {}", sol.ratio),
    );
    let walk = &sol.walk;
    out.check(
        walk.first() == Some(&instance.origin()) && walk.last() == Some(&instance.destination()),
        || format!("{tag}: walk endpoints"),
    );
    out.check(instance.goals().iter().all(|g| walk.contains(g)), || {
        format!("{tag}: missing goal")
    });
    out.check(
        walk.windows(2)
            .all(|w| instance.graph().edge_cost(w[0], w[1]).is_some()),
        || format!("{tag}: walk hop is not an edge"),
    );
}

fn check_confirmed(out: &mut Outcome, instance: &Instance, d: &[Vec<Cost>], run: &SolveOutput, tag: &str) {
    for p in &run.confirmed {
        let (a, b) = p.endpoints;
        out.check(p.cost == d[a][b], || {
            format!("{tag}: path {a}-{b} cost {} != {}", p.cost, d[a][b])
        });
        let walked: Option<Cost> = p.nodes.windows(2).map(|w| instance.graph().edge_cost(w[0], w[1])).sum();
        out.check(walked == Some(p.cost), || format!("{tag}: path {a}-{b} node sequence"));
        out.check(
            p.nodes.first() == Some(&instance.terminal_node(a)) && p.nodes.last() == Some(&instance.terminal_node(b)),
            || format!("{tag}: path {a}-{b} endpoints"),
        );
    }
}

#[derive(Default)]
struct Sweep {
    instances: usize,
    sp: Outcome,
    k: Outcome,
    approx: Outcome,
    zero_goal: Outcome,
    mm_bs: Outcome,
    elapsed: Duration,
}

fn sweep_one(map: &str, graph: &Arc<Graph>, n: usize, seed: u64) -> Sweep {
    let mut s = Sweep {
        instances: 1,
        ..Sweep::default()
    };
    let instance = generate_instance(graph, n, seed).unwrap();
    let kind = if seed.is_multiple_of(2) {
        HeuristicKind::Exact
    } else {
        HeuristicKind::Octile
    };
    let d = distances(&instance);
    let mst = mst_oracle(&d);
    let optimum = brute_force_optimum(&d);
    let base = HeuristicProvider::new(&instance, kind, Weight::ONE, None).unwrap();

    let kruskal = solve(&instance, &base, &SolverConfig::new(Solver::Kruskal)).unwrap();
    let label = format!("{map} N={n} seed={seed} {kind}");
    s.k.check(kruskal.stats.path_total == mst, || {
        format!("{label} kruskal {} != {mst}", kruskal.stats.path_total)
    });

    for w in weights(&[(0, 1), (1, 2), (1, 1)]) {
        let provider = base.with_weight(w);
        for reprioritize in [false, true] {
            let mut at_zero = HashMap::new();
            for solver in Solver::SEARCH {
                let tag = format!("{label} {solver} w={w} r={reprioritize}");
                let run = solve(
                    &instance,
                    &provider,
                    &SolverConfig::new(solver).reprioritize(reprioritize),
                )
                .unwrap();
                check_confirmed(&mut s.sp, &instance, &d, &run, &tag);
                s.k.check(run.stats.path_total == mst, || {
                    format!("{tag}: total {} != {mst}", run.stats.path_total)
                });
                s.k.check(run.stats.path_total == kruskal.stats.path_total, || {
                    format!("{tag}: disagrees with kruskal")
                });
                let sol = tree_to_walk(&run.forest, &instance).unwrap();
                check_walk(&mut s.approx, &instance, &sol, optimum, &tag);
                if n == 2 {
                    s.zero_goal
                        .check(sol.cost == d[0][1] && sol.ratio == Ratio::from_integer(1), || {
                            format!("{tag}: cost {} ratio {} vs {}", sol.cost, sol.ratio, d[0][1])
                        });
                }
                if w == Weight::ZERO {
                    at_zero.insert(solver, run.stats);
                }
            }
            if let (Some(bs), Some(mm)) = (at_zero.get(&BS), at_zero.get(&MM)) {
                s.mm_bs.check(bs.path_total == mm.path_total, || {
                    format!("{label} r={reprioritize}: mm/bs totals")
                });
                if bs.expanded != mm.expanded {
                    s.mm_bs.notes.push(format!(
                        "{label} r={reprioritize}: bs {} mm {}",
                        bs.expanded, mm.expanded
                    ));
                }
            }
        }
    }
    s
}

fn run_sweep() -> Sweep {
    let start = Instant::now();
    let maps: Vec<_> = SWEEP_MAPS.iter().map(|m| (m, load_map(m).unwrap().graph)).collect();
    let tasks: Vec<_> = maps
        .iter()
        .flat_map(|(m, g)| {
            SWEEP_NS
                .iter()
                .flat_map(move |&n| (0..SWEEP_SEEDS).map(move |seed| (*m, g, n, seed)))
        })
        .collect();
    let parts: Vec<Sweep> = tasks
        .par_iter()
        .map(|&(m, g, n, seed)| sweep_one(m, g, n, seed))
        .collect();
    let mut total = Sweep::default();
    for p in parts {
        total.instances += p.instances;
        total.sp.merge(p.sp);
        total.k.merge(p.k);
        total.approx.merge(p.approx);
        total.zero_goal.merge(p.zero_goal);
        total.mm_bs.merge(p.mm_bs);
    }
    total.elapsed = start.elapsed();
    total
}

/// Connected graphs of at most 12 nodes with at most 4 goals.
fn tiny_instances() -> Vec<Instance> {
    (0..50u64)
        .map(|seed| {
            let mut r = ChaCha8Rng::seed_from_u64(0x7177 + seed);
            let n = r.gen_range(4..=12usize);
            let mut edges = HashMap::new();
            for v in 1..n {
                edges.insert((r.gen_range(0..v), v), r.gen_range(1..=9) * 1000);
            }
            for _ in 0..n {
                let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
                if u != v {
                    edges.entry((u.min(v), u.max(v))).or_insert(r.gen_range(1..=9) * 1000);
                }
            }
            let mut text = format!("nodes {n}\n");
            for ((u, v), c) in edges.into_iter().sorted() {
                text += &format!("{u} {v} {c}\n");
            }
            let graph = Arc::new(parse_edge_list(&text).unwrap());
            let goals = r.gen_range(0..=4usize.min(n - 2));
            generate_instance(&graph, goals + 2, seed).unwrap()
        })
        .collect()
}

fn tiny(out: &mut Outcome) {
    for (i, instance) in tiny_instances().iter().enumerate() {
        let d = distances(instance);
        let optimum = brute_force_optimum(&d);
        for solver in Solver::ALL {
            let provider = HeuristicProvider::new(instance, HeuristicKind::Zero, Weight::ZERO, None).unwrap();
            let run = solve(instance, &provider, &SolverConfig::new(solver)).unwrap();
            let sol = tree_to_walk(&run.forest, instance).unwrap();
            check_walk(out, instance, &sol, optimum, &format!("tiny {i} {solver}"));
        }
    }
}

fn bs_invariance() -> (Outcome, usize) {
    let mut out = Outcome::default();
    let mut by_f_divergent = 0;
    let ws = weights(&[(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)]);
    for (i, map) in SWEEP_MAPS.iter().enumerate() {
        let graph = load_map(map).unwrap().graph;
        for seed in 0..10u64 {
            let n = [4, 8][seed as usize % 2];
            let instance = generate_instance(&graph, n, 1000 + seed + i as u64 * 100).unwrap();
            let base = HeuristicProvider::new(&instance, HeuristicKind::Octile, Weight::ONE, None).unwrap();
            for by_g in [false, true] {
                let config = SolverConfig::new(BS).bs_nominate_by_g(by_g);
                let runs: Vec<_> = ws
                    .iter()
                    .map(|&w| {
                        let run = solve(&instance, &base.with_weight(w), &config).unwrap();
                        (run.stats.expanded, run.stats.path_total)
                    })
                    .collect();
                let same = runs.iter().all_equal();
                if by_g {
                    out.check(same, || format!("{map} seed={seed}: by-g varies with w {runs:?}"));
                } else if !same {
                    by_f_divergent += 1;
                }
            }
        }
    }
    (out, by_f_divergent)
}

struct Trend {
    elapsed: Duration,
    means: HashMap<String, f64>,
}

fn trend() -> Trend {
    let start = Instant::now();
    let graph = load_map("random-64").unwrap().graph;
    let configs: Vec<(String, SolverConfig)> = vec![
        ("kruskal".into(), SolverConfig::new(Solver::Kruskal)),
        ("mm".into(), SolverConfig::new(MM)),
        ("hs".into(), SolverConfig::new(HS)),
        ("unmerged".into(), SolverConfig::new(Solver::Unmerged)),
        (
            "unmerged+r".into(),
            SolverConfig::new(Solver::Unmerged).reprioritize(true),
        ),
    ];
    let per_seed: Vec<Vec<u64>> = (0..10u64)
        .into_par_iter()
        .map(|seed| {
            let instance = generate_instance(&graph, 50, seed).unwrap();
            let p = HeuristicProvider::new(&instance, HeuristicKind::Exact, Weight::ONE, None).unwrap();
            configs
                .iter()
                .map(|(_, c)| solve(&instance, &p, c).unwrap().stats.expanded)
                .collect()
        })
        .collect();
    let means = configs
        .iter()
        .enumerate()
        .map(|(i, (name, _))| (name.clone(), per_seed.iter().map(|r| r[i]).sum::<u64>() as f64 / 10.0))
        .collect();
    Trend {
        elapsed: start.elapsed(),
        means,
    }
}

fn fixtures(out: &mut Outcome) -> String {
    let expanded = |name: &str, solver: Solver| {
        let f = load_fixture(name).unwrap();
        solve(&f.instance, &f.provider(), &SolverConfig::new(solver))
            .unwrap()
            .stats
            .expanded
    };
    let weak_hs = expanded("appendix-weak-h", HS);
    let weak_bs = expanded("appendix-weak-h", BS);
    let strong_un = expanded("appendix-strong-h", Solver::Unmerged);
    let strong_bs = expanded("appendix-strong-h", BS);
    out.check(weak_hs > weak_bs, || format!("weak: hs {weak_hs} <= bs {weak_bs}"));
    out.check(strong_un < strong_bs, || {
        format!("strong: unmerged {strong_un} >= bs {strong_bs}")
    });
    let got = [weak_hs, weak_bs, strong_un, strong_bs];
    out.check(got == [129, 93, 35, 141], || format!("golden counts {got:?}"));
    format!("weak hs {weak_hs} > bs {weak_bs}; strong unmerged {strong_un} < bs {strong_bs}")
}

fn determinism(out: &mut Outcome) {
    let cache = tempfile::tempdir().unwrap();
    let mut run = || {
        let o = Command::new(env!("CARGO_BIN_EXE_mgpf"))
            .args(["bench", "--map", "open-32,random-32", "-n", "4,8", "--w", "0,1/2,1"])
            .args(["--instances", "2", "--seed", "7", "--no-timing"])
            .env("MGPF_CACHE_DIR", cache.path())
            .output()
            .unwrap();
        out.check(o.status.success(), || String::from_utf8_lossy(&o.stderr).into_owned());
        o.stdout
    };
    let (a, b) = (run(), run());
    out.check(!a.is_empty() && a == b, || "two runs differ".into());
    out.check(
        a.starts_with(b"map,solver,criterion,N,w,reprioritize,seed,expanded,time_ms,"),
        || "header".into(),
    );
}

fn report(results: &mut Vec<bool>, id: usize, name: &str, out: &Outcome, detail: &str) {
    let ok = out.failures.is_empty();
    results.push(ok);
    println!("[{}] {id:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    for f in out.failures.iter().filter(|f| !f.is_empty()) {
        println!("       {f}");
    }
    if out.failures.len() > 5 {
        println!("       ... {} failures in total", out.failures.len());
    }
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    let sweep = run_sweep();
    let secs = sweep.elapsed.as_secs_f64();

    let mut sp = sweep.sp;
    sp.check(sweep.instances >= 200, || format!("only {} instances", sweep.instances));
    sp.check(sweep.elapsed < SWEEP_BUDGET, || format!("sweep took {secs:.1}s"));
    report(
        &mut results,
        1,
        "shortest confirmed paths",
        &sp,
        &format!("{} instances in {secs:.1}s", sweep.instances),
    );
    report(
        &mut results,
        2,
        "tree totals match the MST oracle",
        &sweep.k,
        "all five solvers agree",
    );

    let mut approx = sweep.approx;
    tiny(&mut approx);
    report(
        &mut results,
        3,
        "2-approximation and walk validity",
        &approx,
        "sweep plus 50 tiny brute-force instances",
    );

    let zero_count = SWEEP_MAPS.len() * SWEEP_SEEDS as usize;
    let mut zero = sweep.zero_goal;
    zero.check(zero_count >= 50, || format!("only {zero_count} instances"));
    report(
        &mut results,
        4,
        "no goals gives a shortest path",
        &zero,
        &format!("{zero_count} instances"),
    );

    let (bs, by_f) = bs_invariance();
    report(
        &mut results,
        5,
        "BS expansions ignore w",
        &bs,
        &format!("by g identical on 30 instances; by f diverges on {by_f}"),
    );

    let t = trend();
    let m = |k: &str| t.means[k];
    let mut heur = Outcome::default();
    let factor = TREND_FACTOR as f64;
    heur.check(m("mm") * factor <= m("kruskal"), || {
        format!("mm {} vs kruskal {}", m("mm"), m("kruskal"))
    });
    heur.check(m("hs") * factor <= m("kruskal"), || {
        format!("hs {} vs kruskal {}", m("hs"), m("kruskal"))
    });
    heur.check(t.elapsed < TREND_BUDGET, || {
        format!("took {:.1}s", t.elapsed.as_secs_f64())
    });
    let detail = format!(
        "kruskal {:.1}, mm {:.1} ({:.0}x), hs {:.1} ({:.0}x) in {:.1}s",
        m("kruskal"),
        m("mm"),
        m("kruskal") / m("mm"),
        m("hs"),
        m("kruskal") / m("hs"),
        t.elapsed.as_secs_f64()
    );
    report(&mut results, 6, "heuristics cut expansions", &heur, &detail);

    let mut reprio = Outcome::default();
    reprio.check(m("unmerged+r") <= m("unmerged"), || {
        "reprioritized unmerged expands more".into()
    });
    let detail = format!(
        "unmerged {:.1}, with reprioritization {:.1}",
        m("unmerged"),
        m("unmerged+r")
    );
    report(&mut results, 7, "reprioritization does not hurt", &reprio, &detail);

    let mm_bs = sweep.mm_bs;
    let detail = format!(
        "totals identical; expansion counts differ on {} runs",
        mm_bs.notes.len()
    );
    report(&mut results, 8, "MM at w=0 matches BS", &mm_bs, &detail);
    for n in mm_bs.notes.iter().take(3) {
        println!("       {n}");
    }

    let mut fx = Outcome::default();
    let detail = fixtures(&mut fx);
    report(&mut results, 9, "appendix fixtures", &fx, &detail);

    let mut det = Outcome::default();
    determinism(&mut det);
    report(
        &mut results,
        10,
        "bench output is reproducible",
        &det,
        "two --no-timing runs byte-identical",
    );

    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
