//! Acceptance suite: one line per criterion, then a single assertion over all
//! of them. Lines go straight to stderr so they show without `--nocapture`.

mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use common::gnp;
use kernelforge::decomposition::treedepth_check;
use kernelforge::fii::{
    build_representative_table, enumerate_levels, glue, kernelize, replace_protrusion, signature, BoundariedGraph,
    ClusterStatus, PieceClass, Problem,
};
use kernelforge::generate::{apex_pendants, random_modulated, subdivided_grid, Instance};
use kernelforge::graph::{connected_components, degeneracy_order, remove_vertices, Graph, VertexSet};
use kernelforge::lp_kernel::{lp_kernelize, LpReductionRound};
use kernelforge::modulator::{approx_td_modulator, exact_td_modulator, verify_modulator};
use kernelforge::oracles::{brute_longest_path, brute_vertex_cover};
use kernelforge::protrusion::{decompose, ProtrusionDecomposition};
use kernelforge::shallow_minor::{check_corollary_bounds, count_cliques, grad_exact, run_contraction_sequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned thresholds.
const LP_INSTANCES: usize = 240;
const LP_MAX_N: usize = 14;
const LP_RUNTIME: Duration = Duration::from_secs(120);
const EXHAUSTIVE_MAX_N: usize = 8;
const RANDOM_MODULATOR_GRAPHS: usize = 500;
const PROTRUSION_INSTANCES: usize = 120;
const BIPARTITE_INSTANCES: usize = 200;
const FII_HOSTS_PER_CLASS: usize = 50;
const FII_HOST_MAX_N: usize = 5;
const FII_RUNTIME: Duration = Duration::from_secs(600);
const VC_CASES: usize = 100;
const VC_MIN_REPLACED: usize = 30;
const PLATEAU_COPIES: [usize; 3] = [50, 200, 800];
const CLIQUE_GRAPHS: usize = 500;
/// Connected graphs on `n` vertices up to isomorphism (OEIS A001349).
const CONNECTED_GRAPHS: [usize; 9] = [0, 1, 1, 2, 6, 21, 112, 853, 11117];
/// Every exact comparison allows this much difference.
const TOLERANCE: i64 = 0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: usize, name: &str, out: &Outcome) {
    let line = format!(
        "criterion {id:>2} [{}] {name}: {}\n",
        if out.pass { "PASS" } else { "FAIL" },
        out.detail
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn lp_instances() -> Vec<Instance> {
    let mut r = rng(1);
    (0..LP_INSTANCES)
        .map(|i| {
            let n = r.gen_range(4..=LP_MAX_N);
            let k = r.gen_range(0..=3.min(n));
            let d = 1 + i % 2;
            random_modulated(n, k, d, r.gen()).unwrap()
        })
        .collect()
}

fn criterion_1_and_2() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut bound_violations = 0;
    let mut rounds = 0;
    let mut worst_shrink = 0usize;
    let mut insts = lp_instances();
    // The planted pendant instance: two apexes, thirty pendant edges.
    let mut edges = vec![];
    for i in 0..30 {
        edges.push((i % 2, 2 + i));
    }
    insts.push(Instance {
        graph: Graph::from_edges(32, edges).unwrap(),
        modulator: (0..2).collect(),
        d: 1,
    });
    let planted = insts.len() - 1;
    for (i, inst) in insts.iter().enumerate() {
        let kernel = lp_kernelize(&inst.graph, &inst.modulator, inst.d).unwrap();
        let before = if i == planted { 2 } else { brute_longest_path(&inst.graph).unwrap() };
        let after = brute_longest_path(&kernel.graph).unwrap();
        if (before as i64 - after as i64).abs() > TOLERANCE {
            mismatches += 1;
        }
        worst_shrink = worst_shrink.max(inst.graph.n() - kernel.graph.n());
        for r in &kernel.rounds {
            rounds += 1;
            if r.kept_components.len() > LpReductionRound::kept_bound(r.k)
                || r.new_modulator.len() > LpReductionRound::modulator_bound(r.k)
            {
                bound_violations += 1;
            }
        }
        if kernel.modulator.len() != kernel.graph.n() {
            bound_violations += 1;
        }
    }
    let elapsed = start.elapsed();
    (
        Outcome {
            pass: mismatches == 0 && elapsed < LP_RUNTIME,
            detail: format!(
                "{} instances (n <= {LP_MAX_N}, d in {{1,2}}, k <= 3), {mismatches} mismatches, {:.1}s (limit {}s), largest reduction {worst_shrink} vertices",
                insts.len() - 1,
                elapsed.as_secs_f64(),
                LP_RUNTIME.as_secs()
            ),
        },
        Outcome {
            pass: bound_violations == 0,
            detail: format!("{rounds} rounds, {bound_violations} violations of |U'| <= k(k+1)^2/2+1, |S'| <= (k+1)^3 or residual depth"),
        },
    )
}

fn criterion_3() -> Outcome {
    let mut violations = 0;
    let mut checked = 0;
    let mut check = |g: &Graph| {
        for d in 1..=2 {
            let approx = approx_td_modulator(g, d).unwrap();
            let exact = exact_td_modulator(g, d).unwrap();
            checked += 1;
            if approx.validate(g).is_err()
                || !verify_modulator(g, &approx.modulator, d)
                || approx.modulator.len() > (1 << d) * exact.modulator.len()
            {
                violations += 1;
            }
        }
    };
    let mut exhaustive = 0;
    // Every graph up to isomorphism: treedepth never exceeds n.
    for level in enumerate_levels(0, EXHAUSTIVE_MAX_N, EXHAUSTIVE_MAX_N, PieceClass::Pieces) {
        for code in level {
            let g = code.to_boundaried().graph;
            if g.n() > 0 && connected_components(&g, &VertexSet::new()).len() == 1 {
                exhaustive += 1;
                check(&g);
            }
        }
    }
    let mut r = rng(3);
    let mut sampled = 0;
    while sampled < RANDOM_MODULATOR_GRAPHS {
        let n = r.gen_range(EXHAUSTIVE_MAX_N + 1..=9);
        let p = r.gen_range(0.2..0.6);
        let g = gnp(&mut r, n, p);
        if connected_components(&g, &VertexSet::new()).len() == 1 {
            sampled += 1;
            check(&g);
        }
    }
    Outcome {
        pass: violations == 0 && exhaustive == CONNECTED_GRAPHS[..=EXHAUSTIVE_MAX_N].iter().sum::<usize>(),
        detail: format!(
            "{exhaustive} connected graphs on <= {EXHAUSTIVE_MAX_N} vertices (all, up to isomorphism) + {sampled} random on 9 vertices, {checked} (graph, d) checks, {violations} violations"
        ),
    }
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut violations = 0;
    let mut instances = 0;
    let mut clusters = 0;
    while instances < PROTRUSION_INSTANCES {
        let inst = match instances % 4 {
            0 | 1 => random_modulated(r.gen_range(10..=40), r.gen_range(1..=5), r.gen_range(1..=2), r.gen()).unwrap(),
            2 => apex_pendants(r.gen_range(1..=4), r.gen_range(5..=30), r.gen_range(1..=3)).unwrap(),
            _ => subdivided_grid(r.gen_range(2..=4), r.gen_range(2..=4), r.gen_range(1..=3)).unwrap(),
        };
        let t = r.gen_range(1..=5);
        instances += 1;
        let s = &inst.modulator;
        let pd = match decompose(&inst.graph, s, inst.d, t) {
            Ok(pd) => pd,
            Err(_) => {
                violations += 1;
                continue;
            }
        };
        if pd.validate(&inst.graph).is_err() {
            violations += 1;
        }
        for c in connected_components(&inst.graph, &pd.y0) {
            if inst.graph.neighbors_in(&c, s).len() > t - 1 {
                violations += 1;
            }
        }
        for c in &pd.clusters {
            clusters += 1;
            if c.boundary.len() > ProtrusionDecomposition::boundary_bound(inst.d, t) {
                violations += 1;
            }
        }
    }
    Outcome {
        pass: violations == 0,
        detail: format!("{instances} instances, {clusters} clusters, {violations} violations"),
    }
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut violations = 0;
    let mut steps = 0;
    for _ in 0..BIPARTITE_INSTANCES {
        let xs = r.gen_range(2..=6);
        let ys = r.gen_range(1..=10 - xs);
        let p = r.gen_range(0.3..0.9);
        let mut edges = Vec::new();
        for y in 0..ys {
            for x in 0..xs {
                if r.gen_bool(p) {
                    edges.push((x, xs + y));
                }
            }
        }
        let g = Graph::from_edges(xs + ys, edges).unwrap();
        let x: VertexSet = (0..xs).collect();
        let trace = run_contraction_sequence(&g, &x).unwrap();
        let mut last = trace.initial_x_edges;
        for s in &trace.steps {
            steps += 1;
            if s.x_edges <= last {
                violations += 1;
            }
            last = s.x_edges;
        }
        for y in trace.survivors() {
            let nb = trace.final_neighbors(y);
            let id = |v: usize| trace.final_ids.binary_search(&v).unwrap();
            for (i, &a) in nb.iter().enumerate() {
                if nb[i + 1..].iter().any(|&b| !trace.final_graph.has_edge(id(a), id(b))) {
                    violations += 1;
                }
            }
        }
        let nabla1 = grad_exact(&g, 1).unwrap().value;
        let singletons: Vec<VertexSet> = (xs..xs + ys).map(|y| std::iter::once(y).collect()).collect();
        if !check_corollary_bounds(&g, &x, &singletons, nabla1).unwrap().heavy_ok {
            violations += 1;
        }
    }
    Outcome {
        pass: violations == 0,
        detail: format!("{BIPARTITE_INSTANCES} bipartite instances (|X| <= 6, n <= 10), {steps} contraction steps, {violations} violations"),
    }
}

/// Random host with the two boundary vertices `0, 1` and up to three more.
fn random_host(r: &mut ChaCha8Rng) -> BoundariedGraph {
    let n = r.gen_range(2..=FII_HOST_MAX_N);
    let g = gnp(r, n, 0.5);
    BoundariedGraph::new(g, vec![0, 1]).unwrap()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut classes: BTreeMap<_, Vec<BoundariedGraph>> = BTreeMap::new();
    let mut members = 0;
    for level in enumerate_levels(2, 2, 4, PieceClass::Whole) {
        for code in level {
            let h = code.to_boundaried();
            members += 1;
            let (key, _) = signature(Problem::LongestPath, &h, 2).unwrap();
            classes.entry(key).or_default().push(h);
        }
    }
    let mut r = rng(6);
    let mut violations = 0;
    let mut comparisons = 0;
    for group in classes.values().filter(|g| g.len() > 1) {
        // Same hosts for every member, so equality with the first member
        // covers every pair of the class.
        let hosts: Vec<BoundariedGraph> = (0..FII_HOSTS_PER_CLASS).map(|_| random_host(&mut r)).collect();
        for host in &hosts {
            let base = brute_longest_path(&glue(&group[0], host).unwrap()).unwrap();
            for h in &group[1..] {
                comparisons += 1;
                let v = brute_longest_path(&glue(h, host).unwrap()).unwrap();
                if (v as i64 - base as i64).abs() > TOLERANCE {
                    violations += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: violations == 0 && elapsed < FII_RUNTIME,
        detail: format!(
            "{members} boundaried graphs (t = 2, td <= 2, n <= 6) in {} classes, {comparisons} glued comparisons, {violations} violations, {:.1}s",
            classes.len(),
            elapsed.as_secs_f64()
        ),
    }
}

fn criterion_7() -> Outcome {
    let table = build_representative_table(Problem::VertexCover, 3, 2, 7).unwrap();
    let mut r = rng(7);
    let (mut cases, mut replaced, mut violations) = (0, 0, 0);
    while cases < VC_CASES {
        let n = r.gen_range(8..=16);
        let inst = random_modulated(n, r.gen_range(1..=3), 2, r.gen()).unwrap();
        let g = &inst.graph;
        let opt = brute_vertex_cover(g).unwrap() as i64;
        for w in connected_components(g, &inst.modulator) {
            let rep = replace_protrusion(g, &w, &table).unwrap();
            cases += 1;
            if rep.report.status == ClusterStatus::Replaced {
                replaced += 1;
            }
            if (opt - (brute_vertex_cover(&rep.graph).unwrap() as i64 + rep.delta)).abs() > TOLERANCE {
                violations += 1;
            }
        }
    }
    Outcome {
        pass: violations == 0 && replaced >= VC_MIN_REPLACED,
        detail: format!("{cases} (instance, protrusion) cases with n <= 16, {replaced} actually shrunk, {violations} violations"),
    }
}

fn criterion_8() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for problem in [Problem::VertexCover, Problem::LongestPath] {
        let table = build_representative_table(problem, 3, 1, 7).unwrap();
        let sizes: Vec<usize> = PLATEAU_COPIES
            .iter()
            .map(|&copies| {
                let inst = apex_pendants(2, copies, 1).unwrap();
                kernelize(&inst.graph, 1, 3, problem, &table).unwrap().graph.n()
            })
            .collect();
        pass &= sizes.windows(2).all(|w| w[0] == w[1]);
        lines.push(format!("{problem} kernel sizes {sizes:?} for copies {PLATEAU_COPIES:?}"));
    }
    Outcome {
        pass,
        detail: format!("apex-pendants k = 2, d = 1, t = 3: {}", lines.join("; ")),
    }
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let mut violations = 0;
    let mut tightest = 0.0f64;
    for _ in 0..CLIQUE_GRAPHS {
        let n = r.gen_range(1..=40);
        let p = r.gen_range(0.05..0.7);
        let g = gnp(&mut r, n, p);
        let (k, _) = degeneracy_order(&g);
        let bound = (1u128 << k) * (n - k + 1) as u128;
        let c = count_cliques(&g).unwrap() as u128;
        tightest = tightest.max(c as f64 / bound as f64);
        if c > bound {
            violations += 1;
        }
    }
    Outcome {
        pass: violations == 0,
        detail: format!("{CLIQUE_GRAPHS} random graphs (n <= 40), {violations} violations, largest count/bound ratio {tightest:.3}"),
    }
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_kernelforge");
    let run = |args: &[&str]| Command::new(bin).current_dir(dir.path()).args(args).output().unwrap();
    let setup = run(&["gen", "--kind", "random-modulated", "--n", "13", "--k", "2", "--d", "2", "--seed", "5", "--graph-out", "g.gr", "--modulator-out", "g.mod"]);
    assert!(setup.status.success());
    let commands: Vec<Vec<&str>> = vec![
        vec!["decompose", "--input", "g.gr", "--d", "2"],
        vec!["modulator", "--input", "g.gr", "--d", "2"],
        vec!["kernelize", "--input", "g.gr", "--problem", "vc", "--d", "2", "--t", "3", "--verify"],
        vec!["kernelize", "--input", "g.gr", "--problem", "lp", "--d", "2", "--t", "3", "--table-max-n", "6"],
        vec!["kernelize-lp", "--input", "g.gr", "--d", "2", "--modulator", "g.mod", "--verify"],
        vec!["build-table", "--problem", "vc", "--t", "2", "--d", "2", "--max-n", "6"],
        vec!["profile", "--input", "g.gr", "--d", "2"],
        vec!["oracle", "--input", "g.gr", "--kind", "longest-path"],
        vec!["gen", "--kind", "apex-pendants", "--k", "2", "--copies", "20", "--d", "2"],
        vec!["gen", "--kind", "subdivided-grid", "--rows", "3", "--cols", "3", "--subdiv", "2"],
        vec!["gen", "--kind", "random-modulated", "--n", "20", "--k", "3", "--d", "2", "--seed", "9"],
    ];
    let mut differing = Vec::new();
    let mut runs = 0;
    for cmd in &commands {
        for format in ["text", "json"] {
            let outputs: Vec<Vec<u8>> = (0..2)
                .map(|i| {
                    let out = format!("report-{i}");
                    let mut args = cmd.clone();
                    args.extend(["--format", format, "--out", &out]);
                    if cmd[0] == "build-table" {
                        args.extend(["--table-out", "t.tbl"]);
                    }
                    let res = run(&args);
                    assert!(res.status.success(), "{cmd:?}: {}", String::from_utf8_lossy(&res.stderr));
                    let mut bytes = std::fs::read(dir.path().join(&out)).unwrap();
                    if cmd[0] == "build-table" {
                        bytes.extend(std::fs::read(dir.path().join("t.tbl")).unwrap());
                    }
                    bytes
                })
                .collect();
            runs += 1;
            if outputs[0] != outputs[1] {
                differing.push(format!("{} ({format})", cmd[0]));
            }
        }
    }
    Outcome {
        pass: differing.is_empty(),
        detail: format!("{runs} command/format pairs run twice, differing: {differing:?}"),
    }
}

#[test]
fn acceptance() {
    let (c1, c2) = criterion_1_and_2();
    let results = vec![
        (1, "LP kernel exactness", c1),
        (2, "LP kernel bounds", c2),
        (3, "modulator approximation ratio", criterion_3()),
        (4, "protrusion decomposition invariants", criterion_4()),
        (5, "contraction lemma", criterion_5()),
        (6, "LP signature refinement", criterion_6()),
        (7, "vertex cover replacement safety", criterion_7()),
        (8, "kernel size plateau", criterion_8()),
        (9, "clique-count bound", criterion_9()),
        (10, "determinism", criterion_10()),
    ];
    for (id, name, out) in &results {
        report(*id, name, out);
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn residual_depth_after_each_round() {
    for inst in lp_instances().iter().take(60) {
        let mut g = inst.graph.clone();
        let mut s = inst.modulator.clone();
        for depth in (1..=inst.d).rev() {
            let (h, round, ids) = kernelforge::lp_kernel::lp_reduce_round(&g, &s, depth).unwrap();
            s = round.new_modulator.iter().map(|v| ids.binary_search(&v).unwrap()).collect();
            g = h;
            let rest = remove_vertices(&g, &s);
            assert!(treedepth_check(&rest.graph, depth - 1).is_some());
        }
    }
}
