//! Named end-to-end property suite.
//!
//! Each property checks one externally stated guarantee of the library over
//! a deterministic corpus and reports a pass detail or a failure reason.
//! The CLI `selftest` subcommand runs the suite at a quick scale; the
//! acceptance harness runs it at full scale. Instances are solved in
//! parallel with striped ownership and merged by index, so results do not
//! depend on the worker count.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycle::{is_d_packing, is_r_unicyclic, short_or_unicyclic, Cycle, RefinementOutcome};
use crate::generate::{corpus, Instance};
use crate::graph::{Edge, Graph, VertexSet};
use crate::helly::{
    budgets, ell, ell_star, subgraphs_pack_or_hit, tuples_pack_or_hit, ForestTuple, HitRoute,
    PackOrHit, RootedForest,
};
use crate::oracle::{max_d_packing, min_ball_hitting, OracleLimits};
use crate::solver::{f_bound, g_bound, solve, verify, Certificate};
use crate::subcubic::{s_bound, SubcubicGraph};

/// Scale knobs for one suite run.
#[derive(Debug, Clone)]
pub struct SelftestConfig {
    /// Corpus size for the solve-everything properties.
    pub instances: usize,
    /// Minimum number of small instances the exhaustive baseline must have
    /// been able to double-check.
    pub min_compared: usize,
    /// Refinement triples (graph, cycle, radius) to exercise.
    pub refinement_triples: usize,
    /// Degree-{2,3} graphs for the extraction property.
    pub subcubic_graphs: usize,
    /// Random families for the forest dichotomy property.
    pub helly_families: usize,
    pub seed: u64,
    pub workers: usize,
    pub limits: OracleLimits,
}

impl Default for SelftestConfig {
    fn default() -> SelftestConfig {
        SelftestConfig {
            instances: 240,
            min_compared: 60,
            refinement_triples: 120,
            subcubic_graphs: 120,
            helly_families: 90,
            seed: 0,
            workers: default_workers(),
            limits: OracleLimits::default(),
        }
    }
}

/// Full-scale configuration used by the acceptance harness.
pub fn acceptance_scale() -> SelftestConfig {
    SelftestConfig {
        instances: 1000,
        min_compared: 200,
        refinement_triples: 500,
        subcubic_graphs: 300,
        helly_families: 300,
        ..SelftestConfig::default()
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Outcome of one property: name plus either a pass detail or the first
/// failure reasons.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub name: &'static str,
    pub outcome: Result<String, String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

/// Applies `f` to `0..count` across `workers` threads; worker `w` owns the
/// indices congruent to `w`, and results are merged back by index, so the
/// output order never depends on scheduling.
pub fn par_map<T, F>(count: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.clamp(1, count.max(1));
    let mut slots: Vec<Option<T>> = Vec::with_capacity(count);
    slots.resize_with(count, || None);
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let mut part = Vec::new();
                    let mut i = w;
                    while i < count {
                        part.push((i, f(i)));
                        i += workers;
                    }
                    part
                })
            })
            .collect();
        for h in handles {
            for (i, value) in h.join().expect("suite worker panicked") {
                slots[i] = Some(value);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("index covered")).collect()
}

fn failure(reasons: Vec<String>) -> Result<String, String> {
    const SHOWN: usize = 3;
    let mut text = reasons[..reasons.len().min(SHOWN)].join("; ");
    if reasons.len() > SHOWN {
        text.push_str(&format!(" (+{} more)", reasons.len() - SHOWN));
    }
    Err(text)
}

/// Runs every property and returns one report per property, in a fixed
/// order.
pub fn run_suite(config: &SelftestConfig) -> Vec<PropertyReport> {
    let instances = corpus(config.instances, config.seed);

    let started = Instant::now();
    let solved: Vec<Result<Certificate, String>> = par_map(instances.len(), config.workers, |i| {
        let inst = &instances[i];
        let cert = solve(&inst.graph, inst.k, inst.d).map_err(|e| format!("{}: {e}", inst.name))?;
        verify(&inst.graph, &cert, inst.k, inst.d).map_err(|e| format!("{}: {e}", inst.name))?;
        Ok(cert)
    });
    let solve_ms = started.elapsed().as_millis();

    vec![
        dichotomy_totality(&instances, &solved, solve_ms),
        hitting_bound(&instances, &solved),
        packing_bound(&instances, &solved),
        oracle_cross_check(config, &instances, &solved),
        refinement_invariants(config),
        disjoint_cycle_extraction(config),
        forest_helly(config),
        budget_regression(),
        determinism(config, &instances, &solved),
    ]
}

fn dichotomy_totality(
    instances: &[Instance],
    solved: &[Result<Certificate, String>],
    solve_ms: u128,
) -> PropertyReport {
    let failures: Vec<String> = solved.iter().filter_map(|r| r.as_ref().err().cloned()).collect();
    let packs = solved
        .iter()
        .filter(|r| matches!(r, Ok(Certificate::Packing { .. })))
        .count();
    let hits = solved.len() - packs - failures.len();
    let outcome = if !failures.is_empty() {
        failure(failures)
    } else if solve_ms > 600_000 {
        Err(format!("corpus took {solve_ms} ms, over the 10 minute cap"))
    } else {
        Ok(format!(
            "{} instances solved and verified ({packs} packings, {hits} hittings) in {solve_ms} ms",
            instances.len()
        ))
    };
    PropertyReport { name: "dichotomy-totality", outcome }
}

fn hitting_bound(instances: &[Instance], solved: &[Result<Certificate, String>]) -> PropertyReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (inst, cert) in instances.iter().zip(solved) {
        let Ok(Certificate::Hitting { k, d, x, radius, .. }) = cert else {
            continue;
        };
        checked += 1;
        if BigUint::from(x.len()) > f_bound(*k) {
            failures.push(format!("{}: |X| = {} over budget", inst.name, x.len()));
        }
        if *radius != g_bound(*d) {
            failures.push(format!("{}: radius {} is not 19d", inst.name, radius));
        }
        let ball = inst.graph.ball(&x.iter().copied().collect(), *radius);
        if inst.graph.remove_vertices(&ball).cycle_rank() != 0 {
            failures.push(format!("{}: residue is not a forest", inst.name));
        }
    }
    let outcome = if failures.is_empty() {
        Ok(format!("{checked} hitting certificates within budget and radius"))
    } else {
        failure(failures)
    };
    PropertyReport { name: "hitting-bound", outcome }
}

fn packing_bound(instances: &[Instance], solved: &[Result<Certificate, String>]) -> PropertyReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (inst, cert) in instances.iter().zip(solved) {
        let Ok(Certificate::Packing { k, d, cycles }) = cert else {
            continue;
        };
        checked += 1;
        if cycles.len() != *k {
            failures.push(format!("{}: {} cycles for k = {k}", inst.name, cycles.len()));
            continue;
        }
        let parsed: Result<Vec<Cycle>, _> = cycles
            .iter()
            .map(|seq| Cycle::new(&inst.graph, seq.clone()))
            .collect();
        match parsed {
            Ok(cs) => {
                if is_d_packing(&inst.graph, &cs, *d) != Ok(true) {
                    failures.push(format!("{}: cycles within distance {d}", inst.name));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", inst.name)),
        }
    }
    let outcome = if failures.is_empty() {
        Ok(format!("{checked} packing certificates strictly separated"))
    } else {
        failure(failures)
    };
    PropertyReport { name: "packing-bound", outcome }
}

fn oracle_cross_check(
    config: &SelftestConfig,
    instances: &[Instance],
    solved: &[Result<Certificate, String>],
) -> PropertyReport {
    let mut failures = Vec::new();
    let mut compared = 0usize;
    let mut refused = 0usize;
    for (inst, cert) in instances.iter().zip(solved) {
        if inst.graph.n() > 14 {
            continue;
        }
        match cert {
            Ok(Certificate::Packing { k, d, .. }) => {
                match max_d_packing(&inst.graph, *d, &config.limits) {
                    Ok(best) if best >= *k => compared += 1,
                    Ok(best) => {
                        failures.push(format!("{}: best packing {best} below k = {k}", inst.name))
                    }
                    Err(_) => refused += 1,
                }
            }
            Ok(Certificate::Hitting { x, radius, .. }) => {
                match min_ball_hitting(&inst.graph, *radius, &config.limits) {
                    Ok(best) if best <= x.len() => compared += 1,
                    Ok(best) => failures.push(format!(
                        "{}: optimum {best} beats |X| = {}",
                        inst.name,
                        x.len()
                    )),
                    Err(_) => refused += 1,
                }
            }
            Err(_) => {}
        }
    }
    let outcome = if !failures.is_empty() {
        failure(failures)
    } else if compared < config.min_compared {
        Err(format!(
            "only {compared} of the required {} small instances were comparable",
            config.min_compared
        ))
    } else {
        Ok(format!("{compared} small instances cross-checked ({refused} oracle refusals)"))
    };
    PropertyReport { name: "oracle-cross-check", outcome }
}

fn refinement_invariants(config: &SelftestConfig) -> PropertyReport {
    let mut failures = Vec::new();
    let mut done = 0usize;
    let mut batch = 0u64;
    while done < config.refinement_triples && batch < 8 {
        let instances = corpus(config.refinement_triples, config.seed ^ (0xc0ffee + batch));
        for inst in &instances {
            if done >= config.refinement_triples {
                break;
            }
            let Some(seq) = inst.graph.find_cycle_avoiding(&VertexSet::new()) else {
                continue;
            };
            let c = Cycle::new(&inst.graph, seq).expect("search returns a valid cycle");
            let r = 1 + done % 3;
            let set = c.vertex_set();
            match short_or_unicyclic(&inst.graph, &c, r) {
                RefinementOutcome::Unicyclic(u) => {
                    if !is_r_unicyclic(&inst.graph, &u, r) {
                        failures.push(format!("{}: outcome not {r}-unicyclic", inst.name));
                    }
                    if !u.vertex_set().is_subset(&inst.graph.ball(&set, 2 * r)) {
                        failures.push(format!("{}: outcome left the 2r-ball", inst.name));
                    }
                }
                RefinementOutcome::Short(s) => {
                    if s.len() > 6 * r + 2 {
                        failures.push(format!("{}: short outcome has {} edges", inst.name, s.len()));
                    }
                    if !s.vertex_set().is_subset(&inst.graph.ball(&set, 3 * r)) {
                        failures.push(format!("{}: outcome left the 3r-ball", inst.name));
                    }
                }
            }
            done += 1;
        }
        batch += 1;
    }
    let outcome = if !failures.is_empty() {
        failure(failures)
    } else if done < config.refinement_triples {
        Err(format!("only {done} cyclic triples found"))
    } else {
        Ok(format!("{done} refinement triples within their balls and bounds"))
    };
    PropertyReport { name: "refinement-invariants", outcome }
}

/// Degree-{2,3} graph: a full cycle plus chords from a shuffled pairing,
/// skipping pairs already adjacent on the cycle.
fn chorded_cycle(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut edges: Vec<Edge> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for pair in perm.chunks(2) {
        if let [a, b] = *pair {
            let gap = (a + n - b) % n;
            if gap != 1 && gap != n - 1 {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("cycle ids are in range")
}

fn disjoint_cycle_extraction(config: &SelftestConfig) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5fb0);
    let mut failures = Vec::new();
    let mut extractions = 0usize;
    for i in 0..config.subcubic_graphs {
        let n = 3 + (i % 16);
        let g = chorded_cycle(n, &mut rng);
        let sub = SubcubicGraph::new(g.clone()).expect("construction keeps degrees at 2 and 3");
        for k in 1..=2usize {
            let feasible = match max_d_packing(&g, 0, &config.limits) {
                Ok(best) => best >= k,
                Err(_) => continue,
            };
            if !feasible {
                if sub.branch_vertices() >= s_bound(k) {
                    failures.push(format!(
                        "n = {n}: {} branch vertices but no {k} disjoint cycles",
                        sub.branch_vertices()
                    ));
                }
                continue;
            }
            let found = sub.find_disjoint_cycles(k);
            extractions += 1;
            if found.len() != k || is_d_packing(&g, &found, 0) != Ok(true) {
                failures.push(format!("n = {n}: extraction for k = {k} is not disjoint"));
            }
        }
    }
    let outcome = if failures.is_empty() {
        Ok(format!("{extractions} extractions matched the exhaustive baseline"))
    } else {
        failure(failures)
    };
    PropertyReport { name: "disjoint-cycle-extraction", outcome }
}

fn random_forest(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        if rng.gen_bool(0.85) {
            edges.push((rng.gen_range(0..v), v));
        }
    }
    Graph::from_edges(n, &edges).expect("parent links are in range")
}

fn random_connected_subset(g: &Graph, rng: &mut ChaCha8Rng) -> VertexSet {
    let start = rng.gen_range(0..g.n());
    let mut set: VertexSet = [start].into_iter().collect();
    let target = 1 + rng.gen_range(0..4usize);
    while set.len() < target {
        let frontier: Vec<usize> = set
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().copied())
            .filter(|w| !set.contains(w))
            .collect();
        if frontier.is_empty() {
            break;
        }
        set.insert(frontier[rng.gen_range(0..frontier.len())]);
    }
    set
}

fn forest_helly(config: &SelftestConfig) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x4e11);
    let mut failures = Vec::new();
    let mut packs = 0usize;
    let mut hits = 0usize;
    for family in 0..config.helly_families {
        let c = 1 + family % 3;
        let k = 1 + rng.gen_range(1..4usize);
        if family % 2 == 0 {
            // Tuple route: one forest per coordinate, sizes totalling <= 12.
            let per = 12 / c;
            let graphs: Vec<Graph> = (0..c)
                .map(|_| random_forest(2 + rng.gen_range(0..per.max(3) - 1), &mut rng))
                .collect();
            let forests: Vec<RootedForest> = graphs
                .iter()
                .map(|g| RootedForest::new(g.clone()).expect("generated as a forest"))
                .collect();
            let count = 1 + rng.gen_range(0..6usize);
            let tuples: Vec<ForestTuple> = (0..count)
                .map(|_| {
                    let mut entries: Vec<Option<VertexSet>> = (0..c)
                        .map(|coord| {
                            rng.gen_bool(0.7)
                                .then(|| random_connected_subset(&graphs[coord], &mut rng))
                        })
                        .collect();
                    if entries.iter().all(|e| e.is_none()) {
                        entries[0] = Some(random_connected_subset(&graphs[0], &mut rng));
                    }
                    ForestTuple::new(&forests, entries).expect("entries are connected")
                })
                .collect();
            match tuples_pack_or_hit(&forests, &tuples, k) {
                PackOrHit::Pack(indices) => {
                    packs += 1;
                    if indices.len() != k {
                        failures.push(format!("family {family}: packed {}", indices.len()));
                    }
                    for (a, &i) in indices.iter().enumerate() {
                        for &j in &indices[a + 1..] {
                            if !ForestTuple::independent(&tuples[i], &tuples[j]) {
                                failures.push(format!("family {family}: tuples {i},{j} clash"));
                            }
                        }
                    }
                }
                PackOrHit::Hit(sets) => {
                    hits += 1;
                    let total: usize = sets.iter().map(|s| s.len()).sum();
                    if BigUint::from(total) > ell(k, c) {
                        failures.push(format!("family {family}: hit size {total} over budget"));
                    }
                    if c == 1 && total > k - 1 {
                        failures.push(format!("family {family}: hit size {total} over k - 1"));
                    }
                    for (t, tuple) in tuples.iter().enumerate() {
                        let covered = tuple
                            .entries()
                            .iter()
                            .zip(&sets)
                            .any(|(e, x)| e.as_ref().is_some_and(|s| !s.is_disjoint(x)));
                        if !covered {
                            failures.push(format!("family {family}: tuple {t} uncovered"));
                        }
                    }
                }
            }
        } else {
            // Subgraph route: one forest, members with at most c components.
            let g = random_forest(4 + rng.gen_range(0..9usize), &mut rng);
            let count = 1 + rng.gen_range(0..6usize);
            let members: Vec<VertexSet> = (0..count)
                .map(|_| {
                    let mut m = VertexSet::new();
                    for _ in 0..(1 + rng.gen_range(0..c)) {
                        m.extend(random_connected_subset(&g, &mut rng));
                    }
                    m
                })
                .collect();
            // The coarse route is the differential twin: it must agree on
            // validity, but only the refined route promises the ell_star
            // budget.
            let route = if family % 4 == 1 { HitRoute::Refined } else { HitRoute::Coarse };
            match subgraphs_pack_or_hit(&g, &members, k, c, route)
                .expect("members are nonempty, in range, and within the component cap")
            {
                PackOrHit::Pack(indices) => {
                    packs += 1;
                    if indices.len() != k {
                        failures.push(format!("family {family}: packed {}", indices.len()));
                    }
                    for (a, &i) in indices.iter().enumerate() {
                        for &j in &indices[a + 1..] {
                            if !members[i].is_disjoint(&members[j]) {
                                failures.push(format!("family {family}: members {i},{j} clash"));
                            }
                        }
                    }
                }
                PackOrHit::Hit(sets) => {
                    hits += 1;
                    let merged = &sets[0];
                    if route == HitRoute::Refined && BigUint::from(merged.len()) > ell_star(k, c) {
                        failures.push(format!("family {family}: hit size {} over budget", merged.len()));
                    }
                    for (m, member) in members.iter().enumerate() {
                        if member.is_disjoint(merged) {
                            failures.push(format!("family {family}: member {m} uncovered"));
                        }
                    }
                }
            }
            if route == HitRoute::Coarse {
                match subgraphs_pack_or_hit(&g, &members, k, c, HitRoute::Refined)
                    .expect("the refined twin accepts the same family")
                {
                    PackOrHit::Pack(indices) => {
                        if indices.len() != k {
                            failures.push(format!("family {family}: twin packed {}", indices.len()));
                        }
                    }
                    PackOrHit::Hit(sets) => {
                        if BigUint::from(sets[0].len()) > ell_star(k, c) {
                            failures.push(format!(
                                "family {family}: twin hit size {} over budget",
                                sets[0].len()
                            ));
                        }
                        if members.iter().any(|m| m.is_disjoint(&sets[0])) {
                            failures.push(format!("family {family}: twin leaves a member uncovered"));
                        }
                    }
                }
            }
        }
    }
    let outcome = if failures.is_empty() {
        Ok(format!(
            "{} families within budget ({packs} packings, {hits} hittings)",
            config.helly_families
        ))
    } else {
        failure(failures)
    };
    PropertyReport { name: "forest-helly", outcome }
}

fn budget_regression() -> PropertyReport {
    let mut failures = Vec::new();
    let checks: [(&str, bool); 8] = [
        (
            "budgets(2,1)",
            budgets(2, 1) == (BigUint::from(1u32), BigUint::from(1u32)),
        ),
        ("ell(2,2)", ell(2, 2) == BigUint::from(9u32)),
        ("ell_star(2,2)", ell_star(2, 2) == BigUint::from(10u32)),
        ("ell(2,3)", ell(2, 3) == BigUint::from(529u32)),
        ("ell_star(2,3)", ell_star(2, 3) == BigUint::from(18_102_410u32)),
        ("f_bound(1)", f_bound(1) == BigUint::from(18_102_416u32)),
        ("f_bound(2) digits", f_bound(2).to_string().len() == 29),
        (
            "s_bound table and g_bound",
            [2, 40, 75, 112, 151, 191]
                .iter()
                .enumerate()
                .all(|(i, &s)| s_bound(i + 1) == s)
                && g_bound(1) == 19
                && g_bound(3) == 57,
        ),
    ];
    for (name, ok) in checks {
        if !ok {
            failures.push(format!("{name} drifted from its pinned value"));
        }
    }
    let outcome = if failures.is_empty() {
        Ok(format!("{} pinned budget values stable", checks.len()))
    } else {
        failure(failures)
    };
    PropertyReport { name: "budget-regression", outcome }
}

fn determinism(
    config: &SelftestConfig,
    instances: &[Instance],
    solved: &[Result<Certificate, String>],
) -> PropertyReport {
    let first: Vec<Option<String>> = solved
        .iter()
        .map(|r| {
            r.as_ref()
                .ok()
                .map(|c| serde_json::to_string(c).expect("certificates serialize"))
        })
        .collect();
    let again: Vec<Option<String>> = par_map(instances.len(), config.workers, |i| {
        let inst = &instances[i];
        solve(&inst.graph, inst.k, inst.d)
            .ok()
            .map(|c| serde_json::to_string(&c).expect("certificates serialize"))
    });
    let mut failures = Vec::new();
    let mut hasher = DefaultHasher::new();
    for (inst, (a, b)) in instances.iter().zip(first.iter().zip(&again)) {
        if a != b {
            failures.push(format!("{}: reruns disagree", inst.name));
        }
        a.hash(&mut hasher);
    }
    let outcome = if failures.is_empty() {
        Ok(format!(
            "{} certificates byte-identical across reruns (corpus hash {:016x})",
            instances.len(),
            hasher.finish()
        ))
    } else {
        failure(failures)
    };
    PropertyReport { name: "determinism", outcome }
}
