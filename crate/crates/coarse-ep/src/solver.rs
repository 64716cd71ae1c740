//! The full dichotomy pipeline and its certificates.
//!
//! [`solve`] takes any graph together with a pair count `k` and a gap `d`
//! and always returns one of two verified certificates: a packing of `k`
//! cycles pairwise more than `d` apart, or a hitting set `X` of at most
//! [`f_bound`]`(k)` vertices whose radius-[`g_bound`]`(d)` balls meet every
//! cycle. The pipeline seeds a family of far-apart compressible cycles,
//! runs the per-cycle and per-pair analyses, lifts the leftover territory
//! into a forest of disjoint coordinate copies, and closes with the forest
//! dichotomy over walk shadows. [`verify`] re-checks any certificate from
//! first principles, independent of how it was produced.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycle::{is_d_packing, is_r_unicyclic, short_or_unicyclic, Cycle, RefinementOutcome};
use crate::graph::{edge, Edge, Graph, VertexSet};
use crate::helly::{ell_star, subgraphs_pack_or_hit, HitRoute, PackOrHit};
use crate::machinery::{all_the_ys, tree_path, AllYsOutcome};
use crate::subcubic::{s_bound, SubcubicGraph};
use crate::unicycle::BfsUnicycle;

/// Cap on good-tuple enumeration. Instances that would exceed it are
/// rejected with [`SolverError::TupleCapExceeded`] instead of thrashing.
pub const TUPLE_CAP: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("gap d must be at least 1, got {d}")]
    BadGap { d: usize },
    #[error("instance too large: {found} candidate tuples exceed the cap of {cap}")]
    TupleCapExceeded { found: usize, cap: usize },
}

mod budget_serde {
    use num_bigint::BigUint;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(b: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&b.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// One side of the dichotomy, as produced by [`solve`] and checked by
/// [`verify`]. The hitting budget can exceed u64 even for small `k`, so it
/// travels as a decimal string in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Certificate {
    Packing {
        k: usize,
        d: usize,
        cycles: Vec<Vec<usize>>,
    },
    Hitting {
        k: usize,
        d: usize,
        #[serde(rename = "X")]
        x: Vec<usize>,
        radius: usize,
        #[serde(with = "budget_serde")]
        budget: BigUint,
    },
}

/// Hitting-side size budget: how many ball centers the certificate may use.
///
/// Panics when `k` is zero.
pub fn f_bound(k: usize) -> BigUint {
    assert!(k >= 1, "budget undefined for k = 0");
    let s = s_bound(k);
    let k_star = k + s.div_ceil(2);
    let flat = 2 * k + 2 * k * k + (k * (k - 1) / 2 + k) * s;
    BigUint::from(flat) + ell_star(k_star, 3)
}

/// Hitting-side ball radius.
///
/// Panics when `d` is zero.
pub fn g_bound(d: usize) -> usize {
    assert!(d >= 1, "radius undefined for d = 0");
    19 * d
}

/// Seed cycles left over when the greedy sweep cannot reach `k`: a family
/// of distance-compressible cycles pairwise more than `2d` apart, and a
/// family of short cycles (length at most `6d + 2`) pairwise more than `d`
/// apart. Every cycle of the graph comes within `4d` of one of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedState {
    pub c_list: Vec<Cycle>,
    pub dprime_list: Vec<Cycle>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedOutcome {
    Packing(Vec<Cycle>),
    Seeds(SeedState),
}

/// Greedy seed sweep: repeatedly find a cycle avoiding the `4d`-balls of
/// everything collected so far and refine it to a nearby cycle that is
/// either alone in its `d`-ball or short. Either one of the two families
/// reaches size `k` (a packing) or the sweep exhausts the graph and the
/// leftover families certify that every cycle is near a seed.
pub fn seed_cycles(g: &Graph, k: usize, d: usize) -> Result<SeedOutcome, SolverError> {
    if d == 0 {
        return Err(SolverError::BadGap { d });
    }
    if k == 0 {
        return Ok(SeedOutcome::Packing(Vec::new()));
    }
    let mut c_list: Vec<Cycle> = Vec::new();
    let mut dprime_list: Vec<Cycle> = Vec::new();
    let mut iterations = 0usize;
    loop {
        let mut avoid = VertexSet::new();
        for c in c_list.iter().chain(&dprime_list) {
            avoid.extend(g.ball(&c.vertex_set(), 4 * d));
        }
        let Some(seq) = g.find_cycle_avoiding(&avoid) else {
            break;
        };
        iterations += 1;
        assert!(iterations < 2 * k, "sweep must settle in 2k - 1 steps");
        let found = Cycle::new(g, seq).expect("search returns a valid cycle");
        match short_or_unicyclic(g, &found, d) {
            RefinementOutcome::Unicyclic(c) => {
                assert!(is_r_unicyclic(g, &c, d), "refined cycle is alone in its d-ball");
                // The refined cycle stays within 2d of one that cleared
                // every 4d-ball, so it keeps a gap over 2d to its peers.
                for prev in &c_list {
                    assert!(
                        g.distance(&prev.vertex_set(), &c.vertex_set()).exceeds(2 * d),
                        "compressible seeds keep pairwise gap over 2d"
                    );
                }
                c_list.push(c);
                if c_list.len() == k {
                    assert_eq!(is_d_packing(g, &c_list, d), Ok(true));
                    return Ok(SeedOutcome::Packing(c_list));
                }
            }
            RefinementOutcome::Short(c) => {
                assert!(c.len() <= 6 * d + 2, "short seeds stay short");
                for prev in &dprime_list {
                    assert!(
                        g.distance(&prev.vertex_set(), &c.vertex_set()).exceeds(d),
                        "short seeds keep pairwise gap over d"
                    );
                }
                dprime_list.push(c);
                if dprime_list.len() == k {
                    assert_eq!(is_d_packing(g, &dprime_list, d), Ok(true));
                    return Ok(SeedOutcome::Packing(dprime_list));
                }
            }
        }
    }
    Ok(SeedOutcome::Seeds(SeedState { c_list, dprime_list }))
}

/// A good tuple that survived the admissibility filter: two ball-exit
/// edges joined through forest territory, the three legs of the walk they
/// span, and the walk's per-coordinate shadow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleTuple {
    /// Exit edge of cycle `i`: one endpoint at depth exactly `5d` in the
    /// cycle's ball, the other in forest territory.
    pub e: Edge,
    pub i: usize,
    /// Exit edge of cycle `j`, distinct from `e` but possibly with `j = i`.
    pub e_prime: Edge,
    pub j: usize,
    /// From a vertex of cycle `i` up to the ball endpoint of `e`; exactly
    /// `5d` edges.
    pub first_leg: Vec<usize>,
    /// From the forest endpoint of `e` to the forest endpoint of
    /// `e_prime`, inside one forest component.
    pub forest_leg: Vec<usize>,
    /// From the ball endpoint of `e_prime` down to a vertex of cycle `j`;
    /// exactly `5d` edges.
    pub second_leg: Vec<usize>,
    /// Coordinate shadows: entry 0 is the `d`-ball of the forest leg,
    /// entry `1 + l` the `d`-ball of the legs inside cycle `l`'s territory.
    pub psi: Vec<VertexSet>,
}

impl AdmissibleTuple {
    pub fn walk_vertices(&self) -> VertexSet {
        self.first_leg
            .iter()
            .chain(&self.forest_leg)
            .chain(&self.second_leg)
            .copied()
            .collect()
    }

    pub fn walk_edges(&self) -> BTreeSet<Edge> {
        let mut edges = BTreeSet::new();
        for leg in [&self.first_leg, &self.forest_leg, &self.second_leg] {
            for w in leg.windows(2) {
                edges.insert(edge(w[0], w[1]));
            }
        }
        edges.insert(self.e);
        edges.insert(self.e_prime);
        edges
    }
}

/// Shared ground truth for tuple enumeration: the aggregated cover, the
/// two forest-territory levels, and the per-cycle forest levels.
struct Frame {
    r: usize,
    yhat: VertexSet,
    f0_set: VertexSet,
    f0m_set: VertexSet,
    /// Per cycle: its radius-r ball minus the cover.
    fi_sets: Vec<VertexSet>,
    /// Per cycle: its radius-(r - d) ball.
    ball_rmd: Vec<VertexSet>,
}

impl Frame {
    fn build(
        g: &Graph,
        seeds: &SeedState,
        unicycles: &[BfsUnicycle],
        y1: &VertexSet,
        d: usize,
    ) -> Frame {
        let p = seeds.c_list.len();
        assert_eq!(unicycles.len(), p, "one spanning structure per seed cycle");
        for (c, u) in seeds.c_list.iter().zip(unicycles) {
            assert_eq!(u.root_cycle(), c, "structures follow the seed order");
        }
        let r = 6 * d;

        let mut y0 = VertexSet::new();
        for c in &seeds.dprime_list {
            y0.extend(g.ball(&c.vertex_set(), 4 * d));
        }
        let y2: VertexSet = seeds.c_list.iter().map(|c| c.vertices()[0]).collect();
        let mut yhat = y0;
        yhat.extend(y1.iter().copied());
        yhat.extend(y2.iter().copied());

        let ball_rm2d: Vec<VertexSet> = seeds
            .c_list
            .iter()
            .map(|c| g.ball(&c.vertex_set(), r - 2 * d))
            .collect();
        let ball_rmd: Vec<VertexSet> = seeds
            .c_list
            .iter()
            .map(|c| g.ball(&c.vertex_set(), r - d))
            .collect();

        let f0_set: VertexSet = g
            .vertices()
            .filter(|v| !yhat.contains(v) && !ball_rm2d.iter().any(|b| b.contains(v)))
            .collect();
        let f0m_set: VertexSet = g
            .vertices()
            .filter(|v| !yhat.contains(v) && !ball_rmd.iter().any(|b| b.contains(v)))
            .collect();
        assert_eq!(
            g.induced(&f0_set).cycle_rank(),
            0,
            "forest territory must be cycle-free"
        );

        let fi_sets: Vec<VertexSet> = unicycles
            .iter()
            .map(|u| u.ball().iter().copied().filter(|v| !yhat.contains(v)).collect())
            .collect();
        for (u, set) in unicycles.iter().zip(&fi_sets) {
            let induced = g.induced(set);
            assert_eq!(induced.cycle_rank(), 0, "cycle territory minus cover is a forest");
            let tree_edges = u.edges();
            for e in induced.edges() {
                assert!(tree_edges.contains(&e), "cover leaves only structure edges");
            }
        }

        Frame {
            r,
            yhat,
            f0_set,
            f0m_set,
            fi_sets,
            ball_rmd,
        }
    }
}

struct ExitEdge {
    e: Edge,
    i: usize,
    ball_end: usize,
    forest_end: usize,
    comp: usize,
}

fn enumerate_with_frame(
    g: &Graph,
    frame: &Frame,
    unicycles: &[BfsUnicycle],
    d: usize,
) -> Result<Vec<AdmissibleTuple>, SolverError> {
    let p = unicycles.len();
    let r = frame.r;

    let comps = g.components_within(&frame.f0m_set);
    let mut comp_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (idx, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of.insert(v, idx);
        }
    }

    let mut exits: Vec<ExitEdge> = Vec::new();
    for (i, ball) in frame.ball_rmd.iter().enumerate() {
        for (a, b) in g.edges() {
            let (ball_end, forest_end) = if ball.contains(&a) && frame.f0m_set.contains(&b) {
                (a, b)
            } else if ball.contains(&b) && frame.f0m_set.contains(&a) {
                (b, a)
            } else {
                continue;
            };
            assert_eq!(
                unicycles[i].depth(ball_end),
                r - d,
                "exit edges leave at depth exactly r - d"
            );
            exits.push(ExitEdge {
                e: edge(a, b),
                i,
                ball_end,
                forest_end,
                comp: comp_of[&forest_end],
            });
        }
    }

    let mut by_comp: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (idx, x) in exits.iter().enumerate() {
        by_comp.entry(x.comp).or_default().push(idx);
    }
    let candidates: usize = by_comp.values().map(|v| v.len() * v.len().saturating_sub(1)).sum();
    if candidates > TUPLE_CAP {
        return Err(SolverError::TupleCapExceeded {
            found: candidates,
            cap: TUPLE_CAP,
        });
    }

    let f0m_graph = g.induced(&frame.f0m_set);
    let mut tuples = Vec::new();
    for members in by_comp.values() {
        for &ai in members {
            for &bi in members {
                if ai == bi || exits[ai].e == exits[bi].e {
                    continue;
                }
                let (first, second) = (&exits[ai], &exits[bi]);
                let mut first_leg = unicycles[first.i].leg(first.ball_end);
                first_leg.reverse();
                let forest_leg = tree_path(&f0m_graph, first.forest_end, second.forest_end);
                let second_leg = unicycles[second.i].leg(second.ball_end);
                assert_eq!(first_leg.len(), r - d + 1);
                assert_eq!(second_leg.len(), r - d + 1);

                let tuple = AdmissibleTuple {
                    e: first.e,
                    i: first.i,
                    e_prime: second.e,
                    j: second.i,
                    first_leg,
                    forest_leg,
                    second_leg,
                    psi: Vec::new(),
                };
                if !g.ball(&tuple.walk_vertices(), d).is_disjoint(&frame.yhat) {
                    continue;
                }

                let mut psi = vec![VertexSet::new(); p + 1];
                psi[0] = g.ball(&tuple.forest_leg.iter().copied().collect(), d);
                let first_ball = g.ball(&tuple.first_leg.iter().copied().collect(), d);
                let second_ball = g.ball(&tuple.second_leg.iter().copied().collect(), d);
                psi[1 + tuple.i].extend(first_ball);
                psi[1 + tuple.j].extend(second_ball);

                // Shadow shape: the forest shadow is one connected piece of
                // forest territory; the cycle shadows stay in their own
                // territory and contribute at most two pieces in total.
                assert!(psi[0].is_subset(&frame.f0_set));
                assert_eq!(g.components_within(&psi[0]).len(), 1);
                let mut cycle_pieces = 0;
                for l in 0..p {
                    let s = &psi[1 + l];
                    if s.is_empty() {
                        continue;
                    }
                    assert!(s.is_subset(&frame.fi_sets[l]));
                    let pieces = g.components_within(s).len();
                    assert!(pieces <= 2);
                    cycle_pieces += pieces;
                }
                assert!(cycle_pieces <= 2, "cycle shadows form at most two pieces");

                tuples.push(AdmissibleTuple { psi, ..tuple });
            }
        }
    }
    Ok(tuples)
}

/// All admissible tuples of the instance, in deterministic order: for each
/// forest component, ordered pairs of its exit edges (ascending by cycle
/// index, then by edge), keeping those whose walk's `d`-ball misses the
/// aggregated cover. Shape invariants of every surviving tuple are
/// asserted.
pub fn enumerate_admissible(
    g: &Graph,
    seeds: &SeedState,
    unicycles: &[BfsUnicycle],
    y1: &VertexSet,
    d: usize,
) -> Result<Vec<AdmissibleTuple>, SolverError> {
    if d == 0 {
        return Err(SolverError::BadGap { d });
    }
    let frame = Frame::build(g, seeds, unicycles, y1, d);
    enumerate_with_frame(g, &frame, unicycles, d)
}

fn finished(g: &Graph, k: usize, d: usize, cert: Certificate) -> Certificate {
    if let Err(reason) = verify(g, &cert, k, d) {
        panic!("internal error: certificate failed verification: {reason}");
    }
    cert
}

fn packing_cert(g: &Graph, k: usize, d: usize, cycles: Vec<Cycle>) -> Certificate {
    assert_eq!(cycles.len(), k);
    finished(
        g,
        k,
        d,
        Certificate::Packing {
            k,
            d,
            cycles: cycles.iter().map(|c| c.vertices().to_vec()).collect(),
        },
    )
}

fn hitting_cert(g: &Graph, k: usize, d: usize, x: VertexSet) -> Certificate {
    finished(
        g,
        k,
        d,
        Certificate::Hitting {
            k,
            d,
            x: x.into_iter().collect(),
            radius: g_bound(d),
            budget: f_bound(k),
        },
    )
}

/// Decides the dichotomy for `(G, k, d)` and returns a certificate that has
/// already passed [`verify`]. `k = 0` yields an empty packing.
pub fn solve(g: &Graph, k: usize, d: usize) -> Result<Certificate, SolverError> {
    if d == 0 {
        return Err(SolverError::BadGap { d });
    }
    if k == 0 {
        return Ok(finished(
            g,
            k,
            d,
            Certificate::Packing {
                k,
                d,
                cycles: Vec::new(),
            },
        ));
    }
    let r = 6 * d;

    let seeds = match seed_cycles(g, k, d)? {
        SeedOutcome::Packing(cycles) => return Ok(packing_cert(g, k, d, cycles)),
        SeedOutcome::Seeds(s) => s,
    };

    let (unicycles, x1, y1) = match all_the_ys(g, &seeds.c_list, r, d, k)
        .expect("seed cycles meet the aggregate preconditions")
    {
        AllYsOutcome::Packing(cycles) => return Ok(packing_cert(g, k, d, cycles)),
        AllYsOutcome::Control { unicycles, x, y } => (unicycles, x, y),
    };

    let x0: VertexSet = seeds.dprime_list.iter().map(|c| c.vertices()[0]).collect();
    let y2: VertexSet = seeds.c_list.iter().map(|c| c.vertices()[0]).collect();
    let mut xhat = x0;
    xhat.extend(x1.iter().copied());
    xhat.extend(y2.iter().copied());
    let s = s_bound(k);
    assert!(
        xhat.len() < 2 * k + 2 * k * k + (k * (k - 1) / 2 + k) * s,
        "aggregated centers exceed their budget"
    );

    let frame = Frame::build(g, &seeds, &unicycles, &y1, d);
    assert!(
        frame.yhat.is_subset(&g.ball(&xhat, 13 * d)),
        "aggregated cover escapes the center balls"
    );

    let tuples = enumerate_with_frame(g, &frame, &unicycles, d)?;
    if tuples.is_empty() {
        // With no admissible tuple, every cycle already meets the cover's
        // radius-r ball, which sits inside the centers' radius-19d ball.
        return Ok(hitting_cert(g, k, d, xhat));
    }

    // Disjoint coordinate copies: forest territory is coordinate 0, each
    // cycle's cover-free ball gets its own coordinate.
    let p = seeds.c_list.len();
    let mut star_id: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut back: Vec<usize> = Vec::new();
    let mut star_edges: Vec<Edge> = Vec::new();
    for l in 0..=p {
        let set = if l == 0 { &frame.f0_set } else { &frame.fi_sets[l - 1] };
        for &v in set {
            star_id.insert((l, v), back.len());
            back.push(v);
        }
        for &v in set {
            for &w in g.neighbors(v) {
                if w > v && set.contains(&w) {
                    star_edges.push((star_id[&(l, v)], star_id[&(l, w)]));
                }
            }
        }
    }
    let star = Graph::from_edges(back.len(), &star_edges).expect("copies stay in range");
    assert_eq!(star.cycle_rank(), 0, "coordinate copies form a forest");

    let mut members: Vec<VertexSet> = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let mut m = VertexSet::new();
        for (l, s) in t.psi.iter().enumerate() {
            for &v in s {
                m.insert(star_id[&(l, v)]);
            }
        }
        assert!(star.components_within(&m).len() <= 3);
        members.push(m);
    }

    let k_star = k + s.div_ceil(2);
    match subgraphs_pack_or_hit(&star, &members, k_star, 3, HitRoute::Refined)
        .expect("forest and member shapes were asserted")
    {
        PackOrHit::Pack(indices) => {
            let chosen: Vec<&AdmissibleTuple> = indices.iter().map(|&i| &tuples[i]).collect();
            let walks: Vec<VertexSet> = chosen.iter().map(|t| t.walk_vertices()).collect();
            for a in 0..chosen.len() {
                for b in (a + 1)..chosen.len() {
                    for l in 0..=p {
                        assert!(
                            chosen[a].psi[l].is_disjoint(&chosen[b].psi[l]),
                            "chosen shadows are disjoint per coordinate"
                        );
                    }
                    assert!(
                        g.distance(&walks[a], &walks[b]).exceeds(d),
                        "disjoint shadows force walks more than d apart"
                    );
                }
            }

            let mut walk_cycles: Vec<Cycle> = Vec::new();
            let mut path_tuples: Vec<&AdmissibleTuple> = Vec::new();
            for t in &chosen {
                let edges: Vec<Edge> = t.walk_edges().into_iter().collect();
                let wg = Graph::from_edges(g.n(), &edges).expect("walk edges are graph edges");
                if wg.cycle_rank() > 0 {
                    let seq = wg
                        .find_cycle_avoiding(&VertexSet::new())
                        .expect("positive rank contains a cycle");
                    walk_cycles.push(Cycle::new(g, seq).expect("walk cycle is a graph cycle"));
                } else {
                    path_tuples.push(t);
                }
            }
            if walk_cycles.len() >= k {
                walk_cycles.truncate(k);
                return Ok(packing_cert(g, k, d, walk_cycles));
            }

            // Fewer than k walks close up, so enough walks are clean paths
            // to fund the sparse-graph extraction: every path endpoint is a
            // degree-3 vertex of the union below.
            assert!(path_tuples.len() > k_star - k);
            let mut used: BTreeSet<usize> = BTreeSet::new();
            for t in &path_tuples {
                used.insert(t.i);
                used.insert(t.j);
            }
            let mut union_edges: BTreeSet<Edge> = BTreeSet::new();
            for &idx in &used {
                union_edges.extend(seeds.c_list[idx].edge_set());
            }
            for t in &path_tuples {
                union_edges.extend(t.walk_edges());
            }
            let edge_list: Vec<Edge> = union_edges.into_iter().collect();
            let host = Graph::from_edges(g.n(), &edge_list).expect("union stays in range");
            let sub = SubcubicGraph::new(host)
                .expect("path walks meet seed cycles only at their endpoints");
            assert!(sub.branch_vertices() >= s);
            Ok(packing_cert(g, k, d, sub.find_disjoint_cycles(k)))
        }
        PackOrHit::Hit(sets) => {
            let x3: VertexSet = sets.iter().flatten().map(|&sv| back[sv]).collect();
            for t in &tuples {
                assert!(
                    t.psi.iter().any(|s| !s.is_disjoint(&x3)),
                    "every admissible tuple is hit in some coordinate"
                );
            }
            let mut x = xhat;
            x.extend(x3);
            assert!(BigUint::from(x.len()) <= f_bound(k));
            Ok(hitting_cert(g, k, d, x))
        }
    }
}

/// Re-checks a certificate against `(G, k, d)` from first principles. The
/// failure reason names the first violated clause.
pub fn verify(g: &Graph, cert: &Certificate, k: usize, d: usize) -> Result<(), String> {
    match cert {
        Certificate::Packing {
            k: ck,
            d: cd,
            cycles,
        } => {
            if *ck != k {
                return Err(format!("certificate is for k = {ck}, expected {k}"));
            }
            if *cd != d {
                return Err(format!("certificate is for d = {cd}, expected {d}"));
            }
            if cycles.len() != k {
                return Err(format!("packing has {} cycles, expected {k}", cycles.len()));
            }
            let mut parsed = Vec::with_capacity(cycles.len());
            for (i, seq) in cycles.iter().enumerate() {
                match Cycle::new(g, seq.clone()) {
                    Ok(c) => parsed.push(c),
                    Err(e) => return Err(format!("cycle {i} is invalid: {e}")),
                }
            }
            match is_d_packing(g, &parsed, d) {
                Ok(true) => Ok(()),
                Ok(false) => Err(format!("cycle distance not > {d}")),
                Err(e) => Err(e.to_string()),
            }
        }
        Certificate::Hitting {
            k: ck,
            d: cd,
            x,
            radius,
            budget,
        } => {
            if *ck != k {
                return Err(format!("certificate is for k = {ck}, expected {k}"));
            }
            if *cd != d {
                return Err(format!("certificate is for d = {cd}, expected {d}"));
            }
            if k == 0 || d == 0 {
                return Err("hitting certificates need k >= 1 and d >= 1".into());
            }
            if *radius != g_bound(d) {
                return Err(format!("radius is {radius}, expected {}", g_bound(d)));
            }
            if *budget != f_bound(k) {
                return Err("budget does not match the bound for k".into());
            }
            if let Some(&v) = x.iter().find(|&&v| v >= g.n()) {
                return Err(format!("hitting vertex {v} is out of range"));
            }
            if BigUint::from(x.len()) > *budget {
                return Err(format!("hitting set has {} vertices, over budget", x.len()));
            }
            let xs: VertexSet = x.iter().copied().collect();
            let ball = g.ball(&xs, *radius);
            if g.remove_vertices(&ball).cycle_rank() != 0 {
                return Err("graph minus the certificate balls is not a forest".into());
            }
            Ok(())
        }
    }
}
