//! Per-cycle and per-pair analysis around distance-compressible cycles.
//!
//! Around one cycle, [`grow_unicycle`] inspects the non-tree edges of the
//! ball-spanning unicyclic structure and either extracts `k` cycles that are
//! pairwise more than `d` apart or returns a small control pair `(X, Y)`
//! that pins down every non-tree edge. [`double_unicycle`] does the same for
//! the overlap region between two such balls, and [`all_the_ys`] aggregates
//! both analyses over a whole family of cycles.
//!
//! Every packing returned by this module is re-verified against the host
//! graph before it leaves, and every control pair is checked against its
//! size and coverage clauses. These checks run in production, not only under
//! `cfg(test)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::cycle::{is_d_packing, is_r_unicyclic, Cycle};
use crate::graph::{edge, vset, Distance, Edge, Graph, VertexSet};
use crate::subcubic::{s_bound, SubcubicGraph};
use crate::unicycle::{build_bfs_unicycle, BfsUnicycle};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MachineryError {
    #[error("need 1 <= d <= r, got d = {d}, r = {r}")]
    BadRadii { d: usize, r: usize },
    #[error("cycle count k must be at least 1")]
    ZeroK,
    #[error("cycle {index} is not a valid cycle of the host graph")]
    InvalidCycle { index: usize },
    #[error("cycle {index} has company inside its radius-{d} ball")]
    NotUnicyclic { index: usize, d: usize },
    #[error("structure {index} does not span the radius-{r} ball of its cycle")]
    MismatchedUnicycle { index: usize, r: usize },
    #[error("cycle vertex sets are {found} apart, need more than {need}")]
    CyclesTooClose { found: usize, need: usize },
    #[error("cover {index} misses both endpoints of non-tree edge ({u}, {v})")]
    UncoveredEdge { index: usize, u: usize, v: usize },
    #[error("cycles do not keep pairwise distance over {gap}")]
    NotAPacking { gap: usize },
}

/// Outcome of the per-cycle and per-pair analyses: either `k` cycles that
/// are pairwise more than `d` apart, or control sets whose clauses are
/// checked by the producing operation before the value is returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MachineryOutcome {
    Packing(Vec<Cycle>),
    Control { x: VertexSet, y: VertexSet },
}

/// One non-tree edge of a ball-spanning unicyclic structure, together with
/// the cycle it closes and the detour that cycle takes off the root cycle.
#[derive(Debug, Clone)]
pub struct FundamentalCycleInfo {
    pub e: Edge,
    /// The unique cycle through `e` in the structure that avoids the root
    /// cycle's anchor edge.
    pub cycle: Cycle,
    /// Vertices of the detour: the endpoints of `piece_edges`.
    pub piece: VertexSet,
    /// The cycle's edges outside the root cycle. These form a path between
    /// two root-cycle vertices, or the whole cycle when `is_null` holds.
    pub piece_edges: BTreeSet<Edge>,
    /// True when the cycle shares no edge with the root cycle.
    pub is_null: bool,
}

/// Computes the fundamental cycle data of every non-tree edge of `u`, in
/// ascending edge order. The anchor edge is the lexicographically smallest
/// edge of the root cycle.
pub fn fundamental_cycles(g: &Graph, u: &BfsUnicycle) -> Vec<FundamentalCycleInfo> {
    let c_edges = u.root_cycle().edge_set();
    let e0 = *c_edges.iter().next().expect("root cycle has edges");
    let tree = u.as_graph().without_edges(&[e0]);
    u.non_tree_edges()
        .into_iter()
        .map(|e| {
            let path = tree_path(&tree, e.0, e.1);
            let cycle = Cycle::new(g, path).expect("chord plus tree path closes a cycle");
            let piece_edges: BTreeSet<Edge> =
                cycle.edge_set().difference(&c_edges).copied().collect();
            let is_null = piece_edges.len() == cycle.len();
            let piece = piece_edges.iter().flat_map(|&(x, y)| [x, y]).collect();
            FundamentalCycleInfo {
                e,
                cycle,
                piece,
                piece_edges,
                is_null,
            }
        })
        .collect()
}

/// The unique path from `a` to `b` in a tree, as a vertex sequence.
pub(crate) fn tree_path(tree: &Graph, a: usize, b: usize) -> Vec<usize> {
    let mut prev: Vec<Option<usize>> = vec![None; tree.n()];
    let mut seen = vec![false; tree.n()];
    seen[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        if x == b {
            break;
        }
        for &y in tree.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some(x);
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![b];
    let mut cur = b;
    while let Some(p) = prev[cur] {
        path.push(p);
        cur = p;
    }
    assert_eq!(cur, a, "endpoints lie in one tree component");
    path.reverse();
    path
}

/// Adjacency of the proximity graph over `sets`: `i` and `j` are adjacent
/// when their distance in `g` is at most `d`.
fn proximity_graph(g: &Graph, sets: &[VertexSet], d: usize) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; sets.len()]; sets.len()];
    for i in 0..sets.len() {
        let dist = g.bfs_distances(sets[i].iter(), Some(d));
        for j in (i + 1)..sets.len() {
            if sets[j].iter().any(|&v| dist[v].is_some()) {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    adj
}

/// Greedy maximal independent set over ascending indices. Maximality makes
/// the result dominating: every index is picked or adjacent to a pick
/// (checked).
fn greedy_max_independent(adj: &[Vec<bool>]) -> Vec<usize> {
    let mut picked: Vec<usize> = Vec::new();
    for (i, row) in adj.iter().enumerate() {
        if picked.iter().all(|&j| !row[j]) {
            picked.push(i);
        }
    }
    for (i, row) in adj.iter().enumerate() {
        assert!(
            picked.iter().any(|&j| j == i || row[j]),
            "maximal independent set must dominate"
        );
    }
    picked
}

fn check_radii(d: usize, r: usize) -> Result<(), MachineryError> {
    if d < 1 || d > r {
        return Err(MachineryError::BadRadii { d, r });
    }
    Ok(())
}

/// The structure must span exactly the radius-`r` ball graph of `c` in `g`.
fn check_unicycle(
    g: &Graph,
    c: &Cycle,
    u: &BfsUnicycle,
    r: usize,
    index: usize,
) -> Result<(), MachineryError> {
    let ball = g.ball(&c.vertex_set(), r);
    if u.root_cycle() != c || u.ball() != &ball || u.host() != &g.induced(&ball) {
        return Err(MachineryError::MismatchedUnicycle { index, r });
    }
    Ok(())
}

/// Checks the packing clause and wraps the cycles.
fn verified_packing(g: &Graph, d: usize, k: usize, cycles: Vec<Cycle>) -> MachineryOutcome {
    assert_eq!(cycles.len(), k, "packing must contain exactly k cycles");
    assert_eq!(
        is_d_packing(g, &cycles, d),
        Ok(true),
        "returned cycles must be pairwise more than {d} apart"
    );
    MachineryOutcome::Packing(cycles)
}

/// Analysis around a single cycle `c` whose radius-`d` ball contains no
/// other cycle. Either finds `k` cycles pairwise more than `d` apart, or
/// returns control sets with: `y` covering an endpoint of every non-tree
/// edge of the ball graph, `|x| < 2k + s_bound(k)`, and every descendant of
/// a `y` vertex within distance `2r + d` of `x`.
pub fn grow_unicycle(
    g: &Graph,
    c: &Cycle,
    u: &BfsUnicycle,
    r: usize,
    d: usize,
    k: usize,
) -> Result<MachineryOutcome, MachineryError> {
    check_radii(d, r)?;
    if k == 0 {
        return Err(MachineryError::ZeroK);
    }
    if !c.is_valid_in(g) {
        return Err(MachineryError::InvalidCycle { index: 0 });
    }
    if !is_r_unicyclic(g, c, d) {
        return Err(MachineryError::NotUnicyclic { index: 0, d });
    }
    check_unicycle(g, c, u, r, 0)?;

    let infos = fundamental_cycles(g, u);

    // For k = 1 any single cycle is a packing, and a detour that avoids the
    // root cycle's edges hands one over directly.
    if k == 1 {
        if let Some(info) = infos.iter().find(|i| i.is_null) {
            return Ok(verified_packing(g, d, k, vec![info.cycle.clone()]));
        }
    }

    let pieces: Vec<VertexSet> = infos.iter().map(|i| i.piece.clone()).collect();
    let adj = proximity_graph(g, &pieces, d);
    let ind = greedy_max_independent(&adj);

    // Detour-avoiding picks are themselves cycles, pairwise far apart.
    let null_picks: Vec<usize> = ind
        .iter()
        .copied()
        .filter(|&i| infos[i].is_null)
        .collect();
    if null_picks.len() >= k {
        let cycles = null_picks[..k]
            .iter()
            .map(|&i| infos[i].cycle.clone())
            .collect();
        return Ok(verified_packing(g, d, k, cycles));
    }

    if ind.len() >= k + s_bound(k).div_ceil(2) {
        // Each remaining pick's detour is a path attached to the root cycle
        // at two distinct vertices; their union is a sparse theta-like graph
        // with enough branch vertices to pay for k disjoint cycles, and the
        // pairwise gaps between detours spread those cycles out.
        let grown: Vec<usize> = ind
            .iter()
            .copied()
            .filter(|&i| !infos[i].is_null)
            .collect();
        assert!(
            2 * grown.len() >= s_bound(k),
            "picks left after removing {} detour cycles fall short",
            null_picks.len()
        );
        let mut edges: BTreeSet<Edge> = c.edge_set();
        for &i in &grown {
            edges.extend(infos[i].piece_edges.iter().copied());
        }
        let edge_list: Vec<Edge> = edges.into_iter().collect();
        let host = Graph::from_edges(g.n(), &edge_list).expect("edges come from the host graph");
        let sub = SubcubicGraph::new(host).expect("disjoint detours keep degrees at 2 and 3");
        assert!(sub.branch_vertices() >= s_bound(k));
        return Ok(verified_packing(g, d, k, sub.find_disjoint_cycles(k)));
    }

    // Control. Anchors are the endpoints of the independent picks; every
    // non-tree edge donates the endpoint whose chain to the root cycle is
    // certified near an anchor pair.
    let mut x = VertexSet::new();
    for &i in &ind {
        x.insert(infos[i].e.0);
        x.insert(infos[i].e.1);
    }
    assert!(x.len() < 2 * k + s_bound(k), "control anchors exceed budget");

    let mut y = VertexSet::new();
    for (idx, info) in infos.iter().enumerate() {
        let rep = ind
            .iter()
            .copied()
            .find(|&j| j == idx || adj[idx][j])
            .expect("independent picks dominate every non-tree edge");
        let anchor = infos[rep].e;
        let near = g.ball(&vset(&[anchor.0, anchor.1]), r + d);
        let (a, b) = info.e;
        if u.leg(a).iter().any(|w| near.contains(w)) {
            y.insert(a);
        } else {
            assert!(
                u.leg(b).iter().any(|w| near.contains(w)),
                "anchor pair certifies an endpoint of every dominated edge"
            );
            y.insert(b);
        }
    }

    let reach = g.ball(&x, 2 * r + d);
    for &yv in &y {
        assert!(
            u.descendants(yv).is_subset(&reach),
            "descendants of {yv} escape the control ball"
        );
    }
    for info in &infos {
        assert!(y.contains(&info.e.0) || y.contains(&info.e.1));
    }
    Ok(MachineryOutcome::Control { x, y })
}

/// Shortest path from the first cycle to the second inside the union of
/// `x`'s parent chains in both structures. Deterministic: sources seed in
/// ascending order and the nearest target breaks ties by id.
fn cross_path(
    c1: &Cycle,
    u1: &BfsUnicycle,
    c2: &Cycle,
    u2: &BfsUnicycle,
    x: usize,
    r: usize,
) -> Vec<usize> {
    let leg1 = u1.leg(x);
    let leg2 = u2.leg(x);
    let mut adj: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for leg in [&leg1, &leg2] {
        for w in leg.windows(2) {
            adj.entry(w[0]).or_default().insert(w[1]);
            adj.entry(w[1]).or_default().insert(w[0]);
        }
        adj.entry(leg[0]).or_default();
    }
    let c1set = c1.vertex_set();
    let c2set = c2.vertex_set();

    let mut dist: BTreeMap<usize, usize> = BTreeMap::new();
    let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &v in adj.keys().filter(|v| c1set.contains(v)) {
        dist.insert(v, 0);
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        for &w in &adj[&v] {
            if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(w) {
                slot.insert(dv + 1);
                prev.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    let target = adj
        .keys()
        .filter(|v| c2set.contains(v))
        .filter_map(|&v| dist.get(&v).map(|&dv| (dv, v)))
        .min()
        .expect("both chains end on their cycles")
        .1;
    let mut path = vec![target];
    let mut cur = target;
    while let Some(&p) = prev.get(&cur) {
        path.push(p);
        cur = p;
    }
    path.reverse();
    let len = path.len() - 1;
    assert!(
        (1..=2 * r).contains(&len),
        "cross path length {len} out of range"
    );
    path
}

/// Analysis of the overlap between the radius-`r` balls of two far-apart
/// cycles. Either finds `k` cycles pairwise more than `d` apart, or returns
/// control sets with: `y` equal to the ball overlap, `|x| < s_bound(k)`,
/// and every overlap vertex either a descendant (in one of the structures)
/// of its cover set or within distance `2r + d` of `x`.
#[allow(clippy::too_many_arguments)]
pub fn double_unicycle(
    g: &Graph,
    c1: &Cycle,
    u1: &BfsUnicycle,
    y1: &VertexSet,
    c2: &Cycle,
    u2: &BfsUnicycle,
    y2: &VertexSet,
    r: usize,
    d: usize,
    k: usize,
) -> Result<MachineryOutcome, MachineryError> {
    check_radii(d, r)?;
    if k == 0 {
        return Err(MachineryError::ZeroK);
    }
    for (index, c) in [c1, c2].into_iter().enumerate() {
        if !c.is_valid_in(g) {
            return Err(MachineryError::InvalidCycle { index });
        }
        if !is_r_unicyclic(g, c, d) {
            return Err(MachineryError::NotUnicyclic { index, d });
        }
    }
    check_unicycle(g, c1, u1, r, 0)?;
    check_unicycle(g, c2, u2, r, 1)?;
    if let Distance::Finite(found) = g.distance(&c1.vertex_set(), &c2.vertex_set()) {
        if found <= 2 * d {
            return Err(MachineryError::CyclesTooClose {
                found,
                need: 2 * d,
            });
        }
    }
    for (index, (u, cover)) in [(u1, y1), (u2, y2)].into_iter().enumerate() {
        for (a, b) in u.non_tree_edges() {
            if !cover.contains(&a) && !cover.contains(&b) {
                return Err(MachineryError::UncoveredEdge { index, u: a, v: b });
            }
        }
    }

    let meet: VertexSet = u1.ball().intersection(u2.ball()).copied().collect();

    // Vertices hanging below a cover vertex in either structure.
    let mut covered = VertexSet::new();
    for (u, cover) in [(u1, y1), (u2, y2)] {
        for &w in cover.iter().filter(|w| u.ball().contains(w)) {
            covered.extend(u.descendants(w));
        }
    }

    let loose: Vec<usize> = meet.iter().copied().filter(|v| !covered.contains(v)).collect();
    let paths: Vec<Vec<usize>> = loose
        .iter()
        .map(|&x| cross_path(c1, u1, c2, u2, x, r))
        .collect();
    let path_sets: Vec<VertexSet> = paths.iter().map(|p| p.iter().copied().collect()).collect();
    let adj = proximity_graph(g, &path_sets, d);
    let ind = greedy_max_independent(&adj);

    if 2 * ind.len() >= s_bound(k) {
        // The picked cross paths are pairwise far apart, so gluing them onto
        // the two cycles gives a sparse graph with one branch vertex per
        // path endpoint.
        let mut edges: BTreeSet<Edge> = c1.edge_set();
        edges.extend(c2.edge_set());
        for &i in &ind {
            for w in paths[i].windows(2) {
                edges.insert(edge(w[0], w[1]));
            }
        }
        let edge_list: Vec<Edge> = edges.into_iter().collect();
        let host = Graph::from_edges(g.n(), &edge_list).expect("edges come from the host graph");
        let sub = SubcubicGraph::new(host).expect("disjoint cross paths keep degrees at 2 and 3");
        assert!(sub.branch_vertices() >= s_bound(k));
        return Ok(verified_packing(g, d, k, sub.find_disjoint_cycles(k)));
    }

    let mut x = VertexSet::new();
    let both: VertexSet = c1.vertex_set().union(&c2.vertex_set()).copied().collect();
    for &i in &ind {
        x.extend(path_sets[i].intersection(&both).copied());
    }
    assert_eq!(x.len(), 2 * ind.len(), "each pick lands two anchors");
    assert!(x.len() < s_bound(k), "control anchors exceed budget");

    let reach = g.ball(&x, 2 * r + d);
    for &yv in &meet {
        assert!(
            covered.contains(&yv) || reach.contains(&yv),
            "overlap vertex {yv} is neither covered nor near an anchor"
        );
    }
    Ok(MachineryOutcome::Control { x, y: meet })
}

/// Aggregate outcome over a family of cycles: either `k` cycles pairwise
/// more than `d` apart, or the per-cycle structures plus combined control
/// sets covering all non-tree edges and all pairwise ball overlaps.
#[derive(Debug, Clone)]
pub enum AllYsOutcome {
    Packing(Vec<Cycle>),
    Control {
        unicycles: Vec<BfsUnicycle>,
        x: VertexSet,
        y: VertexSet,
    },
}

/// Runs [`grow_unicycle`] on every cycle and [`double_unicycle`] on every
/// pair, merging results in input order. `cycles` must be pairwise more
/// than `2d` apart with each one alone in its radius-`d` ball.
pub fn all_the_ys(
    g: &Graph,
    cycles: &[Cycle],
    r: usize,
    d: usize,
    k: usize,
) -> Result<AllYsOutcome, MachineryError> {
    check_radii(d, r)?;
    if k == 0 {
        return Err(MachineryError::ZeroK);
    }
    for (index, c) in cycles.iter().enumerate() {
        if !c.is_valid_in(g) {
            return Err(MachineryError::InvalidCycle { index });
        }
        if !is_r_unicyclic(g, c, d) {
            return Err(MachineryError::NotUnicyclic { index, d });
        }
    }
    match is_d_packing(g, cycles, 2 * d) {
        Ok(true) => {}
        Ok(false) => return Err(MachineryError::NotAPacking { gap: 2 * d }),
        Err(e) => return Err(MachineryError::InvalidCycle { index: e.index }),
    }

    if cycles.len() >= k {
        return Ok(AllYsOutcome::Packing(
            match verified_packing(g, d, k, cycles[..k].to_vec()) {
                MachineryOutcome::Packing(p) => p,
                MachineryOutcome::Control { .. } => unreachable!(),
            },
        ));
    }

    let unicycles: Vec<BfsUnicycle> = cycles
        .iter()
        .map(|c| build_bfs_unicycle(g, c, r))
        .collect();
    let mut xs = VertexSet::new();
    let mut ys = VertexSet::new();
    let mut covers: Vec<VertexSet> = Vec::new();
    for (c, u) in cycles.iter().zip(&unicycles) {
        match grow_unicycle(g, c, u, r, d, k)? {
            MachineryOutcome::Packing(p) => return Ok(AllYsOutcome::Packing(p)),
            MachineryOutcome::Control { x, y } => {
                xs.extend(x.iter().copied());
                ys.extend(y.iter().copied());
                covers.push(y);
            }
        }
    }
    for i in 0..cycles.len() {
        for j in (i + 1)..cycles.len() {
            let got = double_unicycle(
                g,
                &cycles[i],
                &unicycles[i],
                &covers[i],
                &cycles[j],
                &unicycles[j],
                &covers[j],
                r,
                d,
                k,
            )?;
            match got {
                MachineryOutcome::Packing(p) => return Ok(AllYsOutcome::Packing(p)),
                MachineryOutcome::Control { x, y } => {
                    xs.extend(x.iter().copied());
                    ys.extend(y.iter().copied());
                }
            }
        }
    }

    let bound = 2 * k * k + (k * (k - 1) / 2 + k) * s_bound(k);
    assert!(xs.len() < bound, "aggregate control set exceeds budget");
    for u in &unicycles {
        for (a, b) in u.non_tree_edges() {
            assert!(ys.contains(&a) || ys.contains(&b));
        }
    }
    for i in 0..unicycles.len() {
        for j in (i + 1)..unicycles.len() {
            let inter: VertexSet = unicycles[i]
                .ball()
                .intersection(unicycles[j].ball())
                .copied()
                .collect();
            assert!(inter.is_subset(&ys), "ball overlap escapes the cover");
        }
    }
    assert!(ys.is_subset(&g.ball(&xs, 2 * r + d)));
    Ok(AllYsOutcome::Control { unicycles, x: xs, y: ys })
}
