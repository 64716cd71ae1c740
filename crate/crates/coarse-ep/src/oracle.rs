//! Exhaustive ground truth for desk-size instances: full cycle enumeration,
//! exact maximum distance-packings, and exact minimum ball-hitting sets.
//! Every search is bounded up front and refuses loudly rather than running
//! unbounded; results are the baseline the property tests compare against.

use crate::cycle::Cycle;
use crate::graph::{Graph, VertexSet};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Cap on non-isolated vertices.
    pub max_vertices: usize,
    /// Cap on distinct simple cycles.
    pub max_cycles: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_vertices: 18,
            max_cycles: 5000,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleRefusal {
    #[error("graph has {n} non-isolated vertices, oracle limit is {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("more than {limit} simple cycles, oracle refuses")]
    TooManyCycles { limit: usize },
}

fn check_size(g: &Graph, limits: &OracleLimits) -> Result<(), OracleRefusal> {
    let n = g.support().len();
    if n > limits.max_vertices {
        return Err(OracleRefusal::TooManyVertices {
            n,
            limit: limits.max_vertices,
        });
    }
    Ok(())
}

fn search_from(
    g: &Graph,
    anchor: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    found: &mut BTreeSet<Cycle>,
    max_cycles: usize,
) -> Result<(), OracleRefusal> {
    let v = *path.last().unwrap();
    for &w in g.neighbors(v) {
        if w == anchor && path.len() >= 3 {
            // Each cycle closes twice (once per direction); keep the
            // traversal whose second vertex is the smaller.
            if path[1] < v {
                found.insert(Cycle::new(g, path.clone()).expect("closed path is a cycle"));
                if found.len() > max_cycles {
                    return Err(OracleRefusal::TooManyCycles { limit: max_cycles });
                }
            }
        } else if w > anchor && !on_path[w] {
            path.push(w);
            on_path[w] = true;
            let res = search_from(g, anchor, path, on_path, found, max_cycles);
            path.pop();
            on_path[w] = false;
            res?;
        }
    }
    Ok(())
}

/// All simple cycles of `g`, canonical and deduplicated, sorted. Cycles are
/// rooted at their minimum vertex during the search so each is seen exactly
/// once per direction.
pub fn enumerate_cycles(g: &Graph, limits: &OracleLimits) -> Result<Vec<Cycle>, OracleRefusal> {
    check_size(g, limits)?;
    let mut found = BTreeSet::new();
    let mut on_path = vec![false; g.n()];
    for anchor in 0..g.n() {
        let mut path = vec![anchor];
        on_path[anchor] = true;
        search_from(g, anchor, &mut path, &mut on_path, &mut found, limits.max_cycles)?;
        on_path[anchor] = false;
    }
    Ok(found.into_iter().collect())
}

/// Exact maximum independent set in the conflict graph `adj`, by branch and
/// bound over vertices in the supplied order.
fn max_independent_set(order: &[usize], adj: &[BTreeSet<usize>]) -> usize {
    fn bound_and_branch(
        candidates: &[usize],
        adj: &[BTreeSet<usize>],
        chosen: usize,
        best: &mut usize,
    ) {
        if chosen + candidates.len() <= *best {
            return;
        }
        let Some((&v, rest)) = candidates.split_first() else {
            *best = (*best).max(chosen);
            return;
        };
        // Include v.
        let filtered: Vec<usize> = rest
            .iter()
            .copied()
            .filter(|w| !adj[v].contains(w))
            .collect();
        bound_and_branch(&filtered, adj, chosen + 1, best);
        // Exclude v.
        bound_and_branch(rest, adj, chosen, best);
    }

    let mut best = 0;
    bound_and_branch(order, adj, 0, &mut best);
    best
}

/// Size of a largest set of cycles whose vertex sets are pairwise further
/// apart than `d`, by exhaustive search over all simple cycles.
pub fn max_d_packing(g: &Graph, d: usize, limits: &OracleLimits) -> Result<usize, OracleRefusal> {
    let cycles = enumerate_cycles(g, limits)?;
    let sets: Vec<VertexSet> = cycles.iter().map(Cycle::vertex_set).collect();
    let n = cycles.len();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if !g.distance(&sets[i], &sets[j]).exceeds(d) {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    // Most-conflicted cycles first, so the bound tightens early.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(adj[i].len()), i));
    Ok(max_independent_set(&order, &adj))
}

/// Advances `idx` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] + (k - i) < n {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimum size of a vertex set X such that deleting the radius-`radius`
/// ball around X leaves a forest, by subset enumeration in increasing size.
pub fn min_ball_hitting(
    g: &Graph,
    radius: usize,
    limits: &OracleLimits,
) -> Result<usize, OracleRefusal> {
    check_size(g, limits)?;
    if g.cycle_rank() == 0 {
        return Ok(0);
    }
    // Isolated vertices have singleton balls and never help.
    let pool: Vec<usize> = g.support().into_iter().collect();
    for size in 1..=pool.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let x: VertexSet = idx.iter().map(|&i| pool[i]).collect();
            let ball = g.ball(&x, radius);
            if g.remove_vertices(&ball).cycle_rank() == 0 {
                return Ok(size);
            }
            if !next_combination(&mut idx, pool.len()) {
                break;
            }
        }
    }
    unreachable!("deleting every vertex leaves a forest");
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges).unwrap()
    }

    fn two_triangles_bridge(bridge_len: usize) -> Graph {
        // Triangles {0,1,2} and {3,4,5} joined by a 0..3 path of the given
        // edge count through fresh vertices.
        let mut edges = vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
        let mut prev = 0;
        for i in 0..bridge_len - 1 {
            edges.push((prev, 6 + i));
            prev = 6 + i;
        }
        edges.push((prev, 3));
        graph(6 + bridge_len - 1, &edges)
    }

    #[test]
    fn counts_cycles_of_small_graphs() {
        let limits = OracleLimits::default();
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert_eq!(enumerate_cycles(&c4, &limits).unwrap().len(), 1);

        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let cycles = enumerate_cycles(&k4, &limits).unwrap();
        assert_eq!(cycles.len(), 7);
        assert_eq!(cycles.iter().filter(|c| c.len() == 3).count(), 4);
        assert_eq!(cycles.iter().filter(|c| c.len() == 4).count(), 3);

        let tree = graph(5, &[(0, 1), (1, 2), (2, 3), (2, 4)]);
        assert!(enumerate_cycles(&tree, &limits).unwrap().is_empty());
    }

    #[test]
    fn packing_respects_bridge_distance() {
        let limits = OracleLimits::default();
        let g = two_triangles_bridge(3);
        assert_eq!(max_d_packing(&g, 2, &limits), Ok(2));
        assert_eq!(max_d_packing(&g, 3, &limits), Ok(1));

        let forest = graph(4, &[(0, 1), (2, 3)]);
        assert_eq!(max_d_packing(&forest, 5, &limits), Ok(0));
    }

    #[test]
    fn hitting_numbers_on_small_graphs() {
        let limits = OracleLimits::default();
        let forest = graph(4, &[(0, 1), (2, 3)]);
        assert_eq!(min_ball_hitting(&forest, 3, &limits), Ok(0));

        let triangle = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(min_ball_hitting(&triangle, 0, &limits), Ok(1));

        // Bridge of length 3 puts the triangles more than 2 apart: no single
        // radius-1 ball reaches both. A length-2 bridge has a midpoint whose
        // ball touches both.
        assert_eq!(min_ball_hitting(&two_triangles_bridge(3), 1, &limits), Ok(2));
        assert_eq!(min_ball_hitting(&two_triangles_bridge(2), 1, &limits), Ok(1));
    }

    #[test]
    fn refusals_are_loud() {
        let big_matching = graph(40, &(0..20).map(|i| (2 * i, 2 * i + 1)).collect::<Vec<_>>());
        assert_eq!(
            enumerate_cycles(&big_matching, &OracleLimits::default()),
            Err(OracleRefusal::TooManyVertices { n: 40, limit: 18 })
        );

        let k8: Vec<(usize, usize)> = (0..8).flat_map(|u| (u + 1..8).map(move |v| (u, v))).collect();
        let dense = graph(8, &k8);
        let tight = OracleLimits {
            max_vertices: 18,
            max_cycles: 50,
        };
        assert_eq!(
            enumerate_cycles(&dense, &tight),
            Err(OracleRefusal::TooManyCycles { limit: 50 })
        );
    }

    #[test]
    fn padding_is_ignored_by_limits() {
        let mut edges = vec![(0, 1), (1, 2), (0, 2)];
        edges.push((30, 31));
        let g = graph(64, &edges);
        assert_eq!(max_d_packing(&g, 1, &OracleLimits::default()), Ok(1));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (4usize..=10).prop_flat_map(|n| {
            let all: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            let cap = all.len().min(16);
            proptest::sample::subsequence(all, 0..=cap)
                .prop_map(move |es| Graph::from_edges(n, &es).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn packing_is_monotone_in_distance(g in arb_graph()) {
            let limits = OracleLimits::default();
            let p1 = max_d_packing(&g, 1, &limits).unwrap();
            let p2 = max_d_packing(&g, 2, &limits).unwrap();
            let p3 = max_d_packing(&g, 3, &limits).unwrap();
            prop_assert!(p1 >= p2 && p2 >= p3);
        }

        #[test]
        fn hitting_is_monotone_in_radius(g in arb_graph()) {
            let limits = OracleLimits::default();
            let h0 = min_ball_hitting(&g, 0, &limits).unwrap();
            let h1 = min_ball_hitting(&g, 1, &limits).unwrap();
            let h2 = min_ball_hitting(&g, 2, &limits).unwrap();
            prop_assert!(h0 >= h1 && h1 >= h2);
        }

        #[test]
        fn vertex_disjoint_packing_matches_rank_bound(g in arb_graph()) {
            // A 0-packing is vertex-disjoint, so its size is at most the
            // cycle rank.
            let limits = OracleLimits::default();
            let p0 = max_d_packing(&g, 0, &limits).unwrap();
            prop_assert!(p0 <= g.cycle_rank());
            prop_assert_eq!(p0 == 0, g.cycle_rank() == 0);
        }
    }
}
