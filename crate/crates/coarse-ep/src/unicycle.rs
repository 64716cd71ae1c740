//! Spanning unicyclic structures over ball graphs, rooted at a cycle.
//!
//! Given a cycle C and radius r, the ball graph around C is spanned by the
//! cycle edges plus one parent edge per non-cycle vertex, chosen one level
//! closer to the cycle by breadth-first depth. Descendant and leg queries on
//! the resulting parent forest drive the packing machinery.

use crate::cycle::Cycle;
use crate::graph::{edge, Edge, Graph, VertexSet};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone)]
pub struct BfsUnicycle {
    host: Graph,
    ball: VertexSet,
    root_cycle: Cycle,
    /// Breadth-first distance to the root cycle; `None` outside the ball.
    depth: Vec<Option<usize>>,
    /// Parent one level closer to the cycle, for every non-cycle ball vertex.
    parent: BTreeMap<usize, usize>,
    children: BTreeMap<usize, Vec<usize>>,
}

/// Builds the unicyclic spanning structure of the radius-`r` ball graph
/// around `c`. Parents are the minimum-id neighbor one level closer, so the
/// result is deterministic.
pub fn build_bfs_unicycle(g: &Graph, c: &Cycle, r: usize) -> BfsUnicycle {
    assert!(c.is_valid_in(g), "root cycle invalid in host graph");
    let cycle_set = c.vertex_set();
    let ball = g.ball(&cycle_set, r);
    let host = g.induced(&ball);
    let depth = host.bfs_distances(cycle_set.iter(), None);

    let mut parent = BTreeMap::new();
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in &ball {
        if cycle_set.contains(&v) {
            continue;
        }
        let dv = depth[v].expect("ball vertex reachable from cycle");
        let p = host
            .neighbors(v)
            .iter()
            .copied()
            .find(|&w| depth[w] == Some(dv - 1))
            .expect("positive depth implies a parent");
        parent.insert(v, p);
        children.entry(p).or_default().push(v);
    }

    BfsUnicycle {
        host,
        ball,
        root_cycle: c.clone(),
        depth,
        parent,
        children,
    }
}

impl BfsUnicycle {
    /// The ball graph the structure spans (padded to the original id space).
    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn ball(&self) -> &VertexSet {
        &self.ball
    }

    pub fn root_cycle(&self) -> &Cycle {
        &self.root_cycle
    }

    /// Breadth-first distance from `v` to the root cycle.
    pub fn depth(&self, v: usize) -> usize {
        assert!(self.ball.contains(&v), "vertex {v} outside the ball");
        self.depth[v].expect("ball vertex has a depth")
    }

    /// Parent of `v`, absent when `v` lies on the root cycle.
    pub fn parent(&self, v: usize) -> Option<usize> {
        assert!(self.ball.contains(&v), "vertex {v} outside the ball");
        self.parent.get(&v).copied()
    }

    /// The structure's edges: the root cycle plus one parent edge per
    /// non-cycle vertex.
    pub fn edges(&self) -> BTreeSet<Edge> {
        let mut es = self.root_cycle.edge_set();
        for (&v, &p) in &self.parent {
            es.insert(edge(v, p));
        }
        es
    }

    /// The structure as a graph over the same id space.
    pub fn as_graph(&self) -> Graph {
        let es: Vec<Edge> = self.edges().into_iter().collect();
        Graph::from_edges(self.host.n(), &es).expect("structure edges are valid")
    }

    /// Ball-graph edges absent from the structure, sorted.
    pub fn non_tree_edges(&self) -> Vec<Edge> {
        let own = self.edges();
        self.host
            .edges()
            .into_iter()
            .filter(|e| !own.contains(e))
            .collect()
    }

    /// Every vertex whose parent chain to the root cycle passes through `v`,
    /// including `v` itself.
    pub fn descendants(&self, v: usize) -> VertexSet {
        assert!(self.ball.contains(&v), "vertex {v} outside the ball");
        let mut out = VertexSet::new();
        let mut stack = vec![v];
        while let Some(w) = stack.pop() {
            if out.insert(w) {
                if let Some(kids) = self.children.get(&w) {
                    stack.extend(kids.iter().copied());
                }
            }
        }
        out
    }

    /// The parent chain from `v` down to the root cycle: `depth(v)` edges,
    /// starting at `v`, ending on a cycle vertex.
    pub fn leg(&self, v: usize) -> Vec<usize> {
        assert!(self.ball.contains(&v), "vertex {v} outside the ball");
        let mut path = vec![v];
        let mut cur = v;
        while let Some(&p) = self.parent.get(&cur) {
            path.push(p);
            cur = p;
        }
        path
    }
}
