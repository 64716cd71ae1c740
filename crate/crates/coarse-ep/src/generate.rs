//! Deterministic instance generators for benchmarks and self-testing.
//!
//! Every generator is a pure function of its parameters. The random ones
//! draw from ChaCha8 seeded explicitly, so a given call produces the same
//! graph on every platform and every run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, Graph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("grid needs both sides at least 1, got {rows} by {cols}")]
    EmptyGrid { rows: usize, cols: usize },
    #[error("{m} edges exceed the {max} distinct pairs on {n} vertices")]
    TooManyEdges { n: usize, m: usize, max: usize },
    #[error("cycles need length at least 3, got {len}")]
    ShortCycle { len: usize },
    #[error("need at least one cycle")]
    NoCycles,
    #[error("subdivision needs at least one new vertex per edge")]
    FlatSubdivision,
}

/// Axis-aligned grid on `rows * cols` vertices; vertex `(r, c)` has id
/// `r * cols + c`. The 2 by 2 grid is a 4-cycle.
pub fn grid(rows: usize, cols: usize) -> Result<Graph, ParamError> {
    if rows == 0 || cols == 0 {
        return Err(ParamError::EmptyGrid { rows, cols });
    }
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Ok(Graph::from_edges(rows * cols, &edges).expect("grid ids are in range"))
}

/// Uniform graph with exactly `m` distinct edges on `n` vertices, chosen by
/// a partial Fisher-Yates shuffle of all pairs driven by ChaCha8(`seed`).
pub fn random_gnm(n: usize, m: usize, seed: u64) -> Result<Graph, ParamError> {
    let max = n * n.saturating_sub(1) / 2;
    if m > max {
        return Err(ParamError::TooManyEdges { n, m, max });
    }
    let mut pairs: Vec<Edge> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..m {
        let j = rng.gen_range(i..pairs.len());
        pairs.swap(i, j);
    }
    Ok(Graph::from_edges(n, &pairs[..m]).expect("pairs are in range"))
}

/// `count` cycles of length `len`, each its own component, so any two are at
/// infinite distance and in particular more than `gap` apart.
pub fn disjoint_cycles(count: usize, len: usize, gap: usize) -> Result<Graph, ParamError> {
    let _ = gap;
    if count == 0 {
        return Err(ParamError::NoCycles);
    }
    if len < 3 {
        return Err(ParamError::ShortCycle { len });
    }
    let mut edges = Vec::new();
    for c in 0..count {
        let base = c * len;
        for i in 0..len {
            edges.push((base + i, base + (i + 1) % len));
        }
    }
    Ok(Graph::from_edges(count * len, &edges).expect("cycle ids are in range"))
}

/// Subdivision of a random graph: every edge of `random_gnm(n, m, seed)` is
/// replaced by a path through `t` fresh vertices, stretching all cycles by a
/// factor of `t + 1`.
pub fn subdivision(n: usize, m: usize, t: usize, seed: u64) -> Result<Graph, ParamError> {
    if t == 0 {
        return Err(ParamError::FlatSubdivision);
    }
    let base = random_gnm(n, m, seed)?;
    let mut edges = Vec::new();
    for (idx, (u, v)) in base.edges().into_iter().enumerate() {
        let first = n + idx * t;
        edges.push((u, first));
        for step in 1..t {
            edges.push((first + step - 1, first + step));
        }
        edges.push((first + t - 1, v));
    }
    Ok(Graph::from_edges(n + m * t, &edges).expect("fresh ids are in range"))
}

/// One benchmark or self-test instance: a named graph with its pair count
/// and gap.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub k: usize,
    pub d: usize,
}

/// Deterministic mixed corpus cycling the four generator families, with
/// `k` in 1..=3 and `d` in 1..=2. Sizes are biased so that a large slice of
/// the corpus stays small enough (at most 14 vertices, sparse) for the
/// exhaustive baseline to double-check.
pub fn corpus(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let k = 1 + i % 3;
        let d = 1 + (i / 3) % 2;
        let round = i / 4;
        let (name, graph) = match i % 4 {
            0 => {
                const SIZES: [usize; 8] = [6, 8, 10, 12, 14, 24, 40, 60];
                let n = SIZES[round % SIZES.len()];
                let cap = if n <= 14 { n + 5 } else { (2 * n).min(120) };
                let m = rng.gen_range(0..=cap);
                let g = random_gnm(n, m, rng.gen()).expect("sparse cap fits");
                (format!("gnm-{n}-{m}-{i}"), g)
            }
            1 => {
                let rows = 2 + round % 7;
                let cols = 2 + (round + 3) % 7;
                let g = grid(rows, cols).expect("positive sides");
                (format!("grid-{rows}x{cols}-{i}"), g)
            }
            2 => {
                let cycles = 1 + round % 4;
                let len = 3 + round % 6;
                let gap = 1 + round % 3;
                let g = disjoint_cycles(cycles, len, gap).expect("valid lengths");
                (format!("cycles-{cycles}x{len}-{i}"), g)
            }
            _ => {
                let n = 4 + round % 5;
                let m = rng.gen_range(0..=n + 2);
                let t = 1 + round % 3;
                let g = subdivision(n, m, t, rng.gen()).expect("sparse cap fits");
                (format!("subdiv-{n}-{m}-{t}-{i}"), g)
            }
        };
        out.push(Instance { name, graph, k, d });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_grid_is_a_square() {
        let g = grid(2, 2).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 4);
        assert_eq!(g.cycle_rank(), 1);
    }

    #[test]
    fn gnm_with_no_edges_is_edgeless() {
        let g = random_gnm(7, 0, 42).unwrap();
        assert_eq!((g.n(), g.m()), (7, 0));
    }

    #[test]
    fn gnm_is_deterministic_per_seed() {
        let a = random_gnm(12, 20, 7).unwrap();
        let b = random_gnm(12, 20, 7).unwrap();
        let c = random_gnm(12, 20, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn gnm_rejects_impossible_edge_counts() {
        assert_eq!(
            random_gnm(3, 4, 0).unwrap_err(),
            ParamError::TooManyEdges { n: 3, m: 4, max: 3 }
        );
    }

    #[test]
    fn cycle_components_stay_apart() {
        let g = disjoint_cycles(3, 4, 5).unwrap();
        assert_eq!(g.n(), 12);
        assert_eq!(g.cycle_rank(), 3);
        assert_eq!(g.component_count(), 3);
        let limits = crate::oracle::OracleLimits::default();
        assert_eq!(crate::oracle::max_d_packing(&g, 5, &limits), Ok(3));
    }

    #[test]
    fn degenerate_cycle_params_are_rejected() {
        assert_eq!(disjoint_cycles(0, 4, 1).unwrap_err(), ParamError::NoCycles);
        assert_eq!(
            disjoint_cycles(2, 2, 1).unwrap_err(),
            ParamError::ShortCycle { len: 2 }
        );
    }

    #[test]
    fn subdivision_stretches_every_cycle() {
        // Base K4 has rank 3; each edge gains two internal vertices.
        let g = subdivision(4, 6, 2, 11).unwrap();
        assert_eq!(g.n(), 4 + 12);
        assert_eq!(g.cycle_rank(), 3);
        assert!(g.vertices().all(|v| g.degree(v) <= 3));
        assert_eq!(subdivision(4, 6, 0, 11).unwrap_err(), ParamError::FlatSubdivision);
    }

    #[test]
    fn corpus_is_deterministic_and_mixed() {
        let a = corpus(40, 0);
        let b = corpus(40, 0);
        assert_eq!(a.len(), 40);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.graph, y.graph);
            assert_eq!((x.k, x.d), (y.k, y.d));
        }
        assert!(a.iter().any(|i| i.name.starts_with("gnm-")));
        assert!(a.iter().any(|i| i.name.starts_with("grid-")));
        assert!(a.iter().any(|i| i.name.starts_with("cycles-")));
        assert!(a.iter().any(|i| i.name.starts_with("subdiv-")));
        assert!(a.iter().all(|i| (1..=3).contains(&i.k) && (1..=2).contains(&i.d)));
    }

    #[test]
    fn corpus_keeps_a_small_slice_for_the_baseline() {
        let small = corpus(1000, 0)
            .iter()
            .filter(|i| i.graph.n() <= 14)
            .count();
        assert!(small >= 200, "only {small} instances fit the baseline");
    }
}
