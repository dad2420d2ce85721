//! Standard graph families used by the test corpora, the CLI and the towers.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{GraphBuilder, HalfEdgeGraph};

fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> HalfEdgeGraph {
    let mut b = GraphBuilder::new(n);
    for (u, v) in edges {
        b.add_edge(u, v);
    }
    b.build().expect("family constructors produce valid graphs")
}

/// Cycle `C_n`; edge `j` joins `j` and `j + 1 mod n`, with dart `2j` pointing forward.
pub fn cycle(n: usize) -> HalfEdgeGraph {
    assert!(n >= 1, "cycle needs at least one vertex");
    build(n, (0..n).map(|j| (j, (j + 1) % n)))
}

/// Path on `n` vertices.
pub fn path(n: usize) -> HalfEdgeGraph {
    build(n, (1..n).map(|j| (j - 1, j)))
}

/// Star `K_{1,k}` with the center as vertex 0.
pub fn star(k: usize) -> HalfEdgeGraph {
    build(k + 1, (1..=k).map(|j| (0, j)))
}

pub fn complete(n: usize) -> HalfEdgeGraph {
    build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

pub fn petersen() -> HalfEdgeGraph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    build(10, outer.chain(spokes).chain(inner))
}

/// Prism `C_n x K_2`: outer cycle on `0..n`, inner cycle on `n..2n`.
pub fn prism(n: usize) -> HalfEdgeGraph {
    let outer = (0..n).map(move |i| (i, (i + 1) % n));
    let inner = (0..n).map(move |i| (n + i, n + (i + 1) % n));
    let rungs = (0..n).map(move |i| (i, n + i));
    build(2 * n, outer.chain(inner).chain(rungs))
}

/// Circulant graph on `Z/n`: `i ~ i + s` for each `s` in the symmetric
/// connection set. Dart `i * |S| + k` goes from `i` to `i + S[k]`.
pub fn circulant(n: usize, connection_set: &[usize]) -> HalfEdgeGraph {
    let m = connection_set.len();
    let position = |s: usize| {
        connection_set
            .iter()
            .position(|&t| t == s)
            .expect("connection set must be symmetric")
    };
    let mut tails = Vec::with_capacity(n * m);
    let mut involution = Vec::with_capacity(n * m);
    for i in 0..n {
        for &s in connection_set {
            tails.push(i);
            let j = (i + s) % n;
            involution.push(j * m + position((n - s) % n));
        }
    }
    HalfEdgeGraph::new(n, tails, involution).expect("circulant darts pair up")
}

/// Uniformly random simple cubic graph on `n` vertices (configuration model
/// with rejection). `n` must be even and at least 4.
pub fn random_cubic<R: Rng>(n: usize, rng: &mut R) -> HalfEdgeGraph {
    assert!(n >= 4 && n % 2 == 0, "cubic graphs need an even vertex count >= 4");
    loop {
        let mut points: Vec<usize> = (0..3 * n).map(|p| p / 3).collect();
        points.shuffle(rng);
        let pairs: Vec<(usize, usize)> = points.chunks(2).map(|c| (c[0], c[1])).collect();
        let mut seen = std::collections::HashSet::new();
        let simple = pairs
            .iter()
            .all(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))));
        if simple {
            return build(n, pairs);
        }
    }
}

/// Random simple graph with edge probability `p`, used by property tests.
pub fn random_simple<R: Rng>(n: usize, p: f64, rng: &mut R) -> HalfEdgeGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build(n, edges)
}
