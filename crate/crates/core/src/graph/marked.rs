use std::collections::HashMap;

use num_rational::Ratio;

use super::HalfEdgeGraph;
use crate::error::{Error, Result};

/// A graph with a distinguished basepoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedGraph {
    pub graph: HalfEdgeGraph,
    pub basepoint: usize,
}

impl MarkedGraph {
    pub fn new(graph: HalfEdgeGraph, basepoint: usize) -> Result<Self> {
        if basepoint >= graph.vertex_count() {
            return Err(Error::graph(format!(
                "basepoint {basepoint} out of range for {} vertices",
                graph.vertex_count()
            )));
        }
        Ok(Self { graph, basepoint })
    }

    /// Combinatorial ball of the given radius around the basepoint: vertices
    /// within that distance, every edge with an endpoint strictly closer, and
    /// all loops. Edges joining two vertices on the boundary sphere are left out.
    pub fn ball(&self, radius: usize) -> MarkedGraph {
        self.ball_with_origin(radius).0
    }

    /// Ball together with the original index of each ball vertex. Ball
    /// vertices are numbered in breadth-first order, so the basepoint is 0.
    pub fn ball_with_origin(&self, radius: usize) -> (MarkedGraph, Vec<usize>) {
        let g = &self.graph;
        let mut order = vec![self.basepoint];
        let mut new_index = vec![usize::MAX; g.vertex_count()];
        new_index[self.basepoint] = 0;
        let mut depth = vec![0usize];
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            let du = depth[head];
            head += 1;
            if du == radius {
                continue;
            }
            for &d in g.darts_at(u) {
                let w = g.head(d);
                if new_index[w] == usize::MAX {
                    new_index[w] = order.len();
                    order.push(w);
                    depth.push(du + 1);
                }
            }
        }
        let mut dart_index = vec![usize::MAX; g.dart_count()];
        let mut kept = Vec::new();
        for (i, &u) in order.iter().enumerate() {
            for &d in g.darts_at(u) {
                let w = g.head(d);
                let inner = depth[i] < radius || w == u;
                if new_index[w] != usize::MAX && (inner || depth[new_index[w]] < radius) {
                    dart_index[d] = kept.len();
                    kept.push(d);
                }
            }
        }
        let tails = kept.iter().map(|&d| new_index[g.tail(d)]).collect();
        let involution = kept.iter().map(|&d| dart_index[g.reverse(d)]).collect();
        let graph = HalfEdgeGraph::new(order.len(), tails, involution)
            .expect("induced subgraph of a valid graph is valid");
        (MarkedGraph { graph, basepoint: 0 }, order)
    }
}

/// Basepoint-preserving isomorphism between two marked graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedIsomorphism {
    pub vertex_map: Vec<usize>,
    pub dart_map: Vec<usize>,
}

struct Profile {
    colors: Vec<usize>,
    // distinct neighbours other than the vertex itself, with multiplicities
    neighbours: Vec<Vec<(usize, usize)>>,
}

fn neighbour_lists(g: &HalfEdgeGraph) -> Vec<Vec<(usize, usize)>> {
    (0..g.vertex_count())
        .map(|u| {
            let mut heads: Vec<usize> = g
                .darts_at(u)
                .iter()
                .map(|&d| g.head(d))
                .filter(|&w| w != u)
                .collect();
            heads.sort_unstable();
            let mut out: Vec<(usize, usize)> = Vec::new();
            for w in heads {
                match out.last_mut() {
                    Some((last, m)) if *last == w => *m += 1,
                    _ => out.push((w, 1)),
                }
            }
            out
        })
        .collect()
}

fn loop_signature(g: &HalfEdgeGraph, u: usize) -> (usize, usize) {
    let mut half = 0;
    let mut full = 0;
    for &d in g.darts_at(u) {
        if g.is_half_loop(d) {
            half += 1;
        } else if g.head(d) == u {
            full += 1;
        }
    }
    (half, full)
}

/// Joint colour refinement so that colours are comparable across graphs.
fn refine(a: &MarkedGraph, b: &MarkedGraph) -> (Profile, Profile) {
    let initial = |m: &MarkedGraph| -> Vec<(Option<usize>, usize, usize, usize)> {
        let dist = m.graph.distances_from(m.basepoint);
        (0..m.graph.vertex_count())
            .map(|u| {
                let (half, full) = loop_signature(&m.graph, u);
                (dist[u], m.graph.degree(u), half, full)
            })
            .collect()
    };
    let mut table = HashMap::new();
    let mut ids = |sigs: Vec<(Option<usize>, usize, usize, usize)>| -> Vec<usize> {
        sigs.into_iter()
            .map(|s| {
                let next = table.len();
                *table.entry(s).or_insert(next)
            })
            .collect()
    };
    let mut ca = ids(initial(a));
    let mut cb = ids(initial(b));
    let na = neighbour_lists(&a.graph);
    let nb = neighbour_lists(&b.graph);
    let count = |c: &[usize], d: &[usize]| {
        let mut all: Vec<usize> = c.iter().chain(d).copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    };
    let mut classes = count(&ca, &cb);
    loop {
        let mut table = HashMap::new();
        let mut step = |colors: &[usize], nbrs: &[Vec<(usize, usize)>]| -> Vec<usize> {
            (0..colors.len())
                .map(|u| {
                    let mut sig: Vec<(usize, usize)> =
                        nbrs[u].iter().map(|&(w, m)| (colors[w], m)).collect();
                    sig.sort_unstable();
                    let next = table.len();
                    *table.entry((colors[u], sig)).or_insert(next)
                })
                .collect()
        };
        let next_a = step(&ca, &na);
        let next_b = step(&cb, &nb);
        let next_classes = count(&next_a, &next_b);
        ca = next_a;
        cb = next_b;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    (
        Profile {
            colors: ca,
            neighbours: na,
        },
        Profile {
            colors: cb,
            neighbours: nb,
        },
    )
}

fn multiplicity(nbrs: &[(usize, usize)], w: usize) -> usize {
    nbrs.binary_search_by_key(&w, |&(x, _)| x)
        .map(|i| nbrs[i].1)
        .unwrap_or(0)
}

struct Search<'a> {
    pa: &'a Profile,
    pb: &'a Profile,
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    forward: Vec<usize>,
    backward: Vec<usize>,
}

impl Search<'_> {
    fn consistent(&self, u: usize, x: usize) -> bool {
        let mut assigned_a = 0;
        for &(w, m) in &self.pa.neighbours[u] {
            let fw = self.forward[w];
            if fw != usize::MAX {
                assigned_a += 1;
                if multiplicity(&self.pb.neighbours[x], fw) != m {
                    return false;
                }
            }
        }
        let assigned_b = self.pb.neighbours[x]
            .iter()
            .filter(|&&(y, _)| self.backward[y] != usize::MAX)
            .count();
        assigned_a == assigned_b
    }

    fn run(&mut self, pos: usize, root_image: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let u = self.order[pos];
        let candidates: Vec<usize> = match self.parent[u] {
            None if pos == 0 => vec![root_image],
            None => (0..self.pb.colors.len())
                .filter(|&x| self.backward[x] == usize::MAX)
                .collect(),
            Some(p) => self.pb.neighbours[self.forward[p]]
                .iter()
                .map(|&(x, _)| x)
                .filter(|&x| self.backward[x] == usize::MAX)
                .collect(),
        };
        for x in candidates {
            if self.pb.colors[x] != self.pa.colors[u] || !self.consistent(u, x) {
                continue;
            }
            self.forward[u] = x;
            self.backward[x] = u;
            if self.run(pos + 1, root_image) {
                return true;
            }
            self.forward[u] = usize::MAX;
            self.backward[x] = usize::MAX;
        }
        false
    }
}

fn dart_map_from_vertex_map(a: &HalfEdgeGraph, b: &HalfEdgeGraph, f: &[usize]) -> Vec<usize> {
    let mut map = vec![usize::MAX; a.dart_count()];
    for u in 0..a.vertex_count() {
        let x = f[u];
        // half-loops and full loops at u
        let half_a: Vec<usize> = a.darts_at(u).iter().copied().filter(|&d| a.is_half_loop(d)).collect();
        let half_b: Vec<usize> = b.darts_at(x).iter().copied().filter(|&d| b.is_half_loop(d)).collect();
        for (&d, &e) in half_a.iter().zip(&half_b) {
            map[d] = e;
        }
        let full = |g: &HalfEdgeGraph, v: usize| -> Vec<usize> {
            g.darts_at(v)
                .iter()
                .copied()
                .filter(|&d| !g.is_half_loop(d) && g.head(d) == v && d < g.reverse(d))
                .collect()
        };
        for (&d, &e) in full(a, u).iter().zip(&full(b, x)) {
            map[d] = e;
            map[a.reverse(d)] = b.reverse(e);
        }
        for &d in a.darts_at(u) {
            let w = a.head(d);
            if w <= u || map[d] != usize::MAX {
                continue;
            }
            let from_a: Vec<usize> = a.darts_at(u).iter().copied().filter(|&e| a.head(e) == w).collect();
            let from_b: Vec<usize> = b.darts_at(x).iter().copied().filter(|&e| b.head(e) == f[w]).collect();
            for (&da, &db) in from_a.iter().zip(&from_b) {
                map[da] = db;
                map[a.reverse(da)] = b.reverse(db);
            }
        }
    }
    map
}

/// Decides whether a basepoint-preserving multigraph isomorphism exists and
/// returns one. Uses colour refinement followed by backtracking in
/// breadth-first order; worst case is exponential.
pub fn marked_isometric(a: &MarkedGraph, b: &MarkedGraph) -> Option<MarkedIsomorphism> {
    let (ga, gb) = (&a.graph, &b.graph);
    if ga.vertex_count() != gb.vertex_count() || ga.dart_count() != gb.dart_count() {
        return None;
    }
    let (pa, pb) = refine(a, b);
    let mut ha = pa.colors.clone();
    let mut hb = pb.colors.clone();
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb || pa.colors[a.basepoint] != pb.colors[b.basepoint] {
        return None;
    }

    let n = ga.vertex_count();
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    for root in std::iter::once(a.basepoint).chain(0..n) {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = order.len();
        order.push(root);
        let mut head = start;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &(w, _) in &pa.neighbours[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    order.push(w);
                }
            }
        }
    }

    let mut search = Search {
        pa: &pa,
        pb: &pb,
        order,
        parent,
        forward: vec![usize::MAX; n],
        backward: vec![usize::MAX; n],
    };
    if !search.run(0, b.basepoint) {
        return None;
    }
    let vertex_map = search.forward;
    let dart_map = dart_map_from_vertex_map(ga, gb, &vertex_map);
    Some(MarkedIsomorphism {
        vertex_map,
        dart_map,
    })
}

/// Outcome of comparing balls of increasing radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarkedDistance {
    /// Largest tested radius with isometric balls, `None` if radius 0 already differs.
    pub matched_radius: Option<usize>,
    /// All radii up to `max_radius` matched, so the value is only an upper bound.
    pub saturated: bool,
}

impl MarkedDistance {
    /// `1/(n+1)` for the largest matching radius `n`, or 1 when no radius matches.
    /// When saturated this is an upper bound on the true distance.
    pub fn value(&self) -> Ratio<u64> {
        match self.matched_radius {
            None => Ratio::from_integer(1),
            Some(n) => Ratio::new(1, n as u64 + 1),
        }
    }
}

pub fn marked_distance(a: &MarkedGraph, b: &MarkedGraph, max_radius: usize) -> MarkedDistance {
    let mut matched = None;
    for r in 0..=max_radius {
        if marked_isometric(&a.ball(r), &b.ball(r)).is_none() {
            return MarkedDistance {
                matched_radius: matched,
                saturated: false,
            };
        }
        matched = Some(r);
    }
    MarkedDistance {
        matched_radius: matched,
        saturated: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::GraphBuilder;

    fn marked(g: HalfEdgeGraph, w: usize) -> MarkedGraph {
        MarkedGraph::new(g, w).unwrap()
    }

    fn is_valid_iso(a: &MarkedGraph, b: &MarkedGraph, iso: &MarkedIsomorphism) -> bool {
        let (ga, gb) = (&a.graph, &b.graph);
        iso.vertex_map[a.basepoint] == b.basepoint
            && (0..ga.dart_count()).all(|d| {
                let e = iso.dart_map[d];
                e < gb.dart_count()
                    && gb.tail(e) == iso.vertex_map[ga.tail(d)]
                    && gb.reverse(e) == iso.dart_map[ga.reverse(d)]
            })
    }

    /// 3-regular tree ball of radius 2: root, 3 children, 6 grandchildren.
    fn cubic_tree_ball() -> HalfEdgeGraph {
        let mut edges = vec![(0, 1), (0, 2), (0, 3)];
        for c in 1..=3 {
            edges.push((c, 2 + 2 * c));
            edges.push((c, 3 + 2 * c));
        }
        HalfEdgeGraph::from_edges(10, &edges).unwrap()
    }

    #[test]
    fn radius_zero_keeps_loops() {
        let mut b = GraphBuilder::new(2);
        b.add_half_loop(0);
        b.add_edge(0, 0);
        b.add_edge(0, 1);
        let g = marked(b.build().unwrap(), 0);
        let ball = g.ball(0);
        assert_eq!(ball.graph.vertex_count(), 1);
        assert_eq!(ball.graph.dart_count(), 3);
    }

    #[test]
    fn hexagon_ball_is_path() {
        let ball = marked(cycle(6), 3).ball(2);
        assert!(marked_isometric(&ball, &marked(path(5), 2)).is_some());
    }

    #[test]
    fn ball_saturates() {
        let g = marked(petersen(), 4);
        assert!(marked_isometric(&g.ball(10), &g).is_some());
        assert_eq!(g.ball(2).graph.vertex_count(), 10);
    }

    #[test]
    fn cycle_isometries() {
        let a = marked(cycle(4), 0);
        let b = marked(cycle(4), 2);
        let iso = marked_isometric(&a, &b).unwrap();
        assert!(is_valid_iso(&a, &b, &iso));
        assert!(marked_isometric(&a, &marked(cycle(5), 0)).is_none());
    }

    #[test]
    fn petersen_balls_are_trees() {
        let tree = marked(cubic_tree_ball(), 0);
        for w in 0..10 {
            let ball = marked(petersen(), w).ball(2);
            let iso = marked_isometric(&tree, &ball).expect("girth 5 makes radius-2 balls trees");
            assert!(is_valid_iso(&tree, &ball, &iso));
        }
    }

    #[test]
    fn distinguishes_loop_kinds() {
        let mut b1 = GraphBuilder::new(1);
        b1.add_half_loop(0);
        b1.add_half_loop(0);
        let two_half = marked(b1.build().unwrap(), 0);
        let full = marked(HalfEdgeGraph::from_edges(1, &[(0, 0)]).unwrap(), 0);
        assert!(marked_isometric(&two_half, &full).is_none());
        assert_eq!(marked_distance(&two_half, &full, 3).value(), Ratio::from_integer(1));
    }

    #[test]
    fn distance_examples() {
        let a = marked(petersen(), 0);
        let d = marked_distance(&a, &a, 5);
        assert!(d.saturated);
        assert_eq!(d.value(), Ratio::new(1, 6));

        // balls agree through radius 2 and differ at radius 3
        let d = marked_distance(&marked(cycle(6), 0), &marked(cycle(8), 5), 6);
        assert_eq!(d.matched_radius, Some(2));
        assert_eq!(d.value(), Ratio::new(1, 3));

        // radius-0 balls are single vertices; degrees differ at radius 1
        let d = marked_distance(&marked(star(3), 0), &marked(cycle(5), 0), 4);
        assert_eq!(d.matched_radius, Some(0));
        assert_eq!(d.value(), Ratio::from_integer(1));
    }

    #[test]
    fn balls_are_nested() {
        let g = marked(prism(7), 3);
        for r in 0..6 {
            let (_, small) = g.ball_with_origin(r);
            let (_, large) = g.ball_with_origin(r + 1);
            assert!(small.iter().all(|v| large.contains(v)));
        }
    }

    #[test]
    fn isometry_equivalence_spot_checks() {
        let corpus: Vec<MarkedGraph> = vec![
            marked(cycle(6), 0),
            marked(cycle(6), 3),
            marked(prism(3), 1),
            marked(circulant(6, &[1, 3, 5]), 2),
            marked(complete(4), 0),
        ];
        for x in &corpus {
            assert!(marked_isometric(x, x).is_some());
            for y in &corpus {
                let xy = marked_isometric(x, y).is_some();
                assert_eq!(xy, marked_isometric(y, x).is_some());
                for z in &corpus {
                    if xy && marked_isometric(y, z).is_some() {
                        assert!(marked_isometric(x, z).is_some());
                    }
                }
            }
        }
        // K_{3,3} is the circulant with connection set {1, 3, 5}; prism(3) is not bipartite
        assert!(marked_isometric(&corpus[2], &corpus[3]).is_none());
    }
}
