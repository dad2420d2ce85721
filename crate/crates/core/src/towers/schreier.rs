//! Schreier graphs of automaton groups acting on binary strings.
//!
//! A vertex at level `m` is an index in `0..2^m`; bit `j` of the index is the
//! flipped `j`-th letter of the string, so index 0 stands for the string of
//! all ones. Truncating a string to its first `m` letters keeps the low `m`
//! bits. The limit is the orbital graph of the infinite all-ones string,
//! whose vertices are finitely supported bit sets.

use std::collections::{BTreeMap, VecDeque};

use super::{LimitModel, Tower};
use crate::error::{Error, Result};
use crate::graph::{CoveringMap, HalfEdgeGraph, MarkedGraph};

/// Default cap on the Schreier tower depth.
pub const DEFAULT_MAX_DEPTH: usize = 12;

/// One state of a binary Mealy automaton: optionally swap the current letter,
/// then continue with `next[letter]` on the rest of the string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonState {
    pub name: String,
    pub swap: bool,
    pub next: [usize; 2],
}

/// Automaton group given by its states and the states used as generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    states: Vec<AutomatonState>,
    generators: Vec<usize>,
}

/// How a generator fixing a vertex is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchreierConvention {
    /// One dart per (vertex, generator): fixed points become half-loops and
    /// the graph is `|S|`-regular. Requires involutive generators.
    #[default]
    HalfLoops,
    /// One edge `{v, s(v)}` per (vertex, generator): fixed points become
    /// full loops, involutions give doubled edges, and the graph is
    /// `2|S|`-regular without half-loops.
    Doubled,
}

impl SchreierConvention {
    pub fn degree(self, generators: usize) -> usize {
        match self {
            SchreierConvention::HalfLoops => generators,
            SchreierConvention::Doubled => 2 * generators,
        }
    }
}

impl Automaton {
    pub fn new(states: Vec<AutomatonState>, generators: Vec<usize>) -> Result<Self> {
        let n = states.len();
        if let Some(s) = states.iter().find(|s| s.next.iter().any(|&t| t >= n)) {
            return Err(Error::input(format!("state {} has a transition out of range", s.name)));
        }
        if generators.is_empty() || generators.iter().any(|&g| g >= n) {
            return Err(Error::input("generators must be a nonempty list of states"));
        }
        Ok(Self { states, generators })
    }

    /// The first Grigorchuk group: `a` swaps the first letter,
    /// `b = (a, c)`, `c = (a, d)`, `d = (1, b)`.
    pub fn grigorchuk() -> Self {
        let state = |name: &str, swap, next| AutomatonState {
            name: name.into(),
            swap,
            next,
        };
        // 0 = identity, 1 = a, 2 = b, 3 = c, 4 = d
        let states = vec![
            state("e", false, [0, 0]),
            state("a", true, [0, 0]),
            state("b", false, [1, 3]),
            state("c", false, [1, 4]),
            state("d", false, [0, 2]),
        ];
        Self::new(states, vec![1, 2, 3, 4]).expect("built-in automaton is valid")
    }

    pub fn states(&self) -> &[AutomatonState] {
        &self.states
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(|&g| self.states[g].name.as_str()).collect()
    }

    /// Action of `state` on the first `len` letters encoded in `index`.
    pub fn act(&self, state: usize, index: u64, len: usize) -> u64 {
        let mut s = state;
        let mut out = index;
        for j in 0..len {
            let bit = (index >> j) & 1;
            let st = &self.states[s];
            if st.swap {
                out ^= 1 << j;
            }
            s = st.next[1 - bit as usize];
        }
        out
    }

    /// Action on a finitely supported infinite string. Past the support the
    /// input letters are constant, so the state sequence becomes periodic;
    /// a swap inside that period would leave the orbit.
    pub fn act_infinite(&self, state: usize, index: u64) -> Result<u64> {
        let support = 64 - index.leading_zeros() as usize;
        let mut s = state;
        let mut out = index;
        let mut seen = BTreeMap::new();
        for j in 0..64 {
            let st = &self.states[s];
            if j >= support {
                if let Some(&first) = seen.get(&s) {
                    let swapped_in_cycle = (first..j).any(|p| (out ^ index) >> p & 1 == 1);
                    if swapped_in_cycle {
                        return Err(Error::input("action does not preserve finite support"));
                    }
                    return Ok(out);
                }
                seen.insert(s, j);
            }
            if st.swap {
                out ^= 1 << j;
            }
            let bit = (index >> j) & 1;
            s = st.next[1 - bit as usize];
        }
        Err(Error::ResourceLimit("string support exceeds 64 letters".into()))
    }
}

/// Builds a Schreier-type graph on `vertex_count` vertices from the images of
/// each generator. `images[v][s]` is the image of vertex `v` under generator `s`.
fn schreier_graph(
    images: &[Vec<usize>],
    generators: usize,
    convention: SchreierConvention,
) -> Result<HalfEdgeGraph> {
    let n = images.len();
    let mut tails = Vec::new();
    let mut involution = Vec::new();
    match convention {
        SchreierConvention::HalfLoops => {
            for (v, row) in images.iter().enumerate() {
                for (s, &w) in row.iter().enumerate() {
                    if images[w][s] != v {
                        return Err(Error::input(format!(
                            "generator {s} is not an involution at vertex {v}"
                        )));
                    }
                    tails.push(v);
                    involution.push(w * generators + s);
                }
            }
        }
        SchreierConvention::Doubled => {
            for (v, row) in images.iter().enumerate() {
                for (s, &w) in row.iter().enumerate() {
                    let d = 2 * (v * generators + s);
                    tails.extend([v, w]);
                    involution.extend([d + 1, d]);
                }
            }
        }
    }
    HalfEdgeGraph::new(n, tails, involution)
}

fn level_images(automaton: &Automaton, level: usize) -> Vec<Vec<usize>> {
    (0..1u64 << level)
        .map(|v| {
            automaton
                .generators
                .iter()
                .map(|&g| automaton.act(g, v, level) as usize)
                .collect()
        })
        .collect()
}

/// Schreier graph of the action on strings of length `level`.
pub fn schreier_level(
    automaton: &Automaton,
    level: usize,
    convention: SchreierConvention,
) -> Result<HalfEdgeGraph> {
    if level >= 40 {
        return Err(Error::ResourceLimit(format!("level {level} is too deep")));
    }
    schreier_graph(&level_images(automaton, level), automaton.generators.len(), convention)
}

/// Truncation map from level `m + 1` to level `m`.
fn truncation(
    upper: &HalfEdgeGraph,
    lower: &HalfEdgeGraph,
    m: usize,
    generators: usize,
    convention: SchreierConvention,
) -> CoveringMap {
    let mask = (1usize << m) - 1;
    let per_vertex = match convention {
        SchreierConvention::HalfLoops => generators,
        SchreierConvention::Doubled => 2 * generators,
    };
    CoveringMap {
        source: upper.clone(),
        target: lower.clone(),
        vertex_map: (0..upper.vertex_count()).map(|v| v & mask).collect(),
        dart_map: (0..upper.dart_count())
            .map(|d| (d / per_vertex & mask) * per_vertex + d % per_vertex)
            .collect(),
    }
}

/// Levels `1..=depth` with truncation coverings, basepoint index 0.
pub fn schreier_tower(
    automaton: &Automaton,
    depth: usize,
    convention: SchreierConvention,
    max_depth: usize,
) -> Result<Tower> {
    if depth == 0 {
        return Err(Error::input("tower depth must be at least 1"));
    }
    if depth > max_depth {
        return Err(Error::ResourceLimit(format!(
            "depth {depth} exceeds the configured maximum {max_depth}"
        )));
    }
    let graphs = (1..=depth)
        .map(|m| schreier_level(automaton, m, convention))
        .collect::<Result<Vec<_>>>()?;
    let gens = automaton.generators.len();
    let maps = (1..depth)
        .map(|m| truncation(&graphs[m], &graphs[m - 1], m, gens, convention))
        .collect();
    let levels = graphs
        .into_iter()
        .map(|g| MarkedGraph::new(g, 0))
        .collect::<Result<Vec<_>>>()?;
    Tower::new(levels, maps)
}

/// The orbital graph of the all-ones string, as a limit of a Schreier tower
/// whose first level has strings of length `first_level`.
#[derive(Debug, Clone)]
pub struct SchreierLimit {
    pub automaton: Automaton,
    pub convention: SchreierConvention,
    pub first_level: usize,
}

impl LimitModel for SchreierLimit {
    fn neighbourhood(&self, radius: usize, levels: usize) -> Result<(MarkedGraph, Vec<Vec<usize>>)> {
        let gens = &self.automaton.generators;
        let mut index = BTreeMap::from([(0u64, 0usize)]);
        let mut vertices = vec![0u64];
        let mut queue = VecDeque::from([(0u64, 0usize)]);
        let mut pending: Vec<Vec<u64>> = Vec::new();
        while let Some((v, dist)) = queue.pop_front() {
            let row = gens
                .iter()
                .map(|&g| self.automaton.act_infinite(g, v))
                .collect::<Result<Vec<_>>>()?;
            if dist < radius {
                for &w in &row {
                    if !index.contains_key(&w) {
                        index.insert(w, vertices.len());
                        vertices.push(w);
                        queue.push_back((w, dist + 1));
                    }
                }
            }
            pending.push(row);
        }
        // images leaving the vertex set only occur on the outer sphere and
        // are dropped; the ball taken by the caller discards that sphere's edges
        let images: Vec<Vec<usize>> = pending
            .iter()
            .map(|row| row.iter().map(|w| index.get(w).copied().unwrap_or(usize::MAX)).collect())
            .collect();
        let graph = induced_schreier(&images, self.convention)?;
        let projections = (0..levels)
            .map(|l| {
                let mask = (1u64 << (self.first_level + l)) - 1;
                vertices.iter().map(|&v| (v & mask) as usize).collect()
            })
            .collect();
        Ok((MarkedGraph::new(graph, 0)?, projections))
    }
}

/// Schreier graph on a finite vertex set where some generator images fall
/// outside the set (`usize::MAX`); those darts are omitted.
fn induced_schreier(images: &[Vec<usize>], convention: SchreierConvention) -> Result<HalfEdgeGraph> {
    let mut tails = Vec::new();
    let mut involution = Vec::new();
    let mut id = BTreeMap::new();
    for (v, row) in images.iter().enumerate() {
        for (s, &w) in row.iter().enumerate() {
            if w != usize::MAX {
                id.insert((v, s), id.len());
            }
        }
    }
    match convention {
        SchreierConvention::HalfLoops => {
            for (v, row) in images.iter().enumerate() {
                for (s, &w) in row.iter().enumerate() {
                    if w == usize::MAX {
                        continue;
                    }
                    let back = id
                        .get(&(w, s))
                        .ok_or_else(|| Error::input(format!("generator {s} is not an involution")))?;
                    tails.push(v);
                    involution.push(*back);
                }
            }
        }
        SchreierConvention::Doubled => {
            for (v, row) in images.iter().enumerate() {
                for &w in row {
                    if w == usize::MAX {
                        continue;
                    }
                    let d = tails.len();
                    tails.extend([v, w]);
                    involution.extend([d + 1, d]);
                }
            }
        }
    }
    HalfEdgeGraph::new(images.len(), tails, involution)
}
