use std::collections::BTreeSet;
use std::fmt;

use super::{Bundle, Permutation, VoltageAssignment};
use crate::error::{Error, Result};
use crate::graph::{CoveringMap, HalfEdgeGraph};

/// Hard cap on the order of groups materialized by [`close_group`].
pub const DEFAULT_GROUP_CAP: usize = 10_000;

/// Automorphism of a graph given on vertices and darts; acts on the right
/// like [`Permutation`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphAutomorphism {
    pub vertices: Permutation,
    pub darts: Permutation,
}

impl GraphAutomorphism {
    pub fn new(g: &HalfEdgeGraph, vertices: Permutation, darts: Permutation) -> Result<Self> {
        if vertices.len() != g.vertex_count() || darts.len() != g.dart_count() {
            return Err(Error::input("automorphism sizes do not match the graph"));
        }
        for d in 0..g.dart_count() {
            let e = darts.apply(d);
            if g.tail(e) != vertices.apply(g.tail(d)) || g.reverse(e) != darts.apply(g.reverse(d)) {
                return Err(Error::input(format!("dart {d} is not mapped compatibly")));
            }
        }
        Ok(Self { vertices, darts })
    }

    pub fn identity(g: &HalfEdgeGraph) -> Self {
        Self {
            vertices: Permutation::identity(g.vertex_count()),
            darts: Permutation::identity(g.dart_count()),
        }
    }

    /// Infers darts from a vertex permutation; needs a graph without parallel darts.
    pub fn from_vertex_permutation(g: &HalfEdgeGraph, vertices: Permutation) -> Result<Self> {
        let map = CoveringMap::from_vertex_map(g.clone(), g.clone(), vertices.images().to_vec())?;
        Self::new(g, vertices, Permutation::new(map.dart_map)?)
    }

    pub fn then(&self, other: &GraphAutomorphism) -> GraphAutomorphism {
        GraphAutomorphism {
            vertices: self.vertices.then(&other.vertices),
            darts: self.darts.then(&other.darts),
        }
    }

    pub fn inverse(&self) -> GraphAutomorphism {
        GraphAutomorphism {
            vertices: self.vertices.inverse(),
            darts: self.darts.inverse(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertices.is_identity() && self.darts.is_identity()
    }
}

/// All elements of the group generated by `gens`, identity first, in
/// breadth-first order over words in the generators.
pub fn close_group(
    identity: GraphAutomorphism,
    gens: &[GraphAutomorphism],
    cap: usize,
) -> Result<Vec<GraphAutomorphism>> {
    let mut seen = BTreeSet::from([identity.clone()]);
    let mut elements = vec![identity];
    let mut head = 0;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for g in gens {
            let next = current.then(g);
            if seen.insert(next.clone()) {
                if elements.len() == cap {
                    return Err(Error::ResourceLimit(format!(
                        "generated group has more than {cap} elements"
                    )));
                }
                elements.push(next);
            }
        }
    }
    Ok(elements)
}

/// First failure found by [`check_phi_compatible`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompatibilityViolation {
    /// `φ(d^γ) ≠ φ(d)` for base generator `generator`.
    NotInvariant { generator: usize, dart: usize },
    /// `φ(dart)` does not commute with fiber generator `generator`.
    NotCentralized { generator: usize, dart: usize },
    /// A generator is not an automorphism of its graph.
    NotAutomorphism { generator: usize, of_base: bool },
}

impl fmt::Display for CompatibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotInvariant { generator, dart } => {
                write!(f, "voltage of dart {dart} changes under base generator {generator}")
            }
            Self::NotCentralized { generator, dart } => write!(
                f,
                "voltage of dart {dart} does not commute with fiber generator {generator}"
            ),
            Self::NotAutomorphism { generator, of_base } => write!(
                f,
                "{} generator {generator} is not an automorphism",
                if *of_base { "base" } else { "fiber" }
            ),
        }
    }
}

/// Checks that the voltages are invariant under the base generators and that
/// every voltage commutes with every fiber generator.
pub fn check_phi_compatible(
    va: &VoltageAssignment,
    base_gens: &[GraphAutomorphism],
    fiber_gens: &[Permutation],
) -> std::result::Result<(), CompatibilityViolation> {
    let base = va.base();
    for (generator, g) in base_gens.iter().enumerate() {
        if GraphAutomorphism::new(base, g.vertices.clone(), g.darts.clone()).is_err() {
            return Err(CompatibilityViolation::NotAutomorphism { generator, of_base: true });
        }
        if let Some(dart) = (0..base.dart_count()).find(|&d| va.voltage(g.darts.apply(d)) != va.voltage(d)) {
            return Err(CompatibilityViolation::NotInvariant { generator, dart });
        }
    }
    let fiber_adjacency = va.fiber().adjacency_matrix();
    for (generator, delta) in fiber_gens.iter().enumerate() {
        if delta.len() != va.fiber().vertex_count() || !delta.preserves(&fiber_adjacency) {
            return Err(CompatibilityViolation::NotAutomorphism { generator, of_base: false });
        }
        if let Some(dart) = (0..base.dart_count()).find(|&d| {
            let phi = va.voltage(d);
            phi.then(delta) != delta.then(phi)
        }) {
            return Err(CompatibilityViolation::NotCentralized { generator, dart });
        }
    }
    Ok(())
}

/// `(x, i) -> (x^γ, i^δ)` on the total graph, verified to preserve adjacency.
pub fn product_action_on_bundle(
    bundle: &Bundle,
    gamma: &GraphAutomorphism,
    delta: &Permutation,
) -> Result<Permutation> {
    if let Err(v) = check_phi_compatible(&bundle.voltage, std::slice::from_ref(gamma), std::slice::from_ref(delta)) {
        return Err(Error::input(format!("incompatible action: {v}")));
    }
    let total = &bundle.total;
    let images = (0..total.vertex_count())
        .map(|v| {
            let (x, i) = bundle.vertex_pair(v);
            bundle.vertex_index(gamma.vertices.apply(x), delta.apply(i))
        })
        .collect();
    let sigma = Permutation::new(images)?;
    for v in 0..total.vertex_count() {
        let mut moved: Vec<usize> = total.darts_at(v).iter().map(|&d| sigma.apply(total.head(d))).collect();
        let mut target: Vec<usize> = total.darts_at(sigma.apply(v)).iter().map(|&d| total.head(d)).collect();
        moved.sort_unstable();
        target.sort_unstable();
        if moved != target {
            return Err(Error::input(format!("action does not preserve adjacency at vertex {v}")));
        }
    }
    Ok(sigma)
}
