//! Voltage assignments with values in fiber automorphisms, and the graph
//! bundles they define.

mod action;
mod cover;
mod perm;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{CoveringMap, HalfEdgeGraph, IntMatrix};

pub use action::{
    check_phi_compatible, close_group, product_action_on_bundle, CompatibilityViolation,
    GraphAutomorphism, DEFAULT_GROUP_CAP,
};
pub use cover::{cover_to_bundle, CoverBundle};
pub use perm::Permutation;

/// A permutation of the fiber's vertices for every dart of the base, with
/// `φ(reverse d) = φ(d)⁻¹`. Every value is an automorphism of the fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoltageAssignment {
    base: HalfEdgeGraph,
    fiber: HalfEdgeGraph,
    voltages: Vec<Permutation>,
}

impl VoltageAssignment {
    pub fn new(
        base: HalfEdgeGraph,
        fiber: HalfEdgeGraph,
        voltages: Vec<Permutation>,
    ) -> Result<Self> {
        if voltages.len() != base.dart_count() {
            return Err(Error::input(format!(
                "{} voltages given for {} darts",
                voltages.len(),
                base.dart_count()
            )));
        }
        let nf = fiber.vertex_count();
        let fiber_adjacency = fiber.adjacency_matrix();
        for (d, phi) in voltages.iter().enumerate() {
            if phi.len() != nf {
                return Err(Error::voltage(
                    d,
                    format!("permutation of {} points on a fiber with {nf} vertices", phi.len()),
                ));
            }
            if voltages[base.reverse(d)] != phi.inverse() {
                return Err(Error::voltage(d, "reverse dart does not carry the inverse voltage"));
            }
            if !phi.preserves(&fiber_adjacency) {
                return Err(Error::voltage(d, format!("{phi} is not an automorphism of the fiber")));
            }
        }
        Ok(Self {
            base,
            fiber,
            voltages,
        })
    }

    /// Darts absent from `partial` get the inverse of their reverse's voltage,
    /// or the identity when neither is given.
    pub fn from_partial(
        base: HalfEdgeGraph,
        fiber: HalfEdgeGraph,
        partial: &BTreeMap<usize, Permutation>,
    ) -> Result<Self> {
        if let Some(&d) = partial.keys().find(|&&d| d >= base.dart_count()) {
            return Err(Error::voltage(d, "dart index out of range"));
        }
        let nf = fiber.vertex_count();
        let voltages = (0..base.dart_count())
            .map(|d| match (partial.get(&d), partial.get(&base.reverse(d))) {
                (Some(p), _) => p.clone(),
                (None, Some(q)) => q.inverse(),
                (None, None) => Permutation::identity(nf),
            })
            .collect();
        Self::new(base, fiber, voltages)
    }

    /// Every dart carries the identity: the bundle is the Cartesian product.
    pub fn trivial(base: HalfEdgeGraph, fiber: HalfEdgeGraph) -> Self {
        let voltages = vec![Permutation::identity(fiber.vertex_count()); base.dart_count()];
        Self {
            base,
            fiber,
            voltages,
        }
    }

    pub fn base(&self) -> &HalfEdgeGraph {
        &self.base
    }

    pub fn fiber(&self) -> &HalfEdgeGraph {
        &self.fiber
    }

    pub fn voltages(&self) -> &[Permutation] {
        &self.voltages
    }

    pub fn voltage(&self, dart: usize) -> &Permutation {
        &self.voltages[dart]
    }

    /// Distinct voltages in use, in sorted order.
    pub fn distinct_voltages(&self) -> Vec<Permutation> {
        let set: BTreeSet<&Permutation> = self.voltages.iter().collect();
        set.into_iter().cloned().collect()
    }
}

/// The graph bundle `G ×^φ F`. Vertex `(u, i)` has index `u·|V(F)| + i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub voltage: VoltageAssignment,
    pub total: HalfEdgeGraph,
}

impl Bundle {
    pub fn base(&self) -> &HalfEdgeGraph {
        self.voltage.base()
    }

    pub fn fiber(&self) -> &HalfEdgeGraph {
        self.voltage.fiber()
    }

    pub fn vertex_index(&self, u: usize, i: usize) -> usize {
        u * self.fiber().vertex_count() + i
    }

    /// Inverse of [`Bundle::vertex_index`].
    pub fn vertex_pair(&self, v: usize) -> (usize, usize) {
        let nf = self.fiber().vertex_count();
        (v / nf, v % nf)
    }

    /// Index of the lift of base dart `d` starting in fiber vertex `i`.
    pub fn lifted_base_dart(&self, d: usize, i: usize) -> usize {
        d * self.fiber().vertex_count() + i
    }

    /// `(u, i) -> u`, a covering of the base when the fiber has no edges.
    pub fn base_projection(&self) -> Result<CoveringMap> {
        if self.fiber().dart_count() != 0 {
            return Err(Error::input("projection to the base is a covering only for edgeless fibers"));
        }
        let nf = self.fiber().vertex_count();
        let p = CoveringMap {
            source: self.total.clone(),
            target: self.base().clone(),
            vertex_map: (0..self.total.vertex_count()).map(|v| v / nf).collect(),
            dart_map: (0..self.total.dart_count()).map(|d| d / nf).collect(),
        };
        p.validate()?;
        Ok(p)
    }

    /// Index of the copy of fiber dart `e` over base vertex `u`.
    pub fn lifted_fiber_dart(&self, u: usize, e: usize) -> usize {
        self.base().dart_count() * self.fiber().vertex_count() + u * self.fiber().dart_count() + e
    }
}

/// Base dart `d` lifts to darts `(tail d, i) -> (head d, i^φ(d))`; each fiber
/// dart is copied over every base vertex.
pub fn build_bundle(va: &VoltageAssignment) -> Bundle {
    let (base, fiber) = (va.base(), va.fiber());
    let nf = fiber.vertex_count();
    let lifted = base.dart_count() * nf;
    let total_darts = lifted + base.vertex_count() * fiber.dart_count();
    let mut tails = Vec::with_capacity(total_darts);
    let mut involution = Vec::with_capacity(total_darts);
    for d in 0..base.dart_count() {
        let phi = va.voltage(d);
        for i in 0..nf {
            tails.push(base.tail(d) * nf + i);
            involution.push(base.reverse(d) * nf + phi.apply(i));
        }
    }
    for u in 0..base.vertex_count() {
        for e in 0..fiber.dart_count() {
            tails.push(u * nf + fiber.tail(e));
            involution.push(lifted + u * fiber.dart_count() + fiber.reverse(e));
        }
    }
    let total = HalfEdgeGraph::new(base.vertex_count() * nf, tails, involution)
        .expect("bundle of a valid voltage assignment is a valid graph");
    Bundle {
        voltage: va.clone(),
        total,
    }
}

/// `A_γ(u, v)`: number of darts from `u` to `v` carrying voltage `γ`.
pub fn gamma_spanning_subgraph(va: &VoltageAssignment, gamma: &Permutation) -> IntMatrix {
    let base = va.base();
    let n = base.vertex_count();
    let mut a = IntMatrix::zeros(n, n);
    for d in 0..base.dart_count() {
        if va.voltage(d) == gamma {
            a[(base.tail(d), base.head(d))] += 1;
        }
    }
    a
}

/// `Σ_γ A_γ ⊗ P_γ + I ⊗ A_F` over the distinct voltages in use.
pub fn decomposed_adjacency(va: &VoltageAssignment) -> IntMatrix {
    let nb = va.base().vertex_count();
    let mut out = IntMatrix::identity(nb, nb).kronecker(&va.fiber().adjacency_matrix());
    out += group_sum(va);
    out
}

fn group_sum(va: &VoltageAssignment) -> IntMatrix {
    let n = va.base().vertex_count() * va.fiber().vertex_count();
    va.distinct_voltages()
        .iter()
        .fold(IntMatrix::zeros(n, n), |acc, gamma| {
            acc + gamma_spanning_subgraph(va, gamma).kronecker(&gamma.matrix())
        })
}

/// `Σ_γ A_γ ⊗ P_γ` for a voltage assignment whose fiber has no edges, as
/// produced by [`cover_to_bundle`].
pub fn group_decomposed_adjacency(va: &VoltageAssignment) -> Result<IntMatrix> {
    if va.fiber().dart_count() != 0 {
        return Err(Error::input("group fiber must have no edges"));
    }
    Ok(group_sum(va))
}

/// Pulls `φ` back along a covering `p: X -> G`, giving `ψ = φ ∘ p` on `X`
/// and the induced covering `(x, i) -> (p(x), i)` of bundles.
pub fn induced_cover_of_bundles(
    p: &CoveringMap,
    phi: &VoltageAssignment,
) -> Result<(VoltageAssignment, CoveringMap)> {
    p.validate()?;
    if phi.base() != &p.target {
        return Err(Error::input("voltage assignment is not on the covering's target"));
    }
    let psi_values = p.dart_map.iter().map(|&e| phi.voltage(e).clone()).collect();
    let psi = VoltageAssignment::new(p.source.clone(), phi.fiber().clone(), psi_values)?;
    let upper = build_bundle(&psi);
    let lower = build_bundle(phi);
    let nf = phi.fiber().vertex_count();
    let vertex_map = (0..upper.total.vertex_count())
        .map(|v| {
            let (x, i) = upper.vertex_pair(v);
            lower.vertex_index(p.vertex_map[x], i)
        })
        .collect();
    let mut dart_map = Vec::with_capacity(upper.total.dart_count());
    for d in 0..p.source.dart_count() {
        for i in 0..nf {
            dart_map.push(lower.lifted_base_dart(p.dart_map[d], i));
        }
    }
    for x in 0..p.source.vertex_count() {
        for e in 0..phi.fiber().dart_count() {
            dart_map.push(lower.lifted_fiber_dart(p.vertex_map[x], e));
        }
    }
    let lifted = CoveringMap {
        source: upper.total,
        target: lower.total,
        vertex_map,
        dart_map,
    };
    lifted.validate()?;
    Ok((psi, lifted))
}
