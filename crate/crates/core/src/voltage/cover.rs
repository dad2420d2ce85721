use std::collections::{BTreeMap, VecDeque};

use super::action::{close_group, GraphAutomorphism, DEFAULT_GROUP_CAP};
use super::{build_bundle, Bundle, Permutation, VoltageAssignment};
use crate::error::{Error, Result};
use crate::graph::{CoveringMap, HalfEdgeGraph};

/// A regular covering rewritten as a bundle over its target with the deck
/// group as fiber.
#[derive(Debug, Clone)]
pub struct CoverBundle {
    /// Deck group elements; element `g` is fiber vertex `g`, identity first.
    pub group: Vec<GraphAutomorphism>,
    /// Chosen preimage of each target vertex.
    pub representatives: Vec<usize>,
    pub bundle: Bundle,
    /// Isomorphism from the covering graph onto the bundle total graph.
    pub isomorphism: CoveringMap,
}

/// Reconstructs a regular covering `p: X -> Y` as `Y ×^φ Γ` for the deck
/// group `Γ` generated by `deck_gens`.
///
/// Representatives `v_x` over each target vertex come from a breadth-first
/// spanning tree lifted from a preimage of target vertex 0. For a target dart
/// `e: x -> y` whose lift at `v_x` ends at `u`, the voltage is the deck
/// element `γ` with `γ(v_y) = u`. A vertex `g(v_x)` is labelled `(x, g)`, and
/// the lift of `e` at it ends at `g(γ(v_y))`, labelled `(y, g∘γ)`.
pub fn cover_to_bundle(p: &CoveringMap, deck_gens: &[GraphAutomorphism]) -> Result<CoverBundle> {
    p.validate()?;
    let (source, target) = (&p.source, &p.target);
    if target.vertex_count() == 0 || !target.is_connected() {
        return Err(Error::input("covering target must be connected and nonempty"));
    }
    for (k, g) in deck_gens.iter().enumerate() {
        GraphAutomorphism::new(source, g.vertices.clone(), g.darts.clone())?;
        let commutes = (0..source.vertex_count()).all(|v| p.vertex_map[g.vertices.apply(v)] == p.vertex_map[v])
            && (0..source.dart_count()).all(|d| p.dart_map[g.darts.apply(d)] == p.dart_map[d]);
        if !commutes {
            return Err(Error::input(format!("generator {k} is not a deck transformation")));
        }
    }
    let group = close_group(GraphAutomorphism::identity(source), deck_gens, DEFAULT_GROUP_CAP)?;

    let representatives = lift_spanning_tree(p)?;
    let order = group.len();
    if order * target.vertex_count() != source.vertex_count() {
        return Err(Error::input(format!(
            "deck group of order {order} does not act simply transitively on fibers of size {}",
            p.sheets()
        )));
    }
    // label[v] = (x, g) with v = g(v_x)
    let mut label = vec![usize::MAX; source.vertex_count()];
    for (x, &vx) in representatives.iter().enumerate() {
        for (gi, g) in group.iter().enumerate() {
            let v = g.vertices.apply(vx);
            if label[v] != usize::MAX {
                return Err(Error::input(format!(
                    "deck group does not act freely on the fiber over vertex {x}"
                )));
            }
            label[v] = x * order + gi;
        }
    }

    let element_of: BTreeMap<&Permutation, usize> =
        group.iter().enumerate().map(|(i, g)| (&g.vertices, i)).collect();
    let mut voltages = Vec::with_capacity(target.dart_count());
    for e in 0..target.dart_count() {
        let x = target.tail(e);
        let lift = lift_dart(p, representatives[x], e);
        let (_, gamma_index) = split(label[source.head(lift)], order);
        let gamma = &group[gamma_index].vertices;
        // g -> g∘γ, i.e. first γ then g in right-action notation
        let images = group
            .iter()
            .map(|g| element_of[&gamma.then(&g.vertices)])
            .collect();
        voltages.push(Permutation::new(images)?);
    }
    let va = VoltageAssignment::new(target.clone(), HalfEdgeGraph::empty(order), voltages)?;
    let bundle = build_bundle(&va);

    let dart_map = (0..source.dart_count())
        .map(|d| {
            let (_, g) = split(label[source.tail(d)], order);
            bundle.lifted_base_dart(p.dart_map[d], g)
        })
        .collect();
    let isomorphism = CoveringMap {
        source: source.clone(),
        target: bundle.total.clone(),
        vertex_map: label,
        dart_map,
    };
    isomorphism.validate()?;
    if isomorphism.sheets() != 1 {
        return Err(Error::input("reconstructed bundle is not isomorphic to the cover"));
    }
    Ok(CoverBundle {
        group,
        representatives,
        bundle,
        isomorphism,
    })
}

fn split(label: usize, order: usize) -> (usize, usize) {
    (label / order, label % order)
}

/// The unique dart at `v` lying over target dart `e`.
fn lift_dart(p: &CoveringMap, v: usize, e: usize) -> usize {
    *p.source
        .darts_at(v)
        .iter()
        .find(|&&d| p.dart_map[d] == e)
        .expect("coverings are locally bijective")
}

fn lift_spanning_tree(p: &CoveringMap) -> Result<Vec<usize>> {
    let target = &p.target;
    let start = p
        .vertex_map
        .iter()
        .position(|&x| x == 0)
        .ok_or_else(|| Error::input("covering is not surjective"))?;
    let mut reps = vec![usize::MAX; target.vertex_count()];
    reps[0] = start;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for &e in target.darts_at(x) {
            let y = target.head(e);
            if reps[y] == usize::MAX {
                reps[y] = p.source.head(lift_dart(p, reps[x], e));
                queue.push_back(y);
            }
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::voltage::group_decomposed_adjacency;
    use crate::zeta::{zeta_inverse, ZetaConfig};

    fn wrap(big: usize, small: usize) -> (CoveringMap, GraphAutomorphism) {
        let p = CoveringMap::from_vertex_map(cycle(big), cycle(small), (0..big).map(|j| j % small).collect())
            .unwrap();
        let deck = GraphAutomorphism::from_vertex_permutation(&cycle(big), Permutation::rotation(big, small))
            .unwrap();
        (p, deck)
    }

    #[test]
    fn trivial_cover() {
        let g = petersen();
        let cb = cover_to_bundle(&CoveringMap::identity(&g), &[]).unwrap();
        assert_eq!(cb.group.len(), 1);
        assert!(cb.bundle.voltage.voltages().iter().all(Permutation::is_identity));
        assert_eq!(cb.isomorphism.vertex_map, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn hexagon_over_triangle() {
        let (p, deck) = wrap(6, 3);
        let cb = cover_to_bundle(&p, &[deck]).unwrap();
        let nontrivial: Vec<usize> = (0..6)
            .filter(|&d| !cb.bundle.voltage.voltage(d).is_identity())
            .collect();
        // one edge, both of its darts
        assert_eq!(nontrivial.len(), 2);
        assert_eq!(cb.bundle.base().reverse(nontrivial[0]), nontrivial[1]);
        let a = group_decomposed_adjacency(&cb.bundle.voltage).unwrap();
        assert_eq!(a, cb.bundle.total.adjacency_matrix());
        assert!(a.row_iter().all(|r| r.sum() == 2));
    }

    #[test]
    fn nine_cycle_holonomy_generates() {
        let (p, deck) = wrap(9, 3);
        let cb = cover_to_bundle(&p, &[deck]).unwrap();
        let holonomy = [0, 2, 4]
            .iter()
            .fold(Permutation::identity(3), |acc, &d| acc.then(cb.bundle.voltage.voltage(d)));
        assert!(!holonomy.is_identity());
        assert_eq!(holonomy.pow(3), Permutation::identity(3));
    }

    #[test]
    fn zeta_of_cover_survives_reconstruction() {
        let (p, deck) = wrap(12, 4);
        let cb = cover_to_bundle(&p, &[deck]).unwrap();
        let cfg = ZetaConfig::default();
        assert_eq!(
            zeta_inverse(&p.source, &cfg).unwrap().hashimoto_det,
            zeta_inverse(&cb.bundle.total, &cfg).unwrap().hashimoto_det
        );
    }

    #[test]
    fn rejects_non_regular_action() {
        let (p, _) = wrap(6, 3);
        assert!(cover_to_bundle(&p, &[]).is_err());
    }

    #[test]
    fn rejects_non_deck_generator() {
        let (p, _) = wrap(6, 3);
        let bad = GraphAutomorphism::from_vertex_permutation(&cycle(6), Permutation::rotation(6, 1)).unwrap();
        assert!(cover_to_bundle(&p, &[bad]).is_err());
    }
}
