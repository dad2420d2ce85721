use std::fmt;

use super::HalfEdgeGraph;
use crate::error::{Error, Result};

/// A graph morphism given on vertices and darts, intended to be a covering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringMap {
    pub source: HalfEdgeGraph,
    pub target: HalfEdgeGraph,
    pub vertex_map: Vec<usize>,
    pub dart_map: Vec<usize>,
}

/// First violation found by [`CoveringMap::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoveringViolation {
    MapLength { what: &'static str, expected: usize, found: usize },
    VertexOutOfRange { vertex: usize },
    DartOutOfRange { dart: usize },
    TailMismatch { dart: usize },
    InvolutionMismatch { dart: usize },
    DegreeMismatch { vertex: usize, source_degree: usize, target_degree: usize },
    NotLocallyBijective { vertex: usize },
}

impl fmt::Display for CoveringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MapLength { what, expected, found } => {
                write!(f, "{what} map has {found} entries, expected {expected}")
            }
            Self::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} maps outside the target"),
            Self::DartOutOfRange { dart } => write!(f, "dart {dart} maps outside the target"),
            Self::TailMismatch { dart } => write!(f, "dart {dart}: image tail differs from image of tail"),
            Self::InvolutionMismatch { dart } => {
                write!(f, "dart {dart}: map does not commute with reversal")
            }
            Self::DegreeMismatch { vertex, source_degree, target_degree } => write!(
                f,
                "vertex {vertex} has degree {source_degree} but its image has degree {target_degree}"
            ),
            Self::NotLocallyBijective { vertex } => {
                write!(f, "darts at vertex {vertex} do not map bijectively onto darts at its image")
            }
        }
    }
}

impl std::error::Error for CoveringViolation {}

impl CoveringMap {
    pub fn identity(g: &HalfEdgeGraph) -> Self {
        Self {
            source: g.clone(),
            target: g.clone(),
            vertex_map: (0..g.vertex_count()).collect(),
            dart_map: (0..g.dart_count()).collect(),
        }
    }

    /// Infers the dart map from a vertex map. Requires that the target has at
    /// most one dart between any ordered pair of vertices.
    pub fn from_vertex_map(
        source: HalfEdgeGraph,
        target: HalfEdgeGraph,
        vertex_map: Vec<usize>,
    ) -> Result<Self> {
        if vertex_map.len() != source.vertex_count() {
            return Err(Error::input("vertex map length differs from source vertex count"));
        }
        let mut dart_map = Vec::with_capacity(source.dart_count());
        for d in 0..source.dart_count() {
            let (x, y) = (vertex_map[source.tail(d)], vertex_map[source.head(d)]);
            if x >= target.vertex_count() || y >= target.vertex_count() {
                return Err(Error::input(format!("dart {d} maps outside the target")));
            }
            let mut candidates = target.darts_at(x).iter().filter(|&&e| target.head(e) == y);
            match (candidates.next(), candidates.next()) {
                (Some(&e), None) => dart_map.push(e),
                (None, _) => {
                    return Err(Error::input(format!(
                        "dart {d} has no image: target vertices {x} and {y} are not adjacent"
                    )))
                }
                (Some(_), Some(_)) => {
                    return Err(Error::input(format!(
                        "dart image of {d} is ambiguous: target has parallel darts from {x} to {y}"
                    )))
                }
            }
        }
        Ok(Self {
            source,
            target,
            vertex_map,
            dart_map,
        })
    }

    /// Checks the morphism conditions and local bijectivity, reporting the
    /// first violation.
    pub fn validate(&self) -> std::result::Result<(), CoveringViolation> {
        let (s, t) = (&self.source, &self.target);
        if self.vertex_map.len() != s.vertex_count() {
            return Err(CoveringViolation::MapLength {
                what: "vertex",
                expected: s.vertex_count(),
                found: self.vertex_map.len(),
            });
        }
        if self.dart_map.len() != s.dart_count() {
            return Err(CoveringViolation::MapLength {
                what: "dart",
                expected: s.dart_count(),
                found: self.dart_map.len(),
            });
        }
        if let Some(vertex) = self.vertex_map.iter().position(|&x| x >= t.vertex_count()) {
            return Err(CoveringViolation::VertexOutOfRange { vertex });
        }
        if let Some(dart) = self.dart_map.iter().position(|&e| e >= t.dart_count()) {
            return Err(CoveringViolation::DartOutOfRange { dart });
        }
        for d in 0..s.dart_count() {
            let e = self.dart_map[d];
            if t.tail(e) != self.vertex_map[s.tail(d)] {
                return Err(CoveringViolation::TailMismatch { dart: d });
            }
            if t.reverse(e) != self.dart_map[s.reverse(d)] {
                return Err(CoveringViolation::InvolutionMismatch { dart: d });
            }
        }
        let mut hit = vec![usize::MAX; t.dart_count()];
        for x in 0..s.vertex_count() {
            let image = self.vertex_map[x];
            if s.degree(x) != t.degree(image) {
                return Err(CoveringViolation::DegreeMismatch {
                    vertex: x,
                    source_degree: s.degree(x),
                    target_degree: t.degree(image),
                });
            }
            for &d in s.darts_at(x) {
                let e = self.dart_map[d];
                if hit[e] == x {
                    return Err(CoveringViolation::NotLocallyBijective { vertex: x });
                }
                hit[e] = x;
            }
        }
        Ok(())
    }

    pub fn is_covering(&self) -> bool {
        self.validate().is_ok()
    }

    /// `other ∘ self`, for `self: A -> B` and `other: B -> C`.
    pub fn then(&self, other: &CoveringMap) -> Result<CoveringMap> {
        if self.target != other.source {
            return Err(Error::input("composed coverings do not share a middle graph"));
        }
        Ok(CoveringMap {
            source: self.source.clone(),
            target: other.target.clone(),
            vertex_map: self.vertex_map.iter().map(|&v| other.vertex_map[v]).collect(),
            dart_map: self.dart_map.iter().map(|&d| other.dart_map[d]).collect(),
        })
    }

    /// Number of sheets when the covering is onto a connected target.
    pub fn sheets(&self) -> usize {
        let t = self.target.vertex_count();
        if t == 0 {
            0
        } else {
            self.source.vertex_count() / t
        }
    }
}

/// Free-function form of [`CoveringMap::validate`].
pub fn validate_covering(p: &CoveringMap) -> std::result::Result<(), CoveringViolation> {
    p.validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn wrap(big: usize, small: usize) -> CoveringMap {
        let vm = (0..big).map(|j| j % small).collect();
        CoveringMap::from_vertex_map(cycle(big), cycle(small), vm).unwrap()
    }

    #[test]
    fn identity_is_covering() {
        assert!(CoveringMap::identity(&complete(4)).is_covering());
    }

    #[test]
    fn hexagon_double_covers_triangle() {
        let p = wrap(6, 3);
        assert_eq!(p.validate(), Ok(()));
        assert_eq!(p.sheets(), 2);
    }

    #[test]
    fn constant_map_fails() {
        let p = CoveringMap {
            source: cycle(3),
            target: HalfEdgeGraph::empty(1),
            vertex_map: vec![0; 3],
            dart_map: vec![0; 6],
        };
        assert!(matches!(
            p.validate(),
            Err(CoveringViolation::DartOutOfRange { .. })
        ));
    }

    #[test]
    fn degree_violation_reported() {
        // a path folded onto an edge is a morphism but not locally bijective
        let p = CoveringMap::from_vertex_map(path(3), path(2), vec![0, 1, 0]).unwrap();
        assert_eq!(
            p.validate(),
            Err(CoveringViolation::DegreeMismatch { vertex: 1, source_degree: 2, target_degree: 1 })
        );
    }

    #[test]
    fn composition_of_coverings() {
        let p = wrap(12, 6);
        let q = wrap(6, 3);
        let pq = p.then(&q).unwrap();
        assert!(pq.is_covering());
        assert_eq!(pq.vertex_map, (0..12).map(|j| j % 3).collect::<Vec<_>>());
        for x in 0..12 {
            assert_eq!(pq.source.degree(x), pq.target.degree(pq.vertex_map[x]));
        }
    }
}
