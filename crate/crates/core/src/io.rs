//! JSON formats for graphs, voltage assignments and coverings.
//!
//! Graph:
//! `{"vertices": N, "darts": [{"tail": i}, ...], "involution": [j, ...], "labels": {"v": "name"}}`.
//!
//! Voltage assignment: `{"base": <graph>, "fiber": <graph>, "voltages": {"dart": [images]}}`.
//! A dart missing from `voltages` gets the inverse of its reverse's voltage,
//! or the identity if neither is listed.
//!
//! Covering with deck generators:
//! `{"source": <graph>, "target": <graph>, "vertex_map": [...], "dart_map": [...],
//! "deck_generators": [[vertex images] | {"vertices": [...], "darts": [...]}]}`.
//! `dart_map` may be omitted when the target has no parallel darts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CoveringMap, HalfEdgeGraph};
use crate::voltage::{GraphAutomorphism, Permutation, VoltageAssignment};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DartJson {
    pub tail: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: usize,
    pub darts: Vec<DartJson>,
    pub involution: Vec<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, String>,
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<HalfEdgeGraph> {
        let tails = self.darts.iter().map(|d| d.tail).collect();
        let g = HalfEdgeGraph::new(self.vertices, tails, self.involution.clone())?;
        let mut labels = BTreeMap::new();
        for (key, name) in &self.labels {
            let v: usize = key
                .parse()
                .map_err(|_| Error::graph(format!("label key {key:?} is not a vertex index")))?;
            if v >= self.vertices {
                return Err(Error::graph(format!("label for nonexistent vertex {v}")));
            }
            labels.insert(v, name.clone());
        }
        Ok(g.with_labels(labels))
    }
}

impl From<&HalfEdgeGraph> for GraphJson {
    fn from(g: &HalfEdgeGraph) -> Self {
        GraphJson {
            vertices: g.vertex_count(),
            darts: g.tails().iter().map(|&tail| DartJson { tail }).collect(),
            involution: g.involution().to_vec(),
            labels: g.labels().iter().map(|(v, s)| (v.to_string(), s.clone())).collect(),
        }
    }
}

pub fn parse_graph(text: &str) -> Result<HalfEdgeGraph> {
    serde_json::from_str::<GraphJson>(text)?.to_graph()
}

pub fn graph_to_json(g: &HalfEdgeGraph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph serialization cannot fail")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoltageJson {
    pub base: GraphJson,
    pub fiber: GraphJson,
    #[serde(default)]
    pub voltages: BTreeMap<String, Vec<usize>>,
}

/// Parses the `{"dart": [images]}` map shared by voltage files and the
/// dihedral voltage option.
pub fn parse_voltage_map(map: &BTreeMap<String, Vec<usize>>) -> Result<BTreeMap<usize, Permutation>> {
    map.iter()
        .map(|(key, images)| {
            let d: usize = key
                .parse()
                .map_err(|_| Error::input(format!("voltage key {key:?} is not a dart index")))?;
            let p = Permutation::new(images.clone()).map_err(|e| Error::voltage(d, e.to_string()))?;
            Ok((d, p))
        })
        .collect()
}

impl VoltageJson {
    pub fn to_assignment(&self) -> Result<VoltageAssignment> {
        let partial = parse_voltage_map(&self.voltages)?;
        VoltageAssignment::from_partial(self.base.to_graph()?, self.fiber.to_graph()?, &partial)
    }
}

impl From<&VoltageAssignment> for VoltageJson {
    /// Lists every non-identity voltage.
    fn from(va: &VoltageAssignment) -> Self {
        VoltageJson {
            base: va.base().into(),
            fiber: va.fiber().into(),
            voltages: va
                .voltages()
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_identity())
                .map(|(d, p)| (d.to_string(), p.images().to_vec()))
                .collect(),
        }
    }
}

pub fn parse_voltage(text: &str) -> Result<VoltageAssignment> {
    serde_json::from_str::<VoltageJson>(text)?.to_assignment()
}

pub fn voltage_to_json(va: &VoltageAssignment) -> String {
    serde_json::to_string(&VoltageJson::from(va)).expect("voltage serialization cannot fail")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AutomorphismJson {
    Vertices(Vec<usize>),
    Full { vertices: Vec<usize>, darts: Vec<usize> },
}

impl AutomorphismJson {
    pub fn to_automorphism(&self, g: &HalfEdgeGraph) -> Result<GraphAutomorphism> {
        match self {
            AutomorphismJson::Vertices(v) => GraphAutomorphism::from_vertex_permutation(g, Permutation::new(v.clone())?),
            AutomorphismJson::Full { vertices, darts } => {
                GraphAutomorphism::new(g, Permutation::new(vertices.clone())?, Permutation::new(darts.clone())?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringJson {
    pub source: GraphJson,
    pub target: GraphJson,
    pub vertex_map: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dart_map: Option<Vec<usize>>,
    #[serde(default)]
    pub deck_generators: Vec<AutomorphismJson>,
}

impl CoveringJson {
    /// The covering map, validated, and its deck generators.
    pub fn to_covering(&self) -> Result<(CoveringMap, Vec<GraphAutomorphism>)> {
        let source = self.source.to_graph()?;
        let target = self.target.to_graph()?;
        let p = match &self.dart_map {
            Some(dart_map) => CoveringMap {
                source: source.clone(),
                target,
                vertex_map: self.vertex_map.clone(),
                dart_map: dart_map.clone(),
            },
            None => CoveringMap::from_vertex_map(source.clone(), target, self.vertex_map.clone())?,
        };
        p.validate()?;
        let gens = self
            .deck_generators
            .iter()
            .map(|a| a.to_automorphism(&source))
            .collect::<Result<_>>()?;
        Ok((p, gens))
    }
}

impl From<&CoveringMap> for CoveringJson {
    fn from(p: &CoveringMap) -> Self {
        CoveringJson {
            source: (&p.source).into(),
            target: (&p.target).into(),
            vertex_map: p.vertex_map.clone(),
            dart_map: Some(p.dart_map.clone()),
            deck_generators: Vec::new(),
        }
    }
}

pub fn parse_covering(text: &str) -> Result<(CoveringMap, Vec<GraphAutomorphism>)> {
    serde_json::from_str::<CoveringJson>(text)?.to_covering()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::{cycle, petersen};
    use crate::voltage::build_bundle;

    #[test]
    fn graph_round_trip() {
        let g = petersen().with_labels(BTreeMap::from([(0, "root".to_string())]));
        let back = parse_graph(&graph_to_json(&g)).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.labels()[&0], "root");
    }

    #[test]
    fn half_loop_graph() {
        let g = parse_graph(r#"{"vertices": 1, "darts": [{"tail": 0}], "involution": [0]}"#).unwrap();
        assert_eq!(g.half_loop_count(), 1);
        assert_eq!(g.degree(0), 1);
    }

    #[test]
    fn malformed_involution_names_the_dart() {
        let text = r#"{"vertices": 2, "darts": [{"tail": 0}, {"tail": 1}, {"tail": 1}], "involution": [1, 2, 0]}"#;
        let err = parse_graph(text).unwrap_err();
        assert!(matches!(err, Error::InvalidGraph(_)));
        assert!(err.to_string().contains("dart 0"), "{err}");
    }

    #[test]
    fn rejects_unknown_fields_and_bad_labels() {
        assert!(matches!(
            parse_graph(r#"{"vertices": 1, "darts": [], "involution": [], "edges": []}"#),
            Err(Error::Json(_))
        ));
        assert!(parse_graph(r#"{"vertices": 1, "darts": [], "involution": [], "labels": {"3": "x"}}"#).is_err());
    }

    #[test]
    fn voltage_defaults_and_round_trip() {
        let base = graph_to_json(&cycle(3));
        let fiber = graph_to_json(&cycle(4));
        // dart 0 of C3 gets the rotation; its reverse is inferred
        let text = format!(r#"{{"base": {base}, "fiber": {fiber}, "voltages": {{"0": [1, 2, 3, 0]}}}}"#);
        let va = parse_voltage(&text).unwrap();
        let rev = va.base().reverse(0);
        assert_eq!(va.voltage(rev).images(), &[3, 0, 1, 2]);
        assert_eq!(va.voltages().iter().filter(|p| !p.is_identity()).count(), 2);
        assert_eq!(parse_voltage(&voltage_to_json(&va)).unwrap().voltages(), va.voltages());
        assert_eq!(build_bundle(&va).total.vertex_count(), 12);
    }

    #[test]
    fn rejects_non_automorphism_voltage() {
        let base = graph_to_json(&cycle(3));
        let fiber = graph_to_json(&cycle(4));
        let text = format!(r#"{{"base": {base}, "fiber": {fiber}, "voltages": {{"1": [1, 0, 2, 3]}}}}"#);
        assert!(matches!(parse_voltage(&text), Err(Error::InvalidVoltage { .. })));
    }

    #[test]
    fn covering_with_deck_generators() {
        let c6 = cycle(6);
        let mut json = CoveringJson::from(&CoveringMap::from_vertex_map(c6.clone(), cycle(3), vec![0, 1, 2, 0, 1, 2]).unwrap());
        json.dart_map = None;
        json.deck_generators = vec![AutomorphismJson::Vertices(vec![3, 4, 5, 0, 1, 2])];
        let (p, gens) = parse_covering(&serde_json::to_string(&json).unwrap()).unwrap();
        assert_eq!(p.sheets(), 2);
        assert_eq!(gens.len(), 1);
        json.vertex_map = vec![0, 1, 2, 0, 1, 1];
        assert!(parse_covering(&serde_json::to_string(&json).unwrap()).is_err());
    }
}
