//! JSON documents for instances, reduction artifacts, traces and reduction
//! inputs.
//!
//! Instances are written in canonical form: normalized heights, edges as
//! sorted `[u, v]` pairs with `u < v`, and a trailing newline. Parsing then
//! serializing any accepted document yields that canonical form.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{normalize, Graph, Instance, Stack, Trace, ValidationError, Variant};
use crate::reductions::{Construction, ReductionArtifact, SegmentMap, VertexRole};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackEntry {
    pub color: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionBlock {
    pub construction: Construction,
    pub roles: Vec<VertexRole>,
    pub segments: SegmentMap,
    pub payload_order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub format_version: u32,
    pub threshold: u32,
    pub color_count: u32,
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub stacks: Vec<StackEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDocument {
    pub format_version: u32,
    pub variant: Variant,
    pub placements: Vec<usize>,
}

/// A Partition source: `{"elements": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionDocument {
    pub elements: Vec<u64>,
}

/// A 3-Partition source: `{"elements": [...], "bound": B}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreePartitionDocument {
    pub elements: Vec<u64>,
    pub bound: u64,
}

/// A source solution: a Partition subset or a list of 3-Partition triplets
/// (element indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SolutionDocument {
    Subset { subset: Vec<usize> },
    Triplets { triplets: Vec<[usize; 3]> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format_version {found} (expected {FORMAT_VERSION})")]
    Version { found: u64 },
    #[error("edges[{index}] = [{u}, {v}] references a vertex outside 0..{vertices}")]
    DanglingVertex {
        index: usize,
        u: usize,
        v: usize,
        vertices: usize,
    },
    #[error("invalid instance: {0}")]
    Invalid(ValidationError),
    #[error("invalid reduction block: {0}")]
    Reduction(String),
}

/// Parsed instance document, with or without a reduction block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedInstance {
    Plain(Instance),
    Artifact(ReductionArtifact),
}

impl ParsedInstance {
    pub fn instance(&self) -> &Instance {
        match self {
            ParsedInstance::Plain(i) => i,
            ParsedInstance::Artifact(a) => &a.instance,
        }
    }

    pub fn into_instance(self) -> Instance {
        match self {
            ParsedInstance::Plain(i) => i,
            ParsedInstance::Artifact(a) => a.instance,
        }
    }
}

fn decode<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if let Some(v) = value.get("format_version") {
        match v.as_u64() {
            Some(found) if found != u64::from(FORMAT_VERSION) => {
                return Err(FormatError::Version { found })
            }
            _ => {}
        }
    }
    serde_json::from_str(text).map_err(|e| FormatError::Schema {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn build_instance(doc: &InstanceDocument) -> Result<Instance, FormatError> {
    let edges: Vec<(usize, usize)> = doc.edges.iter().map(|&[u, v]| (u, v)).collect();
    let graph = Graph::new(doc.vertices, &edges).map_err(|e| match e {
        ValidationError::EdgeOutOfRange {
            index,
            u,
            v,
            vertex_count,
        } => FormatError::DanglingVertex {
            index,
            u,
            v,
            vertices: vertex_count,
        },
        other => FormatError::Invalid(other),
    })?;
    let stacks = doc
        .stacks
        .iter()
        .map(|s| Stack::new(s.color, s.height))
        .collect();
    let inst = Instance::with_color_count(graph, doc.threshold, stacks, doc.color_count)
        .map_err(FormatError::Invalid)?;
    Ok(normalize(&inst))
}

fn check_block(block: &ReductionBlock, inst: &Instance) -> Result<(), FormatError> {
    if block.roles.len() != inst.vertex_count() {
        return Err(FormatError::Reduction(format!(
            "{} roles for {} vertices",
            block.roles.len(),
            inst.vertex_count()
        )));
    }
    if !block.segments.tiles(inst.sequence().len()) {
        return Err(FormatError::Reduction(format!(
            "segments do not tile the {} stacks",
            inst.sequence().len()
        )));
    }
    if block.payload_order.len() != block.segments.payload.len() {
        return Err(FormatError::Reduction(format!(
            "payload_order has {} entries for a payload of {}",
            block.payload_order.len(),
            block.segments.payload.len()
        )));
    }
    Ok(())
}

/// Validates and normalizes an instance document.
pub fn parse_instance(text: &str) -> Result<ParsedInstance, FormatError> {
    let doc: InstanceDocument = decode(text)?;
    let instance = build_instance(&doc)?;
    match doc.reduction {
        None => Ok(ParsedInstance::Plain(instance)),
        Some(block) => {
            check_block(&block, &instance)?;
            Ok(ParsedInstance::Artifact(ReductionArtifact {
                construction: block.construction,
                instance,
                roles: block.roles,
                segments: block.segments,
                payload_order: block.payload_order,
            }))
        }
    }
}

pub fn instance_document(instance: &Instance) -> InstanceDocument {
    InstanceDocument {
        format_version: FORMAT_VERSION,
        threshold: instance.threshold(),
        color_count: instance.color_count(),
        vertices: instance.vertex_count(),
        edges: instance
            .graph()
            .edges()
            .iter()
            .map(|&(u, v)| [u, v])
            .collect(),
        stacks: instance
            .sequence()
            .iter()
            .map(|s| StackEntry {
                color: s.color.0,
                height: s.height,
            })
            .collect(),
        reduction: None,
    }
}

pub fn artifact_document(artifact: &ReductionArtifact) -> InstanceDocument {
    InstanceDocument {
        reduction: Some(ReductionBlock {
            construction: artifact.construction,
            roles: artifact.roles.clone(),
            segments: artifact.segments.clone(),
            payload_order: artifact.payload_order.clone(),
        }),
        ..instance_document(&artifact.instance)
    }
}

fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn serialize_instance(instance: &Instance) -> String {
    to_text(&instance_document(instance))
}

pub fn serialize_artifact(artifact: &ReductionArtifact) -> String {
    to_text(&artifact_document(artifact))
}

pub fn serialize_parsed(parsed: &ParsedInstance) -> String {
    match parsed {
        ParsedInstance::Plain(i) => serialize_instance(i),
        ParsedInstance::Artifact(a) => serialize_artifact(a),
    }
}

pub fn parse_trace(text: &str) -> Result<(Trace, Variant), FormatError> {
    let doc: TraceDocument = decode(text)?;
    Ok((Trace(doc.placements), doc.variant))
}

pub fn serialize_trace(trace: &Trace, variant: Variant) -> String {
    to_text(&TraceDocument {
        format_version: FORMAT_VERSION,
        variant,
        placements: trace.0.clone(),
    })
}

pub fn parse_partition(text: &str) -> Result<PartitionDocument, FormatError> {
    decode(text)
}

pub fn parse_three_partition(text: &str) -> Result<ThreePartitionDocument, FormatError> {
    decode(text)
}

pub fn parse_solution(text: &str) -> Result<SolutionDocument, FormatError> {
    decode(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{
        partition_to_spider, partition_to_two_edges, three_partition_to_gadgets, PartitionInstance,
        ThreePartitionInstance, Topology, TreeShape,
    };

    const SAMPLE: &str = r#"{
  "format_version": 1,
  "threshold": 3,
  "color_count": 2,
  "vertices": 3,
  "edges": [[2, 1], [0, 1]],
  "stacks": [{"color": 0, "height": 2}, {"color": 1, "height": 7}]
}"#;

    #[test]
    fn round_trip_is_canonical() {
        let parsed = parse_instance(SAMPLE).unwrap();
        let text = serialize_parsed(&parsed);
        let doc: InstanceDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(doc.edges, vec![[0, 1], [1, 2]]);
        assert_eq!(doc.stacks[1].height, 3);
        assert_eq!(parse_instance(&text).unwrap(), parsed);
        assert_eq!(serialize_parsed(&parse_instance(&text).unwrap()), text);
    }

    #[test]
    fn artifact_round_trip() {
        let p = PartitionInstance::new(vec![1, 1, 2, 2]).unwrap();
        let a3 = ThreePartitionInstance::new(vec![5, 5, 5, 6, 6, 7], 17).unwrap();
        for art in [
            partition_to_two_edges(&p).unwrap(),
            partition_to_spider(&p).unwrap(),
            three_partition_to_gadgets(&a3, Topology::Disjoint).unwrap(),
            three_partition_to_gadgets(&a3, Topology::Tree(TreeShape::Binary)).unwrap(),
        ] {
            let text = serialize_artifact(&art);
            match parse_instance(&text).unwrap() {
                ParsedInstance::Artifact(back) => assert_eq!(back, art),
                other => panic!("lost reduction block: {other:?}"),
            }
        }
    }

    #[test]
    fn dangling_edge_is_named() {
        let text = r#"{"format_version":1,"threshold":2,"color_count":1,"vertices":4,"edges":[[0,9]],"stacks":[]}"#;
        let err = parse_instance(text).unwrap_err();
        assert_eq!(
            err,
            FormatError::DanglingVertex {
                index: 0,
                u: 0,
                v: 9,
                vertices: 4
            }
        );
        assert!(err.to_string().contains("[0, 9]"));
    }

    #[test]
    fn error_kinds_are_distinct() {
        assert!(matches!(
            parse_instance("{\"format_version\": 1,"),
            Err(FormatError::Syntax { line: 1, .. })
        ));
        let missing = "{\n\"format_version\": 1,\n\"threshold\": 2\n}";
        assert!(matches!(
            parse_instance(missing),
            Err(FormatError::Schema { .. })
        ));
        let unknown = SAMPLE.replace("\"threshold\"", "\"bogus\": 0, \"threshold\"");
        assert!(matches!(
            parse_instance(&unknown),
            Err(FormatError::Schema { .. })
        ));
        let v2 = SAMPLE.replace("\"format_version\": 1", "\"format_version\": 2");
        assert_eq!(parse_instance(&v2), Err(FormatError::Version { found: 2 }));
        let bad_color = SAMPLE.replace("\"color\": 1", "\"color\": 5");
        assert!(matches!(
            parse_instance(&bad_color),
            Err(FormatError::Invalid(_))
        ));
    }

    #[test]
    fn broken_reduction_block() {
        let p = PartitionInstance::new(vec![1, 1, 2, 2]).unwrap();
        let mut doc = artifact_document(&partition_to_two_edges(&p).unwrap());
        doc.reduction.as_mut().unwrap().roles.pop();
        let text = to_text(&doc);
        assert!(matches!(
            parse_instance(&text),
            Err(FormatError::Reduction(_))
        ));
    }

    #[test]
    fn trace_round_trip() {
        let t = Trace(vec![0, 4, 1, 2]);
        let text = serialize_trace(&t, Variant::Empty);
        assert_eq!(parse_trace(&text).unwrap(), (t, Variant::Empty));
        assert!(text.contains("\"variant\": \"empty\""));
    }

    #[test]
    fn solution_documents() {
        assert_eq!(
            parse_solution(r#"{"subset":[0,2]}"#).unwrap(),
            SolutionDocument::Subset { subset: vec![0, 2] }
        );
        assert_eq!(
            parse_solution(r#"{"triplets":[[0,1,2]]}"#).unwrap(),
            SolutionDocument::Triplets {
                triplets: vec![[0, 1, 2]]
            }
        );
        assert!(parse_solution(r#"{"pairs":[]}"#).is_err());
    }
}
