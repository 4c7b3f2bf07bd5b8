//! Compilers from Partition and 3-Partition into Empty instances, together
//! with witness translation in both directions.
//!
//! Every artifact records, next to the instance, the role of each vertex
//! and the segment layout of the sequence so that traces can be interpreted
//! without re-deriving the construction.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{EngineError, Instance, TraceFailure};

mod partition;
mod three_partition;

pub use partition::{
    partition_canonicalize, partition_from_witness, partition_to_spider, partition_to_two_edges,
    witness_from_partition, CanonicalizationResult, PartitionInstance,
};
pub use three_partition::{
    three_partition_to_gadgets, triplets_from_witness, witness_from_triplets,
    ThreePartitionInstance, Topology, TreeShape,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    TwoEdges,
    Spider,
    DisjointSpiders,
    SpiderTree,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::TwoEdges => "two-edges",
            Construction::Spider => "spider",
            Construction::DisjointSpiders => "disjoint-spiders",
            Construction::SpiderTree => "spider-tree",
        }
    }
}

/// Position of a vertex inside its gadget. Arms are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", content = "arm", rename_all = "kebab-case")]
pub enum RoleTag {
    Center,
    Short(u8),
    ArmInner(u8),
    ArmLeaf(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexRole {
    #[serde(flatten)]
    pub tag: RoleTag,
    pub gadget: usize,
}

impl VertexRole {
    pub fn new(tag: RoleTag, gadget: usize) -> Self {
        VertexRole { tag, gadget }
    }

    /// Arm number for inner and leaf vertices of an arm.
    pub fn arm(&self) -> Option<u8> {
        match self.tag {
            RoleTag::ArmInner(i) | RoleTag::ArmLeaf(i) => Some(i),
            _ => None,
        }
    }
}

/// Consecutive half-open ranges of the sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentMap {
    pub initial: Range<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reservation: Option<Range<usize>>,
    pub payload: Range<usize>,
    pub connector: Range<usize>,
    #[serde(rename = "final", default, skip_serializing_if = "Option::is_none")]
    pub final_pulls: Option<Range<usize>>,
}

impl SegmentMap {
    pub fn ranges(&self) -> Vec<Range<usize>> {
        let mut out = vec![self.initial.clone()];
        out.extend(self.reservation.clone());
        out.push(self.payload.clone());
        out.push(self.connector.clone());
        out.extend(self.final_pulls.clone());
        out
    }

    /// Whether the ranges tile `0..len` in order.
    pub fn tiles(&self, len: usize) -> bool {
        let mut at = 0;
        for r in self.ranges() {
            if r.start != at || r.end < r.start {
                return false;
            }
            at = r.end;
        }
        at == len
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionArtifact {
    pub construction: Construction,
    pub instance: Instance,
    /// Role of each vertex, indexed by vertex.
    pub roles: Vec<VertexRole>,
    pub segments: SegmentMap,
    /// `payload_order[k]` is the source element index of payload stack `k`.
    pub payload_order: Vec<usize>,
}

impl ReductionArtifact {
    /// Source element behind sequence position `i`, if it is a payload stack.
    pub fn payload_element(&self, i: usize) -> Option<usize> {
        self.segments
            .payload
            .contains(&i)
            .then(|| self.payload_order[i - self.segments.payload.start])
    }

    /// First vertex with the given role.
    pub fn vertex(&self, tag: RoleTag, gadget: usize) -> Option<usize> {
        self.roles
            .iter()
            .position(|r| *r == VertexRole::new(tag, gadget))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("the Partition instance is not canonical; run partition_canonicalize first")]
    NotCanonical,
    #[error("threshold {threshold} is too small for the spider gadget (needs at least 3)")]
    ThresholdTooSmall { threshold: u64 },
    #[error("value {value} does not fit in a stack height")]
    HeightOverflow { value: u64 },
    #[error("elements must be positive (index {index})")]
    ZeroElement { index: usize },
    #[error("3-Partition needs 3m elements with m ≥ 1, got {len}")]
    ElementCount { len: usize },
    #[error("elements sum to {sum}, expected m·B = {expected}")]
    TotalMismatch { sum: u64, expected: u64 },
    #[error("element {value} at index {index} is outside (B/4, B/2)")]
    OutOfRange { index: usize, value: u64 },
    #[error("{operation} needs a {expected} artifact, got {found}")]
    WrongConstruction {
        operation: &'static str,
        expected: &'static str,
        found: &'static str,
    },
    #[error("element index {index} is out of range or repeated")]
    BadIndex { index: usize },
    #[error("subset sums to {got}, expected {expected}")]
    SubsetSum { expected: u64, got: u64 },
    #[error("triplet {triplet} sums to {got}, expected {expected}")]
    TripletSum {
        triplet: usize,
        expected: u64,
        got: u64,
    },
    #[error("expected {expected} triplets, got {got}")]
    TripletCount { expected: usize, got: usize },
    #[error("triplets do not cover every element exactly once")]
    TripletCover,
    #[error("trace is not a solution: {0}")]
    Rejected(String),
    #[error("payload stack {position} landed on vertex {vertex}, which is not on a payload arm")]
    PayloadOffArm { position: usize, vertex: usize },
    #[error("gadget {gadget} received {count} payload stacks instead of 3")]
    GadgetLoad { gadget: usize, count: usize },
}

impl From<EngineError> for ReductionError {
    fn from(e: EngineError) -> Self {
        ReductionError::Rejected(e.to_string())
    }
}

impl From<TraceFailure> for ReductionError {
    fn from(f: TraceFailure) -> Self {
        ReductionError::Rejected(f.to_string())
    }
}

pub(crate) fn height(value: u64) -> Result<u32, ReductionError> {
    u32::try_from(value).map_err(|_| ReductionError::HeightOverflow { value })
}

pub(crate) fn expect_construction(
    artifact: &ReductionArtifact,
    operation: &'static str,
    allowed: &[Construction],
) -> Result<(), ReductionError> {
    if allowed.contains(&artifact.construction) {
        Ok(())
    } else {
        Err(ReductionError::WrongConstruction {
            operation,
            expected: allowed[0].name(),
            found: artifact.construction.name(),
        })
    }
}

/// Replays `trace` for Empty and rejects it unless the board ends clear.
pub(crate) fn require_solution(
    artifact: &ReductionArtifact,
    trace: &crate::engine::Trace,
) -> Result<(), ReductionError> {
    let replay =
        crate::engine::play_trace(&artifact.instance, trace, crate::engine::Variant::Empty)?;
    match replay.failure {
        None => Ok(()),
        Some(f) => Err(f.into()),
    }
}
