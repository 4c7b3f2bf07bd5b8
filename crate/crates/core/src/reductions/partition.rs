use super::{
    expect_construction, height, require_solution, Construction, ReductionArtifact, ReductionError,
    RoleTag, SegmentMap, VertexRole,
};
use crate::engine::{Decision, Graph, Instance, Stack, Trace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    pub elements: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(elements: Vec<u64>) -> Result<Self, ReductionError> {
        if let Some(index) = elements.iter().position(|&e| e == 0) {
            return Err(ReductionError::ZeroElement { index });
        }
        Ok(PartitionInstance { elements })
    }

    pub fn sum(&self) -> u64 {
        self.elements.iter().sum()
    }

    pub fn half(&self) -> u64 {
        self.sum() / 2
    }

    /// Even sum, every element below half, and no prefix summing to half.
    pub fn is_canonical(&self) -> bool {
        matches!(
            partition_canonicalize(self),
            CanonicalizationResult::Canonical(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonicalizationResult {
    Canonical(PartitionInstance),
    /// Settled without a reduction; `subset` holds element indices of one
    /// side whenever the answer is yes.
    Decided {
        decision: Decision,
        subset: Option<Vec<usize>>,
    },
}

impl CanonicalizationResult {
    fn no() -> Self {
        CanonicalizationResult::Decided {
            decision: Decision::No,
            subset: None,
        }
    }

    fn yes(subset: Vec<usize>) -> Self {
        CanonicalizationResult::Decided {
            decision: Decision::Yes,
            subset: Some(subset),
        }
    }
}

/// Settles the easy cases or returns the instance unchanged.
///
/// Empty or odd-sum inputs are negative. A prefix summing to half is a
/// side. An element above half is negative; an element equal to half is a
/// side on its own. Anything else is canonical.
pub fn partition_canonicalize(p: &PartitionInstance) -> CanonicalizationResult {
    let sum = p.sum();
    if p.elements.is_empty() || sum % 2 == 1 {
        return CanonicalizationResult::no();
    }
    let half = sum / 2;
    let mut running = 0;
    for (i, &e) in p.elements.iter().enumerate() {
        running += e;
        if running == half {
            return CanonicalizationResult::yes((0..=i).collect());
        }
    }
    if let Some(i) = p.elements.iter().position(|&e| e >= half) {
        return if p.elements[i] > half {
            CanonicalizationResult::no()
        } else {
            CanonicalizationResult::yes(vec![i])
        };
    }
    CanonicalizationResult::Canonical(p.clone())
}

fn payload(p: &PartitionInstance, color: u32) -> Result<Vec<Stack>, ReductionError> {
    p.elements
        .iter()
        .map(|&e| Ok(Stack::new(color, height(e)?)))
        .collect()
}

/// Two independent edges, one color, `t = ΣP/2`, heights in the given order.
pub fn partition_to_two_edges(p: &PartitionInstance) -> Result<ReductionArtifact, ReductionError> {
    if !p.is_canonical() {
        return Err(ReductionError::NotCanonical);
    }
    let t = height(p.half())?;
    let sequence = payload(p, 0)?;
    let n = sequence.len();
    let instance = Instance::with_color_count(Graph::disjoint_edges(2), t, sequence, 1)
        .expect("valid by construction");
    Ok(ReductionArtifact {
        construction: Construction::TwoEdges,
        instance,
        roles: vec![
            VertexRole::new(RoleTag::ArmInner(1), 0),
            VertexRole::new(RoleTag::ArmLeaf(1), 0),
            VertexRole::new(RoleTag::ArmInner(2), 0),
            VertexRole::new(RoleTag::ArmLeaf(2), 0),
        ],
        segments: SegmentMap {
            initial: 0..0,
            reservation: None,
            payload: 0..n,
            connector: n..n,
            final_pulls: None,
        },
        payload_order: (0..n).collect(),
    })
}

const BLACK: u32 = 0;
const RED: u32 = 1;
const BLUE: u32 = 2;
const GREEN: u32 = 3;

// Vertex layout of the nine-vertex spider.
const CENTER: usize = 0;
const S1: usize = 1;
const S2: usize = 2;
const LA1: usize = 3;
const LB1: usize = 4;
const LA2: usize = 5;
const LB2: usize = 6;
const LA3: usize = 7;
const LB3: usize = 8;

/// Nine-vertex spider with two short and three long arms and four colors.
///
/// The red and blue pairs plus a green reservation clear every vertex but
/// two long arms before the payload arrives; the final red and blue stacks
/// then remove the gadget.
pub fn partition_to_spider(p: &PartitionInstance) -> Result<ReductionArtifact, ReductionError> {
    if !p.is_canonical() {
        return Err(ReductionError::NotCanonical);
    }
    let half = p.half();
    if half < 3 {
        return Err(ReductionError::ThresholdTooSmall { threshold: half });
    }
    let t = height(half)?;
    let big = t / 2 + 1;
    let small = t.div_ceil(2) - 1;

    let mut sequence = vec![
        Stack::new(RED, t - 1),
        Stack::new(RED, t - 1),
        Stack::new(BLUE, t - 1),
        Stack::new(BLUE, t - 1),
        Stack::new(GREEN, big),
        Stack::new(GREEN, big),
        Stack::new(GREEN, small),
        Stack::new(GREEN, small),
    ];
    sequence.extend(payload(p, BLACK)?);
    sequence.push(Stack::new(RED, t - 1));
    sequence.push(Stack::new(BLUE, t - 1));
    let n = p.elements.len();

    let graph = Graph::spider(&[1, 1, 2, 2, 2]);
    let instance =
        Instance::with_color_count(graph, t, sequence, 4).expect("valid by construction");
    let mut roles = vec![
        VertexRole::new(RoleTag::Center, 0),
        VertexRole::new(RoleTag::Short(1), 0),
        VertexRole::new(RoleTag::Short(2), 0),
    ];
    for arm in 1..=3 {
        roles.push(VertexRole::new(RoleTag::ArmInner(arm), 0));
        roles.push(VertexRole::new(RoleTag::ArmLeaf(arm), 0));
    }
    Ok(ReductionArtifact {
        construction: Construction::Spider,
        instance,
        roles,
        segments: SegmentMap {
            initial: 0..4,
            reservation: Some(4..8),
            payload: 8..8 + n,
            connector: 8 + n..10 + n,
            final_pulls: None,
        },
        payload_order: (0..n).collect(),
    })
}

fn element_values(artifact: &ReductionArtifact) -> Vec<u64> {
    let seq = artifact.instance.sequence();
    let mut values = vec![0; artifact.payload_order.len()];
    for (k, &e) in artifact.payload_order.iter().enumerate() {
        values[e] = u64::from(seq[artifact.segments.payload.start + k].height);
    }
    values
}

/// Places `subset` alternately on one payload arm and the rest on the other,
/// each arm ending exactly at the threshold.
pub fn witness_from_partition(
    artifact: &ReductionArtifact,
    subset: &[usize],
) -> Result<Trace, ReductionError> {
    expect_construction(
        artifact,
        "witness_from_partition",
        &[Construction::TwoEdges, Construction::Spider],
    )?;
    let values = element_values(artifact);
    let mut side = vec![false; values.len()];
    for &i in subset {
        if i >= values.len() || std::mem::replace(&mut side[i], true) {
            return Err(ReductionError::BadIndex { index: i });
        }
    }
    let expected = u64::from(artifact.instance.threshold());
    let got: u64 = subset.iter().map(|&i| values[i]).sum();
    if got != expected {
        return Err(ReductionError::SubsetSum { expected, got });
    }

    let (mut trace, arms) = match artifact.construction {
        Construction::TwoEdges => (Vec::new(), [[0, 1], [2, 3]]),
        _ => (
            vec![CENTER, LB1, S1, S2, LA2, LA3, LB2, LB3],
            [[LA2, LB2], [LA3, LB3]],
        ),
    };
    let mut turn = [0usize; 2];
    for &e in &artifact.payload_order {
        let arm = usize::from(!side[e]);
        trace.push(arms[arm][turn[arm] % 2]);
        turn[arm] += 1;
    }
    if artifact.construction == Construction::Spider {
        trace.extend([LA1, CENTER]);
    }
    Ok(Trace(trace))
}

/// Reads one side of a partition off an accepted trace: the payload stacks
/// sharing an arm with the first payload stack.
pub fn partition_from_witness(
    artifact: &ReductionArtifact,
    trace: &Trace,
) -> Result<Vec<usize>, ReductionError> {
    expect_construction(
        artifact,
        "partition_from_witness",
        &[Construction::TwoEdges, Construction::Spider],
    )?;
    require_solution(artifact, trace)?;
    let payload = artifact.segments.payload.clone();
    let mut arms = Vec::with_capacity(payload.len());
    for position in payload.clone() {
        let vertex = trace.0[position];
        let arm = artifact.roles[vertex]
            .arm()
            .ok_or(ReductionError::PayloadOffArm { position, vertex })?;
        arms.push(arm);
    }
    let Some(&first) = arms.first() else {
        return Ok(Vec::new());
    };
    let mut subset: Vec<usize> = arms
        .iter()
        .enumerate()
        .filter(|(_, &a)| a == first)
        .map(|(k, _)| artifact.payload_order[k])
        .collect();
    subset.sort_unstable();
    let values = element_values(artifact);
    let expected = u64::from(artifact.instance.threshold());
    let got: u64 = subset.iter().map(|&i| values[i]).sum();
    if got != expected {
        return Err(ReductionError::SubsetSum { expected, got });
    }
    Ok(subset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play_trace, Variant};
    use crate::solvers::{dp_solve, SearchLimits};

    fn p(v: &[u64]) -> PartitionInstance {
        PartitionInstance::new(v.to_vec()).unwrap()
    }

    /// Independent subset-sum oracle: does some subset reach half?
    fn has_partition(values: &[u64]) -> bool {
        let sum: u64 = values.iter().sum();
        if sum % 2 == 1 {
            return false;
        }
        let half = (sum / 2) as usize;
        let mut reach = vec![false; half + 1];
        reach[0] = true;
        for &v in values {
            for s in (v as usize..=half).rev() {
                reach[s] |= reach[s - v as usize];
            }
        }
        reach[half]
    }

    #[test]
    fn canonicalization_examples() {
        assert_eq!(
            partition_canonicalize(&p(&[1, 2])),
            CanonicalizationResult::Decided {
                decision: Decision::No,
                subset: None
            }
        );
        assert_eq!(
            partition_canonicalize(&p(&[1, 1, 2])),
            CanonicalizationResult::Decided {
                decision: Decision::Yes,
                subset: Some(vec![0, 1])
            }
        );
        assert!(p(&[1, 2, 3, 4]).is_canonical());
        assert!(!p(&[]).is_canonical());
        assert_eq!(
            partition_canonicalize(&p(&[1, 1, 1, 3])),
            CanonicalizationResult::Decided {
                decision: Decision::Yes,
                subset: Some(vec![0, 1, 2])
            }
        );
        assert_eq!(
            partition_canonicalize(&p(&[1, 3, 2])),
            CanonicalizationResult::Decided {
                decision: Decision::Yes,
                subset: Some(vec![1])
            }
        );
        assert_eq!(
            partition_canonicalize(&p(&[1, 1, 4])),
            CanonicalizationResult::Decided {
                decision: Decision::No,
                subset: None
            }
        );
        assert!(PartitionInstance::new(vec![1, 0]).is_err());
    }

    #[test]
    fn two_edges_layout() {
        let a = partition_to_two_edges(&p(&[1, 2, 3, 4])).unwrap();
        assert_eq!(a.instance.threshold(), 5);
        assert_eq!(a.instance.graph().edges(), &[(0, 1), (2, 3)]);
        assert!(a.segments.tiles(4));
        let w = witness_from_partition(&a, &[0, 3]).unwrap();
        assert_eq!(w.0, vec![0, 2, 3, 1]);
        assert!(
            play_trace(&a.instance, &w, Variant::Empty)
                .unwrap()
                .accepted
        );
        assert!(matches!(
            witness_from_partition(&a, &[0, 1]),
            Err(ReductionError::SubsetSum {
                expected: 5,
                got: 3
            })
        ));
        assert_eq!(
            partition_to_two_edges(&p(&[1, 1, 2])),
            Err(ReductionError::NotCanonical)
        );
    }

    #[test]
    fn solver_witness_round_trip() {
        for values in [&[1u64, 2, 3, 4][..], &[2, 3, 4, 5, 8]] {
            let a = partition_to_two_edges(&p(values)).unwrap();
            let out = dp_solve(&a.instance, Variant::Empty, &SearchLimits::default()).unwrap();
            let subset = partition_from_witness(&a, out.verdict.witness.as_ref().unwrap()).unwrap();
            let sum: u64 = subset.iter().map(|&i| values[i]).sum();
            assert_eq!(sum, a.instance.threshold() as u64);
        }
    }

    #[test]
    fn spider_layout_and_witness() {
        let a = partition_to_spider(&p(&[1, 1, 2, 2])).unwrap();
        assert_eq!(a.instance.sequence().len(), 14);
        assert_eq!(a.instance.graph().degree(CENTER), 5);
        assert!(a.instance.graph().is_connected());
        assert_eq!(a.instance.color_count(), 4);
        let lens: Vec<usize> = a.segments.ranges().iter().map(|r| r.len()).collect();
        assert_eq!(lens, vec![4, 4, 4, 2]);
        let w = witness_from_partition(&a, &[0, 2]).unwrap();
        assert_eq!(w.len(), 14);
        assert!(
            play_trace(&a.instance, &w, Variant::Empty)
                .unwrap()
                .accepted
        );
        let back = partition_from_witness(&a, &w).unwrap();
        assert_eq!(back, vec![0, 2]);
    }

    #[test]
    fn rejected_trace_is_an_error() {
        let a = partition_to_two_edges(&p(&[1, 2, 3, 4])).unwrap();
        assert!(matches!(
            partition_from_witness(&a, &Trace(vec![0, 1, 2, 3])),
            Err(ReductionError::Rejected(_))
        ));
    }

    #[test]
    fn two_edges_soundness_exhaustive() {
        // Every multiset of up to 5 elements from 1..=5 in every order class.
        fn visit(prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if !prefix.is_empty() {
                out.push(prefix.clone());
            }
            if prefix.len() == 5 {
                return;
            }
            for v in 1..=5 {
                prefix.push(v);
                visit(prefix, out);
                prefix.pop();
            }
        }
        let mut all = Vec::new();
        visit(&mut Vec::new(), &mut all);
        let mut checked = 0;
        for values in all {
            let inst = p(&values);
            if !inst.is_canonical() {
                continue;
            }
            let a = partition_to_two_edges(&inst).unwrap();
            let out = dp_solve(&a.instance, Variant::Empty, &SearchLimits::default()).unwrap();
            assert_eq!(out.verdict.is_yes(), has_partition(&values), "{values:?}");
            checked += 1;
        }
        assert!(checked > 100);
    }
}
