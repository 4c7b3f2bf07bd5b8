use serde::{Deserialize, Serialize};

use super::{
    expect_construction, height, require_solution, Construction, ReductionArtifact, ReductionError,
    RoleTag, SegmentMap, VertexRole,
};
use crate::engine::{Graph, Instance, Stack, Trace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePartitionInstance {
    elements: Vec<u64>,
    bound: u64,
}

impl ThreePartitionInstance {
    /// Checks `|A| = 3m`, `ΣA = m·B` and `B/4 < a < B/2` for every element.
    pub fn new(elements: Vec<u64>, bound: u64) -> Result<Self, ReductionError> {
        let len = elements.len();
        if len == 0 || !len.is_multiple_of(3) {
            return Err(ReductionError::ElementCount { len });
        }
        for (index, &value) in elements.iter().enumerate() {
            if 4 * value <= bound || 2 * value >= bound {
                return Err(ReductionError::OutOfRange { index, value });
            }
        }
        let sum: u64 = elements.iter().sum();
        let expected = bound * (len as u64 / 3);
        if sum != expected {
            return Err(ReductionError::TotalMismatch { sum, expected });
        }
        Ok(ThreePartitionInstance { elements, bound })
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn bins(&self) -> usize {
        self.elements.len() / 3
    }
}

/// How the `s¹` vertices of the gadgets are joined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeShape {
    /// Gadget `j` joined to `j+1`.
    #[default]
    Path,
    /// Gadget `j > 0` joined to `(j-1)/2`.
    Binary,
    /// Every gadget joined to gadget 0.
    Star,
}

impl TreeShape {
    fn edges(self, m: usize) -> Vec<(usize, usize)> {
        (1..m)
            .map(|j| match self {
                TreeShape::Path => (j - 1, j),
                TreeShape::Binary => ((j - 1) / 2, j),
                TreeShape::Star => (0, j),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Disjoint,
    Tree(TreeShape),
}

const GADGET: usize = 10;
const CENTER: usize = 0;
const S1: usize = 1;
const LA: [usize; 4] = [2, 4, 6, 8];
const LB: [usize; 4] = [3, 5, 7, 9];

fn red(j: usize) -> u32 {
    1 + 3 * j as u32
}

fn blue(j: usize) -> u32 {
    2 + 3 * j as u32
}

fn green(j: usize) -> u32 {
    3 + 3 * j as u32
}

/// `m` ten-vertex gadgets (a center with one short arm and four arms of
/// length two), `t = B + 4`, and `3m + 1` colors (black is color 0, gadget
/// `j` owns colors `3j+1..=3j+3`).
///
/// The sequence is the per-gadget red, blue and green pairs, then the
/// elements in their given order, then one red, blue and green stack per
/// gadget, then four black height-1 stacks per gadget.
pub fn three_partition_to_gadgets(
    a: &ThreePartitionInstance,
    topology: Topology,
) -> Result<ReductionArtifact, ReductionError> {
    let m = a.bins();
    let t = height(a.bound() + 4)?;

    let mut graph = Graph::edgeless(0);
    for _ in 0..m {
        graph = graph.disjoint_union(&Graph::spider(&[1, 2, 2, 2, 2]));
    }
    let construction = match topology {
        Topology::Disjoint => Construction::DisjointSpiders,
        Topology::Tree(shape) => {
            let mut edges = graph.edges().to_vec();
            edges.extend(
                shape
                    .edges(m)
                    .into_iter()
                    .map(|(p, c)| (GADGET * p + S1, GADGET * c + S1)),
            );
            graph = Graph::new(GADGET * m, &edges).expect("tree edges are fresh");
            Construction::SpiderTree
        }
    };

    let mut sequence = Vec::with_capacity(16 * m);
    for j in 0..m {
        for c in [red(j), red(j), blue(j), blue(j), green(j), green(j)] {
            sequence.push(Stack::new(c, t - 1));
        }
    }
    for &e in a.elements() {
        sequence.push(Stack::new(0, height(e)?));
    }
    for j in 0..m {
        for c in [red(j), blue(j), green(j)] {
            sequence.push(Stack::new(c, t - 1));
        }
    }
    sequence.extend(std::iter::repeat_n(Stack::new(0, 1), 4 * m));

    let mut roles = Vec::with_capacity(GADGET * m);
    for j in 0..m {
        roles.push(VertexRole::new(RoleTag::Center, j));
        roles.push(VertexRole::new(RoleTag::Short(1), j));
        for arm in 1..=4 {
            roles.push(VertexRole::new(RoleTag::ArmInner(arm), j));
            roles.push(VertexRole::new(RoleTag::ArmLeaf(arm), j));
        }
    }
    let instance = Instance::with_color_count(graph, t, sequence, 3 * m as u32 + 1)
        .expect("valid by construction");
    Ok(ReductionArtifact {
        construction,
        instance,
        roles,
        segments: SegmentMap {
            initial: 0..6 * m,
            reservation: None,
            payload: 6 * m..9 * m,
            connector: 9 * m..12 * m,
            final_pulls: Some(12 * m..16 * m),
        },
        payload_order: (0..3 * m).collect(),
    })
}

fn artifact_values(artifact: &ReductionArtifact) -> Vec<u64> {
    let seq = artifact.instance.sequence();
    let mut values = vec![0; artifact.payload_order.len()];
    for (k, &e) in artifact.payload_order.iter().enumerate() {
        values[e] = u64::from(seq[artifact.segments.payload.start + k].height);
    }
    values
}

/// Triplet `j` goes to gadget `j`. Each gadget first holds red on the
/// center and the first leaf, green on `s¹` and the second arm, blue on the
/// third and fourth arms; the triplet fills the free leaves, the connectors
/// clear the gadget stacks, and four black pulls drag the triplet onto the
/// center where it reaches `t`.
pub fn witness_from_triplets(
    artifact: &ReductionArtifact,
    triplets: &[[usize; 3]],
) -> Result<Trace, ReductionError> {
    const OPERATION: &str = "witness_from_triplets";
    expect_construction(
        artifact,
        OPERATION,
        &[Construction::DisjointSpiders, Construction::SpiderTree],
    )?;
    let values = artifact_values(artifact);
    let m = values.len() / 3;
    if triplets.len() != m {
        return Err(ReductionError::TripletCount {
            expected: m,
            got: triplets.len(),
        });
    }
    let bound = u64::from(artifact.instance.threshold()) - 4;
    let mut gadget_of = vec![usize::MAX; values.len()];
    for (j, triple) in triplets.iter().enumerate() {
        for &i in triple {
            if i >= values.len() {
                return Err(ReductionError::BadIndex { index: i });
            }
            if gadget_of[i] != usize::MAX {
                return Err(ReductionError::TripletCover);
            }
            gadget_of[i] = j;
        }
        let got: u64 = triple.iter().map(|&i| values[i]).sum();
        if got != bound {
            return Err(ReductionError::TripletSum {
                triplet: j,
                expected: bound,
                got,
            });
        }
    }

    let mut trace = Vec::with_capacity(artifact.instance.sequence().len());
    for j in 0..m {
        let base = GADGET * j;
        trace.extend([CENTER, LB[0], LA[2], LA[3], S1, LA[1]].map(|v| base + v));
    }
    let mut filled = vec![0usize; m];
    for &e in &artifact.payload_order {
        let j = gadget_of[e];
        trace.push(GADGET * j + LB[1 + filled[j]]);
        filled[j] += 1;
    }
    for j in 0..m {
        let base = GADGET * j;
        trace.extend([LA[0], CENTER, CENTER].map(|v| base + v));
    }
    for j in 0..m {
        let base = GADGET * j;
        trace.extend([LA[1], LA[2], LA[3], CENTER].map(|v| base + v));
    }
    Ok(Trace(trace))
}

/// Groups the payload placements of an accepted trace by gadget.
pub fn triplets_from_witness(
    artifact: &ReductionArtifact,
    trace: &Trace,
) -> Result<Vec<[usize; 3]>, ReductionError> {
    expect_construction(
        artifact,
        "triplets_from_witness",
        &[Construction::DisjointSpiders, Construction::SpiderTree],
    )?;
    require_solution(artifact, trace)?;
    let values = artifact_values(artifact);
    let m = values.len() / 3;
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (k, position) in artifact.segments.payload.clone().enumerate() {
        let gadget = artifact.roles[trace.0[position]].gadget;
        groups[gadget].push(artifact.payload_order[k]);
    }
    let bound = u64::from(artifact.instance.threshold()) - 4;
    groups
        .into_iter()
        .enumerate()
        .map(|(gadget, mut g)| {
            if g.len() != 3 {
                return Err(ReductionError::GadgetLoad {
                    gadget,
                    count: g.len(),
                });
            }
            g.sort_unstable();
            let got: u64 = g.iter().map(|&i| values[i]).sum();
            if got != bound {
                return Err(ReductionError::TripletSum {
                    triplet: gadget,
                    expected: bound,
                    got,
                });
            }
            Ok([g[0], g[1], g[2]])
        })
        .collect()
}
