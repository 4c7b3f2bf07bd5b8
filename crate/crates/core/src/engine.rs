//! Game model and exact move semantics.
//!
//! An [`Instance`] is a simple graph, a vanishing threshold `t` and an ordered
//! sequence of single-colored [`Stack`]s. Stacks are placed one at a time on
//! empty vertices. Placing `(c, h)` on `x` pulls every neighbor of `x` holding
//! color `c` onto `x`; if the merged height reaches `t` the whole pile
//! vanishes, otherwise it rests on `x`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense color index in `0..color_count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(pub u32);

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Stack {
    pub color: ColorId,
    pub height: u32,
}

impl Stack {
    pub fn new(color: u32, height: u32) -> Self {
        Stack {
            color: ColorId(color),
            height,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Every stack must be placed.
    Fitting,
    /// Every stack must be placed and the board must be empty afterwards.
    Empty,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Fitting => "fitting",
            Variant::Empty => "empty",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("threshold must be at least 1")]
    ZeroThreshold,
    #[error("stacks[{index}] has height 0")]
    ZeroHeight { index: usize },
    #[error("stacks[{index}] uses color {color} but color_count is {color_count}")]
    ColorOutOfRange {
        index: usize,
        color: u32,
        color_count: u32,
    },
    #[error("edges[{index}] = [{u}, {v}] references a vertex outside 0..{vertex_count}")]
    EdgeOutOfRange {
        index: usize,
        u: usize,
        v: usize,
        vertex_count: usize,
    },
    #[error("edges[{index}] is a self-loop on vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edges[{index}] = [{u}, {v}] duplicates an earlier edge")]
    DuplicateEdge { index: usize, u: usize, v: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("trace has {found} placements but the sequence has {expected} stacks")]
    TraceLength { expected: usize, found: usize },
    #[error(
        "empty-to-fitting conversion needs t >= 2; with t = 1 every instance is trivially positive"
    )]
    ThresholdTooSmall,
}

/// Why a single placement was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IllegalMove {
    #[error("vertex {vertex} is occupied")]
    Occupied { vertex: usize },
    #[error("vertex {vertex} does not exist")]
    NoSuchVertex { vertex: usize },
}

impl IllegalMove {
    pub fn vertex(&self) -> usize {
        match *self {
            IllegalMove::Occupied { vertex } | IllegalMove::NoSuchVertex { vertex } => vertex,
        }
    }
}

/// Simple undirected graph on dense vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and dangling endpoints.
    /// Edges are stored as sorted `(min, max)` pairs.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, ValidationError> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut normalized = Vec::with_capacity(edges.len());
        for (index, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(ValidationError::EdgeOutOfRange {
                    index,
                    u,
                    v,
                    vertex_count,
                });
            }
            if u == v {
                return Err(ValidationError::SelfLoop { index, vertex: u });
            }
            if adjacency[u].contains(&v) {
                return Err(ValidationError::DuplicateEdge { index, u, v });
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            normalized.push((u.min(v), u.max(v)));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        normalized.sort_unstable();
        Ok(Graph {
            vertex_count,
            edges: normalized,
            adjacency,
        })
    }

    pub fn edgeless(vertex_count: usize) -> Self {
        Graph::new(vertex_count, &[]).expect("edgeless graph is valid")
    }

    pub fn path(vertex_count: usize) -> Self {
        let edges: Vec<_> = (1..vertex_count).map(|v| (v - 1, v)).collect();
        Graph::new(vertex_count, &edges).expect("path is valid")
    }

    /// Star `K_{1,leaves}` with the center at vertex 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::new(leaves + 1, &edges).expect("star is valid")
    }

    pub fn complete(vertex_count: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..vertex_count {
            for v in u + 1..vertex_count {
                edges.push((u, v));
            }
        }
        Graph::new(vertex_count, &edges).expect("complete graph is valid")
    }

    /// `count` vertex-disjoint edges `(2i, 2i+1)`.
    pub fn disjoint_edges(count: usize) -> Self {
        let edges: Vec<_> = (0..count).map(|i| (2 * i, 2 * i + 1)).collect();
        Graph::new(2 * count, &edges).expect("matching is valid")
    }

    /// Spider with a center (vertex 0) and one leg per entry of `legs`, each
    /// leg given by its length. Leg vertices are numbered outward.
    pub fn spider(legs: &[usize]) -> Self {
        let mut edges = Vec::new();
        let mut next = 1;
        for &length in legs {
            let mut previous = 0;
            for _ in 0..length {
                edges.push((previous, next));
                previous = next;
                next += 1;
            }
        }
        Graph::new(next, &edges).expect("spider is valid")
    }

    /// Disjoint union, relabelling `other` after `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.vertex_count;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + offset, v + offset)));
        Graph::new(self.vertex_count + other.vertex_count, &edges).expect("union of valid graphs")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count)
            .filter(|&v| self.adjacency[v].is_empty())
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    threshold: u32,
    sequence: Vec<Stack>,
    color_count: u32,
}

impl Instance {
    /// Builds an instance whose color count is `1 + max color` (or 1 when the
    /// sequence is empty).
    pub fn new(
        graph: Graph,
        threshold: u32,
        sequence: Vec<Stack>,
    ) -> Result<Self, ValidationError> {
        let color_count = sequence.iter().map(|s| s.color.0 + 1).max().unwrap_or(1);
        Instance::with_color_count(graph, threshold, sequence, color_count)
    }

    pub fn with_color_count(
        graph: Graph,
        threshold: u32,
        sequence: Vec<Stack>,
        color_count: u32,
    ) -> Result<Self, ValidationError> {
        if threshold == 0 {
            return Err(ValidationError::ZeroThreshold);
        }
        for (index, stack) in sequence.iter().enumerate() {
            if stack.height == 0 {
                return Err(ValidationError::ZeroHeight { index });
            }
            if stack.color.0 >= color_count {
                return Err(ValidationError::ColorOutOfRange {
                    index,
                    color: stack.color.0,
                    color_count,
                });
            }
        }
        Ok(Instance {
            graph,
            threshold,
            sequence,
            color_count,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    pub fn sequence(&self) -> &[Stack] {
        &self.sequence
    }

    /// Declared number of colors (at least `1 + max color in the sequence`).
    pub fn color_count(&self) -> u32 {
        self.color_count
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Distinct colors that actually occur in the sequence, ascending.
    pub fn used_colors(&self) -> Vec<ColorId> {
        let mut seen = vec![false; self.color_count as usize];
        for s in &self.sequence {
            seen[s.color.0 as usize] = true;
        }
        (0..self.color_count)
            .filter(|&c| seen[c as usize])
            .map(ColorId)
            .collect()
    }

    pub fn is_normalized(&self) -> bool {
        self.sequence.iter().all(|s| s.height <= self.threshold)
    }
}

/// Caps every stack height at the threshold. Solution-equivalent for both
/// variants: a stack of height `>= t` vanishes on placement either way.
pub fn normalize(instance: &Instance) -> Instance {
    let t = instance.threshold;
    let mut out = instance.clone();
    for s in &mut out.sequence {
        s.height = s.height.min(t);
    }
    out
}

/// `sum(c, S)` for every declared color.
pub fn color_sums(instance: &Instance) -> Vec<u64> {
    let mut sums = vec![0u64; instance.color_count as usize];
    for s in &instance.sequence {
        sums[s.color.0 as usize] += u64::from(s.height);
    }
    sums
}

/// Appends one height-1 stack of a fresh color per vertex, so that the
/// Fitting verdict of the result equals the Empty verdict of the input.
pub fn empty_to_fitting(instance: &Instance) -> Result<Instance, EngineError> {
    if instance.threshold < 2 {
        return Err(EngineError::ThresholdTooSmall);
    }
    let n = instance.vertex_count() as u32;
    let base = instance.color_count;
    let mut sequence = instance.sequence.clone();
    sequence.extend((0..n).map(|i| Stack::new(base + i, 1)));
    Ok(Instance {
        graph: instance.graph.clone(),
        threshold: instance.threshold,
        sequence,
        color_count: base + n,
    })
}

const EMPTY_CELL: u64 = 0;

#[inline]
fn encode_cell(stack: Stack) -> u64 {
    (u64::from(stack.color.0) + 1) << 32 | u64::from(stack.height)
}

#[inline]
fn decode_cell(code: u64) -> Option<Stack> {
    if code == EMPTY_CELL {
        None
    } else {
        Some(Stack {
            color: ColorId(((code >> 32) - 1) as u32),
            height: code as u32,
        })
    }
}

/// Board state: an optional resting stack per vertex.
///
/// Cells are packed into one `u64` each (0 = empty), which doubles as the
/// canonical ordering and hash key used by the solvers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    cells: Box<[u64]>,
}

impl Configuration {
    pub fn empty(vertex_count: usize) -> Self {
        Configuration {
            cells: vec![EMPTY_CELL; vertex_count].into_boxed_slice(),
        }
    }

    pub fn from_cells(cells: &[Option<Stack>]) -> Self {
        Configuration {
            cells: cells
                .iter()
                .map(|c| c.map_or(EMPTY_CELL, encode_cell))
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.cells.len()
    }

    pub fn get(&self, v: usize) -> Option<Stack> {
        decode_cell(self.cells[v])
    }

    pub fn is_empty_at(&self, v: usize) -> bool {
        self.cells[v] == EMPTY_CELL
    }

    /// True when no vertex holds a stack (the configuration δ₀).
    pub fn is_clear(&self) -> bool {
        self.cells.iter().all(|&c| c == EMPTY_CELL)
    }

    pub fn occupied(&self) -> impl Iterator<Item = (usize, Stack)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(v, &c)| decode_cell(c).map(|s| (v, s)))
    }

    pub fn cells(&self) -> Vec<Option<Stack>> {
        self.cells.iter().map(|&c| decode_cell(c)).collect()
    }

    /// Canonical byte encoding: per vertex, little-endian color then height
    /// as `u32`s, with color `u32::MAX` marking an empty vertex.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.cells.len() * 8);
        for &code in self.cells.iter() {
            let (color, height) = match decode_cell(code) {
                Some(s) => (s.color.0, s.height),
                None => (u32::MAX, 0),
            };
            out.extend_from_slice(&color.to_le_bytes());
            out.extend_from_slice(&height.to_le_bytes());
        }
        out
    }

    /// Places `stack` on the (empty) vertex `x` without any legality checks.
    /// Returns the successor, the merged height `h + h'` and whether it vanished.
    #[inline]
    pub(crate) fn merge_at(
        &self,
        graph: &Graph,
        threshold: u32,
        stack: Stack,
        x: usize,
    ) -> (Configuration, u64, bool) {
        let mut cells = self.cells.clone();
        let mut merged = u64::from(stack.height);
        for &u in graph.neighbors(x) {
            if let Some(s) = decode_cell(cells[u]) {
                if s.color == stack.color {
                    merged += u64::from(s.height);
                    cells[u] = EMPTY_CELL;
                }
            }
        }
        let vanished = merged >= u64::from(threshold);
        if !vanished {
            cells[x] = encode_cell(Stack {
                color: stack.color,
                height: merged as u32,
            });
        }
        (Configuration { cells }, merged, vanished)
    }

    /// Checks the reachability invariants: resting heights lie in `[1, t-1]`
    /// and no edge joins two stacks of the same color.
    pub fn check_invariants(
        &self,
        graph: &Graph,
        threshold: u32,
    ) -> Result<(), InvariantViolation> {
        for (v, s) in self.occupied() {
            if s.height == 0 || s.height >= threshold {
                return Err(InvariantViolation::HeightOutOfRange {
                    vertex: v,
                    height: s.height,
                });
            }
        }
        for &(u, v) in graph.edges() {
            if let (Some(a), Some(b)) = (self.get(u), self.get(v)) {
                if a.color == b.color {
                    return Err(InvariantViolation::AdjacentSameColor {
                        u,
                        v,
                        color: a.color,
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (v, cell) in self.cells().into_iter().enumerate() {
            if v > 0 {
                f.write_str(" ")?;
            }
            match cell {
                Some(s) => write!(f, "{}:{}", s.color, s.height)?,
                None => f.write_str("_")?,
            }
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum InvariantViolation {
    #[error("vertex {vertex} rests at height {height}, outside [1, t-1]")]
    HeightOutOfRange { vertex: usize, height: u32 },
    #[error("adjacent vertices {u} and {v} both hold color {color}")]
    AdjacentSameColor { u: usize, v: usize, color: ColorId },
}

/// Effect of a single placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    /// Neighbors whose stacks were pulled onto the target, ascending.
    pub cleared_vertices: Vec<usize>,
    pub resulting_cell: Option<Stack>,
    pub vanished: bool,
    /// `h + h'`: the placed height plus every merged neighbor height.
    pub merged_height: u64,
}

/// Places `stack` on `vertex`, applying the merge rule.
pub fn apply_placement(
    config: &Configuration,
    instance: &Instance,
    stack: Stack,
    vertex: usize,
) -> Result<(Configuration, StepOutcome), IllegalMove> {
    if vertex >= config.vertex_count() {
        return Err(IllegalMove::NoSuchVertex { vertex });
    }
    if !config.is_empty_at(vertex) {
        return Err(IllegalMove::Occupied { vertex });
    }
    let graph = instance.graph();
    let (next, merged_height, vanished) = config.merge_at(graph, instance.threshold, stack, vertex);
    let cleared_vertices = graph
        .neighbors(vertex)
        .iter()
        .copied()
        .filter(|&u| !config.is_empty_at(u) && next.is_empty_at(u))
        .collect();
    let outcome = StepOutcome {
        cleared_vertices,
        resulting_cell: next.get(vertex),
        vanished,
        merged_height,
    };
    Ok((next, outcome))
}

/// Ordered list of placement vertices, one per stack.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trace(pub Vec<usize>);

impl Trace {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn placements(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Yes => "yes",
            Decision::No => "no",
        })
    }
}

/// Which rule or procedure produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    TrivialYes,
    TrivialNoSum,
    SingleVertex,
    NoVertices,
    Matching,
    HighDegree,
    IsolatedVertices,
    Spider,
    NegativeHeightT,
    Dp,
    CompressedDp,
    BruteForce,
    Replay,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("reason serializes");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub decision: Decision,
    pub witness: Option<Trace>,
    pub reason: Option<Reason>,
}

impl Verdict {
    pub fn yes(reason: Reason, witness: Option<Trace>) -> Self {
        Verdict {
            decision: Decision::Yes,
            witness,
            reason: Some(reason),
        }
    }

    pub fn no(reason: Reason) -> Self {
        Verdict {
            decision: Decision::No,
            witness: None,
            reason: Some(reason),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.decision == Decision::Yes
    }
}

/// Why a trace was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceFailure {
    /// Placement `index` (0-based) targeted an occupied or missing vertex.
    IllegalStep { index: usize, vertex: usize },
    /// All placements were legal but these vertices are still occupied.
    NotEmpty { occupied: Vec<usize> },
}

impl fmt::Display for TraceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceFailure::IllegalStep { index, vertex } => {
                write!(
                    f,
                    "illegal placement at step {} on vertex {}",
                    index + 1,
                    vertex
                )
            }
            TraceFailure::NotEmpty { occupied } => {
                write!(f, "board not empty; occupied vertices {occupied:?}")
            }
        }
    }
}

/// Result of replaying a trace.
#[derive(Debug, Clone)]
pub struct Replay {
    pub accepted: bool,
    pub failure: Option<TraceFailure>,
    pub final_configuration: Configuration,
}

impl Replay {
    pub fn verdict(&self, trace: &Trace) -> Verdict {
        if self.accepted {
            Verdict::yes(Reason::Replay, Some(trace.clone()))
        } else {
            Verdict::no(Reason::Replay)
        }
    }
}

/// Incremental simulator over an instance's sequence.
#[derive(Debug, Clone)]
pub struct Playback<'a> {
    instance: &'a Instance,
    config: Configuration,
    index: usize,
}

impl<'a> Playback<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        Playback {
            instance,
            config: Configuration::empty(instance.vertex_count()),
            index: 0,
        }
    }

    pub fn configuration(&self) -> &Configuration {
        &self.config
    }

    /// Number of stacks placed so far.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn next_stack(&self) -> Option<Stack> {
        self.instance.sequence.get(self.index).copied()
    }

    pub fn is_finished(&self) -> bool {
        self.index == self.instance.sequence.len()
    }

    /// Places the next stack on `vertex`. Panics when the sequence is exhausted.
    pub fn step(&mut self, vertex: usize) -> Result<StepOutcome, IllegalMove> {
        let stack = self.next_stack().expect("sequence exhausted");
        let (next, outcome) = apply_placement(&self.config, self.instance, stack, vertex)?;
        self.config = next;
        self.index += 1;
        Ok(outcome)
    }
}

/// Replays `trace` and reports acceptance for `variant`. An illegal step is a
/// rejection, not an error; only a length mismatch is an error.
pub fn play_trace(
    instance: &Instance,
    trace: &Trace,
    variant: Variant,
) -> Result<Replay, EngineError> {
    if trace.len() != instance.sequence.len() {
        return Err(EngineError::TraceLength {
            expected: instance.sequence.len(),
            found: trace.len(),
        });
    }
    let mut playback = Playback::new(instance);
    for (index, &vertex) in trace.0.iter().enumerate() {
        if playback.step(vertex).is_err() {
            return Ok(Replay {
                accepted: false,
                failure: Some(TraceFailure::IllegalStep { index, vertex }),
                final_configuration: playback.config,
            });
        }
    }
    let config = playback.config;
    if variant == Variant::Empty && !config.is_clear() {
        let occupied = config.occupied().map(|(v, _)| v).collect();
        return Ok(Replay {
            accepted: false,
            failure: Some(TraceFailure::NotEmpty { occupied }),
            final_configuration: config,
        });
    }
    Ok(Replay {
        accepted: true,
        failure: None,
        final_configuration: config,
    })
}

/// Decides instances covered by the triviality rules; `None` otherwise.
///
/// Rules, in order: no vertices with a non-empty sequence (no); every stack
/// at height `>= t`, which includes `t = 1` (yes); a single vertex (Empty: no,
/// Fitting: linear scan); for Empty, a color whose total is below `t` (no).
pub fn classify_trivial(instance: &Instance, variant: Variant) -> Option<Verdict> {
    let t = instance.threshold;
    let n = instance.vertex_count();
    let len = instance.sequence.len();
    if n == 0 {
        return Some(if len == 0 {
            Verdict::yes(Reason::TrivialYes, Some(Trace::default()))
        } else {
            Verdict::no(Reason::NoVertices)
        });
    }
    if instance.sequence.iter().all(|s| s.height >= t) {
        return Some(Verdict::yes(Reason::TrivialYes, Some(Trace(vec![0; len]))));
    }
    if n == 1 {
        return Some(match variant {
            // Some stack rests permanently, so the board never clears.
            Variant::Empty => Verdict::no(Reason::SingleVertex),
            Variant::Fitting => {
                let blocked = instance.sequence[..len - 1].iter().any(|s| s.height < t);
                if blocked {
                    Verdict::no(Reason::SingleVertex)
                } else {
                    Verdict::yes(Reason::SingleVertex, Some(Trace(vec![0; len])))
                }
            }
        });
    }
    if variant == Variant::Empty {
        let sums = color_sums(instance);
        let light = instance
            .used_colors()
            .into_iter()
            .any(|c| sums[c.0 as usize] < u64::from(t));
        if light {
            return Some(Verdict::no(Reason::TrivialNoSum));
        }
    }
    None
}
