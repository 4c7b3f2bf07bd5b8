use std::time::Instant;

use super::{SearchLimits, SearchStats, SolveError, SolveOutcome, StateBound};
use crate::engine::{Configuration, Graph, Instance, Reason, Stack, Trace, Variant, Verdict};
use crate::par;

/// Layers smaller than this are expanded on the calling thread.
const PARALLEL_LAYER_MIN: usize = 512;

/// A state space explored one stack at a time.
pub(crate) trait LayeredSpace: Sync {
    type State: Clone + Ord + Send + Sync;

    fn initial(&self) -> Self::State;

    /// Pushes `(move, successor)` for every legal placement of `stack`.
    /// Moves are emitted in ascending order.
    fn expand(&self, state: &Self::State, stack: Stack, out: &mut Vec<(u32, Self::State)>);

    fn accepts(&self, state: &Self::State, variant: Variant) -> bool;

    /// Whether `state`, reached after `placed` stacks, can still lead to an
    /// accepting state. Only sound rejections are allowed.
    fn viable(&self, _state: &Self::State, _placed: usize) -> bool {
        true
    }
}

pub(crate) struct Exploration<S> {
    /// `parents[i][k]` = (index in layer `i`, move) for state `k` of layer `i+1`.
    pub parents: Vec<Vec<(u32, u32)>>,
    /// Every layer when requested, otherwise only the last one.
    pub layers: Vec<Vec<S>>,
    pub stats: SearchStats,
}

impl<S> Exploration<S> {
    pub fn last(&self) -> &[S] {
        self.layers.last().expect("at least one layer")
    }

    /// Moves leading from the initial state to `index` in the final layer.
    pub fn moves_to(&self, mut index: usize) -> Vec<u32> {
        let mut moves = Vec::with_capacity(self.parents.len());
        for layer in self.parents.iter().rev() {
            let (parent, mv) = layer[index];
            moves.push(mv);
            index = parent as usize;
        }
        moves.reverse();
        moves
    }
}

/// Forward layered search. Each layer is sorted and deduplicated; a state
/// reached several ways keeps the smallest `(move, parent)` as its parent,
/// so the result is identical with and without parallel expansion.
pub(crate) fn explore<Sp: LayeredSpace>(
    space: &Sp,
    sequence: &[Stack],
    limits: &SearchLimits,
    keep_all: bool,
    state_bound: StateBound,
) -> Result<Exploration<Sp::State>, SolveError> {
    let start = Instant::now();
    let mut current = vec![space.initial()];
    let mut visited: u64 = 1;
    let mut max_frontier: u64 = 1;
    let mut parents = Vec::with_capacity(sequence.len());
    let mut kept = Vec::new();

    for (step, &stack) in sequence.iter().enumerate() {
        let parallel = limits.parallel && current.len() >= PARALLEL_LAYER_MIN;
        let expanded = par::map_range(current.len(), parallel, |p| {
            let mut out = Vec::new();
            space.expand(&current[p], stack, &mut out);
            out.retain(|(_, s)| space.viable(s, step + 1));
            (p as u32, out)
        });
        let mut children: Vec<(Sp::State, u32, u32)> =
            Vec::with_capacity(expanded.iter().map(|(_, o)| o.len()).sum());
        for (p, out) in expanded {
            children.extend(out.into_iter().map(|(mv, s)| (s, mv, p)));
        }
        par::sort_unstable(&mut children, parallel);
        children.dedup_by(|later, earlier| later.0 == earlier.0);

        visited += children.len() as u64;
        max_frontier = max_frontier.max(children.len() as u64);
        if visited > limits.max_states {
            return Err(SolveError::BudgetExceeded {
                visited,
                limit: limits.max_states,
            });
        }
        if let Some(limit) = limits.max_time {
            if start.elapsed() > limit {
                return Err(SolveError::TimeExceeded { visited, limit });
            }
        }

        let mut next = Vec::with_capacity(children.len());
        let mut links = Vec::with_capacity(children.len());
        for (state, mv, p) in children {
            next.push(state);
            links.push((p, mv));
        }
        parents.push(links);
        let previous = std::mem::replace(&mut current, next);
        if keep_all {
            kept.push(previous);
        }
    }
    kept.push(current);
    Ok(Exploration {
        parents,
        layers: kept,
        stats: SearchStats {
            visited_states: visited,
            max_frontier,
            elapsed: start.elapsed(),
            state_bound,
        },
    })
}

/// Necessary condition for clearing the board: every color present on the
/// board or still to come must total at least `t`, and a color on the board
/// needs at least one more stack of that color.
pub(crate) struct ClearingPrune {
    threshold: u64,
    /// `remaining[i][c]`: total height of color `c` in `sequence[i..]`.
    remaining: Vec<Vec<u64>>,
}

impl ClearingPrune {
    pub fn new(instance: &Instance) -> Self {
        let colors = instance.color_count() as usize;
        let seq = instance.sequence();
        let mut remaining = vec![vec![0u64; colors]; seq.len() + 1];
        for i in (0..seq.len()).rev() {
            remaining[i] = remaining[i + 1].clone();
            remaining[i][seq[i].color.0 as usize] += u64::from(seq[i].height);
        }
        ClearingPrune {
            threshold: u64::from(instance.threshold()),
            remaining,
        }
    }

    pub fn viable(&self, state: &Configuration, placed: usize) -> bool {
        let rem = &self.remaining[placed];
        let mut board = vec![0u64; rem.len()];
        for (_, s) in state.occupied() {
            board[s.color.0 as usize] += u64::from(s.height);
        }
        board.iter().zip(rem).all(|(&b, &r)| {
            let total = b + r;
            (total == 0 || total >= self.threshold) && (b == 0 || r > 0)
        })
    }
}

pub(crate) struct FullSpace<'a> {
    pub graph: &'a Graph,
    pub threshold: u32,
    pub prune: Option<ClearingPrune>,
}

impl<'a> FullSpace<'a> {
    /// No pruning: every reachable configuration is kept.
    fn reachable(instance: &'a Instance) -> Self {
        FullSpace {
            graph: instance.graph(),
            threshold: instance.threshold(),
            prune: None,
        }
    }

    /// Drops configurations that cannot lead to an accepting state.
    fn for_variant(instance: &'a Instance, variant: Variant) -> Self {
        FullSpace {
            prune: (variant == Variant::Empty).then(|| ClearingPrune::new(instance)),
            ..FullSpace::reachable(instance)
        }
    }
}

impl LayeredSpace for FullSpace<'_> {
    type State = Configuration;

    fn initial(&self) -> Configuration {
        Configuration::empty(self.graph.vertex_count())
    }

    fn expand(&self, state: &Configuration, stack: Stack, out: &mut Vec<(u32, Configuration)>) {
        for v in 0..state.vertex_count() {
            if state.is_empty_at(v) {
                let (next, _, _) = state.merge_at(self.graph, self.threshold, stack, v);
                out.push((v as u32, next));
            }
        }
    }

    fn accepts(&self, state: &Configuration, variant: Variant) -> bool {
        variant == Variant::Fitting || state.is_clear()
    }

    fn viable(&self, state: &Configuration, placed: usize) -> bool {
        self.prune.as_ref().is_none_or(|p| p.viable(state, placed))
    }
}

/// Decides `instance` by exploring every reachable configuration. For
/// Empty, configurations that fail the color-total test are dropped.
///
/// Empty is positive iff δ₀ is in the final layer, Fitting iff the final
/// layer is non-empty. Positive verdicts carry a witness rebuilt from parent
/// links (lowest vertex first, then earliest parent).
pub fn dp_solve(
    instance: &Instance,
    variant: Variant,
    limits: &SearchLimits,
) -> Result<SolveOutcome, SolveError> {
    let space = FullSpace::for_variant(instance, variant);
    let run = explore(
        &space,
        instance.sequence(),
        limits,
        false,
        StateBound::for_instance(instance),
    )?;
    let accepted = run.last().iter().position(|s| space.accepts(s, variant));
    let verdict = match accepted {
        Some(index) => {
            let trace = run
                .moves_to(index)
                .into_iter()
                .map(|v| v as usize)
                .collect();
            Verdict::yes(Reason::Dp, Some(Trace(trace)))
        }
        None => Verdict::no(Reason::Dp),
    };
    Ok(SolveOutcome {
        verdict,
        stats: run.stats,
    })
}

/// Every reachable configuration after each prefix: `result[i]` is the sorted
/// set of boards attainable after placing the first `i` stacks.
pub fn reachable_layers(
    instance: &Instance,
    limits: &SearchLimits,
) -> Result<Vec<Vec<Configuration>>, SolveError> {
    let space = FullSpace::reachable(instance);
    let run = explore(
        &space,
        instance.sequence(),
        limits,
        true,
        StateBound::for_instance(instance),
    )?;
    Ok(run.layers)
}

/// Configurations at layer `observe_at` that lie on at least one complete
/// solution for `variant`, in sorted order.
pub fn enumerate_solutions(
    instance: &Instance,
    variant: Variant,
    observe_at: usize,
    limits: &SearchLimits,
) -> Result<Vec<Configuration>, SolveError> {
    let len = instance.sequence().len();
    if observe_at > len {
        return Err(SolveError::StepOutOfRange {
            step: observe_at,
            len,
        });
    }
    let space = FullSpace::for_variant(instance, variant);
    let run = explore(
        &space,
        instance.sequence(),
        limits,
        true,
        StateBound::for_instance(instance),
    )?;
    let layers = run.layers;

    let mut alive: Vec<bool> = layers[len]
        .iter()
        .map(|s| space.accepts(s, variant))
        .collect();
    for i in (observe_at..len).rev() {
        let stack = instance.sequence()[i];
        let next_layer = &layers[i + 1];
        let next_alive = &alive;
        alive = par::map_slice(
            &layers[i],
            limits.parallel && layers[i].len() >= PARALLEL_LAYER_MIN,
            |state| {
                let mut out = Vec::new();
                space.expand(state, stack, &mut out);
                out.iter().any(|(_, child)| {
                    next_layer
                        .binary_search(child)
                        .map(|k| next_alive[k])
                        .unwrap_or(false)
                })
            },
        );
    }
    Ok(layers[observe_at]
        .iter()
        .zip(alive)
        .filter(|(_, keep)| *keep)
        .map(|(s, _)| s.clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::play_trace;

    fn single(graph: Graph, t: u32, heights: &[u32]) -> Instance {
        Instance::new(
            graph,
            t,
            heights.iter().map(|&h| Stack::new(0, h)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn empty_sequence_is_positive() {
        let i = Instance::new(Graph::path(3), 4, vec![]).unwrap();
        let out = dp_solve(&i, Variant::Empty, &SearchLimits::default()).unwrap();
        assert!(out.verdict.is_yes());
        assert_eq!(out.verdict.witness, Some(Trace(vec![])));
        assert_eq!(out.stats.visited_states, 1);
    }

    #[test]
    fn two_edges() {
        let yes = single(Graph::disjoint_edges(2), 5, &[1, 4, 2, 3]);
        let out = dp_solve(&yes, Variant::Empty, &SearchLimits::default()).unwrap();
        assert!(out.verdict.is_yes());
        let w = out.verdict.witness.unwrap();
        assert!(play_trace(&yes, &w, Variant::Empty).unwrap().accepted);
        let no = single(Graph::disjoint_edges(2), 5, &[1, 4, 2, 2]);
        assert!(!dp_solve(&no, Variant::Empty, &SearchLimits::default())
            .unwrap()
            .verdict
            .is_yes());
        assert!(dp_solve(&no, Variant::Fitting, &SearchLimits::default())
            .unwrap()
            .verdict
            .is_yes());
    }

    #[test]
    fn budget_is_an_error() {
        let i = single(Graph::edgeless(6), 9, &[1, 1, 1, 1]);
        let err = dp_solve(&i, Variant::Fitting, &SearchLimits::with_max_states(3)).unwrap_err();
        assert!(matches!(err, SolveError::BudgetExceeded { limit: 3, .. }));
    }

    #[test]
    fn forced_endpoints_on_a_path() {
        let i = single(Graph::path(3), 3, &[2, 2, 2]);
        let states = enumerate_solutions(&i, Variant::Empty, 2, &SearchLimits::default()).unwrap();
        let expected =
            Configuration::from_cells(&[Some(Stack::new(0, 2)), None, Some(Stack::new(0, 2))]);
        assert_eq!(states, vec![expected]);
        let end = enumerate_solutions(&i, Variant::Empty, 3, &SearchLimits::default()).unwrap();
        assert_eq!(end, vec![Configuration::empty(3)]);
    }

    #[test]
    fn no_instance_has_no_solution_states() {
        let i = single(Graph::complete(3), 3, &[2, 2, 2]);
        for step in 0..=3 {
            assert!(
                enumerate_solutions(&i, Variant::Empty, step, &SearchLimits::default())
                    .unwrap()
                    .is_empty()
            );
        }
        assert!(matches!(
            enumerate_solutions(&i, Variant::Empty, 4, &SearchLimits::default()),
            Err(SolveError::StepOutOfRange { step: 4, len: 3 })
        ));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let seq: Vec<Stack> = (0..10).map(|k| Stack::new(k % 2, 1 + k % 3)).collect();
        let i = Instance::new(Graph::path(7), 4, seq).unwrap();
        let p = dp_solve(&i, Variant::Fitting, &SearchLimits::default()).unwrap();
        let s = dp_solve(&i, Variant::Fitting, &SearchLimits::default().sequential()).unwrap();
        assert_eq!(p.verdict, s.verdict);
        assert_eq!(p.stats.visited_states, s.stats.visited_states);
        assert_eq!(p.stats.max_frontier, s.stats.max_frontier);
    }
}
