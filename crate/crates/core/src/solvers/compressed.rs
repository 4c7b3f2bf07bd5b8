use super::layered::{explore, LayeredSpace};
use super::{SearchLimits, SolveError, SolveOutcome, StateBound};
use crate::engine::{Configuration, Graph, Instance, Reason, Stack, Trace, Variant, Verdict};

/// Placement on "some isolated vertex", resolved after the search.
const ISOLATED: u32 = u32::MAX;

/// Board restricted to non-isolated vertices plus the number of isolated
/// vertices currently holding a stack. Isolated vertices never merge, so
/// which ones are occupied is irrelevant for Fitting.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompressedConfiguration {
    pub core: Configuration,
    pub occupied_isolated: u32,
}

struct CompressedSpace {
    core_graph: Graph,
    /// Original index of each core vertex.
    core_vertices: Vec<usize>,
    isolated_count: u32,
    threshold: u32,
}

impl LayeredSpace for CompressedSpace {
    type State = CompressedConfiguration;

    fn initial(&self) -> CompressedConfiguration {
        CompressedConfiguration {
            core: Configuration::empty(self.core_vertices.len()),
            occupied_isolated: 0,
        }
    }

    fn expand(
        &self,
        state: &CompressedConfiguration,
        stack: Stack,
        out: &mut Vec<(u32, CompressedConfiguration)>,
    ) {
        for (k, &original) in self.core_vertices.iter().enumerate() {
            if state.core.is_empty_at(k) {
                let (core, _, _) = state
                    .core
                    .merge_at(&self.core_graph, self.threshold, stack, k);
                out.push((
                    original as u32,
                    CompressedConfiguration {
                        core,
                        occupied_isolated: state.occupied_isolated,
                    },
                ));
            }
        }
        if state.occupied_isolated < self.isolated_count {
            let rests = stack.height < self.threshold;
            out.push((
                ISOLATED,
                CompressedConfiguration {
                    core: state.core.clone(),
                    occupied_isolated: state.occupied_isolated + u32::from(rests),
                },
            ));
        }
    }

    fn accepts(&self, _state: &CompressedConfiguration, _variant: Variant) -> bool {
        true
    }
}

/// Fitting-only layered search with isolated vertices collapsed into a
/// counter. Agrees with [`super::dp_solve`] on every Fitting instance; the
/// witness is a plain vertex trace.
pub fn dp_solve_compressed(
    instance: &Instance,
    variant: Variant,
    limits: &SearchLimits,
) -> Result<SolveOutcome, SolveError> {
    if variant != Variant::Fitting {
        return Err(SolveError::UnsupportedVariant {
            solver: "compressed DP",
            supported: "Fitting",
        });
    }
    let graph = instance.graph();
    let isolated = graph.isolated_vertices();
    let core_vertices: Vec<usize> = (0..graph.vertex_count())
        .filter(|&v| graph.degree(v) > 0)
        .collect();
    let mut index = vec![usize::MAX; graph.vertex_count()];
    for (k, &v) in core_vertices.iter().enumerate() {
        index[v] = k;
    }
    let core_edges: Vec<(usize, usize)> = graph
        .edges()
        .iter()
        .map(|&(u, v)| (index[u], index[v]))
        .collect();
    let core_graph =
        Graph::new(core_vertices.len(), &core_edges).expect("induced subgraph is valid");
    let space = CompressedSpace {
        core_graph,
        core_vertices,
        isolated_count: isolated.len() as u32,
        threshold: instance.threshold(),
    };
    let bound = StateBound::configurations(
        instance.color_count(),
        instance.threshold(),
        space.core_vertices.len(),
    )
    .times(isolated.len() as u128 + 1);
    let run = explore(&space, instance.sequence(), limits, false, bound)?;

    let verdict = if run.last().is_empty() {
        Verdict::no(Reason::CompressedDp)
    } else {
        let moves = run.moves_to(0);
        let mut occupied = vec![false; graph.vertex_count()];
        let mut trace = Vec::with_capacity(moves.len());
        for (mv, stack) in moves.into_iter().zip(instance.sequence()) {
            let v = if mv == ISOLATED {
                let v = *isolated
                    .iter()
                    .find(|&&v| !occupied[v])
                    .expect("counter never exceeds the isolated vertices");
                occupied[v] = stack.height < instance.threshold();
                v
            } else {
                mv as usize
            };
            trace.push(v);
        }
        Verdict::yes(Reason::CompressedDp, Some(Trace(trace)))
    };
    Ok(SolveOutcome {
        verdict,
        stats: run.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::play_trace;
    use crate::solvers::dp_solve;

    #[test]
    fn empty_is_rejected() {
        let i = Instance::new(Graph::edgeless(2), 3, vec![Stack::new(0, 1)]).unwrap();
        assert!(matches!(
            dp_solve_compressed(&i, Variant::Empty, &SearchLimits::default()),
            Err(SolveError::UnsupportedVariant { .. })
        ));
    }

    #[test]
    fn isolated_vertices_collapse() {
        // Path on 3 vertices plus 4 isolated ones.
        let g = Graph::path(3).disjoint_union(&Graph::edgeless(4));
        let seq: Vec<Stack> = (0..8).map(|k| Stack::new(k % 3, 1 + k % 2)).collect();
        let i = Instance::new(g, 3, seq).unwrap();
        let full = dp_solve(&i, Variant::Fitting, &SearchLimits::default()).unwrap();
        let small = dp_solve_compressed(&i, Variant::Fitting, &SearchLimits::default()).unwrap();
        assert_eq!(full.verdict.decision, small.verdict.decision);
        assert!(small.stats.visited_states <= full.stats.visited_states);
        if let Some(w) = small.verdict.witness {
            assert!(play_trace(&i, &w, Variant::Fitting).unwrap().accepted);
        }
    }

    #[test]
    fn vanishing_on_isolated_frees_the_vertex() {
        let i = Instance::new(
            Graph::edgeless(1),
            2,
            vec![Stack::new(0, 2), Stack::new(1, 2), Stack::new(0, 1)],
        )
        .unwrap();
        let out = dp_solve_compressed(&i, Variant::Fitting, &SearchLimits::default()).unwrap();
        assert_eq!(out.verdict.witness, Some(Trace(vec![0, 0, 0])));
    }
}
