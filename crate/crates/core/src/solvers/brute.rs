use std::collections::HashSet;
use std::time::Instant;

use super::{SearchLimits, SearchStats, SolveError, SolveOutcome, StateBound};
use crate::engine::{Configuration, Instance, Reason, Trace, Variant, Verdict};

struct Search<'a> {
    instance: &'a Instance,
    variant: Variant,
    limits: &'a SearchLimits,
    started: Instant,
    dead: HashSet<(usize, Configuration)>,
    path: Vec<usize>,
    visited: u64,
    deepest: u64,
}

impl Search<'_> {
    fn check_budget(&self) -> Result<(), SolveError> {
        if self.visited > self.limits.max_states {
            return Err(SolveError::BudgetExceeded {
                visited: self.visited,
                limit: self.limits.max_states,
            });
        }
        if let Some(limit) = self.limits.max_time {
            if self.visited.is_multiple_of(1024) && self.started.elapsed() > limit {
                return Err(SolveError::TimeExceeded {
                    visited: self.visited,
                    limit,
                });
            }
        }
        Ok(())
    }

    fn descend(&mut self, step: usize, config: Configuration) -> Result<bool, SolveError> {
        self.visited += 1;
        self.deepest = self.deepest.max(step as u64 + 1);
        self.check_budget()?;
        let sequence = self.instance.sequence();
        if step == sequence.len() {
            return Ok(self.variant == Variant::Fitting || config.is_clear());
        }
        let stack = sequence[step];
        let graph = self.instance.graph();
        for v in 0..config.vertex_count() {
            if !config.is_empty_at(v) {
                continue;
            }
            let (next, _, _) = config.merge_at(graph, self.instance.threshold(), stack, v);
            if self.dead.contains(&(step + 1, next.clone())) {
                continue;
            }
            self.path.push(v);
            if self.descend(step + 1, next)? {
                return Ok(true);
            }
            self.path.pop();
        }
        self.dead.insert((step, config));
        Ok(false)
    }
}

/// Tries every vertex for every stack, depth first, remembering dead
/// `(step, configuration)` pairs. Exhausting the budget is an error, never a
/// silent "no".
pub fn brute_force(
    instance: &Instance,
    variant: Variant,
    limits: &SearchLimits,
) -> Result<SolveOutcome, SolveError> {
    let mut search = Search {
        instance,
        variant,
        limits,
        started: Instant::now(),
        dead: HashSet::new(),
        path: Vec::with_capacity(instance.sequence().len()),
        visited: 0,
        deepest: 0,
    };
    let found = search.descend(0, Configuration::empty(instance.vertex_count()))?;
    let verdict = if found {
        Verdict::yes(Reason::BruteForce, Some(Trace(search.path)))
    } else {
        Verdict::no(Reason::BruteForce)
    };
    Ok(SolveOutcome {
        verdict,
        stats: SearchStats {
            visited_states: search.visited,
            max_frontier: search.deepest,
            elapsed: search.started.elapsed(),
            state_bound: StateBound::for_instance(instance),
        },
    })
}
