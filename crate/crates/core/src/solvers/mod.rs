//! Exact decision procedures.
//!
//! [`brute_force`] is a memoized depth-first search over placement choices and
//! serves as the oracle for everything else. [`dp_solve`] explores reachable
//! configurations layer by layer (layer `i` holds exactly the boards reachable
//! after `i` placements); [`dp_solve_compressed`] does the same for Fitting
//! with all isolated vertices folded into a single occupancy counter.

use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::engine::{Instance, Verdict};

mod brute;
mod compressed;
mod layered;

pub use brute::brute_force;
pub use compressed::{dp_solve_compressed, CompressedConfiguration};
pub use layered::{dp_solve, enumerate_solutions, reachable_layers};

/// Default cap on visited states for every exhaustive procedure.
pub const DEFAULT_MAX_STATES: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of distinct (layer, configuration) states.
    pub max_states: u64,
    pub max_time: Option<Duration>,
    /// Expand large layers on the rayon pool. Ignored without the `parallel`
    /// feature; results never depend on it.
    pub parallel: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_states: DEFAULT_MAX_STATES,
            max_time: None,
            parallel: crate::par::AVAILABLE,
        }
    }
}

impl SearchLimits {
    pub fn with_max_states(max_states: u64) -> Self {
        SearchLimits {
            max_states,
            ..SearchLimits::default()
        }
    }

    pub fn sequential(self) -> Self {
        SearchLimits {
            parallel: false,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("state budget exceeded: {visited} states visited, limit {limit}")]
    BudgetExceeded { visited: u64, limit: u64 },
    #[error("time budget of {limit:?} exceeded after {visited} states")]
    TimeExceeded { visited: u64, limit: Duration },
    #[error("{solver} only decides the {supported} variant")]
    UnsupportedVariant {
        solver: &'static str,
        supported: &'static str,
    },
    #[error("observation step {step} is beyond the sequence length {len}")]
    StepOutOfRange { step: usize, len: usize },
}

/// `(|C|·(t-1)+1)^|V|`, saturating instead of overflowing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateBound {
    Exact(u128),
    Saturated,
}

impl StateBound {
    pub fn per_vertex(color_count: u32, threshold: u32) -> u128 {
        u128::from(color_count) * u128::from(threshold.saturating_sub(1)) + 1
    }

    pub fn configurations(color_count: u32, threshold: u32, vertices: usize) -> Self {
        let base = StateBound::per_vertex(color_count, threshold);
        match u32::try_from(vertices)
            .ok()
            .and_then(|e| base.checked_pow(e))
        {
            Some(v) => StateBound::Exact(v),
            None => StateBound::Saturated,
        }
    }

    pub fn for_instance(instance: &Instance) -> Self {
        StateBound::configurations(
            instance.color_count(),
            instance.threshold(),
            instance.vertex_count(),
        )
    }

    pub fn times(self, factor: u128) -> Self {
        match self {
            StateBound::Exact(v) => v
                .checked_mul(factor)
                .map_or(StateBound::Saturated, StateBound::Exact),
            StateBound::Saturated => StateBound::Saturated,
        }
    }

    /// Whether `count` is within the bound (a saturated bound admits anything).
    pub fn admits(&self, count: u64) -> bool {
        match *self {
            StateBound::Exact(v) => u128::from(count) <= v,
            StateBound::Saturated => true,
        }
    }
}

impl fmt::Display for StateBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateBound::Exact(v) => write!(f, "{v}"),
            StateBound::Saturated => f.write_str("saturated"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    pub visited_states: u64,
    /// Largest layer (DP) or deepest recursion (brute force).
    pub max_frontier: u64,
    pub elapsed: Duration,
    /// Analytic bound on configurations per layer.
    pub state_bound: StateBound,
}

impl SearchStats {
    /// `visited_states <= state_bound × (|S|+1)`.
    pub fn within_bound(&self, sequence_len: usize) -> bool {
        self.state_bound
            .times(sequence_len as u128 + 1)
            .admits(self.visited_states)
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

/// The analytic configuration bound for an instance, with no search run.
pub fn state_space_report(instance: &Instance) -> SearchStats {
    SearchStats {
        visited_states: 0,
        max_frontier: 0,
        elapsed: Duration::ZERO,
        state_bound: StateBound::for_instance(instance),
    }
}
