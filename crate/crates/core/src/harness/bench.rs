use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{Decision, Graph, Instance, Stack, Variant};
use crate::solvers::{dp_solve, SearchLimits, SolveError, StateBound};

use super::generate::trial_seed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchCase {
    pub name: String,
    pub variant: Variant,
    pub instance: Instance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchSuite {
    /// Single-color paths with 4 to 9 vertices, `t = 4` and `2|V|` stacks.
    Ladder,
    Empty,
}

impl FromStr for BenchSuite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ladder" => Ok(BenchSuite::Ladder),
            "empty" => Ok(BenchSuite::Empty),
            _ => Err(format!(
                "unknown bench suite `{s}` (expected ladder or empty)"
            )),
        }
    }
}

pub const LADDER_THRESHOLD: u32 = 4;

/// The deterministic instance set of `suite` for `seed`.
pub fn suite_cases(suite: BenchSuite, seed: u64) -> Vec<BenchCase> {
    match suite {
        BenchSuite::Empty => Vec::new(),
        BenchSuite::Ladder => (4..=9)
            .map(|n| {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, n as u64));
                let sequence = (0..2 * n)
                    .map(|_| Stack::new(0, rng.gen_range(1..LADDER_THRESHOLD)))
                    .collect();
                BenchCase {
                    name: format!("path-{n}"),
                    variant: Variant::Empty,
                    instance: Instance::new(Graph::path(n), LADDER_THRESHOLD, sequence)
                        .expect("valid ladder"),
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchVerdict {
    Yes,
    No,
    /// The search ran out of budget; the row is kept.
    Budget,
}

impl BenchVerdict {
    fn as_str(self) -> &'static str {
        match self {
            BenchVerdict::Yes => "yes",
            BenchVerdict::No => "no",
            BenchVerdict::Budget => "budget",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub name: String,
    pub variant: Variant,
    pub vertices: usize,
    pub colors: u32,
    pub threshold: u32,
    pub length: usize,
    pub verdict: BenchVerdict,
    pub visited_states: u64,
    /// `(|C|·(t-1)+1)^|V|`.
    pub bound: StateBound,
    /// `visited_states <= bound × (|S|+1)`.
    pub within_bound: bool,
    pub elapsed: Duration,
}

/// Runs the layered DP on each case. Budget failures become rows with
/// verdict [`BenchVerdict::Budget`] and the run continues.
pub fn bench(cases: &[BenchCase], limits: &SearchLimits) -> Vec<BenchRow> {
    cases
        .iter()
        .map(|case| {
            let inst = &case.instance;
            let bound = StateBound::for_instance(inst);
            let (verdict, visited, elapsed) = match dp_solve(inst, case.variant, limits) {
                Ok(out) => {
                    let v = match out.verdict.decision {
                        Decision::Yes => BenchVerdict::Yes,
                        Decision::No => BenchVerdict::No,
                    };
                    (v, out.stats.visited_states, out.stats.elapsed)
                }
                Err(
                    SolveError::BudgetExceeded { visited, .. }
                    | SolveError::TimeExceeded { visited, .. },
                ) => (BenchVerdict::Budget, visited, Duration::ZERO),
                Err(_) => (BenchVerdict::Budget, 0, Duration::ZERO),
            };
            BenchRow {
                name: case.name.clone(),
                variant: case.variant,
                vertices: inst.vertex_count(),
                colors: inst.color_count(),
                threshold: inst.threshold(),
                length: inst.sequence().len(),
                verdict,
                visited_states: visited,
                bound,
                within_bound: bound
                    .times(inst.sequence().len() as u128 + 1)
                    .admits(visited),
                elapsed,
            }
        })
        .collect()
}

pub const BENCH_HEADER: &str =
    "name\tvariant\tvertices\tcolors\tthreshold\tlength\tverdict\tvisited_states\tbound\twithin_bound\telapsed_us";

/// Tab-separated table with [`BENCH_HEADER`] as its first line. Without
/// timing the elapsed column holds `-`, which makes the output reproducible.
pub fn render_tsv(rows: &[BenchRow], timing: bool) -> String {
    let mut out = String::from(BENCH_HEADER);
    out.push('\n');
    for r in rows {
        let elapsed = if timing {
            r.elapsed.as_micros().to_string()
        } else {
            "-".to_string()
        };
        let variant = match r.variant {
            Variant::Empty => "empty",
            Variant::Fitting => "fitting",
        };
        let _ = writeln!(
            out,
            "{}\t{variant}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{elapsed}",
            r.name,
            r.vertices,
            r.colors,
            r.threshold,
            r.length,
            r.verdict.as_str(),
            r.visited_states,
            r.bound,
            r.within_bound,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_shape() {
        let cases = suite_cases(BenchSuite::Ladder, 1);
        assert_eq!(cases.len(), 6);
        for (c, n) in cases.iter().zip(4..) {
            assert_eq!(c.instance.vertex_count(), n);
            assert_eq!(c.instance.sequence().len(), 2 * n);
            assert_eq!(c.instance.color_count(), 1);
        }
    }

    #[test]
    fn reproducible_table() {
        let cases = suite_cases(BenchSuite::Ladder, 5);
        let limits = SearchLimits::default();
        let a = render_tsv(&bench(&cases[..3], &limits), false);
        let b = render_tsv(
            &bench(&suite_cases(BenchSuite::Ladder, 5)[..3], &limits),
            false,
        );
        assert_eq!(a, b);
        assert!(a.starts_with(BENCH_HEADER));
        assert_eq!(a.lines().count(), 4);
    }

    #[test]
    fn empty_suite() {
        let rows = bench(&suite_cases(BenchSuite::Empty, 0), &SearchLimits::default());
        assert!(rows.is_empty());
        assert_eq!(render_tsv(&rows, true), format!("{BENCH_HEADER}\n"));
    }

    #[test]
    fn budget_rows_are_kept() {
        let cases = suite_cases(BenchSuite::Ladder, 0);
        let rows = bench(&cases[..2], &SearchLimits::with_max_states(3));
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.verdict == BenchVerdict::Budget));
    }
}
