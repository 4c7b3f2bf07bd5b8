//! Solver selection, including the combined `auto` pipeline.

use std::fmt;
use std::str::FromStr;

use crate::engine::{classify_trivial, Instance, Reason, Trace, Variant, Verdict};
use crate::solvers::{brute_force, dp_solve, dp_solve_compressed, SearchLimits, SolveError};
use crate::structural::{
    check_empty_trivially_negative, decide_empty_spider, decide_fitting_high_degree,
    decide_fitting_matching, fpt_decide_fitting,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverChoice {
    Brute,
    Dp,
    Fpt,
    Auto,
}

impl SolverChoice {
    pub const ALL: [SolverChoice; 4] = [
        SolverChoice::Brute,
        SolverChoice::Dp,
        SolverChoice::Fpt,
        SolverChoice::Auto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverChoice::Brute => "brute",
            SolverChoice::Dp => "dp",
            SolverChoice::Fpt => "fpt",
            SolverChoice::Auto => "auto",
        }
    }
}

impl fmt::Display for SolverChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SolverChoice::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown solver `{s}` (expected brute, dp, fpt or auto)"))
    }
}

pub fn solve_with(
    instance: &Instance,
    variant: Variant,
    choice: SolverChoice,
    limits: &SearchLimits,
) -> Result<Verdict, SolveError> {
    match choice {
        SolverChoice::Brute => brute_force(instance, variant, limits).map(|o| o.verdict),
        SolverChoice::Dp => dp_solve(instance, variant, limits).map(|o| o.verdict),
        SolverChoice::Fpt if variant == Variant::Fitting => fpt_decide_fitting(instance, limits),
        SolverChoice::Fpt => Err(SolveError::UnsupportedVariant {
            solver: "fpt",
            supported: "Fitting",
        }),
        SolverChoice::Auto => auto_solve(instance, variant, limits),
    }
}

/// Triviality rules, then the structural deciders, then the compressed DP
/// (Fitting only), the full DP and finally brute force. The first decisive
/// answer wins; a budget failure moves on to the next exact procedure.
pub fn auto_solve(
    instance: &Instance,
    variant: Variant,
    limits: &SearchLimits,
) -> Result<Verdict, SolveError> {
    if let Some(v) = classify_trivial(instance, variant) {
        return Ok(v);
    }
    let structural = match variant {
        Variant::Fitting => decide_fitting_matching(instance)
            .or_else(|| decide_fitting_high_degree(instance))
            .or_else(|| {
                let isolated = instance.graph().isolated_vertices();
                let n = instance.sequence().len();
                (isolated.len() >= n).then(|| {
                    Verdict::yes(
                        Reason::IsolatedVertices,
                        Some(Trace(isolated[..n].to_vec())),
                    )
                })
            }),
        Variant::Empty => {
            check_empty_trivially_negative(instance).or_else(|| decide_empty_spider(instance))
        }
    };
    if let Some(v) = structural {
        return Ok(v);
    }
    if variant == Variant::Fitting {
        if let Ok(out) = dp_solve_compressed(instance, variant, limits) {
            return Ok(out.verdict);
        }
    }
    match dp_solve(instance, variant, limits) {
        Ok(out) => Ok(out.verdict),
        Err(_) => brute_force(instance, variant, limits).map(|o| o.verdict),
    }
}
