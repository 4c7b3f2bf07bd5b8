use crate::auto::auto_solve;
use crate::engine::{classify_trivial, play_trace, Decision, Instance, Variant, Verdict};
use crate::par;
use crate::solvers::{brute_force, dp_solve, dp_solve_compressed, SearchLimits, SolveError};
use crate::structural::{
    check_empty_trivially_negative, decide_empty_spider, decide_fitting_high_degree,
    decide_fitting_matching, fpt_decide_fitting,
};

use super::generate::{generate_instance, trial_seed, GeneratorError, GeneratorParams};

/// A procedure compared against brute force. `Ok(None)` means it does not
/// apply or abstains.
pub trait Decider: Sync {
    fn name(&self) -> &str;
    fn decide(
        &self,
        instance: &Instance,
        variant: Variant,
        limits: &SearchLimits,
    ) -> Result<Option<Verdict>, SolveError>;
}

/// A decider built from a name and a function.
pub struct FnDecider<F> {
    pub name: &'static str,
    pub run: F,
}

impl<F> Decider for FnDecider<F>
where
    F: Fn(&Instance, Variant, &SearchLimits) -> Result<Option<Verdict>, SolveError> + Sync,
{
    fn name(&self) -> &str {
        self.name
    }

    fn decide(
        &self,
        instance: &Instance,
        variant: Variant,
        limits: &SearchLimits,
    ) -> Result<Option<Verdict>, SolveError> {
        (self.run)(instance, variant, limits)
    }
}

fn fitting_only(
    variant: Variant,
    f: impl FnOnce() -> Result<Option<Verdict>, SolveError>,
) -> Result<Option<Verdict>, SolveError> {
    if variant == Variant::Fitting {
        f()
    } else {
        Ok(None)
    }
}

/// Every exact solver and every structural decider.
pub fn standard_deciders() -> Vec<Box<dyn Decider>> {
    vec![
        Box::new(FnDecider {
            name: "dp",
            run: |i: &Instance, v, l: &SearchLimits| dp_solve(i, v, l).map(|o| Some(o.verdict)),
        }),
        Box::new(FnDecider {
            name: "compressed-dp",
            run: |i: &Instance, v, l: &SearchLimits| {
                fitting_only(v, || dp_solve_compressed(i, v, l).map(|o| Some(o.verdict)))
            },
        }),
        Box::new(FnDecider {
            name: "fpt",
            run: |i: &Instance, v, l: &SearchLimits| {
                fitting_only(v, || fpt_decide_fitting(i, l).map(Some))
            },
        }),
        Box::new(FnDecider {
            name: "auto",
            run: |i: &Instance, v, l: &SearchLimits| auto_solve(i, v, l).map(Some),
        }),
        Box::new(FnDecider {
            name: "trivial",
            run: |i: &Instance, v, _: &SearchLimits| Ok(classify_trivial(i, v)),
        }),
        Box::new(FnDecider {
            name: "matching",
            run: |i: &Instance, v, _: &SearchLimits| {
                fitting_only(v, || Ok(decide_fitting_matching(i)))
            },
        }),
        Box::new(FnDecider {
            name: "high-degree",
            run: |i: &Instance, v, _: &SearchLimits| {
                fitting_only(v, || Ok(decide_fitting_high_degree(i)))
            },
        }),
        Box::new(FnDecider {
            name: "empty-negative",
            run: |i: &Instance, v, _: &SearchLimits| {
                Ok((v == Variant::Empty)
                    .then(|| check_empty_trivially_negative(i))
                    .flatten())
            },
        }),
        Box::new(FnDecider {
            name: "spider",
            run: |i: &Instance, v, _: &SearchLimits| {
                Ok((v == Variant::Empty)
                    .then(|| decide_empty_spider(i))
                    .flatten())
            },
        }),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    /// Different decision from brute force.
    Decision { expected: Decision, got: Decision },
    /// A yes-verdict whose witness is missing or does not replay.
    Witness,
}

#[derive(Debug, Clone)]
pub struct Disagreement {
    pub trial: u64,
    pub seed: u64,
    pub variant: Variant,
    pub decider: String,
    pub mismatch: Mismatch,
    pub instance: Instance,
}

#[derive(Debug, Clone, Default)]
pub struct CrossCheckReport {
    pub trials: u64,
    /// Decider verdicts compared against the reference.
    pub comparisons: u64,
    /// (trial, variant) pairs dropped because some search ran out of budget.
    pub skipped: u64,
    pub disagreements: Vec<Disagreement>,
}

impl CrossCheckReport {
    /// Zero disagreements and skips amounting to at most 1% of the trials.
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.skipped * 100 <= self.trials
    }
}

struct TrialResult {
    comparisons: u64,
    skipped: u64,
    disagreements: Vec<Disagreement>,
}

fn witness_ok(instance: &Instance, verdict: &Verdict, variant: Variant) -> bool {
    match (&verdict.decision, &verdict.witness) {
        (Decision::Yes, Some(w)) => play_trace(instance, w, variant)
            .map(|r| r.accepted)
            .unwrap_or(false),
        (Decision::Yes, None) => false,
        (Decision::No, _) => true,
    }
}

fn run_trial(
    trial: u64,
    params: &GeneratorParams,
    deciders: &[Box<dyn Decider>],
    limits: &SearchLimits,
) -> Result<TrialResult, GeneratorError> {
    let seed = trial_seed(params.seed, trial);
    let instance = generate_instance(&params.with_seed(seed))?;
    let mut out = TrialResult {
        comparisons: 0,
        skipped: 0,
        disagreements: Vec::new(),
    };
    // Trials already run in parallel; keep each search on one thread.
    let limits = limits.sequential();
    for variant in [Variant::Empty, Variant::Fitting] {
        let reference = match brute_force(&instance, variant, &limits) {
            Ok(o) => o.verdict,
            Err(_) => {
                out.skipped += 1;
                continue;
            }
        };
        let mut found = Vec::new();
        let mut skipped = false;
        let mut record = |decider: &str, mismatch| {
            found.push(Disagreement {
                trial,
                seed,
                variant,
                decider: decider.to_string(),
                mismatch,
                instance: instance.clone(),
            })
        };
        if !witness_ok(&instance, &reference, variant) {
            record("brute", Mismatch::Witness);
        }
        for d in deciders {
            let verdict = match d.decide(&instance, variant, &limits) {
                Ok(Some(v)) => v,
                Ok(None) => continue,
                Err(_) => {
                    skipped = true;
                    continue;
                }
            };
            out.comparisons += 1;
            if verdict.decision != reference.decision {
                record(
                    d.name(),
                    Mismatch::Decision {
                        expected: reference.decision,
                        got: verdict.decision,
                    },
                );
            } else if !witness_ok(&instance, &verdict, variant) {
                record(d.name(), Mismatch::Witness);
            }
        }
        out.skipped += u64::from(skipped);
        out.disagreements.extend(found);
    }
    Ok(out)
}

/// Runs `trials` seeded instances through every decider in `deciders` and
/// compares each answer (and witness) with brute force, for both variants.
/// Trial `k` uses seed `trial_seed(params.seed, k)`; results are merged in
/// trial order regardless of scheduling.
pub fn cross_check_with(
    params: &GeneratorParams,
    trials: u64,
    deciders: &[Box<dyn Decider>],
    limits: &SearchLimits,
) -> Result<CrossCheckReport, GeneratorError> {
    let results = par::map_range(trials as usize, limits.parallel, |k| {
        run_trial(k as u64, params, deciders, limits)
    });
    let mut report = CrossCheckReport {
        trials,
        ..CrossCheckReport::default()
    };
    for r in results {
        let r = r?;
        report.comparisons += r.comparisons;
        report.skipped += r.skipped;
        report.disagreements.extend(r.disagreements);
    }
    Ok(report)
}

pub fn cross_check(
    params: &GeneratorParams,
    trials: u64,
    limits: &SearchLimits,
) -> Result<CrossCheckReport, GeneratorError> {
    cross_check_with(params, trials, &standard_deciders(), limits)
}
