//! Seeded instance generation, oracle cross-checks, exhaustive checkers for
//! the gadget lemmas, engine-invariant sweeps and the state-count bench.

pub mod bench;
pub mod cross_check;
pub mod generate;
pub mod lemmas;
pub mod sweep;

pub use bench::{
    bench, render_tsv, suite_cases, BenchCase, BenchRow, BenchSuite, BenchVerdict, BENCH_HEADER,
};
pub use cross_check::{
    cross_check, cross_check_with, standard_deciders, CrossCheckReport, Decider, Disagreement,
    FnDecider, Mismatch,
};
pub use generate::{generate_instance, trial_seed, Family, GeneratorError, GeneratorParams};
pub use lemmas::{
    accepting_traces, canonical_partitions, check_forced_four_merge, check_forced_three_merge,
    check_spider_forced_config, four_merge_suite, lemma_graphs, spider_config_suite,
    three_merge_suite, LemmaError, LemmaReport, Violation,
};
pub use sweep::{
    all_graphs, conversion_check, conversion_instances, invariant_sweep, small_instances,
    SmallSpace, SweepReport,
};
