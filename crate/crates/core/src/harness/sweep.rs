use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{
    apply_placement, empty_to_fitting, Configuration, Graph, Instance, Stack, Variant,
};
use crate::par;
use crate::solvers::{brute_force, SearchLimits, SolveError};

use super::generate::{generate_instance, trial_seed, GeneratorParams};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub checked: u64,
    /// Placements (invariant sweep) or instances (conversion check) examined.
    pub steps: u64,
    pub violations: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.checked += other.checked;
        self.steps += other.steps;
        self.violations.extend(other.violations);
        self
    }
}

/// Parameters for the invariant sweep: denser graphs and longer sequences
/// than the cross-check default.
pub fn sweep_params() -> GeneratorParams {
    GeneratorParams {
        vertices: 1..=8,
        edge_density: 0.5,
        colors: 1..=3,
        threshold: 1..=6,
        length: 1..=12,
        ..GeneratorParams::default()
    }
}

/// Plays `prefixes` random legal prefixes (uniform choice among empty
/// vertices at each step) and checks the resting-height bound and the
/// no-adjacent-equal-colors invariant after every placement.
pub fn invariant_sweep(prefixes: u64, seed: u64, parallel: bool) -> SweepReport {
    let params = sweep_params();
    par::map_range(prefixes as usize, parallel, |k| {
        let s = trial_seed(seed, k as u64);
        let inst = generate_instance(&params.with_seed(s)).expect("valid sweep params");
        let mut rng = ChaCha8Rng::seed_from_u64(s.rotate_left(17));
        let mut report = SweepReport {
            checked: 1,
            ..SweepReport::default()
        };
        let mut config = Configuration::empty(inst.vertex_count());
        for (step, &stack) in inst.sequence().iter().enumerate() {
            let free: Vec<usize> = (0..inst.vertex_count())
                .filter(|&v| config.is_empty_at(v))
                .collect();
            let Some(&v) = free.choose(&mut rng) else {
                break;
            };
            config = apply_placement(&config, &inst, stack, v)
                .expect("vertex is free")
                .0;
            report.steps += 1;
            if let Err(e) = config.check_invariants(inst.graph(), inst.threshold()) {
                report
                    .violations
                    .push(format!("seed {s} step {step}: {e:?}"));
                break;
            }
        }
        report
    })
    .into_iter()
    .fold(SweepReport::default(), SweepReport::merge)
}

/// Every labelled graph on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::new(n, &edges).expect("distinct pairs")
        })
        .collect()
}

/// Bounds for [`small_instances`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmallSpace {
    pub max_vertices: usize,
    pub max_length: usize,
    pub max_threshold: u32,
    pub max_colors: u32,
}

impl Default for SmallSpace {
    fn default() -> Self {
        SmallSpace {
            max_vertices: 3,
            max_length: 4,
            max_threshold: 3,
            max_colors: 2,
        }
    }
}

/// Every normalized instance inside `space`, up to color renaming (colors
/// first appear in increasing order).
pub fn small_instances(space: SmallSpace) -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 0..=space.max_vertices {
        let graphs = all_graphs(n);
        for t in 1..=space.max_threshold {
            let mut seqs: Vec<Vec<Stack>> = vec![Vec::new()];
            let mut frontier = seqs.clone();
            for _ in 0..space.max_length {
                let mut next = Vec::new();
                for s in &frontier {
                    let fresh = s.iter().map(|st| st.color.0 + 1).max().unwrap_or(0);
                    for c in 0..=fresh.min(space.max_colors - 1) {
                        for h in 1..=t {
                            let mut s2 = s.clone();
                            s2.push(Stack::new(c, h));
                            next.push(s2);
                        }
                    }
                }
                seqs.extend(next.iter().cloned());
                frontier = next;
            }
            for g in &graphs {
                for s in &seqs {
                    out.push(Instance::new(g.clone(), t, s.clone()).expect("in range"));
                }
            }
        }
    }
    out
}

fn conversion_case(inst: &Instance, limits: &SearchLimits) -> Result<Option<String>, SolveError> {
    let fitting = empty_to_fitting(inst).expect("threshold at least 2");
    let empty = brute_force(inst, Variant::Empty, limits)?.verdict.decision;
    let fit = brute_force(&fitting, Variant::Fitting, limits)?
        .verdict
        .decision;
    Ok((empty != fit).then(|| format!("{inst:?}: Empty={empty:?} converted Fitting={fit:?}")))
}

/// Checks that the Empty verdict equals the Fitting verdict of the
/// converted instance, by brute force on both sides, for every instance in
/// `instances` with `t ≥ 2`.
pub fn conversion_check(
    instances: &[Instance],
    limits: &SearchLimits,
) -> Result<SweepReport, SolveError> {
    let seq = limits.sequential();
    let results = par::map_slice(instances, limits.parallel, |inst| {
        if inst.threshold() < 2 {
            return Ok(SweepReport::default());
        }
        Ok(SweepReport {
            checked: 1,
            steps: inst.sequence().len() as u64,
            violations: conversion_case(inst, &seq)?.into_iter().collect(),
        })
    });
    results
        .into_iter()
        .try_fold(SweepReport::default(), |acc, r| r.map(|r| acc.merge(r)))
}

/// The conversion domain: every graph on at most four vertices with short
/// sequences exhaustively, plus `random` seeded instances on four vertices
/// with up to six stacks.
pub fn conversion_instances(random: u64, seed: u64) -> Vec<Instance> {
    let mut out = small_instances(SmallSpace {
        max_vertices: 4,
        max_length: 3,
        max_threshold: 3,
        max_colors: 2,
    });
    let params = GeneratorParams {
        vertices: 1..=4,
        threshold: 2..=5,
        length: 0..=6,
        ..GeneratorParams::default()
    };
    out.extend(
        (0..random).map(|k| {
            generate_instance(&params.with_seed(trial_seed(seed, k))).expect("valid params")
        }),
    );
    out
}
