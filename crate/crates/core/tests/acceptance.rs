//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Every expected verdict comes from an oracle written here, not
//! from the library.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hexasort::engine::{play_trace, Graph, Instance, Stack, Variant};
use hexasort::harness::{
    bench, conversion_check, conversion_instances, cross_check, four_merge_suite, invariant_sweep,
    spider_config_suite, suite_cases, three_merge_suite, BenchSuite, BenchVerdict, GeneratorParams,
};
use hexasort::reductions::{
    partition_canonicalize, partition_to_spider, partition_to_two_edges,
    three_partition_to_gadgets, triplets_from_witness, witness_from_partition,
    witness_from_triplets, CanonicalizationResult, PartitionInstance, ThreePartitionInstance,
    Topology, TreeShape,
};
use hexasort::solvers::{dp_solve, SearchLimits};
use hexasort::structural::{
    build_empty_spider_trace, check_empty_trivially_negative, decide_empty_spider,
    decide_fitting_high_degree, decide_fitting_matching, Spider, SpiderPacking,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Indices of a subset summing to half the total, by exhaustive search.
fn subset_sum_oracle(elements: &[u64]) -> Option<Vec<usize>> {
    let total: u64 = elements.iter().sum();
    if total % 2 == 1 {
        return None;
    }
    (0u32..1 << elements.len())
        .find(|mask| {
            let s: u64 = (0..elements.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| elements[i])
                .sum();
            s == total / 2
        })
        .map(|mask| (0..elements.len()).filter(|i| mask >> i & 1 == 1).collect())
}

/// A split of `elements` into triplets each summing to `bound`, by search.
fn triplet_oracle(elements: &[u64], bound: u64) -> Option<Vec<[usize; 3]>> {
    fn go(used: &mut Vec<bool>, elements: &[u64], bound: u64, out: &mut Vec<[usize; 3]>) -> bool {
        let Some(a) = used.iter().position(|u| !u) else {
            return true;
        };
        used[a] = true;
        for b in a + 1..elements.len() {
            for c in b + 1..elements.len() {
                if used[b] || used[c] || elements[a] + elements[b] + elements[c] != bound {
                    continue;
                }
                used[b] = true;
                used[c] = true;
                out.push([a, b, c]);
                if go(used, elements, bound, out) {
                    return true;
                }
                out.pop();
                used[b] = false;
                used[c] = false;
            }
        }
        used[a] = false;
        false
    }
    let mut out = Vec::new();
    go(&mut vec![false; elements.len()], elements, bound, &mut out).then_some(out)
}

/// Every sequence of length `1..=max_len` over `1..=max_elem`.
fn sequences(max_len: usize, max_elem: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for e in 1..=max_elem {
                let mut s2: Vec<u64> = s.clone();
                s2.push(e);
                next.push(s2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Every composition (ordered, positive parts) of every sum in `1..=max_sum`.
fn compositions(max_sum: u64) -> Vec<Vec<u64>> {
    fn grow(prefix: &mut Vec<u64>, left: u64, out: &mut Vec<Vec<u64>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for v in 1..=left {
            prefix.push(v);
            grow(prefix, left - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), max_sum, &mut out);
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let params = GeneratorParams {
        vertices: 1..=4,
        colors: 1..=2,
        threshold: 1..=5,
        length: 0..=6,
        ..GeneratorParams::default()
    }
    .with_seed(2024);
    let report = cross_check(&params, 1000, &SearchLimits::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(report.disagreements.is_empty(), || {
        format!(
            "{} disagreements, first {:?}",
            report.disagreements.len(),
            report.disagreements[0]
        )
    })?;
    ensure(report.skipped == 0, || {
        format!("{} skipped", report.skipped)
    })?;
    ensure(elapsed < Duration::from_secs(300), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "1000 trials, {} comparisons, 0 disagreements in {elapsed:.2?}",
        report.comparisons
    ))
}

fn criterion_2() -> Outcome {
    let limits = SearchLimits::default().sequential();
    let (mut canonical, mut decided) = (0, 0);
    for elements in sequences(6, 6) {
        let expected = subset_sum_oracle(&elements).is_some();
        let p = PartitionInstance::new(elements.clone()).map_err(|e| e.to_string())?;
        match partition_canonicalize(&p) {
            CanonicalizationResult::Canonical(c) => {
                canonical += 1;
                let art = partition_to_two_edges(&c).map_err(|e| e.to_string())?;
                let got = dp_solve(&art.instance, Variant::Empty, &limits)
                    .map_err(|e| e.to_string())?
                    .verdict
                    .is_yes();
                ensure(got == expected, || {
                    format!("{elements:?}: oracle {expected}, dp {got}")
                })?;
            }
            CanonicalizationResult::Decided { decision, .. } => {
                decided += 1;
                let got = decision == hexasort::Decision::Yes;
                ensure(got == expected, || {
                    format!("{elements:?}: oracle {expected}, canonicalize {got}")
                })?;
            }
        }
    }
    Ok(format!(
        "{canonical} canonical sources matched dp; {decided} decided by canonicalization also matched"
    ))
}

fn criterion_3() -> Outcome {
    let sources: Vec<PartitionInstance> = compositions(12)
        .into_iter()
        .map(|e| PartitionInstance::new(e).expect("positive"))
        .filter(|p| p.half() >= 3 && p.is_canonical())
        .collect();
    let mut yes = 0;
    let mut no_sources = Vec::new();
    for p in &sources {
        match subset_sum_oracle(&p.elements) {
            Some(subset) => {
                let art = partition_to_spider(p).map_err(|e| e.to_string())?;
                let trace = witness_from_partition(&art, &subset).map_err(|e| e.to_string())?;
                let replay =
                    play_trace(&art.instance, &trace, Variant::Empty).map_err(|e| e.to_string())?;
                ensure(replay.accepted, || {
                    format!("{:?}: witness rejected: {:?}", p.elements, replay.failure)
                })?;
                yes += 1;
            }
            None => no_sources.push(p.clone()),
        }
    }
    ensure(!no_sources.is_empty(), || {
        "no canonical no-instance found".into()
    })?;
    let limits = SearchLimits::with_max_states(10_000_000);
    let checked: Vec<&PartitionInstance> = no_sources.iter().take(5).collect();
    for p in &checked {
        let art = partition_to_spider(p).map_err(|e| e.to_string())?;
        let out = dp_solve(&art.instance, Variant::Empty, &limits).map_err(|e| e.to_string())?;
        ensure(!out.verdict.is_yes(), || {
            format!("{:?}: search says yes", p.elements)
        })?;
    }
    Ok(format!(
        "{yes} yes-instance witnesses accepted; no-instances {:?} rejected within 10^7 states",
        checked.iter().map(|p| &p.elements).collect::<Vec<_>>()
    ))
}

fn criterion_4() -> Outcome {
    let topologies = [
        Topology::Disjoint,
        Topology::Tree(TreeShape::Path),
        Topology::Tree(TreeShape::Binary),
        Topology::Tree(TreeShape::Star),
    ];
    let mut runs = 0;
    for (elements, bound) in [(vec![1, 1, 1], 3), (vec![5, 5, 5, 6, 6, 7], 17)] {
        let triplets = triplet_oracle(&elements, bound).ok_or("oracle found no triplets")?;
        let a = ThreePartitionInstance::new(elements.clone(), bound).map_err(|e| e.to_string())?;
        for topology in topologies {
            let art = three_partition_to_gadgets(&a, topology).map_err(|e| e.to_string())?;
            let trace = witness_from_triplets(&art, &triplets).map_err(|e| e.to_string())?;
            let replay =
                play_trace(&art.instance, &trace, Variant::Empty).map_err(|e| e.to_string())?;
            ensure(replay.accepted, || {
                format!("{elements:?} {topology:?}: {:?}", replay.failure)
            })?;
            let back = triplets_from_witness(&art, &trace).map_err(|e| e.to_string())?;
            let mut seen: Vec<usize> = back.iter().flatten().copied().collect();
            seen.sort_unstable();
            ensure(seen == (0..elements.len()).collect::<Vec<_>>(), || {
                format!("{elements:?} {topology:?}: triplets {back:?} do not cover")
            })?;
            ensure(
                back.iter()
                    .all(|t| t.iter().map(|&i| elements[i]).sum::<u64>() == bound),
                || format!("{elements:?} {topology:?}: triplets {back:?} miss the bound"),
            )?;
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} artifacts: witnesses accepted, triplets round-trip"
    ))
}

fn criterion_5() -> Outcome {
    let limits = SearchLimits::default();
    let mut parts = Vec::new();
    for report in [
        three_merge_suite(6, &limits).map_err(|e| e.to_string())?,
        four_merge_suite(6, &limits).map_err(|e| e.to_string())?,
        spider_config_suite(12, &limits).map_err(|e| e.to_string())?,
    ] {
        ensure(report.passed(), || {
            format!("{}: {:?}", report.lemma, report.violations.first())
        })?;
        ensure(report.cases > 0, || format!("{}: no cases", report.lemma))?;
        parts.push(format!("{} {} cases", report.lemma, report.cases));
    }
    Ok(format!("0 violations ({})", parts.join(", ")))
}

fn random_stacks(rng: &mut ChaCha8Rng, colors: u32, t: u32, len: usize) -> Vec<Stack> {
    (0..len)
        .map(|_| Stack::new(rng.gen_range(0..colors), rng.gen_range(1..=t)))
        .collect()
}

fn accepted(inst: &Instance, trace: &hexasort::Trace, variant: Variant) -> bool {
    play_trace(inst, trace, variant).is_ok_and(|r| r.accepted)
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..200 {
        // A planted matching of size n/2 plus random extra edges.
        let n = rng.gen_range(2..=9);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = perm
            .chunks_exact(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.3) && !edges.contains(&(u, v)) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, &edges).expect("valid");
        let colors = rng.gen_range(1..=(n / 2) as u32);
        let t = rng.gen_range(1..=5);
        let len = rng.gen_range(0..=14);
        let inst = Instance::new(g, t, random_stacks(&mut rng, colors, t, len)).expect("valid");
        let v =
            decide_fitting_matching(&inst).ok_or_else(|| format!("matching #{k}: no verdict"))?;
        let w = v
            .witness
            .ok_or_else(|| format!("matching #{k}: no witness"))?;
        ensure(accepted(&inst, &w, Variant::Fitting), || {
            format!("matching #{k}: witness rejected")
        })?;
    }
    for k in 0..200 {
        // A hub of degree at least |C|·t, extra vertices and extra edges.
        let colors = rng.gen_range(1..=3);
        let t = rng.gen_range(1..=4);
        let leaves = colors as usize * t as usize + rng.gen_range(0..=3);
        let extra = rng.gen_range(0..=3);
        let mut edges: Vec<(usize, usize)> = (1..=leaves).map(|l| (0, l)).collect();
        let n = leaves + 1 + extra;
        for u in 1..n {
            for v in u + 1..n {
                if rng.gen_bool(0.2) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, &edges).expect("valid");
        let len = rng.gen_range(0..=20);
        let inst = Instance::new(g, t, random_stacks(&mut rng, colors, t, len)).expect("valid");
        let v = decide_fitting_high_degree(&inst)
            .ok_or_else(|| format!("high-degree #{k}: no verdict"))?;
        let w = v
            .witness
            .ok_or_else(|| format!("high-degree #{k}: no witness"))?;
        ensure(accepted(&inst, &w, Variant::Fitting), || {
            format!("high-degree #{k}: witness rejected")
        })?;
    }
    let mut k = 0;
    while k < 200 {
        // One induced spider per color, pendant extras, no trivially negative color.
        let colors = rng.gen_range(1..=3u32);
        let mut g = Graph::edgeless(0);
        let mut spiders = Vec::new();
        for j in 0..colors as usize {
            g = g.disjoint_union(&Graph::spider(&[1, 2, 2]));
            let b = 6 * j;
            spiders.push(Spider {
                center: b,
                s: b + 1,
                la1: b + 2,
                lb1: b + 3,
                la2: b + 4,
                lb2: b + 5,
            });
        }
        let pendants = rng.gen_range(0..=2);
        let base = g.vertex_count();
        let mut edges = g.edges().to_vec();
        for p in 0..pendants {
            edges.push((rng.gen_range(0..base), base + p));
        }
        let g = Graph::new(base + pendants, &edges).expect("valid");
        let t = rng.gen_range(1..=6);
        let len = rng.gen_range(1..=12);
        let inst = Instance::new(g, t, random_stacks(&mut rng, colors, t, len)).expect("valid");
        if check_empty_trivially_negative(&inst).is_some() {
            continue;
        }
        let packing = SpiderPacking {
            spiders: spiders.clone(),
        };
        let trace =
            build_empty_spider_trace(&inst, &packing).map_err(|e| format!("spider #{k}: {e}"))?;
        ensure(accepted(&inst, &trace, Variant::Empty), || {
            format!("spider #{k}: planted-packing witness rejected")
        })?;
        let v =
            decide_empty_spider(&inst).ok_or_else(|| format!("spider #{k}: no packing found"))?;
        let w = v
            .witness
            .ok_or_else(|| format!("spider #{k}: no witness"))?;
        ensure(accepted(&inst, &w, Variant::Empty), || {
            format!("spider #{k}: witness rejected")
        })?;
        k += 1;
    }
    Ok("200 matching, 200 high-degree, 200 spider witnesses accepted".into())
}

fn criterion_7() -> Outcome {
    let rows = bench(
        &suite_cases(BenchSuite::Ladder, 0),
        &SearchLimits::default(),
    );
    ensure(
        rows.iter().map(|r| r.vertices).collect::<Vec<_>>() == (4..=9).collect::<Vec<_>>(),
        || "ladder rows missing".into(),
    )?;
    for r in &rows {
        ensure(r.verdict != BenchVerdict::Budget, || {
            format!("{}: budget exceeded", r.name)
        })?;
        // Bound recomputed here: (|C|(t-1)+1)^|V| (|S|+1).
        let bound = (u128::from(r.colors) * u128::from(r.threshold - 1) + 1).pow(r.vertices as u32)
            * (r.length as u128 + 1);
        ensure(
            u128::from(r.visited_states) <= bound && r.within_bound,
            || format!("{}: {} states > {bound}", r.name, r.visited_states),
        )?;
    }
    let summary: Vec<String> = rows
        .iter()
        .map(|r| format!("|V|={} {}", r.vertices, r.visited_states))
        .collect();
    Ok(format!("all rows within bound ({})", summary.join(", ")))
}

fn criterion_8() -> Outcome {
    let sweep = invariant_sweep(100_000, 8, true);
    ensure(sweep.checked == 100_000, || {
        format!("{} prefixes", sweep.checked)
    })?;
    ensure(sweep.passed(), || format!("{:?}", sweep.violations.first()))?;
    let conv = conversion_check(&conversion_instances(2000, 8), &SearchLimits::default())
        .map_err(|e| e.to_string())?;
    ensure(conv.passed(), || format!("{:?}", conv.violations.first()))?;
    Ok(format!(
        "{} prefixes / {} placements hold the invariants; {} Empty-to-Fitting conversions agree",
        sweep.checked, sweep.steps, conv.checked
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", criterion_1),
        ("partition two-edges soundness", criterion_2),
        ("partition spider reduction", criterion_3),
        ("3-partition reductions", criterion_4),
        ("gadget lemma suites", criterion_5),
        ("constructive strategies", criterion_6),
        ("complexity observability", criterion_7),
        ("engine invariants", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{took:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail} [{took:.1?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
