//! Polynomial-time deciders, constructive strategies and the Fitting
//! decision pipeline for a bounded number of colors and threshold.
//!
//! Every decider here is partial: `None` means "undecided", never "no".
//! Throughout, `|C|` counts the colors that actually occur in the sequence.

mod matching;
mod spider;

pub use matching::{maximum_matching, Matching};
pub use spider::{
    build_empty_spider_trace, find_spider_packing, Spider, SpiderPacking, SpiderTraceError,
};

use crate::engine::{Instance, Reason, Trace, Variant, Verdict};
use crate::solvers::{dp_solve, dp_solve_compressed, SearchLimits, SolveError};

/// Yes when the graph has a matching with one edge per used color: each
/// color alternates between the endpoints of its edge, lower endpoint first.
pub fn decide_fitting_matching(instance: &Instance) -> Option<Verdict> {
    let colors = instance.used_colors();
    let matching = maximum_matching(instance.graph(), colors.len())?;
    let mut next_is_low = vec![true; colors.len()];
    let trace = instance
        .sequence()
        .iter()
        .map(|s| {
            let rank = colors.binary_search(&s.color).expect("used color");
            let (u, v) = matching.edges[rank];
            let low = next_is_low[rank];
            next_is_low[rank] = !low;
            if low {
                u
            } else {
                v
            }
        })
        .collect();
    Some(Verdict::yes(Reason::Matching, Some(Trace(trace))))
}

/// Yes when some vertex has degree at least `|C|·t`.
///
/// Each color reserves `t` neighbors of that hub and fills the lowest empty
/// one; once all `t` are occupied the next stack of the color goes on the
/// hub, where it merges at least `t` and vanishes.
pub fn decide_fitting_high_degree(instance: &Instance) -> Option<Verdict> {
    let graph = instance.graph();
    let colors = instance.used_colors();
    let t = instance.threshold() as usize;
    let need = colors.len().checked_mul(t)?;
    let hub = (0..graph.vertex_count()).find(|&v| graph.degree(v) >= need)?;
    let reserved = graph.neighbors(hub);

    let mut board = crate::engine::Playback::new(instance);
    let mut trace = Vec::with_capacity(instance.sequence().len());
    while let Some(stack) = board.next_stack() {
        let rank = colors.binary_search(&stack.color).expect("used color");
        let own = &reserved[rank * t..(rank + 1) * t];
        let v = own
            .iter()
            .copied()
            .find(|&v| board.configuration().is_empty_at(v))
            .unwrap_or(hub);
        board
            .step(v)
            .expect("hub strategy only places on empty vertices");
        trace.push(v);
    }
    Some(Verdict::yes(Reason::HighDegree, Some(Trace(trace))))
}

/// No when some color's stacks below height `t` sum to less than `t` while
/// its last stack is also below `t`: that last stack can never vanish.
pub fn check_empty_trivially_negative(instance: &Instance) -> Option<Verdict> {
    spider::trivially_negative_color(instance).map(|_| Verdict::no(Reason::NegativeHeightT))
}

/// Yes for Empty when a spider packing with one spider per color is found
/// and no color is trivially negative.
pub fn decide_empty_spider(instance: &Instance) -> Option<Verdict> {
    let packing = find_spider_packing(instance.graph(), instance.used_colors().len())?;
    let trace = build_empty_spider_trace(instance, &packing).ok()?;
    Some(Verdict::yes(Reason::Spider, Some(trace)))
}

/// Total decision procedure for Fitting.
///
/// 1. `|V| ≤ |C|`: layered DP.
/// 2. A matching of size `|C|`: yes.
/// 3. A vertex of degree `|C|·t`: yes.
/// 4. At least `|S|` isolated vertices: yes, one stack per isolated vertex.
/// 5. Otherwise the non-isolated part has a vertex cover below `2|C|` with
///    bounded degree, and the compressed DP is run.
pub fn fpt_decide_fitting(
    instance: &Instance,
    limits: &SearchLimits,
) -> Result<Verdict, SolveError> {
    let colors = instance.used_colors().len();
    if instance.vertex_count() <= colors {
        return dp_solve(instance, Variant::Fitting, limits).map(|o| o.verdict);
    }
    if let Some(v) = decide_fitting_matching(instance) {
        return Ok(v);
    }
    if let Some(v) = decide_fitting_high_degree(instance) {
        return Ok(v);
    }
    let isolated = instance.graph().isolated_vertices();
    if isolated.len() >= instance.sequence().len() {
        let trace = isolated[..instance.sequence().len()].to_vec();
        return Ok(Verdict::yes(Reason::IsolatedVertices, Some(Trace(trace))));
    }
    dp_solve_compressed(instance, Variant::Fitting, limits).map(|o| o.verdict)
}
