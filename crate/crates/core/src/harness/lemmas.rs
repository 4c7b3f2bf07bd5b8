use std::collections::BTreeMap;

use thiserror::Error;

use crate::engine::{
    apply_placement, ColorId, Configuration, Graph, Instance, Stack, Trace, Variant,
};
use crate::par;
use crate::reductions::{partition_to_spider, PartitionInstance, ReductionError, RoleTag};
use crate::solvers::{enumerate_solutions, SearchLimits, SolveError};

/// Largest graph the trace-level checkers accept.
pub const MAX_LEMMA_VERTICES: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub context: String,
    pub trace: Option<Trace>,
    pub configuration: Option<Configuration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub lemma: &'static str,
    /// Accepting traces (or solution states) inspected.
    pub cases: u64,
    /// How many cases matched each admissible pattern.
    pub patterns: BTreeMap<&'static str, u64>,
    pub violations: Vec<Violation>,
}

impl LemmaReport {
    fn new(lemma: &'static str) -> Self {
        LemmaReport {
            lemma,
            cases: 0,
            patterns: BTreeMap::new(),
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Folds `other` into `self`.
    pub fn absorb(&mut self, other: LemmaReport) {
        self.cases += other.cases;
        for (k, v) in other.patterns {
            *self.patterns.entry(k).or_default() += v;
        }
        self.violations.extend(other.violations);
    }

    fn count(&mut self, pattern: &'static str) {
        self.cases += 1;
        *self.patterns.entry(pattern).or_default() += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Search(#[from] SolveError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// Every accepting trace of `instance`, found by a depth-first walk that
/// only enters states lying on some complete solution.
pub fn accepting_traces(
    instance: &Instance,
    variant: Variant,
    limits: &SearchLimits,
) -> Result<Vec<Trace>, SolveError> {
    let n = instance.sequence().len();
    let alive: Vec<Vec<Configuration>> = (0..=n)
        .map(|i| enumerate_solutions(instance, variant, i, limits))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    if alive[0].is_empty() {
        return Ok(out);
    }
    let mut path = Vec::with_capacity(n);
    walk(
        instance,
        &alive,
        Configuration::empty(instance.vertex_count()),
        &mut path,
        &mut out,
    );
    Ok(out)
}

fn walk(
    instance: &Instance,
    alive: &[Vec<Configuration>],
    config: Configuration,
    path: &mut Vec<usize>,
    out: &mut Vec<Trace>,
) {
    let step = path.len();
    if step == instance.sequence().len() {
        out.push(Trace(path.clone()));
        return;
    }
    let stack = instance.sequence()[step];
    for v in 0..config.vertex_count() {
        let Ok((next, _)) = apply_placement(&config, instance, stack, v) else {
            continue;
        };
        if alive[step + 1].binary_search(&next).is_ok() {
            path.push(v);
            walk(instance, alive, next, path, out);
            path.pop();
        }
    }
}

fn single_color(graph: &Graph, t: u32, heights: &[u32]) -> Instance {
    Instance::new(
        graph.clone(),
        t,
        heights.iter().map(|&h| Stack::new(0, h)).collect(),
    )
    .expect("valid heights")
}

fn check_size(graph: &Graph) -> Result<(), LemmaError> {
    if graph.vertex_count() > MAX_LEMMA_VERTICES {
        return Err(LemmaError::Precondition(format!(
            "graph has {} vertices, at most {MAX_LEMMA_VERTICES} allowed",
            graph.vertex_count()
        )));
    }
    Ok(())
}

/// Three stacks below `t` whose first two reach `t`: in every solution the
/// first two sit at distance exactly two and the third lands between them.
pub fn check_forced_three_merge(
    graph: &Graph,
    t: u32,
    heights: (u32, u32, u32),
    limits: &SearchLimits,
) -> Result<LemmaReport, LemmaError> {
    check_size(graph)?;
    let (h1, h2, h3) = heights;
    if h1 >= t || h2 >= t || h3 >= t || h1 == 0 || h2 == 0 || h3 == 0 || h1 + h2 < t {
        return Err(LemmaError::Precondition(format!(
            "need 0 < h_i < t and h1 + h2 >= t, got {heights:?} with t = {t}"
        )));
    }
    let instance = single_color(graph, t, &[h1, h2, h3]);
    let mut report = LemmaReport::new("forced-three-merge");
    for trace in accepting_traces(&instance, Variant::Empty, limits)? {
        let [a, b, c] = [trace.0[0], trace.0[1], trace.0[2]];
        let ok = a != b && !graph.has_edge(a, b) && graph.has_edge(c, a) && graph.has_edge(c, b);
        if ok {
            report.count("three-merge");
        } else {
            report.cases += 1;
            report.violations.push(Violation {
                context: format!("t={t} heights={heights:?}"),
                trace: Some(trace),
                configuration: None,
            });
        }
    }
    Ok(report)
}

/// Four stacks `⟨h_ℓ, h_ℓ, h_s, h_s⟩` with `h_s < t/2 < h_ℓ < t` and
/// `h_s + h_ℓ ≥ t`: every solution is either two independent merges on two
/// disjoint edges or one merge of all four on a star with three leaves.
pub fn check_forced_four_merge(
    graph: &Graph,
    t: u32,
    long: u32,
    short: u32,
    limits: &SearchLimits,
) -> Result<LemmaReport, LemmaError> {
    check_size(graph)?;
    if short == 0 || 2 * short >= t || 2 * long <= t || long >= t || short + long < t {
        return Err(LemmaError::Precondition(format!(
            "need 0 < h_s < t/2 < h_l < t and h_s + h_l >= t, got h_l={long} h_s={short} t={t}"
        )));
    }
    let instance = single_color(graph, t, &[long, long, short, short]);
    let mut report = LemmaReport::new("forced-four-merge");
    for trace in accepting_traces(&instance, Variant::Empty, limits)? {
        let [a, b, c, d] = [trace.0[0], trace.0[1], trace.0[2], trace.0[3]];
        let adj = |x: usize, y: usize| graph.has_edge(x, y);
        let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
        // The third stack merges with exactly one long stack and the fourth
        // with the other; vertices emptied earlier may neighbor anything.
        let pairs = distinct
            && !adj(a, b)
            && ((adj(c, a) && !adj(c, b) && adj(d, b)) || (adj(c, b) && !adj(c, a) && adj(d, a)));
        let star = distinct
            && !adj(a, b)
            && !adj(a, c)
            && !adj(b, c)
            && adj(d, a)
            && adj(d, b)
            && adj(d, c);
        if pairs {
            report.count("independent-edges");
        } else if star {
            report.count("star");
        } else {
            report.cases += 1;
            report.violations.push(Violation {
                context: format!("t={t} long={long} short={short}"),
                trace: Some(trace),
                configuration: None,
            });
        }
    }
    Ok(report)
}

/// On the nine-vertex spider built from `p`, every state after the gadget
/// prefix that still leads to an empty board has red on the center and on
/// one leaf, blue on both short arms, and nothing else.
pub fn check_spider_forced_config(
    p: &PartitionInstance,
    limits: &SearchLimits,
) -> Result<LemmaReport, LemmaError> {
    let artifact = partition_to_spider(p)?;
    let observe = artifact.segments.payload.start;
    let t = artifact.instance.threshold();
    let states = enumerate_solutions(&artifact.instance, Variant::Empty, observe, limits)?;
    let center = artifact.vertex(RoleTag::Center, 0).expect("center");
    let shorts = [
        artifact.vertex(RoleTag::Short(1), 0).expect("short arm"),
        artifact.vertex(RoleTag::Short(2), 0).expect("short arm"),
    ];
    let red = Stack {
        color: ColorId(1),
        height: t - 1,
    };
    let blue = Stack {
        color: ColorId(2),
        height: t - 1,
    };

    let mut report = LemmaReport::new("forced-spider-configuration");
    for state in states {
        let occupied: Vec<(usize, Stack)> = state.occupied().collect();
        let leaf_reds = occupied
            .iter()
            .filter(|&&(v, s)| s == red && matches!(artifact.roles[v].tag, RoleTag::ArmLeaf(_)))
            .count();
        let ok = occupied.len() == 4
            && state.get(center) == Some(red)
            && shorts.iter().all(|&v| state.get(v) == Some(blue))
            && leaf_reds == 1;
        if ok {
            report.count("red-center-leaf-blue-shorts");
        } else {
            report.cases += 1;
            report.violations.push(Violation {
                context: format!("P={:?}", p.elements),
                trace: None,
                configuration: Some(state),
            });
        }
    }
    Ok(report)
}

/// Small graphs for the merge-lemma suites: paths, stars, spiders, two
/// disjoint edges and a triangle, all on at most nine vertices.
pub fn lemma_graphs() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=MAX_LEMMA_VERTICES {
        out.push((format!("path-{n}"), Graph::path(n)));
    }
    for leaves in 2..MAX_LEMMA_VERTICES {
        out.push((format!("star-{leaves}"), Graph::star(leaves)));
    }
    for legs in [
        &[1, 2, 2][..],
        &[2, 2, 2],
        &[1, 1, 2, 2],
        &[1, 1, 2, 2, 2],
        &[2, 2, 2, 2],
        &[1, 3, 3],
    ] {
        out.push((format!("spider-{legs:?}"), Graph::spider(legs)));
    }
    out.push(("2K2".to_string(), Graph::disjoint_edges(2)));
    out.push(("triangle".to_string(), Graph::complete(3)));
    out
}

/// Three-merge checker over every graph of [`lemma_graphs`] and every
/// admissible height triple with `t ≤ max_t`.
pub fn three_merge_suite(max_t: u32, limits: &SearchLimits) -> Result<LemmaReport, LemmaError> {
    let mut total = LemmaReport::new("forced-three-merge");
    for (name, g) in lemma_graphs() {
        for t in 2..=max_t {
            for h1 in 1..t {
                for h2 in (t - h1).max(1)..t {
                    for h3 in 1..t {
                        let mut r = check_forced_three_merge(&g, t, (h1, h2, h3), limits)?;
                        for v in &mut r.violations {
                            v.context = format!("{name} {}", v.context);
                        }
                        total.absorb(r);
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Four-merge checker over every graph of [`lemma_graphs`] and every
/// admissible `(h_ℓ, h_s)` with `t ≤ max_t`.
pub fn four_merge_suite(max_t: u32, limits: &SearchLimits) -> Result<LemmaReport, LemmaError> {
    let mut total = LemmaReport::new("forced-four-merge");
    for (name, g) in lemma_graphs() {
        for t in 3..=max_t {
            for long in 1..t {
                for short in 1..t {
                    if 2 * short >= t || 2 * long <= t || short + long < t {
                        continue;
                    }
                    let mut r = check_forced_four_merge(&g, t, long, short, limits)?;
                    for v in &mut r.violations {
                        v.context = format!("{name} {}", v.context);
                    }
                    total.absorb(r);
                }
            }
        }
    }
    Ok(total)
}

/// Spider-configuration checker over every canonical Partition source with
/// element sum at most `max_sum`. Sources are checked concurrently when
/// `limits.parallel` is set; the merged report is in source order.
pub fn spider_config_suite(max_sum: u64, limits: &SearchLimits) -> Result<LemmaReport, LemmaError> {
    let sources = canonical_partitions(max_sum);
    let inner = limits.sequential();
    let reports = par::map_slice(&sources, limits.parallel, |p| {
        check_spider_forced_config(p, &inner)
    });
    let mut total = LemmaReport::new("forced-spider-configuration");
    for r in reports {
        total.absorb(r?);
    }
    Ok(total)
}

/// Every ordered sequence of positive integers with sum at most `max_sum`
/// that is a canonical Partition instance with half at least 3.
pub fn canonical_partitions(max_sum: u64) -> Vec<PartitionInstance> {
    fn grow(prefix: &mut Vec<u64>, left: u64, out: &mut Vec<PartitionInstance>) {
        if !prefix.is_empty() {
            let p = PartitionInstance::new(prefix.clone()).expect("positive");
            if p.half() >= 3 && p.is_canonical() {
                out.push(p);
            }
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

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> SearchLimits {
        SearchLimits::default()
    }

    #[test]
    fn three_merge_examples() {
        let r = check_forced_three_merge(&Graph::path(3), 3, (2, 2, 2), &limits()).unwrap();
        assert_eq!(r.cases, 2);
        assert!(r.passed());
        let r = check_forced_three_merge(&Graph::complete(3), 3, (2, 2, 2), &limits()).unwrap();
        assert_eq!(r.cases, 0);
        let r = check_forced_three_merge(&Graph::star(3), 3, (2, 2, 2), &limits()).unwrap();
        assert_eq!(r.cases, 6);
        assert!(r.passed());
        assert!(check_forced_three_merge(&Graph::path(3), 3, (1, 1, 1), &limits()).is_err());
    }

    #[test]
    fn four_merge_examples() {
        let r = check_forced_four_merge(&Graph::disjoint_edges(2), 5, 3, 2, &limits()).unwrap();
        assert!(r.passed());
        assert!(r.cases > 0);
        assert_eq!(
            r.patterns.keys().copied().collect::<Vec<_>>(),
            vec!["independent-edges"]
        );
        let r = check_forced_four_merge(&Graph::star(3), 5, 3, 2, &limits()).unwrap();
        assert!(r.passed());
        assert_eq!(r.patterns.keys().copied().collect::<Vec<_>>(), vec!["star"]);
        let r = check_forced_four_merge(&Graph::path(3), 5, 3, 2, &limits()).unwrap();
        assert_eq!(r.cases, 0);
    }

    #[test]
    fn spider_configuration() {
        for elements in [vec![1, 1, 2, 2], vec![1, 1, 2, 1, 1]] {
            let p = PartitionInstance::new(elements).unwrap();
            let r = check_spider_forced_config(&p, &limits()).unwrap();
            assert!(r.passed(), "{:?}", r.violations);
            assert!(r.cases > 0);
        }
        let no = PartitionInstance::new(vec![2, 2, 2, 4]).unwrap();
        let r = check_spider_forced_config(&no, &limits()).unwrap();
        assert_eq!(r.cases, 0);
    }

    #[test]
    fn canonical_enumeration() {
        let all = canonical_partitions(8);
        assert!(all.iter().all(|p| p.is_canonical() && p.sum() <= 8));
        assert!(all.contains(&PartitionInstance::new(vec![1, 1, 2, 2]).unwrap()));
    }
}
