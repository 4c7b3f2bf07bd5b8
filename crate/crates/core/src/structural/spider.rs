use thiserror::Error;

use crate::engine::{ColorId, Graph, Instance, Trace};

/// A degree-3 center with one length-one leg `s` and two length-two legs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Spider {
    pub center: usize,
    pub s: usize,
    pub la1: usize,
    pub lb1: usize,
    pub la2: usize,
    pub lb2: usize,
}

impl Spider {
    pub fn vertices(&self) -> [usize; 6] {
        [self.center, self.s, self.la1, self.lb1, self.la2, self.lb2]
    }

    /// Required edges, all present, and no others among the six vertices.
    pub fn is_induced_in(&self, graph: &Graph) -> bool {
        let vs = self.vertices();
        if vs.iter().any(|&v| v >= graph.vertex_count()) {
            return false;
        }
        let required = [
            (self.center, self.s),
            (self.center, self.la1),
            (self.center, self.la2),
            (self.la1, self.lb1),
            (self.la2, self.lb2),
        ];
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if u == v {
                    return false;
                }
                let wanted = required
                    .iter()
                    .any(|&(a, b)| (a, b) == (u, v) || (b, a) == (u, v));
                if graph.has_edge(u, v) != wanted {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpiderPacking {
    pub spiders: Vec<Spider>,
}

impl SpiderPacking {
    /// Every spider is induced and no vertex is shared.
    pub fn is_valid_for(&self, graph: &Graph) -> bool {
        let mut used = vec![false; graph.vertex_count()];
        self.spiders.iter().all(|sp| {
            sp.is_induced_in(graph)
                && sp.vertices().iter().all(|&v| {
                    let fresh = !used[v];
                    used[v] = true;
                    fresh
                })
        })
    }
}

/// Per-center cap on partial matches tried before moving on.
const CENTER_ATTEMPTS: usize = 20_000;

struct Matcher<'a> {
    graph: &'a Graph,
    used: &'a [bool],
    attempts: usize,
}

impl Matcher<'_> {
    fn free(&self, v: usize, taken: &[usize]) -> bool {
        !self.used[v] && !taken.contains(&v)
    }

    fn non_adjacent_to_all(&self, v: usize, others: &[usize]) -> bool {
        others.iter().all(|&u| !self.graph.has_edge(u, v))
    }

    /// Extends the partial tuple `[center, la1, lb1, la2, lb2, s]`.
    fn extend(&mut self, taken: &mut Vec<usize>) -> bool {
        self.attempts += 1;
        if self.attempts > CENTER_ATTEMPTS {
            return false;
        }
        let center = taken[0];
        let (pool, anchor): (&[usize], usize) = match taken.len() {
            1 | 3 | 5 => (self.graph.neighbors(center), center),
            2 => (self.graph.neighbors(taken[1]), taken[1]),
            4 => (self.graph.neighbors(taken[3]), taken[3]),
            _ => return true,
        };
        for &v in pool {
            if !self.free(v, taken) {
                continue;
            }
            // Only the anchor may be adjacent to the new vertex.
            let others: Vec<usize> = taken.iter().copied().filter(|&u| u != anchor).collect();
            if !self.non_adjacent_to_all(v, &others) {
                continue;
            }
            // Legs are interchangeable; keep la1 < la2 to halve the search.
            if taken.len() == 3 && v < taken[1] {
                continue;
            }
            taken.push(v);
            if self.extend(taken) {
                return true;
            }
            taken.pop();
            if self.attempts > CENTER_ATTEMPTS {
                return false;
            }
        }
        false
    }
}

/// Greedy search for `count` disjoint induced spiders, trying centers by
/// descending degree with a bounded backtracking match around each one.
///
/// Incomplete: `None` does not prove that no packing exists.
pub fn find_spider_packing(graph: &Graph, count: usize) -> Option<SpiderPacking> {
    let mut packing = SpiderPacking::default();
    if count == 0 {
        return Some(packing);
    }
    let mut centers: Vec<usize> = (0..graph.vertex_count())
        .filter(|&v| graph.degree(v) >= 3)
        .collect();
    centers.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    let mut used = vec![false; graph.vertex_count()];
    for center in centers {
        if used[center] {
            continue;
        }
        let mut matcher = Matcher {
            graph,
            used: &used,
            attempts: 0,
        };
        let mut taken = vec![center];
        if matcher.extend(&mut taken) {
            let spider = Spider {
                center: taken[0],
                la1: taken[1],
                lb1: taken[2],
                la2: taken[3],
                lb2: taken[4],
                s: taken[5],
            };
            for v in spider.vertices() {
                used[v] = true;
            }
            packing.spiders.push(spider);
            if packing.spiders.len() == count {
                return Some(packing);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpiderTraceError {
    #[error("{needed} spiders needed, packing has {found}")]
    TooFewSpiders { needed: usize, found: usize },
    #[error("spider {index} is not an induced spider or overlaps another")]
    InvalidSpider { index: usize },
    #[error("color {color} cannot be cleared: its non-full stacks sum below the threshold and its last stack is not full")]
    TriviallyNegative { color: ColorId },
}

/// Vertices for the per-color stacks of one color, in sequence order.
fn plan_color(heights: &[u32], t: u32, sp: &Spider) -> Vec<usize> {
    let m = heights.len();
    let z = m - 1;
    let total: u64 = heights.iter().map(|&h| u64::from(h)).sum();
    let hz = heights[z];
    if hz >= t || total - u64::from(hz) < u64::from(t) {
        return (0..m)
            .map(|k| if k % 2 == 0 { sp.center } else { sp.s })
            .collect();
    }

    let mut x: Vec<usize> = Vec::new();
    let mut sum = 0u64;
    for (k, &h) in heights.iter().enumerate() {
        if h < t && sum < u64::from(t) {
            x.push(k);
            sum += u64::from(h);
        }
    }
    let mut minimal = Vec::with_capacity(x.len());
    for &k in &x {
        if sum - u64::from(heights[k]) >= u64::from(t) {
            sum -= u64::from(heights[k]);
        } else {
            minimal.push(k);
        }
    }
    let mut in_x = vec![false; m];
    for &k in &minimal {
        in_x[k] = true;
    }
    let y = minimal[0];
    let leg1: Vec<usize> = minimal
        .iter()
        .copied()
        .filter(|&k| k != y && k != z)
        .collect();
    let leg2: Vec<usize> = (0..m).filter(|&k| !in_x[k] && k != z).collect();

    let mut plan = vec![usize::MAX; m];
    plan[y] = sp.s;
    plan[z] = sp.center;
    for (legs, (la, lb)) in [(leg1, (sp.la1, sp.lb1)), (leg2, (sp.la2, sp.lb2))] {
        let n = legs.len();
        for (j, k) in legs.into_iter().enumerate() {
            plan[k] = if (n - 1 - j) % 2 == 0 { la } else { lb };
        }
    }
    plan
}

/// The constructive Empty strategy: each used color (ascending) gets the
/// spider with the same rank and its stacks stay on that spider.
///
/// If the last stack `z` is full or the others sum below `t`, the color
/// alternates on the center and `s`. Otherwise a minimal set X of non-full
/// stacks reaching `t` is staged: its first stack on `s`, the rest of X
/// (except `z`) along leg 1 ending on `la1`, every other stack along leg 2
/// ending on `la2`, and `z` on the center, which merges all three legs.
pub fn build_empty_spider_trace(
    instance: &Instance,
    packing: &SpiderPacking,
) -> Result<Trace, SpiderTraceError> {
    let colors = instance.used_colors();
    if packing.spiders.len() < colors.len() {
        return Err(SpiderTraceError::TooFewSpiders {
            needed: colors.len(),
            found: packing.spiders.len(),
        });
    }
    let graph = instance.graph();
    let mut used = vec![false; graph.vertex_count()];
    for (index, sp) in packing.spiders.iter().take(colors.len()).enumerate() {
        if !sp.is_induced_in(graph) {
            return Err(SpiderTraceError::InvalidSpider { index });
        }
        for v in sp.vertices() {
            if std::mem::replace(&mut used[v], true) {
                return Err(SpiderTraceError::InvalidSpider { index });
            }
        }
    }
    if let Some(color) = trivially_negative_color(instance) {
        return Err(SpiderTraceError::TriviallyNegative { color });
    }

    let t = instance.threshold();
    let sequence = instance.sequence();
    let mut trace = vec![0usize; sequence.len()];
    for (rank, &color) in colors.iter().enumerate() {
        let positions: Vec<usize> = (0..sequence.len())
            .filter(|&i| sequence[i].color == color)
            .collect();
        let heights: Vec<u32> = positions
            .iter()
            .map(|&i| sequence[i].height.min(t))
            .collect();
        for (i, v) in positions
            .into_iter()
            .zip(plan_color(&heights, t, &packing.spiders[rank]))
        {
            trace[i] = v;
        }
    }
    Ok(Trace(trace))
}

pub(crate) fn trivially_negative_color(instance: &Instance) -> Option<ColorId> {
    let t = instance.threshold();
    instance.used_colors().into_iter().find(|&c| {
        let mut partial = 0u64;
        let mut last = 0;
        for s in instance.sequence().iter().filter(|s| s.color == c) {
            if s.height < t {
                partial += u64::from(s.height);
            }
            last = s.height;
        }
        partial < u64::from(t) && last < t
    })
}
