use crate::engine::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// Pairwise disjoint edges, each stored as `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_valid_for(&self, graph: &Graph) -> bool {
        let mut seen = vec![false; graph.vertex_count()];
        self.edges.iter().all(|&(u, v)| {
            let fresh = u < graph.vertex_count()
                && v < graph.vertex_count()
                && !seen[u]
                && !seen[v]
                && u != v;
            if fresh {
                seen[u] = true;
                seen[v] = true;
            }
            fresh && graph.has_edge(u, v)
        })
    }
}

fn ordered(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn greedy(graph: &Graph) -> Vec<(usize, usize)> {
    let mut used = vec![false; graph.vertex_count()];
    let mut out = Vec::new();
    for &(u, v) in graph.edges() {
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            out.push(ordered(u, v));
        }
    }
    out
}

struct CoverSearch<'a> {
    graph: &'a Graph,
    cover: Vec<usize>,
    in_cover: Vec<bool>,
    used: Vec<bool>,
    chosen: Vec<(usize, usize)>,
    target: usize,
}

impl CoverSearch<'_> {
    fn run(&mut self, next: usize) -> bool {
        if self.chosen.len() >= self.target {
            return true;
        }
        let remaining = self.cover[next..]
            .iter()
            .filter(|&&x| !self.used[x])
            .count();
        if self.chosen.len() + remaining < self.target {
            return false;
        }
        let x = self.cover[next];
        if self.used[x] {
            return self.run(next + 1);
        }
        self.used[x] = true;
        // Partners inside the cover, then at most |cover| outside it: the
        // other cover vertices can block no more than that many.
        let mut outside = 0;
        let partners: Vec<usize> = self
            .graph
            .neighbors(x)
            .iter()
            .copied()
            .filter(|&y| !self.used[y])
            .filter(|&y| {
                if self.in_cover[y] {
                    true
                } else {
                    outside += 1;
                    outside <= self.cover.len()
                }
            })
            .collect();
        for y in partners {
            self.used[y] = true;
            self.chosen.push(ordered(x, y));
            if self.run(next + 1) {
                return true;
            }
            self.chosen.pop();
            self.used[y] = false;
        }
        if self.run(next + 1) {
            return true;
        }
        self.used[x] = false;
        false
    }
}

/// A matching with at least `target` edges, if one exists.
///
/// A greedy maximal matching either already suffices or its endpoints form a
/// vertex cover of size below `2·target`; every matching edge then has an
/// endpoint in that cover, and the search branches over cover vertices only.
/// Exponential in `target`, polynomial in the graph.
pub fn maximum_matching(graph: &Graph, target: usize) -> Option<Matching> {
    let mut edges = greedy(graph);
    if edges.len() >= target {
        edges.truncate(target);
        edges.sort_unstable();
        return Some(Matching { edges });
    }
    let mut in_cover = vec![false; graph.vertex_count()];
    let mut cover: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    cover.sort_unstable();
    for &x in &cover {
        in_cover[x] = true;
    }
    let mut search = CoverSearch {
        graph,
        cover,
        in_cover,
        used: vec![false; graph.vertex_count()],
        chosen: Vec::new(),
        target,
    };
    if search.run(0) {
        let mut edges = search.chosen;
        edges.sort_unstable();
        Some(Matching { edges })
    } else {
        None
    }
}
