use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Graph, Instance, Stack};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Path,
    Star,
    /// The fixed nine-vertex spider with two short and three long arms.
    Spider,
    /// `⌊n/2⌋` disjoint edges (at least one).
    DisjointEdges,
    Random,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "path" => Family::Path,
            "star" => Family::Star,
            "spider" => Family::Spider,
            "disjoint-edges" => Family::DisjointEdges,
            "random" => Family::Random,
            _ => return Err(format!("unknown family `{s}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub family: Family,
    pub vertices: RangeInclusive<usize>,
    /// Edge probability for the random family.
    pub edge_density: f64,
    /// Exact edge count for the random family; overrides the density.
    pub edge_count: Option<usize>,
    pub colors: RangeInclusive<u32>,
    pub threshold: RangeInclusive<u32>,
    pub length: RangeInclusive<usize>,
    pub seed: u64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            family: Family::Random,
            vertices: 1..=4,
            edge_density: 0.5,
            edge_count: None,
            colors: 1..=2,
            threshold: 1..=5,
            length: 0..=6,
            seed: 0,
        }
    }
}

impl GeneratorParams {
    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorParams {
            seed,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("range for {0} is empty")]
    EmptyRange(&'static str),
    #[error("{0} must be at least 1")]
    ZeroMinimum(&'static str),
    #[error("edge density {0} is outside [0, 1]")]
    Density(f64),
    #[error("{edges} edges do not fit on {vertices} vertices")]
    TooManyEdges { edges: usize, vertices: usize },
}

/// Seed for trial `index` of a run seeded with `base`.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn check(params: &GeneratorParams) -> Result<(), GeneratorError> {
    if params.vertices.is_empty() {
        return Err(GeneratorError::EmptyRange("vertices"));
    }
    if params.colors.is_empty() {
        return Err(GeneratorError::EmptyRange("colors"));
    }
    if params.threshold.is_empty() {
        return Err(GeneratorError::EmptyRange("threshold"));
    }
    if params.length.is_empty() {
        return Err(GeneratorError::EmptyRange("length"));
    }
    if *params.colors.start() == 0 {
        return Err(GeneratorError::ZeroMinimum("colors"));
    }
    if *params.threshold.start() == 0 {
        return Err(GeneratorError::ZeroMinimum("threshold"));
    }
    if !(0.0..=1.0).contains(&params.edge_density) {
        return Err(GeneratorError::Density(params.edge_density));
    }
    if let (Family::Random, Some(edges)) = (params.family, params.edge_count) {
        let n = *params.vertices.start();
        if edges > n * n.saturating_sub(1) / 2 {
            return Err(GeneratorError::TooManyEdges { edges, vertices: n });
        }
    }
    Ok(())
}

fn graph(params: &GeneratorParams, rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(params.vertices.clone());
    match params.family {
        Family::Path => Graph::path(n),
        Family::Star => Graph::star(n.saturating_sub(1)),
        Family::Spider => Graph::spider(&[1, 1, 2, 2, 2]),
        Family::DisjointEdges => Graph::disjoint_edges((n / 2).max(1)),
        Family::Random => {
            let mut pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            let edges = match params.edge_count {
                Some(k) => {
                    pairs.shuffle(rng);
                    pairs.truncate(k.min(pairs.len()));
                    pairs
                }
                None => pairs
                    .into_iter()
                    .filter(|_| rng.gen_bool(params.edge_density))
                    .collect(),
            };
            Graph::new(n, &edges).expect("distinct pairs")
        }
    }
}

/// A normalized instance drawn deterministically from `params.seed`.
pub fn generate_instance(params: &GeneratorParams) -> Result<Instance, GeneratorError> {
    check(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let graph = graph(params, &mut rng);
    let colors = rng.gen_range(params.colors.clone());
    let t = rng.gen_range(params.threshold.clone());
    let len = rng.gen_range(params.length.clone());
    let sequence = (0..len)
        .map(|_| Stack::new(rng.gen_range(0..colors), rng.gen_range(1..=t)))
        .collect();
    Ok(
        Instance::with_color_count(graph, t, sequence, colors)
            .expect("heights and colors in range"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structural::maximum_matching;

    #[test]
    fn deterministic() {
        let p = GeneratorParams {
            seed: 42,
            ..GeneratorParams::default()
        };
        assert_eq!(
            generate_instance(&p).unwrap(),
            generate_instance(&p).unwrap()
        );
        let other = generate_instance(&p.with_seed(43)).unwrap();
        let again = generate_instance(&p.with_seed(43)).unwrap();
        assert_eq!(other, again);
    }

    #[test]
    fn families() {
        let p = GeneratorParams {
            family: Family::DisjointEdges,
            vertices: 6..=6,
            ..GeneratorParams::default()
        };
        let i = generate_instance(&p).unwrap();
        assert_eq!(i.vertex_count(), 6);
        assert_eq!(i.graph().edges().len(), 3);
        assert_eq!(maximum_matching(i.graph(), 3).unwrap().len(), 3);

        let s = generate_instance(&GeneratorParams {
            family: Family::Spider,
            ..GeneratorParams::default()
        })
        .unwrap();
        let mut degrees: Vec<usize> = (0..9).map(|v| s.graph().degree(v)).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 1, 1, 1, 1, 2, 2, 2, 5]);
    }

    #[test]
    fn output_is_normalized() {
        for seed in 0..200 {
            let i = generate_instance(&GeneratorParams::default().with_seed(seed)).unwrap();
            assert!(i.is_normalized());
        }
    }

    #[test]
    fn infeasible_params() {
        let p = GeneratorParams {
            vertices: 3..=3,
            edge_count: Some(4),
            ..GeneratorParams::default()
        };
        assert_eq!(
            generate_instance(&p),
            Err(GeneratorError::TooManyEdges {
                edges: 4,
                vertices: 3
            })
        );
        let p = GeneratorParams {
            #[allow(clippy::reversed_empty_ranges)]
            threshold: 4..=2,
            ..GeneratorParams::default()
        };
        assert_eq!(
            generate_instance(&p),
            Err(GeneratorError::EmptyRange("threshold"))
        );
    }
}
