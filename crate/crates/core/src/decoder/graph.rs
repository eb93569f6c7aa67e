//! Matching graphs built from decomposed detector error models.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::dem::{xor_prob, DecomposedDem};
use crate::error::{Error, Result};

/// Fixed-point scale for integer edge weights.
pub const WEIGHT_SCALE: f64 = (1u64 << 20) as f64;
/// Probabilities are clamped into `[EPS, 1/2 - EPS]` before weighting.
pub const EPS: f64 = 1e-12;

pub const UNREACHABLE: i64 = i64::MAX / 4;

/// `ln((1-p)/p)` after clamping.
pub fn log_weight(p: f64) -> f64 {
    let p = p.clamp(EPS, 0.5 - EPS);
    ((1.0 - p) / p).ln()
}

pub fn int_weight(p: f64) -> i64 {
    ((log_weight(p) * WEIGHT_SCALE).round() as i64).max(1)
}

/// Integer `ln((1-p)/p)` after clamping into `[EPS, 1 - EPS]`; negative when
/// `p > 1/2`, never zero.
pub fn signed_int_weight(p: f64) -> i64 {
    let p = p.clamp(EPS, 1.0 - EPS);
    let w = (((1.0 - p) / p).ln() * WEIGHT_SCALE).round() as i64;
    if w == 0 {
        1
    } else {
        w
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphEdge {
    pub a: u32,
    /// `None` for an edge to the boundary.
    pub b: Option<u32>,
    pub probability: f64,
    pub weight: f64,
    pub observables: u64,
    /// Decomposed-model edge ids merged into this edge.
    pub sources: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct MatchingGraph {
    pub n_detectors: usize,
    pub edges: Vec<GraphEdge>,
    /// Graph edge of every decomposed-model edge.
    pub source_edge: Vec<usize>,
    /// `(neighbour, edge)` per detector; the boundary is node `n_detectors`.
    adjacency: Vec<Vec<(u32, u32)>>,
    int_weights: Vec<i64>,
}

/// Probability, weight and observable mask of an edge for given source priors.
fn merge(sources: &[usize], probs: &[f64], obs: impl Fn(usize) -> u64) -> (f64, u64) {
    let mut p = 0.0;
    let mut best = (f64::NEG_INFINITY, 0u64);
    for &s in sources {
        p = xor_prob(p, probs[s]);
        if probs[s] > best.0 {
            best = (probs[s], obs(s));
        }
    }
    (p, best.1)
}

impl MatchingGraph {
    pub fn build(ddem: &DecomposedDem) -> Result<Self> {
        if !ddem.residue.is_empty() {
            return Err(Error::Decoder(format!(
                "{} channels were not decomposed into graphlike edges",
                ddem.residue.len()
            )));
        }
        let n = ddem.n_detectors;
        let mut index: HashMap<(u32, Option<u32>), usize> = HashMap::new();
        let mut edges: Vec<GraphEdge> = Vec::new();
        let mut source_edge = Vec::with_capacity(ddem.edges.len());
        for (i, e) in ddem.edges.iter().enumerate() {
            let key = match e.detectors.as_slice() {
                [a] => (*a, None),
                [a, b] => (*a, Some(*b)),
                _ => {
                    return Err(Error::Decoder(format!(
                        "edge {i} has {} detectors",
                        e.detectors.len()
                    )))
                }
            };
            if key.0 as usize >= n || key.1.is_some_and(|b| b as usize >= n) {
                return Err(Error::Decoder(format!("edge {i} refers to an unknown detector")));
            }
            let id = *index.entry(key).or_insert_with(|| {
                edges.push(GraphEdge {
                    a: key.0,
                    b: key.1,
                    probability: 0.0,
                    weight: 0.0,
                    observables: 0,
                    sources: Vec::new(),
                });
                edges.len() - 1
            });
            edges[id].sources.push(i);
            source_edge.push(id);
        }
        let mut adjacency = vec![Vec::new(); n + 1];
        for (id, e) in edges.iter().enumerate() {
            let b = e.b.unwrap_or(n as u32);
            adjacency[e.a as usize].push((b, id as u32));
            adjacency[b as usize].push((e.a, id as u32));
        }
        let mut g = Self {
            n_detectors: n,
            edges,
            source_edge,
            adjacency,
            int_weights: Vec::new(),
        };
        let priors: Vec<f64> = ddem.edges.iter().map(|e| e.probability).collect();
        for e in g.edges.iter_mut() {
            let (p, o) = merge(&e.sources, &priors, |s| ddem.edges[s].observables);
            e.probability = p;
            e.weight = log_weight(p);
            e.observables = o;
        }
        g.int_weights = g.edges.iter().map(|e| int_weight(e.probability)).collect();
        Ok(g)
    }

    pub fn boundary(&self) -> u32 {
        self.n_detectors as u32
    }

    pub fn int_weights(&self) -> &[i64] {
        &self.int_weights
    }

    /// Signed integer weights and observable masks for new source-edge
    /// priors.
    pub fn reweigh(&self, probs: &[f64], obs: impl Fn(usize) -> u64) -> (Vec<i64>, Vec<u64>) {
        let mut w = Vec::with_capacity(self.edges.len());
        let mut o = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let (p, m) = merge(&e.sources, probs, &obs);
            w.push(signed_int_weight(p));
            o.push(m);
        }
        (w, o)
    }

    /// Shortest paths from `source` that never pass through the boundary.
    pub fn dijkstra(&self, source: u32, weights: &[i64], obs: &[u64]) -> (Vec<i64>, Vec<u64>) {
        let n = self.n_detectors + 1;
        let mut dist = vec![UNREACHABLE; n];
        let mut mask = vec![0u64; n];
        let mut heap = BinaryHeap::new();
        dist[source as usize] = 0;
        heap.push(Reverse((0i64, source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u as usize] || (u == self.boundary() && u != source) {
                continue;
            }
            for &(v, e) in &self.adjacency[u as usize] {
                let nd = d + weights[e as usize];
                if nd < dist[v as usize] {
                    dist[v as usize] = nd;
                    mask[v as usize] = mask[u as usize] ^ obs[e as usize];
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        (dist, mask)
    }

    pub fn edge_observables(&self) -> Vec<u64> {
        self.edges.iter().map(|e| e.observables).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dem::Edge;

    fn ddem(edges: Vec<(Vec<u32>, u64, f64)>, n: usize) -> DecomposedDem {
        DecomposedDem {
            n_detectors: n,
            n_observables: 1,
            components: (0..edges.len()).map(|i| vec![i]).collect(),
            edges: edges
                .into_iter()
                .map(|(detectors, observables, probability)| Edge {
                    detectors,
                    observables,
                    probability,
                })
                .collect(),
            residue: Vec::new(),
            mismatched: Vec::new(),
            undetectable: Vec::new(),
        }
    }

    #[test]
    fn single_edge_weight() {
        let g = MatchingGraph::build(&ddem(vec![(vec![0, 1], 1, 0.1)], 2)).unwrap();
        assert_eq!(g.edges.len(), 1);
        assert!((g.edges[0].weight - 9f64.ln()).abs() < 1e-12);
        assert_eq!(g.edges[0].observables, 1);
    }

    #[test]
    fn signed_weights() {
        assert_eq!(signed_int_weight(0.1), int_weight(0.1));
        assert_eq!(signed_int_weight(0.9), -int_weight(0.1));
        assert_eq!(signed_int_weight(0.5), 1);
    }

    #[test]
    fn boundary_edge() {
        let g = MatchingGraph::build(&ddem(vec![(vec![0], 0, 0.01)], 1)).unwrap();
        assert_eq!(g.edges[0].b, None);
    }

    #[test]
    fn parallel_edges_merge() {
        let g = MatchingGraph::build(&ddem(
            vec![(vec![0, 1], 0, 0.1), (vec![0, 1], 1, 0.2)],
            2,
        ))
        .unwrap();
        assert_eq!(g.edges.len(), 1);
        let want = 0.1 * 0.8 + 0.2 * 0.9;
        assert!((g.edges[0].probability - want).abs() < 1e-15);
        assert_eq!(g.edges[0].observables, 1);
        assert_eq!(g.source_edge, vec![0, 0]);
    }

    #[test]
    fn dijkstra_avoids_boundary() {
        let g = MatchingGraph::build(&ddem(
            vec![(vec![0], 0, 0.1), (vec![1], 1, 0.1), (vec![0, 1], 0, 1e-6)],
            2,
        ))
        .unwrap();
        let (d, _) = g.dijkstra(0, g.int_weights(), &g.edge_observables());
        assert_eq!(d[1], int_weight(1e-6));
        assert_eq!(d[2], int_weight(0.1));
    }
}
