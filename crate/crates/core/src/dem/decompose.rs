//! Rewriting hyperedge channels as XORs of graphlike (at most two-detector) edges.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::dem::model::{xor_prob, Channel, DetectorErrorModel};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    /// One or two sorted detector ids.
    pub detectors: Vec<u32>,
    pub observables: u64,
    /// Prior after folding in every channel that decomposes onto this edge.
    pub probability: f64,
}

#[derive(Clone, Debug)]
pub struct DecomposedDem {
    pub n_detectors: usize,
    pub n_observables: usize,
    pub edges: Vec<Edge>,
    /// Edge ids for each channel of the source model, empty for residue.
    pub components: Vec<Vec<usize>>,
    /// Source channels that could not be split into edges.
    pub residue: Vec<usize>,
    /// Channels whose components' observable masks XOR to a different mask.
    pub mismatched: Vec<usize>,
    /// Source channels that flip observables without flipping any detector.
    pub undetectable: Vec<usize>,
}

/// Largest hyperedge the exhaustive split search accepts.
const MAX_SPLIT: usize = 16;

struct Search<'a> {
    dets: &'a [u32],
    target_obs: u64,
    /// Candidate edges per block, keyed by sorted detector set.
    by_set: &'a HashMap<Vec<u32>, Vec<usize>>,
    weights: &'a [f64],
    edge_obs: &'a [u64],
    best: Option<(usize, f64, Vec<usize>)>,
    ignore_obs: bool,
}

impl Search<'_> {
    fn run(&mut self, remaining: u32, chosen: &mut Vec<usize>, obs: u64, weight: f64) {
        if remaining == 0 {
            if !self.ignore_obs && obs != self.target_obs {
                return;
            }
            let better = match &self.best {
                None => true,
                Some((n, w, ids)) => {
                    (chosen.len(), weight) < (*n, *w)
                        || ((chosen.len(), weight) == (*n, *w) && {
                            let mut a = chosen.clone();
                            a.sort_unstable();
                            let mut b = ids.clone();
                            b.sort_unstable();
                            a < b
                        })
                }
            };
            if better {
                self.best = Some((chosen.len(), weight, chosen.clone()));
            }
            return;
        }
        if let Some((n, _, _)) = &self.best {
            let lower = chosen.len() + (remaining.count_ones() as usize).div_ceil(2);
            if lower > *n {
                return;
            }
        }
        let a = remaining.trailing_zeros() as usize;
        let rest = remaining & !(1 << a);
        let mut options: Vec<(u32, Vec<u32>)> = vec![(rest, vec![self.dets[a]])];
        let mut bits = rest;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            options.push((rest & !(1 << b), vec![self.dets[a], self.dets[b]]));
        }
        for (next, set) in options {
            let Some(cands) = self.by_set.get(&set) else { continue };
            for &e in cands {
                chosen.push(e);
                self.run(next, chosen, obs ^ self.edge_obs[e], weight + self.weights[e]);
                chosen.pop();
            }
        }
    }
}

fn edge_weight(p: f64) -> f64 {
    let p = p.clamp(1e-300, 0.5);
    ((1.0 - p) / p).ln()
}

/// Greedy split of `dets` into existing edges: repeatedly peel the largest
/// existing edge contained in the remaining detectors, the most probable
/// one on ties, then the lowest id.
fn greedy_split(
    dets: &[u32],
    by_set: &HashMap<Vec<u32>, Vec<usize>>,
    weights: &[f64],
) -> Option<Vec<usize>> {
    let mut remaining = dets.to_vec();
    let mut out = Vec::new();
    while !remaining.is_empty() {
        let mut best: Option<(f64, usize, Vec<u32>)> = None;
        let consider = |best: &mut Option<(f64, usize, Vec<u32>)>, set: Vec<u32>| {
            for &e in by_set.get(&set).into_iter().flatten() {
                // lower weight is more probable
                let better = best
                    .as_ref()
                    .is_none_or(|(w, id, _)| weights[e] < *w || (weights[e] == *w && e < *id));
                if better {
                    *best = Some((weights[e], e, set.clone()));
                }
            }
        };
        for (i, &a) in remaining.iter().enumerate() {
            for &b in &remaining[i + 1..] {
                consider(&mut best, vec![a, b]);
            }
        }
        if best.is_none() {
            for &a in &remaining {
                consider(&mut best, vec![a]);
            }
        }
        let (_, e, set) = best?;
        out.push(e);
        remaining.retain(|d| !set.contains(d));
    }
    Some(out)
}

/// Splits every channel with more than two detectors, or with detectors of
/// different classes, into existing edges.
///
/// The split is greedy (see [`greedy_split`]) and the observable masks come
/// from the peeled edges, so they can disagree with the channel's own mask;
/// such channels are listed in `mismatched`. When the greedy peel gets stuck,
/// an exhaustive search over splits takes over, preferring splits whose masks
/// agree, then the fewest blocks, the lowest weight and the smallest ids.
pub fn decompose_dem(dem: &DetectorErrorModel) -> DecomposedDem {
    let mut edges: Vec<Edge> = Vec::new();
    let mut by_set: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    let mut components = vec![Vec::new(); dem.channels.len()];
    let mut weights: Vec<f64> = Vec::new();

    let class = |d: u32| dem.detector_classes.get(d as usize).copied().unwrap_or(0);
    let is_edge = |ch: &Channel| {
        ch.is_graphlike() && ch.detectors.iter().all(|&d| class(d) == class(ch.detectors[0]))
    };
    for (i, ch) in dem.channels.iter().enumerate() {
        if is_edge(ch) && !ch.detectors.is_empty() {
            edges.push(Edge {
                detectors: ch.detectors.clone(),
                observables: ch.observables,
                probability: 0.0,
            });
            weights.push(edge_weight(ch.probability));
            by_set.entry(ch.detectors.clone()).or_default().push(edges.len() - 1);
            components[i] = vec![edges.len() - 1];
        }
    }
    let edge_obs: Vec<u64> = edges.iter().map(|e| e.observables).collect();

    let mut residue = Vec::new();
    let mut mismatched = Vec::new();
    let mut undetectable = Vec::new();
    for (i, ch) in dem.channels.iter().enumerate() {
        if ch.detectors.is_empty() {
            // Pure observable flips leave no syndrome; no decoder sees them.
            undetectable.push(i);
            continue;
        }
        if is_edge(ch) {
            continue;
        }
        let split = greedy_split(&ch.detectors, &by_set, &weights).or_else(|| {
            if ch.detectors.len() > MAX_SPLIT {
                return None;
            }
            let full = (1u32 << ch.detectors.len()) - 1;
            let mut search = Search {
                dets: &ch.detectors,
                target_obs: ch.observables,
                by_set: &by_set,
                weights: &weights,
                edge_obs: &edge_obs,
                best: None,
                ignore_obs: false,
            };
            search.run(full, &mut Vec::new(), 0, 0.0);
            if search.best.is_none() {
                search.ignore_obs = true;
                search.run(full, &mut Vec::new(), 0, 0.0);
            }
            search.best.map(|(_, _, ids)| ids)
        });
        match split {
            Some(ids) => {
                let got = ids.iter().fold(0u64, |acc, &e| acc ^ edge_obs[e]);
                if got != ch.observables {
                    mismatched.push(i);
                }
                components[i] = ids;
            }
            None => residue.push(i),
        }
    }

    let mut out = DecomposedDem {
        n_detectors: dem.n_detectors,
        n_observables: dem.n_observables,
        edges,
        components,
        residue,
        mismatched,
        undetectable,
    };
    let probs: Vec<f64> = dem.channels.iter().map(|c| c.probability).collect();
    let priors = out.push_probabilities(&probs);
    for (e, p) in out.edges.iter_mut().zip(priors) {
        e.probability = p;
    }
    debug_assert!(out.check_xor(dem).is_ok());
    out
}

impl DecomposedDem {
    /// Edge probabilities when channel `c` fires with probability `probs[c]`:
    /// every edge takes the ⊕-combination over the channels mapped onto it.
    pub fn push_probabilities(&self, probs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.edges.len()];
        for (c, comps) in self.components.iter().enumerate() {
            for &e in comps {
                out[e] = xor_prob(out[e], probs[c]);
            }
        }
        out
    }

    /// Per-edge sum of the probabilities of the channels mapped to it,
    /// clipped to 1.
    pub fn sum_probabilities(&self, probs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.edges.len()];
        for (c, comps) in self.components.iter().enumerate() {
            for &e in comps {
                out[e] += probs[c];
            }
        }
        out.iter().map(|p| p.min(1.0)).collect()
    }

    pub fn check_residue(&self, dem: &DetectorErrorModel) -> Result<()> {
        match self.residue.first() {
            None => Ok(()),
            Some(&c) => Err(Error::DecompositionResidue {
                count: self.residue.len(),
                first: dem.channels[c].signature_text(),
            }),
        }
    }

    /// Verifies that the components of every channel XOR to its detectors,
    /// and to its observables unless the channel is listed as mismatched.
    pub fn check_xor(&self, dem: &DetectorErrorModel) -> Result<()> {
        for (c, comps) in self.components.iter().enumerate() {
            if comps.is_empty() {
                continue;
            }
            let mut dets: Vec<u32> = Vec::new();
            let mut obs = 0u64;
            for &e in comps {
                for &d in &self.edges[e].detectors {
                    match dets.iter().position(|&x| x == d) {
                        Some(k) => {
                            dets.swap_remove(k);
                        }
                        None => dets.push(d),
                    }
                }
                obs ^= self.edges[e].observables;
            }
            dets.sort_unstable();
            let ch = &dem.channels[c];
            let mismatch = obs != ch.observables;
            if dets != ch.detectors || mismatch != self.mismatched.contains(&c) {
                return Err(Error::Dem(format!(
                    "components of channel {c} do not reproduce {}",
                    ch.signature_text()
                )));
            }
        }
        Ok(())
    }

    /// Source channels written with `^`-separated components.
    pub fn to_text(&self, dem: &DetectorErrorModel) -> String {
        let mut out = format!(
            "# detectors {} observables {}\n",
            self.n_detectors, self.n_observables
        );
        for (c, ch) in dem.channels.iter().enumerate() {
            if self.components[c].is_empty() {
                writeln!(out, "# not decomposed\nerror({}) {}", ch.probability, ch.signature_text())
                    .unwrap();
                continue;
            }
            let parts: Vec<String> = self.components[c]
                .iter()
                .map(|&e| {
                    let edge = &self.edges[e];
                    Channel {
                        probability: edge.probability,
                        detectors: edge.detectors.clone(),
                        observables: edge.observables,
                    }
                    .signature_text()
                })
                .collect();
            writeln!(out, "error({}) {}", ch.probability, parts.join(" ^ ")).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(p: f64, dets: &[u32], obs: u64) -> Channel {
        Channel {
            probability: p,
            detectors: dets.to_vec(),
            observables: obs,
        }
    }

    fn dem(channels: Vec<Channel>) -> DetectorErrorModel {
        DetectorErrorModel {
            n_detectors: 6,
            n_observables: 1,
            detector_classes: Vec::new(),
            provenance: vec![Vec::new(); channels.len()],
            channels,
        }
    }

    #[test]
    fn graphlike_channels_map_to_themselves() {
        let m = dem(vec![ch(0.1, &[0, 1], 1), ch(0.2, &[2], 0)]);
        let dd = decompose_dem(&m);
        assert_eq!(dd.components, vec![vec![0], vec![1]]);
        assert!((dd.edges[0].probability - 0.1).abs() < 1e-15);
    }

    #[test]
    fn hyperedge_splits_into_existing_edges() {
        let m = dem(vec![
            ch(0.01, &[0, 1], 1),
            ch(0.02, &[2, 3], 0),
            ch(0.005, &[0, 1, 2, 3], 1),
        ]);
        let dd = decompose_dem(&m);
        dd.check_xor(&m).unwrap();
        assert!(dd.residue.is_empty() && dd.mismatched.is_empty());
        assert_eq!(dd.components[2], vec![1, 0]);
        // The edge carrying the composite gains its probability.
        assert!((dd.edges[1].probability - xor_prob(0.02, 0.005)).abs() < 1e-15);
    }

    #[test]
    fn greedy_peels_most_probable_pair_first() {
        // {0,1} is likelier than {0,2}, so the peel takes it and the
        // remaining {2,3} decides the observable.
        let m = dem(vec![
            ch(0.03, &[0, 1], 0),
            ch(0.01, &[0, 2], 1),
            ch(0.01, &[1, 3], 0),
            ch(0.01, &[2, 3], 0),
            ch(0.005, &[0, 1, 2, 3], 1),
        ]);
        let dd = decompose_dem(&m);
        assert_eq!(dd.components[4], vec![0, 3]);
        assert_eq!(dd.mismatched, vec![4]);
        dd.check_xor(&m).unwrap();
    }

    #[test]
    fn stuck_peel_falls_back_to_search() {
        // Greedy takes {1,2} and strands 0 and 3.
        let m = dem(vec![
            ch(0.05, &[1, 2], 0),
            ch(0.01, &[0, 1], 0),
            ch(0.01, &[2, 3], 0),
            ch(0.005, &[0, 1, 2, 3], 0),
        ]);
        let dd = decompose_dem(&m);
        assert_eq!(dd.components[3], vec![1, 2]);
        assert!(dd.mismatched.is_empty());
    }

    #[test]
    fn mixed_classes_are_split() {
        let mut m = dem(vec![ch(0.01, &[0], 0), ch(0.01, &[1], 1), ch(0.001, &[0, 1], 1)]);
        m.detector_classes = vec![0, 1, 0, 1, 0, 1];
        let dd = decompose_dem(&m);
        assert_eq!(dd.components[2], vec![0, 1]);
        assert_eq!(dd.edges.len(), 2);
    }

    #[test]
    fn unreachable_detector_is_residue() {
        let m = dem(vec![ch(0.01, &[0, 1], 0), ch(0.01, &[0, 1, 4], 0)]);
        let dd = decompose_dem(&m);
        assert_eq!(dd.residue, vec![1]);
        assert!(dd.check_residue(&m).is_err());
    }

}
