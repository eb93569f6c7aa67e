//! Matching and belief-matching decoders over decomposed detector error models.

pub mod blossom;
pub mod bp;
pub mod graph;
pub mod matching;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use bp::{bp_posteriors, BpOutcome, TannerGraph};
pub use graph::MatchingGraph;
pub use matching::{brute_force, distances_with_weights, solve, Distances, MatchingDecoder, Prediction};

use crate::dem::{DecomposedDem, DetectorErrorModel};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Plain minimum-weight perfect matching.
    Pm,
    /// Belief propagation on the full model, then matching.
    Bm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Pm => "pm",
            Method::Bm => "bm",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pm" => Ok(Method::Pm),
            "bm" => Ok(Method::Bm),
            _ => Err(Error::Decoder(format!("unknown decoding method {s:?}"))),
        }
    }
}

/// How channel posteriors are combined onto a decomposition edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PushRule {
    /// Probability that an odd number of the mapped channels fire.
    #[default]
    Xor,
    /// Sum of the mapped posteriors, clipped to 1.
    Sum,
}

impl fmt::Display for PushRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PushRule::Xor => "xor",
            PushRule::Sum => "sum",
        })
    }
}

impl FromStr for PushRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xor" => Ok(PushRule::Xor),
            "sum" => Ok(PushRule::Sum),
            _ => Err(Error::Decoder(format!("unknown push rule {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpConfig {
    pub iterations: usize,
    pub push: PushRule,
    /// Return BP's own hard decision when it reproduces the syndrome.
    pub stop_on_solution: bool,
}

impl BpConfig {
    pub fn new(iterations: usize) -> Self {
        Self {
            iterations,
            push: PushRule::Xor,
            stop_on_solution: true,
        }
    }
}

/// Matching on edge weights recomputed from per-shot BP posteriors.
pub struct BeliefMatchingDecoder {
    pub matching: MatchingDecoder,
    pub tanner: TannerGraph,
    pub ddem: DecomposedDem,
    pub channel_observables: Vec<u64>,
    pub config: BpConfig,
}

impl BeliefMatchingDecoder {
    pub fn decode(&self, flagged: &[u32]) -> Result<Prediction> {
        if flagged.is_empty() {
            return Ok(Prediction::default());
        }
        let out = self.tanner.run(flagged, self.config.iterations, self.config.stop_on_solution);
        if let Some(hard) = out.solution {
            return Ok(Prediction {
                observables: hard.iter().fold(0, |acc, &c| acc ^ self.channel_observables[c]),
                pairs: Vec::new(),
                weight: 0,
            });
        }
        self.decode_with_posteriors(flagged, &out.posteriors)
    }

    /// Matching after pushing channel probabilities onto the decomposition
    /// edges. Edges likelier than not are taken up front and matched with
    /// the opposite sign.
    pub fn decode_with_posteriors(&self, flagged: &[u32], posteriors: &[f64]) -> Result<Prediction> {
        let pushed = match self.config.push {
            PushRule::Xor => self.ddem.push_probabilities(posteriors),
            PushRule::Sum => self.ddem.sum_probabilities(posteriors),
        };
        let graph = &self.matching.graph;
        let (mut weights, obs) = graph.reweigh(&pushed, |s| self.ddem.edges[s].observables);
        let mut syndrome = vec![false; graph.n_detectors];
        for &d in flagged {
            syndrome[d as usize] = true;
        }
        let (mut base_obs, mut base_weight) = (0u64, 0i64);
        for (i, w) in weights.iter_mut().enumerate() {
            if *w < 0 {
                let e = &graph.edges[i];
                syndrome[e.a as usize] ^= true;
                if let Some(b) = e.b {
                    syndrome[b as usize] ^= true;
                }
                base_obs ^= obs[i];
                base_weight += *w;
                *w = -*w;
            }
        }
        let flagged: Vec<u32> = (0..graph.n_detectors as u32).filter(|&d| syndrome[d as usize]).collect();
        let mut p = solve(&flagged, &distances_with_weights(graph, &flagged, &weights, &obs))?;
        p.observables ^= base_obs;
        p.weight += base_weight;
        Ok(p)
    }
}

pub enum Decoder {
    Matching(MatchingDecoder),
    BeliefMatching(BeliefMatchingDecoder),
}

impl Decoder {
    /// `bp` only matters for belief-matching.
    pub fn new(
        method: Method,
        dem: &DetectorErrorModel,
        ddem: &DecomposedDem,
        bp: BpConfig,
    ) -> Result<Self> {
        if bp.iterations == 0 {
            return Err(Error::Decoder("BP needs at least one iteration".into()));
        }
        let matching = MatchingDecoder::new(MatchingGraph::build(ddem)?);
        Ok(match method {
            Method::Pm => Decoder::Matching(matching),
            Method::Bm => Decoder::BeliefMatching(BeliefMatchingDecoder {
                matching,
                tanner: TannerGraph::new(dem),
                ddem: ddem.clone(),
                channel_observables: dem.channels.iter().map(|c| c.observables).collect(),
                config: bp,
            }),
        })
    }

    pub fn decode(&self, flagged: &[u32]) -> Result<Prediction> {
        match self {
            Decoder::Matching(m) => m.decode(flagged),
            Decoder::BeliefMatching(b) => b.decode(flagged),
        }
    }

    pub fn method(&self) -> Method {
        match self {
            Decoder::Matching(_) => Method::Pm,
            Decoder::BeliefMatching(_) => Method::Bm,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_memory_circuit, Ordering, Style};
    use crate::dem::{build_dem, decompose_dem};
    use crate::layout::{build_layout, CodeKind, PauliType};
    use crate::noise::{enumerate_faults, NoiseKind, NoiseModel};

    fn setup(kind: CodeKind, style: Style, ord: &str) -> (DetectorErrorModel, DecomposedDem) {
        let l = build_layout(kind, 3).unwrap();
        let o = Ordering::parse(style, ord).unwrap();
        let c = build_memory_circuit(&l, PauliType::Z, 3, &o, false).unwrap();
        let f = enumerate_faults(&c, &NoiseModel::new(NoiseKind::NI, 1e-3)).unwrap();
        let dem = build_dem(&c, &f).unwrap();
        let ddem = decompose_dem(&dem);
        (dem, ddem)
    }

    #[test]
    fn prior_posteriors_reproduce_plain_matching() {
        let (dem, ddem) = setup(CodeKind::Unrotated, Style::Czz, "24");
        let Decoder::BeliefMatching(bm) = Decoder::new(Method::Bm, &dem, &ddem, BpConfig::new(3)).unwrap() else {
            unreachable!()
        };
        let priors: Vec<f64> = dem.channels.iter().map(|c| c.probability).collect();
        for ch in dem.channels.iter().take(200) {
            let a = bm.matching.decode(&ch.detectors).unwrap();
            let b = bm.decode_with_posteriors(&ch.detectors, &priors).unwrap();
            assert_eq!(a.observables, b.observables);
            assert_eq!(a.weight, b.weight);
        }
    }

    #[test]
    fn cz_matching_corrects_single_channels() {
        let (dem, ddem) = setup(CodeKind::Rotated, Style::Cz, "default");
        let d = Decoder::new(Method::Pm, &dem, &ddem, BpConfig::new(3)).unwrap();
        for ch in &dem.channels {
            let p = d.decode(&ch.detectors).unwrap();
            assert_eq!(p.observables, ch.observables, "{}", ch.signature_text());
        }
    }
}
