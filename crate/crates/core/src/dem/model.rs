//! Detector error models: independent channels with detector/observable signatures.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bits::BitVec;
use crate::circuit::Circuit;
use crate::dem::propagate::backward_sweep;
use crate::error::{Error, Result};
use crate::noise::FaultSet;

/// `p ⊕ q`: probability that exactly one of two independent events fires.
pub fn xor_prob(p: f64, q: f64) -> f64 {
    p * (1.0 - q) + q * (1.0 - p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    pub probability: f64,
    /// Sorted detector ids.
    pub detectors: Vec<u32>,
    /// Bit `k` set iff observable `k` flips.
    pub observables: u64,
}

impl Channel {
    pub fn is_graphlike(&self) -> bool {
        self.detectors.len() <= 2
    }

    pub fn signature_text(&self) -> String {
        let mut s = String::new();
        for d in &self.detectors {
            write!(s, " D{d}").unwrap();
        }
        for k in 0..64 {
            if self.observables >> k & 1 == 1 {
                write!(s, " L{k}").unwrap();
            }
        }
        s.trim_start().to_string()
    }
}

#[derive(Clone, Debug, Default)]
pub struct DetectorErrorModel {
    pub n_detectors: usize,
    pub n_observables: usize,
    pub channels: Vec<Channel>,
    /// Elementary fault ids merged into each channel.
    pub provenance: Vec<Vec<usize>>,
    /// Class of every detector; decomposed edges never join two classes.
    /// Empty means a single class.
    pub detector_classes: Vec<u8>,
}

/// Detector+observable signature of every fault, in fault order.
///
/// Uses one backward sweep; bits are detectors then observables (plus the
/// final data frame when `track_final_error`).
pub fn fault_signatures(
    circuit: &Circuit,
    faults: &FaultSet,
    track_final_error: bool,
) -> Result<Vec<BitVec>> {
    let mut by_position: Vec<Vec<usize>> = vec![Vec::new(); circuit.instructions.len() + 1];
    for (i, f) in faults.faults.iter().enumerate() {
        by_position[faults.locations[f.location].position].push(i);
    }
    let mut out = vec![BitVec::default(); faults.faults.len()];
    backward_sweep(circuit, track_final_error, |pos, s| {
        for &i in &by_position[pos] {
            out[i] = s.signature(&faults.faults[i].pauli);
        }
        Ok(())
    })?;
    Ok(out)
}

fn split_signature(sig: &BitVec, n_det: usize, n_obs: usize) -> (Vec<u32>, u64) {
    let mut dets = Vec::new();
    let mut obs = 0u64;
    for j in sig.iter_ones() {
        if j < n_det {
            dets.push(j as u32);
        } else if j < n_det + n_obs {
            obs |= 1 << (j - n_det);
        }
    }
    (dets, obs)
}

pub fn build_dem(circuit: &Circuit, faults: &FaultSet) -> Result<DetectorErrorModel> {
    let n_det = circuit.n_detectors();
    let n_obs = circuit.n_observables();
    if n_obs > 64 {
        return Err(Error::Dem(format!("at most 64 observables supported, got {n_obs}")));
    }
    let sigs = fault_signatures(circuit, faults, false)?;
    let mut index: HashMap<&BitVec, usize> = HashMap::new();
    let mut merged: Vec<(&BitVec, f64, Vec<usize>)> = Vec::new();
    for (i, sig) in sigs.iter().enumerate() {
        if sig.is_zero() {
            continue;
        }
        let p = faults.faults[i].independent_probability;
        match index.get(sig) {
            Some(&k) => {
                merged[k].1 = xor_prob(merged[k].1, p);
                merged[k].2.push(i);
            }
            None => {
                index.insert(sig, merged.len());
                merged.push((sig, p, vec![i]));
            }
        }
    }
    let mut rows: Vec<(Channel, Vec<usize>)> = merged
        .into_par_iter()
        .map(|(sig, p, prov)| {
            let (detectors, observables) = split_signature(sig, n_det, n_obs);
            (
                Channel {
                    probability: p,
                    detectors,
                    observables,
                },
                prov,
            )
        })
        .collect();
    rows.sort_by(|a, b| {
        (&a.0.detectors, a.0.observables).cmp(&(&b.0.detectors, b.0.observables))
    });
    let (channels, provenance) = rows.into_iter().unzip();
    Ok(DetectorErrorModel {
        n_detectors: n_det,
        n_observables: n_obs,
        channels,
        provenance,
        detector_classes: circuit.detector_classes(),
    })
}

impl DetectorErrorModel {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# detectors {} observables {}\n",
            self.n_detectors, self.n_observables
        );
        if !self.detector_classes.is_empty() {
            let classes: String = self.detector_classes.iter().map(|c| char::from(b'0' + c)).collect();
            writeln!(out, "# classes {classes}").unwrap();
        }
        for c in &self.channels {
            writeln!(out, "error({}) {}", c.probability, c.signature_text()).unwrap();
        }
        out
    }

    /// Parses `error(p) D.. L..` lines; a `^` separator is accepted and the
    /// components are XOR-ed back into one channel.
    pub fn from_text(text: &str) -> Result<DetectorErrorModel> {
        let mut dem = DetectorErrorModel::default();
        let mut declared: Option<(usize, usize)> = None;
        let mut max_det = 0usize;
        let mut max_obs = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            if let Some(rest) = line.strip_prefix('#') {
                let words: Vec<&str> = rest.split_whitespace().collect();
                if let ["detectors", nd, "observables", no] = words.as_slice() {
                    let nd = nd.parse().map_err(|_| err("bad detector count".into()))?;
                    let no = no.parse().map_err(|_| err("bad observable count".into()))?;
                    declared = Some((nd, no));
                }
                if let ["classes", list] = words.as_slice() {
                    dem.detector_classes = list
                        .bytes()
                        .map(|b| match b {
                            b'0'..=b'9' => Ok(b - b'0'),
                            _ => Err(err(format!("bad detector class {:?}", b as char))),
                        })
                        .collect::<Result<_>>()?;
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let body = line
                .strip_prefix("error(")
                .ok_or_else(|| err(format!("expected error(p), got {line:?}")))?;
            let close = body.find(')').ok_or_else(|| err("unclosed error(".into()))?;
            let p: f64 = body[..close]
                .parse()
                .map_err(|_| err(format!("bad probability {:?}", &body[..close])))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(err(format!("probability {p} outside [0, 1]")));
            }
            let mut det_list: Vec<u32> = Vec::new();
            let mut obs = 0u64;
            for tok in body[close + 1..].split_whitespace() {
                if tok == "^" {
                    continue;
                }
                if let Some(d) = tok.strip_prefix('D') {
                    let d: u32 = d.parse().map_err(|_| err(format!("bad detector {tok:?}")))?;
                    det_list.push(d);
                } else if let Some(l) = tok.strip_prefix('L') {
                    let l: usize = l.parse().map_err(|_| err(format!("bad observable {tok:?}")))?;
                    if l >= 64 {
                        return Err(err("observable index above 63".into()));
                    }
                    obs ^= 1 << l;
                    max_obs = max_obs.max(l + 1);
                } else {
                    return Err(err(format!("unexpected token {tok:?}")));
                }
            }
            let top = det_list.iter().copied().max().map_or(0, |d| d as usize + 1);
            max_det = max_det.max(top);
            let dets = BitVec::from_indices(top, det_list.iter().map(|&d| d as usize));
            let detectors: Vec<u32> = dets.iter_ones().map(|d| d as u32).collect();
            if detectors.is_empty() && obs == 0 {
                continue;
            }
            dem.channels.push(Channel {
                probability: p,
                detectors,
                observables: obs,
            });
            dem.provenance.push(Vec::new());
        }
        let (nd, no) = declared.unwrap_or((max_det, max_obs));
        if nd < max_det || no < max_obs {
            return Err(Error::Parse {
                line: 0,
                message: "channel references exceed the declared counts".into(),
            });
        }
        if !dem.detector_classes.is_empty() && dem.detector_classes.len() != nd {
            return Err(Error::Parse {
                line: 0,
                message: "class list length differs from the detector count".into(),
            });
        }
        dem.n_detectors = nd;
        dem.n_observables = no;
        Ok(dem)
    }

    pub fn n_hyperedges(&self) -> usize {
        self.channels.iter().filter(|c| !c.is_graphlike()).count()
    }
}
