//! Independent-channel sampling of detector and observable flips.
//!
//! Shots are grouped in blocks of [`BLOCK`]; block `b` draws from a ChaCha8
//! stream keyed by `(seed, b)`, so any shot range can be regenerated alone
//! and results do not depend on how blocks are spread over threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dem::model::DetectorErrorModel;
use crate::error::{Error, Result};

pub const BLOCK: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotBatch {
    pub shots: usize,
    pub n_detectors: usize,
    pub n_observables: usize,
    det_stride: usize,
    /// Row-major, `det_stride` words per shot.
    detectors: Vec<u64>,
    /// One word per shot.
    observables: Vec<u64>,
}

impl ShotBatch {
    pub fn zeros(shots: usize, n_detectors: usize, n_observables: usize) -> Self {
        let det_stride = n_detectors.div_ceil(64);
        Self {
            shots,
            n_detectors,
            n_observables,
            det_stride,
            detectors: vec![0; shots * det_stride],
            observables: vec![0; shots],
        }
    }

    pub fn detector_row(&self, shot: usize) -> &[u64] {
        &self.detectors[shot * self.det_stride..(shot + 1) * self.det_stride]
    }

    pub fn observable_mask(&self, shot: usize) -> u64 {
        self.observables[shot]
    }

    /// Flagged detector ids of one shot, ascending.
    pub fn flagged(&self, shot: usize) -> Vec<u32> {
        let mut out = Vec::new();
        for (w, &word) in self.detector_row(shot).iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                out.push((w * 64) as u32 + bits.trailing_zeros());
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn toggle(&mut self, shot: usize, detectors: &[u32], observables: u64) {
        let row = &mut self.detectors[shot * self.det_stride..(shot + 1) * self.det_stride];
        for &d in detectors {
            row[d as usize / 64] ^= 1 << (d % 64);
        }
        self.observables[shot] ^= observables;
    }

    fn append(&mut self, other: ShotBatch) {
        self.shots += other.shots;
        self.detectors.extend(other.detectors);
        self.observables.extend(other.observables);
    }

    /// Little-endian bit-packed rows: `ceil(n/8)` bytes per shot, bit `i` of a
    /// row in byte `i / 8` at position `i % 8`.
    pub fn to_b8(&self) -> (Vec<u8>, Vec<u8>) {
        let pack = |n: usize, get: &dyn Fn(usize, usize) -> bool| {
            let bytes = n.div_ceil(8);
            let mut out = vec![0u8; self.shots * bytes];
            for s in 0..self.shots {
                for i in 0..n {
                    if get(s, i) {
                        out[s * bytes + i / 8] |= 1 << (i % 8);
                    }
                }
            }
            out
        };
        let dets = pack(self.n_detectors, &|s, i| {
            self.detector_row(s)[i / 64] >> (i % 64) & 1 == 1
        });
        let obs = pack(self.n_observables, &|s, i| self.observables[s] >> i & 1 == 1);
        (dets, obs)
    }

    pub fn from_b8(
        dets: &[u8],
        obs: &[u8],
        n_detectors: usize,
        n_observables: usize,
    ) -> Result<ShotBatch> {
        let db = n_detectors.div_ceil(8);
        let ob = n_observables.div_ceil(8);
        let shots = if db > 0 { dets.len() / db } else { obs.len() / ob.max(1) };
        if dets.len() != shots * db || obs.len() != shots * ob {
            return Err(Error::Dem(format!(
                "batch sizes ({} detector bytes, {} observable bytes) do not match {n_detectors} detectors",
                dets.len(),
                obs.len()
            )));
        }
        let mut batch = ShotBatch::zeros(shots, n_detectors, n_observables);
        for s in 0..shots {
            for i in 0..n_detectors {
                if dets[s * db + i / 8] >> (i % 8) & 1 == 1 {
                    batch.detectors[s * batch.det_stride + i / 64] |= 1 << (i % 64);
                }
            }
            for i in 0..n_observables {
                if obs[s * ob + i / 8] >> (i % 8) & 1 == 1 {
                    batch.observables[s] |= 1 << i;
                }
            }
        }
        Ok(batch)
    }
}

/// Samples shots `block * BLOCK .. min(shots, (block + 1) * BLOCK)`.
pub fn sample_block(dem: &DetectorErrorModel, shots: usize, seed: u64, block: usize) -> ShotBatch {
    let start = block * BLOCK;
    let n = BLOCK.min(shots.saturating_sub(start));
    let mut batch = ShotBatch::zeros(n, dem.n_detectors, dem.n_observables);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    for ch in &dem.channels {
        let p = ch.probability;
        if p <= 0.0 {
            continue;
        }
        if p >= 1.0 {
            for s in 0..n {
                batch.toggle(s, &ch.detectors, ch.observables);
            }
            continue;
        }
        // Geometric gaps between firing shots.
        let log_q = (-p).ln_1p();
        let mut s = 0usize;
        loop {
            let u: f64 = rng.gen();
            let gap = ((1.0 - u).ln() / log_q).floor();
            if gap >= (n - s) as f64 {
                break;
            }
            s += gap as usize;
            batch.toggle(s, &ch.detectors, ch.observables);
            s += 1;
            if s >= n {
                break;
            }
        }
    }
    batch
}

pub fn n_blocks(shots: usize) -> usize {
    shots.div_ceil(BLOCK)
}

/// Samples `shots` shots; identical output for any thread count.
pub fn sample(dem: &DetectorErrorModel, shots: usize, seed: u64) -> ShotBatch {
    let blocks: Vec<ShotBatch> = (0..n_blocks(shots))
        .into_par_iter()
        .map(|b| sample_block(dem, shots, seed, b))
        .collect();
    let mut out = ShotBatch::zeros(0, dem.n_detectors, dem.n_observables);
    for b in blocks {
        out.append(b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dem::model::Channel;

    fn dem(p: &[f64]) -> DetectorErrorModel {
        DetectorErrorModel {
            n_detectors: 70,
            n_observables: 1,
            channels: p
                .iter()
                .enumerate()
                .map(|(i, &p)| Channel {
                    probability: p,
                    detectors: vec![i as u32, 69],
                    observables: (i % 2) as u64,
                })
                .collect(),
            detector_classes: Vec::new(),
            provenance: vec![Vec::new(); p.len()],
        }
    }

    #[test]
    fn zero_probability_gives_zero_batches() {
        let b = sample(&dem(&[0.0, 0.0]), 1000, 3);
        assert!((0..b.shots).all(|s| b.flagged(s).is_empty() && b.observable_mask(s) == 0));
    }

    #[test]
    fn certain_channel_always_fires() {
        let b = sample(&dem(&[0.0, 1.0]), 600, 3);
        assert_eq!(b.shots, 600);
        assert!((0..b.shots).all(|s| b.flagged(s) == vec![1, 69] && b.observable_mask(s) == 1));
    }

    #[test]
    fn frequency_matches_probability() {
        let m = dem(&[0.01, 0.2]);
        let shots = 200_000;
        let b = sample(&m, shots, 11);
        for (i, ch) in m.channels.iter().enumerate() {
            let hits = (0..shots).filter(|&s| b.detector_row(s)[0] >> i & 1 == 1).count() as f64;
            let p = ch.probability;
            let sigma = (shots as f64 * p * (1.0 - p)).sqrt();
            assert!((hits - shots as f64 * p).abs() < 4.0 * sigma, "{i}: {hits}");
        }
    }

    #[test]
    fn b8_round_trip_and_block_independence() {
        let m = dem(&[0.3, 0.1, 0.05]);
        let b = sample(&m, 700, 5);
        let (d, o) = b.to_b8();
        assert_eq!(ShotBatch::from_b8(&d, &o, 70, 1).unwrap(), b);
        let third = sample_block(&m, 700, 5, 2);
        assert_eq!(third.detector_row(0), b.detector_row(512));
    }
}
