//! Memory experiments: sample the full model, decode with the decomposed one.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::stats::{combine_xz, combine_xz_stderr, rate, standard_error};
use crate::circuit::{build_memory_circuit, Ordering, Style};
use crate::decoder::{BpConfig, Decoder, Method, PushRule};
use crate::dem::sample::{n_blocks, sample_block};
use crate::dem::{build_dem, decompose_dem, DecomposedDem, DetectorErrorModel};
use crate::error::{Error, Result};
use crate::layout::{build_layout, CodeKind, PauliType};
use crate::noise::{enumerate_faults, NoiseKind, NoiseModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemoryConfig {
    pub kind: CodeKind,
    pub d: usize,
    pub basis: PauliType,
    /// Defaults to `d`.
    pub rounds: Option<usize>,
    pub style: Style,
    pub ordering: String,
    pub noise: NoiseKind,
    pub p: f64,
    pub lambda_czz: f64,
    pub method: Method,
    /// Defaults to `d`.
    pub bp_iterations: Option<usize>,
    pub push: PushRule,
    pub shots: usize,
    pub seed: u64,
    pub allow_non_ft: bool,
}

impl MemoryConfig {
    pub fn new(kind: CodeKind, d: usize, style: Style, ordering: &str, noise: NoiseKind, p: f64) -> Self {
        Self {
            kind,
            d,
            basis: PauliType::Z,
            rounds: None,
            style,
            ordering: ordering.to_string(),
            noise,
            p,
            lambda_czz: 1.0,
            method: Method::Pm,
            bp_iterations: None,
            push: PushRule::Xor,
            shots: 10_000,
            seed: 0,
            allow_non_ft: false,
        }
    }

    pub fn rounds(&self) -> usize {
        self.rounds.unwrap_or(self.d)
    }

    pub fn bp_config(&self) -> BpConfig {
        let mut bp = BpConfig::new(self.bp_iterations.unwrap_or(self.d));
        bp.push = self.push;
        bp
    }

    pub fn noise_model(&self) -> NoiseModel {
        NoiseModel::new(self.noise, self.p).with_lambda(self.lambda_czz)
    }

    pub fn with_basis(&self, basis: PauliType) -> Self {
        Self {
            basis,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemoryResult {
    pub kind: CodeKind,
    pub d: usize,
    pub style: Style,
    pub ordering: String,
    pub noise: NoiseKind,
    pub p: f64,
    pub lambda: f64,
    pub basis: PauliType,
    pub method: Method,
    pub rounds: usize,
    pub shots: usize,
    pub failures: usize,
    pub p_l: f64,
    pub stderr: f64,
    pub seed: u64,
}

pub const CSV_HEADER: &str = "kind,d,style,ordering,noise,p,lambda,basis,shots,failures,pL,stderr,seed";

impl MemoryResult {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.d,
            self.style,
            self.ordering,
            self.noise,
            self.p,
            self.lambda,
            self.basis,
            self.shots,
            self.failures,
            self.p_l,
            self.stderr,
            self.seed
        )
    }
}

/// Circuit, models and decoder of one memory configuration.
pub struct Prepared {
    pub config: MemoryConfig,
    pub dem: DetectorErrorModel,
    pub ddem: DecomposedDem,
    pub decoder: Decoder,
    pub build_seconds: f64,
}

impl Prepared {
    pub fn new(config: &MemoryConfig) -> Result<Self> {
        let start = Instant::now();
        let layout = build_layout(config.kind, config.d)?;
        let ordering = Ordering::parse(config.style, &config.ordering)?;
        let circuit = build_memory_circuit(&layout, config.basis, config.rounds(), &ordering, config.allow_non_ft)?;
        let faults = enumerate_faults(&circuit, &config.noise_model())?;
        let dem = build_dem(&circuit, &faults)?;
        let ddem = decompose_dem(&dem);
        ddem.check_residue(&dem)?;
        let decoder = Decoder::new(config.method, &dem, &ddem, config.bp_config())?;
        Ok(Self {
            config: config.clone(),
            dem,
            ddem,
            decoder,
            build_seconds: start.elapsed().as_secs_f64(),
        })
    }

    /// Decoding failures over `shots` shots, streamed block by block on the
    /// current thread pool. Independent of the number of threads.
    pub fn count_failures(&self, shots: usize, seed: u64) -> Result<usize> {
        (0..n_blocks(shots))
            .into_par_iter()
            .map(|b| {
                let batch = sample_block(&self.dem, shots, seed, b);
                let mut failures = 0;
                for s in 0..batch.shots {
                    let flagged = batch.flagged(s);
                    let predicted = if flagged.is_empty() {
                        0
                    } else {
                        self.decoder.decode(&flagged)?.observables
                    };
                    if predicted != batch.observable_mask(s) {
                        failures += 1;
                    }
                }
                Ok(failures)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }

    pub fn run(&self) -> Result<MemoryResult> {
        let c = &self.config;
        let failures = self.count_failures(c.shots, c.seed)?;
        Ok(MemoryResult {
            kind: c.kind,
            d: c.d,
            style: c.style,
            ordering: c.ordering.clone(),
            noise: c.noise,
            p: c.p,
            lambda: c.lambda_czz,
            basis: c.basis,
            method: c.method,
            rounds: c.rounds(),
            shots: c.shots,
            failures,
            p_l: rate(failures, c.shots),
            stderr: standard_error(failures, c.shots),
            seed: c.seed,
        })
    }
}

pub fn run_memory(config: &MemoryConfig) -> Result<MemoryResult> {
    if config.shots == 0 {
        return Err(Error::Analysis("a memory run needs at least one shot".into()));
    }
    Prepared::new(config)?.run()
}

/// Both bases of one configuration and their combined rate.
#[derive(Clone, Debug, Serialize)]
pub struct CombinedResult {
    pub x: MemoryResult,
    pub z: MemoryResult,
    pub p_l: f64,
    pub stderr: f64,
}

pub fn run_memory_xz(config: &MemoryConfig) -> Result<CombinedResult> {
    let x = run_memory(&config.with_basis(PauliType::X))?;
    let z = run_memory(&config.with_basis(PauliType::Z))?;
    Ok(CombinedResult {
        p_l: combine_xz(x.p_l, z.p_l),
        stderr: combine_xz_stderr(x.p_l, x.stderr, z.p_l, z.stderr),
        x,
        z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise_never_fails() {
        for (kind, style, ord) in [(CodeKind::Rotated, Style::Cz, "default"), (CodeKind::Unrotated, Style::Czz, "24")] {
            let mut c = MemoryConfig::new(kind, 3, style, ord, NoiseKind::SI, 0.0);
            c.shots = 600;
            let r = run_memory_xz(&c).unwrap();
            assert_eq!(r.x.failures + r.z.failures, 0);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let mut c = MemoryConfig::new(CodeKind::Unrotated, 3, Style::Czz, "24", NoiseKind::NI, 8e-3);
        c.shots = 700;
        c.seed = 11;
        let a = run_memory(&c).unwrap();
        assert_eq!(a, run_memory(&c).unwrap());
        assert!(a.failures > 0);
        assert_eq!(a.csv_row().split(',').count(), CSV_HEADER.split(',').count());
    }
}
