//! Circuit noise models and elementary fault enumeration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Op, OpKind};
use crate::error::{Error, Result};
use crate::pauli::{nontrivial_paulis, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NoiseKind {
    /// Superconducting-inspired: idle noise at `p/10`.
    SI,
    /// No idle noise.
    NI,
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseKind::SI => "SI",
            NoiseKind::NI => "NI",
        })
    }
}

impl FromStr for NoiseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SI" => Ok(NoiseKind::SI),
            "NI" => Ok(NoiseKind::NI),
            _ => Err(Error::Noise(format!("unknown noise model {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub p: f64,
    pub lambda_czz: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LocationKind {
    Gate(OpKind),
    InitZ,
    MeasZ,
    Idle,
    IdleMI,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, p: f64) -> Self {
        Self {
            kind,
            p,
            lambda_czz: 1.0,
        }
    }

    pub fn with_lambda(mut self, lambda_czz: f64) -> Self {
        self.lambda_czz = lambda_czz;
        self
    }

    /// Channel strength at a location of the given kind.
    pub fn strength(&self, kind: LocationKind) -> f64 {
        let p = self.p;
        match kind {
            LocationKind::Gate(OpKind::Cz) => p,
            LocationKind::Gate(OpKind::Czz) => self.lambda_czz * p,
            LocationKind::Gate(_) => p / 10.0,
            LocationKind::InitZ => 2.0 * p,
            LocationKind::MeasZ => 5.0 * p,
            LocationKind::Idle | LocationKind::IdleMI => match self.kind {
                NoiseKind::SI => p / 10.0,
                NoiseKind::NI => 0.0,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p >= 0.0) {
            return Err(Error::Noise(format!("p must be a nonnegative number, got {}", self.p)));
        }
        if !(self.lambda_czz.is_finite() && self.lambda_czz >= 0.0) {
            return Err(Error::Noise(format!("lambda must be nonnegative, got {}", self.lambda_czz)));
        }
        let checks = [
            (LocationKind::Gate(OpKind::H), 1),
            (LocationKind::Gate(OpKind::Cz), 2),
            (LocationKind::Gate(OpKind::Czz), 3),
            (LocationKind::Idle, 1),
        ];
        for (kind, n) in checks {
            let s = self.strength(kind);
            if s > depolarizing_max(n) {
                return Err(Error::Noise(format!(
                    "{kind:?} strength {s} exceeds the {n}-qubit depolarizing maximum"
                )));
            }
        }
        for kind in [LocationKind::InitZ, LocationKind::MeasZ] {
            let s = self.strength(kind);
            if s > 0.5 {
                return Err(Error::Noise(format!("{kind:?} flip probability {s} exceeds 1/2")));
            }
        }
        Ok(())
    }
}

fn depolarizing_max(n: usize) -> f64 {
    let m = 4f64.powi(n as i32);
    (m - 1.0) / m
}

/// Per-Pauli probability for `4^n - 1` independent correlated errors that
/// together realise an `n`-qubit depolarizing channel of total strength `p`.
pub fn rescale_depolarizing(p: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Noise("depolarizing channel needs at least one qubit".into()));
    }
    let max = depolarizing_max(n);
    if !(0.0..=max + 1e-15).contains(&p) {
        return Err(Error::Noise(format!(
            "strength {p} outside [0, {max}] for {n}-qubit depolarizing"
        )));
    }
    let m = 4f64.powi(n as i32);
    let base = (1.0 - m / (m - 1.0) * p).max(0.0);
    let exponent = 2f64.powi(1 - 2 * n as i32);
    Ok(0.5 - 0.5 * base.powf(exponent))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Location {
    pub kind: LocationKind,
    /// The instruction this noise is attached to; idles have none.
    pub instruction: Option<usize>,
    pub tick: usize,
    pub qubits: Vec<usize>,
    /// Faults act just before the instruction at this index (or at the end of
    /// the circuit when it equals the instruction count).
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ElementaryFault {
    pub location: usize,
    pub pauli: PauliString,
    /// Probability of this realisation in the uniform channel: `p / (4^n - 1)`
    /// for depolarizing locations, the flip probability otherwise.
    pub probability: f64,
    /// Probability of an independent event such that all events of the
    /// location reproduce the channel exactly.
    pub independent_probability: f64,
}

#[derive(Clone, Debug, Default)]
pub struct FaultSet {
    pub locations: Vec<Location>,
    pub faults: Vec<ElementaryFault>,
}

/// Every noisy location of the circuit, idles included.
pub fn enumerate_locations(circuit: &Circuit) -> Vec<Location> {
    let mut out = Vec::new();
    let mut busy = vec![usize::MAX; circuit.n_qubits];
    for t in 0..circuit.n_ticks() {
        let start = circuit.tick_start[t];
        let mut has_mi = false;
        for (k, ins) in circuit.tick(t).iter().enumerate() {
            let i = start + k;
            for q in ins.op.qubits() {
                busy[q] = t;
            }
            let (kind, position) = match ins.op {
                Op::InitZ(_) => {
                    has_mi = true;
                    (LocationKind::InitZ, i + 1)
                }
                Op::MeasZ(_) => {
                    has_mi = true;
                    (LocationKind::MeasZ, i)
                }
                op => (LocationKind::Gate(op.kind()), i + 1),
            };
            out.push(Location {
                kind,
                instruction: Some(i),
                tick: t,
                qubits: ins.op.qubits(),
                position,
            });
        }
        let idle_kind = if has_mi {
            LocationKind::IdleMI
        } else {
            LocationKind::Idle
        };
        for (q, &b) in busy.iter().enumerate() {
            if b != t {
                out.push(Location {
                    kind: idle_kind,
                    instruction: None,
                    tick: t,
                    qubits: vec![q],
                    position: circuit.tick_start[t + 1],
                });
            }
        }
    }
    out
}

/// Elementary faults of every location with nonzero strength.
pub fn enumerate_faults(circuit: &Circuit, noise: &NoiseModel) -> Result<FaultSet> {
    noise.validate()?;
    let mut set = FaultSet::default();
    for loc in enumerate_locations(circuit) {
        let s = noise.strength(loc.kind);
        if s <= 0.0 {
            continue;
        }
        let id = set.locations.len();
        match loc.kind {
            LocationKind::InitZ | LocationKind::MeasZ => {
                set.faults.push(ElementaryFault {
                    location: id,
                    pauli: PauliString::from_supports(loc.qubits.iter().copied(), []),
                    probability: s,
                    independent_probability: s,
                });
            }
            _ => {
                let n = loc.qubits.len();
                let each = s / (4f64.powi(n as i32) - 1.0);
                let ind = rescale_depolarizing(s, n)?;
                for pauli in nontrivial_paulis(&loc.qubits) {
                    set.faults.push(ElementaryFault {
                        location: id,
                        pauli,
                        probability: each,
                        independent_probability: ind,
                    });
                }
            }
        }
        set.locations.push(loc);
    }
    Ok(set)
}

/// Every location of the circuit with every nontrivial Pauli, ignoring
/// probabilities: the structural fault set used for fault-tolerance checks.
pub fn structural_faults(circuit: &Circuit) -> FaultSet {
    let noise = NoiseModel::new(NoiseKind::NI, 1e-3);
    enumerate_faults(circuit, &noise).expect("fixed small rate is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_memory_circuit, Ordering, Style};
    use crate::layout::{build_layout, CodeKind, PauliType};

    #[test]
    fn rescale_examples() {
        assert_eq!(rescale_depolarizing(0.0, 2).unwrap(), 0.0);
        assert!((rescale_depolarizing(0.75, 1).unwrap() - 0.5).abs() < 1e-12);
        let v = rescale_depolarizing(0.1, 2).unwrap();
        assert!((v - 0.0070).abs() < 5e-5, "{v}");
        assert!(rescale_depolarizing(0.8, 1).is_err());
    }

    #[test]
    fn rescale_matches_single_qubit_closed_form() {
        // Three independent X, Y, Z events: total X-type flip probability is
        // P(odd count among the two events carrying X).
        let q = rescale_depolarizing(0.3, 1).unwrap();
        let marginal = 2.0 * q * (1.0 - q);
        assert!((marginal - 0.2).abs() < 1e-12);
    }

    fn circuit(style: Style, ord: &str) -> Circuit {
        let l = build_layout(CodeKind::Unrotated, 3).unwrap();
        build_memory_circuit(&l, PauliType::Z, 3, &Ordering::parse(style, ord).unwrap(), false).unwrap()
    }

    #[test]
    fn fault_counts_per_location() {
        let c = circuit(Style::Czz, "24");
        let noise = NoiseModel::new(NoiseKind::NI, 1e-3);
        let set = enumerate_faults(&c, &noise).unwrap();
        for (id, loc) in set.locations.iter().enumerate() {
            let fs: Vec<_> = set.faults.iter().filter(|f| f.location == id).collect();
            let total: f64 = fs.iter().map(|f| f.probability).sum();
            match loc.kind {
                LocationKind::Gate(OpKind::Czz) => {
                    assert_eq!(fs.len(), 63);
                    assert!((fs[0].probability - 1e-3 / 63.0).abs() < 1e-15);
                }
                LocationKind::MeasZ => {
                    assert_eq!(fs.len(), 1);
                    assert!((fs[0].probability - 5e-3).abs() < 1e-15);
                    assert!(fs[0].pauli.z_support().is_empty());
                }
                LocationKind::Idle | LocationKind::IdleMI => panic!("NI emits no idles"),
                _ => {}
            }
            assert!((total - noise.strength(loc.kind)).abs() < 1e-12);
        }
    }

    #[test]
    fn idles_fill_empty_slots() {
        let c = circuit(Style::Cz, "default");
        let locs = enumerate_locations(&c);
        // Every qubit is accounted for in every tick exactly once.
        let mut per_tick = vec![0usize; c.n_ticks()];
        for l in &locs {
            per_tick[l.tick] += l.qubits.len();
        }
        assert!(per_tick.iter().all(|&n| n == c.n_qubits));
        let si = enumerate_faults(&c, &NoiseModel::new(NoiseKind::SI, 1e-3)).unwrap();
        assert!(si.locations.iter().any(|l| l.kind == LocationKind::IdleMI));
    }
}
