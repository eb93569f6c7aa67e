//! Stabilizer-readout circuits built from H, CZ, CZZ, Z-basis reset and measurement.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::{CodeKind, Direction, Layout, PauliType, StabilizerDef};
use crate::pauli::Gate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    H(usize),
    Cz(usize, usize),
    /// Control first, then the two targets in ascending order.
    Czz(usize, usize, usize),
    InitZ(usize),
    MeasZ(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OpKind {
    H,
    Cz,
    Czz,
    InitZ,
    MeasZ,
}

impl Op {
    pub fn kind(&self) -> OpKind {
        match self {
            Op::H(_) => OpKind::H,
            Op::Cz(..) => OpKind::Cz,
            Op::Czz(..) => OpKind::Czz,
            Op::InitZ(_) => OpKind::InitZ,
            Op::MeasZ(_) => OpKind::MeasZ,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Op::H(q) | Op::InitZ(q) | Op::MeasZ(q) => vec![q],
            Op::Cz(a, b) => vec![a, b],
            Op::Czz(a, b, c) => vec![a, b, c],
        }
    }

    pub fn gate(&self) -> Option<Gate> {
        match *self {
            Op::H(q) => Some(Gate::H(q)),
            Op::Cz(a, b) => Some(Gate::Cz(a, b)),
            Op::Czz(a, b, c) => Some(Gate::Czz(a, b, c)),
            Op::InitZ(_) | Op::MeasZ(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Instruction {
    pub op: Op,
    pub tick: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Cz,
    Czz,
}

impl Style {
    /// Entangling timesteps per Pauli type.
    pub fn steps(self) -> usize {
        match self {
            Style::Cz => 4,
            Style::Czz => 2,
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Cz => "cz",
            Style::Czz => "czz",
        })
    }
}

impl FromStr for Style {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cz" => Ok(Style::Cz),
            "czz" => Ok(Style::Czz),
            _ => Err(Error::Circuit(format!("unknown style {s:?}"))),
        }
    }
}

/// Which neighbours share a CZZ gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pairing {
    /// `{S, W}` then `{N, E}`.
    Ne,
    /// `{S, E}` then `{N, W}`.
    Nw,
    /// `{E, W}` then `{N, S}`, swapped on alternate checkerboard classes so
    /// that neighbouring ancillas never claim the same data qubit.
    Ns,
}

impl Pairing {
    fn groups(self, class: u8) -> [[Direction; 2]; 2] {
        use Direction::*;
        match (self, class % 2) {
            (Pairing::Ne, _) => [[S, W], [N, E]],
            (Pairing::Nw, _) => [[S, E], [N, W]],
            (Pairing::Ns, 0) => [[E, W], [N, S]],
            (Pairing::Ns, _) => [[N, S], [E, W]],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ordering {
    Cz { x: [Direction; 4], z: [Direction; 4] },
    Czz { x: Pairing, z: Pairing, name: String },
}

impl Ordering {
    pub fn default_for(style: Style) -> Ordering {
        match style {
            Style::Cz => Ordering::parse(Style::Cz, "sewn-swen").unwrap(),
            Style::Czz => Ordering::parse(Style::Czz, "24").unwrap(),
        }
    }

    /// Parses an ordering name for a style.
    ///
    /// CZ: `default`, or `XXXX/ZZZZ` direction sequences such as `SEWN/SWEN`.
    /// CZZ: `ne`, `nw`, `ns` (both types alike) or the mixed schedules
    /// `21` (Z ne, X nw), `22` (Z nw, X ne), `24` (both nw), `25` (both ne).
    pub fn parse(style: Style, name: &str) -> Result<Ordering> {
        let lower = name.to_ascii_lowercase();
        match style {
            Style::Cz => {
                let spec = match lower.as_str() {
                    "default" | "sewn-swen" | "sewn" => "sewn/swen",
                    other => other,
                };
                let parts: Vec<&str> = spec.split('/').collect();
                let parse_seq = |s: &str| -> Result<[Direction; 4]> {
                    let dirs: Vec<Direction> = s.chars().filter_map(Direction::from_char).collect();
                    let mut sorted = dirs.clone();
                    sorted.sort();
                    if dirs.len() != 4 || s.len() != 4 || sorted != Direction::ALL {
                        return Err(Error::Circuit(format!("bad CZ direction sequence {s:?}")));
                    }
                    Ok([dirs[0], dirs[1], dirs[2], dirs[3]])
                };
                match parts.as_slice() {
                    [x, z] => Ok(Ordering::Cz {
                        x: parse_seq(x)?,
                        z: parse_seq(z)?,
                    }),
                    _ => Err(Error::Circuit(format!("unknown CZ ordering {name:?}"))),
                }
            }
            Style::Czz => {
                let (z, x) = match lower.as_str() {
                    "ne" | "25" => (Pairing::Ne, Pairing::Ne),
                    "nw" | "24" => (Pairing::Nw, Pairing::Nw),
                    "ns" => (Pairing::Ns, Pairing::Ns),
                    "21" => (Pairing::Ne, Pairing::Nw),
                    "22" => (Pairing::Nw, Pairing::Ne),
                    _ => return Err(Error::Circuit(format!("unknown CZZ ordering {name:?}"))),
                };
                Ok(Ordering::Czz {
                    x,
                    z,
                    name: lower,
                })
            }
        }
    }

    pub fn style(&self) -> Style {
        match self {
            Ordering::Cz { .. } => Style::Cz,
            Ordering::Czz { .. } => Style::Czz,
        }
    }

    /// Schedules known to break fault tolerance on unrotated codes.
    pub fn is_known_non_ft(&self) -> bool {
        matches!(self, Ordering::Czz { x: Pairing::Ns, .. } | Ordering::Czz { z: Pairing::Ns, .. })
    }

    pub fn name(&self) -> String {
        match self {
            Ordering::Cz { x, z } => {
                let seq = |s: &[Direction; 4]| s.iter().map(|d| format!("{d:?}")).collect::<String>();
                format!("{}/{}", seq(x), seq(z))
            }
            Ordering::Czz { name, .. } => name.clone(),
        }
    }

    /// Data qubits touched in each entangling step for one stabilizer.
    pub fn steps(&self, stab: &StabilizerDef) -> Vec<Vec<usize>> {
        match self {
            Ordering::Cz { x, z } => {
                let seq = if stab.pauli_type == PauliType::X { x } else { z };
                seq.iter()
                    .map(|&dir| stab.neighbor(dir).into_iter().collect())
                    .collect()
            }
            Ordering::Czz { x, z, .. } => {
                let pairing = if stab.pauli_type == PauliType::X { x } else { z };
                pairing
                    .groups(stab.class)
                    .iter()
                    .map(|group| {
                        let mut qs: Vec<usize> =
                            group.iter().filter_map(|&dir| stab.neighbor(dir)).collect();
                        qs.sort_unstable();
                        qs
                    })
                    .collect()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    /// Logical memory in the given basis with data reset and final readout.
    Memory(PauliType),
    /// Readout rounds on an incoming codeword; no data reset or readout.
    Gadget,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitMeta {
    pub kind: CodeKind,
    pub d: usize,
    pub experiment: Experiment,
    pub rounds: usize,
    pub style: Style,
    pub ordering: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DetectorInfo {
    pub stabilizer: usize,
    pub basis: PauliType,
    pub round: usize,
}

#[derive(Clone, Debug)]
pub struct Circuit {
    pub n_qubits: usize,
    pub instructions: Vec<Instruction>,
    /// `tick_start[t]..tick_start[t + 1]` are the instructions of tick `t`.
    pub tick_start: Vec<usize>,
    /// Instruction index of each measurement, in record order.
    pub measurements: Vec<usize>,
    pub detectors: Vec<Vec<usize>>,
    pub detector_info: Vec<Option<DetectorInfo>>,
    pub observables: Vec<Vec<usize>>,
    pub data_qubits: Vec<usize>,
    pub meta: Option<CircuitMeta>,
}

#[derive(Default)]
struct Builder {
    ticks: Vec<Vec<Op>>,
    n_meas: usize,
}

impl Builder {
    fn tick(&mut self) {
        self.ticks.push(Vec::new());
    }

    fn push(&mut self, op: Op) -> Option<usize> {
        self.ticks.last_mut().expect("tick opened").push(op);
        if let Op::MeasZ(_) = op {
            self.n_meas += 1;
            Some(self.n_meas - 1)
        } else {
            None
        }
    }

    fn entangle(&mut self, anc: usize, data: &[usize]) {
        match *data {
            [] => {}
            [q] => {
                self.push(Op::Cz(anc, q));
            }
            [a, b] => {
                self.push(Op::Czz(anc, a, b));
            }
            _ => unreachable!("gate groups hold at most two data qubits"),
        }
    }
}

/// Which measurement record holds stabilizer `s` in round `r`.
type RecordTable = Vec<Vec<usize>>;

struct Rounds {
    builder: Builder,
    /// `records[s][round]`
    records: RecordTable,
}

fn readout_rounds(
    layout: &Layout,
    rounds: usize,
    ordering: &Ordering,
    memory: Option<PauliType>,
) -> Rounds {
    let k = ordering.style().steps();
    let xs: Vec<&StabilizerDef> = layout.stabilizers_of(PauliType::X).map(|(_, s)| s).collect();
    let zs: Vec<&StabilizerDef> = layout.stabilizers_of(PauliType::Z).map(|(_, s)| s).collect();
    let index_of = |anc: usize| {
        layout
            .stabilizers
            .iter()
            .position(|s| s.ancilla == anc)
            .unwrap()
    };
    let x_steps: Vec<Vec<Vec<usize>>> = xs.iter().map(|s| ordering.steps(s)).collect();
    let z_steps: Vec<Vec<Vec<usize>>> = zs.iter().map(|s| ordering.steps(s)).collect();
    let mut records: RecordTable = vec![Vec::new(); layout.stabilizers.len()];
    let mut b = Builder::default();

    b.tick();
    if memory.is_some() {
        for &q in &layout.data_qubits {
            b.push(Op::InitZ(q));
        }
    }
    for s in &xs {
        b.push(Op::InitZ(s.ancilla));
    }
    if memory == Some(PauliType::X) {
        b.tick();
        for &q in &layout.data_qubits {
            b.push(Op::H(q));
        }
    }

    for round in 0..rounds {
        b.tick();
        for &q in &layout.data_qubits {
            b.push(Op::H(q));
        }
        for s in &xs {
            b.push(Op::H(s.ancilla));
        }
        for step in 0..k {
            b.tick();
            for (s, steps) in xs.iter().zip(&x_steps) {
                b.entangle(s.ancilla, &steps[step]);
            }
            if step == 0 && round > 0 {
                for s in &zs {
                    let m = b.push(Op::MeasZ(s.ancilla)).unwrap();
                    records[index_of(s.ancilla)].push(m);
                }
            }
            if step == 1 {
                for s in &zs {
                    b.push(Op::InitZ(s.ancilla));
                }
            }
        }
        b.tick();
        for &q in &layout.data_qubits {
            b.push(Op::H(q));
        }
        for s in xs.iter().chain(&zs) {
            b.push(Op::H(s.ancilla));
        }
        for step in 0..k {
            b.tick();
            for (s, steps) in zs.iter().zip(&z_steps) {
                b.entangle(s.ancilla, &steps[step]);
            }
            if step == 0 {
                for s in &xs {
                    let m = b.push(Op::MeasZ(s.ancilla)).unwrap();
                    records[index_of(s.ancilla)].push(m);
                }
            }
            if step == 1 && round + 1 < rounds {
                for s in &xs {
                    b.push(Op::InitZ(s.ancilla));
                }
            }
        }
        b.tick();
        for s in &zs {
            b.push(Op::H(s.ancilla));
        }
    }

    b.tick();
    for s in &zs {
        let m = b.push(Op::MeasZ(s.ancilla)).unwrap();
        records[index_of(s.ancilla)].push(m);
    }
    Rounds {
        builder: b,
        records,
    }
}

fn check_args(layout: &Layout, rounds: usize, ordering: &Ordering, allow_non_ft: bool) -> Result<()> {
    if rounds == 0 {
        return Err(Error::Circuit("at least one round is required".into()));
    }
    if ordering.is_known_non_ft() && !allow_non_ft {
        return Err(Error::Circuit(format!(
            "ordering {} is known not to be fault tolerant; pass the allow-non-ft flag to build it",
            ordering.name()
        )));
    }
    let _ = layout;
    Ok(())
}

/// Memory experiment: reset, `rounds` readout rounds, final data readout.
pub fn build_memory_circuit(
    layout: &Layout,
    basis: PauliType,
    rounds: usize,
    ordering: &Ordering,
    allow_non_ft: bool,
) -> Result<Circuit> {
    check_args(layout, rounds, ordering, allow_non_ft)?;
    let Rounds {
        builder: mut b,
        records,
    } = readout_rounds(layout, rounds, ordering, Some(basis));

    let mut final_meas = vec![usize::MAX; layout.n_qubits()];
    if basis == PauliType::X {
        for &q in &layout.data_qubits {
            b.push(Op::H(q));
        }
        b.tick();
    }
    for &q in &layout.data_qubits {
        final_meas[q] = b.push(Op::MeasZ(q)).unwrap();
    }

    let mut detectors = Vec::new();
    let mut info = Vec::new();
    for round in 0..=rounds {
        for (s, stab) in layout.stabilizers.iter().enumerate() {
            let rec = &records[s];
            let recs = if stab.pauli_type == basis {
                let mut v = Vec::new();
                if round < rounds {
                    v.push(rec[round]);
                } else {
                    v.extend(stab.data().map(|q| final_meas[q]));
                }
                if round > 0 {
                    v.push(rec[round - 1]);
                }
                v
            } else if round >= 1 && round < rounds {
                vec![rec[round], rec[round - 1]]
            } else {
                continue;
            };
            detectors.push(sorted(recs));
            info.push(Some(DetectorInfo {
                stabilizer: s,
                basis: layout.stabilizers[s].pauli_type,
                round,
            }));
        }
    }
    let observable = sorted(
        layout
            .logical(basis)
            .support()
            .into_iter()
            .map(|q| final_meas[q])
            .collect(),
    );

    Ok(finish(
        b,
        layout,
        detectors,
        info,
        vec![observable],
        CircuitMeta {
            kind: layout.kind,
            d: layout.d,
            experiment: Experiment::Memory(basis),
            rounds,
            style: ordering.style(),
            ordering: ordering.name(),
        },
    ))
}

/// Readout rounds acting on an incoming codeword, used for fault-set checks.
///
/// Every stabilizer gets a detector in every round; round 0 compares against
/// the +1 eigenvalue of the incoming code state.
pub fn build_gadget_circuit(
    layout: &Layout,
    rounds: usize,
    ordering: &Ordering,
    allow_non_ft: bool,
) -> Result<Circuit> {
    check_args(layout, rounds, ordering, allow_non_ft)?;
    let Rounds {
        builder: b,
        records,
    } = readout_rounds(layout, rounds, ordering, None);
    let mut detectors = Vec::new();
    let mut info = Vec::new();
    for round in 0..rounds {
        for (s, rec) in records.iter().enumerate() {
            let mut v = vec![rec[round]];
            if round > 0 {
                v.push(rec[round - 1]);
            }
            detectors.push(sorted(v));
            info.push(Some(DetectorInfo {
                stabilizer: s,
                basis: layout.stabilizers[s].pauli_type,
                round,
            }));
        }
    }
    Ok(finish(
        b,
        layout,
        detectors,
        info,
        Vec::new(),
        CircuitMeta {
            kind: layout.kind,
            d: layout.d,
            experiment: Experiment::Gadget,
            rounds,
            style: ordering.style(),
            ordering: ordering.name(),
        },
    ))
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn finish(
    b: Builder,
    layout: &Layout,
    detectors: Vec<Vec<usize>>,
    detector_info: Vec<Option<DetectorInfo>>,
    observables: Vec<Vec<usize>>,
    meta: CircuitMeta,
) -> Circuit {
    let mut c = Circuit::from_ticks(layout.n_qubits(), b.ticks);
    c.detectors = detectors;
    c.detector_info = detector_info;
    c.observables = observables;
    c.data_qubits = layout.data_qubits.clone();
    c.meta = Some(meta);
    debug_assert!(c.validate().is_ok());
    c
}

impl Circuit {
    /// Flattens per-tick operation lists; detectors and observables start empty.
    pub fn from_ticks(n_qubits: usize, ticks: Vec<Vec<Op>>) -> Circuit {
        let mut instructions = Vec::new();
        let mut tick_start = vec![0];
        let mut measurements = Vec::new();
        for (t, ops) in ticks.into_iter().enumerate() {
            for op in ops {
                if let Op::MeasZ(_) = op {
                    measurements.push(instructions.len());
                }
                instructions.push(Instruction { op, tick: t });
            }
            tick_start.push(instructions.len());
        }
        Circuit {
            n_qubits,
            instructions,
            tick_start,
            measurements,
            detectors: Vec::new(),
            detector_info: Vec::new(),
            observables: Vec::new(),
            data_qubits: Vec::new(),
            meta: None,
        }
    }

    pub fn n_ticks(&self) -> usize {
        self.tick_start.len() - 1
    }

    pub fn n_measurements(&self) -> usize {
        self.measurements.len()
    }

    pub fn n_detectors(&self) -> usize {
        self.detectors.len()
    }

    /// Stabilizer type of every detector (0 for X, 1 for Z); empty when any
    /// detector is unannotated.
    pub fn detector_classes(&self) -> Vec<u8> {
        self.detector_info
            .iter()
            .map(|i| i.map(|i| (i.basis == PauliType::Z) as u8))
            .collect::<Option<Vec<u8>>>()
            .unwrap_or_default()
    }

    pub fn n_observables(&self) -> usize {
        self.observables.len()
    }

    pub fn tick(&self, t: usize) -> &[Instruction] {
        &self.instructions[self.tick_start[t]..self.tick_start[t + 1]]
    }

    /// Measurement record index produced by each instruction, if any.
    pub fn measurement_of_instruction(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.instructions.len()];
        for (m, &i) in self.measurements.iter().enumerate() {
            out[i] = Some(m);
        }
        out
    }

    /// Noisy locations excluding idles: one per instruction.
    pub fn count_fault_locations(&self) -> usize {
        self.instructions.len()
    }

    /// Checks qubit ranges, distinct gate qubits, one operation per qubit per
    /// tick, and measurement indices referenced by detectors.
    pub fn validate(&self) -> Result<()> {
        for t in 0..self.n_ticks() {
            let mut used = std::collections::HashSet::new();
            for ins in self.tick(t) {
                if let Some(g) = ins.op.gate() {
                    g.validate()?;
                }
                for q in ins.op.qubits() {
                    if q >= self.n_qubits {
                        return Err(Error::Circuit(format!("qubit {q} out of range")));
                    }
                    if !used.insert(q) {
                        return Err(Error::Circuit(format!("qubit {q} used twice in tick {t}")));
                    }
                }
            }
        }
        let n = self.n_measurements();
        for rec in self.detectors.iter().chain(&self.observables) {
            if let Some(&m) = rec.iter().find(|&&m| m >= n) {
                return Err(Error::Circuit(format!("measurement record {m} out of range")));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in 0..self.n_ticks() {
            if t > 0 {
                out.push_str("TICK\n");
            }
            let ins = self.tick(t);
            // Single-qubit operations are grouped per kind; measurement order is kept.
            let mut groups: Vec<(OpKind, Vec<usize>)> = Vec::new();
            for i in ins {
                match i.op {
                    Op::Cz(a, b) => writeln!(out, "CZ {a} {b}").unwrap(),
                    Op::Czz(a, b, c) => writeln!(out, "CZZ {a} {b} {c}").unwrap(),
                    Op::H(q) | Op::InitZ(q) | Op::MeasZ(q) => {
                        let kind = i.op.kind();
                        match groups.iter_mut().find(|(k, _)| *k == kind) {
                            Some((_, qs)) => qs.push(q),
                            None => groups.push((kind, vec![q])),
                        }
                    }
                }
            }
            for (kind, qs) in groups {
                let name = match kind {
                    OpKind::H => "H",
                    OpKind::InitZ => "RZ",
                    _ => "MZ",
                };
                let list: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
                writeln!(out, "{name} {}", list.join(" ")).unwrap();
            }
        }
        let recs = |v: &[usize]| {
            v.iter()
                .map(|m| format!("rec[{m}]"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        for det in &self.detectors {
            writeln!(out, "DETECTOR {}", recs(det)).unwrap();
        }
        for (i, obs) in self.observables.iter().enumerate() {
            writeln!(out, "OBSERVABLE({i}) {}", recs(obs)).unwrap();
        }
        out
    }

    /// Parses the text form written by [`Circuit::to_text`].
    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut ticks: Vec<Vec<Op>> = vec![Vec::new()];
        let mut detectors = Vec::new();
        let mut observables: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut max_qubit = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap();
            let args: Vec<&str> = parts.collect();
            let nums = || -> Result<Vec<usize>> {
                args.iter()
                    .map(|a| a.parse::<usize>().map_err(|_| err(format!("bad qubit {a:?}"))))
                    .collect()
            };
            let recs = || -> Result<Vec<usize>> {
                args.iter()
                    .map(|a| {
                        a.strip_prefix("rec[")
                            .and_then(|s| s.strip_suffix(']'))
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| err(format!("bad record {a:?}")))
                    })
                    .collect()
            };
            let tick = ticks.last_mut().unwrap();
            match head {
                "TICK" => ticks.push(Vec::new()),
                "H" | "RZ" | "MZ" => {
                    for q in nums()? {
                        max_qubit = max_qubit.max(q);
                        tick.push(match head {
                            "H" => Op::H(q),
                            "RZ" => Op::InitZ(q),
                            _ => Op::MeasZ(q),
                        });
                    }
                }
                "CZ" | "CZZ" => {
                    let qs = nums()?;
                    let gate = Gate::from_name(head, &qs).map_err(|e| err(e.to_string()))?;
                    max_qubit = max_qubit.max(*qs.iter().max().unwrap());
                    tick.push(match gate {
                        Gate::Cz(a, b) => Op::Cz(a, b),
                        Gate::Czz(a, b, c) => Op::Czz(a, b, c),
                        Gate::H(q) => Op::H(q),
                    });
                }
                "DETECTOR" => detectors.push(recs()?),
                _ if head.starts_with("OBSERVABLE(") => {
                    let idx = head
                        .strip_prefix("OBSERVABLE(")
                        .and_then(|s| s.strip_suffix(')'))
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| err(format!("bad observable {head:?}")))?;
                    observables.push((idx, recs()?));
                }
                _ => return Err(err(format!("unknown instruction {head:?}"))),
            }
        }
        let mut c = Circuit::from_ticks(max_qubit + 1, ticks);
        c.detector_info = vec![None; detectors.len()];
        c.detectors = detectors;
        let n_obs = observables.iter().map(|(i, _)| i + 1).max().unwrap_or(0);
        c.observables = vec![Vec::new(); n_obs];
        for (i, recs) in observables {
            c.observables[i].extend(recs);
        }
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::build_layout;

    fn memory(kind: CodeKind, d: usize, basis: PauliType, rounds: usize, style: Style, ord: &str) -> Circuit {
        let l = build_layout(kind, d).unwrap();
        let o = Ordering::parse(style, ord).unwrap();
        build_memory_circuit(&l, basis, rounds, &o, true).unwrap()
    }

    #[test]
    fn detector_count_example() {
        let c = memory(CodeKind::Unrotated, 3, PauliType::Z, 3, Style::Czz, "24");
        assert_eq!(c.n_detectors(), 36);
        assert_eq!(c.n_observables(), 1);
    }

    #[test]
    fn entangling_depth() {
        for (style, ord, depth) in [(Style::Cz, "default", 8), (Style::Czz, "24", 4)] {
            let c = memory(CodeKind::Rotated, 3, PauliType::Z, 1, style, ord);
            let entangling = (0..c.n_ticks())
                .filter(|&t| {
                    c.tick(t)
                        .iter()
                        .any(|i| matches!(i.op, Op::Cz(..) | Op::Czz(..)))
                })
                .count();
            assert_eq!(entangling, depth);
        }
    }

    #[test]
    fn small_fault_location_counts() {
        let c = memory(CodeKind::Rotated, 3, PauliType::Z, 3, Style::Cz, "default");
        assert_eq!(c.count_fault_locations(), 240);
        let c = memory(CodeKind::Unrotated, 3, PauliType::Z, 3, Style::Czz, "24");
        assert_eq!(c.count_fault_locations(), 320);
    }

    #[test]
    fn ns_needs_flag() {
        let l = build_layout(CodeKind::Unrotated, 3).unwrap();
        let o = Ordering::parse(Style::Czz, "ns").unwrap();
        assert!(build_memory_circuit(&l, PauliType::Z, 3, &o, false).is_err());
        assert!(build_memory_circuit(&l, PauliType::Z, 3, &o, true).is_ok());
    }

    #[test]
    fn bad_orderings() {
        assert!(Ordering::parse(Style::Czz, "sewn").is_err());
        assert!(Ordering::parse(Style::Cz, "SEWW/SWEN").is_err());
        assert!(Ordering::parse(Style::Cz, "NESW/WSEN").is_ok());
    }

    #[test]
    fn text_round_trip() {
        let c = memory(CodeKind::Rotated, 3, PauliType::X, 2, Style::Czz, "21");
        let text = c.to_text();
        let back = Circuit::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.n_measurements(), c.n_measurements());
        assert_eq!(back.detectors, c.detectors);
        assert!(Circuit::from_text("CCX 0 1 2").is_err());
        assert!(Circuit::from_text("CZ 0 0").is_err());
    }
}
