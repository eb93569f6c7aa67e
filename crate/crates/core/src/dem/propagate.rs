//! Pauli-frame propagation of faults through a circuit.
//!
//! Two routes compute the same thing. [`propagate_path`] pushes a frame
//! forward from the fault; [`backward_sweep`] walks the circuit once from the
//! end and keeps, for every qubit, which outputs an X or Z error at the
//! current position would flip. The sweep is what DEM construction uses.

use crate::bits::BitVec;
use crate::circuit::{Circuit, Op};
use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::pauli::PauliString;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultSignature {
    pub detectors: BitVec,
    pub observables: BitVec,
    /// Frame left on the data qubits at the end of the circuit.
    pub final_error: PauliString,
    pub meas_flips: BitVec,
}

/// Forward propagation of a set of Paulis, each injected just before the
/// instruction at its position.
pub fn propagate_path(circuit: &Circuit, faults: &[(usize, &PauliString)]) -> FaultSignature {
    let n = circuit.n_qubits;
    let mut fx = vec![false; n];
    let mut fz = vec![false; n];
    let mut flips = BitVec::zeros(circuit.n_measurements());
    let mut order: Vec<&(usize, &PauliString)> = faults.iter().collect();
    order.sort_by_key(|(pos, _)| *pos);
    let mut next = 0;
    let start = order.first().map_or(circuit.instructions.len(), |(p, _)| *p);
    let meas_of = circuit.measurement_of_instruction();

    let inject = |pos: usize, fx: &mut [bool], fz: &mut [bool], next: &mut usize| {
        while *next < order.len() && order[*next].0 == pos {
            let p = order[*next].1;
            for &q in p.x_support() {
                fx[q] ^= true;
            }
            for &q in p.z_support() {
                fz[q] ^= true;
            }
            *next += 1;
        }
    };

    for i in start..circuit.instructions.len() {
        inject(i, &mut fx, &mut fz, &mut next);
        match circuit.instructions[i].op {
            Op::H(q) => std::mem::swap(&mut fx[q], &mut fz[q]),
            Op::Cz(a, b) => {
                let (xa, xb) = (fx[a], fx[b]);
                fz[b] ^= xa;
                fz[a] ^= xb;
            }
            Op::Czz(a, b, c) => {
                let (xa, xb, xc) = (fx[a], fx[b], fx[c]);
                fz[b] ^= xa;
                fz[c] ^= xa;
                fz[a] ^= xb ^ xc;
            }
            Op::InitZ(q) => {
                fx[q] = false;
                fz[q] = false;
            }
            Op::MeasZ(q) => {
                if fx[q] {
                    flips.set(meas_of[i].unwrap(), true);
                }
            }
        }
    }
    inject(circuit.instructions.len(), &mut fx, &mut fz, &mut next);

    let parity = |recs: &Vec<usize>| recs.iter().filter(|&&m| flips.get(m)).count() % 2 == 1;
    let mut detectors = BitVec::zeros(circuit.n_detectors());
    for (j, det) in circuit.detectors.iter().enumerate() {
        detectors.set(j, parity(det));
    }
    let mut observables = BitVec::zeros(circuit.n_observables());
    for (j, obs) in circuit.observables.iter().enumerate() {
        observables.set(j, parity(obs));
    }
    let final_error = PauliString::from_supports(
        circuit.data_qubits.iter().copied().filter(|&q| fx[q]),
        circuit.data_qubits.iter().copied().filter(|&q| fz[q]),
    );
    FaultSignature {
        detectors,
        observables,
        final_error,
        meas_flips: flips,
    }
}

pub fn propagate_fault(circuit: &Circuit, position: usize, pauli: &PauliString) -> FaultSignature {
    propagate_path(circuit, &[(position, pauli)])
}

/// Per-qubit sensitivities at one position of the backward sweep.
///
/// Output bits are laid out as detectors, then observables, then (when
/// tracked) the final data frame as `x_0..x_{n-1}, z_0..z_{n-1}` over
/// `circuit.data_qubits`.
pub struct Sensitivity {
    pub n_detectors: usize,
    pub n_observables: usize,
    pub width: usize,
    sx: Vec<BitVec>,
    sz: Vec<BitVec>,
}

impl Sensitivity {
    /// Outputs flipped by inserting `p` at the current position.
    pub fn signature(&self, p: &PauliString) -> BitVec {
        let mut out = BitVec::zeros(self.width);
        self.accumulate(p, &mut out);
        out
    }

    pub fn accumulate(&self, p: &PauliString, out: &mut BitVec) {
        for &q in p.x_support() {
            out.xor_assign(&self.sx[q]);
        }
        for &q in p.z_support() {
            out.xor_assign(&self.sz[q]);
        }
    }

    pub fn x(&self, q: usize) -> &BitVec {
        &self.sx[q]
    }

    pub fn z(&self, q: usize) -> &BitVec {
        &self.sz[q]
    }

    fn tracked_limit(&self) -> usize {
        self.n_detectors + self.n_observables
    }
}

/// Walks the circuit from the end to the start, calling `visit(position, s)`
/// at every position from `instructions.len()` down to 0.
///
/// Fails if a detector or observable depends on a random measurement or
/// reset outcome.
pub fn backward_sweep<F>(circuit: &Circuit, track_final_error: bool, mut visit: F) -> Result<()>
where
    F: FnMut(usize, &Sensitivity) -> Result<()>,
{
    let n_det = circuit.n_detectors();
    let n_obs = circuit.n_observables();
    let n_data = circuit.data_qubits.len();
    let width = n_det + n_obs + if track_final_error { 2 * n_data } else { 0 };
    let mut meas_rows: Vec<Vec<usize>> = vec![Vec::new(); circuit.n_measurements()];
    for (j, det) in circuit.detectors.iter().enumerate() {
        for &m in det {
            meas_rows[m].push(j);
        }
    }
    for (k, obs) in circuit.observables.iter().enumerate() {
        for &m in obs {
            meas_rows[m].push(n_det + k);
        }
    }
    let mut s = Sensitivity {
        n_detectors: n_det,
        n_observables: n_obs,
        width,
        sx: vec![BitVec::zeros(width); circuit.n_qubits],
        sz: vec![BitVec::zeros(width); circuit.n_qubits],
    };
    if track_final_error {
        for (i, &q) in circuit.data_qubits.iter().enumerate() {
            s.sx[q].set(n_det + n_obs + i, true);
            s.sz[q].set(n_det + n_obs + n_data + i, true);
        }
    }
    let meas_of = circuit.measurement_of_instruction();
    let limit = s.tracked_limit();
    let random_dependence = |v: &BitVec, what: &str, i: usize| -> Result<()> {
        match v.first_one() {
            Some(j) if j < limit => Err(Error::Circuit(format!(
                "output {j} depends on the random outcome of {what} (instruction {i})"
            ))),
            _ => Ok(()),
        }
    };

    let n = circuit.instructions.len();
    visit(n, &s)?;
    for i in (0..n).rev() {
        match circuit.instructions[i].op {
            Op::H(q) => std::mem::swap(&mut s.sx[q], &mut s.sz[q]),
            Op::Cz(a, b) => {
                // X_a before the gate is X_a Z_b after it.
                let zb = s.sz[b].clone();
                let za = s.sz[a].clone();
                s.sx[a].xor_assign(&zb);
                s.sx[b].xor_assign(&za);
            }
            Op::Czz(a, b, c) => {
                let za = s.sz[a].clone();
                let mut zbc = s.sz[b].clone();
                zbc.xor_assign(&s.sz[c]);
                s.sx[a].xor_assign(&zbc);
                s.sx[b].xor_assign(&za);
                s.sx[c].xor_assign(&za);
            }
            Op::InitZ(q) => {
                random_dependence(&s.sz[q], "a reset", i)?;
                s.sx[q].clear();
                s.sz[q].clear();
            }
            Op::MeasZ(q) => {
                random_dependence(&s.sz[q], "a measurement", i)?;
                let m = meas_of[i].unwrap();
                for &j in &meas_rows[m] {
                    s.sx[q].toggle(j);
                }
            }
        }
        visit(i, &s)?;
    }
    Ok(())
}

/// Checks that every detector and observable is deterministic without noise.
///
/// With `input = Some(layout)` the circuit is assumed to start from a
/// codeword of `layout` (unreset data qubits); otherwise every qubit must be
/// reset before it influences an output.
pub fn check_determinism(circuit: &Circuit, input: Option<&Layout>) -> Result<()> {
    backward_sweep(circuit, false, |pos, s| {
        if pos != 0 {
            return Ok(());
        }
        let outputs = s.n_detectors + s.n_observables;
        for j in 0..outputs {
            // The Heisenberg picture of output j: X where a Z error flips it.
            let op = PauliString::from_supports(
                (0..circuit.n_qubits).filter(|&q| s.z(q).get(j)),
                (0..circuit.n_qubits).filter(|&q| s.x(q).get(j)),
            );
            let ok = match input {
                None => op.is_identity(),
                Some(layout) => layout.in_stabilizer_group(&op),
            };
            if !ok {
                return Err(Error::Circuit(format!(
                    "output {j} is not deterministic on the input state (depends on {op})"
                )));
            }
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_gadget_circuit, build_memory_circuit, Ordering, Style};
    use crate::layout::{build_layout, CodeKind, PauliType};

    #[test]
    fn built_circuits_are_deterministic() {
        for kind in [CodeKind::Rotated, CodeKind::Unrotated] {
            for d in [3, 5] {
                let l = build_layout(kind, d).unwrap();
                for (style, ords) in [
                    (Style::Cz, vec!["default"]),
                    (Style::Czz, vec!["ne", "nw", "ns", "21", "22"]),
                ] {
                    for ord in ords {
                        let o = Ordering::parse(style, ord).unwrap();
                        for basis in [PauliType::X, PauliType::Z] {
                            for rounds in [1, d] {
                                let c = build_memory_circuit(&l, basis, rounds, &o, true).unwrap();
                                check_determinism(&c, None).unwrap();
                            }
                        }
                        let g = build_gadget_circuit(&l, 2, &o, true).unwrap();
                        check_determinism(&g, Some(&l)).unwrap();
                        assert!(check_determinism(&g, None).is_err());
                    }
                }
            }
        }
    }

    #[test]
    fn measurement_flip_hits_two_detectors() {
        let l = build_layout(CodeKind::Rotated, 3).unwrap();
        let o = Ordering::default_for(Style::Cz);
        let c = build_memory_circuit(&l, PauliType::Z, 3, &o, false).unwrap();
        // A pre-measurement X on an ancilla whose record enters two detectors.
        let m = (0..c.n_measurements())
            .find(|&m| c.detectors.iter().filter(|d| d.contains(&m)).count() == 2)
            .unwrap();
        let i = c.measurements[m];
        let Op::MeasZ(q) = c.instructions[i].op else { panic!() };
        let sig = propagate_fault(&c, i, &PauliString::from_supports([q], []));
        let expect: Vec<usize> = (0..c.n_detectors()).filter(|&j| c.detectors[j].contains(&m)).collect();
        assert_eq!(sig.detectors.iter_ones().collect::<Vec<_>>(), expect);
        assert!(sig.observables.is_zero());
        let empty = propagate_fault(&c, 0, &PauliString::identity());
        assert!(empty.detectors.is_zero() && empty.final_error.is_identity());
    }
}
