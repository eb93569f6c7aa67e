//! Signless Pauli operators and Clifford conjugation.
//!
//! Phases are dropped everywhere: detector and observable flips only depend on
//! whether operators commute, never on the global sign of a frame.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A sparse Pauli operator given by its X and Z supports.
///
/// A qubit present in both supports carries a Y.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    x: BTreeSet<usize>,
    z: BTreeSet<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingleQubitPauli {
    I,
    X,
    Y,
    Z,
}

impl SingleQubitPauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Self::I,
            (true, false) => Self::X,
            (true, true) => Self::Y,
            (false, true) => Self::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Self::I => (false, false),
            Self::X => (true, false),
            Self::Y => (true, true),
            Self::Z => (false, true),
        }
    }

    fn letter(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
        }
    }
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_supports(
        x: impl IntoIterator<Item = usize>,
        z: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut p = Self::identity();
        for q in x {
            p.toggle_x(q);
        }
        for q in z {
            p.toggle_z(q);
        }
        p
    }

    pub fn single(qubit: usize, pauli: SingleQubitPauli) -> Self {
        let mut p = Self::identity();
        p.set(qubit, pauli);
        p
    }

    pub fn x_support(&self) -> &BTreeSet<usize> {
        &self.x
    }

    pub fn z_support(&self) -> &BTreeSet<usize> {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_empty() && self.z.is_empty()
    }

    /// Number of qubits with a non-identity factor.
    pub fn weight(&self) -> usize {
        self.x.union(&self.z).count()
    }

    /// Qubits carrying a non-identity factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.x.union(&self.z).copied().collect()
    }

    pub fn get(&self, qubit: usize) -> SingleQubitPauli {
        SingleQubitPauli::from_bits(self.x.contains(&qubit), self.z.contains(&qubit))
    }

    pub fn set(&mut self, qubit: usize, pauli: SingleQubitPauli) {
        let (x, z) = pauli.bits();
        if x {
            self.x.insert(qubit);
        } else {
            self.x.remove(&qubit);
        }
        if z {
            self.z.insert(qubit);
        } else {
            self.z.remove(&qubit);
        }
    }

    pub fn toggle_x(&mut self, qubit: usize) {
        if !self.x.remove(&qubit) {
            self.x.insert(qubit);
        }
    }

    pub fn toggle_z(&mut self, qubit: usize) {
        if !self.z.remove(&qubit) {
            self.z.insert(qubit);
        }
    }

    /// Product up to phase: supports combine by symmetric difference.
    pub fn multiply(&self, other: &PauliString) -> PauliString {
        PauliString {
            x: self.x.symmetric_difference(&other.x).copied().collect(),
            z: self.z.symmetric_difference(&other.z).copied().collect(),
        }
    }

    /// Symplectic inner product: `true` iff the two operators anticommute.
    pub fn anticommutes(&self, other: &PauliString) -> bool {
        let a = self.x.intersection(&other.z).count();
        let b = self.z.intersection(&other.x).count();
        (a + b) % 2 == 1
    }

    /// `U P U†` up to sign.
    pub fn conjugated_by(&self, gate: &Gate) -> PauliString {
        let mut out = self.clone();
        gate.apply_to(&mut out);
        out
    }
}

impl std::ops::Mul for &PauliString {
    type Output = PauliString;
    fn mul(self, rhs: &PauliString) -> PauliString {
        self.multiply(rhs)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        for (k, q) in self.support().into_iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}{}", self.get(q).letter(), q)?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses the `X0*Z3*Y7` form; `I` (or an empty string) is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut p = PauliString::identity();
        if s.is_empty() || s == "I" {
            return Ok(p);
        }
        for term in s.split('*') {
            let term = term.trim();
            let mut chars = term.chars();
            let letter = chars
                .next()
                .ok_or_else(|| Error::Pauli(format!("empty factor in {s:?}")))?;
            let qubit: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Pauli(format!("bad qubit index in factor {term:?}")))?;
            let pauli = match letter {
                'X' => SingleQubitPauli::X,
                'Y' => SingleQubitPauli::Y,
                'Z' => SingleQubitPauli::Z,
                'I' => SingleQubitPauli::I,
                _ => return Err(Error::Pauli(format!("unknown Pauli letter {letter:?}"))),
            };
            if p.get(qubit) != SingleQubitPauli::I {
                return Err(Error::Pauli(format!("qubit {qubit} repeated in {s:?}")));
            }
            p.set(qubit, pauli);
        }
        Ok(p)
    }
}

/// Clifford gates used by the readout circuits.
///
/// `Czz(a, b, c)` is `CZ(a, b)·CZ(a, c)`: a shared control `a` with two targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    Cz(usize, usize),
    Czz(usize, usize, usize),
}

impl Gate {
    /// Builds a gate from its text name, checking arity and distinct qubits.
    pub fn from_name(name: &str, qubits: &[usize]) -> Result<Gate> {
        let gate = match (name.to_ascii_uppercase().as_str(), qubits) {
            ("H", &[q]) => Gate::H(q),
            ("CZ", &[a, b]) => Gate::Cz(a, b),
            ("CZZ", &[a, b, c]) => Gate::Czz(a, b, c),
            ("H" | "CZ" | "CZZ", _) => {
                return Err(Error::Pauli(format!(
                    "gate {name} given {} qubit(s)",
                    qubits.len()
                )))
            }
            _ => return Err(Error::Pauli(format!("unknown gate kind {name:?}"))),
        };
        gate.validate()?;
        Ok(gate)
    }

    pub fn validate(&self) -> Result<()> {
        let distinct = match *self {
            Gate::H(_) => true,
            Gate::Cz(a, b) => a != b,
            Gate::Czz(a, b, c) => a != b && a != c && b != c,
        };
        if distinct {
            Ok(())
        } else {
            Err(Error::Pauli(format!("repeated qubit in {self:?}")))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::Cz(..) => "CZ",
            Gate::Czz(..) => "CZZ",
        }
    }

    /// Conjugates `p` in place.
    pub fn apply_to(&self, p: &mut PauliString) {
        match *self {
            Gate::H(q) => {
                let s = p.get(q);
                let (x, z) = s.bits();
                p.set(q, SingleQubitPauli::from_bits(z, x));
            }
            Gate::Cz(a, b) => {
                let (xa, xb) = (p.x.contains(&a), p.x.contains(&b));
                if xa {
                    p.toggle_z(b);
                }
                if xb {
                    p.toggle_z(a);
                }
            }
            Gate::Czz(a, b, c) => {
                let (xa, xb, xc) = (p.x.contains(&a), p.x.contains(&b), p.x.contains(&c));
                if xa {
                    p.toggle_z(b);
                    p.toggle_z(c);
                }
                if xb {
                    p.toggle_z(a);
                }
                if xc {
                    p.toggle_z(a);
                }
            }
        }
    }
}

/// `gate · p · gate†` up to sign.
pub fn conjugate(gate: &Gate, p: &PauliString) -> Result<PauliString> {
    gate.validate()?;
    Ok(p.conjugated_by(gate))
}

/// All `4^n - 1` non-identity Paulis on `qubits`, in a fixed order.
///
/// Index `k` in `1..4^n` encodes qubit `i` in bits `2i` (X) and `2i+1` (Z).
pub fn nontrivial_paulis(qubits: &[usize]) -> Vec<PauliString> {
    let n = qubits.len();
    (1usize..(1 << (2 * n)))
        .map(|k| {
            let mut p = PauliString::identity();
            for (i, &q) in qubits.iter().enumerate() {
                let x = (k >> (2 * i)) & 1 == 1;
                let z = (k >> (2 * i + 1)) & 1 == 1;
                p.set(q, SingleQubitPauli::from_bits(x, z));
            }
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn multiply_examples() {
        assert!(p("X0").multiply(&p("X0")).is_identity());
        assert_eq!(p("X0").multiply(&p("Z0")), p("Y0"));
        assert_eq!(p("X0*Z1").multiply(&p("Z0*Z1")), p("Y0"));
    }

    #[test]
    fn commutation_examples() {
        assert!(p("X0").anticommutes(&p("Z0")));
        assert!(!p("X0*X1").anticommutes(&p("Z0*Z1")));
        assert!(p("Y0").anticommutes(&p("X0")));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(conjugate(&Gate::H(0), &p("X0")).unwrap(), p("Z0"));
        assert_eq!(conjugate(&Gate::Cz(0, 1), &p("X0")).unwrap(), p("X0*Z1"));
        assert_eq!(
            conjugate(&Gate::Czz(0, 1, 2), &p("Y0")).unwrap(),
            p("Y0*Z1*Z2")
        );
        // Z is invariant under the diagonal gates.
        assert_eq!(conjugate(&Gate::Czz(0, 1, 2), &p("Z1")).unwrap(), p("Z1"));
    }

    #[test]
    fn czz_matches_two_sequential_cz() {
        let qubits = [0, 1, 2];
        let mut all = nontrivial_paulis(&qubits);
        all.push(PauliString::identity());
        assert_eq!(all.len(), 64);
        for pauli in all {
            let via_czz = pauli.conjugated_by(&Gate::Czz(0, 1, 2));
            let via_cz = pauli
                .conjugated_by(&Gate::Cz(0, 1))
                .conjugated_by(&Gate::Cz(0, 2));
            assert_eq!(via_czz, via_cz, "{pauli}");
        }
    }

    #[test]
    fn rejects_bad_gates() {
        assert!(Gate::from_name("CCX", &[0, 1, 2]).is_err());
        assert!(Gate::from_name("CZ", &[1, 1]).is_err());
        assert!(Gate::from_name("CZZ", &[0, 1]).is_err());
        assert!(conjugate(&Gate::Czz(0, 1, 1), &p("X0")).is_err());
    }

    #[test]
    fn text_form() {
        let s = p("Y7*X0*Z3");
        assert_eq!(s.to_string(), "X0*Z3*Y7");
        assert_eq!(PauliString::identity().to_string(), "I");
        assert!("X0*X0".parse::<PauliString>().is_err());
        assert!("Q1".parse::<PauliString>().is_err());
    }

    #[test]
    fn nontrivial_count() {
        assert_eq!(nontrivial_paulis(&[4]).len(), 3);
        assert_eq!(nontrivial_paulis(&[4, 5]).len(), 15);
        assert_eq!(nontrivial_paulis(&[1, 2, 3]).len(), 63);
    }
}
