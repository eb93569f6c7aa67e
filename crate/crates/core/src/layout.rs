//! Rotated and unrotated surface-code patches.
//!
//! Unrotated codes live on a `(2d-1) x (2d-1)` grid: data qubits where
//! `row + col` is even, X ancillas at (odd, even) and Z ancillas at (even, odd).
//! Every ancilla talks to its four grid neighbours.
//!
//! Rotated codes use a doubled grid with data at (odd, odd) and ancillas at
//! (even, even). An ancilla's neighbours sit on the diagonals; we label them
//! N = (-1,-1), E = (-1,+1), S = (+1,+1), W = (+1,-1), i.e. the patch drawn
//! turned by 45 degrees.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::gf2::RowBasis;
use crate::pauli::PauliString;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Rotated,
    Unrotated,
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::Rotated => "rotated",
            CodeKind::Unrotated => "unrotated",
        })
    }
}

impl FromStr for CodeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rotated" | "r" => Ok(CodeKind::Rotated),
            "unrotated" | "u" => Ok(CodeKind::Unrotated),
            _ => Err(Error::Layout(format!("unknown code kind {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliType {
    X,
    Z,
}

impl PauliType {
    pub fn other(self) -> PauliType {
        match self {
            PauliType::X => PauliType::Z,
            PauliType::Z => PauliType::X,
        }
    }
}

impl fmt::Display for PauliType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PauliType::X => "X",
            PauliType::Z => "Z",
        })
    }
}

impl FromStr for PauliType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(PauliType::X),
            "Z" | "z" => Ok(PauliType::Z),
            _ => Err(Error::Layout(format!("unknown basis {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    N,
    E,
    S,
    W,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::N, Direction::E, Direction::S, Direction::W];

    pub fn from_char(c: char) -> Option<Direction> {
        match c.to_ascii_uppercase() {
            'N' => Some(Direction::N),
            'E' => Some(Direction::E),
            'S' => Some(Direction::S),
            'W' => Some(Direction::W),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerDef {
    pub pauli_type: PauliType,
    pub ancilla: usize,
    /// Present neighbours in N, E, S, W order.
    pub neighbors: Vec<(Direction, usize)>,
    /// Checkerboard class used by schedules whose gate pairs would otherwise
    /// collide on shared data qubits.
    pub class: u8,
}

impl StabilizerDef {
    pub fn weight(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbor(&self, dir: Direction) -> Option<usize> {
        self.neighbors
            .iter()
            .find(|(d, _)| *d == dir)
            .map(|&(_, q)| q)
    }

    pub fn data(&self) -> impl Iterator<Item = usize> + '_ {
        self.neighbors.iter().map(|&(_, q)| q)
    }

    pub fn pauli(&self) -> PauliString {
        match self.pauli_type {
            PauliType::X => PauliString::from_supports(self.data(), []),
            PauliType::Z => PauliString::from_supports([], self.data()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Layout {
    pub kind: CodeKind,
    pub d: usize,
    /// Grid coordinate of every qubit; ids are row-major in these.
    pub coords: Vec<(i64, i64)>,
    pub data_qubits: Vec<usize>,
    pub stabilizers: Vec<StabilizerDef>,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
    data_index: Vec<Option<usize>>,
    stabilizer_basis: RowBasis,
}

enum Role {
    Data,
    Ancilla(PauliType),
}

pub fn build_layout(kind: CodeKind, d: usize) -> Result<Layout> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::Layout(format!(
            "distance must be odd and at least 3, got {d}"
        )));
    }
    let di = d as i64;
    let mut sites: Vec<((i64, i64), Role)> = Vec::new();
    match kind {
        CodeKind::Unrotated => {
            for r in 0..2 * di - 1 {
                for c in 0..2 * di - 1 {
                    let role = match (r % 2, c % 2) {
                        (0, 0) | (1, 1) => Role::Data,
                        (1, 0) => Role::Ancilla(PauliType::X),
                        _ => Role::Ancilla(PauliType::Z),
                    };
                    sites.push(((r, c), role));
                }
            }
        }
        CodeKind::Rotated => {
            for r in 0..=2 * di {
                for c in 0..=2 * di {
                    if r % 2 == 1 && c % 2 == 1 {
                        sites.push(((r, c), Role::Data));
                    } else if r % 2 == 0 && c % 2 == 0 {
                        let (i, j) = (r / 2, c / 2);
                        let t = if (i + j) % 2 == 0 {
                            PauliType::X
                        } else {
                            PauliType::Z
                        };
                        let row_edge = i == 0 || i == di;
                        let col_edge = j == 0 || j == di;
                        let keep = match (row_edge, col_edge) {
                            (false, false) => true,
                            (true, false) => t == PauliType::Z,
                            (false, true) => t == PauliType::X,
                            (true, true) => false,
                        };
                        if keep {
                            sites.push(((r, c), Role::Ancilla(t)));
                        }
                    }
                }
            }
        }
    }

    let coords: Vec<(i64, i64)> = sites.iter().map(|(rc, _)| *rc).collect();
    let lookup = |rc: (i64, i64)| coords.binary_search(&rc).ok();
    let mut data_qubits = Vec::new();
    let mut data_index = vec![None; coords.len()];
    for (q, (_, role)) in sites.iter().enumerate() {
        if matches!(role, Role::Data) {
            data_index[q] = Some(data_qubits.len());
            data_qubits.push(q);
        }
    }
    let is_data = |rc: (i64, i64)| lookup(rc).filter(|&q| data_index[q].is_some());

    let mut stabilizers = Vec::new();
    for (q, ((r, c), role)) in sites.iter().enumerate() {
        let Role::Ancilla(t) = role else { continue };
        let offsets = match kind {
            CodeKind::Unrotated => [(-1, 0), (0, 1), (1, 0), (0, -1)],
            CodeKind::Rotated => [(-1, -1), (-1, 1), (1, 1), (1, -1)],
        };
        let neighbors = Direction::ALL
            .iter()
            .zip(offsets)
            .filter_map(|(&dir, (dr, dc))| is_data((r + dr, c + dc)).map(|n| (dir, n)))
            .collect();
        let class = match kind {
            CodeKind::Unrotated => ((r / 2 + c / 2) % 2) as u8,
            CodeKind::Rotated => ((r / 2) % 2) as u8,
        };
        stabilizers.push(StabilizerDef {
            pauli_type: *t,
            ancilla: q,
            neighbors,
            class,
        });
    }

    let (lz, lx): (Vec<usize>, Vec<usize>) = match kind {
        CodeKind::Unrotated => (
            (0..di).map(|i| is_data((2 * i, 0)).unwrap()).collect(),
            (0..di).map(|j| is_data((0, 2 * j)).unwrap()).collect(),
        ),
        CodeKind::Rotated => (
            (0..di).map(|i| is_data((2 * i + 1, 1)).unwrap()).collect(),
            (0..di).map(|j| is_data((1, 2 * j + 1)).unwrap()).collect(),
        ),
    };

    let mut layout = Layout {
        kind,
        d,
        coords,
        data_qubits,
        stabilizers,
        logical_x: PauliString::from_supports(lx, []),
        logical_z: PauliString::from_supports([], lz),
        data_index,
        stabilizer_basis: RowBasis::default(),
    };
    let rows: Vec<BitVec> = layout
        .stabilizers
        .iter()
        .map(|s| layout.symplectic_unchecked(&s.pauli()))
        .collect();
    layout.stabilizer_basis = RowBasis::from_rows(2 * layout.n_data(), &rows);
    Ok(layout)
}

impl Layout {
    pub fn n_data(&self) -> usize {
        self.data_qubits.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.coords.len()
    }

    pub fn is_data(&self, q: usize) -> bool {
        self.data_index.get(q).is_some_and(|i| i.is_some())
    }

    /// Position of data qubit `q` within `data_qubits`.
    pub fn data_position(&self, q: usize) -> Option<usize> {
        self.data_index.get(q).copied().flatten()
    }

    pub fn stabilizers_of(&self, t: PauliType) -> impl Iterator<Item = (usize, &StabilizerDef)> {
        self.stabilizers
            .iter()
            .enumerate()
            .filter(move |(_, s)| s.pauli_type == t)
    }

    pub fn count(&self, t: PauliType) -> usize {
        self.stabilizers_of(t).count()
    }

    pub fn logical(&self, t: PauliType) -> &PauliString {
        match t {
            PauliType::X => &self.logical_x,
            PauliType::Z => &self.logical_z,
        }
    }

    pub fn check_support(&self, e: &PauliString) -> Result<()> {
        match e.support().into_iter().find(|&q| !self.is_data(q)) {
            Some(q) => Err(Error::Layout(format!("qubit {q} is not a data qubit"))),
            None => Ok(()),
        }
    }

    fn symplectic_unchecked(&self, e: &PauliString) -> BitVec {
        let n = self.n_data();
        let mut v = BitVec::zeros(2 * n);
        for &q in e.x_support() {
            if let Some(i) = self.data_position(q) {
                v.toggle(i);
            }
        }
        for &q in e.z_support() {
            if let Some(i) = self.data_position(q) {
                v.toggle(n + i);
            }
        }
        v
    }

    /// Binary (x | z) vector of a data-qubit Pauli.
    pub fn symplectic(&self, e: &PauliString) -> Result<BitVec> {
        self.check_support(e)?;
        Ok(self.symplectic_unchecked(e))
    }

    pub fn syndrome(&self, e: &PauliString) -> Result<BitVec> {
        self.check_support(e)?;
        Ok(self.syndrome_unchecked(e))
    }

    /// Syndrome of `e`, ignoring any support on ancillas.
    pub fn syndrome_unchecked(&self, e: &PauliString) -> BitVec {
        let mut s = BitVec::zeros(self.stabilizers.len());
        for (i, stab) in self.stabilizers.iter().enumerate() {
            let hits = match stab.pauli_type {
                PauliType::X => stab.data().filter(|q| e.z_support().contains(q)).count(),
                PauliType::Z => stab.data().filter(|q| e.x_support().contains(q)).count(),
            };
            if hits % 2 == 1 {
                s.set(i, true);
            }
        }
        s
    }

    /// Canonical representative of the coset `e · <stabilizers>` in symplectic form.
    pub fn coset_key(&self, e: &PauliString) -> BitVec {
        self.stabilizer_basis.reduce(self.symplectic_unchecked(e))
    }

    pub fn reduce_symplectic(&self, v: BitVec) -> BitVec {
        self.stabilizer_basis.reduce(v)
    }

    pub fn in_stabilizer_group(&self, e: &PauliString) -> bool {
        self.check_support(e).is_ok() && self.coset_key(e).is_zero()
    }

    /// `(<logical_x, e>, <logical_z, e>)` as a two-bit vector.
    pub fn logical_action(&self, e: &PauliString) -> BitVec {
        let mut v = BitVec::zeros(2);
        v.set(0, self.logical_x.anticommutes(e));
        v.set(1, self.logical_z.anticommutes(e));
        v
    }

    /// Exhaustive minimum weight of a nontrivial logical, split by Pauli type.
    pub fn code_distance_bruteforce(&self) -> Result<usize> {
        const MAX_DATA: usize = 16;
        let n = self.n_data();
        if n > MAX_DATA {
            return Err(Error::Layout(format!(
                "brute-force distance limited to {MAX_DATA} data qubits, layout has {n}"
            )));
        }
        let mut best = usize::MAX;
        for t in [PauliType::X, PauliType::Z] {
            for mask in 1u32..(1 << n) {
                let w = mask.count_ones() as usize;
                if w >= best {
                    continue;
                }
                let support = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| self.data_qubits[i]);
                let e = match t {
                    PauliType::X => PauliString::from_supports(support, []),
                    PauliType::Z => PauliString::from_supports([], support),
                };
                if self.syndrome_unchecked(&e).is_zero() && !self.logical_action(&e).is_zero() {
                    best = w;
                }
            }
        }
        Ok(best)
    }

    /// Number of qubits including ancillas for a patch of this kind.
    pub fn total_qubits(kind: CodeKind, d: usize) -> usize {
        match kind {
            CodeKind::Rotated => 2 * d * d - 1,
            CodeKind::Unrotated => 4 * d * d - 4 * d + 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_patch_counts() {
        let u = build_layout(CodeKind::Unrotated, 3).unwrap();
        assert_eq!(u.n_data(), 13);
        assert_eq!(u.stabilizers.len(), 12);
        assert_eq!(u.count(PauliType::X), 6);
        assert_eq!(u.n_qubits(), 25);

        let r = build_layout(CodeKind::Rotated, 3).unwrap();
        assert_eq!(r.n_data(), 9);
        assert_eq!(r.stabilizers.len(), 8);
        assert_eq!(r.n_qubits(), 17);
    }

    #[test]
    fn unrotated_five_weights() {
        let u = build_layout(CodeKind::Unrotated, 5).unwrap();
        assert_eq!(u.n_data(), 41);
        let w4 = u.stabilizers.iter().filter(|s| s.weight() == 4).count();
        let w3 = u.stabilizers.iter().filter(|s| s.weight() == 3).count();
        assert_eq!((w4, w3), (24, 16));
    }

    #[test]
    fn rejects_bad_distance() {
        assert!(build_layout(CodeKind::Rotated, 4).is_err());
        assert!(build_layout(CodeKind::Unrotated, 1).is_err());
    }

    #[test]
    fn single_bulk_error_syndrome() {
        let u = build_layout(CodeKind::Unrotated, 3).unwrap();
        // (2,2) is the centre of the grid, a bulk data qubit.
        let q = u.coords.binary_search(&(2, 2)).unwrap();
        let s = u.syndrome(&PauliString::from_supports([q], [])).unwrap();
        let flagged: Vec<_> = s.iter_ones().collect();
        assert_eq!(flagged.len(), 2);
        for i in flagged {
            assert_eq!(u.stabilizers[i].pauli_type, PauliType::Z);
            assert!(u.stabilizers[i].data().any(|x| x == q));
        }
    }

    #[test]
    fn group_membership() {
        let u = build_layout(CodeKind::Unrotated, 3).unwrap();
        let zs: Vec<_> = u.stabilizers_of(PauliType::Z).map(|(_, s)| s.pauli()).collect();
        assert!(u.in_stabilizer_group(&PauliString::identity()));
        assert!(u.in_stabilizer_group(&zs[0].multiply(&zs[1])));
        assert!(!u.in_stabilizer_group(&u.logical_z));
        assert!(u.syndrome(&PauliString::from_supports([u.stabilizers[0].ancilla], [])).is_err());
    }

    #[test]
    fn logical_actions() {
        let r = build_layout(CodeKind::Rotated, 3).unwrap();
        assert_eq!(r.logical_action(&r.logical_z).iter_ones().collect::<Vec<_>>(), vec![0]);
        assert!(r.logical_action(&r.stabilizers[0].pauli()).is_zero());
        let q = *r.logical_x.x_support().iter().next().unwrap();
        let e = PauliString::from_supports([], [q]);
        assert_eq!(r.logical_action(&e).iter_ones().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn brute_force_distance() {
        for kind in [CodeKind::Rotated, CodeKind::Unrotated] {
            let l = build_layout(kind, 3).unwrap();
            assert_eq!(l.code_distance_bruteforce().unwrap(), 3);
        }
        let big = build_layout(CodeKind::Unrotated, 5).unwrap();
        assert!(big.code_distance_bruteforce().is_err());
    }
}
