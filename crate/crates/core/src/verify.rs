//! Fault-set distinguishability and fault-distance searches.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::time::Instant;

use serde::Serialize;

use crate::bits::BitVec;
use crate::circuit::{build_gadget_circuit, build_memory_circuit, Circuit, Ordering};
use crate::dem::{build_dem, fault_signatures, propagate_path, DetectorErrorModel};
use crate::error::{Error, Result};
use crate::layout::{Layout, PauliType};
use crate::noise::{structural_faults, FaultSet};
use crate::pauli::PauliString;

/// Rough cost of one stored fault path in the bucket map.
const BYTES_PER_PATH: usize = 72;

#[derive(Clone, Debug, Serialize)]
pub struct WitnessFault {
    pub fault: usize,
    pub location: usize,
    pub position: usize,
    pub pauli: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub first: Vec<WitnessFault>,
    pub second: Vec<WitnessFault>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistinguishabilityReport {
    /// Largest `w <= t` for which all paths of order at most `w` are
    /// distinguishable; 0 when single faults already collide.
    pub largest_distinguishable_order: usize,
    pub witness: Option<Witness>,
    /// False when the memory budget stopped the search early.
    pub complete: bool,
    pub elementary_faults: usize,
    pub signature_classes: usize,
    pub paths_checked: u64,
    pub peak_paths_stored: usize,
    pub elapsed_seconds: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_bytes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_bytes: 2 << 30,
        }
    }
}

/// Packs a bit vector into 128 bits: exact when it fits, a hash otherwise.
fn fingerprint(parts: &[&BitVec]) -> u128 {
    let total: usize = parts.iter().map(|p| p.len()).sum();
    if total <= 128 {
        let mut out = 0u128;
        let mut shift = 0;
        for p in parts {
            for i in p.iter_ones() {
                out |= 1u128 << (shift + i);
            }
            shift += p.len();
        }
        return out;
    }
    let mut lo = DefaultHasher::new();
    let mut hi = DefaultHasher::new();
    0xa5u8.hash(&mut hi);
    for p in parts {
        p.hash(&mut lo);
        p.hash(&mut hi);
    }
    (lo.finish() as u128) | ((hi.finish() as u128) << 64)
}

/// Faults grouped by identical (detectors, final-error coset).
struct Class {
    key: u128,
    residual: u128,
    members: Vec<usize>,
    /// The location shared by all members, if there is only one.
    single_location: Option<usize>,
}

struct Classified {
    classes: Vec<Class>,
}

fn classify(circuit: &Circuit, layout: &Layout, faults: &FaultSet) -> Result<Classified> {
    let n_det = circuit.n_detectors();
    let n_obs = circuit.n_observables();
    let n_data = layout.n_data();
    if circuit.data_qubits != layout.data_qubits {
        return Err(Error::Verify("circuit and layout disagree on data qubits".into()));
    }
    let sigs = fault_signatures(circuit, faults, true)?;
    let mut index: HashMap<(u128, u128), usize> = HashMap::new();
    let mut classes: Vec<Class> = Vec::new();
    for (i, sig) in sigs.iter().enumerate() {
        let mut dets = BitVec::zeros(n_det);
        let mut e = BitVec::zeros(2 * n_data);
        for j in sig.iter_ones() {
            if j < n_det {
                dets.set(j, true);
            } else if j >= n_det + n_obs {
                e.set(j - n_det - n_obs, true);
            }
        }
        let residual = layout.reduce_symplectic(e);
        let syndrome = symplectic_syndrome(layout, &residual);
        let key = fingerprint(&[&dets, &syndrome]);
        let res = fingerprint(&[&residual]);
        let loc = faults.faults[i].location;
        match index.get(&(key, res)) {
            Some(&c) => {
                let class = &mut classes[c];
                class.members.push(i);
                if class.single_location != Some(loc) {
                    class.single_location = None;
                }
            }
            None => {
                index.insert((key, res), classes.len());
                classes.push(Class {
                    key,
                    residual: res,
                    members: vec![i],
                    single_location: Some(loc),
                });
            }
        }
    }
    Ok(Classified { classes })
}

fn symplectic_syndrome(layout: &Layout, e: &BitVec) -> BitVec {
    let n = layout.n_data();
    let p = PauliString::from_supports(
        (0..n).filter(|&i| e.get(i)).map(|i| layout.data_qubits[i]),
        (0..n).filter(|&i| e.get(n + i)).map(|i| layout.data_qubits[i]),
    );
    layout.syndrome_unchecked(&p)
}

/// A fault path as class ids (at most two).
type ClassPath = Vec<u32>;

fn concrete_path(classes: &[Class], faults: &FaultSet, path: &ClassPath) -> Vec<usize> {
    match path.as_slice() {
        [] => Vec::new(),
        [a] => vec![classes[*a as usize].members[0]],
        [a, b] => {
            let (ma, mb) = (&classes[*a as usize].members, &classes[*b as usize].members);
            for &fa in ma {
                for &fb in mb {
                    if faults.faults[fa].location != faults.faults[fb].location {
                        return vec![fa, fb];
                    }
                }
            }
            unreachable!("pair classes are only formed when realisable")
        }
        _ => unreachable!("paths hold at most two classes"),
    }
}

fn describe(circuit: &Circuit, faults: &FaultSet, ids: &[usize]) -> Vec<WitnessFault> {
    let _ = circuit;
    ids.iter()
        .map(|&f| {
            let fault = &faults.faults[f];
            WitnessFault {
                fault: f,
                location: fault.location,
                position: faults.locations[fault.location].position,
                pauli: fault.pauli.to_string(),
            }
        })
        .collect()
}

/// Checks whether all fault paths of order at most `t` are distinguishable.
///
/// Paths are bucketed by (detectors, syndrome of the final error); two paths
/// in one bucket with final errors in different stabilizer cosets make the
/// set indistinguishable.
pub fn check_distinguishability(
    circuit: &Circuit,
    layout: &Layout,
    t: usize,
    budget: Budget,
) -> Result<DistinguishabilityReport> {
    if t == 0 {
        return Err(Error::Verify("order t must be at least 1".into()));
    }
    if t > 2 {
        return Err(Error::Verify("exhaustive checks are limited to order 2".into()));
    }
    let started = Instant::now();
    let faults = structural_faults(circuit);
    let Classified { classes } = classify(circuit, layout, &faults)?;
    let max_paths = budget.max_bytes / BYTES_PER_PATH;

    // bucket key -> (residual, path)
    let mut buckets: HashMap<u128, (u128, ClassPath)> = HashMap::new();
    buckets.insert(0, (0, Vec::new()));
    let mut checked: u64 = 1;
    let report = |largest: usize,
                      witness: Option<(ClassPath, ClassPath)>,
                      complete: bool,
                      checked: u64,
                      stored: usize| {
        DistinguishabilityReport {
            largest_distinguishable_order: largest,
            witness: witness.map(|(a, b)| Witness {
                first: describe(circuit, &faults, &concrete_path(&classes, &faults, &a)),
                second: describe(circuit, &faults, &concrete_path(&classes, &faults, &b)),
            }),
            complete,
            elementary_faults: faults.faults.len(),
            signature_classes: classes.len(),
            paths_checked: checked,
            peak_paths_stored: stored,
            elapsed_seconds: started.elapsed().as_secs_f64(),
        }
    };

    let insert = |buckets: &mut HashMap<u128, (u128, ClassPath)>,
                      key: u128,
                      residual: u128,
                      path: ClassPath|
     -> Option<(ClassPath, ClassPath)> {
        match buckets.get(&key) {
            Some((r, other)) if *r != residual => Some((other.clone(), path)),
            Some(_) => None,
            None => {
                buckets.insert(key, (residual, path));
                None
            }
        }
    };

    for (i, c) in classes.iter().enumerate() {
        checked += 1;
        if let Some(w) = insert(&mut buckets, c.key, c.residual, vec![i as u32]) {
            let stored = buckets.len();
            return Ok(report(0, Some(w), true, checked, stored));
        }
    }
    if t == 1 {
        let stored = buckets.len();
        return Ok(report(1, None, true, checked, stored));
    }
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            let (a, b) = (&classes[i], &classes[j]);
            if a.single_location.is_some() && a.single_location == b.single_location {
                continue;
            }
            checked += 1;
            let key = a.key ^ b.key;
            let res = a.residual ^ b.residual;
            if let Some(w) = insert(&mut buckets, key, res, vec![i as u32, j as u32]) {
                let stored = buckets.len();
                return Ok(report(1, Some(w), true, checked, stored));
            }
            if buckets.len() > max_paths {
                let stored = buckets.len();
                return Ok(report(1, None, false, checked, stored));
            }
        }
    }
    let stored = buckets.len();
    Ok(report(2, None, true, checked, stored))
}

/// Replays a witness by forward propagation and checks that the two paths
/// share detectors and syndrome while their errors differ by a logical.
pub fn verify_witness(circuit: &Circuit, layout: &Layout, witness: &Witness) -> Result<bool> {
    let run = |path: &[WitnessFault]| -> Result<_> {
        let paulis: Vec<PauliString> = path
            .iter()
            .map(|f| f.pauli.parse())
            .collect::<Result<_>>()?;
        let items: Vec<(usize, &PauliString)> = path
            .iter()
            .zip(&paulis)
            .map(|(f, p)| (f.position, p))
            .collect();
        Ok(propagate_path(circuit, &items))
    };
    let a = run(&witness.first)?;
    let b = run(&witness.second)?;
    let same_detectors = a.detectors == b.detectors;
    let same_syndrome =
        layout.syndrome(&a.final_error)? == layout.syndrome(&b.final_error)?;
    let product = a.final_error.multiply(&b.final_error);
    Ok(same_detectors && same_syndrome && !layout.in_stabilizer_group(&product))
}

/// Builds the readout gadget and checks it.
pub fn check_layout(
    layout: &Layout,
    ordering: &Ordering,
    rounds: usize,
    t: usize,
    budget: Budget,
) -> Result<(Circuit, DistinguishabilityReport)> {
    let circuit = build_gadget_circuit(layout, rounds, ordering, true)?;
    let report = check_distinguishability(&circuit, layout, t, budget)?;
    Ok((circuit, report))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FaultDistance {
    Exact(usize),
    /// Nothing found up to `w_max`; the distance is at least this value.
    AtLeast(usize),
}

impl FaultDistance {
    pub fn value(&self) -> usize {
        match self {
            FaultDistance::Exact(w) | FaultDistance::AtLeast(w) => *w,
        }
    }
}

/// Channel ids of a minimum-weight undetected logical path, by weight.
#[derive(Clone, Debug, Serialize)]
pub struct FaultDistanceReport {
    pub distance: FaultDistance,
    pub channels: Vec<usize>,
    pub elapsed_seconds: f64,
}

/// Per detector-set fingerprint: up to two partial paths with distinct
/// observable masks.
type Half = HashMap<u128, Vec<(u64, Vec<u32>)>>;

fn subsets(n: usize, k: usize, mut f: impl FnMut(&[u32]) -> bool) {
    let mut idx: Vec<u32> = (0..k as u32).collect();
    if k > n {
        return;
    }
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if (idx[i] as usize) < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Minimum number of DEM channels whose detectors cancel while flipping an
/// observable, searched up to `w_max` by meet-in-the-middle.
pub fn fault_distance(
    dem: &DetectorErrorModel,
    w_max: usize,
    budget: Budget,
) -> Result<FaultDistanceReport> {
    if w_max == 0 {
        return Err(Error::Verify("w_max must be at least 1".into()));
    }
    let started = Instant::now();
    let n = dem.channels.len();
    let keys: Vec<u128> = dem
        .channels
        .iter()
        .map(|c| {
            let v = BitVec::from_indices(dem.n_detectors, c.detectors.iter().map(|&d| d as usize));
            fingerprint(&[&v])
        })
        .collect();
    let obs: Vec<u64> = dem.channels.iter().map(|c| c.observables).collect();
    let combine = |ids: &[u32]| {
        ids.iter()
            .fold((0u128, 0u64), |(k, o), &i| (k ^ keys[i as usize], o ^ obs[i as usize]))
    };
    let max_entries = budget.max_bytes / 64;

    let mut halves: Vec<Option<Half>> = vec![None; w_max / 2 + 1];
    for w in 1..=w_max {
        let a = w.div_ceil(2);
        let b = w / 2;
        if b > 0 && halves[b].is_none() {
            let mut half: Half = HashMap::new();
            let mut count = 0usize;
            let mut over = false;
            subsets(n, b, |ids| {
                let (k, o) = combine(ids);
                let slot = half.entry(k).or_default();
                if slot.len() < 2 && slot.iter().all(|(m, _)| *m != o) {
                    slot.push((o, ids.to_vec()));
                    count += 1;
                }
                over = count > max_entries;
                !over
            });
            if over {
                return Err(Error::Budget(format!(
                    "weight-{b} half table exceeds {} entries",
                    max_entries
                )));
            }
            halves[b] = Some(half);
        }
        let mut found: Option<Vec<u32>> = None;
        subsets(n, a, |ids| {
            let (k, o) = combine(ids);
            let hit = if b == 0 {
                (k == 0 && o != 0).then(Vec::new)
            } else {
                halves[b]
                    .as_ref()
                    .unwrap()
                    .get(&k)
                    .and_then(|v| v.iter().find(|(m, _)| *m != o))
                    .map(|(_, other)| other.clone())
            };
            if let Some(other) = hit {
                let mut all = ids.to_vec();
                all.extend(other);
                found = Some(all);
                return false;
            }
            true
        });
        if let Some(mut ids) = found {
            ids.sort_unstable();
            return Ok(FaultDistanceReport {
                distance: FaultDistance::Exact(w),
                channels: ids.into_iter().map(|i| i as usize).collect(),
                elapsed_seconds: started.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(FaultDistanceReport {
        distance: FaultDistance::AtLeast(w_max + 1),
        channels: Vec::new(),
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Structural DEM of a memory circuit: NI noise, probabilities ignored.
pub fn structural_dem(circuit: &Circuit) -> Result<DetectorErrorModel> {
    build_dem(circuit, &structural_faults(circuit))
}

/// Fault distance of a memory experiment with a concrete witness.
#[derive(Clone, Debug, Serialize)]
pub struct MemoryFaultDistance {
    pub basis: PauliType,
    pub distance: FaultDistance,
    /// One elementary fault per witness channel.
    pub witness: Vec<WitnessFault>,
    /// Forward replay of the witness flips an observable and no detector.
    pub replayed: bool,
    pub elapsed_seconds: f64,
}

/// Picks one fault per channel and replays the path forward.
fn realize(circuit: &Circuit, dem: &DetectorErrorModel, channels: &[usize]) -> Result<(Vec<WitnessFault>, bool)> {
    let faults = structural_faults(circuit);
    let sigs = fault_signatures(circuit, &faults, false)?;
    let n_det = circuit.n_detectors();
    let mut picked: Vec<usize> = Vec::new();
    for &c in channels {
        let ch = &dem.channels[c];
        let hit = sigs.iter().enumerate().find(|(i, s)| {
            let loc = faults.faults[*i].location;
            if picked.iter().any(|&f| faults.faults[f].location == loc) {
                return false;
            }
            let dets: Vec<u32> = s.iter_ones().filter(|&j| j < n_det).map(|j| j as u32).collect();
            let obs = s.iter_ones().filter(|&j| j >= n_det).fold(0u64, |m, j| m | 1 << (j - n_det));
            dets == ch.detectors && obs == ch.observables
        });
        match hit {
            Some((i, _)) => picked.push(i),
            None => return Err(Error::Verify(format!("channel {c} has no free realisation"))),
        }
    }
    let witness = describe(circuit, &faults, &picked);
    let paulis: Vec<PauliString> = picked.iter().map(|&f| faults.faults[f].pauli.clone()).collect();
    let items: Vec<(usize, &PauliString)> = witness.iter().zip(&paulis).map(|(w, p)| (w.position, p)).collect();
    let sig = propagate_path(circuit, &items);
    Ok((witness, sig.detectors.is_zero() && !sig.observables.is_zero()))
}

/// Fault distance of `rounds`-round memory experiments, minimised over both bases.
pub fn memory_fault_distance(
    layout: &Layout,
    ordering: &Ordering,
    rounds: usize,
    w_max: usize,
    budget: Budget,
) -> Result<MemoryFaultDistance> {
    let started = Instant::now();
    let mut best: Option<MemoryFaultDistance> = None;
    for basis in [PauliType::Z, PauliType::X] {
        let c = build_memory_circuit(layout, basis, rounds, ordering, true)?;
        let dem = structural_dem(&c)?;
        let r = fault_distance(&dem, w_max, budget)?;
        if best
            .as_ref()
            .is_some_and(|b| r.distance.value() >= b.distance.value())
        {
            continue;
        }
        let (witness, replayed) = match r.distance {
            FaultDistance::Exact(_) => realize(&c, &dem, &r.channels)?,
            FaultDistance::AtLeast(_) => (Vec::new(), false),
        };
        best = Some(MemoryFaultDistance {
            basis,
            distance: r.distance,
            witness,
            replayed,
            elapsed_seconds: 0.0,
        });
    }
    let mut best = best.expect("two bases searched");
    best.elapsed_seconds = started.elapsed().as_secs_f64();
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Style;
    use crate::layout::{build_layout, CodeKind};

    #[test]
    fn subsets_enumerates_combinations() {
        let mut n = 0;
        subsets(5, 2, |_| {
            n += 1;
            true
        });
        assert_eq!(n, 10);
    }

    #[test]
    fn fingerprint_is_exact_when_small() {
        let a = BitVec::from_indices(60, [1, 59]);
        let b = BitVec::from_indices(60, [0]);
        assert_eq!(fingerprint(&[&a, &b]), (1 << 1) | (1 << 59) | (1 << 60));
    }

    #[test]
    fn rotated_three_is_not_distinguishable() {
        let l = build_layout(CodeKind::Rotated, 3).unwrap();
        let o = Ordering::parse(Style::Czz, "ne").unwrap();
        let (c, r) = check_layout(&l, &o, 1, 1, Budget::default()).unwrap();
        assert_eq!(r.largest_distinguishable_order, 0);
        assert!(verify_witness(&c, &l, r.witness.as_ref().unwrap()).unwrap());
    }
}
