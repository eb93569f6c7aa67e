use proptest::prelude::*;

use ftsurf::circuit::{build_memory_circuit, Circuit, Ordering, Style};
use ftsurf::decoder::graph::UNREACHABLE;
use ftsurf::decoder::{brute_force, solve, Distances};
use ftsurf::dem::{sample, Channel, DetectorErrorModel, ShotBatch};
use ftsurf::layout::{build_layout, CodeKind, PauliType};
use ftsurf::noise::rescale_depolarizing;
use ftsurf::pauli::{Gate, PauliString};

const QUBITS: usize = 5;

fn pauli() -> impl Strategy<Value = PauliString> {
    (0u32..1 << QUBITS, 0u32..1 << QUBITS).prop_map(|(x, z)| {
        let bits = |m: u32| (0..QUBITS).filter(move |q| m >> q & 1 == 1);
        PauliString::from_supports(bits(x), bits(z))
    })
}

fn gate() -> impl Strategy<Value = Gate> {
    prop_oneof![
        (0..QUBITS).prop_map(Gate::H),
        (0..QUBITS, 0..QUBITS).prop_filter_map("distinct", |(a, b)| (a != b).then_some(Gate::Cz(a, b))),
        (0..QUBITS, 0..QUBITS, 0..QUBITS)
            .prop_filter_map("distinct", |(a, b, c)| (a != b && b != c && a != c).then_some(Gate::Czz(a, b, c))),
    ]
}

fn dem() -> impl Strategy<Value = DetectorErrorModel> {
    let channel = (
        1e-6f64..0.4,
        proptest::collection::btree_set(0u32..12, 0..5),
        0u64..4,
    )
        .prop_filter("trivial channel", |(_, dets, obs)| !dets.is_empty() || *obs != 0)
        .prop_map(|(probability, dets, observables)| Channel {
            probability,
            detectors: dets.into_iter().collect(),
            observables,
        });
    proptest::collection::vec(channel, 1..20).prop_map(|channels| DetectorErrorModel {
        n_detectors: 12,
        n_observables: 2,
        provenance: vec![Vec::new(); channels.len()],
        channels,
        detector_classes: Vec::new(),
    })
}

/// Exact distribution of the XOR of independent events `k` with probability `q`.
fn xor_distribution(m: usize, q: f64) -> Vec<f64> {
    let mut dist = vec![0.0; m];
    dist[0] = 1.0;
    for k in 1..m {
        let mut next = vec![0.0; m];
        for (s, &w) in dist.iter().enumerate() {
            next[s] += w * (1.0 - q);
            next[s ^ k] += w * q;
        }
        dist = next;
    }
    dist
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn multiplication_is_associative_and_self_inverse(a in pauli(), b in pauli(), c in pauli()) {
        prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
        prop_assert!(a.multiply(&a).is_identity());
        prop_assert_eq!(a.anticommutes(&b), b.anticommutes(&a));
    }

    #[test]
    fn conjugation_preserves_commutation(a in pauli(), b in pauli(), g in gate()) {
        let (ca, cb) = (a.conjugated_by(&g), b.conjugated_by(&g));
        prop_assert_eq!(ca.anticommutes(&cb), a.anticommutes(&b));
        prop_assert_eq!(ca.multiply(&cb), a.multiply(&b).conjugated_by(&g));
        // every gate here is its own inverse
        prop_assert_eq!(ca.conjugated_by(&g), a);
    }

    #[test]
    fn text_form_round_trips(a in pauli()) {
        prop_assert_eq!(a.to_string().parse::<PauliString>().unwrap(), a);
    }

    #[test]
    fn rescaled_events_reproduce_depolarizing(n in 1usize..=3, frac in 0.0f64..1.0) {
        let m = 1usize << (2 * n);
        let p = frac * (m - 1) as f64 / m as f64;
        let q = rescale_depolarizing(p, n).unwrap();
        let dist = xor_distribution(m, q);
        prop_assert!((dist[0] - (1.0 - p)).abs() < 1e-9);
        for &w in &dist[1..] {
            prop_assert!((w - p / (m - 1) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn dem_text_round_trips(d in dem()) {
        let text = d.to_text();
        let back = DetectorErrorModel::from_text(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back.channels.len(), d.channels.len());
    }

    #[test]
    fn b8_round_trips(d in dem(), shots in 1usize..600, seed in any::<u64>()) {
        let batch = sample(&d, shots, seed);
        let (dets, obs) = batch.to_b8();
        prop_assert_eq!(dets.len(), shots * 2);
        let back = ShotBatch::from_b8(&dets, &obs, d.n_detectors, d.n_observables).unwrap();
        for s in 0..shots {
            prop_assert_eq!(back.flagged(s), batch.flagged(s));
            prop_assert_eq!(back.observable_mask(s), batch.observable_mask(s));
        }
    }

    #[test]
    fn sampling_is_a_function_of_the_seed(d in dem(), shots in 1usize..600, seed in any::<u64>()) {
        let a = sample(&d, shots, seed);
        let b = sample(&d, shots, seed);
        prop_assert_eq!(a.to_b8(), b.to_b8());
        // complete 256-shot blocks do not depend on the run length
        let longer = sample(&d, shots + 300, seed);
        for s in 0..shots / 256 * 256 {
            prop_assert_eq!(longer.flagged(s), a.flagged(s));
        }
    }

    #[test]
    fn matching_is_optimal(
        k in 1usize..=9,
        weights in proptest::collection::vec(1i64..1000, 81),
        boundary in proptest::collection::vec(proptest::option::weighted(0.7, 1i64..1000), 9),
        obs in proptest::collection::vec(0u64..4, 81),
    ) {
        let dist = Distances::from_fn(k, |i, j| match j {
            Some(j) => {
                let (a, b) = (i.min(j), i.max(j));
                (weights[a * 9 + b], obs[a * 9 + b])
            }
            None => (boundary[i].unwrap_or(UNREACHABLE), obs[i * 9 + i]),
        });
        let flagged: Vec<u32> = (0..k as u32).collect();
        let fast = solve(&flagged, &dist);
        let slow = brute_force(&flagged, &dist);
        match (fast, slow) {
            (Ok(a), Ok((b, _))) => {
                prop_assert_eq!(a.weight, b.weight);
                prop_assert!(a.covers(&flagged));
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "solve {:?} brute force {:?}", a, b),
        }
    }
}

#[test]
fn built_circuits_round_trip_as_text() {
    for (kind, style, ord) in [
        (CodeKind::Rotated, Style::Cz, "default"),
        (CodeKind::Unrotated, Style::Czz, "24"),
        (CodeKind::Unrotated, Style::Czz, "21"),
    ] {
        let l = build_layout(kind, 3).unwrap();
        for basis in [PauliType::X, PauliType::Z] {
            let c = build_memory_circuit(&l, basis, 3, &Ordering::parse(style, ord).unwrap(), false).unwrap();
            let text = c.to_text();
            assert_eq!(Circuit::from_text(&text).unwrap().to_text(), text);
        }
    }
}
