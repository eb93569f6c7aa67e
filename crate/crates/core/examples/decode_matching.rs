//! Sample shots from a model and decode them with matching and belief-matching.

use ftsurf::circuit::{build_memory_circuit, Ordering, Style};
use ftsurf::decoder::{BpConfig, Decoder, Method};
use ftsurf::dem::{build_dem, decompose_dem, sample};
use ftsurf::layout::{build_layout, CodeKind, PauliType};
use ftsurf::noise::{enumerate_faults, NoiseKind, NoiseModel};

fn main() -> ftsurf::Result<()> {
    let d = 5;
    let l = build_layout(CodeKind::Unrotated, d)?;
    let c = build_memory_circuit(&l, PauliType::Z, d, &Ordering::parse(Style::Czz, "24")?, false)?;
    let dem = build_dem(&c, &enumerate_faults(&c, &NoiseModel::new(NoiseKind::NI, 0.005))?)?;
    let ddem = decompose_dem(&dem);
    let shots = sample(&dem, 2000, 1);
    for method in [Method::Pm, Method::Bm] {
        let dec = Decoder::new(method, &dem, &ddem, BpConfig::new(d))?;
        let mut failures = 0;
        for s in 0..shots.shots {
            let p = dec.decode(&shots.flagged(s))?;
            failures += usize::from(p.observables != shots.observable_mask(s));
        }
        println!("{method}: {failures} / {} logical failures", shots.shots);
    }
    Ok(())
}
