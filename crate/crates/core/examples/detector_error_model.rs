//! Detector error model of a noisy memory circuit and its graphlike decomposition.

use ftsurf::circuit::{build_memory_circuit, Ordering, Style};
use ftsurf::dem::{build_dem, decompose_dem};
use ftsurf::layout::{build_layout, CodeKind, PauliType};
use ftsurf::noise::{enumerate_faults, NoiseKind, NoiseModel};

fn main() -> ftsurf::Result<()> {
    let l = build_layout(CodeKind::Unrotated, 3)?;
    let o = Ordering::parse(Style::Czz, "24")?;
    let c = build_memory_circuit(&l, PauliType::Z, 3, &o, false)?;
    let faults = enumerate_faults(&c, &NoiseModel::new(NoiseKind::SI, 1e-3))?;
    let dem = build_dem(&c, &faults)?;
    let ddem = decompose_dem(&dem);
    ddem.check_residue(&dem)?;
    println!(
        "{} elementary faults -> {} channels ({} hyperedges) -> {} edges",
        faults.faults.len(),
        dem.channels.len(),
        dem.n_hyperedges(),
        ddem.edges.len()
    );
    println!("{} channels whose split changes the observable", ddem.mismatched.len());
    for line in dem.to_text().lines().take(6) {
        println!("  {line}");
    }
    Ok(())
}
