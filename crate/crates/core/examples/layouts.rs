//! Rotated and unrotated surface-code patches.

use ftsurf::layout::{build_layout, CodeKind, Layout, PauliType};

fn main() -> ftsurf::Result<()> {
    for kind in [CodeKind::Rotated, CodeKind::Unrotated] {
        for d in [3, 5, 7] {
            let l = build_layout(kind, d)?;
            println!(
                "{kind:>9} d={d}: {} data, {} X checks, {} Z checks, {} qubits (formula {})",
                l.n_data(),
                l.count(PauliType::X),
                l.count(PauliType::Z),
                l.n_qubits(),
                Layout::total_qubits(kind, d),
            );
        }
    }
    let l = build_layout(CodeKind::Unrotated, 3)?;
    println!("unrotated d=3 logical X = {}, Z = {}", l.logical_x, l.logical_z);
    println!("brute-force distance: {}", l.code_distance_bruteforce()?);
    Ok(())
}
