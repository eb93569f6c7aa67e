//! Pauli strings and their conjugation through H, CZ and CZZ.

use ftsurf::pauli::{Gate, PauliString};

fn main() -> ftsurf::Result<()> {
    let a: PauliString = "X0*Z2".parse()?;
    let b: PauliString = "Z0*Y1".parse()?;
    println!("{a} * {b} = {}", a.multiply(&b));
    println!("anticommute: {}", a.anticommutes(&b));

    // X on the shared control spreads Z onto both targets.
    let x = PauliString::single(0, ftsurf::pauli::SingleQubitPauli::X);
    for gate in [Gate::H(0), Gate::Cz(0, 1), Gate::Czz(0, 1, 2)] {
        println!("{:>4} {x} -> {}", gate.name(), x.conjugated_by(&gate));
    }
    Ok(())
}
