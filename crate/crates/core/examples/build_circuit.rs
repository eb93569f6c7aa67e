//! Memory circuits in both styles and their fault-location counts.

use ftsurf::circuit::{build_memory_circuit, Ordering, Style};
use ftsurf::layout::{build_layout, CodeKind, PauliType};

fn main() -> ftsurf::Result<()> {
    let l = build_layout(CodeKind::Unrotated, 3)?;
    for (style, ord) in [(Style::Cz, "default"), (Style::Czz, "24")] {
        let o = Ordering::parse(style, ord)?;
        let c = build_memory_circuit(&l, PauliType::Z, 3, &o, false)?;
        println!(
            "{style:>3}: {} ticks, {} measurements, {} detectors, {} fault locations",
            c.n_ticks(),
            c.n_measurements(),
            c.n_detectors(),
            c.count_fault_locations()
        );
    }
    let o = Ordering::parse(Style::Czz, "24")?;
    let c = build_memory_circuit(&l, PauliType::Z, 1, &o, false)?;
    for line in c.to_text().lines().take(12) {
        println!("  {line}");
    }
    Ok(())
}
