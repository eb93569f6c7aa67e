//! Distinguishability of fault paths and the fault distance of memory circuits.

use ftsurf::circuit::{Ordering, Style};
use ftsurf::layout::{build_layout, CodeKind};
use ftsurf::verify::{check_layout, memory_fault_distance, verify_witness, Budget};

fn main() -> ftsurf::Result<()> {
    for (kind, d, ord) in [
        (CodeKind::Rotated, 3, "ne"),
        (CodeKind::Unrotated, 3, "ne"),
        (CodeKind::Unrotated, 3, "ns"),
        (CodeKind::Unrotated, 5, "ne"),
    ] {
        let l = build_layout(kind, d)?;
        let o = Ordering::parse(Style::Czz, ord)?;
        let (c, r) = check_layout(&l, &o, 1, (d - 1) / 2, Budget::default())?;
        let replay = match &r.witness {
            Some(w) => format!(", witness replays: {}", verify_witness(&c, &l, w)?),
            None => String::new(),
        };
        println!("{kind} d={d} {ord}: largest distinguishable order {}{replay}", r.largest_distinguishable_order);
    }
    let l = build_layout(CodeKind::Unrotated, 3)?;
    let fd = memory_fault_distance(&l, &Ordering::parse(Style::Czz, "24")?, 3, 3, Budget::default())?;
    println!("unrotated d=3 ordering 24 memory: fault distance {}", fd.distance.value());
    Ok(())
}
