//! Qubits needed for a target logical error rate, from a joint fit over physical rates.

use ftsurf::analysis::{fit_resource_curve, qubits_to_target, resource_scan, MemoryConfig};
use ftsurf::circuit::Style;
use ftsurf::layout::CodeKind;
use ftsurf::noise::NoiseKind;

fn main() -> ftsurf::Result<()> {
    let ps = [0.002, 0.003, 0.004];
    for (kind, style, ord) in [(CodeKind::Rotated, Style::Cz, "default"), (CodeKind::Unrotated, Style::Czz, "24")] {
        let mut base = MemoryConfig::new(kind, 3, style, ord, NoiseKind::NI, ps[0]);
        base.shots = 20_000;
        let points = resource_scan(&base, &[3, 5, 7], &ps)?;
        let fit = fit_resource_curve(kind, &points)?;
        let (d, n) = qubits_to_target(&fit, 0.003, 1e-6)?;
        println!(
            "{kind} {style}: c0={:.3} c1={:.4} c2={:.3}; pL=1e-6 at p=0.3% needs d={d} ({n} qubits)",
            fit.c0, fit.c1, fit.c2
        );
    }
    Ok(())
}
