//! CZ against CZZ memory experiments at one physical error rate.

use ftsurf::analysis::{run_memory_xz, MemoryConfig};
use ftsurf::circuit::Style;
use ftsurf::layout::CodeKind;
use ftsurf::noise::NoiseKind;

fn main() -> ftsurf::Result<()> {
    for (style, ord) in [(Style::Cz, "default"), (Style::Czz, "24")] {
        for d in [3, 5] {
            let mut c = MemoryConfig::new(CodeKind::Unrotated, d, style, ord, NoiseKind::NI, 0.004);
            c.shots = 50_000;
            let r = run_memory_xz(&c)?;
            println!(
                "{style:>3} d={d}: pL = {:.3e} ± {:.1e} (X {} / Z {} failures)",
                r.p_l, r.stderr, r.x.failures, r.z.failures
            );
        }
    }
    Ok(())
}
