//! Threshold of unrotated CZZ circuits from a small finite-size-scaling scan.

use ftsurf::analysis::{MemoryConfig, ThresholdScan};
use ftsurf::circuit::Style;
use ftsurf::layout::CodeKind;
use ftsurf::noise::NoiseKind;

fn main() -> ftsurf::Result<()> {
    let mut base = MemoryConfig::new(CodeKind::Unrotated, 3, Style::Czz, "24", NoiseKind::NI, 0.01);
    base.shots = 2000;
    let ps = [0.006, 0.008, 0.01, 0.012, 0.014];
    let scan = ThresholdScan::run(&base, &[3, 5, 7], &ps)?;
    for c in &scan.curves {
        let row: Vec<String> = c.points.iter().map(|pt| format!("{:.3}", pt.p_l)).collect();
        println!("d={}: {}", c.d, row.join(" "));
    }
    match scan.fit(0) {
        Ok(f) => println!("p_th = {:.3}% ± {:.3}%, nu = {:.2}", 100.0 * f.p_th, 100.0 * f.p_th_err, f.nu),
        Err(e) => println!("fit: {e}"),
    }
    Ok(())
}
