//! How much worse CZZ gates may be than CZ gates before the advantage is lost.

use ftsurf::analysis::{lambda_sweep, MemoryConfig};
use ftsurf::circuit::Style;
use ftsurf::layout::CodeKind;
use ftsurf::noise::NoiseKind;

fn main() -> ftsurf::Result<()> {
    let mut base = MemoryConfig::new(CodeKind::Unrotated, 5, Style::Czz, "24", NoiseKind::NI, 0.003);
    base.shots = 20_000;
    let sweep = lambda_sweep(&base, &[1.0, 1.25, 1.5, 1.75, 2.0], "default")?;
    println!("CZ baseline pL = {:.3e}", sweep.baseline_p_l);
    for r in &sweep.rows {
        println!("lambda {:.2}: pL = {:.3e} ± {:.1e}", r.lambda, r.p_l, r.stderr);
    }
    match sweep.crossing {
        Some(l) => println!("CZZ matches CZ at lambda ≈ {l:.2}"),
        None => println!("no crossing in range"),
    }
    Ok(())
}
