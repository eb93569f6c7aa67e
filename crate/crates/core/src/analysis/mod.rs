//! Memory experiments, rate statistics, threshold and resource fits.

pub mod memory;
pub mod resources;
pub mod stats;
pub mod sweep;
pub mod threshold;

pub use memory::{run_memory, run_memory_xz, CombinedResult, MemoryConfig, MemoryResult, Prepared};
pub use resources::{fit_resource_curve, qubits_to_target, resource_scan, ResourceFit, ResourcePoint};
pub use stats::{combine_xz, fit_scaling_exponent, SlopeFit};
pub use sweep::{lambda_sweep, LambdaSweep, SweepRow};
pub use threshold::{fit_threshold, Curve, CurvePoint, ThresholdFit, ThresholdScan};
