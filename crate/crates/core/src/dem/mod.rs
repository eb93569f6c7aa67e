pub mod decompose;
pub mod model;
pub mod propagate;
pub mod sample;

pub use decompose::{decompose_dem, DecomposedDem, Edge};
pub use model::{build_dem, fault_signatures, xor_prob, Channel, DetectorErrorModel};
pub use propagate::{backward_sweep, check_determinism, propagate_fault, propagate_path, FaultSignature};
pub use sample::{sample, ShotBatch};
