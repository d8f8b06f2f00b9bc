//! Reusable experiment drivers with serializable reports.
//!
//! Each function here packages one falsifiable claim about the delegation
//! stack — blind and open runs agree, post-selected teleportation converges
//! with squeezing, instruction streams and served states hide the program,
//! pinned nodes erase their edges, squeeze conjugation rescales cubic
//! phases — as a pure driver returning a report struct, so the same code
//! backs unit tests, the acceptance suite, examples, and the command-line
//! front end.

pub mod blindness;
pub mod correctness;
pub mod hiding;
pub mod rescale;

pub use blindness::{
    classical_blindness, ks_critical, ks_two_sample, lattice, quantum_blindness, stratified,
    ClassicalBlindnessReport, QuantumBlindnessReport,
};
pub use correctness::{
    cubic_teleport_ramp, gaussian_teleport_ramp, twin_sweep, RampReport, TwinSweepReport,
};
pub use hiding::{disconnector_leakage, LeakageReport};
pub use rescale::{squeeze_conjugation_check, RescaleReport};
