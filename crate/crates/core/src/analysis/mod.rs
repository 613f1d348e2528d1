//! Delay bounds, way-in/way-out indices, critical triplets and sweeps.

pub mod jump;
pub mod kstar;
mod lambert;
pub mod sweep;
pub mod triplet;
pub mod wayout;

pub use jump::{classify_from, classify_jump, classify_visiting, default_max_n, jump_start, transversal_deviation, JumpClass};
pub use kstar::{brute_force_k, kstar_pitchfork_euler, kstar_rk, kstar_rk_for, kstar_transcritical_euler, RkBound};
pub use lambert::lambert_w0;
pub use sweep::{sweep_surface, SweepCell, SweepMode};
pub use triplet::{
    critical_h_bisection, critical_triplet_linearized, linearized_h_star, BisectionConfig, CriticalTriplet,
    TripletSource,
};
pub use wayout::{entry_index, wayout, WayOutResult};
