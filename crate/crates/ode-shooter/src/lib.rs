//! Integration of `(−Δ)³u = V e^{6u}` in R^6 as a first-order system in the
//! jet `(u, u', Δu, (Δu)', Δ²u, (Δ²u)')`.

pub mod dopri;
pub mod error;
pub mod events;
pub mod ivp;
pub mod pattern;
pub mod shoot;

pub use error::OdeError;
pub use events::{detect_events, Crossing, Direction, EventLog, Quantity, ThetaArrays};
pub use ivp::{
    integrate_ivp, integrate_system, series_jet, IvpSpec, IvpStatus, SystemStart, Tolerances,
    Trajectory,
};
pub use pattern::{sign_pattern_check, PatternReport, Verdict};
pub use shoot::{shoot, FreeVar, ShootOptions, ShootResult, Target};
