//! Conformal capacity of circular-arc and parallel-segment condensers.

pub mod arc_map;
pub mod asymptotics;
pub mod convergence;
pub mod elliptic;
pub mod error;
pub mod exact;
pub mod oracle_fd;
pub mod quadrature;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
