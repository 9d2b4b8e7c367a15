//! Equilibrium and welfare solvers for a secure wireless-powered D2D link
//! whose energy comes from a multi-antenna base station that also jams
//! eavesdroppers from the null space of the legitimate receiver's channel.
//!
//! Three schemes are provided:
//!
//! * [`energy_trading`]: the D2D transmitter sets the energy price and time
//!   split, the BS answers with its power.
//! * [`non_energy_trading`]: the BS sets the price at a fixed time split, the
//!   D2D transmitter answers with the power it buys.
//! * [`social_welfare`]: both sides jointly maximize benefit minus cost.
//!
//! Closed-form steps are certified against the brute-force maximizer in
//! [`numerics`] and the secrecy outage formula against Monte Carlo in
//! [`secrecy`]. The [`harness`] module runs parameter sweeps and the
//! acceptance checks.

pub mod energy_trading;
pub mod error;
pub mod game;
pub mod harness;
pub mod model;
pub mod non_energy_trading;
pub mod numerics;
pub mod secrecy;
pub mod social_welfare;

pub use error::{Error, Result};
pub use game::{EquilibriumPoint, Scheme};
pub use model::{sample_channels, ChannelRealization, SystemParams};
