//! Scenario constants, channel draws, energy transfer and the jamming null space.

pub mod channel;
pub mod jamming;
pub mod params;

pub use channel::{harvested_energy, max_d2d_power, sample_channels, ChannelRealization};
pub use jamming::{null_space_basis, JammingBasis};
pub use params::SystemParams;
