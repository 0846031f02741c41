//! Spin entanglement of two relativistic spin-1/2 particles under Lorentz
//! boosts, for Gaussian momentum wavepackets.
//!
//! The pipeline runs [`momentum`] model and grid, then the [`channel`] built
//! from [`kinematics`] Wigner unitaries, then [`spin`] diagnostics, swept over
//! rapidity by [`scenarios`].

pub mod channel;
pub mod kinematics;
pub mod momentum;
mod reduce;
pub mod scenarios;
pub mod spin;
pub mod verification;

pub use channel::{boost_spin_state, boost_spin_state_direct, ChannelError, Simulator};
pub use kinematics::{BoostSpec, ThreeMomentum};
pub use momentum::{build_grid, MomentumError, MomentumModel, ModelKind, QuadratureGrid};
pub use scenarios::{orbit, preset, ScenarioConfig, ScenarioError, Schedule};
pub use spin::{bell_state, concurrence, t_vector, BellState, OrbitPoint, TVector, TwoQubitState};
