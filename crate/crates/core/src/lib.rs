//! Particle and hydrodynamic simulation of self-propelled agents whose
//! headings align Vicsek-style and whose angular velocities synchronize
//! Kuramoto-style.
//!
//! Every solver is generic over [`Real`]; the aliases at the crate root fix
//! the scalar to `f64`, which is what the CLI and the snapshot format use.

pub mod coefficients;
pub mod diagnostics;
pub mod error;
pub mod io;
pub mod macrosim;
pub mod microsim;
pub mod scalar;
pub mod sink;

pub use error::{Error, Result};
pub use scalar::Real;
pub use sink::{MemorySink, NullSink, SnapshotRef, SnapshotSink};

pub type ClosureCoefficients = coefficients::ClosureCoefficients<f64>;
pub type EquilibriumPair = coefficients::EquilibriumPair<f64>;
pub type MicroParams = microsim::MicroParams<f64>;
pub type ParticleEnsemble = microsim::ParticleEnsemble<f64>;
pub type InitSpec = microsim::InitSpec<f64>;
pub type RunOptions = microsim::RunOptions<f64>;
pub type MacroParams = macrosim::MacroParams<f64>;
pub type MacroState = macrosim::MacroState<f64>;
pub type MacroInitSpec = macrosim::MacroInitSpec<f64>;
pub type OrderTimeSeries = diagnostics::OrderTimeSeries<f64>;
pub type FieldSample = diagnostics::FieldSample<f64>;
