//! Hydrodynamic model: finite volumes for the conservative part, then
//! normalization of the direction field, then exact rotation.

pub mod init;
pub mod params;
pub mod roe;
pub mod run;
pub mod scheme;
pub mod state;

pub use init::MacroInitSpec;
pub use params::MacroParams;
pub use roe::{roe_flux, FluxConstants, InterfaceFlux};
pub use run::{run_macro, run_macro_from, sample_grid, MacroRunSummary};
pub use scheme::{cfl_number, conservative_step, full_step, relaxation_step, source_step, SweepStats};
pub use state::MacroState;
