//! Individual-based model on a periodic square.

pub mod ensemble;
pub mod neighbors;
pub mod params;
pub mod run;
pub mod step;

pub use ensemble::{InitSpec, ParticleEnsemble};
pub use neighbors::{local_means, min_image, CellList, LocalMeans};
pub use params::{KernelShape, KernelSpec, MicroParams, STIFFNESS_GUARD};
pub use run::{default_bins, run_micro, run_micro_from, MicroRunSummary, RunOptions};
pub use step::{apply_update, em_step, RngState};
