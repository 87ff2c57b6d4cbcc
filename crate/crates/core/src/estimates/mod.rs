//! Numerical experiments for the linear, bilinear and energy estimates.

mod almost;
mod bilinear;
mod fit;
mod growth;
mod rescale;
mod strichartz;
mod xsb;

pub use almost::{almost_conservation_experiment, refinement_change, AlmostConservationReport, MEASUREMENT_FLOOR};
pub use bilinear::{bilinear_ratio, Conjugation};
pub use fit::SlopeFit;
pub use growth::{growth_experiment, GrowthReport};
pub use rescale::{measure_c0, n_exponent, rescaling_plan, RescalingPlan};
pub use strichartz::{is_admissible, strichartz_ratio, AdmissiblePair};
pub use xsb::{
    cutoff_antiderivative, duhamel_cutoff_check, time_sobolev_norm, time_window, xsb_norm, DuhamelReport,
    TimeSignal, XsbParams, XsbRoute,
};
