//! Quantizers for complex Gaussian blocks where only some samples matter:
//! the band-limited DFT interpolation scheme and the two-stage scheme for
//! two-level importance, plus the fully informed baseline they are compared
//! against.

mod dft;
mod dft_scheme;
pub mod gauss;
mod interp;
mod linalg;
mod quant;
mod two_stage;

pub use dft::Dft;
pub use dft_scheme::{calibrate_coefficient_sigma, Calibration, DftPayload, DftScheme, DftTrial};
pub use interp::{mask_string, InterpolationSystem, CONDITION_BOUND};
pub use linalg::{condition_number, singular_values, Lu};
pub use quant::{ComplexQuantizer, UniformQuantizer, LOADING};
pub use two_stage::{
    calibrate_shift_sigma, informed_baseline, BaselineTrial, Coded, TwoStage, TwoStagePayload, TwoStageTrial,
};
