//! Probability and distortion data model shared by every other module.

pub mod catalog;
mod channel;
mod curve;
mod group;
mod info;
mod instance;

pub use channel::{ConditionalChannel, Conditioning};
pub use curve::{CurveGap, RdCurve, RdPoint, Scenario};
pub use group::{cyclic_group, make_group_difference_distortion, GroupTable};
pub use info::{entropy, expected_distortion, mutual_information, JointMatrix};
pub use instance::{
    check_probability_vector, make_scaled_distortion, DiscreteInstance, DistortionTensor, MAX_ALPHABET,
    PROBABILITY_TOLERANCE,
};
