use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid probability vector `{what}`: {reason}")]
    InvalidProbability { what: &'static str, reason: String },

    #[error("invalid distortion: {0}")]
    InvalidDistortion(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("alphabet `{axis}` has {size} symbols, more than the supported {max}")]
    AlphabetTooLarge {
        axis: &'static str,
        size: usize,
        max: usize,
    },

    #[error("operation table is not a group: {0}")]
    NotAGroup(String),

    #[error("instance is not of group-difference type: {0}")]
    NotGroupDifference(String),

    #[error("distortion is not separable as d0(q)·d1(x, x̂): {0}")]
    NotSeparable(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("auxiliary alphabet of {got} symbols is smaller than the reconstruction alphabet ({needed})")]
    AuxCardinalityTooSmall { got: usize, needed: usize },

    #[error("unsupported field GF(2^{0}); supported degrees are 3, 4 and 8")]
    UnsupportedField(u32),

    #[error("symbol {value} does not belong to GF(2^{m})")]
    SymbolOutOfRange { value: u32, m: u32 },

    #[error("evaluation points are not pairwise distinct (position {0})")]
    RepeatedEvaluationPoint(usize),

    #[error("mask has weight {got}, expected {expected}")]
    MaskWeight { expected: usize, got: usize },

    #[error("block parameters out of range: {0}")]
    BlockShape(String),

    #[error("interpolation matrix for mask {mask} has condition number {condition:.3e} (bound {bound:.1e})")]
    IllConditioned {
        mask: String,
        condition: f64,
        bound: f64,
    },

    #[error("rates out of order: R1 = {r1} < R0 = {r0}")]
    RateOrder { r0: u32, r1: u32 },

    #[error("malformed payload: {0}")]
    MalformedPayload(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
