use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported jet order {0} (expected 1, 2 or 4)")]
    UnsupportedOrder(usize),

    #[error("evaluation on the beam axis (r = {r}) is undefined for operators with 1/r terms")]
    OnAxis { r: f64 },

    #[error("operator derivative order {order} exceeds the maximum of 4")]
    DepthOverflow { order: usize },

    #[error("square-root argument {re} + {im}i sits on the branch cut")]
    BranchCut { re: f64, im: f64 },

    #[error("superposition terms disagree in non-charge parameters: {0}")]
    MismatchedParameters(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("GW component indices need l + n = 4, got l = {l}, n = {n}")]
    InvalidIndexCount { l: usize, n: usize },

    #[error("no interior intensity maximum in r ∈ [{r_lo}, {r_hi}]")]
    NoInteriorMaximum { r_lo: f64, r_hi: f64 },

    #[error("intensity peaks on the axis (brightest sample at r = {r_lo})")]
    AxialMaximum { r_lo: f64 },

    #[error("visibility undefined when both I_max and I_min are zero")]
    ZeroIntensity,

    #[error("scaling fit needs at least 4 points with distinct charges, got {0}")]
    TooFewPoints(usize),

    #[error("non-finite field value at (t = {t}, r = {r}, φ = {phi}, z = {z})")]
    NonFinite { t: f64, r: f64, phi: f64, z: f64 },

    #[error("unknown preset `{name}`; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error("malformed grid file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[cfg(feature = "export")]
    #[error(transparent)]
    Image(#[from] image::ImageError),
}
