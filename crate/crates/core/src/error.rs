use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// The leading coefficient is zero or carries a parameter.
    #[error("series is not invertible: leading coefficient {leading} at q^({half_units}/2)")]
    InvertNonUnit { leading: String, half_units: i64 },

    #[error("requested exponent {requested} (half-units) is at or beyond the truncation order {order}")]
    OrderExhausted { requested: i64, order: i64 },

    #[error("cannot invert an untruncated series; truncate it first")]
    UnboundedInverse,

    #[error("monomial at q^({qpower}/2) does not survive truncation at order {order}")]
    BeyondOrder { qpower: i64, order: i64 },

    #[error("infinite product diverges: {0}")]
    DivergentProduct(String),

    #[error("invalid Pochhammer step {0} (must be positive)")]
    InvalidStep(i64),

    #[error("unknown identity '{0}'")]
    UnknownIdentity(String),

    #[error("binding {name}={value} is outside the declared domain of {id}")]
    BindingOutOfDomain { id: String, name: String, value: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
