use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The angle of a zero-length vector was requested.
    ZeroVector,
    /// Adjacent layers do not chain, or the network has the wrong input/output width.
    DimensionMismatch {
        layer: usize,
        expected: usize,
        found: usize,
    },
    /// A parameter was NaN or infinite.
    NonFinite,
    /// A hidden layer index beyond the model.
    LayerOutOfRange {
        index: usize,
        hidden_layers: usize,
    },
    EmptyDataset,
    /// Neural normalization was requested without a model.
    MissingModel,
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroVector => write!(f, "angle of a zero-length vector is undefined"),
            Error::DimensionMismatch {
                layer,
                expected,
                found,
            } => write!(
                f,
                "layer {layer}: expected input width {expected}, found {found}"
            ),
            Error::NonFinite => write!(f, "model contains a non-finite parameter"),
            Error::LayerOutOfRange {
                index,
                hidden_layers,
            } => write!(
                f,
                "hidden layer {index} requested but the model has {hidden_layers}"
            ),
            Error::EmptyDataset => write!(f, "dataset is empty"),
            Error::MissingModel => write!(f, "neural normalization needs a trained model"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
