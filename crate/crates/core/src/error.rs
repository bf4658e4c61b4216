use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("configuration has no chains")]
    EmptyConfig,

    #[error("chain {chain}: empty chain (field `b` has no entries)")]
    EmptyChain { chain: usize },

    #[error("chain {chain}: field `b` has {b_len} entries but field `a` has {a_len}")]
    LengthMismatch { chain: usize, b_len: usize, a_len: usize },

    #[error("chain {chain}: field `b[{index}]` = {value}, self-intersection weights must be >= 2")]
    SelfIntersectionTooSmall { chain: usize, index: usize, value: u64 },

    #[error("chain {chain}: field `a[{index}]` = {value}, ample degrees must be >= 1")]
    AmpleDegreeTooSmall { chain: usize, index: usize, value: u64 },

    #[error("cycle shape does not match the configuration: {0}")]
    CycleShape(String),

    #[error("peeling target is the zero cycle")]
    EmptyTarget,

    #[error("peel order does not match the target cycle: {0}")]
    PeelOrderMismatch(String),

    #[error("curve {0} is not part of the configuration")]
    UnknownCurve(String),

    #[error("closed form is only available for chains of length 1 or 2, got {m}")]
    ClosedFormLength { m: usize },

    #[error("n-range {lo}..={hi} has {count} points, at least {needed} are required")]
    RangeTooShort {
        lo: u64,
        hi: u64,
        count: usize,
        needed: usize,
    },

    #[error("n must be >= 1, got {0}")]
    InvalidTwist(u64),

    #[error("chain {chain}: Laufer iteration exceeded its cap of {cap} steps (form is not negative definite)")]
    LauferCapExceeded { chain: usize, cap: u64 },

    #[error("kernel of the block system has dimension {found}, expected 1")]
    KernelDimension { found: usize },

    #[error("kernel vector has no strictly positive orientation")]
    NoPositiveOrientation,

    #[error("value does not fit machine arithmetic: {0}")]
    Overflow(&'static str),
}

impl Error {
    /// True for errors caused by malformed or out-of-contract input, false
    /// for violated internal invariants.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::KernelDimension { .. } | Error::NoPositiveOrientation)
    }
}
