use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("values belong to different atom registries")]
    RegistryMismatch,
    #[error("comparison undecidable at the precision cap of {cap} bits")]
    UndecidableComparison { cap: u32 },
    #[error("floor undecidable at the precision cap of {cap} bits")]
    UndecidableFloor { cap: u32 },
    #[error("size limit exceeded in {what}: needs {needed}, budget is {budget}{hint}")]
    Size {
        what: String,
        needed: u128,
        budget: u128,
        hint: String,
    },
    #[error("duplicate frequency value {0}")]
    Collision(String),
    #[error("operands are not span-disjoint: {0}")]
    Span(String),
    #[error("tail window {window} exceeds the {available} nonempty blocks")]
    Window { window: usize, available: usize },
    #[error("exact subset mode supports at most {cap} elements, got {got}")]
    Mode { cap: usize, got: usize },
    #[error("exponent domain violation: {0}")]
    Domain(String),
    #[error("lift has {got} basis variables, the cap is {cap}")]
    Dimension { got: usize, cap: usize },
    #[error("profile has no nonempty blocks")]
    EmptyProfile,
    #[error("integer overflow in {0}")]
    Overflow(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Budget, precision and capacity failures, as opposed to malformed input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::UndecidableComparison { .. }
                | Error::UndecidableFloor { .. }
                | Error::Size { .. }
                | Error::Dimension { .. }
                | Error::Overflow(_)
        )
    }

    pub(crate) fn size(what: &str, needed: u128, budget: u128, hint: &str) -> Self {
        Error::Size {
            what: what.into(),
            needed,
            budget,
            hint: hint.into(),
        }
    }
}
