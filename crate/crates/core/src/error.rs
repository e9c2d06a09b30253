use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("ground size {ground_n} exceeds the word-width cap {cap}")]
    GroundTooLarge { ground_n: u32, cap: u32 },
    #[error("element {element} is outside the ground [{ground_n}]")]
    ElementOutOfRange { element: u32, ground_n: u32 },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("need at least two families, got {0}")]
    FewerThanTwoFamilies(usize),
    #[error("family is not hereditary")]
    NotHereditary,
    #[error("family is not compressed")]
    NotCompressed,
}
