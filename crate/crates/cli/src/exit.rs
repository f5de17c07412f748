use gcf_core::Error;

/// A check ran to completion and reported a failure.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct CheckFailed(pub String);

pub const USAGE: u8 = 2;
pub const VALIDATION: u8 = 3;
pub const INVARIANT: u8 = 4;

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<CheckFailed>().is_some() {
        return INVARIANT;
    }
    if e.downcast_ref::<rayon::ThreadPoolBuildError>().is_some() {
        return INVARIANT;
    }
    match e.downcast_ref::<Error>() {
        Some(
            Error::Disconnected { .. } | Error::TooDense { .. } | Error::TooLarge { .. } | Error::UnreachedCenter(_),
        ) => VALIDATION,
        Some(Error::NonInjective { .. }) => INVARIANT,
        _ => USAGE,
    }
}
