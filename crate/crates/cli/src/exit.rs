//! Exit codes: 0 pass, 1 fail, 2 usage, 3 input, 4 inconclusive.

use gelfand_core::{Error, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    Fail = 1,
    Usage = 2,
    Input = 3,
    Inconclusive = 4,
}

impl Exit {
    pub fn of_status(s: Status) -> Self {
        match s {
            Status::Pass => Exit::Pass,
            Status::Fail => Exit::Fail,
            Status::Inconclusive => Exit::Inconclusive,
            Status::NotApplicable => Exit::Usage,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: Exit,
    pub message: String,
}

impl CliError {
    pub fn new(code: Exit, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(Exit::Usage, message)
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(Exit::Input, message)
    }
}

/// Library errors by cause: bad settings are usage errors, bad files input
/// errors, and under-resolved computations inconclusive.
pub fn code_of(e: &Error) -> Exit {
    match e {
        Error::Usage(_) | Error::UnknownPair(_) | Error::Domain(_) | Error::Unsupported(_) | Error::InvalidSpec(_) | Error::SpecFun(_) => {
            Exit::Usage
        }
        Error::Grid(_) | Error::Type(_) | Error::Weight(_) | Error::Empty(_) => Exit::Input,
        Error::Resolution(_) | Error::Inconclusive(_) => Exit::Inconclusive,
        Error::DecayPrecondition(_) => Exit::Fail,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::new(code_of(&e), e.to_string())
    }
}
