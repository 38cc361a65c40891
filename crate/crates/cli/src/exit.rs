use pflab_core::Error;

pub const SUCCESS: u8 = 0;
pub const VALIDATION: u8 = 2;
pub const TOLERANCE: u8 = 3;
pub const GEOMETRY: u8 = 4;
pub const NO_CLEAR_GAP: u8 = 5;

/// A message together with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn validation(message: String) -> Self {
        Failure {
            code: VALIDATION,
            message,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::DuplicatePoles(..)
            | Error::BadInitialBranch(_)
            | Error::InvalidConfig(_)
            | Error::InvalidIndex { .. }
            | Error::InadmissiblePoint(_)
            | Error::InvalidArgument(_) => VALIDATION,
            Error::PathHitsBasePoint { .. } | Error::GeometryInfeasible(_) | Error::SingularityOnPath(_) => {
                GEOMETRY
            }
            Error::NonFiniteSample(_)
            | Error::QuadratureNotConverged { .. }
            | Error::SeriesDiverges { .. }
            | Error::MaxTermsExceeded(_)
            | Error::BranchNotClosed(_)
            | Error::BranchMismatch(_) => TOLERANCE,
            Error::NoClearGap(_) => NO_CLEAR_GAP,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}
