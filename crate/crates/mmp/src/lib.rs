//! Extremal contractions of simplicial fans, flips and their common blow-up,
//! step certificates, and a driver running the minimal model program for a
//! torus-invariant divisor.

mod certificate;
mod contract;
mod flip;
mod run;

use divisors::DivisorError;
use exact_core::ExactError;
use fan::FanError;
use mori::MoriError;
use thiserror::Error;

pub use certificate::{divisorial_certificate, step_certificate, FlipCase, StepCertificate};
pub use contract::{contract, ContractionKind, ContractionResult};
pub use flip::{flip, flip_diagram, FlipDiagram};
pub use run::{is_nef_on_walls, negative_ray, run_mmp, MmpEnd, MmpRun, MmpStep, STEP_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MmpError {
    #[error("{0} is not an extremal ray of the fan")]
    NotExtremal(String),
    #[error("merged cones do not form a fan: {0}")]
    NotAFan(String),
    #[error("the contraction is not a flipping contraction")]
    NotFlipping,
    #[error("the divisor is not negative on the ray (pairing {0})")]
    NotNegative(String),
    #[error("the flipped divisor is not relatively ample across wall {0}")]
    NotRelativelyAmple(String),
    #[error("circuit mismatch: {0}")]
    Circuit(String),
    #[error("certificate violated: {0}")]
    Certificate(String),
    #[error("MMP exceeded {0} steps")]
    StepCap(usize),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Mori(#[from] MoriError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
