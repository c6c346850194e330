//! Checks the vanishing `H^i(X, O_X(D)) = 0` for `i > 0` on toric varieties
//! satisfying either of two hypotheses, together with the invariance of
//! cohomology along the `D`-MMP that the proof relies on.
//!
//! - [`format`]: JSON files for fans, divisors, instances and corpora.
//! - [`corpus`]: seeded generation of hypothesis-satisfying instances.
//! - [`verify`]: the verifiers, each producing a [`Verdict`].
//! - [`suite`]: corpus plus curated examples, run in parallel into a report.

pub mod corpus;
pub mod format;
pub mod instance;
pub mod suite;
pub mod verify;

use cohomology::CohomologyError;
use divisors::DivisorError;
use fan::FanError;
use mmp::MmpError;
use mori::MoriError;
use thiserror::Error;

pub use corpus::{gen_corpus, hyp1_variant, instance_from_ample, seed_fans, Corpus};
pub use format::{FormatError, Origin};
pub use instance::{ample_divisor, check_hypothesis, HypothesisCheck, Instance, Mode, Witness};
pub use suite::{run_suite, Entry, Report, SuiteParams};
pub use verify::{verify_flip_diagram, verify_kv, verify_mfs, verify_mmp, StepRecord, Verdict, MFS_OK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KvError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Mmp(#[from] MmpError),
    #[error(transparent)]
    Mori(#[from] MoriError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Fan(#[from] FanError),
}

impl KvError {
    /// Process exit code: 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            KvError::Format(_) | KvError::Input(_) | KvError::Precondition(_) => 2,
            _ => 1,
        }
    }
}
