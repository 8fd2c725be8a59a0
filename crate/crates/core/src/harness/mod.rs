//! Batch table generation, the description census and verification against the
//! checked-in golden corpus.

pub mod census;
pub mod corpus;
pub mod oracle;
pub mod output;
pub mod search;
pub mod table;
pub mod verify;

use thiserror::Error;

use crate::curve::CurveError;
use crate::ffield::FieldError;
use crate::lambda::LambdaError;
use crate::method_a::MethodAError;
use crate::method_b::MethodBError;
use crate::raygenus::RayGenusError;

pub use census::{census, CensusOptions, CensusReport};
pub use corpus::{GoldenCorpus, GoldenRow, RowClass, RowGroup};
pub use oracle::RationalOracle;
pub use output::Format;
pub use table::{generate_table, CurveGround, Ground, SetFamily, TableRow};
pub use verify::{verify, RowOutcome, RowStatus, VerifyOptions, VerifyReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error(transparent)]
    MethodA(#[from] MethodAError),
    #[error(transparent)]
    MethodB(#[from] MethodBError),
    #[error(transparent)]
    RayGenus(#[from] RayGenusError),
    #[error("golden corpus line {line}: {msg}")]
    Corpus { line: usize, msg: String },
    #[error("{count} subsets for q = {q} exceeds the cap of {cap}")]
    CapExceeded { q: u32, count: u128, cap: u128 },
    #[error("row does not re-validate: {0}")]
    Revalidation(String),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Runs `f` on a rayon pool with `jobs` threads, or on the global pool for `None`.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, HarnessError> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| HarnessError::Pool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}
