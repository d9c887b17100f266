//! Static analysis for the Eager Test smell in Java/JUnit test code.
//!
//! The pipeline parses production and test sources into a simplified code
//! model, classifies every resolved method into a behavioral stereotype,
//! linearizes each test case into versioned call and assertion records,
//! and decides eagerness by checking whether everything the assertions
//! verify is the outcome of a single method call. Six literature detection
//! rules run against the same model for side-by-side comparison, and
//! pairwise Cohen's kappa quantifies how much the detectors agree.

pub mod model;
pub mod agreement;
pub mod detector;
pub mod flow;
pub mod heuristic;
pub mod report;
pub mod rules;
pub mod stereotype;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("failed to write {path}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
