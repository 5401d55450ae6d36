//! Structured front end for `arlimit`: JSON request in, JSON response out.

pub mod envelope;
pub mod number;
mod run;

pub use envelope::{Command, Request, Response, Status, SCHEMA_VERSION};
pub use run::{run, run_json, Failure, DEFAULT_MAX_LAG, DEFAULT_SEED, DEFAULT_SIGMA, DEFAULT_TOL};
