//! Nonsmooth convex minimization with a non-monotone conjugate subgradient
//! method and classical subgradient baselines.
//!
//! The crate is organized bottom-up:
//!
//! * [`vector`], [`oracle`], [`run`]: vectors, objective contract with call
//!   counting, stopping rules and trace rows;
//! * [`direction`]: the two-point smallest-norm kernel and its certificates;
//! * [`schedules`]: parameter sequences;
//! * [`solvers`]: the conjugate subgradient engine and four baselines;
//! * [`problems`]: the benchmark catalog.

pub mod direction;
pub mod error;
pub mod oracle;
pub mod problems;
pub mod run;
pub mod schedules;
pub mod solvers;
pub mod vector;

pub use error::{Error, Result};
pub use oracle::{CountingOracle, Evaluation, GapLadder, Objective};
pub use run::{Event, IterationRecord, RunResult, StoppingRule, Termination, TraceOptions};
pub use vector::DenseVector;
