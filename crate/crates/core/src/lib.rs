//! Rule-guided refinement of nominal-feature datasets.
//!
//! The crate takes a hierarchical propositional ruleset (domain knowledge
//! about how a class label depends on feature values), flattens it into
//! operational form, scores each flat rule against a dataset, synthesizes
//! virtual training instances in proportion to rule utility, and prunes
//! instances that the rules collectively contradict. The end product is a
//! refined dataset intended to train instance-based learners better than
//! the raw data would.
//!
//! Everything in here is deterministic: the only randomness is drawn from
//! caller-seeded ChaCha streams, and all internal maps iterate in a fixed
//! order. The crate is `no_std`-compatible (with `alloc`); the `std`
//! feature (on by default) only widens error-trait integration for
//! downstream users.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod data;
pub mod error;
pub mod eval;
pub mod generate;
mod math;
pub mod pipeline;
pub mod prune;
pub mod rng;
pub mod rules;
pub mod schema;
pub mod scoring;

pub use data::{Dataset, Instance, Provenance};
pub use error::Error;
pub use pipeline::{refine, RefineConfig, RefineReport, Stage, StageError};
pub use schema::{Feature, Schema};
