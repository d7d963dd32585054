//! Evolving Gaussian fuzzy classification of data streams.
//!
//! The learner ([`RuleBase`]) grows, adapts, merges and prunes a set of
//! Gaussian granules online, from partially and late labeled samples. Around
//! it sit the pieces needed to evaluate it on EEG recordings: windowed band
//! features ([`features`]), Spearman-based feature ranking ([`ranking`]),
//! train-after-test evaluation ([`eval`]), corpus ingestion ([`corpus`]) and a
//! seeded synthetic stream generator ([`synthetic`]).

pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod granule;
pub mod ranking;
pub mod report;
pub mod rule_base;
pub mod synthetic;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use eval::{run_stream, EvalReport, LabelDelay, StreamClassifier, StreamSample};
pub use granule::{GaussianMembership, Granule, Label};
pub use rule_base::{ClassEstimate, HyperParams, InactivityHorizon, RuleBase, RuleEvent, StepTrace};
