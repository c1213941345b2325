//! Non-projective transition-based dependency parsing with the Covington
//! system and its non-local variant NL-Covington, whose Left-Arc_k and
//! Right-Arc_k transitions attach the right focus word to any word of
//! lambda1 in one step.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line front end live in the `nlcov` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arcs;
pub mod config;
pub mod eval;
pub mod features;
pub mod model;
pub mod oracle;
pub mod sentence;
pub mod system;
pub mod transition;

pub use crate::arcs::{Arc, ArcError, ArcSet};
pub use crate::config::{ConfigError, Configuration};
pub use crate::eval::{is_projective, score, transition_stats, PunctPolicy, ScoreReport, TransitionStats};
pub use crate::features::{FeatureVector, Featurizer};
pub use crate::model::{train, Model, ModelError, TrainOptions, Training};
pub use crate::oracle::{
    cov_oracle_step, expand_to_covington, nl_oracle_step, oracle_sequence, random_gold_tree,
    GoldTree, OracleError,
};
pub use crate::sentence::{Sentence, SentenceError, Token};
pub use crate::system::{IllegalTransition, SystemError, SystemKind, TransitionSystem};
pub use crate::transition::{Move, Transition};
