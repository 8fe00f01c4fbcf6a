//! Entity-level sentiment classification for news comments.

pub mod baselines;
pub mod context;
pub mod corpus;
pub mod error;
pub mod features;
pub mod learn;
pub mod lexicon;
pub mod pipeline;
pub mod synth;
pub mod textseg;

pub use error::{Error, Result};
