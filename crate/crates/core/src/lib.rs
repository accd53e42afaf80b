//! Texture analysis with artificial crawlers.
//!
//! Agents are dropped on a grayscale image and crawl toward brighter
//! (`max` kernel) or darker (`min` kernel) neighbours while spending and
//! absorbing energy. The number of agents still alive at each iteration
//! forms a curve that characterises the texture. Concatenating the two
//! curves gives the descriptor computed by [`crawler::signature`].
//!
//! The crate also ships the baseline descriptors the crawler is usually
//! compared against ([`descriptors`]), a shared-covariance LDA classifier
//! and stratified k-fold cross-validation ([`ml`]), and the command-line
//! front end ([`cli`]).

pub mod cli;
pub mod crawler;
pub mod export;
pub mod descriptors;
mod error;
mod fft;
pub mod imgio;
pub mod ml;

pub use crate::crawler::{
    evolve, movement_kernel, neighbors, signature, AgentState, CrawlerConfig, Direction, Kernel,
    LiveAgentCurve, Placement, Signature,
};
pub use crate::descriptors::{FeatureVector, Method};
pub use crate::error::{Error, Result};
pub use crate::imgio::{GrayImage, LabeledDataset};
pub use crate::ml::{cross_validate, FoldReport, LdaModel};
