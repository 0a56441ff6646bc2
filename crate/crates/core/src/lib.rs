//! Decoding behavioral variables from spike trains with simplicial
//! convolutional recurrent networks.

pub mod complex;
pub mod error;
pub mod filters;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod recurrent;
pub mod sparse;
pub mod spikes;
pub mod synth;
pub mod train;

pub use error::{Error, Result};
